//! Known covers and reproducible random systems.
//!
//! Random systems come from xoshiro256** seeded through SplitMix64
//! (`rand_xoshiro::Xoshiro256StarStar::seed_from_u64`), and every draw is
//! a `u64` or `i64` range sample, so a given [`GeneratorSpec`] produces the
//! same system on every platform. Draw order: moduli for classes
//! `1..=k` (a partial Fisher–Yates shuffle of the sorted pool when moduli
//! must be distinct, independent picks otherwise), then residues in class
//! order, then weights in class order.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::Serialize;

use crate::analysis::{is_cover, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::residue::{ResidueClass, ResidueSystem};

/// The distinct-moduli cover for odd `n ≥ 3`:
/// `2^{s−1}(2^s)` for `1 ≤ s < n` and `2^{n−1}·i (2^{i−1}·n)` for `1 ≤ i ≤ n`.
///
/// The result is verified by enumeration over one period whenever
/// `N = 2^{n−1}·n` is at most `cap`; a failed check is an error.
pub fn erdos_cover_with_cap(n: u64, cap: u64) -> Result<ResidueSystem> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidConstruction(format!(
            "n must be odd and at least 3, got {n}"
        )));
    }
    let top = 1u64
        .checked_shl((n - 1) as u32)
        .filter(|&p| p.checked_mul(n).is_some() && n < 64)
        .ok_or_else(|| Error::InvalidConstruction(format!("moduli overflow for n = {n}")))?;
    let mut classes = Vec::with_capacity(2 * n as usize - 1);
    for s in 1..n {
        classes.push(ResidueClass::new(1i128 << (s - 1), 1i128 << s)?);
    }
    for i in 1..=n {
        let residue = top as i128 * i as i128;
        let modulus = (1i128 << (i - 1)) * n as i128;
        classes.push(ResidueClass::new(residue, modulus)?);
    }
    let system = ResidueSystem::new(classes)?;
    if let Some(n) = system.repeated_modulus() {
        return Err(Error::ConstructionCheckFailed(format!("modulus {n} repeats")));
    }
    match is_cover(&system, cap) {
        Ok(true) => Ok(system),
        Ok(false) => Err(Error::ConstructionCheckFailed(format!(
            "{system} leaves integers uncovered"
        ))),
        Err(Error::PeriodTooLarge { .. }) => Ok(system),
        Err(e) => Err(e),
    }
}

pub fn erdos_cover(n: u64) -> Result<ResidueSystem> {
    erdos_cover_with_cap(n, DEFAULT_CAP)
}

/// `{0(2), 0(3), 1(4), 5(6), 7(12)}`, the smallest cover with distinct moduli.
pub fn classic_cover() -> ResidueSystem {
    let system = ResidueSystem::from_pairs(&[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)])
        .expect("valid classes");
    debug_assert!(is_cover(&system, DEFAULT_CAP).unwrap());
    system
}

/// Parameters for [`random_system`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub class_count: usize,
    /// Candidate moduli; duplicates are ignored.
    pub modulus_pool: Vec<u64>,
    pub distinct_moduli: bool,
    /// When set, weights are drawn uniformly from `[-bound, bound]`.
    pub weight_bound: Option<i64>,
}

impl GeneratorSpec {
    pub fn new(seed: u64, class_count: usize, modulus_pool: Vec<u64>, distinct_moduli: bool) -> Self {
        Self {
            seed,
            class_count,
            modulus_pool,
            distinct_moduli,
            weight_bound: None,
        }
    }

    pub fn with_weights(mut self, bound: i64) -> Self {
        self.weight_bound = Some(bound);
        self
    }

    fn pool(&self) -> Result<Vec<u64>> {
        let pool: Vec<u64> = self.modulus_pool.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if pool.is_empty() {
            return Err(Error::InvalidGenerator("empty modulus pool".into()));
        }
        if let Some(&bad) = pool.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGenerator(format!("pool modulus {bad} is below 2")));
        }
        if self.class_count == 0 {
            return Err(Error::InvalidGenerator("class count must be positive".into()));
        }
        if self.distinct_moduli && self.class_count > pool.len() {
            return Err(Error::PoolTooSmall {
                needed: self.class_count,
                available: pool.len(),
            });
        }
        if matches!(self.weight_bound, Some(b) if b < 0) {
            return Err(Error::InvalidGenerator("weight bound must be nonnegative".into()));
        }
        Ok(pool)
    }
}

/// Deterministic random system; see the module docs for the draw order.
pub fn random_system(spec: &GeneratorSpec) -> Result<ResidueSystem> {
    let mut pool = spec.pool()?;
    let mut rng = Xoshiro256StarStar::seed_from_u64(spec.seed);
    let len = pool.len() as u64;
    let moduli: Vec<u64> = if spec.distinct_moduli {
        for i in 0..spec.class_count as u64 {
            let j = rng.gen_range(i..len);
            pool.swap(i as usize, j as usize);
        }
        pool[..spec.class_count].to_vec()
    } else {
        (0..spec.class_count)
            .map(|_| pool[rng.gen_range(0..len) as usize])
            .collect()
    };
    let classes = moduli
        .iter()
        .map(|&n| ResidueClass::new(rng.gen_range(0..n) as i128, n as i128))
        .collect::<Result<Vec<_>>>()?;
    match spec.weight_bound {
        None => ResidueSystem::new(classes),
        Some(b) => {
            let weights = (0..classes.len()).map(|_| rng.gen_range(-b..=b)).collect();
            ResidueSystem::with_weights(classes, weights)
        }
    }
}

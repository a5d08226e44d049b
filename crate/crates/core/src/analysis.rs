//! Whole-period analysis of the covering function: dense profiles, the
//! exact mean, range and spread, minimal periods, divisibility-maximal
//! moduli, the constancy window and cover detection.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{divides_i128, divisors, euler_phi};
use crate::error::Result;
use crate::residue::ResidueSystem;

/// Exact rational numbers, always in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// Default enumeration cap for dense profiles.
pub const DEFAULT_CAP: u64 = 10_000_000;

const PARALLEL_THRESHOLD: usize = 1 << 16;

/// Values `w(0), …, w(N − 1)` of the covering function over one period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Profile {
    period: u64,
    values: Vec<i64>,
}

impl Profile {
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `w(x)` for any integer `x`, using periodicity.
    pub fn at(&self, x: i128) -> i64 {
        self.values[x.rem_euclid(self.period as i128) as usize]
    }

    pub fn mean(&self) -> ExactRational {
        let total: i128 = self.values.iter().map(|&v| v as i128).sum();
        BigRational::new(BigInt::from(total), BigInt::from(self.period))
    }

    pub fn range_and_spread(&self) -> RangeSpread {
        let first = self.values[0] as i128;
        let mut spread = 0u128;
        for &v in &self.values {
            spread = spread.gcd(&(v as i128 - first).unsigned_abs());
        }
        RangeSpread {
            range: self.values.iter().copied().collect(),
            spread,
        }
    }

    /// Smallest `n₀ ≥ 1` with `w(x + n₀) ≡ w(x) (mod m)` for all `x`
    /// (`m = 0`: exact equality). Only divisors of the period are tried.
    pub fn minimal_period(&self, m: u64) -> u64 {
        let n = self.period as usize;
        divisors(self.period)
            .into_iter()
            .find(|&p| {
                let p = p as usize;
                (0..n).all(|r| {
                    let diff = self.values[r] as i128 - self.values[(r + p) % n] as i128;
                    divides_i128(m, diff)
                })
            })
            .expect("the full period always qualifies")
    }

    pub fn min(&self) -> i64 {
        *self.values.iter().min().expect("nonempty profile")
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }
}

/// The set of values of `w` together with `g = gcd_x (w(x) − w(0))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeSpread {
    pub range: BTreeSet<i64>,
    /// Zero exactly when `w` is constant.
    pub spread: u128,
}

impl RangeSpread {
    /// Whether the range lies inside a single residue class mod `m`.
    /// `m = 0` asks for a constant function.
    pub fn within_one_class_mod(&self, m: u64) -> bool {
        if m == 0 {
            self.spread == 0
        } else {
            self.spread.is_multiple_of(m as u128)
        }
    }
}

/// Dense covering-function table over one period `N`; refuses when `N > cap`.
pub fn profile(system: &ResidueSystem, cap: u64) -> Result<Profile> {
    let period = system.period_within(cap)?;
    let n = period as usize;
    let mut values = vec![0i64; n];
    let fill = |start: usize, chunk: &mut [i64]| {
        let end = start + chunk.len();
        for (s, class) in system.classes().iter().enumerate() {
            let modulus = class.modulus() as usize;
            let residue = class.residue() as usize;
            let weight = system.weight(s);
            // first x ≥ start with x ≡ residue (mod modulus)
            let offset = (residue + modulus - start % modulus) % modulus;
            let mut x = start + offset;
            while x < end {
                chunk[x - start] += weight;
                x += modulus;
            }
        }
    };
    if n >= PARALLEL_THRESHOLD {
        let chunk_len = n.div_ceil(rayon::current_num_threads().max(1) * 4);
        values
            .par_chunks_mut(chunk_len)
            .enumerate()
            .for_each(|(i, chunk)| fill(i * chunk_len, chunk));
    } else {
        fill(0, &mut values);
    }
    Ok(Profile { period, values })
}

/// `Σ λₛ / nₛ` as an exact rational; the average of `w` over a period.
pub fn mean_value(system: &ResidueSystem) -> ExactRational {
    system
        .classes()
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (s, c)| {
            acc + BigRational::new(BigInt::from(system.weight(s)), BigInt::from(c.modulus()))
        })
}

pub fn range_and_spread(system: &ResidueSystem, cap: u64) -> Result<RangeSpread> {
    Ok(profile(system, cap)?.range_and_spread())
}

/// Minimal positive period of `w` modulo `m`; negative `m` means `|m|`.
pub fn minimal_period(system: &ResidueSystem, m: i128, cap: u64) -> Result<u64> {
    let m = u64::try_from(m.unsigned_abs()).unwrap_or(u64::MAX);
    Ok(profile(system, cap)?.minimal_period(m))
}

/// Moduli that divide no other modulus of the system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalModuli {
    /// `(class index, modulus)` in input order.
    pub moduli: Vec<(usize, u64)>,
    /// Whether the listed moduli are pairwise distinct. Vacuously true
    /// when none survive.
    pub distinct: bool,
}

impl MaximalModuli {
    pub fn values(&self) -> Vec<u64> {
        self.moduli.iter().map(|&(_, n)| n).collect()
    }
}

/// Class `t` is kept iff there is no `s ≠ t` with `nₜ | nₛ`. A duplicated
/// modulus divides its twin, so duplicates never survive.
pub fn maximal_moduli(system: &ResidueSystem) -> MaximalModuli {
    let moduli: Vec<u64> = system.moduli().collect();
    let kept: Vec<(usize, u64)> = moduli
        .iter()
        .enumerate()
        .filter(|&(t, &nt)| {
            !moduli
                .iter()
                .enumerate()
                .any(|(s, &ns)| s != t && ns % nt == 0)
        })
        .map(|(t, &nt)| (t, nt))
        .collect();
    let unique: BTreeSet<u64> = kept.iter().map(|&(_, n)| n).collect();
    MaximalModuli {
        distinct: unique.len() == kept.len(),
        moduli: kept,
    }
}

/// `|{r / nₛ : 0 ≤ r < nₛ}|` over all classes. Each fraction has a unique
/// reduced denominator `q`, which divides some modulus, and each such `q`
/// contributes `φ(q)` fractions.
pub fn constancy_window_size(system: &ResidueSystem) -> u128 {
    let denominators: BTreeSet<u64> = system.moduli().flat_map(divisors).collect();
    denominators.into_iter().map(|q| euler_phi(q) as u128).sum()
}

/// Whether every integer lies in some class (weights ignored).
pub fn is_cover(system: &ResidueSystem, cap: u64) -> Result<bool> {
    Ok(profile(&system.unweighted(), cap)?.min() >= 1)
}

/// Summary of everything [`profile`]-based analysis can say about a system.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub classes: usize,
    #[serde(serialize_with = "crate::ser::as_display")]
    pub lcm: BigUint,
    pub mean: String,
    pub range: BTreeSet<i64>,
    pub spread: u128,
    pub period_modulus: u64,
    pub minimal_period: u64,
    pub maximal_moduli: Vec<u64>,
    pub maximal_moduli_distinct: bool,
    pub constancy_window: u128,
    pub is_cover: bool,
    pub value_counts: BTreeMap<i64, u64>,
}

/// Runs every analysis at once; `m` selects the congruence used for the
/// minimal period (`0` for exact equality).
pub fn analyze(system: &ResidueSystem, m: u64, cap: u64) -> Result<Analysis> {
    let prof = profile(system, cap)?;
    let rs = prof.range_and_spread();
    let maximal = maximal_moduli(system);
    let mut value_counts = BTreeMap::new();
    for &v in prof.values() {
        *value_counts.entry(v).or_insert(0u64) += 1;
    }
    Ok(Analysis {
        classes: system.len(),
        lcm: system.lcm().clone(),
        mean: mean_value(system).to_string(),
        range: rs.range,
        spread: rs.spread,
        period_modulus: m,
        minimal_period: prof.minimal_period(m),
        maximal_moduli: maximal.values(),
        maximal_moduli_distinct: maximal.distinct,
        constancy_window: constancy_window_size(system),
        is_cover: is_cover(system, cap)?,
        value_counts,
    })
}

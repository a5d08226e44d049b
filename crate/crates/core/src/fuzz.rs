//! Seeded fuzzing of the theorem verifiers.
//!
//! Task `i` of a run with seed `S` draws everything from
//! `Xoshiro256StarStar::seed_from_u64(S + i·0x9E3779B97F4A7C15)`, so each
//! task can be replayed on its own and results do not depend on the number
//! of worker threads.

use std::ops::RangeInclusive;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{profile, DEFAULT_CAP};
use crate::constructions::{random_system, GeneratorSpec};
use crate::error::{Error, Result};
use crate::residue::{ResidueClass, ResidueSystem};
use crate::verify::{
    check_corollary_1_1_on, check_corollary_1_2_on, check_theorem_1_1_on, check_theorem_1_2_on,
    check_theorem_1_3_on, TheoremId, Verdict, VerdictReport,
};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: u64,
    /// Largest class count; each task draws `k` uniformly from `2..=max_classes`.
    pub max_classes: usize,
    pub pool: Vec<u64>,
    pub theorem: TheoremId,
    /// Moduli `m` passed to the verifier; ignored by the corollaries.
    pub moduli: RangeInclusive<u64>,
    pub cap: u64,
}

impl FuzzConfig {
    pub fn new(theorem: TheoremId) -> Self {
        Self {
            seed: 0,
            count: 1000,
            max_classes: 5,
            pool: (2..=12).collect(),
            theorem,
            moduli: 2..=13,
            cap: DEFAULT_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_classes < 2 {
            return Err(Error::InvalidGenerator("class count bound must be at least 2".into()));
        }
        if self.pool.is_empty() {
            return Err(Error::InvalidGenerator("empty modulus pool".into()));
        }
        if self.moduli.is_empty() {
            return Err(Error::InvalidGenerator("empty modulus range".into()));
        }
        if self.theorem == TheoremId::PowerSum {
            return Err(Error::InvalidGenerator("power-sum evidence is not a fuzz target".into()));
        }
        if self.theorem == TheoremId::Theorem11 && *self.moduli.start() == 0 {
            return Err(Error::InvalidModulus(0));
        }
        Ok(())
    }
}

/// A falsified report together with everything needed to replay it.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub task: u64,
    pub task_seed: u64,
    pub modulus: u64,
    pub systems: Vec<ResidueSystem>,
    pub report: VerdictReport,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TaskOutcome {
    pub checks: u64,
    pub consistent: u64,
    pub vacuous: u64,
    pub falsified: u64,
    pub evidence_failures: u64,
    pub skipped: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FuzzSummary {
    pub systems: u64,
    pub skipped: u64,
    pub checks: u64,
    pub consistent: u64,
    pub vacuous: u64,
    pub falsified: u64,
    /// Proof-technique evidence items that failed; always a bug if nonzero.
    pub evidence_failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

pub fn task_seed(seed: u64, task: u64) -> u64 {
    seed.wrapping_add(task.wrapping_mul(GOLDEN_GAMMA))
}

/// The inputs task `task` feeds to the verifier.
pub fn task_systems(config: &FuzzConfig, task: u64) -> Result<Vec<ResidueSystem>> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(task_seed(config.seed, task));
    let mut pool = config.pool.clone();
    pool.sort_unstable();
    pool.dedup();
    let k = rng.gen_range(2..=config.max_classes as u64) as usize;
    match config.theorem {
        TheoremId::Theorem12 => {
            let ka = k.min(pool.len());
            let a = random_system(&GeneratorSpec::new(rng.gen(), ka, pool.clone(), true))?;
            let b = match rng.gen_range(0..4u32) {
                // same classes, reversed order
                0 | 1 => {
                    let mut classes = a.classes().to_vec();
                    classes.reverse();
                    ResidueSystem::new(classes)?
                }
                // one residue perturbed
                2 => {
                    let mut classes = a.classes().to_vec();
                    let t = rng.gen_range(0..classes.len() as u64) as usize;
                    let c = classes[t];
                    let shift = rng.gen_range(1..c.modulus().max(2));
                    classes[t] = ResidueClass::new((c.residue() + shift) as i128, c.modulus() as i128)?;
                    ResidueSystem::new(classes)?
                }
                _ => {
                    let kb = rng.gen_range(1..=config.max_classes.min(pool.len()) as u64) as usize;
                    random_system(&GeneratorSpec::new(rng.gen(), kb, pool.clone(), true))?
                }
            };
            Ok(vec![a, b])
        }
        TheoremId::Corollary11 if rng.gen_bool(0.5) => Ok(vec![split_cover(&mut rng, k)?]),
        theorem => {
            let distinct = k <= pool.len() && rng.gen_bool(0.5);
            let mut spec = GeneratorSpec::new(rng.gen(), k, pool, distinct);
            if theorem == TheoremId::Theorem13 {
                spec = spec.with_weights(3);
            }
            Ok(vec![random_system(&spec)?])
        }
    }
}

/// An exact cover with `k` classes, grown from `0(1)` by splitting a random
/// class `a(n)` into `a + j·n (p·n)` for `j < p`, with `p` drawn from {2, 3}.
fn split_cover(rng: &mut Xoshiro256StarStar, k: usize) -> Result<ResidueSystem> {
    let mut classes = vec![(0u64, 1u64)];
    while classes.len() < k {
        let room = k - classes.len() + 1;
        let p = if room >= 3 && rng.gen_bool(0.5) { 3 } else { 2 };
        let t = rng.gen_range(0..classes.len() as u64) as usize;
        let (a, n) = classes.swap_remove(t);
        classes.extend((0..p).map(|j| (a + j * n, p * n)));
    }
    let classes = classes
        .into_iter()
        .map(|(a, n)| ResidueClass::new(a as i128, n as i128))
        .collect::<Result<Vec<_>>>()?;
    ResidueSystem::new(classes)
}

fn run_task(config: &FuzzConfig, task: u64) -> Result<(TaskOutcome, Vec<Counterexample>)> {
    let systems = task_systems(config, task)?;
    let mut outcome = TaskOutcome::default();
    let mut found = Vec::new();

    let profiles = match systems.iter().map(|s| profile(s, config.cap)).collect::<Result<Vec<_>>>() {
        Ok(p) => p,
        Err(Error::PeriodTooLarge { .. }) => {
            outcome.skipped = true;
            return Ok((outcome, found));
        }
        Err(e) => return Err(e),
    };
    let moduli: Vec<u64> = match config.theorem {
        TheoremId::Corollary11 | TheoremId::Corollary12 => vec![0],
        _ => config.moduli.clone().collect(),
    };
    let joint_period = if config.theorem == TheoremId::Theorem12 {
        let n = systems[0].lcm().lcm(systems[1].lcm());
        match u64::try_from(n) {
            Ok(n) if n <= config.cap => Some(n),
            _ => {
                outcome.skipped = true;
                return Ok((outcome, found));
            }
        }
    } else {
        None
    };
    for m in moduli {
        let report = match config.theorem {
            TheoremId::Theorem11 => check_theorem_1_1_on(&systems[0], &profiles[0], m)?,
            TheoremId::Corollary11 => check_corollary_1_1_on(&systems[0], &profiles[0])?,
            TheoremId::Corollary12 => check_corollary_1_2_on(&systems[0], &profiles[0])?,
            TheoremId::Theorem12 => check_theorem_1_2_on(
                &systems[0],
                &profiles[0],
                &systems[1],
                &profiles[1],
                joint_period.expect("computed above"),
                m,
            )?,
            TheoremId::Theorem13 => check_theorem_1_3_on(&systems[0], &profiles[0], m)?,
            TheoremId::PowerSum => unreachable!("rejected by validate"),
        };
        outcome.checks += 1;
        if !report.evidence_holds() {
            outcome.evidence_failures += 1;
        }
        match report.verdict {
            Verdict::Consistent => outcome.consistent += 1,
            Verdict::HypothesisNotSatisfied => outcome.vacuous += 1,
            Verdict::Falsified => {
                outcome.falsified += 1;
                found.push(Counterexample {
                    task,
                    task_seed: task_seed(config.seed, task),
                    modulus: m,
                    systems: systems.clone(),
                    report,
                });
            }
        }
    }
    Ok((outcome, found))
}

/// Runs `config.count` tasks in parallel; the summary depends only on the
/// configuration, never on scheduling.
pub fn run(config: &FuzzConfig) -> Result<FuzzSummary> {
    config.validate()?;
    let results: Vec<_> = (0..config.count)
        .into_par_iter()
        .map(|task| run_task(config, task))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = FuzzSummary::default();
    for (outcome, found) in results {
        summary.systems += 1;
        summary.skipped += outcome.skipped as u64;
        summary.checks += outcome.checks;
        summary.consistent += outcome.consistent;
        summary.vacuous += outcome.vacuous;
        summary.falsified += outcome.falsified;
        summary.evidence_failures += outcome.evidence_failures;
        summary.counterexamples.extend(found);
    }
    Ok(summary)
}

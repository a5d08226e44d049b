//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line and
//! asserts on the same condition.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use covering_core::analysis::{self, profile, DEFAULT_CAP};
use covering_core::constructions::{erdos_cover, random_system, GeneratorSpec};
use covering_core::cyclotomic::{all_frequencies, exp_sum_at};
use covering_core::fuzz::{self, FuzzConfig};
use covering_core::verify::{
    check_corollary_1_2, check_theorem_1_2_on, check_theorem_1_3, theorem_1_3_context, TheoremId,
    Verdict,
};
use covering_core::{
    constancy_window_size, cyclotomic_poly, divisible_by_integer, exp_sum, fourier_identity_check,
    mean_value, minimal_period, range_and_spread, CyclotomicElement, IntPolynomial, ResidueClass,
    ResidueSystem,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

/// Written straight to stderr so the line survives libtest's output capture.
fn criterion(n: u32, name: &str, ok: bool, detail: String) {
    let line = format!("[{}] criterion {n}: {name} ({detail})\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {name}: {detail}");
}

fn fixture() -> ResidueSystem {
    ResidueSystem::from_pairs(&[(1, 2), (2, 4), (1, 3), (2, 6), (0, 12)]).unwrap()
}

fn pool() -> Vec<u64> {
    (2..=12).collect()
}

#[test]
fn criterion_1_erdos_construction() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in [3u64, 5, 7, 9] {
        let s = erdos_cover(n).unwrap();
        let period = (1u64 << (n - 1)) * n;
        let prof = profile(&s, DEFAULT_CAP).unwrap();
        let covered = prof.values().iter().all(|&v| v >= 1);
        let report = check_corollary_1_2(&s, DEFAULT_CAP).unwrap();
        let g = prof.range_and_spread().spread;
        let both_parities = prof.values().iter().any(|v| v % 2 == 0) && prof.values().iter().any(|v| v % 2 == 1);
        let ok = s.len() as u64 == 2 * n - 1
            && s.has_distinct_moduli()
            && prof.period() == period
            && covered
            && report.verdict == Verdict::Consistent
            && g == 1
            && both_parities;
        if !ok {
            failures.push(n);
        }
    }
    let elapsed = start.elapsed();
    criterion(
        1,
        "Erdos covers n in {3,5,7,9} verified, c1.2 consistent, g = 1, both parities, < 1 s",
        failures.is_empty() && elapsed.as_secs_f64() < 1.0,
        format!("failures {failures:?}, {:.3} s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_2_fixture_exactness() {
    let s = fixture();
    let prof = profile(&s, DEFAULT_CAP).unwrap();
    let rs = range_and_spread(&s, DEFAULT_CAP).unwrap();
    let one = CyclotomicElement::from_integer(12, 1).unwrap();
    let checks = [
        ("profile", prof.values() == [1, 2, 2, 1, 1, 1, 1, 2, 1, 1, 2, 1]),
        ("mean", mean_value(&s) == BigRational::new(4.into(), 3.into())),
        ("range", rs.range == BTreeSet::from([1, 2])),
        ("spread", rs.spread == 1),
        ("period", minimal_period(&s, 0, DEFAULT_CAP).unwrap() == 12),
        ("window", constancy_window_size(&s) == 12),
        ("exp_sum 1/12", exp_sum(&s, 1, 12).unwrap() == one),
        ("exp_sum 1/2", exp_sum(&s, 1, 2).unwrap().is_zero()),
        ("fourier 1/12", fourier_identity_check(&s, 1, 12, DEFAULT_CAP).unwrap()),
        ("fourier 1/2", fourier_identity_check(&s, 1, 2, DEFAULT_CAP).unwrap()),
    ];
    let failed: Vec<_> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    criterion(2, "fixture values exact", failed.is_empty(), format!("failed {failed:?}"));
}

#[test]
fn criterion_3_theorem_1_1_fuzz() {
    let config = FuzzConfig {
        seed: 1,
        count: 10_000,
        max_classes: 5,
        pool: pool(),
        theorem: TheoremId::Theorem11,
        moduli: 2..=13,
        cap: DEFAULT_CAP,
    };
    let summary = fuzz::run(&config).unwrap();
    let satisfied = summary.consistent + summary.falsified;
    criterion(
        3,
        "10,000 systems x m in 2..=13: zero FALSIFIED, >= 100 satisfied hypotheses",
        summary.falsified == 0
            && satisfied >= 100
            && summary.evidence_failures == 0
            && summary.skipped == 0,
        format!(
            "checks {}, satisfied {satisfied}, vacuous {}, falsified {}",
            summary.checks, summary.vacuous, summary.falsified
        ),
    );
}

fn distinct_moduli_systems(moduli: &[u64], max_len: usize) -> Vec<ResidueSystem> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << moduli.len()) {
        let chosen: Vec<u64> = (0..moduli.len()).filter(|i| mask >> i & 1 == 1).map(|i| moduli[i]).collect();
        if chosen.len() > max_len {
            continue;
        }
        // every residue tuple
        let mut tuples: Vec<Vec<u64>> = vec![vec![]];
        for &n in &chosen {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |a| {
                        let mut t = t.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            let classes = chosen
                .iter()
                .zip(&t)
                .map(|(&n, &a)| ResidueClass::new(a as i128, n as i128).unwrap())
                .collect();
            out.push(ResidueSystem::new(classes).unwrap());
        }
    }
    out
}

#[test]
fn criterion_4_theorem_1_2_exhaustive() {
    let start = Instant::now();
    let systems = distinct_moduli_systems(&[2, 3, 4, 6], 3);
    let profiles: Vec<_> = systems.iter().map(|s| profile(s, DEFAULT_CAP).unwrap()).collect();
    let lcm = |s: &ResidueSystem| s.lcm().to_u64().unwrap();

    #[derive(Default)]
    struct Tally {
        checks: u64,
        consistent: u64,
        falsified: u64,
        equal_functions: u64,
        uniqueness_failures: u64,
    }
    let tally = (0..systems.len())
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::default();
            for j in 0..systems.len() {
                let (a, b) = (&systems[i], &systems[j]);
                let n = num_integer::lcm(lcm(a), lcm(b));
                for m in (1..=24u64).filter(|m| n % m != 0) {
                    let r = check_theorem_1_2_on(a, &profiles[i], b, &profiles[j], n, m).unwrap();
                    t.checks += 1;
                    match r.verdict {
                        Verdict::Consistent => t.consistent += 1,
                        Verdict::Falsified => t.falsified += 1,
                        Verdict::HypothesisNotSatisfied => {}
                    }
                }
                // m > N and m > 3 (values lie in 0..=3): agreement mod m is
                // equality, and equal functions force A = B
                let big_m = n.max(3) + 1;
                let r = check_theorem_1_2_on(a, &profiles[i], b, &profiles[j], n, big_m).unwrap();
                let equal = (0..n as i128).all(|x| profiles[i].at(x) == profiles[j].at(x));
                let same_sets = a.classes().iter().collect::<BTreeSet<_>>() == b.classes().iter().collect::<BTreeSet<_>>();
                if equal {
                    t.equal_functions += 1;
                }
                if equal != same_sets || (equal && r.verdict != Verdict::Consistent) || (!equal && r.verdict != Verdict::HypothesisNotSatisfied) {
                    t.uniqueness_failures += 1;
                }
                t.checks += 1;
            }
            t
        })
        .reduce(Tally::default, |mut x, y| {
            x.checks += y.checks;
            x.consistent += y.consistent;
            x.falsified += y.falsified;
            x.equal_functions += y.equal_functions;
            x.uniqueness_failures += y.uniqueness_failures;
            x
        });
    let elapsed = start.elapsed();
    criterion(
        4,
        "exhaustive pairs over moduli {2,3,4,6}, k,l <= 3, m <= 24 with m not dividing N; uniqueness for m > N; < 60 s",
        tally.falsified == 0
            && tally.uniqueness_failures == 0
            && tally.equal_functions as usize == systems.len()
            && elapsed.as_secs_f64() < 60.0,
        format!(
            "{} systems, {} checks, {} consistent, {} falsified, {} uniqueness failures, {:.1} s",
            systems.len(),
            tally.checks,
            tally.consistent,
            tally.falsified,
            tally.uniqueness_failures,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_5_theorem_1_3_worked_case() {
    let base = ResidueSystem::from_pairs(&[(0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
    let s = ResidueSystem::with_weights(base.classes().to_vec(), vec![3, 3, -2, -2, -2]).unwrap();
    let prof = profile(&s, DEFAULT_CAP).unwrap();

    let exact = theorem_1_3_context(&s, 0, &prof);
    let summary: Vec<(u64, BigInt, [u64; 4], bool, bool)> = exact
        .records
        .iter()
        .map(|r| (r.d, r.weighted_sum.clone(), r.chain(), r.divisibility_branch, r.chain_holds))
        .collect();
    let expected = vec![
        (2, BigInt::from(18), [2, 2, 2, 2], false, true),
        (3, BigInt::from(-12), [3, 3, 3, 3], false, true),
    ];
    let mod2 = theorem_1_3_context(&s, 2, &prof);
    let ok = exact.n0 == 1
        && summary == expected
        && check_theorem_1_3(&s, 0, DEFAULT_CAP).unwrap().verdict == Verdict::Consistent
        && mod2.n0 == 1
        && mod2.records.iter().map(|r| r.d).collect::<Vec<_>>() == vec![2, 3]
        && mod2.records.iter().all(|r| r.divisibility_branch)
        && check_theorem_1_3(&s, 2, DEFAULT_CAP).unwrap().verdict == Verdict::Consistent;
    criterion(
        5,
        "weighted worked case: n0 = 1, sums 18 and -12, chains 2>=2>=2>=2 and 3>=3>=3>=3, m = 2 via divisibility",
        ok,
        format!("n0 = {}, records {summary:?}", exact.n0),
    );
}

#[test]
fn criterion_6_cyclotomic_kernel() {
    let mut product_failures = Vec::new();
    for d in 1..=200u64 {
        let product = covering_core::arith::divisors(d)
            .into_iter()
            .fold(IntPolynomial::one(), |acc, e| &acc * &cyclotomic_poly(e as i128).unwrap());
        if product != IntPolynomial::x_pow_minus_one(d as usize) {
            product_failures.push(d);
        }
    }
    let phi12 = cyclotomic_poly(12).unwrap() == IntPolynomial::from_i64(&[1, 0, -1, 0, 1]);
    let phi105 = cyclotomic_poly(105).unwrap().coeffs().iter().any(|c| *c == BigInt::from(-2));
    let mut norm_failures = Vec::new();
    for d in 2..=30i128 {
        let one = CyclotomicElement::from_integer(d, 1).unwrap();
        let prod = (1..d).fold(one.clone(), |acc, r| {
            acc.mul(&one.sub(&CyclotomicElement::from_root(d, r).unwrap()).unwrap()).unwrap()
        });
        if prod != CyclotomicElement::from_integer(d, d).unwrap() {
            norm_failures.push(d);
        }
    }
    let one_minus_i = CyclotomicElement::from_exponents(4, &[(0, 1.into()), (1, (-1).into())]).unwrap();
    let not_divisible = !divisible_by_integer(&one_minus_i, 2);
    criterion(
        6,
        "cyclotomic kernel: product identity d <= 200, Phi_12, Phi_105 has -2, prod(1 - zeta^r) = d, (1 - i)/2 not integral",
        product_failures.is_empty() && phi12 && phi105 && norm_failures.is_empty() && not_divisible,
        format!(
            "product failures {product_failures:?}, phi12 {phi12}, phi105 {phi105}, norm failures {norm_failures:?}, (1-i)/2 rejected {not_divisible}"
        ),
    );
}

/// Seeded systems with `N ≤ limit`; every other one carries weights.
fn bounded_systems(count: usize, limit: u64, seed: u64) -> Vec<ResidueSystem> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0u64;
    while out.len() < count {
        let k = 2 + (i % 4) as usize;
        let mut spec = GeneratorSpec::new(seed.wrapping_add(i), k, pool(), i.is_multiple_of(3));
        if i % 2 == 1 {
            spec = spec.with_weights(4);
        }
        i += 1;
        let s = random_system(&spec).unwrap();
        if s.lcm() <= &BigUint::from(limit) {
            out.push(s);
        }
    }
    out
}

#[test]
fn criterion_7_fourier_identity() {
    use rand::{Rng, SeedableRng};
    let systems = bounded_systems(500, 2000, 7_000);
    let results: Vec<(usize, usize)> = systems
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = rand_xoshiro::Xoshiro256StarStar::seed_from_u64(i as u64);
            let n = s.lcm().to_u64().unwrap();
            let mut failures = 0;
            let samples = 100;
            for _ in 0..samples {
                let r = rng.gen_range(1..n);
                if !fourier_identity_check(s, r as i128, n as i128, DEFAULT_CAP).unwrap() {
                    failures += 1;
                }
            }
            (samples, failures)
        })
        .collect();
    let checks: usize = results.iter().map(|r| r.0).sum();
    let failures: usize = results.iter().map(|r| r.1).sum();
    let min_samples = results.iter().map(|r| r.0).min().unwrap();
    criterion(
        7,
        "Fourier identity exact on 500 systems with N <= 2000, >= 100 frequencies each",
        failures == 0 && systems.len() == 500 && min_samples >= 100,
        format!("{checks} identities, {failures} failures"),
    );
}

#[test]
fn criterion_8_minimal_period_and_constancy_window() {
    // result (iv): distinct moduli, unit weights
    let mut period_failures = 0;
    for seed in 0..1000u64 {
        let k = 2 + (seed % 4) as usize;
        let s = random_system(&GeneratorSpec::new(seed, k, pool(), true)).unwrap();
        let n = s.lcm().to_u64().unwrap();
        if minimal_period(&s, 0, DEFAULT_CAP).unwrap() != n {
            period_failures += 1;
        }
    }

    // result (vi): constant on a window of that length ⇒ constant
    let mut window_failures = 0;
    let mut antecedent_held = 0;
    for seed in 0..1000u64 {
        let s = window_system(seed);
        let prof = profile(&s, DEFAULT_CAP).unwrap();
        let window = constancy_window_size(&s);
        let values = prof.values();
        let n = values.len();
        // longest cyclic run of equal consecutive values
        let mut longest = 1usize;
        let mut run = 1usize;
        for x in 1..2 * n {
            if values[x % n] == values[(x - 1) % n] {
                run += 1;
                longest = longest.max(run);
            } else {
                run = 1;
            }
        }
        if longest as u128 >= window {
            antecedent_held += 1;
            if !prof.is_constant() {
                window_failures += 1;
            }
        }
    }
    criterion(
        8,
        "minimal period = N on 1,000 distinct-moduli systems; window constancy implies constancy on 1,000 systems",
        period_failures == 0 && window_failures == 0 && antecedent_held > 0,
        format!("period failures {period_failures}, window failures {window_failures}, antecedent held {antecedent_held}"),
    );
}

/// Cycles through unit-weight systems, weighted systems and full residue
/// systems, so both constant and non-constant `w` appear.
fn window_system(seed: u64) -> ResidueSystem {
    let k = 2 + (seed % 4) as usize;
    match seed % 3 {
        0 => random_system(&GeneratorSpec::new(seed, k, pool(), false)).unwrap(),
        1 => random_system(&GeneratorSpec::new(seed, k, pool(), false).with_weights(2)).unwrap(),
        _ => {
            // a full residue system mod n, making w constant
            let n = 2 + seed % 6;
            let classes = (0..n).map(|a| ResidueClass::new(a as i128, n as i128).unwrap()).collect();
            ResidueSystem::new(classes).unwrap()
        }
    }
}

#[test]
fn criterion_9_congruence_invariant() {
    // unit-weight random systems, plus weighted ones whose weights share a factor
    let systems: Vec<ResidueSystem> = (0..3000u64)
        .filter_map(|i| {
            let k = 2 + (i % 4) as usize;
            let base = random_system(&GeneratorSpec::new(90_000 + i, k, pool(), false)).unwrap();
            let s = if i % 2 == 0 {
                base
            } else {
                let factor = [2, 3, 4, 6][(i / 2 % 4) as usize];
                let weights = (0..base.len()).map(|s| factor * (1 + ((i + s as u64) % 3) as i64)).collect();
                ResidueSystem::with_weights(base.classes().to_vec(), weights).unwrap()
            };
            (s.lcm() <= &BigUint::from(720u32)).then_some(s)
        })
        .collect();
    let (checked, violations, systems_with_hypothesis): (u64, u64, u64) = systems
        .par_iter()
        .map(|s| {
            let prof = profile(s, DEFAULT_CAP).unwrap();
            let rs = prof.range_and_spread();
            let ms: Vec<u64> = (2..=13).filter(|&m| rs.within_one_class_mod(m)).collect();
            if ms.is_empty() {
                return (0, 0, 0);
            }
            let n = prof.period();
            let mut checked = 0;
            let mut violations = 0;
            let sums: Vec<CyclotomicElement> = all_frequencies(n).into_iter().map(|f| exp_sum_at(s, f)).collect();
            for &m in &ms {
                for x in &sums {
                    checked += 1;
                    if !divisible_by_integer(x, m) {
                        violations += 1;
                    }
                }
            }
            (checked, violations, 1)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    criterion(
        9,
        "range within a class mod m implies every exp_sum divisible by m",
        violations == 0 && systems_with_hypothesis > 0,
        format!(
            "{} systems, {systems_with_hypothesis} with hypothesis, {checked} divisibility checks, {violations} violations",
            systems.len()
        ),
    );
}

#[test]
fn analysis_summary_smoke() {
    let a = analysis::analyze(&fixture(), 0, DEFAULT_CAP).unwrap();
    assert_eq!(a.mean, "4/3");
}

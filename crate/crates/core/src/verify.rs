//! Hypothesis/conclusion checkers for the range theorems on covering
//! functions.
//!
//! Each checker evaluates the hypothesis of one statement on a concrete
//! system and, when it holds, every conclusion item. A report whose
//! hypothesis holds but some item fails is [`Verdict::Falsified`]; that
//! outcome means either a bug here or a counterexample to a published
//! theorem, so callers treat it as fatal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::analysis::{maximal_moduli, profile, Profile};
use crate::arith::{divisors, gcd_u64, smallest_prime_factor};
use crate::cyclotomic::{exp_sum, CyclotomicElement};
use crate::error::{Error, Result};
use crate::residue::{ResidueClass, ResidueSystem};
use crate::ser::as_display;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    #[serde(rename = "1.1")]
    Theorem11,
    #[serde(rename = "c1.1")]
    Corollary11,
    #[serde(rename = "c1.2")]
    Corollary12,
    #[serde(rename = "1.2")]
    Theorem12,
    #[serde(rename = "1.3")]
    Theorem13,
    #[serde(rename = "power-sum")]
    PowerSum,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Theorem11 => "1.1",
            Self::Corollary11 => "c1.1",
            Self::Corollary12 => "c1.2",
            Self::Theorem12 => "1.2",
            Self::Theorem13 => "1.3",
            Self::PowerSum => "power-sum",
        })
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "1.1" => Self::Theorem11,
            "c1.1" => Self::Corollary11,
            "c1.2" => Self::Corollary12,
            "1.2" => Self::Theorem12,
            "1.3" => Self::Theorem13,
            "power-sum" => Self::PowerSum,
            other => return Err(format!("unknown theorem {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    HypothesisNotSatisfied,
    #[serde(rename = "FALSIFIED")]
    Falsified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Consistent => "consistent",
            Self::HypothesisNotSatisfied => "hypothesis-not-satisfied",
            Self::Falsified => "FALSIFIED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub satisfied: bool,
    pub explanation: String,
}

/// One checked conclusion: what was expected of `subject` and what was seen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Item {
    pub subject: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Item {
    fn new(subject: impl Into<String>, expected: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            expected: expected.into(),
            observed: String::new(),
            passed: false,
            witness: None,
        }
    }

    fn observed(mut self, observed: impl Into<String>, passed: bool) -> Self {
        self.observed = observed.into();
        self.passed = passed;
        self
    }

    fn witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub theorem: TheoremId,
    pub hypothesis: Hypothesis,
    /// Conclusion items; these alone decide the verdict.
    pub items: Vec<Item>,
    /// Proof-technique checks recorded alongside the verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Item>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    pub verdict: Verdict,
}

impl VerdictReport {
    fn new(theorem: TheoremId, hypothesis: Hypothesis, items: Vec<Item>) -> Self {
        let verdict = if !hypothesis.satisfied {
            Verdict::HypothesisNotSatisfied
        } else if items.iter().all(|i| i.passed) {
            Verdict::Consistent
        } else {
            Verdict::Falsified
        };
        Self {
            theorem,
            hypothesis,
            items,
            evidence: Vec::new(),
            trace: Vec::new(),
            verdict,
        }
    }

    fn with_evidence(mut self, evidence: Vec<Item>) -> Self {
        self.evidence = evidence;
        self
    }

    fn with_trace(mut self, trace: Vec<String>) -> Self {
        self.trace = trace;
        self
    }

    /// Whether every recorded evidence item passed.
    pub fn evidence_holds(&self) -> bool {
        self.evidence.iter().all(|i| i.passed)
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "statement:  {}", self.theorem)?;
        writeln!(
            f,
            "hypothesis: {} ({})",
            if self.hypothesis.satisfied { "satisfied" } else { "not satisfied" },
            self.hypothesis.explanation
        )?;
        let write_items = |f: &mut fmt::Formatter<'_>, label: &str, items: &[Item]| {
            if !items.is_empty() {
                writeln!(f, "{label}:")?;
            }
            for i in items {
                write!(
                    f,
                    "  [{}] {}: expected {}; observed {}",
                    if i.passed { "pass" } else { "FAIL" },
                    i.subject,
                    i.expected,
                    i.observed
                )?;
                match &i.witness {
                    Some(w) => writeln!(f, "; witness {w}")?,
                    None => writeln!(f)?,
                }
            }
            Ok(())
        };
        write_items(f, "items", &self.items)?;
        write_items(f, "evidence", &self.evidence)?;
        if !self.trace.is_empty() {
            writeln!(f, "trace:")?;
            for t in &self.trace {
                writeln!(f, "  {t}")?;
            }
        }
        write!(f, "verdict:    {}", self.verdict)
    }
}

fn require_several(system: &ResidueSystem) -> Result<()> {
    if system.len() < 2 {
        return Err(Error::TooFewClasses(system.len()));
    }
    Ok(())
}

fn require_unit_weights(system: &ResidueSystem) -> Result<()> {
    if !system.has_unit_weights() {
        return Err(Error::NonUnitWeights);
    }
    Ok(())
}

fn class_label(system: &ResidueSystem, t: usize) -> String {
    format!("t={} [{}]", t + 1, system.classes()[t])
}

/// Index of some `s ≠ t` with `nₜ | nₛ`.
fn divisibility_witness(system: &ResidueSystem, t: usize) -> Option<usize> {
    let nt = system.classes()[t].modulus();
    system
        .moduli()
        .enumerate()
        .find(|&(s, ns)| s != t && ns % nt == 0)
        .map(|(s, _)| s)
}

fn divisibility_item(system: &ResidueSystem, t: usize) -> Item {
    let nt = system.classes()[t].modulus();
    let item = Item::new(class_label(system, t), format!("n_t = {nt} divides n_s for some s != t"));
    match divisibility_witness(system, t) {
        Some(s) => {
            let ns = system.classes()[s].modulus();
            item.observed(format!("{nt} | {ns}"), true)
                .witness(format!("s={} [{}]", s + 1, system.classes()[s]))
        }
        None => item.observed("no such s", false),
    }
}

fn check_modulus(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidModulus(0));
    }
    Ok(())
}

/// If the range of `w` lies in one residue class mod `m`, then every `t`
/// with `m·nₜ ∤ N` has `nₜ | nₛ` for some `s ≠ t`.
pub fn check_theorem_1_1(system: &ResidueSystem, m: u64, cap: u64) -> Result<VerdictReport> {
    require_several(system)?;
    require_unit_weights(system)?;
    check_modulus(m)?;
    let prof = profile(system, cap)?;
    check_theorem_1_1_on(system, &prof, m)
}

/// [`check_theorem_1_1`] against a precomputed profile of `system`.
pub fn check_theorem_1_1_on(system: &ResidueSystem, prof: &Profile, m: u64) -> Result<VerdictReport> {
    require_several(system)?;
    require_unit_weights(system)?;
    check_modulus(m)?;
    let n = system.lcm();
    let rs = prof.range_and_spread();
    let hypothesis = Hypothesis {
        satisfied: rs.within_one_class_mod(m),
        explanation: format!("range {:?}, spread g = {}, m = {m}", rs.range, rs.spread),
    };
    let mut items = Vec::new();
    let mut evidence = Vec::new();
    let mut trace = Vec::new();
    if hypothesis.satisfied {
        for (t, class) in system.classes().iter().enumerate() {
            let nt = class.modulus();
            if (n % (BigUint::from(nt) * m)).is_zero() {
                trace.push(format!("{}: m*n_t = {} divides N = {n}, no claim", class_label(system, t), m as u128 * nt as u128));
                continue;
            }
            items.push(divisibility_item(system, t));
        }
        // the proof's step α = 1/nₜ for moduli dividing no other modulus
        for (t, nt) in maximal_moduli(system).moduli {
            if nt < 2 {
                continue;
            }
            let x = exp_sum(system, 1, nt as i128)?;
            let divisible = x.divisible_by(&BigUint::from(m));
            evidence.push(
                Item::new(
                    format!("exp_sum at 1/{nt} ({})", class_label(system, t)),
                    format!("divisible by {m} among algebraic integers"),
                )
                .observed(format!("{x}"), divisible),
            );
        }
    }
    Ok(VerdictReport::new(TheoremId::Theorem11, hypothesis, items)
        .with_evidence(evidence)
        .with_trace(trace))
}

/// If `w` is constant, every modulus divides another one and the two
/// largest moduli coincide.
pub fn check_corollary_1_1(system: &ResidueSystem, cap: u64) -> Result<VerdictReport> {
    require_several(system)?;
    require_unit_weights(system)?;
    let prof = profile(system, cap)?;
    check_corollary_1_1_on(system, &prof)
}

pub fn check_corollary_1_1_on(system: &ResidueSystem, prof: &Profile) -> Result<VerdictReport> {
    require_several(system)?;
    require_unit_weights(system)?;
    let rs = prof.range_and_spread();
    let hypothesis = Hypothesis {
        satisfied: rs.spread == 0,
        explanation: format!("range {:?}", rs.range),
    };
    let mut items = Vec::new();
    if hypothesis.satisfied {
        items.extend((0..system.len()).map(|t| divisibility_item(system, t)));
        let mut sorted: Vec<u64> = system.moduli().collect();
        sorted.sort_unstable();
        let (top, next) = (sorted[sorted.len() - 1], sorted[sorted.len() - 2]);
        items.push(
            Item::new("two largest moduli", "n_k = n_{k-1} after sorting")
                .observed(format!("{next}, {top}"), top == next),
        );
    }
    Ok(VerdictReport::new(TheoremId::Corollary11, hypothesis, items))
}

/// If the divisibility-maximal moduli are distinct, the range of `w` lies
/// in no residue class other than ℤ itself, so `w` takes both parities.
pub fn check_corollary_1_2(system: &ResidueSystem, cap: u64) -> Result<VerdictReport> {
    require_several(system)?;
    require_unit_weights(system)?;
    let prof = profile(system, cap)?;
    check_corollary_1_2_on(system, &prof)
}

pub fn check_corollary_1_2_on(system: &ResidueSystem, prof: &Profile) -> Result<VerdictReport> {
    require_several(system)?;
    require_unit_weights(system)?;
    let maximal = maximal_moduli(system);
    let hypothesis = Hypothesis {
        satisfied: maximal.distinct && !maximal.moduli.is_empty(),
        explanation: format!(
            "divisibility-maximal moduli {:?} ({})",
            maximal.values(),
            if maximal.moduli.is_empty() {
                "none"
            } else if maximal.distinct {
                "distinct"
            } else {
                "repeated"
            }
        ),
    };
    let mut items = Vec::new();
    if hypothesis.satisfied {
        let rs = prof.range_and_spread();
        items.push(
            Item::new("range spread", "g = 1 (range lies in no proper residue class)")
                .observed(format!("g = {}", rs.spread), rs.spread == 1),
        );
        let find = |parity: i64| {
            prof.values()
                .iter()
                .position(|&v| v.rem_euclid(2) == parity)
        };
        let parity = Item::new("parity", "w takes both even and odd values");
        items.push(match (find(0), find(1)) {
            (Some(e), Some(o)) => parity
                .observed("both parities occur", true)
                .witness(format!(
                    "even w({e}) = {}, odd w({o}) = {}",
                    prof.values()[e],
                    prof.values()[o]
                )),
            (Some(_), None) => parity.observed("all values even", false),
            _ => parity.observed("all values odd", false),
        });
    }
    Ok(VerdictReport::new(TheoremId::Corollary12, hypothesis, items))
}

fn sorted_desc(system: &ResidueSystem) -> Vec<ResidueClass> {
    let mut v = system.classes().to_vec();
    v.sort_by(|a, b| b.modulus().cmp(&a.modulus()).then(a.residue().cmp(&b.residue())));
    v
}

/// Uniqueness modulo `m`: two systems with distinct moduli whose covering
/// functions agree mod `m`, where `m ∤ N`, are identical. `m = 0` asks for
/// exact agreement.
pub fn check_theorem_1_2(
    a: &ResidueSystem,
    b: &ResidueSystem,
    m: u64,
    cap: u64,
) -> Result<VerdictReport> {
    for sys in [a, b] {
        require_unit_weights(sys)?;
        if let Some(n) = sys.repeated_modulus() {
            return Err(Error::RepeatedModulus(n));
        }
    }
    let n = a.lcm().lcm(b.lcm());
    let period = match n.to_u64() {
        Some(p) if p <= cap => p,
        _ => return Err(Error::PeriodTooLarge { period: n, cap }),
    };
    let pa = profile(a, cap)?;
    let pb = profile(b, cap)?;
    check_theorem_1_2_on(a, &pa, b, &pb, period, m)
}

/// [`check_theorem_1_2`] with precomputed profiles; `period` must be the
/// lcm of all moduli of both systems.
pub fn check_theorem_1_2_on(
    a: &ResidueSystem,
    pa: &Profile,
    b: &ResidueSystem,
    pb: &Profile,
    period: u64,
    m: u64,
) -> Result<VerdictReport> {
    for sys in [a, b] {
        require_unit_weights(sys)?;
        if let Some(n) = sys.repeated_modulus() {
            return Err(Error::RepeatedModulus(n));
        }
    }
    let m_divides_n = m != 0 && period.is_multiple_of(m);
    let mismatch = (0..period as i128).find(|&x| {
        let diff = pa.at(x) as i128 - pb.at(x) as i128;
        !crate::arith::divides_i128(m, diff)
    });
    let hypothesis = Hypothesis {
        satisfied: !m_divides_n && mismatch.is_none(),
        explanation: match (m_divides_n, mismatch) {
            (true, _) => format!("m = {m} divides N = {period}"),
            (false, Some(x)) => format!(
                "w_A({x}) = {} and w_B({x}) = {} differ mod {m}",
                pa.at(x),
                pb.at(x)
            ),
            (false, None) => format!("w_A = w_B mod {m} on one period N = {period}, m does not divide N"),
        },
    };

    let mut items = Vec::new();
    let mut trace = Vec::new();
    if hypothesis.satisfied {
        let set_a: BTreeSet<ResidueClass> = a.classes().iter().copied().collect();
        let set_b: BTreeSet<ResidueClass> = b.classes().iter().copied().collect();
        items.push(
            Item::new("A = B", "identical sets of residue classes")
                .observed(if set_a == set_b { "identical" } else { "different" }, set_a == set_b),
        );

        // strip matching largest-modulus classes one pair at a time
        let (sa, sb) = (sorted_desc(a), sorted_desc(b));
        let mut matched = 0;
        let mut complete = true;
        loop {
            match (sa.get(matched), sb.get(matched)) {
                (None, None) => break,
                (Some(x), Some(y)) => {
                    let d = x.modulus().max(y.modulus());
                    if x.modulus() != y.modulus() {
                        trace.push(format!("d = {d}: largest moduli {} and {} differ", x.modulus(), y.modulus()));
                        complete = false;
                        break;
                    }
                    if x.residue() != y.residue() {
                        trace.push(format!("d = {d}: residues {} and {} differ mod {d}", x.residue(), y.residue()));
                        complete = false;
                        break;
                    }
                    trace.push(format!("d = {d}: matched {x}"));
                    matched += 1;
                }
                (Some(x), None) | (None, Some(x)) => {
                    trace.push(format!("unmatched leftover {x}"));
                    complete = false;
                    break;
                }
            }
        }
        items.push(
            Item::new("matching procedure", "pairs every class by descending modulus")
                .observed(format!("{matched} pairs matched"), complete),
        );
    }
    Ok(VerdictReport::new(TheoremId::Theorem12, hypothesis, items).with_trace(trace))
}

/// Per-divisor data for the weighted period theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorRecord {
    pub d: u64,
    /// Zero-based indices `s` with `d | nₛ`.
    pub indices: Vec<usize>,
    /// `{aₛ mod d : s ∈ I(d)}`.
    pub residues: BTreeSet<u64>,
    /// `min d/(d, nₛ)` over `s ∉ I(d)`, with `n₀` included as index 0.
    pub min_ratio: u64,
    pub smallest_prime: u64,
    /// `N · Σ_{s ∈ I(d)} λₛ / nₛ`, an exact integer.
    #[serde(serialize_with = "as_display")]
    pub weighted_sum: BigInt,
    /// `m | weighted_sum` (`m = 0`: the sum vanishes).
    pub divisibility_branch: bool,
    /// `|I(d)| ≥ |residues| ≥ min_ratio ≥ smallest_prime`.
    pub chain_holds: bool,
}

impl DivisorRecord {
    pub fn chain(&self) -> [u64; 4] {
        [
            self.indices.len() as u64,
            self.residues.len() as u64,
            self.min_ratio,
            self.smallest_prime,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem13Context {
    pub modulus: u64,
    /// Minimal period of `w` mod `m`.
    pub n0: u64,
    #[serde(serialize_with = "as_display")]
    pub lcm: BigUint,
    pub records: Vec<DivisorRecord>,
}

/// Builds the per-divisor table for every `d` with `I(d) ≠ ∅` and `d ∤ n₀`.
/// Those are exactly the divisors of some modulus that do not divide `n₀`.
pub fn theorem_1_3_context(system: &ResidueSystem, m: u64, prof: &Profile) -> Theorem13Context {
    let n0 = prof.minimal_period(m);
    let lcm = system.lcm().clone();
    let candidates: BTreeSet<u64> = system
        .moduli()
        .flat_map(divisors)
        .filter(|d| !n0.is_multiple_of(*d))
        .collect();
    let records = candidates
        .into_iter()
        .map(|d| {
            let indices: Vec<usize> = system
                .moduli()
                .enumerate()
                .filter(|&(_, n)| n % d == 0)
                .map(|(s, _)| s)
                .collect();
            let residues: BTreeSet<u64> = indices
                .iter()
                .map(|&s| system.classes()[s].residue() % d)
                .collect();
            let min_ratio = std::iter::once(n0)
                .chain(system.moduli().filter(|n| n % d != 0))
                .map(|n| d / gcd_u64(d, n))
                .min()
                .expect("n0 is always present");
            let weighted_sum: BigInt = indices
                .iter()
                .map(|&s| BigInt::from(system.cofactor(s)) * system.weight(s))
                .sum();
            let divisibility_branch = if m == 0 {
                weighted_sum.is_zero()
            } else {
                weighted_sum.is_multiple_of(&BigInt::from(m))
            };
            let smallest_prime = smallest_prime_factor(d).expect("d > 1 since d does not divide n0");
            let chain_holds = indices.len() >= residues.len()
                && residues.len() as u64 >= min_ratio
                && min_ratio >= smallest_prime;
            DivisorRecord {
                d,
                indices,
                residues,
                min_ratio,
                smallest_prime,
                weighted_sum,
                divisibility_branch,
                chain_holds,
            }
        })
        .collect();
    Theorem13Context {
        modulus: m,
        n0,
        lcm,
        records,
    }
}

/// Weighted refinement: for every `d ∤ n₀` with `I(d) ≠ ∅`, either
/// `m | N Σ_{I(d)} λₛ/nₛ` or `|I(d)| ≥ |{aₛ mod d}| ≥ min d/(d,nₛ) ≥ p(d)`.
pub fn check_theorem_1_3(system: &ResidueSystem, m: u64, cap: u64) -> Result<VerdictReport> {
    require_several(system)?;
    let prof = profile(system, cap)?;
    check_theorem_1_3_on(system, &prof, m)
}

pub fn check_theorem_1_3_on(system: &ResidueSystem, prof: &Profile, m: u64) -> Result<VerdictReport> {
    require_several(system)?;
    let ctx = theorem_1_3_context(system, m, prof);
    let hypothesis = Hypothesis {
        satisfied: true,
        explanation: format!(
            "n0 = {} is the minimal period of w mod {m}; {} candidate divisor(s)",
            ctx.n0,
            ctx.records.len()
        ),
    };
    let mut items = Vec::new();
    let mut evidence = Vec::new();
    for rec in &ctx.records {
        let [i, r, q, p] = rec.chain();
        let observed = format!(
            "m | {}: {}; chain {i} >= {r} >= {q} >= {p}: {}",
            rec.weighted_sum, rec.divisibility_branch, rec.chain_holds
        );
        items.push(
            Item::new(
                format!("d = {}", rec.d),
                "m divides N*sum(lambda_s/n_s) over I(d), or the inequality chain holds",
            )
            .observed(observed, rec.divisibility_branch || rec.chain_holds),
        );
        // the proof's power-sum step applies when |R| < min_ratio
        if (rec.residues.len() as u64) < rec.min_ratio {
            let mut terms: BTreeMap<u64, BigInt> = BTreeMap::new();
            for &s in &rec.indices {
                let c = BigInt::from(system.cofactor(s)) * system.weight(s);
                *terms.entry(system.classes()[s].residue() % rec.d).or_default() += c;
            }
            let report = power_sum_evidence(&terms, rec.d, m)?;
            evidence.push(
                Item::new(
                    format!("d = {} power sums", rec.d),
                    format!("u_1..u_{} divisible by {m}, hence u_{} = N*sum too", rec.residues.len(), rec.d),
                )
                .observed(report.verdict.to_string(), report.verdict == Verdict::Consistent),
            );
        }
    }
    Ok(VerdictReport::new(TheoremId::Theorem13, hypothesis, items).with_evidence(evidence))
}

/// `u_n = Σ_{r ∈ R} c_r ζ_d^{r n}` for `n = 1..=d`, with `R` the keys of `terms`.
pub fn power_sums(terms: &BTreeMap<u64, BigInt>, d: u64, upto: u64) -> Result<Vec<CyclotomicElement>> {
    if d == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if let Some((&r, _)) = terms.iter().find(|(&r, _)| r >= d) {
        return Err(Error::ResidueOutOfRange { residue: r, order: d });
    }
    (1..=upto)
        .map(|n| {
            let exps: Vec<(i128, BigInt)> = terms
                .iter()
                .map(|(&r, c)| ((r as u128 * n as u128 % d as u128) as i128, c.clone()))
                .collect();
            CyclotomicElement::from_exponents(d as i128, &exps)
        })
        .collect()
}

/// The linear-recurrence step: if `u_1, …, u_{|R|}` are all divisible by
/// `m`, so is every later `u_n`, and `u_d = Σ c_r` in particular.
pub fn power_sum_evidence(terms: &BTreeMap<u64, BigInt>, d: u64, m: u64) -> Result<VerdictReport> {
    let u = power_sums(terms, d, d)?;
    let order = terms.len();
    let m_big = BigUint::from(m);
    let head = order.min(u.len());
    let first_bad = u[..head].iter().position(|x| !x.divisible_by(&m_big));
    let hypothesis = Hypothesis {
        satisfied: first_bad.is_none(),
        explanation: match first_bad {
            None => format!("u_1..u_{order} divisible by {m}"),
            Some(i) => format!("u_{} = {} not divisible by {m}", i + 1, u[i]),
        },
    };
    let mut items = Vec::new();
    if hypothesis.satisfied {
        for (i, x) in u.iter().enumerate().skip(head) {
            items.push(
                Item::new(format!("u_{}", i + 1), format!("divisible by {m}"))
                    .observed(x.to_string(), x.divisible_by(&m_big)),
            );
        }
        let total: BigInt = terms.values().sum();
        let ud = &u[u.len() - 1];
        let expect = CyclotomicElement::from_integer(d as i128, total.clone())?;
        items.push(
            Item::new(format!("u_{d}"), format!("equals sum of c_r = {total}"))
                .observed(ud.to_string(), *ud == expect),
        );
    }
    Ok(VerdictReport::new(TheoremId::PowerSum, hypothesis, items))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 1_000_000;

    fn sys(pairs: &[(i128, i128)]) -> ResidueSystem {
        ResidueSystem::from_pairs(pairs).unwrap()
    }

    fn fixture() -> ResidueSystem {
        sys(&[(1, 2), (2, 4), (1, 3), (2, 6), (0, 12)])
    }

    fn weighted_example() -> ResidueSystem {
        let base = sys(&[(0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]);
        ResidueSystem::with_weights(base.classes().to_vec(), vec![3, 3, -2, -2, -2]).unwrap()
    }

    #[test]
    fn theorem_1_1_examples() {
        let r = check_theorem_1_1(&sys(&[(0, 2), (0, 2)]), 2, CAP).unwrap();
        assert!(r.hypothesis.satisfied);
        assert_eq!(r.items.len(), 2);
        assert_eq!(r.verdict, Verdict::Consistent);

        let r = check_theorem_1_1(&fixture(), 2, CAP).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisNotSatisfied);

        let r = check_theorem_1_1(&sys(&[(0, 2), (1, 4), (3, 4)]), 100, CAP).unwrap();
        assert!(r.hypothesis.satisfied);
        assert_eq!(r.items.len(), 3);
        assert_eq!(r.items[1].witness.as_deref(), Some("s=3 [3(4)]"));
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn theorem_1_1_records_cyclotomic_evidence() {
        // m = 1 always satisfies the hypothesis; 12 is the lone maximal modulus
        let r = check_theorem_1_1(&fixture(), 1, CAP).unwrap();
        assert!(r.hypothesis.satisfied);
        assert!(r.items.is_empty());
        assert_eq!(r.evidence.len(), 1);
        assert_eq!(r.evidence[0].observed, "1");
        assert!(r.evidence_holds());
    }

    #[test]
    fn verifier_preconditions() {
        let one = sys(&[(0, 2)]);
        assert_eq!(check_theorem_1_1(&one, 2, CAP).unwrap_err(), Error::TooFewClasses(1));
        assert_eq!(check_corollary_1_2(&one, CAP).unwrap_err(), Error::TooFewClasses(1));
        assert_eq!(check_theorem_1_1(&fixture(), 0, CAP).unwrap_err(), Error::InvalidModulus(0));
        assert_eq!(
            check_theorem_1_1(&weighted_example(), 2, CAP).unwrap_err(),
            Error::NonUnitWeights
        );
        assert!(matches!(
            check_theorem_1_1(&fixture(), 2, 5),
            Err(Error::PeriodTooLarge { .. })
        ));
    }

    #[test]
    fn corollary_1_1_examples() {
        let r = check_corollary_1_1(&sys(&[(0, 2), (1, 4), (3, 4)]), CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert_eq!(r.items.last().unwrap().observed, "4, 4");
        let r = check_corollary_1_1(&sys(&[(0, 2), (1, 2)]), CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        let r = check_corollary_1_1(&fixture(), CAP).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisNotSatisfied);
    }

    #[test]
    fn corollary_1_2_examples() {
        let r = check_corollary_1_2(&fixture(), CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert_eq!(r.items[0].observed, "g = 1");
        assert_eq!(r.items[1].witness.as_deref(), Some("even w(1) = 2, odd w(0) = 1"));

        let r = check_corollary_1_2(&sys(&[(0, 2), (0, 2)]), CAP).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisNotSatisfied);

        let r = check_corollary_1_2(&sys(&[(0, 2), (1, 3)]), CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn theorem_1_2_examples() {
        let a = sys(&[(0, 2), (1, 4)]);
        let r = check_theorem_1_2(&a, &a, 8, CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert_eq!(r.trace, vec!["d = 4: matched 1(4)", "d = 2: matched 0(2)"]);

        let b = sys(&[(0, 2), (3, 4)]);
        for m in [3, 5, 6, 7, 8, 9, 100] {
            let r = check_theorem_1_2(&a, &b, m, CAP).unwrap();
            assert_eq!(r.verdict, Verdict::HypothesisNotSatisfied, "m = {m}");
        }
        // m divides N
        let r = check_theorem_1_2(&a, &a, 2, CAP).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisNotSatisfied);
    }

    #[test]
    fn theorem_1_2_rejects_repeated_moduli() {
        let a = sys(&[(0, 2), (1, 2)]);
        let b = sys(&[(0, 2)]);
        assert_eq!(check_theorem_1_2(&a, &b, 3, CAP).unwrap_err(), Error::RepeatedModulus(2));
        assert_eq!(check_theorem_1_2(&b, &a, 3, CAP).unwrap_err(), Error::RepeatedModulus(2));
    }

    #[test]
    fn theorem_1_2_order_independent() {
        let a = sys(&[(1, 3), (0, 2), (5, 6)]);
        let b = sys(&[(5, 6), (1, 3), (0, 2)]);
        let r = check_theorem_1_2(&a, &b, 0, CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn theorem_1_3_worked_case() {
        let s = weighted_example();
        let prof = profile(&s, CAP).unwrap();
        assert!(prof.values().iter().all(|&v| v == 1));

        let ctx = theorem_1_3_context(&s, 0, &prof);
        assert_eq!(ctx.n0, 1);
        let ds: Vec<u64> = ctx.records.iter().map(|r| r.d).collect();
        assert_eq!(ds, vec![2, 3]);
        assert_eq!(ctx.records[0].weighted_sum, BigInt::from(18));
        assert_eq!(ctx.records[1].weighted_sum, BigInt::from(-12));
        assert_eq!(ctx.records[0].chain(), [2, 2, 2, 2]);
        assert_eq!(ctx.records[1].chain(), [3, 3, 3, 3]);
        assert!(ctx.records.iter().all(|r| !r.divisibility_branch && r.chain_holds));
        assert_eq!(check_theorem_1_3(&s, 0, CAP).unwrap().verdict, Verdict::Consistent);

        let ctx = theorem_1_3_context(&s, 2, &prof);
        assert_eq!(ctx.n0, 1);
        assert!(ctx.records.iter().all(|r| r.divisibility_branch));
        assert_eq!(check_theorem_1_3(&s, 2, CAP).unwrap().verdict, Verdict::Consistent);
    }

    #[test]
    fn theorem_1_3_vacuous_on_fixture() {
        let r = check_theorem_1_3(&fixture(), 0, CAP).unwrap();
        assert!(r.items.is_empty());
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn theorem_1_3_when_every_class_is_in_i_d() {
        // w ≡ 1 so n0 = 1, and d = 2 divides every modulus
        let s = sys(&[(0, 2), (1, 2)]);
        let prof = profile(&s, CAP).unwrap();
        let ctx = theorem_1_3_context(&s, 0, &prof);
        assert_eq!(ctx.n0, 1);
        let rec = ctx.records.iter().find(|r| r.d == 2).unwrap();
        assert_eq!(rec.indices, vec![0, 1]);
        assert_eq!(rec.min_ratio, 2);
        assert_eq!(rec.chain(), [2, 2, 2, 2]);
        assert_eq!(check_theorem_1_3(&s, 0, CAP).unwrap().verdict, Verdict::Consistent);
    }

    #[test]
    fn power_sum_examples() {
        let terms = BTreeMap::from([(1, BigInt::from(1)), (3, BigInt::from(1))]);
        let u = power_sums(&terms, 4, 4).unwrap();
        let ints: Vec<_> = [0, -2, 0, 2]
            .iter()
            .map(|&v| CyclotomicElement::from_integer(4, v).unwrap())
            .collect();
        assert_eq!(u, ints);
        let r = power_sum_evidence(&terms, 4, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);

        let zero = BTreeMap::from([(0, BigInt::zero()), (2, BigInt::zero())]);
        for m in [0, 1, 5] {
            assert_eq!(power_sum_evidence(&zero, 5, m).unwrap().verdict, Verdict::Consistent);
        }
        let any = BTreeMap::from([(1, BigInt::from(7)), (4, BigInt::from(-3))]);
        assert_eq!(power_sum_evidence(&any, 6, 1).unwrap().verdict, Verdict::Consistent);
    }

    #[test]
    fn power_sum_range_check() {
        let bad = BTreeMap::from([(5, BigInt::from(1))]);
        assert_eq!(
            power_sum_evidence(&bad, 5, 2).unwrap_err(),
            Error::ResidueOutOfRange { residue: 5, order: 5 }
        );
    }

    #[test]
    fn power_sums_are_periodic() {
        let terms = BTreeMap::from([(1, BigInt::from(2)), (2, BigInt::from(-1)), (5, BigInt::from(3))]);
        let u = power_sums(&terms, 6, 18).unwrap();
        for n in 0..12 {
            assert_eq!(u[n], u[n + 6]);
        }
    }

    #[test]
    fn report_invariants() {
        let h = |s| Hypothesis { satisfied: s, explanation: String::new() };
        let pass = Item::new("a", "b").observed("c", true);
        let fail = Item::new("a", "b").observed("c", false);
        let v = |hyp, items| VerdictReport::new(TheoremId::Theorem11, hyp, items).verdict;
        assert_eq!(v(h(true), vec![pass.clone()]), Verdict::Consistent);
        assert_eq!(v(h(true), vec![pass.clone(), fail.clone()]), Verdict::Falsified);
        assert_eq!(v(h(false), vec![fail]), Verdict::HypothesisNotSatisfied);
        assert_eq!(v(h(true), vec![]), Verdict::Consistent);
    }

    #[test]
    fn theorem_ids_round_trip() {
        for id in ["1.1", "c1.1", "c1.2", "1.2", "1.3", "power-sum"] {
            assert_eq!(id.parse::<TheoremId>().unwrap().to_string(), id);
        }
        assert!("2.1".parse::<TheoremId>().is_err());
    }
}

//! Exact arithmetic in ℤ[ζ_d] and the exponential sums attached to a
//! residue system.
//!
//! An element of order `d` is stored in the power basis `1, ζ, …, ζ^{φ(d)−1}`,
//! fully reduced modulo the cyclotomic polynomial Φ_d. Since ℤ[ζ_d] is the
//! whole ring of integers of ℚ(ζ_d), an element is divisible by a rational
//! integer `m` among algebraic integers iff `m` divides every coordinate.
//!
//! Elements of different orders are compared by lifting both into the
//! order `lcm(d, d')` through `ζ_d = ζ_D^{D/d}`. Arithmetic itself requires
//! matching orders; use [`CyclotomicElement::lift`] first.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::analysis::profile;
use crate::arith::{divisors, euler_phi};
use crate::error::{Error, Result};
use crate::polynomial::{write_terms, IntPolynomial};
use crate::residue::ResidueSystem;

struct Modulus {
    poly: IntPolynomial,
    degree: usize,
    /// Nonzero non-leading terms of Φ_d.
    tail: Vec<(usize, BigInt)>,
    /// The same terms as machine integers, when they fit.
    small_tail: Option<Vec<(usize, i128)>>,
}

fn table() -> &'static Mutex<HashMap<u64, Arc<Modulus>>> {
    static TABLE: OnceLock<Mutex<HashMap<u64, Arc<Modulus>>>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

fn modulus(d: u64) -> Arc<Modulus> {
    if let Some(m) = table().lock().unwrap().get(&d) {
        return m.clone();
    }
    // x^d − 1 = ∏_{e | d} Φ_e, so Φ_d is what remains after dividing out
    // every Φ_e with e a proper divisor.
    let mut poly = IntPolynomial::x_pow_minus_one(d as usize);
    for e in divisors(d) {
        if e == d {
            continue;
        }
        let (q, r) = poly.div_rem_monic(&modulus(e).poly);
        debug_assert!(r.is_zero(), "Φ_{e} does not divide x^{d} - 1");
        poly = q;
    }
    let degree = poly.degree().expect("Φ_d is nonzero");
    debug_assert_eq!(degree as u64, euler_phi(d));
    let tail: Vec<(usize, BigInt)> = poly.coeffs()[..degree]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect();
    let small_tail = tail
        .iter()
        .map(|(i, c)| c.to_i128().map(|c| (*i, c)))
        .collect::<Option<Vec<_>>>();
    let m = Arc::new(Modulus {
        poly,
        degree,
        tail,
        small_tail,
    });
    table().lock().unwrap().entry(d).or_insert(m).clone()
}

fn check_order(d: i128) -> Result<u64> {
    if d <= 0 {
        return Err(Error::InvalidOrder(d));
    }
    let d = u64::try_from(d).map_err(|_| Error::InvalidOrder(d))?;
    if usize::try_from(d).is_err() {
        return Err(Error::InvalidOrder(d as i128));
    }
    Ok(d)
}

/// The `d`-th cyclotomic polynomial Φ_d.
pub fn cyclotomic_poly(d: i128) -> Result<IntPolynomial> {
    Ok(modulus(check_order(d)?).poly.clone())
}

/// Reduces `Σ coeffs[i]·ζ^i` modulo Φ_d, folding exponents mod `d` first.
fn reduce(d: u64, mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    let d_us = d as usize;
    if coeffs.len() > d_us {
        let high = coeffs.split_off(d_us);
        for (i, c) in high.into_iter().enumerate() {
            coeffs[i % d_us] += c;
        }
    }
    let m = modulus(d);
    if let Some(reduced) = reduce_small(&m, &coeffs) {
        return reduced;
    }
    for i in (m.degree..coeffs.len()).rev() {
        let lead = std::mem::take(&mut coeffs[i]);
        if lead.is_zero() {
            continue;
        }
        for (j, c) in &m.tail {
            coeffs[i - m.degree + j] -= &lead * c;
        }
    }
    coeffs.resize(m.degree, BigInt::zero());
    coeffs
}

/// Overflow-checked machine-integer reduction; `None` sends the caller to
/// the big-integer path.
fn reduce_small(m: &Modulus, coeffs: &[BigInt]) -> Option<Vec<BigInt>> {
    let tail = m.small_tail.as_ref()?;
    let mut work = coeffs.iter().map(ToPrimitive::to_i128).collect::<Option<Vec<i128>>>()?;
    for i in (m.degree..work.len()).rev() {
        let lead = std::mem::take(&mut work[i]);
        if lead == 0 {
            continue;
        }
        for &(j, c) in tail {
            let slot = &mut work[i - m.degree + j];
            *slot = slot.checked_sub(lead.checked_mul(c)?)?;
        }
    }
    work.truncate(m.degree);
    work.resize(m.degree, 0);
    Some(work.into_iter().map(BigInt::from).collect())
}

/// An element of ℤ[ζ_d] in reduced power-basis form.
#[derive(Debug, Clone, Serialize)]
pub struct CyclotomicElement {
    order: u64,
    #[serde(serialize_with = "crate::ser::seq_as_display")]
    coeffs: Vec<BigInt>,
}

impl CyclotomicElement {
    pub fn zero(d: i128) -> Result<Self> {
        let order = check_order(d)?;
        Ok(Self {
            order,
            coeffs: vec![BigInt::zero(); modulus(order).degree],
        })
    }

    pub fn from_integer(d: i128, value: impl Into<BigInt>) -> Result<Self> {
        Self::from_exponents(d, &[(0, value.into())])
    }

    /// `ζ_d^e`, with `e` taken mod `d`.
    pub fn from_root(d: i128, e: i128) -> Result<Self> {
        Self::from_exponents(d, &[(e, BigInt::from(1))])
    }

    /// `Σ c·ζ_d^e` over the given `(e, c)` terms.
    pub fn from_exponents(d: i128, terms: &[(i128, BigInt)]) -> Result<Self> {
        let order = check_order(d)?;
        let mut acc = vec![BigInt::zero(); order as usize];
        for (e, c) in terms {
            acc[e.rem_euclid(order as i128) as usize] += c;
        }
        Ok(Self::from_dense(order, acc))
    }

    /// Wraps a vector indexed by exponent (any length); reduces it.
    pub(crate) fn from_dense(order: u64, coeffs: Vec<BigInt>) -> Self {
        Self {
            order,
            coeffs: reduce(order, coeffs),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Power-basis coordinates, length φ(order).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_order(&self, rhs: &Self) -> Result<()> {
        if self.order == rhs.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                lhs: self.order,
                rhs: rhs.order,
            })
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_order(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_order(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.same_order(rhs)?;
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); (2 * n).saturating_sub(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_dense(self.order, out))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_integer(self.order as i128, 1).expect("valid order");
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same order");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same order");
            }
        }
        acc
    }

    /// Re-expresses the element in order `target`, a multiple of the
    /// current order, via `ζ_d = ζ_target^{target/d}`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if target == 0 || !target.is_multiple_of(self.order) {
            return Err(Error::OrderMismatch {
                lhs: self.order,
                rhs: target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let mut dense = vec![BigInt::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            dense[i * step] = c.clone();
        }
        Ok(Self::from_dense(target, dense))
    }

    /// Whether `self / m` is an algebraic integer; for `m = 0`, whether
    /// `self` is zero.
    pub fn divisible_by(&self, m: &BigUint) -> bool {
        if m.is_zero() {
            return self.is_zero();
        }
        let m = BigInt::from(m.clone());
        self.coeffs.iter().all(|c| c.is_multiple_of(&m))
    }
}

/// Free-function form of [`CyclotomicElement::divisible_by`].
pub fn divisible_by_integer(x: &CyclotomicElement, m: u64) -> bool {
    x.divisible_by(&BigUint::from(m))
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let common = self.order.lcm(&other.order);
        match (self.lift(common), other.lift(common)) {
            (Ok(a), Ok(b)) => a.coeffs == b.coeffs,
            _ => false,
        }
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, "ζ")
    }
}

/// A rational frequency `α = c/d` in lowest terms with `0 < c < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Frequency {
    numerator: u64,
    denominator: u64,
}

impl Frequency {
    /// Normalizes `c/d`; it must not be an integer and its denominator
    /// must divide `period` (that is, `α·N ∈ ℤ`).
    pub fn new(c: i128, d: i128, period: &BigUint) -> Result<Self> {
        let invalid = |reason| Error::InvalidFrequency { c, d, reason };
        if d <= 0 {
            return Err(invalid("denominator must be positive"));
        }
        let g = c.gcd(&d);
        let (num, den) = (c / g, d / g);
        if den == 1 {
            return Err(invalid("frequency is an integer"));
        }
        let den = u64::try_from(den).map_err(|_| invalid("denominator too large"))?;
        if !(period % den).is_zero() {
            return Err(invalid("denominator does not divide the period"));
        }
        Ok(Self {
            numerator: num.rem_euclid(den as i128) as u64,
            denominator: den,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// `Σ λₛ·(N/nₛ)·ζ^{c·aₛ}` over classes with `α·nₛ ∈ ℤ`, where `α = c/d`
/// and ζ is a primitive root of order equal to the reduced denominator.
pub fn exp_sum(system: &ResidueSystem, c: i128, d: i128) -> Result<CyclotomicElement> {
    let freq = Frequency::new(c, d, system.lcm())?;
    Ok(exp_sum_at(system, freq))
}

pub fn exp_sum_at(system: &ResidueSystem, freq: Frequency) -> CyclotomicElement {
    let d = freq.denominator;
    let mut dense = vec![BigInt::zero(); d as usize];
    for (s, class) in system.classes().iter().enumerate() {
        if class.modulus() % d != 0 {
            continue;
        }
        let e = mul_mod(freq.numerator, class.residue(), d);
        dense[e as usize] += BigInt::from(system.cofactor(s)) * system.weight(s);
    }
    CyclotomicElement::from_dense(d, dense)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `Σ_{r < N} w(r)·ζ^{c·r}`, evaluated from a dense profile.
pub fn profile_exp_sum(system: &ResidueSystem, freq: Frequency, cap: u64) -> Result<CyclotomicElement> {
    let prof = profile(system, cap)?;
    Ok(profile_exp_sum_of(prof.values(), freq))
}

pub(crate) fn profile_exp_sum_of(values: &[i64], freq: Frequency) -> CyclotomicElement {
    let d = freq.denominator;
    let mut buckets = vec![0i128; d as usize];
    let step = freq.numerator % d;
    let mut e = 0u64;
    for &v in values {
        buckets[e as usize] += v as i128;
        e += step;
        if e >= d {
            e -= d;
        }
    }
    CyclotomicElement::from_dense(d, buckets.into_iter().map(BigInt::from).collect())
}

/// Checks the generating-function identity
/// `Σ_{r<N} w(r) e^{2πiαr} = Σ_{α nₛ ∈ ℤ} λₛ (N/nₛ) e^{2πiα aₛ}` exactly.
pub fn fourier_identity_check(system: &ResidueSystem, c: i128, d: i128, cap: u64) -> Result<bool> {
    let freq = Frequency::new(c, d, system.lcm())?;
    Ok(profile_exp_sum(system, freq, cap)? == exp_sum_at(system, freq))
}

/// Every valid frequency for period `n`: `r/n` for `1 ≤ r < n`, reduced.
pub fn all_frequencies(n: u64) -> Vec<Frequency> {
    (1..n)
        .map(|r| {
            let g = r.gcd(&n);
            Frequency {
                numerator: r / g,
                denominator: n / g,
            }
        })
        .collect()
}

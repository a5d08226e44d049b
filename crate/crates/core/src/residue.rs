//! Residue classes `a(n)` and finite systems of them.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// The residue class `{x : x ≡ residue (mod modulus)}`, with the residue
/// kept in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidueClass {
    residue: u64,
    modulus: u64,
}

impl ResidueClass {
    /// Builds `a(n)`, reducing `a` into `[0, n)`.
    pub fn new(a: i128, n: i128) -> Result<Self> {
        if n <= 0 || n > u64::MAX as i128 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Self {
            residue: a.rem_euclid(n) as u64,
            modulus: n as u64,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        reduce_big(x, self.modulus) == self.residue
    }

    pub fn contains_u64(&self, x: u64) -> bool {
        x % self.modulus == self.residue
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.residue, self.modulus)
    }
}

/// `x mod n` in `[0, n)` for an arbitrary-size integer.
pub(crate) fn reduce_big(x: &BigInt, n: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(n));
    r.to_u64().expect("remainder below a u64 modulus")
}

/// An ordered, nonempty list of residue classes with optional integer
/// weights. Without weights every class counts once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueSystem {
    classes: Vec<ResidueClass>,
    weights: Option<Vec<i64>>,
    #[serde(skip)]
    lcm: BigUint,
}

impl ResidueSystem {
    pub fn new(classes: Vec<ResidueClass>) -> Result<Self> {
        Self::build(classes, None)
    }

    pub fn with_weights(classes: Vec<ResidueClass>, weights: Vec<i64>) -> Result<Self> {
        Self::build(classes, Some(weights))
    }

    /// Convenience constructor from raw `(a, n)` pairs.
    pub fn from_pairs(pairs: &[(i128, i128)]) -> Result<Self> {
        let classes = pairs
            .iter()
            .map(|&(a, n)| ResidueClass::new(a, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(classes)
    }

    fn build(classes: Vec<ResidueClass>, weights: Option<Vec<i64>>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::EmptySystem);
        }
        if let Some(w) = &weights {
            if w.len() != classes.len() {
                return Err(Error::WeightLengthMismatch {
                    classes: classes.len(),
                    weights: w.len(),
                });
            }
            // every partial sum of weights must fit in an i64
            let total: i128 = w.iter().map(|&x| (x as i128).abs()).sum();
            if total > i64::MAX as i128 {
                return Err(Error::WeightOverflow);
            }
        } else if classes.len() as u128 > i64::MAX as u128 {
            return Err(Error::WeightOverflow);
        }
        let lcm = classes
            .iter()
            .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.modulus)));
        Ok(Self {
            classes,
            weights,
            lcm,
        })
    }

    pub fn classes(&self) -> &[ResidueClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Explicit weights, if any were supplied.
    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, s: usize) -> i64 {
        self.weights.as_ref().map_or(1, |w| w[s])
    }

    /// True when every class has weight 1 (explicitly or by default).
    pub fn has_unit_weights(&self) -> bool {
        self.weights
            .as_ref()
            .is_none_or(|w| w.iter().all(|&x| x == 1))
    }

    pub fn moduli(&self) -> impl Iterator<Item = u64> + '_ {
        self.classes.iter().map(|c| c.modulus)
    }

    pub fn has_distinct_moduli(&self) -> bool {
        self.repeated_modulus().is_none()
    }

    pub(crate) fn repeated_modulus(&self) -> Option<u64> {
        let mut seen = std::collections::HashSet::new();
        self.moduli().find(|&n| !seen.insert(n))
    }

    /// N, the least common multiple of all moduli.
    pub fn lcm(&self) -> &BigUint {
        &self.lcm
    }

    /// `N / nₛ` for class `s`; always an exact integer.
    pub fn cofactor(&self, s: usize) -> BigUint {
        &self.lcm / self.classes[s].modulus
    }

    /// The (weighted) covering function `w(x) = Σ λₛ` over classes containing `x`.
    pub fn multiplicity(&self, x: &BigInt) -> i64 {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(x))
            .map(|(s, _)| self.weight(s))
            .sum()
    }

    pub fn multiplicity_at(&self, x: i64) -> i64 {
        if x >= 0 {
            self.multiplicity_u64(x as u64)
        } else {
            self.multiplicity(&BigInt::from(x))
        }
    }

    pub(crate) fn multiplicity_u64(&self, x: u64) -> i64 {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains_u64(x))
            .map(|(s, _)| self.weight(s))
            .sum()
    }

    /// The same classes with all weights reset to 1.
    pub fn unweighted(&self) -> Self {
        Self {
            classes: self.classes.clone(),
            weights: None,
            lcm: self.lcm.clone(),
        }
    }

    /// `N` as a machine word if it does not exceed `cap`.
    pub(crate) fn period_within(&self, cap: u64) -> Result<u64> {
        match self.lcm.to_u64() {
            Some(n) if n <= cap && usize::try_from(n).is_ok() => Ok(n),
            _ => Err(Error::PeriodTooLarge {
                period: self.lcm.clone(),
                cap,
            }),
        }
    }
}

impl fmt::Display for ResidueSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (s, c) in self.classes.iter().enumerate() {
            if s > 0 {
                f.write_str(", ")?;
            }
            match &self.weights {
                Some(w) if w[s] != 1 => write!(f, "{}·{c}", w[s])?,
                _ => write!(f, "{c}")?,
            }
        }
        f.write_str("}")
    }
}

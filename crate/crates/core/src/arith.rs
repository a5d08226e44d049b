//! Small-integer number theory helpers: divisors, totients, smallest prime
//! factors. Everything here works on machine words; unbounded quantities
//! (lcm of a system, N/nₛ factors) live in `num_bigint` types elsewhere.

use num_integer::Integer;

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing prime order. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Smallest prime dividing `n`; `None` for `n = 1`.
pub fn smallest_prime_factor(n: u64) -> Option<u64> {
    factorize(n).first().map(|&(p, _)| p)
}

/// `m | z` with the convention that `0 | z` iff `z = 0`.
pub fn divides_i128(m: u64, z: i128) -> bool {
    if m == 0 {
        z == 0
    } else {
        z.rem_euclid(m as i128) == 0
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
    }

    #[test]
    fn divisors_match_brute_force() {
        for n in 1..=500 {
            assert_eq!(divisors(n), brute_divisors(n), "n = {n}");
        }
    }

    #[test]
    fn phi_matches_coprime_count() {
        for n in 1..=300u64 {
            let count = (1..=n).filter(|&r| r.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n), count, "n = {n}");
        }
    }

    #[test]
    fn smallest_prime() {
        assert_eq!(smallest_prime_factor(1), None);
        assert_eq!(smallest_prime_factor(2), Some(2));
        assert_eq!(smallest_prime_factor(45), Some(3));
        assert_eq!(smallest_prime_factor(97), Some(97));
        assert_eq!(smallest_prime_factor(91), Some(7));
    }

    #[test]
    fn zero_divides_only_zero() {
        assert!(divides_i128(0, 0));
        assert!(!divides_i128(0, 3));
        assert!(divides_i128(3, -12));
        assert!(!divides_i128(5, -12));
    }
}

//! Exact integer number theory primitives.
//!
//! Everything here operates on machine integers (`u64`/`i64`, with `u128`
//! intermediates), which comfortably covers the moduli that occur in the
//! pipeline (at most `16qkr`, well below 2^64). Arbitrary-precision work
//! (fundamental units, regulators) lives in [`crate::quadfield`].

use crate::error::{Error, Result};

/// `base^exp mod modulus`, by square-and-multiply. `modulus = 1` yields 0.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = (base as u128) % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Witness bases making Miller-Rabin deterministic for all n < 3.3 * 10^24,
/// in particular for the whole `u64` range (Sorenson & Webster).
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn miller_rabin_round(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = mod_pow(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = ((x as u128 * x as u128) % n as u128) as u64;
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    MR_WITNESSES
        .iter()
        .all(|&a| miller_rabin_round(n, a, d, s))
}

/// Primality for arbitrary-precision integers: deterministic below 2^64,
/// Miller-Rabin with 64 rounds (error < 2^-128) beyond.
pub fn is_prime_big(n: &rug::Integer) -> bool {
    use rug::integer::IsPrime;
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    if n.is_negative() {
        return false;
    }
    n.is_probably_prime(64) != IsPrime::No
}

/// All primes in `[2, limit]`, ascending. Returns an empty list for `limit < 2`.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(if n > 16 { n / (n.ilog2() as usize) } else { 8 });
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion.
///
/// This is deliberately a different code path from [`kronecker`]; the two are
/// cross-checked against each other in the test suite.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    let a_red = a.rem_euclid(p as i64) as u64;
    if a_red == 0 {
        return Ok(0);
    }
    let e = mod_pow(a_red, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Kronecker symbol `(a/n)`, the standard extension of Jacobi to all `n`.
pub fn kronecker(a: i64, n: i64) -> Result<i8> {
    if a == 0 && n == 0 {
        return Err(Error::UndefinedSymbol);
    }
    Ok(kronecker_inner(a, n))
}

fn kronecker_inner(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if n < 0 {
        let sign = if a < 0 { -1 } else { 1 };
        return sign * kronecker_inner(a, -n);
    }
    // factor out twos of n; (a/2) depends on a mod 8
    let mut n = n;
    let mut acc: i8 = 1;
    while n % 2 == 0 {
        if a % 2 == 0 {
            return 0;
        }
        let am8 = a.rem_euclid(8);
        if am8 == 3 || am8 == 5 {
            acc = -acc;
        }
        n /= 2;
    }
    if n == 1 {
        return acc;
    }
    // Jacobi symbol (a/n) for odd n > 1 by reciprocity flips.
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let nm8 = n % 8;
            if nm8 == 3 || nm8 == 5 {
                acc = -acc;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            acc = -acc;
        }
        a %= n;
    }
    if n == 1 {
        acc
    } else {
        0
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A system of simultaneous congruences `x = residues[i] (mod moduli[i])`
/// with pairwise coprime moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSystem {
    residues: Vec<u64>,
    moduli: Vec<u64>,
}

impl CongruenceSystem {
    /// Builds a system, reducing each residue into `[0, modulus)` and
    /// rejecting non-coprime moduli.
    pub fn new(residues: Vec<i64>, moduli: Vec<u64>) -> Result<Self> {
        assert_eq!(residues.len(), moduli.len());
        for (i, &m) in moduli.iter().enumerate() {
            assert!(m >= 1, "moduli must be positive");
            for &m2 in &moduli[i + 1..] {
                if gcd(m, m2) != 1 {
                    return Err(Error::ModuliNotCoprime(m, m2));
                }
            }
        }
        let residues = residues
            .iter()
            .zip(&moduli)
            .map(|(&r, &m)| r.rem_euclid(m as i64) as u64)
            .collect();
        Ok(CongruenceSystem { residues, moduli })
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Total modulus, the product of all moduli.
    pub fn modulus(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    // extended Euclid; gcd(a, m) = 1 guaranteed by the coprimality invariant
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u128
}

/// Chinese remainder solver: the unique solution of `system` in
/// `[0, modulus)` together with the total modulus.
pub fn crt(system: &CongruenceSystem) -> (u128, u128) {
    let big_m = system.modulus();
    let mut x: u128 = 0;
    for (&r, &m) in system.residues.iter().zip(&system.moduli) {
        let m = m as u128;
        let mi = big_m / m;
        let inv = mod_inverse(mi % m, m);
        x = (x + (r as u128) * (mi % big_m) % big_m * inv) % big_m;
    }
    (x, big_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mod_pow_oracle(base: u64, exp: u64, modulus: u64) -> u64 {
        // repeated multiplication
        let m = modulus as u128;
        if m == 1 {
            return 0;
        }
        let mut acc: u128 = 1;
        for _ in 0..exp {
            acc = acc * (base as u128 % m) % m;
        }
        acc as u64
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mod_pow_oracle(2, 10, 1000), 24);
        assert_eq!(mod_pow(5, 0, 7), 1);
        assert_eq!(mod_pow(7, 1, 13), 7);
        assert_eq!(mod_pow(3, 5, 1), 0);
    }

    #[test]
    fn is_prime_small() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(10868)); // 4 * 11 * 13 * 19
        assert!(is_prime(10867));
    }

    #[test]
    fn is_prime_matches_trial_division_to_1e6 () {
        let primes = sieve_primes(1_000_000);
        let mut idx = 0;
        for n in 0..=1_000_000u64 {
            let in_sieve = idx < primes.len() && primes[idx] == n;
            if in_sieve {
                idx += 1;
            }
            assert_eq!(is_prime(n), in_sieve, "disagreement at {n}");
        }
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2), vec![2]);
        assert!(sieve_primes(1).is_empty());
        assert_eq!(sieve_primes(1_000_000).len(), 78498);
    }

    /// Squares mod p by direct enumeration.
    fn legendre_oracle(a: i64, p: u64) -> i8 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        for x in 1..p {
            if x * x % p == a {
                return 1;
            }
        }
        -1
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(3, 11).unwrap(), 1);
        assert_eq!(legendre_oracle(3, 11), 1);
        assert_eq!(legendre(0, 7).unwrap(), 0);
        assert_eq!(legendre(7, 13).unwrap(), -1);
        assert_eq!(legendre_oracle(7, 13), -1);
        assert!(legendre(3, 12).is_err());
        assert!(legendre(3, 2).is_err());
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in sieve_primes(200).into_iter().skip(1) {
            for a in -20i64..50 {
                assert_eq!(legendre(a, p).unwrap(), legendre_oracle(a, p));
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        for a in -7i64..8 {
            assert_eq!(kronecker(a, 1).unwrap(), 1);
        }
        assert_eq!(kronecker(3, 11).unwrap(), 1);
        assert_eq!(kronecker(2, 2).unwrap(), 0);
        assert!(kronecker(0, 0).is_err());
    }

    #[test]
    fn kronecker_agrees_with_legendre_on_odd_primes() {
        for p in sieve_primes(300).into_iter().skip(1) {
            for a in -50i64..100 {
                assert_eq!(
                    kronecker(a, p as i64).unwrap(),
                    legendre(a, p).unwrap(),
                    "a={a} p={p}"
                );
            }
        }
    }

    #[test]
    fn quadratic_reciprocity_exhaustive_below_500() {
        let primes = sieve_primes(500);
        for &p in primes.iter().skip(1) {
            for &q in primes.iter().skip(1) {
                if p == q {
                    continue;
                }
                let lhs = legendre(p as i64, q).unwrap() * legendre(q as i64, p).unwrap();
                let rhs = if (p - 1) / 2 % 2 == 1 && (q - 1) / 2 % 2 == 1 {
                    -1
                } else {
                    1
                };
                assert_eq!(lhs as i64, rhs, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn crt_examples() {
        let s = CongruenceSystem::new(vec![3], vec![4]).unwrap();
        assert_eq!(crt(&s), (3, 4));
        let s = CongruenceSystem::new(vec![3, 1], vec![4, 3]).unwrap();
        assert_eq!(crt(&s), (7, 12));
        let s = CongruenceSystem::new(vec![0, 0, 0], vec![3, 5, 7]).unwrap();
        assert_eq!(crt(&s), (0, 105));
        assert!(matches!(
            CongruenceSystem::new(vec![1, 2], vec![6, 4]),
            Err(Error::ModuliNotCoprime(_, _))
        ));
    }

    #[test]
    fn crt_matches_brute_force_on_small_moduli() {
        let s = CongruenceSystem::new(vec![2, 3, 5], vec![5, 7, 11]).unwrap();
        let (x, m) = crt(&s);
        assert_eq!(m, 385);
        let hits: Vec<u128> = (0..m)
            .filter(|&c| c % 5 == 2 && c % 7 == 3 && c % 11 == 5)
            .collect();
        assert_eq!(hits, vec![x]);
    }

    proptest! {
        #[test]
        fn mod_pow_is_multiplicative_in_the_exponent(
            a in 0u64..1_000_000,
            e in 0u64..1000,
            f in 0u64..1000,
            m in 1u64..1_000_000,
        ) {
            let lhs = (mod_pow(a, e, m) as u128 * mod_pow(a, f, m) as u128 % m as u128) as u64;
            prop_assert_eq!(lhs, mod_pow(a, e + f, m));
        }

        #[test]
        fn legendre_is_multiplicative(
            a in 1i64..500,
            b in 1i64..500,
            pidx in 1usize..95,
        ) {
            let primes = sieve_primes(500);
            let p = primes[pidx];
            if a % p as i64 != 0 && b % p as i64 != 0 {
                prop_assert_eq!(
                    legendre(a * b, p).unwrap(),
                    legendre(a, p).unwrap() * legendre(b, p).unwrap()
                );
            }
        }

        #[test]
        fn crt_solution_satisfies_every_congruence(
            r1 in 0i64..1000, r2 in 0i64..1000, r3 in 0i64..1000,
        ) {
            // fixed pairwise coprime moduli, random residues
            let moduli = vec![16u64, 9, 35];
            let s = CongruenceSystem::new(vec![r1, r2, r3], moduli.clone()).unwrap();
            let (x, m) = crt(&s);
            prop_assert!(x < m);
            for (&r, &md) in s.residues().iter().zip(&moduli) {
                prop_assert_eq!(x % md as u128, r as u128);
            }
        }
    }
}

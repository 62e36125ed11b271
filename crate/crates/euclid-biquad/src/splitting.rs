//! Splitting behavior of rational primes in K and H(K), and empirical
//! Chebotarev densities.
//!
//! Residue degrees are read off Legendre symbol patterns: in a multiquadratic
//! field the Frobenius at an unramified odd prime has order 1 (all symbols
//! +1) or 2, so no ideal factorization machinery is needed.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, legendre, sieve_primes};
use crate::biquad::PrimeTriple;
use crate::error::{Error, Result};

/// How a rational prime behaves in K = Q(√q, √kr) and H(K) = Q(√q, √k, √r).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplittingProfile {
    pub p: u64,
    pub sym_q: i8,
    pub sym_k: i8,
    pub sym_r: i8,
    pub ramified: bool,
    /// p splits completely in K: (q/p) = 1 and (kr/p) = 1.
    pub in_xk: bool,
    /// p splits completely in H(K): (q/p) = (k/p) = (r/p) = 1.
    pub in_xh: bool,
    /// Residue degree of a prime of K above p.
    pub f_k: u8,
    /// Residue degree of a prime of H(K) above p.
    pub f_h: u8,
    /// p lies in X_K \ X_{H(K)}: the symbol pattern (+1, -1, -1).
    pub witnesses_generator: bool,
}

/// Computes the full profile of an odd prime p not in {q, k, r}.
/// Primes dividing the conductor come back flagged `ramified` with all
/// split flags false.
pub fn splitting_profile(p: u64, triple: &PrimeTriple) -> Result<SplittingProfile> {
    if !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    if p == 2 || p == triple.q || p == triple.k || p == triple.r {
        return Ok(SplittingProfile {
            p,
            sym_q: 0,
            sym_k: 0,
            sym_r: 0,
            ramified: true,
            in_xk: false,
            in_xh: false,
            f_k: 0,
            f_h: 0,
            witnesses_generator: false,
        });
    }
    let sym_q = legendre(triple.q as i64, p)?;
    let sym_k = legendre(triple.k as i64, p)?;
    let sym_r = legendre(triple.r as i64, p)?;
    let in_xk = sym_q == 1 && sym_k * sym_r == 1;
    let in_xh = sym_q == 1 && sym_k == 1 && sym_r == 1;
    Ok(SplittingProfile {
        p,
        sym_q,
        sym_k,
        sym_r,
        ramified: false,
        in_xk,
        in_xh,
        f_k: if in_xk { 1 } else { 2 },
        f_h: if in_xh { 1 } else { 2 },
        witnesses_generator: in_xk && !in_xh,
    })
}

/// Sufficient condition for the prime of K above p to be
/// non-principal (and hence a generator of Cl_K when h_K = 2): residue
/// degree 1 in K and 2 in H(K).
pub fn nonprincipal_witness(profile: &SplittingProfile) -> bool {
    !profile.ramified && profile.f_k == 1 && profile.f_h == 2
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DensityReport {
    pub x: u64,
    pub count_xk: u64,
    pub count_xh: u64,
    pub count_diff: u64,
    /// Unramified primes <= X (the density denominator).
    pub total_primes: u64,
    pub ratio_xk: f64,
    pub ratio_xh: f64,
    pub ratio_diff: f64,
}

/// Counts membership in X_K, X_{H(K)} and their difference over all
/// unramified primes up to X. Expected densities are 1/4, 1/8, 1/8.
pub fn density_estimate(triple: &PrimeTriple, x: u64) -> DensityReport {
    let primes = sieve_primes(x);
    let (total, cnt_xk, cnt_xh) = primes
        .par_chunks(16 * 1024)
        .map(|chunk| {
            let mut total = 0u64;
            let mut xk = 0u64;
            let mut xh = 0u64;
            for &p in chunk {
                if p == 2 || p == triple.q || p == triple.k || p == triple.r {
                    continue;
                }
                total += 1;
                let profile = splitting_profile(p, triple).expect("p prime");
                if profile.in_xk {
                    xk += 1;
                    if profile.in_xh {
                        xh += 1;
                    }
                }
            }
            (total, xk, xh)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    DensityReport {
        x,
        count_xk: cnt_xk,
        count_xh: cnt_xh,
        count_diff: cnt_xk - cnt_xh,
        total_primes: total,
        ratio_xk: cnt_xk as f64 / total as f64,
        ratio_xh: cnt_xh as f64 / total as f64,
        ratio_diff: (cnt_xk - cnt_xh) as f64 / total as f64,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorPrimes {
    pub u: u64,
    pub modulus: u64,
    pub x: u64,
    pub primes: Vec<u64>,
    pub count: u64,
}

/// All primes p <= X with p = u (mod modulus), each verified to lie in
/// X_K \ X_{H(K)}. These are the rational primes below the degree-1 prime
/// ideals feeding the growth criterion.
pub fn generator_prime_count(
    triple: &PrimeTriple,
    u: u64,
    modulus: u64,
    x: u64,
) -> Result<GeneratorPrimes> {
    let mut primes = Vec::new();
    let mut candidate = u % modulus;
    if candidate == 0 {
        candidate = modulus;
    }
    while candidate <= x {
        if is_prime(candidate) {
            let profile = splitting_profile(candidate, triple)?;
            if !profile.witnesses_generator {
                return Err(Error::CertificateInconsistent(format!(
                    "prime {candidate} = {u} (mod {modulus}) has symbols ({}, {}, {})",
                    profile.sym_q, profile.sym_k, profile.sym_r
                )));
            }
            primes.push(candidate);
        }
        candidate += modulus;
    }
    Ok(GeneratorPrimes { u, modulus, x, count: primes.len() as u64, primes })
}

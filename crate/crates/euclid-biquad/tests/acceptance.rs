//! Acceptance suite: one test per criterion, each printing a single
//! `[PASS]`/`[FAIL]` line before asserting. Run with `--nocapture` to see the
//! lines for passing criteria too.

use euclid_biquad::arith::{legendre, sieve_primes};
use euclid_biquad::biquad::{BiquadField, Precision, PrimeTriple};
use euclid_biquad::quadfield::{
    class_number_forms_oracle, class_number_quad, fundamental_discriminant, is_squarefree,
};
use euclid_biquad::splitting::{density_estimate, generator_prime_count};
use euclid_biquad::witness::{construct_u, least_qnr3, least_qr3, verify_certificate};

/// The 24 table triples: 12 with q = 3 (mod 4), 12 with q = 1 (mod 4).
const TABLE_TRIPLES: [(u64, u64, u64); 24] = [
    (11, 19, 13),
    (11, 23, 13),
    (11, 31, 13),
    (11, 43, 13),
    (11, 47, 13),
    (11, 59, 13),
    (11, 67, 13),
    (11, 71, 13),
    (19, 11, 13),
    (19, 23, 13),
    (19, 31, 13),
    (19, 43, 13),
    (13, 11, 37),
    (13, 11, 41),
    (29, 11, 37),
    (29, 11, 41),
    (29, 11, 73),
    (37, 11, 13),
    (37, 11, 29),
    (37, 11, 61),
    (37, 11, 109),
    (41, 11, 13),
    (41, 11, 29),
    (41, 11, 53),
];

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!("[{}] {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_01_table_reproduction() {
    let mut bad = Vec::new();
    for &(q, k, r) in &TABLE_TRIPLES {
        let t = PrimeTriple::new(q, k, r).unwrap();
        let h = euclid_biquad::biquad::class_number_biquad(&t, Precision::default()).unwrap();
        if h != 2 {
            bad.push(((q, k, r), h));
        }
    }
    verdict(
        "criterion 1 (table reproduction)",
        bad.is_empty(),
        &format!("24 triples, h_K = 2 expected for all; mismatches: {bad:?}"),
    );
}

#[test]
fn criterion_02_class_number_oracle_equivalence() {
    let mut bad = Vec::new();
    for d in 2..10_000u64 {
        if !is_squarefree(d) {
            continue;
        }
        let disc = fundamental_discriminant(d).unwrap();
        let analytic = class_number_quad(d).unwrap();
        let forms = class_number_forms_oracle(disc).unwrap();
        if analytic != forms {
            bad.push((d, analytic, forms));
        }
    }
    verdict(
        "criterion 2 (Dirichlet vs form-cycle oracle, squarefree d < 10^4)",
        bad.is_empty(),
        &format!("mismatches: {bad:?}"),
    );
}

#[test]
fn criterion_03_kubota_consistency() {
    let mut bad = Vec::new();
    for &(q, k, r) in &TABLE_TRIPLES {
        let t = PrimeTriple::new(q, k, r).unwrap();
        let f = BiquadField::from_triple(&t, Precision::default()).unwrap();
        let ok = [1, 2, 4, 8].contains(&f.unit_index)
            && 4 * f.h_k == f.unit_index * f.sub1.h * f.sub2.h * f.sub3.h;
        if !ok {
            bad.push(((q, k, r), f.unit_index, f.sub1.h, f.sub2.h, f.sub3.h, f.h_k));
        }
    }
    verdict(
        "criterion 3 (Kubota: 4 h_K = Q h1 h2 h3, Q in {1,2,4,8})",
        bad.is_empty(),
        &format!("violations: {bad:?}"),
    );
}

#[test]
fn criterion_04_densities_at_1e6() {
    let mut detail = String::new();
    let mut ok = true;
    for (q, k, r) in [(11, 19, 13), (13, 11, 37), (41, 11, 53)] {
        let t = PrimeTriple::new(q, k, r).unwrap();
        let rep = density_estimate(&t, 1_000_000);
        let here = (rep.ratio_xk - 0.25).abs() <= 0.005 && (rep.ratio_diff - 0.125).abs() <= 0.005;
        ok &= here;
        detail.push_str(&format!(
            "({q},{k},{r}): X_K {:.4}, X_K\\X_H {:.4}; ",
            rep.ratio_xk, rep.ratio_diff
        ));
    }
    verdict(
        "criterion 4 (densities 0.25/0.125 within 0.005 at X = 10^6)",
        ok,
        detail.trim_end(),
    );
}

#[test]
fn criterion_05_q1_q2_exhaustive() {
    let excluded = [2u64, 3, 5, 7, 17];
    let mut qr_failures = Vec::new();
    let mut qnr_failures = Vec::new();
    for p in sieve_primes(1_000_000) {
        if !excluded.contains(&p) && least_qr3(p).is_err() {
            qr_failures.push(p);
        }
        if p >= 5 && least_qnr3(p).is_err() {
            qnr_failures.push(p);
        }
    }
    verdict(
        "criterion 5 (least_qr3 / least_qnr3 exist for all primes < 10^6)",
        qr_failures.is_empty() && qnr_failures.is_empty(),
        &format!("qr3 failures: {qr_failures:?}, qnr3 failures: {qnr_failures:?}"),
    );
}

#[test]
fn criterion_06_witness_round_trip() {
    let mut bad = Vec::new();
    for &(q, k, r) in &TABLE_TRIPLES {
        let t = PrimeTriple::new(q, k, r).unwrap();
        let cert = construct_u(&t, euclid_biquad::witness::DEFAULT_PRIME_SEARCH_BOUND).unwrap();
        let symbols_ok = legendre(q as i64, cert.u).unwrap() == 1
            && legendre(k as i64, cert.u).unwrap() == -1
            && legendre(r as i64, cert.u).unwrap() == -1;
        if !(verify_certificate(&cert).pass && symbols_ok) {
            bad.push(((q, k, r), cert.u));
        }
    }
    verdict(
        "criterion 6 (witness construct/verify round trip, e1 symbols)",
        bad.is_empty(),
        &format!("24 triples; failures: {bad:?}"),
    );
}

#[test]
fn criterion_07_reciprocity_identity() {
    let mut bad = Vec::new();
    for &(q, k, r) in &TABLE_TRIPLES {
        let t = PrimeTriple::new(q, k, r).unwrap();
        let u = construct_u(&t, euclid_biquad::witness::DEFAULT_PRIME_SEARCH_BOUND)
            .unwrap()
            .u;
        for s in [q, k, r] {
            let lhs = legendre(s as i64, u).unwrap() as i32;
            let sign = if ((s - 1) / 2) % 2 == 1 && ((u - 1) / 2) % 2 == 1 { -1 } else { 1 };
            let rhs = sign * legendre(u as i64, s).unwrap() as i32;
            if lhs != rhs {
                bad.push((s, u));
            }
        }
    }
    verdict(
        "criterion 7 (quadratic reciprocity for every (s, u) pair)",
        bad.is_empty(),
        &format!("failures: {bad:?}"),
    );
}

#[test]
fn criterion_08_growth_qualitative() {
    let t = PrimeTriple::new(11, 19, 13).unwrap();
    let cert = construct_u(&t, euclid_biquad::witness::DEFAULT_PRIME_SEARCH_BOUND).unwrap();
    let c4 = generator_prime_count(&t, cert.u, cert.modulus, 10_000).unwrap().count;
    let c5 = generator_prime_count(&t, cert.u, cert.modulus, 100_000).unwrap().count;
    let x = 100_000f64;
    let floor = 0.5 * x / x.ln().powi(2);
    let increasing = c5 > c4;
    let bounded = (c5 as f64) >= floor;
    verdict(
        "criterion 8 (generator prime growth)",
        increasing && bounded,
        &format!(
            "count(10^4) = {c4}, count(10^5) = {c5}, strictly increasing: {increasing}; \
             required count(10^5) >= 0.5 X/(ln X)^2 = {floor:.0}: {bounded} \
             (the progression u mod 4qkr has prime density 1/phi(4qkr) = 1/4320, \
             so this floor is not attainable at desk scale)"
        ),
    );
}

#[test]
fn criterion_09_unramifiedness() {
    let mut bad = Vec::new();
    for &(q, k, r) in &TABLE_TRIPLES {
        let t = PrimeTriple::new(q, k, r).unwrap();
        let rep = euclid_biquad::biquad::verify_unramified(&t).unwrap();
        let ps: Vec<u64> = rep.entries.iter().map(|e| e.p).collect();
        if !(rep.all_ok && ps == vec![2, q, k, r]) {
            bad.push((q, k, r));
        }
    }
    verdict(
        "criterion 9 (H(K)/K unramified at p in {2, q, k, r}, 24 triples)",
        bad.is_empty(),
        &format!("failures: {bad:?}"),
    );
}

#[test]
fn criterion_10_determinism() {
    let run = || {
        std::process::Command::new(env!("CARGO_BIN_EXE_euclid-biquad"))
            .args(["--format", "json-lines", "verify-theorem", "11", "19", "13"])
            .output()
            .expect("spawn CLI")
    };
    let a = run();
    let b = run();
    verdict(
        "criterion 10 (byte-identical verify-theorem runs)",
        a.stdout == b.stdout && !a.stdout.is_empty(),
        &format!("{} bytes vs {} bytes", a.stdout.len(), b.stdout.len()),
    );
}

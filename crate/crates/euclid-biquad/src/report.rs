//! Machine-readable records for CLI output.
//!
//! Every integer field is emitted as a decimal string so consumers never
//! hit precision limits in their JSON parsers. Each record carries the
//! schema version tag.

use serde_json::{json, Value};

use crate::biquad::{BiquadField, HilbertClassField, PrimeTriple, UnramifiedReport};
use crate::splitting::{DensityReport, GeneratorPrimes, SplittingProfile};
use crate::witness::{VerifyReport, WitnessCertificate};

pub const SCHEMA: &str = "euclid-biquad/1";

fn s(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn triple_value(t: &PrimeTriple) -> Value {
    json!({
        "q": s(t.q), "k": s(t.k), "r": s(t.r),
        "classes_mod4": [t.classes_mod4.0, t.classes_mod4.1, t.classes_mod4.2],
        "eligible": t.eligible,
    })
}

pub fn class_number_record(f: &BiquadField) -> Value {
    json!({
        "schema": SCHEMA,
        "record": "class-number",
        "triple": triple_value(&f.triple),
        "m1": s(f.m1), "m2": s(f.m2),
        "subfields": [
            {"d": s(f.sub1.d), "disc": s(f.sub1.disc), "h": s(f.sub1.h)},
            {"d": s(f.sub2.d), "disc": s(f.sub2.disc), "h": s(f.sub2.h)},
            {"d": s(f.sub3.d), "disc": s(f.sub3.disc), "h": s(f.sub3.h)},
        ],
        "unit_index": s(f.unit_index),
        "h_K": s(f.h_k),
        "conductor": s(f.conductor),
    })
}

pub fn profile_value(p: &SplittingProfile) -> Value {
    json!({
        "p": s(p.p),
        "symbols": [p.sym_q, p.sym_k, p.sym_r],
        "ramified": p.ramified,
        "in_XK": p.in_xk,
        "in_XH": p.in_xh,
        "f_K": p.f_k,
        "f_H": p.f_h,
        "witnesses_generator": p.witnesses_generator,
    })
}

pub fn witness_record(cert: &WitnessCertificate, verify: &VerifyReport) -> Value {
    json!({
        "schema": SCHEMA,
        "record": "witness",
        "triple": triple_value(&cert.triple),
        "case": format!("{:?}", cert.case_id),
        "auxiliary_primes": [s(cert.p1), s(cert.p2), s(cert.p3)],
        "x0": s(cert.x0),
        "u": s(cert.u),
        "modulus": s(cert.modulus),
        "l": s(cert.l),
        "checks": {
            "c1": cert.checks.c1,
            "c2": cert.checks.c2,
            "e1": cert.checks.e1,
            "c3": cert.checks.c3,
        },
        "sample_prime": profile_value(&cert.sample_prime),
        "verified": verify.pass,
        "verification": verify.items.iter().map(|i| json!({
            "name": i.name, "pass": i.pass, "detail": i.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn density_record(t: &PrimeTriple, d: &DensityReport) -> Value {
    json!({
        "schema": SCHEMA,
        "record": "density",
        "triple": triple_value(t),
        "X": s(d.x),
        "total_primes": s(d.total_primes),
        "count_XK": s(d.count_xk),
        "count_XH": s(d.count_xh),
        "count_diff": s(d.count_diff),
        "ratio_XK": d.ratio_xk,
        "ratio_XH": d.ratio_xh,
        "ratio_diff": d.ratio_diff,
        "expected": {"XK": 0.25, "XH": 0.125, "diff": 0.125},
    })
}

pub fn generator_record(t: &PrimeTriple, g: &GeneratorPrimes) -> Value {
    json!({
        "schema": SCHEMA,
        "record": "generator-primes",
        "triple": triple_value(t),
        "u": s(g.u),
        "modulus": s(g.modulus),
        "X": s(g.x),
        "count": s(g.count),
        "primes": g.primes.iter().map(s).collect::<Vec<_>>(),
    })
}

pub fn hilbert_record(h: &HilbertClassField) -> Value {
    json!({
        "schema": SCHEMA,
        "record": "hilbert-class-field",
        "generators": h.generators.iter().map(s).collect::<Vec<_>>(),
        "conductor": s(h.conductor),
        "quadratic_subfields": h.quadratic_subfields.iter().map(s).collect::<Vec<_>>(),
    })
}

pub fn unramified_value(r: &UnramifiedReport) -> Value {
    json!({
        "all_ok": r.all_ok,
        "entries": r.entries.iter().map(|e| json!({
            "p": s(e.p),
            "auxiliary_subfield": e.auxiliary_subfield.map(s),
            "auxiliary_disc": e.auxiliary_disc.map(s),
            "ok": e.ok,
        })).collect::<Vec<_>>(),
    })
}

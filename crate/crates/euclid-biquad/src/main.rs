use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use euclid_biquad::arith::sieve_primes;
use euclid_biquad::biquad::{
    class_number_biquad, hilbert_class_field, verify_unramified, BiquadField, Precision,
    PrimeTriple, EXCLUDED_PRIMES,
};
use euclid_biquad::error::Error;
use euclid_biquad::report;
use euclid_biquad::splitting::{density_estimate, generator_prime_count};
use euclid_biquad::witness::{construct_u, least_qnr3, least_qr3, verify_certificate};

const EXIT_VERIFICATION_FAILURE: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_PRECISION_EXHAUSTED: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    JsonLines,
}

#[derive(Parser)]
#[command(name = "euclid-biquad", version, about = "Verification toolkit for Euclidean ideal classes in biquadratic fields Q(\u{221a}q, \u{221a}kr)")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Worker threads for prime scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Precision ceiling in bits for unit-product square tests.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Prime bound X for scans (command-specific default otherwise).
    #[arg(long, global = true)]
    bound: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class number h_K of Q(√q, √kr) with the subfield breakdown.
    ClassNumber { q: u64, k: u64, r: u64 },
    /// All eligible triples with primes <= bound and h_K = 2, in the
    /// two-table layout (split by q mod 4).
    Enumerate,
    /// Construct and verify the witness integer u for a triple.
    Witness { q: u64, k: u64, r: u64 },
    /// Empirical splitting densities for primes <= X (default 10^6).
    Density { q: u64, k: u64, r: u64, x: Option<u64> },
    /// Run every checkable hypothesis of the main theorem for a triple.
    VerifyTheorem { q: u64, k: u64, r: u64, x: Option<u64> },
    /// Least primes s < p, s = 3 (mod 4), with (s/p) = +1 and -1.
    ResidueSearch { p: u64 },
}

fn precision_from(cli_precision: Option<u32>) -> Precision {
    let mut p = Precision::default();
    if let Some(bits) = cli_precision {
        p.cap = bits.max(64);
        p.start = p.start.min(p.cap);
    }
    p
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::UndecidedAtMaxPrecision(_) | Error::InsufficientPrecision { .. } => {
            EXIT_PRECISION_EXHAUSTED
        }
        _ => EXIT_INVALID_INPUT,
    }
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code_for(err))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let precision = precision_from(cli.precision);
    match &cli.command {
        Command::ClassNumber { q, k, r } => cmd_class_number(*q, *k, *r, precision, cli.format),
        Command::Enumerate => cmd_enumerate(cli.bound.unwrap_or(50), precision, cli.format),
        Command::Witness { q, k, r } => cmd_witness(*q, *k, *r, cli.format),
        Command::Density { q, k, r, x } => {
            cmd_density(*q, *k, *r, cli.bound.or(*x).unwrap_or(1_000_000), cli.format)
        }
        Command::VerifyTheorem { q, k, r, x } => cmd_verify_theorem(
            *q,
            *k,
            *r,
            cli.bound.or(*x).unwrap_or(100_000),
            precision,
            cli.format,
        ),
        Command::ResidueSearch { p } => cmd_residue_search(*p, cli.format),
    }
}

fn cmd_class_number(q: u64, k: u64, r: u64, precision: Precision, format: Format) -> ExitCode {
    let triple = match PrimeTriple::new(q, k, r) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let field = match BiquadField::from_triple(&triple, precision) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    match format {
        Format::JsonLines => println!("{}", report::class_number_record(&field)),
        Format::Table => {
            println!("K = Q(\u{221a}{}, \u{221a}{})", field.m1, field.m2);
            for (label, sub) in
                [("h1", &field.sub1), ("h2", &field.sub2), ("h3", &field.sub3)]
            {
                println!(
                    "  {label} = h(Q(\u{221a}{})) = {}   (disc {})",
                    sub.d, sub.h, sub.disc
                );
            }
            println!("  unit index = {}", field.unit_index);
            println!("  conductor  = {}", field.conductor);
            println!("  h_K        = {}", field.h_k);
        }
    }
    ExitCode::SUCCESS
}

fn cmd_enumerate(bound: u64, precision: Precision, format: Format) -> ExitCode {
    let allowed: Vec<u64> = sieve_primes(bound)
        .into_iter()
        .filter(|p| !EXCLUDED_PRIMES.contains(p))
        .collect();
    let mut rows: Vec<(u64, u64, u64, u32)> = Vec::new();
    let mut undecided = 0u32;
    for &q in &allowed {
        for (i, &a) in allowed.iter().enumerate() {
            if a == q {
                continue;
            }
            for &b in &allowed[i + 1..] {
                if b == q {
                    continue;
                }
                // canonical (k, r): the 3 (mod 4) prime first, else ascending
                let (k, r) = match (a % 4, b % 4) {
                    (3, 3) => continue, // ineligible
                    (3, 1) => (a, b),
                    (1, 3) => (b, a),
                    _ => (a, b),
                };
                let triple = PrimeTriple::new(q, k, r).expect("distinct odd primes");
                match class_number_biquad(&triple, precision) {
                    Ok(2) => rows.push((q, k, r, 2)),
                    Ok(_) => {}
                    Err(e @ Error::UndecidedAtMaxPrecision(_)) => {
                        eprintln!("warning: ({q}, {k}, {r}) skipped: {e}");
                        undecided += 1;
                    }
                    Err(e) => {
                        eprintln!("error: ({q}, {k}, {r}): {e}");
                        return ExitCode::from(exit_code_for(&e));
                    }
                }
            }
        }
    }
    rows.sort_unstable();
    let (t1, t2): (Vec<_>, Vec<_>) = rows.iter().partition(|row| row.0 % 4 == 3);
    match format {
        Format::JsonLines => {
            for (q, k, r, h) in rows.iter() {
                println!(
                    "{}",
                    json!({
                        "schema": report::SCHEMA,
                        "record": "enumerate-row",
                        "q": q.to_string(), "k": k.to_string(), "r": r.to_string(),
                        "h_K": h.to_string(),
                    })
                );
            }
        }
        Format::Table => {
            for (title, table) in [
                ("q = 3 (mod 4)", &t1),
                ("q = 1 (mod 4)", &t2),
            ] {
                println!("Triples with {title} and h_K = 2, primes <= {bound}:");
                println!("  (q, k, r)        h_K");
                for (q, k, r, h) in table {
                    println!("  ({q}, {k}, {r}){:width$}{h}", "", width = 13usize.saturating_sub(format!("({q}, {k}, {r})").len()) + 1);
                }
                println!();
            }
        }
    }
    if undecided > 0 {
        ExitCode::from(EXIT_PRECISION_EXHAUSTED)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_witness(q: u64, k: u64, r: u64, format: Format) -> ExitCode {
    let triple = match PrimeTriple::new(q, k, r) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let cert = match construct_u(&triple, euclid_biquad::witness::DEFAULT_PRIME_SEARCH_BOUND) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let verify = verify_certificate(&cert);
    match format {
        Format::JsonLines => println!("{}", report::witness_record(&cert, &verify)),
        Format::Table => {
            println!("triple      ({q}, {k}, {r})   case {:?}", cert.case_id);
            println!("auxiliary   p1 = {}, p2 = {}, p3 = {}", cert.p1, cert.p2, cert.p3);
            println!("x0          {} (mod {})", cert.x0, cert.modulus);
            println!("u           {}", cert.u);
            println!("l           {}", cert.l);
            println!(
                "checks      c1 = {}, c2 = {}, e1 = {}, c3 = {}",
                cert.checks.c1, cert.checks.c2, cert.checks.e1, cert.checks.c3
            );
            println!(
                "sample      p = {} with f_K = {}, f_H = {}",
                cert.sample_prime.p, cert.sample_prime.f_k, cert.sample_prime.f_h
            );
            println!("verified    {}", verify.pass);
        }
    }
    if verify.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFICATION_FAILURE)
    }
}

fn cmd_density(q: u64, k: u64, r: u64, x: u64, format: Format) -> ExitCode {
    let triple = match PrimeTriple::new(q, k, r) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    if x < 1000 {
        eprintln!("error: X must be at least 10^3");
        return ExitCode::from(EXIT_INVALID_INPUT);
    }
    let rep = density_estimate(&triple, x);
    match format {
        Format::JsonLines => println!("{}", report::density_record(&triple, &rep)),
        Format::Table => {
            println!("primes <= {x} unramified in K: {}", rep.total_primes);
            println!(
                "X_K            count {:>8}   ratio {:.6}   expected 0.250000",
                rep.count_xk, rep.ratio_xk
            );
            println!(
                "X_H(K)         count {:>8}   ratio {:.6}   expected 0.125000",
                rep.count_xh, rep.ratio_xh
            );
            println!(
                "X_K \\ X_H(K)   count {:>8}   ratio {:.6}   expected 0.125000",
                rep.count_diff, rep.ratio_diff
            );
        }
    }
    ExitCode::SUCCESS
}

fn cmd_residue_search(p: u64, format: Format) -> ExitCode {
    if !euclid_biquad::arith::is_prime(p) || p < 5 {
        eprintln!("error: p must be a prime >= 5");
        return ExitCode::from(EXIT_INVALID_INPUT);
    }
    let qr = if EXCLUDED_PRIMES.contains(&p) { None } else { Some(least_qr3(p)) };
    let qnr = least_qnr3(p);
    match format {
        Format::JsonLines => {
            let qr_v = match &qr {
                Some(Ok(v)) => json!(v.to_string()),
                _ => json!(null),
            };
            let qnr_v = match &qnr {
                Ok(v) => json!(v.to_string()),
                Err(_) => json!(null),
            };
            println!(
                "{}",
                json!({
                    "schema": report::SCHEMA,
                    "record": "residue-search",
                    "p": p.to_string(),
                    "least_qr3": qr_v,
                    "least_qnr3": qnr_v,
                })
            );
        }
        Format::Table => {
            match &qr {
                Some(Ok(v)) => println!("least QR  s = 3 (mod 4), (s/{p}) = +1:  {v}"),
                Some(Err(e)) => println!("least QR:  {e}"),
                None => println!("least QR:  p = {p} is excluded by the residue theorem"),
            }
            match &qnr {
                Ok(v) => println!("least QNR s = 3 (mod 4), (s/{p}) = -1:  {v}"),
                Err(e) => println!("least QNR: {e}"),
            }
        }
    }
    if matches!(qr, Some(Err(_))) || qnr.is_err() {
        ExitCode::from(EXIT_VERIFICATION_FAILURE)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_verify_theorem(
    q: u64,
    k: u64,
    r: u64,
    x: u64,
    precision: Precision,
    format: Format,
) -> ExitCode {
    let triple = match PrimeTriple::new(q, k, r) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let mut stages: Vec<(&str, bool, String)> = Vec::new();
    let mut precision_exhausted = false;

    stages.push((
        "eligibility",
        triple.eligible,
        format!("classes mod 4: {:?}", triple.classes_mod4),
    ));

    let field = if triple.eligible {
        match BiquadField::from_triple(&triple, precision) {
            Ok(f) => {
                stages.push((
                    "h_K = 2",
                    f.h_k == 2,
                    format!(
                        "h_K = {} (unit index {}, h1 h2 h3 = {}*{}*{})",
                        f.h_k, f.unit_index, f.sub1.h, f.sub2.h, f.sub3.h
                    ),
                ));
                Some(f)
            }
            Err(e) => {
                precision_exhausted |= matches!(e, Error::UndecidedAtMaxPrecision(_));
                stages.push(("h_K = 2", false, e.to_string()));
                None
            }
        }
    } else {
        None
    };

    if let Some(f) = &field {
        match hilbert_class_field(f) {
            Ok(hcf) => stages.push((
                "H(K) = Q(\u{221a}q, \u{221a}k, \u{221a}r)",
                hcf.conductor == 4 * q * k * r,
                format!("conductor {}", hcf.conductor),
            )),
            Err(e) => stages.push(("H(K) = Q(\u{221a}q, \u{221a}k, \u{221a}r)", false, e.to_string())),
        }
    }

    match verify_unramified(&triple) {
        Ok(rep) => {
            let detail = rep
                .entries
                .iter()
                .map(|e| {
                    format!(
                        "p={} via Q(\u{221a}{})",
                        e.p,
                        e.auxiliary_subfield.map_or("?".into(), |d| d.to_string())
                    )
                })
                .collect::<Vec<_>>()
                .join(", ");
            stages.push(("H(K)/K unramified", rep.all_ok, detail));
        }
        Err(e) => stages.push(("H(K)/K unramified", false, e.to_string())),
    }

    let cert = match construct_u(&triple, euclid_biquad::witness::DEFAULT_PRIME_SEARCH_BOUND) {
        Ok(cert) => {
            let verify = verify_certificate(&cert);
            stages.push((
                "witness certificate",
                verify.pass,
                format!(
                    "u = {}, x0 = {} (mod {}), p_i = ({}, {}, {})",
                    cert.u, cert.x0, cert.modulus, cert.p1, cert.p2, cert.p3
                ),
            ));
            Some(cert)
        }
        Err(e) => {
            stages.push(("witness certificate", false, e.to_string()));
            None
        }
    };

    if let Some(cert) = &cert {
        match generator_prime_count(&triple, cert.u, cert.modulus, x) {
            Ok(g) => stages.push((
                "generator primes to X",
                true,
                format!("{} primes = u (mod 4qkr) up to {x}, all verified", g.count),
            )),
            Err(e) => stages.push(("generator primes to X", false, e.to_string())),
        }
    }

    let all_pass = stages.iter().all(|(_, ok, _)| *ok);
    match format {
        Format::JsonLines => {
            println!(
                "{}",
                json!({
                    "schema": report::SCHEMA,
                    "record": "verify-theorem",
                    "triple": report::triple_value(&triple),
                    "X": x.to_string(),
                    "stages": stages.iter().map(|(n, ok, d)| json!({
                        "name": n, "pass": ok, "detail": d,
                    })).collect::<Vec<_>>(),
                    "pi_p_surjectivity": "not checked",
                    "pass": all_pass,
                })
            );
        }
        Format::Table => {
            println!("verify-theorem ({q}, {k}, {r}), X = {x}");
            for (name, ok, detail) in &stages {
                println!("  [{}] {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
            }
            println!("  [----] pi_p surjectivity onto (O_K/P)*: not checked");
            println!("  overall: {}", if all_pass { "PASS" } else { "FAIL" });
        }
    }
    if precision_exhausted {
        ExitCode::from(EXIT_PRECISION_EXHAUSTED)
    } else if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFICATION_FAILURE)
    }
}

//! Invariants of real quadratic fields Q(√d).
//!
//! Class numbers are computed along two fully independent routes:
//! the analytic route through Dirichlet's class number formula
//! (`class_number_quad`), and a combinatorial route counting cycles of
//! reduced indefinite binary quadratic forms (`class_number_forms_oracle`).

use rug::{Float, Integer};

use crate::arith::kronecker;
use crate::error::{Error, Result};

/// Minimum working precision for the Dirichlet L-sum, in bits.
pub const L_SUM_MIN_PREC: u32 = 128;
/// Precision ceiling for the Dirichlet L-sum.
pub const L_SUM_MAX_PREC: u32 = 1024;

pub fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Largest squarefree divisor with the same square class: `n / g^2` for the
/// maximal `g` with `g^2 | n`.
pub fn squarefree_kernel(n: u64) -> u64 {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
        }
        p += 1;
    }
    n
}

/// Fundamental discriminant of Q(√d): `d` if `d = 1 (mod 4)`, else `4d`.
pub fn fundamental_discriminant(d: u64) -> Result<u64> {
    if d < 2 || !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    Ok(if d % 4 == 1 { d } else { 4 * d })
}

/// The smallest unit > 1 of the ring of integers of Q(√d), stored as
/// `(x + y√d) / 2` when `halved`, else `x + y√d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub x: Integer,
    pub y: Integer,
    pub halved: bool,
}

impl FundamentalUnit {
    /// Norm of the unit: `(x^2 - d y^2) / 4` if halved, else `x^2 - d y^2`.
    /// Always ±1 for a genuine unit.
    pub fn norm(&self, d: u64) -> i32 {
        let mut n = self.x.clone() * &self.x;
        n -= self.y.clone() * &self.y * Integer::from(d);
        if self.halved {
            n /= 4;
        }
        n.to_i32().expect("unit norm is +-1")
    }

    /// The larger real embedding `(x + y√d) / denom` at the given precision.
    pub fn value(&self, d: u64, prec: u32) -> Float {
        let sd = Float::with_val(prec, d).sqrt();
        let v = Float::with_val(prec, &self.x) + Float::with_val(prec, &self.y) * sd;
        if self.halved {
            v / 2u32
        } else {
            v
        }
    }
}

/// Fundamental unit of O_{Q(√d)} via the continued fraction of √d, or of
/// (1 + √d)/2 when `d = 1 (mod 4)`. Integer-only (P, Q) recurrences; no
/// floating point enters the computation.
pub fn fundamental_unit(d: u64) -> Result<FundamentalUnit> {
    if d < 2 || !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    let a0 = d.isqrt() as i64;
    let di = d as i64;
    let (mut p_st, mut q_st): (i64, i64) = if d % 4 == 1 { (1, 2) } else { (0, 1) };

    // Expand until the (P, Q) state recurs; the recurring block is the
    // purely periodic (reduced) part of the expansion.
    let mut seen: std::collections::HashMap<(i64, i64), usize> = std::collections::HashMap::new();
    let mut states = Vec::new();
    let mut quotients = Vec::new();
    let cycle_start = loop {
        if let Some(&m) = seen.get(&(p_st, q_st)) {
            break m;
        }
        seen.insert((p_st, q_st), states.len());
        states.push((p_st, q_st));
        let a = (p_st + a0).div_euclid(q_st);
        quotients.push(a);
        p_st = a * q_st - p_st;
        q_st = (di - p_st * p_st) / q_st;
    };

    // One period of the reduced irrational alpha = (Pm + √d)/Qm:
    // alpha = (p*alpha + p') / (q*alpha + q'), and eps = q*alpha + q'
    // is the fundamental unit.
    let (pm, qm) = states[cycle_start];
    let (mut p, mut pp) = (Integer::from(1), Integer::from(0));
    let (mut q, mut qp) = (Integer::from(0), Integer::from(1));
    for &a in &quotients[cycle_start..] {
        let a = Integer::from(a);
        let np = a.clone() * &p + &pp;
        let nq = a * &q + &qp;
        pp = std::mem::replace(&mut p, np);
        qp = std::mem::replace(&mut q, nq);
    }
    // eps = (q*Pm + q'*Qm + q*√d) / Qm, rewritten over denominator 2
    let num_x = Integer::from(2) * (q.clone() * pm + qp * qm);
    let num_y = Integer::from(2) * &q;
    let (x_div, x_rem) = num_x.div_rem(Integer::from(qm));
    let (y_div, y_rem) = num_y.div_rem(Integer::from(qm));
    if x_rem != 0 || y_rem != 0 {
        return Err(Error::Internal(format!("unit reconstruction failed for d = {d}")));
    }
    let (mut x, mut y) = (x_div, y_div);
    let mut norm = x.clone() * &x - y.clone() * &y * Integer::from(d);
    if norm != 4 && norm != -4 {
        return Err(Error::Internal(format!("norm {norm} not +-4 for d = {d}")));
    }
    let halved = if x.is_even() && y.is_even() {
        x /= 2;
        y /= 2;
        norm /= 4;
        false
    } else {
        true
    };
    debug_assert!(x.is_positive() && y.is_positive());
    let _ = norm;
    Ok(FundamentalUnit { x, y, halved })
}

/// Regulator `ln((x + y√d)/denom)` at the given precision.
pub fn regulator(d: u64, unit: &FundamentalUnit, prec: u32) -> Float {
    unit.value(d, prec).ln()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn dirichlet_class_number_at(d: u64, unit: &FundamentalUnit, prec: u32) -> (u32, f64) {
    let disc = if d % 4 == 1 { d } else { 4 * d };
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    // chi(D - a) = chi(a) for D > 0, so sum the half range twice.
    let mut sum = Float::with_val(prec, 0);
    for a in 1..(disc + 1) / 2 {
        if gcd(a, disc) != 1 {
            continue;
        }
        let chi = kronecker(disc as i64, a as i64).expect("disc != 0");
        if chi == 0 {
            continue;
        }
        let term = (pi.clone() * a / disc).sin().ln();
        if chi == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum *= 2u32;
    let reg = regulator(d, unit, prec);
    let h = -(sum / (2u32 * reg));
    let rounded = h.to_f64().round();
    let residue = (h - rounded).to_f64().abs();
    (rounded as u32, residue)
}

/// Class number of Q(√d) by Dirichlet's formula
/// `h = sqrt(D) L(1, chi_D) / (2 reg)`, evaluated as a finite log-sine sum.
/// Escalates the working precision until the rounding residue is small.
pub fn class_number_quad(d: u64) -> Result<u32> {
    let unit = fundamental_unit(d)?;
    let mut prec = L_SUM_MIN_PREC;
    loop {
        let (h, residue) = dirichlet_class_number_at(d, &unit, prec);
        if residue <= 0.05 {
            return Ok(h);
        }
        if prec >= L_SUM_MAX_PREC {
            return Err(Error::InsufficientPrecision { bits: prec, residue });
        }
        prec *= 2;
    }
}

/// A primitive integral binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Form {
    a: i64,
    b: i64,
    c: i64,
}

fn is_reduced_indefinite(f: Form, disc: i64, sqrt_floor: i64) -> bool {
    // |√D - 2|a|| < b < √D, all comparisons exact
    let b = f.b;
    if b <= 0 || b > sqrt_floor {
        return false;
    }
    let two_a = 2 * f.a.abs();
    // √D - 2|a| < b  <=>  2|a| + b > √D, always true when 2|a| >= √D side handled below
    let lower = two_a - b; // need lower < √D
    let upper = two_a + b; // need upper > √D
    (lower <= 0 || lower * lower < disc) && upper * upper > disc
}

fn rho(f: Form, disc: i64, sqrt_floor: i64) -> Form {
    let c = f.c;
    let two_c = 2 * c.abs();
    let base = (-f.b).rem_euclid(two_c);
    // unique r = base (mod 2|c|) in the interval (√D - 2|c|, √D)
    let r = sqrt_floor - (sqrt_floor - base).rem_euclid(two_c);
    let c_new = (r * r - disc) / (4 * c);
    Form { a: c, b: r, c: c_new }
}

fn enumerate_reduced_forms(disc: i64) -> Vec<Form> {
    let s = (disc as u64).isqrt() as i64;
    let mut forms = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (disc - b * b) / 4; // = -a*c > 0
        let mut a = 1;
        while a * a <= n {
            if n % a == 0 {
                let c = n / a;
                for (fa, fc) in [(a, -c), (-a, c), (c, -a), (-c, a)] {
                    let f = Form { a: fa, b, c: fc };
                    if is_reduced_indefinite(f, disc, s) {
                        forms.push(f);
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    forms.sort();
    forms.dedup();
    forms
}

/// Narrow class number h+ of discriminant `D > 0`: the number of cycles of
/// reduced indefinite forms under the rho reduction step.
pub fn narrow_class_number_forms(disc: u64) -> Result<u32> {
    let d = if disc % 4 == 0 { disc / 4 } else { disc };
    if fundamental_discriminant(d)? != disc {
        return Err(Error::NotFundamental(disc));
    }
    let disc = disc as i64;
    let s = (disc as u64).isqrt() as i64;
    let forms = enumerate_reduced_forms(disc);
    let index: std::collections::HashMap<Form, usize> =
        forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut visited = vec![false; forms.len()];
    let mut cycles = 0u32;
    for start in 0..forms.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut f = forms[start];
        loop {
            let i = index[&f];
            if visited[i] {
                break;
            }
            visited[i] = true;
            f = rho(f, disc, s);
        }
    }
    Ok(cycles)
}

/// Class number from the forms oracle: h+ adjusted by the fundamental unit
/// norm (`h = h+/2` when the norm is +1, `h = h+` when it is -1).
pub fn class_number_forms_oracle(disc: u64) -> Result<u32> {
    let h_plus = narrow_class_number_forms(disc)?;
    let d = squarefree_kernel(if disc % 4 == 0 { disc / 4 } else { disc });
    let unit = fundamental_unit(d)?;
    Ok(if unit.norm(d) == 1 { h_plus / 2 } else { h_plus })
}

/// A real quadratic field Q(√d) with its basic invariants.
#[derive(Debug, Clone)]
pub struct QuadField {
    pub d: u64,
    pub disc: u64,
    pub unit: FundamentalUnit,
    /// Regulator as a double; use [`regulator`] for high-precision work.
    pub regulator: f64,
    pub h: u32,
}

impl QuadField {
    pub fn new(d: u64) -> Result<Self> {
        let disc = fundamental_discriminant(d)?;
        let unit = fundamental_unit(d)?;
        let reg = regulator(d, &unit, 64).to_f64();
        let h = class_number_quad(d)?;
        Ok(QuadField { d, disc, unit, regulator: reg, h })
    }
}

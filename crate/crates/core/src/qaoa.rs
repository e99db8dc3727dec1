//! Depth-1 and depth-2 QAOA expected cut fractions on D-regular graphs of
//! girth greater than five.
//!
//! The depth-2 value is assembled from three independently testable pieces:
//! the `ZZ` term ([`term_a`]), the mixed `YZ` term (through [`alpha`]), and
//! the `YY` term (through [`kappa`]):
//!
//! ```text
//! f2 = 1/2 - (A + 2 B1 + E) / 2
//! A  = -2 c^2 r t y^(D-1) z
//! B1 = (c s / 2) alpha
//! E  = (s^2 t z / 2) kappa
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::{cpow_int, rpow_int, ComplexScalar};
use crate::stats::CutStats;

/// Relative bound on the imaginary part left over after summing conjugate
/// pairs in `alpha` and `kappa`.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// The four depth-2 QAOA angles, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Qaoa2Angles {
    pub gamma1: f64,
    pub beta1: f64,
    pub gamma2: f64,
    pub beta2: f64,
}

impl Qaoa2Angles {
    pub const ZERO: Qaoa2Angles = Qaoa2Angles::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(gamma1: f64, beta1: f64, gamma2: f64, beta2: f64) -> Self {
        Qaoa2Angles { gamma1, beta1, gamma2, beta2 }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.gamma1, self.beta1, self.gamma2, self.beta2]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }
}

/// Trigonometric shorthands of the four angles.
///
/// | symbol | value          | symbol | value          |
/// |--------|----------------|--------|----------------|
/// | `c`    | `cos(2 beta2)` | `s`    | `sin(2 beta2)` |
/// | `m`    | `cos(gamma2)`  | `n`    | `sin(gamma2)`  |
/// | `r`    | `cos(2 beta1)` | `t`    | `sin(2 beta1)` |
/// | `y`    | `cos(gamma1)`  | `z`    | `sin(gamma1)`  |
/// | `p`    | `cos(gamma1/2)`| `q`    | `sin(gamma1/2)`|
/// | `k`    | `cos(beta1)`   | `l`    | `sin(beta1)`   |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigBundle {
    pub c: f64,
    pub s: f64,
    pub m: f64,
    pub n: f64,
    pub r: f64,
    pub t: f64,
    pub y: f64,
    pub z: f64,
    pub p: f64,
    pub q: f64,
    pub k: f64,
    pub l: f64,
}

pub fn trig_bundle(angles: &Qaoa2Angles) -> TrigBundle {
    let (s, c) = (2.0 * angles.beta2).sin_cos();
    let (n, m) = angles.gamma2.sin_cos();
    let (t, r) = (2.0 * angles.beta1).sin_cos();
    let (z, y) = angles.gamma1.sin_cos();
    let (q, p) = (0.5 * angles.gamma1).sin_cos();
    let (l, k) = angles.beta1.sin_cos();
    TrigBundle { c, s, m, n, r, t, y, z, p, q, k, l }
}

fn check_degree(degree: u32) -> Result<()> {
    if degree < 2 {
        return domain(format!("degree D = {degree}; need D >= 2"));
    }
    Ok(())
}

fn real_part_checked(what: &str, v: ComplexScalar) -> Result<f64> {
    if v.im.abs() > IMAG_RESIDUE_TOL * (1.0 + v.re.abs()) {
        return Err(Error::InternalConsistency(format!(
            "{what} has imaginary residue {:e} (real part {:e})",
            v.im, v.re
        )));
    }
    Ok(v.re)
}

/// Depth-1 QAOA: `1/2 + sin(2b) cos(2b) sin(g) cos^(D-1)(g)`.
pub fn f1(degree: u32, gamma: f64, beta: f64) -> Result<CutStats> {
    check_degree(degree)?;
    let (s, c) = (2.0 * beta).sin_cos();
    let value = s * c * gamma.sin() * rpow_int(gamma.cos(), degree - 1);
    Ok(CutStats::from_improvement(degree, value))
}

/// `A = -2 c^2 r t y^(D-1) z`.
pub fn term_a(degree: u32, angles: &Qaoa2Angles) -> Result<f64> {
    check_degree(degree)?;
    let tb = trig_bundle(angles);
    Ok(term_a_from(degree, &tb))
}

fn term_a_from(degree: u32, tb: &TrigBundle) -> f64 {
    -2.0 * tb.c * tb.c * tb.r * tb.t * rpow_int(tb.y, degree - 1) * tb.z
}

pub fn alpha(degree: u32, gamma1: f64, beta1: f64, gamma2: f64) -> Result<f64> {
    check_degree(degree)?;
    let tb = trig_bundle(&Qaoa2Angles::new(gamma1, beta1, gamma2, 0.0));
    alpha_from(degree, &tb)
}

pub fn kappa(degree: u32, gamma1: f64, beta1: f64, gamma2: f64) -> Result<f64> {
    check_degree(degree)?;
    let tb = trig_bundle(&Qaoa2Angles::new(gamma1, beta1, gamma2, 0.0));
    kappa_from(degree, &tb)
}

fn alpha_from(degree: u32, tb: &TrigBundle) -> Result<f64> {
    let &TrigBundle { m, n, r, t, y, z, .. } = tb;
    let e = degree - 1;
    let yz = rpow_int(y, e) * z;
    let i = ComplexScalar::i();
    let re = |x: f64| ComplexScalar::new(x, 0.0);

    let minus = re(m * y - n * r * z);
    let plus = re(m * y + n * r * z);
    let up = re(m) + i * (n * t * yz);
    let down = re(m) - i * (n * t * yz);

    let value = re((1.0 + r) * (-m * r * z - n * y)) * cpow_int(minus, e)
        + re((1.0 - r) * (m * r * z - n * y)) * cpow_int(plus, e)
        + re(t)
            * ((re(m * t * yz) + i * n) * cpow_int(up, e)
                + (re(m * t * yz) - i * n) * cpow_int(down, e));
    real_part_checked("alpha", value)
}

fn kappa_from(degree: u32, tb: &TrigBundle) -> Result<f64> {
    let &TrigBundle { m, n, r, t, y, z, .. } = tb;
    let e = degree - 1;
    let yz = rpow_int(y, e) * z;
    let i = ComplexScalar::i();
    let re = |x: f64| ComplexScalar::new(x, 0.0);

    let first = re((1.0 + r) * rpow_int(m * y - n * r * z, e) - (1.0 - r) * rpow_int(m * y + n * r * z, e));
    let second = cpow_int(re(m) + i * (n * t * yz), e) + cpow_int(re(m) - i * (n * t * yz), e);
    real_part_checked("kappa", first * second)
}

/// Depth-2 QAOA expected cut fraction. The raw value is reported without
/// clamping to `[0, 1]`.
pub fn f2(degree: u32, angles: &Qaoa2Angles) -> Result<CutStats> {
    Ok(CutStats::from_cut_fraction(degree, f2_cut_fraction(degree, angles)?))
}

pub fn f2_cut_fraction(degree: u32, angles: &Qaoa2Angles) -> Result<f64> {
    check_degree(degree)?;
    let tb = trig_bundle(angles);
    let a = term_a_from(degree, &tb);
    let b1 = 0.5 * tb.c * tb.s * alpha_from(degree, &tb)?;
    let e = 0.5 * tb.s * tb.s * tb.t * tb.z * kappa_from(degree, &tb)?;
    Ok(0.5 - 0.5 * (a + 2.0 * b1 + e))
}

/// The `D = 2` (ring) polynomial, expanded by hand from the general formula.
pub fn f2_ring(angles: &Qaoa2Angles) -> CutStats {
    let TrigBundle { c, s, m, n, r, t, y, z, .. } = trig_bundle(angles);
    let value = c * c * r * t * y * z
        - c * s * m * n * (r * r * z * z - y * y)
        - c * s * y * z * (t * t - r * r) * (m * m - n * n)
        - s * s * t * z * m * r * (m * y - n * z);
    CutStats::from_improvement(2, value)
}

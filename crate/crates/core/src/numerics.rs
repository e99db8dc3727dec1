//! Scalar primitives shared by the closed-form evaluators.
//!
//! Binomial masses use exact 64-bit coefficients for `n <= 64` and the
//! saddle-point form (Stirling remainder plus deviance) above that, so mass
//! functions stay accurate to a few ulps in relative terms all the way to
//! `n = 10^4`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Complex scalar used by the QAOA evaluators.
pub type ComplexScalar = Complex64;

/// Largest `n` accepted by the binomial routines.
pub const MAX_BINOMIAL_N: u64 = 10_000;

/// Largest `n` handled by the exact integer path.
pub const EXACT_BINOMIAL_N: u64 = 64;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// A probability stored on the natural-log scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(pub f64);

impl LogProb {
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    pub const ONE: LogProb = LogProb(0.0);

    pub fn from_prob(p: f64) -> Self {
        LogProb(p.ln())
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }
}

/// `C(n, k)` exactly, for `n <= 64`.
pub fn exact_binomial(n: u64, k: u64) -> Option<u64> {
    if k > n || n > EXACT_BINOMIAL_N {
        return None;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) / i stays integral at every step.
        acc = acc * (n as u128 - k as u128 + i) / i;
    }
    u64::try_from(acc).ok()
}

fn check_binomial_args(n: u64, k: i64) -> Result<u64> {
    if n > MAX_BINOMIAL_N {
        return domain(format!("n = {n} exceeds supported maximum {MAX_BINOMIAL_N}"));
    }
    if k < 0 || k as u64 > n {
        return domain(format!("k = {k} outside [0, {n}]"));
    }
    Ok(k as u64)
}

/// Stirling-series remainder `ln n! - ((n + 1/2) ln n - n + ln sqrt(2 pi))`.
fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n == 0 {
        return 0.0;
    }
    let x = n as f64;
    if n <= 15 {
        return small_ln_factorial(n) - (x + 0.5) * x.ln() + x - LN_SQRT_2PI;
    }
    let xx = x * x;
    if n > 500 {
        (S0 - S1 / xx) / x
    } else if n > 80 {
        (S0 - (S1 - S2 / xx) / xx) / x
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / xx) / xx) / xx) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / xx) / xx) / xx) / xx) / x
    }
}

fn small_ln_factorial(n: u64) -> f64 {
    debug_assert!(n <= 20);
    ((2..=n).product::<u64>().max(1) as f64).ln()
}

/// `ln n!` (log-gamma at the integer `n + 1`).
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 15 {
        small_ln_factorial(n)
    } else {
        let x = n as f64;
        stirlerr(n) + (x + 0.5) * x.ln() - x + LN_SQRT_2PI
    }
}

/// Deviance term `x ln(x / np) + np - x`, evaluated without cancellation
/// when `x` is close to `np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `ln C(n, k)`.
pub fn log_binomial(n: u64, k: i64) -> Result<f64> {
    let k = check_binomial_args(n, k)?;
    let kk = k.min(n - k);
    if let Some(c) = exact_binomial(n, kk) {
        return Ok((c as f64).ln());
    }
    if kk <= 30 {
        // Product of at most 30 ratios, each above 1; stays far from overflow.
        let base = (n - kk) as f64;
        let prod: f64 = (1..=kk).map(|i| (base + i as f64) / i as f64).product();
        return Ok(prod.ln());
    }
    Ok(ln_factorial(n) - ln_factorial(kk) - ln_factorial(n - kk))
}

/// `2^-n C(n, k)`: the number of successes among `n` fair coins.
pub fn binom_pmf(n: u64, k: i64) -> Result<f64> {
    bernoulli_pmf(0.5, n, k)
}

/// `binom_pmf` on the log scale.
pub fn binom_log_pmf(n: u64, k: i64) -> Result<LogProb> {
    Ok(LogProb(log_binomial(n, k)? - n as f64 * LN_2))
}

/// Binomial(n, p) mass at `l`, with `0^0 = 1` so that `p` in `{0, 1}` gives a
/// point mass.
pub fn bernoulli_pmf(p: f64, n: u64, l: i64) -> Result<f64> {
    let l = check_binomial_args(n, l)?;
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("probability {p} outside [0, 1]"));
    }
    Ok(bernoulli_pmf_unchecked(p, n, l))
}

pub(crate) fn bernoulli_pmf_unchecked(p: f64, n: u64, l: u64) -> f64 {
    let q = 1.0 - p;
    if p == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if l == n { 1.0 } else { 0.0 };
    }
    if let Some(c) = exact_binomial(n, l) {
        return c as f64 * p.powi(l as i32) * q.powi((n - l) as i32);
    }
    let nf = n as f64;
    if l == 0 {
        return if p < 0.1 { (-bd0(nf, nf * q) - nf * p).exp() } else { (nf * q.ln()).exp() };
    }
    if l == n {
        return if q < 0.1 { (-bd0(nf, nf * p) - nf * q).exp() } else { (nf * p.ln()).exp() };
    }
    let x = l as f64;
    let lc = stirlerr(n) - stirlerr(l) - stirlerr(n - l) - bd0(x, nf * p) - bd0(nf - x, nf * q);
    let lf = (2.0 * PI).ln() + x.ln() + (-x / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// The whole Binomial(n, p) mass vector, indexed by success count.
pub fn bernoulli_pmf_row(p: f64, n: u64) -> Vec<f64> {
    (0..=n).map(|l| bernoulli_pmf_unchecked(p, n, l)).collect()
}

/// `z^e` by repeated squaring; `z^0 = 1`.
pub fn cpow_int(z: ComplexScalar, e: u32) -> ComplexScalar {
    let mut base = z;
    let mut exp = e;
    let mut acc = ComplexScalar::new(1.0, 0.0);
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        exp >>= 1;
        if exp > 0 {
            base = base * base;
        }
    }
    acc
}

/// Real `x^e`.
pub fn rpow_int(x: f64, e: u32) -> f64 {
    x.powi(e as i32)
}

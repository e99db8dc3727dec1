//! Maximizers for the closed forms and the degree sweep that compares them.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qaoa::{f1, f2, f2_cut_fraction, Qaoa2Angles};
use crate::stats::CutStats;
use crate::threshold::{threshold_improvement, ThresholdParams};

pub const DEFAULT_STARTS: usize = 64;
pub const SIMPLEX_FTOL: f64 = 1e-12;
pub const SIMPLEX_MAX_ITER: usize = 2000;
/// Free-threshold search is the default below this degree.
pub const FREE_TAU_BELOW: u32 = 50;
/// Full-range threshold search is used up to this degree.
pub const FULL_RANGE_MAX_D: u32 = 60;
/// Improvements closer than this count as a tie.
pub const TIE_TOL: f64 = 1e-9;
/// A threshold candidate must beat the incumbent by this much to replace it.
const THRESHOLD_STRICT: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptParams {
    Qaoa(Qaoa2Angles),
    Threshold(ThresholdParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_params: OptParams,
    pub stats: CutStats,
    pub starts_used: usize,
    pub converged: bool,
    /// Set when a windowed threshold search peaked on the window edge and
    /// the neighbour just outside the window does better.
    pub window_violation: bool,
}

impl OptResult {
    pub fn angles(&self) -> Option<Qaoa2Angles> {
        match self.best_params {
            OptParams::Qaoa(a) => Some(a),
            OptParams::Threshold(_) => None,
        }
    }

    pub fn threshold_params(&self) -> Option<ThresholdParams> {
        match self.best_params {
            OptParams::Threshold(p) => Some(p),
            OptParams::Qaoa(_) => None,
        }
    }
}

/// Threshold search region `D/2 + k sqrt(D)` for `k` in `[k_min, k_max]`,
/// unless an explicit integer range overrides it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauWindow {
    pub k_min: f64,
    pub k_max: f64,
    pub explicit_range: Option<(u32, u32)>,
}

impl TauWindow {
    pub fn new(k_min: f64, k_max: f64) -> Result<Self> {
        if !(k_min.is_finite() && k_max.is_finite() && k_min < k_max) {
            return domain(format!("window needs k_min < k_max, got ({k_min}, {k_max})"));
        }
        Ok(TauWindow { k_min, k_max, explicit_range: None })
    }

    pub fn explicit(lo: u32, hi: u32) -> Self {
        TauWindow { k_min: 0.0, k_max: 0.0, explicit_range: Some((lo, hi)) }
    }

    /// `(0.3, 0.6)` up to `D = 150`, `(0.35, 0.52)` beyond.
    pub fn default_for(degree: u32) -> Self {
        if degree <= 150 {
            TauWindow { k_min: 0.3, k_max: 0.6, explicit_range: None }
        } else {
            TauWindow { k_min: 0.35, k_max: 0.52, explicit_range: None }
        }
    }

    /// Integer thresholds searched at `degree`, and whether the range is a
    /// window (so that an edge argmax is suspicious).
    pub fn tau_range(&self, degree: u32) -> Result<(u32, u32, bool)> {
        if let Some((lo, hi)) = self.explicit_range {
            let hi = hi.min(degree + 1);
            if lo > hi {
                return domain(format!("empty threshold range [{lo}, {hi}]"));
            }
            return Ok((lo, hi, false));
        }
        if degree <= FULL_RANGE_MAX_D {
            return Ok((0, degree + 1, false));
        }
        let d = f64::from(degree);
        let lo = (d / 2.0 + self.k_min * d.sqrt()).ceil().max(0.0) as u32;
        let hi = ((d / 2.0 + self.k_max * d.sqrt()).floor() as u32).min(degree + 1);
        if lo > hi {
            return domain(format!("threshold window for D = {degree} contains no integer"));
        }
        Ok((lo, hi, true))
    }
}

fn check_degree(degree: u32) -> Result<()> {
    if degree < 2 {
        return domain(format!("degree D = {degree}; need D >= 2"));
    }
    Ok(())
}

/// Maximizes `f1`. `beta = pi/8` is exact; `gamma` is found by golden-section
/// search on `(0, pi/2)`, where `sin g cos^(D-1) g` is unimodal.
pub fn optimize_qaoa1(degree: u32) -> Result<OptResult> {
    check_degree(degree)?;
    let g = |x: f64| x.sin() * x.cos().powi(degree as i32 - 1);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, PI / 2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut iters = 0;
    while b - a > 1e-13 && iters < 200 {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
        iters += 1;
    }
    let gamma = 0.5 * (a + b);
    let stats = f1(degree, gamma, FRAC_PI_8)?;
    Ok(OptResult {
        best_params: OptParams::Qaoa(Qaoa2Angles::new(gamma, FRAC_PI_8, 0.0, 0.0)),
        stats,
        starts_used: 1,
        converged: b - a <= 1e-13,
        window_violation: false,
    })
}

const BOX_LO: [f64; 4] = [0.0; 4];
const BOX_HI: [f64; 4] = [PI, FRAC_PI_4, PI, FRAC_PI_4];

fn clamp_box(x: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| x[i].clamp(BOX_LO[i], BOX_HI[i]))
}

struct LocalMax {
    x: [f64; 4],
    f: f64,
    converged: bool,
}

/// Nelder-Mead maximization with every trial point projected onto the box.
fn nelder_mead<F>(mut f: F, x0: [f64; 4], step: [f64; 4]) -> Result<LocalMax>
where
    F: FnMut(&[f64; 4]) -> Result<f64>,
{
    const N: usize = 4;
    let mut simplex: Vec<([f64; 4], f64)> = Vec::with_capacity(N + 1);
    let x0 = clamp_box(x0);
    simplex.push((x0, f(&x0)?));
    for i in 0..N {
        let mut x = x0;
        x[i] += step[i];
        if x[i] > BOX_HI[i] {
            x[i] = x0[i] - step[i];
        }
        let x = clamp_box(x);
        simplex.push((x, f(&x)?));
    }
    let mut converged = false;
    for _ in 0..SIMPLEX_MAX_ITER {
        // Best first.
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        if simplex[0].1 - simplex[N].1 <= SIMPLEX_FTOL {
            converged = true;
            break;
        }
        let centroid: [f64; 4] =
            std::array::from_fn(|i| simplex[..N].iter().map(|(x, _)| x[i]).sum::<f64>() / N as f64);
        let worst = simplex[N];
        let along = |t: f64| clamp_box(std::array::from_fn(|i| centroid[i] + t * (worst.0[i] - centroid[i])));

        let xr = along(-1.0);
        let fr = f(&xr)?;
        if fr > simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe)?;
            simplex[N] = if fe > fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr > simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr > worst.1 {
            let x = along(-0.5);
            (x, f(&x)?)
        } else {
            let x = along(0.5);
            (x, f(&x)?)
        };
        if fc > worst.1.max(fr) {
            simplex[N] = (xc, fc);
            continue;
        }
        let best = simplex[0].0;
        for v in simplex.iter_mut().skip(1) {
            let x = clamp_box(std::array::from_fn(|i| best[i] + 0.5 * (v.0[i] - best[i])));
            *v = (x, f(&x)?);
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(LocalMax { x: simplex[0].0, f: simplex[0].1, converged })
}

/// Start `0` extends the QAOA1 optimum with a vanishing second stage. Later
/// starts alternate between the full box and a small-angle box where the
/// large-D optima live (`gamma ~ 1/sqrt(D)`). Start `i` depends only on
/// `(seed, i)`.
pub fn qaoa2_start(degree: u32, seed: u64, index: usize) -> [f64; 4] {
    if index == 0 {
        let g = (1.0 / f64::from(degree - 1).sqrt()).atan();
        return [g, FRAC_PI_8, 0.0, 0.0];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let gamma_hi = if index.is_multiple_of(2) { (3.0 / f64::from(degree).sqrt()).min(PI) } else { PI };
    [
        rng.gen_range(0.0..gamma_hi),
        rng.gen_range(0.0..FRAC_PI_4),
        rng.gen_range(0.0..gamma_hi),
        rng.gen_range(0.0..FRAC_PI_4),
    ]
}

fn local_search(degree: u32, x0: [f64; 4]) -> Result<LocalMax> {
    let obj = |x: &[f64; 4]| f2_cut_fraction(degree, &Qaoa2Angles::from_array(*x));
    let scale = |x: [f64; 4]| -> [f64; 4] {
        std::array::from_fn(|i| (0.25 * x[i]).max(0.02 / f64::from(degree).sqrt()).min(0.25 * BOX_HI[i]))
    };
    let first = nelder_mead(obj, x0, scale(x0))?;
    // One restart from the optimum guards against a collapsed simplex.
    let second = nelder_mead(obj, first.x, scale(first.x))?;
    Ok(if second.f >= first.f { second } else { first })
}

/// Multistart Nelder-Mead over `gamma_i in [0, pi]`, `beta_i in [0, pi/4]`.
pub fn optimize_qaoa2(degree: u32, starts: usize, seed: u64) -> Result<OptResult> {
    check_degree(degree)?;
    if starts < 1 {
        return domain("starts must be at least 1");
    }
    let runs: Vec<LocalMax> = (0..starts)
        .into_par_iter()
        .map(|i| local_search(degree, qaoa2_start(degree, seed, i)))
        .collect::<Result<_>>()?;
    // First strict maximum in start order, independent of scheduling.
    let mut best = &runs[0];
    for r in &runs[1..] {
        if r.f > best.f {
            best = r;
        }
    }
    let angles = Qaoa2Angles::from_array(best.x);
    Ok(OptResult {
        best_params: OptParams::Qaoa(angles),
        stats: f2(degree, &angles)?,
        starts_used: starts,
        converged: best.converged,
        window_violation: false,
    })
}

/// Exhaustive integer threshold search. Ties go to the lexicographically
/// smaller `(tau1, tau2)`.
pub fn optimize_threshold(degree: u32, steps: u8, equal_taus: bool, window: &TauWindow) -> Result<OptResult> {
    check_degree(degree)?;
    if !(1..=2).contains(&steps) {
        return domain(format!("steps = {steps}; only 1 or 2 supported"));
    }
    let (lo, hi, windowed) = window.tau_range(degree)?;
    let candidates: Vec<ThresholdParams> = if steps == 1 {
        (lo..=hi).map(ThresholdParams::one_step).collect()
    } else if equal_taus {
        (lo..=hi).map(|t| ThresholdParams::two_step(t, t)).collect()
    } else {
        (lo..=hi).flat_map(|a| (lo..=hi).map(move |b| ThresholdParams::two_step(a, b))).collect()
    };
    let values: Vec<CutStats> = candidates
        .par_iter()
        .map(|p| threshold_improvement(degree, p))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if v.improvement > values[best].improvement + THRESHOLD_STRICT {
            best = i;
        }
    }
    let p = candidates[best];
    let window_violation = windowed && beaten_outside(degree, &p, values[best].improvement, lo, hi)?;
    Ok(OptResult {
        best_params: OptParams::Threshold(p),
        stats: values[best],
        starts_used: candidates.len(),
        converged: true,
        window_violation,
    })
}

/// Whether a window-edge argmax is beaten by its neighbour just outside the
/// window. A narrow window puts every candidate on an edge, so sitting on the
/// edge alone is not evidence of truncation.
fn beaten_outside(degree: u32, p: &ThresholdParams, value: f64, lo: u32, hi: u32) -> Result<bool> {
    let shift = |t: u32| -> Option<u32> {
        if t == lo && lo > 0 {
            Some(lo - 1)
        } else if t == hi && hi < degree + 1 {
            Some(hi + 1)
        } else {
            None
        }
    };
    let mut probes = Vec::new();
    if p.steps == 1 || p.tau1 == p.tau2 {
        if let Some(t) = shift(p.tau1) {
            probes.push(ThresholdParams { tau1: t, tau2: if p.steps == 2 { t } else { p.tau2 }, ..*p });
        }
    } else {
        if let Some(t) = shift(p.tau1) {
            probes.push(ThresholdParams { tau1: t, ..*p });
        }
        if let Some(t) = shift(p.tau2) {
            probes.push(ThresholdParams { tau2: t, ..*p });
        }
    }
    for q in probes {
        if threshold_improvement(degree, &q)?.improvement > value + THRESHOLD_STRICT {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Qaoa2,
    Threshold2,
    Tie,
}

impl Winner {
    pub fn decide(qaoa2: f64, threshold2: f64) -> Winner {
        if (qaoa2 - threshold2).abs() <= TIE_TOL {
            Winner::Tie
        } else if qaoa2 > threshold2 {
            Winner::Qaoa2
        } else {
            Winner::Threshold2
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Winner::Qaoa2 => "qaoa2",
            Winner::Threshold2 => "threshold2",
            Winner::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauMode {
    /// Free below [`FREE_TAU_BELOW`], equal above.
    Auto,
    Equal,
    Free,
}

impl TauMode {
    pub fn equal_at(self, degree: u32) -> bool {
        match self {
            TauMode::Auto => degree >= FREE_TAU_BELOW,
            TauMode::Equal => true,
            TauMode::Free => false,
        }
    }
}

/// Which algorithms a sweep evaluates and how.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub qaoa1: bool,
    pub qaoa2: bool,
    pub threshold1: bool,
    pub threshold2: bool,
    pub starts: usize,
    pub seed: u64,
    pub taus: TauMode,
    /// Overrides the per-degree default window.
    pub window: Option<TauWindow>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            qaoa1: true,
            qaoa2: true,
            threshold1: true,
            threshold2: true,
            starts: DEFAULT_STARTS,
            seed: 0,
            taus: TauMode::Auto,
            window: None,
        }
    }
}

/// Per-degree optima. Fields of algorithms left out of the sweep are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub degree: u32,
    pub qaoa1_impr: Option<f64>,
    pub qaoa2_impr: Option<f64>,
    pub thr1_impr: Option<f64>,
    pub thr2_impr: Option<f64>,
    pub qaoa1_gamma: Option<f64>,
    pub qaoa2_angles: Option<[f64; 4]>,
    pub thr1_tau: Option<u32>,
    pub thr2_taus: Option<(u32, u32)>,
    pub b_qaoa1: Option<f64>,
    pub b_qaoa2: Option<f64>,
    pub b_thr1: Option<f64>,
    pub b_thr2: Option<f64>,
    /// Present only when both QAOA2 and threshold2 were evaluated.
    pub winner: Option<Winner>,
    pub window_violation: bool,
}

impl SweepRecord {
    /// Assembles a record from whichever optima were computed.
    pub fn from_results(
        degree: u32,
        qaoa1: Option<&OptResult>,
        qaoa2: Option<&OptResult>,
        threshold1: Option<&OptResult>,
        threshold2: Option<&OptResult>,
    ) -> Self {
        let impr = |r: Option<&OptResult>| r.map(|r| r.stats.improvement);
        let b = |r: Option<&OptResult>| r.map(|r| r.stats.scaled_b);
        let winner = match (qaoa2, threshold2) {
            (Some(q), Some(t)) => Some(Winner::decide(q.stats.improvement, t.stats.improvement)),
            _ => None,
        };
        SweepRecord {
            degree,
            qaoa1_impr: impr(qaoa1),
            qaoa2_impr: impr(qaoa2),
            thr1_impr: impr(threshold1),
            thr2_impr: impr(threshold2),
            qaoa1_gamma: qaoa1.and_then(OptResult::angles).map(|a| a.gamma1),
            qaoa2_angles: qaoa2.and_then(OptResult::angles).map(Qaoa2Angles::to_array),
            thr1_tau: threshold1.and_then(OptResult::threshold_params).map(|p| p.tau1),
            thr2_taus: threshold2.and_then(OptResult::threshold_params).map(|p| (p.tau1, p.tau2)),
            b_qaoa1: b(qaoa1),
            b_qaoa2: b(qaoa2),
            b_thr1: b(threshold1),
            b_thr2: b(threshold2),
            winner,
            window_violation: [threshold1, threshold2].into_iter().flatten().any(|r| r.window_violation),
        }
    }
}

/// Window used for `degree` under `config`.
pub fn sweep_window(degree: u32, config: &SweepConfig) -> TauWindow {
    config.window.unwrap_or_else(|| TauWindow::default_for(degree))
}

pub fn sweep_one(degree: u32, config: &SweepConfig) -> Result<SweepRecord> {
    let window = sweep_window(degree, config);
    let q1 = config.qaoa1.then(|| optimize_qaoa1(degree)).transpose()?;
    let q2 = config.qaoa2.then(|| optimize_qaoa2(degree, config.starts, config.seed)).transpose()?;
    let t1 = config.threshold1.then(|| optimize_threshold(degree, 1, true, &window)).transpose()?;
    let t2 = config
        .threshold2
        .then(|| optimize_threshold(degree, 2, config.taus.equal_at(degree), &window))
        .transpose()?;
    Ok(SweepRecord::from_results(degree, q1.as_ref(), q2.as_ref(), t1.as_ref(), t2.as_ref()))
}

/// Records for every `D` in `[d_min, d_max]`, in ascending order.
pub fn compare_sweep(d_min: u32, d_max: u32, config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    if d_min < 2 || d_min > d_max {
        return domain(format!("degree range {d_min}:{d_max} invalid; need 2 <= min <= max"));
    }
    compare_degrees(&(d_min..=d_max).collect::<Vec<_>>(), config)
}

/// Records for an arbitrary list of degrees, in the given order.
pub fn compare_degrees(degrees: &[u32], config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    degrees.par_iter().map(|&d| sweep_one(d, config)).collect()
}

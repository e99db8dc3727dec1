//! Exact expected performance of the 1- and 2-step threshold algorithms on
//! D-regular graphs of girth greater than five.
//!
//! Notation follows the edge-centred picture: the edge is `(i, j)`, every
//! endpoint has `n = D - 1` other neighbours, and spins are `+1`/`-1`. A
//! vertex flips in step `s` when it agrees with at least `tau_s` of its `D`
//! neighbours, with all flips of a step applied simultaneously.
//!
//! The improvement over a random cut is `-<Z_i2 Z_j2> / 2`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::{bernoulli_pmf_row, bernoulli_pmf_unchecked};
use crate::stats::CutStats;

/// A spin value, always `+1` or `-1`.
pub type Spin = i8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThresholdParams {
    /// 1 or 2.
    pub steps: u8,
    pub tau1: u32,
    /// Ignored when `steps == 1`.
    pub tau2: u32,
}

impl ThresholdParams {
    pub fn one_step(tau: u32) -> Self {
        ThresholdParams { steps: 1, tau1: tau, tau2: 0 }
    }

    pub fn two_step(tau1: u32, tau2: u32) -> Self {
        ThresholdParams { steps: 2, tau1, tau2 }
    }

    /// `tau = D + 1` never flips, `tau = 0` always flips.
    pub fn validate(&self, degree: u32) -> Result<()> {
        if degree < 2 {
            return domain(format!("degree D = {degree}; need D >= 2"));
        }
        if !(1..=2).contains(&self.steps) {
            return domain(format!("steps = {}; only 1 or 2 supported", self.steps));
        }
        let check = |name: &str, tau: u32| {
            if tau > degree + 1 {
                domain(format!("{name} = {tau} outside [0, {}]", degree + 1))
            } else {
                Ok(())
            }
        };
        check("tau1", self.tau1)?;
        if self.steps == 2 {
            check("tau2", self.tau2)?;
        }
        Ok(())
    }

    /// Thresholds as a list, `[tau1]` or `[tau1, tau2]`.
    pub fn taus(&self) -> Vec<u32> {
        if self.steps == 1 {
            vec![self.tau1]
        } else {
            vec![self.tau1, self.tau2]
        }
    }
}

/// `-1` when `agreeing >= tau`, else `+1`.
pub fn q_threshold(agreeing: u32, tau: u32) -> Spin {
    if agreeing >= tau {
        -1
    } else {
        1
    }
}

/// Step-1 statistics of one neighbour of `i`, split by whether it initially
/// agreed with `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborStepStats {
    /// Mean step-1 spin of a neighbour that initially agreed (spin `+1`).
    pub z1_plus: f64,
    /// Mean step-1 spin of a neighbour that initially disagreed (spin `-1`).
    pub z1_minus: f64,
    /// Chance that an initially agreeing neighbour still agrees after step 1.
    pub p_plus: f64,
    /// Chance that an initially disagreeing neighbour agrees after step 1.
    pub p_minus: f64,
    /// Other neighbours per vertex, `D - 1`.
    pub n: u32,
}

pub fn neighbor_step_stats(n: u32, tau1: u32) -> NeighborStepStats {
    let pmf = bernoulli_pmf_row(0.5, u64::from(n));
    // An agreeing neighbour sees m + 1 agreements (i included); it keeps its
    // spin when m + 1 < tau1. A disagreeing neighbour sees m and flips to +1
    // when m >= tau1. Saturated thresholds are pinned to exact 0/1.
    let p_plus = if tau1 == 0 {
        0.0
    } else if tau1 >= n + 2 {
        1.0
    } else {
        pmf[..tau1 as usize - 1].iter().sum::<f64>().clamp(0.0, 1.0)
    };
    let p_minus = if tau1 == 0 {
        1.0
    } else if tau1 > n {
        0.0
    } else {
        pmf[tau1 as usize..].iter().sum::<f64>().clamp(0.0, 1.0)
    };
    NeighborStepStats {
        z1_plus: 2.0 * p_plus - 1.0,
        z1_minus: 2.0 * p_minus - 1.0,
        p_plus,
        p_minus,
        n,
    }
}

/// `H(k, l, r)`: of the `k` initially agreeing neighbours `l` still agree,
/// and of the `n - k` initially disagreeing ones `r` now agree.
pub fn agreement_pmf(k: u32, l: u32, r: u32, stats: &NeighborStepStats) -> Result<f64> {
    let n = stats.n;
    if k > n || l > k || r > n - k {
        return domain(format!("H({k}, {l}, {r}) out of range for n = {n}"));
    }
    Ok(bernoulli_pmf_unchecked(stats.p_plus, u64::from(k), u64::from(l))
        * bernoulli_pmf_unchecked(stats.p_minus, u64::from(n - k), u64::from(r)))
}

/// Step-2 spin factor `Q(l, r, A, B)`.
///
/// `A = Z_i1 Z_i0` (did `i` keep its spin), `B = Z_i1 Z_j1` (do the edge
/// endpoints agree after step 1). With `A = +1` the `l + r` neighbours that
/// agree with `i`'s initial spin agree with `i` now; otherwise the other
/// `n - l - r` do. The edge partner adds one more agreement when `B = +1`.
pub fn q2_count(l: u32, r: u32, a: Spin, b: Spin, n: u32, tau2: u32) -> Spin {
    let same = l + r;
    let count = if a == 1 { same } else { n - same } + u32::from(b == 1);
    q_threshold(count, tau2)
}

/// `sum_{l, r} H(k, l, r) Q(l, r, A, B)` for every `(A, B, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Z2Table {
    n: u32,
    values: Vec<f64>,
}

impl Z2Table {
    fn slot(n: u32, a: Spin, b: Spin, k: u32) -> usize {
        let ai = usize::from(a == 1);
        let bi = usize::from(b == 1);
        (ai * 2 + bi) * (n as usize + 1) + k as usize
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, a: Spin, b: Spin, k: u32) -> f64 {
        self.values[Self::slot(self.n, a, b, k)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Builds the step-2 table using that `Q` depends on `(l, r)` only through
/// `s = l + r`: each entry is `1 - 2 P(S >= t)` or `2 P(S >= t) - 1` for a
/// single cut point `t`, where `S` is the sum of two independent binomials.
/// Total cost is `O(n^2)`.
pub fn z2_table(n: u32, tau1: u32, tau2: u32) -> Z2Table {
    let stats = neighbor_step_stats(n, tau1);
    let nn = n as usize;

    // tails[j][x] = P(Bin(j, p_minus) >= x) for x in 0..=j.
    let tails: Vec<Vec<f64>> = (0..=nn)
        .map(|j| {
            let row = bernoulli_pmf_row(stats.p_minus, j as u64);
            let mut tail = vec![0.0; j + 1];
            let mut acc = 0.0;
            for x in (0..=j).rev() {
                acc += row[x];
                tail[x] = acc;
            }
            tail[0] = 1.0;
            tail
        })
        .collect();
    let tail = |j: usize, x: i64| -> f64 {
        if x <= 0 {
            1.0
        } else if x as usize > j {
            0.0
        } else {
            tails[j][x as usize]
        }
    };

    let mut values = vec![0.0; 4 * (nn + 1)];
    for k in 0..=nn {
        let agree_row = bernoulli_pmf_row(stats.p_plus, k as u64);
        let rest = nn - k;
        // P(S >= t) with S = L + R, L ~ Bin(k, p_plus), R ~ Bin(n - k, p_minus).
        let upper = |t: i64| -> f64 {
            if t <= 0 {
                return 1.0;
            }
            if t > nn as i64 {
                return 0.0;
            }
            agree_row
                .iter()
                .enumerate()
                .map(|(l, &pl)| if pl == 0.0 { 0.0 } else { pl * tail(rest, t - l as i64) })
                .sum::<f64>()
                .clamp(0.0, 1.0)
        };
        for a in [-1i8, 1] {
            for b in [-1i8, 1] {
                let bonus = i64::from(b == 1);
                let tau2 = i64::from(tau2);
                let v = if a == 1 {
                    // flips when s + bonus >= tau2
                    1.0 - 2.0 * upper(tau2 - bonus)
                } else {
                    // flips when n - s + bonus >= tau2, i.e. s <= n + bonus - tau2
                    2.0 * upper(nn as i64 + bonus - tau2 + 1) - 1.0
                };
                values[Z2Table::slot(n, a, b, k as u32)] = v;
            }
        }
    }
    Z2Table { n, values }
}

/// `<Z_i2 Z_j2>` averaged over the initially-equal and initially-unequal
/// cases, each weighted 1/2.
pub fn correlation2(degree: u32, tau1: u32, tau2: u32) -> Result<f64> {
    ThresholdParams::two_step(tau1, tau2).validate(degree)?;
    let n = degree - 1;
    let pmf = bernoulli_pmf_row(0.5, u64::from(n));
    let table = z2_table(n, tau1, tau2);
    let q1 = |x: u32| q_threshold(x, tau1);

    // Step-2 spin of an endpoint given its own step-1 spin, its initial spin,
    // its partner's step-1 spin, and its agreeing-neighbour count k.
    let z2 = |k: u32, z1: Spin, z0: Spin, partner1: Spin| -> f64 {
        f64::from(z1) * table.get(z1 * z0, z1 * partner1, k)
    };

    let mut equal = 0.0;
    let mut unequal = 0.0;
    for k in 0..=n {
        let mut eq_row = 0.0;
        let mut ne_row = 0.0;
        for u in 0..=n {
            let w = pmf[u as usize];
            // Z_i0 = Z_j0 = +1: each endpoint counts the other as agreeing.
            let (i1, j1) = (q1(k + 1), q1(u + 1));
            eq_row += w * z2(k, i1, 1, j1) * z2(u, j1, 1, i1);
            // Z_i0 = +1, Z_j0 = -1.
            let (i1, j1) = (q1(k), -q1(u));
            ne_row += w * z2(k, i1, 1, j1) * z2(u, j1, -1, i1);
        }
        equal += pmf[k as usize] * eq_row;
        unequal += pmf[k as usize] * ne_row;
    }
    Ok(0.5 * (equal + unequal))
}

pub fn threshold2_improvement(degree: u32, tau1: u32, tau2: u32) -> Result<CutStats> {
    let corr = correlation2(degree, tau1, tau2)?;
    Ok(CutStats::from_improvement(degree, -0.5 * corr))
}

/// One step is two steps whose second threshold can never be reached.
pub fn threshold1_improvement(degree: u32, tau: u32) -> Result<CutStats> {
    ThresholdParams::one_step(tau).validate(degree)?;
    threshold2_improvement(degree, tau, degree + 1)
}

pub fn threshold_improvement(degree: u32, params: &ThresholdParams) -> Result<CutStats> {
    params.validate(degree)?;
    match params.steps {
        1 => threshold1_improvement(degree, params.tau1),
        _ => threshold2_improvement(degree, params.tau1, params.tau2),
    }
}

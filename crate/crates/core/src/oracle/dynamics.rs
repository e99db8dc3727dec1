use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::Graph;
use super::MAX_ORACLE_VERTICES;
use crate::error::{domain, Error, Result};
use crate::threshold::ThresholdParams;

/// Trials per RNG substream. Fixed so results do not depend on thread count.
const MC_CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    /// Mean cut fraction.
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

fn checked_degree(g: &Graph, params: &ThresholdParams) -> Result<u32> {
    let Some(d) = g.regular_degree() else {
        return domain("threshold dynamics need a regular graph");
    };
    params.validate(d as u32)?;
    if g.edge_count() == 0 {
        return domain("graph has no edges");
    }
    Ok(d as u32)
}

/// One synchronous step on a bitmask state (bit set = spin -1).
fn step_mask(x: u32, masks: &[u32], degree: u32, tau: u32) -> u32 {
    let mut next = x;
    for (v, &m) in masks.iter().enumerate() {
        let differ = if (x >> v) & 1 == 1 { (m & !x).count_ones() } else { (m & x).count_ones() };
        if degree - differ >= tau {
            next ^= 1 << v;
        }
    }
    next
}

/// Exact expected cut fraction after the threshold steps, averaged over all
/// `2^V` initial assignments.
pub fn enumerate_threshold_exact(g: &Graph, params: &ThresholdParams) -> Result<f64> {
    let v = g.vertex_count();
    if v > MAX_ORACLE_VERTICES {
        return Err(Error::Resource(format!(
            "{v} vertices exceeds the {MAX_ORACLE_VERTICES}-vertex enumeration limit"
        )));
    }
    let degree = checked_degree(g, params)?;
    let masks: Vec<u32> = (0..v).map(|u| g.neighbors(u).iter().fold(0, |m, &w| m | 1 << w)).collect();
    let edges = g.edges();
    let taus = params.taus();
    let total: u64 = (0..1u32 << v)
        .into_par_iter()
        .map(|x0| {
            let x = taus.iter().fold(x0, |x, &t| step_mask(x, &masks, degree, t));
            edges.iter().filter(|&&(a, b)| ((x >> a) ^ (x >> b)) & 1 == 1).count() as u64
        })
        .sum();
    Ok(total as f64 / ((1u64 << v) as f64 * edges.len() as f64))
}

fn step_spins(spins: &[i8], next: &mut [i8], g: &Graph, tau: u32) {
    for (v, out) in next.iter_mut().enumerate() {
        let agree = g.neighbors(v).iter().filter(|&&w| spins[w] == spins[v]).count() as u32;
        *out = if agree >= tau { -spins[v] } else { spins[v] };
    }
}

/// Running (count, mean, M2) for merging chunk statistics in a fixed order.
#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments { n, mean: self.mean + d * o.n / n, m2: self.m2 + o.m2 + d * d * self.n * o.n / n }
    }
}

/// Monte-Carlo estimate of the cut fraction. Trial chunk `c` draws from
/// ChaCha8 stream `c` of `seed`, so the output is a function of
/// `(g, params, trials, seed)` alone.
pub fn mc_threshold(g: &Graph, params: &ThresholdParams, trials: u64, seed: u64) -> Result<McEstimate> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    checked_degree(g, params)?;
    let edges = g.edges();
    let taus = params.taus();
    let chunks = trials.div_ceil(MC_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = MC_CHUNK.min(trials - c * MC_CHUNK);
            let mut spins = vec![1i8; g.vertex_count()];
            let mut next = spins.clone();
            let mut acc = Moments::default();
            for _ in 0..count {
                for s in spins.iter_mut() {
                    *s = if rng.gen::<bool>() { 1 } else { -1 };
                }
                for &t in &taus {
                    step_spins(&spins, &mut next, g, t);
                    std::mem::swap(&mut spins, &mut next);
                }
                let cut = edges.iter().filter(|&&(a, b)| spins[a] != spins[b]).count();
                acc.push(cut as f64 / edges.len() as f64);
            }
            acc
        })
        .collect();
    let m = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if trials > 1 { m.m2 / (m.n - 1.0) } else { 0.0 };
    Ok(McEstimate { mean: m.mean, stderr: (var / m.n).sqrt(), trials, seed })
}

/// Monte-Carlo estimate of the cut fraction on one edge of an idealized
/// graph: the radius-2 neighbourhood of the edge is a tree, which holds in
/// any `D`-regular graph of girth above five. Needs no concrete graph, so it
/// reaches degrees far beyond exhaustive enumeration.
pub fn mc_threshold_lightcone(degree: u32, params: &ThresholdParams, trials: u64, seed: u64) -> Result<McEstimate> {
    params.validate(degree)?;
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    let n = (degree - 1) as usize;
    let taus = params.taus();
    let chunks = trials.div_ceil(MC_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = MC_CHUNK.min(trials - c * MC_CHUNK);
            let mut acc = Moments::default();
            // Per centre: initial spin, then spins and leaf agreement counts
            // of its n outer neighbours.
            let mut outer = [vec![0i8; n], vec![0i8; n]];
            let mut leaf_agree = [vec![0u32; n], vec![0u32; n]];
            for _ in 0..count {
                let centre: [i8; 2] = [if rng.gen() { 1 } else { -1 }, if rng.gen() { 1 } else { -1 }];
                for side in 0..2 {
                    for a in 0..n {
                        outer[side][a] = if rng.gen() { 1 } else { -1 };
                        leaf_agree[side][a] = random_popcount(&mut rng, n);
                    }
                }
                let step1 = |side: usize| -> (i8, Vec<i8>) {
                    let z = centre[side];
                    let other = centre[1 - side];
                    let agree = u32::from(other == z) + outer[side].iter().filter(|&&s| s == z).count() as u32;
                    let z1 = if agree >= taus[0] { -z } else { z };
                    let outs = (0..n)
                        .map(|a| {
                            let s = outer[side][a];
                            let agree = u32::from(s == z) + leaf_agree[side][a];
                            if agree >= taus[0] { -s } else { s }
                        })
                        .collect();
                    (z1, outs)
                };
                let (mut zi, outs_i) = step1(0);
                let (mut zj, outs_j) = step1(1);
                if let Some(&t2) = taus.get(1) {
                    let agree_i = u32::from(zj == zi) + outs_i.iter().filter(|&&s| s == zi).count() as u32;
                    let agree_j = u32::from(zi == zj) + outs_j.iter().filter(|&&s| s == zj).count() as u32;
                    let ni = if agree_i >= t2 { -zi } else { zi };
                    let nj = if agree_j >= t2 { -zj } else { zj };
                    (zi, zj) = (ni, nj);
                }
                acc.push(if zi != zj { 1.0 } else { 0.0 });
            }
            acc
        })
        .collect();
    let m = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if trials > 1 { m.m2 / (m.n - 1.0) } else { 0.0 };
    Ok(McEstimate { mean: m.mean, stderr: (var / m.n).sqrt(), trials, seed })
}

/// Number of set bits among `bits` fair coin flips.
fn random_popcount(rng: &mut ChaCha8Rng, bits: usize) -> u32 {
    let mut total = 0;
    let mut left = bits;
    while left >= 64 {
        total += rng.gen::<u64>().count_ones();
        left -= 64;
    }
    if left > 0 {
        total += (rng.gen::<u64>() & ((1u64 << left) - 1)).count_ones();
    }
    total
}

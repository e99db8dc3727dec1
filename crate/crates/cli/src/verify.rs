//! Invariant suites behind `maxcut verify`. Each failing check becomes one
//! JSON line on stdout.

use std::f64::consts::PI;

use maxcut_core::oracle::{
    cycle_graph, enumerate_threshold_exact, girth, heawood_graph, load_edge_list, mc_threshold,
    qaoa_statevector_cut_fraction, Graph,
};
use maxcut_core::qaoa::{f1, f2, f2_ring};
use maxcut_core::threshold::threshold_improvement;
use maxcut_core::{Qaoa2Angles, ThresholdParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::GraphSpec;

#[derive(Debug, Serialize)]
pub struct Failure {
    pub check: String,
    pub inputs: Value,
    pub expected: f64,
    pub got: f64,
    pub delta: f64,
    pub tol: f64,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl Outcome {
    fn compare(&mut self, check: &str, inputs: Value, expected: f64, got: f64, tol: f64) {
        self.checks += 1;
        let delta = (got - expected).abs();
        // NaN never passes.
        if delta.is_nan() || delta > tol {
            self.failures.push(Failure { check: check.into(), inputs, expected, got, delta, tol });
        }
    }
}

/// Refusal to run a check whose hypothesis the input graph does not meet.
#[derive(Debug)]
pub struct Refused(pub String);

impl std::fmt::Display for Refused {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refused {}

pub fn build_graph(spec: &GraphSpec) -> anyhow::Result<Graph> {
    Ok(match spec {
        GraphSpec::Heawood => heawood_graph(),
        GraphSpec::Cycle(n) => cycle_graph(*n)?,
        GraphSpec::File(p) => load_edge_list(p)?,
    })
}

/// The closed forms hold on D-regular graphs of girth above five.
pub fn girth_gate(g: &Graph) -> Result<u32, Refused> {
    let Some(d) = g.regular_degree().filter(|&d| d >= 2) else {
        return Err(Refused("graph is not D-regular with D >= 2; the closed forms do not apply".into()));
    };
    match girth(g) {
        Some(k) if k <= 5 => Err(Refused(format!(
            "graph has girth {k} <= 5; the closed forms assume girth > 5 (no triangles, squares or pentagons)"
        ))),
        _ => Ok(d as u32),
    }
}

fn random_angles(rng: &mut ChaCha8Rng) -> Qaoa2Angles {
    Qaoa2Angles::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI))
}

pub fn reductions(points: usize, seed: u64, tol: f64) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in [2u32, 3, 5, 17, 100] {
        for _ in 0..points {
            let (g, b) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            let base = f1(d, g, b)?.cut_fraction;
            let inputs = json!({"D": d, "gamma": g, "beta": b});
            let late = f2(d, &Qaoa2Angles::new(0.0, 0.0, g, b))?.cut_fraction;
            out.compare("f2(D,0,0,g,b) = f1", inputs.clone(), base, late, tol);
            let early = f2(d, &Qaoa2Angles::new(g, b, 0.0, 0.0))?.cut_fraction;
            out.compare("f2(D,g,b,0,0) = f1", inputs, base, early, tol);
        }
    }
    for _ in 0..points * 10 {
        let a = random_angles(&mut rng);
        out.compare(
            "f2_ring = f2(2,.)",
            json!({"angles": a.to_array()}),
            f2(2, &a)?.cut_fraction,
            f2_ring(&a).cut_fraction,
            tol,
        );
    }
    Ok(out)
}

pub fn oracle_qaoa(g: &Graph, tuples: usize, seed: u64, tol: f64) -> anyhow::Result<Outcome> {
    let d = girth_gate(g)?;
    let mut out = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tuples {
        let a = random_angles(&mut rng);
        let sim = qaoa_statevector_cut_fraction(g, &a, 1)?;
        out.compare("statevector p=1 = f1", json!({"D": d, "angles": [a.gamma1, a.beta1]}), f1(d, a.gamma1, a.beta1)?.cut_fraction, sim, tol);
        let sim = qaoa_statevector_cut_fraction(g, &a, 2)?;
        out.compare("statevector p=2 = f2", json!({"D": d, "angles": a.to_array()}), f2(d, &a)?.cut_fraction, sim, tol);
    }
    Ok(out)
}

pub fn oracle_threshold(g: &Graph, tol: f64) -> anyhow::Result<Outcome> {
    let d = girth_gate(g)?;
    let mut out = Outcome::default();
    let mut params: Vec<ThresholdParams> = (0..=d + 1).map(ThresholdParams::one_step).collect();
    params.extend((0..=d + 1).flat_map(|a| (0..=d + 1).map(move |b| ThresholdParams::two_step(a, b))));
    for p in params {
        let exact = enumerate_threshold_exact(g, &p)?;
        let closed = threshold_improvement(d, &p)?.cut_fraction;
        out.compare("enumeration = closed form", json!({"D": d, "steps": p.steps, "taus": p.taus()}), closed, exact, tol);
    }
    Ok(out)
}

/// `z_limit` is the allowed distance in standard errors.
pub fn mc(g: &Graph, params: &ThresholdParams, trials: u64, seed: u64, z_limit: f64) -> anyhow::Result<Outcome> {
    let d = girth_gate(g)?;
    let est = mc_threshold(g, params, trials, seed)?;
    let closed = threshold_improvement(d, params)?.cut_fraction;
    let mut out = Outcome::default();
    let z = if est.stderr > 0.0 { (est.mean - closed) / est.stderr } else if est.mean == closed { 0.0 } else { f64::INFINITY };
    out.compare(
        "monte carlo within z_limit stderr of closed form",
        json!({"D": d, "steps": params.steps, "taus": params.taus(), "trials": trials, "seed": seed, "mean": est.mean, "stderr": est.stderr}),
        0.0,
        z,
        z_limit,
    );
    eprintln!("mc: mean {:.6} +- {:.6}, closed form {closed:.6}, z = {z:+.2}", est.mean, est.stderr);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate() {
        assert_eq!(girth_gate(&heawood_graph()).unwrap(), 3);
        assert_eq!(girth_gate(&cycle_graph(6).unwrap()).unwrap(), 2);
        assert!(girth_gate(&cycle_graph(5).unwrap()).is_err());
        assert!(girth_gate(&Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()).is_err());
    }

    #[test]
    fn suites_pass_on_good_graphs() {
        assert!(reductions(50, 1, 1e-12).unwrap().failures.is_empty());
        assert!(oracle_qaoa(&cycle_graph(8).unwrap(), 5, 1, 1e-9).unwrap().failures.is_empty());
        assert!(oracle_threshold(&cycle_graph(7).unwrap(), 1e-12).unwrap().failures.is_empty());
        let out = mc(&heawood_graph(), &ThresholdParams::two_step(2, 3), 20_000, 1, 4.0).unwrap();
        assert!(out.failures.is_empty());
    }

    #[test]
    fn impossible_tolerance_reports_failures() {
        let out = oracle_qaoa(&cycle_graph(6).unwrap(), 3, 1, -1.0).unwrap();
        assert_eq!(out.failures.len(), 6);
        let line = serde_json::to_string(&out.failures[0]).unwrap();
        assert!(line.contains("\"check\"") && line.contains("\"inputs\""));
    }
}

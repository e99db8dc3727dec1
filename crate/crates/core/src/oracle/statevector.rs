use num_complex::Complex64;

use super::graph::Graph;
use super::MAX_ORACLE_VERTICES;
use crate::error::{domain, Error, Result};
use crate::qaoa::Qaoa2Angles;

/// Full `2^V` amplitude vector; qubit `v` is bit `v` of the basis index.
#[derive(Debug, Clone)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The `|+>^V` state.
    pub fn uniform(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector { qubits, amplitudes: vec![a; dim] }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// `exp(-i gamma C)` for a diagonal `C` given by its eigenvalue per basis
    /// state.
    pub fn apply_diagonal_phase(&mut self, diagonal: &[f64], gamma: f64) {
        debug_assert_eq!(diagonal.len(), self.amplitudes.len());
        for (a, &c) in self.amplitudes.iter_mut().zip(diagonal) {
            *a *= Complex64::from_polar(1.0, -gamma * c);
        }
    }

    /// `exp(-i beta sum_v X_v)`, one butterfly pass per qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        let mis = Complex64::new(0.0, -s);
        for q in 0..self.qubits {
            let stride = 1usize << q;
            for block in (0..self.amplitudes.len()).step_by(2 * stride) {
                for idx in block..block + stride {
                    let a0 = self.amplitudes[idx];
                    let a1 = self.amplitudes[idx + stride];
                    self.amplitudes[idx] = a0 * c + a1 * mis;
                    self.amplitudes[idx + stride] = a0 * mis + a1 * c;
                }
            }
        }
    }

    /// `<psi| D |psi>` for a diagonal observable.
    pub fn expectation_diagonal(&self, diagonal: &[f64]) -> f64 {
        self.amplitudes
            .iter()
            .zip(diagonal)
            .map(|(a, &d)| a.norm_sqr() * d)
            .sum()
    }
}

fn cut_diagonal(g: &Graph) -> Vec<f64> {
    let edges = g.edges();
    (0..1usize << g.vertex_count())
        .map(|x| edges.iter().filter(|&&(u, v)| ((x >> u) ^ (x >> v)) & 1 == 1).count() as f64)
        .collect()
}

fn stage_angles(angles: &Qaoa2Angles, p: usize) -> Result<Vec<(f64, f64)>> {
    match p {
        1 => Ok(vec![(angles.gamma1, angles.beta1)]),
        2 => Ok(vec![(angles.gamma1, angles.beta1), (angles.gamma2, angles.beta2)]),
        _ => domain(format!("depth p = {p}; only 1 and 2 supported")),
    }
}

/// Runs QAOA_p on `g` and returns the final state. With `p = 1` only
/// `(gamma1, beta1)` are used.
pub fn qaoa_state(g: &Graph, angles: &Qaoa2Angles, p: usize) -> Result<StateVector> {
    let v = g.vertex_count();
    if v > MAX_ORACLE_VERTICES {
        return Err(Error::Resource(format!(
            "{v} vertices exceeds the {MAX_ORACLE_VERTICES}-qubit statevector limit"
        )));
    }
    let stages = stage_angles(angles, p)?;
    let cost = cut_diagonal(g);
    let mut psi = StateVector::uniform(v);
    for (gamma, beta) in stages {
        psi.apply_diagonal_phase(&cost, gamma);
        psi.apply_mixer(beta);
    }
    Ok(psi)
}

/// Exact `sum_{(u,v) in E} <C_uv> / |E|` after QAOA_p.
pub fn qaoa_statevector_cut_fraction(g: &Graph, angles: &Qaoa2Angles, p: usize) -> Result<f64> {
    let edges = g.edge_count();
    if edges == 0 {
        return domain("graph has no edges");
    }
    let psi = qaoa_state(g, angles, p)?;
    Ok(psi.expectation_diagonal(&cut_diagonal(g)) / edges as f64)
}

/// Exact `<C_uv>` for a single edge after QAOA_p.
pub fn qaoa_statevector_edge_cut(g: &Graph, edge: (usize, usize), angles: &Qaoa2Angles, p: usize) -> Result<f64> {
    let (u, v) = edge;
    if u >= g.vertex_count() || !g.neighbors(u).contains(&v) {
        return domain(format!("({u}, {v}) is not an edge"));
    }
    let psi = qaoa_state(g, angles, p)?;
    Ok(psi
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(x, _)| ((x >> u) ^ (x >> v)) & 1 == 1)
        .map(|(_, a)| a.norm_sqr())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::graph::{complete_graph, cycle_graph, heawood_graph, lightcone_tree};
    use crate::qaoa::{f1, f2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn norm_preserved_by_every_stage() {
        let g = heawood_graph();
        let cost = cut_diagonal(&g);
        let mut psi = StateVector::uniform(g.vertex_count());
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..3 {
            psi.apply_diagonal_phase(&cost, rng.gen_range(-PI..PI));
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
            psi.apply_mixer(rng.gen_range(-PI..PI));
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn mixer_single_qubit_matches_rotation() {
        // exp(-i b X)|0> = cos b |0> - i sin b |1>
        let mut psi = StateVector { qubits: 1, amplitudes: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)] };
        psi.apply_mixer(0.3);
        assert!((psi.amplitudes[0] - Complex64::new(0.3f64.cos(), 0.0)).norm() < 1e-15);
        assert!((psi.amplitudes[1] - Complex64::new(0.0, -(0.3f64.sin()))).norm() < 1e-15);
    }

    #[test]
    fn zero_angles_give_half() {
        for g in [heawood_graph(), cycle_graph(7).unwrap(), complete_graph(5)] {
            for p in [1, 2] {
                let f = qaoa_statevector_cut_fraction(&g, &Qaoa2Angles::ZERO, p).unwrap();
                assert!((f - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn depth_one_matches_closed_form_on_cycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [6usize, 8] {
            let g = cycle_graph(n).unwrap();
            for _ in 0..100 {
                let (gamma, beta) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
                let a = Qaoa2Angles::new(gamma, beta, 0.0, 0.0);
                let sim = qaoa_statevector_cut_fraction(&g, &a, 1).unwrap();
                let closed = f1(2, gamma, beta).unwrap().cut_fraction;
                assert!((sim - closed).abs() < 1e-10, "n={n}");
            }
        }
    }

    #[test]
    fn depth_two_matches_closed_form_on_girth_six_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (g, d) in [(heawood_graph(), 3u32), (cycle_graph(6).unwrap(), 2), (cycle_graph(8).unwrap(), 2)] {
            for _ in 0..20 {
                let a = Qaoa2Angles::new(
                    rng.gen_range(-PI..PI),
                    rng.gen_range(-PI..PI),
                    rng.gen_range(-PI..PI),
                    rng.gen_range(-PI..PI),
                );
                let sim = qaoa_statevector_cut_fraction(&g, &a, 2).unwrap();
                let closed = f2(d, &a).unwrap().cut_fraction;
                assert!((sim - closed).abs() < 1e-9, "D={d}: {sim} vs {closed}");
            }
        }
    }

    /// Negative control: a 5-cycle has a pentagon inside the depth-2
    /// lightcone, so the closed form is not expected to hold.
    #[test]
    fn pentagon_disagrees_with_closed_form() {
        let g = cycle_graph(5).unwrap();
        let a = Qaoa2Angles::new(0.6, 0.4, 0.9, 0.3);
        let sim = qaoa_statevector_cut_fraction(&g, &a, 2).unwrap();
        let closed = f2(2, &a).unwrap().cut_fraction;
        assert!((sim - closed).abs() > 1e-6);
    }

    /// Settles empirically whether truncating the lightcone to a tree with
    /// leaf boundary reproduces the closed form on the central edge.
    #[test]
    fn lightcone_tree_central_edge_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for d in [2usize, 3] {
            let t = lightcone_tree(d).unwrap();
            for _ in 0..10 {
                let a = Qaoa2Angles::new(
                    rng.gen_range(-PI..PI),
                    rng.gen_range(-PI..PI),
                    rng.gen_range(-PI..PI),
                    rng.gen_range(-PI..PI),
                );
                let sim = qaoa_statevector_edge_cut(&t, (0, 1), &a, 2).unwrap();
                let closed = f2(d as u32, &a).unwrap().cut_fraction;
                assert!((sim - closed).abs() < 1e-10, "D={d}: {sim} vs {closed}");
            }
        }
    }

    #[test]
    fn limits() {
        let g = cycle_graph(25).unwrap();
        assert!(matches!(
            qaoa_statevector_cut_fraction(&g, &Qaoa2Angles::ZERO, 1),
            Err(Error::Resource(_))
        ));
        let g = cycle_graph(4).unwrap();
        assert!(qaoa_statevector_cut_fraction(&g, &Qaoa2Angles::ZERO, 3).is_err());
        assert!(qaoa_statevector_edge_cut(&g, (0, 2), &Qaoa2Angles::ZERO, 1).is_err());
    }
}

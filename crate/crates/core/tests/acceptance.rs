//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use maxcut_core::optimize::{optimize_qaoa1, optimize_qaoa2, optimize_threshold, TauWindow};
use maxcut_core::oracle::{
    cycle_graph, enumerate_threshold_exact, heawood_graph, mc_threshold, qaoa_statevector_cut_fraction,
};
use maxcut_core::qaoa::{f1, f2, f2_ring};
use maxcut_core::threshold::threshold2_improvement;
use maxcut_core::{Qaoa2Angles, ThresholdParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_200_601;
const STARTS: usize = 64;

/// D, then improvement columns QAOA1, QAOA2, Threshold2 and the
/// Threshold2 (tau1, tau2).
type Row = (u32, f64, f64, f64, (u32, u32));

const TABLE: [Row; 18] = [
    (2, 0.2500, 0.3333, 0.3125, (2, 2)),
    (3, 0.1925, 0.2559, 0.2461, (2, 3)),
    (4, 0.1624, 0.1693, 0.2128, (3, 4)),
    (5, 0.1431, 0.1907, 0.1851, (4, 4)),
    (6, 0.1294, 0.1726, 0.1832, (4, 5)),
    (7, 0.1190, 0.1589, 0.1607, (5, 5)),
    (8, 0.1108, 0.1480, 0.1599, (5, 6)),
    (9, 0.1040, 0.1391, 0.1399, (5, 7)),
    (10, 0.0984, 0.1317, 0.1409, (6, 7)),
    (11, 0.0936, 0.1253, 0.1301, (7, 8)),
    (12, 0.0894, 0.1197, 0.1254, (7, 8)),
    (13, 0.0858, 0.1149, 0.1218, (8, 9)),
    (14, 0.0825, 0.1106, 0.1163, (8, 10)),
    (15, 0.0796, 0.1067, 0.1143, (9, 10)),
    (16, 0.0770, 0.1032, 0.1110, (9, 11)),
    (17, 0.0747, 0.1001, 0.1076, (10, 11)),
    (18, 0.0725, 0.0972, 0.1056, (10, 12)),
    (19, 0.0705, 0.0945, 0.1014, (11, 12)),
];

struct Report {
    failed: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        println!("[{}] {id:<4} {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id.to_string());
        }
    }

    fn budget(&mut self, id: &str, started: Instant, limit: Duration) {
        let took = started.elapsed();
        self.line(id, took < limit, format!("runtime {took:.2?} (budget {limit:?})"));
    }
}

fn random_angles(rng: &mut ChaCha8Rng) -> Qaoa2Angles {
    Qaoa2Angles::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI))
}

fn criterion_1(r: &mut Report) {
    let started = Instant::now();
    let mut bad_q1 = Vec::new();
    let mut bad_q2 = Vec::new();
    let mut bad_t2 = Vec::new();
    let (mut err_q1, mut err_q2, mut err_t2) = (0f64, 0f64, 0f64);
    for &(d, q1, q2, t2, taus) in &TABLE {
        let got = optimize_qaoa1(d).unwrap().stats.improvement;
        err_q1 = err_q1.max((got - q1).abs());
        if (got - q1).abs() > 5e-5 {
            bad_q1.push(format!("D={d}: {got:.4} vs {q1}"));
        }
        let got = optimize_qaoa2(d, STARTS, SEED).unwrap().stats.improvement;
        err_q2 = err_q2.max((got - q2).abs());
        if (got - q2).abs() > 5e-4 {
            bad_q2.push(format!("D={d}: {got:.4} vs {q2}"));
        }
        let res = optimize_threshold(d, 2, false, &TauWindow::default_for(d)).unwrap();
        let got = res.stats.improvement;
        let p = res.threshold_params().unwrap();
        err_t2 = err_t2.max((got - t2).abs());
        if (got - t2).abs() > 5e-5 || (p.tau1, p.tau2) != taus {
            bad_t2.push(format!("D={d}: {got:.4} ({}, {}) vs {t2} {taus:?}", p.tau1, p.tau2));
        }
    }
    let summary = |bad: &[String], err: f64| {
        if bad.is_empty() {
            format!("max |err| {err:.2e}")
        } else {
            format!("max |err| {err:.2e}; mismatches: {}", bad.join("; "))
        }
    };
    r.line("1a", bad_q1.is_empty(), format!("QAOA1 column D=2..19 within 5e-5, {}", summary(&bad_q1, err_q1)));
    r.line("1b", bad_q2.is_empty(), format!("QAOA2 column D=2..19 within 5e-4, {}", summary(&bad_q2, err_q2)));
    r.line(
        "1c",
        bad_t2.is_empty(),
        format!("Threshold2 column and (tau1, tau2) D=2..19 within 5e-5, {}", summary(&bad_t2, err_t2)),
    );
    r.budget("1d", started, Duration::from_secs(120));
}

fn criterion_2(r: &mut Report) {
    let d2 = optimize_qaoa2(2, STARTS, SEED).unwrap().stats.improvement;
    r.line("2a", (d2 - 1.0 / 3.0).abs() <= 5e-4, format!("QAOA2 D=2 improvement {d2:.6} vs 1/3 +- 5e-4"));
    let d3 = optimize_qaoa2(3, STARTS, SEED).unwrap().stats.cut_fraction;
    r.line("2b", (d3 - 0.7559).abs() <= 5e-4, format!("QAOA2 D=3 cut fraction {d3:.6} vs 0.7559 +- 5e-4"));
}

fn criterion_3(r: &mut Report) {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0f64;
    for (g, d) in [(heawood_graph(), 3u32), (cycle_graph(8).unwrap(), 2)] {
        for _ in 0..20 {
            let a = random_angles(&mut rng);
            let sim = qaoa_statevector_cut_fraction(&g, &a, 2).unwrap();
            worst = worst.max((sim - f2(d, &a).unwrap().cut_fraction).abs());
        }
    }
    r.line("3", worst <= 1e-9, format!("f2 vs statevector on Heawood and C8, max |delta| {worst:.2e} (tol 1e-9)"));
    r.budget("3t", started, Duration::from_secs(30));
}

fn criterion_4(r: &mut Report) {
    let started = Instant::now();
    let mut worst = 0f64;
    for (g, d, top) in [(heawood_graph(), 3u32, 4u32), (cycle_graph(8).unwrap(), 2, 3)] {
        for t1 in 0..=top {
            for t2 in 0..=top {
                let exact = enumerate_threshold_exact(&g, &ThresholdParams::two_step(t1, t2)).unwrap();
                let closed = threshold2_improvement(d, t1, t2).unwrap().cut_fraction;
                worst = worst.max((exact - closed).abs());
            }
        }
    }
    r.line("4", worst <= 1e-12, format!("threshold2 vs enumeration on Heawood and C8, max |delta| {worst:.2e} (tol 1e-12)"));
    r.budget("4t", started, Duration::from_secs(60));
}

fn criterion_5(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut worst = 0f64;
    for d in [2u32, 3, 5, 17, 100] {
        for _ in 0..1000 {
            let (g, b) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            let base = f1(d, g, b).unwrap().cut_fraction;
            let late = f2(d, &Qaoa2Angles::new(0.0, 0.0, g, b)).unwrap().cut_fraction;
            let early = f2(d, &Qaoa2Angles::new(g, b, 0.0, 0.0)).unwrap().cut_fraction;
            worst = worst.max((late - base).abs()).max((early - base).abs());
        }
    }
    r.line("5a", worst <= 1e-12, format!("depth-one reductions, max |delta| {worst:.2e} (tol 1e-12)"));
    let mut worst = 0f64;
    for _ in 0..10_000 {
        let a = random_angles(&mut rng);
        worst = worst.max((f2_ring(&a).cut_fraction - f2(2, &a).unwrap().cut_fraction).abs());
    }
    r.line("5b", worst <= 1e-12, format!("ring form vs f2(2, .), max |delta| {worst:.2e} (tol 1e-12)"));
}

fn criterion_6(r: &mut Report) {
    let started = Instant::now();
    let d = 499;
    let thr = optimize_threshold(d, 2, true, &TauWindow::default_for(d)).unwrap();
    let full = optimize_threshold(d, 2, true, &TauWindow::explicit(0, d + 1)).unwrap();
    let b_thr = thr.stats.scaled_b;
    r.line(
        "6a",
        (b_thr - 0.417).abs() <= 0.005,
        format!(
            "equal-tau threshold2 b at D=499 = {b_thr:.4} at tau {:?} (window violation {}; unrestricted {:.4} at {:?}) vs 0.417 +- 0.005",
            thr.threshold_params().unwrap().taus(),
            thr.window_violation,
            full.stats.scaled_b,
            full.threshold_params().unwrap().taus(),
        ),
    );
    let b_q2 = optimize_qaoa2(d, STARTS, SEED).unwrap().stats.scaled_b;
    r.line("6b", (b_q2 - 0.407).abs() <= 0.005, format!("QAOA2 b at D=499 = {b_q2:.4} vs 0.407 +- 0.005"));

    let mut rows = Vec::new();
    let mut ok = true;
    for d in [50u32, 100, 200, 350, 499] {
        let t = optimize_threshold(d, 2, true, &TauWindow::default_for(d)).unwrap().stats.improvement;
        let q = optimize_qaoa2(d, STARTS, SEED).unwrap().stats.improvement;
        ok &= t > q;
        rows.push(format!("D={d}: {t:.5} vs {q:.5}"));
    }
    r.line("6c", ok, format!("equal-tau threshold2 > QAOA2: {}", rows.join("; ")));

    let mut rows = Vec::new();
    let mut ok = true;
    for d in [6u32, 10, 20, 49] {
        let t = optimize_threshold(d, 2, false, &TauWindow::default_for(d)).unwrap().stats.improvement;
        let q = optimize_qaoa2(d, STARTS, SEED).unwrap().stats.improvement;
        ok &= t > q;
        rows.push(format!("D={d}: {t:.5} vs {q:.5}"));
    }
    r.line("6d", ok, format!("free-tau threshold2 > QAOA2: {}", rows.join("; ")));
    r.budget("6t", started, Duration::from_secs(600));
}

fn criterion_7(r: &mut Report) {
    let started = Instant::now();
    let est = mc_threshold(&heawood_graph(), &ThresholdParams::two_step(2, 3), 1_000_000, SEED).unwrap();
    let closed = threshold2_improvement(3, 2, 3).unwrap().cut_fraction;
    let z = (est.mean - closed) / est.stderr;
    r.line(
        "7",
        z.abs() <= 4.0,
        format!("MC on Heawood tau=(2,3): {:.5} +- {:.5} vs {closed:.5} ({z:+.2} stderr)", est.mean, est.stderr),
    );
    r.budget("7t", started, Duration::from_secs(30));
}

fn main() {
    let mut r = Report { failed: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    println!("[SKIP] 8    full per-integer sweep to D<500, D>=500 behaviour, modified-threshold columns: out of scope");
    if r.failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: {} failed: {}", r.failed.len(), r.failed.join(", "));
        std::process::exit(1);
    }
}

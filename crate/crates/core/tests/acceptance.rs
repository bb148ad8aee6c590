//! Acceptance gates. Prints one PASS/FAIL line per criterion, with any failing
//! sub-checks indented under it, and exits non-zero if a hard gate fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use golden_games::{
    brute_force_fragility, estimate, exact_table, finite_table, fragility, sample_game,
    two_level_map, value_streamed, xi_sequence, BruteForce, EstimationRequest, GameInstance,
    SampleSpec, GOLDEN,
};

const TABLE_F1: f64 = 0.773;
const TABLE_F2: f64 = 0.972;
const TABLE_F3: f64 = 0.999;
const TABLE_ABS_TOL: f64 = 5e-4;
const TABLE_TAIL4: f64 = 5.57e-5;
const TABLE_TAIL5: f64 = 6.98e-7;
const TABLE_REL_TOL: f64 = 0.05;

const CLOSED_FORM_TOL: f64 = 1e-15;
const RESIDUAL_TOL: f64 = 1e-14;
const ANCHOR_TOL: f64 = 1e-12;
const PARITY_TOL: f64 = 1e-9;
const DUAL_ORACLE_TOL: f64 = 1e-8;
const CONVERGENCE_TOL: f64 = 1e-6;
const ROBUST_F40_MAX: f64 = 0.01;
const FIXED_POINT_TOL: f64 = 1e-12;
const MC_MAX_SE: f64 = 4.0;
const XI7_MAX: f64 = 1e-14;

const MC_DEPTH: u32 = 12;
const MC_SAMPLES: u64 = 200_000;
const MC_SEED: u64 = 20_240_601;
const BRUTE_SEED: u64 = 0xB0A7_F0CE;

struct Gate {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn runtime(&mut self, elapsed: Duration, limit: Duration) {
        self.check(
            elapsed < limit,
            format!("runtime {:.3}s exceeds {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()),
        );
    }
}

struct Report {
    hard_failures: u32,
}

impl Report {
    fn run(&mut self, id: u32, title: &str, soft: bool, body: impl FnOnce(&mut Gate)) {
        let mut gate = Gate::new();
        let start = Instant::now();
        body(&mut gate);
        let secs = start.elapsed().as_secs_f64();
        let status = match (gate.failures.is_empty(), soft) {
            (true, _) => "PASS",
            (false, true) => "SOFT-FAIL",
            (false, false) => "FAIL",
        };
        println!("{status:<9} [{id:>2}] {title} ({secs:.3}s)");
        for f in &gate.failures {
            println!("            x {f}");
        }
        for n in &gate.notes {
            println!("            - {n}");
        }
        if !gate.failures.is_empty() && !soft {
            self.hard_failures += 1;
        }
    }
}

fn within_rel(x: f64, target: f64, rel: f64) -> bool {
    ((x - target) / target).abs() <= rel
}

fn table_reproduction(g: &mut Gate) {
    let start = Instant::now();
    let rows = xi_sequence(5);
    let elapsed = start.elapsed();
    for (d, target) in [(1, TABLE_F1), (2, TABLE_F2), (3, TABLE_F3)] {
        let f = rows[d - 1].f;
        g.check(
            (f - target).abs() <= TABLE_ABS_TOL,
            format!("F({d}) = {f:.7} vs {target} (tol {TABLE_ABS_TOL:e})"),
        );
    }
    for (d, target) in [(4, TABLE_TAIL4), (5, TABLE_TAIL5)] {
        let c = rows[d - 1].complement;
        g.check(
            within_rel(c, target, TABLE_REL_TOL),
            format!("1 - F({d}) = {c:.4e} vs {target:e} ({:+.1}%)", 100.0 * (c / target - 1.0)),
        );
    }
    g.runtime(elapsed, Duration::from_secs(1));
}

fn closed_forms(g: &mut Gate) {
    let rows = xi_sequence(8);
    let xi1 = rows[0].xi;
    g.check((xi1 - GOLDEN / 2.0).abs() < CLOSED_FORM_TOL, format!("xi_1 = {xi1:e}"));
    let f1 = rows[0].f;
    g.check((f1 - 1.25 * GOLDEN).abs() < CLOSED_FORM_TOL, format!("F(1) = {f1:e}"));
    for r in &rows {
        // Recomputed here rather than through TheoryRow::residual.
        let res = (2.0 * GOLDEN * GOLDEN * r.xi * r.xi - r.xi + GOLDEN.powi(3) * r.h).abs();
        g.check(res < RESIDUAL_TOL, format!("d = {}: residual {res:e}", r.d));
    }
}

fn dp_anchors(g: &mut Gate) {
    let start = Instant::now();
    let rows = exact_table(60, GOLDEN, 1).expect("depth 60 is supported");
    let elapsed = start.elapsed();
    g.check(rows[0].fragile(1) == 1.0, format!("F_0(1) = {:e}", rows[0].fragile(1)));
    let f11 = rows[1].fragile(1);
    let expect = 1.0 - GOLDEN.powi(4);
    g.check((f11 - expect).abs() < ANCHOR_TOL, format!("F_1(1) = {f11:e}, want {expect:e}"));
    let mut worst = 0.0f64;
    for row in &rows {
        let target = if row.n % 2 == 0 { GOLDEN } else { GOLDEN * GOLDEN };
        let err = (row.prob_v1 - target).abs();
        worst = worst.max(err);
        g.check(err < PARITY_TOL, format!("n = {}: Pr[V = 1] off by {err:e}", row.n));
    }
    g.note(format!("largest parity deviation for n <= 60: {worst:.2e}"));
    g.runtime(elapsed, Duration::from_secs(1));
}

fn dual_oracle(g: &mut Gate) {
    let start = Instant::now();
    let finite = finite_table(5, 40);
    let rows = exact_table(40, GOLDEN, 5).expect("depth 40 is supported");
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for row in &rows {
        for d in 1..=5 {
            let (Some(a), Some(b)) = (row.alpha(d), row.beta(d)) else {
                g.check(false, format!("n = {}, d = {d}: conditional undefined", row.n));
                continue;
            };
            let err = (finite.alpha(row.n, d) - a).abs().max((finite.beta(row.n, d) - b).abs());
            worst = worst.max(err);
            g.check(err < DUAL_ORACLE_TOL, format!("n = {}, d = {d}: differ by {err:e}", row.n));
        }
    }
    g.note(format!("largest disagreement: {worst:.2e}"));
    g.runtime(elapsed, Duration::from_secs(5));
}

fn convergence(g: &mut Gate) {
    let limits = xi_sequence(5);
    let rows = exact_table(60, GOLDEN, 5).expect("depth 60 is supported");
    let last = &rows[60];
    for r in &limits {
        let err = (last.fragile(r.d) - r.f).abs();
        g.check(err < CONVERGENCE_TOL, format!("d = {}: |F_60 - F| = {err:e}", r.d));
    }
}

fn brute_force(g: &mut Gate) {
    let start = Instant::now();
    let mut games = 0u64;
    for depth in 0..=3u32 {
        let leaves = 1u64 << depth;
        for mask in 0..(1u64 << leaves) {
            let game = GameInstance::from_words(depth, vec![mask]).expect("small depth");
            let dp = fragility(&game);
            let bf = brute_force_fragility(&game, leaves).expect("small enumeration");
            g.check(
                bf == BruteForce::Within(dp),
                format!("depth {depth} mask {mask:#x}: DP {dp}, enumeration {bf:?}"),
            );
            games += 1;
        }
    }
    for k in 0..1000 {
        let game = sample_game(&SampleSpec::new(4, GOLDEN, BRUTE_SEED, k).unwrap()).unwrap();
        let dp = fragility(&game);
        let bf = brute_force_fragility(&game, 3).expect("C(16, <=3) subsets");
        let expect = if dp <= 3 { BruteForce::Within(dp) } else { BruteForce::Over };
        g.check(bf == expect, format!("depth 4 sample {k}: DP {dp}, enumeration {bf:?}"));
        games += 1;
    }
    g.note(format!("{games} games compared"));
    g.runtime(start.elapsed(), Duration::from_secs(60));
}

fn non_golden(g: &mut Gate) {
    for p in [0.45, 0.70] {
        let rows = exact_table(40, p, 1).expect("depth 40 is supported");
        let f40 = rows[40].fragile(1);
        g.check(f40 < ROBUST_F40_MAX, format!("p = {p}: F_40(1) = {f40:e}"));
        for n in 20..=38 {
            let (a, b) = (rows[n].fragile(1), rows[n + 2].fragile(1));
            g.check(b <= a, format!("p = {p}: F_{}(1) = {b:e} > F_{n}(1) = {a:e}", n + 2));
        }
        g.note(format!("p = {p}: F_40(1) = {f40:.3e}"));
    }
}

fn fixed_points(g: &mut Gate) {
    for x in [0.0, 1.0, (3.0 - 5f64.sqrt()) / 2.0] {
        let gx = two_level_map(x);
        g.check((gx - x).abs() < FIXED_POINT_TOL, format!("g({x}) = {gx}"));
    }
}

fn monte_carlo(g: &mut Gate) {
    let start = Instant::now();
    let request = |workers| EstimationRequest {
        depth: MC_DEPTH,
        p: GOLDEN,
        dmax: 3,
        samples: MC_SAMPLES,
        seed: MC_SEED,
        workers,
    };
    let single = estimate(&request(1)).expect("valid request");
    let parallel = estimate(&request(8)).expect("valid request");
    let elapsed = start.elapsed();
    g.check(
        single == parallel && single.to_json() == parallel.to_json(),
        "1 and 8 workers disagree",
    );
    let exact = &exact_table(MC_DEPTH, GOLDEN, 3).unwrap()[MC_DEPTH as usize];
    let z = single.prob_v1_wilson().z_score(exact.prob_v1);
    g.check(z <= MC_MAX_SE, format!("Pr[V = 1]: {z:.2} standard errors"));
    let mut scores = vec![format!("prob_v1 {z:.2}")];
    for d in 1..=3 {
        let z = single.fragile_wilson(d).z_score(exact.fragile(d));
        g.check(z <= MC_MAX_SE, format!("F({d}): {z:.2} standard errors"));
        scores.push(format!("F({d}) {z:.2}"));
    }
    g.note(format!("distance in standard errors: {}", scores.join(", ")));
    g.runtime(elapsed, Duration::from_secs(60));
}

fn trend(g: &mut Gate) {
    let rows = xi_sequence(8);
    for w in rows.windows(2) {
        g.check(w[1].xi < w[0].xi, format!("xi_{} >= xi_{}", w[1].d, w[0].d));
        let (c0, c1) = (
            GOLDEN * w[0].xi + GOLDEN * GOLDEN * w[0].xi * w[0].xi,
            GOLDEN * w[1].xi + GOLDEN * GOLDEN * w[1].xi * w[1].xi,
        );
        g.check(c1 < c0, format!("complement at d = {} not below d = {}", w[1].d, w[0].d));
    }
    let xi7 = rows[6].xi;
    g.check(xi7 < XI7_MAX, format!("xi_7 = {xi7:.3e}, want < {XI7_MAX:e}"));
}

fn streaming(g: &mut Gate) {
    let spec = SampleSpec::new(26, GOLDEN, 26, 0).unwrap();
    let start = Instant::now();
    let v = value_streamed(&spec).expect("depth 26 streams");
    let elapsed = start.elapsed();
    g.note(format!("value {v} in {:.3}s", elapsed.as_secs_f64()));
    g.runtime(elapsed, Duration::from_secs(2));
}

fn main() -> ExitCode {
    let mut report = Report { hard_failures: 0 };
    report.run(1, "limiting fragility table", false, table_reproduction);
    report.run(2, "closed forms and fixed-point residuals", false, closed_forms);
    report.run(3, "exact DP anchors and value parity", false, dp_anchors);
    report.run(4, "finite recursion vs exact DP conditionals", false, dual_oracle);
    report.run(5, "depth-60 DP vs limit", false, convergence);
    report.run(6, "DP fragility vs subset enumeration", false, brute_force);
    report.run(7, "non-golden fragility vanishes", false, non_golden);
    report.run(8, "fixed points of the two-level map", false, fixed_points);
    report.run(9, "Monte Carlo vs exact DP", false, monte_carlo);
    report.run(10, "large-budget trend", false, trend);
    report.run(11, "streamed depth-26 evaluation", true, streaming);
    if report.hard_failures == 0 {
        println!("acceptance: all hard gates passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} hard gate(s) failed", report.hard_failures);
        ExitCode::FAILURE
    }
}

// Monte Carlo estimates with Wilson intervals, checked against the exact DP.

use golden_games::{estimate, exact_table, EstimationRequest, GOLDEN};

pub fn run_example() -> golden_games::Result<()> {
    let req = EstimationRequest {
        depth: 10,
        p: GOLDEN,
        dmax: 3,
        samples: 20_000,
        seed: 1,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let result = estimate(&req)?;
    let exact = &exact_table(req.depth, req.p, req.dmax)?[req.depth as usize];

    let iv = result.prob_v1;
    println!("Pr[V=1]: {:.4} in [{:.4}, {:.4}], exact {:.4}", iv.est, iv.lo, iv.hi, exact.prob_v1);
    for f in &result.f {
        let z = result.fragile_wilson(f.d).z_score(exact.fragile(f.d));
        println!(
            "F({}): {:.4} in [{:.4}, {:.4}], exact {:.4} ({z:.2} standard errors)",
            f.d, f.est, f.lo, f.hi, exact.fragile(f.d)
        );
    }

    let again = estimate(&EstimationRequest { workers: 1, ..req })?;
    println!("single worker reproduces the run: {}", again == result);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("monte_carlo");
}

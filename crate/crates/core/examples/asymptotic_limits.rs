// Limiting fragility of golden games as depth grows, and how fast the finite
// recursion gets there.

use golden_games::theory::asymptotic_limit_check;
use golden_games::{exact_table, finite_table, xi_sequence, GOLDEN};

pub fn run_example() -> golden_games::Result<()> {
    let limits = xi_sequence(6);
    println!("{:>2} {:>12} {:>14} {:>12}", "d", "xi", "F", "1 - F");
    for r in &limits {
        println!("{:>2} {:>12.4e} {:>14.10} {:>12.4e}", r.d, r.xi, r.f, r.complement);
    }

    let finite = finite_table(3, 30);
    for n in [2, 6, 10, 20, 30] {
        println!("alpha_{n}(1) = {:.12}", finite.alpha(n, 1));
    }
    println!("limit xi_1    = {:.12}", limits[0].xi);

    let report = asymptotic_limit_check(6, 60)?;
    println!("largest |alpha_60 - xi| over d <= 6: {:.2e}", report.max_deviation());

    let deep = &exact_table(60, GOLDEN, 3)?[60];
    for d in 1..=3 {
        println!("F_60({d}) = {:.10}  F({d}) = {:.10}", deep.fragile(d), limits[d as usize - 1].f);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("asymptotic_limits");
}

// Exact value and fragility probabilities by depth.

use golden_games::{exact_table, value_prob_iterate, GOLDEN};

pub fn run_example() -> golden_games::Result<()> {
    let rows = exact_table(16, GOLDEN, 3)?;
    println!("{:>3} {:>10} {:>10} {:>10} {:>10}", "n", "Pr[V=1]", "F(1)", "F(2)", "F(3)");
    for r in &rows {
        println!(
            "{:>3} {:>10.7} {:>10.7} {:>10.7} {:>10.7}",
            r.n, r.prob_v1, r.fragile(1), r.fragile(2), r.fragile(3)
        );
    }

    let last = rows.last().expect("non-empty");
    println!(
        "n = 16: alpha(1) = {:.6}, beta(1) = {:.6}",
        last.alpha(1).unwrap_or(f64::NAN),
        last.beta(1).unwrap_or(f64::NAN)
    );

    let q = value_prob_iterate(0.6, 12)?;
    println!("p = 0.6, Pr[V=1] by depth: {:?}", q.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("exact_distribution");
}

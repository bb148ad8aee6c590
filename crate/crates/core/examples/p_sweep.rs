// CSV sweep of `F_n(1)` over the leaf probability. Only `p = φ` keeps
// fragility alive at large depth.

use golden_games::{exact_table, GOLDEN};

pub fn run_example() -> golden_games::Result<()> {
    let depths = [10u32, 20, 30, 40];
    let mut ps: Vec<f64> = (40..=80).step_by(5).map(|k| k as f64 / 100.0).collect();
    ps.push(GOLDEN);
    ps.sort_by(f64::total_cmp);

    println!("p,{}", depths.map(|n| format!("F_{n}(1)")).join(","));
    for p in ps {
        let rows = exact_table(40, p, 1)?;
        let cols: Vec<_> = depths.iter().map(|&n| format!("{:.6e}", rows[n as usize].fragile(1))).collect();
        println!("{p:.6},{}", cols.join(","));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("p_sweep");
}

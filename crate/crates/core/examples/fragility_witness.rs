// Fragility of individual games: flip costs, a minimal witness, and the
// subset-enumeration oracle that confirms it.

use golden_games::{
    brute_force_fragility, cost_pair, is_fragile, sample_game, witness, GameInstance, SampleSpec,
    GOLDEN,
};

pub fn run_example() -> golden_games::Result<()> {
    let g = GameInstance::new(2, &[1, 0, 0, 1])?;
    let report = witness(&g);
    println!("{g:?}: value {}, fragility {}, witness {:?}", report.value, report.fragility, report.witness);
    println!("after flipping: {:?}", g.flipped(&report.witness));

    for k in 0..5 {
        let g = sample_game(&SampleSpec::new(4, GOLDEN, 2024, k)?)?;
        let c = cost_pair(&g);
        let r = witness(&g);
        let oracle = brute_force_fragility(&g, 4)?;
        println!(
            "sample {k}: value {} costs (to 0: {}, to 1: {}) witness {:?} oracle {oracle:?} 1-fragile {}",
            r.value,
            c.cost_to(0),
            c.cost_to(1),
            r.witness,
            is_fragile(&g, 1),
        );
    }

    let deep = sample_game(&SampleSpec::new(20, GOLDEN, 5, 0)?)?;
    let r = witness(&deep);
    println!("depth 20: value {}, {} flips overturn it: {:?}", r.value, r.fragility, r.witness);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("fragility_witness");
}

// Sample golden games and evaluate them, materialized and streamed.

use golden_games::{mover_at_height, sample_game, value_streamed, SampleSpec, GOLDEN};

pub fn run_example() -> golden_games::Result<()> {
    let spec = SampleSpec::new(3, GOLDEN, 42, 0)?;
    let game = sample_game(&spec)?;
    println!("depth-3 game {game:?} has value {}", game.value());
    for h in (1..=3).rev() {
        println!("  height {h}: {:?} moves", mover_at_height(h)?);
    }

    let mut wins = [0u32; 2];
    for depth in [10, 11] {
        let ones = (0..2000)
            .map(|k| sample_game(&SampleSpec::new(depth, GOLDEN, 7, k).unwrap()).unwrap().value() as u32)
            .sum::<u32>();
        wins[(depth % 2) as usize] = ones;
        println!("depth {depth}: Player 1 wins {ones} of 2000");
    }
    println!("expected about {:.0} (even) and {:.0} (odd)", 2000.0 * GOLDEN, 2000.0 * GOLDEN * GOLDEN);

    // Too large to store; evaluated depth-first.
    let big = SampleSpec::new(34, GOLDEN, 1, 0)?;
    println!("depth-34 game value: {}", value_streamed(&big)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("value_and_sampling");
}

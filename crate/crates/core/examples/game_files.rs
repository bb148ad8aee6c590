// Text and binary game files.

use golden_games::format::{parse_game, to_binary, to_text};
use golden_games::{sample_game, witness, SampleSpec, GOLDEN};

pub fn run_example() -> golden_games::Result<()> {
    let game = sample_game(&SampleSpec::new(4, GOLDEN, 9, 3)?)?;
    let text = to_text(&game);
    print!("{text}");
    let binary = to_binary(&game);
    println!("binary: {binary:02x?}");

    let dir = std::env::temp_dir().join(format!("golden-games-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let (tpath, bpath) = (dir.join("g.ggame"), dir.join("g.ggb"));
    std::fs::write(&tpath, &text)?;
    std::fs::write(&bpath, &binary)?;
    for path in [&tpath, &bpath] {
        let back = parse_game(&std::fs::read(path)?)?;
        assert_eq!(back, game);
        println!("{}: fragility {}", path.display(), witness(&back).fragility);
    }
    std::fs::remove_dir_all(&dir)?;

    match parse_game(b"GGAME v1 depth=2\n10x1\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(g) => println!("unexpectedly parsed {g:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("game_files");
}

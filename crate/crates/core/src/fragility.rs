//! Exact per-instance fragility: the fewest leaf flips that overturn the value.
//!
//! Every node carries a [`CostPair`]. A leaf with payoff `b` costs nothing to
//! keep at `b` and one flip to turn into `1 - b`. At an internal node whose
//! mover prefers value `t`, reaching `t` needs only one child at `t` (take the
//! cheaper child) while reaching `1 - t` needs both children there (add).
//!
//! Subtrees of height [`BLOCK_HEIGHT`] are collapsed in a scratch buffer; only
//! the levels above them are kept, so a depth-30 game needs about 16 MiB of
//! cost storage. Witness extraction recomputes the few blocks it descends into.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{maximizer_at, GameInstance};

const BLOCK_HEIGHT: u32 = 10;

/// Refuse brute-force searches that would test more flip sets than this.
pub const BRUTE_FORCE_LIMIT: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CostPair {
    pub cost_to_0: u64,
    pub cost_to_1: u64,
}

impl CostPair {
    fn leaf(b: u8) -> Self {
        if b == 0 {
            Self { cost_to_0: 0, cost_to_1: 1 }
        } else {
            Self { cost_to_0: 1, cost_to_1: 0 }
        }
    }

    pub fn cost_to(&self, v: u8) -> u64 {
        if v == 0 {
            self.cost_to_0
        } else {
            self.cost_to_1
        }
    }

    /// The value this node already has (the one that costs nothing).
    pub fn value(&self) -> u8 {
        (self.cost_to_1 == 0) as u8
    }

    /// Flips needed to reach the value the node does not have.
    pub fn flip_cost(&self) -> u64 {
        self.cost_to_0.max(self.cost_to_1)
    }

    fn combine(l: Self, r: Self, maximizer: bool) -> Self {
        if maximizer {
            Self {
                cost_to_0: l.cost_to_0 + r.cost_to_0,
                cost_to_1: l.cost_to_1.min(r.cost_to_1),
            }
        } else {
            Self {
                cost_to_0: l.cost_to_0.min(r.cost_to_0),
                cost_to_1: l.cost_to_1 + r.cost_to_1,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FragilityReport {
    pub value: u8,
    pub fragility: u64,
    pub witness: Vec<u64>,
}

/// Cost pairs of one block, every level kept: `levels[h][j]` is node `j` at
/// height `h` within the block.
fn block_levels(game: &GameInstance, block: u64, height: u32) -> Vec<Vec<CostPair>> {
    let first = block << height;
    let mut levels = Vec::with_capacity(height as usize + 1);
    levels.push(
        (first..first + (1 << height))
            .map(|i| CostPair::leaf(game.payoff(i)))
            .collect::<Vec<_>>(),
    );
    for h in 1..=height {
        let below = &levels[h as usize - 1];
        let next = below
            .chunks_exact(2)
            .map(|c| CostPair::combine(c[0], c[1], maximizer_at(h)))
            .collect();
        levels.push(next);
    }
    levels
}

fn block_root(game: &GameInstance, block: u64, height: u32, scratch: &mut Vec<CostPair>) -> CostPair {
    let first = block << height;
    scratch.clear();
    scratch.extend((first..first + (1 << height)).map(|i| CostPair::leaf(game.payoff(i))));
    let mut len = scratch.len();
    for h in 1..=height {
        for j in 0..len / 2 {
            scratch[j] = CostPair::combine(scratch[2 * j], scratch[2 * j + 1], maximizer_at(h));
        }
        len /= 2;
    }
    scratch[0]
}

/// Cost pairs for every level from `base` up to the root.
struct UpperLevels {
    base: u32,
    levels: Vec<Vec<CostPair>>,
}

impl UpperLevels {
    fn build(game: &GameInstance) -> Self {
        let base = game.depth().min(BLOCK_HEIGHT);
        let blocks = 1u64 << (game.depth() - base);
        let mut scratch = Vec::with_capacity(1 << base);
        let bottom: Vec<CostPair> = (0..blocks)
            .map(|b| block_root(game, b, base, &mut scratch))
            .collect();
        let mut levels = vec![bottom];
        for h in base + 1..=game.depth() {
            let below = levels.last().unwrap();
            let next = below
                .chunks_exact(2)
                .map(|c| CostPair::combine(c[0], c[1], maximizer_at(h)))
                .collect();
            levels.push(next);
        }
        Self { base, levels }
    }

    fn root(&self) -> CostPair {
        self.levels.last().unwrap()[0]
    }
}

pub fn cost_pair(game: &GameInstance) -> CostPair {
    UpperLevels::build(game).root()
}

/// Hamming distance from `game` to the nearest game with the other value.
pub fn fragility(game: &GameInstance) -> u64 {
    cost_pair(game).flip_cost()
}

pub fn is_fragile(game: &GameInstance, d: u64) -> bool {
    fragility(game) <= d
}

/// Walks down from node `j` of `levels[h]`, which must be driven to `target`.
/// Nodes of `levels[0]` that still need a change are handed to `on_bottom`.
fn collect_flips(
    levels: &[Vec<CostPair>],
    abs_height: &dyn Fn(usize) -> u32,
    h: usize,
    j: usize,
    target: u8,
    on_bottom: &mut dyn FnMut(usize, u8),
) {
    let node = levels[h][j];
    if node.cost_to(target) == 0 {
        return;
    }
    if h == 0 {
        on_bottom(j, target);
        return;
    }
    let (l, r) = (levels[h - 1][2 * j], levels[h - 1][2 * j + 1]);
    let mover_target = maximizer_at(abs_height(h)) as u8;
    if mover_target == target {
        // One child suffices; ties go left.
        let child = if r.cost_to(target) < l.cost_to(target) { 2 * j + 1 } else { 2 * j };
        collect_flips(levels, abs_height, h - 1, child, target, on_bottom);
    } else {
        collect_flips(levels, abs_height, h - 1, 2 * j, target, on_bottom);
        collect_flips(levels, abs_height, h - 1, 2 * j + 1, target, on_bottom);
    }
}

/// Value, fragility, and one minimal flip set, found by retracing the cost DP.
///
/// Where the mover needs only one child, the cheaper child is taken (left on
/// ties); where both children must change, left leaves precede right leaves.
/// The witness is therefore sorted and deterministic.
pub fn witness(game: &GameInstance) -> FragilityReport {
    let upper = UpperLevels::build(game);
    let root = upper.root();
    let target = 1 - root.value();
    let base = upper.base;
    let top = upper.levels.len() - 1;
    let mut flips = Vec::new();
    let mut into_block = |block: usize, target: u8| {
        let levels = block_levels(game, block as u64, base);
        let first = (block as u64) << base;
        collect_flips(
            &levels,
            &|h| h as u32,
            base as usize,
            0,
            target,
            &mut |leaf, _| flips.push(first + leaf as u64),
        );
    };
    collect_flips(
        &upper.levels,
        &|h| base + h as u32,
        top,
        0,
        target,
        &mut into_block,
    );
    FragilityReport {
        value: root.value(),
        fragility: root.flip_cost(),
        witness: flips,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BruteForce {
    /// Smallest flip count that changes the value.
    Within(u64),
    /// No flip set of size at most the cap changes the value.
    Over,
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [u64], n: u64) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - (k - pos) as u64 {
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Smallest flip set, found by trying every subset of size 1, 2, ..., `cap`.
///
/// Independent of the cost DP; used as its oracle on small trees.
pub fn brute_force_fragility(game: &GameInstance, cap: u64) -> Result<BruteForce> {
    let n = game.num_leaves();
    let cap = cap.min(n);
    let subsets: u128 = (1..=cap as u128).map(|k| binomial(n as u128, k)).sum();
    if subsets > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            subsets,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let original = game.value();
    let mut scratch = game.clone();
    for k in 1..=cap {
        let mut idx: Vec<u64> = (0..k).collect();
        loop {
            for &i in &idx {
                scratch.flip(i);
            }
            let changed = scratch.value() != original;
            for &i in &idx {
                scratch.flip(i);
            }
            if changed {
                return Ok(BruteForce::Within(k));
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(BruteForce::Over)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(depth: u32, bits: &[u8]) -> GameInstance {
        GameInstance::new(depth, bits).unwrap()
    }

    fn all_games(depth: u32) -> impl Iterator<Item = GameInstance> {
        let n = 1usize << depth;
        (0u64..(1 << n)).map(move |mask| {
            let bits: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
            game(depth, &bits)
        })
    }

    #[test]
    fn cost_pair_examples() {
        let cp = |c0, c1| CostPair { cost_to_0: c0, cost_to_1: c1 };
        assert_eq!(cost_pair(&game(0, &[0])), cp(0, 1));
        assert_eq!(cost_pair(&game(1, &[0, 0])), cp(0, 2));
        assert_eq!(cost_pair(&game(2, &[1, 0, 0, 1])), cp(0, 1));
    }

    #[test]
    fn fragility_examples() {
        assert_eq!(fragility(&game(1, &[1, 1])), 1);
        assert_eq!(fragility(&game(1, &[0, 0])), 2);
        assert_eq!(fragility(&game(0, &[1])), 1);
        assert!(is_fragile(&game(1, &[0, 0]), 2));
        assert!(!is_fragile(&game(1, &[0, 0]), 1));
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness(&game(1, &[1, 1])).witness, vec![0]);
        assert_eq!(witness(&game(1, &[0, 0])).witness, vec![0, 1]);
        let r = witness(&game(2, &[1, 0, 0, 1]));
        assert_eq!(r, FragilityReport { value: 0, fragility: 1, witness: vec![1] });
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_fragility(&game(1, &[0, 0]), 3).unwrap(), BruteForce::Within(2));
        assert_eq!(brute_force_fragility(&game(2, &[1, 0, 0, 1]), 2).unwrap(), BruteForce::Within(1));
        assert_eq!(brute_force_fragility(&game(1, &[0, 0]), 1).unwrap(), BruteForce::Over);
    }

    #[test]
    fn brute_force_refuses_huge_searches() {
        let g = GameInstance::constant(10, false).unwrap();
        assert!(matches!(
            brute_force_fragility(&g, 8),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn exhaustive_oracle_agreement() {
        for depth in 0..=3 {
            for g in all_games(depth) {
                let dp = fragility(&g);
                let bf = brute_force_fragility(&g, g.num_leaves()).unwrap();
                assert_eq!(bf, BruteForce::Within(dp), "{g:?}");
            }
        }
    }

    #[test]
    fn witnesses_are_valid_on_all_small_games() {
        for depth in 0..=4 {
            for g in all_games(depth) {
                let r = witness(&g);
                assert_eq!(r.value, g.value());
                assert_eq!(r.witness.len() as u64, r.fragility);
                assert!(r.witness.windows(2).all(|w| w[0] < w[1]));
                assert_ne!(g.flipped(&r.witness).value(), r.value, "{g:?}");
                let cp = cost_pair(&g);
                assert_eq!(cp.cost_to_0.min(cp.cost_to_1), 0);
            }
        }
    }

    #[test]
    fn witness_across_block_boundary() {
        // Depths above BLOCK_HEIGHT exercise the stored upper levels.
        for idx in 0..30 {
            let spec = crate::SampleSpec::new(13, crate::GOLDEN, 5, idx).unwrap();
            let g = crate::sample_game(&spec).unwrap();
            let r = witness(&g);
            assert_eq!(r.witness.len() as u64, fragility(&g));
            assert_ne!(g.flipped(&r.witness).value(), g.value());
        }
    }

    #[test]
    fn combinations_enumerate_binomially() {
        let mut idx = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut idx, 7) {
            count += 1;
        }
        assert_eq!(count, 35);
        assert_eq!(binomial(16, 3), 560);
    }
}

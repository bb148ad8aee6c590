//! Game trees, the move convention, minimax values, and deterministic sampling.
//!
//! A game of depth `n` is a complete binary tree with `2^n` leaves, stored as a
//! packed bit sequence (leaf `i` is bit `i % 64` of word `i / 64`). Heights are
//! measured from the leaves: leaves sit at height 0 and the root at height `n`.
//! Player 2 (the minimizer) moves at odd heights, Player 1 (the maximizer) at
//! even heights, so Player 2 always makes the last move.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest depth for which a game is stored leaf by leaf (2^30 bits = 128 MiB).
pub const MAX_MATERIALIZED_DEPTH: u32 = 30;

/// Largest depth accepted by [`value_streamed`]; leaf indices must fit in 64 bits.
pub const MAX_STREAMED_DEPTH: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    /// Maximizer, wins on value 1.
    Player1,
    /// Minimizer, wins on value 0.
    Player2,
}

impl Player {
    /// The root value this player is trying to reach.
    pub fn preferred_value(self) -> u8 {
        match self {
            Player::Player1 => 1,
            Player::Player2 => 0,
        }
    }

    pub fn is_maximizer(self) -> bool {
        self == Player::Player1
    }
}

/// The player who chooses between the two children of a node at height `h`.
pub fn mover_at_height(h: u32) -> Result<Player> {
    match h {
        0 => Err(Error::LeafHasNoMover),
        h if h % 2 == 1 => Ok(Player::Player2),
        _ => Ok(Player::Player1),
    }
}

// Heights are never zero where this is used.
#[inline]
pub(crate) fn maximizer_at(h: u32) -> bool {
    h % 2 == 0
}

/// One realized game: depth plus the packed leaf payoffs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GameInstance {
    depth: u32,
    words: Vec<u64>,
}

#[inline]
fn words_for(bits: u64) -> usize {
    bits.div_ceil(64) as usize
}

#[inline]
fn tail_mask(bits: u64) -> u64 {
    match bits % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl GameInstance {
    fn check_depth(depth: u32) -> Result<()> {
        if depth > MAX_MATERIALIZED_DEPTH {
            return Err(Error::DepthTooLarge {
                depth,
                max: MAX_MATERIALIZED_DEPTH,
            });
        }
        Ok(())
    }

    /// Builds a game from one byte (0 or 1) per leaf.
    pub fn new(depth: u32, payoffs: &[u8]) -> Result<Self> {
        Self::check_depth(depth)?;
        let expected = 1u64 << depth;
        if payoffs.len() as u64 != expected {
            return Err(Error::PayoffLength {
                depth,
                expected,
                got: payoffs.len() as u64,
            });
        }
        let mut words = vec![0u64; words_for(expected)];
        for (i, &b) in payoffs.iter().enumerate() {
            match b {
                0 => {}
                1 => words[i / 64] |= 1 << (i % 64),
                found => return Err(Error::PayoffNotBit { index: i, found }),
            }
        }
        Ok(Self { depth, words })
    }

    /// Builds a game from packed words. Bits beyond leaf `2^depth - 1` are ignored.
    pub fn from_words(depth: u32, mut words: Vec<u64>) -> Result<Self> {
        Self::check_depth(depth)?;
        let leaves = 1u64 << depth;
        let expected = words_for(leaves);
        if words.len() != expected {
            return Err(Error::PayoffLength {
                depth,
                expected: leaves,
                got: words.len() as u64 * 64,
            });
        }
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(leaves);
        }
        Ok(Self { depth, words })
    }

    /// Every leaf carries payoff `b`.
    pub fn constant(depth: u32, b: bool) -> Result<Self> {
        Self::check_depth(depth)?;
        let leaves = 1u64 << depth;
        let fill = if b { u64::MAX } else { 0 };
        Self::from_words(depth, vec![fill; words_for(leaves)])
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn num_leaves(&self) -> u64 {
        1u64 << self.depth
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Payoff of leaf `i`. Panics if `i` is out of range.
    pub fn payoff(&self, i: u64) -> u8 {
        assert!(i < self.num_leaves(), "leaf {i} out of range");
        ((self.words[(i / 64) as usize] >> (i % 64)) & 1) as u8
    }

    pub fn payoffs(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.num_leaves()).map(move |i| self.payoff(i))
    }

    pub fn flip(&mut self, i: u64) {
        assert!(i < self.num_leaves(), "leaf {i} out of range");
        self.words[(i / 64) as usize] ^= 1 << (i % 64);
    }

    /// Copy of this game with the given leaves flipped.
    pub fn flipped(&self, leaves: &[u64]) -> Self {
        let mut g = self.clone();
        for &i in leaves {
            g.flip(i);
        }
        g
    }

    /// Minimax value of the root.
    pub fn value(&self) -> u8 {
        value(self)
    }
}

impl std::fmt::Debug for GameInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.depth <= 8 {
            let s: String = self.payoffs().map(|b| char::from(b'0' + b)).collect();
            write!(f, "GameInstance(depth={}, {})", self.depth, s)
        } else {
            write!(f, "GameInstance(depth={}, {} words)", self.depth, self.words.len())
        }
    }
}

/// Gathers the even-position bits of `x` into the low 32 bits.
#[inline]
fn compress_even_bits(mut x: u64) -> u64 {
    x &= 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF
}

/// One backward-induction level inside a word: output bit `j` is the max or
/// min of input bits `2j` and `2j + 1`.
#[inline]
pub(crate) fn reduce_word(w: u64, maximizer: bool) -> u64 {
    let paired = if maximizer { w | (w >> 1) } else { w & (w >> 1) };
    compress_even_bits(paired)
}

/// Value of a subtree of height `height <= 6` held in the low `2^height`
/// bits of `w`, whose leaves sit at absolute height `base`.
#[inline]
pub(crate) fn word_value(mut w: u64, base: u32, height: u32) -> u8 {
    for h in base + 1..=base + height {
        w = reduce_word(w, maximizer_at(h));
    }
    (w & 1) as u8
}

/// Backward induction over the packed leaves, one level at a time.
pub fn value(game: &GameInstance) -> u8 {
    if game.depth <= 6 {
        return word_value(game.words[0], 0, game.depth);
    }
    let mut level = game.words.clone();
    let mut h = 1;
    // Each pass halves the bit count; stop once a single word remains.
    while level.len() > 1 {
        let maximizer = maximizer_at(h);
        let mut next = vec![0u64; level.len() / 2];
        for (j, pair) in level.chunks_exact(2).enumerate() {
            next[j] = reduce_word(pair[0], maximizer) | (reduce_word(pair[1], maximizer) << 32);
        }
        level = next;
        h += 1;
    }
    word_value(level[0], h - 1, game.depth - (h - 1))
}

/// Parameters that determine one sampled game exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub depth: u32,
    pub p: f64,
    pub seed: u64,
    pub sample_index: u64,
}

impl SampleSpec {
    pub fn new(depth: u32, p: f64, seed: u64, sample_index: u64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self {
            depth,
            p,
            seed,
            sample_index,
        })
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn finalize(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn bernoulli(counter: u64, p: f64) -> u8 {
    let u = (finalize(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    (u < p) as u8
}

/// Start of the counter run for one sample. Hashing `seed + k·GAMMA` puts
/// each sample's run at an unrelated point of the sequence; without it,
/// sample `k + 1` would be sample `k` shifted by one leaf.
#[inline]
fn sample_base(spec: &SampleSpec) -> u64 {
    finalize(spec.seed.wrapping_add(spec.sample_index.wrapping_mul(GAMMA)))
}

/// Payoff of one leaf of the game described by `spec`.
///
/// The counter is `finalize(seed + sample_index·GAMMA) + (leaf_index + 1)·GAMMA`.
/// This is a pure counter-based hash: the same inputs give the same bit on
/// every call, thread, and platform. `leaf_index` should be below
/// `2^spec.depth`; the hash itself is defined for any index.
pub fn leaf_payoff(spec: &SampleSpec, leaf_index: u64) -> u8 {
    let counter = sample_base(spec).wrapping_add(leaf_index.wrapping_add(1).wrapping_mul(GAMMA));
    bernoulli(counter, spec.p)
}

/// Sixty-four consecutive payoffs starting at leaf `64 * block`, packed.
#[inline]
fn payoff_word(base: u64, block: u64, count: u64, p: f64) -> u64 {
    let first = block * 64;
    let mut counter = base.wrapping_add(first.wrapping_add(1).wrapping_mul(GAMMA));
    let mut w = 0u64;
    for bit in 0..count {
        w |= (bernoulli(counter, p) as u64) << bit;
        counter = counter.wrapping_add(GAMMA);
    }
    w
}

/// Materializes the game described by `spec`.
pub fn sample_game(spec: &SampleSpec) -> Result<GameInstance> {
    check_probability(spec.p)?;
    GameInstance::check_depth(spec.depth)?;
    let leaves = 1u64 << spec.depth;
    let base = sample_base(spec);
    let words = (0..words_for(leaves) as u64)
        .map(|b| payoff_word(base, b, leaves.min(64), spec.p))
        .collect();
    GameInstance::from_words(spec.depth, words)
}

/// Value of the game described by `spec` without storing its leaves.
///
/// Depth-first over the tree, 64 leaves per word at the bottom. The right
/// subtree is skipped whenever the left child already settles the node (a 1
/// under Player 1, a 0 under Player 2), so constant games of depth 40 take
/// about 2^20 words. Memory is O(depth).
pub fn value_streamed(spec: &SampleSpec) -> Result<u8> {
    check_probability(spec.p)?;
    if spec.depth > MAX_STREAMED_DEPTH {
        return Err(Error::DepthTooLarge {
            depth: spec.depth,
            max: MAX_STREAMED_DEPTH,
        });
    }
    let base = sample_base(spec);
    if spec.depth <= 6 {
        let w = payoff_word(base, 0, 1u64 << spec.depth, spec.p);
        return Ok(word_value(w, 0, spec.depth));
    }
    Ok(streamed_subtree(base, spec.p, spec.depth, 0))
}

/// Value of the node at `height` (at least 6) whose leftmost 64-leaf block is `block`.
fn streamed_subtree(base: u64, p: f64, height: u32, block: u64) -> u8 {
    if height == 6 {
        return word_value(payoff_word(base, block, 64, p), 0, 6);
    }
    let maximizer = maximizer_at(height);
    let left = streamed_subtree(base, p, height - 1, block);
    if left == maximizer as u8 {
        return left;
    }
    streamed_subtree(base, p, height - 1, block + (1 << (height - 7)))
}

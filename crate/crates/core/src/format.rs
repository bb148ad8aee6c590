//! On-disk game formats.
//!
//! Text: a header line `GGAME v1 depth=<n>` followed by one line of `2^n`
//! characters `0`/`1`, each line newline-terminated.
//!
//! Binary: magic `GGB1`, version byte `0x01`, depth byte, then `ceil(2^n / 8)`
//! payload bytes with leaf `i` at byte `i / 8`, bit `i % 8` (LSB first).
//! Unused high bits of the last byte must be zero.

use crate::error::{Error, Result};
use crate::game::{GameInstance, MAX_MATERIALIZED_DEPTH};

pub const TEXT_HEADER_PREFIX: &str = "GGAME v1 depth=";
pub const BINARY_MAGIC: &[u8; 4] = b"GGB1";
pub const BINARY_VERSION: u8 = 0x01;

fn malformed(offset: usize, reason: impl Into<String>) -> Error {
    Error::Malformed {
        offset,
        reason: reason.into(),
    }
}

fn check_depth(depth: u64, offset: usize) -> Result<u32> {
    if depth > MAX_MATERIALIZED_DEPTH as u64 {
        return Err(malformed(
            offset,
            format!("depth {depth} exceeds {MAX_MATERIALIZED_DEPTH}"),
        ));
    }
    Ok(depth as u32)
}

pub fn to_text(game: &GameInstance) -> String {
    let mut s = String::with_capacity(game.num_leaves() as usize + 32);
    s.push_str(TEXT_HEADER_PREFIX);
    s.push_str(&game.depth().to_string());
    s.push('\n');
    s.extend(game.payoffs().map(|b| char::from(b'0' + b)));
    s.push('\n');
    s
}

pub fn from_text(bytes: &[u8]) -> Result<GameInstance> {
    let prefix = TEXT_HEADER_PREFIX.as_bytes();
    if !bytes.starts_with(prefix) {
        let offset = bytes
            .iter()
            .zip(prefix)
            .position(|(a, b)| a != b)
            .unwrap_or(bytes.len());
        return Err(malformed(offset, "expected header `GGAME v1 depth=<n>`"));
    }
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| malformed(bytes.len(), "missing newline after header"))?;
    let digits = &bytes[prefix.len()..header_end];
    if digits.is_empty() || digits.len() > 3 || !digits.iter().all(u8::is_ascii_digit) {
        return Err(malformed(prefix.len(), "depth must be a decimal integer"));
    }
    let depth: u64 = std::str::from_utf8(digits)
        .expect("ascii digits")
        .parse()
        .expect("at most three digits");
    let depth = check_depth(depth, prefix.len())?;

    let body_start = header_end + 1;
    let leaves = 1usize << depth;
    let body = &bytes[body_start..];
    let mut words = vec![0u64; leaves.div_ceil(64)];
    for i in 0..leaves {
        match body.get(i) {
            Some(b'0') => {}
            Some(b'1') => words[i / 64] |= 1 << (i % 64),
            Some(b'\n') => {
                return Err(malformed(
                    body_start + i,
                    format!("expected {leaves} payoffs, found {i}"),
                ))
            }
            Some(_) => return Err(malformed(body_start + i, "payoff must be '0' or '1'")),
            None => {
                return Err(malformed(
                    body_start + i,
                    format!("expected {leaves} payoffs, found {i}"),
                ))
            }
        }
    }
    match body.get(leaves) {
        Some(b'\n') => {}
        Some(_) => {
            return Err(malformed(
                body_start + leaves,
                format!("expected newline after {leaves} payoffs"),
            ))
        }
        None => return Err(malformed(body_start + leaves, "missing final newline")),
    }
    if body.len() > leaves + 1 {
        return Err(malformed(body_start + leaves + 1, "trailing data"));
    }
    GameInstance::from_words(depth, words)
}

pub fn to_binary(game: &GameInstance) -> Vec<u8> {
    let payload = (game.num_leaves() as usize).div_ceil(8);
    let mut out = Vec::with_capacity(6 + payload);
    out.extend_from_slice(BINARY_MAGIC);
    out.push(BINARY_VERSION);
    out.push(game.depth() as u8);
    out.extend(game.words().iter().flat_map(|w| w.to_le_bytes()).take(payload));
    out
}

pub fn from_binary(bytes: &[u8]) -> Result<GameInstance> {
    if let Some(offset) = (0..4).find(|&i| bytes.get(i) != Some(&BINARY_MAGIC[i])) {
        return Err(malformed(offset, "bad magic, expected `GGB1`"));
    }
    match bytes.get(4) {
        Some(&BINARY_VERSION) => {}
        Some(v) => return Err(malformed(4, format!("unsupported version {v:#04x}"))),
        None => return Err(malformed(4, "missing version byte")),
    }
    let depth = *bytes.get(5).ok_or_else(|| malformed(5, "missing depth byte"))?;
    let depth = check_depth(depth as u64, 5)?;
    let leaves = 1usize << depth;
    let payload_len = leaves.div_ceil(8);
    let payload = &bytes[6..];
    if payload.len() < payload_len {
        return Err(malformed(
            bytes.len(),
            format!("expected {payload_len} payload bytes, found {}", payload.len()),
        ));
    }
    if payload.len() > payload_len {
        return Err(malformed(6 + payload_len, "trailing data"));
    }
    if leaves < 8 && payload[0] >> leaves != 0 {
        return Err(malformed(6, "padding bits must be zero"));
    }
    let mut words = vec![0u64; leaves.div_ceil(64)];
    for (i, chunk) in payload.chunks(8).enumerate() {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        words[i] = u64::from_le_bytes(buf);
    }
    GameInstance::from_words(depth, words)
}

/// Parses either format, chosen by the leading bytes.
pub fn parse_game(bytes: &[u8]) -> Result<GameInstance> {
    if bytes.starts_with(BINARY_MAGIC) {
        from_binary(bytes)
    } else {
        from_text(bytes)
    }
}

//! Greedy lexicographic codes meeting the Gilbert bound in the Euclidean
//! metric on `Z_q^n`.

use crate::error::{usage, Result};
use crate::euclid::{Constellation, Word};

/// Largest ambient space `q^n` scanned by [`greedy_gilbert`].
pub const GILBERT_LIMIT: u64 = 10_000_000;

/// Scan `Z_q^n` in lexicographic order and keep each word whose squared
/// Euclidean distance to every kept word is at least `d`.
///
/// Keeping a word blocks its open ball of radius `d`, so the scan only has
/// to test one flag per word.
pub fn greedy_gilbert(q: u32, n: usize, d: u64) -> Result<Vec<Word>> {
    let c = Constellation::new(q)?;
    if n == 0 || d == 0 {
        return Err(usage!("greedy_gilbert needs n >= 1 and d >= 1"));
    }
    let size = u64::from(q)
        .checked_pow(n as u32)
        .filter(|&s| s <= GILBERT_LIMIT)
        .ok_or_else(|| {
            usage!("q^n = {q}^{n} exceeds the desk-scale limit {GILBERT_LIMIT}; reduce q or n")
        })? as usize;

    let offsets = ball_offsets(&c, n, d - 1);
    let mut blocked = vec![false; size];
    let mut kept = Vec::new();
    let mut digits = vec![0u32; n];
    for index in 0..size {
        if !blocked[index] {
            for off in &offsets {
                blocked[shifted_index(&digits, off, q)] = true;
            }
            kept.push(Word::new(digits.clone()));
        }
        increment(&mut digits, q);
    }
    Ok(kept)
}

/// All offsets `e` in `Z_q^n` with `w_E(e) <= r`.
fn ball_offsets(c: &Constellation, n: usize, r: u64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(
        c: &Constellation,
        pos: usize,
        budget: u64,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..c.q() {
            let w = c.euclid_residue(v);
            if w <= budget {
                cur[pos] = v;
                rec(c, pos + 1, budget - w, cur, out);
            }
        }
        cur[pos] = 0;
    }
    rec(c, 0, r, &mut cur, &mut out);
    out
}

fn shifted_index(digits: &[u32], off: &[u32], q: u32) -> usize {
    digits.iter().zip(off).fold(0usize, |acc, (&a, &b)| {
        acc * q as usize + ((a + b) % q) as usize
    })
}

/// Lexicographic successor, last coordinate fastest.
fn increment(digits: &mut [u32], q: u32) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return;
        }
        *d = 0;
    }
}

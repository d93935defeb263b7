//! Linear codes over a prime alphabet `Z_p`, with exhaustive and low-weight
//! minimum-distance searches in the Lee and Euclidean metrics.

use serde::{Deserialize, Serialize};

use super::primality::is_prime_u64;
use crate::error::{domain, usage, Result};
use crate::euclid::{Constellation, Word};

/// Largest codebook enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

/// Metric used for weight searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    Lee,
    Euclidean,
}

impl Metric {
    fn residue_weight(self, c: &Constellation, r: u32) -> u64 {
        match self {
            Metric::Lee => c.lee_residue(r),
            Metric::Euclidean => c.euclid_residue(r),
        }
    }
}

/// `[n, k]` linear code over `GF(q)`, `q` prime, given by a generator matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCode {
    q: u32,
    n: usize,
    k: usize,
    generator: Vec<Vec<u32>>,
    /// Guaranteed lower bound on the squared-Euclidean minimum distance.
    metric_floor: u64,
}

impl LinearCode {
    pub fn new(q: u32, generator: Vec<Vec<u32>>, metric_floor: u64) -> Result<Self> {
        if !is_prime_u64(u64::from(q)) {
            return Err(domain!("linear codes need a prime alphabet, got q = {q}"));
        }
        let k = generator.len();
        let n = generator.first().map_or(0, Vec::len);
        if k == 0 || n == 0 {
            return Err(domain!("generator matrix must be non-empty"));
        }
        if generator
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&v| v >= q))
        {
            return Err(domain!(
                "generator rows must have length {n} with entries below {q}"
            ));
        }
        if rank(&generator, q) != k {
            return Err(domain!(
                "generator rows are linearly dependent over GF({q})"
            ));
        }
        Ok(Self {
            q,
            n,
            k,
            generator,
            metric_floor,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &[Vec<u32>] {
        &self.generator
    }

    pub fn metric_floor(&self) -> u64 {
        self.metric_floor
    }

    pub fn constellation(&self) -> Constellation {
        Constellation::new(self.q).expect("q >= 2")
    }

    /// Number of codewords, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        u64::from(self.q).checked_pow(self.k as u32)
    }

    /// `msg * G`.
    pub fn encode(&self, msg: &[u32]) -> Result<Word> {
        if msg.len() != self.k || msg.iter().any(|&m| m >= self.q) {
            return Err(domain!(
                "message must have {} residues below {}",
                self.k,
                self.q
            ));
        }
        let q = u64::from(self.q);
        let mut out = vec![0u64; self.n];
        for (m, row) in msg.iter().zip(&self.generator) {
            if *m == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o = (*o + u64::from(*m) * u64::from(g)) % q;
            }
        }
        Ok(Word::new(out.into_iter().map(|v| v as u32).collect()))
    }

    /// Parity-check matrix `H` with `H c^T = 0` exactly for codewords.
    pub fn parity_check(&self) -> Vec<Vec<u32>> {
        let q = self.q;
        let (rref, pivots) = row_reduce(&self.generator, q);
        let free: Vec<usize> = (0..self.n).filter(|c| !pivots.contains(c)).collect();
        // For each free column f: c_f = 1, c_pivot(i) = -rref[i][f].
        free.iter()
            .map(|&f| {
                let mut h = vec![0u32; self.n];
                h[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    h[pc] = (q - rref[i][f]) % q;
                }
                h
            })
            .collect()
    }

    pub fn is_codeword(&self, word: &[u32]) -> bool {
        let q = u64::from(self.q);
        word.len() == self.n
            && self.parity_check().iter().all(|h| {
                h.iter()
                    .zip(word)
                    .map(|(&a, &b)| u64::from(a) * u64::from(b))
                    .sum::<u64>()
                    % q
                    == 0
            })
    }

    /// Minimum weight of a nonzero codeword by enumerating all `q^k`
    /// messages. Consecutive messages in base-`q` counting order differ by
    /// adding one generator row per changed digit.
    pub fn min_weight_exhaustive(&self, metric: Metric) -> Result<u64> {
        let size = self
            .size()
            .filter(|&s| s <= EXHAUSTIVE_LIMIT)
            .ok_or_else(|| {
                usage!(
                    "codebook {}^{} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}",
                    self.q,
                    self.k
                )
            })?;
        let c = self.constellation();
        let q = self.q;
        let mut digits = vec![0u32; self.k];
        let mut word = vec![0u32; self.n];
        let mut best = u64::MAX;
        for _ in 1..size {
            let mut i = 0;
            loop {
                for (w, &g) in word.iter_mut().zip(&self.generator[i]) {
                    *w = (*w + g) % q;
                }
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            let wt: u64 = word.iter().map(|&r| metric.residue_weight(&c, r)).sum();
            best = best.min(wt);
        }
        Ok(best)
    }

    /// Smallest weight of a nonzero codeword among all words of weight at
    /// most `limit`, found by enumerating that ball and testing syndromes.
    /// `None` proves the minimum weight exceeds `limit`.
    pub fn min_weight_up_to(&self, metric: Metric, limit: u64) -> Option<u64> {
        let c = self.constellation();
        let h = self.parity_check();
        let q = self.q;
        // Column j of H, as a syndrome contribution per unit residue.
        let columns: Vec<Vec<u32>> = (0..self.n)
            .map(|j| h.iter().map(|row| row[j]).collect())
            .collect();
        let mut best = None;
        let mut syndrome = vec![0u32; h.len()];
        search(
            &SearchCtx {
                c: &c,
                metric,
                columns: &columns,
                q,
            },
            0,
            limit,
            0,
            false,
            &mut syndrome,
            &mut best,
        );
        best
    }

    /// Exact minimum weight: exhaustive over the codebook when it is small,
    /// otherwise by low-weight enumeration with a growing limit.
    pub fn min_weight(&self, metric: Metric) -> u64 {
        if let Ok(w) = self.min_weight_exhaustive(metric) {
            return w;
        }
        let mut limit = self.metric_floor.max(1);
        loop {
            if let Some(w) = self.min_weight_up_to(metric, limit) {
                return w;
            }
            limit += 1;
        }
    }
}

struct SearchCtx<'a> {
    c: &'a Constellation,
    metric: Metric,
    columns: &'a [Vec<u32>],
    q: u32,
}

fn search(
    ctx: &SearchCtx<'_>,
    pos: usize,
    budget: u64,
    weight: u64,
    nonzero: bool,
    syndrome: &mut Vec<u32>,
    best: &mut Option<u64>,
) {
    if pos == ctx.columns.len() {
        if nonzero && syndrome.iter().all(|&s| s == 0) && best.is_none_or(|b| weight < b) {
            *best = Some(weight);
        }
        return;
    }
    search(ctx, pos + 1, budget, weight, nonzero, syndrome, best);
    let q = u64::from(ctx.q);
    for r in 1..ctx.q {
        let w = ctx.metric.residue_weight(ctx.c, r);
        if w > budget {
            continue;
        }
        let saved = syndrome.clone();
        for (s, &col) in syndrome.iter_mut().zip(&ctx.columns[pos]) {
            *s = ((u64::from(*s) + u64::from(r) * u64::from(col)) % q) as u32;
        }
        search(ctx, pos + 1, budget - w, weight + w, true, syndrome, best);
        *syndrome = saved;
    }
}

/// Reduced row echelon form and pivot columns.
pub(crate) fn row_reduce(rows: &[Vec<u32>], q: u32) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let q64 = u64::from(q);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = u64::from(super::field::poly::inv_mod(m[r][col], q));
        for v in m[r].iter_mut() {
            *v = (u64::from(*v) * inv % q64) as u32;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let f = u64::from(row[col]);
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = ((u64::from(*v) + (q64 - f) * u64::from(pv)) % q64) as u32;
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub(crate) fn rank(rows: &[Vec<u32>], q: u32) -> usize {
    row_reduce(rows, q).1.len()
}

//! Concatenation of a Reed-Solomon outer code over `GF(p^k)` with a linear
//! inner `[n, k]` code over `Z_p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::FieldElement;
use super::linear::{LinearCode, Metric};
use super::rs::RsCode;
use crate::error::{domain, Result};
use crate::euclid::{euclid_weight, sq_euclid_distance, Constellation, Word};

/// Codebooks up to this size are verified exhaustively.
pub const EXHAUSTIVE_VERIFY_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ConcatenatedCode {
    outer: RsCode,
    inner: LinearCode,
}

/// Outcome of a minimum-distance measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub min_sq_distance: u64,
    /// `true` when every codeword was examined, `false` for random pairs.
    pub exhaustive: bool,
    /// Pairs compared; for exhaustive scans, the nonzero codewords.
    pub pairs: u64,
}

impl ConcatenatedCode {
    pub fn new(outer: RsCode, inner: LinearCode) -> Result<Self> {
        let field = outer.field();
        if field.characteristic() != inner.q() || field.degree() != inner.dimension() {
            return Err(domain!(
                "outer alphabet GF({}^{}) does not match inner code over Z_{} of dimension {}",
                field.characteristic(),
                field.degree(),
                inner.q(),
                inner.dimension()
            ));
        }
        Ok(Self { outer, inner })
    }

    pub fn outer(&self) -> &RsCode {
        &self.outer
    }

    pub fn inner(&self) -> &LinearCode {
        &self.inner
    }

    pub fn q(&self) -> u32 {
        self.inner.q()
    }

    pub fn len(&self) -> usize {
        self.outer.len() * self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimension over `Z_p`.
    pub fn dimension(&self) -> usize {
        self.outer.dimension() * self.inner.dimension()
    }

    /// `d_out * inner floor`: each nonzero outer symbol becomes a nonzero
    /// inner codeword, and there are at least `d_out` of them.
    pub fn metric_floor(&self) -> u64 {
        self.outer.min_distance() as u64 * self.inner.metric_floor()
    }

    pub fn constellation(&self) -> Constellation {
        self.inner.constellation()
    }

    /// Outer-encode, then encode each symbol's coefficient vector with the
    /// inner code.
    pub fn encode(&self, msg: &[FieldElement]) -> Result<Word> {
        let symbols = self.outer.encode(msg)?;
        let mut out = Vec::with_capacity(self.len());
        for s in &symbols {
            out.extend(self.inner.encode(s.coeffs())?.into_inner());
        }
        Ok(Word::new(out))
    }

    pub fn random_message<R: Rng>(&self, rng: &mut R) -> Vec<FieldElement> {
        let f = self.outer.field();
        let p = f.characteristic();
        (0..self.outer.dimension())
            .map(|_| {
                let coeffs: Vec<u32> = (0..f.degree()).map(|_| rng.gen_range(0..p)).collect();
                f.element(&coeffs).expect("coefficients are in range")
            })
            .collect()
    }

    /// Number of codewords, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        u64::from(self.q()).checked_pow(self.dimension() as u32)
    }

    /// All codewords in message-index order. Only for small codes.
    pub fn codewords(&self) -> Result<Vec<Word>> {
        let size = self
            .size()
            .filter(|&s| s <= EXHAUSTIVE_VERIFY_LIMIT)
            .ok_or_else(|| domain!("codebook too large to list"))?;
        let f = self.outer.field();
        let order = f.order().expect("fits because the codebook does");
        (0..size)
            .map(|mut idx| {
                let msg: Vec<FieldElement> = (0..self.outer.dimension())
                    .map(|_| {
                        let e = f.from_index(idx % order);
                        idx /= order;
                        e
                    })
                    .collect();
                self.encode(&msg)
            })
            .collect()
    }

    /// Squared-Euclidean minimum distance. When the codebook has at most
    /// [`EXHAUSTIVE_VERIFY_LIMIT`] words this is the exact minimum nonzero
    /// weight (the code is linear); otherwise it is the minimum over
    /// `samples` random distinct message pairs from a seeded generator.
    pub fn measure_min_distance(&self, samples: u64, seed: u64) -> Result<DistanceReport> {
        let c = self.constellation();
        if let Ok(words) = self.codewords() {
            let min = words
                .par_iter()
                .filter(|w| w.residues().iter().any(|&r| r != 0))
                .map(|w| euclid_weight(&c, w))
                .try_reduce(|| u64::MAX, |x, y| Ok(x.min(y)))?;
            return Ok(DistanceReport {
                min_sq_distance: min,
                exhaustive: true,
                pairs: words.len() as u64 - 1,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = (0..samples)
            .map(|_| loop {
                let a = self.random_message(&mut rng);
                let b = self.random_message(&mut rng);
                if a != b {
                    break (a, b);
                }
            })
            .collect();
        let min = pairs
            .par_iter()
            .map(|(a, b)| -> Result<u64> {
                let u = self.encode(a)?;
                let v = self.encode(b)?;
                sq_euclid_distance(&c, &u, &v)
            })
            .try_reduce(|| u64::MAX, |x, y| Ok(x.min(y)))?;
        Ok(DistanceReport {
            min_sq_distance: min,
            exhaustive: false,
            pairs: samples,
        })
    }

    /// Exact inner minimum weight in `metric`, which may exceed the floor.
    pub fn inner_min_weight(&self, metric: Metric) -> u64 {
        self.inner.min_weight(metric)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::bch::lee_bch;
    use crate::constructor::rs::rs_code;

    #[test]
    fn pipeline_shape() {
        let inner = lee_bch(7, 2).unwrap();
        let outer = rs_code(7, 4, 8, 4).unwrap();
        let code = ConcatenatedCode::new(outer, inner).unwrap();
        assert_eq!(code.len(), 48);
        assert_eq!(code.metric_floor(), 20);
        assert_eq!(code.dimension(), 16);
        let zero: Vec<FieldElement> = (0..4).map(|_| code.outer().field().zero()).collect();
        assert_eq!(code.encode(&zero).unwrap(), Word::zero(48));
    }

    #[test]
    fn mismatched_alphabets() {
        let inner = lee_bch(7, 2).unwrap();
        assert!(ConcatenatedCode::new(rs_code(7, 3, 8, 4).unwrap(), inner.clone()).is_err());
        assert!(ConcatenatedCode::new(rs_code(5, 4, 8, 4).unwrap(), inner).is_err());
    }

    #[test]
    fn linearity() {
        let code =
            ConcatenatedCode::new(rs_code(7, 4, 8, 4).unwrap(), lee_bch(7, 2).unwrap()).unwrap();
        let f = code.outer().field();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = code.random_message(&mut rng);
            let b = code.random_message(&mut rng);
            let sum: Vec<FieldElement> = a.iter().zip(&b).map(|(x, y)| f.add(x, y)).collect();
            let ea = code.encode(&a).unwrap();
            let eb = code.encode(&b).unwrap();
            let expected: Vec<u32> = ea
                .residues()
                .iter()
                .zip(eb.residues())
                .map(|(x, y)| (x + y) % 7)
                .collect();
            assert_eq!(code.encode(&sum).unwrap().residues(), &expected[..]);
        }
    }

    #[test]
    fn identity_outer_keeps_inner_floor() {
        let inner = lee_bch(5, 2).unwrap();
        let outer = rs_code(5, 2, 3, 3).unwrap();
        let code = ConcatenatedCode::new(outer, inner).unwrap();
        assert_eq!(code.metric_floor(), code.inner().metric_floor());
        let report = code.measure_min_distance(0, 0).unwrap();
        assert!(report.exhaustive);
        assert!(report.min_sq_distance >= code.metric_floor());
    }

    #[test]
    fn small_concatenation_exhaustive() {
        // GF(5^2) outer [4, 2] (d = 3) over inner Lee BCH p = 5, t = 2: 5^4 words.
        let code =
            ConcatenatedCode::new(rs_code(5, 2, 4, 2).unwrap(), lee_bch(5, 2).unwrap()).unwrap();
        let report = code.measure_min_distance(0, 0).unwrap();
        assert!(report.exhaustive);
        assert_eq!(code.metric_floor(), 12);
        assert!(report.min_sq_distance >= 12);
    }
}

//! Reed-Solomon codes over `GF(p^k)`.

use super::field::{ExtField, FieldElement};
use crate::error::{domain, Result};

/// Evaluation code: a message `(m_0, ..., m_{k-1})` is the polynomial
/// `m(z) = sum m_i z^i`, sent as its values at `n` distinct field points.
#[derive(Debug, Clone, PartialEq)]
pub struct RsCode {
    field: ExtField,
    n: usize,
    k: usize,
    points: Vec<FieldElement>,
}

impl RsCode {
    /// Uses the first `n` field elements in index order as evaluation points.
    pub fn new(field: ExtField, n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(domain!("need 1 <= k <= n, got k = {k}, n = {n}"));
        }
        match field.order() {
            Some(order) if n as u64 <= order => {}
            _ => {
                return Err(domain!(
                    "length {n} exceeds the field size {}^{}",
                    field.characteristic(),
                    field.degree()
                ))
            }
        }
        let points = (0..n as u64).map(|i| field.from_index(i)).collect();
        Ok(Self {
            field,
            n,
            k,
            points,
        })
    }

    pub fn field(&self) -> &ExtField {
        &self.field
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

    pub fn points(&self) -> &[FieldElement] {
        &self.points
    }

    /// `n - k + 1`: a nonzero polynomial of degree below `k` has fewer than
    /// `k` roots, and the bound is met by `prod_{j<k-1} (z - point_j)`.
    pub fn min_distance(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn encode(&self, msg: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if msg.len() != self.k {
            return Err(domain!("message must have {} symbols", self.k));
        }
        let f = &self.field;
        Ok(self
            .points
            .iter()
            .map(|z| {
                msg.iter()
                    .rev()
                    .fold(f.zero(), |acc, m| f.add(&f.mul(&acc, z), m))
            })
            .collect())
    }
}

/// Reed-Solomon `[n_out, k_out]` code over `GF(p^k_inner)`.
pub fn rs_code(p: u32, k_inner: usize, n_out: usize, k_out: usize) -> Result<RsCode> {
    RsCode::new(ExtField::new(p, k_inner)?, n_out, k_out)
}

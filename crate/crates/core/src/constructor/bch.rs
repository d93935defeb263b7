//! Lee-metric BCH codes over `GF(p)` of length `p - 1`.

use super::field::poly;
use super::linear::LinearCode;
use super::primality::{is_prime_u64, pow_mod, primitive_root};
use crate::error::{domain, Result};

/// `g(z) = (z - 1)(z - a)...(z - a^(t-1))` over `GF(p)`, with `a` the
/// smallest primitive root modulo `p`. Coefficients lowest degree first.
///
/// Every codeword `c` then satisfies the power sums `sum_j c_j a^(ij) = 0`
/// for `i = 0..t`, which is what bounds the Lee distance by `2t`. The window
/// `a^1..a^t` does not: at `p = 7, t = 2` it admits a word of Lee weight 3.
pub fn generator_polynomial(p: u32, t: u32) -> Vec<u32> {
    let alpha = primitive_root(u64::from(p));
    (0..t).fold(vec![1u32], |g, i| {
        let root = pow_mod(alpha, u64::from(i), u64::from(p)) as u32;
        poly::mul(&g, &[(p - root) % p, 1], p)
    })
}

/// Cyclic code of length `p - 1` and dimension `p - 1 - t` generated by
/// [`generator_polynomial`]. Its Lee distance is at least `2t`, which also
/// bounds the squared Euclidean distance, so the metric floor is `2t`.
///
/// Requires `p >= 5` prime, `1 <= t <= (p+1)/2` and `p = t + 1 (mod 2)`.
pub fn lee_bch(p: u32, t: u32) -> Result<LinearCode> {
    if p < 5 || !is_prime_u64(u64::from(p)) {
        return Err(domain!("Lee BCH codes need a prime p >= 5, got {p}"));
    }
    if t < 1 || t > p.div_ceil(2) {
        return Err(domain!("t = {t} must lie in [1, (p+1)/2] for p = {p}"));
    }
    if p % 2 != (t + 1) % 2 {
        return Err(domain!("p = {p} and t = {t} violate p = t + 1 (mod 2)"));
    }
    let n = (p - 1) as usize;
    if t as usize >= n {
        return Err(domain!("t = {t} leaves no message symbols at length {n}"));
    }
    let k = n - t as usize;
    let g = generator_polynomial(p, t);
    let rows = (0..k)
        .map(|shift| {
            let mut row = vec![0u32; n];
            row[shift..shift + g.len()].copy_from_slice(&g);
            row
        })
        .collect();
    LinearCode::new(p, rows, 2 * u64::from(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::linear::Metric;

    #[test]
    fn generator_examples() {
        assert_eq!(generator_polynomial(7, 2), vec![3, 3, 1]);
        assert_eq!(generator_polynomial(7, 1), vec![6, 1]);
        let code = lee_bch(7, 2).unwrap();
        assert_eq!(code.len(), 6);
        assert_eq!(code.dimension(), 4);
        assert_eq!(code.metric_floor(), 4);
    }

    #[test]
    fn parameter_checks() {
        assert!(lee_bch(7, 3).is_err());
        assert!(lee_bch(9, 2).is_err());
        assert!(lee_bch(3, 2).is_err());
        assert!(lee_bch(7, 6).is_err());
        assert!(lee_bch(7, 0).is_err());
        assert!(lee_bch(5, 2).is_ok());
    }

    #[test]
    fn roots_of_codewords() {
        let code = lee_bch(7, 2).unwrap();
        let w = code.encode(&[1, 2, 3, 4]).unwrap();
        // Every codeword polynomial vanishes at 3^0 = 1 and 3.
        for root in [1, 3] {
            assert_eq!(poly::eval(w.residues(), root, 7), 0);
        }
    }

    #[test]
    fn lee_floors_small() {
        // t = 1 at p = 7 is excluded by the parity rule, so check the
        // generator directly: (z - 1) has Lee distance 2 by exhaustion.
        let g = generator_polynomial(7, 1);
        let rows: Vec<Vec<u32>> = (0..5)
            .map(|s| {
                let mut r = vec![0; 6];
                r[s..s + 2].copy_from_slice(&g);
                r
            })
            .collect();
        let code = LinearCode::new(7, rows, 2).unwrap();
        assert_eq!(code.min_weight_exhaustive(Metric::Lee).unwrap(), 2);

        for (p, t) in [(5, 2), (7, 2), (7, 4), (11, 4), (11, 6), (13, 6)] {
            let code = lee_bch(p, t).unwrap();
            let lee = code.min_weight(Metric::Lee);
            let euc = code.min_weight(Metric::Euclidean);
            assert!(lee >= 2 * u64::from(t), "p={p} t={t} lee={lee}");
            assert!(euc >= lee);
        }
    }

    #[test]
    fn shifted_window_is_too_weak() {
        // Roots 3 and 3^2 = 2 give z^2 + 2z + 6, whose code has Lee distance 3.
        let g = poly::mul(&[4, 1], &[5, 1], 7);
        assert_eq!(g, vec![6, 2, 1]);
        let rows: Vec<Vec<u32>> = (0..4)
            .map(|s| {
                let mut r = vec![0; 6];
                r[s..s + 3].copy_from_slice(&g);
                r
            })
            .collect();
        let code = LinearCode::new(7, rows, 0).unwrap();
        assert_eq!(code.min_weight_exhaustive(Metric::Lee).unwrap(), 3);
    }
}

//! Brute-force references used by the acceptance checks.

use crate::euclid::Constellation;

/// Number of words of `Z_q^n` at each Euclidean weight, by enumerating all
/// `q^n` words. Index `w` holds the count of weight exactly `w`.
pub fn weight_histogram(q: u32, n: usize) -> Vec<u64> {
    let c = Constellation::new(q).expect("q >= 2");
    let mut hist = vec![0u64; n * c.max_weight() as usize + 1];
    let mut digits = vec![0u32; n];
    loop {
        let w: u64 = digits.iter().map(|&r| c.euclid_residue(r)).sum();
        hist[w as usize] += 1;
        let mut i = 0;
        loop {
            if i == n {
                return hist;
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// `V(n, q, r)` for every `r` from 0 to the largest weight.
pub fn ball_sizes(q: u32, n: usize) -> Vec<u64> {
    weight_histogram(q, n)
        .into_iter()
        .scan(0u64, |acc, h| {
            *acc += h;
            Some(*acc)
        })
        .collect()
}

/// `-log2(1 - rho/4) / 2` evaluated directly.
pub fn shannon_lattice_gap(rho: f64) -> f64 {
    -0.5 * (1.0 - rho / 4.0).log2()
}

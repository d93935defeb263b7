//! Euclidean ball sizes in `Z_q^n` and the exponential growth rate of those
//! sizes.
//!
//! The per-coordinate weight enumerator is `f(z) = sum_w c_w z^w`, where `c_w`
//! counts residues of Euclidean weight `w`. `V(n, q, r)` is the sum of the
//! coefficients of `f(z)^n` up to degree `r`, and for `r = lambda * n` its
//! exponent is `log2 f(mu) - lambda log2 mu` with `mu` the positive root of
//! `z f'(z) = lambda f(z)`.

use std::f64::consts::{E, LN_2, PI};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Result};
use crate::euclid::Constellation;

/// Lower end of the initial saddle bracket.
pub const BRACKET_LO: f64 = 1e-30;
pub const BISECTION_STEPS: usize = 120;
pub const MAX_NEWTON_STEPS: usize = 10;
/// Iteration cap across bracket expansion, bisection and polishing.
pub const MAX_ITERATIONS: usize = 200;
/// Required relative residual `|mu f'(mu) - lambda f(mu)| / (lambda f(mu))`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;
/// Largest dropped theta-series tail, relative to `f(mu)`.
pub const THETA_TAIL_TOLERANCE: f64 = 1e-18;

/// Sparse per-coordinate weight enumerator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEnumerator {
    /// `(weight, count)` pairs in increasing weight order.
    terms: Vec<(u64, u64)>,
    /// Alphabet size; `0` marks the theta series `1 + 2 sum z^(i^2)`.
    q: u32,
    /// Largest `i` kept in a truncated theta series.
    truncation: Option<u64>,
}

impl WeightEnumerator {
    /// Difference-weight enumerator of `Z_q`.
    ///
    /// Odd `q = 2s+1`: `1 + 2 sum_{i<=s} z^(i^2)`. Even `q = 2s+2`: the same
    /// plus a single `z^((s+1)^2)` for the element `q/2`, so that `f(1) = q`.
    pub fn for_alphabet(q: u32) -> Result<Self> {
        let c = Constellation::new(q)?;
        let s = u64::from(c.s());
        let mut terms = vec![(0, 1)];
        terms.extend((1..=s).map(|i| (i * i, 2)));
        if !c.is_odd() {
            terms.push(((s + 1) * (s + 1), 1));
        }
        Ok(Self {
            terms,
            q,
            truncation: None,
        })
    }

    /// The theta series `1 + 2 sum_{i=1}^{truncation} z^(i^2)`.
    pub fn theta(truncation: u64) -> Result<Self> {
        if truncation == 0 {
            return Err(domain!("theta truncation must be at least 1"));
        }
        let mut terms = vec![(0, 1)];
        terms.extend((1..=truncation).map(|i| (i * i, 2)));
        Ok(Self {
            terms,
            q: 0,
            truncation: Some(truncation),
        })
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn truncation(&self) -> Option<u64> {
        self.truncation
    }

    pub fn max_weight(&self) -> u64 {
        self.terms.last().map_or(0, |t| t.0)
    }

    /// `f(1)`: the alphabet size for finite `q`.
    pub fn total(&self) -> u64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    /// Mean weight `f'(1) / f(1)`.
    pub fn mean_weight(&self) -> f64 {
        let num: f64 = self.terms.iter().map(|&(w, c)| (w * c) as f64).sum();
        num / self.total() as f64
    }

    /// `ln f(e^t)` by log-sum-exp.
    pub fn ln_eval(&self, t: f64) -> f64 {
        let (m, sum) = self.lse_parts(t);
        m + sum.ln()
    }

    fn lse_parts(&self, t: f64) -> (f64, f64) {
        let m = self
            .terms
            .iter()
            .map(|&(w, c)| (c as f64).ln() + w as f64 * t)
            .fold(f64::NEG_INFINITY, f64::max);
        let sum = self
            .terms
            .iter()
            .map(|&(w, c)| ((c as f64).ln() + w as f64 * t - m).exp())
            .sum();
        (m, sum)
    }

    /// Mean and variance of the weight under the tilted law `c_w z^w / f(z)`,
    /// at `z = e^t`. The mean is `z f'(z) / f(z)`; the variance is its
    /// derivative with respect to `t`.
    pub fn tilted_moments(&self, t: f64) -> (f64, f64) {
        let (m, sum) = self.lse_parts(t);
        let mut mean = 0.0;
        let mut second = 0.0;
        for &(w, c) in &self.terms {
            let p = ((c as f64).ln() + w as f64 * t - m).exp() / sum;
            let w = w as f64;
            mean += p * w;
            second += p * w * w;
        }
        (mean, (second - mean * mean).max(0.0))
    }
}

/// Solution of `z f'(z) = lambda f(z)` with the associated growth exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleSolution {
    pub lambda: f64,
    pub mu: f64,
    /// `log2 f(mu) - lambda log2 mu`, in bits per coordinate.
    pub exponent: f64,
    /// Set when `lambda` reaches the mean weight; the ball then holds almost
    /// all of `Z_q^n`, `mu` is reported as 1 and the exponent as `log2 q`.
    pub clamped: bool,
}

/// Exact `V(n, q, r)`: the number of words of `Z_q^n` with Euclidean weight at
/// most `r`.
pub fn ball_size(q: u32, n: usize, r: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(domain!("length n must be at least 1"));
    }
    let f = WeightEnumerator::for_alphabet(q)?;
    let cap = r.min(n as u64 * f.max_weight()) as usize;
    let mut poly: Vec<BigUint> = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let deg = (poly.len() - 1 + f.max_weight() as usize).min(cap);
        let mut next = vec![BigUint::zero(); deg + 1];
        for &(w, c) in f.terms() {
            let w = w as usize;
            for (j, coeff) in poly.iter().enumerate() {
                if j + w > deg {
                    break;
                }
                if coeff.is_zero() {
                    continue;
                }
                if c == 1 {
                    next[j + w] += coeff;
                } else {
                    next[j + w] += coeff * c;
                }
            }
        }
        poly = next;
    }
    Ok(poly.into_iter().sum())
}

/// Exponent of `V(n, q, lambda n)` via the saddle point of `f`.
pub fn saddle_solve(f: &WeightEnumerator, lambda: f64) -> Result<SaddleSolution> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain!("lambda must be positive and finite, got {lambda}"));
    }
    if f.q() != 0 && lambda >= f.mean_weight() {
        return Ok(SaddleSolution {
            lambda,
            mu: 1.0,
            exponent: (f.total() as f64).log2(),
            clamped: true,
        });
    }
    if lambda >= f.max_weight() as f64 {
        return Err(domain!(
            "lambda = {lambda} is not below the largest weight {}",
            f.max_weight()
        ));
    }
    let t = solve_ln_mu(f, lambda)?;
    let mu = t.exp();
    Ok(SaddleSolution {
        lambda,
        mu,
        exponent: (f.ln_eval(t) - lambda * t) / LN_2,
        clamped: false,
    })
}

/// Returns `ln mu`. The map `t -> mean weight at e^t` is strictly increasing,
/// so bisection on a sign-changing bracket converges; Newton in `t` polishes.
fn solve_ln_mu(f: &WeightEnumerator, lambda: f64) -> Result<f64> {
    let mean = |t: f64| f.tilted_moments(t).0;
    let mut iterations = 0usize;
    let mut lo = BRACKET_LO.ln();
    while mean(lo) >= lambda {
        lo -= 64.0 * LN_2;
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(numeric!(
                "could not bracket the saddle point from below for lambda = {lambda}"
            ));
        }
    }
    let mut hi = 0.0f64;
    while mean(hi) <= lambda {
        hi += LN_2;
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(numeric!(
                "could not bracket the saddle point from above for lambda = {lambda}"
            ));
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mean(mid) < lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON_STEPS {
        let (m, var) = f.tilted_moments(t);
        if var <= 0.0 {
            break;
        }
        let step = (m - lambda) / var;
        let next = (t - step).clamp(lo, hi);
        let done = (next - t).abs() <= 1e-15 * t.abs().max(1.0);
        t = next;
        if done {
            break;
        }
    }
    let residual = (mean(t) - lambda).abs() / lambda;
    if residual > RESIDUAL_TOLERANCE {
        return Err(numeric!(
            "saddle point did not converge for lambda = {lambda}: relative residual {residual:e}"
        ));
    }
    Ok(t)
}

/// Saddle point of the theta series `1 + 2 sum z^(i^2)`, truncated at
/// `i = truncation`. Fails if the dropped tail is not negligible at `mu`.
pub fn theta_saddle(lambda: f64, truncation: u64) -> Result<SaddleSolution> {
    let f = WeightEnumerator::theta(truncation)?;
    if lambda >= (truncation * truncation) as f64 {
        return Err(numeric!(
            "theta truncation {truncation} is too small for lambda = {lambda}; need degree above sqrt(lambda)"
        ));
    }
    let sol = saddle_solve(&f, lambda)?;
    let ln_mu = sol.mu.ln();
    let ln_f = f.ln_eval(ln_mu);
    if tail_log_ratio(truncation, ln_mu, ln_f) > THETA_TAIL_TOLERANCE.ln() {
        let needed = (truncation..)
            .take(1 << 20)
            .find(|&d| tail_log_ratio(d, ln_mu, ln_f) <= THETA_TAIL_TOLERANCE.ln());
        return Err(match needed {
            Some(d) => numeric!(
                "theta truncation {truncation} leaves a non-negligible tail at mu = {}; degree {d} required",
                sol.mu
            ),
            None => numeric!(
                "theta truncation {truncation} puts the saddle at mu = {} outside the unit disc; a higher degree is required",
                sol.mu
            ),
        });
    }
    Ok(sol)
}

/// `ln(tail / f(mu))` with `tail <= 2 mu^((d+1)^2) / (1 - mu^(2d+3))`.
fn tail_log_ratio(d: u64, ln_mu: f64, ln_f: f64) -> f64 {
    if ln_mu >= 0.0 {
        return f64::INFINITY;
    }
    let d = d as f64;
    let ratio = -(-((2.0 * d + 3.0) * ln_mu).exp()).ln_1p();
    2f64.ln() + (d + 1.0) * (d + 1.0) * ln_mu + ratio - ln_f
}

/// Growth exponent of the continuum ball: a ball of squared radius
/// `lambda n` in `R^n` has volume `(2 pi e lambda)^(n/2)` up to
/// subexponential factors.
pub fn continuum_exponent(lambda: f64) -> f64 {
    0.5 * (2.0 * PI * E * lambda).log2()
}

/// Bits per coordinate lost by counting integer points of `Z^n` in a ball of
/// squared radius `lambda n` instead of measuring its volume. This is the
/// defect of large-alphabet Gilbert codes relative to the lattice bound.
pub fn large_alphabet_defect(lambda: f64, truncation: u64) -> Result<f64> {
    Ok(theta_saddle(lambda, truncation)?.exponent - continuum_exponent(lambda))
}

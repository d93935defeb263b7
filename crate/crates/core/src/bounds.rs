//! Asymptotic rate curves for spherical codes, evaluated in `x = ln(rho)`
//! coordinates so that `rho` as small as `e^-1000` stays representable.
//!
//! Rates are in bits per dimension. `rho` is the squared minimum distance of
//! a code on the unit sphere.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::constructor::primality::is_probable_prime;
use crate::counting::{saddle_solve, WeightEnumerator};
use crate::error::{domain, usage, Error, Result};
use crate::euclid::Constellation;

/// Below this `ln(rho)` the value of `rho` itself is not materialised.
pub const MIN_MATERIALIZED_LN_RHO: f64 = -700.0;

/// Rate loss of the explicit lattice family relative to `R_L`.
pub const EXPLICIT_LATTICE_LOSS: f64 = 1.30;

/// A `TVZ` quality factor `1 - 1/(Q^(1/2) - 1)` is treated as exactly 1 once
/// `ln Q^(1/2)` exceeds this.
pub const TVZ_CLAMP_LN: f64 = 60.0 * std::f64::consts::LN_10;

/// Largest `x + 2y` for which the region residual is evaluated directly.
pub const REGION_EXP_GUARD: f64 = 700.0;

/// The 137-digit prime used for the attainable-region operating point.
pub const LARGE_TVZ_PRIME: &str = concat!(
    "5432455719452623343140299649993224712642268405087",
    "972148236533041723675544652674874508958455203602044198462638584629866",
    "4106668659730094751"
);
/// Relative inner-code distance `t/n` paired with [`LARGE_TVZ_PRIME`].
pub const LARGE_TVZ_TAU: f64 = 0.00155359;
/// `ln(rho)` threshold paired with [`LARGE_TVZ_PRIME`].
pub const LARGE_TVZ_LN_RHO: f64 = -640.48;
/// Fraction of `R_L` the concatenated family is designed to reach.
pub const LARGE_TVZ_LAMBDA: f64 = 0.98;

/// A sampled point of a rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    /// `ln(rho)`.
    pub x: f64,
    /// Bits per dimension.
    pub rate: f64,
}

impl BoundPoint {
    /// `rho = e^x`, or `None` when it would underflow.
    pub fn rho(&self) -> Option<f64> {
        (self.x >= MIN_MATERIALIZED_LN_RHO).then(|| self.x.exp())
    }
}

fn ln_rho(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(domain!("rho must be positive and finite, got {rho}"));
    }
    Ok(rho.ln())
}

/// Shannon's lower bound `R_S = 1 - log2(rho (4 - rho)) / 2`.
pub fn shannon_rate(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 4.0) {
        return Err(domain!("Shannon bound needs 0 < rho < 4, got {rho}"));
    }
    shannon_rate_ln(rho.ln())
}

/// [`shannon_rate`] at `rho = e^x`, computed as
/// `1 - (x + ln 4 + ln(1 - e^x / 4)) / (2 ln 2)`.
pub fn shannon_rate_ln(x: f64) -> Result<f64> {
    if !(x < 4f64.ln()) || x.is_nan() {
        return Err(domain!("Shannon bound needs ln(rho) < ln 4, got {x}"));
    }
    let ln_four_minus_rho = 4f64.ln() + (-(x.exp() / 4.0)).ln_1p();
    Ok(1.0 - (x + ln_four_minus_rho) / (2.0 * LN_2))
}

/// Lattice-packing bound `R_L = -log2(rho) / 2`.
pub fn lattice_rate(rho: f64) -> Result<f64> {
    Ok(lattice_rate_ln(ln_rho(rho)?))
}

pub fn lattice_rate_ln(x: f64) -> f64 {
    -x / (2.0 * LN_2)
}

/// `R_L - 1.30`, the rate reached from explicit lattices.
pub fn lattice_rate_shifted_ln(x: f64) -> f64 {
    lattice_rate_ln(x) - EXPLICIT_LATTICE_LOSS
}

/// Half the Shannon bound, reached by polynomial-time constructions.
pub fn lachaud_stern_rate(rho: f64) -> Result<f64> {
    Ok(0.5 * shannon_rate(rho)?)
}

pub fn lachaud_stern_rate_ln(x: f64) -> Result<f64> {
    Ok(0.5 * shannon_rate_ln(x)?)
}

/// `R_S - R_L = -log2(1 - rho/4) / 2`, computed without cancellation.
pub fn shannon_lattice_gap_ln(x: f64) -> Result<f64> {
    if !(x < 4f64.ln()) || x.is_nan() {
        return Err(domain!("gap needs ln(rho) < ln 4, got {x}"));
    }
    Ok(-(-(x.exp() / 4.0)).ln_1p() / (2.0 * LN_2))
}

/// `(R_L - 1.30) - lambda R_S` at `rho = e^x`, written as
/// `(1 - lambda) R_L - 1.30 - lambda (R_S - R_L)` to avoid cancellation.
pub fn explicit_lattice_margin_ln(x: f64, lambda: f64) -> Result<f64> {
    Ok((1.0 - lambda) * lattice_rate_ln(x)
        - EXPLICIT_LATTICE_LOSS
        - lambda * shannon_lattice_gap_ln(x)?)
}

/// Rate of spherical codes obtained from Gilbert codes over `Z_q` through the
/// Yaglom map: `log2 q - exponent(lambda = a rho)`.
pub fn gilbert_yaglom_rate(q: u32, rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(domain!("Gilbert-Yaglom rate needs 0 < rho <= 1, got {rho}"));
    }
    let c = Constellation::new(q)?;
    let f = WeightEnumerator::for_alphabet(q)?;
    let sol = saddle_solve(&f, c.a() * rho)?;
    Ok(((q as f64).log2() - sol.exponent).max(0.0))
}

/// Natural logarithm of an arbitrary-precision integer.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let digits = n.to_u64_digits();
        let mut v = 0.0f64;
        for d in digits.iter().rev() {
            v = v * 2f64.powi(64) + *d as f64;
        }
        if v.is_finite() {
            return v.ln();
        }
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64_digits()[0] as f64;
    top.ln() + shift as f64 * LN_2
}

/// Parameters of the concatenated family with Lee BCH inner codes of length
/// `p - 1` over `GF(p)` and TVZ outer codes over `GF(p^(p-1-t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct TvzParams {
    pub p: BigUint,
    pub ln_p: f64,
    pub ln_p_minus_1: f64,
    /// Number of BCH roots, when known exactly.
    pub t: Option<u64>,
    /// `t / (p - 1)`.
    pub tau: f64,
    pub lambda: f64,
}

impl TvzParams {
    /// Exact small-prime parameters. Requires `p >= 7` prime,
    /// `1 <= t <= (p+1)/2` and `p = t + 1 (mod 2)`, the last making the outer
    /// field size `p^(p-1-t)` a square.
    pub fn new(p: u64, t: u64, lambda: f64) -> Result<Self> {
        if p < 7 {
            return Err(domain!("TVZ family needs p >= 7, got {p}"));
        }
        if !is_probable_prime(&BigUint::from(p), 32, 0) {
            return Err(domain!("p = {p} is not prime"));
        }
        if t < 1 || t > p.div_ceil(2) {
            return Err(domain!("t = {t} must lie in [1, (p+1)/2] for p = {p}"));
        }
        if p % 2 != (t + 1) % 2 {
            return Err(domain!("p = {p} and t = {t} violate p = t + 1 (mod 2)"));
        }
        Ok(Self {
            p: BigUint::from(p),
            ln_p: (p as f64).ln(),
            ln_p_minus_1: ((p - 1) as f64).ln(),
            t: Some(t),
            tau: t as f64 / (p - 1) as f64,
            lambda,
        })
    }

    /// Parameters given by `tau = t/(p-1)` for an arbitrary-precision prime.
    pub fn with_tau(p: BigUint, tau: f64, lambda: f64) -> Result<Self> {
        if p < BigUint::from(7u32) {
            return Err(domain!("TVZ family needs p >= 7"));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(domain!("tau = {tau} must lie in (0, 1)"));
        }
        let pm1 = &p - 1u32;
        Ok(Self {
            ln_p: ln_biguint(&p),
            ln_p_minus_1: ln_biguint(&pm1),
            p,
            t: None,
            tau,
            lambda,
        })
    }

    /// The 137-digit operating point with `tau = 0.00155359`, `lambda = 0.98`.
    pub fn large_operating_point() -> Self {
        let p = BigUint::from_str(LARGE_TVZ_PRIME).expect("literal is a decimal integer");
        Self::with_tau(p, LARGE_TVZ_TAU, LARGE_TVZ_LAMBDA).expect("literal parameters are valid")
    }

    /// `ln Q^(1/2) = (p - t - 1)/2 * ln p`.
    pub fn ln_sqrt_outer_field(&self) -> f64 {
        (1.0 - self.tau) * self.p_minus_1_f64() / 2.0 * self.ln_p
    }

    fn p_minus_1_f64(&self) -> f64 {
        self.ln_p_minus_1.exp()
    }

    /// `f_Q = 1 - 1/(p^((p-t-1)/2) - 1)`, clamped to 1 when the defect is
    /// below `10^-60`.
    pub fn quality_factor(&self) -> f64 {
        let e = self.ln_sqrt_outer_field();
        if e > TVZ_CLAMP_LN {
            log::debug!("f_Q clamped to 1 (ln sqrt(Q) = {e:e} > {TVZ_CLAMP_LN})");
            return 1.0;
        }
        1.0 - 1.0 / e.exp_m1()
    }

    /// `(p - t - 1) log2(p) / (p - 1)`.
    pub fn rate_scale(&self) -> f64 {
        (1.0 - self.tau) * self.ln_p / LN_2
    }

    /// `ln((p-1)^3 / (8t)) = 2 ln(p-1) - ln(8 tau)`.
    pub fn ln_distance_scale(&self) -> f64 {
        2.0 * self.ln_p_minus_1 - (8.0 * self.tau).ln()
    }

    /// Rate at `rho = 0`.
    pub fn rate_intercept(&self) -> f64 {
        self.rate_scale() * self.quality_factor()
    }

    /// `ln` of the `rho` at which the line reaches rate 0.
    pub fn ln_rho_intercept(&self) -> f64 {
        self.quality_factor().ln() - self.ln_distance_scale()
    }
}

/// Rate on the TVZ concatenation line at `rho = e^x`:
/// `R = [(p-t-1) log2 p / (p-1)] (f_Q - rho (p-1)^3 / (8t))`.
pub fn tvz_line(params: &TvzParams, x: f64) -> f64 {
    let penalty = if x == f64::NEG_INFINITY {
        0.0
    } else {
        (x + params.ln_distance_scale()).exp()
    };
    params.rate_scale() * (params.quality_factor() - penalty)
}

/// The tangent `X/A + Y/B = 1` to `(rho, lambda R_L(rho))` at `rho0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentLine {
    pub a: f64,
    pub ln_a: f64,
    pub b: f64,
    pub rho0: f64,
    pub x0: f64,
    pub lambda: f64,
}

impl TangentLine {
    /// Tangent at `rho0 = e^x0`. `A = rho0 (1 - ln rho0)`,
    /// `B = lambda (1 - ln rho0) / (2 ln 2)`.
    pub fn at_ln(x0: f64, lambda: f64) -> Result<Self> {
        if !(x0 < 1.0) || x0.is_nan() {
            return Err(domain!("tangent degenerates for ln(rho0) >= 1, got {x0}"));
        }
        let one_minus = 1.0 - x0;
        let ln_a = x0 + one_minus.ln();
        Ok(Self {
            a: ln_a.exp(),
            ln_a,
            b: lambda * one_minus / (2.0 * LN_2),
            rho0: x0.exp(),
            x0,
            lambda,
        })
    }

    pub fn at(rho0: f64, lambda: f64) -> Result<Self> {
        Self::at_ln(ln_rho(rho0)?, lambda)
    }

    /// `Y` on the line at `X = e^x`.
    pub fn value_at_ln(&self, x: f64) -> f64 {
        self.b * (1.0 - (x - self.ln_a).exp())
    }
}

/// `F = e^(x+2y)(1-x) + 4 lambda (1-x)/y - 8`; the point `(ln rho, ln p)` is
/// attainable iff `F <= 0`. Returns `+inf` once `x + 2y` exceeds the guard.
pub fn region_residual(x: f64, y: f64, lambda: f64) -> Result<f64> {
    check_region_domain(x, y)?;
    if x + 2.0 * y > REGION_EXP_GUARD {
        return Ok(f64::INFINITY);
    }
    Ok((x + 2.0 * y).exp() * (1.0 - x) + 4.0 * lambda * (1.0 - x) / y - 8.0)
}

/// Window `[tau_lo, tau_hi]` of inner relative distances for which the TVZ
/// line dominates the tangent at `(x, y)`:
/// `(1-x) e^(x+2y) / 8 <= tau <= 1 - lambda (1-x) / (2y)`.
pub fn tau_window(x: f64, y: f64, lambda: f64) -> Result<(f64, f64)> {
    check_region_domain(x, y)?;
    let lo = if x + 2.0 * y > REGION_EXP_GUARD {
        f64::INFINITY
    } else {
        (1.0 - x) * (x + 2.0 * y).exp() / 8.0
    };
    let hi = 1.0 - lambda * (1.0 - x) / (2.0 * y);
    Ok((lo, hi))
}

fn check_region_domain(x: f64, y: f64) -> Result<()> {
    if !(y > 0.0) || !(x < 1.0) {
        return Err(domain!(
            "region needs y > 0 and x < 1, got x = {x}, y = {y}"
        ));
    }
    Ok(())
}

/// Minimum of `F(., y)` over `x < -1`, where `F` is convex.
pub fn min_region_residual(y: f64, lambda: f64) -> Result<(f64, f64)> {
    // dF/dx = -x e^(x+2y) - 4 lambda / y, increasing for x < -1.
    let slope = |x: f64| -x * (x + 2.0 * y).exp() - 4.0 * lambda / y;
    let (mut lo, mut hi) = (-2.0 * y - 200.0, -1.0);
    if slope(hi) <= 0.0 {
        return Ok((hi, region_residual(hi, y, lambda)?));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, region_residual(x, y, lambda)?))
}

/// Interval of `ln(rho)` on which the TVZ line lies strictly above
/// `lambda R_L`, or `None` if it never does.
pub fn tvz_dominance_interval(params: &TvzParams, lambda: f64) -> Option<(f64, f64)> {
    let gap = |x: f64| tvz_line(params, x) - lambda * lattice_rate_ln(x);
    // The gap is concave in x with its maximum where the slopes agree.
    let x_star = (lambda / (2.0 * LN_2 * params.rate_scale())).ln() - params.ln_distance_scale();
    if !(gap(x_star) > 0.0) {
        return None;
    }
    let root = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if gap(mid) > 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    let mut left = x_star - 1.0;
    while gap(left) > 0.0 {
        left -= (x_star - left) * 2.0;
    }
    let mut right = x_star + 1.0;
    while gap(right) > 0.0 {
        right += (right - x_star) * 2.0;
    }
    Some((root(x_star, left), root(x_star, right)))
}

/// Point on the envelope of TVZ lines along `x + 2y = c`,
/// `8 tau = (1 - x) e^c`: `R = (1 - 1/(1-x)) (1 - tau) y / ln 2`.
pub fn envelope_point(x: f64, c: f64) -> Result<BoundPoint> {
    let (y, tau) = envelope_coordinates(x, c)?;
    Ok(BoundPoint {
        x,
        rate: (1.0 - 1.0 / (1.0 - x)) * (1.0 - tau) * y / LN_2,
    })
}

fn envelope_coordinates(x: f64, c: f64) -> Result<(f64, f64)> {
    if !(x < 0.0) {
        return Err(domain!("envelope needs ln(rho) < 0, got {x}"));
    }
    let y = (c - x) / 2.0;
    if !(y > 0.0) {
        return Err(domain!("envelope needs y = (c - x)/2 > 0, got {y}"));
    }
    let tau = (1.0 - x) * c.exp() / 8.0;
    if !(tau > 0.0 && tau < 1.0) {
        return Err(domain!(
            "envelope needs tau = (1-x) e^c / 8 in (0,1), got {tau}"
        ));
    }
    Ok((y, tau))
}

/// `dR/dx` along the envelope, from the product rule.
pub fn envelope_slope(x: f64, c: f64) -> Result<f64> {
    let (y, tau) = envelope_coordinates(x, c)?;
    let g = -x / (1.0 - x);
    let dg = -1.0 / ((1.0 - x) * (1.0 - x));
    let dtau = -c.exp() / 8.0;
    let dy = -0.5;
    Ok((dg * (1.0 - tau) * y - g * dtau * y + g * (1.0 - tau) * dy) / LN_2)
}

/// Longest run of consecutive samples in `[x_min, x_max]` where the envelope
/// for `c` lies strictly above `lambda R_S`.
pub fn envelope_dominance_interval(
    c: f64,
    lambda: f64,
    x_min: f64,
    x_max: f64,
    samples: usize,
) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64, usize)> = None;
    let mut run: Option<(f64, usize)> = None;
    for x in sample_grid(x_min, x_max, samples) {
        let above = match (envelope_point(x, c), shannon_rate_ln(x)) {
            (Ok(p), Ok(rs)) => p.rate > lambda * rs,
            _ => false,
        };
        if above {
            let (start, len) = run.map_or((x, 0), |r| r);
            run = Some((start, len + 1));
            let (s, l) = run.unwrap();
            if best.is_none_or(|b| l > b.2) {
                best = Some((s, x, l));
            }
        } else {
            run = None;
        }
    }
    best.map(|(s, e, _)| (s, e))
}

/// Curve families emitted for plotting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Shannon,
    Lattice,
    LatticeShifted,
    LachaudStern,
    GilbertYaglom,
    TvzLine,
    Envelope,
    ScaledShannon,
}

impl CurveKind {
    pub const ALL: [CurveKind; 8] = [
        CurveKind::Shannon,
        CurveKind::Lattice,
        CurveKind::LatticeShifted,
        CurveKind::LachaudStern,
        CurveKind::GilbertYaglom,
        CurveKind::TvzLine,
        CurveKind::Envelope,
        CurveKind::ScaledShannon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Shannon => "shannon",
            CurveKind::Lattice => "lattice",
            CurveKind::LatticeShifted => "lattice_shifted",
            CurveKind::LachaudStern => "lachaud_stern",
            CurveKind::GilbertYaglom => "gilbert_yaglom",
            CurveKind::TvzLine => "tvz_line",
            CurveKind::Envelope => "envelope",
            CurveKind::ScaledShannon => "scaled_shannon",
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        let kind = match norm.as_str() {
            "tvz" => CurveKind::TvzLine,
            other => *CurveKind::ALL
                .iter()
                .find(|k| k.name() == other)
                .ok_or_else(|| usage!("unknown curve kind '{s}'"))?,
        };
        Ok(kind)
    }
}

/// Extra parameters consumed by some curve kinds.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveParams {
    /// Alphabet size for `gilbert_yaglom`.
    pub q: Option<u32>,
    /// Line parameters for `tvz_line`.
    pub tvz: Option<TvzParams>,
    /// Envelope constant `c = x + 2y`.
    pub c: Option<f64>,
    /// Scaling for `scaled_shannon`.
    pub lambda: Option<f64>,
}

/// `samples` evenly spaced values from `x_min` to `x_max` inclusive.
pub fn sample_grid(x_min: f64, x_max: f64, samples: usize) -> impl Iterator<Item = f64> {
    let step = if samples > 1 {
        (x_max - x_min) / (samples - 1) as f64
    } else {
        0.0
    };
    (0..samples).map(move |i| {
        if i + 1 == samples && samples > 1 {
            x_max
        } else {
            x_min + step * i as f64
        }
    })
}

/// Samples a curve uniformly in `x = ln(rho)`. Samples where the curve is
/// undefined or negative are omitted, so a curve ends at its rate-0 crossing.
pub fn emit_curve(
    kind: CurveKind,
    params: &CurveParams,
    x_min: f64,
    x_max: f64,
    samples: usize,
) -> Result<Vec<BoundPoint>> {
    if samples == 0 {
        return Err(usage!("samples must be at least 1"));
    }
    if !(x_min.is_finite() && x_max.is_finite()) || x_min > x_max {
        return Err(usage!("invalid x range [{x_min}, {x_max}]"));
    }
    let need = |what: &str| usage!("curve '{kind}' needs --{what}");
    let eval: Box<dyn Fn(f64) -> Result<f64>> = match kind {
        CurveKind::Shannon => Box::new(shannon_rate_ln),
        CurveKind::Lattice => Box::new(|x| Ok(lattice_rate_ln(x))),
        CurveKind::LatticeShifted => Box::new(|x| Ok(lattice_rate_shifted_ln(x))),
        CurveKind::LachaudStern => Box::new(lachaud_stern_rate_ln),
        CurveKind::GilbertYaglom => {
            let q = params.q.ok_or_else(|| need("q"))?;
            Constellation::new(q).map_err(|e| usage!("{e}"))?;
            Box::new(move |x| gilbert_yaglom_rate(q, x.exp()))
        }
        CurveKind::TvzLine => {
            let tvz = params.tvz.clone().ok_or_else(|| need("p"))?;
            Box::new(move |x| Ok(tvz_line(&tvz, x)))
        }
        CurveKind::Envelope => {
            let c = params.c.ok_or_else(|| need("c"))?;
            Box::new(move |x| envelope_point(x, c).map(|p| p.rate))
        }
        CurveKind::ScaledShannon => {
            let lambda = params.lambda.ok_or_else(|| need("lambda"))?;
            Box::new(move |x| Ok(lambda * shannon_rate_ln(x)?))
        }
    };
    Ok(sample_grid(x_min, x_max, samples)
        .filter_map(|x| match eval(x) {
            Ok(rate) if rate.is_finite() && rate >= 0.0 => Some(BoundPoint { x, rate }),
            _ => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn shannon_examples() {
        assert!(shannon_rate(2.0).unwrap().abs() < 1e-15);
        assert!(close(
            shannon_rate(1.0).unwrap(),
            1.0 - 3f64.log2() / 2.0,
            1e-15
        ));
        assert!((shannon_rate(1.0).unwrap() - 0.20752).abs() < 1e-5);
        let x = -640.48;
        let rs = shannon_rate_ln(x).unwrap();
        // R_S - R_L ~ rho / (8 ln 2): far below one ulp here.
        assert_eq!(rs, lattice_rate_ln(x) + shannon_lattice_gap_ln(x).unwrap());
        assert!(close(rs, -x / (2.0 * LN_2), 1e-15));
        assert!(shannon_rate(4.0).is_err());
        assert!(shannon_rate(0.0).is_err());
        assert!(shannon_rate_ln(2.0).is_err());
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(lattice_rate(1.0).unwrap(), 0.0);
        assert!(close(lattice_rate(0.25).unwrap(), 1.0, 1e-15));
        let x = -130.0 * LN_2;
        assert!(close(lattice_rate_ln(x), 65.0, 1e-15));
        assert!(close(lattice_rate_shifted_ln(x), 63.7, 1e-14));
        assert!(lattice_rate(-1.0).is_err());
    }

    #[test]
    fn lachaud_stern_examples() {
        assert!(lachaud_stern_rate(2.0).unwrap().abs() < 1e-15);
        assert!((lachaud_stern_rate(1.0).unwrap() - 0.10376).abs() < 1e-5);
        assert_eq!(
            lachaud_stern_rate_ln(-100.0).unwrap(),
            0.5 * shannon_rate_ln(-100.0).unwrap()
        );
    }

    #[test]
    fn gilbert_yaglom_examples() {
        let r = gilbert_yaglom_rate(3, 0.5).unwrap();
        assert!(close(r, 3f64.log2() - 1.5, 1e-12));
        assert!((r - 0.08496).abs() < 1e-5);
        let tiny = gilbert_yaglom_rate(3, 1e-12).unwrap();
        assert!(3f64.log2() - tiny < 1e-9);

        // q = 5, rho = 1/4: lambda = 1 with mu = 6^(-1/4), f(mu) = 1 + 2 mu + 1/3.
        let mu = 6f64.powf(-0.25);
        let expected = 5f64.log2() - ((1.0 + 2.0 * mu + 1.0 / 3.0).log2() - mu.log2());
        assert!(close(
            gilbert_yaglom_rate(5, 0.25).unwrap(),
            expected,
            1e-12
        ));
        assert!(gilbert_yaglom_rate(5, 1.5).is_err());
        // Above the mean weight the rate is 0.
        assert_eq!(gilbert_yaglom_rate(3, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn tvz_small_prime() {
        let params = TvzParams::new(7, 2, 0.98).unwrap();
        let f_q = 47.0 / 48.0;
        assert!(close(params.quality_factor(), f_q, 1e-15));
        let r0 = tvz_line(&params, f64::NEG_INFINITY);
        assert!(close(r0, 4.0 * 7f64.log2() / 6.0 * f_q, 1e-14));
        assert!((r0 - 1.8326).abs() < 1e-4);
        let root = f_q * 16.0 / 216.0;
        assert!(tvz_line(&params, root.ln()).abs() < 1e-13);
        assert!(close(params.ln_rho_intercept(), root.ln(), 1e-14));

        assert!(TvzParams::new(7, 3, 0.98).is_err());
        assert!(TvzParams::new(9, 2, 0.98).is_err());
        assert!(TvzParams::new(5, 2, 0.98).is_err());
        assert!(TvzParams::new(7, 5, 0.98).is_err());
    }

    #[test]
    fn tvz_large_prime_clamps() {
        let params = TvzParams::large_operating_point();
        assert_eq!(params.quality_factor(), 1.0);
        assert!((params.ln_p - 314.843_963_929_261_3).abs() < 1e-10);
    }

    #[test]
    fn ln_biguint_matches_f64() {
        for v in [7u64, 1 << 40, u64::MAX] {
            assert!(close(ln_biguint(&BigUint::from(v)), (v as f64).ln(), 1e-15));
        }
        let big = BigUint::from(10u32).pow(500);
        assert!(close(
            ln_biguint(&big),
            500.0 * std::f64::consts::LN_10,
            1e-15
        ));
    }

    #[test]
    fn tangent_examples() {
        let t = TangentLine::at((-1f64).exp(), 0.98).unwrap();
        assert!(close(t.a, 2.0 / std::f64::consts::E, 1e-15));
        assert!(close(t.b, 0.98 / LN_2, 1e-15));
        let t = TangentLine::at(1.0, 0.7).unwrap();
        assert!(close(t.a, 1.0, 1e-15));
        assert!(close(t.b, 0.7 / (2.0 * LN_2), 1e-15));
        assert!(TangentLine::at_ln(1.0, 0.98).is_err());
        assert!(TangentLine::at_ln(2.0, 0.98).is_err());
    }

    #[test]
    fn tangent_touches_and_supports() {
        let lambda = 0.98;
        for i in 1..200 {
            let x0 = -(i as f64) * 0.37;
            let t = TangentLine::at_ln(x0, lambda).unwrap();
            let curve = |x: f64| lambda * lattice_rate_ln(x);
            assert!(close(t.value_at_ln(x0), curve(x0), 1e-12));
            for dx in [-LN_2, LN_2] {
                assert!(t.value_at_ln(x0 + dx) < curve(x0 + dx));
            }
        }
    }

    #[test]
    fn region_examples() {
        let f = region_residual(-10.0, 4.0, 0.98).unwrap();
        let expected = (-2f64).exp() * 11.0 + 4.0 * 0.98 * 11.0 / 4.0 - 8.0;
        assert!(close(f, expected, 1e-14));
        assert!((f - 4.269).abs() < 1e-3);
        assert_eq!(region_residual(-10.0, 400.0, 0.98).unwrap(), f64::INFINITY);
        assert!(region_residual(2.0, 4.0, 0.98).is_err());
        assert!(region_residual(-2.0, 0.0, 0.98).is_err());
    }

    #[test]
    fn tau_window_consistency() {
        let lambda = 0.98;
        // Interior point: x = -1000, y = 493.
        let (lo, hi) = tau_window(-1000.0, 493.0, lambda).unwrap();
        assert!(lo < hi);
        assert!(region_residual(-1000.0, 493.0, lambda).unwrap() < 0.0);
        // Infeasible point.
        let (lo, hi) = tau_window(-10.0, 4.0, lambda).unwrap();
        assert!(lo > hi);
        // Boundary: solve F = 0 in y at x = -1000 by bisection.
        let (mut a, mut b) = (493.0, 499.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if region_residual(-1000.0, m, lambda).unwrap() <= 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        let (lo, hi) = tau_window(-1000.0, a, lambda).unwrap();
        assert!((lo - hi).abs() < 1e-6);
    }

    #[test]
    fn envelope_examples() {
        let p = envelope_point(-9.0, -5.0).unwrap();
        let tau = 10.0 * (-5f64).exp() / 8.0;
        assert!(close(p.rate, 0.9 * (1.0 - tau) * 2.0 / LN_2, 1e-14));
        assert!((p.rate - 2.575).abs() < 1e-3);
        assert!(envelope_point(-9.0, -60.0).is_err());
        // Vanishing tau.
        let p = envelope_point(-200.0, -40.0).unwrap();
        let limit = (1.0 - 1.0 / 201.0) * 80.0 / LN_2;
        assert!(close(p.rate, limit, 1e-12));
        assert!(envelope_point(-9.0, 5.0).is_err());
        assert!(envelope_point(1.0, -5.0).is_err());
    }

    #[test]
    fn envelope_slope_matches_finite_difference() {
        for &(x, c) in &[(-9.0, -5.0), (-300.0, -8.0), (-600.0, -9.5)] {
            let h = 1e-5;
            let fd = (envelope_point(x + h, c).unwrap().rate
                - envelope_point(x - h, c).unwrap().rate)
                / (2.0 * h);
            assert!(close(envelope_slope(x, c).unwrap(), fd, 1e-6));
        }
    }

    #[test]
    fn dominance_and_gap() {
        for i in 1..10_000 {
            let rho = 4.0 * i as f64 / 10_000.0;
            let x = rho.ln();
            let rs = shannon_rate_ln(x).unwrap();
            let rl = lattice_rate_ln(x);
            assert!(rs >= rl);
            let gap = -(1.0 - rho / 4.0).log2() / 2.0;
            assert!((rs - rl - gap).abs() <= 1e-12 * gap.max(1.0));
        }
    }

    #[test]
    fn explicit_lattice_threshold() {
        let x130 = -130.0 * LN_2;
        assert!(explicit_lattice_margin_ln(x130, 0.98).unwrap().abs() < 1e-12);
        assert!(explicit_lattice_margin_ln(x130 - 1.0, 0.98).unwrap() > 0.0);
        assert!(explicit_lattice_margin_ln(-129.0 * LN_2, 0.98).unwrap() < -1e-3);
    }

    #[test]
    fn curve_kind_parsing() {
        for k in CurveKind::ALL {
            assert_eq!(k.name().parse::<CurveKind>().unwrap(), k);
        }
        assert_eq!("tvz".parse::<CurveKind>().unwrap(), CurveKind::TvzLine);
        assert_eq!(
            "lattice-shifted".parse::<CurveKind>().unwrap(),
            CurveKind::LatticeShifted
        );
        assert!(matches!("nope".parse::<CurveKind>(), Err(Error::Usage(_))));
    }

    #[test]
    fn emit_examples() {
        let pts = emit_curve(CurveKind::Shannon, &CurveParams::default(), -5.0, 0.0, 6).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[5].x, 0.0);
        assert!((pts[5].rate - 0.20752).abs() < 1e-5);

        let x = -2.0 * LN_2;
        let pts = emit_curve(CurveKind::Lattice, &CurveParams::default(), x, x, 1).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(close(pts[0].rho().unwrap(), 0.25, 1e-15));
        assert!(close(pts[0].rate, 1.0, 1e-15));

        let params = CurveParams {
            c: Some(-9.0),
            ..Default::default()
        };
        let pts = emit_curve(CurveKind::Envelope, &params, -1000.0, -300.0, 200).unwrap();
        assert_eq!(pts.len(), 200);
        assert!(pts.windows(2).all(|w| w[1].rate < w[0].rate));

        assert!(emit_curve(CurveKind::TvzLine, &CurveParams::default(), -5.0, 0.0, 3).is_err());
        assert!(emit_curve(CurveKind::Shannon, &CurveParams::default(), 0.0, -5.0, 3).is_err());
    }

    #[test]
    fn rho_blank_below_guard() {
        let p = BoundPoint {
            x: -800.0,
            rate: 1.0,
        };
        assert_eq!(p.rho(), None);
        let p = BoundPoint {
            x: -10.0,
            rate: 1.0,
        };
        assert!(p.rho().is_some());
    }
}

//! Alphabet embedding, Euclidean and Lee weights on `Z_q^n`, and the Yaglom
//! lift from a ball in `R^n` to a sphere in `R^(n+1)`.
//!
//! Distances on words are always *squared* Euclidean distances and are exact
//! integers. Only the lift itself works in floating point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Relative tolerance used when checking that a point lies in the lifting ball.
pub const BALL_TOLERANCE: f64 = 1e-9;

/// `Z_q` placed on the real line as a set of `q` points symmetric about 0.
///
/// Odd `q = 2s+1` uses `{-s, ..., s}`. Even `q = 2s+2` uses the half-integers
/// `{-s-1/2, ..., s+1/2}`, i.e. the natural representatives `{-s, ..., s+1}`
/// shifted by `-1/2`. Points are stored doubled so that both cases are
/// integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constellation {
    q: u32,
    s: u32,
    doubled_points: Vec<i64>,
}

impl Constellation {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(domain!("alphabet size q = {q} must be at least 2"));
        }
        let s = if q % 2 == 1 { (q - 1) / 2 } else { (q - 2) / 2 };
        let doubled_points = (0..q)
            .map(|r| {
                let r = i64::from(r);
                let q = i64::from(q);
                if q % 2 == 1 {
                    let c = if r <= i64::from(s) { r } else { r - q };
                    2 * c
                } else {
                    let c = if r <= i64::from(s) + 1 { r } else { r - q };
                    2 * c - 1
                }
            })
            .collect();
        Ok(Self {
            q,
            s,
            doubled_points,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_odd(&self) -> bool {
        self.q % 2 == 1
    }

    /// Real-line representative of residue `r`.
    pub fn point(&self, r: u32) -> f64 {
        self.doubled_points[r as usize] as f64 / 2.0
    }

    /// Twice the representative of each residue, in residue order.
    pub fn doubled_points(&self) -> &[i64] {
        &self.doubled_points
    }

    /// `4a`, where `a = s^2` for odd `q` and `a = (s + 1/2)^2` for even `q`.
    pub fn a_quarters(&self) -> u64 {
        let s = u64::from(self.s);
        if self.is_odd() {
            4 * s * s
        } else {
            (2 * s + 1) * (2 * s + 1)
        }
    }

    /// Normalisation constant `a`: the largest squared representative.
    pub fn a(&self) -> f64 {
        self.a_quarters() as f64 / 4.0
    }

    /// Magnitude of the centered representative of `r`, i.e. `min(r, q - r)`.
    pub fn lee_residue(&self, r: u32) -> u64 {
        u64::from(r.min(self.q - r))
    }

    /// Per-coordinate Euclidean weight `min(r^2, (q - r)^2)`.
    pub fn euclid_residue(&self, r: u32) -> u64 {
        let m = self.lee_residue(r);
        m * m
    }

    /// Largest per-coordinate Euclidean weight, `floor(q/2)^2`.
    pub fn max_weight(&self) -> u64 {
        let h = u64::from(self.q / 2);
        h * h
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.residues().iter().position(|&r| r >= self.q) {
            Some(i) => Err(domain!(
                "residue {} at position {i} is out of range for q = {}",
                w.residues()[i],
                self.q
            )),
            None => Ok(()),
        }
    }
}

/// An element of `Z_q^n`, stored as residues in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(residues: Vec<u32>) -> Self {
        Self(residues)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn residues(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    /// Coordinate-wise `self - other (mod q)`.
    pub fn sub_mod(&self, other: &Word, q: u32) -> Result<Word> {
        if self.len() != other.len() {
            return Err(domain!(
                "length mismatch: {} vs {}",
                self.len(),
                other.len()
            ));
        }
        Ok(Word(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| (a + q - b) % q)
                .collect(),
        ))
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// A point of `R^n` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPoint(Vec<f64>);

impl RealPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(domain!("coordinate {i} is not finite"));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn sq_distance(&self, other: &RealPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> RealPoint {
        RealPoint(self.0.iter().map(|c| c * factor).collect())
    }
}

/// The map `phi`: each residue goes to its constellation representative.
pub fn embed(c: &Constellation, w: &Word) -> Result<RealPoint> {
    c.check(w)?;
    Ok(RealPoint(
        w.residues().iter().map(|&r| c.point(r)).collect(),
    ))
}

/// Exact `4 * |phi(w)|^2`; always at most `n * 4a`.
pub fn embedded_norm_sq_quarters(c: &Constellation, w: &Word) -> Result<u64> {
    c.check(w)?;
    Ok(w.residues()
        .iter()
        .map(|&r| {
            let d = c.doubled_points()[r as usize];
            (d * d) as u64
        })
        .sum())
}

pub fn euclid_weight(c: &Constellation, w: &Word) -> Result<u64> {
    c.check(w)?;
    Ok(w.residues().iter().map(|&r| c.euclid_residue(r)).sum())
}

pub fn lee_weight(c: &Constellation, w: &Word) -> Result<u64> {
    c.check(w)?;
    Ok(w.residues().iter().map(|&r| c.lee_residue(r)).sum())
}

/// Squared Euclidean distance `d_E(u, v) = w_E(u - v)`.
pub fn sq_euclid_distance(c: &Constellation, u: &Word, v: &Word) -> Result<u64> {
    c.check(u)?;
    c.check(v)?;
    euclid_weight(c, &u.sub_mod(v, c.q())?)
}

/// Yaglom lift `x -> (x, sqrt(R^2 - x.x))` from the ball `B(n, R)` onto the
/// sphere `S(n, R)` in dimension `n + 1`. Distances never decrease.
pub fn yaglom_lift(p: &RealPoint, radius: f64) -> Result<RealPoint> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(domain!(
            "lift radius must be positive and finite, got {radius}"
        ));
    }
    let r2 = radius * radius;
    let norm_sq = p.norm_sq();
    if norm_sq > r2 * (1.0 + BALL_TOLERANCE) {
        return Err(domain!(
            "point lies outside the ball of radius {radius}: |x|^2 exceeds R^2 by {}",
            norm_sq - r2
        ));
    }
    let mut coords = p.coords().to_vec();
    coords.push((r2 - norm_sq).max(0.0).sqrt());
    Ok(RealPoint(coords))
}

/// Exact minimum pairwise squared distance of a point set.
pub fn min_sq_distance(points: &[RealPoint]) -> Result<f64> {
    check_pair_count(points.len())?;
    let dim = points[0].dimension();
    if points.iter().any(|p| p.dimension() != dim) {
        return Err(domain!("points have differing dimensions"));
    }
    Ok((0..points.len())
        .into_par_iter()
        .map(|i| {
            points[i + 1..]
                .iter()
                .map(|p| points[i].sq_distance(p))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min))
}

/// Exact minimum pairwise squared Euclidean distance of a set of words.
pub fn min_sq_distance_words(c: &Constellation, words: &[Word]) -> Result<u64> {
    check_pair_count(words.len())?;
    let n = words[0].len();
    for w in words {
        if w.len() != n {
            return Err(domain!("words have differing lengths"));
        }
        c.check(w)?;
    }
    let q = c.q();
    Ok((0..words.len())
        .into_par_iter()
        .map(|i| {
            let u = words[i].residues();
            words[i + 1..]
                .iter()
                .map(|v| {
                    u.iter()
                        .zip(v.residues())
                        .map(|(&a, &b)| c.euclid_residue((a + q - b) % q))
                        .sum::<u64>()
                })
                .min()
                .unwrap_or(u64::MAX)
        })
        .min()
        .unwrap_or(u64::MAX))
}

fn check_pair_count(len: usize) -> Result<()> {
    if len < 2 {
        return Err(domain!("need at least 2 elements, got {len}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec())
    }

    #[test]
    fn constellation_points() {
        let c5 = Constellation::new(5).unwrap();
        assert_eq!(c5.s(), 2);
        assert_eq!(c5.a(), 4.0);
        let c4 = Constellation::new(4).unwrap();
        assert_eq!(c4.s(), 1);
        assert_eq!(c4.a(), 2.25);
        let c2 = Constellation::new(2).unwrap();
        assert_eq!(c2.a(), 0.25);
        assert!(Constellation::new(1).is_err());

        for q in 2..=12 {
            let c = Constellation::new(q).unwrap();
            let mut pts: Vec<i64> = c.doubled_points().to_vec();
            pts.sort_unstable();
            pts.dedup();
            assert_eq!(pts.len(), q as usize);
            let mirrored: Vec<i64> = pts.iter().rev().map(|p| -p).collect();
            assert_eq!(pts, mirrored, "q = {q} not symmetric");
            let max_sq = pts.iter().map(|p| (p * p) as u64).max().unwrap();
            assert_eq!(max_sq, c.a_quarters());
        }
    }

    #[test]
    fn embed_examples() {
        let c5 = Constellation::new(5).unwrap();
        assert_eq!(embed(&c5, &w(&[0])).unwrap().coords(), &[0.0]);
        assert_eq!(embed(&c5, &w(&[3])).unwrap().coords(), &[-2.0]);
        let c4 = Constellation::new(4).unwrap();
        assert_eq!(
            embed(&c4, &w(&[0, 1, 2, 3])).unwrap().coords(),
            &[-0.5, 0.5, 1.5, -1.5]
        );
        assert!(matches!(embed(&c5, &w(&[5])), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn weight_examples() {
        let c5 = Constellation::new(5).unwrap();
        assert_eq!(euclid_weight(&c5, &w(&[2])).unwrap(), 4);
        assert_eq!(euclid_weight(&c5, &w(&[1, 3])).unwrap(), 5);
        let c4 = Constellation::new(4).unwrap();
        assert_eq!(euclid_weight(&c4, &w(&[2])).unwrap(), 4);

        let c7 = Constellation::new(7).unwrap();
        assert_eq!(lee_weight(&c7, &w(&[5])).unwrap(), 2);
        assert_eq!(lee_weight(&c7, &w(&[1, 5, 3])).unwrap(), 6);
        for q in 2..9 {
            let c = Constellation::new(q).unwrap();
            assert_eq!(lee_weight(&c, &Word::zero(4)).unwrap(), 0);
        }
    }

    #[test]
    fn distance_examples() {
        let c5 = Constellation::new(5).unwrap();
        assert_eq!(
            sq_euclid_distance(&c5, &w(&[0, 0]), &w(&[0, 0])).unwrap(),
            0
        );
        // (1-4, 2-0) = (2, 2) mod 5, weight 4 + 4.
        assert_eq!(
            sq_euclid_distance(&c5, &w(&[1, 2]), &w(&[4, 0])).unwrap(),
            8
        );
        let c4 = Constellation::new(4).unwrap();
        assert_eq!(sq_euclid_distance(&c4, &w(&[0]), &w(&[2])).unwrap(), 4);
        assert!(sq_euclid_distance(&c5, &w(&[0]), &w(&[0, 1])).is_err());
    }

    #[test]
    fn lift_examples() {
        let p = RealPoint::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(yaglom_lift(&p, 3.0).unwrap().coords(), &[0.0, 0.0, 3.0]);
        let p = RealPoint::new(vec![1.0]).unwrap();
        assert_eq!(yaglom_lift(&p, 1.0).unwrap().coords(), &[1.0, 0.0]);

        let a = RealPoint::new(vec![0.0]).unwrap();
        let b = RealPoint::new(vec![1.0]).unwrap();
        let la = yaglom_lift(&a, 1.0).unwrap();
        let lb = yaglom_lift(&b, 1.0).unwrap();
        assert!((la.sq_distance(&lb) - 2.0).abs() < 1e-15);
        assert!(la.sq_distance(&lb) >= a.sq_distance(&b));

        let outside = RealPoint::new(vec![2.0]).unwrap();
        match yaglom_lift(&outside, 1.0) {
            Err(crate::Error::Domain(msg)) => assert!(msg.contains("exceeds")),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn min_distance_examples() {
        let pts: Vec<RealPoint> = [0.0, 1.0, 3.0]
            .iter()
            .map(|&x| RealPoint::new(vec![x]).unwrap())
            .collect();
        assert_eq!(min_sq_distance(&pts).unwrap(), 1.0);
        assert!(min_sq_distance(&pts[..1]).is_err());

        let c2 = Constellation::new(2).unwrap();
        let words: Vec<Word> = (0..8u32)
            .map(|i| w(&[i >> 2 & 1, i >> 1 & 1, i & 1]))
            .collect();
        assert_eq!(min_sq_distance_words(&c2, &words).unwrap(), 1);
    }

    /// Exhaustive over q <= 8, n <= 3: translation invariance, Lee <= Euclid,
    /// and the embedded distance dominating the code distance.
    #[test]
    fn exhaustive_small_alphabets() {
        for q in 2..=8u32 {
            let c = Constellation::new(q).unwrap();
            for n in 1..=3usize {
                let total = q.pow(n as u32);
                let words: Vec<Word> = (0..total)
                    .map(|mut i| {
                        let mut v = vec![0; n];
                        for slot in v.iter_mut().rev() {
                            *slot = i % q;
                            i /= q;
                        }
                        Word::new(v)
                    })
                    .collect();
                for u in &words {
                    let lw = lee_weight(&c, u).unwrap();
                    let ew = euclid_weight(&c, u).unwrap();
                    assert!(lw <= ew);
                    let small = u.residues().iter().all(|&r| c.lee_residue(r) <= 1);
                    assert_eq!(lw == ew, small);
                    assert!(embedded_norm_sq_quarters(&c, u).unwrap() <= n as u64 * c.a_quarters());
                    for v in &words {
                        let d = sq_euclid_distance(&c, u, v).unwrap();
                        assert_eq!(d, euclid_weight(&c, &u.sub_mod(v, q).unwrap()).unwrap());
                        assert_eq!(d, sq_euclid_distance(&c, v, u).unwrap());
                        assert_eq!(d == 0, u == v);
                        let pu = embed(&c, u).unwrap();
                        let pv = embed(&c, v).unwrap();
                        assert!(pu.sq_distance(&pv) >= d as f64);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn lift_preserves_norm_and_expands(
            a in proptest::collection::vec(-1.0f64..1.0, 4),
            b in proptest::collection::vec(-1.0f64..1.0, 4),
            radius in 2.0f64..50.0,
        ) {
            let pa = RealPoint::new(a).unwrap();
            let pb = RealPoint::new(b).unwrap();
            let la = yaglom_lift(&pa, radius).unwrap();
            let lb = yaglom_lift(&pb, radius).unwrap();
            let r2 = radius * radius;
            prop_assert!((la.norm_sq() - r2).abs() <= 1e-9 * r2);
            prop_assert!(la.sq_distance(&lb) >= pa.sq_distance(&pb) - 1e-12);
        }
    }
}

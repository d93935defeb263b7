//! Finished spherical codes: embed, Yaglom-lift onto the sphere of radius
//! `sqrt(n a)`, then rescale to the unit sphere.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::euclid::{embed, min_sq_distance, yaglom_lift, Constellation, RealPoint, Word};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCodeResult {
    /// Unit vectors in dimension `n + 1`.
    pub points: Vec<RealPoint>,
    /// Measured squared minimum distance; `None` for a single point.
    pub rho: Option<f64>,
    /// `log2 |X| / (n + 1)`.
    pub binary_rate: f64,
    /// `d_floor / (n a)`, the distance promised by the word-level floor.
    pub guaranteed_rho: f64,
}

impl SphericalCodeResult {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, RealPoint::dimension)
    }
}

pub fn to_spherical(
    c: &Constellation,
    words: &[Word],
    d_floor: u64,
) -> Result<SphericalCodeResult> {
    let n = words
        .first()
        .ok_or_else(|| domain!("word set is empty"))?
        .len();
    if n == 0 {
        return Err(domain!("words must have positive length"));
    }
    let radius_sq = n as f64 * c.a();
    let radius = radius_sq.sqrt();
    let points = words
        .iter()
        .map(|w| {
            if w.len() != n {
                return Err(domain!("words have differing lengths"));
            }
            Ok(yaglom_lift(&embed(c, w)?, radius)?.scaled(1.0 / radius))
        })
        .collect::<Result<Vec<_>>>()?;
    let rho = if points.len() > 1 {
        Some(min_sq_distance(&points)?)
    } else {
        None
    };
    Ok(SphericalCodeResult {
        binary_rate: (points.len() as f64).log2() / (n + 1) as f64,
        guaranteed_rho: d_floor as f64 / radius_sq,
        points,
        rho,
    })
}

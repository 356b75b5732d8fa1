//! Flat periodic-box spacetime: metric bookkeeping, points, derivative labels.
//!
//! The metric is mostly-plus Minkowski, diag(-1, +1, ..., +1), on a spatial
//! d-torus of circumference `box_length`. Curvature vanishes identically
//! (R = 0, Einstein tensor = 0), which is what makes the closed-form mode
//! functions in [`crate::modes`] exact solutions.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Spatial d-torus with a fixed mostly-plus flat metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxGeometry {
    /// Number of spatial dimensions, d >= 1.
    pub spatial_dimension: usize,
    /// Circumference of the periodic box in every spatial direction.
    pub box_length: f64,
}

impl BoxGeometry {
    pub fn new(spatial_dimension: usize, box_length: f64) -> Result<Self> {
        if spatial_dimension < 1 {
            return Err(CoreError::BadGeometry("spatial dimension must be >= 1".into()));
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(CoreError::BadGeometry(format!(
                "box length must be positive and finite, got {box_length}"
            )));
        }
        Ok(Self { spatial_dimension, box_length })
    }

    /// Spacetime dimension d + 1.
    pub fn spacetime_dimension(&self) -> usize {
        self.spatial_dimension + 1
    }

    /// Diagonal entry of g^{mu nu} (equal to g_{mu nu}): -1 for time, +1 for space.
    pub fn metric_sign(&self, index: usize) -> f64 {
        if index == 0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Spatial volume L^d of a constant-time slice.
    pub fn slice_volume(&self) -> f64 {
        self.box_length.powi(self.spatial_dimension as i32)
    }

    pub fn check_component(&self, index: usize) -> Result<()> {
        if index >= self.spacetime_dimension() {
            return Err(CoreError::BadComponent { index, dim: self.spacetime_dimension() });
        }
        Ok(())
    }
}

/// A point (t, x) on the box spacetime. Spatial coordinates are understood
/// modulo the box length; we keep them as given since the mode functions are
/// periodic anyway.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: Vec<f64>,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: Vec<f64>) -> Self {
        Self { t, x }
    }

    /// Convenience for d = 1.
    pub fn one_d(t: f64, x: f64) -> Self {
        Self { t, x: vec![x] }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.iter().all(|c| c.is_finite())
    }

    /// Stable byte key for hashing/memoization of float coordinates.
    pub fn bit_key(&self) -> Vec<u64> {
        let mut key = Vec::with_capacity(1 + self.x.len());
        key.push(self.t.to_bits());
        key.extend(self.x.iter().map(|c| c.to_bits()));
        key
    }
}

/// Derivative label applied to a field factor or a mode function.
///
/// Coordinate index 0 is time; 1..=d are the spatial directions. Mixed second
/// derivatives are stored with the index pair sorted, since partials commute.
/// The d'Alembertian keeps its own tag: on a corrupted (off-shell) mode it is
/// not reducible to a mass term, which the residual checks rely on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Derivative {
    None,
    First(usize),
    Second(usize, usize),
    Dalembertian,
}

impl Derivative {
    /// Canonicalize mixed partials: Second(b, a) == Second(a, b).
    pub fn second(a: usize, b: usize) -> Self {
        if a <= b {
            Derivative::Second(a, b)
        } else {
            Derivative::Second(b, a)
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Derivative::None => 0,
            Derivative::First(_) => 1,
            Derivative::Second(_, _) | Derivative::Dalembertian => 2,
        }
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coordinate(&self) -> Option<usize> {
        match self {
            Derivative::None | Derivative::Dalembertian => None,
            Derivative::First(a) => Some(*a),
            Derivative::Second(a, b) => Some((*a).max(*b)),
        }
    }
}

impl std::fmt::Display for Derivative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn coord(i: usize) -> String {
            if i == 0 {
                "t".to_string()
            } else {
                format!("x{i}")
            }
        }
        match self {
            Derivative::None => write!(f, ""),
            Derivative::First(a) => write!(f, "d{}", coord(*a)),
            Derivative::Second(a, b) => write!(f, "d{}d{}", coord(*a), coord(*b)),
            Derivative::Dalembertian => write!(f, "box"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_rejects_bad_input() {
        assert!(BoxGeometry::new(0, 1.0).is_err());
        assert!(BoxGeometry::new(1, 0.0).is_err());
        assert!(BoxGeometry::new(1, -2.0).is_err());
        assert!(BoxGeometry::new(1, f64::NAN).is_err());
        assert!(BoxGeometry::new(2, 6.0).is_ok());
    }

    #[test]
    fn metric_is_mostly_plus() {
        let g = BoxGeometry::new(3, 1.0).unwrap();
        assert_eq!(g.metric_sign(0), -1.0);
        for j in 1..=3 {
            assert_eq!(g.metric_sign(j), 1.0);
        }
        assert_eq!(g.spacetime_dimension(), 4);
    }

    #[test]
    fn second_derivative_canonical_order() {
        assert_eq!(Derivative::second(1, 0), Derivative::second(0, 1));
        assert_eq!(Derivative::second(1, 0), Derivative::Second(0, 1));
        assert_eq!(Derivative::second(0, 1).order(), 2);
        assert_eq!(Derivative::Dalembertian.order(), 2);
        assert_eq!(Derivative::None.order(), 0);
    }

    #[test]
    fn component_bounds() {
        let g = BoxGeometry::new(1, 1.0).unwrap();
        assert!(g.check_component(0).is_ok());
        assert!(g.check_component(1).is_ok());
        assert!(g.check_component(2).is_err());
    }
}

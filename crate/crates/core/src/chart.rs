//! Coordinate charts and points.

use crate::error::{GeomError, Result};
use crate::rng::Lcg64;
use std::sync::Arc;

/// A tuple of chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

impl From<&[f64]> for Point {
    fn from(coords: &[f64]) -> Self {
        Point::new(coords.to_vec())
    }
}

type Validity = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A coordinate chart: dimension, a sampling box per coordinate, and a
/// validity predicate (e.g. x0 > 0).
#[derive(Clone)]
pub struct Chart {
    pub name: String,
    pub dim: usize,
    /// Per-coordinate sampling bounds; kept clear of chart degeneracies.
    pub bounds: Vec<(f64, f64)>,
    validity: Validity,
}

impl std::fmt::Debug for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Chart")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("bounds", &self.bounds)
            .finish()
    }
}

impl Chart {
    pub fn new(
        name: impl Into<String>,
        bounds: Vec<(f64, f64)>,
        validity: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Arc<Self> {
        Arc::new(Self {
            name: name.into(),
            dim: bounds.len(),
            bounds,
            validity: Arc::new(validity),
        })
    }

    /// Whole of R^dim with a box for sampling.
    pub fn unrestricted(name: impl Into<String>, dim: usize, half_width: f64) -> Arc<Self> {
        Chart::new(name, vec![(-half_width, half_width); dim], |_| true)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim && (self.validity)(&p.coords)
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(GeomError::OutsideDomain {
                chart: self.name.clone(),
                point: p.coords.clone(),
            })
        }
    }

    /// Uniform sample inside the bounds box, rejecting invalid points.
    pub fn sample(&self, rng: &mut Lcg64) -> Point {
        for _ in 0..1000 {
            let coords: Vec<f64> = self.bounds.iter().map(|&(a, b)| rng.range(a, b)).collect();
            let p = Point::new(coords);
            if self.contains(&p) {
                return p;
            }
        }
        panic!("chart `{}`: sampling box rejects every point", self.name);
    }

    pub fn sample_many(&self, rng: &mut Lcg64, n: usize) -> Vec<Point> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_enforced() {
        let c = Chart::new("half", vec![(0.1, 2.0); 2], |x| x[0] > 0.0);
        assert!(c.contains(&Point::new(vec![1.0, 0.5])));
        assert!(!c.contains(&Point::new(vec![-1.0, 0.5])));
        assert!(c.check(&Point::new(vec![-1.0, 0.5])).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let c = Chart::unrestricted("r3", 3, 2.0);
        assert!(!c.contains(&Point::new(vec![0.0, 0.0])));
    }

    #[test]
    fn samples_respect_bounds() {
        let c = Chart::new("pos", vec![(0.1, 2.0), (-2.0, 2.0)], |x| x[0] > 0.0);
        let mut rng = Lcg64::new(0);
        for p in c.sample_many(&mut rng, 200) {
            assert!(c.contains(&p));
            assert!(p.coords[0] >= 0.1 && p.coords[0] <= 2.0);
        }
    }
}

//! Tensor fields on a chart.
//!
//! A field is a list of component functions evaluated in jet arithmetic, so
//! every evaluation also yields exact first and second partial derivatives
//! of every component. Components are stored row-major with upper indices
//! before lower ones: a (1,1) field `phi` stores `phi^i_j` at `i*dim + j`.

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::jet::Jet2;
use nalgebra::DMatrix;
use std::sync::Arc;

pub type ScalarJetFn = Arc<dyn Fn(&[Jet2]) -> Jet2 + Send + Sync>;

#[derive(Clone)]
pub struct TensorField {
    pub chart: Arc<Chart>,
    /// (upper, lower) index counts.
    pub variance: (usize, usize),
    comps: Arc<Vec<ScalarJetFn>>,
}

/// Seed the chart coordinates of `p` as jet variables.
pub fn seed_point(p: &Point) -> Vec<Jet2> {
    let n = p.dim();
    (0..n).map(|i| Jet2::variable(n, i, p.coords[i])).collect()
}

/// Constant jet matching the dimension of the coordinate seeds.
pub fn cst(x: &[Jet2], v: f64) -> Jet2 {
    Jet2::constant_like(&x[0], v)
}

impl TensorField {
    pub fn new(chart: Arc<Chart>, variance: (usize, usize), comps: Vec<ScalarJetFn>) -> Self {
        let rank = variance.0 + variance.1;
        assert_eq!(
            comps.len(),
            chart.dim.pow(rank as u32),
            "component count must be dim^rank"
        );
        Self {
            chart,
            variance,
            comps: Arc::new(comps),
        }
    }

    pub fn dim(&self) -> usize {
        self.chart.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.0 + self.variance.1
    }

    /// Constant scalar field.
    pub fn scalar_constant(chart: Arc<Chart>, v: f64) -> Self {
        Self::new(
            chart,
            (0, 0),
            vec![Arc::new(move |x: &[Jet2]| cst(x, v)) as ScalarJetFn],
        )
    }

    /// Vector field with constant coordinate components.
    pub fn constant_vector(chart: Arc<Chart>, comps: &[f64]) -> Self {
        assert_eq!(comps.len(), chart.dim);
        let fns = comps
            .iter()
            .map(|&v| Arc::new(move |x: &[Jet2]| cst(x, v)) as ScalarJetFn)
            .collect();
        Self::new(chart, (1, 0), fns)
    }

    /// The coordinate vector field `∂/∂x^i`.
    pub fn coordinate_vector(chart: Arc<Chart>, i: usize) -> Self {
        let mut comps = vec![0.0; chart.dim];
        comps[i] = 1.0;
        Self::constant_vector(chart, &comps)
    }

    /// (1,1) field with constant matrix components m[i][j] = T^i_j.
    pub fn constant_endomorphism(chart: Arc<Chart>, m: &[Vec<f64>]) -> Self {
        let d = chart.dim;
        let mut fns: Vec<ScalarJetFn> = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let v = m[i][j];
                fns.push(Arc::new(move |x: &[Jet2]| cst(x, v)));
            }
        }
        Self::new(chart, (1, 1), fns)
    }

    /// Jet values of every component at `p` (domain-checked).
    pub fn jet_eval(&self, p: &Point) -> Result<Vec<Jet2>> {
        self.chart.check(p)?;
        let seeds = seed_point(p);
        Ok(self.comps.iter().map(|f| f(&seeds)).collect())
    }

    /// Plain component values at `p`.
    pub fn eval(&self, p: &Point) -> Result<Vec<f64>> {
        Ok(self.jet_eval(p)?.into_iter().map(|j| j.value).collect())
    }

    pub fn comp_fn(&self, flat: usize) -> ScalarJetFn {
        self.comps[flat].clone()
    }

    // ---- pointwise field algebra (closures compose in jet arithmetic) ----

    pub fn add(&self, other: &TensorField) -> TensorField {
        assert_eq!(self.variance, other.variance);
        let fns = (0..self.comps.len())
            .map(|k| {
                let a = self.comps[k].clone();
                let b = other.comps[k].clone();
                Arc::new(move |x: &[Jet2]| a(x) + b(x)) as ScalarJetFn
            })
            .collect();
        TensorField::new(self.chart.clone(), self.variance, fns)
    }

    pub fn sub(&self, other: &TensorField) -> TensorField {
        assert_eq!(self.variance, other.variance);
        let fns = (0..self.comps.len())
            .map(|k| {
                let a = self.comps[k].clone();
                let b = other.comps[k].clone();
                Arc::new(move |x: &[Jet2]| a(x) - b(x)) as ScalarJetFn
            })
            .collect();
        TensorField::new(self.chart.clone(), self.variance, fns)
    }

    pub fn scale(&self, c: f64) -> TensorField {
        let fns = (0..self.comps.len())
            .map(|k| {
                let a = self.comps[k].clone();
                Arc::new(move |x: &[Jet2]| a(x).scale(c)) as ScalarJetFn
            })
            .collect();
        TensorField::new(self.chart.clone(), self.variance, fns)
    }

    /// Multiply every component by a scalar field.
    pub fn scale_field(&self, f: &TensorField) -> TensorField {
        assert_eq!(f.variance, (0, 0));
        let fns = (0..self.comps.len())
            .map(|k| {
                let a = self.comps[k].clone();
                let s = f.comps[0].clone();
                Arc::new(move |x: &[Jet2]| a(x) * s(x)) as ScalarJetFn
            })
            .collect();
        TensorField::new(self.chart.clone(), self.variance, fns)
    }

    /// Apply a (1,1) field to a (1,0) field: (phi Y)^i = phi^i_j Y^j.
    pub fn apply_endo(phi: &TensorField, y: &TensorField) -> TensorField {
        assert_eq!(phi.variance, (1, 1));
        assert_eq!(y.variance, (1, 0));
        let d = phi.dim();
        let fns = (0..d)
            .map(|i| {
                let phi = phi.clone();
                let y = y.clone();
                Arc::new(move |x: &[Jet2]| {
                    let mut acc = cst(x, 0.0);
                    for j in 0..d {
                        acc = acc + phi.comps[i * d + j](x) * y.comps[j](x);
                    }
                    acc
                }) as ScalarJetFn
            })
            .collect();
        TensorField::new(phi.chart.clone(), (1, 0), fns)
    }

    /// Compose two (1,1) fields: (phi ∘ psi)^i_j = phi^i_a psi^a_j.
    pub fn compose_endo(phi: &TensorField, psi: &TensorField) -> TensorField {
        assert_eq!(phi.variance, (1, 1));
        assert_eq!(psi.variance, (1, 1));
        let d = phi.dim();
        let mut fns: Vec<ScalarJetFn> = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let phi = phi.clone();
                let psi = psi.clone();
                fns.push(Arc::new(move |x: &[Jet2]| {
                    let mut acc = cst(x, 0.0);
                    for a in 0..d {
                        acc = acc + phi.comps[i * d + a](x) * psi.comps[a * d + j](x);
                    }
                    acc
                }));
            }
        }
        TensorField::new(phi.chart.clone(), (1, 1), fns)
    }

    /// Pair a (0,1) field with a (1,0) field: eta(Y) as a scalar field.
    pub fn pair(eta: &TensorField, y: &TensorField) -> TensorField {
        assert_eq!(eta.variance, (0, 1));
        assert_eq!(y.variance, (1, 0));
        let d = eta.dim();
        let eta = eta.clone();
        let y = y.clone();
        let f = Arc::new(move |x: &[Jet2]| {
            let mut acc = cst(x, 0.0);
            for j in 0..d {
                acc = acc + eta.comps[j](x) * y.comps[j](x);
            }
            acc
        }) as ScalarJetFn;
        TensorField::new(eta.chart.clone(), (0, 0), vec![f])
    }

    /// g(X, Y) as a scalar field for a (0,2) field g.
    pub fn metric_pair(g: &TensorField, xf: &TensorField, yf: &TensorField) -> TensorField {
        assert_eq!(g.variance, (0, 2));
        let d = g.dim();
        let g = g.clone();
        let xf = xf.clone();
        let yf = yf.clone();
        let f = Arc::new(move |x: &[Jet2]| {
            let mut acc = cst(x, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc = acc + g.comps[i * d + j](x) * xf.comps[i](x) * yf.comps[j](x);
                }
            }
            acc
        }) as ScalarJetFn;
        TensorField::new(g.chart.clone(), (0, 0), vec![f])
    }
}

/// A Riemannian metric: a symmetric positive-definite (0,2) field.
#[derive(Clone)]
pub struct MetricField {
    pub field: TensorField,
}

impl MetricField {
    pub fn new(field: TensorField) -> Self {
        assert_eq!(field.variance, (0, 2));
        Self { field }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.field.chart
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn matrix(&self, p: &Point) -> Result<DMatrix<f64>> {
        let v = self.field.eval(p)?;
        let d = self.dim();
        Ok(DMatrix::from_row_slice(d, d, &v))
    }

    /// Inverse metric; errors when the metric fails to be positive definite.
    pub fn inverse(&self, p: &Point) -> Result<DMatrix<f64>> {
        let m = self.matrix(p)?;
        let chol = nalgebra::Cholesky::new(m).ok_or_else(|| GeomError::DegenerateMetric {
            point: p.coords.clone(),
        })?;
        Ok(chol.inverse())
    }

    /// g(x, y) from component slices at a point.
    pub fn pair_values(&self, p: &Point, x: &[f64], y: &[f64]) -> Result<f64> {
        let m = self.matrix(p)?;
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += m[(i, j)] * x[i] * y[j];
            }
        }
        Ok(acc)
    }

    pub fn norm(&self, p: &Point, x: &[f64]) -> Result<f64> {
        Ok(self.pair_values(p, x, x)?.sqrt())
    }

    /// Symmetry / positive-definiteness audit at a point.
    pub fn validate_at(&self, p: &Point) -> Result<()> {
        let m = self.matrix(p)?;
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 {
                    return Err(GeomError::Structural(format!(
                        "metric not symmetric at {:?}: g[{i}{j}] != g[{j}{i}]",
                        p.coords
                    )));
                }
            }
        }
        self.inverse(p).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart5() -> Arc<Chart> {
        Chart::new(
            "r5+",
            vec![
                (0.1, 2.0),
                (-2.0, 2.0),
                (-2.0, 2.0),
                (-2.0, 2.0),
                (-2.0, 2.0),
            ],
            |x| x[0] > 0.0,
        )
    }

    fn conformal_metric(chart: Arc<Chart>) -> MetricField {
        // g_ij = delta_ij / x0^2
        let d = chart.dim;
        let mut fns: Vec<ScalarJetFn> = Vec::new();
        for i in 0..d {
            for j in 0..d {
                fns.push(if i == j {
                    Arc::new(|x: &[Jet2]| x[0].powi(-2))
                } else {
                    Arc::new(|x: &[Jet2]| cst(x, 0.0))
                });
            }
        }
        MetricField::new(TensorField::new(chart, (0, 2), fns))
    }

    #[test]
    fn eval_matches_jet_value_part() {
        let g = conformal_metric(chart5());
        let p = Point::new(vec![0.5, 1.0, -1.0, 0.3, 0.9]);
        let vals = g.field.eval(&p).unwrap();
        let jets = g.field.jet_eval(&p).unwrap();
        for (v, j) in vals.iter().zip(&jets) {
            assert!((v - j.value).abs() < 1e-14);
        }
        assert!((vals[0] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn domain_error_outside_chart() {
        let g = conformal_metric(chart5());
        let p = Point::new(vec![-0.5, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            g.field.eval(&p),
            Err(GeomError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn inverse_of_conformal_metric() {
        let g = conformal_metric(chart5());
        let p = Point::new(vec![2.0, 0.0, 0.0, 0.0, 0.0]);
        let inv = g.inverse(&p).unwrap();
        assert!((inv[(0, 0)] - 4.0).abs() < 1e-12);
        assert!(inv[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn apply_endo_contracts() {
        let chart = chart5();
        let mut m = vec![vec![0.0; 5]; 5];
        m[2][1] = 1.0; // e1 -> e2
        let phi = TensorField::constant_endomorphism(chart.clone(), &m);
        let y = TensorField::coordinate_vector(chart.clone(), 1);
        let v = TensorField::apply_endo(&phi, &y)
            .eval(&Point::new(vec![1.0, 0.0, 0.0, 0.0, 0.0]))
            .unwrap();
        assert_eq!(v, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn metric_pair_field_matches_values() {
        let g = conformal_metric(chart5());
        let p = Point::new(vec![0.7, 0.2, 0.0, -1.0, 0.5]);
        let x = TensorField::constant_vector(g.chart().clone(), &[1.0, 2.0, 0.0, 0.0, 0.0]);
        let y = TensorField::constant_vector(g.chart().clone(), &[0.0, 1.0, 0.0, 0.0, 1.0]);
        let s = TensorField::metric_pair(&g.field, &x, &y).eval(&p).unwrap()[0];
        let expect = g
            .pair_values(&p, &[1.0, 2.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0, 1.0])
            .unwrap();
        assert!((s - expect).abs() < 1e-14);
    }
}

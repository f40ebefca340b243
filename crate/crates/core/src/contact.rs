//! Almost contact metric structures and the Kenmotsu condition.

use crate::chart::{Chart, Point};
use crate::curvature::{christoffel, covariant_derivative_with, Christoffel};
use crate::error::{GeomError, Result};
use crate::field::{MetricField, TensorField};
use crate::form::KFormField;
use crate::report::{CheckReport, ReportBuilder};
use crate::rng::Lcg64;
use std::sync::Arc;

/// Shared sampling context for the pointwise verifiers.
pub struct Sampling<'a> {
    pub points: &'a [Point],
    /// Random vectors (or vector pairs) drawn per point, in addition to the
    /// normalized coordinate frame.
    pub n_vectors: usize,
    pub rng: &'a mut Lcg64,
    pub seed: u64,
}

impl<'a> Sampling<'a> {
    pub fn require_points(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(GeomError::Usage("empty point list".into()));
        }
        Ok(())
    }
}

/// Unit-g-norm vectors at `p`: the normalized coordinate frame followed by
/// `n_random` normalized random combinations.
pub fn sample_unit_vectors(
    g: &MetricField,
    p: &Point,
    rng: &mut Lcg64,
    n_random: usize,
) -> Result<Vec<Vec<f64>>> {
    let d = g.dim();
    let mut out = Vec::with_capacity(d + n_random);
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        let n = g.norm(p, &e)?;
        for x in &mut e {
            *x /= n;
        }
        out.push(e);
    }
    for _ in 0..n_random {
        let mut v = rng.unit_vector(d);
        let n = g.norm(p, &v)?;
        for x in &mut v {
            *x /= n;
        }
        out.push(v);
    }
    Ok(out)
}

/// The (φ, ξ, η, g) bundle on one chart of dimension 2n+1.
#[derive(Clone)]
pub struct AlmostContactMetricStructure {
    pub chart: Arc<Chart>,
    pub phi: TensorField,
    pub xi: TensorField,
    pub eta: TensorField,
    pub g: MetricField,
}

impl AlmostContactMetricStructure {
    pub fn new(
        chart: Arc<Chart>,
        phi: TensorField,
        xi: TensorField,
        eta: TensorField,
        g: MetricField,
    ) -> Self {
        assert_eq!(
            chart.dim % 2,
            1,
            "almost contact charts are odd-dimensional"
        );
        assert_eq!(phi.variance, (1, 1));
        assert_eq!(xi.variance, (1, 0));
        assert_eq!(eta.variance, (0, 1));
        Self {
            chart,
            phi,
            xi,
            eta,
            g,
        }
    }

    pub fn dim(&self) -> usize {
        self.chart.dim
    }

    fn phi_matrix(&self, p: &Point) -> Result<Vec<f64>> {
        self.phi.eval(p)
    }

    /// Max residual of the five structure axioms at one point, over the
    /// supplied unit vectors:
    ///   φ²X = −X + η(X)ξ, η(ξ) = 1, η∘φ = 0, φξ = 0,
    ///   g(φX,φY) = g(X,Y) − η(X)η(Y).
    fn axiom_residual(&self, p: &Point, vectors: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
        let d = self.dim();
        let phim = self.phi_matrix(p)?;
        let xiv = self.xi.eval(p)?;
        let etav = self.eta.eval(p)?;
        let apply = |v: &[f64]| -> Vec<f64> {
            (0..d)
                .map(|i| (0..d).map(|j| phim[i * d + j] * v[j]).sum())
                .collect()
        };
        let eta_of = |v: &[f64]| -> f64 { (0..d).map(|j| etav[j] * v[j]).sum() };

        let mut worst = 0.0f64;
        let mut worst_vec = vectors[0].clone();
        let mut bump = |r: f64, v: &[f64]| {
            if r > worst {
                worst = r;
                worst_vec = v.to_vec();
            }
        };

        bump((eta_of(&xiv) - 1.0).abs(), &xiv);
        bump(self.g.norm(p, &apply(&xiv))?, &xiv);

        for v in vectors {
            let pv = apply(v);
            bump(eta_of(&pv).abs(), v);
            // φ²v + v − η(v)ξ
            let ppv = apply(&pv);
            let ev = eta_of(v);
            let resid: Vec<f64> = (0..d).map(|i| ppv[i] + v[i] - ev * xiv[i]).collect();
            bump(self.g.norm(p, &resid)?, v);
        }
        for pair in vectors.windows(2) {
            let (x, y) = (&pair[0], &pair[1]);
            let r = self.g.pair_values(p, &apply(x), &apply(y))? - self.g.pair_values(p, x, y)?
                + eta_of(x) * eta_of(y);
            bump(r.abs(), x);
        }
        Ok((worst, worst_vec))
    }

    pub fn check_almost_contact(
        &self,
        id: &str,
        s: &mut Sampling,
        tol: f64,
    ) -> Result<CheckReport> {
        s.require_points()?;
        let mut b = ReportBuilder::new(
            id,
            "almost contact axioms: phi^2 = -Id + eta (x) xi, eta(xi) = 1, \
             eta.phi = 0, phi(xi) = 0, g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)",
            tol,
            s.seed,
        );
        for p in s.points {
            let vectors = sample_unit_vectors(&self.g, p, s.rng, s.n_vectors)?;
            let (r, v) = self.axiom_residual(p, &vectors)?;
            b.record(r, Some(p), Some(&v));
        }
        b.set_samples(s.points.len(), s.n_vectors);
        Ok(b.finish())
    }

    /// (∇_X φ)Y − g(φX, Y)ξ + η(Y)φX at `p`; identically zero exactly when
    /// the structure is Kenmotsu along (X, Y).
    pub fn kenmotsu_defect(&self, x: &TensorField, y: &TensorField, p: &Point) -> Result<Vec<f64>> {
        let ch = christoffel(&self.g, p)?;
        self.kenmotsu_defect_with(&ch, x, y, p)
    }

    pub fn kenmotsu_defect_with(
        &self,
        ch: &Christoffel,
        x: &TensorField,
        y: &TensorField,
        p: &Point,
    ) -> Result<Vec<f64>> {
        let d = self.dim();
        let phi_y = TensorField::apply_endo(&self.phi, y);
        let nabla_phi_y = covariant_derivative_with(ch, &phi_y, x, p)?;
        let nabla_y = covariant_derivative_with(ch, y, x, p)?;
        let phim = self.phi_matrix(p)?;
        let phi_nabla_y: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| phim[i * d + j] * nabla_y[j]).sum())
            .collect();

        let xv = x.eval(p)?;
        let yv = y.eval(p)?;
        let phi_x: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| phim[i * d + j] * xv[j]).sum())
            .collect();
        let g_phix_y = self.g.pair_values(p, &phi_x, &yv)?;
        let etav = self.eta.eval(p)?;
        let eta_y: f64 = (0..d).map(|j| etav[j] * yv[j]).sum();
        let xiv = self.xi.eval(p)?;

        Ok((0..d)
            .map(|i| nabla_phi_y[i] - phi_nabla_y[i] - g_phix_y * xiv[i] + eta_y * phi_x[i])
            .collect())
    }

    /// Worst Kenmotsu defect over frame pairs and random pairs at each point.
    pub fn check_kenmotsu(&self, id: &str, s: &mut Sampling, tol: f64) -> Result<CheckReport> {
        s.require_points()?;
        let mut b = ReportBuilder::new(
            id,
            "Kenmotsu condition: (nabla_X phi)Y = g(phi X, Y) xi - eta(Y) phi X",
            tol,
            s.seed,
        );
        let d = self.dim();
        for p in s.points {
            let ch = christoffel(&self.g, p)?;
            let vectors = sample_unit_vectors(&self.g, p, s.rng, s.n_vectors)?;
            // frame pairs
            for i in 0..d {
                for j in 0..d {
                    let x = TensorField::constant_vector(self.chart.clone(), &vectors[i]);
                    let y = TensorField::constant_vector(self.chart.clone(), &vectors[j]);
                    let defect = self.kenmotsu_defect_with(&ch, &x, &y, p)?;
                    b.record(self.g.norm(p, &defect)?, Some(p), Some(&vectors[i]));
                }
            }
            // random pairs
            for k in (d..vectors.len()).step_by(2) {
                if k + 1 >= vectors.len() {
                    break;
                }
                let x = TensorField::constant_vector(self.chart.clone(), &vectors[k]);
                let y = TensorField::constant_vector(self.chart.clone(), &vectors[k + 1]);
                let defect = self.kenmotsu_defect_with(&ch, &x, &y, p)?;
                b.record(self.g.norm(p, &defect)?, Some(p), Some(&vectors[k]));
            }
        }
        b.set_samples(s.points.len(), s.n_vectors);
        Ok(b.finish())
    }

    /// Residuals of the Reeb identities
    ///   ∇_X ξ = X − η(X)ξ and (∇_X η)Y = g(X,Y) − η(X)η(Y).
    pub fn check_reeb_identities(
        &self,
        id: &str,
        s: &mut Sampling,
        tol: f64,
    ) -> Result<CheckReport> {
        s.require_points()?;
        let mut b = ReportBuilder::new(
            id,
            "Reeb identities: nabla_X xi = X - eta(X) xi; \
             (nabla_X eta)Y = g(X,Y) - eta(X)eta(Y)",
            tol,
            s.seed,
        );
        let d = self.dim();
        for p in s.points {
            let ch = christoffel(&self.g, p)?;
            let vectors = sample_unit_vectors(&self.g, p, s.rng, s.n_vectors)?;
            let etav = self.eta.eval(p)?;
            let xiv = self.xi.eval(p)?;
            let eta_of = |v: &[f64]| -> f64 { (0..d).map(|j| etav[j] * v[j]).sum() };
            for v in &vectors {
                let x = TensorField::constant_vector(self.chart.clone(), v);
                let nx = covariant_derivative_with(&ch, &self.xi, &x, p)?;
                let ev = eta_of(v);
                let resid: Vec<f64> = (0..d).map(|i| nx[i] - v[i] + ev * xiv[i]).collect();
                b.record(self.g.norm(p, &resid)?, Some(p), Some(v));

                let neta = covariant_derivative_with(&ch, &self.eta, &x, p)?;
                for w in &vectors {
                    let lhs: f64 = (0..d).map(|j| neta[j] * w[j]).sum();
                    let rhs = self.g.pair_values(p, v, w)? - ev * eta_of(w);
                    b.record((lhs - rhs).abs(), Some(p), Some(v));
                }
            }
        }
        b.set_samples(s.points.len(), s.n_vectors);
        Ok(b.finish())
    }

    /// The fundamental 2-form Ω(X, Y) = g(X, φY) as a form field.
    pub fn kahler_form(&self) -> KFormField {
        let d = self.dim();
        let combos = crate::form::combinations(d, 2);
        let comps = combos
            .iter()
            .map(|c| {
                let (i, j) = (c[0], c[1]);
                let ei = TensorField::coordinate_vector(self.chart.clone(), i);
                let ej = TensorField::coordinate_vector(self.chart.clone(), j);
                let phi_ej = TensorField::apply_endo(&self.phi, &ej);
                TensorField::metric_pair(&self.g.field, &ei, &phi_ej).comp_fn(0)
            })
            .collect();
        KFormField::new(self.chart.clone(), 2, comps)
    }

    /// η as a 1-form field.
    pub fn eta_form(&self) -> KFormField {
        KFormField::from_covector(&self.eta)
    }

    /// dη = 0 and dΩ = 2 η∧Ω (the factor 2 belongs to the shuffle-sum wedge
    /// normalization used throughout this crate).
    pub fn check_form_identities(
        &self,
        ids: (&str, &str),
        s: &mut Sampling,
        tol: f64,
    ) -> Result<(CheckReport, CheckReport)> {
        s.require_points()?;
        let mut b_eta = ReportBuilder::new(ids.0, "eta is closed: d eta = 0", tol, s.seed);
        let mut b_omega = ReportBuilder::new(
            ids.1,
            "d Omega = 2 eta ^ Omega (shuffle-sum wedge normalization)",
            tol,
            s.seed,
        );
        let eta = self.eta_form();
        let omega = self.kahler_form();
        for p in s.points {
            let deta = eta.d_value(p)?;
            b_eta.record(deta.max_abs(), Some(p), None);

            let domega = omega.d_value(p)?;
            let eo = eta.value(p)?.wedge(&omega.value(p)?)?;
            let resid = domega.add(&eo.scale(-2.0)).max_abs();
            b_omega.record(resid, Some(p), None);
        }
        b_eta.set_samples(s.points.len(), 0);
        b_omega.set_samples(s.points.len(), 0);
        Ok((b_eta.finish(), b_omega.finish()))
    }
}

//! 3-Kenmotsu triples: quaternionic relations, the contact distribution H,
//! holomorphic sectional curvature, Einstein/parallel-Ricci measurements,
//! and the Gauss relations against the intrinsic leaf geometry.

use crate::chart::{Chart, Point};
use crate::contact::{AlmostContactMetricStructure, Sampling};
use crate::curvature::{
    christoffel, covariant_derivative_with, frobenius, ricci_contraction,
    ricci_directional_derivative, riemann_4_values, riemann_array,
};
use crate::error::{GeomError, Result};
use crate::field::{MetricField, TensorField};
use crate::form::KFormValue;
use crate::report::{CheckReport, ReportBuilder};
use crate::rng::Lcg64;
use std::sync::Arc;

/// Intrinsic data of a warped-product source, kept so the leaf geometry can
/// be computed independently of the ambient chart.
#[derive(Clone)]
pub struct WarpedLeafData {
    pub c: f64,
    pub m: usize,
    pub base_chart: Arc<Chart>,
    pub base_metric: MetricField,
}

/// Three Kenmotsu structures sharing (ξ, η, g) with φ_k = φ_i ∘ φ_j for even
/// permutations, on a chart of dimension 4n+1.
#[derive(Clone)]
pub struct ThreeKenmotsuStructure {
    pub chart: Arc<Chart>,
    pub phis: [TensorField; 3],
    pub xi: TensorField,
    pub eta: TensorField,
    pub g: MetricField,
    pub n: usize,
    pub warped: Option<WarpedLeafData>,
}

/// A tangent vector at a point with η(v) = 0.
#[derive(Debug, Clone)]
pub struct HVector {
    pub point: Point,
    pub comps: Vec<f64>,
}

impl ThreeKenmotsuStructure {
    pub fn new(
        chart: Arc<Chart>,
        phis: [TensorField; 3],
        xi: TensorField,
        eta: TensorField,
        g: MetricField,
        warped: Option<WarpedLeafData>,
    ) -> Result<Self> {
        if chart.dim % 4 != 1 {
            return Err(GeomError::Structural(format!(
                "3-Kenmotsu charts have dimension 4n+1, got {}",
                chart.dim
            )));
        }
        let n = chart.dim / 4;
        Ok(Self {
            chart,
            phis,
            xi,
            eta,
            g,
            n,
            warped,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim
    }

    /// The α-th almost contact metric structure (α in 0..3).
    pub fn structure(&self, alpha: usize) -> AlmostContactMetricStructure {
        AlmostContactMetricStructure::new(
            self.chart.clone(),
            self.phis[alpha].clone(),
            self.xi.clone(),
            self.eta.clone(),
            self.g.clone(),
        )
    }

    fn eta_of(&self, p: &Point, v: &[f64]) -> Result<f64> {
        let etav = self.eta.eval(p)?;
        Ok(etav.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    fn phi_apply(&self, alpha: usize, p: &Point, v: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim();
        let m = self.phis[alpha].eval(p)?;
        Ok((0..d)
            .map(|i| (0..d).map(|j| m[i * d + j] * v[j]).sum())
            .collect())
    }

    /// Projection onto the contact distribution: v − η(v)ξ.
    pub fn project_h(&self, p: &Point, v: &[f64]) -> Result<HVector> {
        let ev = self.eta_of(p, v)?;
        let xiv = self.xi.eval(p)?;
        let comps: Vec<f64> = v.iter().zip(&xiv).map(|(a, b)| a - ev * b).collect();
        Ok(HVector {
            point: p.clone(),
            comps,
        })
    }

    /// Validate that `v` already lies in H at `p`.
    pub fn h_vector(&self, p: &Point, v: &[f64]) -> Result<HVector> {
        let ev = self.eta_of(p, v)?;
        let n = self.g.norm(p, v)?;
        if ev.abs() >= 1e-12 * n.max(1e-300) {
            return Err(GeomError::NotHorizontal(ev.abs()));
        }
        Ok(HVector {
            point: p.clone(),
            comps: v.to_vec(),
        })
    }

    /// Random unit-g-norm H-vector at `p`.
    pub fn random_h_vector(&self, p: &Point, rng: &mut Lcg64) -> Result<HVector> {
        loop {
            let v = rng.unit_vector(self.dim());
            let hv = self.project_h(p, &v)?;
            let n = self.g.norm(p, &hv.comps)?;
            if n > 1e-6 {
                let comps = hv.comps.iter().map(|x| x / n).collect();
                return Ok(HVector {
                    point: p.clone(),
                    comps,
                });
            }
        }
    }

    /// Composition relations φ_k = φ_i φ_j (even permutations), plus the
    /// anticommutativity of the induced complex structures on H, reported
    /// separately.
    pub fn verify_triple(
        &self,
        ids: (&str, &str),
        s: &mut Sampling,
        tol: f64,
    ) -> Result<(CheckReport, CheckReport)> {
        s.require_points()?;
        let d = self.dim();
        let mut b_comp = ReportBuilder::new(
            ids.0,
            "phi_k = phi_i . phi_j for even permutations (i,j,k) of (1,2,3)",
            tol,
            s.seed,
        );
        let mut b_anti = ReportBuilder::new(
            ids.1,
            "J_i J_j = -J_j J_i on the contact distribution H (i != j)",
            tol,
            s.seed,
        );
        for p in s.points {
            let mats: Vec<Vec<f64>> = (0..3)
                .map(|a| self.phis[a].eval(p))
                .collect::<Result<_>>()?;
            let mul = |a: &[f64], b: &[f64]| -> Vec<f64> {
                let mut out = vec![0.0; d * d];
                for i in 0..d {
                    for j in 0..d {
                        let mut acc = 0.0;
                        for k in 0..d {
                            acc += a[i * d + k] * b[k * d + j];
                        }
                        out[i * d + j] = acc;
                    }
                }
                out
            };
            for &(i, j, k) in &[(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
                let prod = mul(&mats[i], &mats[j]);
                let resid = prod
                    .iter()
                    .zip(&mats[k])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                b_comp.record(resid, Some(p), None);
            }
            // anticommutativity on H
            for _ in 0..s.n_vectors.max(1) {
                let hv = self.random_h_vector(p, s.rng)?;
                for &(i, j) in &[(0usize, 1usize), (1, 2), (2, 0)] {
                    let a = self.phi_apply(i, p, &self.phi_apply(j, p, &hv.comps)?)?;
                    let b = self.phi_apply(j, p, &self.phi_apply(i, p, &hv.comps)?)?;
                    let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                    b_anti.record(self.g.norm(p, &sum)?, Some(p), Some(&hv.comps));
                }
            }
        }
        b_comp.set_samples(s.points.len(), 0);
        b_anti.set_samples(s.points.len(), s.n_vectors);
        Ok((b_comp.finish(), b_anti.finish()))
    }

    /// φ_α-holomorphic sectional curvature of X ∈ H:
    /// H_α(X) = −R(X, φ_αX, X, φ_αX) / g(X,X)².
    pub fn holomorphic_sectional(&self, alpha: usize, x: &HVector) -> Result<f64> {
        let p = &x.point;
        let gxx = self.g.pair_values(p, &x.comps, &x.comps)?;
        if gxx.sqrt() <= 1e-8 {
            return Err(GeomError::DegenerateVector(gxx.max(0.0).sqrt()));
        }
        let px = self.phi_apply(alpha, p, &x.comps)?;
        let riem = riemann_array(&self.g, p)?;
        let gmat = self.g.matrix(p)?;
        let r = riemann_4_values(&riem, &gmat, &x.comps, &px, &x.comps, &px);
        Ok(-r / (gxx * gxx))
    }

    /// Σ_α H_α(X) = −3 over random H-vectors.
    pub fn check_h_sum(&self, id: &str, s: &mut Sampling, tol: f64) -> Result<CheckReport> {
        s.require_points()?;
        let mut b = ReportBuilder::new(
            id,
            "holomorphic sectional curvature sum: H_1(X) + H_2(X) + H_3(X) = -3",
            tol,
            s.seed,
        );
        for p in s.points {
            let riem = riemann_array(&self.g, p)?;
            let gmat = self.g.matrix(p)?;
            for _ in 0..s.n_vectors.max(1) {
                let x = self.random_h_vector(p, s.rng)?;
                let gxx = self.g.pair_values(p, &x.comps, &x.comps)?;
                let mut sum = 0.0;
                for alpha in 0..3 {
                    let px = self.phi_apply(alpha, p, &x.comps)?;
                    sum -=
                        riemann_4_values(&riem, &gmat, &x.comps, &px, &x.comps, &px) / (gxx * gxx);
                }
                b.record((sum + 3.0).abs(), Some(p), Some(&x.comps));
            }
        }
        b.set_samples(s.points.len(), s.n_vectors);
        Ok(b.finish())
    }

    /// Residual of the curvature-φ identity
    /// R(X,Y,φZ,φW) = g(φY,Z)g(X,φW) − g(φX,Z)g(Y,φW) + g(Y,Z)g(φX,φW)
    ///               − g(X,Z)g(φY,φW) + g(φ R(X,Y)Z, φW)
    /// for φ = φ_α.
    pub fn phi_curvature_residual(
        &self,
        alpha: usize,
        x: &[f64],
        y: &[f64],
        z: &[f64],
        w: &[f64],
        p: &Point,
    ) -> Result<f64> {
        let riem = riemann_array(&self.g, p)?;
        let gmat = self.g.matrix(p)?;
        let pz = self.phi_apply(alpha, p, z)?;
        let pw = self.phi_apply(alpha, p, w)?;
        let px = self.phi_apply(alpha, p, x)?;
        let py = self.phi_apply(alpha, p, y)?;
        let lhs = riemann_4_values(&riem, &gmat, x, y, &pz, &pw);
        let gp = |a: &[f64], b: &[f64]| -> f64 {
            let d = self.dim();
            let mut acc = 0.0;
            for i in 0..d {
                for j in 0..d {
                    acc += gmat[(i, j)] * a[i] * b[j];
                }
            }
            acc
        };
        let rxyz = crate::curvature::riemann_apply_values(&riem, self.dim(), x, y, z);
        let prxyz = self.phi_apply(alpha, p, &rxyz)?;
        let rhs = gp(&py, z) * gp(x, &pw) - gp(&px, z) * gp(y, &pw) + gp(y, z) * gp(&px, &pw)
            - gp(x, z) * gp(&py, &pw)
            + gp(&prxyz, &pw);
        Ok((lhs - rhs).abs())
    }

    /// Second fundamental form of the leaves of H: the ξ-component of the
    /// ambient derivative of the constant extensions of two H-vectors,
    /// h(X,Y) = η(∇_X Y) ξ. For a Kenmotsu structure this equals −g(X,Y)ξ.
    pub fn second_fundamental_form(&self, x: &HVector, y: &HVector) -> Result<Vec<f64>> {
        assert_eq!(
            x.point, y.point,
            "second fundamental form needs a common base point"
        );
        let p = &x.point;
        // validate membership in H
        self.h_vector(p, &x.comps)?;
        self.h_vector(p, &y.comps)?;
        let ch = christoffel(&self.g, p)?;
        let xf = TensorField::constant_vector(self.chart.clone(), &x.comps);
        let yf = TensorField::constant_vector(self.chart.clone(), &y.comps);
        let nxy = covariant_derivative_with(&ch, &yf, &xf, p)?;
        let eta_n = self.eta_of(p, &nxy)?;
        let xiv = self.xi.eval(p)?;
        Ok(xiv.iter().map(|v| eta_n * v).collect())
    }

    /// Einstein fit over sample points: λ = Σ⟨Ric,g⟩ / Σ⟨g,g⟩ (Frobenius
    /// pairing of coordinate components), residual = max ‖Ric − λg‖/‖g‖.
    pub fn einstein_fit(g: &MetricField, points: &[Point]) -> Result<(f64, f64)> {
        if points.len() < 5 {
            return Err(GeomError::Usage(format!(
                "einstein fit needs at least 5 points, got {}",
                points.len()
            )));
        }
        let d = g.dim();
        let mut num = 0.0;
        let mut den = 0.0;
        let mut rics = Vec::with_capacity(points.len());
        let mut gs = Vec::with_capacity(points.len());
        for p in points {
            let ric = ricci_contraction(g, p)?;
            let gm = g.field.eval(p)?;
            for k in 0..d * d {
                num += ric[k] * gm[k];
                den += gm[k] * gm[k];
            }
            rics.push(ric);
            gs.push(gm);
        }
        let lambda = num / den;
        let mut resid = 0.0f64;
        for (ric, gm) in rics.iter().zip(&gs) {
            let diff: Vec<f64> = ric.iter().zip(gm).map(|(r, g)| r - lambda * g).collect();
            resid = resid.max(frobenius(&diff) / frobenius(gm));
        }
        Ok((lambda, resid))
    }

    /// Relative norm of ∇_dir Ric at `p`: ‖∇_dir Ric‖ / (‖Ric‖·‖dir‖_g).
    pub fn ricci_parallel_defect(g: &MetricField, p: &Point, dir: &[f64]) -> Result<f64> {
        let dn = g.norm(p, dir)?;
        if dn == 0.0 {
            return Ok(0.0);
        }
        let dric = ricci_directional_derivative(g, p, dir)?;
        let ric = ricci_contraction(g, p)?;
        // fall back to the absolute norm for (near-)Ricci-flat metrics
        Ok(frobenius(&dric) / (frobenius(&ric).max(1.0) * dn))
    }

    /// Gauss relations against the intrinsic leaf geometry of a warped
    /// source:
    ///   R(X,Y,Z,W) = R̄(X,Y,Z,W) − g(X,W)g(Y,Z) + g(X,Z)g(Y,W)
    ///   R̄ic(X,Y)  = Ric(X,Y) + 4n g(X,Y)
    /// with barred quantities computed on the leaf chart (the base chart
    /// carrying the frozen-time metric c²e^{2t₀}·g_base).
    pub fn check_gauss_relations(
        &self,
        ids: (&str, &str),
        s: &mut Sampling,
        tol: f64,
    ) -> Result<(CheckReport, CheckReport)> {
        s.require_points()?;
        let leaf = self.warped.as_ref().ok_or_else(|| {
            GeomError::Structural("Gauss relations need a warped-product source".into())
        })?;
        let mut b_cur = ReportBuilder::new(
            ids.0,
            "Gauss equation: R = Rbar - g(X,W)g(Y,Z) + g(X,Z)g(Y,W) on H",
            tol,
            s.seed,
        );
        let mut b_ric = ReportBuilder::new(
            ids.1,
            "Ricci relation: Rbar_ic(X,Y) = Ric(X,Y) + 4n g(X,Y) on H",
            tol,
            s.seed,
        );
        let d = self.dim();
        let n4 = 4.0 * self.n as f64;
        for p in s.points {
            // frozen leaf metric on the base chart
            let scale = leaf.c * leaf.c * (2.0 * p.coords[0]).exp();
            let leaf_metric = MetricField::new(leaf.base_metric.field.scale(scale));
            let y0 = Point::new(p.coords[1..].to_vec());

            let riem = riemann_array(&self.g, p)?;
            let gmat = self.g.matrix(p)?;
            let leaf_riem = riemann_array(&leaf_metric, &y0)?;
            let leaf_gmat = leaf_metric.matrix(&y0)?;
            let ric = ricci_contraction(&self.g, p)?;
            let leaf_ric = ricci_contraction(&leaf_metric, &y0)?;

            let gp = |a: &[f64], b: &[f64]| -> f64 {
                let mut acc = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        acc += gmat[(i, j)] * a[i] * b[j];
                    }
                }
                acc
            };

            for _ in 0..s.n_vectors.max(1) {
                let hs: Vec<HVector> = (0..4)
                    .map(|_| self.random_h_vector(p, s.rng))
                    .collect::<Result<_>>()?;
                let base: Vec<Vec<f64>> = hs.iter().map(|h| h.comps[1..].to_vec()).collect();
                let (x, y, z, w) = (&hs[0].comps, &hs[1].comps, &hs[2].comps, &hs[3].comps);

                let ambient = riemann_4_values(&riem, &gmat, x, y, z, w);
                let intrinsic = riemann_4_values(
                    &leaf_riem, &leaf_gmat, &base[0], &base[1], &base[2], &base[3],
                );
                let resid = ambient - (intrinsic - gp(x, w) * gp(y, z) + gp(x, z) * gp(y, w));
                b_cur.record(resid.abs(), Some(p), Some(x));

                // Ricci relation on the (X, Y) pair
                let db = d - 1;
                let mut ric_amb = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        ric_amb += ric[i * d + j] * x[i] * y[j];
                    }
                }
                let mut ric_leaf = 0.0;
                for i in 0..db {
                    for j in 0..db {
                        ric_leaf += leaf_ric[i * db + j] * base[0][i] * base[1][j];
                    }
                }
                let resid = ric_leaf - (ric_amb + n4 * gp(x, y));
                b_ric.record(resid.abs(), Some(p), Some(x));
            }
        }
        b_cur.set_samples(s.points.len(), s.n_vectors);
        b_ric.set_samples(s.points.len(), s.n_vectors);
        Ok((b_cur.finish(), b_ric.finish()))
    }

    /// The quaternionic 4-form Ω = ΣΩ_α∧Ω_α and the value of Ωⁿ∧η on the
    /// coordinate frame at `p`.
    pub fn quaternionic_volume(&self, p: &Point) -> Result<(KFormValue, f64)> {
        let mut omega: Option<KFormValue> = None;
        for alpha in 0..3 {
            let oa = self.structure(alpha).kahler_form().value(p)?;
            let sq = oa.wedge(&oa)?;
            omega = Some(match omega {
                None => sq,
                Some(acc) => acc.add(&sq),
            });
        }
        let omega = omega.expect("three structures");
        let mut top = omega.clone();
        for _ in 1..self.n {
            top = top.wedge(&omega)?;
        }
        let eta = self.structure(0).eta_form().value(p)?;
        let vol_form = top.wedge(&eta)?;
        debug_assert_eq!(vol_form.degree, self.dim());
        let vol = vol_form.comps[0];
        Ok((omega, vol))
    }
}

/// Composition construction: given two Kenmotsu structures sharing
/// (ξ, η, g) with φ₁φ₂ = −φ₂φ₁, the triple (φ₁, φ₂, φ₁∘φ₂) is 3-Kenmotsu.
/// Preconditions are verified on the supplied sample points (tolerance
/// 1e-10) before the structure is assembled.
pub fn compose_third(
    phi1: &AlmostContactMetricStructure,
    phi2: &AlmostContactMetricStructure,
    s: &mut Sampling,
) -> Result<ThreeKenmotsuStructure> {
    const TOL: f64 = 1e-10;
    s.require_points()?;
    let d = phi1.dim();
    // both inputs must be Kenmotsu
    for (label, st) in [("phi1", phi1), ("phi2", phi2)] {
        let rep = st.check_kenmotsu("compose.pre", s, TOL)?;
        if !rep.passed() {
            return Err(GeomError::Structural(format!(
                "{label} is not Kenmotsu on the sample (max residual {:.3e})",
                rep.max_residual
            )));
        }
    }
    // anticommutativity
    let mut worst = 0.0f64;
    for p in s.points {
        let a = phi1.phi.eval(p)?;
        let b = phi2.phi.eval(p)?;
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    acc += a[i * d + k] * b[k * d + j] + b[i * d + k] * a[k * d + j];
                }
                worst = worst.max(acc.abs());
            }
        }
    }
    if worst >= TOL {
        return Err(GeomError::Structural(format!(
            "phi1 phi2 != -phi2 phi1 (max residual {worst:.3e})"
        )));
    }
    let phi3 = TensorField::compose_endo(&phi1.phi, &phi2.phi);
    ThreeKenmotsuStructure::new(
        phi1.chart.clone(),
        [phi1.phi.clone(), phi2.phi.clone(), phi3],
        phi1.xi.clone(),
        phi1.eta.clone(),
        phi1.g.clone(),
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::{example_r5, flat_control, non_einstein_control, ManifoldSpec};

    fn sample<'a>(points: &'a [Point], rng: &'a mut Lcg64, seed: u64) -> Sampling<'a> {
        Sampling {
            points,
            n_vectors: 4,
            rng,
            seed,
        }
    }

    #[test]
    fn projection_and_h_membership() {
        let m = example_r5();
        let p = Point::new(vec![0.6, 0.1, 0.2, 0.3, 0.4]);
        // projecting xi gives zero
        let xiv = m.xi.eval(&p).unwrap();
        let hv = m.project_h(&p, &xiv).unwrap();
        assert!(hv.comps.iter().all(|x| x.abs() < 1e-14));
        // xi itself is rejected as an H-vector
        assert!(matches!(
            m.h_vector(&p, &xiv),
            Err(GeomError::NotHorizontal(_))
        ));
        // a coordinate direction orthogonal to eta passes through unchanged
        let v = [0.0, 1.0, -2.0, 0.5, 0.0];
        let hv = m.project_h(&p, &v).unwrap();
        assert_eq!(hv.comps, v.to_vec());
        assert!(m.h_vector(&p, &v).is_ok());
        // random H-vectors are unit g-norm and horizontal
        let mut rng = Lcg64::new(4);
        let hv = m.random_h_vector(&p, &mut rng).unwrap();
        assert!((m.g.norm(&p, &hv.comps).unwrap() - 1.0).abs() < 1e-12);
        let etav = m.eta.eval(&p).unwrap();
        let e: f64 = etav.iter().zip(&hv.comps).map(|(a, b)| a * b).sum();
        assert!(e.abs() < 1e-12);
    }

    #[test]
    fn triple_relations_on_r5() {
        let m = example_r5();
        let mut rng = Lcg64::new(21);
        let points = m.chart.sample_many(&mut rng, 5);
        let (comp, anti) = m
            .verify_triple(("comp", "anti"), &mut sample(&points, &mut rng, 21), 1e-10)
            .unwrap();
        assert!(comp.passed());
        assert!(anti.passed());
    }

    #[test]
    fn holomorphic_sectional_is_minus_one_and_invariant() {
        // constant curvature -1, so every H_alpha(X) = -1, and the value is
        // invariant under X -> cX and X -> phi_alpha X
        let m = example_r5();
        let p = Point::new(vec![0.9, -0.3, 0.5, 0.2, -0.7]);
        let mut rng = Lcg64::new(8);
        let x = m.random_h_vector(&p, &mut rng).unwrap();
        for alpha in 0..3 {
            let h = m.holomorphic_sectional(alpha, &x).unwrap();
            assert!((h + 1.0).abs() < 1e-10, "H_{alpha} = {h}");
        }
        let scaled = HVector {
            point: p.clone(),
            comps: x.comps.iter().map(|v| 1.7 * v).collect(),
        };
        let h0 = m.holomorphic_sectional(0, &x).unwrap();
        assert!((m.holomorphic_sectional(0, &scaled).unwrap() - h0).abs() < 1e-10);
        let rotated = HVector {
            point: p.clone(),
            comps: m.phi_apply(0, &p, &x.comps).unwrap(),
        };
        assert!((m.holomorphic_sectional(0, &rotated).unwrap() - h0).abs() < 1e-10);
        // near-zero vectors are rejected
        let tiny = HVector {
            point: p.clone(),
            comps: vec![0.0, 1e-12, 0.0, 0.0, 0.0],
        };
        assert!(matches!(
            m.holomorphic_sectional(0, &tiny),
            Err(GeomError::DegenerateVector(_))
        ));
    }

    #[test]
    fn h_sum_fails_on_flat_control() {
        let f = flat_control();
        let mut rng = Lcg64::new(2);
        let points = f.chart.sample_many(&mut rng, 4);
        let rep = f
            .check_h_sum("h_sum", &mut sample(&points, &mut rng, 2), 1e-9)
            .unwrap();
        assert!(!rep.passed());
        // flat curvature gives H_1 + H_2 + H_3 = 0, residual 3
        assert!((rep.max_residual - 3.0).abs() < 1e-12);
    }

    #[test]
    fn second_fundamental_form_matches_minus_g_xi() {
        // h(X1, X1) = -g(X1, X1) xi = -xi = (x0, 0, 0, 0, 0) for unit X1
        let m = example_r5();
        let p = Point::new(vec![0.8, 0.1, 0.2, 0.3, 0.4]);
        let x0 = p.coords[0];
        let mut x1 = vec![0.0; 5];
        x1[1] = x0;
        let h = m.h_vector(&p, &x1).unwrap();
        let val = m.second_fundamental_form(&h, &h).unwrap();
        assert!((val[0] - x0).abs() < 1e-12, "{val:?}");
        for v in &val[1..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn phi_curvature_identity_on_r5() {
        let m = example_r5();
        let mut rng = Lcg64::new(31);
        let p = m.chart.sample(&mut rng);
        for alpha in 0..3 {
            let vs: Vec<Vec<f64>> = (0..4).map(|_| rng.unit_vector(5)).collect();
            let r = m
                .phi_curvature_residual(alpha, &vs[0], &vs[1], &vs[2], &vs[3], &p)
                .unwrap();
            assert!(r < 1e-10, "alpha={alpha}, residual {r}");
        }
    }

    #[test]
    fn einstein_fit_and_control() {
        let m = example_r5();
        let mut rng = Lcg64::new(6);
        let points = m.chart.sample_many(&mut rng, 10);
        let (lambda, resid) = ThreeKenmotsuStructure::einstein_fit(&m.g, &points).unwrap();
        assert!((lambda + 4.0).abs() < 1e-9, "lambda = {lambda}");
        assert!(resid < 1e-10);
        // too few points is a usage error
        assert!(matches!(
            ThreeKenmotsuStructure::einstein_fit(&m.g, &points[..3]),
            Err(GeomError::Usage(_))
        ));
        // mixed warp rates are not Einstein
        let bad = non_einstein_control();
        let points = bad.chart().sample_many(&mut rng, 10);
        let (_, resid) = ThreeKenmotsuStructure::einstein_fit(&bad, &points).unwrap();
        assert!(resid > 0.01, "control residual {resid}");
    }

    #[test]
    fn ricci_parallel_on_r5() {
        let m = example_r5();
        let mut rng = Lcg64::new(14);
        let p = m.chart.sample(&mut rng);
        let dir = rng.unit_vector(5);
        let defect = ThreeKenmotsuStructure::ricci_parallel_defect(&m.g, &p, &dir).unwrap();
        assert!(defect < 1e-6, "defect {defect}");
    }

    #[test]
    fn gauss_relations_need_a_warped_source() {
        let m = example_r5();
        let mut rng = Lcg64::new(5);
        let points = m.chart.sample_many(&mut rng, 3);
        assert!(matches!(
            m.check_gauss_relations(("a", "b"), &mut sample(&points, &mut rng, 5), 1e-8),
            Err(GeomError::Structural(_))
        ));
    }

    #[test]
    fn gauss_relations_on_warped_chart() {
        let w = ManifoldSpec::builtin("warped_flat")
            .unwrap()
            .build()
            .unwrap();
        let mut rng = Lcg64::new(12);
        let points = w.chart.sample_many(&mut rng, 6);
        let (cur, ric) = w
            .check_gauss_relations(("a", "b"), &mut sample(&points, &mut rng, 12), 1e-8)
            .unwrap();
        assert!(cur.passed(), "curvature residual {}", cur.max_residual);
        assert!(ric.passed(), "ricci residual {}", ric.max_residual);
    }

    #[test]
    fn quaternionic_volume_is_nonzero() {
        let m = example_r5();
        let p = Point::new(vec![0.5, 0.0, 0.0, 0.0, 0.0]);
        let (omega, vol) = m.quaternionic_volume(&p).unwrap();
        assert_eq!(omega.degree, 4);
        assert!(vol.abs() > 1e-6, "volume {vol}");
        // Omega(X1, X2, X3, X4) = 6 on the orthonormal frame
        let x0 = p.coords[0];
        let frame: Vec<Vec<f64>> = (1..5)
            .map(|i| {
                let mut v = vec![0.0; 5];
                v[i] = x0;
                v
            })
            .collect();
        let refs: Vec<&[f64]> = frame.iter().map(|v| v.as_slice()).collect();
        let val = omega.apply(&refs);
        assert!((val - 6.0).abs() < 1e-12, "Omega(frame) = {val}");
    }

    #[test]
    fn compose_third_roundtrip_and_sign() {
        let m = example_r5();
        let mut rng = Lcg64::new(40);
        let points = m.chart.sample_many(&mut rng, 5);
        let s1 = m.structure(0);
        let s2 = m.structure(1);
        let composed = compose_third(&s1, &s2, &mut sample(&points, &mut rng, 40)).unwrap();
        let p = &points[0];
        let a = composed.phis[2].eval(p).unwrap();
        let b = m.phis[2].eval(p).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        // negating one input flips the sign of the composite
        let mut s2_neg = s2.clone();
        s2_neg.phi = s2.phi.scale(-1.0);
        let flipped = compose_third(&s1, &s2_neg, &mut sample(&points, &mut rng, 40)).unwrap();
        let c = flipped.phis[2].eval(p).unwrap();
        for (x, y) in c.iter().zip(&b) {
            assert!((x + y).abs() < 1e-12);
        }
        // non-Kenmotsu input is rejected
        let f = flat_control();
        let fpoints = f.chart.sample_many(&mut rng, 5);
        assert!(matches!(
            compose_third(
                &f.structure(0),
                &f.structure(1),
                &mut sample(&fpoints, &mut rng, 40)
            ),
            Err(GeomError::Structural(_))
        ));
    }

    #[test]
    fn dimension_must_be_4n_plus_1() {
        let m = example_r5();
        let chart = Chart::unrestricted("bad", 3, 1.0);
        let r = ThreeKenmotsuStructure::new(
            chart,
            m.phis.clone(),
            m.xi.clone(),
            m.eta.clone(),
            m.g.clone(),
            None,
        );
        assert!(matches!(r, Err(GeomError::Structural(_))));
    }
}

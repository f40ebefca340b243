//! Built-in manifolds: the hyperbolic R^5 example, warped products over
//! flat quaternionic bases, negative-control fixtures, adapted-frame
//! utilities, and the JSON manifold definition format.

use crate::chart::{Chart, Point};
use crate::contact::AlmostContactMetricStructure;
use crate::curvature::{covariant_derivative, lie_bracket};
use crate::error::{GeomError, Result};
use crate::field::{cst, MetricField, ScalarJetFn, TensorField};
use crate::jet::Jet2;
use crate::kenmotsu3::{ThreeKenmotsuStructure, WarpedLeafData};
use crate::report::{CheckReport, ReportBuilder};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// The three quaternionic 4x4 blocks, as J[alpha][i][j] = (J_alpha)^i_j:
/// J1: e0->e1, e1->-e0, e2->e3, e3->-e2
/// J2: e0->e2, e1->-e3, e2->-e0, e3->e1
/// J3: e0->e3, e1->e2,  e2->-e1, e3->-e0
const J_BLOCKS: [[[f64; 4]; 4]; 3] = [
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ],
    [
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ],
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ],
];

fn block_endomorphism(chart: Arc<Chart>, alpha: usize, offset: usize) -> TensorField {
    // J_alpha repeated on 4x4 blocks starting at coordinate `offset`;
    // zero on the coordinates before the offset.
    let d = chart.dim;
    let mut m = vec![vec![0.0; d]; d];
    let mut base = offset;
    while base + 4 <= d {
        for i in 0..4 {
            for j in 0..4 {
                m[base + i][base + j] = J_BLOCKS[alpha][i][j];
            }
        }
        base += 4;
    }
    TensorField::constant_endomorphism(chart, &m)
}

/// Which connected component of {x0 != 0} the R^5 example lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    #[default]
    Positive,
    Negative,
}

/// The hyperbolic example on {x in R^5 : x0 > 0}:
/// frame X0 = ξ = −x0 ∂0, Xi = x0 ∂i, metric g(Xi, Xj) = δ_ij
/// (i.e. g_{ μν } = x0^{-2} δ_{ μν }), η = −dx0/x0, and the three φ tables
/// acting as constant quaternionic blocks on the coordinate directions 1..4.
pub fn example_r5_component(component: Component) -> ThreeKenmotsuStructure {
    type Validity = fn(&[f64]) -> bool;
    let (x0_bounds, validity): ((f64, f64), Validity) = match component {
        Component::Positive => ((0.1, 2.0), |x: &[f64]| x[0] > 0.0),
        Component::Negative => ((-2.0, -0.1), |x: &[f64]| x[0] < 0.0),
    };
    let mut bounds = vec![(-2.0, 2.0); 5];
    bounds[0] = x0_bounds;
    let chart = Chart::new("r5_x0", bounds, validity);

    let mut gfns: Vec<ScalarJetFn> = Vec::with_capacity(25);
    for i in 0..5 {
        for j in 0..5 {
            gfns.push(if i == j {
                Arc::new(|x: &[Jet2]| x[0].powi(-2))
            } else {
                Arc::new(|x: &[Jet2]| cst(x, 0.0))
            });
        }
    }
    let g = MetricField::new(TensorField::new(chart.clone(), (0, 2), gfns));

    let mut xi_fns: Vec<ScalarJetFn> = vec![Arc::new(|x: &[Jet2]| -&x[0])];
    for _ in 1..5 {
        xi_fns.push(Arc::new(|x: &[Jet2]| cst(x, 0.0)));
    }
    let xi = TensorField::new(chart.clone(), (1, 0), xi_fns);

    let mut eta_fns: Vec<ScalarJetFn> = vec![Arc::new(|x: &[Jet2]| -x[0].recip())];
    for _ in 1..5 {
        eta_fns.push(Arc::new(|x: &[Jet2]| cst(x, 0.0)));
    }
    let eta = TensorField::new(chart.clone(), (0, 1), eta_fns);

    let phis = [
        block_endomorphism(chart.clone(), 0, 1),
        block_endomorphism(chart.clone(), 1, 1),
        block_endomorphism(chart.clone(), 2, 1),
    ];
    ThreeKenmotsuStructure::new(chart, phis, xi, eta, g, None).expect("dimension 5 = 4*1+1")
}

pub fn example_r5() -> ThreeKenmotsuStructure {
    example_r5_component(Component::Positive)
}

/// Euclidean metric and the standard quaternionic triple on R^{4m}.
pub fn flat_quaternion_base(m: usize) -> Result<(MetricField, [TensorField; 3])> {
    if m < 1 {
        return Err(GeomError::Usage("flat quaternion base needs m >= 1".into()));
    }
    let d = 4 * m;
    let chart = Chart::unrestricted("flat_base", d, 2.0);
    let mut gfns: Vec<ScalarJetFn> = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let v = if i == j { 1.0 } else { 0.0 };
            gfns.push(Arc::new(move |x: &[Jet2]| cst(x, v)));
        }
    }
    let g = MetricField::new(TensorField::new(chart.clone(), (0, 2), gfns));
    let js = [
        block_endomorphism(chart.clone(), 0, 0),
        block_endomorphism(chart.clone(), 1, 0),
        block_endomorphism(chart, 2, 0),
    ];
    Ok((g, js))
}

/// A warped product (t_min, t_max) x_f V with f(t) = c e^t over a
/// quaternionic base.
pub struct WarpedProductSpec {
    pub base_metric: MetricField,
    pub base_j: [TensorField; 3],
    pub c: f64,
    pub interval: (f64, f64),
}

impl WarpedProductSpec {
    pub fn flat(m: usize, c: f64) -> Result<Self> {
        let (base_metric, base_j) = flat_quaternion_base(m)?;
        Ok(Self {
            base_metric,
            base_j,
            c,
            interval: (-3.0, 3.0),
        })
    }

    /// Validate the quaternionic invariants of the base on sample points.
    fn validate(&self) -> Result<()> {
        if self.c <= 0.0 {
            return Err(GeomError::Structural(
                "warp constant c must be positive".into(),
            ));
        }
        if self.interval.0 >= self.interval.1 {
            return Err(GeomError::Structural("empty warp interval".into()));
        }
        let chart = self.base_metric.chart().clone();
        let d = chart.dim;
        if !d.is_multiple_of(4) || d == 0 {
            return Err(GeomError::Structural("base dimension must be 4m".into()));
        }
        let mut rng = crate::rng::Lcg64::new(0xb45e);
        let points = chart.sample_many(&mut rng, 5);
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
        for p in &points {
            let js: Vec<Vec<f64>> = (0..3)
                .map(|a| self.base_j[a].eval(p))
                .collect::<Result<_>>()?;
            let gm = self.base_metric.field.eval(p)?;
            for (alpha, j) in js.iter().enumerate() {
                // J^2 = -Id
                let jj = mul(j, j);
                for i in 0..d {
                    for k in 0..d {
                        let expect = if i == k { -1.0 } else { 0.0 };
                        if (jj[i * d + k] - expect).abs() > 1e-10 {
                            return Err(GeomError::Structural(format!(
                                "J{}^2 != -Id at {:?}",
                                alpha + 1,
                                p.coords
                            )));
                        }
                    }
                }
                // Hermitian: J^T g J = g
                let mut jtgj = vec![0.0; d * d];
                for i in 0..d {
                    for k in 0..d {
                        let mut acc = 0.0;
                        for a in 0..d {
                            for b in 0..d {
                                acc += j[a * d + i] * gm[a * d + b] * j[b * d + k];
                            }
                        }
                        jtgj[i * d + k] = acc;
                    }
                }
                for i in 0..d * d {
                    if (jtgj[i] - gm[i]).abs() > 1e-10 {
                        return Err(GeomError::Structural(format!(
                            "base metric is not Hermitian w.r.t. J{}",
                            alpha + 1
                        )));
                    }
                }
            }
            // quaternion relations J_k = J_i J_j, even permutations
            for &(i, j, k) in &[(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
                let prod = mul(&js[i], &js[j]);
                for a in 0..d * d {
                    if (prod[a] - js[k][a]).abs() > 1e-10 {
                        return Err(GeomError::Structural(format!(
                            "J{} != J{} J{} on the base",
                            k + 1,
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Build the 3-Kenmotsu structure on the chart (t, y^1..y^{4m}) with metric
/// dt² + c²e^{2t} g_base, ξ = ∂t, η = dt, φ_α = J_α on base directions.
pub fn warped_product(spec: WarpedProductSpec) -> Result<ThreeKenmotsuStructure> {
    spec.validate()?;
    let base_chart = spec.base_metric.chart().clone();
    let db = base_chart.dim;
    let d = db + 1;
    // keep e^{2t} within safe range for the finite-difference Ricci path
    let t_lo = spec.interval.0.max(-3.0);
    let t_hi = spec.interval.1.min(3.0);
    let mut bounds = Vec::with_capacity(d);
    bounds.push((t_lo, t_hi));
    bounds.extend_from_slice(&base_chart.bounds);
    let (ilo, ihi) = spec.interval;
    let chart = Chart::new("warped", bounds, move |x| x[0] > ilo && x[0] < ihi);

    let c2 = spec.c * spec.c;
    let mut gfns: Vec<ScalarJetFn> = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            gfns.push(if i == 0 && j == 0 {
                Arc::new(|x: &[Jet2]| cst(x, 1.0))
            } else if i == 0 || j == 0 {
                Arc::new(|x: &[Jet2]| cst(x, 0.0))
            } else {
                let base_fn = spec.base_metric.field.comp_fn((i - 1) * db + (j - 1));
                Arc::new(move |x: &[Jet2]| x[0].scale(2.0).exp().scale(c2) * base_fn(&x[1..]))
            });
        }
    }
    let g = MetricField::new(TensorField::new(chart.clone(), (0, 2), gfns));

    let xi = TensorField::coordinate_vector(chart.clone(), 0);
    let mut eta_fns: Vec<ScalarJetFn> = vec![Arc::new(|x: &[Jet2]| cst(x, 1.0))];
    for _ in 1..d {
        eta_fns.push(Arc::new(|x: &[Jet2]| cst(x, 0.0)));
    }
    let eta = TensorField::new(chart.clone(), (0, 1), eta_fns);

    let mut phis: Vec<TensorField> = Vec::with_capacity(3);
    for alpha in 0..3 {
        let mut fns: Vec<ScalarJetFn> = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                fns.push(if i == 0 || j == 0 {
                    Arc::new(|x: &[Jet2]| cst(x, 0.0))
                } else {
                    let jf = spec.base_j[alpha].comp_fn((i - 1) * db + (j - 1));
                    Arc::new(move |x: &[Jet2]| jf(&x[1..]))
                });
            }
        }
        phis.push(TensorField::new(chart.clone(), (1, 1), fns));
    }
    let phis: [TensorField; 3] = phis.try_into().ok().expect("three phis");

    let leaf = WarpedLeafData {
        c: spec.c,
        m: db / 4,
        base_chart,
        base_metric: spec.base_metric,
    };
    ThreeKenmotsuStructure::new(chart, phis, xi, eta, g, Some(leaf))
}

/// Negative control: the same φ tables with the flat metric δ on R^5 and
/// ξ = ∂0. A perfectly good almost contact (even quaternionic) structure
/// that is nowhere Kenmotsu (∇ξ = 0).
pub fn flat_control() -> ThreeKenmotsuStructure {
    let chart = Chart::unrestricted("r5_flat", 5, 2.0);
    let mut gfns: Vec<ScalarJetFn> = Vec::with_capacity(25);
    for i in 0..5 {
        for j in 0..5 {
            let v = if i == j { 1.0 } else { 0.0 };
            gfns.push(Arc::new(move |x: &[Jet2]| cst(x, v)));
        }
    }
    let g = MetricField::new(TensorField::new(chart.clone(), (0, 2), gfns));
    let xi = TensorField::coordinate_vector(chart.clone(), 0);
    let mut eta_fns: Vec<ScalarJetFn> = vec![Arc::new(|x: &[Jet2]| cst(x, 1.0))];
    for _ in 1..5 {
        eta_fns.push(Arc::new(|x: &[Jet2]| cst(x, 0.0)));
    }
    let eta = TensorField::new(chart.clone(), (0, 1), eta_fns);
    let phis = [
        block_endomorphism(chart.clone(), 0, 1),
        block_endomorphism(chart.clone(), 1, 1),
        block_endomorphism(chart.clone(), 2, 1),
    ];
    ThreeKenmotsuStructure::new(chart, phis, xi, eta, g, None).expect("dimension 5")
}

/// Negative control for the Einstein fit: two warped directions with
/// different rates, diag(1, e^{2t}, e^{2t}, e^{2t}, e^{4t}).
pub fn non_einstein_control() -> MetricField {
    let chart = Chart::new("mixed_warp", vec![(-1.0, 1.0); 5], |_| true);
    let mut fns: Vec<ScalarJetFn> = Vec::with_capacity(25);
    for i in 0..5 {
        for j in 0..5 {
            fns.push(if i != j {
                Arc::new(|x: &[Jet2]| cst(x, 0.0))
            } else if i == 0 {
                Arc::new(|x: &[Jet2]| cst(x, 1.0))
            } else if i < 4 {
                Arc::new(|x: &[Jet2]| x[0].scale(2.0).exp())
            } else {
                Arc::new(|x: &[Jet2]| x[0].scale(4.0).exp())
            });
        }
    }
    MetricField::new(TensorField::new(chart, (0, 2), fns))
}

/// The frame {∂/∂x0, δ/δx^i} with δ/δx^i = ∂/∂x^i − η_i ∂/∂x0, defined on
/// charts where ξ is the first coordinate field.
pub struct AdaptedFrame {
    /// ∂/∂x0 (= ξ on an adapted chart).
    pub d0: TensorField,
    /// delta[i-1] = δ/δx^i for i = 1..dim-1.
    pub delta: Vec<TensorField>,
}

/// Build the adapted frame, verifying ξ = ∂/∂x0 at the sample points.
pub fn adapted_frame(s: &AlmostContactMetricStructure, points: &[Point]) -> Result<AdaptedFrame> {
    let d = s.dim();
    for p in points {
        let xiv = s.xi.eval(p)?;
        let mut resid = (xiv[0] - 1.0).abs();
        for v in &xiv[1..] {
            resid = resid.max(v.abs());
        }
        if resid > 1e-12 {
            return Err(GeomError::NotAdapted(format!(
                "xi != d/dx0 at {:?} (residual {resid:.3e})",
                p.coords
            )));
        }
    }
    let d0 = TensorField::coordinate_vector(s.chart.clone(), 0);
    let delta = (1..d)
        .map(|i| {
            let eta_i = s.eta.comp_fn(i);
            let fns: Vec<ScalarJetFn> = (0..d)
                .map(|k| -> ScalarJetFn {
                    if k == 0 {
                        let eta_i = eta_i.clone();
                        Arc::new(move |x: &[Jet2]| -eta_i(x))
                    } else if k == i {
                        Arc::new(|x: &[Jet2]| cst(x, 1.0))
                    } else {
                        Arc::new(|x: &[Jet2]| cst(x, 0.0))
                    }
                })
                .collect();
            TensorField::new(s.chart.clone(), (1, 0), fns)
        })
        .collect();
    Ok(AdaptedFrame { d0, delta })
}

impl AdaptedFrame {
    /// Block metric form and vanishing brackets of the adapted frame:
    /// g(∂0, δ_i) = 0, g(∂0, ∂0) = 1, [∂0, δ_i] = 0, [δ_i, δ_j] = 0.
    pub fn check_relations(
        &self,
        s: &AlmostContactMetricStructure,
        id: &str,
        points: &[Point],
        tol: f64,
        seed: u64,
    ) -> Result<CheckReport> {
        let mut b = ReportBuilder::new(
            id,
            "adapted frame: block metric and vanishing frame brackets",
            tol,
            seed,
        );
        for p in points {
            let d0v = self.d0.eval(p)?;
            let mut worst = (s.g.pair_values(p, &d0v, &d0v)? - 1.0).abs();
            for (i, di) in self.delta.iter().enumerate() {
                let div = di.eval(p)?;
                worst = worst.max(s.g.pair_values(p, &d0v, &div)?.abs());
                worst = worst.max(crate::curvature::frobenius(&lie_bracket(&self.d0, di, p)?));
                for dj in &self.delta[i + 1..] {
                    worst = worst.max(crate::curvature::frobenius(&lie_bracket(di, dj, p)?));
                }
            }
            b.record(worst, Some(p), None);
        }
        b.set_samples(points.len(), 0);
        Ok(b.finish())
    }
}

/// ξ g_ij = 2 g_ij for the block components g_ij = g(δ/δx^i, δ/δx^j) on an
/// adapted chart.
pub fn check_xig_lemma(
    s: &AlmostContactMetricStructure,
    id: &str,
    points: &[Point],
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let frame = adapted_frame(s, points)?;
    let d = s.dim();
    let mut b = ReportBuilder::new(id, "xi(g_ij) = 2 g_ij in the adapted frame", tol, seed);
    // scalar fields g_ij = g(delta_i, delta_j)
    let mut gij = Vec::new();
    for i in 0..d - 1 {
        for j in 0..d - 1 {
            gij.push(TensorField::metric_pair(
                &s.g.field,
                &frame.delta[i],
                &frame.delta[j],
            ));
        }
    }
    for p in points {
        let mut worst = 0.0f64;
        for f in &gij {
            let jet = &f.jet_eval(p)?[0];
            // xi = d/dx0 on an adapted chart
            worst = worst.max((jet.d(0) - 2.0 * jet.value).abs());
        }
        b.record(worst, Some(p), None);
    }
    b.set_samples(points.len(), 0);
    Ok(b.finish())
}

/// The three Levi-Civita component identities in the adapted frame:
///   ∇_{δ_i} δ_j = Γ̄^k_ij δ_k − g_ij ∂0
///   ∇_{∂0} δ_i = ∇_{δ_i} ∂0 = δ_i
///   ∇_{∂0} ∂0 = 0
/// with Γ̄ computed from the block metric via δ-derivatives.
pub fn check_lc_components(
    s: &AlmostContactMetricStructure,
    id: &str,
    points: &[Point],
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let frame = adapted_frame(s, points)?;
    let d = s.dim();
    let db = d - 1;
    let mut b = ReportBuilder::new(
        id,
        "Levi-Civita components in the adapted frame: \
         nabla_{delta_i} delta_j = Gbar^k_ij delta_k - g_ij d0; \
         nabla_{d0} delta_i = delta_i; nabla_{d0} d0 = 0",
        tol,
        seed,
    );
    let mut gij_fields = Vec::new();
    for i in 0..db {
        for j in 0..db {
            gij_fields.push(TensorField::metric_pair(
                &s.g.field,
                &frame.delta[i],
                &frame.delta[j],
            ));
        }
    }
    for p in points {
        let etav = s.eta.eval(p)?;
        let gij_jets: Vec<Jet2> = gij_fields
            .iter()
            .map(|f| Ok(f.jet_eval(p)?.remove(0)))
            .collect::<Result<_>>()?;
        let gij = |i: usize, j: usize| gij_jets[i * db + j].value;
        // delta-derivative of the block components:
        // δ_m g_ij = ∂_{m+1} g_ij − η_{m+1} ∂_0 g_ij
        let dgij = |m: usize, i: usize, j: usize| {
            gij_jets[i * db + j].d(m + 1) - etav[m + 1] * gij_jets[i * db + j].d(0)
        };
        let gmat = nalgebra::DMatrix::from_fn(db, db, &gij);
        let ginv = nalgebra::Cholesky::new(gmat)
            .ok_or_else(|| GeomError::DegenerateMetric {
                point: p.coords.clone(),
            })?
            .inverse();
        let gamma_bar = |k: usize, i: usize, j: usize| -> f64 {
            let mut acc = 0.0;
            for l in 0..db {
                acc += ginv[(k, l)] * (dgij(i, l, j) + dgij(j, i, l) - dgij(l, i, j));
            }
            0.5 * acc
        };

        let delta_vals: Vec<Vec<f64>> = frame
            .delta
            .iter()
            .map(|f| f.eval(p))
            .collect::<Result<_>>()?;
        let d0v = frame.d0.eval(p)?;

        let mut worst = 0.0f64;
        // identity 3
        let n00 = covariant_derivative(&s.g, &frame.d0, &frame.d0, p)?;
        worst = worst.max(s.g.norm(p, &n00)?);
        for i in 0..db {
            // identity 2, both orders
            for (xf, tf) in [(&frame.d0, &frame.delta[i]), (&frame.delta[i], &frame.d0)] {
                let nd = covariant_derivative(&s.g, tf, xf, p)?;
                let resid: Vec<f64> = nd.iter().zip(&delta_vals[i]).map(|(a, b)| a - b).collect();
                worst = worst.max(s.g.norm(p, &resid)?);
            }
            // identity 1
            for j in 0..db {
                let nd = covariant_derivative(&s.g, &frame.delta[j], &frame.delta[i], p)?;
                let mut rhs = vec![0.0; d];
                for k in 0..db {
                    let c = gamma_bar(k, i, j);
                    for a in 0..d {
                        rhs[a] += c * delta_vals[k][a];
                    }
                }
                for a in 0..d {
                    rhs[a] -= gij(i, j) * d0v[a];
                }
                let resid: Vec<f64> = nd.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                worst = worst.max(s.g.norm(p, &resid)?);
            }
        }
        b.record(worst, Some(p), None);
    }
    b.set_samples(points.len(), 0);
    Ok(b.finish())
}

/// Versioned manifold definition, the JSON schema accepted by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawManifoldSpec", into = "RawManifoldSpec")]
pub enum ManifoldSpec {
    ExampleR5 {
        component: Component,
    },
    WarpedProduct {
        c: f64,
        m: usize,
        interval: (f64, f64),
    },
    /// Negative control: flat metric, same φ tables; not Kenmotsu.
    FlatControl,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifoldSpec {
    r#type: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    component: Option<Component>,
}

impl TryFrom<RawManifoldSpec> for ManifoldSpec {
    type Error = String;
    fn try_from(raw: RawManifoldSpec) -> std::result::Result<Self, String> {
        match raw.r#type.as_str() {
            "example_r5" => {
                if raw.c.is_some() || raw.m.is_some() || raw.interval.is_some() {
                    return Err("example_r5 accepts only the `component` key".into());
                }
                Ok(ManifoldSpec::ExampleR5 {
                    component: raw.component.unwrap_or_default(),
                })
            }
            "warped_product" => {
                if raw.component.is_some() {
                    return Err("warped_product does not accept `component`".into());
                }
                let interval = raw.interval.unwrap_or([-3.0, 3.0]);
                Ok(ManifoldSpec::WarpedProduct {
                    c: raw.c.unwrap_or(1.0),
                    m: raw.m.unwrap_or(1),
                    interval: (interval[0], interval[1]),
                })
            }
            "flat_control" => {
                if raw.c.is_some()
                    || raw.m.is_some()
                    || raw.interval.is_some()
                    || raw.component.is_some()
                {
                    return Err("flat_control takes no parameters".into());
                }
                Ok(ManifoldSpec::FlatControl)
            }
            other => Err(format!("unknown manifold type `{other}`")),
        }
    }
}

impl From<ManifoldSpec> for RawManifoldSpec {
    fn from(spec: ManifoldSpec) -> Self {
        match spec {
            ManifoldSpec::ExampleR5 { component } => RawManifoldSpec {
                r#type: "example_r5".into(),
                c: None,
                m: None,
                interval: None,
                component: Some(component),
            },
            ManifoldSpec::WarpedProduct { c, m, interval } => RawManifoldSpec {
                r#type: "warped_product".into(),
                c: Some(c),
                m: Some(m),
                interval: Some([interval.0, interval.1]),
                component: None,
            },
            ManifoldSpec::FlatControl => RawManifoldSpec {
                r#type: "flat_control".into(),
                c: None,
                m: None,
                interval: None,
                component: None,
            },
        }
    }
}

impl ManifoldSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeomError::ManifoldDef(e.to_string()))
    }

    /// Builtin names accepted by the CLI alongside definition files.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "example_r5" => Some(ManifoldSpec::ExampleR5 {
                component: Component::Positive,
            }),
            "warped_flat" => Some(ManifoldSpec::WarpedProduct {
                c: 1.0,
                m: 1,
                interval: (-3.0, 3.0),
            }),
            "flat_control" => Some(ManifoldSpec::FlatControl),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<ThreeKenmotsuStructure> {
        match self {
            ManifoldSpec::ExampleR5 { component } => Ok(example_r5_component(*component)),
            ManifoldSpec::WarpedProduct { c, m, interval } => {
                let mut spec = WarpedProductSpec::flat(*m, *c)?;
                spec.interval = *interval;
                warped_product(spec)
            }
            ManifoldSpec::FlatControl => Ok(flat_control()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Lcg64;

    #[test]
    fn phi_tables_match() {
        // phi1(X3) = X4, phi2(X1) = X3, phi3(X2) = X3 (frame = coordinates)
        let m = example_r5();
        let p = Point::new(vec![0.8, 0.1, -0.2, 0.4, 1.0]);
        let e = |i: usize| {
            let mut v = vec![0.0; 5];
            v[i] = 1.0;
            v
        };
        let apply = |alpha: usize, v: &[f64]| {
            let mat = m.phis[alpha].eval(&p).unwrap();
            (0..5)
                .map(|i| (0..5).map(|j| mat[i * 5 + j] * v[j]).sum::<f64>())
                .collect::<Vec<_>>()
        };
        assert_eq!(apply(0, &e(3)), e(4));
        assert_eq!(apply(1, &e(1)), e(3));
        assert_eq!(apply(2, &e(2)), e(3));
        // phi_k = phi_i phi_j spot check: phi1 phi2 (X1) = phi1(X3) = X4 = phi3(X1)
        assert_eq!(apply(0, &apply(1, &e(1))), apply(2, &e(1)));
    }

    #[test]
    fn frame_is_orthonormal() {
        let m = example_r5();
        let p = Point::new(vec![0.5, 1.0, 2.0, 3.0, 4.0]);
        // X2 = x0 ∂2 has unit norm
        let x2 = [0.0, 0.0, 0.5, 0.0, 0.0];
        assert!((m.g.pair_values(&p, &x2, &x2).unwrap() - 1.0).abs() < 1e-14);
        // eta(xi) = 1
        let xiv = m.xi.eval(&p).unwrap();
        let etav = m.eta.eval(&p).unwrap();
        let e: f64 = xiv.iter().zip(&etav).map(|(a, b)| a * b).sum();
        assert!((e - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frame_brackets() {
        // [xi, X4] = -X4 and [X1, X2] = 0
        let m = example_r5();
        let mut rng = Lcg64::new(5);
        let p = m.chart.sample(&mut rng);
        let x0 = p.coords[0];
        let frame_field = |i: usize| {
            let fns: Vec<ScalarJetFn> = (0..5)
                .map(|k| -> ScalarJetFn {
                    if k == i {
                        Arc::new(|x: &[Jet2]| x[0].clone())
                    } else {
                        Arc::new(|x: &[Jet2]| cst(x, 0.0))
                    }
                })
                .collect();
            TensorField::new(m.chart.clone(), (1, 0), fns)
        };
        let x4 = frame_field(4);
        let br = lie_bracket(&m.xi, &x4, &p).unwrap();
        // -X4 has components (0,0,0,0,-x0)
        assert!((br[4] + x0).abs() < 1e-12);
        let br2 = lie_bracket(&frame_field(1), &frame_field(2), &p).unwrap();
        assert!(crate::curvature::frobenius(&br2) < 1e-12);
    }

    #[test]
    fn negative_component_is_kenmotsu_too() {
        let m = example_r5_component(Component::Negative);
        let mut rng = Lcg64::new(13);
        let points = m.chart.sample_many(&mut rng, 4);
        assert!(points.iter().all(|p| p.coords[0] < 0.0));
        let rep = m
            .structure(0)
            .check_kenmotsu(
                "eq1",
                &mut crate::contact::Sampling {
                    points: &points,
                    n_vectors: 2,
                    rng: &mut rng,
                    seed: 13,
                },
                1e-10,
            )
            .unwrap();
        assert!(rep.passed(), "residual {}", rep.max_residual);
    }

    #[test]
    fn flat_base_quaternion_table() {
        let (_, js) = flat_quaternion_base(1).unwrap();
        let p = Point::new(vec![0.0; 4]);
        let j2 = js[1].eval(&p).unwrap();
        // J2(e0) = e2
        assert_eq!(j2[2 * 4], 1.0);
        // J1 J2 = J3 on basis vectors
        let j1 = js[0].eval(&p).unwrap();
        let j3 = js[2].eval(&p).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let prod: f64 = (0..4).map(|k| j1[i * 4 + k] * j2[k * 4 + j]).sum();
                assert_eq!(prod, j3[i * 4 + j]);
            }
        }
    }

    #[test]
    fn flat_base_m2_blocks() {
        let (_, js) = flat_quaternion_base(2).unwrap();
        let p = Point::new(vec![0.0; 8]);
        let j1 = js[0].eval(&p).unwrap();
        // J1^2 = -Id8
        for i in 0..8 {
            for j in 0..8 {
                let prod: f64 = (0..8).map(|k| j1[i * 8 + k] * j1[k * 8 + j]).sum();
                let expect = if i == j { -1.0 } else { 0.0 };
                assert_eq!(prod, expect);
            }
        }
        assert!(flat_quaternion_base(0).is_err());
    }

    #[test]
    fn warped_rejects_broken_quaternion_triple() {
        let mut spec = WarpedProductSpec::flat(1, 1.0).unwrap();
        spec.base_j[2] = spec.base_j[2].scale(-1.0);
        assert!(matches!(
            warped_product(spec),
            Err(GeomError::Structural(_))
        ));
    }

    #[test]
    fn warped_metric_matches_r5_under_change_of_variables() {
        // x0 = e^{-t} maps dt^2 + e^{2t} δ to x0^{-2} δ
        let w = ManifoldSpec::builtin("warped_flat")
            .unwrap()
            .build()
            .unwrap();
        let r5 = example_r5();
        let t = 0.7;
        let y = [0.3, -0.2, 0.8, 0.1];
        let pw = Point::new(vec![t, y[0], y[1], y[2], y[3]]);
        let pr = Point::new(vec![(-t).exp(), y[0], y[1], y[2], y[3]]);
        let gw = w.g.matrix(&pw).unwrap();
        let gr = r5.g.matrix(&pr).unwrap();
        // base block must agree; the 0-direction rescales by dx0/dt = -x0
        let x0 = (-t).exp();
        for i in 1..5 {
            for j in 1..5 {
                assert!((gw[(i, j)] - gr[(i, j)]).abs() < 1e-12);
            }
        }
        assert!((gw[(0, 0)] - gr[(0, 0)] * x0 * x0).abs() < 1e-12);
    }

    #[test]
    fn adapted_frame_requires_xi_first() {
        let r5 = example_r5();
        let mut rng = Lcg64::new(0);
        let pts = r5.chart.sample_many(&mut rng, 3);
        // raw R^5 chart has xi = -x0 ∂0 != ∂0
        assert!(matches!(
            adapted_frame(&r5.structure(0), &pts),
            Err(GeomError::NotAdapted(_))
        ));
        // warped chart is adapted and eta_i = 0 so delta_i = ∂_i
        let w = ManifoldSpec::builtin("warped_flat")
            .unwrap()
            .build()
            .unwrap();
        let pts = w.chart.sample_many(&mut rng, 3);
        let frame = adapted_frame(&w.structure(0), &pts).unwrap();
        let dv = frame.delta[0].eval(&pts[0]).unwrap();
        assert_eq!(dv, vec![0.0, 1.0, 0.0, 0.0, 0.0]);
        let rep = frame
            .check_relations(&w.structure(0), "frame.adapted", &pts, 1e-11, 0)
            .unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn xig_lemma_on_warped_chart() {
        let w = ManifoldSpec::builtin("warped_flat")
            .unwrap()
            .build()
            .unwrap();
        let mut rng = Lcg64::new(1);
        let pts = w.chart.sample_many(&mut rng, 10);
        let rep = check_xig_lemma(&w.structure(0), "lemma1.xig", &pts, 1e-10, 1).unwrap();
        assert!(rep.passed(), "residual {}", rep.max_residual);
    }

    #[test]
    fn xig_lemma_fails_on_product_metric() {
        // f ≡ 1 (unwarped product): xi g_ij = 0 != 2 g_ij
        let chart = Chart::unrestricted("product", 5, 2.0);
        let mut gfns: Vec<ScalarJetFn> = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                let v = if i == j { 1.0 } else { 0.0 };
                gfns.push(Arc::new(move |x: &[Jet2]| cst(x, v)));
            }
        }
        let g = MetricField::new(TensorField::new(chart.clone(), (0, 2), gfns));
        let flat = flat_control();
        let s = AlmostContactMetricStructure::new(
            chart,
            flat.phis[0].clone(),
            flat.xi.clone(),
            flat.eta.clone(),
            g,
        );
        let mut rng = Lcg64::new(2);
        let pts = s.chart.sample_many(&mut rng, 5);
        let rep = check_xig_lemma(&s, "lemma1.xig", &pts, 1e-10, 2).unwrap();
        assert!(!rep.passed());
        assert!(rep.max_residual > 1.0);
    }

    #[test]
    fn lc_components_on_warped_chart() {
        let w = ManifoldSpec::builtin("warped_flat")
            .unwrap()
            .build()
            .unwrap();
        let mut rng = Lcg64::new(3);
        let pts = w.chart.sample_many(&mut rng, 10);
        let rep = check_lc_components(&w.structure(0), "thm2.lc", &pts, 1e-9, 3).unwrap();
        assert!(rep.passed(), "residual {}", rep.max_residual);
    }

    #[test]
    fn manifold_json_schema() {
        let spec = ManifoldSpec::from_json(
            r#"{"type": "warped_product", "c": 2.0, "m": 1, "interval": [-2.0, 2.0]}"#,
        )
        .unwrap();
        assert_eq!(
            spec,
            ManifoldSpec::WarpedProduct {
                c: 2.0,
                m: 1,
                interval: (-2.0, 2.0)
            }
        );
        // defaults
        let spec = ManifoldSpec::from_json(r#"{"type": "example_r5"}"#).unwrap();
        assert_eq!(
            spec,
            ManifoldSpec::ExampleR5 {
                component: Component::Positive
            }
        );
        // unknown keys rejected
        assert!(ManifoldSpec::from_json(r#"{"type": "example_r5", "warp": 2}"#).is_err());
        // keys of the other variant rejected
        assert!(ManifoldSpec::from_json(r#"{"type": "example_r5", "c": 1.0}"#).is_err());
        // unknown type rejected
        assert!(ManifoldSpec::from_json(r#"{"type": "sphere"}"#).is_err());
        // round-trip
        let spec = ManifoldSpec::builtin("warped_flat").unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(ManifoldSpec::from_json(&text).unwrap(), spec);
    }
}

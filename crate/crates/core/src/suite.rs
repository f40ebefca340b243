//! The full verification suite: runs every check in a fixed order with a
//! single deterministic sampling stream and stable check ids.

use crate::contact::Sampling;
use crate::error::{GeomError, Result};
use crate::field::TensorField;
use crate::kenmotsu3::ThreeKenmotsuStructure;
use crate::manifolds::{check_lc_components, check_xig_lemma, ManifoldSpec};
use crate::report::{CheckReport, ReportBuilder};
use crate::rng::Lcg64;
use std::collections::BTreeMap;

/// Every check id the suite can emit, in emission order. The ids are a
/// stable public contract: renaming one is a breaking change.
pub const CHECK_IDS: &[&str] = &[
    "construct",
    "eq0.axioms.phi1",
    "eq0.axioms.phi2",
    "eq0.axioms.phi3",
    "kenmotsu.eq1.phi1",
    "kenmotsu.eq1.phi2",
    "kenmotsu.eq1.phi3",
    "reeb.eq2",
    "forms.deta",
    "forms.domega.phi1",
    "forms.domega.phi2",
    "forms.domega.phi3",
    "def31.composition",
    "def31.anticommute",
    "thm4.roundtrip",
    "lemma1.xig",
    "thm2.lc",
    "gauss.cur1",
    "gauss.ric",
    "thm6.einstein",
    "thm5.ricci_parallel",
    "thm.h_sum",
    "vol.nondegenerate",
];

fn default_tolerance(id: &str) -> f64 {
    match id {
        "construct" | "vol.nondegenerate" => 1.0,
        "thm2.lc" | "thm6.einstein" | "thm.h_sum" => 1e-9,
        "gauss.cur1" | "gauss.ric" => 1e-8,
        "thm5.ricci_parallel" => 1e-5,
        _ => 1e-10,
    }
}

/// Configuration for one suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub manifold: ManifoldSpec,
    pub n_points: usize,
    pub n_vectors: usize,
    pub seed: u64,
    /// Per-check tolerance overrides keyed by check id.
    pub tol_overrides: BTreeMap<String, f64>,
}

impl SuiteConfig {
    pub fn new(manifold: ManifoldSpec) -> Self {
        Self {
            manifold,
            n_points: 100,
            n_vectors: 8,
            seed: 0,
            tol_overrides: BTreeMap::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_points == 0 {
            return Err(GeomError::Usage("--points must be at least 1".into()));
        }
        for (k, v) in &self.tol_overrides {
            if !CHECK_IDS.contains(&k.as_str()) {
                return Err(GeomError::Usage(format!(
                    "unknown check id in --tol: `{k}`"
                )));
            }
            if !(*v > 0.0 && v.is_finite()) {
                return Err(GeomError::Usage(format!(
                    "tolerance for `{k}` must be a positive finite number"
                )));
            }
        }
        Ok(())
    }

    fn tol(&self, id: &str) -> f64 {
        self.tol_overrides
            .get(id)
            .copied()
            .unwrap_or_else(|| default_tolerance(id))
    }
}

pub fn suite_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed())
}

/// Run the suite. A failed construction yields a single failed `construct`
/// report; sampling/usage problems are returned as errors instead.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let mut reports = Vec::new();

    let mut construct = ReportBuilder::new(
        "construct",
        "the manifold definition builds a valid structure triple",
        cfg.tol("construct"),
        cfg.seed,
    );
    let m = match cfg.manifold.build() {
        Ok(m) => {
            construct.record(0.0, None, None);
            reports.push(construct.finish());
            m
        }
        Err(GeomError::Usage(msg)) => return Err(GeomError::Usage(msg)),
        Err(e) => {
            let mut b = ReportBuilder::new(
                "construct",
                format!("construction failed: {e}"),
                cfg.tol("construct"),
                cfg.seed,
            );
            b.record(1.0, None, None);
            reports.push(b.finish());
            return Ok(reports);
        }
    };

    let mut rng = Lcg64::new(cfg.seed);
    let points = m.chart.sample_many(&mut rng, cfg.n_points);
    macro_rules! sampling {
        () => {
            Sampling {
                points: &points,
                n_vectors: cfg.n_vectors,
                rng: &mut rng,
                seed: cfg.seed,
            }
        };
    }

    // structure axioms and the Kenmotsu condition, per phi
    for alpha in 0..3 {
        let id = format!("eq0.axioms.phi{}", alpha + 1);
        let rep = m
            .structure(alpha)
            .check_almost_contact(&id, &mut sampling!(), cfg.tol(&id))?;
        reports.push(rep);
    }
    for alpha in 0..3 {
        let id = format!("kenmotsu.eq1.phi{}", alpha + 1);
        let rep = m
            .structure(alpha)
            .check_kenmotsu(&id, &mut sampling!(), cfg.tol(&id))?;
        reports.push(rep);
    }

    // Reeb identities (shared xi/eta, checked once)
    reports.push(m.structure(0).check_reeb_identities(
        "reeb.eq2",
        &mut sampling!(),
        cfg.tol("reeb.eq2"),
    )?);

    // exterior-derivative identities
    for alpha in 0..3 {
        let omega_id = format!("forms.domega.phi{}", alpha + 1);
        let (deta, domega) = m.structure(alpha).check_form_identities(
            ("forms.deta", &omega_id),
            &mut sampling!(),
            cfg.tol(&omega_id),
        )?;
        if alpha == 0 {
            let mut deta = deta;
            deta.tolerance = cfg.tol("forms.deta");
            deta.verdict = if deta.max_residual < deta.tolerance {
                crate::report::Verdict::Pass
            } else {
                crate::report::Verdict::Fail
            };
            reports.push(deta);
        }
        reports.push(domega);
    }

    // quaternionic triple relations
    let (comp, anti) = m.verify_triple(
        ("def31.composition", "def31.anticommute"),
        &mut sampling!(),
        cfg.tol("def31.composition")
            .min(cfg.tol("def31.anticommute")),
    )?;
    reports.push(comp);
    reports.push(anti);

    // composing the first two structures reproduces the third
    let roundtrip = thm4_roundtrip(&m, cfg, &reports, &points)?;
    reports.push(roundtrip);

    // adapted-frame checks, only on charts where xi is the first coordinate
    // field
    match check_xig_lemma(
        &m.structure(0),
        "lemma1.xig",
        &points,
        cfg.tol("lemma1.xig"),
        cfg.seed,
    ) {
        Ok(rep) => {
            reports.push(rep);
            reports.push(check_lc_components(
                &m.structure(0),
                "thm2.lc",
                &points,
                cfg.tol("thm2.lc"),
                cfg.seed,
            )?);
        }
        Err(GeomError::NotAdapted(_)) => {}
        Err(e) => return Err(e),
    }

    // Gauss relations, only for warped-product sources
    if m.warped.is_some() {
        let (cur, ric) = m.check_gauss_relations(
            ("gauss.cur1", "gauss.ric"),
            &mut sampling!(),
            cfg.tol("gauss.cur1").min(cfg.tol("gauss.ric")),
        )?;
        reports.push(cur);
        reports.push(ric);
    }

    // Einstein fit
    {
        let id = "thm6.einstein";
        let (lambda, resid) = ThreeKenmotsuStructure::einstein_fit(&m.g, &points)?;
        let mut b = ReportBuilder::new(
            id,
            format!(
                "Einstein property: Ric = lambda g with fitted lambda = {lambda:.6} \
                 (expected -(dim-1)); residual = max |Ric - lambda g| / |g|"
            ),
            cfg.tol(id),
            cfg.seed,
        );
        b.record(resid, Some(&points[0]), None);
        b.set_samples(points.len(), 0);
        reports.push(b.finish());
    }

    // parallel Ricci along random directions
    {
        let id = "thm5.ricci_parallel";
        let mut b = ReportBuilder::new(
            id,
            "parallel Ricci tensor: |nabla_X Ric| / (|Ric| |X|) = 0 \
             (finite-difference derivative)",
            cfg.tol(id),
            cfg.seed,
        );
        // the FD path is ~100x a jet check; cap the point count
        let capped = &points[..points.len().min(25)];
        for p in capped {
            let dir = rng.unit_vector(m.dim());
            let defect = ThreeKenmotsuStructure::ricci_parallel_defect(&m.g, p, &dir)?;
            b.record(defect, Some(p), Some(&dir));
        }
        b.set_samples(capped.len(), 1);
        reports.push(b.finish());
    }

    // holomorphic sectional curvature sum
    reports.push(m.check_h_sum("thm.h_sum", &mut sampling!(), cfg.tol("thm.h_sum"))?);

    // nondegeneracy of the quaternionic volume
    {
        let id = "vol.nondegenerate";
        let mut b = ReportBuilder::new(
            id,
            "quaternionic volume: Omega = sum Omega_a ^ Omega_a has \
             (Omega^n ^ eta)(frame) != 0; residual = 1e-8 / |volume|",
            cfg.tol(id),
            cfg.seed,
        );
        for p in &points {
            let (_, vol) = m.quaternionic_volume(p)?;
            b.record(1e-8 / vol.abs().max(1e-300), Some(p), None);
        }
        b.set_samples(points.len(), 0);
        reports.push(b.finish());
    }

    Ok(reports)
}

/// Rebuild the third structure as phi1 . phi2 and compare against the
/// supplied third; preconditions (both Kenmotsu, anticommuting) reuse the
/// residuals already measured by the earlier checks.
fn thm4_roundtrip(
    m: &ThreeKenmotsuStructure,
    cfg: &SuiteConfig,
    earlier: &[CheckReport],
    points: &[crate::chart::Point],
) -> Result<CheckReport> {
    let id = "thm4.roundtrip";
    let tol = cfg.tol(id);
    let pre_resid = earlier
        .iter()
        .filter(|r| {
            matches!(
                r.id.as_str(),
                "kenmotsu.eq1.phi1" | "kenmotsu.eq1.phi2" | "def31.anticommute"
            )
        })
        .map(|r| r.max_residual)
        .fold(0.0, f64::max);
    let mut b = ReportBuilder::new(
        id,
        "composing the first two structures yields the third: phi1 . phi2 = phi3",
        tol,
        cfg.seed,
    );
    if pre_resid >= tol.max(1e-10) {
        // preconditions failed; the composition theorem does not apply
        b.record(pre_resid, None, None);
        b.set_samples(points.len(), 0);
        return Ok(b.finish());
    }
    let composed = TensorField::compose_endo(&m.phis[0], &m.phis[1]);
    for p in points {
        let a = composed.eval(p)?;
        let c = m.phis[2].eval(p)?;
        let resid = a
            .iter()
            .zip(&c)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        b.record(resid, Some(p), None);
    }
    b.set_samples(points.len(), 0);
    Ok(b.finish())
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("point {point:?} lies outside the chart domain of `{chart}`")]
    OutsideDomain { chart: String, point: Vec<f64> },
    #[error("metric is numerically degenerate at {point:?}")]
    DegenerateMetric { point: Vec<f64> },
    #[error("unsupported tensor variance ({0}, {1})")]
    UnsupportedVariance(usize, usize),
    #[error("vectors span a degenerate plane (denominator {0:.3e})")]
    DegeneratePlane(f64),
    #[error("form degree {degree} exceeds chart dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("chart is not adapted: {0}")]
    NotAdapted(String),
    #[error("structural invariant violated: {0}")]
    Structural(String),
    #[error("vector is not in the contact distribution: |eta(v)| = {0:.3e}")]
    NotHorizontal(f64),
    #[error("near-zero vector (norm {0:.3e})")]
    DegenerateVector(f64),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid manifold definition: {0}")]
    ManifoldDef(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate polygon")]
    DegeneratePolygon,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("domain is not a concave moment domain")]
    NotConcave,
    #[error("domain is not a convex moment domain")]
    NotConvex,
    #[error("weight tree is not polytopal: cut at node {node} does not fit")]
    Polytopality { node: String },
    #[error("infinitely many (-1)-classes for n = {0}")]
    InfinitelyManyClasses(usize),
    #[error("not pseudo-effective")]
    NotPseudoEffective,
    #[error("not big")]
    NotBig,
    #[error("not pseudo-polarized: {0}")]
    NotPseudoPolarized(String),
    #[error("not A-generic: A.E = {0}")]
    NotAGeneric(String),
    #[error("irrational endpoint in [{lo}, {hi}]")]
    IrrationalEndpoint { lo: String, hi: String },
    #[error("weight sequence not computable")]
    NotComputable,
    #[error("search box {0} too small to certify the optimum")]
    BoxTooSmall(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("nonpositive parameter: {0}")]
    NonPositive(String),
    #[error("rank {0} out of range")]
    RankOutOfRange(usize),
    #[error("iteration did not converge")]
    NoConvergence,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-readable tag used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegeneratePolygon => "degenerate_polygon",
            Error::NotUnimodular(_) => "not_unimodular",
            Error::NotConcave => "not_concave",
            Error::NotConvex => "not_convex",
            Error::Polytopality { .. } => "polytopality",
            Error::InfinitelyManyClasses(_) => "infinitely_many_classes",
            Error::NotPseudoEffective => "not_pseudo_effective",
            Error::NotBig => "not_big",
            Error::NotPseudoPolarized(_) => "not_pseudo_polarized",
            Error::NotAGeneric(_) => "not_a_generic",
            Error::IrrationalEndpoint { .. } => "irrational_endpoint",
            Error::NotComputable => "not_computable",
            Error::BoxTooSmall(_) => "box_too_small",
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::NonPositive(_) => "nonpositive",
            Error::RankOutOfRange(_) => "rank_out_of_range",
            Error::NoConvergence => "no_convergence",
            Error::Invalid(_) => "invalid_input",
        }
    }

    /// True for malformed input rather than a mathematical obstruction.
    pub fn is_malformed(&self) -> bool {
        matches!(self, Error::Invalid(_) | Error::DimensionMismatch(..))
    }
}

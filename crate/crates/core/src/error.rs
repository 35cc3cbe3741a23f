use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants fall into three families, mirrored by the CLI exit codes:
/// input problems (bad files, bad regions), mathematical-consistency
/// failures (a property that must hold did not), and search exhaustion.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not invariant or the map is not injective on it")]
    NotInvariant,
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("exactness violated: {0}")]
    ExactnessViolation(String),
    #[error("cube outside the map domain: {0}")]
    OutOfDomain(String),
    #[error("multivalued map is not acyclic: {0}")]
    NotAcyclic(String),
    #[error("enclosure leaks outside N from a non-exit cube: {0}")]
    TightnessFailure(String),
    #[error("invalid filtration pair: {0}")]
    InvalidPair(String),
    #[error("pairs are not nested: {0}")]
    NotNested(String),
    #[error("no shift-equivalence lag found up to {0}")]
    NoLagFound(usize),
    #[error("shift equivalence identities fail: {0}")]
    ShiftEquivalenceViolation(String),
    #[error("conjugacy violated: {0}")]
    ConjugacyViolation(String),
    #[error("algebraic inverse of j_* fails in degree {degree}: {detail}")]
    AlgebraicInverseFailure { degree: usize, detail: String },
    #[error("canonical decomposition of the receiver homology fails: {0}")]
    DecompositionFailure(String),
    #[error("pair is not admissible within bounds: {0}")]
    NotAdmissibleWithinBounds(String),
    #[error("selector leaves N: {0}")]
    SelectorLeak(String),
    #[error("components are not separable: {0}")]
    ComponentsNotSeparable(String),
    #[error("cross-validation failed: {0}")]
    CrossValidationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Module-qualified code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::FieldMismatch(..) => "linalg.field_mismatch",
            Error::InvalidField(_) => "linalg.invalid_field",
            Error::DimensionMismatch(_) => "linalg.dimension_mismatch",
            Error::NotInvariant => "linalg.not_invariant",
            Error::NotInvertible(_) => "algebra.not_invertible",
            Error::NotEquivariant(_) => "algebra.not_equivariant",
            Error::NotExact(_) => "algebra.not_exact",
            Error::InternalInconsistency(_) => "algebra.internal_inconsistency",
            Error::NotSubcomplex(_) => "cubical.not_subcomplex",
            Error::NotChainMap(_) => "homology.not_chain_map",
            Error::ExactnessViolation(_) => "homology.exactness_violation",
            Error::OutOfDomain(_) => "dynamics.out_of_domain",
            Error::NotAcyclic(_) => "dynamics.not_acyclic",
            Error::TightnessFailure(_) => "dynamics.tightness_failure",
            Error::InvalidPair(_) => "dynamics.invalid_pair",
            Error::NotNested(_) => "dynamics.not_nested",
            Error::NoLagFound(_) => "dynamics.no_lag_found",
            Error::ShiftEquivalenceViolation(_) => "dynamics.shift_equivalence_violation",
            Error::ConjugacyViolation(_) => "index.conjugacy_violation",
            Error::AlgebraicInverseFailure { .. } => "emit.algebraic_inverse_failure",
            Error::DecompositionFailure(_) => "receive.decomposition_failure",
            Error::NotAdmissibleWithinBounds(_) => "receive.not_admissible_within_bounds",
            Error::SelectorLeak(_) => "receive.selector_leak",
            Error::ComponentsNotSeparable(_) => "connection.components_not_separable",
            Error::CrossValidationFailure(_) => "connection.cross_validation_failure",
            Error::Parse(_) => "system.parse",
        }
    }

    /// True when the failure means a property forced by the theory did not
    /// hold for the combinatorial data (as opposed to bad input or a bounded
    /// search running out).
    pub fn is_consistency_failure(&self) -> bool {
        matches!(
            self,
            Error::NotInvariant
                | Error::NotInvertible(_)
                | Error::InternalInconsistency(_)
                | Error::NotChainMap(_)
                | Error::ExactnessViolation(_)
                | Error::NotAcyclic(_)
                | Error::TightnessFailure(_)
                | Error::ShiftEquivalenceViolation(_)
                | Error::ConjugacyViolation(_)
                | Error::AlgebraicInverseFailure { .. }
                | Error::DecompositionFailure(_)
                | Error::SelectorLeak(_)
                | Error::ComponentsNotSeparable(_)
                | Error::CrossValidationFailure(_)
        )
    }
}

use std::fmt;

/// Errors across the lattice / form / census / deformation layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Elementary-form request outside the fixed catalog.
    UnknownElementaryForm(String),
    /// A form failed a construction axiom (orders, symmetry, parity).
    InvalidForm(String),
    /// The bilinear form is degenerate; split off the radical first.
    DegenerateBilinearForm,
    /// The Gauss sum did not match any of the eight admissible values.
    GaussSumMismatch,
    /// Operation requires a group of exponent 2.
    NotTwoElementary(String),
    /// Brute-force isomorphism search refused on a group this large.
    OracleScaleExceeded { size: usize, bound: usize },
    /// Gram matrix is not symmetric / not even / singular.
    InvalidGram(String),
    /// Discriminant group has an invariant factor outside {1,2,4,8}.
    UnsupportedInvariantFactor(i64),
    /// Root enumeration would be unbounded for this gram matrix.
    RootSearchUnsupported(String),
    UnknownSurface(String),
    SubgroupNotInCatalog(String),
    /// A census tuple violates its structural preconditions.
    InvalidTuple(String),
    /// A census is missing the partner of one of its tuples.
    RelatedMissing(String),
    /// (r, a) do not give integral genus/component counts.
    InadmissibleTopology { r: i64, a: i64 },
    /// Bad input to the deformation layer (odd n, surface mismatch, range).
    InvalidDeformation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownElementaryForm(s) => write!(f, "unknown elementary form: {s}"),
            Error::InvalidForm(s) => write!(f, "invalid finite quadratic form: {s}"),
            Error::DegenerateBilinearForm => write!(
                f,
                "bilinear form is degenerate; apply radical decomposition first"
            ),
            Error::GaussSumMismatch => write!(f, "Gauss sum matches no signature residue"),
            Error::NotTwoElementary(s) => write!(f, "not a 2-elementary group: {s}"),
            Error::OracleScaleExceeded { size, bound } => {
                write!(f, "oracle scale exceeded: group order {size} > {bound}")
            }
            Error::InvalidGram(s) => write!(f, "invalid gram matrix: {s}"),
            Error::UnsupportedInvariantFactor(d) => {
                write!(f, "invariant factor {d} outside supported range")
            }
            Error::RootSearchUnsupported(s) => write!(f, "root search unsupported: {s}"),
            Error::UnknownSurface(s) => write!(f, "unknown surface: {s}"),
            Error::SubgroupNotInCatalog(s) => write!(f, "subgroup not in catalog: {s}"),
            Error::InvalidTuple(s) => write!(f, "invalid census tuple: {s}"),
            Error::RelatedMissing(s) => write!(f, "census inconsistency, partner missing: {s}"),
            Error::InadmissibleTopology { r, a } => {
                write!(f, "inadmissible (r, a) = ({r}, {a}) for real-part topology")
            }
            Error::InvalidDeformation(s) => write!(f, "invalid deformation input: {s}"),
        }
    }
}

impl std::error::Error for Error {}

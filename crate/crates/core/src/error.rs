use thiserror::Error;

/// Sizes of enumerated spaces can exceed `u64` (operator spaces are
/// `|P|^|P|`), so they are tracked as saturating `u128`.
pub type SpaceSize = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a lattice: {reason}")]
    NotALattice { reason: String },

    #[error("not residuated: law `{law}` fails at {witness}")]
    NotResiduated { law: &'static str, witness: String },

    #[error("carrier has {size} elements, limit is {limit}")]
    CarrierTooLarge { size: usize, limit: usize },

    #[error("operands belong to different universes")]
    UniverseMismatch,

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("value {value} at {location} exceeds its bound {bound}")]
    BoundViolation {
        location: String,
        value: String,
        bound: String,
    },

    #[error("operation requires a GL-quantale")]
    RequiresGL,

    #[error("operation requires an MV-algebra")]
    RequiresMV,

    #[error("operation requires a constant universe")]
    RequiresConstantUniverse,

    #[error("powerset has {size} members, cap is {cap}")]
    PowersetTooLarge { size: SpaceSize, cap: SpaceSize },

    #[error("relation space has {size} members, cap is {cap}")]
    RelationSpaceTooLarge { size: SpaceSize, cap: SpaceSize },

    #[error("operator space has {size} members, cap is {cap}")]
    OperatorSpaceTooLarge { size: SpaceSize, cap: SpaceSize },

    #[error("axiom `{axiom}` applies to {expected} operators, got a {actual} operator")]
    DirectionMismatch {
        axiom: String,
        expected: &'static str,
        actual: &'static str,
    },

    #[error("operator violates (H0) at point `{point}`")]
    H0Violated { point: String },

    #[error("`{0}` is a component axiom, not a characterization theorem")]
    NotATheorem(String),

    #[error("invalid label `{0}`")]
    InvalidLabel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors raised because an enumeration exceeded a configured cap.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::PowersetTooLarge { .. }
                | Error::RelationSpaceTooLarge { .. }
                | Error::OperatorSpaceTooLarge { .. }
                | Error::CarrierTooLarge { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

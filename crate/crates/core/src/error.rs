use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("poset has no elements")]
    EmptyPoset,
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cover relation contains a directed cycle through `{0}`")]
    Cycle(String),
    #[error("poset has {found} elements, more than the configured bound of {limit}")]
    TooManyElements { found: usize, limit: usize },
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),
    #[error("weight map is not in S^({0})")]
    NotInIdeal(i64),
    #[error("weight map is not in S^({0}) (required for splitting)")]
    NotInPower(i64),
    #[error("weight map is not in the Ehrhart ring S^(0)")]
    NotInRing,
    #[error("degree {0} is too small (need at least 2)")]
    DegreeTooSmall(i64),
    #[error("sequence is not a reduced Condition N' sequence: {0}")]
    NotReduced(String),
    #[error("monomial is not a generator")]
    NotGenerator,
    #[error("generator already has the minimal degree {0}")]
    AtMinimalDegree(i64),
    #[error("internal construction invariant violated: {0}")]
    ConstructionInvariantViolated(String),
    #[error("enumeration exceeds the work budget of {budget} ({what})")]
    BoxTooLarge { what: String, budget: u64 },
    #[error("graph has {0} vertices; the chord check is capped at {1}")]
    GraphTooLarge(usize, usize),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("malformed weight map: {0}")]
    BadWeightMap(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

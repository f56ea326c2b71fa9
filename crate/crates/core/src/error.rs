use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a candidate element list fails to be a common transversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransversalDefect {
    /// The targets do not all have the same index in the container.
    UnequalIndex {
        indices: Vec<u64>,
    },
    WrongCardinality {
        expected: u64,
        found: usize,
    },
    /// Elements `first` and `second` (positions in the list) share a coset of
    /// target number `target`.
    DuplicateCoset {
        target: usize,
        first: usize,
        second: usize,
    },
    /// The element at this position lies outside the container subgroup.
    OutsideContainer(usize),
    /// The target with this position is not contained in the container.
    TargetOutsideContainer(usize),
}

impl fmt::Display for TransversalDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnequalIndex { indices } => write!(f, "targets have unequal indices {indices:?}"),
            Self::WrongCardinality { expected, found } => {
                write!(f, "expected {expected} elements, found {found}")
            }
            Self::DuplicateCoset { target, first, second } => {
                write!(f, "elements #{first} and #{second} lie in the same coset of target #{target}")
            }
            Self::OutsideContainer(i) => write!(f, "element #{i} is outside the container"),
            Self::TargetOutsideContainer(i) => write!(f, "target #{i} is not inside the container"),
        }
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclic factor order must be at least 1, got {0}")]
    InvalidOrder(u64),
    #[error("group order does not fit in 64 bits")]
    OrderOverflow,
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("{element:?} is not an element of the group with orders {orders:?}")]
    NotAnElement { element: Vec<u64>, orders: Vec<u64> },
    #[error("operands belong to different ambient groups")]
    AmbientMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} needs {needed} items, cap is {cap}")]
    BudgetExceeded { what: &'static str, needed: u128, cap: u64 },
    #[error("not a common transversal: {0}")]
    NotATransversal(TransversalDefect),
    /// A constructed object failed its own certificate check. This is a bug.
    #[error("internal verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }

    /// Re-labels a failed self-check on constructed output as a bug signal.
    pub(crate) fn into_bug(self, context: &str) -> Self {
        match self {
            Error::Verification(_) => self,
            other => Error::Verification(format!("{context}: {other}")),
        }
    }
}

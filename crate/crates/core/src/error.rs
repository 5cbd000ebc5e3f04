use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // input parsing and validation
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("empty PD code (the 0-crossing unknot must be requested explicitly)")]
    EmptyDiagram,
    #[error("arc {arc} appears {count} times (expected exactly 2)")]
    ArcMultiplicity { arc: u64, count: usize },
    #[error("arc {arc} leaves crossing {crossing} through the outgoing understrand slot twice")]
    Orientation { arc: u64, crossing: usize },
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("diagram is a link with {components} components, not a knot")]
    NotAKnot { components: usize },
    #[error("PD code is not planar: {faces} faces for {crossings} crossings")]
    NonPlanar { faces: usize, crossings: usize },
    #[error("braid needs at least 2 strands, got {0}")]
    StrandCount(usize),
    #[error("braid generator {letter} out of range for {strands} strands")]
    GeneratorOutOfRange { letter: i64, strands: usize },
    #[error("braid closure has {components} components, not a knot")]
    BraidNotKnot { components: usize },
    #[error("generator {generator} out of range for a presentation on {count} generators")]
    RelatorOutOfRange { generator: i64, count: usize },

    // arithmetic preconditions
    #[error("invalid modulus {p}: {reason}")]
    InvalidModulus { p: u64, reason: &'static str },
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian within tolerance {tolerance:e}")]
    NotHermitian { tolerance: f64 },
    #[error("degenerate form: eigenvalue {eigenvalue:e} below tolerance {tolerance:e}; signature indeterminate")]
    DegenerateForm { eigenvalue: f64, tolerance: f64 },
    #[error("singular matrix where a nondegenerate one was required")]
    Singular,
    #[error("non-integer result {numerator}/{denominator}: {context}")]
    NonIntegral { numerator: String, denominator: String, context: &'static str },
    #[error("{0}")]
    InvalidArgument(String),

    // colorings and covers
    #[error("coloring is not surjective onto the dihedral group")]
    NotSurjective,
    #[error("relator {relator} is violated by the permutation action at coset {coset}")]
    RelatorViolated { relator: usize, coset: usize },
    #[error("permutation action is not transitive")]
    NotTransitive,
    #[error("group order {order} exceeds the enumeration budget {budget}")]
    BudgetExceeded { order: String, budget: u64 },

    // certificates
    #[error("no characteristic class: the symmetrized Seifert form is nondegenerate mod {p}")]
    NoCharacteristicClass { p: u64 },
    #[error("linking value {value} is not divisible by {p}")]
    LinkingValueNotDivisible { value: i64, p: u64 },
    #[error("Tristram-Levine family violates conjugate symmetry at i={i}")]
    ConjugateSymmetry { i: usize },
    #[error("expected {expected} Tristram-Levine signatures, got {got}")]
    SignatureCount { expected: usize, got: usize },
    #[error("empty candidate set although {p} divides the determinant")]
    EmptyCandidates { p: u64 },

    #[error("table error: {0}")]
    Table(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for outcomes that are not input errors but an honest "cannot decide".
    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Error::DegenerateForm { .. })
    }
}

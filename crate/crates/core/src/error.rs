use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Each variant carries a stable machine code (see [`Error::code`]) that the
/// command-line front-end prints alongside the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("modulus {0} is reducible over F_{1}")]
    ReducibleModulus(String, u64),
    #[error("no built-in modulus for F_{0}^{1}; supply one explicitly")]
    MissingModulus(u64, usize),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero in the coefficient field")]
    DivideByZero,
    #[error("negative exponent {0} applied to a polynomial")]
    NegativePolyPower(i64),
    #[error("division by the zero rational function")]
    DivideByZeroFunction,
    #[error("substituted denominator vanishes identically")]
    DenominatorVanishes,
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("operands live in different contexts")]
    ContextMismatch,
    #[error("{0} is not a unit of the degree ring")]
    NotAUnit(String),
    #[error("right operand of a composition must be nonconstant")]
    ConstantRightOperand,
    #[error("{0} does not divide {1}")]
    NotADivisor(usize, usize),
    #[error("coset verification failed: {0}")]
    VerificationFailed(String),
    #[error("precondition not met: {0}")]
    PreconditionUnmet(String),
    #[error("invalid unit system: {0}")]
    InvalidUnitSystem(String),
    #[error("generator {0} has no registered inverse")]
    MissingInverse(String),
    #[error("word exponents must be nonzero")]
    ZeroExponent,
    #[error("search budget of {0} words exceeded")]
    BudgetExceeded(u64),
    #[error("n = {0} is not allowed here (need n >= 2 over F_2)")]
    BadN(usize),
    #[error("n * n' = {0} * {1} is not 1 mod {2}")]
    BadCongruence(usize, u64, u64),
    #[error("denominator of the uniform representation vanishes: {0}")]
    DenominatorVanishesModField(String),
    #[error("g is not injective on D: {0}")]
    InjectivityOnDFailed(String),
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("variable index {0} out of range for n = {1}")]
    IndexOutOfRange(usize, usize),
    #[error("exponent exceeds 2^32 - 1")]
    ExponentOverflow,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPrime(_) => "NON_PRIME",
            Error::ReducibleModulus(..) => "REDUCIBLE_MODULUS",
            Error::MissingModulus(..) => "MISSING_MODULUS",
            Error::InvalidField(_) => "INVALID_FIELD",
            Error::DivideByZero => "DIVIDE_BY_ZERO",
            Error::NegativePolyPower(_) => "NEGATIVE_POLY_POWER",
            Error::DivideByZeroFunction => "DIVIDE_BY_ZERO_FUNCTION",
            Error::DenominatorVanishes => "DENOMINATOR_VANISHES",
            Error::InvalidContext(_) => "INVALID_CONTEXT",
            Error::ContextMismatch => "CONTEXT_MISMATCH",
            Error::NotAUnit(_) => "NOT_A_UNIT",
            Error::ConstantRightOperand => "CONSTANT_RIGHT_OPERAND",
            Error::NotADivisor(..) => "NOT_A_DIVISOR",
            Error::VerificationFailed(_) => "VERIFICATION_FAILED",
            Error::PreconditionUnmet(_) => "PRECONDITION_UNMET",
            Error::InvalidUnitSystem(_) => "INVALID_UNIT_SYSTEM",
            Error::MissingInverse(_) => "MISSING_INVERSE",
            Error::ZeroExponent => "ZERO_EXPONENT",
            Error::BudgetExceeded(_) => "BUDGET_EXCEEDED",
            Error::BadN(_) => "BAD_N",
            Error::BadCongruence(..) => "BAD_CONGRUENCE",
            Error::DenominatorVanishesModField(_) => "DENOMINATOR_VANISHES_MOD_FIELD",
            Error::InjectivityOnDFailed(_) => "INJECTIVITY_ON_D_FAILED",
            Error::SyntaxError { .. } => "SYNTAX_ERROR",
            Error::UnknownVariable(_) => "UNKNOWN_VARIABLE",
            Error::IndexOutOfRange(..) => "INDEX_OUT_OF_RANGE",
            Error::ExponentOverflow => "EXPONENT_OVERFLOW",
        }
    }
}

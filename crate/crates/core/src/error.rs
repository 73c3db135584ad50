use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element outside the field: {0}")]
    ForeignElement(String),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("GF(2^{n}) is not a subfield of GF(2^{m})")]
    NotASubfield { n: u32, m: u32 },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("exponent overflow: total degree would exceed {0}")]
    DegreeOverflow(u32),
    #[error("polynomial is not divisible by z: {0}")]
    NotDivisibleByZ(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("singular matrix")]
    Singular,
    #[error("basis is dependent over GF(2^{0})")]
    DependentBasis(u32),
    #[error("group closure exceeded the cap of {0} elements")]
    ClosureCap(usize),
    #[error("subgroup is not normal in the group")]
    NotNormal,
    #[error("kernel action is not affine in (f_x, f_y): {0}")]
    NotAffineAction(String),
    #[error("degree {degree} exceeds the oracle cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("polynomial is not invariant under the given generators")]
    NotInvariant,
    #[error("restriction to z = 0 is not expressible in the generators at degree {0}")]
    NotExpressible(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

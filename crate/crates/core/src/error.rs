use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator sets do not match")]
    MismatchedGenerators,

    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("element `{element}` is not homogeneous of degree {expected}")]
    NotHomogeneous { element: String, expected: i64 },

    #[error("d^2 != 0: d(d({generator})) = {residue}")]
    DSquared { generator: String, residue: String },

    #[error("subcomplex is not d-stable: d({element}) = {image} leaves the span in degree {degree}")]
    NotDStable {
        element: String,
        image: String,
        degree: usize,
    },

    #[error("subcomplex basis is linearly dependent in degree {0}")]
    DependentBasis(usize),

    #[error("subalgebra is not closed under products: {left} * {right} = {product}")]
    NotProductClosed {
        left: String,
        right: String,
        product: String,
    },

    #[error("element `{element}` is not a cocycle: d = {residue}")]
    NotCocycle { element: String, residue: String },

    #[error("element `{0}` does not lie in the complex")]
    NotInComplex(String),

    #[error("derivation `{name}` does not commute with d: [D, d]({generator}) = {residue}")]
    NotCommutingWithD {
        name: String,
        generator: String,
        residue: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("map is not a chain map: on `{generator}`, d(f(g)) - f(d(g)) = {residue}")]
    NotChainMap { generator: String, residue: String },

    #[error("automorphism order mismatch: {0}")]
    OrderMismatch(String),

    #[error("jacobi identity fails on (e{a}, e{b}, e{c})", a = .0 + 1, b = .1 + 1, c = .2 + 1)]
    Jacobi(usize, usize, usize),

    #[error("invalid lie algebra: {0}")]
    InvalidLieAlgebra(String),

    #[error("matrix is singular")]
    Singular,

    #[error("degree bound required: the complex has even generators")]
    TopRequired,

    #[error("odd degree class has no power index")]
    OddDegree,

    #[error("name `{0}` already in use")]
    NameCollision(String),

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
}

impl From<String> for Error {
    fn from(msg: String) -> Self {
        Error::Parse(msg)
    }
}

impl From<&str> for Error {
    fn from(msg: &str) -> Self {
        Error::Parse(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

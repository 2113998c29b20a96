use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("span is not closed under {0}")]
    NotClosed(String),
    #[error("not unital (residual {0:.3e})")]
    NotUnital(f64),
    #[error("basis is linearly dependent (smallest singular value {0:.3e})")]
    DegenerateBasis(f64),
    #[error("grading operator is not a self-adjoint unitary (residual {0:.3e})")]
    BadGradingUnitary(f64),
    #[error("sign rules need homogeneous arguments, got a mixed-grade element")]
    MixedGrade,
    #[error("matrix is not in the algebra (residual {0:.3e})")]
    NotInAlgebra(f64),
    #[error("functional is not a state: {0}")]
    NotAState(String),
    #[error("functional is not positive (min Gram eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("state is not even")]
    NotEven,
    #[error("representation has no grading operator; the state is not even")]
    NotCovariant,
    #[error("permutation is not an involution")]
    NotInvolutive,
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

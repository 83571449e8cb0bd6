use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty word")]
    EmptyWord,

    #[error("invalid character {ch:?} at position {pos} (expected L or R)")]
    InvalidSymbol { ch: char, pos: usize },

    #[error("family power must be at least 1, got {0}")]
    InvalidPower(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("map is not invertible (delta_L * delta_R = {0} <= 0)")]
    NonInvertible(f64),

    #[error("no half-map inverse lands in its own half-plane for ({x}, {y})")]
    NoConsistentBranch { x: f64, y: f64 },

    #[error("cycle is not unique: det(I - M) = {0:e}")]
    NonUnique(f64),

    #[error("mu must be nonzero")]
    ZeroMu,

    #[error("matrix {0} has complex eigenvalues")]
    ComplexEigenvalues(String),

    #[error("matrix {0} has a repeated eigenvalue")]
    RepeatedEigenvalue(String),

    #[error("matrix {0} has an eigenvalue equal to 1")]
    UnitEigenvalue(String),

    #[error("singular matrix: {0}")]
    Singular(&'static str),

    #[error("expected exactly two mismatch indices between XY and YX, found {0}")]
    MismatchCount(usize),

    #[error("x-component of the switching-manifold iterate does not depend on y-hat")]
    DegenerateHatY,

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    #[error("finite-difference Jacobian is singular (det = {0:e})")]
    JacobianSingular(f64),

    #[error("no damped Newton step reduces the residual (norm {0:e})")]
    NoDescent(f64),

    #[error("Newton iteration did not converge in {iterations} steps (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("Y does not map the v-axis to the u-axis (gamma22 = {gamma22:e}, sigma2 = {sigma2:e})")]
    NotHomoclinic { gamma22: f64, sigma2: f64 },

    #[error("{0}-cycle is not a saddle")]
    NotSaddle(String),

    #[error("1 - gamma12 * gamma21 vanishes")]
    DegenerateQuad,

    #[error("index {index} out of range for k = {k}")]
    IndexOutOfRange { k: usize, index: usize },

    #[error("invalid delta_R = {0}")]
    InvalidDeltaR(f64),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("basin targets: {0}")]
    InvalidTargets(String),

    #[error("palette has no color for label {0}")]
    MissingColor(i32),

    #[error("verification failed at k = {k}{}: {quantity}: {detail}", index.map(|i| format!(", index {i}")).unwrap_or_default())]
    Verification {
        k: usize,
        index: Option<usize>,
        quantity: String,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;

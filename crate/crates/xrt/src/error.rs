use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite angle: {0}")]
    NonFiniteAngle(f64),
    #[error("influx point where an outflux point is required (beta={beta}, theta={theta})")]
    InfluxRejected { beta: f64, theta: f64 },
    #[error("point outside the closed unit disc: |z| = {0}")]
    OutsideDisc(f64),
    #[error("invalid phantom: {0}")]
    InvalidPhantom(String),
    #[error("phantom spec parse error: {0}")]
    PhantomParse(String),
    #[error("grid too small: nbeta={nbeta}, ntheta={ntheta} (need >= 8, ntheta even)")]
    GridTooSmall { nbeta: usize, ntheta: usize },
    #[error("grid samples the tangent variety at cell ({j},{l})")]
    TangentSampled { j: usize, l: usize },
    #[error("expected grid kind {expected}, got {got}")]
    WrongGridKind { expected: String, got: String },
    #[error("grid not square-compatible: nbeta={nbeta} != ntheta={ntheta}")]
    NotSquareCompatible { nbeta: usize, ntheta: usize },
    #[error("lattice band ({nmax},{kmax}) too wide for grid {nbeta}x{ntheta}")]
    InsufficientResolution {
        nmax: i64,
        kmax: i64,
        nbeta: usize,
        ntheta: usize,
    },
    #[error("angular mode {0} out of band")]
    OutOfBand(i64),
    #[error("mu = {0} outside (1/2, 1)")]
    BadMu(f64),
    #[error("lattice has entries off the odd negative angular modes (n={n}, k={k})")]
    NotOddNegative { n: i64, k: i64 },
    #[error("evaluation point too close to the boundary: |z| = {0} > {1}")]
    TooCloseToBoundary(f64, f64),
    #[error("interior grid too small: grid_n = {0} (need >= 5)")]
    InteriorGridTooSmall(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("file format error: {0}")]
    Format(String),
}

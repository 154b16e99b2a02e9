use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("angle {phi} lies on a sector wall (|sin 2kφ| = {sin2k:e})")]
    BoundaryAngle { phi: f64, sin2k: f64 },

    #[error("quadratic has complex roots (discriminant {discriminant:e})")]
    ComplexRoots { discriminant: f64 },

    #[error("turning point {value} lies outside [0, 1]")]
    OutOfUnitInterval { value: f64 },

    #[error("state touches a sector wall at φ = {phi}")]
    SectorWall { phi: f64 },

    #[error("integrator step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("constants are inconsistent with the requested point: {0}")]
    InconsistentConstants(String),

    #[error("argument {x} outside the Chebyshev domain [-1, 1]")]
    DomainError { x: f64 },

    #[error("r² = {r2} outside the turning interval [{r2_min}, {r2_max}]")]
    OutOfAnnulus { r2: f64, r2_min: f64, r2_max: f64 },

    #[error("sin²kφ = {z} outside the angular interval [{z_min}, {z_max}]")]
    OutOfAngularRange { z: f64, z_min: f64, z_max: f64 },

    #[error("orbit does not visit φ = {phi} on this branch")]
    NoRealRoot { phi: f64 },

    #[error("no angle in one angular period admits a real root")]
    EmptyOrbit,

    #[error("trajectory spans {span}, at least {required} is needed")]
    InsufficientSpan { span: f64, required: f64 },

    #[error("x² = {x2} outside the bounding interval [{min}, {max}]")]
    OutOfRectangle { x2: f64, min: f64, max: f64 },

    #[error("A = {a} below (√α + √β)² = {bound}; cos C denominator is complex")]
    DenominatorComplex { a: f64, bound: f64 },

    #[error("constants do not describe a bounded orbit: {0}")]
    NotBounded(String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

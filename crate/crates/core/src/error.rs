use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Grid spacing or limits that do not produce a valid regular grid.
    InvalidGrid(String),
    /// A region that selects no node of the grid.
    EmptyRegion,
    /// Two inputs that must share a grid do not.
    GridMismatch,
    /// Source and target grids whose spacings are not integer multiples of each other.
    IncommensurateGrids { source: f64, target: f64 },
    /// Pattern of the wrong kind or power convention for the operation.
    WrongPattern(String),
    /// Pattern with zero power where a normalizing quantity is required.
    ZeroPower(&'static str),
    InvalidFootprint(String),
    /// Footprint has no member node on the (possibly θ-truncated) grid.
    FootprintOutsideGrid { theta_c: f64, phi_c: f64 },
    InvalidArgument(String),
    /// Too few points for a regression.
    InsufficientData { needed: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::EmptyRegion => write!(f, "region selects no grid node"),
            Error::GridMismatch => write!(f, "patterns are not on the same grid"),
            Error::IncommensurateGrids { source, target } => write!(
                f,
                "grid spacings {source}° and {target}° are not integer multiples of each other"
            ),
            Error::WrongPattern(msg) => write!(f, "unsuitable pattern: {msg}"),
            Error::ZeroPower(what) => write!(f, "zero power: {what}"),
            Error::InvalidFootprint(msg) => write!(f, "invalid footprint: {msg}"),
            Error::FootprintOutsideGrid { theta_c, phi_c } => write!(
                f,
                "footprint centred at (θ={theta_c}°, φ={phi_c}°) has no node on the grid"
            ),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} points, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}

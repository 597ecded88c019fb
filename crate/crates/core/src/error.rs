use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Locations and offending values are carried as `f64` regardless of the
/// scalar type the computation ran in.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({re}, {im}) is not strictly inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("integrand is not finite at node ({re}, {im})")]
    NonFinite { re: f64, im: f64 },

    #[error("matrix has non-finite entries")]
    NonFiniteMatrix,

    #[error(
        "sub-disk with center ({center_re}, {center_im}) and radius {radius} escapes the unit disk"
    )]
    SubdiskOutside {
        center_re: f64,
        center_im: f64,
        radius: f64,
    },

    #[error("hyperbolic disk around |w| = {modulus} leaves the unit disk; largest admissible |w| is {max_admissible}")]
    PointTooCloseToBoundary { modulus: f64, max_admissible: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error(
        "power iteration did not converge after {iterations} iterations (last relative gap {gap})"
    )]
    NotConverged { iterations: usize, gap: f64 },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("no grid point with modulus above {0}")]
    EmptyGrid(f64),

    #[error("at grid point ({re}, {im}): {source}")]
    AtGridPoint {
        re: f64,
        im: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

impl Error {
    pub(crate) fn at_point(self, re: f64, im: f64) -> Self {
        Error::AtGridPoint {
            re,
            im,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

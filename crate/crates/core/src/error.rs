use thiserror::Error;

use crate::diagram::DiagramError;
use crate::laurent::LaurentError;
use crate::marking::PairingError;
use crate::polygon::PolygonError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("s = {s} is out of range 0..={s_max}")]
    SOutOfRange { s: usize, s_max: usize },
    #[error("invariant has non-integral exponent q^{0}/2")]
    NonIntegralExponent(i64),
}

impl Error {
    pub fn is_overflow(&self) -> bool {
        matches!(self, Error::Laurent(LaurentError::Overflow))
    }
}

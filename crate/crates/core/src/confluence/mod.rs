//! Confluence certificates: verification, the induced isomorphism on
//! colimits, and bounded search.

mod certificate;
mod induced;
mod search;
mod verify;

use thiserror::Error;

use crate::colimit::ColimitError;
use crate::diagram::DiagramError;
use crate::ints::ShapeError;

pub use certificate::{CertificatePeriod, ConfluenceCertificate, Level};
pub use induced::{
    induced_map, induced_maps_agree, roundtrip_check, Direction, RoundtripFailure, RoundtripProblem,
    RoundtripReport,
};
pub use search::{search_confluence, SearchBudget, SearchError, SearchOutcome};
pub use verify::{verify_certificate, MapName, Side, VerifyFailure, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfluenceError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("stage {stage} of {side} is beyond the certificate")]
    BeyondCertificate { side: Side, stage: usize },
}

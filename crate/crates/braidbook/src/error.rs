use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("illegal event: {0}")]
    IllegalEvent(String),
    #[error("position {pos} out of range for length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("empty cactus")]
    EmptyCactus,
    #[error("degree {0} outside the supported range")]
    DegreeOutOfRange(usize),
    #[error("surface is disconnected")]
    DisconnectedSurface,
    #[error("no monotone height assignment: {0}")]
    Realizability(String),
    #[error("degenerate critical values: {0}")]
    DegenerateCriticalValues(String),
    #[error("real-axis projection stays degenerate after {0} perturbations")]
    ProjectionDegenerate(usize),
    #[error("root continuation lost track: {0}")]
    ContinuationLoss(String),
    #[error("Newton continuation failed at minimal step: {0}")]
    StepFailure(String),
    #[error("petal orientation could not be calibrated: {0}")]
    Calibration(String),
}

impl Error {
    /// True for failures of the numerical routines, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateCriticalValues(_)
                | Error::ProjectionDegenerate(_)
                | Error::ContinuationLoss(_)
                | Error::StepFailure(_)
                | Error::Calibration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MiningError {
    #[error("run exceeded its time budget")]
    TimedOut,
    #[error("contract violation: {0}")]
    Contract(String),
}

/// Cooperative deadline polled by the miners.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget { deadline: Instant::now().checked_add(timeout) }
    }

    pub fn check(&self) -> Result<(), MiningError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(MiningError::TimedOut),
            _ => Ok(()),
        }
    }
}

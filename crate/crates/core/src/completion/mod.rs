//! Group completion at `π₀`: presentations of component monoids, their
//! Grothendieck groups through Smith normal form, and low-degree homology
//! of nerves and bar constructions.

use thiserror::Error;

use crate::monoid::MonoidError;
use crate::strings::StringError;

pub mod homology;
pub mod pi0;
pub mod presentation;
pub mod snf;

pub use homology::{nerve_homology, nerve_q_homology, BarCategory, NerveHomology, QCategory, TotalMonoid};
pub use pi0::{strings_pi0_check, Pi0Report};
pub use presentation::{grothendieck_group, pi0_presentation, Completion, MonoidPresentation};
pub use snf::{cokernel, smith_normal_form, AbelianGroup, IntMatrix, SmithResult};

#[derive(Debug, Error)]
pub enum CompletionError {
    #[error("bounds exceeded: {0}")]
    Bounds(String),
    #[error("inconsistent category: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Strings(#[from] StringError),
}

impl From<crate::config::ConfigError> for CompletionError {
    fn from(e: crate::config::ConfigError) -> Self {
        CompletionError::Strings(e.into())
    }
}

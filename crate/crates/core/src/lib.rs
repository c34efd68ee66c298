//! Simulation of the semi-device-independent certification game for
//! multipartite entanglement.
//!
//! Parties apply input-dependent channels to a shared state; a referee
//! measures jointly. [`scenario::score`] evaluates the average win
//! probability, [`certify`] turns a score into entanglement certificates,
//! and [`optimize`] searches for good strategies.

pub mod catalog;
pub mod certify;
pub mod error;
pub mod linalg;
mod local;
pub mod optimize;
pub mod random;
pub mod sampling;
pub mod scenario;

pub use certify::{certify, CertificationReport};
pub use error::{Error, Result};
pub use scenario::{score, Channel, ChannelFamily, GameParams, Povm, ScoreReport, Strategy};

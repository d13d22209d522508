//! Inter-user interference, block-Toeplitz correlation structure, achievable
//! rate regions and sum-rate optimal power allocation for downlink
//! non-orthogonal multiple access with and without intentional symbol
//! offsets.
//!
//! Three transmission schemes are modelled:
//!
//! * **P-NOMA**: synchronous superposition coding with SIC receivers.
//! * **AP-NOMA**: the same receivers, but each user's stream is delayed by a
//!   fraction of a symbol, which lowers the interference energy seen after
//!   matched filtering.
//! * **T-NOMA**: eigen-precoding on the correlation matrix of the delayed
//!   streams, which turns the broadcast channel into parallel sub-channels.
//!
//! Rates are in bits per real channel use (the `½·log₂` convention).

pub mod corr;
pub mod csv;
pub mod dof;
mod error;
pub mod fading;
pub mod numerics;
pub mod pulse;
pub mod regions;
pub mod sumrate;
pub mod superposition;

pub use error::{Error, Result};

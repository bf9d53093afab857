//! Linear function alignment for multicast computation over deterministic
//! (linear, bit-level) interference networks.
//!
//! Every transmitter holds a source; every receiver wants the GF(2) sum of
//! all sources. The crate builds the channel model, evaluates capacity
//! formulas, decomposes symmetric networks into gap-1 pieces, constructs
//! codes, and verifies them exactly.

pub mod capacity;
pub mod code;
pub mod decomposition;
pub mod error;
pub mod gf2;
pub mod network;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
pub use gf2::{shift_matrix, Gf2Matrix};
pub use network::{Network, NetworkParams2x2, NetworkParamsSym};

/// Exact rate in symbols per channel use.
pub type Rate = num_rational::Ratio<i64>;
/// Rate evaluated in floating point.
pub type RateF64 = f64;

/// Shorthand for `Rate::new(num, den)`.
pub fn rate(num: i64, den: i64) -> Rate {
    Rate::new(num, den)
}

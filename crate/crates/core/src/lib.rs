//! Expected MAX-CUT performance of depth-2 QAOA and the 2-step threshold
//! algorithm on D-regular graphs of girth greater than five.
//!
//! The crate has three layers:
//!
//! * closed-form evaluators ([`qaoa`], [`threshold`]) that depend only on the
//!   degree and the algorithm parameters,
//! * optimizers ([`optimize`]) that maximize those closed forms,
//! * brute-force oracles ([`oracle`]) that simulate the algorithms on concrete
//!   small graphs and serve as ground truth.

pub mod error;
pub mod numerics;
pub mod optimize;
pub mod oracle;
pub mod qaoa;
pub mod stats;
pub mod threshold;

pub use error::{Error, Result};

pub use qaoa::{Qaoa2Angles, TrigBundle};
pub use optimize::{OptParams, OptResult, SweepConfig, SweepRecord, TauMode, TauWindow, Winner};
pub use stats::CutStats;
pub use threshold::ThresholdParams;

/// Stamp mixed into cache keys; bump whenever a formula or optimizer default
/// changes observable output.
pub const CODE_VERSION: &str = concat!("maxcut-core/", env!("CARGO_PKG_VERSION"), "+f2.1");

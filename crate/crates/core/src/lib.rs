//! Frame synchronization for non-contiguous OFDM (NC-OFDM) receivers facing
//! narrowband interference.
//!
//! The crate carries two autocorrelation detectors that share one streaming
//! engine:
//!
//! * the classic Schmidl&Cox detector, timing metric `|G(n)/M(n)|²`;
//! * the narrowband-interference robust detector (NIRS), which estimates the
//!   interference self-correlation from a quarter-symbol-lag correlator `Q(n)`
//!   and removes it from `G(n)` before forming the metric.
//!
//! Around them sit the transmit model ([`ofdm`]), the channel/CFO/interference
//! chain ([`impairments`]), trial scoring ([`evaluate`]), an analytic oracle
//! for the interference cross-terms ([`appendix`]), and a seeded Monte-Carlo
//! harness ([`harness`]) driven by TOML scenario files.

pub mod appendix;
pub mod error;
pub mod evaluate;
pub mod harness;
pub mod impairments;
pub mod ofdm;
pub mod seed;
pub mod sync;

pub use error::{Error, Result};
pub use num_complex::Complex64;

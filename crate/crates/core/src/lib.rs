//! Coverings, packings, and metric-entropy bounds for the class C(a, b) of
//! exponentially decaying causal discrete-time LTI systems under the
//! H-infinity metric, plus a bit-exact impulse-response codec operating at
//! the covering rate.
//!
//! The class C(a, b) consists of impulse responses with
//! |k[t]| <= a e^{-bt} for all t >= 0; the distance between two systems is
//! the H-infinity norm of the difference of their transfer functions, which
//! equals the worst-case l2 output deviation over unit-l2 inputs.
//!
//! Modules:
//! - [`class`]: domain types and membership/sampling utilities
//! - [`index`]: mixed-radix index tuples (also the codec payload)
//! - [`norms`]: lp norms, Z-transform evaluation, certified H-infinity
//!   enclosures, and the metric rho
//! - [`packing`]: the explicit (2 eps)-packing and its closed-form lower
//!   bound
//! - [`covering`]: the explicit eps-covering, slot-wise quantization, and
//!   the closed-form upper bound
//! - [`entropy`]: the entropy sandwich, the asymptotic rate, and remainder
//!   checks
//! - [`codec`]: bit-exact encode/decode of class members at distortion eps
//! - [`oracle`]: exhaustive covering/packing numbers on tiny discretized
//!   instances
//!
//! All values are immutable after construction and all operations are pure
//! functions, safe for concurrent use.

pub mod class;
pub mod codec;
pub mod covering;
pub mod entropy;
pub mod error;
pub mod index;
pub mod norms;
pub mod oracle;
pub mod packing;

pub use class::{DecayClass, ImpulseResponse, Signal, SplitMix64};
pub use error::{Error, Result};
pub use index::MixedRadixIndex;
pub use norms::NormInterval;

//! Parrondo games of quantum-walk search on the torus `T^d_N`.
//!
//! Two search strategies `U₁ = S·C₁` and `U₂ = S·C₂` (coined walks whose coin
//! is `-I₂` on marked vertices) are combined in blocks
//! `U_{(n1,n2)} = (U₂)^{n2} (U₁)^{n1}`. A positive paradox occurs when both
//! strategies alone find a marked vertex less often than a uniform guess while
//! their combination does better; a negative paradox is the reverse.
//!
//! * [`state`]: basis layout, state vectors, marked sets and measurements.
//! * [`operators`]: coin and shift operators and the fast evolution kernel.
//! * [`game`]: schedules, finite and infinite time averages, classification.
//! * [`oracle`]: dense reference matrices and parity-pattern checks.
//! * [`scan`]: θ sweeps and the even-side sign-flip checks.
//! * [`config`] and [`report`]: run configuration and output files.

pub mod config;
pub mod error;
pub mod game;
pub mod operators;
pub mod oracle;
pub mod report;
pub mod scan;
pub mod state;

pub use error::{Error, Result};
pub use game::{
    classify, limit_success, run_trace, LimitOptions, ParadoxKind, ParadoxVerdict, ProbabilityTrace, Schedule,
};
pub use operators::{AxisUnitary, CoinParams, WalkOperator};
pub use state::{BasisIndex, Coin, LatticeSpec, MarkedSet, Measure, StateVector};

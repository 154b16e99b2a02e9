//! Classical TTW superintegrable family.
//!
//! The Hamiltonian
//!
//! ```text
//! H_k = p_r² + p_φ²/r² + ω²r² + αk²/(r² cos²kφ) + βk²/(r² sin²kφ)
//! ```
//!
//! separates in polar coordinates for every `k`, with the angular integral
//! `X_k = p_φ² + αk²/cos²kφ + βk²/sin²kφ`. For rational `k = m/n` the bounded
//! trajectories obey an algebraic relation between Chebyshev polynomials,
//! `T_m(R) = T_n(U_k) cos C ± √(1 − T_n(U_k)²) sin C`, and are therefore closed.
//!
//! The crate is organised as
//!
//! - [`types`]: shared domain types, parameter validation, sector geometry and
//!   the boundedness conditions on the constants of motion.
//! - [`dynamics`]: Hamiltonian, `X_k`, Hamilton's equations and numerical
//!   integration. This is the independent oracle for everything below.
//! - [`closedform`]: Chebyshev layer, the `R`/`U_k` transforms, the orbit
//!   equation for integer and rational `k`, and the radial time laws.
//! - [`analysis`]: singular points, closure/period measurement and degenerate
//!   case classification.
//! - [`k1`]: the `k = 1` multiseparable case in cartesian coordinates.
//! - [`presets`]: named parameter sets `fig1` .. `fig14`.
//! - [`cli`]: run specifications, table output and the commands behind the
//!   `ttw-orbits` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod closedform;
pub mod dynamics;
pub mod error;
pub mod k1;
pub mod presets;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    BoundsReport, MotionConstants, PhaseState, Rational, SystemParams, Trajectory, Verdict,
};

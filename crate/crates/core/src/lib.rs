//! Thomas-Wigner rotations and spin-momentum entanglement of a single
//! massive spin-1/2 particle seen from a boosted frame.
//!
//! The crate is organised bottom up:
//!
//! * [`kinematics`]: the rotation angle of two composed boosts,
//! * [`states`]: rest-frame spin-momentum states and the momentum-conditioned
//!   spin rotation that maps them into the boosted frame,
//! * [`entanglement`]: partial traces, von Neumann entropy and the closed forms,
//! * [`sweep`]: entanglement as a function of the boosting angle, extremum
//!   search and the figure datasets,
//! * [`output`]: CSV/JSON writers,
//! * [`verify`]: the property suite behind `wignerlab verify`.

pub mod entanglement;
pub mod error;
pub mod kinematics;
pub mod output;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};

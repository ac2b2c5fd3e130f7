//! # aekit
//!
//! A desk-scale numerical toolkit for equilibrium problems of abstract
//! economies — games where each player has a constraint map (feasible
//! actions depending on the others) and a preference map (strictly better
//! actions), with no numeric objective required — and for the single-leader
//! multi-follower games built on top of them.
//!
//! Everything is finite: compact sets become point clouds, maps become
//! tables over sampled action grids, and every statement is checked by
//! enumeration. The pieces:
//!
//! * [`setval`] — distances, excess, Hausdorff metric, neighborhoods, and
//!   finite-window set-convergence checks on point clouds;
//! * [`economy`] — the instance data model, validation, and problem files;
//! * [`gapfun`] — improvement sets, candidate maps, and the gap function
//!   whose zeros are exactly the equilibria;
//! * [`equilibrium`] — the equilibrium set via direct scan and via the gap
//!   function, plus per-point certificates;
//! * [`profiles`] — the `rho` metric between game profiles, regularity
//!   certificates, pointwise limits, and semicontinuity experiments;
//! * [`reductions`] — epsilon-GNEP and dominance-relation front ends;
//! * [`slmfg`] — leader-follower problems solved by enumerating the graph
//!   of the equilibrium response;
//! * [`gen`] — seeded instance generators;
//! * [`cli`] — the `aekit` command-line front end.
//!
//! The `examples/` directory has one runnable program per capability; start
//! with `cargo run --example solve_economy`.

pub mod cli;
pub mod economy;
pub mod equilibrium;
pub mod error;
pub mod gapfun;
pub mod gen;
mod jio;
pub mod profiles;
pub mod reductions;
pub mod setval;
pub mod slmfg;

pub use error::{Error, Result};
pub use setval::{FiniteCloud, Point, Window};

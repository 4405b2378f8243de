//! A small laboratory for gauge symmetry on one-dimensional reversible
//! cellular automata with exact permutation-valued link variables.
//!
//! The pieces fit together like this:
//!
//! * [`perm`] — the symmetric group S(K) over the color set, used both for
//!   the per-site operators of gauge transformations and for link values.
//! * [`ca`] — periodic rings of two-part cells and the free transport rule,
//!   plus the [`ca::Theory`] trait the verification engine consumes.
//! * [`gauge`] — the gauge field on links, gauge transformations of matter
//!   and field, and the gauged step that commutes with them.
//! * [`invariance`] — exhaustive and seeded-randomized checkers for the
//!   commutation identities, orbit (invariant set) enumeration with a
//!   Burnside cross-check, theory equivalence, and its three-statement
//!   characterization.
//! * [`theory`] — the built-in registry of named theories (`R`, `T`,
//!   `T-pre:…`, `T-post:…`).
//! * [`scenario`], [`render`], [`cli`] — line-oriented scenario files,
//!   deterministic text/PPM/JSON output, and the command-line front end.
//!
//! Every value is immutable after construction and every operation is pure,
//! so anything here can be shared across threads freely.
//!
//! The `examples/` directory has one runnable program per capability; start
//! with `spacetime` and `gauge_invariance`.

pub mod ca;
pub mod cli;
pub mod error;
pub mod gauge;
pub mod invariance;
pub mod perm;
pub mod render;
pub mod scenario;
pub mod theory;

pub use ca::{Cell, FullState, MatterConfig, Theory};
pub use error::Error;
pub use gauge::{GaugeField, GaugeTransform};
pub use invariance::{CheckReport, Domain, Mode, Orbit, Verdict, Witness};
pub use perm::{Color, Perm};
pub use scenario::Scenario;

//! Exact chain calculus on tori and the combinatorics of torus bundles:
//! straight-simplex chains, model-restricted integral/rational filling norms
//! with certificates, SL(2,Z) mapping-class classification, Farey flip
//! distances, and layered triangulations of mapping tori.

pub mod chain;
pub mod constructions;
pub mod error;
pub mod filling;
pub mod layered;
pub mod mcg;
pub mod snf;
pub mod io;
pub mod simplex;
pub mod torus_map;

pub use chain::{Chain, IntChain, RatChain};
pub use constructions::{FillingPair, FvBound, StepReport, Tamper};
pub use error::{Error, Result};
pub use filling::{FillMode, FillingCertificate, FiniteModel};
pub use simplex::{Int, Point, Rat, StraightSimplex};
pub use torus_map::AffineTorusMap;

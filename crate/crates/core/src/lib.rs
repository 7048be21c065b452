//! Exact flag-algebra certificates for monochromatic domination in
//! edge-coloured complete graphs.
//!
//! The crate enumerates small coloured complete graphs, computes exact flag
//! densities, assembles a semidefinite program whose constraints encode the
//! "good set" domination property, exchanges it with an external solver, rounds
//! the solution to an exact certificate and verifies the certificate from first
//! principles. A brute-force domination oracle backs every combinatorial step.

pub mod certificate;
pub mod combinatorics;
pub mod constraints;
pub mod domination;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod flags;
pub mod io;
pub mod matrix;
pub mod rational;
pub mod rounding;
pub mod sdp;

pub use enumerate::{color_orbits, density, enumerate_graphs, GraphFamily};
pub use error::{Error, Result};
pub use graph::{CanonicalKey, Color, ColoredGraph};
pub use rational::Rational;

//! Exact-arithmetic kernel for the combinatorial layer of bordered Heegaard
//! Floer theory.
//!
//! The crate builds the algebras of pointed matched circles, represents
//! type D / A-infinity modules and bimodules as finite data, verifies their
//! structure equations, glues them via box tensor products and morphism
//! complexes, and computes homology over the two-element field.

pub mod arcalg;
pub mod diagrams;
pub mod f2;
pub mod grading;
pub mod modules;
pub mod pairing;
pub mod pmc;
pub mod strands;

pub use arcalg::{ArcAlgebraElement, BasicGenerator, Chord};
pub use f2::{ChainComplexF2, SparseMatrixF2};
pub use pmc::PointedMatchedCircle;
pub use strands::{AlgebraElement, StrandDiagram};

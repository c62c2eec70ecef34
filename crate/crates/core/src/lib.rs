//! Finite lattices of order-convex subsets of chains.
//!
//! The crate decides membership of finite lattices in the variety generated
//! by the lattices `Co(T)` of convex subsets of chains, with explicit
//! certificates, and checks the lattice identities that hold there.

pub mod catalog;
pub mod corpus;
pub mod dependency;
pub mod error;
pub mod lattice;
pub mod membership;
pub mod poset;
pub mod projectivity;
pub mod render;
pub mod star;
pub mod term;
pub mod tracks;

pub use error::{Error, Result};
pub use lattice::{FinLattice, LatticeMap};
pub use poset::{co_lattice, ConvexSet, Poset};

//! Exact-arithmetic obstructions to symplectic embeddings into rational surfaces.
//!
//! The crate computes weight sequences of moment domains, ECH capacities of toric
//! domains, algebraic capacities of polarized blowups of the plane, Newton-Okounkov
//! bodies by Zariski-chamber wall crossing, and staircase accumulation tests.

pub mod algcap;
pub mod apps;
pub mod error;
pub mod exactgeom;
pub mod io;
pub mod moment;
pub mod okounkov;
pub mod par;
pub mod picard;
pub mod svg;
pub mod toric_ech;

pub use error::{Error, Result};
pub use exactgeom::{LatticeVec, Polygon, Pt, Rat};

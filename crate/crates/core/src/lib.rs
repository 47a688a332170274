//! Subdiagram-sum invariants of doodles.
//!
//! A doodle is a closed curve on the sphere with only double points, up to
//! isotopy and the moves that remove empty monogons and bigons. This crate
//! works with doodles through their arrow diagrams.

pub mod algebra;
pub mod basis;
pub mod census;
pub mod diagram;
pub mod error;
pub mod invariant;
pub mod moves;
pub mod par;
pub mod quiver;
pub mod surface;
pub mod svg;
pub mod tangles;
pub mod walk;

pub use algebra::{AlgebraElement, BasisKey, Field};
pub use diagram::{ArrowDiagram, ChordDiagram, Endpoint, Role, SignedLinearDiagram};
pub use error::{DiagramError, Result};
pub use invariant::{diagram_invariant, InvariantValue};
pub use quiver::QuiverDiagram;

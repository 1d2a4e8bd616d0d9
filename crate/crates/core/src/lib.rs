//! Desk-scale verification of the finite inequalities behind strong property (T)
//! for lattices: residue-ring operators, spherical and SU(2) averaging operators,
//! Cartan decompositions in SL(3), Weyl-chamber path bounds, two-step
//! representations on finite groups, and the SL(2,Z) induction cocycle.

pub mod cartan;
pub mod error;
pub mod finite_models;
pub mod fit;
pub mod induction;
pub mod linalg;
pub mod residue_ring;
pub mod sphere;
pub mod twostep;
pub mod zigzag;

pub use error::{LabError, Result};

//! Exact computations for Rota-Baxter algebras: cohomology, deformations,
//! the controlling L-infinity algebra, homotopy Rota-Baxter structures and
//! the minimal model of the Rota-Baxter operad.

pub mod brace;
pub mod deform;
pub mod exact;
pub mod graded;
pub mod linfty;
pub mod operad;
pub mod rb;
pub mod suites;

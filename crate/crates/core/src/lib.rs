//! Numerical constructions of entire bounded solutions of
//! `Δu − u + u³ = 0` on the plane and of its p-Laplacian generalization.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, reports and the
//! command-line driver live in the `latticesol` crate.
//!
//! Module map:
//!
//! * [`mesh`] and [`energy`]: structured P1 triangulations of fundamental
//!   domains and the discrete energy quotient.
//! * [`minimize`]: constrained minimization of the quotient and rescaling of
//!   minimizers into solutions.
//! * [`tiling`]: even/odd reflection extensions of a fundamental-domain
//!   solution to the whole plane.
//! * [`analysis`]: concentration diagnostics, cut-off functions, hump
//!   recombination and rearrangements.
//! * [`radial`]: radial solutions by shooting, indexed by node count.
//! * [`galerkin`]: the three-mode Fourier reduction for breathers and the
//!   spectrum of the wall linearization.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod energy;
pub mod error;
pub mod galerkin;
pub mod grid;
pub mod linalg;
pub mod mesh;
pub mod minimize;
pub mod ode;
pub mod radial;
pub mod tiling;

pub use error::{Error, Result};
pub use mesh::{DomainSpec, EdgeCondition, Field, Mesh, Region, RegionCap, Shape};
pub use energy::QuotientParams;

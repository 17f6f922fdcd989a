//! Fan-beam X-ray transform on the torus.
//!
//! The unit disc is probed by lines parameterized by a source point
//! `e^{i beta}` on the boundary circle and a direction `e^{i theta}`.
//! This crate samples the X-ray transform of analytic phantoms on the
//! `(beta, theta)` torus, moves between torus grids and their double
//! Fourier lattice `g_{n,k}`, validates the lattice range conditions
//! (oddness, conjugacy, symmetry, moments, and the vanishing-region
//! corollary), runs the Bukhgeim-Hilbert / Bukhgeim-Cauchy machinery,
//! reconstructs the density via `f = Re(d u_{-1})`, and cross-checks the
//! classical Gelfand-Graev-Helgason-Ludwig moment conditions.

pub mod bukhgeim;
pub mod error;
pub mod forward;
pub mod geometry;
pub mod gghl;
pub mod io;
pub mod lattice;
pub mod phantom;
pub mod range;
pub mod reconstruct;

pub use error::{Error, Result};

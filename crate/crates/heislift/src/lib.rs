//! Sub-Riemannian geometry of the Heisenberg group ℍ and the hyperbolic
//! Heisenberg group ℍ*, with a numerical toolkit for contact analysis of
//! smooth maps and for lifting symplectic planar maps to contact
//! quasiconformal maps of the groups.
//!
//! The crate is organized around six modules:
//!
//! * [`group`] — both group structures, left-invariant frames, contact forms
//!   and coframes, the Korányi map and Korányi–Cygan distance, the 3×3 matrix
//!   model, the SU(1,1)×U(1) action, and the Siegel-boundary embedding.
//! * [`curves`] — horizontal curves, horizontality defect, horizontal and
//!   hyperbolic lengths, horizontal lifting, and closed-curve holonomy
//!   against area oracles.
//! * [`contact`] — pointwise contact residuals, the multiplier λ/λ*, singular
//!   values λ₁ ≥ λ₂, maximal distortion K, and the Beltrami coefficient μ of
//!   smooth maps of ℍ*/ℍ.
//! * [`lifting`] — symplectic and closedness gates, the potential functions
//!   ψ (on ℒ) and φ (on ℂ) by exact-1-form path integration, and the two
//!   lifting constructions.
//! * [`catalog`] — closed-form example maps with analytic derivatives and
//!   closed-form potentials; these are the oracles for the test suites.
//! * [`numerics`] — finite-difference and quadrature kernels.
//!
//! All values are immutable and all operations are pure functions; everything
//! here is safe to call concurrently.

pub mod catalog;
pub mod contact;
pub mod curves;
pub mod error;
pub mod grid;
pub mod group;
pub mod lifting;
pub mod numerics;

pub use error::{Error, Result};
pub use group::{GroupKind, HeisPoint, HypPoint, StarPoint};

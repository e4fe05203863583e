//! Symbolic computation of mirror superpotentials for the Hirzebruch
//! surfaces F₃ and F₄.
//!
//! The [`novikov`] kernel provides exact truncated Laurent series. On top of
//! it sit disc-class lattice arithmetic ([`hirzebruch`]), superpotential
//! builders and a numeric critical-point solver ([`superpotential`]), wall
//! crossing ([`wallcross`]), scattering-diagram completion ([`scattering`])
//! and a suite of cross-checks ([`verify`]).

pub mod hirzebruch;
pub mod novikov;
pub mod scattering;
pub mod superpotential;
pub mod verify;
pub mod wallcross;

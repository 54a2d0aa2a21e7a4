//! Computational toolkit for the zigzag algebra `C_{n-1}` over GF(2): its
//! realization as the homology of a DG endomorphism algebra of projective
//! resolutions, the transferred A∞ structure, Hochschild obstructions,
//! A∞ bimodules, and the Burau decategorification of cup and cap functors.

pub mod bimodule;
pub mod burau;
pub mod cli;
pub mod dgalg;
pub mod endo;
pub mod gf2lin;
pub mod hochschild;
pub mod homalg;
pub mod quiver;
pub mod report;
pub mod suites;
pub mod transfer;

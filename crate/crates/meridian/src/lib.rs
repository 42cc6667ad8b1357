//! Meridian surfaces in four-dimensional Euclidean space.
//!
//! A meridian surface is the patch z(u, v) = f(u) r(v) + g(u) e4 swept by the
//! meridians of a rotational hypersurface, where r traces a unit-speed curve
//! on the unit 2-sphere and (f, g) is a unit-speed plane profile. This crate
//! builds such surfaces, computes the Gauss map G = x ^ y in the bivector
//! space of E^4 together with its Laplacian (closed form and an independent
//! finite-difference oracle), classifies surfaces whose Gauss map satisfies
//! Delta G = lambda (G + C) with C constant, and numerically constructs the
//! two profile families governed by ordinary differential equations.

pub mod classify;
pub mod config;
pub mod curves;
pub mod error;
pub mod gaussmap;
pub mod linalg4;
pub mod mesh;
pub mod odes;
pub mod surface;

pub use error::{Error, Result};
pub use linalg4::{wedge, Bivector4, Matrix2, Vector4};

//! Recovery of planted partitions in random graphs by projecting adjacency
//! columns onto a spectrally estimated subspace and clustering the
//! projections by distance.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common instantiations.

pub mod cluster;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod model;
pub mod scalar;
pub mod seed;
pub mod spectra;
pub mod svdpart;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type DenseMatrix64 = spectra::DenseMatrix<f64>;
pub type DenseMatrix32 = spectra::DenseMatrix<f32>;
pub type Basis64 = spectra::Basis<f64>;
pub type Basis32 = spectra::Basis<f32>;
pub type PointSet64 = cluster::PointSet<f64>;
pub type PointSet32 = cluster::PointSet<f32>;
pub type Svd2Result64 = svdpart::Svd2Result<f64>;
pub type Svd2Result32 = svdpart::Svd2Result<f32>;

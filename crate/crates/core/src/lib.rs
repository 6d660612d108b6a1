//! Reconstruction of convolutional feature maps (smoothed images, gradients,
//! Laplacian edge maps) directly from parallel-beam CT data.
//!
//! The toolkit covers the full chain: measurement geometry and angular
//! undersampling ([`sampling`]), disc phantoms with exact line-integral
//! oracles ([`phantom`]), the discrete Radon transform with its exact adjoint
//! and classical backprojection ([`xform`]), closed-form data filters and FBP
//! frequency filters ([`filters`]), filtered-backprojection baselines
//! ([`fbp`]), an l1+H1-regularized FISTA solver ([`varsolve`]), and binary
//! edge extraction ([`edges`]). File formats live in [`io`].
//!
//! Conventions used throughout: images are square grids of pixel centers on
//! `[-extent, extent]^2`; sinograms sample angles `phi_j = j*pi/n_angles` on
//! the half circle and offsets `s_l = l * halfwidth / n_radial`; the 1-D
//! Fourier transform along the offset axis uses the unitary
//! `(2*pi)^(-1/2)` normalization.

pub mod edges;
pub mod error;
pub mod fbp;
pub mod filters;
pub mod image;
pub mod io;
pub mod phantom;
pub mod sampling;
pub mod sinogram;
pub mod varsolve;
pub mod xform;

pub use edges::{
    canny, gaussian_smooth, gradient_magnitude, zero_crossings, EdgeMap, EdgeProvenance,
};
pub use error::{Error, Result};
pub use fbp::{fbp_feature, fbp_reconstruct};
pub use filters::{
    sample_filter, sample_filter_with_units, DataFilter, FbpFilter, FbpKind, FeatureKernel,
    FilterUnits,
};
pub use image::Image;
pub use phantom::{Disc, DiscPhantom};
pub use sampling::{sampling_counts, SamplingSpec, SubsetScheme};
pub use sinogram::Sinogram;
pub use varsolve::{fista, soft_threshold, SolveResult, SolverConfig, StepRule};
pub use xform::{adjoint, backproject, convolve_radial, forward, fourier_radial, RadialSpectrum};

pub use num_complex::Complex64;

//! Shared fixtures for the criterion benchmarks.

use tomofeat::{DiscPhantom, SamplingSpec, Sinogram, SubsetScheme};

/// Paper-scale geometry: 200x200 image, 301 offsets on [-1.5, 1.5].
pub fn paper_spec() -> SamplingSpec {
    SamplingSpec::for_grid(150, 1.5).unwrap()
}

/// The 40-angle undersampled variant used by the sparse experiments.
pub fn sparse_spec() -> SamplingSpec {
    paper_spec().subset(40, SubsetScheme::UniformSparse).unwrap()
}

/// Exact sinogram of the three-disc phantom on the given spec.
pub fn disc_sinogram(spec: &SamplingSpec) -> Sinogram {
    DiscPhantom::three_disc(200, 1.0)
        .unwrap()
        .analytic_radon(spec)
}

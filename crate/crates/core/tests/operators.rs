//! Oracle tests for the projector stack: analytic line integrals, the
//! Gaussian family, the convolution identities and the Fourier slice
//! relation.

mod common;

use std::f64::consts::PI;

use common::*;
use tomofeat::xform::{convolve_radial_direct, convolve_radial_fft};
use tomofeat::{
    backproject, convolve_radial, forward, fourier_radial, DataFilter, Disc, DiscPhantom,
    SamplingSpec, Sinogram, SubsetScheme,
};

/// Builds a data filter whose per-angle rows are the rows of a sinogram
/// (used to convolve one sinogram with another).
fn filter_from_sinogram(sino: &Sinogram) -> DataFilter {
    let rows: Vec<Vec<Vec<f64>>> = (0..sino.n_angles())
        .map(|a| vec![sino.row(0, a).to_vec()])
        .collect();
    DataFilter::from_rows(sino.spec().pitch(), sino.spec().n_radial(), rows).unwrap()
}

#[test]
fn discrete_forward_matches_disc_chords() {
    let n = 256;
    let phantom = DiscPhantom::new(
        vec![Disc { center: [0.0, 0.0], radius: 1.0, amplitude: 1.0 }],
        n,
        1.0,
    )
    .unwrap();
    let spec = SamplingSpec::full(160.0, 64, 128, 1.5).unwrap();
    let discrete = forward(&phantom.rasterize(), &spec).unwrap();
    let exact = phantom.analytic_radon(&spec);
    let pitch = 2.0 / n as f64;
    // Rays crossing the boundary transversally err by at most two pixel
    // pitches. Near-tangent rays see the pixel-scale edge smear amplified
    // by the diverging chord slope 2r/sqrt(r^2-s^2); their error is bounded
    // by the half-weight bilinear leak across the tangency band,
    // sqrt(2*r*pitch).
    let offsets = spec.offsets();
    let band = 3.0 * spec.pitch();
    let mut transversal = 0.0f64;
    let mut grazing = 0.0f64;
    for a in 0..spec.n_angles() {
        for (l, &s) in offsets.iter().enumerate() {
            let e = (discrete.at(0, a, l) - exact.at(0, a, l)).abs();
            if (s.abs() - 1.0).abs() <= band {
                grazing = grazing.max(e);
            } else {
                transversal = transversal.max(e);
            }
        }
    }
    assert!(
        transversal <= 2.0 * pitch,
        "transversal error {transversal:.4e} vs 2 pixel pitches {:.4e}",
        2.0 * pitch
    );
    assert!(
        grazing <= (2.0 * pitch).sqrt(),
        "grazing error {grazing:.4e} vs leak envelope {:.4e}",
        (2.0 * pitch).sqrt()
    );
}

#[test]
fn discrete_forward_matches_gaussian_profile() {
    let alpha = 0.1;
    let n = 256;
    let img = gaussian_image(alpha, n, 1.0);
    let spec = SamplingSpec::full(100.0, 16, 128, 1.0).unwrap();
    let discrete = forward(&img, &spec).unwrap();
    let offsets = spec.offsets();
    let peak = radon_gaussian(alpha, 0.0);
    let mut worst = 0.0f64;
    let mut exact = Vec::new();
    for a in 0..spec.n_angles() {
        for (l, &s) in offsets.iter().enumerate() {
            let want = radon_gaussian(alpha, s);
            worst = worst.max((discrete.at(0, a, l) - want).abs() / peak);
            exact.push(want);
        }
    }
    assert!(worst <= 1e-2, "peak-relative error {worst:.3e}");
    assert!(l2_rel(discrete.data(), &exact) <= 1e-2);
}

#[test]
fn forward_convolution_identity_holds_per_angle() {
    // R(f (*) U) = Rf (*)_s RU with f, U, and their convolution all
    // analytic Gaussians; everything goes through the discrete projector.
    let (alpha, beta) = (0.1f64, 0.1f64);
    let gamma = (alpha * alpha + beta * beta).sqrt();
    let n = 256;
    let full = SamplingSpec::full(60.0, 60, 128, 1.0).unwrap();
    for spec in [full.clone(), full.subset(40, SubsetScheme::UniformSparse).unwrap()] {
        let rf = forward(&gaussian_image(alpha, n, 1.0), &spec).unwrap();
        let ru = forward(&gaussian_image(beta, n, 1.0), &spec).unwrap();
        let rconv = forward(&gaussian_image(gamma, n, 1.0), &spec).unwrap();
        let composed = convolve_radial(&rf, &filter_from_sinogram(&ru)).unwrap();
        let err = l2_rel(composed.data(), rconv.data());
        assert!(
            err <= 1e-2,
            "convolution identity off by {err:.3e} at {} angles",
            spec.n_angles()
        );
    }
}

#[test]
fn gaussian_semigroup_under_radial_convolution() {
    // Rg_a (*)_s Rg_b = Rg_sqrt(a^2+b^2) on analytic inputs.
    let (alpha, beta) = (0.05f64, 0.05f64);
    let gamma = (alpha * alpha + beta * beta).sqrt();
    let spec = SamplingSpec::full(16.0, 4, 300, 1.0).unwrap();
    let ra = radon_gaussian_sinogram(alpha, &spec);
    let rb = radon_gaussian_sinogram(beta, &spec);
    let expected = radon_gaussian_sinogram(gamma, &spec);
    let composed = convolve_radial(&ra, &filter_from_sinogram(&rb)).unwrap();
    let peak = radon_gaussian(gamma, 0.0);
    let err = max_abs_diff(composed.data(), expected.data()) / peak;
    assert!(err <= 1e-3, "semigroup error {err:.3e}");
}

#[test]
fn direct_and_fft_convolutions_agree_at_scale() {
    let spec = SamplingSpec::full(16.0, 6, 150, 1.5).unwrap();
    let mut rng = Lcg(2024);
    let data: Vec<f64> = (0..spec.n_angles() * spec.n_offsets())
        .map(|_| rng.next())
        .collect();
    let sino = Sinogram::from_data(&spec, 1, data).unwrap();
    let filt = filter_from_sinogram(&radon_gaussian_sinogram(0.07, &spec));
    let direct = convolve_radial_direct(&sino, &filt).unwrap();
    let fft = convolve_radial_fft(&sino, &filt).unwrap();
    assert!(max_abs_diff(direct.data(), fft.data()) <= 1e-10);
}

#[test]
fn fourier_slice_of_the_gaussian() {
    // F_s(Rg_a)(omega) = (2 pi)^(-1/2) exp(-a^2 omega^2 / 2).
    let alpha = 0.1;
    let spec = SamplingSpec::full(16.0, 4, 256, 1.0).unwrap();
    let sino = radon_gaussian_sinogram(alpha, &spec);
    let spectrum = fourier_radial(&sino);
    let peak = (2.0 * PI).sqrt().recip();
    for a in 0..spec.n_angles() {
        let row = spectrum.row(0, a);
        for (k, &omega) in spectrum.omega().iter().enumerate() {
            let expected = peak * (-alpha * alpha * omega * omega / 2.0).exp();
            let err = (row[k].re - expected).abs().max(row[k].im.abs()) / peak;
            assert!(err <= 1e-3, "omega {omega:.1}: error {err:.2e}");
        }
    }
}

#[test]
fn dual_convolution_identity_spot_check() {
    // (R* u) (*) f = R*(u (*)_s R f) at interior pixels, full sampling.
    let n = 64;
    let extent = 1.0;
    let alpha = 0.15; // image width
    let beta = 0.2; // filter width
    let spec = SamplingSpec::full(100.0, 100, 64, 1.0).unwrap();
    let f = gaussian_image(alpha, n, extent);
    let u = radon_gaussian_sinogram(beta, &spec);

    // Left side: backproject u, then convolve with f in image space.
    let bp_u = backproject(&u, n, extent).unwrap();
    // R*u decays slowly; convolve with the (compact) Gaussian as kernel.
    let pitch = f.pitch();
    let radius_px = ((8.0 * alpha) / pitch).ceil() as usize;
    let (kernel, side) = radial_kernel(|r| gaussian2(alpha, r * r), radius_px, pitch);
    let lhs = conv2d(&bp_u, &kernel, side);

    // Right side: convolve the data with u along offsets, then backproject.
    let rf = forward(&f, &spec).unwrap();
    let filtered = convolve_radial(&rf, &filter_from_sinogram(&u)).unwrap();
    let rhs = backproject(&filtered, n, extent).unwrap();

    let scale = lhs.max_abs();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let x = lhs.coord(j);
            let y = lhs.coord(i);
            if x * x + y * y <= 0.25 {
                worst = worst.max((lhs.at(0, i, j) - rhs.at(0, i, j)).abs() / scale);
            }
        }
    }
    assert!(worst <= 5e-2, "dual identity interior error {worst:.3e}");
}

#[test]
fn backprojection_of_symmetric_data_is_rotation_stable() {
    // Dropping the first or the last angle of a full grid rotates the angle
    // set by one step; for rotationally symmetric data the reconstructions
    // must agree up to interpolation error.
    let phantom = DiscPhantom::new(
        vec![Disc { center: [0.0, 0.0], radius: 0.5, amplitude: 1.0 }],
        64,
        1.0,
    )
    .unwrap();
    let full = SamplingSpec::full(96.0, 96, 64, 1.0).unwrap();
    let head: Vec<usize> = (0..95).collect();
    let tail: Vec<usize> = (1..96).collect();
    let spec_a = SamplingSpec::new(96.0, 96, 64, 1.0, head).unwrap();
    let spec_b = SamplingSpec::new(96.0, 96, 64, 1.0, tail).unwrap();
    let _ = full;
    let img_a = backproject(&phantom.analytic_radon(&spec_a), 64, 1.0).unwrap();
    let img_b = backproject(&phantom.analytic_radon(&spec_b), 64, 1.0).unwrap();
    let err = l2_rel(img_a.data(), img_b.data());
    assert!(err <= 1e-2, "rotation covariance error {err:.3e}");
}

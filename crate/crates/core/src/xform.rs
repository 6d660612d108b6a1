//! The operator core: discrete forward Radon projector, its exact adjoint,
//! classical backprojection, radial convolution and 1-D Fourier utilities.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::filters::DataFilter;
use crate::image::Image;
use crate::sampling::SamplingSpec;
use crate::sinogram::Sinogram;

/// Fixed scatter-chunk count for the adjoint so that results are bitwise
/// reproducible regardless of how many threads run.
const ADJOINT_CHUNKS: usize = 8;

/// Accumulation threshold above which the radial convolution switches from
/// the direct sum to the FFT path.
const CONVOLVE_FFT_THRESHOLD: usize = 1 << 15;

fn check_geometry(spec: &SamplingSpec, extent: f64) -> Result<()> {
    if spec.radial_halfwidth() < extent * (1.0 - 1e-12) {
        return Err(Error::invalid(format!(
            "radial halfwidth {} does not cover the image extent {extent}",
            spec.radial_halfwidth()
        )));
    }
    Ok(())
}

/// Walks the quadrature nodes of the line with normal angle `phi` and offset
/// `s`, calling `tap(pixel_index, weight)` for every bilinear tap. The weight
/// combines the composite-trapezoid weight (step = pixel pitch) with the
/// bilinear interpolation coefficient; samples outside the grid are skipped.
///
/// `forward` accumulates `weight * image[index]` and `adjoint` scatters
/// `weight * data` through this same routine, which makes the adjoint the
/// exact transpose of the forward map.
#[inline]
fn trace_ray(
    cos_phi: f64,
    sin_phi: f64,
    s: f64,
    n: usize,
    extent: f64,
    mut tap: impl FnMut(usize, f64),
) {
    let pitch = 2.0 * extent / n as f64;
    let inv_pitch = 1.0 / pitch;
    let half_steps = (SQRT_2 * extent / pitch).ceil() as i64;
    let last = 2 * half_steps;
    let ni = n as i64;
    for k in 0..=last {
        let t = (k - half_steps) as f64 * pitch;
        let w_quad = if k == 0 || k == last { 0.5 * pitch } else { pitch };
        let px = s * cos_phi - t * sin_phi;
        let py = s * sin_phi + t * cos_phi;
        let u = (px + extent) * inv_pitch - 0.5;
        let v = (py + extent) * inv_pitch - 0.5;
        let uf = u.floor();
        let vf = v.floor();
        let fu = u - uf;
        let fv = v - vf;
        let j0 = uf as i64;
        let i0 = vf as i64;
        let taps = [
            (i0, j0, (1.0 - fu) * (1.0 - fv)),
            (i0, j0 + 1, fu * (1.0 - fv)),
            (i0 + 1, j0, (1.0 - fu) * fv),
            (i0 + 1, j0 + 1, fu * fv),
        ];
        for (i, j, w) in taps {
            if i >= 0 && i < ni && j >= 0 && j < ni && w != 0.0 {
                tap((i * ni + j) as usize, w * w_quad);
            }
        }
    }
}

/// Discrete Radon transform on the spec's measured angles: composite
/// trapezoidal rule along each line with bilinear interpolation of the
/// image; points outside the image square contribute zero. Channels are
/// projected independently.
pub fn forward(img: &Image, spec: &SamplingSpec) -> Result<Sinogram> {
    check_geometry(spec, img.extent())?;
    let n = img.size();
    let extent = img.extent();
    let angles = spec.angles();
    let offsets = spec.offsets();
    let cols = spec.n_offsets();
    let mut sino = Sinogram::zeros(spec, img.channels())?;
    for c in 0..img.channels() {
        let pixels = img.channel(c);
        sino.channel_data_mut(c)
            .par_chunks_mut(cols)
            .enumerate()
            .for_each(|(a, row)| {
                let (sin_phi, cos_phi) = angles[a].sin_cos();
                for (l, &s) in offsets.iter().enumerate() {
                    let mut acc = 0.0;
                    trace_ray(cos_phi, sin_phi, s, n, extent, |idx, w| {
                        acc += w * pixels[idx];
                    });
                    row[l] = acc;
                }
            });
    }
    Ok(sino)
}

/// Exact transpose of [`forward`] onto an `n`-pixel grid of the given
/// extent: `<forward(f), g> == <f, adjoint(g)>` up to rounding.
pub fn adjoint(sino: &Sinogram, n: usize, extent: f64) -> Result<Image> {
    check_geometry(sino.spec(), extent)?;
    let angles = sino.spec().angles();
    let offsets = sino.spec().offsets();
    let n_angles = angles.len();
    let mut img = Image::zeros(n, extent, sino.channels())?;
    let chunk_count = ADJOINT_CHUNKS.min(n_angles);
    let chunk_len = n_angles.div_ceil(chunk_count);
    for c in 0..sino.channels() {
        let partials: Vec<Vec<f64>> = (0..chunk_count)
            .into_par_iter()
            .map(|ci| {
                let mut acc = vec![0.0; n * n];
                let hi = ((ci + 1) * chunk_len).min(n_angles);
                #[allow(clippy::needless_range_loop)]
                for a in ci * chunk_len..hi {
                    let (sin_phi, cos_phi) = angles[a].sin_cos();
                    let row = sino.row(c, a);
                    for (l, &s) in offsets.iter().enumerate() {
                        let g = row[l];
                        if g != 0.0 {
                            trace_ray(cos_phi, sin_phi, s, n, extent, |idx, w| {
                                acc[idx] += w * g;
                            });
                        }
                    }
                }
                acc
            })
            .collect();
        let out = img.channel_mut(c);
        for partial in partials {
            for (o, v) in out.iter_mut().zip(partial) {
                *o += v;
            }
        }
    }
    Ok(img)
}

/// Continuous-quadrature backprojection: for each pixel, the measured rows
/// are linearly interpolated at `s = <x, theta>` and summed with weight
/// `2*pi / n_angles`, which represents the full-circle integral recovered
/// from half-circle data by symmetry.
pub fn backproject(sino: &Sinogram, n: usize, extent: f64) -> Result<Image> {
    let spec = sino.spec();
    let trig: Vec<(f64, f64)> = spec.angles().iter().map(|p| p.sin_cos()).collect();
    let n_offsets = spec.n_offsets();
    let inv_pitch = 1.0 / spec.pitch();
    let n_radial = spec.n_radial() as f64;
    let weight = 2.0 * PI / trig.len() as f64;
    let mut img = Image::zeros(n, extent, sino.channels())?;
    let pitch = img.pitch();
    for c in 0..sino.channels() {
        let rows = sino.channel_data(c);
        img.channel_mut(c)
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, out_row)| {
                let y = -extent + (i as f64 + 0.5) * pitch;
                for (j, out) in out_row.iter_mut().enumerate() {
                    let x = -extent + (j as f64 + 0.5) * pitch;
                    let mut acc = 0.0;
                    for (a, &(sin_phi, cos_phi)) in trig.iter().enumerate() {
                        let u = (x * cos_phi + y * sin_phi) * inv_pitch + n_radial;
                        let l0 = u.floor();
                        let frac = u - l0;
                        let l0 = l0 as i64;
                        let row = &rows[a * n_offsets..(a + 1) * n_offsets];
                        if l0 >= 0 && (l0 as usize) < n_offsets {
                            acc += (1.0 - frac) * row[l0 as usize];
                        }
                        let l1 = l0 + 1;
                        if l1 >= 0 && (l1 as usize) < n_offsets {
                            acc += frac * row[l1 as usize];
                        }
                    }
                    *out = weight * acc;
                }
            });
    }
    Ok(img)
}

fn convolve_shape(sino: &Sinogram, filt: &DataFilter) -> Result<usize> {
    let pitch = sino.spec().pitch();
    if (filt.pitch() - pitch).abs() > 1e-9 * pitch {
        return Err(Error::invalid(format!(
            "filter pitch {} does not match sinogram pitch {pitch}",
            filt.pitch()
        )));
    }
    if filt.rows() != 1 && filt.rows() != sino.n_angles() {
        return Err(Error::shape(format!(
            "filter tabulated for {} angle(s), sinogram has {}",
            filt.rows(),
            sino.n_angles()
        )));
    }
    match (filt.channels(), sino.channels()) {
        (1, c) => Ok(c),
        (2, 1) => Ok(2),
        (fc, sc) => Err(Error::shape(format!(
            "cannot convolve a {sc}-channel sinogram with a {fc}-channel filter"
        ))),
    }
}

/// Per-angle discrete convolution along the offset axis, scaled by the
/// offset pitch (Riemann approximation of the continuous convolution).
/// Picks the direct or FFT path by size; both agree to ~1e-10.
pub fn convolve_radial(sino: &Sinogram, filt: &DataFilter) -> Result<Sinogram> {
    let work = sino.n_offsets() * (2 * filt.radius() + 1);
    if work > CONVOLVE_FFT_THRESHOLD {
        convolve_radial_fft(sino, filt)
    } else {
        convolve_radial_direct(sino, filt)
    }
}

/// Direct-sum evaluation of [`convolve_radial`].
pub fn convolve_radial_direct(sino: &Sinogram, filt: &DataFilter) -> Result<Sinogram> {
    let out_channels = convolve_shape(sino, filt)?;
    let pitch = sino.spec().pitch();
    let cols = sino.n_offsets() as i64;
    let radius = filt.radius() as i64;
    let mut out = Sinogram::zeros(sino.spec(), out_channels)?;
    for oc in 0..out_channels {
        let (fc, ic) = if filt.channels() == 2 { (oc, 0) } else { (0, oc) };
        for a in 0..sino.n_angles() {
            let coeffs = filt.coeff_row(if filt.rows() == 1 { 0 } else { a }, fc);
            let input = sino.row(ic, a);
            let row = out.row_mut(oc, a);
            for l in 0..cols {
                let mut acc = 0.0;
                let k_lo = (-radius).max(l - cols + 1);
                let k_hi = radius.min(l);
                for k in k_lo..=k_hi {
                    acc += coeffs[(k + radius) as usize] * input[(l - k) as usize];
                }
                row[l as usize] = pitch * acc;
            }
        }
    }
    Ok(out)
}

/// FFT evaluation of [`convolve_radial`] via zero-padded linear convolution.
pub fn convolve_radial_fft(sino: &Sinogram, filt: &DataFilter) -> Result<Sinogram> {
    let out_channels = convolve_shape(sino, filt)?;
    let pitch = sino.spec().pitch();
    let cols = sino.n_offsets();
    let taps = 2 * filt.radius() + 1;
    let conv_len = cols + taps - 1;
    let m = conv_len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    let ifft = planner.plan_fft_inverse(m);
    let inv_m = 1.0 / m as f64;

    let filter_spectrum = |row: usize, fc: usize| -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (i, &c) in filt.coeff_row(row, fc).iter().enumerate() {
            buf[i] = Complex64::new(c, 0.0);
        }
        fft.process(&mut buf);
        buf
    };

    let mut out = Sinogram::zeros(sino.spec(), out_channels)?;
    // Shared-filter spectra are computed once; angle-dependent filters get
    // one spectrum per row below.
    let shared: Vec<Vec<Complex64>> = if filt.rows() == 1 {
        (0..filt.channels()).map(|fc| filter_spectrum(0, fc)).collect()
    } else {
        Vec::new()
    };

    let input_channels = sino.channels();
    for a in 0..sino.n_angles() {
        let mut signal_spectra = Vec::with_capacity(input_channels);
        for ic in 0..input_channels {
            let mut buf = vec![Complex64::new(0.0, 0.0); m];
            for (i, &v) in sino.row(ic, a).iter().enumerate() {
                buf[i] = Complex64::new(v, 0.0);
            }
            fft.process(&mut buf);
            signal_spectra.push(buf);
        }
        for oc in 0..out_channels {
            let (fc, ic) = if filt.channels() == 2 { (oc, 0) } else { (0, oc) };
            let fspec;
            let fspec_ref = if filt.rows() == 1 {
                &shared[fc]
            } else {
                fspec = filter_spectrum(a, fc);
                &fspec
            };
            let mut buf: Vec<Complex64> = signal_spectra[ic]
                .iter()
                .zip(fspec_ref)
                .map(|(s, f)| s * f)
                .collect();
            ifft.process(&mut buf);
            let row = out.row_mut(oc, a);
            for l in 0..cols {
                row[l] = pitch * buf[l + filt.radius()].re * inv_m;
            }
        }
    }
    Ok(out)
}

/// Per-angle spectrum of a sinogram along the offset axis, in the unitary
/// continuous-transform normalization.
#[derive(Debug, Clone)]
pub struct RadialSpectrum {
    spec: SamplingSpec,
    channels: usize,
    padded_len: usize,
    omega: Vec<f64>,
    data: Vec<Complex64>,
}

impl RadialSpectrum {
    pub fn spec(&self) -> &SamplingSpec {
        &self.spec
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn padded_len(&self) -> usize {
        self.padded_len
    }

    /// Angular frequencies for each spectrum bin (FFT ordering: nonnegative
    /// first, then negative).
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn row(&self, channel: usize, angle: usize) -> &[Complex64] {
        let start = (channel * self.spec.n_angles() + angle) * self.padded_len;
        &self.data[start..start + self.padded_len]
    }

    pub fn row_mut(&mut self, channel: usize, angle: usize) -> &mut [Complex64] {
        let start = (channel * self.spec.n_angles() + angle) * self.padded_len;
        &mut self.data[start..start + self.padded_len]
    }
}

/// Unitary 1-D Fourier transform along the offset axis, per angle and
/// channel: approximates `F g(omega) = (2 pi)^(-1/2) * integral of
/// g(s) exp(-i s omega) ds` on a grid zero-padded to at least twice the
/// signal length.
pub fn fourier_radial(sino: &Sinogram) -> RadialSpectrum {
    let spec = sino.spec().clone();
    let cols = spec.n_offsets();
    let m = (2 * cols).next_power_of_two();
    let pitch = spec.pitch();
    let scale = pitch / (2.0 * PI).sqrt();
    let omega: Vec<f64> = (0..m)
        .map(|k| {
            let k_signed = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
            2.0 * PI * k_signed / (m as f64 * pitch)
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    let mut data = Vec::with_capacity(sino.channels() * spec.n_angles() * m);
    for c in 0..sino.channels() {
        for a in 0..spec.n_angles() {
            let mut buf = vec![Complex64::new(0.0, 0.0); m];
            for (i, &v) in sino.row(c, a).iter().enumerate() {
                buf[i] = Complex64::new(v, 0.0);
            }
            fft.process(&mut buf);
            // Slot 0 of the buffer holds s = -n_radial * pitch; shift the
            // phase so the spectrum is referenced to s = 0.
            let shift = 2.0 * PI * spec.n_radial() as f64 / m as f64;
            for (k, v) in buf.iter_mut().enumerate() {
                let phase = Complex64::from_polar(scale, shift * k as f64);
                *v *= phase;
            }
            data.extend_from_slice(&buf);
        }
    }
    RadialSpectrum {
        spec,
        channels: sino.channels(),
        padded_len: m,
        omega,
        data,
    }
}

/// Inverse of [`fourier_radial`]; round-trips to ~1e-12.
pub fn inverse_fourier_radial(spectrum: &RadialSpectrum) -> Sinogram {
    let spec = &spectrum.spec;
    let cols = spec.n_offsets();
    let m = spectrum.padded_len;
    let pitch = spec.pitch();
    let scale = (2.0 * PI).sqrt() / (pitch * m as f64);
    let shift = -2.0 * PI * spec.n_radial() as f64 / m as f64;
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(m);
    let mut sino = Sinogram::zeros(spec, spectrum.channels).expect("valid channels");
    for c in 0..spectrum.channels {
        for a in 0..spec.n_angles() {
            let mut buf: Vec<Complex64> = spectrum
                .row(c, a)
                .iter()
                .enumerate()
                .map(|(k, v)| v * Complex64::from_polar(scale, shift * k as f64))
                .collect();
            ifft.process(&mut buf);
            let row = sino.row_mut(c, a);
            for l in 0..cols {
                row[l] = buf[l].re;
            }
        }
    }
    sino
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::DataFilter;
    use crate::phantom::DiscPhantom;
    use proptest::prelude::*;

    fn small_spec() -> SamplingSpec {
        SamplingSpec::full(16.0, 8, 8, 1.0).unwrap()
    }

    #[test]
    fn zero_image_projects_to_zero() {
        let img = Image::zeros(16, 1.0, 1).unwrap();
        let sino = forward(&img, &small_spec()).unwrap();
        assert_eq!(sino.max_abs(), 0.0);
    }

    #[test]
    fn forward_rejects_uncovered_extent() {
        let img = Image::zeros(16, 2.0, 1).unwrap();
        assert!(forward(&img, &small_spec()).is_err());
    }

    #[test]
    fn forward_is_linear() {
        let spec = small_spec();
        let mut rng = 17u64;
        let mut next = move || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 16;
        let f: Vec<f64> = (0..n * n).map(|_| next()).collect();
        let g: Vec<f64> = (0..n * n).map(|_| next()).collect();
        let combo: Vec<f64> = f.iter().zip(&g).map(|(a, b)| 2.5 * a - 1.25 * b).collect();
        let pf = forward(&Image::from_data(n, 1.0, 1, f).unwrap(), &spec).unwrap();
        let pg = forward(&Image::from_data(n, 1.0, 1, g).unwrap(), &spec).unwrap();
        let pc = forward(&Image::from_data(n, 1.0, 1, combo).unwrap(), &spec).unwrap();
        for (i, v) in pc.data().iter().enumerate() {
            let lin = 2.5 * pf.data()[i] - 1.25 * pg.data()[i];
            assert!((v - lin).abs() <= 1e-12 * (1.0 + lin.abs()));
        }
    }

    #[test]
    fn zero_sinogram_maps_back_to_zero() {
        let sino = Sinogram::zeros(&small_spec(), 1).unwrap();
        assert_eq!(adjoint(&sino, 16, 1.0).unwrap().max_abs(), 0.0);
        assert_eq!(backproject(&sino, 16, 1.0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn constant_sinogram_backprojects_to_two_pi() {
        let spec = small_spec();
        let data = vec![1.0; spec.n_angles() * spec.n_offsets()];
        let sino = Sinogram::from_data(&spec, 1, data).unwrap();
        let img = backproject(&sino, 16, 1.0).unwrap();
        // Interior pixels interpolate the constant exactly.
        for row in 4..12 {
            for col in 4..12 {
                assert!((img.at(0, row, col) - 2.0 * PI).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_bin_adjoint_stays_on_its_ray() {
        let spec = small_spec();
        let mut sino = Sinogram::zeros(&spec, 1).unwrap();
        let (a, l) = (3, 10);
        sino.set(0, a, l, 1.0);
        let img = adjoint(&sino, 16, 1.0).unwrap();
        assert!(img.max_abs() > 0.0);
        let phi = spec.angles()[a];
        let s = spec.offsets()[l];
        let pitch = img.pitch();
        for row in 0..16 {
            for col in 0..16 {
                if img.at(0, row, col) != 0.0 {
                    let x = img.coord(col);
                    let y = img.coord(row);
                    let dist = (x * phi.cos() + y * phi.sin() - s).abs();
                    assert!(dist <= SQRT_2 * pitch + 1e-12, "pixel off the strip: {dist}");
                }
            }
        }
    }

    #[test]
    fn delta_column_backprojects_to_a_ridge() {
        let spec = small_spec();
        let mut sino = Sinogram::zeros(&spec, 1).unwrap();
        let (a, l) = (2, 11);
        for _ in 0..1 {
            sino.set(0, a, l, 1.0);
        }
        let img = backproject(&sino, 32, 1.0).unwrap();
        // Independent per-pixel evaluation of the quadrature.
        let phi = spec.angles()[a];
        let s_hit = spec.offsets()[l];
        let weight = 2.0 * PI / spec.n_angles() as f64;
        let pitch = spec.pitch();
        for row in 0..32 {
            for col in 0..32 {
                let x = img.coord(col);
                let y = img.coord(row);
                let s = x * phi.cos() + y * phi.sin();
                let lam = 1.0 - (s - s_hit).abs() / pitch;
                let expected = if lam > 0.0 { weight * lam } else { 0.0 };
                assert!(
                    (img.at(0, row, col) - expected).abs() < 1e-12,
                    "st ({row},{col})"
                );
            }
        }
    }

    #[test]
    fn adjoint_passes_the_dot_product_test() {
        let spec = SamplingSpec::full(16.0, 8, 10, 1.2).unwrap();
        let n = 32;
        let mut state = 99u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..20 {
            let f: Vec<f64> = (0..n * n).map(|_| next()).collect();
            let g: Vec<f64> = (0..spec.n_angles() * spec.n_offsets()).map(|_| next()).collect();
            let fi = Image::from_data(n, 1.0, 1, f.clone()).unwrap();
            let gs = Sinogram::from_data(&spec, 1, g.clone()).unwrap();
            let lhs: f64 = forward(&fi, &spec)
                .unwrap()
                .data()
                .iter()
                .zip(&g)
                .map(|(a, b)| a * b)
                .sum();
            let rhs: f64 = adjoint(&gs, n, 1.0)
                .unwrap()
                .data()
                .iter()
                .zip(&f)
                .map(|(a, b)| a * b)
                .sum();
            let fn2: f64 = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            let gn2: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((lhs - rhs).abs() / (fn2 * gn2) <= 1e-12);
        }
    }

    #[test]
    fn delta_filter_is_the_identity() {
        let spec = small_spec();
        let phantom = DiscPhantom::three_disc(16, 1.0).unwrap();
        let sino = phantom.analytic_radon(&spec);
        let filt = DataFilter::delta(spec.pitch());
        let out = convolve_radial(&sino, &filt).unwrap();
        for (a, b) in sino.data().iter().zip(out.data()) {
            assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn direct_and_fft_convolutions_agree(
            seed in 0u64..1000,
            radius in 1usize..12,
            angle_dependent in proptest::bool::ANY,
        ) {
            let spec = SamplingSpec::full(8.0, 5, 15, 1.0).unwrap();
            let mut state = seed.wrapping_add(1);
            let mut next = move || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let data: Vec<f64> =
                (0..spec.n_angles() * spec.n_offsets()).map(|_| next()).collect();
            let sino = Sinogram::from_data(&spec, 1, data).unwrap();
            let rows = if angle_dependent { spec.n_angles() } else { 1 };
            let coeffs: Vec<Vec<Vec<f64>>> = (0..rows)
                .map(|_| vec![(0..2 * radius + 1).map(|_| next()).collect()])
                .collect();
            let filt = DataFilter::from_rows(spec.pitch(), radius, coeffs).unwrap();
            let d = convolve_radial_direct(&sino, &filt).unwrap();
            let f = convolve_radial_fft(&sino, &filt).unwrap();
            for (a, b) in d.data().iter().zip(f.data()) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn spectrum_round_trips_and_preserves_energy() {
        let spec = SamplingSpec::full(8.0, 3, 20, 1.0).unwrap();
        let mut state = 5u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let data: Vec<f64> = (0..spec.n_angles() * spec.n_offsets()).map(|_| next()).collect();
        let sino = Sinogram::from_data(&spec, 1, data).unwrap();
        let spectrum = fourier_radial(&sino);
        let back = inverse_fourier_radial(&spectrum);
        for (a, b) in sino.data().iter().zip(back.data()) {
            assert!((a - b).abs() < 1e-12);
        }
        // Parseval with the unitary scaling: pitch*sum|g|^2 == domega*sum|G|^2.
        let pitch = spec.pitch();
        let domega = 2.0 * PI / (spectrum.padded_len() as f64 * pitch);
        for a in 0..spec.n_angles() {
            let space: f64 = sino.row(0, a).iter().map(|v| v * v).sum::<f64>() * pitch;
            let freq: f64 =
                spectrum.row(0, a).iter().map(|v| v.norm_sqr()).sum::<f64>() * domega;
            assert!((space - freq).abs() <= 1e-10 * (1.0 + space.abs()));
        }
    }

    #[test]
    fn zero_sinogram_has_zero_spectrum() {
        let spec = small_spec();
        let sino = Sinogram::zeros(&spec, 1).unwrap();
        let spectrum = fourier_radial(&sino);
        assert!(spectrum.row(0, 0).iter().all(|v| v.norm() == 0.0));
    }
}

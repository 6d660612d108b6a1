//! Feature-extraction kernels, their closed-form Radon-domain data filters,
//! and frequency-domain filters for filtered backprojection.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sampling::SamplingSpec;

fn sqrt_2_over_pi() -> f64 {
    (2.0 / PI).sqrt()
}

fn check_width(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::invalid(format!(
            "kernel width must be positive, got {alpha}"
        )));
    }
    Ok(())
}

/// Radon transform of the normalized 2-D Gaussian of width `alpha`:
/// `(alpha * sqrt(2 pi))^-1 * exp(-s^2 / (2 alpha^2))`, independent of the
/// angle.
pub fn radon_of_gaussian(alpha: f64, s: f64) -> Result<f64> {
    check_width(alpha)?;
    Ok((alpha * (2.0 * PI).sqrt()).recip() * (-s * s / (2.0 * alpha * alpha)).exp())
}

/// Data filter for Gaussian-gradient feature maps: the common odd radial
/// profile times the direction vector `(cos phi, sin phi)`.
pub fn grad_data_filter(alpha: f64, phi: f64, s: f64) -> Result<[f64; 2]> {
    check_width(alpha)?;
    let profile =
        -s / (alpha.powi(3) * (2.0 * PI).sqrt()) * (-s * s / (2.0 * alpha * alpha)).exp();
    Ok([profile * phi.cos(), profile * phi.sin()])
}

/// Data filter for Laplacian-of-Gaussian feature maps, the second offset
/// derivative of the Gaussian's Radon transform.
pub fn log_data_filter(alpha: f64, s: f64) -> Result<f64> {
    check_width(alpha)?;
    let a2 = alpha * alpha;
    Ok((alpha.powi(3) * (2.0 * PI).sqrt()).recip()
        * (-s * s / (2.0 * a2)).exp()
        * (s * s / a2 - 1.0))
}

/// Discrete data filter of the Laplacian of the ideal lowpass of bandwidth
/// `b`, on its natural grid `s_l = pi * l / b`.
pub fn lowpass_laplacian_coeff(b: f64, l: i64) -> f64 {
    let scale = sqrt_2_over_pi() * b.powi(3);
    if l == 0 {
        -scale / 3.0
    } else {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        -scale * 2.0 * sign / (PI * PI * (l * l) as f64)
    }
}

/// Discrete data filter of the Ram-Lak-type kernel (Laplacian of the
/// triangle-windowed lowpass) on the grid `s_l = pi * l / b`. Defined for
/// `0 < b <= 1`; larger bandwidths collapse onto `b = 1` because the window
/// vanishes beyond frequency one, so they are clamped with a warning.
pub fn ramlak_laplacian_coeff(b: f64, l: i64) -> f64 {
    let b = if b > 1.0 {
        log::warn!("ram-lak coefficient bandwidth {b} clamped to 1");
        1.0
    } else {
        b
    };
    let scale = sqrt_2_over_pi() * b.powi(3);
    if l == 0 {
        scale * (3.0 * b - 4.0) / 12.0
    } else {
        let l2 = (l * l) as f64;
        if l % 2 == 0 {
            scale * (3.0 * b - 2.0) / (PI * PI * l2)
        } else {
            scale * (-(3.0 * b - 2.0) / (PI * PI * l2) + 12.0 * b / (PI.powi(4) * l2 * l2))
        }
    }
}

/// Spatial feature-extraction kernels with known Radon-domain data filters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureKernel {
    /// Normalized Gaussian of width `alpha` (smoothed image reconstruction).
    Gaussian { alpha: f64 },
    /// Gradient of the Gaussian; two-channel feature maps.
    GaussianGradient { alpha: f64 },
    /// Laplacian of the Gaussian (Marr-Hildreth edge operator).
    LaplacianOfGaussian { alpha: f64 },
    /// Laplacian of the ideal lowpass with bandwidth `bandwidth`.
    LowpassLaplacian { bandwidth: f64 },
    /// Laplacian of the lowpass with a triangular frequency window scaled to
    /// the band `[-bandwidth, bandwidth]`. Coincides with the printed
    /// Ram-Lak-type coefficients at `bandwidth = 1` and extends them
    /// self-similarly (`b^3` amplitude scaling) to finer grids.
    RamLakLaplacian { bandwidth: f64 },
}

impl FeatureKernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FeatureKernel::Gaussian { alpha }
            | FeatureKernel::GaussianGradient { alpha }
            | FeatureKernel::LaplacianOfGaussian { alpha } => check_width(alpha),
            FeatureKernel::LowpassLaplacian { bandwidth }
            | FeatureKernel::RamLakLaplacian { bandwidth } => {
                if !bandwidth.is_finite() || bandwidth <= 0.0 {
                    Err(Error::invalid("kernel bandwidth must be positive"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Channel count of feature maps produced with this kernel.
    pub fn channels(&self) -> usize {
        match self {
            FeatureKernel::GaussianGradient { .. } => 2,
            _ => 1,
        }
    }

    /// True when the kernel is band-limited and therefore tied to its
    /// Shannon grid `pitch = pi / bandwidth`.
    pub fn is_bandlimited(&self) -> bool {
        matches!(
            self,
            FeatureKernel::LowpassLaplacian { .. } | FeatureKernel::RamLakLaplacian { .. }
        )
    }
}

/// A per-angle 1-D convolution kernel in the offset variable, tabulated on
/// a fixed pitch with taps `k = -radius..=radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataFilter {
    kernel: Option<FeatureKernel>,
    pitch: f64,
    radius: usize,
    channels: usize,
    /// `coeffs[row][channel][k + radius]`; a single row is broadcast over
    /// all angles.
    coeffs: Vec<Vec<Vec<f64>>>,
}

impl DataFilter {
    /// Discrete delta: convolution with it is the identity.
    pub fn delta(pitch: f64) -> Self {
        DataFilter {
            kernel: None,
            pitch,
            radius: 0,
            channels: 1,
            coeffs: vec![vec![vec![1.0 / pitch]]],
        }
    }

    /// Filter from raw tabulated rows (`rows[row][channel]` of length
    /// `2*radius + 1`).
    pub fn from_rows(pitch: f64, radius: usize, rows: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if !pitch.is_finite() || pitch <= 0.0 {
            return Err(Error::invalid("filter pitch must be positive"));
        }
        if rows.is_empty() {
            return Err(Error::invalid("filter needs at least one row"));
        }
        let channels = rows[0].len();
        if channels == 0 || channels > 2 {
            return Err(Error::invalid("filter channels must be 1 or 2"));
        }
        for row in &rows {
            if row.len() != channels {
                return Err(Error::shape("inconsistent filter channel counts"));
            }
            for chan in row {
                if chan.len() != 2 * radius + 1 {
                    return Err(Error::shape(format!(
                        "filter row length {} != {}",
                        chan.len(),
                        2 * radius + 1
                    )));
                }
            }
        }
        Ok(DataFilter {
            kernel: None,
            pitch,
            radius,
            channels,
            coeffs: rows,
        })
    }

    pub fn kernel(&self) -> Option<&FeatureKernel> {
        self.kernel.as_ref()
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn rows(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff_row(&self, row: usize, channel: usize) -> &[f64] {
        &self.coeffs[row][channel]
    }

    /// Coefficient at signed tap `k`.
    pub fn coeff(&self, row: usize, channel: usize, k: i64) -> f64 {
        self.coeffs[row][channel][(k + self.radius as i64) as usize]
    }
}

/// Unit system in which a data filter is tabulated.
///
/// `Physical` measures the offset variable in the geometry's physical
/// units; the convolution then approximates the continuous one (the
/// coefficients combine with the offset-pitch Riemann factor). `GridSamples`
/// measures offsets in sample counts with a plain discrete convolution sum,
/// the convention of the MATLAB-style reference experiments: Gaussian
/// widths are in samples, the ideal lowpass lives at the sample-grid
/// Nyquist `pi`, and the Ram-Lak window uses its printed sub-Nyquist band
/// `b <= 1`. Regularization weights quoted by the experiments belong to
/// this unit system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterUnits {
    Physical,
    GridSamples,
}

/// Taps needed so that the discarded Gaussian tail stays below 1e-12 of the
/// peak: `exp(-8^2/2) * (largest polynomial factor)` is comfortably smaller.
fn gaussian_radius(alpha: f64, pitch: f64, cap: usize) -> usize {
    (((8.0 * alpha) / pitch).ceil() as usize).clamp(1, cap.max(1))
}

/// [`sample_filter`] in the chosen unit system.
pub fn sample_filter_with_units(
    kernel: &FeatureKernel,
    spec: &SamplingSpec,
    units: FilterUnits,
) -> Result<DataFilter> {
    match units {
        FilterUnits::Physical => sample_filter(kernel, spec),
        FilterUnits::GridSamples => sample_filter_grid_units(kernel, spec),
    }
}

fn sample_filter_grid_units(kernel: &FeatureKernel, spec: &SamplingSpec) -> Result<DataFilter> {
    kernel.validate()?;
    let pitch = spec.pitch();
    let full_radius = 2 * spec.n_radial();
    // Dividing by the pitch cancels the Riemann factor of the convolution,
    // leaving the plain discrete sum used by the reference experiments.
    let unscale = 1.0 / pitch;
    let filt = match *kernel {
        FeatureKernel::Gaussian { alpha } => {
            let radius = gaussian_radius(alpha, 1.0, full_radius);
            let row: Vec<f64> = (-(radius as i64)..=radius as i64)
                .map(|k| Ok(radon_of_gaussian(alpha, k as f64)? * unscale))
                .collect::<Result<_>>()?;
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 1,
                coeffs: vec![vec![row]],
            }
        }
        FeatureKernel::LaplacianOfGaussian { alpha } => {
            let radius = gaussian_radius(alpha, 1.0, full_radius);
            let row: Vec<f64> = (-(radius as i64)..=radius as i64)
                .map(|k| Ok(log_data_filter(alpha, k as f64)? * unscale))
                .collect::<Result<_>>()?;
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 1,
                coeffs: vec![vec![row]],
            }
        }
        FeatureKernel::GaussianGradient { alpha } => {
            let radius = gaussian_radius(alpha, 1.0, full_radius);
            let mut rows = Vec::with_capacity(spec.n_angles());
            for phi in spec.angles() {
                let mut ch0 = Vec::with_capacity(2 * radius + 1);
                let mut ch1 = Vec::with_capacity(2 * radius + 1);
                for k in -(radius as i64)..=radius as i64 {
                    let pair = grad_data_filter(alpha, phi, k as f64)?;
                    ch0.push(pair[0] * unscale);
                    ch1.push(pair[1] * unscale);
                }
                rows.push(vec![ch0, ch1]);
            }
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 2,
                coeffs: rows,
            }
        }
        FeatureKernel::LowpassLaplacian { bandwidth } => {
            // The sample grid is the Shannon grid of the Nyquist band only.
            if (bandwidth - PI).abs() > 1e-9 {
                return Err(Error::invalid(format!(
                    "sample-unit lowpass kernel requires bandwidth pi, got {bandwidth}"
                )));
            }
            let radius = full_radius;
            let row: Vec<f64> = (-(radius as i64)..=radius as i64)
                .map(|k| lowpass_laplacian_coeff(bandwidth, k) * unscale)
                .collect();
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 1,
                coeffs: vec![vec![row]],
            }
        }
        FeatureKernel::RamLakLaplacian { bandwidth } => {
            // Band-scaled triangle window, like the physical tabulation; in
            // sample units the band is measured in rad/sample and tops out
            // at the Nyquist frequency pi.
            if bandwidth > PI * (1.0 + 1e-12) {
                return Err(Error::invalid(format!(
                    "sample-unit ram-lak band {bandwidth} exceeds the Nyquist frequency pi"
                )));
            }
            let radius = full_radius;
            let row: Vec<f64> = (-(radius as i64)..=radius as i64)
                .map(|k| bandwidth.powi(3) * ramlak_laplacian_coeff(1.0, k) * unscale)
                .collect();
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 1,
                coeffs: vec![vec![row]],
            }
        }
    };
    Ok(filt)
}

/// Tabulates the kernel's data filter on the spec's offset grid in physical
/// units. Gaussian kernels are truncated where the tail falls below 1e-12
/// of the peak; band-limited kernels require the spec pitch to equal their
/// Shannon pitch `pi / bandwidth` and cover the full convolution reach.
pub fn sample_filter(kernel: &FeatureKernel, spec: &SamplingSpec) -> Result<DataFilter> {
    kernel.validate()?;
    let pitch = spec.pitch();
    let full_radius = 2 * spec.n_radial();
    let filt = match *kernel {
        FeatureKernel::Gaussian { alpha } => {
            let radius = gaussian_radius(alpha, pitch, full_radius);
            let row: Vec<f64> = (-(radius as i64)..=radius as i64)
                .map(|k| radon_of_gaussian(alpha, k as f64 * pitch))
                .collect::<Result<_>>()?;
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 1,
                coeffs: vec![vec![row]],
            }
        }
        FeatureKernel::LaplacianOfGaussian { alpha } => {
            let radius = gaussian_radius(alpha, pitch, full_radius);
            let row: Vec<f64> = (-(radius as i64)..=radius as i64)
                .map(|k| log_data_filter(alpha, k as f64 * pitch))
                .collect::<Result<_>>()?;
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 1,
                coeffs: vec![vec![row]],
            }
        }
        FeatureKernel::GaussianGradient { alpha } => {
            let radius = gaussian_radius(alpha, pitch, full_radius);
            let mut rows = Vec::with_capacity(spec.n_angles());
            for phi in spec.angles() {
                let mut ch0 = Vec::with_capacity(2 * radius + 1);
                let mut ch1 = Vec::with_capacity(2 * radius + 1);
                for k in -(radius as i64)..=radius as i64 {
                    let pair = grad_data_filter(alpha, phi, k as f64 * pitch)?;
                    ch0.push(pair[0]);
                    ch1.push(pair[1]);
                }
                rows.push(vec![ch0, ch1]);
            }
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 2,
                coeffs: rows,
            }
        }
        FeatureKernel::LowpassLaplacian { bandwidth }
        | FeatureKernel::RamLakLaplacian { bandwidth } => {
            let shannon = PI / bandwidth;
            if (pitch - shannon).abs() > 1e-9 * shannon {
                return Err(Error::invalid(format!(
                    "band-limited kernel needs pitch {shannon:.6e}, spec has {pitch:.6e}"
                )));
            }
            let radius = full_radius;
            let row: Vec<f64> = (-(radius as i64)..=radius as i64)
                .map(|k| match kernel {
                    FeatureKernel::LowpassLaplacian { .. } => {
                        lowpass_laplacian_coeff(bandwidth, k)
                    }
                    _ => bandwidth.powi(3) * ramlak_laplacian_coeff(1.0, k),
                })
                .collect();
            DataFilter {
                kernel: Some(*kernel),
                pitch,
                radius,
                channels: 1,
                coeffs: vec![vec![row]],
            }
        }
    };
    Ok(filt)
}

/// Filter kinds applied in the frequency domain before backprojection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbpKind {
    /// Gradient feature maps; two channels, odd purely imaginary response.
    Grad,
    /// Laplacian-of-Gaussian feature maps; real, even, nonpositive response.
    Log,
    /// Plain image reconstruction: ramp filter with Gaussian apodization.
    Reconstruction,
}

/// Frequency response of a feature FBP filter, interpreted as the Fourier
/// multiplier of the filtering step (backprojection of the filtered data
/// then yields the feature map).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbpFilter {
    kind: FbpKind,
    alpha: f64,
}

impl FbpFilter {
    pub fn new(kind: FbpKind, alpha: f64) -> Result<Self> {
        check_width(alpha)?;
        Ok(FbpFilter { kind, alpha })
    }

    pub fn kind(&self) -> FbpKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn channels(&self) -> usize {
        match self.kind {
            FbpKind::Grad => 2,
            _ => 1,
        }
    }

    /// Response at angle `phi` and angular frequency `omega` for the given
    /// output channel.
    pub fn response(&self, phi: f64, omega: f64, channel: usize) -> Complex64 {
        let apod = (-self.alpha * self.alpha * omega * omega / 2.0).exp();
        let quarter_pi = 1.0 / (4.0 * PI);
        match self.kind {
            FbpKind::Grad => {
                let direction = if channel == 0 { phi.cos() } else { phi.sin() };
                Complex64::new(0.0, quarter_pi * omega * omega.abs() * apod * direction)
            }
            FbpKind::Log => Complex64::new(
                -quarter_pi * omega.abs().powi(3) * apod,
                0.0,
            ),
            FbpKind::Reconstruction => Complex64::new(quarter_pi * omega.abs() * apod, 0.0),
        }
    }
}

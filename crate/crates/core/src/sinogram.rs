//! Sampled Radon data: per-angle, per-offset value grids.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::sampling::SamplingSpec;

/// Radon samples on a [`SamplingSpec`] grid, possibly two-channel.
///
/// Channel `c`, measured angle `a` (index into the spec's subset) and offset
/// index `l` (0 corresponds to `s = -halfwidth`) live at
/// `data[c*rows*cols + a*cols + l]` with `rows = n_angles`,
/// `cols = 2*n_radial + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    spec: SamplingSpec,
    channels: usize,
    data: Vec<f64>,
}

impl Sinogram {
    pub fn zeros(spec: &SamplingSpec, channels: usize) -> Result<Self> {
        if channels == 0 || channels > 2 {
            return Err(Error::invalid("sinogram channels must be 1 or 2"));
        }
        let len = channels * spec.n_angles() * spec.n_offsets();
        Ok(Sinogram {
            spec: spec.clone(),
            channels,
            data: vec![0.0; len],
        })
    }

    pub fn from_data(spec: &SamplingSpec, channels: usize, data: Vec<f64>) -> Result<Self> {
        let mut sino = Self::zeros(spec, channels)?;
        if data.len() != sino.data.len() {
            return Err(Error::shape(format!(
                "expected {} sinogram values, got {}",
                sino.data.len(),
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sinogram values must be finite"));
        }
        sino.data = data;
        Ok(sino)
    }

    pub fn spec(&self) -> &SamplingSpec {
        &self.spec
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn n_angles(&self) -> usize {
        self.spec.n_angles()
    }

    pub fn n_offsets(&self) -> usize {
        self.spec.n_offsets()
    }

    pub fn at(&self, channel: usize, angle: usize, offset: usize) -> f64 {
        let cols = self.n_offsets();
        self.data[(channel * self.n_angles() + angle) * cols + offset]
    }

    pub fn set(&mut self, channel: usize, angle: usize, offset: usize, value: f64) {
        let cols = self.n_offsets();
        let rows = self.n_angles();
        self.data[(channel * rows + angle) * cols + offset] = value;
    }

    /// One angle's offset profile.
    pub fn row(&self, channel: usize, angle: usize) -> &[f64] {
        let cols = self.n_offsets();
        let start = (channel * self.n_angles() + angle) * cols;
        &self.data[start..start + cols]
    }

    pub fn row_mut(&mut self, channel: usize, angle: usize) -> &mut [f64] {
        let cols = self.n_offsets();
        let start = (channel * self.n_angles() + angle) * cols;
        &mut self.data[start..start + cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// All rows of one channel as a flat angle-major slice.
    pub fn channel_data(&self, channel: usize) -> &[f64] {
        let len = self.n_angles() * self.n_offsets();
        &self.data[channel * len..(channel + 1) * len]
    }

    pub fn channel_data_mut(&mut self, channel: usize) -> &mut [f64] {
        let len = self.n_angles() * self.n_offsets();
        &mut self.data[channel * len..(channel + 1) * len]
    }

    pub fn extract_channel(&self, channel: usize) -> Result<Sinogram> {
        if channel >= self.channels {
            return Err(Error::shape(format!(
                "channel {channel} of a {}-channel sinogram",
                self.channels
            )));
        }
        let len = self.n_angles() * self.n_offsets();
        Sinogram::from_data(
            &self.spec,
            1,
            self.data[channel * len..(channel + 1) * len].to_vec(),
        )
    }

    pub fn from_channels(parts: &[Sinogram]) -> Result<Sinogram> {
        if parts.is_empty() || parts.len() > 2 {
            return Err(Error::invalid("1 or 2 channels expected"));
        }
        let spec = parts[0].spec.clone();
        let mut data = Vec::new();
        for p in parts {
            if p.spec != spec || p.channels != 1 {
                return Err(Error::shape("channel grids must match and be scalar"));
            }
            data.extend_from_slice(&p.data);
        }
        Sinogram::from_data(&spec, parts.len(), data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Add i.i.d. Gaussian noise with standard deviation `eta * max|values|`.
    /// Deterministic for a fixed seed; `eta == 0` is a no-op.
    pub fn add_noise(&mut self, eta: f64, seed: u64) -> Result<()> {
        if !eta.is_finite() || eta < 0.0 {
            return Err(Error::invalid("noise level must be nonnegative"));
        }
        if eta == 0.0 {
            return Ok(());
        }
        let sigma = eta * self.max_abs();
        if sigma == 0.0 {
            return Ok(());
        }
        let normal = Normal::new(0.0, sigma)
            .map_err(|e| Error::invalid(format!("noise distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in &mut self.data {
            *v += normal.sample(&mut rng);
        }
        Ok(())
    }
}

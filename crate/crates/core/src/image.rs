//! Square pixel grids holding scalar or two-channel fields.

use crate::error::{Error, Result};

/// A square image on the physical domain `[-extent, extent]^2`.
///
/// Pixel `(row, col)` of channel `c` is stored at
/// `data[c*n*n + row*n + col]` and has its center at
/// `x = -extent + (col + 0.5) * pitch`, `y = -extent + (row + 0.5) * pitch`.
/// Two channels are used for vector-valued feature maps (gradients); all
/// operators treat channels independently.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    n: usize,
    extent: f64,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn zeros(n: usize, extent: f64, channels: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("image size must be at least 2"));
        }
        if !extent.is_finite() || extent <= 0.0 {
            return Err(Error::invalid("image extent must be positive"));
        }
        if channels == 0 || channels > 2 {
            return Err(Error::invalid("image channels must be 1 or 2"));
        }
        Ok(Image {
            n,
            extent,
            channels,
            data: vec![0.0; channels * n * n],
        })
    }

    pub fn from_data(n: usize, extent: f64, channels: usize, data: Vec<f64>) -> Result<Self> {
        let mut img = Self::zeros(n, extent, channels)?;
        if data.len() != channels * n * n {
            return Err(Error::shape(format!(
                "expected {} values for a {n}x{n} image with {channels} channel(s), got {}",
                channels * n * n,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("image values must be finite"));
        }
        img.data = data;
        Ok(img)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Physical width of a pixel.
    pub fn pitch(&self) -> f64 {
        2.0 * self.extent / self.n as f64
    }

    /// Physical x coordinate of a column's pixel centers.
    pub fn coord(&self, index: usize) -> f64 {
        -self.extent + (index as f64 + 0.5) * self.pitch()
    }

    pub fn at(&self, channel: usize, row: usize, col: usize) -> f64 {
        self.data[channel * self.n * self.n + row * self.n + col]
    }

    pub fn set(&mut self, channel: usize, row: usize, col: usize, value: f64) {
        self.data[channel * self.n * self.n + row * self.n + col] = value;
    }

    pub fn channel(&self, channel: usize) -> &[f64] {
        let len = self.n * self.n;
        &self.data[channel * len..(channel + 1) * len]
    }

    pub fn channel_mut(&mut self, channel: usize) -> &mut [f64] {
        let len = self.n * self.n;
        &mut self.data[channel * len..(channel + 1) * len]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Single-channel view of one channel, shared grid geometry.
    pub fn extract_channel(&self, channel: usize) -> Result<Image> {
        if channel >= self.channels {
            return Err(Error::shape(format!(
                "channel {channel} of a {}-channel image",
                self.channels
            )));
        }
        Image::from_data(self.n, self.extent, 1, self.channel(channel).to_vec())
    }

    /// Stack single-channel images into one multi-channel image.
    pub fn from_channels(parts: &[Image]) -> Result<Image> {
        if parts.is_empty() || parts.len() > 2 {
            return Err(Error::invalid("1 or 2 channels expected"));
        }
        let n = parts[0].n;
        let extent = parts[0].extent;
        let mut data = Vec::with_capacity(parts.len() * n * n);
        for p in parts {
            if p.n != n || p.extent != extent || p.channels != 1 {
                return Err(Error::shape("channel grids must match and be scalar"));
            }
            data.extend_from_slice(&p.data);
        }
        Image::from_data(n, extent, parts.len(), data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_centers_span_the_square() {
        let img = Image::zeros(4, 1.0, 1).unwrap();
        assert!((img.pitch() - 0.5).abs() < 1e-15);
        assert!((img.coord(0) + 0.75).abs() < 1e-15);
        assert!((img.coord(3) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(Image::zeros(1, 1.0, 1).is_err());
        assert!(Image::zeros(4, 0.0, 1).is_err());
        assert!(Image::zeros(4, 1.0, 3).is_err());
        assert!(Image::from_data(2, 1.0, 1, vec![0.0; 3]).is_err());
        assert!(Image::from_data(2, 1.0, 1, vec![0.0, 0.0, 0.0, f64::NAN]).is_err());
    }

    #[test]
    fn channel_split_and_stack_round_trip() {
        let data: Vec<f64> = (0..18).map(|i| i as f64).collect();
        let img = Image::from_data(3, 1.0, 2, data).unwrap();
        let c0 = img.extract_channel(0).unwrap();
        let c1 = img.extract_channel(1).unwrap();
        let back = Image::from_channels(&[c0, c1]).unwrap();
        assert_eq!(back, img);
    }
}

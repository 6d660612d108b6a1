//! Binary edge extraction from feature maps: zero crossings of Laplacian
//! maps (Marr-Hildreth) and Canny on gradient maps.

use crate::error::{Error, Result};
use crate::image::Image;

/// Which detector produced an edge map, with the parameters used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeProvenance {
    LogZeroCrossing { threshold: f64 },
    Canny { low: f64, high: f64 },
}

/// Binary edge mask on the same grid as its source feature map.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMap {
    size: usize,
    extent: f64,
    mask: Vec<bool>,
    provenance: EdgeProvenance,
}

impl EdgeMap {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn provenance(&self) -> EdgeProvenance {
        self.provenance
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.size + col]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Marked pixels as `(row, col)` pairs in row-major order.
    pub fn coordinates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for row in 0..self.size {
            for col in 0..self.size {
                if self.get(row, col) {
                    out.push((row, col));
                }
            }
        }
        out
    }

    pub fn from_mask(
        size: usize,
        extent: f64,
        mask: Vec<bool>,
        provenance: EdgeProvenance,
    ) -> Result<Self> {
        if mask.len() != size * size {
            return Err(Error::shape("edge mask length must be size^2"));
        }
        Ok(EdgeMap {
            size,
            extent,
            mask,
            provenance,
        })
    }
}

/// Separable Gaussian blur with the width given in pixels, the smoothing
/// step of the zero-crossing detection procedure. Sparse variational
/// feature maps contain exact-zero plateaus between their sign lobes;
/// smoothing restores a sign change across them. `sigma_px == 0` returns
/// the input unchanged.
pub fn gaussian_smooth(img: &Image, sigma_px: f64) -> Result<Image> {
    if !sigma_px.is_finite() || sigma_px < 0.0 {
        return Err(Error::invalid("smoothing width must be nonnegative"));
    }
    if sigma_px == 0.0 {
        return Ok(img.clone());
    }
    let n = img.size();
    let reach = (4.0 * sigma_px).ceil() as i64;
    let taps: Vec<f64> = (-reach..=reach)
        .map(|k| (-(k * k) as f64 / (2.0 * sigma_px * sigma_px)).exp())
        .collect();
    let norm: f64 = taps.iter().sum();
    let mut out = Image::zeros(n, img.extent(), img.channels())?;
    for c in 0..img.channels() {
        let src = img.channel(c);
        let mut tmp = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for (t, w) in taps.iter().enumerate() {
                    let jj = j as i64 + t as i64 - reach;
                    if jj >= 0 && jj < n as i64 {
                        acc += w * src[i * n + jj as usize];
                    }
                }
                tmp[i * n + j] = acc / norm;
            }
        }
        let dst = out.channel_mut(c);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for (t, w) in taps.iter().enumerate() {
                    let ii = i as i64 + t as i64 - reach;
                    if ii >= 0 && ii < n as i64 {
                        acc += w * tmp[ii as usize * n + j];
                    }
                }
                dst[i * n + j] = acc / norm;
            }
        }
    }
    Ok(out)
}

/// Marr-Hildreth zero-crossing detector. The map is first normalized to
/// unit peak magnitude so the slope threshold `t` transfers across scales;
/// a pixel is marked when any of the four opposing-neighbor pairs changes
/// sign and the largest absolute difference across those pairs exceeds `t`.
pub fn zero_crossings(log_map: &Image, threshold: f64) -> Result<EdgeMap> {
    if log_map.channels() != 1 {
        return Err(Error::shape("zero crossings expect a single-channel map"));
    }
    if threshold.is_nan() {
        return Err(Error::invalid("threshold must not be NaN"));
    }
    let n = log_map.size();
    let mut mask = vec![false; n * n];
    let peak = log_map.max_abs();
    if peak > 0.0 {
        let v = log_map.channel(0);
        let scale = 1.0 / peak;
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let pairs = [
                    (v[i * n + j - 1], v[i * n + j + 1]),
                    (v[(i - 1) * n + j], v[(i + 1) * n + j]),
                    (v[(i - 1) * n + j - 1], v[(i + 1) * n + j + 1]),
                    (v[(i - 1) * n + j + 1], v[(i + 1) * n + j - 1]),
                ];
                let crossing = pairs.iter().any(|&(a, b)| a * b < 0.0);
                if crossing {
                    let slope = pairs
                        .iter()
                        .map(|&(a, b)| (a - b).abs() * scale)
                        .fold(0.0f64, f64::max);
                    if slope > threshold {
                        mask[i * n + j] = true;
                    }
                }
            }
        }
    }
    EdgeMap::from_mask(
        n,
        log_map.extent(),
        mask,
        EdgeProvenance::LogZeroCrossing { threshold },
    )
}

/// Pointwise Euclidean norm of a two-channel gradient map.
pub fn gradient_magnitude(grad_map: &Image) -> Result<Image> {
    if grad_map.channels() != 2 {
        return Err(Error::shape("gradient magnitude expects two channels"));
    }
    let n = grad_map.size();
    let gx = grad_map.channel(0);
    let gy = grad_map.channel(1);
    let data: Vec<f64> = gx.iter().zip(gy).map(|(x, y)| x.hypot(*y)).collect();
    Image::from_data(n, grad_map.extent(), 1, data)
}

/// Canny on a two-channel gradient map: magnitude (normalized to unit
/// peak), non-maximum suppression with 4-sector direction quantization,
/// double threshold, and 8-connected hysteresis from the strong pixels.
pub fn canny(grad_map: &Image, low: f64, high: f64) -> Result<EdgeMap> {
    if grad_map.channels() != 2 {
        return Err(Error::shape("canny expects a two-channel gradient map"));
    }
    if !(low >= 0.0 && low <= high) {
        return Err(Error::invalid(format!(
            "thresholds must satisfy 0 <= low <= high, got ({low}, {high})"
        )));
    }
    let n = grad_map.size();
    let provenance = EdgeProvenance::Canny { low, high };
    let magnitude = gradient_magnitude(grad_map)?;
    let peak = magnitude.max_abs();
    if peak == 0.0 {
        return EdgeMap::from_mask(n, grad_map.extent(), vec![false; n * n], provenance);
    }
    let m: Vec<f64> = magnitude.channel(0).iter().map(|v| v / peak).collect();
    let gx = grad_map.channel(0);
    let gy = grad_map.channel(1);

    // Non-maximum suppression along the quantized gradient direction.
    let mut thin = vec![0.0; n * n];
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let idx = i * n + j;
            if m[idx] == 0.0 {
                continue;
            }
            let mut angle = gy[idx].atan2(gx[idx]).to_degrees();
            if angle < 0.0 {
                angle += 180.0;
            }
            let (na, nb) = if !(22.5..157.5).contains(&angle) {
                (idx - 1, idx + 1)
            } else if angle < 67.5 {
                (idx - n - 1, idx + n + 1)
            } else if angle < 112.5 {
                (idx - n, idx + n)
            } else {
                (idx - n + 1, idx + n - 1)
            };
            if m[idx] >= m[na] && m[idx] >= m[nb] {
                thin[idx] = m[idx];
            }
        }
    }

    // Double threshold and hysteresis flood from strong pixels.
    let mut mask = vec![false; n * n];
    let mut stack = Vec::new();
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let idx = i * n + j;
            if thin[idx] >= high && !mask[idx] {
                mask[idx] = true;
                stack.push(idx);
                while let Some(p) = stack.pop() {
                    let (pi, pj) = (p / n, p % n);
                    for di in -1i64..=1 {
                        for dj in -1i64..=1 {
                            if di == 0 && dj == 0 {
                                continue;
                            }
                            let qi = pi as i64 + di;
                            let qj = pj as i64 + dj;
                            if qi < 1 || qj < 1 || qi >= n as i64 - 1 || qj >= n as i64 - 1 {
                                continue;
                            }
                            let q = qi as usize * n + qj as usize;
                            if !mask[q] && thin[q] >= low {
                                mask[q] = true;
                                stack.push(q);
                            }
                        }
                    }
                }
            }
        }
    }
    EdgeMap::from_mask(n, grad_map.extent(), mask, provenance)
}

//! Disc phantoms with exact line-integral oracles.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::sampling::SamplingSpec;
use crate::sinogram::Sinogram;

/// One disc: center, radius and additive amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: [f64; 2],
    pub radius: f64,
    pub amplitude: f64,
}

/// A union of discs rasterized by point-sampling at pixel centers. Pixel
/// values are the sum of the amplitudes of all discs containing the center.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscPhantom {
    discs: Vec<Disc>,
    grid_size: usize,
    extent: f64,
}

impl DiscPhantom {
    /// Every disc must fit inside the disc of radius `extent` about the
    /// origin so that the phantom is supported in the reconstruction region.
    pub fn new(discs: Vec<Disc>, grid_size: usize, extent: f64) -> Result<Self> {
        if grid_size < 2 {
            return Err(Error::invalid("grid size must be at least 2"));
        }
        if !extent.is_finite() || extent <= 0.0 {
            return Err(Error::invalid("extent must be positive"));
        }
        for (i, d) in discs.iter().enumerate() {
            if !d.radius.is_finite() || d.radius <= 0.0 {
                return Err(Error::invalid(format!("disc {i}: radius must be positive")));
            }
            let dist = (d.center[0] * d.center[0] + d.center[1] * d.center[1]).sqrt();
            if dist + d.radius > extent * (1.0 + 1e-12) {
                return Err(Error::invalid(format!(
                    "disc {i} reaches {:.6}, outside the radius-{extent} region",
                    dist + d.radius
                )));
            }
            if !d.amplitude.is_finite() {
                return Err(Error::invalid(format!("disc {i}: amplitude must be finite")));
            }
        }
        Ok(DiscPhantom {
            discs,
            grid_size,
            extent,
        })
    }

    /// The three-disc test object used by the reconstruction experiments.
    pub fn three_disc(grid_size: usize, extent: f64) -> Result<Self> {
        let r = extent;
        Self::new(
            vec![
                Disc { center: [-0.30 * r, 0.35 * r], radius: 0.32 * r, amplitude: 1.0 },
                Disc { center: [0.40 * r, 0.20 * r], radius: 0.25 * r, amplitude: 1.0 },
                Disc { center: [0.00, -0.40 * r], radius: 0.30 * r, amplitude: 1.0 },
            ],
            grid_size,
            extent,
        )
    }

    /// Three-disc object plus two low-contrast discs inside the large disc,
    /// giving weak edges that are harder to detect.
    pub fn modified(grid_size: usize, extent: f64, weak_amplitude: f64) -> Result<Self> {
        let mut discs = Self::three_disc(grid_size, extent)?.discs;
        let r = extent;
        discs.push(Disc {
            center: [-0.38 * r, 0.44 * r],
            radius: 0.11 * r,
            amplitude: weak_amplitude,
        });
        discs.push(Disc {
            center: [-0.21 * r, 0.26 * r],
            radius: 0.10 * r,
            amplitude: weak_amplitude,
        });
        Self::new(discs, grid_size, extent)
    }

    pub fn discs(&self) -> &[Disc] {
        &self.discs
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Point-sampled raster of the phantom.
    pub fn rasterize(&self) -> Image {
        let n = self.grid_size;
        let mut img = Image::zeros(n, self.extent, 1).expect("validated during construction");
        let pitch = img.pitch();
        for row in 0..n {
            let y = -self.extent + (row as f64 + 0.5) * pitch;
            for col in 0..n {
                let x = -self.extent + (col as f64 + 0.5) * pitch;
                let mut value = 0.0;
                for d in &self.discs {
                    let dx = x - d.center[0];
                    let dy = y - d.center[1];
                    if dx * dx + dy * dy <= d.radius * d.radius {
                        value += d.amplitude;
                    }
                }
                img.set(0, row, col, value);
            }
        }
        img
    }

    /// Exact Radon transform sampled on the spec's grid: each disc
    /// contributes a chord of length `2*sqrt(r^2 - d^2)` where `d` is the
    /// distance from the disc center to the line.
    pub fn analytic_radon(&self, spec: &SamplingSpec) -> Sinogram {
        let angles = spec.angles();
        let offsets = spec.offsets();
        let mut sino = Sinogram::zeros(spec, 1).expect("single channel is valid");
        for (a, &phi) in angles.iter().enumerate() {
            let (sin_phi, cos_phi) = phi.sin_cos();
            let row = sino.row_mut(0, a);
            for (l, &s) in offsets.iter().enumerate() {
                let mut value = 0.0;
                for d in &self.discs {
                    let proj = d.center[0] * cos_phi + d.center[1] * sin_phi;
                    let dist = s - proj;
                    let under = d.radius * d.radius - dist * dist;
                    if under > 0.0 {
                        value += d.amplitude * 2.0 * under.sqrt();
                    }
                }
                row[l] = value;
            }
        }
        sino
    }
}

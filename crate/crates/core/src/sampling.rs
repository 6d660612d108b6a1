//! Measurement geometry: angle sets, radial grids and sampling conditions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Angle and offset counts that sample an essentially band-limited image
/// without aliasing: `(ceil(b), ceil(b / pi))`.
pub fn sampling_counts(bandwidth: f64) -> Result<(usize, usize)> {
    if !bandwidth.is_finite() || bandwidth <= 0.0 {
        return Err(Error::invalid(format!(
            "bandwidth must be positive and finite, got {bandwidth}"
        )));
    }
    Ok((bandwidth.ceil() as usize, (bandwidth / PI).ceil() as usize))
}

/// How to pick a subset of the full angle grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubsetScheme {
    /// Evenly spread indices over the full half circle.
    UniformSparse,
    /// Contiguous indices whose angles lie inside `[min, max)` radians.
    LimitedView { min: f64, max: f64 },
}

/// Discretization contract for sinograms: a full uniform angle grid
/// `phi_j = j*pi/n_angles_full`, a symmetric radial grid
/// `s_l = l * radial_halfwidth / n_radial` for `l = -n_radial..=n_radial`,
/// and an ordered subset of angle indices that are actually measured.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSpec {
    bandwidth: f64,
    n_angles_full: usize,
    n_radial: usize,
    radial_halfwidth: f64,
    angle_subset: Vec<usize>,
}

impl SamplingSpec {
    pub fn new(
        bandwidth: f64,
        n_angles_full: usize,
        n_radial: usize,
        radial_halfwidth: f64,
        angle_subset: Vec<usize>,
    ) -> Result<Self> {
        if !bandwidth.is_finite() || bandwidth <= 0.0 {
            return Err(Error::invalid("bandwidth must be positive"));
        }
        if n_angles_full == 0 || n_radial == 0 {
            return Err(Error::invalid("angle and radial counts must be positive"));
        }
        if !radial_halfwidth.is_finite() || radial_halfwidth <= 0.0 {
            return Err(Error::invalid("radial halfwidth must be positive"));
        }
        if angle_subset.is_empty() {
            return Err(Error::invalid("angle subset must not be empty"));
        }
        for pair in angle_subset.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::invalid("angle subset must be strictly increasing"));
            }
        }
        if *angle_subset.last().unwrap() >= n_angles_full {
            return Err(Error::invalid(format!(
                "angle subset index {} out of range 0..{}",
                angle_subset.last().unwrap(),
                n_angles_full
            )));
        }
        Ok(SamplingSpec {
            bandwidth,
            n_angles_full,
            n_radial,
            radial_halfwidth,
            angle_subset,
        })
    }

    /// Spec with every angle of the full grid measured.
    pub fn full(
        bandwidth: f64,
        n_angles_full: usize,
        n_radial: usize,
        radial_halfwidth: f64,
    ) -> Result<Self> {
        Self::new(
            bandwidth,
            n_angles_full,
            n_radial,
            radial_halfwidth,
            (0..n_angles_full).collect(),
        )
    }

    /// Fully sampled spec for a given bandwidth, with counts from
    /// [`sampling_counts`].
    pub fn from_bandwidth(bandwidth: f64, radial_halfwidth: f64) -> Result<Self> {
        let (n_angles, n_radial) = sampling_counts(bandwidth)?;
        Self::full(bandwidth, n_angles, n_radial, radial_halfwidth)
    }

    /// Fully sampled spec for an existing radial grid, taking the bandwidth
    /// as `pi * n_radial` (the radial grid is trusted, the angle count
    /// follows from it).
    pub fn for_grid(n_radial: usize, radial_halfwidth: f64) -> Result<Self> {
        let bandwidth = PI * n_radial as f64;
        let n_angles = bandwidth.ceil() as usize;
        Self::full(bandwidth, n_angles, n_radial, radial_halfwidth)
    }

    /// Spec measuring `m` of this spec's full angle grid. Bandwidth and
    /// radial grid carry over unchanged.
    pub fn subset(&self, m: usize, scheme: SubsetScheme) -> Result<Self> {
        if m == 0 || m > self.n_angles_full {
            return Err(Error::invalid(format!(
                "subset size {m} out of range 1..={}",
                self.n_angles_full
            )));
        }
        let indices = match scheme {
            SubsetScheme::UniformSparse => {
                let stride = self.n_angles_full as f64 / m as f64;
                (0..m).map(|j| (j as f64 * stride).round() as usize).collect()
            }
            SubsetScheme::LimitedView { min, max } => {
                if !min.is_finite() || !max.is_finite() || max <= min {
                    return Err(Error::invalid("empty limited-view range"));
                }
                let in_range: Vec<usize> = (0..self.n_angles_full)
                    .filter(|&j| {
                        let phi = j as f64 * PI / self.n_angles_full as f64;
                        phi >= min && phi < max
                    })
                    .collect();
                if in_range.len() < m {
                    return Err(Error::invalid(format!(
                        "limited view [{min}, {max}) holds {} angles, {m} requested",
                        in_range.len()
                    )));
                }
                in_range[..m].to_vec()
            }
        };
        Self::new(
            self.bandwidth,
            self.n_angles_full,
            self.n_radial,
            self.radial_halfwidth,
            indices,
        )
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn n_angles_full(&self) -> usize {
        self.n_angles_full
    }

    pub fn n_radial(&self) -> usize {
        self.n_radial
    }

    pub fn radial_halfwidth(&self) -> f64 {
        self.radial_halfwidth
    }

    pub fn angle_subset(&self) -> &[usize] {
        &self.angle_subset
    }

    /// Number of measured angles.
    pub fn n_angles(&self) -> usize {
        self.angle_subset.len()
    }

    /// Number of radial samples, `2 * n_radial + 1`.
    pub fn n_offsets(&self) -> usize {
        2 * self.n_radial + 1
    }

    /// Radial grid spacing.
    pub fn pitch(&self) -> f64 {
        self.radial_halfwidth / self.n_radial as f64
    }

    /// Measured angles in radians, all in `[0, pi)`.
    pub fn angles(&self) -> Vec<f64> {
        let step = PI / self.n_angles_full as f64;
        self.angle_subset.iter().map(|&j| j as f64 * step).collect()
    }

    /// Offset values `s_l` in grid order, `l = -n_radial..=n_radial`.
    pub fn offsets(&self) -> Vec<f64> {
        let pitch = self.pitch();
        (-(self.n_radial as i64)..=self.n_radial as i64)
            .map(|l| l as f64 * pitch)
            .collect()
    }

    /// True when all full-grid angles are measured and the counts meet the
    /// sampling condition for this spec's bandwidth.
    pub fn is_fully_sampled(&self) -> bool {
        if self.angle_subset.len() != self.n_angles_full {
            return false;
        }
        match sampling_counts(self.bandwidth) {
            Ok((na, nr)) => self.n_angles_full >= na && self.n_radial >= nr,
            Err(_) => false,
        }
    }
}

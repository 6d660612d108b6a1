//! Shared helpers for the oracle tests. Everything here is deliberately
//! independent of the library's operator implementations: plain loops,
//! closed-form expressions, and dense linear algebra only.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)] // index loops mirror the dense algebra

use std::f64::consts::PI;

use tomofeat::{Image, SamplingSpec, Sinogram};

/// Deterministic uniform values in [-0.5, 0.5) from a tiny LCG.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

/// Normalized 2-D Gaussian of width `alpha` at squared radius `r2`.
pub fn gaussian2(alpha: f64, r2: f64) -> f64 {
    (2.0 * PI * alpha * alpha).recip() * (-r2 / (2.0 * alpha * alpha)).exp()
}

/// Rasterized centered Gaussian.
pub fn gaussian_image(alpha: f64, n: usize, extent: f64) -> Image {
    let pitch = 2.0 * extent / n as f64;
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        let y = -extent + (i as f64 + 0.5) * pitch;
        for j in 0..n {
            let x = -extent + (j as f64 + 0.5) * pitch;
            data[i * n + j] = gaussian2(alpha, x * x + y * y);
        }
    }
    Image::from_data(n, extent, 1, data).unwrap()
}

/// Closed-form Radon transform of the centered Gaussian.
pub fn radon_gaussian(alpha: f64, s: f64) -> f64 {
    (alpha * (2.0 * PI).sqrt()).recip() * (-s * s / (2.0 * alpha * alpha)).exp()
}

/// Sinogram whose every row is the analytic Radon profile of a centered
/// Gaussian (angle independent).
pub fn radon_gaussian_sinogram(alpha: f64, spec: &SamplingSpec) -> Sinogram {
    let offsets = spec.offsets();
    let mut data = Vec::with_capacity(spec.n_angles() * spec.n_offsets());
    for _ in 0..spec.n_angles() {
        data.extend(offsets.iter().map(|&s| radon_gaussian(alpha, s)));
    }
    Sinogram::from_data(spec, 1, data).unwrap()
}

/// Full 2-D discrete convolution with zero padding, scaled by the pixel
/// area (Riemann approximation of the continuous convolution). The kernel
/// is given as a centered square of odd side.
pub fn conv2d(image: &Image, kernel: &[f64], kside: usize) -> Image {
    assert_eq!(kernel.len(), kside * kside);
    assert!(kside % 2 == 1);
    let n = image.size();
    let r = (kside / 2) as i64;
    let pitch = image.pitch();
    let area = pitch * pitch;
    let src = image.channel(0);
    let mut out = vec![0.0; n * n];
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            let mut acc = 0.0;
            for ki in -r..=r {
                let si = i - ki;
                if si < 0 || si >= n as i64 {
                    continue;
                }
                for kj in -r..=r {
                    let sj = j - kj;
                    if sj < 0 || sj >= n as i64 {
                        continue;
                    }
                    acc += kernel[((ki + r) * kside as i64 + (kj + r)) as usize]
                        * src[(si * n as i64 + sj) as usize];
                }
            }
            out[(i * n as i64 + j) as usize] = acc * area;
        }
    }
    Image::from_data(n, image.extent(), 1, out).unwrap()
}

/// Centered square raster of a radially defined kernel function.
pub fn radial_kernel(f: impl Fn(f64) -> f64, radius_px: usize, pitch: f64) -> (Vec<f64>, usize) {
    let side = 2 * radius_px + 1;
    let mut k = vec![0.0; side * side];
    for i in 0..side {
        let y = (i as i64 - radius_px as i64) as f64 * pitch;
        for j in 0..side {
            let x = (j as i64 - radius_px as i64) as f64 * pitch;
            k[i * side + j] = f((x * x + y * y).sqrt());
        }
    }
    (k, side)
}

pub fn l2_rel(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let norm: f64 = b.iter().map(|y| y * y).sum();
    (diff / norm).sqrt()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting (dense,
/// test-only oracle).
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| m[p][col].abs().total_cmp(&m[q][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let diag = m[col][col];
        assert!(diag.abs() > 1e-14, "singular system in dense oracle");
        for row in col + 1..n {
            let factor = m[row][col] / diag;
            if factor != 0.0 {
                for k in col..n {
                    m[row][k] -= factor * m[col][k];
                }
                rhs[row] -= factor * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// Fraction of `samples` boundary points of the circle that have a marked
/// edge pixel within `tol_px` pixels.
pub fn arc_coverage(
    edges: &tomofeat::EdgeMap,
    center: [f64; 2],
    radius: f64,
    tol_px: f64,
    samples: usize,
) -> f64 {
    let n = edges.size();
    let extent = edges.extent();
    let pitch = 2.0 * extent / n as f64;
    let tol = tol_px * pitch;
    let reach = tol_px.ceil() as i64 + 1;
    let mut covered = 0usize;
    for k in 0..samples {
        let theta = 2.0 * PI * k as f64 / samples as f64;
        let bx = center[0] + radius * theta.cos();
        let by = center[1] + radius * theta.sin();
        let cj = ((bx + extent) / pitch - 0.5).round() as i64;
        let ci = ((by + extent) / pitch - 0.5).round() as i64;
        let mut hit = false;
        'search: for di in -reach..=reach {
            for dj in -reach..=reach {
                let i = ci + di;
                let j = cj + dj;
                if i < 0 || j < 0 || i >= n as i64 || j >= n as i64 {
                    continue;
                }
                if edges.get(i as usize, j as usize) {
                    let px = -extent + (j as f64 + 0.5) * pitch;
                    let py = -extent + (i as f64 + 0.5) * pitch;
                    if ((px - bx).powi(2) + (py - by).powi(2)).sqrt() <= tol {
                        hit = true;
                        break 'search;
                    }
                }
            }
        }
        if hit {
            covered += 1;
        }
    }
    covered as f64 / samples as f64
}

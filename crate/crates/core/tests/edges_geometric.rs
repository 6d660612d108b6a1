//! Geometric oracles for the edge detectors on known circles.

mod common;

use common::*;
use tomofeat::{canny, zero_crossings, Disc, DiscPhantom, Image};

#[test]
fn log_zero_crossings_trace_the_disc_boundary() {
    // Image-space Laplacian-of-Gaussian of a rasterized disc: the marked
    // pixels must hug the circle and cover nearly all of it.
    let n = 200;
    let alpha = 0.013; // 1.3 pixels
    let radius = 0.55;
    let phantom = DiscPhantom::new(
        vec![Disc { center: [0.0, 0.0], radius, amplitude: 1.0 }],
        n,
        1.0,
    )
    .unwrap();
    let raster = phantom.rasterize();
    let pitch = raster.pitch();
    let a2 = alpha * alpha;
    let radius_px = (8.0 * alpha / pitch).ceil() as usize;
    let (kernel, side) = radial_kernel(
        |r| gaussian2(alpha, r * r) * (r * r - 2.0 * a2) / (a2 * a2),
        radius_px,
        pitch,
    );
    let log_map = conv2d(&raster, &kernel, side);
    let edges = zero_crossings(&log_map, 0.005).unwrap();

    let coverage = arc_coverage(&edges, [0.0, 0.0], radius, 2.0, 720);
    assert!(coverage >= 0.95, "arc coverage {coverage:.3}");
    for (row, col) in edges.coordinates() {
        let x = log_map.coord(col);
        let y = log_map.coord(row);
        let dist = ((x * x + y * y).sqrt() - radius).abs();
        assert!(
            dist <= 2.0 * pitch,
            "marked pixel ({row},{col}) is {:.2} px off the circle",
            dist / pitch
        );
    }
}

#[test]
fn canny_closes_the_disc_contour() {
    // Gaussian-gradient feature map of a disc, computed in image space with
    // the wide smoothing used for the real-data experiment (six pixels).
    let n = 128;
    let radius = 0.55;
    let alpha = 6.0 * 2.0 / n as f64;
    let phantom = DiscPhantom::new(
        vec![Disc { center: [0.0, 0.0], radius, amplitude: 1.0 }],
        n,
        1.0,
    )
    .unwrap();
    let raster = phantom.rasterize();
    let pitch = raster.pitch();
    let radius_px = (8.0 * alpha / pitch).ceil() as usize;
    let side = 2 * radius_px + 1;
    let mut kx = vec![0.0; side * side];
    let mut ky = vec![0.0; side * side];
    for i in 0..side {
        let y = (i as i64 - radius_px as i64) as f64 * pitch;
        for j in 0..side {
            let x = (j as i64 - radius_px as i64) as f64 * pitch;
            let g = gaussian2(alpha, x * x + y * y);
            kx[i * side + j] = -x / (alpha * alpha) * g;
            ky[i * side + j] = -y / (alpha * alpha) * g;
        }
    }
    let gx = conv2d(&raster, &kx, side);
    let gy = conv2d(&raster, &ky, side);
    let grad = Image::from_channels(&[gx, gy]).unwrap();
    let edges = canny(&grad, 0.1, 0.15).unwrap();
    let coverage = arc_coverage(&edges, [0.0, 0.0], radius, 2.0, 720);
    assert!(coverage >= 0.90, "arc coverage {coverage:.3}");
    // The contour is thin: every marked pixel sits near the circle.
    for (row, col) in edges.coordinates() {
        let x = grad.coord(col);
        let y = grad.coord(row);
        let dist = ((x * x + y * y).sqrt() - radius).abs();
        assert!(dist <= 3.0 * pitch, "pixel ({row},{col}) off by {:.2} px", dist / pitch);
    }
}

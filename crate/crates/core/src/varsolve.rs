//! Variational feature-map reconstruction: minimize
//! `0.5*||R h - u (*) y||^2 + mu*||grad h||^2 + lambda*||h||_1` with FISTA.
//!
//! Norms are plain Euclidean sums over the discrete grids. The smooth part
//! (data term plus H1 term) is handled by gradient steps with step size
//! `1/L`, the l1 term by soft thresholding. Two-channel right-hand sides
//! decouple and are solved channel by channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filters::DataFilter;
use crate::image::Image;
use crate::sampling::SamplingSpec;
use crate::sinogram::Sinogram;
use crate::xform::{adjoint, convolve_radial, forward};

/// Step-size policy for the gradient step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `1/L` with `L` estimated by power iteration on the smooth Hessian,
    /// inflated by 1%.
    AutoPowerIteration,
    /// A fixed step size supplied by the caller.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// l1 weight, nonnegative.
    pub lambda: f64,
    /// H1 weight, nonnegative.
    pub mu: f64,
    pub max_iters: usize,
    pub step: StepRule,
    /// Record the objective (and its three terms) at every iterate.
    pub record_objective: bool,
}

impl SolverConfig {
    pub fn new(lambda: f64, mu: f64, max_iters: usize) -> Self {
        SolverConfig {
            lambda,
            mu,
            max_iters,
            step: StepRule::AutoPowerIteration,
            record_objective: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0 && self.mu.is_finite() && self.mu >= 0.0) {
            return Err(Error::invalid("regularization weights must be nonnegative"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("at least one iteration is required"));
        }
        if let StepRule::Fixed(s) = self.step {
            if !s.is_finite() || s <= 0.0 {
                return Err(Error::invalid("fixed step size must be positive"));
            }
        }
        Ok(())
    }
}

/// Objective value and its parts at one iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveRow {
    pub iteration: usize,
    pub objective: f64,
    pub data_term: f64,
    pub h1_term: f64,
    pub l1_term: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub feature_map: Image,
    /// One row per iterate (including the zero initializer) when recording
    /// is enabled, channel contributions summed.
    pub objective_trace: Vec<ObjectiveRow>,
    pub iterations: usize,
    /// The gradient step size that was used.
    pub step: f64,
}

/// Proximal map of `tau * |.|`: shrink toward zero by `tau`.
pub fn soft_threshold(x: f64, tau: f64) -> f64 {
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

/// Convolves the measured data with the kernel's data filter, producing the
/// right-hand side of the feature-map normal equations. Two-channel filters
/// yield a two-channel right-hand side.
pub fn preprocess_rhs(y: &Sinogram, filt: &DataFilter) -> Result<Sinogram> {
    convolve_radial(y, filt)
}

/// Forward differences with a zero boundary: `dx[i,j] = h[i,j+1] - h[i,j]`
/// reading zero past the last column (and rows analogously). Injective, so
/// the H1 Hessian below is positive definite.
fn grad_components(h: &[f64], n: usize, dx: &mut [f64], dy: &mut [f64]) {
    for i in 0..n {
        let row = i * n;
        for j in 0..n {
            let v = h[row + j];
            dx[row + j] = if j + 1 < n { h[row + j + 1] - v } else { -v };
            dy[row + j] = if i + 1 < n { h[row + n + j] - v } else { -v };
        }
    }
}

/// `(Dx^T Dx + Dy^T Dy) h`, the exact transpose composition of
/// [`grad_components`].
fn grad_normal(h: &[f64], n: usize, out: &mut [f64], dx: &mut [f64], dy: &mut [f64]) {
    grad_components(h, n, dx, dy);
    for i in 0..n {
        let row = i * n;
        for j in 0..n {
            let dxt = if j > 0 { dx[row + j - 1] } else { 0.0 } - dx[row + j];
            let dyt = if i > 0 { dy[row - n + j] } else { 0.0 } - dy[row + j];
            out[row + j] = dxt + dyt;
        }
    }
}

/// Squared H1 seminorm `||grad h||^2` of one channel.
fn h1_energy(h: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        let row = i * n;
        for j in 0..n {
            let v = h[row + j];
            let dx = if j + 1 < n { h[row + j + 1] - v } else { -v };
            let dy = if i + 1 < n { h[row + n + j] - v } else { -v };
            acc += dx * dx + dy * dy;
        }
    }
    acc
}

/// Gradient of the smooth objective part
/// `0.5*||R h - rhs||^2 + mu*||grad h||^2`, i.e.
/// `R^T (R h - rhs) + 2*mu*(grad^T grad) h`, channel by channel.
pub fn smooth_gradient(h: &Image, rhs: &Sinogram, mu: f64) -> Result<Image> {
    if h.channels() != rhs.channels() {
        return Err(Error::shape(format!(
            "image has {} channel(s), right-hand side has {}",
            h.channels(),
            rhs.channels()
        )));
    }
    let n = h.size();
    let mut resid = forward(h, rhs.spec())?;
    for (r, b) in resid.data_mut().iter_mut().zip(rhs.data()) {
        *r -= b;
    }
    let mut grad = adjoint(&resid, n, h.extent())?;
    if mu != 0.0 {
        let mut dx = vec![0.0; n * n];
        let mut dy = vec![0.0; n * n];
        let mut lap = vec![0.0; n * n];
        for c in 0..h.channels() {
            grad_normal(h.channel(c), n, &mut lap, &mut dx, &mut dy);
            for (g, l) in grad.channel_mut(c).iter_mut().zip(&lap) {
                *g += 2.0 * mu * l;
            }
        }
    }
    Ok(grad)
}

/// Largest eigenvalue of the smooth Hessian `R^T R + 2*mu*grad^T grad`,
/// estimated by power iteration from a fixed seeded start vector.
pub fn estimate_lipschitz(
    spec: &SamplingSpec,
    n: usize,
    extent: f64,
    mu: f64,
    iters: usize,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x746f_6d6f);
    let mut v: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    let mut dx = vec![0.0; n * n];
    let mut dy = vec![0.0; n * n];
    let mut lap = vec![0.0; n * n];
    let mut img = Image::zeros(n, extent, 1)?;
    let mut lambda = 0.0;
    for _ in 0..iters {
        img.channel_mut(0).copy_from_slice(&v);
        let projected = forward(&img, spec)?;
        let mut w = adjoint(&projected, n, extent)?;
        if mu != 0.0 {
            grad_normal(&v, n, &mut lap, &mut dx, &mut dy);
            for (wv, l) in w.channel_mut(0).iter_mut().zip(&lap) {
                *wv += 2.0 * mu * l;
            }
        }
        let w = w.channel(0);
        lambda = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if lambda < 1e-300 {
            return Err(Error::Numerical(
                "power iteration collapsed to zero".into(),
            ));
        }
        for (vi, wi) in v.iter_mut().zip(w) {
            *vi = wi / lambda;
        }
    }
    Ok(lambda)
}

const POWER_ITERS: usize = 50;
const STEP_INFLATION: f64 = 1.01;
const DIVERGENCE_FACTOR: f64 = 10.0;

struct ChannelSolve {
    x: Vec<f64>,
    trace: Vec<ObjectiveRow>,
}

fn solve_channel(
    rhs: &Sinogram,
    cfg: &SolverConfig,
    n: usize,
    extent: f64,
    step: f64,
) -> Result<ChannelSolve> {
    let spec = rhs.spec().clone();
    let rays = rhs.data().len();
    let cells = n * n;
    let tau = cfg.lambda * step;

    let mut x = vec![0.0; cells];
    let mut x_prev = vec![0.0; cells];
    let mut ax = vec![0.0; rays];
    let mut ax_prev = vec![0.0; rays];
    let mut z = vec![0.0; cells];
    let mut az = vec![0.0; rays];
    let mut dx = vec![0.0; cells];
    let mut dy = vec![0.0; cells];
    let mut lap = vec![0.0; cells];
    let mut img = Image::zeros(n, extent, 1)?;
    let mut resid_sino = Sinogram::zeros(&spec, 1)?;

    let objective = |x: &[f64], ax: &[f64]| -> (f64, f64, f64) {
        let data: f64 = ax
            .iter()
            .zip(rhs.data())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            * 0.5;
        let h1 = if cfg.mu != 0.0 { cfg.mu * h1_energy(x, n) } else { 0.0 };
        let l1 = if cfg.lambda != 0.0 {
            cfg.lambda * x.iter().map(|v| v.abs()).sum::<f64>()
        } else {
            0.0
        };
        (data, h1, l1)
    };

    let mut trace = Vec::new();
    let (data0, h0, l0) = objective(&x, &ax);
    let initial = data0 + h0 + l0;
    if cfg.record_objective {
        trace.push(ObjectiveRow {
            iteration: 0,
            objective: initial,
            data_term: data0,
            h1_term: h0,
            l1_term: l0,
        });
    }

    let mut t = 1.0f64;
    for iter in 1..=cfg.max_iters {
        // Gradient of the smooth part at the extrapolated point z.
        for ((r, a), b) in resid_sino.data_mut().iter_mut().zip(&az).zip(rhs.data()) {
            *r = a - b;
        }
        let grad_img = adjoint(&resid_sino, n, extent)?;
        let mut grad = grad_img.channel(0).to_vec();
        if cfg.mu != 0.0 {
            grad_normal(&z, n, &mut lap, &mut dx, &mut dy);
            for (g, l) in grad.iter_mut().zip(&lap) {
                *g += 2.0 * cfg.mu * l;
            }
        }

        std::mem::swap(&mut x, &mut x_prev);
        for i in 0..cells {
            x[i] = soft_threshold(z[i] - step * grad[i], tau);
        }
        std::mem::swap(&mut ax, &mut ax_prev);
        img.channel_mut(0).copy_from_slice(&x);
        let projected = forward(&img, &spec)?;
        ax.copy_from_slice(projected.data());

        let (data, h1, l1) = objective(&x, &ax);
        let obj = data + h1 + l1;
        if cfg.record_objective {
            trace.push(ObjectiveRow {
                iteration: iter,
                objective: obj,
                data_term: data,
                h1_term: h1,
                l1_term: l1,
            });
        }
        if obj > DIVERGENCE_FACTOR * initial + 1e-30 || !obj.is_finite() {
            return Err(Error::Numerical(format!(
                "objective rose to {obj:.6e} at iteration {iter} (initial {initial:.6e}); \
                 the step size is likely too large"
            )));
        }

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / t_next;
        for i in 0..cells {
            z[i] = x[i] + beta * (x[i] - x_prev[i]);
        }
        // A z follows linearly from A x and the previous A x, saving one
        // projection per iteration.
        for i in 0..rays {
            az[i] = ax[i] + beta * (ax[i] - ax_prev[i]);
        }
        t = t_next;
    }

    Ok(ChannelSolve { x, trace })
}

/// FISTA for the feature-map functional. The measured data `y` is first
/// convolved with the kernel's data filter; vector-valued kernels produce a
/// two-channel right-hand side whose channels are solved independently.
pub fn fista(
    y: &Sinogram,
    filt: &DataFilter,
    cfg: &SolverConfig,
    n: usize,
    extent: f64,
) -> Result<SolveResult> {
    cfg.validate()?;
    let rhs = preprocess_rhs(y, filt)?;
    let step = match cfg.step {
        StepRule::Fixed(s) => s,
        StepRule::AutoPowerIteration => {
            let lip = estimate_lipschitz(rhs.spec(), n, extent, cfg.mu, POWER_ITERS)?;
            1.0 / (STEP_INFLATION * lip)
        }
    };

    let mut channels = Vec::with_capacity(rhs.channels());
    let mut trace: Vec<ObjectiveRow> = Vec::new();
    for c in 0..rhs.channels() {
        let channel_rhs = rhs.extract_channel(c)?;
        let solved = solve_channel(&channel_rhs, cfg, n, extent, step)?;
        if trace.is_empty() {
            trace = solved.trace;
        } else {
            for (row, add) in trace.iter_mut().zip(&solved.trace) {
                row.objective += add.objective;
                row.data_term += add.data_term;
                row.h1_term += add.h1_term;
                row.l1_term += add.l1_term;
            }
        }
        channels.push(Image::from_data(n, extent, 1, solved.x)?);
    }
    let feature_map = if channels.len() == 1 {
        channels.pop().unwrap()
    } else {
        Image::from_channels(&channels)?
    };
    Ok(SolveResult {
        feature_map,
        objective_trace: trace,
        iterations: cfg.max_iters,
        step,
    })
}

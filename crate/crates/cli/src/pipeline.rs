//! The batch stages driven by the command line: phantom rasterization, data
//! simulation, FBP and variational reconstruction, edge extraction, and the
//! combined pipeline. Every stage reads one config and writes fixed file
//! names under the output directory.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use tomofeat::io::{self, PayloadFormat, PgmDepth};
use tomofeat::{
    canny, fbp_feature, fista, gaussian_smooth, zero_crossings, DataFilter, Disc, DiscPhantom,
    EdgeMap, Error, FbpFilter, FbpKind, FeatureKernel, FilterUnits, Image, Result, SamplingSpec,
    Sinogram, SolverConfig, StepRule, SubsetScheme,
};

use crate::config::{Config, Section};

/// Where outputs go and which seed overrides the config.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub out_dir: PathBuf,
    pub seed_override: Option<u64>,
}

impl RunContext {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunContext {
            out_dir: out_dir.into(),
            seed_override: None,
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        let p = Path::new(name);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.out_dir.join(p)
        }
    }

    fn ensure_out_dir(&self) -> Result<()> {
        std::fs::create_dir_all(&self.out_dir)?;
        Ok(())
    }
}

pub fn build_phantom(cfg: &Config) -> Result<DiscPhantom> {
    let section = cfg.require_section("phantom")?;
    let grid_size: usize = section.parse_or("grid_size", 200)?;
    let extent: f64 = section.parse_or("extent", 1.0)?;
    match section.require_str("kind")? {
        "three-disc" => DiscPhantom::three_disc(grid_size, extent),
        "modified" => {
            let weak: f64 = section.parse_or("weak_amplitude", 0.4)?;
            DiscPhantom::modified(grid_size, extent, weak)
        }
        "empty" => DiscPhantom::new(Vec::new(), grid_size, extent),
        "custom" => {
            let mut discs = Vec::new();
            for row in section.get_all("disc") {
                let parts: Vec<&str> = row.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(Error::Parse(format!(
                        "disc row '{row}' must be cx,cy,radius,amplitude"
                    )));
                }
                let nums: Vec<f64> = parts
                    .iter()
                    .map(|p| {
                        p.parse()
                            .map_err(|_| Error::Parse(format!("bad disc number '{p}'")))
                    })
                    .collect::<Result<_>>()?;
                discs.push(Disc {
                    center: [nums[0], nums[1]],
                    radius: nums[2],
                    amplitude: nums[3],
                });
            }
            DiscPhantom::new(discs, grid_size, extent)
        }
        other => Err(Error::Parse(format!("unknown phantom kind '{other}'"))),
    }
}

pub fn build_spec(cfg: &Config) -> Result<SamplingSpec> {
    let section = cfg.require_section("sampling")?;
    let n_radial: usize = section.require("n_radial")?;
    let halfwidth: f64 = section.parse_or("radial_halfwidth", 1.0)?;
    let bandwidth = match section.get("bandwidth") {
        None | Some("auto") => PI * n_radial as f64,
        Some(raw) => raw
            .parse()
            .map_err(|_| Error::Parse(format!("bad bandwidth '{raw}'")))?,
    };
    let n_angles_full = bandwidth.ceil() as usize;
    let full = SamplingSpec::full(bandwidth, n_angles_full, n_radial, halfwidth)?;
    match section.parse::<usize>("n_angles")? {
        None => Ok(full),
        Some(m) if m == n_angles_full => Ok(full),
        Some(m) => {
            let scheme = match section.get("scheme").unwrap_or("uniform-sparse") {
                "uniform-sparse" => SubsetScheme::UniformSparse,
                "limited-view" => SubsetScheme::LimitedView {
                    min: section.require("view_min")?,
                    max: section.require("view_max")?,
                },
                other => return Err(Error::Parse(format!("unknown scheme '{other}'"))),
            };
            full.subset(m, scheme)
        }
    }
}

fn filter_units(section: &Section) -> Result<FilterUnits> {
    match section.get("units").unwrap_or("samples") {
        "samples" => Ok(FilterUnits::GridSamples),
        "physical" => Ok(FilterUnits::Physical),
        other => Err(Error::Parse(format!("unknown filter units '{other}'"))),
    }
}

/// Builds the data filter described by `[filter]` on the spec's grid.
pub fn build_data_filter(cfg: &Config, spec: &SamplingSpec) -> Result<(DataFilter, usize)> {
    let section = cfg.require_section("filter")?;
    let units = filter_units(section)?;
    let default_band = match units {
        // The sample grid's Nyquist band; the physical grid's Shannon match.
        FilterUnits::GridSamples => PI,
        FilterUnits::Physical => PI / spec.pitch(),
    };
    let bandwidth = match section.get("bandwidth") {
        None | Some("auto") => default_band,
        Some(raw) => raw
            .parse()
            .map_err(|_| Error::Parse(format!("bad filter bandwidth '{raw}'")))?,
    };
    let kernel = match section.require_str("kind")? {
        "log" => FeatureKernel::LaplacianOfGaussian {
            alpha: section.parse_or("alpha", 1.3)?,
        },
        "grad" => FeatureKernel::GaussianGradient {
            alpha: section.parse_or("alpha", 1.3)?,
        },
        "gaussian" => FeatureKernel::Gaussian {
            alpha: section.parse_or("alpha", 1.3)?,
        },
        "lowpass" => FeatureKernel::LowpassLaplacian { bandwidth },
        "ramlak" => FeatureKernel::RamLakLaplacian { bandwidth },
        other => return Err(Error::Parse(format!("unknown filter kind '{other}'"))),
    };
    let filt = tomofeat::sample_filter_with_units(&kernel, spec, units)?;
    Ok((filt, kernel.channels()))
}

fn write_image_products(ctx: &RunContext, stem: &str, img: &Image) -> Result<()> {
    io::write_image(&ctx.path(&format!("{stem}.f64")), img)?;
    if img.channels() == 1 {
        io::write_pgm(&ctx.path(&format!("{stem}.pgm")), img, 0, PgmDepth::Sixteen)?;
    } else {
        for c in 0..img.channels() {
            io::write_pgm(
                &ctx.path(&format!("{stem}_ch{c}.pgm")),
                img,
                c,
                PgmDepth::Sixteen,
            )?;
        }
    }
    Ok(())
}

pub fn run_phantom(cfg: &Config, ctx: &RunContext) -> Result<()> {
    ctx.ensure_out_dir()?;
    let phantom = build_phantom(cfg)?;
    let raster = phantom.rasterize();
    write_image_products(ctx, "phantom", &raster)?;
    log::info!(
        "phantom: {} discs on a {}x{} grid",
        phantom.discs().len(),
        raster.size(),
        raster.size()
    );
    Ok(())
}

/// Simulates measured data. Disc phantoms are projected with the exact
/// chord formula; an external image (`input_image` in `[simulate]`) goes
/// through the discrete projector. Noise requires a seed.
pub fn run_simulate(cfg: &Config, ctx: &RunContext) -> Result<PathBuf> {
    ctx.ensure_out_dir()?;
    let spec = build_spec(cfg)?;
    let section = cfg.require_section("simulate")?;
    let mut sino: Sinogram = match section.get("input_image") {
        Some(path) if !path.is_empty() => {
            let img = io::read_image(&ctx.path(path))?;
            tomofeat::forward(&img, &spec)?
        }
        _ => {
            let phantom = build_phantom(cfg)?;
            phantom.analytic_radon(&spec)
        }
    };
    let eta: f64 = section.parse_or("eta", 0.0)?;
    if eta > 0.0 {
        let seed = match ctx.seed_override {
            Some(seed) => seed,
            None => section
                .parse::<u64>("seed")?
                .ok_or_else(|| Error::Parse("noisy simulation requires a seed".into()))?,
        };
        sino.add_noise(eta, seed)?;
    }
    let format = match section.get("format").unwrap_or("binary") {
        "binary" => PayloadFormat::Binary,
        "csv" => PayloadFormat::Csv,
        other => return Err(Error::Parse(format!("unknown sinogram format '{other}'"))),
    };
    let path = ctx.path("sinogram.sino");
    io::write_sinogram(&path, &sino, format)?;
    log::info!(
        "simulate: {} angles x {} offsets -> {}",
        sino.n_angles(),
        sino.n_offsets(),
        path.display()
    );
    Ok(path)
}

fn grid_for_output(cfg: &Config) -> Result<(usize, f64)> {
    let section = cfg.require_section("phantom")?;
    Ok((
        section.parse_or("grid_size", 200)?,
        section.parse_or("extent", 1.0)?,
    ))
}

/// Feature maps by filtered backprojection. The `alpha` key is measured in
/// offset samples unless `alpha_units = physical`.
pub fn run_fbp_feature(cfg: &Config, ctx: &RunContext, input: Option<&Path>) -> Result<PathBuf> {
    ctx.ensure_out_dir()?;
    let section = cfg.require_section("fbp")?;
    let sino = match input {
        Some(path) => io::read_sinogram(path)?,
        None => io::read_sinogram(&ctx.path(section.require_str("input")?))?,
    };
    let alpha_raw: f64 = section.parse_or("alpha", 1.3)?;
    let alpha = match section.get("alpha_units").unwrap_or("samples") {
        "samples" => alpha_raw * sino.spec().pitch(),
        "physical" => alpha_raw,
        other => return Err(Error::Parse(format!("unknown alpha units '{other}'"))),
    };
    let kind = match section.require_str("kind")? {
        "log" => FbpKind::Log,
        "grad" => FbpKind::Grad,
        "reconstruct" => FbpKind::Reconstruction,
        other => return Err(Error::Parse(format!("unknown fbp kind '{other}'"))),
    };
    let (n, extent) = grid_for_output(cfg)?;
    let filt = FbpFilter::new(kind, alpha)?;
    let map = fbp_feature(&sino, &filt, n, extent)?;
    let stem = section.get("output").unwrap_or("fbp").to_string();
    write_image_products(ctx, &stem, &map)?;
    Ok(ctx.path(&format!("{stem}.f64")))
}

/// Variational reconstruction of the feature map, with the objective trace
/// and the data filter exported alongside.
pub fn run_reconstruct(cfg: &Config, ctx: &RunContext, input: Option<&Path>) -> Result<PathBuf> {
    ctx.ensure_out_dir()?;
    let section = cfg.require_section("solver")?;
    let sino = match input {
        Some(path) => io::read_sinogram(path)?,
        None => io::read_sinogram(&ctx.path(section.require_str("input")?))?,
    };
    let (filt, _channels) = build_data_filter(cfg, sino.spec())?;
    let step = match section.get("step").unwrap_or("auto") {
        "auto" => StepRule::AutoPowerIteration,
        raw => StepRule::Fixed(
            raw.parse()
                .map_err(|_| Error::Parse(format!("bad step '{raw}'")))?,
        ),
    };
    let solver = SolverConfig {
        lambda: section.parse_or("lambda", 0.0)?,
        mu: section.parse_or("mu", 0.0)?,
        max_iters: section.parse_or("iterations", 500)?,
        step,
        record_objective: section.parse_or("record_objective", true)?,
    };
    let (n, extent) = grid_for_output(cfg)?;
    let result = fista(&sino, &filt, &solver, n, extent)?;
    let stem = section.get("output").unwrap_or("feature").to_string();
    write_image_products(ctx, &stem, &result.feature_map)?;
    if solver.record_objective {
        io::write_objective_csv(&ctx.path("objective.csv"), &result.objective_trace)?;
    }
    io::write_filter_csv(&ctx.path("filter.csv"), &filt, 0)?;
    log::info!(
        "reconstruct: {} iterations, step {:.4e}, final objective {:.6e}",
        result.iterations,
        result.step,
        result
            .objective_trace
            .last()
            .map(|row| row.objective)
            .unwrap_or(f64::NAN)
    );
    Ok(ctx.path(&format!("{stem}.f64")))
}

/// Binary edge extraction from a feature map file.
pub fn run_edges(cfg: &Config, ctx: &RunContext, input: Option<&Path>) -> Result<PathBuf> {
    ctx.ensure_out_dir()?;
    let section = cfg.require_section("edges")?;
    let map = match input {
        Some(path) => io::read_image(path)?,
        None => io::read_image(&ctx.path(section.require_str("input")?))?,
    };
    let edges: EdgeMap = match section.require_str("detector")? {
        "zero-crossing" => {
            let smooth_px: f64 = section.parse_or("smooth", 0.0)?;
            let threshold: f64 = section.parse_or("threshold", 0.005)?;
            let prepared = gaussian_smooth(&map, smooth_px)?;
            zero_crossings(&prepared, threshold)?
        }
        "canny" => {
            let low: f64 = section.parse_or("low", 0.1)?;
            let high: f64 = section.parse_or("high", 0.15)?;
            canny(&map, low, high)?
        }
        other => return Err(Error::Parse(format!("unknown detector '{other}'"))),
    };
    let stem = section.get("output").unwrap_or("edges").to_string();
    io::write_edge_pbm(&ctx.path(&format!("{stem}.pbm")), &edges)?;
    io::write_edge_csv(&ctx.path(&format!("{stem}.csv")), &edges)?;
    log::info!("edges: {} pixels marked", edges.count());
    Ok(ctx.path(&format!("{stem}.pbm")))
}

/// simulate -> reconstruct -> edges, emitting all intermediates. With
/// `include_fbp = true` under `[pipeline]`, the FBP baseline map is written
/// too.
pub fn run_pipeline(cfg: &Config, ctx: &RunContext) -> Result<()> {
    ctx.ensure_out_dir()?;
    run_phantom(cfg, ctx)?;
    let sino_path = run_simulate(cfg, ctx)?;
    let feature = run_reconstruct(cfg, ctx, Some(&sino_path))?;
    if let Some(section) = cfg.section("pipeline") {
        if section.parse_or("include_fbp", false)? {
            run_fbp_feature(cfg, ctx, Some(&sino_path))?;
        }
    }
    if cfg.section("edges").is_some() {
        run_edges(cfg, ctx, Some(&feature))?;
    }
    Ok(())
}

/// Rewraps an external comma-separated sinogram matrix (one line per angle,
/// channels stacked) into the native sinogram format described by
/// `[sampling]`.
pub fn run_convert(cfg: &Config, ctx: &RunContext) -> Result<PathBuf> {
    ctx.ensure_out_dir()?;
    let section = cfg.require_section("convert")?;
    let spec = build_spec(cfg)?;
    let channels: usize = section.parse_or("channels", 1)?;
    let input = ctx.path(section.require_str("input")?);
    let text = std::fs::read_to_string(&input)?;
    let mut data = Vec::new();
    let mut rows = 0usize;
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        rows += 1;
        for tok in line.split(',') {
            let v: f64 = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad sinogram value '{tok}'")))?;
            data.push(v);
        }
    }
    let expected_rows = channels * spec.n_angles();
    if rows != expected_rows {
        return Err(Error::Parse(format!(
            "expected {expected_rows} rows ({} angles x {channels} channel(s)), got {rows}",
            spec.n_angles()
        )));
    }
    let sino = Sinogram::from_data(&spec, channels, data)?;
    let stem = section.get("output").unwrap_or("converted").to_string();
    let path = ctx.path(&format!("{stem}.sino"));
    io::write_sinogram(&path, &sino, PayloadFormat::Binary)?;
    Ok(path)
}

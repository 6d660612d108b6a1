//! File formats: sinogram files (text header + binary or CSV payload),
//! raw float images, PGM/PBM exports and CSV tables.
//!
//! Binary payloads are little-endian f64 and round-trip bit-exactly; text
//! payloads use the shortest round-trip float representation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::edges::{EdgeMap, EdgeProvenance};
use crate::error::{Error, Result};
use crate::filters::DataFilter;
use crate::image::Image;
use crate::sampling::SamplingSpec;
use crate::sinogram::Sinogram;
use crate::varsolve::ObjectiveRow;

const SINO_MAGIC: &str = "tomofeat-sinogram v1";
const IMAGE_MAGIC: &str = "tomofeat-image v1";
const END_HEADER: &str = "end-header";

/// Payload encoding of a sinogram file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadFormat {
    Binary,
    Csv,
}

/// Bit depth of PGM exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmDepth {
    Eight,
    Sixteen,
}

/// Serializes a sampling spec as `key=value` lines (no terminator).
pub fn spec_to_header(spec: &SamplingSpec) -> String {
    let subset: Vec<String> = spec.angle_subset().iter().map(|i| i.to_string()).collect();
    format!(
        "bandwidth={}\nn_angles_full={}\nn_radial={}\nradial_halfwidth={}\nangle_subset={}",
        spec.bandwidth(),
        spec.n_angles_full(),
        spec.n_radial(),
        spec.radial_halfwidth(),
        subset.join(",")
    )
}

fn parse_kv(lines: &[&str]) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    for line in lines {
        if let Some((k, v)) = line.split_once('=') {
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    map
}

fn want<'m>(map: &'m BTreeMap<String, String>, key: &str) -> Result<&'m str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Parse(format!("missing header key '{key}'")))
}

fn parse_num<T: std::str::FromStr>(value: &str, key: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad value '{value}' for '{key}'")))
}

/// Parses a spec from `key=value` lines produced by [`spec_to_header`].
pub fn spec_from_header(text: &str) -> Result<SamplingSpec> {
    let lines: Vec<&str> = text.lines().collect();
    let map = parse_kv(&lines);
    spec_from_kv(&map)
}

fn spec_from_kv(map: &BTreeMap<String, String>) -> Result<SamplingSpec> {
    let bandwidth: f64 = parse_num(want(map, "bandwidth")?, "bandwidth")?;
    let n_angles_full: usize = parse_num(want(map, "n_angles_full")?, "n_angles_full")?;
    let n_radial: usize = parse_num(want(map, "n_radial")?, "n_radial")?;
    let halfwidth: f64 = parse_num(want(map, "radial_halfwidth")?, "radial_halfwidth")?;
    let subset: Vec<usize> = want(map, "angle_subset")?
        .split(',')
        .map(|tok| parse_num(tok.trim(), "angle_subset"))
        .collect::<Result<_>>()?;
    SamplingSpec::new(bandwidth, n_angles_full, n_radial, halfwidth, subset)
}

pub fn write_sinogram(path: &Path, sino: &Sinogram, format: PayloadFormat) -> Result<()> {
    let mut header = String::new();
    let _ = writeln!(header, "{SINO_MAGIC}");
    let _ = writeln!(
        header,
        "format={}",
        match format {
            PayloadFormat::Binary => "binary",
            PayloadFormat::Csv => "csv",
        }
    );
    let _ = writeln!(header, "channels={}", sino.channels());
    let _ = writeln!(header, "{}", spec_to_header(sino.spec()));
    let _ = writeln!(header, "{END_HEADER}");
    let mut bytes = header.into_bytes();
    match format {
        PayloadFormat::Binary => {
            bytes.reserve(sino.data().len() * 8);
            for v in sino.data() {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        }
        PayloadFormat::Csv => {
            let mut text = String::new();
            for c in 0..sino.channels() {
                for a in 0..sino.n_angles() {
                    let row: Vec<String> =
                        sino.row(c, a).iter().map(|v| format!("{v}")).collect();
                    let _ = writeln!(text, "{}", row.join(","));
                }
            }
            bytes.extend_from_slice(text.as_bytes());
        }
    }
    fs::write(path, bytes)?;
    Ok(())
}

pub fn read_sinogram(path: &Path) -> Result<Sinogram> {
    let bytes = fs::read(path)?;
    let mut offset = 0usize;
    let mut lines: Vec<String> = Vec::new();
    while offset < bytes.len() {
        let end = bytes[offset..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|p| offset + p)
            .ok_or_else(|| Error::Parse("unterminated sinogram header".into()))?;
        let line = std::str::from_utf8(&bytes[offset..end])
            .map_err(|_| Error::Parse("non-utf8 sinogram header".into()))?
            .to_string();
        offset = end + 1;
        if line == END_HEADER {
            break;
        }
        lines.push(line);
    }
    if lines.first().map(String::as_str) != Some(SINO_MAGIC) {
        return Err(Error::Parse(format!("not a sinogram file: {}", path.display())));
    }
    let refs: Vec<&str> = lines.iter().skip(1).map(String::as_str).collect();
    let map = parse_kv(&refs);
    let spec = spec_from_kv(&map)?;
    let channels: usize = parse_num(want(&map, "channels")?, "channels")?;
    let count = channels * spec.n_angles() * spec.n_offsets();
    let payload = &bytes[offset..];
    let data = match want(&map, "format")? {
        "binary" => {
            if payload.len() != count * 8 {
                return Err(Error::Parse(format!(
                    "binary payload holds {} bytes, expected {}",
                    payload.len(),
                    count * 8
                )));
            }
            payload
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect()
        }
        "csv" => {
            let text = std::str::from_utf8(payload)
                .map_err(|_| Error::Parse("non-utf8 csv payload".into()))?;
            let mut data = Vec::with_capacity(count);
            for line in text.lines() {
                for tok in line.split(',') {
                    data.push(parse_num::<f64>(tok.trim(), "payload")?);
                }
            }
            data
        }
        other => return Err(Error::Parse(format!("unknown payload format '{other}'"))),
    };
    Sinogram::from_data(&spec, channels, data)
}

/// Lossless raw image file (`.f64`): text header plus little-endian f64.
pub fn write_image(path: &Path, img: &Image) -> Result<()> {
    let mut header = String::new();
    let _ = writeln!(header, "{IMAGE_MAGIC}");
    let _ = writeln!(header, "size={}", img.size());
    let _ = writeln!(header, "extent={}", img.extent());
    let _ = writeln!(header, "channels={}", img.channels());
    let _ = writeln!(header, "{END_HEADER}");
    let mut bytes = header.into_bytes();
    bytes.reserve(img.data().len() * 8);
    for v in img.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

pub fn read_image(path: &Path) -> Result<Image> {
    let bytes = fs::read(path)?;
    let mut offset = 0usize;
    let mut lines: Vec<String> = Vec::new();
    while offset < bytes.len() {
        let end = bytes[offset..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|p| offset + p)
            .ok_or_else(|| Error::Parse("unterminated image header".into()))?;
        let line = std::str::from_utf8(&bytes[offset..end])
            .map_err(|_| Error::Parse("non-utf8 image header".into()))?
            .to_string();
        offset = end + 1;
        if line == END_HEADER {
            break;
        }
        lines.push(line);
    }
    if lines.first().map(String::as_str) != Some(IMAGE_MAGIC) {
        return Err(Error::Parse(format!("not an image file: {}", path.display())));
    }
    let refs: Vec<&str> = lines.iter().skip(1).map(String::as_str).collect();
    let map = parse_kv(&refs);
    let size: usize = parse_num(want(&map, "size")?, "size")?;
    let extent: f64 = parse_num(want(&map, "extent")?, "extent")?;
    let channels: usize = parse_num(want(&map, "channels")?, "channels")?;
    let payload = &bytes[offset..];
    let count = channels * size * size;
    if payload.len() != count * 8 {
        return Err(Error::Parse(format!(
            "image payload holds {} bytes, expected {}",
            payload.len(),
            count * 8
        )));
    }
    let data: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Image::from_data(size, extent, channels, data)
}

/// Min-max scaled PGM of one channel; the scale is recorded in a comment so
/// the quantized values can be mapped back. Rows are flipped so +y is up.
pub fn write_pgm(path: &Path, img: &Image, channel: usize, depth: PgmDepth) -> Result<()> {
    if channel >= img.channels() {
        return Err(Error::shape("channel out of range"));
    }
    let values = img.channel(channel);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let maxval: u32 = match depth {
        PgmDepth::Eight => 255,
        PgmDepth::Sixteen => 65535,
    };
    let n = img.size();
    let mut bytes = format!(
        "P5\n# tomofeat min={lo} max={hi} extent={} channel={channel}\n{n} {n}\n{maxval}\n",
        img.extent()
    )
    .into_bytes();
    let span = hi - lo;
    for row in (0..n).rev() {
        for col in 0..n {
            let v = values[row * n + col];
            let q = if span > 0.0 {
                ((v - lo) / span * maxval as f64).round() as u32
            } else {
                0
            };
            match depth {
                PgmDepth::Eight => bytes.push(q as u8),
                PgmDepth::Sixteen => bytes.extend_from_slice(&(q as u16).to_be_bytes()),
            }
        }
    }
    fs::write(path, bytes)?;
    Ok(())
}

/// Reads a PGM written by [`write_pgm`], mapping quantized levels back
/// through the recorded scale.
pub fn read_pgm(path: &Path) -> Result<Image> {
    let bytes = fs::read(path)?;
    let text_end = bytes.len().min(512);
    let head = String::from_utf8_lossy(&bytes[..text_end]);
    let mut lines = head.split('\n');
    let magic = lines.next().unwrap_or_default();
    if magic != "P5" {
        return Err(Error::Parse("not a binary PGM".into()));
    }
    let comment = lines
        .next()
        .ok_or_else(|| Error::Parse("missing PGM comment".into()))?;
    let meta: BTreeMap<String, String> = comment
        .trim_start_matches('#')
        .split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let lo: f64 = parse_num(want(&meta, "min")?, "min")?;
    let hi: f64 = parse_num(want(&meta, "max")?, "max")?;
    let extent: f64 = parse_num(want(&meta, "extent")?, "extent")?;
    let dims = lines
        .next()
        .ok_or_else(|| Error::Parse("missing PGM dimensions".into()))?;
    let mut it = dims.split_whitespace();
    let n: usize = parse_num(it.next().unwrap_or(""), "width")?;
    let rows: usize = parse_num(it.next().unwrap_or(""), "height")?;
    if rows != n {
        return Err(Error::Parse("PGM must be square".into()));
    }
    let maxval: u32 = parse_num(
        lines
            .next()
            .ok_or_else(|| Error::Parse("missing PGM maxval".into()))?
            .trim(),
        "maxval",
    )?;
    // Payload starts after the fourth newline.
    let mut newline_count = 0;
    let mut payload_start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'\n' {
            newline_count += 1;
            if newline_count == 4 {
                payload_start = i + 1;
                break;
            }
        }
    }
    let payload = &bytes[payload_start..];
    let span = hi - lo;
    let mut data = vec![0.0; n * n];
    let expect = if maxval > 255 { 2 * n * n } else { n * n };
    if payload.len() != expect {
        return Err(Error::Parse(format!(
            "PGM payload holds {} bytes, expected {expect}",
            payload.len()
        )));
    }
    for out_row in 0..n {
        let file_row = n - 1 - out_row;
        for col in 0..n {
            let q = if maxval > 255 {
                let i = (file_row * n + col) * 2;
                u16::from_be_bytes([payload[i], payload[i + 1]]) as u32
            } else {
                payload[file_row * n + col] as u32
            };
            // Extreme levels map back to the recorded bounds exactly so a
            // rewrite reproduces the same file.
            data[out_row * n + col] = if span <= 0.0 || q == 0 {
                lo
            } else if q == maxval {
                hi
            } else {
                lo + q as f64 / maxval as f64 * span
            };
        }
    }
    Image::from_data(n, extent, 1, data)
}

fn provenance_comment(p: EdgeProvenance) -> String {
    match p {
        EdgeProvenance::LogZeroCrossing { threshold } => {
            format!("detector=zero-crossing threshold={threshold}")
        }
        EdgeProvenance::Canny { low, high } => format!("detector=canny low={low} high={high}"),
    }
}

fn provenance_from_meta(meta: &BTreeMap<String, String>) -> Result<EdgeProvenance> {
    match want(meta, "detector")? {
        "zero-crossing" => Ok(EdgeProvenance::LogZeroCrossing {
            threshold: parse_num(want(meta, "threshold")?, "threshold")?,
        }),
        "canny" => Ok(EdgeProvenance::Canny {
            low: parse_num(want(meta, "low")?, "low")?,
            high: parse_num(want(meta, "high")?, "high")?,
        }),
        other => Err(Error::Parse(format!("unknown detector '{other}'"))),
    }
}

/// ASCII PBM edge mask with the detector parameters in a comment.
pub fn write_edge_pbm(path: &Path, edges: &EdgeMap) -> Result<()> {
    let n = edges.size();
    let mut text = format!(
        "P1\n# tomofeat {} extent={}\n{n} {n}\n",
        provenance_comment(edges.provenance()),
        edges.extent()
    );
    for row in (0..n).rev() {
        let line: Vec<&str> = (0..n)
            .map(|col| if edges.get(row, col) { "1" } else { "0" })
            .collect();
        let _ = writeln!(text, "{}", line.join(" "));
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn read_edge_pbm(path: &Path) -> Result<EdgeMap> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some("P1") {
        return Err(Error::Parse("not an ascii PBM".into()));
    }
    let comment = lines
        .next()
        .ok_or_else(|| Error::Parse("missing PBM comment".into()))?;
    let meta: BTreeMap<String, String> = comment
        .trim_start_matches('#')
        .split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let provenance = provenance_from_meta(&meta)?;
    let extent: f64 = parse_num(want(&meta, "extent")?, "extent")?;
    let dims = lines
        .next()
        .ok_or_else(|| Error::Parse("missing PBM dimensions".into()))?;
    let mut it = dims.split_whitespace();
    let n: usize = parse_num(it.next().unwrap_or(""), "width")?;
    let mut mask = vec![false; n * n];
    let mut file_row = 0usize;
    for line in lines {
        for (col, tok) in line.split_whitespace().enumerate() {
            if col >= n || file_row >= n {
                return Err(Error::Parse("PBM payload too large".into()));
            }
            mask[(n - 1 - file_row) * n + col] = tok == "1";
        }
        file_row += 1;
    }
    if file_row != n {
        return Err(Error::Parse("PBM payload too short".into()));
    }
    EdgeMap::from_mask(n, extent, mask, provenance)
}

/// Marked pixels as `row,col` lines.
pub fn write_edge_csv(path: &Path, edges: &EdgeMap) -> Result<()> {
    let mut text = String::from("row,col\n");
    for (row, col) in edges.coordinates() {
        let _ = writeln!(text, "{row},{col}");
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn read_edge_csv(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines().skip(1) {
        let (r, c) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad edge csv line '{line}'")))?;
        out.push((parse_num(r, "row")?, parse_num(c, "col")?));
    }
    Ok(out)
}

/// Tabulated filter coefficients of one row: `s, value[, value2]` lines.
pub fn write_filter_csv(path: &Path, filt: &DataFilter, row: usize) -> Result<()> {
    if row >= filt.rows() {
        return Err(Error::shape("filter row out of range"));
    }
    let mut text = String::from(if filt.channels() == 2 {
        "s,value,value2\n"
    } else {
        "s,value\n"
    });
    let radius = filt.radius() as i64;
    for k in -radius..=radius {
        let s = k as f64 * filt.pitch();
        let _ = write!(text, "{s}");
        for c in 0..filt.channels() {
            let _ = write!(text, ",{}", filt.coeff(row, c, k));
        }
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn read_filter_csv(path: &Path) -> Result<Vec<(f64, Vec<f64>)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines().skip(1) {
        let mut toks = line.split(',');
        let s: f64 = parse_num(toks.next().unwrap_or(""), "s")?;
        let values: Vec<f64> = toks.map(|t| parse_num(t, "value")).collect::<Result<_>>()?;
        out.push((s, values));
    }
    Ok(out)
}

/// Objective trace rows: `iteration,objective,data_term,h1_term,l1_term`.
pub fn write_objective_csv(path: &Path, trace: &[ObjectiveRow]) -> Result<()> {
    let mut text = String::from("iteration,objective,data_term,h1_term,l1_term\n");
    for row in trace {
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            row.iteration, row.objective, row.data_term, row.h1_term, row.l1_term
        );
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn read_objective_csv(path: &Path) -> Result<Vec<ObjectiveRow>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines().skip(1) {
        let toks: Vec<&str> = line.split(',').collect();
        if toks.len() != 5 {
            return Err(Error::Parse(format!("bad objective row '{line}'")));
        }
        out.push(ObjectiveRow {
            iteration: parse_num(toks[0], "iteration")?,
            objective: parse_num(toks[1], "objective")?,
            data_term: parse_num(toks[2], "data_term")?,
            h1_term: parse_num(toks[3], "h1_term")?,
            l1_term: parse_num(toks[4], "l1_term")?,
        });
    }
    Ok(out)
}

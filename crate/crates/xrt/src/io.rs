//! Plain-text array formats (CSV with a single `#` header line) and JSON
//! report emission. Floating-point values are written in shortest
//! round-trip form, so write -> read reproduces values bit-identically.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bukhgeim::BoundaryModeSequence;
use crate::error::{Error, Result};
use crate::forward::{GridKind, TorusGrid};
use crate::gghl::MomentTable;
use crate::lattice::FourierLattice;
use crate::reconstruct::DensityGrid;

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Split `key=value` fields out of a header line `# tag a=1 b=2 ...`,
/// checking the tag.
fn parse_header<'a>(line: &'a str, tag: &str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let mut parts = line.trim().split_whitespace();
    if parts.next() != Some("#") || parts.next() != Some(tag) {
        return Err(fmt_err(format!("expected '# {tag} ...' header")));
    }
    let fields: Vec<&str> = parts.collect();
    keys.iter()
        .map(|key| {
            fields
                .iter()
                .find_map(|f| f.strip_prefix(&format!("{key}=")))
                .ok_or_else(|| fmt_err(format!("missing {key}= in {tag} header")))
        })
        .collect()
}

fn field<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| fmt_err(format!("bad {what}: {s:?}")))
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .skip(1)
        .map(str::trim)
        .filter(|l| !l.is_empty())
}

fn columns<const N: usize>(line: &str) -> Result<[&str; N]> {
    let cols: Vec<&str> = line.split(',').map(str::trim).collect();
    cols.try_into()
        .map_err(|_| fmt_err(format!("expected {N} columns: {line:?}")))
}

pub fn grid_to_string(g: &TorusGrid) -> String {
    let mut out = format!(
        "# torusgrid nbeta={} ntheta={} kind={}\n",
        g.n_beta(),
        g.n_theta(),
        g.kind()
    );
    for j in 0..g.n_beta() {
        for l in 0..g.n_theta() {
            writeln!(out, "{j},{l},{}", g.value(j, l)).unwrap();
        }
    }
    out
}

pub fn grid_from_string(text: &str) -> Result<TorusGrid> {
    let head = text.lines().next().ok_or_else(|| fmt_err("empty file"))?;
    let f = parse_header(head, "torusgrid", &["nbeta", "ntheta", "kind"])?;
    let n_beta: usize = field(f[0], "nbeta")?;
    let n_theta: usize = field(f[1], "ntheta")?;
    let kind: GridKind = f[2].parse()?;
    let mut values = vec![f64::NAN; n_beta * n_theta];
    for line in data_lines(text) {
        let [j, l, v] = columns(line)?;
        let j: usize = field(j, "j")?;
        let l: usize = field(l, "l")?;
        if j >= n_beta || l >= n_theta {
            return Err(fmt_err(format!("cell ({j},{l}) out of range")));
        }
        values[j * n_theta + l] = field(v, "value")?;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(fmt_err("incomplete grid: missing cells"));
    }
    TorusGrid::from_values(n_beta, n_theta, kind, values)
}

pub fn lattice_to_string(lat: &FourierLattice) -> String {
    let mut out = format!("# lattice nmax={} kmax={}\n", lat.n_max(), lat.k_max());
    for (n, k, c) in lat.iter() {
        writeln!(out, "{n},{k},{},{}", c.re, c.im).unwrap();
    }
    out
}

pub fn lattice_from_string(text: &str) -> Result<FourierLattice> {
    let head = text.lines().next().ok_or_else(|| fmt_err("empty file"))?;
    let f = parse_header(head, "lattice", &["nmax", "kmax"])?;
    let mut lat = FourierLattice::zeros(field(f[0], "nmax")?, field(f[1], "kmax")?);
    for line in data_lines(text) {
        let [n, k, re, im] = columns(line)?;
        let n: i64 = field(n, "n")?;
        let k: i64 = field(k, "k")?;
        if !lat.in_band(n, k) {
            return Err(fmt_err(format!("entry ({n},{k}) out of band")));
        }
        lat.set(n, k, Complex64::new(field(re, "re")?, field(im, "im")?));
    }
    Ok(lat)
}

pub fn modeseq_to_string(s: &BoundaryModeSequence) -> String {
    let mut out = format!("# modeseq J={} kmax={}\n", s.num_rows(), s.k_max());
    for j in 0..s.num_rows() {
        for k in -s.k_max()..=s.k_max() {
            let c = s.coeff(j, k);
            writeln!(out, "{j},{k},{},{}", c.re, c.im).unwrap();
        }
    }
    out
}

pub fn modeseq_from_string(text: &str) -> Result<BoundaryModeSequence> {
    let head = text.lines().next().ok_or_else(|| fmt_err("empty file"))?;
    let f = parse_header(head, "modeseq", &["J", "kmax"])?;
    let rows: usize = field(f[0], "J")?;
    let mut s = BoundaryModeSequence::new(field(f[1], "kmax")?, rows.max(1));
    for line in data_lines(text) {
        let [j, k, re, im] = columns(line)?;
        let j: usize = field(j, "j")?;
        let k: i64 = field(k, "k")?;
        if j >= s.num_rows() || k.abs() > s.k_max() {
            return Err(fmt_err(format!("entry ({j},{k}) out of range")));
        }
        s.set_coeff(j, k, Complex64::new(field(re, "re")?, field(im, "im")?));
    }
    Ok(s)
}

pub fn density_to_string(d: &DensityGrid) -> String {
    let mut out = format!("# density n={} rho={}\n", d.grid_n, d.rho);
    for iy in 0..d.grid_n {
        for ix in 0..d.grid_n {
            writeln!(out, "{ix},{iy},{}", d.value(ix, iy)).unwrap();
        }
    }
    out
}

pub fn density_from_string(text: &str) -> Result<DensityGrid> {
    let head = text.lines().next().ok_or_else(|| fmt_err("empty file"))?;
    let f = parse_header(head, "density", &["n", "rho"])?;
    let grid_n: usize = field(f[0], "n")?;
    let rho: f64 = field(f[1], "rho")?;
    if grid_n < 2 || !(rho > 0.0) {
        return Err(fmt_err("bad density header"));
    }
    let mut values = vec![f64::NAN; grid_n * grid_n];
    for line in data_lines(text) {
        let [ix, iy, v] = columns(line)?;
        let ix: usize = field(ix, "ix")?;
        let iy: usize = field(iy, "iy")?;
        if ix >= grid_n || iy >= grid_n {
            return Err(fmt_err(format!("node ({ix},{iy}) out of range")));
        }
        values[iy * grid_n + ix] = field(v, "value")?;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(fmt_err("incomplete density: missing nodes"));
    }
    Ok(DensityGrid {
        rho,
        grid_n,
        values,
    })
}

pub fn moments_to_string(t: &MomentTable) -> String {
    let mut out = format!("# moments pmax={} mmax={}\n", t.p_max, t.m_max);
    for p in 0..=t.p_max {
        for m in -t.m_max..=t.m_max {
            let c = t.get(p, m);
            writeln!(out, "{p},{m},{},{}", c.re, c.im).unwrap();
        }
    }
    out
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    Ok(std::fs::write(path, text)?)
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

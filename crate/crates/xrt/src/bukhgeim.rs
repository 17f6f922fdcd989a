//! The Bukhgeim-Hilbert transform (direct principal-value form and its
//! Fourier multiplier form), the principal-value Cauchy quadrature on the
//! circle, and the Bukhgeim-Cauchy integral extending boundary data into
//! the disc.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::FourierLattice;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Boundary traces of the odd angular modes, one row per mode.
///
/// Row `j` stores the boundary spectrum `c_{j,k}`, `|k| <= k_max`, of the
/// trace of angular mode `n = -(2j+1)`:
/// `g_j(beta) = sum_k c_{j,k} e^{i k beta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryModeSequence {
    k_max: i64,
    rows: Vec<Vec<Complex64>>,
}

impl BoundaryModeSequence {
    pub fn new(k_max: i64, num_rows: usize) -> Self {
        assert!(k_max > 0);
        Self {
            k_max,
            rows: vec![vec![ZERO; (2 * k_max + 1) as usize]; num_rows],
        }
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn coeff(&self, j: usize, k: i64) -> Complex64 {
        if j < self.rows.len() && k.abs() <= self.k_max {
            self.rows[j][(k + self.k_max) as usize]
        } else {
            ZERO
        }
    }

    pub fn set_coeff(&mut self, j: usize, k: i64, v: Complex64) {
        assert!(j < self.rows.len() && k.abs() <= self.k_max);
        self.rows[j][(k + self.k_max) as usize] = v;
    }

    /// The odd negative half of a lattice, row `j` from angular mode
    /// `-(2j+1)`. Rejects lattices with mass off those modes.
    pub fn from_lattice(lat: &FourierLattice) -> Result<Self> {
        if let Err((n, k)) = lat.is_odd_negative() {
            return Err(Error::NotOddNegative { n, k });
        }
        let num_rows = ((lat.n_max() + 1) / 2) as usize;
        let mut s = Self::new(lat.k_max(), num_rows.max(1));
        for j in 0..s.rows.len() {
            let n = -(2 * j as i64 + 1);
            if n < -lat.n_max() {
                break;
            }
            for k in -lat.k_max()..=lat.k_max() {
                s.set_coeff(j, k, lat.get(n, k));
            }
        }
        Ok(s.trimmed())
    }

    /// Back to a lattice on the odd negative modes.
    pub fn to_lattice(&self, n_max: i64, k_max: i64) -> FourierLattice {
        let mut lat = FourierLattice::zeros(n_max, k_max);
        for (j, row) in self.rows.iter().enumerate() {
            let n = -(2 * j as i64 + 1);
            if n < -n_max {
                break;
            }
            for (i, &c) in row.iter().enumerate() {
                let k = i as i64 - self.k_max;
                if k.abs() <= k_max {
                    lat.set(n, k, c);
                }
            }
        }
        lat
    }

    /// Evaluate the trace of row `j` at boundary angle `beta`.
    pub fn sample(&self, j: usize, beta: f64) -> Complex64 {
        let mut acc = ZERO;
        for k in -self.k_max..=self.k_max {
            let c = self.coeff(j, k);
            if c != ZERO {
                acc += c * Complex64::from_polar(1.0, k as f64 * beta);
            }
        }
        acc
    }

    /// `sum_k |c_{j,k}|`, an upper bound for `sup_beta |g_j(beta)|`.
    pub fn row_sup_bound(&self, j: usize) -> f64 {
        if j < self.rows.len() {
            self.rows[j].iter().map(|c| c.norm()).sum()
        } else {
            0.0
        }
    }

    /// Bound on the total sup mass of rows `j >= from`.
    pub fn tail_bound(&self, from: usize) -> f64 {
        (from..self.rows.len()).map(|j| self.row_sup_bound(j)).sum()
    }

    /// Drop trailing all-zero rows (keeping at least one row).
    pub fn trimmed(mut self) -> Self {
        while self.rows.len() > 1
            && self.rows.last().map_or(false, |r| r.iter().all(|c| *c == ZERO))
        {
            self.rows.pop();
        }
        self
    }
}

/// `(1/pi) PV int_{-pi}^{pi} h(alpha) / (e^{i alpha} - e^{i beta}) d alpha`
/// by singularity subtraction on `n_nodes` uniform midpoint nodes.
///
/// The constant split off at the pole integrates to `-e^{-i beta}` exactly;
/// the remaining quotient is smooth, so the periodic trapezoid sum is
/// spectrally accurate. A node falling onto the pole uses the limit
/// `h'(beta) / (i e^{i beta})`.
pub fn pv_cauchy(
    h: impl Fn(f64) -> Complex64,
    dh: impl Fn(f64) -> Complex64,
    beta: f64,
    n_nodes: usize,
) -> Complex64 {
    assert!(n_nodes >= 4);
    let e_beta = Complex64::from_polar(1.0, beta);
    let h_beta = h(beta);
    let mut acc = ZERO;
    for m in 0..n_nodes {
        let alpha = -PI + 2.0 * PI * (m as f64 + 0.5) / n_nodes as f64;
        let e_alpha = Complex64::from_polar(1.0, alpha);
        let denom = e_alpha - e_beta;
        acc += if denom.norm() < 1e-9 {
            dh(alpha) / (I * e_alpha)
        } else {
            (h(alpha) - h_beta) / denom
        };
    }
    acc * (2.0 / n_nodes as f64) - h_beta * e_beta.conj()
}

/// `pv_cauchy` applied to the pure mode `h(alpha) = e^{i n alpha}`.
pub fn pv_cauchy_mode(n: i64, beta: f64, n_nodes: usize) -> Complex64 {
    pv_cauchy(
        |a| Complex64::from_polar(1.0, n as f64 * a),
        |a| I * n as f64 * Complex64::from_polar(1.0, n as f64 * a),
        beta,
        n_nodes,
    )
}

/// The Bukhgeim-Hilbert transform as a Fourier multiplier on the odd
/// negative lattice:
/// `(Hg)_{n,k} = i g_{n,k}` for `k >= 0` and
/// `(Hg)_{n,k} = i (-g_{n,k} + 2 (-1)^k g_{n+2k,-k})` for `k <= -1`,
/// with out-of-band partners read as zero.
pub fn hilbert_fourier(lat: &FourierLattice) -> Result<FourierLattice> {
    if let Err((n, k)) = lat.is_odd_negative() {
        return Err(Error::NotOddNegative { n, k });
    }
    let mut out = FourierLattice::zeros(lat.n_max(), lat.k_max());
    let mut n = -1i64;
    while n >= -lat.n_max() {
        for k in -lat.k_max()..=lat.k_max() {
            let g = lat.get(n, k);
            let v = if k >= 0 {
                I * g
            } else {
                let s = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                I * (-g + 2.0 * s * lat.get(n + 2 * k, -k))
            };
            out.set(n, k, v);
        }
        n -= 2;
    }
    Ok(out)
}

/// The Bukhgeim-Hilbert transform computed from its boundary-integral
/// definition: for each row, a principal-value Cauchy integral of the
/// trace plus the corrector series, sampled on a uniform beta grid and
/// transformed back to a boundary spectrum.
pub fn hilbert_direct(s: &BoundaryModeSequence, n_nodes: usize) -> BoundaryModeSequence {
    let k_max = s.k_max();
    // the result is band-limited to |k| <= k_max, so any sample count
    // beyond the Nyquist bound of the output band is exact
    let n_samples = n_nodes.max((2 * k_max + 2) as usize);
    let alphas: Vec<f64> = (0..n_nodes)
        .map(|m| -PI + 2.0 * PI * (m as f64 + 0.5) / n_nodes as f64)
        .collect();
    let mut out = BoundaryModeSequence::new(k_max, s.num_rows());
    for j in 0..s.num_rows() {
        // series constants q_t = (1/pi) int g_{j+t}(alpha) e^{-i t alpha}
        let max_t = s.num_rows() - 1 - j;
        let q: Vec<Complex64> = (1..=max_t)
            .map(|t| {
                let mut acc = ZERO;
                for &a in &alphas {
                    acc += s.sample(j + t, a) * Complex64::from_polar(1.0, -(t as f64) * a);
                }
                acc * (2.0 / n_nodes as f64)
            })
            .collect();
        let h = |a: f64| -> Complex64 {
            let mut acc = ZERO;
            for k in -k_max..=k_max {
                let c = s.coeff(j, k);
                if c != ZERO {
                    acc += c * Complex64::from_polar(1.0, (k + 1) as f64 * a);
                }
            }
            acc
        };
        let dh = |a: f64| -> Complex64 {
            let mut acc = ZERO;
            for k in -k_max..=k_max {
                let c = s.coeff(j, k);
                if c != ZERO {
                    acc += I * (k + 1) as f64 * c * Complex64::from_polar(1.0, (k + 1) as f64 * a);
                }
            }
            acc
        };
        let samples: Vec<Complex64> = (0..n_samples)
            .map(|m| {
                let beta = -PI + 2.0 * PI * m as f64 / n_samples as f64;
                let mut v = pv_cauchy(h, dh, beta, n_nodes);
                for (ti, qt) in q.iter().enumerate() {
                    let t = (ti + 1) as f64;
                    let sgn = if (ti + 1) % 2 == 0 { 1.0 } else { -1.0 };
                    v += sgn * Complex64::from_polar(1.0, -t * beta) * qt;
                }
                I * v
            })
            .collect();
        for k in -k_max..=k_max {
            let mut acc = ZERO;
            for (m, &v) in samples.iter().enumerate() {
                let beta = -PI + 2.0 * PI * m as f64 / n_samples as f64;
                acc += v * Complex64::from_polar(1.0, -(k as f64) * beta);
            }
            out.set_coeff(j, k, acc / n_samples as f64);
        }
    }
    out
}

/// Sup residual of the boundary identity `(I + i H) g = 0` in lattice
/// form: `max |g_{n,k} - (-1)^k g_{n+2k,-k}|` over odd `n <= -1`,
/// `k <= -1`, times 2 (the actual multiplier defect).
pub fn range_residual(s: &BoundaryModeSequence) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..s.num_rows() {
        for k in -s.k_max()..=-1 {
            let sgn = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            // partner angular mode n+2k is row j - k
            let partner = s.coeff(j + (-k) as usize, -k);
            worst = worst.max(2.0 * (s.coeff(j, k) - sgn * partner).norm());
        }
    }
    worst
}

/// The Bukhgeim-Cauchy integral extending boundary traces to a point `z`
/// in the open disc: for each row `j`,
/// `(B g)_j(z) = (1/2 pi i) int g_j(zeta) d zeta / (zeta - z)
///  + (1/2 pi i) int {d zeta/(zeta-z) - d conj(zeta)/conj(zeta-z)}
///    sum_t g_{j+t}(zeta) ((conj(zeta-z))/(zeta-z))^t`.
///
/// `j_terms` caps the corrector depth, `n_nodes` the boundary quadrature,
/// and `max_radius` guards the quadrature against the boundary blow-up.
pub fn bukhgeim_cauchy(
    s: &BoundaryModeSequence,
    z: Complex64,
    j_terms: usize,
    n_nodes: usize,
    max_radius: f64,
) -> Result<Vec<Complex64>> {
    if z.norm() > max_radius {
        return Err(Error::TooCloseToBoundary(z.norm(), max_radius));
    }
    let rows = s.num_rows();
    let traces: Vec<Vec<Complex64>> = (0..rows)
        .map(|j| {
            (0..n_nodes)
                .map(|m| s.sample(j, -PI + 2.0 * PI * m as f64 / n_nodes as f64))
                .collect()
        })
        .collect();
    let nodes: Vec<Complex64> = (0..n_nodes)
        .map(|m| Complex64::from_polar(1.0, -PI + 2.0 * PI * m as f64 / n_nodes as f64))
        .collect();
    let mut out = vec![ZERO; rows];
    for j in 0..rows {
        let mut acc = ZERO;
        for (m, &zeta) in nodes.iter().enumerate() {
            let dz = zeta - z;
            acc += traces[j][m] * zeta / dz;
            let depth = j_terms.min(rows - 1 - j);
            if depth > 0 {
                let kernel = zeta / dz + zeta.conj() / dz.conj();
                let r = dz.conj() / dz;
                let mut rp = Complex64::new(1.0, 0.0);
                let mut series = ZERO;
                for t in 1..=depth {
                    rp *= r;
                    series += traces[j + t][m] * rp;
                }
                acc += kernel * series;
            }
        }
        out[j] = acc / n_nodes as f64;
    }
    Ok(out)
}

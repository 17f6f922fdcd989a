//! Fourier analysis/synthesis between torus grids and the coefficient
//! lattice `g_{n,k}`, plus decay diagnostics.
//!
//! Convention: `g_{n,k} = 1/(2 pi)^2 int int g e^{-i n theta} e^{-i k beta}`,
//! first index `n` the angular mode, second index `k` the boundary mode.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::{GridKind, TorusGrid};

/// Complex coefficients on the truncated lattice `|n| <= n_max, |k| <= k_max`,
/// dense storage, `n` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierLattice {
    n_max: i64,
    k_max: i64,
    coeffs: Vec<Complex64>,
}

impl FourierLattice {
    pub fn zeros(n_max: i64, k_max: i64) -> Self {
        assert!(n_max > 0 && k_max > 0);
        let len = ((2 * n_max + 1) * (2 * k_max + 1)) as usize;
        Self {
            n_max,
            k_max,
            coeffs: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }
    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn in_band(&self, n: i64, k: i64) -> bool {
        n.abs() <= self.n_max && k.abs() <= self.k_max
    }

    fn idx(&self, n: i64, k: i64) -> usize {
        debug_assert!(self.in_band(n, k));
        ((n + self.n_max) * (2 * self.k_max + 1) + (k + self.k_max)) as usize
    }

    /// Entry at `(n, k)`; zero outside the band.
    pub fn get(&self, n: i64, k: i64) -> Complex64 {
        if self.in_band(n, k) {
            self.coeffs[self.idx(n, k)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, n: i64, k: i64, v: Complex64) {
        assert!(self.in_band(n, k), "({n},{k}) out of band");
        let i = self.idx(n, k);
        self.coeffs[i] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let k_span = 2 * self.k_max + 1;
        self.coeffs.iter().enumerate().map(move |(i, &c)| {
            let n = i as i64 / k_span - self.n_max;
            let k = i as i64 % k_span - self.k_max;
            (n, k, c)
        })
    }

    /// Sup norm of the entries over the band.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when every nonzero entry sits on an odd angular mode `n <= -1`.
    pub fn is_odd_negative(&self) -> std::result::Result<(), (i64, i64)> {
        for (n, k, c) in self.iter() {
            if c != Complex64::new(0.0, 0.0) && (n >= 0 || n % 2 == 0) {
                return Err((n, k));
            }
        }
        Ok(())
    }

    /// Copy with every entry off the odd `n <= -1` sublattice dropped.
    pub fn odd_negative_part(&self) -> FourierLattice {
        let mut out = FourierLattice::zeros(self.n_max, self.k_max);
        for (n, k, c) in self.iter() {
            if n <= -1 && n % 2 != 0 {
                out.set(n, k, c);
            }
        }
        out
    }
}

/// Trapezoidal (equal-weight) approximation of the double Fourier integral.
pub fn analyze(grid: &TorusGrid, n_max: i64, k_max: i64) -> Result<FourierLattice> {
    if 2 * n_max + 1 > grid.n_theta() as i64 || 2 * k_max + 1 > grid.n_beta() as i64 {
        return Err(Error::InsufficientResolution {
            nmax: n_max,
            kmax: k_max,
            nbeta: grid.n_beta(),
            ntheta: grid.n_theta(),
        });
    }
    let nb = grid.n_beta();
    let nt = grid.n_theta();
    let n_span = (2 * n_max + 1) as usize;

    // separable DFT: theta first, then beta
    let mut partial = vec![Complex64::new(0.0, 0.0); nb * n_span];
    for j in 0..nb {
        for l in 0..nt {
            let v = grid.value(j, l);
            if v == 0.0 {
                continue;
            }
            let theta = grid.theta_node(l);
            for (ni, n) in (-n_max..=n_max).enumerate() {
                partial[j * n_span + ni] +=
                    v * Complex64::from_polar(1.0, -(n as f64) * theta);
            }
        }
    }
    let mut out = FourierLattice::zeros(n_max, k_max);
    let scale = 1.0 / (nb as f64 * nt as f64);
    for (ni, n) in (-n_max..=n_max).enumerate() {
        for k in -k_max..=k_max {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..nb {
                let beta = grid.beta_node(j);
                acc += partial[j * n_span + ni] * Complex64::from_polar(1.0, -(k as f64) * beta);
            }
            out.set(n, k, acc * scale);
        }
    }
    Ok(out)
}

/// Sample `2 Re sum_{n <= -1 odd} sum_k g_{n,k} e^{i n theta} e^{i k beta}`
/// on a torus grid.
pub fn synthesize_odd(lat: &FourierLattice, n_beta: usize, n_theta: usize) -> Result<TorusGrid> {
    let betas: Vec<f64> = (0..n_beta)
        .map(|j| crate::forward::beta_node(j, n_beta))
        .collect();
    let mut values = vec![0.0f64; n_beta * n_theta];
    let mut n = -1i64;
    while n >= -lat.n_max {
        // boundary profile of this angular mode
        let profile: Vec<Complex64> = betas
            .iter()
            .map(|&beta| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in -lat.k_max..=lat.k_max {
                    let c = lat.get(n, k);
                    if c != Complex64::new(0.0, 0.0) {
                        acc += c * Complex64::from_polar(1.0, k as f64 * beta);
                    }
                }
                acc
            })
            .collect();
        for l in 0..n_theta {
            let theta = crate::forward::theta_node(l, n_theta);
            let phase = Complex64::from_polar(1.0, n as f64 * theta);
            for j in 0..n_beta {
                values[j * n_theta + l] += 2.0 * (profile[j] * phase).re;
            }
        }
        n -= 2;
    }
    TorusGrid::from_values(n_beta, n_theta, GridKind::Raw, values)
}

/// Boundary profile `g_n(beta_j) = sum_k g_{n,k} e^{i k beta_j}` at the
/// grid nodes of an `n_beta`-point beta grid.
pub fn angular_mode(lat: &FourierLattice, n: i64, n_beta: usize) -> Result<Vec<Complex64>> {
    if n.abs() > lat.n_max {
        return Err(Error::OutOfBand(n));
    }
    Ok((0..n_beta)
        .map(|j| {
            let beta = crate::forward::beta_node(j, n_beta);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in -lat.k_max..=lat.k_max {
                acc += lat.get(n, k) * Complex64::from_polar(1.0, k as f64 * beta);
            }
            acc
        })
        .collect())
}

/// Fill the `n >= 1` half of the lattice by `g_{n,k} = conj(g_{-n,-k})`.
pub fn conjugate_completion(lat: &FourierLattice) -> FourierLattice {
    let mut out = lat.clone();
    for n in 1..=lat.n_max {
        for k in -lat.k_max..=lat.k_max {
            out.set(n, k, lat.get(-n, -k).conj());
        }
    }
    out
}

/// The two truncated decay sums of the sufficiency hypothesis:
/// `sum_{n odd <= -1} <n>^2 sum_k |g_{n,k}|` and
/// `sum_k <k>^{1+mu} sum_{n odd <= -1} |g_{n,k}|`.
pub fn decay_report(lat: &FourierLattice, mu: f64) -> Result<(f64, f64)> {
    if !(mu > 0.5 && mu < 1.0) {
        return Err(Error::BadMu(mu));
    }
    let bracket = |m: i64| (1.0 + (m * m) as f64).sqrt();
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut n = -1i64;
    while n >= -lat.n_max {
        let row: f64 = (-lat.k_max..=lat.k_max).map(|k| lat.get(n, k).norm()).sum();
        sum_a += bracket(n) * bracket(n) * row;
        n -= 2;
    }
    for k in -lat.k_max..=lat.k_max {
        let mut col = 0.0;
        let mut n = -1i64;
        while n >= -lat.n_max {
            col += lat.get(n, k).norm();
            n -= 2;
        }
        sum_b += bracket(k).powf(1.0 + mu) * col;
    }
    Ok((sum_a, sum_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{odd_extension, symmetrize, xray_sinogram, TorusGrid};
    use crate::phantom::{Component, Phantom};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn centered_disc() -> Phantom {
        Phantom::new(vec![Component::Disc {
            center: num_complex::Complex64::new(0.0, 0.0),
            radius: 0.5,
            amplitude: 1.0,
        }])
        .unwrap()
    }

    fn random_grid(n: usize, seed: u64) -> TorusGrid {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        TorusGrid::from_values(
            n,
            n,
            GridKind::Raw,
            (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn analyze_zero_and_cosine() {
        let zero = TorusGrid::from_fn(32, 32, GridKind::Raw, |_, _| 0.0).unwrap();
        let lat = analyze(&zero, 8, 8).unwrap();
        assert_eq!(lat.max_abs(), 0.0);

        let cos = TorusGrid::from_fn(64, 64, GridKind::Raw, |b, t| 2.0 * 0.7 * (t - b).cos())
            .unwrap();
        let lat = analyze(&cos, 8, 8).unwrap();
        for (n, k, c) in lat.iter() {
            let expect = if (n, k) == (-1, 1) || (n, k) == (1, -1) {
                0.7
            } else {
                0.0
            };
            assert!(
                (c - num_complex::Complex64::new(expect, 0.0)).norm() < 1e-12,
                "({n},{k}) = {c}"
            );
        }
    }

    #[test]
    fn rotational_symmetry_concentrates_on_diagonal() {
        let g = odd_extension(&xray_sinogram(&centered_disc(), 128, 128).unwrap()).unwrap();
        let lat = analyze(&g, 16, 16).unwrap();
        let scale = lat.max_abs();
        for (n, k, c) in lat.iter() {
            if k != -n {
                assert!(c.norm() <= 1e-10 * scale, "({n},{k}): {}", c.norm());
            }
        }
    }

    #[test]
    fn synthesize_examples_and_round_trip() {
        let mut lat = FourierLattice::zeros(8, 8);
        lat.set(-1, 1, num_complex::Complex64::new(0.4, 0.0));
        let grid = synthesize_odd(&lat, 64, 64).unwrap();
        for j in [0usize, 10, 33] {
            for l in [2usize, 20, 60] {
                let expect = 2.0 * 0.4 * (grid.theta_node(l) - grid.beta_node(j)).cos();
                assert!((grid.value(j, l) - expect).abs() < 1e-12);
            }
        }
        let empty = FourierLattice::zeros(4, 4);
        assert_eq!(synthesize_odd(&empty, 16, 16).unwrap().max_abs(), 0.0);

        // round trip on a random odd-negative band-limited lattice
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut lat = FourierLattice::zeros(8, 8);
        let mut n = -1i64;
        while n >= -7 {
            for k in -8..=8 {
                lat.set(
                    n,
                    k,
                    num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
            n -= 2;
        }
        let grid = synthesize_odd(&lat, 64, 64).unwrap();
        let back = analyze(&grid, 8, 8).unwrap();
        let mut n = -1i64;
        while n >= -7 {
            for k in -8..=8 {
                // 2 Re{...} also creates the conjugate modes; odd rows n<=-1 must match
                assert!((back.get(n, k) - lat.get(n, k)).norm() < 1e-10, "({n},{k})");
            }
            n -= 2;
        }
    }

    #[test]
    fn angular_mode_examples_and_oracle() {
        let mut lat = FourierLattice::zeros(4, 4);
        lat.set(-1, 1, num_complex::Complex64::new(0.3, -0.2));
        let modes = angular_mode(&lat, -1, 32).unwrap();
        for (j, m) in modes.iter().enumerate() {
            let beta = crate::forward::beta_node(j, 32);
            let expect =
                num_complex::Complex64::new(0.3, -0.2) * num_complex::Complex64::from_polar(1.0, beta);
            assert!((m - expect).norm() < 1e-14);
        }
        assert!(angular_mode(&lat, -2, 32)
            .unwrap()
            .iter()
            .all(|m| m.norm() == 0.0));
        assert!(angular_mode(&lat, -9, 32).is_err());

        // against direct theta-integration of the synthesized grid
        let grid = synthesize_odd(&lat, 64, 64).unwrap();
        let direct: Vec<_> = (0..64)
            .map(|j| {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for l in 0..64 {
                    let theta = grid.theta_node(l);
                    acc += grid.value(j, l) * num_complex::Complex64::from_polar(1.0, theta);
                }
                acc / 64.0
            })
            .collect();
        let modes = angular_mode(&lat, -1, 64).unwrap();
        for j in 0..64 {
            assert!((direct[j] - modes[j]).norm() < 1e-10);
        }
    }

    #[test]
    fn conjugate_completion_examples() {
        let mut lat = FourierLattice::zeros(4, 4);
        lat.set(-1, 1, num_complex::Complex64::new(1.0, 2.0));
        let done = conjugate_completion(&lat);
        assert_eq!(done.get(1, -1), num_complex::Complex64::new(1.0, -2.0));
        let twice = conjugate_completion(&done);
        for (n, k, c) in done.iter() {
            assert_eq!(twice.get(n, k), c);
        }
    }

    #[test]
    fn decay_report_examples() {
        let lat = FourierLattice::zeros(4, 4);
        assert_eq!(decay_report(&lat, 0.75).unwrap(), (0.0, 0.0));

        let mut lat = FourierLattice::zeros(4, 4);
        lat.set(-1, 0, num_complex::Complex64::new(1.0, 0.0));
        let (a, b) = decay_report(&lat, 0.75).unwrap();
        assert!((a - 2.0).abs() < 1e-14 && (b - 1.0).abs() < 1e-14);
        assert!(decay_report(&lat, 0.4).is_err());
    }

    #[test]
    fn conjugacy_holds_for_real_grids() {
        let lat = analyze(&random_grid(32, 9), 8, 8).unwrap();
        for (n, k, c) in lat.iter() {
            assert!((lat.get(-n, -k).conj() - c).norm() < 1e-12);
        }
    }

    #[test]
    fn odd_grid_kills_even_modes() {
        let g = odd_extension(&xray_sinogram(&centered_disc(), 64, 64).unwrap()).unwrap();
        let lat = analyze(&g, 8, 8).unwrap();
        let scale = lat.max_abs();
        for (n, k, c) in lat.iter() {
            if n % 2 == 0 {
                assert!(c.norm() <= 1e-10 * scale, "({n},{k})");
            }
        }
    }

    #[test]
    fn symmetrized_grid_satisfies_lattice_symmetry() {
        let sym = symmetrize(&random_grid(64, 21)).unwrap();
        let n_max = 16;
        let lat = analyze(&sym, n_max, 8).unwrap();
        let scale = lat.max_abs();
        for (n, k, c) in lat.iter() {
            if (n + 2 * k).abs() <= n_max && k.abs() <= 8 {
                let partner = lat.get(n + 2 * k, -k);
                let sign = if (n + k) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((c - sign * partner).norm() <= 1e-10 * scale, "({n},{k})");
            }
        }
    }

    #[test]
    fn parseval_on_band_limited_grid() {
        // band-limited fixture: sum of a few explicit modes
        let grid = TorusGrid::from_fn(64, 64, GridKind::Raw, |b, t| {
            0.9 * (t - b).cos() + 0.3 * (3.0 * t + 2.0 * b).sin() + 0.1
        })
        .unwrap();
        let lat = analyze(&grid, 8, 8).unwrap();
        let cell = (2.0 * PI / 64.0) * (2.0 * PI / 64.0);
        let grid_l2 = grid.values().iter().map(|v| v * v).sum::<f64>() * cell;
        let lat_l2 = (2.0 * PI).powi(2) * lat.l2_norm().powi(2);
        assert!((grid_l2 - lat_l2).abs() < 1e-6 * grid_l2.max(1.0));
    }
}

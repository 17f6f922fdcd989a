//! The classical Gelfand-Graev / Helgason / Ludwig moment conditions in
//! fan-beam form, and their equivalence with the lattice moment
//! identities.
//!
//! All statements here concern the doubled sinogram: `2 Xf` on the
//! outflux part of the torus and `0` on the influx part. The moment
//! `M(p,m) = int int e^{i m (beta+alpha)} sin^p(alpha) cos(alpha) g`
//! vanishes when `p - m` is odd, or when `|m| > p` with `p - m` even.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forward::{GridKind, TorusGrid};
use crate::lattice::FourierLattice;

/// Moments `M(p,m)` for `p <= p_max`, `|m| <= m_max`.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub p_max: u32,
    pub m_max: i64,
    values: Vec<Complex64>,
}

impl MomentTable {
    pub fn get(&self, p: u32, m: i64) -> Complex64 {
        assert!(p <= self.p_max && m.abs() <= self.m_max);
        self.values[p as usize * (2 * self.m_max + 1) as usize + (m + self.m_max) as usize]
    }
}

fn require_doubled(g: &TorusGrid) -> Result<()> {
    if g.kind() != GridKind::Doubled {
        return Err(Error::WrongGridKind {
            expected: GridKind::Doubled.to_string(),
            got: g.kind().to_string(),
        });
    }
    Ok(())
}

/// One fan-beam moment by the periodic trapezoid cell sum; the phase
/// `e^{i m (beta + alpha)}` is `e^{i m theta}` exactly.
pub fn radon_moment(g: &TorusGrid, p: u32, m: i64) -> Result<Complex64> {
    require_doubled(g)?;
    Ok(radon_moment_unchecked(g, p, m))
}

fn radon_moment_unchecked(g: &TorusGrid, p: u32, m: i64) -> Complex64 {
    let cell = (2.0 * PI / g.n_beta() as f64) * (2.0 * PI / g.n_theta() as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..g.n_beta() {
        for l in 0..g.n_theta() {
            let v = g.value(j, l);
            if v == 0.0 {
                continue;
            }
            let theta = g.theta_node(l);
            let alpha = g.point(j, l).alpha();
            let w = alpha.sin().powi(p as i32) * alpha.cos();
            acc += v * w * Complex64::from_polar(1.0, m as f64 * theta);
        }
    }
    acc * cell
}

pub fn moment_table(g: &TorusGrid, p_max: u32, m_max: i64) -> Result<MomentTable> {
    require_doubled(g)?;
    let span = (2 * m_max + 1) as usize;
    let values = (0..(p_max as usize + 1) * span)
        .into_par_iter()
        .map(|i| radon_moment_unchecked(g, (i / span) as u32, (i % span) as i64 - m_max))
        .collect();
    Ok(MomentTable {
        p_max,
        m_max,
        values,
    })
}

/// Outcome of sweeping the vanishing branches of the moment conditions.
#[derive(Debug, Clone, Serialize)]
pub struct GghlReport {
    pub max_abs_residual: f64,
    pub worst_p: u32,
    pub worst_m: i64,
    pub moments_checked: usize,
    /// `|M(0,0)|`, the natural scale of the table.
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Check every vanishing moment with `p <= p_max`, `|m| <= 2 p_max + 2`,
/// against an absolute tolerance.
pub fn check_gghl(g: &TorusGrid, p_max: u32, tol: f64) -> Result<GghlReport> {
    let m_max = 2 * p_max as i64 + 2;
    let table = moment_table(g, p_max, m_max)?;
    let mut worst = (0.0f64, 0u32, 0i64);
    let mut checked = 0;
    for p in 0..=p_max {
        for m in -m_max..=m_max {
            let parity_odd = (p as i64 - m).rem_euclid(2) == 1;
            if !(parity_odd || m.abs() > p as i64) {
                continue;
            }
            checked += 1;
            let r = table.get(p, m).norm();
            if r > worst.0 {
                worst = (r, p, m);
            }
        }
    }
    Ok(GghlReport {
        max_abs_residual: worst.0,
        worst_p: worst.1,
        worst_m: worst.2,
        moments_checked: checked,
        scale: table.get(0, 0).norm(),
        tolerance: tol,
        pass: worst.0 <= tol,
    })
}

/// Residuals of the rewriting of the moment conditions as lattice
/// identities, all relative to `(2 pi)^2` times the sup of the lattice.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    /// Worst mismatch between the direct phase integrals and the
    /// corresponding lattice coefficients.
    pub max_match_residual: f64,
    /// Worst defect of the `A = -B` (even case) / `A = B` (odd case)
    /// identities between the two phase integrals.
    pub max_identity_residual: f64,
    pub pairs_checked: usize,
    /// Pairs whose lattice partner fell outside the band of `lat`.
    pub pairs_skipped: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Phase integral `int int e^{i m theta} e^{i q alpha} g`, `q = +-(p+1)`.
fn phase_integral(g: &TorusGrid, m: i64, q: i64) -> Complex64 {
    let cell = (2.0 * PI / g.n_beta() as f64) * (2.0 * PI / g.n_theta() as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..g.n_beta() {
        for l in 0..g.n_theta() {
            let v = g.value(j, l);
            if v == 0.0 {
                continue;
            }
            let theta = g.theta_node(l);
            let alpha = g.point(j, l).alpha();
            acc += v * Complex64::from_polar(1.0, m as f64 * theta + q as f64 * alpha);
        }
    }
    acc * cell
}

/// Verify, for `p <= p_max` and matching-parity `|m| > p` up to
/// `|m| <= p + 6`, that the two phase integrals of the moment condition
/// equal `(2 pi)^2 g_{-m-p-1, p+1}` and `(2 pi)^2 g_{-m+p+1, -p-1}` from
/// the supplied spectrum (computed by `analyze` of the same grid), and
/// that they cancel with the sign demanded by the parity case. Pairs
/// whose lattice entries fall outside the band are skipped, not failed.
pub fn verify_equivalence(
    lat: &FourierLattice,
    g: &TorusGrid,
    p_max: u32,
    tol: f64,
) -> Result<EquivalenceReport> {
    require_doubled(g)?;
    let scale = (2.0 * PI).powi(2) * lat.max_abs();
    let mut match_worst = 0.0f64;
    let mut identity_worst = 0.0f64;
    let mut pairs = 0;
    let mut skipped = 0;
    for p in 0..=p_max as i64 {
        let mut ms: Vec<i64> = Vec::new();
        let mut m = p + 2;
        while m <= p + 6 {
            ms.push(m);
            ms.push(-m);
            m += 2;
        }
        for m in ms {
            if !lat.in_band(-m - p - 1, p + 1) || !lat.in_band(-m + p + 1, -p - 1) {
                skipped += 1;
                continue;
            }
            let a = phase_integral(g, m, p + 1);
            let b = phase_integral(g, m, -(p + 1));
            let la = (2.0 * PI).powi(2) * lat.get(-m - p - 1, p + 1);
            let lb = (2.0 * PI).powi(2) * lat.get(-m + p + 1, -p - 1);
            match_worst = match_worst.max((a - la).norm()).max((b - lb).norm());
            // p and m share parity here: even pairs cancel, odd pairs match
            let defect = if p.rem_euclid(2) == 0 { a + b } else { a - b };
            identity_worst = identity_worst.max(defect.norm());
            pairs += 1;
        }
    }
    let rel = (match_worst.max(identity_worst)) / scale.max(1e-300);
    Ok(EquivalenceReport {
        max_match_residual: match_worst / scale.max(1e-300),
        max_identity_residual: identity_worst / scale.max(1e-300),
        pairs_checked: pairs,
        pairs_skipped: skipped,
        tolerance: tol,
        pass: rel <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{doubled_restriction, xray_sinogram};
    use crate::phantom::{Component, Phantom};

    fn doubled(f: &Phantom, n: usize) -> TorusGrid {
        doubled_restriction(&xray_sinogram(f, n, n).unwrap()).unwrap()
    }

    fn centered_disc() -> Phantom {
        Phantom::new(vec![Component::Disc {
            center: Complex64::new(0.0, 0.0),
            radius: 0.5,
            amplitude: 1.0,
        }])
        .unwrap()
    }

    #[test]
    fn low_moments_match_closed_forms() {
        // centered disc radius r: M(p,0) = 8 pi int_{-r}^r s^p sqrt(r^2-s^2) ds,
        // so M(0,0) = pi^2 (4 r^2) / 4 = pi^2 for r = 1/2,
        // and M(2,0) = pi^2 r^4 = pi^2/16
        let g = doubled(&centered_disc(), 512);
        let m00 = radon_moment(&g, 0, 0).unwrap();
        assert!(
            (m00 - Complex64::new(PI * PI, 0.0)).norm() < 1e-3 * PI * PI,
            "{m00}"
        );
        let m20 = radon_moment(&g, 2, 0).unwrap();
        let expect = PI * PI / 16.0;
        assert!((m20 - Complex64::new(expect, 0.0)).norm() < 1e-3, "{m20}");
        // vanishing examples: p - m odd, and |m| > p with p - m even
        assert!(radon_moment(&g, 0, 1).unwrap().norm() < 1e-6 * m00.norm());
        assert!(radon_moment(&g, 0, 2).unwrap().norm() < 1e-6 * m00.norm());
    }

    #[test]
    fn moments_reject_other_grid_kinds() {
        let raw = xray_sinogram(&centered_disc(), 32, 32).unwrap();
        assert!(radon_moment(&raw, 0, 0).is_err());
        assert!(moment_table(&raw, 1, 2).is_err());
        assert!(check_gghl(&raw, 1, 1.0).is_err());
    }

    #[test]
    fn beta_alpha_parameterization_agrees() {
        // oracle: sum the same integrand indexed by (beta, alpha) cells;
        // on a square grid this is a relabeling of the (beta, theta) cells
        let g = doubled(&centered_disc(), 64);
        let cell = (2.0 * PI / 64.0) * (2.0 * PI / 64.0);
        for (p, m) in [(0u32, 0i64), (1, 1), (2, -3), (3, 4)] {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..64 {
                let beta = g.beta_node(j);
                for d in 0..64 {
                    // alpha grid induced by theta_l - beta_j
                    let l = (j + d) % 64;
                    let alpha = crate::geometry::normalize_angle(g.theta_node(l) - beta).unwrap();
                    let w = alpha.sin().powi(p as i32) * alpha.cos();
                    acc += g.value(j, l)
                        * w
                        * Complex64::from_polar(1.0, m as f64 * (beta + alpha));
                }
            }
            acc *= cell;
            let direct = radon_moment(&g, p, m).unwrap();
            assert!((acc - direct).norm() < 1e-10, "(p={p},m={m})");
        }
    }

    #[test]
    fn vanishing_branches_vanish() {
        let f = Phantom::new(vec![Component::Disc {
            center: Complex64::new(0.3, -0.1),
            radius: 0.4,
            amplitude: 1.0,
        }])
        .unwrap();
        let g = doubled(&f, 256);
        let rep = check_gghl(&g, 3, 0.0).unwrap();
        assert!(rep.moments_checked > 20 && rep.scale > 1.0);
        assert!(
            rep.max_abs_residual < 1e-3 * rep.scale,
            "worst {} at ({},{})",
            rep.max_abs_residual,
            rep.worst_p,
            rep.worst_m
        );
    }

    #[test]
    fn surviving_moments_are_sizeable() {
        let f = Phantom::new(vec![Component::Disc {
            center: Complex64::new(0.3, 0.0),
            radius: 0.4,
            amplitude: 1.0,
        }])
        .unwrap();
        let g = doubled(&f, 128);
        // p = 1, m = 1 has matching parity and |m| <= p: not constrained
        assert!(radon_moment(&g, 1, 1).unwrap().norm() > 1e-2);
    }

    #[test]
    fn equivalence_on_an_off_center_disc() {
        let f = Phantom::new(vec![Component::Disc {
            center: Complex64::new(0.3, 0.0),
            radius: 0.4,
            amplitude: 1.0,
        }])
        .unwrap();
        let g = doubled(&f, 256);
        let lat = crate::lattice::analyze(&g, 12, 3).unwrap();
        let rep = verify_equivalence(&lat, &g, 2, 1e-3).unwrap();
        assert!(
            rep.pass,
            "match {} identity {}",
            rep.max_match_residual, rep.max_identity_residual
        );
        assert_eq!(rep.pairs_checked + rep.pairs_skipped, 18);
        assert!(rep.pairs_checked >= 12);
    }
}

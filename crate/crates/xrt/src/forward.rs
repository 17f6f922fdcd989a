//! Sampling the X-ray transform and its odd-symmetrized and doubled
//! variants on uniform torus grids.
//!
//! Node convention: `beta_j = -pi + 2 pi j / n_beta` and
//! `theta_l = -pi + 2 pi (l + 1/2) / n_theta`. The half-cell offset in
//! theta only keeps the tangent variety off the grid (`theta - beta` is
//! never an exact odd multiple of `pi/2` on square grids with `n_theta`
//! divisible by 4), while the antipodal reflection
//! `(beta, theta) -> (2 theta - beta - pi, theta + pi)` still maps grid
//! cells to grid cells whenever `n_beta = n_theta` is even.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{SectorClass, TorusPoint};
use crate::phantom::Phantom;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Xray,
    OddExtended,
    Doubled,
    Raw,
}

impl std::fmt::Display for GridKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GridKind::Xray => "Xray",
            GridKind::OddExtended => "OddExtended",
            GridKind::Doubled => "Doubled",
            GridKind::Raw => "Raw",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for GridKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Xray" => Ok(GridKind::Xray),
            "OddExtended" => Ok(GridKind::OddExtended),
            "Doubled" => Ok(GridKind::Doubled),
            "Raw" => Ok(GridKind::Raw),
            other => Err(Error::Format(format!("unknown grid kind `{other}`"))),
        }
    }
}

/// A sampled real function on the `(beta, theta)` torus, row-major with
/// `beta` outer and `theta` inner.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusGrid {
    n_beta: usize,
    n_theta: usize,
    kind: GridKind,
    values: Vec<f64>,
}

impl TorusGrid {
    pub fn from_values(
        n_beta: usize,
        n_theta: usize,
        kind: GridKind,
        values: Vec<f64>,
    ) -> Result<Self> {
        if n_beta < 8 || n_theta < 8 || n_theta % 2 != 0 {
            return Err(Error::GridTooSmall {
                nbeta: n_beta,
                ntheta: n_theta,
            });
        }
        assert_eq!(values.len(), n_beta * n_theta);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format("non-finite grid value".into()));
        }
        Ok(Self {
            n_beta,
            n_theta,
            kind,
            values,
        })
    }

    pub fn from_fn(
        n_beta: usize,
        n_theta: usize,
        kind: GridKind,
        f: impl Fn(f64, f64) -> f64 + Sync,
    ) -> Result<Self> {
        if n_beta < 8 || n_theta < 8 || n_theta % 2 != 0 {
            return Err(Error::GridTooSmall {
                nbeta: n_beta,
                ntheta: n_theta,
            });
        }
        let values: Vec<f64> = (0..n_beta * n_theta)
            .into_par_iter()
            .map(|idx| {
                let j = idx / n_theta;
                let l = idx % n_theta;
                f(beta_node(j, n_beta), theta_node(l, n_theta))
            })
            .collect();
        Self::from_values(n_beta, n_theta, kind, values)
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }
    pub fn kind(&self) -> GridKind {
        self.kind
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn beta_node(&self, j: usize) -> f64 {
        beta_node(j, self.n_beta)
    }
    pub fn theta_node(&self, l: usize) -> f64 {
        theta_node(l, self.n_theta)
    }

    pub fn value(&self, j: usize, l: usize) -> f64 {
        self.values[j * self.n_theta + l]
    }

    pub fn point(&self, j: usize, l: usize) -> TorusPoint {
        TorusPoint::new(self.beta_node(j), self.theta_node(l)).expect("finite nodes")
    }

    /// Cell image of the antipodal reflection; valid on square grids.
    pub fn reflect_cell(&self, j: usize, l: usize) -> Result<(usize, usize)> {
        if self.n_beta != self.n_theta {
            return Err(Error::NotSquareCompatible {
                nbeta: self.n_beta,
                ntheta: self.n_theta,
            });
        }
        let n = self.n_beta as i64;
        let j2 = (2 * l as i64 + 1 - j as i64 - n / 2).rem_euclid(n) as usize;
        let l2 = (l + self.n_theta / 2) % self.n_theta;
        Ok((j2, l2))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Discrete L1 norm with the `1/(2 pi)^2`-free cell measure.
    pub fn l1_norm(&self) -> f64 {
        let cell = (2.0 * PI / self.n_beta as f64) * (2.0 * PI / self.n_theta as f64);
        self.values.iter().map(|v| v.abs()).sum::<f64>() * cell
    }
}

pub fn beta_node(j: usize, n_beta: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / n_beta as f64
}

pub fn theta_node(l: usize, n_theta: usize) -> f64 {
    -PI + 2.0 * PI * (l as f64 + 0.5) / n_theta as f64
}

fn check_no_tangent(grid: &TorusGrid) -> Result<()> {
    for j in 0..grid.n_beta() {
        for l in 0..grid.n_theta() {
            let a = grid.point(j, l).alpha().abs();
            if (a - PI / 2.0).abs() < 1e-9 {
                return Err(Error::TangentSampled { j, l });
            }
        }
    }
    Ok(())
}

/// Sample the X-ray transform of a phantom on the grid.
pub fn xray_sinogram(f: &Phantom, n_beta: usize, n_theta: usize) -> Result<TorusGrid> {
    let grid = TorusGrid::from_fn(n_beta, n_theta, GridKind::Xray, |beta, theta| {
        f.line_integral(&TorusPoint::new(beta, theta).expect("finite nodes"))
    })?;
    check_no_tangent(&grid)?;
    Ok(grid)
}

/// `g = Xf` on the outflux part, `g = -Xf` on the influx part.
pub fn odd_extension(x: &TorusGrid) -> Result<TorusGrid> {
    if x.kind() != GridKind::Xray {
        return Err(Error::WrongGridKind {
            expected: "Xray".into(),
            got: x.kind().to_string(),
        });
    }
    check_no_tangent(x)?;
    let mut values = Vec::with_capacity(x.values().len());
    for j in 0..x.n_beta() {
        for l in 0..x.n_theta() {
            let v = x.value(j, l);
            values.push(match x.point(j, l).classify() {
                SectorClass::Outflux => v,
                SectorClass::Influx => -v,
                SectorClass::Tangent => unreachable!("tangent cells rejected above"),
            });
        }
    }
    TorusGrid::from_values(x.n_beta(), x.n_theta(), GridKind::OddExtended, values)
}

/// `g = 2 Xf` on the outflux part, `0` on the influx part.
pub fn doubled_restriction(x: &TorusGrid) -> Result<TorusGrid> {
    if x.kind() != GridKind::Xray {
        return Err(Error::WrongGridKind {
            expected: "Xray".into(),
            got: x.kind().to_string(),
        });
    }
    check_no_tangent(x)?;
    let mut values = Vec::with_capacity(x.values().len());
    for j in 0..x.n_beta() {
        for l in 0..x.n_theta() {
            let v = x.value(j, l);
            values.push(match x.point(j, l).classify() {
                SectorClass::Outflux => 2.0 * v,
                SectorClass::Influx => 0.0,
                SectorClass::Tangent => unreachable!("tangent cells rejected above"),
            });
        }
    }
    TorusGrid::from_values(x.n_beta(), x.n_theta(), GridKind::Doubled, values)
}

/// Average a raw grid with its antipodal reflection; the output satisfies
/// the reflection symmetry exactly on the grid.
pub fn symmetrize(x: &TorusGrid) -> Result<TorusGrid> {
    if x.kind() != GridKind::Raw {
        return Err(Error::WrongGridKind {
            expected: "Raw".into(),
            got: x.kind().to_string(),
        });
    }
    if x.n_beta() != x.n_theta() {
        return Err(Error::NotSquareCompatible {
            nbeta: x.n_beta(),
            ntheta: x.n_theta(),
        });
    }
    let mut values = vec![0.0; x.values().len()];
    for j in 0..x.n_beta() {
        for l in 0..x.n_theta() {
            let (j2, l2) = x.reflect_cell(j, l)?;
            values[j * x.n_theta() + l] = 0.5 * (x.value(j, l) + x.value(j2, l2));
        }
    }
    TorusGrid::from_values(x.n_beta(), x.n_theta(), GridKind::Raw, values)
}

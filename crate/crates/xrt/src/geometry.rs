//! Fan-beam coordinates on the torus, the outflux/influx partition, the
//! line symmetries, and chord geometry.
//!
//! A line through the closed unit disc is addressed by a source point
//! `e^{i beta}` on the boundary circle and a direction `e^{i theta}`.
//! The angle `alpha = theta - beta` measured against the outer normal at
//! the source splits the torus into the outflux part (`|alpha| < pi/2`),
//! the influx part (`pi/2 < |alpha| <= pi`), and the tangent variety.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Normalize an angle to the half-open interval `(-pi, pi]`.
pub fn normalize_angle(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFiniteAngle(x));
    }
    let mut r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    // rem_euclid may round down to exactly -pi for inputs just below 2pi k.
    if r <= -PI {
        r = PI;
    }
    Ok(r)
}

/// A point `(e^{i beta}, e^{i theta})` on the torus, both angles in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub beta: f64,
    pub theta: f64,
}

/// Which part of the torus partition a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorClass {
    Outflux,
    Influx,
    Tangent,
}

impl TorusPoint {
    pub fn new(beta: f64, theta: f64) -> Result<Self> {
        Ok(Self {
            beta: normalize_angle(beta)?,
            theta: normalize_angle(theta)?,
        })
    }

    /// The fan angle `alpha = theta - beta`, normalized.
    pub fn alpha(&self) -> f64 {
        normalize_angle(self.theta - self.beta).expect("normalized fields")
    }

    pub fn classify(&self) -> SectorClass {
        let a = self.alpha().abs();
        if a < PI / 2.0 {
            SectorClass::Outflux
        } else if a > PI / 2.0 {
            SectorClass::Influx
        } else {
            SectorClass::Tangent
        }
    }

    /// The involution `(beta, theta) -> (2 theta - beta - pi, theta + pi)`
    /// swapping the two boundary points of the chord.
    pub fn antipodal_reflection(&self) -> TorusPoint {
        TorusPoint::new(2.0 * self.theta - self.beta - PI, self.theta + PI)
            .expect("finite angles")
    }

    /// Parallel-beam (Radon) coordinates `(s, omega)` of the line, valid on
    /// the `|alpha| <= pi/2` branch. Influx points must be reflected first.
    pub fn to_radon(&self) -> Result<(f64, f64)> {
        if self.classify() == SectorClass::Influx {
            return Err(Error::InfluxRejected {
                beta: self.beta,
                theta: self.theta,
            });
        }
        let a = self.alpha();
        let s = a.sin();
        let omega = normalize_angle(a + self.beta - PI / 2.0)?;
        Ok((s, omega))
    }

    /// Length of the chord cut by the line, `2 |cos(theta - beta)|`.
    pub fn chord_length(&self) -> f64 {
        2.0 * self.alpha().cos().abs()
    }
}

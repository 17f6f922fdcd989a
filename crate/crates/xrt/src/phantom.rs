//! Analytic test densities supported in the closed unit disc, with exact
//! closed-form line integrals.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::TorusPoint;

/// One additive piece of a phantom.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    /// Indicator of a disc, `amplitude` inside `|z - center| < radius`.
    Disc {
        center: Complex64,
        radius: f64,
        amplitude: f64,
    },
    /// `amplitude * (1 - |z|^2)^m` on the unit disc.
    RadialBump { exponent: u32, amplitude: f64 },
    /// `amplitude` on the whole open unit disc.
    Constant { amplitude: f64 },
}

/// A density `f` on the unit disc, sum of analytic components.
#[derive(Debug, Clone, PartialEq)]
pub struct Phantom {
    components: Vec<Component>,
}

/// `int_{-1}^{1} (1 - t^2)^m dt`, by composite Simpson, cached per exponent.
fn bump_norm_constant(m: u32) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<u32, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    *guard.entry(m).or_insert_with(|| {
        let n = 4096usize; // intervals, even
        let h = 2.0 / n as f64;
        let f = |t: f64| (1.0 - t * t).powi(m as i32);
        let mut s = f(-1.0) + f(1.0);
        for i in 1..n {
            let t = -1.0 + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(t);
        }
        s * h / 3.0
    })
}

impl Phantom {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        for c in &components {
            match *c {
                Component::Disc {
                    center,
                    radius,
                    amplitude,
                } => {
                    if !(radius > 0.0) || !radius.is_finite() {
                        return Err(Error::InvalidPhantom(format!(
                            "disc radius {radius} must be positive"
                        )));
                    }
                    if center.norm() + radius > 1.0 + 1e-12 {
                        return Err(Error::InvalidPhantom(format!(
                            "disc (|center|={}, r={radius}) leaves the unit disc",
                            center.norm()
                        )));
                    }
                    if !amplitude.is_finite() {
                        return Err(Error::InvalidPhantom("non-finite amplitude".into()));
                    }
                }
                Component::RadialBump {
                    exponent,
                    amplitude,
                } => {
                    if exponent < 1 {
                        return Err(Error::InvalidPhantom("bump exponent must be >= 1".into()));
                    }
                    if !amplitude.is_finite() {
                        return Err(Error::InvalidPhantom("non-finite amplitude".into()));
                    }
                }
                Component::Constant { amplitude } => {
                    if !amplitude.is_finite() {
                        return Err(Error::InvalidPhantom("non-finite amplitude".into()));
                    }
                }
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Pointwise density at `z`, `|z| <= 1`.
    pub fn eval(&self, z: Complex64) -> Result<f64> {
        let r = z.norm();
        if r > 1.0 + 1e-12 {
            return Err(Error::OutsideDisc(r));
        }
        let mut v = 0.0;
        for c in &self.components {
            v += match *c {
                Component::Disc {
                    center,
                    radius,
                    amplitude,
                } => {
                    if (z - center).norm() < radius {
                        amplitude
                    } else {
                        0.0
                    }
                }
                Component::RadialBump {
                    exponent,
                    amplitude,
                } => {
                    if r < 1.0 {
                        amplitude * (1.0 - r * r).powi(exponent as i32)
                    } else {
                        0.0
                    }
                }
                Component::Constant { amplitude } => {
                    if r < 1.0 {
                        amplitude
                    } else {
                        0.0
                    }
                }
            };
        }
        Ok(v)
    }

    /// Exact line integral of the density along `L_{(beta, theta)}`.
    ///
    /// The value only depends on the line, not on which of the four
    /// `(beta, theta)` parameterizations addresses it.
    pub fn line_integral(&self, q: &TorusPoint) -> f64 {
        let dir = Complex64::from_polar(1.0, q.theta);
        let src = Complex64::from_polar(1.0, q.beta);
        let mut v = 0.0;
        for c in &self.components {
            v += match *c {
                Component::Disc {
                    center,
                    radius,
                    amplitude,
                } => {
                    // point-line distance from the disc center
                    let d = ((src - center) * dir.conj()).im.abs();
                    if d < radius {
                        2.0 * amplitude * (radius * radius - d * d).sqrt()
                    } else {
                        0.0
                    }
                }
                Component::RadialBump {
                    exponent,
                    amplitude,
                } => {
                    let s = (src * dir.conj()).im.abs();
                    if s < 1.0 {
                        amplitude
                            * (1.0 - s * s).powf(exponent as f64 + 0.5)
                            * bump_norm_constant(exponent)
                    } else {
                        0.0
                    }
                }
                Component::Constant { amplitude } => amplitude * q.chord_length(),
            };
        }
        v
    }
}

/// Parse the CLI phantom mini-language:
/// `disc:cx=<f>,cy=<f>,r=<f>,a=<f>`, `bump:m=<int>,a=<f>`, `const:a=<f>`,
/// components joined by `+`.
pub fn parse_phantom(spec: &str) -> Result<Phantom> {
    let mut components = Vec::new();
    for part in spec.split('+') {
        let part = part.trim();
        let (head, rest) = part
            .split_once(':')
            .ok_or_else(|| Error::PhantomParse(format!("missing ':' in `{part}`")))?;
        let mut fields: HashMap<&str, f64> = HashMap::new();
        for kv in rest.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::PhantomParse(format!("missing '=' in `{kv}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::PhantomParse(format!("bad number `{v}`")))?;
            fields.insert(k.trim(), v);
        }
        let get = |name: &str| {
            fields
                .get(name)
                .copied()
                .ok_or_else(|| Error::PhantomParse(format!("`{head}` needs field `{name}`")))
        };
        let comp = match head {
            "disc" => Component::Disc {
                center: Complex64::new(get("cx")?, get("cy")?),
                radius: get("r")?,
                amplitude: get("a")?,
            },
            "bump" => {
                let m = get("m")?;
                if m.fract() != 0.0 || m < 1.0 {
                    return Err(Error::PhantomParse(format!("bump m={m} must be an integer >= 1")));
                }
                Component::RadialBump {
                    exponent: m as u32,
                    amplitude: get("a")?,
                }
            }
            "const" => Component::Constant { amplitude: get("a")? },
            other => {
                return Err(Error::PhantomParse(format!("unknown component `{other}`")));
            }
        };
        components.push(comp);
    }
    Phantom::new(components)
}

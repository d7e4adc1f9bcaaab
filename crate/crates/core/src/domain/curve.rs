//! Boundary curve pieces parametrized over `t in [0, 1]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::MapSpec;
use crate::error::{Error, Result};

type C64 = Complex64;

/// Below this speed a parametrization is treated as degenerate.
pub const MIN_SPEED: f64 = 1e-10;

/// Point, velocity and acceleration of a piece at one parameter.
#[derive(Debug, Clone, Copy)]
pub struct CurveJet {
    pub point: C64,
    pub d1: C64,
    pub d2: C64,
}

impl CurveJet {
    /// Unit tangent.
    pub fn tangent(&self) -> C64 {
        self.d1 / self.d1.norm()
    }

    /// Left normal, which points into the domain under the positive orientation.
    pub fn inner_normal(&self) -> C64 {
        C64::i() * self.tangent()
    }

    /// `Im(gamma'' conj(gamma')) / |gamma'|^3`.
    pub fn curvature(&self) -> f64 {
        let s = self.d1.norm();
        (self.d2 * self.d1.conj()).im / (s * s * s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurvePiece {
    /// `center + radius * exp(i theta)`, theta running linearly from `theta0`
    /// to `theta1`; `theta1 < theta0` gives clockwise traversal.
    Arc {
        center: C64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
    Segment {
        start: C64,
        end: C64,
    },
    /// Unbounded line `point + tan(pi (t - 1/2)) * direction`, `t in (0, 1)`.
    Line {
        point: C64,
        direction: C64,
    },
    /// Image of a base piece under a conformal map.
    Mapped {
        map: MapSpec,
        base: Box<CurvePiece>,
    },
}

impl CurvePiece {
    pub fn jet(&self, t: f64) -> Result<CurveJet> {
        match self {
            CurvePiece::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let w = theta1 - theta0;
                let e = C64::from_polar(*radius, theta0 + w * t);
                Ok(CurveJet {
                    point: center + e,
                    d1: C64::i() * w * e,
                    d2: -(w * w) * e,
                })
            }
            CurvePiece::Segment { start, end } => Ok(CurveJet {
                point: start + (end - start) * t,
                d1: end - start,
                d2: C64::new(0.0, 0.0),
            }),
            CurvePiece::Line { point, direction } => {
                let a = PI * (t - 0.5);
                let s = a.tan();
                let sec2 = 1.0 + s * s;
                Ok(CurveJet {
                    point: point + direction * s,
                    d1: direction * (PI * sec2),
                    d2: direction * (2.0 * PI * PI * sec2 * s),
                })
            }
            CurvePiece::Mapped { map, base } => {
                let b = base.jet(t)?;
                let f = map.jet(b.point)?;
                Ok(CurveJet {
                    point: f.value,
                    d1: f.d1 * b.d1,
                    d2: f.d2 * b.d1 * b.d1 + f.d1 * b.d2,
                })
            }
        }
    }

    pub fn point(&self, t: f64) -> Result<C64> {
        Ok(self.jet(t)?.point)
    }

    /// Jet with the nondegeneracy check applied.
    pub fn regular_jet(&self, t: f64) -> Result<CurveJet> {
        let j = self.jet(t)?;
        let speed = j.d1.norm();
        if !(speed > MIN_SPEED) {
            return Err(Error::DegenerateParametrization { t, speed });
        }
        Ok(j)
    }

    pub fn curvature(&self, t: f64) -> Result<f64> {
        Ok(self.regular_jet(t)?.curvature())
    }

    pub fn is_unbounded(&self) -> bool {
        match self {
            CurvePiece::Line { .. } => true,
            CurvePiece::Mapped { base, .. } => base.is_unbounded(),
            _ => false,
        }
    }

    /// True when the piece is a closed loop on its own (full circle or its image).
    pub fn is_closed(&self) -> bool {
        match self {
            CurvePiece::Arc { theta0, theta1, .. } => {
                ((theta1 - theta0).abs() - 2.0 * PI).abs() < 1e-12
            }
            CurvePiece::Mapped { base, .. } => base.is_closed(),
            _ => false,
        }
    }

    /// Approximate length from a 512-point polyline; unbounded pieces are
    /// measured over `|s| <= 10`.
    pub fn approx_length(&self) -> f64 {
        let n = 512;
        let pts: Vec<C64> = (0..=n)
            .filter_map(|k| {
                let t = if self.is_unbounded() {
                    0.5 + (20.0 * (k as f64 / n as f64) - 10.0).atan() / PI
                } else {
                    k as f64 / n as f64
                };
                self.point(t).ok()
            })
            .collect();
        pts.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// Uniform midpoint-rule samples of the piece (all `n` nodes for a closed
    /// loop start at `t = 0`).
    pub fn sample(&self, n: usize) -> Result<Vec<(C64, C64, f64)>> {
        let closed = self.is_closed();
        (0..n)
            .map(|k| {
                let t = if closed {
                    k as f64 / n as f64
                } else if self.is_unbounded() {
                    0.5 + (20.0 * ((k as f64 + 0.5) / n as f64) - 10.0).atan() / PI
                } else {
                    (k as f64 + 0.5) / n as f64
                };
                let j = self.regular_jet(t)?;
                Ok((j.point, j.tangent(), t))
            })
            .collect()
    }

    /// Checks `|gamma'| > 1e-10` at 1000 parameters.
    pub fn check_regular(&self) -> Result<()> {
        let n = 1000;
        for k in 0..n {
            let t = if self.is_unbounded() {
                (k as f64 + 0.5) / n as f64
            } else {
                k as f64 / (n - 1) as f64
            };
            self.regular_jet(t)?;
        }
        Ok(())
    }

    pub fn reversed(&self) -> CurvePiece {
        match self {
            CurvePiece::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => CurvePiece::Arc {
                center: *center,
                radius: *radius,
                theta0: *theta1,
                theta1: *theta0,
            },
            CurvePiece::Segment { start, end } => CurvePiece::Segment {
                start: *end,
                end: *start,
            },
            CurvePiece::Line { point, direction } => CurvePiece::Line {
                point: *point,
                direction: -direction,
            },
            CurvePiece::Mapped { map, base } => CurvePiece::Mapped {
                map: map.clone(),
                base: Box::new(base.reversed()),
            },
        }
    }

    /// Image of the piece under `z -> lambda z`.
    pub fn scaled(&self, lambda: f64) -> CurvePiece {
        match self {
            CurvePiece::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => CurvePiece::Arc {
                center: center * lambda,
                radius: radius * lambda,
                theta0: *theta0,
                theta1: *theta1,
            },
            CurvePiece::Segment { start, end } => CurvePiece::Segment {
                start: start * lambda,
                end: end * lambda,
            },
            CurvePiece::Line { point, direction } => CurvePiece::Line {
                point: point * lambda,
                direction: *direction,
            },
            CurvePiece::Mapped { map, base } => CurvePiece::Mapped {
                map: map.post_scaled(lambda),
                base: base.clone(),
            },
        }
    }
}

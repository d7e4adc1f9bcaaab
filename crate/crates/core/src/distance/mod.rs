//! Invariant distances and the comparison distance `s_D`.

mod path;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::cache::solve_for_domain;
use crate::domain::{dist_to_boundary, DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::metrics::{annulus, DEFAULT_RIEMANN_NODES};

pub use path::{
    bergman_dist, optimize_path, polyline_length, quasi_hyperbolic_dist, PathConfig, PathIntegrand,
    PathPolyline,
};

type C64 = Complex64;

/// Which invariant distance `poincare_dist` should return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoincareKind {
    Caratheodory,
    Kobayashi,
}

impl FromStr for PoincareKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "caratheodory" => Ok(PoincareKind::Caratheodory),
            "kobayashi" => Ok(PoincareKind::Kobayashi),
            _ => Err(Error::Precondition(format!("unknown distance kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    ClosedForm,
    Pullback,
    CoveringMin,
    PathOpt,
}

impl fmt::Display for DistanceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceMethod::ClosedForm => "closed_form",
            DistanceMethod::Pullback => "pullback",
            DistanceMethod::CoveringMin => "covering_min",
            DistanceMethod::PathOpt => "path_opt",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    pub method: DistanceMethod,
    /// True when `value` bounds the infimum from above (path optimization).
    pub upper_bound: bool,
    pub iterations: usize,
    pub tolerance: f64,
}

impl DistanceResult {
    fn exact(value: f64, method: DistanceMethod) -> Self {
        DistanceResult {
            value,
            method,
            upper_bound: false,
            iterations: 0,
            tolerance: 0.0,
        }
    }
}

/// `asinh(x)` in the form `ln(1 + x + x^2 / (1 + sqrt(1 + x^2)))`.
pub fn asinh_log(x: f64) -> f64 {
    (x + x * x / (1.0 + (1.0 + x * x).sqrt())).ln_1p()
}

/// `s_D(z, w) = asinh(|z - w| / (2 sqrt(d_D(z) d_D(w))))`.
pub fn s_dist(domain: &DomainSpec, z: C64, w: C64) -> Result<f64> {
    let dz = dist_to_boundary(domain, z)?.distance;
    let dw = dist_to_boundary(domain, w)?.distance;
    Ok(s_from_depths(z, w, dz, dw))
}

pub fn s_from_depths(z: C64, w: C64, dz: f64, dw: f64) -> f64 {
    asinh_log((z - w).norm() / (2.0 * (dz * dw).sqrt()))
}

/// Poincaré distance of the unit disc, given `1 - |a|^2` and `1 - |b|^2`.
fn disc_dist(a: C64, b: C64, one_minus_a: f64, one_minus_b: f64) -> f64 {
    asinh_log((a - b).norm() / (one_minus_a * one_minus_b).sqrt())
}

/// Poincaré distance of a half-plane in terms of the two boundary distances.
fn half_plane_dist(z: C64, w: C64, dz: f64, dw: f64) -> f64 {
    s_from_depths(z, w, dz, dw)
}

/// Distance of a simply connected model domain (disc, half-plane, half-disc).
fn model_dist(domain: &DomainSpec, z: C64, w: C64) -> Result<f64> {
    Ok(match &domain.kind {
        DomainKind::Disc { center, radius } => {
            let r = *radius;
            let one_minus = |p: C64| {
                let d = r - (p - center).norm();
                d * (2.0 * r - d) / (r * r)
            };
            disc_dist(
                (z - center) / r,
                (w - center) / r,
                one_minus(z),
                one_minus(w),
            )
        }
        DomainKind::HalfPlane {
            boundary_point,
            inner_normal,
        } => {
            let depth = |p: C64| ((p - boundary_point) * inner_normal.conj()).re;
            half_plane_dist(z, w, depth(z), depth(w))
        }
        DomainKind::HalfDisc => {
            let g = |p: C64| ((p + 1.0) / (p - 1.0)).powi(2);
            let im_g = |p: C64| {
                let r = p.norm();
                4.0 * p.im * (1.0 - r) * (1.0 + r) / (p - 1.0).norm_sqr().powi(2)
            };
            half_plane_dist(g(z), g(w), im_g(z), im_g(w))
        }
        _ => {
            return Err(Error::Precondition(format!(
                "`{}` is not a model domain",
                domain.name
            )))
        }
    })
}

/// Carathéodory or Kobayashi distance where it is reachable in closed form,
/// by pullback, or through a covering map.
pub fn poincare_dist(
    domain: &DomainSpec,
    z: C64,
    w: C64,
    kind: PoincareKind,
) -> Result<DistanceResult> {
    domain.require_inside(z)?;
    domain.require_inside(w)?;
    match &domain.kind {
        DomainKind::Disc { .. } | DomainKind::HalfPlane { .. } | DomainKind::HalfDisc => Ok(
            DistanceResult::exact(model_dist(domain, z, w)?, DistanceMethod::ClosedForm),
        ),
        DomainKind::ConformalImage { base, .. } => {
            let a = domain.preimage(z)?;
            let b = domain.preimage(w)?;
            Ok(DistanceResult::exact(
                model_dist(base, a, b)?,
                DistanceMethod::Pullback,
            ))
        }
        DomainKind::JordanDomain { .. } => {
            let solve = solve_for_domain(domain, DEFAULT_RIEMANN_NODES)?;
            let a = solve.eval(z);
            let b = solve.eval(w);
            let v = disc_dist(a, b, 1.0 - a.norm_sqr(), 1.0 - b.norm_sqr());
            Ok(DistanceResult {
                tolerance: solve.error_estimate,
                ..DistanceResult::exact(v, DistanceMethod::Pullback)
            })
        }
        DomainKind::DiscComplement { center, radius } => {
            let r = *radius;
            let x = |p: C64| ((p - center).norm() - r) / r;
            match kind {
                PoincareKind::Caratheodory => {
                    // r / (z - c) maps onto the punctured unit disc
                    let a = r / (z - center);
                    let b = r / (w - center);
                    let om = |p: C64| {
                        let x = x(p);
                        x * (2.0 + x) / ((1.0 + x) * (1.0 + x))
                    };
                    Ok(DistanceResult::exact(
                        disc_dist(a, b, om(z), om(w)),
                        DistanceMethod::ClosedForm,
                    ))
                }
                PoincareKind::Kobayashi => {
                    // log lifts the punctured disc to the left half-plane; the
                    // nearest deck translate is the one with |dphi| <= pi
                    let (az, aw) = (x(z).ln_1p(), x(w).ln_1p());
                    let dphi = wrap_angle((w - center).arg() - (z - center).arg());
                    let sep = (az - aw).hypot(dphi);
                    Ok(DistanceResult::exact(
                        asinh_log(sep / (2.0 * (az * aw).sqrt())),
                        DistanceMethod::CoveringMin,
                    ))
                }
            }
        }
        DomainKind::Annulus {
            center,
            r_inner,
            r_outer,
        } => match kind {
            PoincareKind::Caratheodory => Err(Error::UnsupportedQuantity {
                quantity: "caratheodory".into(),
                domain: domain.name.clone(),
            }),
            PoincareKind::Kobayashi => {
                let (v, _) = annulus_kobayashi(*center, *r_inner, *r_outer, z, w);
                Ok(DistanceResult {
                    iterations: 41,
                    ..DistanceResult::exact(v, DistanceMethod::CoveringMin)
                })
            }
        },
    }
}

fn wrap_angle(a: f64) -> f64 {
    let t = (a + PI).rem_euclid(2.0 * PI) - PI;
    if t == -PI {
        PI
    } else {
        t
    }
}

/// Kobayashi distance of an annulus: minimum over the deck translates
/// `k in [-20, 20]` of the half-plane distance between strip lifts mapped by
/// `exp(i pi v / L)`. Returns the value and the minimizing translate.
pub fn annulus_kobayashi(center: C64, r_inner: f64, r_outer: f64, z: C64, w: C64) -> (f64, i64) {
    let lz = annulus::lift(center, r_inner, r_outer, z);
    let lw = annulus::lift(center, r_inner, r_outer, w);
    let l = lz.width;
    let mut best = (f64::INFINITY, 0);
    for k in -20i64..=20 {
        let delta = lw.arg - lz.arg + 2.0 * PI * k as f64;
        let e = PI * delta / (2.0 * l);
        let v = if e.abs() > 300.0 {
            e.abs() - 0.5 * (lz.sin_theta * lw.sin_theta).ln()
        } else {
            let a = C64::from_polar(e.exp(), lz.theta);
            let b = C64::from_polar((-e).exp(), lw.theta);
            asinh_log((a - b).norm() / (2.0 * (lz.sin_theta * lw.sin_theta).sqrt()))
        };
        if v < best.0 {
            best = (v, k);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn s_dist_examples() {
        let h = DomainSpec::upper_half_plane();
        assert_eq!(s_dist(&h, c(0.0, 1.0), c(0.0, 1.0)).unwrap(), 0.0);
        let v = s_dist(&h, c(0.0, 1.0), c(0.0, 2.0)).unwrap();
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((asinh_log(1.0) - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-15);
    }

    #[test]
    fn s_dist_contract() {
        let d = DomainSpec::unit_disc();
        for (z, w) in [(c(0.1, 0.2), c(-0.5, 0.3)), (c(0.999, 0.0), c(0.0, 0.9999))] {
            let s = s_dist(&d, z, w).unwrap();
            let dz = 1.0 - z.norm();
            let dw = 1.0 - w.norm();
            let back = s.sinh() * 2.0 * (dz * dw).sqrt();
            assert!((back - (z - w).norm()).abs() <= 1e-12 * (z - w).norm());
        }
    }

    #[test]
    fn disc_examples() {
        let d = DomainSpec::unit_disc();
        let k = PoincareKind::Kobayashi;
        let v = poincare_dist(&d, c(0.0, 0.0), c(0.5, 0.0), k)
            .unwrap()
            .value;
        assert!((v - 0.5f64.atanh()).abs() < 1e-15);
        let v = poincare_dist(&d, c(0.9, 0.0), c(0.99, 0.0), k)
            .unwrap()
            .value;
        assert!((v - (0.09f64 / 0.109).atanh()).abs() < 1e-14);
        let h = DomainSpec::upper_half_plane();
        let v = poincare_dist(&h, c(0.0, 1.0), c(0.0, 2.0), k)
            .unwrap()
            .value;
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn half_disc_against_tanh_form() {
        // tanh^-1 |(g(z) - g(w)) / (g(z) - conj g(w))| in the half-plane
        let g = |p: C64| ((p + 1.0) / (p - 1.0)).powi(2);
        let (z, w) = (c(0.2, 0.3), c(-0.5, 0.6));
        let expect = ((g(z) - g(w)) / (g(z) - g(w).conj())).norm().atanh();
        let v = poincare_dist(&DomainSpec::half_disc(), z, w, PoincareKind::Kobayashi)
            .unwrap()
            .value;
        assert!((v - expect).abs() < 1e-13);
    }

    #[test]
    fn disc_complement_kinds() {
        let d = crate::domain::classify_model(-1.0);
        let (z, w) = (c(0.5, 0.0), c(-1.0, 1.7));
        let cd = poincare_dist(&d, z, w, PoincareKind::Caratheodory)
            .unwrap()
            .value;
        let kd = poincare_dist(&d, z, w, PoincareKind::Kobayashi)
            .unwrap()
            .value;
        assert!(cd <= kd);
        // tanh form of the Carathéodory distance through 1/(z+1)
        let (a, b) = (1.0 / (z + 1.0), 1.0 / (w + 1.0));
        let expect = ((a - b) / (1.0 - a.conj() * b)).norm().atanh();
        assert!((cd - expect).abs() < 1e-13);
    }

    #[test]
    fn annulus_kobayashi_symmetric_and_on_circle() {
        let a = DomainSpec::annulus(0.5);
        let (z, w) = (c(0.7, 0.0), C64::from_polar(0.7, 2.0));
        let d1 = poincare_dist(&a, z, w, PoincareKind::Kobayashi)
            .unwrap()
            .value;
        let d2 = poincare_dist(&a, w, z, PoincareKind::Kobayashi)
            .unwrap()
            .value;
        assert!((d1 - d2).abs() < 1e-12);
        assert!(
            poincare_dist(&a, z, z, PoincareKind::Kobayashi)
                .unwrap()
                .value
                < 1e-12
        );
        assert!(poincare_dist(&a, z, w, PoincareKind::Caratheodory).is_err());
        // the annulus sits inside the unit disc, so its distance dominates the disc's
        let disc = poincare_dist(&DomainSpec::unit_disc(), z, w, PoincareKind::Kobayashi)
            .unwrap()
            .value;
        assert!(d1 >= disc);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(-PI), PI);
    }
}

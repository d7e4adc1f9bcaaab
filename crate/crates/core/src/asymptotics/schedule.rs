//! Boundary-approach samplers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{dist_to_boundary, DomainKind, DomainSpec};
use crate::error::{Error, Result};

type C64 = Complex64;

/// Boundary point addressed by piece index and parameter. Parses from
/// `<t>` (piece 0) or `<piece>:<t>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub piece: usize,
    pub t: f64,
}

impl Anchor {
    pub fn new(piece: usize, t: f64) -> Self {
        Anchor { piece, t }
    }

    /// A point in the middle of a smooth stretch of the boundary.
    pub fn default_for(domain: &DomainSpec) -> Anchor {
        match &domain.kind {
            DomainKind::HalfPlane { .. } => Anchor::new(0, 0.5),
            DomainKind::HalfDisc => Anchor::new(1, 0.5),
            DomainKind::ConformalImage { base, .. } => Anchor::default_for(base),
            _ => Anchor::new(0, 0.0),
        }
    }
}

impl FromStr for Anchor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Precondition(format!(
                "malformed anchor `{s}`, expected <t> or <piece>:<t>"
            ))
        };
        let (piece, t) = match s.split_once(':') {
            Some((p, t)) => (p.parse().map_err(|_| bad())?, t),
            None => (0, s),
        };
        let t: f64 = t.parse().map_err(|_| bad())?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Precondition(format!(
                "anchor parameter {t} outside [0, 1]"
            )));
        }
        Ok(Anchor { piece, t })
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.piece, self.t)
    }
}

/// `|z_k - w_k| = sigma(t_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationLaw {
    Linear,
    Sqrt,
    Square,
}

impl SeparationLaw {
    pub const ALL: [SeparationLaw; 3] = [
        SeparationLaw::Linear,
        SeparationLaw::Sqrt,
        SeparationLaw::Square,
    ];

    pub fn sigma(self, t: f64) -> f64 {
        match self {
            SeparationLaw::Linear => t,
            SeparationLaw::Sqrt => t.sqrt(),
            SeparationLaw::Square => t * t,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SeparationLaw::Linear => "t",
            SeparationLaw::Sqrt => "sqrt_t",
            SeparationLaw::Square => "t2",
        }
    }
}

impl FromStr for SeparationLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SeparationLaw::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| {
                Error::Precondition(format!("unknown separation law `{s}` (t, sqrt_t, t2)"))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairDirection {
    /// `w` sits at the same depth over a boundary point `sigma` further along.
    Tangential,
    /// `w` sits `sigma` deeper on the same normal.
    Radial,
}

/// Geometric depths `t_k = t0 rho^k`, `k = 0..=k_max`, along the inner
/// normal at an anchor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproachSchedule {
    pub anchor: Anchor,
    pub t0: f64,
    pub rho: f64,
    pub k_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySample {
    pub t: f64,
    pub z: C64,
    pub depth: f64,
    /// Signed curvature at the nearest boundary point.
    pub curvature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSample {
    pub t: f64,
    pub z: C64,
    pub w: C64,
}

/// Largest allowed `|d(z_K) / t_K - 1|` on a normal ray.
pub const DEPTH_RATIO_TOL: f64 = 5e-3;

/// Largest allowed `|foot - anchor| / t`. At a C^2 anchor the drift is
/// O(t^2); at a C^{1,eps} point such as the join in the perturbed disc it is
/// of order t^{1+eps}, which is still o(t) but slowly.
pub const ANCHOR_DRIFT_TOL: f64 = 5e-2;

impl ApproachSchedule {
    pub fn normal_ray(anchor: Anchor) -> Self {
        ApproachSchedule {
            anchor,
            t0: 0.1,
            rho: 0.5,
            k_max: 24,
        }
    }

    /// `k_max + 1` halvings ending exactly at `t_final`.
    pub fn ending_at(anchor: Anchor, t_final: f64, k_max: usize) -> Self {
        ApproachSchedule {
            anchor,
            t0: t_final * 2f64.powi(k_max as i32),
            rho: 0.5,
            k_max,
        }
    }

    /// Same start, `k_max` chosen as the last step with `t_k >= t_floor`.
    pub fn with_floor(mut self, t_floor: f64) -> Self {
        let k = ((t_floor / self.t0).ln() / self.rho.ln() + 1e-9).floor();
        self.k_max = k.max(0.0) as usize;
        self
    }

    /// Every depth multiplied by `lambda`.
    pub fn scaled_by(mut self, lambda: f64) -> Self {
        self.t0 *= lambda;
        self
    }

    pub fn depths(&self) -> Vec<f64> {
        (0..=self.k_max)
            .map(|k| self.t0 * self.rho.powi(k as i32))
            .collect()
    }

    /// Interior points `a + t_k n`, each checked against its nearest boundary
    /// point: the foot must stay at the anchor, and `d / t` must tend to 1.
    pub fn ray(&self, domain: &DomainSpec) -> Result<Vec<RaySample>> {
        let bp = domain.boundary_point(self.anchor.piece, self.anchor.t)?;
        let mut out = Vec::with_capacity(self.k_max + 1);
        for t in self.depths() {
            let z = bp.point + bp.inner_normal * t;
            if !domain.contains(z)? {
                return Err(Error::Schedule(format!(
                    "point {z} at depth {t:e} left the domain"
                )));
            }
            let foot = dist_to_boundary(domain, z)?;
            if !foot.unique || (foot.foot - bp.point).norm() > ANCHOR_DRIFT_TOL * t + 1e-9 {
                return Err(Error::Schedule(format!(
                    "depth {t:e} leaves the uniqueness region of anchor {}",
                    self.anchor
                )));
            }
            out.push(RaySample {
                t,
                z,
                depth: foot.distance,
                curvature: foot.curvature,
            });
        }
        let last = out.last().expect("schedule is non-empty");
        if (last.depth / last.t - 1.0).abs() > DEPTH_RATIO_TOL {
            return Err(Error::Schedule(format!(
                "d/t = {} at the last depth {:e}",
                last.depth / last.t,
                last.t
            )));
        }
        Ok(out)
    }

    /// Pairs `z_k = a + t_k n` and `w_k` at separation about `sigma(t_k)`.
    pub fn pairs(
        &self,
        domain: &DomainSpec,
        law: SeparationLaw,
        dir: PairDirection,
    ) -> Result<Vec<PairSample>> {
        let pieces = domain.boundary_pieces();
        let piece = pieces.get(self.anchor.piece).ok_or_else(|| {
            Error::Precondition(format!("piece index {} out of range", self.anchor.piece))
        })?;
        let bp = domain.boundary_point(self.anchor.piece, self.anchor.t)?;
        let speed = piece.regular_jet(self.anchor.t)?.d1.norm();
        let mut out = Vec::with_capacity(self.k_max + 1);
        for t in self.depths() {
            let z = bp.point + bp.inner_normal * t;
            let sigma = law.sigma(t);
            let w = match dir {
                PairDirection::Radial => bp.point + bp.inner_normal * (t + sigma),
                PairDirection::Tangential => {
                    let mut s = self.anchor.t + sigma / speed;
                    if piece.is_closed() {
                        s = s.rem_euclid(1.0);
                    } else if s > 1.0 {
                        return Err(Error::Schedule(format!(
                            "pair partner at parameter {s} runs off the piece"
                        )));
                    }
                    let b = domain.boundary_point(self.anchor.piece, s)?;
                    b.point + b.inner_normal * t
                }
            };
            for p in [z, w] {
                if !domain.contains(p)? {
                    return Err(Error::Schedule(format!(
                        "pair point {p} at depth {t:e} left the domain"
                    )));
                }
            }
            out.push(PairSample { t, z, w });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::catalog::blob;

    #[test]
    fn anchor_syntax() {
        assert_eq!("0.25".parse::<Anchor>().unwrap(), Anchor::new(0, 0.25));
        assert_eq!("3:0.5".parse::<Anchor>().unwrap(), Anchor::new(3, 0.5));
        assert!("1.5".parse::<Anchor>().is_err());
        assert!("a:0.5".parse::<Anchor>().is_err());
        assert!("".parse::<Anchor>().is_err());
    }

    #[test]
    fn depths_and_floor() {
        let s = ApproachSchedule::normal_ray(Anchor::new(0, 0.0));
        let d = s.depths();
        assert_eq!(d.len(), 25);
        assert!((d[24] - 0.1 / 2f64.powi(24)).abs() < 1e-22);
        assert_eq!(s.with_floor(1e-4).k_max, 9);
        let e = ApproachSchedule::ending_at(Anchor::new(0, 0.0), 1e-4, 10);
        assert_eq!(e.depths()[10], 1e-4);
    }

    #[test]
    fn disc_ray_is_radial() {
        let d = DomainSpec::unit_disc();
        let r = ApproachSchedule::normal_ray(Anchor::new(0, 0.25))
            .ray(&d)
            .unwrap();
        for s in &r {
            assert!((s.z - C64::new(0.0, 1.0 - s.t)).norm() < 1e-15);
            assert!((s.depth / s.t - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn blob_ray_depth_ratio() {
        let r = ApproachSchedule::normal_ray(Anchor::new(0, 0.1))
            .with_floor(1e-5)
            .ray(&blob())
            .unwrap();
        let last = r.last().unwrap();
        assert!((last.depth / last.t - 1.0).abs() < 1e-6);
    }

    #[test]
    fn disc_tangential_pairs_rotate() {
        let d = DomainSpec::unit_disc();
        let p = ApproachSchedule::normal_ray(Anchor::new(0, 0.0))
            .pairs(&d, SeparationLaw::Linear, PairDirection::Tangential)
            .unwrap();
        for s in &p {
            let expect = C64::from_polar(1.0 - s.t, s.t);
            assert!((s.w - expect).norm() < 1e-14, "{} vs {expect}", s.w);
        }
    }

    #[test]
    fn deep_ray_leaves_uniqueness_region() {
        // the centre of the disc is equidistant from every boundary point
        let s = ApproachSchedule {
            anchor: Anchor::new(0, 0.0),
            t0: 1.0,
            rho: 0.5,
            k_max: 3,
        };
        assert!(matches!(
            s.ray(&DomainSpec::unit_disc()),
            Err(Error::Schedule(_))
        ));
    }
}

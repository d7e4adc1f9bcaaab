//! Planar domains: catalog variants, membership, boundary geometry.

pub mod catalog;
mod curve;
mod foot;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::MapSpec;
use crate::error::{Error, Result};

pub use catalog::{catalog, catalog_names, example_4b, lookup};
pub use curve::{CurveJet, CurvePiece, MIN_SPEED};
pub(crate) use foot::golden_min;
pub use foot::{dist_to_boundary, dist_to_boundary_with, BoundaryFoot, FootConfig};

type C64 = Complex64;

/// Declared boundary regularity. Trusted metadata, never verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    C1,
    Dini,
    C1Alpha,
    C11,
    C2,
    C2Alpha,
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: DomainKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum DomainKind {
    Disc {
        center: C64,
        radius: f64,
    },
    HalfPlane {
        boundary_point: C64,
        inner_normal: C64,
    },
    DiscComplement {
        center: C64,
        radius: f64,
    },
    Annulus {
        center: C64,
        r_inner: f64,
        r_outer: f64,
    },
    /// Upper half of the unit disc.
    HalfDisc,
    ConformalImage {
        base: Box<DomainSpec>,
        map: MapSpec,
    },
    JordanDomain {
        boundary: Vec<CurvePiece>,
        regularity_tag: Regularity,
    },
}

/// A point of the boundary addressed by piece index and parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub piece: usize,
    pub t: f64,
    pub point: C64,
    pub inner_normal: C64,
    pub tangent: C64,
    pub curvature: f64,
}

/// One boundary sample: point, unit tangent, piece parameter.
pub type BoundarySample = (C64, C64, f64);

impl DomainSpec {
    pub fn new(name: impl Into<String>, kind: DomainKind) -> Self {
        DomainSpec {
            name: name.into(),
            kind,
        }
    }

    pub fn disc(center: C64, radius: f64) -> Self {
        Self::new("disc", DomainKind::Disc { center, radius })
    }

    pub fn unit_disc() -> Self {
        Self::new(
            "unit-disc",
            DomainKind::Disc {
                center: C64::new(0.0, 0.0),
                radius: 1.0,
            },
        )
    }

    pub fn upper_half_plane() -> Self {
        Self::new(
            "half-plane",
            DomainKind::HalfPlane {
                boundary_point: C64::new(0.0, 0.0),
                inner_normal: C64::i(),
            },
        )
    }

    pub fn half_disc() -> Self {
        Self::new("half-disc", DomainKind::HalfDisc)
    }

    pub fn annulus(q: f64) -> Self {
        Self::new(
            format!("annulus-{q}"),
            DomainKind::Annulus {
                center: C64::new(0.0, 0.0),
                r_inner: q,
                r_outer: 1.0,
            },
        )
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: DomainSpec = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDomain(format!("{}: {m}", self.name)));
        match &self.kind {
            DomainKind::Disc { radius, .. } | DomainKind::DiscComplement { radius, .. } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad(format!("radius {radius} must be positive"));
                }
            }
            DomainKind::HalfPlane { inner_normal, .. } => {
                if (inner_normal.norm() - 1.0).abs() > 1e-12 {
                    return bad("inner_normal must be a unit vector".into());
                }
            }
            DomainKind::Annulus {
                r_inner, r_outer, ..
            } => {
                if !(0.0 < *r_inner && r_inner < r_outer && r_outer.is_finite()) {
                    return bad(format!(
                        "need 0 < r_inner < r_outer, got {r_inner}, {r_outer}"
                    ));
                }
            }
            DomainKind::HalfDisc => {}
            DomainKind::ConformalImage { base, map } => {
                if !matches!(
                    base.kind,
                    DomainKind::Disc { .. } | DomainKind::HalfPlane { .. }
                ) {
                    return bad("ConformalImage base must be a Disc or a HalfPlane".into());
                }
                base.validate()?;
                map.validate()?;
                self.check_univalent(base, map)?;
            }
            DomainKind::JordanDomain { boundary, .. } => self.validate_jordan(boundary)?,
        }
        Ok(())
    }

    fn check_univalent(&self, base: &DomainSpec, map: &MapSpec) -> Result<()> {
        if matches!(map, MapSpec::NumericalRiemann { .. }) {
            return Ok(());
        }
        let pts = base.interior_grid(100);
        let mut imgs: Vec<(C64, C64)> = pts
            .iter()
            .filter_map(|&z| map.eval(z).ok().map(|w| (w, z)))
            .collect();
        imgs.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
        for i in 0..imgs.len() {
            for j in i + 1..imgs.len() {
                if imgs[j].0.re - imgs[i].0.re > 1e-10 {
                    break;
                }
                if (imgs[j].0 - imgs[i].0).norm() <= 1e-10 && (imgs[j].1 - imgs[i].1).norm() > 1e-8
                {
                    return Err(Error::InvalidDomain(format!(
                        "{}: map is not univalent ({} and {} share an image)",
                        self.name, imgs[i].1, imgs[j].1
                    )));
                }
            }
        }
        Ok(())
    }

    fn validate_jordan(&self, boundary: &[CurvePiece]) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDomain(format!("{}: {m}", self.name)));
        if boundary.is_empty() {
            return bad("empty boundary".into());
        }
        if boundary.iter().any(|p| p.is_unbounded()) {
            return bad("JordanDomain pieces must be bounded".into());
        }
        for p in boundary {
            p.check_regular()?;
        }
        let n = boundary.len();
        for i in 0..n {
            let end = boundary[i].point(1.0)?;
            let start = boundary[(i + 1) % n].point(0.0)?;
            if (end - start).norm() > 1e-12 {
                return bad(format!(
                    "piece {i} ends at {end} but piece {} starts at {start}",
                    (i + 1) % n
                ));
            }
        }
        let poly = self.polyline(256)?;
        let m = poly.len();
        let area: f64 = (0..m)
            .map(|k| {
                let a = poly[k];
                let b = poly[(k + 1) % m];
                a.re * b.im - b.re * a.im
            })
            .sum::<f64>()
            / 2.0;
        if area <= 0.0 {
            return bad("boundary is not positively oriented".into());
        }
        for i in 0..m {
            let (a, b) = (poly[i], poly[(i + 1) % m]);
            for j in i + 2..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                let (c, d) = (poly[j], poly[(j + 1) % m]);
                if segments_cross(a, b, c, d) {
                    return bad("boundary self-intersects".into());
                }
            }
        }
        Ok(())
    }

    /// Closed polyline through `n` samples per piece (Jordan domains only).
    fn polyline(&self, n: usize) -> Result<Vec<C64>> {
        let mut out = Vec::new();
        for p in self.boundary_pieces() {
            for k in 0..n {
                out.push(p.point(k as f64 / n as f64)?);
            }
        }
        Ok(out)
    }

    pub fn is_bounded(&self) -> bool {
        match &self.kind {
            DomainKind::HalfPlane { .. } | DomainKind::DiscComplement { .. } => false,
            DomainKind::ConformalImage { base, .. } => base.is_bounded(),
            _ => true,
        }
    }

    pub fn is_simply_connected(&self) -> bool {
        !matches!(
            self.kind,
            DomainKind::Annulus { .. } | DomainKind::DiscComplement { .. }
        )
    }

    /// Boundary as positively oriented pieces (domain on the left).
    pub fn boundary_pieces(&self) -> Vec<CurvePiece> {
        let zero = C64::new(0.0, 0.0);
        match &self.kind {
            DomainKind::Disc { center, radius } => vec![CurvePiece::Arc {
                center: *center,
                radius: *radius,
                theta0: 0.0,
                theta1: 2.0 * PI,
            }],
            DomainKind::HalfPlane {
                boundary_point,
                inner_normal,
            } => vec![CurvePiece::Line {
                point: *boundary_point,
                direction: -C64::i() * inner_normal,
            }],
            DomainKind::DiscComplement { center, radius } => vec![CurvePiece::Arc {
                center: *center,
                radius: *radius,
                theta0: 2.0 * PI,
                theta1: 0.0,
            }],
            DomainKind::Annulus {
                center,
                r_inner,
                r_outer,
            } => vec![
                CurvePiece::Arc {
                    center: *center,
                    radius: *r_outer,
                    theta0: 0.0,
                    theta1: 2.0 * PI,
                },
                CurvePiece::Arc {
                    center: *center,
                    radius: *r_inner,
                    theta0: 2.0 * PI,
                    theta1: 0.0,
                },
            ],
            DomainKind::HalfDisc => vec![
                CurvePiece::Segment {
                    start: C64::new(-1.0, 0.0),
                    end: C64::new(1.0, 0.0),
                },
                CurvePiece::Arc {
                    center: zero,
                    radius: 1.0,
                    theta0: 0.0,
                    theta1: PI,
                },
            ],
            DomainKind::ConformalImage { base, map } => base
                .boundary_pieces()
                .into_iter()
                .map(|p| CurvePiece::Mapped {
                    map: map.clone(),
                    base: Box::new(p),
                })
                .collect(),
            DomainKind::JordanDomain { boundary, .. } => boundary.clone(),
        }
    }

    /// True iff `z` is an interior point.
    pub fn contains(&self, z: C64) -> Result<bool> {
        if !z.is_finite() {
            return Ok(false);
        }
        Ok(match &self.kind {
            DomainKind::Disc { center, radius } => (z - center).norm() < *radius,
            DomainKind::HalfPlane {
                boundary_point,
                inner_normal,
            } => ((z - boundary_point) * inner_normal.conj()).re > 0.0,
            DomainKind::DiscComplement { center, radius } => (z - center).norm() > *radius,
            DomainKind::Annulus {
                center,
                r_inner,
                r_outer,
            } => {
                let r = (z - center).norm();
                *r_inner < r && r < *r_outer
            }
            DomainKind::HalfDisc => z.im > 0.0 && z.norm() < 1.0,
            DomainKind::ConformalImage { base, map } => {
                let samples = base.seed_samples(map);
                match map.invert_from_samples(z, &samples) {
                    Ok(pre) => base.contains(pre)?,
                    Err(e) => {
                        if !self.is_bounded() {
                            return Err(Error::Indeterminate {
                                domain: self.name.clone(),
                                z,
                                reason: e.to_string(),
                            });
                        }
                        self.winding_contains(z)
                            .ok_or_else(|| Error::Indeterminate {
                                domain: self.name.clone(),
                                z,
                                reason: format!("{e}; winding number undecided"),
                            })?
                    }
                }
            }
            DomainKind::JordanDomain { .. } => {
                self.winding_contains(z)
                    .ok_or_else(|| Error::Indeterminate {
                        domain: self.name.clone(),
                        z,
                        reason: "point on the boundary".into(),
                    })?
            }
        })
    }

    /// Preimage of an interior point of a `ConformalImage` in its base.
    pub fn preimage(&self, z: C64) -> Result<C64> {
        let DomainKind::ConformalImage { base, map } = &self.kind else {
            return Err(Error::Precondition(format!(
                "`{}` is not a conformal image",
                self.name
            )));
        };
        let samples = base.seed_samples(map);
        let pre = map
            .invert_from_samples(z, &samples)
            .or_else(|_| map.invert(z, z))?;
        if !base.contains(pre)? {
            return Err(Error::OutsideDomain {
                domain: self.name.clone(),
                z,
            });
        }
        Ok(pre)
    }

    pub(crate) fn require_inside(&self, z: C64) -> Result<()> {
        if self.contains(z)? {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                domain: self.name.clone(),
                z,
            })
        }
    }

    /// Winding number test with adaptive angle tracking; `None` when `z`
    /// is numerically on the boundary.
    fn winding_contains(&self, z: C64) -> Option<bool> {
        let mut total = 0.0;
        for p in self.boundary_pieces() {
            for k in 0..64 {
                let t0 = k as f64 / 64.0;
                let t1 = (k + 1) as f64 / 64.0;
                total += winding_piece(
                    &p,
                    z,
                    t0,
                    t1,
                    p.point(t0).ok()? - z,
                    p.point(t1).ok()? - z,
                    0,
                )?;
            }
        }
        Some((total / (2.0 * PI)).round() != 0.0)
    }

    /// `n x n` polar (or rectangular for half-planes) interior grid.
    fn interior_grid(&self, n: usize) -> Vec<C64> {
        match &self.kind {
            DomainKind::Disc { center, radius } => {
                let mut v = Vec::with_capacity(n * n);
                for i in 0..n {
                    let r = radius * (i as f64 + 0.5) / n as f64;
                    for j in 0..n {
                        v.push(center + C64::from_polar(r, 2.0 * PI * j as f64 / n as f64));
                    }
                }
                v
            }
            DomainKind::HalfPlane {
                boundary_point,
                inner_normal,
            } => {
                let tau = -C64::i() * inner_normal;
                let mut v = Vec::with_capacity(n * n);
                for i in 0..n {
                    let y = 5.0 * (i as f64 + 0.5) / n as f64;
                    for j in 0..n {
                        let x = 10.0 * (j as f64 / (n - 1) as f64) - 5.0;
                        v.push(boundary_point + inner_normal * y + tau * x);
                    }
                }
                v
            }
            _ => Vec::new(),
        }
    }

    /// 64 (base point, image) pairs for seeding Newton inversion.
    pub(crate) fn seed_samples(&self, map: &MapSpec) -> Vec<(C64, C64)> {
        let mut base = Vec::with_capacity(64);
        match &self.kind {
            DomainKind::Disc { center, radius } => {
                base.push(*center);
                for r in [0.25, 0.5, 0.7, 0.85, 0.93, 0.97, 0.99] {
                    for j in 0..9 {
                        base.push(center + C64::from_polar(radius * r, 2.0 * PI * j as f64 / 9.0));
                    }
                }
            }
            DomainKind::HalfPlane {
                boundary_point,
                inner_normal,
            } => {
                let tau = -C64::i() * inner_normal;
                for y in [0.02, 0.1, 0.3, 1.0, 2.0, 4.0, 8.0, 16.0] {
                    for x in [-4.0, -2.0, -1.0, -0.3, 0.3, 1.0, 2.0, 4.0] {
                        base.push(boundary_point + inner_normal * y + tau * (x * y.max(0.1)));
                    }
                }
            }
            _ => {}
        }
        base.into_iter()
            .filter_map(|z| map.eval(z).ok().map(|w| (z, w)))
            .collect()
    }

    /// Boundary point and local frame at `(piece, t)`.
    pub fn boundary_point(&self, piece: usize, t: f64) -> Result<BoundaryPoint> {
        let pieces = self.boundary_pieces();
        let p = pieces
            .get(piece)
            .ok_or_else(|| Error::Precondition(format!("piece index {piece} out of range")))?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Precondition(format!("parameter {t} outside [0, 1]")));
        }
        let j = p.regular_jet(t)?;
        Ok(BoundaryPoint {
            piece,
            t,
            point: j.point,
            inner_normal: j.inner_normal(),
            tangent: j.tangent(),
            curvature: j.curvature(),
        })
    }

    /// `n` samples per piece in positive orientation with unit tangents.
    /// Open pieces of multi-piece boundaries are mildly clustered toward their
    /// endpoints (parameter density ratio 3).
    pub fn boundary_sample(&self, n: usize) -> Result<Vec<BoundarySample>> {
        if n < 16 {
            return Err(Error::Precondition(format!(
                "boundary_sample needs n >= 16, got {n}"
            )));
        }
        let pieces = self.boundary_pieces();
        let graded = pieces.len() > 1;
        let mut out = Vec::with_capacity(n * pieces.len());
        for p in &pieces {
            if p.is_closed() || p.is_unbounded() || !graded {
                out.extend(p.sample(n)?);
            } else {
                for k in 0..n {
                    let s = (k as f64 + 0.5) / n as f64;
                    let t = s - 0.5 * (2.0 * PI * s).sin() / (2.0 * PI);
                    let j = p.regular_jet(t)?;
                    out.push((j.point, j.tangent(), t));
                }
            }
        }
        Ok(out)
    }

    /// Image of the domain under `z -> lambda z`.
    pub fn scaled(&self, lambda: f64) -> DomainSpec {
        let name = format!("{}*{lambda}", self.name);
        let kind = match &self.kind {
            DomainKind::Disc { center, radius } => DomainKind::Disc {
                center: center * lambda,
                radius: radius * lambda,
            },
            DomainKind::HalfPlane {
                boundary_point,
                inner_normal,
            } => DomainKind::HalfPlane {
                boundary_point: boundary_point * lambda,
                inner_normal: *inner_normal,
            },
            DomainKind::DiscComplement { center, radius } => DomainKind::DiscComplement {
                center: center * lambda,
                radius: radius * lambda,
            },
            DomainKind::Annulus {
                center,
                r_inner,
                r_outer,
            } => DomainKind::Annulus {
                center: center * lambda,
                r_inner: r_inner * lambda,
                r_outer: r_outer * lambda,
            },
            DomainKind::HalfDisc => DomainKind::JordanDomain {
                boundary: self
                    .boundary_pieces()
                    .iter()
                    .map(|p| p.scaled(lambda))
                    .collect(),
                regularity_tag: Regularity::Analytic,
            },
            DomainKind::ConformalImage { base, map } => DomainKind::ConformalImage {
                base: base.clone(),
                map: map.post_scaled(lambda),
            },
            DomainKind::JordanDomain {
                boundary,
                regularity_tag,
            } => DomainKind::JordanDomain {
                boundary: boundary.iter().map(|p| p.scaled(lambda)).collect(),
                regularity_tag: *regularity_tag,
            },
        };
        DomainSpec { name, kind }
    }

    /// Axis-aligned bounding box `(min, max)`; unbounded domains get a box of
    /// half-width `window` around their boundary reference point.
    pub fn bounding_box(&self, window: f64) -> (C64, C64) {
        let w = C64::new(window, window);
        match &self.kind {
            DomainKind::Disc { center, radius } => (
                center - C64::new(*radius, *radius),
                center + C64::new(*radius, *radius),
            ),
            DomainKind::Annulus {
                center, r_outer, ..
            } => (
                center - C64::new(*r_outer, *r_outer),
                center + C64::new(*r_outer, *r_outer),
            ),
            DomainKind::HalfDisc => (C64::new(-1.0, 0.0), C64::new(1.0, 1.0)),
            DomainKind::HalfPlane { boundary_point, .. } => {
                (boundary_point - w, boundary_point + w)
            }
            DomainKind::DiscComplement { center, .. } => (center - w, center + w),
            _ => {
                let mut lo = C64::new(f64::INFINITY, f64::INFINITY);
                let mut hi = -lo;
                for p in self.boundary_pieces() {
                    for k in 0..=1024 {
                        if let Ok(z) = p.point(k as f64 / 1024.0) {
                            lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
                            hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
                        }
                    }
                }
                (lo, hi)
            }
        }
    }
}

fn winding_piece(
    p: &CurvePiece,
    z: C64,
    t0: f64,
    t1: f64,
    a: C64,
    b: C64,
    depth: u32,
) -> Option<f64> {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    let dang = (b / a).arg();
    if (b - a).norm() <= 0.5 * na.min(nb) && dang.abs() < 0.5 {
        return Some(dang);
    }
    if depth > 60 {
        return None;
    }
    let tm = 0.5 * (t0 + t1);
    let m = p.point(tm).ok()? - z;
    Some(
        winding_piece(p, z, t0, tm, a, m, depth + 1)?
            + winding_piece(p, z, tm, t1, m, b, depth + 1)?,
    )
}

fn segments_cross(a: C64, b: C64, c: C64, d: C64) -> bool {
    let cross = |u: C64, v: C64| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Model domain `{2 Re tau > chi |tau|^2}`: a disc, a half-plane or a disc
/// complement, with 0 on the boundary, inner normal 1 and curvature `chi`.
pub fn classify_model(chi: f64) -> DomainSpec {
    let kind = if chi > 0.0 {
        DomainKind::Disc {
            center: C64::new(1.0 / chi, 0.0),
            radius: 1.0 / chi,
        }
    } else if chi == 0.0 {
        DomainKind::HalfPlane {
            boundary_point: C64::new(0.0, 0.0),
            inner_normal: C64::new(1.0, 0.0),
        }
    } else {
        DomainKind::DiscComplement {
            center: C64::new(1.0 / chi, 0.0),
            radius: -1.0 / chi,
        }
    };
    DomainSpec::new(format!("model-{chi}"), kind)
}

/// Signed curvature of the boundary at `(piece, t)`.
pub fn signed_curvature(domain: &DomainSpec, piece: usize, t: f64) -> Result<f64> {
    let pieces = domain.boundary_pieces();
    let p = pieces
        .get(piece)
        .ok_or_else(|| Error::Precondition(format!("piece index {piece} out of range")))?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Precondition(format!("parameter {t} outside [0, 1]")));
    }
    p.curvature(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn membership_examples() {
        let d = DomainSpec::unit_disc();
        assert!(d.contains(c(0.5, 0.0)).unwrap());
        assert!(!d.contains(c(2.0, 0.0)).unwrap());
        let b = example_4b(4.0);
        assert!(b.contains(c(0.5, 0.7)).unwrap());
        assert!(b.contains(c(0.9, 3.0)).unwrap());
        assert!(!b.contains(c(0.9, -0.9)).unwrap());
        assert!(!b.contains(c(1.1, 0.5)).unwrap());
    }

    #[test]
    fn classify_model_cases() {
        assert_eq!(
            classify_model(2.0).kind,
            DomainKind::Disc {
                center: c(0.5, 0.0),
                radius: 0.5
            }
        );
        assert!(matches!(
            classify_model(0.0).kind,
            DomainKind::HalfPlane { .. }
        ));
        assert_eq!(
            classify_model(-1.0).kind,
            DomainKind::DiscComplement {
                center: c(-1.0, 0.0),
                radius: 1.0
            }
        );
        for chi in [2.0, 0.0, -1.0] {
            let m = classify_model(chi);
            let f = dist_to_boundary(&m, c(0.1, 0.0)).unwrap();
            assert!(f.foot.norm() < 1e-15);
            assert!((f.inner_normal - c(1.0, 0.0)).norm() < 1e-15);
            assert!((f.curvature - chi).abs() < 1e-12);
        }
    }

    #[test]
    fn disc_boundary_sample_of_four() {
        // n >= 16 is enforced at domain level; the piece sampler gives the
        // four-point pattern directly.
        let s = DomainSpec::unit_disc().boundary_pieces()[0]
            .sample(4)
            .unwrap();
        let want = [
            (c(1.0, 0.0), c(0.0, 1.0)),
            (c(0.0, 1.0), c(-1.0, 0.0)),
            (c(-1.0, 0.0), c(0.0, -1.0)),
            (c(0.0, -1.0), c(1.0, 0.0)),
        ];
        for (got, want) in s.iter().zip(want) {
            assert!((got.0 - want.0).norm() < 1e-15);
            assert!((got.1 - want.1).norm() < 1e-15);
        }
        assert!(DomainSpec::unit_disc().boundary_sample(8).is_err());
    }

    #[test]
    fn half_disc_sample_is_clustered_but_bounded_ratio() {
        let s = DomainSpec::half_disc().boundary_sample(64).unwrap();
        assert_eq!(s.len(), 128);
        assert!(s[..64].iter().all(|p| p.0.im == 0.0));
        assert!(s[64..].iter().all(|p| (p.0.norm() - 1.0).abs() < 1e-14));
        for piece in [&s[..64], &s[64..]] {
            let gaps: Vec<f64> = piece.windows(2).map(|w| (w[1].0 - w[0].0).norm()).collect();
            let max = gaps.iter().cloned().fold(0.0, f64::max);
            let min = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(max / min <= 4.0);
            // endpoints denser than the middle
            assert!(gaps[0] < gaps[31]);
        }
    }

    #[test]
    fn curvature_signs() {
        assert!((signed_curvature(&DomainSpec::unit_disc(), 0, 0.3).unwrap() - 1.0).abs() < 1e-14);
        let comp = DomainSpec::new(
            "c",
            DomainKind::DiscComplement {
                center: c(0.0, 0.0),
                radius: 1.0,
            },
        );
        assert!((signed_curvature(&comp, 0, 0.3).unwrap() + 1.0).abs() < 1e-14);
        assert_eq!(
            signed_curvature(&DomainSpec::half_disc(), 0, 0.3).unwrap(),
            0.0
        );
    }

    #[test]
    fn image_curve_curvature_matches_finite_differences() {
        // Oracle: curvature from finite differences of the boundary points,
        // kappa = Im(conj(x') x'') / |x'|^3 with x', x'' central differences.
        let blob = lookup("blob").unwrap();
        let p = &blob.boundary_pieces()[0];
        let h = 1e-4;
        let pt = |t: f64| p.point(t).unwrap();
        let d1 = (pt(h) - pt(-h)) / (2.0 * h);
        let d2 = (pt(h) - 2.0 * pt(0.0) + pt(-h)) / (h * h);
        let fd = (d1.conj() * d2).im / d1.norm().powi(3);
        let k = signed_curvature(&blob, 0, 0.0).unwrap();
        // f(z) = z + 0.1 z^2 at z = 1: |f'| = 1.2, curvature (1 + Re(z f''/f'))/|f'| = (1 + 0.2/1.2)/1.2
        assert!((k - (1.0 + 0.2 / 1.2) / 1.2).abs() < 1e-12);
        assert!((k - fd).abs() < 1e-6);
    }

    #[test]
    fn json_round_trip_is_lossless() {
        for d in catalog() {
            let s = d.to_json().unwrap();
            let back: DomainSpec = serde_json::from_str(&s).unwrap();
            assert_eq!(back, d, "{s}");
        }
        let s = r#"{"name":"x","variant":"Disc","center":[0.1,0.30000000000000004],"radius":0.7}"#;
        let d = DomainSpec::from_json(s).unwrap();
        assert_eq!(
            d.kind,
            DomainKind::Disc {
                center: c(0.1, 0.30000000000000004),
                radius: 0.7
            }
        );
    }

    #[test]
    fn validation_rejects_bad_domains() {
        let ann = DomainSpec::new(
            "a",
            DomainKind::Annulus {
                center: c(0.0, 0.0),
                r_inner: 1.0,
                r_outer: 0.5,
            },
        );
        assert!(ann.validate().is_err());
        let open = DomainSpec::new(
            "j",
            DomainKind::JordanDomain {
                boundary: vec![CurvePiece::Segment {
                    start: c(0.0, 0.0),
                    end: c(1.0, 0.0),
                }],
                regularity_tag: Regularity::C1,
            },
        );
        assert!(open.validate().is_err());
        let clockwise = DomainSpec::new(
            "cw",
            DomainKind::JordanDomain {
                boundary: vec![CurvePiece::Arc {
                    center: c(0.0, 0.0),
                    radius: 1.0,
                    theta0: 2.0 * PI,
                    theta1: 0.0,
                }],
                regularity_tag: Regularity::Analytic,
            },
        );
        assert!(clockwise.validate().is_err());
        let bad_map = DomainSpec::new(
            "square",
            DomainKind::ConformalImage {
                base: Box::new(DomainSpec::unit_disc()),
                map: MapSpec::Polynomial {
                    coeffs: vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
                },
            },
        );
        assert!(bad_map.validate().is_err());
    }
}

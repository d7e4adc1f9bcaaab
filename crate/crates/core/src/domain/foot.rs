//! Distance to the boundary with nearest-foot data.
//!
//! Model domains use closed forms. Arc, segment and line pieces are projected
//! exactly; mapped pieces are searched on a dense parameter grid and each
//! discrete local minimum is refined by golden-section search.

use num_complex::Complex64;

use super::{CurvePiece, DomainKind, DomainSpec};
use crate::error::Result;

type C64 = Complex64;

/// Nearest boundary point of an interior point.
///
/// `curvature` is the signed curvature at the foot; at an endpoint of an open
/// piece it is the one-sided value of that piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFoot {
    pub foot: C64,
    pub distance: f64,
    pub inner_normal: C64,
    pub curvature: f64,
    pub unique: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct FootConfig {
    /// Grid samples per mapped piece.
    pub grid: usize,
    /// Golden-section tolerance in the piece parameter.
    pub param_tol: f64,
}

impl Default for FootConfig {
    fn default() -> Self {
        FootConfig {
            grid: 2048,
            param_tol: 1e-12,
        }
    }
}

const TIE_TOL: f64 = 1e-9;
const SAME_FOOT: f64 = 1e-8;

pub fn dist_to_boundary(domain: &DomainSpec, z: C64) -> Result<BoundaryFoot> {
    dist_to_boundary_with(domain, z, &FootConfig::default())
}

pub fn dist_to_boundary_with(
    domain: &DomainSpec,
    z: C64,
    cfg: &FootConfig,
) -> Result<BoundaryFoot> {
    domain.require_inside(z)?;
    foot_unchecked(domain, z, cfg)
}

/// Foot computation without the membership precondition.
pub(crate) fn foot_unchecked(
    domain: &DomainSpec,
    z: C64,
    cfg: &FootConfig,
) -> Result<BoundaryFoot> {
    match &domain.kind {
        DomainKind::Disc { center, radius } => Ok(circle_foot(z, *center, *radius, true)),
        DomainKind::DiscComplement { center, radius } => {
            Ok(circle_foot(z, *center, *radius, false))
        }
        DomainKind::HalfPlane {
            boundary_point,
            inner_normal,
        } => {
            let d = ((z - boundary_point) * inner_normal.conj()).re;
            Ok(BoundaryFoot {
                foot: z - inner_normal * d,
                distance: d,
                inner_normal: *inner_normal,
                curvature: 0.0,
                unique: true,
            })
        }
        DomainKind::Annulus {
            center,
            r_inner,
            r_outer,
        } => {
            let outer = circle_foot(z, *center, *r_outer, true);
            let inner = circle_foot(z, *center, *r_inner, false);
            let tie = (outer.distance - inner.distance).abs() <= TIE_TOL;
            let mut f = if outer.distance <= inner.distance {
                outer
            } else {
                inner
            };
            f.unique &= !tie;
            Ok(f)
        }
        DomainKind::HalfDisc => {
            let arc = circle_foot(z, C64::new(0.0, 0.0), 1.0, true);
            let x = z.re.clamp(-1.0, 1.0);
            let dia = BoundaryFoot {
                foot: C64::new(x, 0.0),
                distance: (z - C64::new(x, 0.0)).norm(),
                inner_normal: C64::i(),
                curvature: 0.0,
                unique: true,
            };
            let tie = (arc.distance - dia.distance).abs() <= TIE_TOL;
            let mut f = if dia.distance <= arc.distance {
                dia
            } else {
                arc
            };
            f.unique &= !tie;
            Ok(f)
        }
        DomainKind::ConformalImage { .. } | DomainKind::JordanDomain { .. } => {
            pieces_foot(&domain.boundary_pieces(), z, cfg)
        }
    }
}

fn circle_foot(z: C64, center: C64, radius: f64, interior: bool) -> BoundaryFoot {
    let v = z - center;
    let rho = v.norm();
    let (dir, unique) = if rho > 0.0 {
        (v / rho, true)
    } else {
        (C64::new(1.0, 0.0), false)
    };
    if interior {
        BoundaryFoot {
            foot: center + dir * radius,
            distance: radius - rho,
            inner_normal: -dir,
            curvature: 1.0 / radius,
            unique,
        }
    } else {
        BoundaryFoot {
            foot: center + dir * radius,
            distance: rho - radius,
            inner_normal: dir,
            curvature: -1.0 / radius,
            unique,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    piece: usize,
    t: f64,
    foot: C64,
    dist: f64,
}

fn pieces_foot(pieces: &[CurvePiece], z: C64, cfg: &FootConfig) -> Result<BoundaryFoot> {
    let mut cands = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        piece_candidates(p, i, z, cfg, &mut cands)?;
    }
    let best = *cands
        .iter()
        .min_by(|a, b| a.dist.total_cmp(&b.dist))
        .expect("at least one boundary piece");
    let unique = !cands
        .iter()
        .any(|c| (c.dist - best.dist).abs() <= TIE_TOL && (c.foot - best.foot).norm() > SAME_FOOT);
    let piece = &pieces[best.piece];
    let jet = piece.jet(best.t)?;
    let at_end = !piece.is_closed() && (best.t <= 1e-12 || best.t >= 1.0 - 1e-12);
    let inner_normal = if at_end && best.dist > 0.0 {
        (z - best.foot) / best.dist
    } else {
        jet.inner_normal()
    };
    Ok(BoundaryFoot {
        foot: best.foot,
        distance: best.dist,
        inner_normal,
        curvature: jet.curvature(),
        unique,
    })
}

fn piece_candidates(
    p: &CurvePiece,
    idx: usize,
    z: C64,
    cfg: &FootConfig,
    out: &mut Vec<Candidate>,
) -> Result<()> {
    let mut push = |t: f64| -> Result<()> {
        let foot = p.point(t)?;
        out.push(Candidate {
            piece: idx,
            t,
            foot,
            dist: (foot - z).norm(),
        });
        Ok(())
    };
    match p {
        CurvePiece::Segment { start, end } => {
            let d = end - start;
            let t = (((z - start) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
            push(t)?;
        }
        CurvePiece::Line { point, direction } => {
            let s = ((z - point) * direction.conj()).re / direction.norm_sqr();
            push(0.5 + s.atan() / std::f64::consts::PI)?;
        }
        CurvePiece::Arc {
            center,
            radius,
            theta0,
            theta1,
        } => {
            let v = z - center;
            if v.norm() <= 1e-15 * radius {
                push(0.0)?;
                push(0.5)?;
                return Ok(());
            }
            let w = theta1 - theta0;
            let phi = v.arg();
            let two_pi = 2.0 * std::f64::consts::PI;
            // shift phi by multiples of 2 pi into the swept interval
            let lo = theta0.min(*theta1);
            let mut ang = phi;
            while ang < lo {
                ang += two_pi;
            }
            while ang > lo + two_pi {
                ang -= two_pi;
            }
            let t = (ang - theta0) / w;
            if (0.0..=1.0).contains(&t) {
                push(t)?;
            } else if p.is_closed() {
                push(t.rem_euclid(1.0))?;
            }
            if !p.is_closed() {
                push(0.0)?;
                push(1.0)?;
            }
        }
        CurvePiece::Mapped { .. } => mapped_candidates(p, z, cfg, &mut push)?,
    }
    Ok(())
}

fn mapped_candidates(
    p: &CurvePiece,
    z: C64,
    cfg: &FootConfig,
    push: &mut impl FnMut(f64) -> Result<()>,
) -> Result<()> {
    let n = cfg.grid.max(8);
    let closed = p.is_closed();
    let unbounded = p.is_unbounded();
    let ts: Vec<f64> = (0..n)
        .map(|k| {
            if closed {
                k as f64 / n as f64
            } else if unbounded {
                (k as f64 + 0.5) / n as f64
            } else {
                k as f64 / (n - 1) as f64
            }
        })
        .collect();
    let d2 = |t: f64| -> f64 {
        match p.point(t) {
            Ok(w) => (w - z).norm_sqr(),
            Err(_) => f64::INFINITY,
        }
    };
    let vals: Vec<f64> = ts.iter().map(|&t| d2(t)).collect();
    let step = if closed {
        1.0 / n as f64
    } else {
        ts[1] - ts[0]
    };
    for k in 0..n {
        let (prev, next) = if closed {
            (vals[(k + n - 1) % n], vals[(k + 1) % n])
        } else {
            (
                if k == 0 { f64::INFINITY } else { vals[k - 1] },
                if k + 1 == n {
                    f64::INFINITY
                } else {
                    vals[k + 1]
                },
            )
        };
        if !(vals[k] <= prev && vals[k] <= next) || !vals[k].is_finite() {
            continue;
        }
        let (mut a, mut b) = (ts[k] - step, ts[k] + step);
        if !closed {
            let (lo, hi) = if unbounded {
                (1e-15, 1.0 - 1e-15)
            } else {
                (0.0, 1.0)
            };
            a = a.max(lo);
            b = b.min(hi);
        }
        let t = newton_polish(p, z, golden_min(&d2, a, b, cfg.param_tol), a, b);
        let t = if closed { t.rem_euclid(1.0) } else { t };
        push(t)?;
        if !closed && !unbounded {
            if k == 0 {
                push(0.0)?;
            }
            if k + 1 == n {
                push(1.0)?;
            }
        }
    }
    Ok(())
}

/// Newton steps on `Re(conj(gamma - z) gamma') = 0`. Golden section only
/// pins the minimizer to about the square root of the rounding level.
fn newton_polish(p: &CurvePiece, z: C64, t0: f64, a: f64, b: f64) -> f64 {
    let mut t = t0;
    for _ in 0..4 {
        let Ok(j) = p.jet(t) else { break };
        let g = ((j.point - z).conj() * j.d1).re;
        let dg = j.d1.norm_sqr() + ((j.point - z).conj() * j.d2).re;
        if dg <= 0.0 {
            break;
        }
        let next = t - g / dg;
        if !(a..=b).contains(&next) {
            break;
        }
        if next == t {
            break;
        }
        t = next;
    }
    // distances agree to rounding here, so compare the residual instead
    let residual = |s: f64| {
        p.jet(s)
            .map(|j| ((j.point - z).conj() * j.d1).re.abs() / j.d1.norm())
            .unwrap_or(f64::INFINITY)
    };
    if residual(t) <= residual(t0) {
        t
    } else {
        t0
    }
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub(crate) fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    for x in [a, b] {
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    best.0
}

//! Integrated distances `inf over curves of ∫ rho(γ) |dγ|` by path optimization.
//!
//! Stage one finds a shortest path on an 8-connected grid over the box
//! spanned by the endpoints (expanded by their separation). Stage two
//! resamples it to equal metric length and relaxes the nodes by golden-section
//! line searches, doubling the node count level by level. Every result bounds
//! the infimum from above.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use petgraph::algo::astar;
use petgraph::graph::{NodeIndex, UnGraph};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DistanceMethod, DistanceResult};
use crate::domain::{dist_to_boundary, golden_min, DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::metrics::{annulus, density, QuantityId};

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathIntegrand {
    BergmanBeta,
    QuasiHyperbolicInvD,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    /// Grid points per side for the graph stage.
    pub grid: usize,
    /// Node count of the finest polyline level.
    pub max_nodes: usize,
    /// Relaxation stops when a sweep improves the length by less than this
    /// relative amount.
    pub rel_tol: f64,
    pub max_sweeps: usize,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig {
            grid: 256,
            max_nodes: 128,
            rel_tol: 1e-8,
            max_sweeps: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    pub nodes: Vec<C64>,
    pub integrand: PathIntegrand,
    pub length_value: f64,
}

fn gl8() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(8).unwrap())
            .as_node_weight_pairs()
            .into_iter()
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect()
    })
}

/// Density along paths; `+inf` outside the domain.
struct Integrand<'a> {
    domain: &'a DomainSpec,
    kind: PathIntegrand,
}

impl Integrand<'_> {
    fn new(domain: &DomainSpec, kind: PathIntegrand) -> Result<Integrand<'_>> {
        if kind == PathIntegrand::BergmanBeta
            && !domain.is_simply_connected()
            && !matches!(domain.kind, DomainKind::Annulus { .. })
        {
            return Err(Error::UnsupportedQuantity {
                quantity: "bergman_beta".into(),
                domain: domain.name.clone(),
            });
        }
        Ok(Integrand { domain, kind })
    }

    fn at(&self, z: C64) -> f64 {
        let v = match self.kind {
            PathIntegrand::QuasiHyperbolicInvD => {
                dist_to_boundary(self.domain, z).map(|f| 1.0 / f.distance)
            }
            PathIntegrand::BergmanBeta => match &self.domain.kind {
                DomainKind::Annulus {
                    center,
                    r_inner,
                    r_outer,
                } => {
                    let r = (z - center).norm();
                    if *r_inner < r && r < *r_outer {
                        Ok(annulus::series(*center, *r_inner, *r_outer, z).beta())
                    } else {
                        Ok(f64::INFINITY)
                    }
                }
                _ => density(self.domain, z, QuantityId::KobayashiKappa)
                    .map(|m| std::f64::consts::SQRT_2 * m),
            },
        };
        match v {
            Ok(x) if x.is_finite() && x > 0.0 => x,
            _ => f64::INFINITY,
        }
    }

    /// Eight-point Gauss–Legendre length of the segment `[a, b]`.
    fn segment(&self, a: C64, b: C64) -> f64 {
        let len = (b - a).norm();
        if len == 0.0 {
            return 0.0;
        }
        let mut s = 0.0;
        for &(x, w) in gl8() {
            let v = self.at(a + (b - a) * x);
            if !v.is_finite() {
                return f64::INFINITY;
            }
            s += w * v;
        }
        s * len
    }

    fn length(&self, nodes: &[C64]) -> f64 {
        nodes.windows(2).map(|p| self.segment(p[0], p[1])).sum()
    }
}

/// Shortest grid path from `z` to `w`, endpoints included.
fn grid_path(f: &Integrand, z: C64, w: C64, n: usize) -> Result<Vec<C64>> {
    let sep = (z - w).norm();
    let (dlo, dhi) = f.domain.bounding_box(1e6);
    let lo = C64::new(
        (z.re.min(w.re) - sep).max(dlo.re),
        (z.im.min(w.im) - sep).max(dlo.im),
    );
    let hi = C64::new(
        (z.re.max(w.re) + sep).min(dhi.re),
        (z.im.max(w.im) + sep).min(dhi.im),
    );
    let step = C64::new(
        (hi.re - lo.re) / (n - 1) as f64,
        (hi.im - lo.im) / (n - 1) as f64,
    );
    let point =
        |i: usize, j: usize| C64::new(lo.re + i as f64 * step.re, lo.im + j as f64 * step.im);
    let weights: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| f.at(point(k / n, k % n)))
        .collect();
    let mut g = UnGraph::<(), f64>::with_capacity(n * n + 2, 4 * n * n);
    for _ in 0..n * n {
        g.add_node(());
    }
    let idx = |i: usize, j: usize| NodeIndex::new(i * n + j);
    for i in 0..n {
        for j in 0..n {
            let wa = weights[i * n + j];
            if !wa.is_finite() {
                continue;
            }
            for (di, dj) in [(1usize, 0isize), (0, 1), (1, 1), (1, -1)] {
                let (ii, jj) = (i + di, j as isize + dj);
                if ii >= n || jj < 0 || jj as usize >= n {
                    continue;
                }
                let wb = weights[ii * n + jj as usize];
                if wb.is_finite() {
                    let len = (point(ii, jj as usize) - point(i, j)).norm();
                    g.add_edge(idx(i, j), idx(ii, jj as usize), 0.5 * (wa + wb) * len);
                }
            }
        }
    }
    let nearest = |p: C64| {
        (0..n * n)
            .filter(|&k| weights[k].is_finite())
            .min_by(|&a, &b| {
                let da = (point(a / n, a % n) - p).norm();
                let db = (point(b / n, b % n) - p).norm();
                da.total_cmp(&db)
            })
    };
    let (Some(s), Some(t)) = (nearest(z), nearest(w)) else {
        return Err(Error::Resolution { resolution: n });
    };
    let (_, route) = astar(
        &g,
        NodeIndex::new(s),
        |v| v == NodeIndex::new(t),
        |e| *e.weight(),
        |_| 0.0,
    )
    .ok_or(Error::Resolution { resolution: n })?;
    let mut out = vec![z];
    for v in route {
        let k = v.index();
        out.push(point(k / n, k % n));
    }
    out.push(w);
    // endpoints may sit closer to each other than to their grid nodes
    if f.length(&out) > f.segment(z, w) {
        return Ok(vec![z, w]);
    }
    Ok(out)
}

/// `m + 1` nodes spaced evenly in metric length along `path`.
fn resample(f: &Integrand, path: &[C64], m: usize) -> Vec<C64> {
    let seg: Vec<f64> = path.windows(2).map(|p| f.segment(p[0], p[1])).collect();
    let total: f64 = seg.iter().sum();
    let mut out = vec![path[0]];
    let mut acc = 0.0;
    let mut k = 0;
    for i in 1..m {
        let target = total * i as f64 / m as f64;
        while k < seg.len() - 1 && acc + seg[k] < target {
            acc += seg[k];
            k += 1;
        }
        let frac = if seg[k] > 0.0 {
            ((target - acc) / seg[k]).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(path[k] + (path[k + 1] - path[k]) * frac);
    }
    out.push(*path.last().unwrap());
    out
}

/// Best position for interior node `i` by line searches along the local
/// normal and tangent.
fn relax_node(f: &Integrand, prev: C64, cur: C64, next: C64) -> C64 {
    let chord = next - prev;
    if chord.norm() == 0.0 {
        return cur;
    }
    let t = chord / chord.norm();
    let h = 0.5 * (cur - prev).norm().min((next - cur).norm());
    if h == 0.0 {
        return cur;
    }
    let mut p = cur;
    for dir in [C64::i() * t, t] {
        let cost = |s: f64| {
            let q = p + dir * s;
            f.segment(prev, q) + f.segment(q, next)
        };
        let s = golden_min(&cost, -h, h, 1e-7 * h);
        if cost(s) < cost(0.0) {
            p += dir * s;
        }
    }
    p
}

/// Red-black sweeps over the interior nodes until the length stalls.
fn relax(f: &Integrand, nodes: &mut [C64], cfg: &PathConfig) -> (f64, usize) {
    let mut len = f.length(nodes);
    let mut sweeps = 0;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        for parity in [1usize, 2] {
            let updates: Vec<(usize, C64)> = (parity..nodes.len() - 1)
                .step_by(2)
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|i| (i, relax_node(f, nodes[i - 1], nodes[i], nodes[i + 1])))
                .collect();
            for (i, p) in updates {
                nodes[i] = p;
            }
        }
        let new = f.length(nodes);
        let improved = len - new;
        len = new.min(len);
        if improved <= cfg.rel_tol * len {
            break;
        }
    }
    (len, sweeps)
}

fn refine(nodes: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(2 * nodes.len() - 1);
    for p in nodes.windows(2) {
        out.push(p[0]);
        out.push(0.5 * (p[0] + p[1]));
    }
    out.push(*nodes.last().unwrap());
    out
}

/// Optimized polyline and its length.
pub fn optimize_path(
    domain: &DomainSpec,
    z: C64,
    w: C64,
    integrand: PathIntegrand,
    cfg: &PathConfig,
) -> Result<(PathPolyline, DistanceResult)> {
    domain.require_inside(z)?;
    domain.require_inside(w)?;
    let f = Integrand::new(domain, integrand)?;
    if z == w {
        let poly = PathPolyline {
            nodes: vec![z, w],
            integrand,
            length_value: 0.0,
        };
        let res = DistanceResult {
            value: 0.0,
            method: DistanceMethod::PathOpt,
            upper_bound: true,
            iterations: 0,
            tolerance: 0.0,
        };
        return Ok((poly, res));
    }
    let coarse = grid_path(&f, z, w, cfg.grid.max(3))?;
    let mut nodes = resample(&f, &coarse, 8);
    let mut iterations = 0;
    let (mut len, it) = relax(&f, &mut nodes, cfg);
    iterations += it;
    let mut tolerance = f64::INFINITY;
    while nodes.len() - 1 < cfg.max_nodes {
        nodes = refine(&nodes);
        let (l, it) = relax(&f, &mut nodes, cfg);
        iterations += it;
        tolerance = (len - l).abs();
        len = l;
    }
    if !len.is_finite() {
        return Err(Error::Resolution {
            resolution: cfg.grid,
        });
    }
    let poly = PathPolyline {
        nodes,
        integrand,
        length_value: len,
    };
    let res = DistanceResult {
        value: len,
        method: DistanceMethod::PathOpt,
        upper_bound: true,
        iterations,
        tolerance,
    };
    Ok((poly, res))
}

/// Quasi-hyperbolic distance, the integrated form of `1 / d_D`.
pub fn quasi_hyperbolic_dist(
    domain: &DomainSpec,
    z: C64,
    w: C64,
    cfg: &PathConfig,
) -> Result<DistanceResult> {
    Ok(optimize_path(domain, z, w, PathIntegrand::QuasiHyperbolicInvD, cfg)?.1)
}

/// Bergman distance, the integrated form of `beta`.
pub fn bergman_dist(
    domain: &DomainSpec,
    z: C64,
    w: C64,
    cfg: &PathConfig,
) -> Result<DistanceResult> {
    Ok(optimize_path(domain, z, w, PathIntegrand::BergmanBeta, cfg)?.1)
}

/// Length of a given polyline under the chosen integrand.
pub fn polyline_length(
    domain: &DomainSpec,
    nodes: &[C64],
    integrand: PathIntegrand,
) -> Result<f64> {
    Ok(Integrand::new(domain, integrand)?.length(nodes))
}

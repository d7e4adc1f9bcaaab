//! Numerical Riemann map of a Jordan domain through the Szegő kernel.
//!
//! The boundary values `s(z) = S(z, a)` solve the second-kind equation
//!
//! ```text
//! s(z) + ∫ A(z, w) s(w) |dw| = conj(H(a, z)),   z on the boundary,
//! H(z, w) = T(w) / (2πi (w - z)),   A(z, w) = conj(H(w, z)) - H(z, w),
//! ```
//!
//! discretized with the periodic trapezoid rule (one closed piece) or a
//! graded midpoint rule (several pieces, grading exponent 3 at every joint).
//! The map is `f' = 2π S(·, a)^2 / S(a, a)` with boundary values
//! `f = -i T s / conj(s)`; interior values use the barycentric Cauchy formula,
//! which stays accurate up to the boundary.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::domain::{DomainKind, DomainSpec, FootConfig};
use crate::error::{Error, Result};

type C64 = Complex64;

/// Condition estimates above this attach an accuracy warning.
pub const CONDITION_LIMIT: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct RiemannSolve {
    pub domain: DomainSpec,
    pub base_point: C64,
    pub n_nodes: usize,
    pub(crate) nodes: Vec<C64>,
    pub(crate) dz: Vec<C64>,
    pub(crate) szego: Vec<C64>,
    pub(crate) boundary_map: Vec<C64>,
    pub(crate) szego_aa: f64,
    /// Max-norm residual of the discrete system.
    pub residual: f64,
    /// Upper bound on the 2-norm condition number of the symmetrized system.
    pub condition_estimate: f64,
    /// Max change of interior map values against a half-resolution solve.
    pub error_estimate: f64,
    pub warning: Option<String>,
}

/// Boundary nodes with complex weights `gamma'(t) dt`.
fn discretize(domain: &DomainSpec, n_nodes: usize) -> Result<(Vec<C64>, Vec<C64>)> {
    let pieces = domain.boundary_pieces();
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut dz = Vec::with_capacity(n_nodes);
    if pieces.len() == 1 && pieces[0].is_closed() {
        let p = &pieces[0];
        for k in 0..n_nodes {
            let j = p.regular_jet(k as f64 / n_nodes as f64)?;
            nodes.push(j.point);
            dz.push(j.d1 / n_nodes as f64);
        }
        return Ok((nodes, dz));
    }
    let lengths: Vec<f64> = pieces.iter().map(|p| p.approx_length()).collect();
    let total: f64 = lengths.iter().sum();
    let mut counts: Vec<usize> = lengths
        .iter()
        .map(|l| ((l / total) * n_nodes as f64).round().max(8.0) as usize)
        .collect();
    // put the rounding surplus or deficit on the longest piece
    let sum: usize = counts.iter().sum();
    let longest = (0..counts.len())
        .max_by(|&i, &j| lengths[i].total_cmp(&lengths[j]))
        .unwrap_or(0);
    counts[longest] = (counts[longest] + n_nodes).saturating_sub(sum).max(8);
    for (p, &m) in pieces.iter().zip(&counts) {
        for k in 0..m {
            let s = (k as f64 + 0.5) / m as f64;
            let (t, dt) = grade(s);
            let j = p.jet(t)?;
            nodes.push(j.point);
            dz.push(j.d1 * (dt / m as f64));
        }
    }
    Ok((nodes, dz))
}

/// Graded substitution `t = s^3 / (s^3 + (1-s)^3)` and its derivative.
fn grade(s: f64) -> (f64, f64) {
    let a = s * s * s;
    let b = (1.0 - s) * (1.0 - s) * (1.0 - s);
    let den = a + b;
    let t = a / den;
    let dt = 3.0 * s * s * (1.0 - s) * (1.0 - s) / (den * den);
    (t, dt)
}

/// Interior point of maximal boundary distance on a 32 x 32 grid.
pub fn default_base_point(domain: &DomainSpec) -> Result<C64> {
    let (lo, hi) = domain.bounding_box(1.0);
    let n = 32;
    let cfg = FootConfig {
        grid: 256,
        ..FootConfig::default()
    };
    let mut best = None::<(C64, f64)>;
    for i in 0..n {
        for j in 0..n {
            let z = C64::new(
                lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / n as f64,
                lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / n as f64,
            );
            if !domain.contains(z)? {
                continue;
            }
            let d = crate::domain::dist_to_boundary_with(domain, z, &cfg)?.distance;
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((z, d));
            }
        }
    }
    best.map(|b| b.0).ok_or_else(|| {
        Error::InvalidDomain(format!("{}: no interior grid point found", domain.name))
    })
}

impl RiemannSolve {
    pub fn new(domain: &DomainSpec, base_point: C64, n_nodes: usize) -> Result<Self> {
        if !matches!(domain.kind, DomainKind::JordanDomain { .. }) {
            return Err(Error::Precondition(format!(
                "riemann_map needs a JordanDomain, got `{}`",
                domain.name
            )));
        }
        if n_nodes < 16 {
            return Err(Error::Precondition(format!("n_nodes {n_nodes} < 16")));
        }
        domain.require_inside(base_point)?;
        let mut solve = Self::solve_only(domain, base_point, n_nodes)?;
        let coarse = Self::solve_only(domain, base_point, n_nodes / 2)?;
        let probes = solve.probe_points()?;
        solve.error_estimate = probes
            .iter()
            .map(|&z| (solve.eval(z) - coarse.eval(z)).norm())
            .fold(1e-15, f64::max);
        Ok(solve)
    }

    fn solve_only(domain: &DomainSpec, a: C64, n_nodes: usize) -> Result<Self> {
        let (nodes, dz) = discretize(domain, n_nodes)?;
        let n = nodes.len();
        let ds: Vec<f64> = dz.iter().map(|w| w.norm()).collect();
        let tan: Vec<C64> = dz.iter().zip(&ds).map(|(w, s)| w / *s).collect();
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        let mut m = DMatrix::<C64>::identity(n, n);
        let mut frob = 0.0;
        for j in 0..n {
            for k in 0..n {
                if j == k || ds[k] == 0.0 {
                    continue;
                }
                let h_jk = dz[k] / (two_pi_i * (nodes[k] - nodes[j]));
                let h_kj_conj = (tan[j] / (two_pi_i * (nodes[j] - nodes[k]))).conj() * ds[k];
                let a = h_kj_conj - h_jk;
                m[(j, k)] += a;
                // symmetrized entry sqrt(ds_j) A sqrt(ds_k)
                if ds[j] > 0.0 {
                    frob += a.norm_sqr() * ds[j] / ds[k];
                }
            }
        }
        let rhs = DVector::from_iterator(
            n,
            (0..n).map(|j| (tan[j] / (two_pi_i * (nodes[j] - a))).conj()),
        );
        let x = m
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Solver("singular Nyström matrix".into()))?;
        let residual = (&m * &x - &rhs)
            .iter()
            .map(|r| r.norm())
            .fold(0.0, f64::max);
        if !residual.is_finite() {
            return Err(Error::Solver("non-finite solution".into()));
        }
        let szego: Vec<C64> = x.iter().cloned().collect();
        let s_aa: C64 = (0..n)
            .map(|k| dz[k] * szego[k] / (two_pi_i * (nodes[k] - a)))
            .sum();
        if !(s_aa.re > 0.0) {
            return Err(Error::Solver(format!("S(a,a) = {s_aa} is not positive")));
        }
        let boundary_map = (0..n)
            .map(|j| {
                if ds[j] == 0.0 {
                    C64::new(0.0, 0.0)
                } else {
                    -C64::i() * tan[j] * szego[j] / szego[j].conj()
                }
            })
            .collect();
        let condition_estimate = (1.0 + frob).sqrt();
        let warning = (condition_estimate > CONDITION_LIMIT).then(|| {
            format!("condition estimate {condition_estimate:e} exceeds {CONDITION_LIMIT:e}")
        });
        Ok(RiemannSolve {
            domain: domain.clone(),
            base_point: a,
            n_nodes,
            nodes,
            dz,
            szego,
            boundary_map,
            szego_aa: s_aa.re,
            residual,
            condition_estimate,
            error_estimate: 0.0,
            warning,
        })
    }

    fn probe_points(&self) -> Result<Vec<C64>> {
        let mut out = Vec::new();
        let n = self.nodes.len();
        for j in 0..32 {
            let w = self.nodes[j * n / 32];
            for s in [0.5, 0.9] {
                let z = self.base_point + (w - self.base_point) * s;
                if self.domain.contains(z)? {
                    out.push(z);
                }
            }
        }
        Ok(out)
    }

    fn barycentric(&self, z: C64, vals: &[C64]) -> C64 {
        let mut num = C64::new(0.0, 0.0);
        let mut den = C64::new(0.0, 0.0);
        for ((zj, wj), vj) in self.nodes.iter().zip(&self.dz).zip(vals) {
            let diff = zj - z;
            if diff.norm() == 0.0 {
                return *vj;
            }
            let r = wj / diff;
            num += r * vj;
            den += r;
        }
        num / den
    }

    /// Riemann map value at an interior point.
    pub fn eval(&self, z: C64) -> C64 {
        self.barycentric(z, &self.boundary_map)
    }

    /// Riemann map value and derivative at an interior point.
    pub fn eval_with_deriv(&self, z: C64) -> (C64, C64) {
        let s = self.barycentric(z, &self.szego);
        (self.eval(z), 2.0 * PI * s * s / self.szego_aa)
    }

    /// Hyperbolic density `|f'| / (1 - |f|^2)` pulled back from the unit disc.
    pub fn density(&self, z: C64) -> f64 {
        let (f, d) = self.eval_with_deriv(z);
        d.norm() / (1.0 - f.norm_sqr())
    }

    pub fn derivative_at_base(&self) -> f64 {
        2.0 * PI * self.szego_aa
    }

    /// Boundary nodes of the discretization.
    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }
}

/// Solves for the Riemann map of a Jordan domain.
pub fn riemann_map(domain: &DomainSpec, base_point: C64, n_nodes: usize) -> Result<RiemannSolve> {
    RiemannSolve::new(domain, base_point, n_nodes)
}

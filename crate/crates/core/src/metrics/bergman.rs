//! Variational Bergman kernel: monomials orthonormalized in `L^2` of the
//! domain under an explicit area quadrature.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::domain::{DomainKind, DomainSpec};
use crate::error::{Error, Result};

type C64 = Complex64;

/// Default radial Gauss–Legendre nodes.
pub const RADIAL_NODES: usize = 64;
/// Default angular trapezoid nodes.
pub const ANGULAR_NODES: usize = 256;
/// Cholesky pivots below this fraction of the Gram diagonal count as singular.
const PIVOT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct BergmanBasis {
    pub domain: DomainSpec,
    pub degree: usize,
    /// Lowest monomial power: `0` for discs, `-degree` for annuli.
    pub min_power: i64,
    center: C64,
    scale: f64,
    /// Quadrature points and weights over the domain.
    pub quadrature: Vec<(C64, f64)>,
    /// Lower-triangular `L^-1` with `Gram = L L^*`; row `k` holds the
    /// coefficients of the k-th orthonormal function.
    pub coefficients: DMatrix<C64>,
    /// Max-norm deviation of the orthonormalized Gram matrix from the identity.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    /// `|phi_last(z)|^2 / K(z)` over the outermost basis functions.
    pub last_term_ratio: f64,
    pub truncation_warning: bool,
}

fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n).expect("node count is positive");
    GaussLegendre::new(n)
        .as_node_weight_pairs()
        .into_iter()
        .map(|(x, w)| (0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w))
        .collect()
}

/// Polar quadrature of the disc `{|z - c| < r}`.
fn disc_quadrature(center: C64, r: f64, n_rad: usize, n_ang: usize) -> Vec<(C64, f64)> {
    let mut out = Vec::with_capacity(n_rad * n_ang);
    for (rho, w) in gauss_legendre(n_rad, 0.0, r) {
        for j in 0..n_ang {
            let th = 2.0 * PI * j as f64 / n_ang as f64;
            out.push((
                center + C64::from_polar(rho, th),
                w * rho * 2.0 * PI / n_ang as f64,
            ));
        }
    }
    out
}

/// Log-polar quadrature of an annulus, exact enough for `|z|^(2n)` with
/// large negative `n`.
fn annulus_quadrature(
    center: C64,
    r_in: f64,
    r_out: f64,
    n_rad: usize,
    n_ang: usize,
) -> Vec<(C64, f64)> {
    let mut out = Vec::with_capacity(n_rad * n_ang);
    for (s, w) in gauss_legendre(n_rad, r_in.ln(), r_out.ln()) {
        let rho = s.exp();
        for j in 0..n_ang {
            let th = 2.0 * PI * j as f64 / n_ang as f64;
            out.push((
                center + C64::from_polar(rho, th),
                w * rho * rho * 2.0 * PI / n_ang as f64,
            ));
        }
    }
    out
}

/// Area quadrature, monomial center and monomial scale for a bounded domain.
fn quadrature(
    domain: &DomainSpec,
    n_rad: usize,
    n_ang: usize,
) -> Result<(Vec<(C64, f64)>, C64, f64, i64)> {
    match &domain.kind {
        DomainKind::Disc { center, radius } => Ok((
            disc_quadrature(*center, *radius, n_rad, n_ang),
            *center,
            *radius,
            1,
        )),
        DomainKind::Annulus {
            center,
            r_inner,
            r_outer,
        } => Ok((
            annulus_quadrature(*center, *r_inner, *r_outer, n_rad, n_ang),
            *center,
            *r_outer,
            -1,
        )),
        DomainKind::ConformalImage { base, map } => {
            let DomainKind::Disc { center, radius } = &base.kind else {
                return Err(Error::Precondition(format!(
                    "Bergman quadrature needs a disc base, `{}` has none",
                    domain.name
                )));
            };
            let mut pts = Vec::with_capacity(n_rad * n_ang);
            for (zeta, w) in disc_quadrature(*center, *radius, n_rad, n_ang) {
                let j = map.jet(zeta)?;
                pts.push((j.value, w * j.d1.norm_sqr()));
            }
            let c = map.eval(*center)?;
            let scale = pts.iter().map(|(z, _)| (z - c).norm()).fold(0.0, f64::max);
            Ok((pts, c, scale, 1))
        }
        _ => Err(Error::Precondition(format!(
            "no Bergman area quadrature for `{}`",
            domain.name
        ))),
    }
}

/// Cholesky factor, or `None` when a pivot falls below `PIVOT_FLOOR` times
/// its Gram diagonal entry.
fn stable_cholesky(gram: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    let l = gram.clone().cholesky()?.l();
    (0..gram.nrows())
        .all(|i| l[(i, i)].re * l[(i, i)].re > PIVOT_FLOOR * gram[(i, i)].re)
        .then_some(l)
}

/// Orthonormal basis from monomials up to `degree` (annulus: `-degree..=degree`).
pub fn bergman_basis(domain: &DomainSpec, degree: usize, quad_size: usize) -> Result<BergmanBasis> {
    bergman_basis_with(domain, degree, RADIAL_NODES, quad_size)
}

pub fn bergman_basis_with(
    domain: &DomainSpec,
    degree: usize,
    n_rad: usize,
    n_ang: usize,
) -> Result<BergmanBasis> {
    let (quadrature, center, scale, sign) = quadrature(domain, n_rad, n_ang)?;
    let min_power = if sign < 0 { -(degree as i64) } else { 0 };
    let powers: Vec<i64> = (min_power..=degree as i64).collect();
    let n = powers.len();
    let mut gram = DMatrix::<C64>::zeros(n, n);
    let mut row = vec![C64::new(0.0, 0.0); n];
    for (z, w) in &quadrature {
        let u = (z - center) / scale;
        for (slot, &p) in row.iter_mut().zip(&powers) {
            *slot = u.powi(p as i32);
        }
        for j in 0..n {
            let a = row[j] * *w;
            for k in 0..=j {
                gram[(j, k)] += a * row[k].conj();
            }
        }
    }
    for j in 0..n {
        for k in 0..j {
            gram[(k, j)] = gram[(j, k)].conj();
        }
    }
    let Some(l) = stable_cholesky(&gram) else {
        // largest symmetric (annulus) or leading (disc) block that factors
        let stable = (0..degree)
            .rev()
            .find(|&k| {
                let (lo, len) = if sign < 0 {
                    (degree - k, 2 * k + 1)
                } else {
                    (0, k + 1)
                };
                stable_cholesky(&gram.view((lo, lo), (len, len)).into_owned()).is_some()
            })
            .unwrap_or(0);
        return Err(Error::DegreeReduction {
            requested: degree,
            stable,
        });
    };
    let coefficients = l
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::Solver("triangular solve failed".into()))?;
    let ortho = &coefficients * &gram * coefficients.adjoint();
    let residual = (&ortho - DMatrix::<C64>::identity(n, n))
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    Ok(BergmanBasis {
        domain: domain.clone(),
        degree,
        min_power,
        center,
        scale,
        quadrature,
        coefficients,
        residual,
    })
}

impl BergmanBasis {
    /// Values and derivatives of the orthonormal functions at `z`.
    pub fn eval(&self, z: C64) -> (Vec<C64>, Vec<C64>) {
        let n = self.coefficients.nrows();
        let u = (z - self.center) / self.scale;
        let mut m = Vec::with_capacity(n);
        let mut dm = Vec::with_capacity(n);
        for i in 0..n {
            let p = self.min_power + i as i64;
            m.push(u.powi(p as i32));
            dm.push(if p == 0 {
                C64::new(0.0, 0.0)
            } else {
                u.powi(p as i32 - 1) * (p as f64 / self.scale)
            });
        }
        let mut phi = vec![C64::new(0.0, 0.0); n];
        let mut dphi = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            for j in 0..=k {
                let c = self.coefficients[(k, j)];
                phi[k] += c * m[j];
                dphi[k] += c * dm[j];
            }
        }
        (phi, dphi)
    }

    /// Integral of the constant 1 under the quadrature.
    pub fn area(&self) -> f64 {
        self.quadrature.iter().map(|(_, w)| w).sum()
    }
}

fn check_inside(basis: &BergmanBasis, z: C64) -> Result<()> {
    basis.domain.require_inside(z)
}

/// `K(z) = sum |phi_k(z)|^2` with a truncation indicator.
pub fn kernel_diag(domain: &DomainSpec, z: C64, basis: &BergmanBasis) -> Result<KernelValue> {
    if &basis.domain != domain {
        return Err(Error::Precondition(
            "basis belongs to another domain".into(),
        ));
    }
    check_inside(basis, z)?;
    let (phi, _) = basis.eval(z);
    let value: f64 = phi.iter().map(|p| p.norm_sqr()).sum();
    let mut last = phi.last().map_or(0.0, |p| p.norm_sqr());
    if basis.min_power < 0 {
        last = last.max(phi[0].norm_sqr());
    }
    let last_term_ratio = last / value;
    Ok(KernelValue {
        value,
        last_term_ratio,
        truncation_warning: !(last_term_ratio < 1e-8),
    })
}

/// `M(z; 1)` from `M^2 = S11 - |S10|^2 / S00`.
pub fn metric_m(domain: &DomainSpec, z: C64, basis: &BergmanBasis) -> Result<f64> {
    if &basis.domain != domain {
        return Err(Error::Precondition(
            "basis belongs to another domain".into(),
        ));
    }
    check_inside(basis, z)?;
    let (phi, dphi) = basis.eval(z);
    let s00: f64 = phi.iter().map(|p| p.norm_sqr()).sum();
    let s10: C64 = dphi.iter().zip(&phi).map(|(d, p)| d * p.conj()).sum();
    let s11: f64 = dphi.iter().map(|d| d.norm_sqr()).sum();
    Ok((s11 - s10.norm_sqr() / s00).max(0.0).sqrt())
}

//! Pointwise invariant densities: Carathéodory, Kobayashi and the two
//! Bergman-derived quantities, all normalized so the unit disc has density
//! `1 / (1 - |z|^2)`.

pub mod annulus;
mod bergman;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::cache::solve_for_domain;
use crate::domain::{DomainKind, DomainSpec};
use crate::error::{Error, Result};

pub use bergman::{
    bergman_basis, kernel_diag, metric_m, BergmanBasis, KernelValue, ANGULAR_NODES, RADIAL_NODES,
};

type C64 = Complex64;

/// Default node count for numerical Riemann maps behind Jordan domains.
pub const DEFAULT_RIEMANN_NODES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityId {
    CaratheodoryGamma,
    KobayashiKappa,
    /// `beta / sqrt(2)`.
    BergmanBetaScaled,
    /// `sqrt(pi K)`.
    KernelSqrtScaled,
}

impl QuantityId {
    pub const ALL: [QuantityId; 4] = [
        QuantityId::CaratheodoryGamma,
        QuantityId::KobayashiKappa,
        QuantityId::BergmanBetaScaled,
        QuantityId::KernelSqrtScaled,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QuantityId::CaratheodoryGamma => "caratheodory_gamma",
            QuantityId::KobayashiKappa => "kobayashi_kappa",
            QuantityId::BergmanBetaScaled => "bergman_beta_scaled",
            QuantityId::KernelSqrtScaled => "kernel_sqrt_scaled",
        }
    }
}

impl fmt::Display for QuantityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QuantityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        QuantityId::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown quantity `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricMethod {
    ClosedForm,
    Pullback,
    Covering,
    Gram,
    Series,
}

impl MetricMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricMethod::ClosedForm => "closed_form",
            MetricMethod::Pullback => "pullback",
            MetricMethod::Covering => "covering",
            MetricMethod::Gram => "gram",
            MetricMethod::Series => "series",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub point: C64,
    pub quantity: QuantityId,
    pub value: f64,
    pub uncertainty: f64,
    pub method: MetricMethod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityConfig {
    pub riemann_nodes: usize,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig {
            riemann_nodes: DEFAULT_RIEMANN_NODES,
        }
    }
}

pub fn density(domain: &DomainSpec, z: C64, q: QuantityId) -> Result<f64> {
    Ok(density_with(domain, z, q, &DensityConfig::default())?.value)
}

pub fn density_with(
    domain: &DomainSpec,
    z: C64,
    q: QuantityId,
    cfg: &DensityConfig,
) -> Result<MetricSample> {
    domain.require_inside(z)?;
    let sample = |value: f64, uncertainty: f64, method: MetricMethod| MetricSample {
        point: z,
        quantity: q,
        value,
        uncertainty,
        method,
    };
    Ok(match &domain.kind {
        DomainKind::Annulus {
            center,
            r_inner,
            r_outer,
        } => match q {
            QuantityId::CaratheodoryGamma => {
                return Err(Error::UnsupportedQuantity {
                    quantity: q.to_string(),
                    domain: domain.name.clone(),
                })
            }
            QuantityId::KobayashiKappa => sample(
                annulus::kappa(*center, *r_inner, *r_outer, z),
                0.0,
                MetricMethod::Covering,
            ),
            QuantityId::BergmanBetaScaled => {
                let s = annulus::series(*center, *r_inner, *r_outer, z);
                sample(s.m / (2.0 * s.k).sqrt(), 0.0, MetricMethod::Series)
            }
            QuantityId::KernelSqrtScaled => {
                let s = annulus::series(*center, *r_inner, *r_outer, z);
                sample(
                    (std::f64::consts::PI * s.k).sqrt(),
                    0.0,
                    MetricMethod::Series,
                )
            }
        },
        DomainKind::DiscComplement { center, radius } => {
            let r = *radius;
            let d = (z - center).norm() - r;
            let v = match q {
                QuantityId::KobayashiKappa => {
                    let x = d / r;
                    1.0 / (r * 2.0 * (1.0 + x) * x.ln_1p())
                }
                _ => r / (d * (2.0 * r + d)),
            };
            sample(v, 0.0, MetricMethod::ClosedForm)
        }
        DomainKind::ConformalImage { base, map } => {
            let pre = domain.preimage(z)?;
            let m = simply_connected_closed_form(base, pre)?;
            sample(m / map.deriv(pre)?.norm(), 0.0, MetricMethod::Pullback)
        }
        DomainKind::JordanDomain { .. } => {
            let solve = solve_for_domain(domain, cfg.riemann_nodes)?;
            let (f, df) = solve.eval_with_deriv(z);
            let one_minus = 1.0 - f.norm_sqr();
            let m = df.norm() / one_minus;
            let unc = solve.error_estimate * m * (2.0 / one_minus + 1.0 / df.norm());
            sample(m, unc, MetricMethod::Pullback)
        }
        _ => sample(
            simply_connected_closed_form(domain, z)?,
            0.0,
            MetricMethod::ClosedForm,
        ),
    })
}

/// Hyperbolic density of the model simply connected domains.
fn simply_connected_closed_form(domain: &DomainSpec, z: C64) -> Result<f64> {
    Ok(match &domain.kind {
        DomainKind::Disc { center, radius } => {
            let r = *radius;
            let d = r - (z - center).norm();
            r / (d * (2.0 * r - d))
        }
        DomainKind::HalfPlane {
            boundary_point,
            inner_normal,
        } => 0.5 / ((z - boundary_point) * inner_normal.conj()).re,
        DomainKind::HalfDisc => half_disc_density(z),
        _ => {
            return Err(Error::Precondition(format!(
                "`{}` has no closed-form density",
                domain.name
            )))
        }
    })
}

/// `|1 - z^2| / (2 y (1 - |z|^2))`, the pullback of the half-plane density
/// under `((z + 1) / (z - 1))^2`.
fn half_disc_density(z: C64) -> f64 {
    let r = z.norm();
    (1.0 - z * z).norm() / (2.0 * z.im * (1.0 - r) * (1.0 + r))
}

/// Gap between the half-disc and half-plane densities together with its
/// upper bound `|z| / (1 - |z|^2)`.
pub fn lemma_l_gap(z: C64) -> Result<(f64, f64)> {
    if !(z.im > 0.0 && z.norm() < 1.0) {
        return Err(Error::OutsideDomain {
            domain: "half-disc".into(),
            z,
        });
    }
    // m_half_disc - 1/(2y) = (|1 - z^2| - (1 - |z|^2)) / (2y(1 - |z|^2)), and
    // |1 - z^2|^2 - (1 - |z|^2)^2 = 4y^2
    let r = z.norm();
    let one_minus = (1.0 - r) * (1.0 + r);
    let a = (1.0 - z * z).norm();
    let gap = 2.0 * z.im / ((a + one_minus) * one_minus);
    Ok((gap, r / one_minus))
}

//! Explicit conformal maps with first and second derivatives and Newton inversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};

type C64 = Complex64;

/// Value, first and second derivative of a map at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

/// A conformal map. `Composition` applies its maps in list order, so
/// `[g, h]` evaluates `h(g(z))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum MapSpec {
    Moebius {
        a: C64,
        b: C64,
        c: C64,
        d: C64,
    },
    /// `z -> ((z+1)/(z-1))^2`, the upper half-disc onto the upper half-plane.
    #[serde(rename = "Square_of_Cayley")]
    SquareOfCayley,
    /// `z -> z - z^(1+eps)/4` with the principal branch.
    PowerPerturb {
        eps: f64,
    },
    Affine {
        a: C64,
        b: C64,
    },
    Exp,
    /// `z -> sum_k coeffs[k] z^k`.
    Polynomial {
        coeffs: Vec<C64>,
    },
    Composition {
        maps: Vec<MapSpec>,
    },
    /// Riemann map of a Jordan domain onto the unit disc, normalized by
    /// `f(base_point) = 0`, `f'(base_point) > 0`.
    NumericalRiemann {
        domain: Box<DomainSpec>,
        base_point: C64,
        n_nodes: usize,
    },
}

const FD_STEP: f64 = 1e-6;

impl MapSpec {
    pub fn identity() -> Self {
        MapSpec::Moebius {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
            c: C64::new(0.0, 0.0),
            d: C64::new(1.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MapSpec::Moebius { a, b, c, d } => {
                if (a * d - b * c).norm() == 0.0 {
                    return Err(Error::InvalidMap("Moebius map with ad - bc = 0".into()));
                }
            }
            MapSpec::PowerPerturb { eps } => {
                if !(*eps > 0.0 && *eps < 1.0) {
                    return Err(Error::InvalidMap(format!(
                        "PowerPerturb eps {eps} not in (0,1)"
                    )));
                }
            }
            MapSpec::Affine { a, .. } => {
                if a.norm() == 0.0 {
                    return Err(Error::InvalidMap("Affine map with a = 0".into()));
                }
            }
            MapSpec::Polynomial { coeffs } => {
                if coeffs.len() < 2 || coeffs[1..].iter().all(|c| c.norm() == 0.0) {
                    return Err(Error::InvalidMap("constant polynomial".into()));
                }
            }
            MapSpec::Composition { maps } => {
                if maps.is_empty() {
                    return Err(Error::InvalidMap("empty composition".into()));
                }
                for m in maps {
                    m.validate()?;
                }
            }
            MapSpec::NumericalRiemann {
                domain, n_nodes, ..
            } => {
                domain.validate()?;
                if *n_nodes < 16 {
                    return Err(Error::InvalidMap(
                        "NumericalRiemann needs at least 16 nodes".into(),
                    ));
                }
            }
            MapSpec::SquareOfCayley | MapSpec::Exp => {}
        }
        Ok(())
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        Ok(self.jet(z)?.value)
    }

    pub fn deriv(&self, z: C64) -> Result<C64> {
        Ok(self.jet(z)?.d1)
    }

    pub fn jet(&self, z: C64) -> Result<Jet> {
        let one = C64::new(1.0, 0.0);
        match self {
            MapSpec::Moebius { a, b, c, d } => {
                let den = c * z + d;
                if den.norm() == 0.0 {
                    return Err(Error::Precondition(format!(
                        "{z} is the pole of the Moebius map"
                    )));
                }
                let det = a * d - b * c;
                Ok(Jet {
                    value: (a * z + b) / den,
                    d1: det / (den * den),
                    d2: -2.0 * c * det / (den * den * den),
                })
            }
            MapSpec::SquareOfCayley => {
                let zm = z - one;
                if zm.norm() == 0.0 {
                    return Err(Error::Precondition(
                        "Square_of_Cayley has a pole at 1".into(),
                    ));
                }
                let u = (z + one) / zm;
                let u1 = -2.0 / (zm * zm);
                let u2 = 4.0 / (zm * zm * zm);
                Ok(Jet {
                    value: u * u,
                    d1: 2.0 * u * u1,
                    d2: 2.0 * u1 * u1 + 2.0 * u * u2,
                })
            }
            MapSpec::PowerPerturb { eps } => {
                if z.im == 0.0 && z.re < 0.0 {
                    return Err(Error::BranchCut { z });
                }
                if z.norm() == 0.0 {
                    return Ok(Jet {
                        value: z,
                        d1: one,
                        d2: C64::new(f64::NAN, f64::NAN),
                    });
                }
                let p = 1.0 + eps;
                let log = z.ln();
                let zp = (p * log).exp();
                let zpm1 = (eps * log).exp();
                let zpm2 = ((eps - 1.0) * log).exp();
                Ok(Jet {
                    value: z - zp / 4.0,
                    d1: one - p * zpm1 / 4.0,
                    d2: -(p * eps) * zpm2 / 4.0,
                })
            }
            MapSpec::Affine { a, b } => Ok(Jet {
                value: a * z + b,
                d1: *a,
                d2: C64::new(0.0, 0.0),
            }),
            MapSpec::Exp => {
                let e = z.exp();
                Ok(Jet {
                    value: e,
                    d1: e,
                    d2: e,
                })
            }
            MapSpec::Polynomial { coeffs } => {
                // Horner for value and the two derivatives together.
                let mut v = C64::new(0.0, 0.0);
                let mut d1 = C64::new(0.0, 0.0);
                let mut d2 = C64::new(0.0, 0.0);
                for c in coeffs.iter().rev() {
                    d2 = d2 * z + 2.0 * d1;
                    d1 = d1 * z + v;
                    v = v * z + c;
                }
                Ok(Jet { value: v, d1, d2 })
            }
            MapSpec::Composition { maps } => {
                let mut acc = Jet {
                    value: z,
                    d1: one,
                    d2: C64::new(0.0, 0.0),
                };
                for m in maps {
                    let j = m.jet(acc.value)?;
                    acc = Jet {
                        value: j.value,
                        d1: j.d1 * acc.d1,
                        d2: j.d2 * acc.d1 * acc.d1 + j.d1 * acc.d2,
                    };
                }
                Ok(acc)
            }
            MapSpec::NumericalRiemann { .. } => {
                let solve = crate::conformal::cache::solve_for_map(self)?;
                let (value, d1) = solve.eval_with_deriv(z);
                let h = FD_STEP;
                let (_, dp) = solve.eval_with_deriv(z + h);
                let (_, dm) = solve.eval_with_deriv(z - h);
                Ok(Jet {
                    value,
                    d1,
                    d2: (dp - dm) / (2.0 * h),
                })
            }
        }
    }

    /// Solves `f(z) = w` by damped Newton iteration from `seed`.
    ///
    /// Converged when `|f(z) - w| <= 1e-12`; a couple of polishing steps are
    /// then taken while the residual keeps decreasing.
    pub fn invert(&self, w: C64, seed: C64) -> Result<C64> {
        const MAX_ITER: usize = 100;
        const TOL: f64 = 1e-12;
        let mut z = seed;
        let mut jet = match self.jet(z) {
            Ok(j) => j,
            Err(_) => {
                return Err(Error::NoConvergence {
                    last: z,
                    residual: f64::INFINITY,
                })
            }
        };
        let mut res = (jet.value - w).norm();
        let mut iter = 0;
        while res > TOL && iter < MAX_ITER {
            iter += 1;
            if jet.d1.norm() == 0.0 || !jet.d1.is_finite() {
                break;
            }
            let step = (jet.value - w) / jet.d1;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let cand = z - lambda * step;
                if let Ok(j) = self.jet(cand) {
                    let r = (j.value - w).norm();
                    if r.is_finite() && r < res {
                        z = cand;
                        jet = j;
                        res = r;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if res > TOL {
            return Err(Error::NoConvergence {
                last: z,
                residual: res,
            });
        }
        for _ in 0..2 {
            if jet.d1.norm() == 0.0 {
                break;
            }
            let cand = z - (jet.value - w) / jet.d1;
            match self.jet(cand) {
                Ok(j) if (j.value - w).norm() < res => {
                    res = (j.value - w).norm();
                    z = cand;
                    jet = j;
                }
                _ => break,
            }
        }
        Ok(z)
    }

    /// Inverts using the nearest of `samples` (pairs of base point and image)
    /// as the Newton seed, falling back to the next nearest seeds.
    pub fn invert_from_samples(&self, w: C64, samples: &[(C64, C64)]) -> Result<C64> {
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by(|&i, &j| {
            (samples[i].1 - w)
                .norm()
                .total_cmp(&(samples[j].1 - w).norm())
        });
        let mut last_err = None;
        for &i in order.iter().take(4) {
            match self.invert(w, samples[i].0) {
                Ok(z) => return Ok(z),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or(Error::NoConvergence {
            last: w,
            residual: f64::INFINITY,
        }))
    }

    /// Scaled copy `lambda * f`.
    pub fn post_scaled(&self, lambda: f64) -> MapSpec {
        MapSpec::Composition {
            maps: vec![
                self.clone(),
                MapSpec::Affine {
                    a: C64::new(lambda, 0.0),
                    b: C64::new(0.0, 0.0),
                },
            ],
        }
    }
}

//! Annulus `{r_inner < |z - c| < r_outer}`: Kobayashi density through the
//! universal covering by a strip, and the Bergman kernel and metric from the
//! Laurent monomial series.
//!
//! In the normalized variable `u = (z - c) / r_outer` with `q = r_inner / r_outer`
//! the monomials `u^n` are orthogonal with
//! `N_n = pi (1 - q^(2n+2)) / (n + 1)` for `n != -1` and `N_-1 = 2 pi ln(1/q)`.
//! The slowly converging parts of the moment sums `sum n^j |u|^(2n) / N_n`
//! are summed in closed form, the rest converges like `q^(2n)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

type C64 = Complex64;

/// Angular coordinate `theta in (0, pi)` of the strip lift together with the
/// strip width `L = ln(1/q)`.
pub(crate) struct Lift {
    pub theta: f64,
    /// `sin(theta)`, computed from whichever boundary is nearer.
    pub sin_theta: f64,
    pub arg: f64,
    pub width: f64,
}

pub(crate) fn lift(center: C64, r_inner: f64, r_outer: f64, z: C64) -> Lift {
    let rho = (z - center).norm();
    let width = (r_outer / r_inner).ln();
    // x = ln(rho / r_inner), L - x = ln(r_outer / rho)
    let x = ((rho - r_inner) / r_inner).ln_1p();
    let y = -(-(r_outer - rho) / r_outer).ln_1p();
    let theta = PI * x / width;
    let sin_theta = if x <= y {
        theta.sin()
    } else {
        (PI * y / width).sin()
    };
    Lift {
        theta,
        sin_theta,
        arg: (z - center).arg(),
        width,
    }
}

/// Kobayashi (hyperbolic) density `pi / (2 L rho sin(pi x / L))`.
pub fn kappa(center: C64, r_inner: f64, r_outer: f64, z: C64) -> f64 {
    let l = lift(center, r_inner, r_outer, z);
    let rho = (z - center).norm();
    PI / (2.0 * l.width * rho * l.sin_theta)
}

/// Kernel and metric values from the series, in the unnormalized variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSeries {
    /// `K(z)`.
    pub k: f64,
    /// `M(z; 1)`.
    pub m: f64,
}

impl AnnulusSeries {
    /// `beta = M / sqrt(K)`.
    pub fn beta(&self) -> f64 {
        self.m / self.k.sqrt()
    }
}

/// Sum of a series with geometrically decaying terms, stopped once a term
/// drops below `1e-17` of the running sum.
fn tail_sum(mut term: impl FnMut(u64) -> f64) -> f64 {
    let mut s = 0.0;
    for n in 0..100_000 {
        let t = term(n);
        s += t;
        if t.abs() <= 1e-17 * s.abs() && n > 2 {
            break;
        }
    }
    s
}

/// Moments `P_j = sum_n n^j |u|^(2n) / N_n`, `j = 0, 1, 2`, with
/// `one_minus_s = 1 - |u|^2` and `s_minus_q2 = |u|^2 - q^2` passed in so
/// the caller can form them without cancellation.
fn moments(s: f64, one_minus_s: f64, s_minus_q2: f64, q: f64) -> [f64; 3] {
    let q2 = q * q;
    // n >= 0: (n + 1) s^n / (pi (1 - q^(2n+2)))
    let a0 = 1.0 / (one_minus_s * one_minus_s);
    let a1 = 2.0 * s / one_minus_s.powi(3);
    let a2 = 2.0 * s * (1.0 + 2.0 * s) / one_minus_s.powi(4);
    let corr = |j: i32| {
        tail_sum(|n| {
            let nf = n as f64;
            let qq = q2.powi(n as i32 + 1);
            nf.powi(j) * (nf + 1.0) * s.powi(n as i32) * qq / (1.0 - qq)
        })
    };
    let pos = [a0 + corr(0), a1 + corr(1), a2 + corr(2)];
    // n = -(k + 1), k >= 1: (k / (pi s)) x^k / (1 - q^(2k)), x = q^2 / s
    let x = q2 / s;
    let one_minus_x = s_minus_q2 / s;
    let b0 = x / (one_minus_x * one_minus_x);
    let b1 = 2.0 * x / one_minus_x.powi(3);
    let b2 = x * (4.0 + 2.0 * x) / one_minus_x.powi(4);
    let ncorr = |j: i32| {
        tail_sum(|k| {
            let kf = k as f64 + 1.0;
            let qq = q2.powi(k as i32 + 1);
            kf * (kf + 1.0).powi(j) * x.powi(k as i32 + 1) * qq / (1.0 - qq)
        })
    };
    let neg = [
        (b0 + ncorr(0)) / s,
        -(b1 + ncorr(1)) / s,
        (b2 + ncorr(2)) / s,
    ];
    let t_m1 = 1.0 / (s * 2.0 * PI * (1.0 / q).ln());
    [
        (pos[0] + neg[0]) / PI + t_m1,
        (pos[1] + neg[1]) / PI - t_m1,
        (pos[2] + neg[2]) / PI + t_m1,
    ]
}

pub fn series(center: C64, r_inner: f64, r_outer: f64, z: C64) -> AnnulusSeries {
    let rho = (z - center).norm();
    let u = rho / r_outer;
    let q = r_inner / r_outer;
    let s = u * u;
    let one_minus_s = ((r_outer - rho) / r_outer) * (1.0 + u);
    let s_minus_q2 = ((rho - r_inner) / r_outer) * (u + q);
    let [p0, p1, p2] = moments(s, one_minus_s, s_minus_q2, q);
    let m2 = ((p2 - p1 * p1 / p0) / s).max(0.0);
    let scale = r_outer * r_outer;
    AnnulusSeries {
        k: p0 / scale,
        m: m2.sqrt() / scale,
    }
}

/// Bergman kernel on the diagonal of `{q < |z| < 1}`.
pub fn annulus_kernel(q: f64, z: C64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidDomain(format!(
            "annulus ratio {q} not in (0,1)"
        )));
    }
    let r = z.norm();
    if !(q < r && r < 1.0) {
        return Err(Error::OutsideDomain {
            domain: format!("annulus-{q}"),
            z,
        });
    }
    Ok(series(C64::new(0.0, 0.0), q, 1.0, z).k)
}

/// Monomial norm `||z^n||^2` on `{q < |z| < 1}`.
pub fn monomial_norm_sq(q: f64, n: i64) -> f64 {
    if n == -1 {
        2.0 * PI * (1.0 / q).ln()
    } else {
        let e = (2 * n + 2) as f64 * q.ln();
        PI * -e.exp_m1() / (n + 1) as f64
    }
}

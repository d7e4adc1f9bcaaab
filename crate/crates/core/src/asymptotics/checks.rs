//! Fixed-point checks: the half-disc comparison inequality, the Bergman
//! pipeline and equivalences between independent evaluation routes.

use std::f64::consts::{LN_2, PI, SQRT_2};

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::report::ScenarioReport;
use super::{ScenarioInput, Tolerances};
use crate::conformal::riemann_map;
use crate::distance::{poincare_dist, quasi_hyperbolic_dist, PathConfig, PoincareKind};
use crate::domain::catalog::{half_disc_jordan, unit_disc_jordan};
use crate::domain::DomainSpec;
use crate::error::Result;
use crate::metrics::{annulus, bergman_basis, kernel_diag, lemma_l_gap, metric_m, ANGULAR_NODES};

type C64 = Complex64;

/// Radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// Halton points (bases 2 and 3) mapped area-uniformly onto the half-disc.
fn halton_half_disc(n: usize) -> Vec<C64> {
    (1..=n as u64)
        .map(|i| {
            let r = radical_inverse(i, 2).sqrt();
            let th = PI * radical_inverse(i, 3);
            C64::from_polar(r, th)
        })
        .filter(|z| z.im > 0.0 && z.norm() < 1.0)
        .collect()
}

pub(super) fn lemma_l(_input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    let t = &tol.lemma_l;
    let pts = halton_half_disc(t.points);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_low = f64::INFINITY;
    for &z in &pts {
        let (gap, bound) = lemma_l_gap(z)?;
        worst_excess = worst_excess.max(gap - bound);
        worst_low = worst_low.min(gap);
    }
    let inputs = json!({ "points": pts.len(), "sequence": "halton(2,3)" });
    let upper = ScenarioReport::check(
        "lemma-l:upper",
        inputs.clone(),
        worst_excess.max(0.0),
        0.0,
        t.slack,
    );
    let lower = ScenarioReport::check(
        "lemma-l:lower",
        inputs.clone(),
        (-worst_low).max(0.0),
        0.0,
        t.slack,
    );
    let axis_dev = (1..200)
        .map(|k| {
            let y = k as f64 / 200.0;
            let (gap, bound) = lemma_l_gap(C64::new(0.0, y))?;
            Ok((gap - bound).abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let axis = ScenarioReport::check(
        "lemma-l:axis",
        json!({ "points": 199 }),
        axis_dev,
        0.0,
        t.axis,
    );
    let (g, _) = lemma_l_gap(C64::new(0.0, 0.5))?;
    let explicit = ScenarioReport::check(
        "lemma-l:i/2",
        json!({ "z": "0+0.5i" }),
        g,
        2.0 / 3.0,
        t.explicit,
    );
    Ok(ScenarioReport::composite(
        "lemma-l",
        inputs,
        vec![upper, lower, axis, explicit],
    ))
}

pub(super) fn bergman(input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    let t = &tol.bergman;
    let mut rng = ChaCha8Rng::seed_from_u64(input.seed);
    let disc = DomainSpec::unit_disc();
    let basis = bergman_basis(&disc, t.disc_degree, ANGULAR_NODES)?;
    let origin = C64::new(0.0, 0.0);
    let k0 = kernel_diag(&disc, origin, &basis)?.value;
    let beta0 = metric_m(&disc, origin, &basis)? / k0.sqrt();
    let dinputs = json!({ "degree": t.disc_degree });
    let kernel = ScenarioReport::check(
        "bergman:disc-kernel-0",
        dinputs.clone(),
        k0,
        1.0 / PI,
        t.kernel_origin,
    );
    let beta = ScenarioReport::check("bergman:disc-beta-0", dinputs, beta0, SQRT_2, t.beta_origin);

    let q = 0.5;
    let ann = DomainSpec::annulus(q);
    let abasis = bergman_basis(&ann, t.annulus_degree, ANGULAR_NODES)?;
    let mut cross = 0.0f64;
    for _ in 0..t.annulus_points {
        let z = C64::from_polar(rng.random_range(0.65..0.8), rng.random_range(0.0..2.0 * PI));
        let var = kernel_diag(&ann, z, &abasis)?.value;
        let ser = annulus::annulus_kernel(q, z)?;
        cross = cross.max((var - ser).abs() / ser);
    }
    let cross = ScenarioReport::check(
        "bergman:annulus-cross",
        json!({ "q": q, "degree": t.annulus_degree, "points": t.annulus_points, "radii": [0.65, 0.8] }),
        cross,
        0.0,
        t.annulus_cross,
    );
    // a smaller domain has the larger kernel
    let mut excess = f64::NEG_INFINITY;
    for _ in 0..t.monotonicity_points {
        let z = C64::from_polar(
            rng.random_range(q + 1e-3..1.0 - 1e-3),
            rng.random_range(0.0..2.0 * PI),
        );
        let kd = 1.0 / (PI * (1.0 - z.norm_sqr()).powi(2));
        excess = excess.max(kd - annulus::annulus_kernel(q, z)?);
    }
    let mono = ScenarioReport::check(
        "bergman:inclusion",
        json!({ "q": q, "points": t.monotonicity_points }),
        excess.max(0.0),
        0.0,
        0.0,
    );
    Ok(ScenarioReport::composite(
        "bergman",
        json!({ "seed": input.seed }),
        vec![kernel, beta, cross, mono],
    ))
}

/// `((z + 1) / (z - 1))^2` followed by the Cayley transform, normalized at `a`.
fn half_disc_explicit(a: C64, z: C64) -> C64 {
    let g = |z: C64| ((z + 1.0) / (z - 1.0)).powi(2);
    let dg = |z: C64| -4.0 * (z + 1.0) / (z - 1.0).powi(3);
    let w0 = g(a);
    let rot = dg(a) / (w0 - w0.conj());
    let u = rot.conj() / rot.norm();
    u * (g(z) - w0) / (g(z) - w0.conj())
}

fn random_in_disc(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::from_polar(
        r * rng.random_range(0.0f64..1.0).sqrt(),
        rng.random_range(0.0..2.0 * PI),
    )
}

pub(super) fn oracles(input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    let t = &tol.oracles;
    let mut rng = ChaCha8Rng::seed_from_u64(input.seed);
    let disc = DomainSpec::unit_disc();
    let mut auto_dev = 0.0f64;
    for _ in 0..t.automorphism_count {
        let a = random_in_disc(&mut rng, 0.9);
        let rot = C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        let phi = |z: C64| rot * (z - a) / (1.0 - a.conj() * z);
        let z = random_in_disc(&mut rng, 0.95);
        let w = random_in_disc(&mut rng, 0.95);
        let direct = poincare_dist(&disc, z, w, PoincareKind::Caratheodory)?.value;
        let moved = poincare_dist(&disc, phi(z), phi(w), PoincareKind::Caratheodory)?.value;
        auto_dev = auto_dev.max((direct - moved).abs());
    }
    let auto = ScenarioReport::check(
        "oracles:automorphism",
        json!({ "count": t.automorphism_count, "seed": input.seed }),
        auto_dev,
        0.0,
        t.automorphism,
    );
    let h = quasi_hyperbolic_dist(
        &disc,
        C64::new(0.0, 0.0),
        C64::new(0.5, 0.0),
        &PathConfig::default(),
    )?
    .value;
    let radial = ScenarioReport::check(
        "oracles:radial-qh",
        json!({ "z": "0", "w": "0.5" }),
        h,
        LN_2,
        t.radial_qh,
    );

    let id = riemann_map(&unit_disc_jordan(), C64::new(0.0, 0.0), 256)?;
    let mut id_dev = 0.0f64;
    for k in 0..100 {
        let z = C64::from_polar(0.95 * (k as f64 / 100.0).sqrt(), 2.4 * k as f64);
        id_dev = id_dev.max((id.eval(z) - z).norm());
    }
    let identity = ScenarioReport::check(
        "oracles:riemann-disc",
        json!({ "n_nodes": 256 }),
        id_dev,
        0.0,
        t.riemann_disc,
    );

    let a = C64::new(0.0, 0.5);
    let hd = riemann_map(&half_disc_jordan(), a, 512)?;
    let mut hd_dev = 0.0f64;
    for k in 0..200 {
        let r = 0.05 + 0.9 * ((k * 37 % 200) as f64 / 200.0);
        let th = 0.05 + 3.04 * (k as f64 / 200.0);
        let z = C64::from_polar(r, th);
        hd_dev = hd_dev.max((hd.eval(z) - half_disc_explicit(a, z)).norm());
    }
    let half = ScenarioReport::check(
        "oracles:half-disc-map",
        json!({ "n_nodes": 512, "base_point": "0+0.5i" }),
        hd_dev,
        0.0,
        t.half_disc_map,
    );
    Ok(ScenarioReport::composite(
        "oracles",
        json!({ "seed": input.seed }),
        vec![auto, radial, identity, half],
    ))
}

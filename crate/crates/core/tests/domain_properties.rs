use std::f64::consts::PI;

use iml_core::asymptotics::Tolerances;
use iml_core::domain::catalog::{blob, blob_map, example_4a};
use iml_core::domain::{
    catalog, classify_model, dist_to_boundary, CurveJet, CurvePiece, DomainKind, DomainSpec,
};
use iml_core::Complex64 as C64;
use proptest::prelude::*;

fn props() -> iml_core::asymptotics::Properties {
    Tolerances::default().properties
}

/// Points of the unit disc, area-uniform up to radius `r_max`.
fn disc_point(r_max: f64) -> impl Strategy<Value = C64> {
    (0.0f64..1.0, 0.0..2.0 * PI).prop_map(move |(u, th)| C64::from_polar(r_max * u.sqrt(), th))
}

/// Interior points of a catalog domain, drawn from its bounding box.
fn interior_points(d: &DomainSpec, n: usize, seed: u64) -> Vec<C64> {
    let (lo, hi) = d.bounding_box(3.0);
    let mut out = Vec::new();
    let mut k = seed;
    while out.len() < n && k < seed + 50 * n as u64 {
        k += 1;
        // golden-ratio lattice, deterministic
        let u = (k as f64 * 0.618_033_988_749_895).fract();
        let v = (k as f64 * 0.754_877_666_246_693).fract();
        let z = C64::new(lo.re + u * (hi.re - lo.re), lo.im + v * (hi.im - lo.im));
        if d.contains(z).unwrap()
            && dist_to_boundary(d, z)
                .map(|f| f.distance > 1e-4)
                .unwrap_or(false)
        {
            out.push(z);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn blob_foot_round_trip(x in disc_point(0.97)) {
        let z = blob_map().eval(x).unwrap();
        let f = dist_to_boundary(&blob(), z).unwrap();
        if f.unique {
            let e = (f.foot + f.inner_normal * f.distance - z).norm();
            prop_assert!(e <= props().foot_round_trip, "residual {e:e} at {z}");
        }
    }

    #[test]
    fn perturbed_disc_foot_round_trip(x in disc_point(0.97), eps in 0.1f64..0.9) {
        let d = example_4a(eps);
        let DomainKind::ConformalImage { map, .. } = &d.kind else { unreachable!() };
        let z = map.eval(x + 1.0).unwrap();
        let f = dist_to_boundary(&d, z).unwrap();
        if f.unique {
            let e = (f.foot + f.inner_normal * f.distance - z).norm();
            prop_assert!(e <= props().foot_round_trip, "residual {e:e} at {z}");
        }
    }

    #[test]
    fn arc_curvature_survives_squared_parameter(
        cx in -2.0f64..2.0,
        r in 0.1f64..5.0,
        th0 in -PI..PI,
        sweep in prop_oneof![-6.0f64..-0.5, 0.5f64..6.0],
        s in 0.05f64..0.95,
    ) {
        let arc = CurvePiece::Arc { center: C64::new(cx, 0.3), radius: r, theta0: th0, theta1: th0 + sweep };
        let j = arc.jet(s * s).unwrap();
        // chain rule for t = s^2
        let re = CurveJet { point: j.point, d1: 2.0 * s * j.d1, d2: 4.0 * s * s * j.d2 + 2.0 * j.d1 };
        let dev = (re.curvature() - arc.curvature(s * s).unwrap()).abs();
        prop_assert!(dev <= props().curvature_reparametrization, "deviation {dev:e}");
    }

    #[test]
    fn model_axis_distance(chi in -3.0f64..3.0, u in 0.001f64..0.999) {
        let tau = u * 1.0f64.min(1.0 / chi.abs());
        let f = dist_to_boundary(&classify_model(chi), C64::new(tau, 0.0)).unwrap();
        prop_assert!((f.distance - tau).abs() <= 1e-12, "chi {chi}: {} vs {tau}", f.distance);
    }
}

#[test]
fn membership_flips_at_the_foot() {
    for d in catalog() {
        for z in interior_points(&d, 40, 7) {
            let f = dist_to_boundary(&d, z).unwrap();
            if !f.unique {
                continue;
            }
            let inside = f.foot + f.inner_normal * 1e-6;
            let outside = f.foot - f.inner_normal * 1e-6;
            assert!(
                d.contains(inside).unwrap(),
                "{}: {inside} should be inside",
                d.name
            );
            assert!(
                !d.contains(outside).unwrap(),
                "{}: {outside} should be outside",
                d.name
            );
        }
    }
}

#[test]
fn conformal_image_foot_matches_brute_force() {
    let d = blob();
    let pieces = d.boundary_pieces();
    let n = 100_000;
    let boundary: Vec<C64> = (0..n)
        .map(|k| pieces[0].point(k as f64 / n as f64).unwrap())
        .collect();
    for z in interior_points(&d, 8, 3) {
        let f = dist_to_boundary(&d, z).unwrap();
        let brute = boundary
            .iter()
            .map(|b| (b - z).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(f.distance <= brute + 1e-15);
        assert!(
            brute - f.distance <= 1e-8,
            "{}: gap {:e}",
            z,
            brute - f.distance
        );
    }
}

#[test]
fn catalog_json_round_trip() {
    for d in catalog() {
        let back = DomainSpec::from_json(&d.to_json().unwrap()).unwrap();
        assert_eq!(back, d, "{}", d.name);
    }
}

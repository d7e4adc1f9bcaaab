use std::f64::consts::PI;

use iml_core::asymptotics::{Properties, Tolerances};
use iml_core::distance::{
    bergman_dist, optimize_path, poincare_dist, polyline_length, quasi_hyperbolic_dist, s_dist,
    PathConfig, PathIntegrand, PoincareKind,
};
use iml_core::domain::catalog::{blob, blob_map};
use iml_core::domain::DomainSpec;
use iml_core::Complex64 as C64;
use proptest::prelude::*;

fn props() -> Properties {
    Tolerances::default().properties
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn disc_point(r_max: f64) -> impl Strategy<Value = C64> {
    (0.0f64..1.0, 0.0..2.0 * PI).prop_map(move |(u, th)| C64::from_polar(r_max * u.sqrt(), th))
}

fn upper(z: C64) -> C64 {
    C64::new(z.re, z.im.abs().max(1e-3))
}

/// Domains with a point map from the disc strategy into each of them.
fn domains() -> Vec<(DomainSpec, fn(C64) -> C64)> {
    vec![
        (DomainSpec::unit_disc(), |z| z),
        (DomainSpec::upper_half_plane(), |z| upper(z) * 3.0),
        (DomainSpec::half_disc(), upper),
        (blob(), |z| blob_map().eval(z).unwrap()),
        (DomainSpec::annulus(0.4), |z| {
            C64::from_polar(0.42 + 0.55 * z.norm(), z.arg())
        }),
    ]
}

fn kinds(d: &DomainSpec) -> Vec<PoincareKind> {
    if d.is_simply_connected() {
        vec![PoincareKind::Caratheodory, PoincareKind::Kobayashi]
    } else {
        vec![PoincareKind::Kobayashi]
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn poincare_triangle_inequality(a in disc_point(0.97), b in disc_point(0.97), c in disc_point(0.97)) {
        let slack = props().triangle;
        for (d, f) in domains() {
            let (x, y, z) = (f(a), f(b), f(c));
            for k in kinds(&d) {
                let dd = |u, v| poincare_dist(&d, u, v, k).unwrap().value;
                let viol = dd(x, z) - dd(x, y) - dd(y, z);
                prop_assert!(viol <= slack, "{} {k:?}: violation {viol:e}", d.name);
            }
        }
    }

    #[test]
    fn poincare_symmetric_and_separating(a in disc_point(0.97), b in disc_point(0.97)) {
        let tol = props().symmetry;
        for (d, f) in domains() {
            let (z, w) = (f(a), f(b));
            for k in kinds(&d) {
                let zw = poincare_dist(&d, z, w, k).unwrap().value;
                let wz = poincare_dist(&d, w, z, k).unwrap().value;
                prop_assert!((zw - wz).abs() <= tol);
                prop_assert_eq!(poincare_dist(&d, z, z, k).unwrap().value, 0.0);
                if z != w {
                    prop_assert!(zw > 0.0);
                }
            }
            let s = s_dist(&d, z, w).unwrap();
            prop_assert!((s - s_dist(&d, w, z).unwrap()).abs() <= tol);
        }
    }

    #[test]
    fn disc_automorphisms_preserve_distance(
        a in disc_point(0.9),
        rot in 0.0f64..2.0 * PI,
        z in disc_point(0.95),
        w in disc_point(0.95),
    ) {
        let u = C64::from_polar(1.0, rot);
        let phi = |z: C64| u * (z - a) / (1.0 - a.conj() * z);
        let disc = DomainSpec::unit_disc();
        for k in [PoincareKind::Caratheodory, PoincareKind::Kobayashi] {
            let before = poincare_dist(&disc, z, w, k).unwrap().value;
            let after = poincare_dist(&disc, phi(z), phi(w), k).unwrap().value;
            prop_assert!((before - after).abs() <= props().mobius, "{before} vs {after}");
        }
    }

    #[test]
    fn annulus_kobayashi_dominates_disc_caratheodory(z in disc_point(1.0), w in disc_point(1.0)) {
        // the annulus sits inside the unit disc
        let map = |z: C64| C64::from_polar(0.42 + 0.55 * z.norm(), z.arg());
        let (z, w) = (map(z), map(w));
        let k = poincare_dist(&DomainSpec::annulus(0.4), z, w, PoincareKind::Kobayashi).unwrap().value;
        let c = poincare_dist(&DomainSpec::unit_disc(), z, w, PoincareKind::Caratheodory).unwrap().value;
        prop_assert!(k >= c - 1e-12);
    }
}

fn coarse() -> PathConfig {
    PathConfig {
        grid: 96,
        max_nodes: 64,
        ..PathConfig::default()
    }
}

#[test]
fn path_distances_triangle_inequality() {
    let disc = DomainSpec::unit_disc();
    let cfg = coarse();
    let pts = [C64::new(0.1, 0.2), C64::new(-0.5, 0.3), C64::new(0.4, -0.6)];
    let (x, y, z) = (pts[0], pts[1], pts[2]);
    for f in [quasi_hyperbolic_dist, bergman_dist] {
        let xz = f(&disc, x, z, &cfg).unwrap();
        let xy = f(&disc, x, y, &cfg).unwrap();
        let yz = f(&disc, y, z, &cfg).unwrap();
        let slack = 2.0 * (xz.tolerance + xy.tolerance + yz.tolerance);
        assert!(xz.value <= xy.value + yz.value + slack);
    }
}

#[test]
fn caratheodory_below_bergman() {
    let disc = DomainSpec::unit_disc();
    for (z, w) in [
        (C64::new(0.0, 0.0), C64::new(0.5, 0.0)),
        (C64::new(-0.3, 0.4), C64::new(0.6, 0.1)),
    ] {
        let c = poincare_dist(&disc, z, w, PoincareKind::Caratheodory)
            .unwrap()
            .value;
        let b = bergman_dist(&disc, z, w, &coarse()).unwrap().value;
        assert!(c <= b + 1e-3, "{c} vs {b}");
    }
}

#[test]
fn quasi_hyperbolic_against_kobayashi_on_disc() {
    let disc = DomainSpec::unit_disc();
    for (z, w) in [
        (C64::new(0.0, 0.0), C64::new(0.7, 0.0)),
        (C64::new(0.5, 0.5), C64::new(-0.2, 0.6)),
        (C64::new(0.9, 0.0), C64::new(0.0, -0.9)),
    ] {
        let h = quasi_hyperbolic_dist(&disc, z, w, &coarse()).unwrap().value;
        let k = poincare_dist(&disc, z, w, PoincareKind::Kobayashi)
            .unwrap()
            .value;
        assert!(h >= 2.0 * k - 4.0 * (z - w).norm(), "h {h} k {k}");
    }
}

#[test]
fn inserting_midpoints_keeps_length() {
    let disc = DomainSpec::unit_disc();
    let (poly, res) = optimize_path(
        &disc,
        C64::new(-0.4, 0.1),
        C64::new(0.6, 0.3),
        PathIntegrand::QuasiHyperbolicInvD,
        &coarse(),
    )
    .unwrap();
    let mut refined = Vec::new();
    for p in poly.nodes.windows(2) {
        refined.push(p[0]);
        refined.push(0.5 * (p[0] + p[1]));
    }
    refined.push(*poly.nodes.last().unwrap());
    let len = polyline_length(&disc, &refined, PathIntegrand::QuasiHyperbolicInvD).unwrap();
    assert!(len <= res.value + 1e-12, "{len} vs {}", res.value);
}

use std::f64::consts::PI;

use iml_core::asymptotics::{Properties, Tolerances};
use iml_core::conformal::MapSpec;
use iml_core::domain::catalog::{blob, blob_map, disc_one, example_4a};
use iml_core::domain::{DomainKind, DomainSpec};
use iml_core::metrics::{bergman_basis, density, kernel_diag, metric_m, QuantityId, ANGULAR_NODES};
use iml_core::Complex64 as C64;
use proptest::prelude::*;

fn props() -> Properties {
    Tolerances::default().properties
}

fn disc_point(r_max: f64) -> impl Strategy<Value = C64> {
    (0.0f64..1.0, 0.0..2.0 * PI).prop_map(move |(u, th)| C64::from_polar(r_max * u.sqrt(), th))
}

fn max_pairwise_rel_gap(v: &[f64]) -> f64 {
    let mut g = 0.0f64;
    for a in v {
        for b in v {
            g = g.max((a - b).abs() / a.abs().max(b.abs()));
        }
    }
    g
}

/// The blob map written as a scaling, its inverse and the blob map.
fn blob_two_step() -> DomainSpec {
    let scale = |a: f64| MapSpec::Affine {
        a: C64::new(a, 0.0),
        b: C64::new(0.0, 0.0),
    };
    DomainSpec::new(
        "blob-two-step",
        DomainKind::ConformalImage {
            base: Box::new(DomainSpec::unit_disc()),
            map: MapSpec::Composition {
                maps: vec![scale(2.0), scale(0.5), blob_map()],
            },
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn newton_inverse_round_trip(x in disc_point(0.9), eps in 0.1f64..0.9) {
        let tol = props().newton_round_trip;
        let maps = [
            (blob_map(), x),
            (MapSpec::PowerPerturb { eps }, x * 0.9 + 1.0),
            (MapSpec::SquareOfCayley, C64::new(x.re, x.im.abs().max(1e-3)) * 0.95),
        ];
        for (f, z) in maps {
            let w = f.eval(z).unwrap();
            let seed = z + C64::new(1e-3, -1e-3);
            if let Ok(back) = f.invert(w, seed) {
                let r = (f.eval(back).unwrap() - w).norm();
                prop_assert!(r <= tol, "{f:?}: residual {r:e}");
            }
        }
    }

    #[test]
    fn family_coincides_on_simply_connected_domains(x in disc_point(0.95)) {
        let tol = props().family_coincidence;
        let blob_z = blob_map().eval(x).unwrap();
        let hd_z = C64::new(x.re, x.im.abs().max(1e-3));
        let e4a = example_4a(0.5);
        let DomainKind::ConformalImage { map, .. } = &e4a.kind else { unreachable!() };
        let cases = [
            (DomainSpec::unit_disc(), x),
            (DomainSpec::half_disc(), hd_z),
            (blob(), blob_z),
            (e4a.clone(), map.eval(x + 1.0).unwrap()),
        ];
        for (d, z) in cases {
            let vals: Vec<f64> = QuantityId::ALL.iter().map(|&q| density(&d, z, q).unwrap()).collect();
            let gap = max_pairwise_rel_gap(&vals);
            prop_assert!(gap <= tol, "{}: gap {gap:e} at {z}", d.name);
        }
    }

    #[test]
    fn kernel_grows_on_the_annulus(r in 0.51f64..0.99, th in 0.0..2.0 * PI) {
        let z = C64::from_polar(r, th);
        let k_disc = density(&DomainSpec::unit_disc(), z, QuantityId::KernelSqrtScaled).unwrap();
        let k_ann = density(&DomainSpec::annulus(0.5), z, QuantityId::KernelSqrtScaled).unwrap();
        prop_assert!(k_disc <= k_ann);
    }

    #[test]
    fn kobayashi_grows_on_the_half_disc(x in disc_point(0.99)) {
        let z = C64::new(x.re, x.im.abs().max(1e-6));
        let disc = density(&DomainSpec::unit_disc(), z, QuantityId::KobayashiKappa).unwrap();
        let half = density(&DomainSpec::half_disc(), z, QuantityId::KobayashiKappa).unwrap();
        prop_assert!(disc <= half);
    }

    #[test]
    fn pullback_is_exact(x in disc_point(0.95)) {
        let tol = props().pullback_exactness;
        let f = blob_map();
        let z = f.eval(x).unwrap();
        let base = density(&DomainSpec::unit_disc(), x, QuantityId::KobayashiKappa).unwrap();
        let direct = density(&blob(), z, QuantityId::KobayashiKappa).unwrap() * f.deriv(x).unwrap().norm();
        let two_step = density(&blob_two_step(), z, QuantityId::KobayashiKappa).unwrap() * f.deriv(x).unwrap().norm();
        prop_assert!((direct / base - 1.0).abs() <= tol, "direct {direct} base {base}");
        prop_assert!((two_step / base - 1.0).abs() <= tol, "two-step {two_step} base {base}");
    }

    #[test]
    fn model_density_expansion(chi in -2.0f64..2.0) {
        // m(tau) - 1/(2 tau) = chi/4 + O(chi^2 tau); a deeper tau would lose
        // digits to the boundary distance when 1/|chi| is large
        let d = iml_core::domain::classify_model(chi);
        let tau = 1e-4;
        let m = density(&d, C64::new(tau, 0.0), QuantityId::KobayashiKappa).unwrap();
        prop_assert!((m - 0.5 / tau - chi / 4.0).abs() <= tau * (1.0 + chi * chi));
    }
}

#[test]
fn gram_kernel_matches_disc_closed_form() {
    let disc = DomainSpec::unit_disc();
    let basis = bergman_basis(&disc, 24, ANGULAR_NODES).unwrap();
    for k in 0..20 {
        let z = C64::from_polar(0.5 * k as f64 / 20.0, 1.3 * k as f64);
        let exact_k = 1.0 / (PI * (1.0 - z.norm_sqr()).powi(2));
        let kv = kernel_diag(&disc, z, &basis).unwrap().value;
        assert!(
            (kv / exact_k - 1.0).abs() <= props().family_coincidence,
            "K at {z}"
        );
        let beta = metric_m(&disc, z, &basis).unwrap() / kv.sqrt();
        let exact_beta = 2f64.sqrt() / (1.0 - z.norm_sqr());
        assert!(
            (beta / exact_beta - 1.0).abs() <= props().family_coincidence,
            "beta at {z}"
        );
    }
}

#[test]
fn kernel_is_rotation_invariant() {
    let basis = bergman_basis(&DomainSpec::unit_disc(), 24, ANGULAR_NODES).unwrap();
    let d = DomainSpec::unit_disc();
    let a = kernel_diag(&d, C64::new(0.7, 0.0), &basis).unwrap().value;
    let b = kernel_diag(&d, C64::new(0.0, 0.7), &basis).unwrap().value;
    assert!((a - b).abs() / a <= props().symmetry);
}

#[test]
fn perturbed_disc_base_is_disc_one() {
    let DomainKind::ConformalImage { base, .. } = example_4a(0.5).kind else {
        unreachable!()
    };
    assert_eq!(*base, disc_one());
}

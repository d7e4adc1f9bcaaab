//! Scenarios along a single normal ray: one-point limits and boundedness.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::report::{ScenarioReport, TracePoint, Verdict};
use super::schedule::{Anchor, ApproachSchedule, RaySample};
use super::{Route, ScenarioInput, Tolerances};
use crate::domain::catalog::example_4a;
use crate::domain::{
    catalog, dist_to_boundary, signed_curvature, BoundaryPoint, DomainKind, DomainSpec,
};
use crate::error::{Error, Result};
use crate::metrics::{density_with, DensityConfig, MetricSample, QuantityId};

type C64 = Complex64;

fn density_cfg(tol: &Tolerances) -> DensityConfig {
    DensityConfig {
        riemann_nodes: tol.schedule.riemann_nodes,
    }
}

struct Setup {
    domain: DomainSpec,
    anchor: Anchor,
    route: Route,
    schedule: ApproachSchedule,
}

fn setup(input: &ScenarioInput, tol: &Tolerances, default: fn() -> DomainSpec) -> Setup {
    let domain = input.domain.clone().unwrap_or_else(default);
    let anchor = input.anchor.unwrap_or_else(|| Anchor::default_for(&domain));
    let route = Route::of(&domain);
    let mut schedule = route.schedule(anchor, tol);
    if let Some(t0) = input.t0 {
        let last = schedule.t0 * schedule.rho.powi(schedule.k_max as i32);
        let k = (t0 / last).log2().round().max(0.0) as usize;
        schedule = ApproachSchedule::ending_at(anchor, last, k);
    }
    if let Some(k) = input.k_max {
        schedule.k_max = k;
    }
    if let Some(l) = input.depth_scale {
        schedule = schedule.scaled_by(l);
    }
    Setup {
        domain,
        anchor,
        route,
        schedule,
    }
}

impl Setup {
    fn inputs(&self, extra: serde_json::Value) -> serde_json::Value {
        let mut v = json!({
            "domain": self.domain.name,
            "anchor": self.anchor.to_string(),
            "route": self.route.as_str(),
            "t0": self.schedule.t0,
            "rho": self.schedule.rho,
            "k_max": self.schedule.k_max,
        });
        if let (Some(m), serde_json::Value::Object(e)) = (v.as_object_mut(), extra) {
            m.extend(e);
        }
        v
    }
}

/// Evaluates `f` at every ray point in parallel, keeping schedule order.
fn sample<F>(samples: &[RaySample], f: F) -> Result<Vec<(TracePoint, f64)>>
where
    F: Fn(&RaySample) -> Result<(f64, f64)> + Sync,
{
    samples
        .par_iter()
        .map(|s| {
            let (value, unc) = f(s)?;
            Ok((
                TracePoint {
                    t: s.t,
                    z: s.z,
                    w: None,
                    value,
                },
                unc,
            ))
        })
        .collect()
}

fn split(v: Vec<(TracePoint, f64)>) -> (Vec<TracePoint>, f64) {
    let unc = v.iter().map(|(_, u)| *u).fold(0.0, f64::max);
    (v.into_iter().map(|(p, _)| p).collect(), unc)
}

fn uncertainty_note(report: &mut ScenarioReport, unc: f64) {
    if unc > 0.0 {
        report.notes.push(format!(
            "largest propagated evaluator uncertainty {unc:.3e}"
        ));
    }
}

fn metric(domain: &DomainSpec, z: C64, q: QuantityId, cfg: &DensityConfig) -> Result<MetricSample> {
    density_with(domain, z, q, cfg)
}

/// `m - 1/(2d)` tends to a quarter of the boundary curvature.
pub(super) fn prop1(input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    let s = setup(input, tol, DomainSpec::unit_disc);
    let q = input.quantity.unwrap_or(QuantityId::KobayashiKappa);
    let cfg = density_cfg(tol);
    let ray = s.schedule.ray(&s.domain)?;
    let (trace, unc) = split(sample(&ray, |r| {
        let m = metric(&s.domain, r.z, q, &cfg)?;
        Ok((m.value - 0.5 / r.depth, m.uncertainty))
    })?);
    let target = signed_curvature(&s.domain, s.anchor.piece, s.anchor.t)? / 4.0;
    let mut r = ScenarioReport::limit(
        "prop1",
        s.inputs(json!({ "quantity": q.as_str() })),
        trace,
        target,
        s.route.pick(&tol.prop1),
    )?;
    uncertainty_note(&mut r, unc);
    Ok(r)
}

/// `2 m d -> 1`, once per available quantity.
pub(super) fn prop2(input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    let s = setup(input, tol, DomainSpec::unit_disc);
    let cfg = density_cfg(tol);
    let ray = s.schedule.ray(&s.domain)?;
    let quantities: Vec<QuantityId> = match input.quantity {
        Some(q) => vec![q],
        None => QuantityId::ALL.to_vec(),
    };
    let mut components = Vec::new();
    for q in quantities {
        let traced = sample(&ray, |r| {
            let m = metric(&s.domain, r.z, q, &cfg)?;
            Ok((2.0 * m.value * r.depth, 2.0 * m.uncertainty * r.depth))
        });
        let (trace, unc) = match traced {
            Err(Error::UnsupportedQuantity { .. }) if input.quantity.is_none() => continue,
            other => split(other?),
        };
        let mut r = ScenarioReport::limit(
            &format!("prop2:{q}"),
            s.inputs(json!({ "quantity": q.as_str() })),
            trace,
            1.0,
            s.route.pick(&tol.prop2),
        )?;
        uncertainty_note(&mut r, unc);
        components.push(r);
    }
    Ok(ScenarioReport::composite(
        "prop2",
        s.inputs(json!({})),
        components,
    ))
}

#[derive(Clone, Copy)]
enum Form {
    /// `(2 m d - 1) / d^eps`
    Product,
    /// `(4 m - 2/d - chi) / d^eps`
    Curvature,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Least-squares slope of `ln|g|` against `ln d` over the nonzero terms.
fn log_slope(trace: &[TracePoint], depths: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = trace
        .iter()
        .zip(depths)
        .filter(|(p, _)| p.value != 0.0)
        .map(|(p, d)| (d.ln(), p.value.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Boundedness of `g`: the terms after the first five stay within a
/// factor of the median of the first five, and `|g|` shows no power-law
/// growth as `d -> 0`.
fn boundedness(
    name: &str,
    inputs: serde_json::Value,
    trace: Vec<TracePoint>,
    depths: &[f64],
    tol: &Tolerances,
) -> Result<ScenarioReport> {
    if trace.len() < 6 {
        return Err(Error::Schedule(format!(
            "{name} needs at least 6 samples, got {}",
            trace.len()
        )));
    }
    let abs: Vec<f64> = trace.iter().map(|p| p.value.abs()).collect();
    let bound = tol.prop3.median_factor * median(&abs[..5]);
    let sup = abs[5..].iter().copied().fold(0.0, f64::max);
    let slope = log_slope(&trace, depths);
    let mut head = ScenarioReport::check(&format!("{name}:sup"), inputs.clone(), sup, 0.0, bound);
    head.raw_trace = trace;
    let mut trend = ScenarioReport::check(
        &format!("{name}:slope"),
        inputs.clone(),
        slope,
        tol.prop3.min_slope,
        0.0,
    );
    trend.verdict = if slope >= tol.prop3.min_slope {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ScenarioReport::composite(name, inputs, vec![head, trend]))
}

fn bounded_form(input: &ScenarioInput, tol: &Tolerances, form: Form) -> Result<ScenarioReport> {
    let s = setup(input, tol, DomainSpec::unit_disc);
    let eps = input.eps.unwrap_or(0.5);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("eps = {eps} not in (0, 1)")));
    }
    let q = input.quantity.unwrap_or(QuantityId::KobayashiKappa);
    let cfg = density_cfg(tol);
    let ray = s.schedule.ray(&s.domain)?;
    let (trace, _) = split(sample(&ray, |r| {
        let m = metric(&s.domain, r.z, q, &cfg)?.value;
        let d = r.depth;
        let num = match form {
            Form::Product => 2.0 * m * d - 1.0,
            Form::Curvature => 4.0 * m - 2.0 / d - r.curvature,
        };
        Ok((num / d.powf(eps), 0.0))
    })?);
    let depths: Vec<f64> = ray.iter().map(|r| r.depth).collect();
    let name = match form {
        Form::Product => "prop3",
        Form::Curvature => "prop4",
    };
    boundedness(
        name,
        s.inputs(json!({ "eps": eps, "quantity": q.as_str() })),
        trace,
        &depths,
        tol,
    )
}

pub(super) fn prop3(input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    bounded_form(input, tol, Form::Product)
}

pub(super) fn prop4(input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    bounded_form(input, tol, Form::Curvature)
}

/// `(2 m d - 1) / d^eps -> eps/4` along the positive axis of the
/// perturbed disc.
pub(super) fn example_a(input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    let eps = input.eps.unwrap_or(0.5);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("eps = {eps} not in (0, 1)")));
    }
    let domain = example_4a(eps);
    let DomainKind::ConformalImage { map, .. } = &domain.kind else {
        unreachable!("example_4a is a conformal image")
    };
    let s = &tol.schedule;
    let k_max = input.k_max.unwrap_or(s.k_closed_form);
    let inputs =
        json!({ "domain": domain.name, "eps": eps, "t0": s.t0, "rho": s.rho, "k_max": k_max });
    let q = QuantityId::KobayashiKappa;
    let cfg = density_cfg(tol);
    let us: Vec<f64> = (0..=k_max).map(|k| s.t0 * s.rho.powi(k as i32)).collect();
    let evals: Vec<Result<(TracePoint, f64)>> = us
        .par_iter()
        .map(|&u| {
            let z = C64::new(u, 0.0);
            let d = dist_to_boundary(&domain, z)?.distance;
            let m = metric(&domain, z, q, &cfg)?.value;
            let x = domain.preimage(z)?;
            // pullback factor: m_D(u) f'(x) = 1/(x(2 - x))
            let factor = m * map.deriv(x)?.norm() * x.re * (2.0 - x.re);
            let value = (2.0 * m * d - 1.0) / d.powf(eps);
            Ok((
                TracePoint {
                    t: u,
                    z,
                    w: None,
                    value,
                },
                (factor - 1.0).abs(),
            ))
        })
        .collect();
    let mut notes = Vec::new();
    let mut trace = Vec::new();
    let mut factor_dev = 0.0f64;
    for (k, e) in evals.into_iter().enumerate() {
        match e {
            Ok((p, f)) => {
                factor_dev = factor_dev.max(f);
                trace.push(p);
            }
            Err(err) if k >= 5 => {
                notes.push(format!("schedule truncated at k = {k}: {err}"));
                break;
            }
            Err(err) => return Err(err),
        }
    }
    let mut limit = ScenarioReport::limit(
        "example-a",
        inputs.clone(),
        trace,
        eps / 4.0,
        tol.example_a.tolerance,
    )?;
    limit.notes.extend(notes);
    let factor = ScenarioReport::check(
        "example-a:pullback-factor",
        inputs.clone(),
        factor_dev,
        0.0,
        tol.example_a.pullback_factor,
    );
    let mut r = ScenarioReport::composite("example-a", inputs, vec![limit, factor]);
    r.raw_trace = r.components[0].raw_trace.clone();
    Ok(r)
}

/// Anchor heights on the wall and angles below the axis on the arc.
const EXAMPLE_B_OFFSETS: [f64; 5] = [0.8, 0.4, 0.2, 0.1, 0.05];

/// Limit of `2m - 1/d` along the normal at one anchor, with the largest
/// propagated uncertainty of its samples.
fn inner_limit(
    domain: &DomainSpec,
    bp: &BoundaryPoint,
    t_start: f64,
    floor: f64,
    cfg: &DensityConfig,
) -> Result<(f64, f64)> {
    let mut ts = vec![t_start];
    while ts[ts.len() - 1] * 0.5 >= floor * (1.0 - 1e-12) {
        ts.push(ts[ts.len() - 1] * 0.5);
    }
    let vals: Vec<(f64, f64)> = ts
        .par_iter()
        .map(|&t| {
            let z = bp.point + bp.inner_normal * t;
            let d = dist_to_boundary(domain, z)?.distance;
            let m = metric(domain, z, QuantityId::KobayashiKappa, cfg)?;
            Ok((2.0 * m.value - 1.0 / d, 2.0 * m.uncertainty))
        })
        .collect::<Result<_>>()?;
    let seq: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let unc = vals.iter().map(|v| v.1).fold(0.0, f64::max);
    Ok((super::extrapolate(&seq)?.value, unc))
}

struct Family {
    trace: Vec<TracePoint>,
    unc: f64,
}

/// Inner normal-ray limits at a family of anchors approaching the join at 1.
fn anchor_family(domain: &DomainSpec, wall: bool, height: f64, tol: &Tolerances) -> Result<Family> {
    let cfg = DensityConfig {
        riemann_nodes: tol.example_b.n_nodes,
    };
    let floor = tol.schedule.t_floor_numerical;
    let mut trace = Vec::new();
    let mut unc = 0.0f64;
    for off in EXAMPLE_B_OFFSETS {
        let bp = if wall {
            domain.boundary_point(0, off / height)?
        } else {
            domain.boundary_point(3, (std::f64::consts::PI - off) / std::f64::consts::PI)?
        };
        let (v, u) = inner_limit(domain, &bp, off / 4.0, floor, &cfg)?;
        unc = unc.max(u);
        trace.push(TracePoint {
            t: off,
            z: bp.point,
            w: None,
            value: v,
        });
    }
    Ok(Family { trace, unc })
}

fn scaled(trace: &[TracePoint], c: f64) -> Vec<TracePoint> {
    trace
        .iter()
        .map(|p| TracePoint {
            value: p.value * c,
            ..*p
        })
        .collect()
}

/// The attached strip: along the wall the combination tends to 0, along
/// the arc to the arc's curvature term. Both readings of the combination
/// are reported: `2m - 1/d` and `m - 1/(2d)`.
pub(super) fn example_b(input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    let _ = input;
    let t = &tol.example_b;
    let primary = 4.0;
    let mut heights = t.heights.clone();
    if !heights.contains(&primary) {
        heights.push(primary);
    }
    let families: Vec<(f64, Family, Family)> = heights
        .iter()
        .map(|&h| {
            let d = catalog::example_4b(h);
            Ok((
                h,
                anchor_family(&d, true, h, tol)?,
                anchor_family(&d, false, h, tol)?,
            ))
        })
        .collect::<Result<_>>()?;
    let inputs = json!({
        "domain": "example-4b",
        "heights": heights,
        "primary_height": primary,
        "n_nodes": t.n_nodes,
        "offsets": EXAMPLE_B_OFFSETS,
        "t_floor": tol.schedule.t_floor_numerical,
    });
    let limit = |trace: &[TracePoint]| {
        super::extrapolate(&trace.iter().map(|p| p.value).collect::<Vec<_>>())
    };
    let mut components = Vec::new();
    let mut shifts = 0.0f64;
    let (_, pw, pa) = families
        .iter()
        .find(|f| f.0 == primary)
        .expect("primary height is solved");
    for (label, fam, target) in [("wall", pw, 0.0), ("arc", pa, 0.25)] {
        for (reading, c) in [("2m-1/d", 1.0), ("m-1/(2d)", 0.5)] {
            let tr = scaled(&fam.trace, c);
            let est = limit(&tr)?;
            let mut r = ScenarioReport::from_estimate(
                &format!("{label}:{reading}"),
                inputs.clone(),
                tr,
                &est,
                target,
                t.tolerance,
            );
            let unc = c * fam.unc;
            uncertainty_note(&mut r, unc);
            if r.verdict == Verdict::Pass && unc > t.loose_uncertainty {
                r.verdict = Verdict::Loose;
            }
            for (h, w, a) in &families {
                let other = if label == "wall" { w } else { a };
                let e = limit(&scaled(&other.trace, c))?.value;
                shifts = shifts.max((e - est.value).abs());
                r.notes.push(format!("H = {h}: estimate {e:.6}"));
            }
            components.push(r);
        }
    }
    components.push(ScenarioReport::check(
        "truncation-shift",
        inputs.clone(),
        shifts,
        0.0,
        t.truncation_shift,
    ));
    let mut r = ScenarioReport::composite("example-b", inputs, components);
    r.notes.push(
        "the literal combination 2m - 1/d tends to chi/2 on the arc; 1/4 is reached by m - 1/(2d)"
            .to_string(),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::classify_model;

    fn run(
        f: fn(&ScenarioInput, &Tolerances) -> Result<ScenarioReport>,
        input: ScenarioInput,
    ) -> ScenarioReport {
        f(&input, &Tolerances::default()).unwrap()
    }

    #[test]
    fn prop1_disc_two_thirds() {
        let r = run(
            prop1,
            ScenarioInput {
                domain: Some(DomainSpec::disc(C64::new(0.0, 0.0), 2.0 / 3.0)),
                ..Default::default()
            },
        );
        assert!((r.estimate - 0.375).abs() < 1e-6, "{}", r.estimate);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn prop1_disc_complement_and_model() {
        let dc = DomainSpec::new(
            "dc",
            DomainKind::DiscComplement {
                center: C64::new(0.0, 0.0),
                radius: 1.0,
            },
        );
        for d in [dc, classify_model(-1.0)] {
            let r = run(
                prop1,
                ScenarioInput {
                    domain: Some(d),
                    ..Default::default()
                },
            );
            assert!((r.estimate + 0.25).abs() < 1e-6, "{}", r.estimate);
        }
    }

    #[test]
    fn prop1_anchor_independent_on_disc() {
        let vals: Vec<f64> = (0..8)
            .map(|j| {
                run(
                    prop1,
                    ScenarioInput {
                        anchor: Some(Anchor::new(0, j as f64 / 8.0)),
                        ..Default::default()
                    },
                )
                .estimate
            })
            .collect();
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-10, "{vals:?}");
        }
    }

    #[test]
    fn prop2_every_quantity_on_disc() {
        let r = run(prop2, ScenarioInput::default());
        assert_eq!(r.components.len(), 4);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn prop2_annulus_skips_caratheodory() {
        let r = run(
            prop2,
            ScenarioInput {
                domain: Some(DomainSpec::annulus(0.5)),
                ..Default::default()
            },
        );
        assert_eq!(r.components.len(), 3);
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
    }

    #[test]
    fn boundedness_on_disc() {
        for f in [
            prop3 as fn(&ScenarioInput, &Tolerances) -> Result<ScenarioReport>,
            prop4,
        ] {
            for eps in [0.25, 0.5, 0.75] {
                let r = run(
                    f,
                    ScenarioInput {
                        eps: Some(eps),
                        ..Default::default()
                    },
                );
                assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
            }
        }
    }

    #[test]
    fn median_and_slope() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        let ds: Vec<f64> = (0..10).map(|k| 0.5f64.powi(k)).collect();
        let tr: Vec<TracePoint> = ds
            .iter()
            .map(|&d| TracePoint {
                t: d,
                z: C64::new(0.0, 0.0),
                w: None,
                value: d.powf(0.3),
            })
            .collect();
        assert!((log_slope(&tr, &ds) - 0.3).abs() < 1e-12);
    }
}

//! Built-in domains, addressable by name.
//!
//! Parametrized families take their parameter as a name suffix:
//! `example-4a-<eps>`, `example-4b-<H>`, `annulus-<q>`, `model-<chi>`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{classify_model, CurvePiece, DomainKind, DomainSpec, Regularity};
use crate::conformal::MapSpec;
use crate::error::{Error, Result};

type C64 = Complex64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `{|z - 1| < 1}`.
pub fn disc_one() -> DomainSpec {
    DomainSpec::new(
        "disc-1",
        DomainKind::Disc {
            center: c(1.0, 0.0),
            radius: 1.0,
        },
    )
}

/// Image of `{|z - 1| < 1}` under `z - z^(1+eps)/4`.
pub fn example_4a(eps: f64) -> DomainSpec {
    DomainSpec::new(
        format!("example-4a-{eps}"),
        DomainKind::ConformalImage {
            base: Box::new(disc_one()),
            map: MapSpec::PowerPerturb { eps },
        },
    )
}

/// Unit disc with the half-strip `{|x| < 1, 0 < y < height}` attached.
pub fn example_4b(height: f64) -> DomainSpec {
    DomainSpec::new(
        format!("example-4b-{height}"),
        DomainKind::JordanDomain {
            boundary: vec![
                CurvePiece::Segment {
                    start: c(1.0, 0.0),
                    end: c(1.0, height),
                },
                CurvePiece::Segment {
                    start: c(1.0, height),
                    end: c(-1.0, height),
                },
                CurvePiece::Segment {
                    start: c(-1.0, height),
                    end: c(-1.0, 0.0),
                },
                CurvePiece::Arc {
                    center: c(0.0, 0.0),
                    radius: 1.0,
                    theta0: PI,
                    theta1: 2.0 * PI,
                },
            ],
            regularity_tag: Regularity::C11,
        },
    )
}

pub fn blob_map() -> MapSpec {
    MapSpec::Polynomial {
        coeffs: vec![c(0.0, 0.0), c(1.0, 0.0), c(0.1, 0.0)],
    }
}

/// Image of the unit disc under `z + 0.1 z^2`.
pub fn blob() -> DomainSpec {
    DomainSpec::new(
        "blob",
        DomainKind::ConformalImage {
            base: Box::new(DomainSpec::unit_disc()),
            map: blob_map(),
        },
    )
}

/// The same blob given only by its boundary curve.
pub fn blob_jordan() -> DomainSpec {
    DomainSpec::new(
        "blob-jordan",
        DomainKind::JordanDomain {
            boundary: vec![CurvePiece::Mapped {
                map: blob_map(),
                base: Box::new(CurvePiece::Arc {
                    center: c(0.0, 0.0),
                    radius: 1.0,
                    theta0: 0.0,
                    theta1: 2.0 * PI,
                }),
            }],
            regularity_tag: Regularity::Analytic,
        },
    )
}

/// The half-disc given by its boundary curve, for the numerical map.
pub fn half_disc_jordan() -> DomainSpec {
    DomainSpec::new(
        "half-disc-jordan",
        DomainKind::JordanDomain {
            boundary: DomainSpec::half_disc().boundary_pieces(),
            regularity_tag: Regularity::C1,
        },
    )
}

pub fn unit_disc_jordan() -> DomainSpec {
    DomainSpec::new(
        "unit-disc-jordan",
        DomainKind::JordanDomain {
            boundary: DomainSpec::unit_disc().boundary_pieces(),
            regularity_tag: Regularity::Analytic,
        },
    )
}

pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "unit-disc",
        "half-plane",
        "half-disc",
        "disc-1",
        "example-4a-<eps>",
        "example-4b-<H>",
        "annulus-<q>",
        "model-<chi>",
        "blob",
        "blob-jordan",
        "half-disc-jordan",
        "unit-disc-jordan",
    ]
}

/// Every built-in domain at its default parameter.
pub fn catalog() -> Vec<DomainSpec> {
    vec![
        DomainSpec::unit_disc(),
        DomainSpec::upper_half_plane(),
        DomainSpec::half_disc(),
        disc_one(),
        example_4a(0.5),
        example_4a(0.25),
        example_4b(4.0),
        DomainSpec::annulus(0.5),
        classify_model(2.0),
        classify_model(0.0),
        classify_model(-1.0),
        blob(),
        blob_jordan(),
        half_disc_jordan(),
        unit_disc_jordan(),
    ]
}

pub fn lookup(name: &str) -> Result<DomainSpec> {
    let fixed = match name {
        "unit-disc" => Some(DomainSpec::unit_disc()),
        "half-plane" => Some(DomainSpec::upper_half_plane()),
        "half-disc" => Some(DomainSpec::half_disc()),
        "disc-1" => Some(disc_one()),
        "blob" => Some(blob()),
        "blob-jordan" => Some(blob_jordan()),
        "half-disc-jordan" => Some(half_disc_jordan()),
        "unit-disc-jordan" => Some(unit_disc_jordan()),
        _ => None,
    };
    if let Some(d) = fixed {
        return Ok(d);
    }
    let param = |prefix: &str| -> Option<Result<f64>> {
        name.strip_prefix(prefix).map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidDomain(format!("bad parameter in `{name}`")))
        })
    };
    let d = if let Some(eps) = param("example-4a-") {
        let eps = eps?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidDomain(format!("eps {eps} not in (0,1)")));
        }
        example_4a(eps)
    } else if let Some(h) = param("example-4b-") {
        let h = h?;
        if !(h > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "strip height {h} must be positive"
            )));
        }
        example_4b(h)
    } else if let Some(q) = param("annulus-") {
        let q = q?;
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidDomain(format!(
                "annulus ratio {q} not in (0,1)"
            )));
        }
        DomainSpec::annulus(q)
    } else if let Some(chi) = param("model-") {
        classify_model(chi?)
    } else {
        return Err(Error::InvalidDomain(format!(
            "unknown catalog domain `{name}`"
        )));
    };
    Ok(d)
}

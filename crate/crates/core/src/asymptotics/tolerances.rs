//! Pass/fail tolerances and schedule defaults, read from one JSON profile.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

const DEFAULT_PROFILE: &str = include_str!("../../tolerances/default.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub schedule: ScheduleDefaults,
    pub prop1: ByMethod,
    pub prop2: ByMethod,
    pub prop3: Boundedness,
    pub example_a: ExampleA,
    pub example_b: ExampleB,
    pub lemma_l: LemmaL,
    pub bergman: Bergman,
    pub prop5: Prop5,
    pub prop7: Prop7,
    pub prop7b: Prop7b,
    pub oracles: Oracles,
    pub properties: Properties,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDefaults {
    pub t0: f64,
    pub rho: f64,
    pub k_closed_form: usize,
    pub t_floor_pullback: f64,
    pub t_floor_numerical: f64,
    pub riemann_nodes: usize,
}

/// One tolerance per evaluation route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ByMethod {
    pub closed_form: f64,
    pub pullback: f64,
    pub numerical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boundedness {
    pub median_factor: f64,
    pub min_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleA {
    pub tolerance: f64,
    /// Pullback density factor against the closed form on the base disc.
    pub pullback_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleB {
    pub tolerance: f64,
    pub loose_uncertainty: f64,
    pub truncation_shift: f64,
    pub n_nodes: usize,
    pub heights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaL {
    pub slack: f64,
    pub axis: f64,
    pub explicit: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bergman {
    pub kernel_origin: f64,
    pub beta_origin: f64,
    pub disc_degree: usize,
    pub annulus_cross: f64,
    pub annulus_degree: usize,
    pub annulus_points: usize,
    pub monotonicity_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prop5 {
    pub closed_form: f64,
    pub half_plane: f64,
    pub bergman: f64,
    pub t_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prop7 {
    pub ratio_ps: f64,
    pub ratio_h: f64,
    pub radial_check: f64,
    pub t_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prop7b {
    pub uniform: f64,
    pub final_depth: f64,
    pub anchors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oracles {
    pub automorphism: f64,
    pub automorphism_count: usize,
    pub radial_qh: f64,
    pub riemann_disc: f64,
    pub half_disc_map: f64,
}

/// Tolerances of the invariant property checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Properties {
    pub foot_round_trip: f64,
    pub curvature_reparametrization: f64,
    pub triangle: f64,
    pub mobius: f64,
    pub scaling: f64,
    pub family_coincidence: f64,
    pub newton_round_trip: f64,
    pub pullback_exactness: f64,
    pub symmetry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        serde_json::from_str(DEFAULT_PROFILE).expect("built-in tolerance profile parses")
    }
}

impl Tolerances {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

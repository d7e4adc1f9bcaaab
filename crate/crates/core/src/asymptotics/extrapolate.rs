//! Limit estimation by iterated Aitken Δ².

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Denominators below this fraction of the sequence scale are treated as zero.
const GUARD: f64 = 1e-14;

/// The indicator never claims more than this many ulps of the scale.
const ROUNDING_ULPS: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub error_indicator: f64,
    pub raw: Vec<f64>,
    /// Leading terms behind `value`; later terms only add rounding noise.
    pub used: usize,
    /// The guard fired and `value` is an unaccelerated term.
    pub fallback: bool,
}

/// One Aitken pass, stopped at the first window whose denominator hits the
/// guard.
fn aitken(s: &[f64], scale: f64) -> Vec<f64> {
    s.windows(3)
        .map_while(|w| {
            let d0 = w[1] - w[0];
            let d1 = w[2] - w[1];
            let den = d1 - d0;
            (den.abs() >= GUARD * scale).then(|| w[2] - d1 * d1 / den)
        })
        .collect()
}

fn last_increment(s: &[f64]) -> f64 {
    let n = s.len();
    (s[n - 1] - s[n - 2]).abs()
}

/// Alternating increments whose size grows over the last five steps.
fn check_divergence(seq: &[f64], scale: f64) -> Result<()> {
    let inc: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
    if inc.len() < 5 {
        return Ok(());
    }
    let tail = &inc[inc.len() - 5..];
    let alternating = tail.windows(2).all(|w| w[0] * w[1] < 0.0);
    let growing = tail.windows(2).all(|w| w[1].abs() > w[0].abs());
    if alternating && growing && tail[4].abs() > 1e-6 * scale {
        return Err(Error::Divergence(format!(
            "increments alternate in sign and grow to {:e}",
            tail[4].abs()
        )));
    }
    Ok(())
}

/// Relative jump in the increment ratio that marks the start of noise.
const RATIO_JUMP: f64 = 0.25;

/// Number of leading terms before rounding noise takes over: the increments
/// stop shrinking, or their ratio jumps away from the previous ratio. At
/// least five terms are kept.
fn noise_cutoff(seq: &[f64]) -> usize {
    let inc: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
    for k in 4..inc.len() {
        let grows = inc[k].abs() > inc[k - 1].abs();
        let jump = if inc[k - 1] != 0.0 && inc[k - 2] != 0.0 {
            let (r0, r1) = (inc[k - 1] / inc[k - 2], inc[k] / inc[k - 1]);
            (r1 - r0).abs() > RATIO_JUMP * r0.abs()
        } else {
            false
        };
        if grows || jump {
            return (k + 1).max(5);
        }
    }
    seq.len()
}

pub fn extrapolate(seq: &[f64]) -> Result<LimitEstimate> {
    if seq.len() < 5 {
        return Err(Error::Precondition(format!(
            "extrapolation needs at least 5 terms, got {}",
            seq.len()
        )));
    }
    if let Some(v) = seq.iter().find(|v| !v.is_finite()) {
        return Err(Error::Precondition(format!("non-finite sequence term {v}")));
    }
    let scale = seq
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    check_divergence(seq, scale)?;
    let cut = noise_cutoff(seq);
    let s = &seq[..cut];
    let floor = ROUNDING_ULPS * f64::EPSILON * scale;
    let done = |value: f64, error_indicator: f64, used: usize, fallback: bool| LimitEstimate {
        value,
        error_indicator: error_indicator.max(floor),
        raw: seq.to_vec(),
        used,
        fallback,
    };
    let a1 = aitken(s, scale);
    if a1.is_empty() {
        return Ok(done(s[cut - 1], last_increment(s), cut, true));
    }
    let a2 = aitken(&a1, scale);
    if a2.is_empty() {
        let n = a1.len();
        let err = if n >= 2 {
            last_increment(&a1)
        } else {
            (a1[0] - s[2]).abs()
        };
        return Ok(done(a1[n - 1], err, n + 2, true));
    }
    // a2[j] is built from s[j..j + 5] and a1[j..j + 3]
    let j = plateau(&a2);
    let value = a2[j];
    let err = (value - a1[j + 2]).abs().max(spread(&a2, j));
    Ok(done(value, err, j + 5, false))
}

/// Neighbours on each side that must agree with a chosen extrapolant.
const PLATEAU_HALF_WIDTH: usize = 2;

/// Largest difference between `a[j]` and its neighbours.
fn spread(a: &[f64], j: usize) -> f64 {
    let lo = j.saturating_sub(PLATEAU_HALF_WIDTH);
    let hi = (j + PLATEAU_HALF_WIDTH).min(a.len() - 1);
    a[lo..=hi]
        .iter()
        .fold(0.0f64, |m, v| m.max((v - a[j]).abs()))
}

/// Index of the most stable extrapolant. Truncation error shrinks along
/// the sequence while rounding noise grows, so the best value sits where
/// neighbours agree most closely; later indices win ties.
fn plateau(a: &[f64]) -> usize {
    if a.len() < 2 {
        return a.len() - 1;
    }
    (1..a.len())
        .min_by(|&i, &j| spread(a, i).total_cmp(&spread(a, j)).then(j.cmp(&i)))
        .expect("at least two extrapolants")
}

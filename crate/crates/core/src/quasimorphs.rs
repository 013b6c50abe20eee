//! Brooks counting quasimorphisms on free-group words.
//!
//! All real-valued outputs are finite-sample estimates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

pub const DEFAULT_POWER: u32 = 64;

/// Counts occurrences of `pattern` minus occurrences of `pattern⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrooksSpec {
    alphabet: Alphabet,
    pattern: Word,
    letters: Vec<usize>,
    inverse: Vec<usize>,
}

impl BrooksSpec {
    pub fn new(alphabet: &Alphabet, pattern: Word) -> Result<Self> {
        if pattern.is_identity() {
            return Err(Error::EmptyPattern);
        }
        let letters = alphabet.encode(&pattern)?;
        let inverse = alphabet.encode(&pattern.inverse())?;
        Ok(BrooksSpec {
            alphabet: alphabet.clone(),
            pattern,
            letters,
            inverse,
        })
    }

    pub fn pattern(&self) -> &Word {
        &self.pattern
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

fn occurrences(haystack: &[usize], needle: &[usize]) -> i64 {
    if needle.len() > haystack.len() {
        return 0;
    }
    haystack.windows(needle.len()).filter(|w| *w == needle).count() as i64
}

/// Overlapping occurrences of the pattern in the reduced word `g`, minus those
/// of its inverse.
pub fn brooks_count(spec: &BrooksSpec, g: &Word) -> Result<i64> {
    let letters = spec.alphabet.encode(g)?;
    Ok(occurrences(&letters, &spec.letters) - occurrences(&letters, &spec.inverse))
}

/// `φ(gᴺ)/N`, approximating the homogenization of the count.
pub fn homogenize_estimate(spec: &BrooksSpec, g: &Word, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("power must be at least 1".into()));
    }
    Ok(brooks_count(spec, &g.pow(n as i64))? as f64 / n as f64)
}

/// Largest observed `|φ̂(gh) − φ̂(g) − φ̂(h)|`: a lower estimate of the defect.
pub fn defect_estimate(spec: &BrooksSpec, sample: &[(Word, Word)], n: u32) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut worst: f64 = 0.0;
    for (g, h) in sample {
        let gh = g * h;
        let d = homogenize_estimate(spec, &gh, n)? - homogenize_estimate(spec, g, n)? - homogenize_estimate(spec, h, n)?;
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateKind {
    HeuristicLower,
    PropertyCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SclEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub power: u32,
    pub samples: usize,
    pub defect_bound: f64,
}

/// `|φ̂(g)| / 2D` for a caller-supplied defect bound `D`.
pub fn bavard_lower_estimate(spec: &BrooksSpec, g: &Word, n: u32, defect_bound: f64) -> Result<SclEstimate> {
    if defect_bound.is_nan() || defect_bound <= 0.0 {
        return Err(Error::NonpositiveDefect(defect_bound));
    }
    let phi = homogenize_estimate(spec, g, n)?;
    Ok(SclEstimate {
        value: phi.abs() / (2.0 * defect_bound),
        kind: EstimateKind::HeuristicLower,
        power: n,
        samples: 1,
        defect_bound,
    })
}

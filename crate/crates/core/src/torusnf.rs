//! Word and conjugacy problems in torus-knot groups `⟨x, y | xᵖ = y^q⟩`.
//!
//! The element `z = xᵖ = y^q` is central and the quotient by `⟨z⟩` is the free
//! product `ℤ_p * ℤ_q`. An element is pinned down by its image there together
//! with its degree under `x ↦ q, y ↦ p` (on which `z` has degree `pq ≠ 0`).

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Syllable {
    /// `x̄ᵘ`, `1 ≤ u < |p|`.
    X(u32),
    /// `ȳᵘ`, `1 ≤ u < |q|`.
    Y(u32),
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Syllable::X(1) => f.write_str("x"),
            Syllable::Y(1) => f.write_str("y"),
            Syllable::X(u) => write!(f, "x^{u}"),
            Syllable::Y(u) => write!(f, "y^{u}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusNormalForm {
    pub degree: i64,
    /// Reduced alternating image in `ℤ_p * ℤ_q`.
    pub syllables: Vec<Syllable>,
}

impl TorusNormalForm {
    pub fn is_trivial(&self) -> bool {
        self.degree == 0 && self.syllables.is_empty()
    }
}

impl fmt::Display for TorusNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {} [", self.degree)?;
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

fn check_params(p: i64, q: i64) -> Result<(u32, u32)> {
    if p.abs() < 2 || q.abs() < 2 || p.gcd(&q) != 1 || p.abs() > u32::MAX as i64 || q.abs() > u32::MAX as i64 {
        return Err(Error::InvalidTorusParameters(p, q));
    }
    Ok((p.unsigned_abs() as u32, q.unsigned_abs() as u32))
}

/// Appends `s` to a reduced sequence, merging with the last syllable.
fn push(out: &mut Vec<Syllable>, s: Syllable, mp: u32, mq: u32) {
    let merged = match (out.last().copied(), s) {
        (Some(Syllable::X(a)), Syllable::X(b)) => Some(Syllable::X((a + b) % mp)),
        (Some(Syllable::Y(a)), Syllable::Y(b)) => Some(Syllable::Y((a + b) % mq)),
        _ => None,
    };
    match merged {
        Some(m) => {
            out.pop();
            if !matches!(m, Syllable::X(0) | Syllable::Y(0)) {
                out.push(m);
            }
        }
        None => out.push(s),
    }
}

/// Reduces a syllable sequence in `ℤ_p * ℤ_q` (the argument need not be reduced).
pub fn reduce(syllables: &[Syllable], p: u32, q: u32) -> Vec<Syllable> {
    let mut out = Vec::with_capacity(syllables.len());
    for &s in syllables {
        let s = match s {
            Syllable::X(u) => Syllable::X(u % p),
            Syllable::Y(u) => Syllable::Y(u % q),
        };
        if !matches!(s, Syllable::X(0) | Syllable::Y(0)) {
            push(&mut out, s, p, q);
        }
    }
    out
}

/// Normal form of a word over `{x, y}`.
pub fn normal_form(p: i64, q: i64, w: &Word) -> Result<TorusNormalForm> {
    let (mp, mq) = check_params(p, q)?;
    let mut degree = 0i64;
    let mut raw = Vec::with_capacity(w.syllable_count());
    for (g, e) in w.syllables() {
        match g.name() {
            "x" => {
                degree += q * e;
                raw.push(Syllable::X(e.rem_euclid(mp as i64) as u32));
            }
            "y" => {
                degree += p * e;
                raw.push(Syllable::Y(e.rem_euclid(mq as i64) as u32));
            }
            other => return Err(Error::UnknownGenerator(other.to_string())),
        }
    }
    Ok(TorusNormalForm {
        degree,
        syllables: reduce(&raw, mp, mq),
    })
}

pub fn is_trivial_torus(p: i64, q: i64, w: &Word) -> Result<bool> {
    Ok(normal_form(p, q, w)?.is_trivial())
}

/// Cyclic reduction in the free product: folds the last syllable into the first
/// while they lie in the same factor.
fn cyclic_reduction(mut s: Vec<Syllable>, p: u32, q: u32) -> Vec<Syllable> {
    while s.len() >= 2 {
        let last = s[s.len() - 1];
        let first = s[0];
        let merged = match (last, first) {
            (Syllable::X(a), Syllable::X(b)) => Syllable::X((a + b) % p),
            (Syllable::Y(a), Syllable::Y(b)) => Syllable::Y((a + b) % q),
            _ => break,
        };
        s.pop();
        s.remove(0);
        if !matches!(merged, Syllable::X(0) | Syllable::Y(0)) {
            s.insert(0, merged);
        }
    }
    s
}

/// Whether `w₁` and `w₂` are conjugate in the torus-knot group.
pub fn conjugate_torus(p: i64, q: i64, w1: &Word, w2: &Word) -> Result<bool> {
    let (mp, mq) = check_params(p, q)?;
    let a = normal_form(p, q, w1)?;
    let b = normal_form(p, q, w2)?;
    if a.degree != b.degree {
        return Ok(false);
    }
    let a = cyclic_reduction(a.syllables, mp, mq);
    let b = cyclic_reduction(b.syllables, mp, mq);
    if a.len() != b.len() {
        return Ok(false);
    }
    if a.len() <= 1 {
        return Ok(a == b);
    }
    let n = a.len();
    Ok((0..n).any(|k| (0..n).all(|i| a[(i + k) % n] == b[i])))
}

//! Slopes `p/q ∈ ℚ ∪ {∞}` and Dehn-filled quotient presentations.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentations::Presentation;
use crate::words::Word;

/// Coprime pair with `q ≥ 0`; `∞` is `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    /// Canonicalizes the sign so that `q ≥ 0` (and `p = 1` for `q = 0`).
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidSlope(format!("{p}/{q} is not a coprime pair")));
        }
        let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
        Ok(Slope { p, q })
    }

    pub fn integral(p: i64) -> Self {
        Slope { p, q: 1 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }
}

impl Ord for Slope {
    /// Rational order with `∞` last.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
            }
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `p/q`, a bare integer `p` (meaning `p/1`), and `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Slope::INFINITY);
        }
        let bad = || Error::InvalidSlope(format!("cannot parse `{s}`"));
        match s.split_once('/') {
            Some((p, q)) => {
                Slope::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?)
            }
            None => Ok(Slope::integral(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl TryFrom<String> for Slope {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Slope> for String {
    fn from(s: Slope) -> String {
        s.to_string()
    }
}

/// `meridianᵖ · longitude^q`.
pub fn slope_element(pres: &Presentation, r: Slope) -> Result<Word> {
    let mu = pres.meridian()?;
    let lambda = pres.longitude()?;
    Ok(&mu.pow(r.p) * &lambda.pow(r.q))
}

/// Adds the slope element as a relator; the name records the slope.
pub fn fill(pres: &Presentation, r: Slope) -> Result<Presentation> {
    let sigma = slope_element(pres, r)?;
    let mut filled = pres.clone();
    filled.name = format!("{}({})", pres.name, r);
    filled.relators.push(sigma);
    Ok(filled)
}

/// `|p·q' − p'·q|`.
pub fn slope_distance(r: Slope, s: Slope) -> u64 {
    (r.p as i128 * s.q as i128 - s.p as i128 * r.q as i128).unsigned_abs() as u64
}

/// Slopes `p/denom` for `p` in `lo..=hi` with `gcd(p, denom) = 1`.
pub fn slope_window(lo: i64, hi: i64, denom: i64) -> Result<Vec<Slope>> {
    if denom < 1 {
        return Err(Error::InvalidSlope(format!("window denominator must be ≥ 1, got {denom}")));
    }
    Ok((lo..=hi).filter(|p| p.gcd(&denom) == 1).map(|p| Slope { p, q: denom }).collect())
}

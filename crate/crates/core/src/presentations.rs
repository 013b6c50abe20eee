//! Finitely presented groups with a peripheral (meridian, longitude) pair,
//! the two shipped knot templates, and abelianization by Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::words::{parse_word, Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
    pub meridian: Option<Word>,
    pub longitude: Option<Word>,
}

impl Presentation {
    /// A presentation without peripheral structure.
    pub fn new(name: impl Into<String>, alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            alphabet.check(r)?;
        }
        Ok(Presentation {
            name: name.into(),
            alphabet,
            relators,
            meridian: None,
            longitude: None,
        })
    }

    pub fn with_peripheral(mut self, meridian: Word, longitude: Word) -> Result<Self> {
        self.alphabet.check(&meridian)?;
        self.alphabet.check(&longitude)?;
        self.meridian = Some(meridian);
        self.longitude = Some(longitude);
        Ok(self)
    }

    pub fn meridian(&self) -> Result<&Word> {
        self.meridian.as_ref().ok_or(Error::MissingPeripheral("meridian"))
    }

    pub fn longitude(&self) -> Result<&Word> {
        self.longitude.as_ref().ok_or(Error::MissingPeripheral("longitude"))
    }

    /// Parses a word over this presentation's alphabet.
    pub fn word(&self, text: &str) -> Result<Word> {
        parse_word(text, &self.alphabet)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_presentation(self))
    }
}

/// Figure-eight knot group on generators `a` (the meridian) and `h`.
///
/// Relator: `a h⁻¹ a⁻¹ h a · (h a h⁻¹ a⁻¹ h)⁻¹`.
/// Longitude: `h a⁻¹ h⁻¹ a² h⁻¹ a⁻¹ h`.
pub fn figure_eight() -> Presentation {
    let alphabet = Alphabet::new(["a", "h"]).expect("static alphabet");
    let lhs = parse_word("a h^-1 a^-1 h a", &alphabet).expect("static word");
    let rhs = parse_word("h a h^-1 a^-1 h", &alphabet).expect("static word");
    let relator = &lhs * &rhs.inverse();
    let meridian = parse_word("a", &alphabet).expect("static word");
    let longitude = parse_word("h a^-1 h^-1 a^2 h^-1 a^-1 h", &alphabet).expect("static word");
    Presentation::new("fig8", alphabet, vec![relator])
        .and_then(|p| p.with_peripheral(meridian, longitude))
        .expect("static presentation")
}

/// Torus knot group `⟨x, y | xᵖ = y^q⟩`.
///
/// The meridian is `x⁻ʳ yˢ` with `ps − qr = 1` and `|r|` minimal (ties go to
/// positive `r`); the longitude is `xᵖ · meridian^(−pq)`.
pub fn torus_knot(p: i64, q: i64) -> Result<Presentation> {
    if p.abs() < 2 || q.abs() < 2 || p.gcd(&q) != 1 {
        return Err(Error::InvalidTorusParameters(p, q));
    }
    let (r, s) = meridian_exponents(p, q);
    let alphabet = Alphabet::new(["x", "y"])?;
    let x = alphabet.word("x")?;
    let y = alphabet.word("y")?;
    let relator = &x.pow(p) * &y.pow(-q);
    let meridian = &x.pow(-r) * &y.pow(s);
    let longitude = &x.pow(p) * &meridian.pow(-p * q);
    Presentation::new(format!("T({p},{q})"), alphabet, vec![relator])?
        .with_peripheral(meridian, longitude)
}

/// Integers `(r, s)` with `p·s − q·r = 1`, `|r|` minimal, ties to `r > 0`.
fn meridian_exponents(p: i64, q: i64) -> (i64, i64) {
    let m = p.abs();
    // q·r ≡ −1 (mod p)
    let egcd = q.rem_euclid(m).extended_gcd(&m);
    let q_inv = egcd.x.rem_euclid(m);
    let r0 = (-q_inv).rem_euclid(m);
    let candidates = [r0, r0 - m];
    let r = *candidates
        .iter()
        .min_by_key(|r| (r.abs(), -r.signum()))
        .expect("two candidates");
    let s = (1 + q * r) / p;
    debug_assert_eq!(p * s - q * r, 1);
    (r, s)
}

/// Finitely generated abelian group `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k`, `d₁ | d₂ | …`, `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank + self.torsion.len() <= 1
    }

    /// Order, or `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Image of a word in `H₁`, in Smith-normal-form coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyClass {
    pub free: Vec<BigInt>,
    /// `(residue, modulus)` pairs with `0 ≤ residue < modulus`.
    pub torsion: Vec<(BigInt, BigInt)>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|(r, _)| r.is_zero())
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.free.iter().map(|v| v.to_string()).collect();
        parts.extend(self.torsion.iter().map(|(r, m)| format!("{r} mod {m}")));
        write!(f, "({})", parts.join(", "))
    }
}

/// Result of diagonalizing the relation matrix: `U·A·V = diag(d)`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, divisibility chain.
    pub diagonal: Vec<BigInt>,
    /// Column transform `V` (n × n, unimodular).
    pub column_transform: Vec<Vec<BigInt>>,
    pub cols: usize,
}

/// Smith normal form of an integer matrix, tracking the column transform.
/// Pivots are chosen by minimal absolute value.
pub fn smith_normal_form(matrix: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = a.len();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // Minimal nonzero entry of the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(diagonal, v, cols);
            };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                for j in t..cols {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut() {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                for row in v.iter_mut() {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    for j in t..cols {
                        let add = a[i][j].clone();
                        a[t][j] += add;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
        }
        diagonal.push(a[t][t].clone());
    }
    finish(diagonal, v, cols)
}

fn finish(diagonal: Vec<BigInt>, mut v: Vec<Vec<BigInt>>, cols: usize) -> SmithForm {
    // Sign-normalize the columns that carry coordinates so classes are reproducible.
    for j in 0..cols {
        let modulus = diagonal.get(j);
        if modulus.is_some_and(|d| d.is_one()) {
            continue;
        }
        let first = (0..cols)
            .map(|i| match modulus {
                Some(d) => v[i][j].mod_floor(d),
                None => v[i][j].clone(),
            })
            .find(|x| !x.is_zero());
        let flip = match (first, modulus) {
            (Some(x), None) => x.is_negative(),
            (Some(x), Some(d)) => x * 2 > *d,
            (None, _) => false,
        };
        if flip {
            for row in v.iter_mut() {
                row[j] = -row[j].clone();
            }
        }
    }
    SmithForm {
        diagonal,
        column_transform: v,
        cols,
    }
}

impl SmithForm {
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup {
            rank: self.cols - self.diagonal.len(),
            torsion: self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    /// Coordinates of an exponent-sum vector.
    pub fn class_of(&self, exponents: &[BigInt]) -> HomologyClass {
        let n = self.cols;
        let y: Vec<BigInt> = (0..n)
            .map(|j| {
                exponents
                    .iter()
                    .zip(&self.column_transform)
                    .map(|(x, row)| x * &row[j])
                    .sum()
            })
            .collect();
        let mut torsion = Vec::new();
        for (j, d) in self.diagonal.iter().enumerate() {
            if !d.is_one() {
                torsion.push((y[j].mod_floor(d), d.clone()));
            }
        }
        HomologyClass {
            free: y[self.diagonal.len()..].to_vec(),
            torsion,
        }
    }
}

/// Exponent-sum vector of `w` over `alphabet`.
pub fn exponent_vector(alphabet: &Alphabet, w: &Word) -> Result<Vec<BigInt>> {
    alphabet.check(w)?;
    Ok(alphabet
        .generators()
        .iter()
        .map(|g| BigInt::from(w.exponent_sum(g)))
        .collect())
}

pub fn relation_matrix(p: &Presentation) -> Vec<Vec<BigInt>> {
    p.relators
        .iter()
        .map(|r| exponent_vector(&p.alphabet, r).expect("relators are checked on construction"))
        .collect()
}

pub fn smith_form(p: &Presentation) -> SmithForm {
    smith_normal_form(&relation_matrix(p), p.alphabet.len())
}

pub fn abelianization(p: &Presentation) -> AbelianGroup {
    smith_form(p).group()
}

pub fn homology_class(p: &Presentation, w: &Word) -> Result<HomologyClass> {
    let x = exponent_vector(&p.alphabet, w)?;
    Ok(smith_form(p).class_of(&x))
}

/// Line-oriented text form: `name:`, `gens:`, `rel:` (repeatable), `meridian:`, `longitude:`.
pub fn render_presentation(p: &Presentation) -> String {
    let mut out = format!("name: {}\ngens: {}\n", p.name, p.alphabet);
    for r in &p.relators {
        out.push_str(&format!("rel: {r}\n"));
    }
    if let Some(m) = &p.meridian {
        out.push_str(&format!("meridian: {m}\n"));
    }
    if let Some(l) = &p.longitude {
        out.push_str(&format!("longitude: {l}\n"));
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name = None;
    let mut gens = None;
    let mut rels = Vec::new();
    let mut meridian = None;
    let mut longitude = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::Syntax(format!("line {}: expected `key: value`", lineno + 1)))?;
        let value = value.trim();
        match key.trim() {
            "name" => name = Some(value.to_string()),
            "gens" => gens = Some(Alphabet::new(value.split_whitespace())?),
            "rel" => rels.push(value.to_string()),
            "meridian" => meridian = Some(value.to_string()),
            "longitude" => longitude = Some(value.to_string()),
            other => {
                return Err(Error::Syntax(format!("line {}: unknown key `{other}`", lineno + 1)))
            }
        }
    }
    let alphabet = gens.ok_or_else(|| Error::Syntax("missing `gens:` line".into()))?;
    let relators = rels
        .iter()
        .map(|r| parse_word(r, &alphabet))
        .collect::<Result<Vec<_>>>()?;
    let meridian = parse_word(&meridian.ok_or(Error::MissingPeripheral("meridian"))?, &alphabet)?;
    let longitude = parse_word(&longitude.ok_or(Error::MissingPeripheral("longitude"))?, &alphabet)?;
    Presentation::new(name.unwrap_or_default(), alphabet, relators)?.with_peripheral(meridian, longitude)
}

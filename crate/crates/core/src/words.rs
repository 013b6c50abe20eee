//! Free-group words in syllable (run-length) form.
//!
//! A [`Word`] is always freely reduced: adjacent syllables carry distinct
//! generators and no exponent is zero. The empty word is the identity.
//! Conventions follow the usual knot-group notation: `g^b = b⁻¹ g b` and
//! `[g, h] = g h g⁻¹ h⁻¹`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named generator. Names match `[a-zA-Z][a-zA-Z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Generator(String);

impl Generator {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(Generator(name))
        } else {
            Err(Error::InvalidGeneratorName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Generator {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Generator::new(s)
    }
}

impl From<Generator> for String {
    fn from(g: Generator) -> String {
        g.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered set of generators. Position in the alphabet fixes the integer
/// encoding used by the enumeration kernels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    gens: Vec<Generator>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut gens: Vec<Generator> = Vec::new();
        for name in names {
            let g = Generator::new(name)?;
            if gens.contains(&g) {
                return Err(Error::DuplicateGenerator(g.0));
            }
            gens.push(g);
        }
        Ok(Alphabet { gens })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.0 == name)
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.gens.iter().find(|g| g.0 == name)
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.gens.contains(g)
    }

    /// The single-generator word `g¹`.
    pub fn word(&self, name: &str) -> Result<Word> {
        let g = self
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Word::generator(g.clone()))
    }

    /// Checks that every generator of `w` belongs to this alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        for (g, _) in w.syllables() {
            if !self.contains(g) {
                return Err(Error::UnknownGenerator(g.0.clone()));
            }
        }
        Ok(())
    }

    /// Encodes `w` letter by letter: generator `i` is `2i`, its inverse `2i + 1`.
    pub fn encode(&self, w: &Word) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(w.len());
        for (g, e) in w.syllables() {
            let i = self
                .index_of(g.name())
                .ok_or_else(|| Error::UnknownGenerator(g.0.clone()))?;
            let letter = if *e > 0 { 2 * i } else { 2 * i + 1 };
            out.extend(std::iter::repeat(letter).take(e.unsigned_abs() as usize));
        }
        Ok(out)
    }

    /// Inverse of [`Alphabet::encode`]; the result is freely reduced.
    pub fn decode(&self, letters: &[usize]) -> Word {
        free_reduce(
            &letters
                .iter()
                .map(|&l| {
                    let e = if l % 2 == 0 { 1 } else { -1 };
                    (self.gens[l / 2].clone(), e)
                })
                .collect::<Vec<_>>(),
        )
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.gens.iter().map(|g| g.name()).collect();
        f.write_str(&names.join(" "))
    }
}

/// Formal inverse of an encoded letter.
#[inline]
pub fn inverse_letter(l: usize) -> usize {
    l ^ 1
}

/// Freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<(Generator, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: Generator) -> Self {
        Word {
            syllables: vec![(g, 1)],
        }
    }

    pub fn syllables(&self) -> &[(Generator, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter length.
    pub fn len(&self) -> usize {
        self.syllables
            .iter()
            .map(|(_, e)| e.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Letters as `(generator, ±1)` pairs.
    pub fn letters(&self) -> impl Iterator<Item = (&Generator, i64)> + '_ {
        self.syllables
            .iter()
            .flat_map(|(g, e)| std::iter::repeat((g, e.signum())).take(e.unsigned_abs() as usize))
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self.syllables.iter().rev().map(|(g, e)| (g.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        if k == 0 || self.is_identity() {
            return Word::identity();
        }
        let base = if k > 0 { self.clone() } else { self.inverse() };
        let n = k.unsigned_abs();
        // Only the cyclically reduced core repeats; the conjugator stays outside.
        let (core, conj) = cyclic_reduce(&base);
        let mut raw: Vec<(Generator, i64)> = Vec::with_capacity(core.syllables.len() * n as usize);
        for _ in 0..n {
            raw.extend(core.syllables.iter().cloned());
        }
        conjugate(&free_reduce(&raw), &conj)
    }

    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.syllables
            .iter()
            .filter(|(h, _)| h == g)
            .map(|(_, e)| e)
            .sum()
    }

    /// Image under the homomorphism determined by `f` on generators.
    pub fn substitute<F>(&self, mut f: F) -> Word
    where
        F: FnMut(&Generator) -> Word,
    {
        let mut raw = Vec::new();
        for (g, e) in &self.syllables {
            let img = f(g).pow(*e);
            raw.extend(img.syllables);
        }
        free_reduce(&raw)
    }

    /// Distinct generators in order of first appearance.
    pub fn support(&self) -> Vec<Generator> {
        let mut out: Vec<Generator> = Vec::new();
        for (g, _) in &self.syllables {
            if !out.contains(g) {
                out.push(g.clone());
            }
        }
        out
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        let mut raw = self.syllables.clone();
        raw.extend(rhs.syllables.iter().cloned());
        free_reduce(&raw)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Parses whitespace-separated syllables `g`, `g^k`, `g^-k`.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let mut raw = Vec::new();
    for token in text.split_whitespace() {
        let (name, exp) = match token.split_once('^') {
            Some((name, exp)) => {
                let e: i64 = exp
                    .parse()
                    .map_err(|_| Error::Syntax(format!("malformed exponent in `{token}`")))?;
                (name, e)
            }
            None => (token, 1),
        };
        if !is_valid_name(name) {
            return Err(Error::Syntax(format!("malformed generator in `{token}`")));
        }
        let g = alphabet
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        if exp == 0 {
            return Err(Error::ZeroExponent(name.to_string()));
        }
        raw.push((g.clone(), exp));
    }
    Ok(free_reduce(&raw))
}

/// Free reduction of an arbitrary syllable sequence (zero exponents allowed).
pub fn free_reduce(raw: &[(Generator, i64)]) -> Word {
    let mut stack: Vec<(Generator, i64)> = Vec::with_capacity(raw.len());
    for (g, e) in raw {
        if *e == 0 {
            continue;
        }
        match stack.last_mut() {
            Some((top, te)) if top == g => {
                *te += e;
                if *te == 0 {
                    stack.pop();
                }
            }
            _ => stack.push((g.clone(), *e)),
        }
    }
    Word { syllables: stack }
}

/// Splits `w` as `conjugator⁻¹ · core · conjugator` with `core` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let mut syl: &[(Generator, i64)] = &w.syllables;
    // Peeled outer pairs, outermost first: w = s₁ s₂ … core … s₂⁻¹ s₁⁻¹.
    let mut peeled: Vec<(Generator, i64)> = Vec::new();
    while syl.len() >= 2 {
        let (g0, e0) = &syl[0];
        let (g1, e1) = &syl[syl.len() - 1];
        if g0 != g1 {
            break;
        }
        if e0 + e1 == 0 {
            peeled.push((g0.clone(), *e0));
            syl = &syl[1..syl.len() - 1];
        } else {
            // g^e0 u g^e1 = g^-e1 (g^(e0+e1) u) g^e1
            let mut core = vec![(g0.clone(), e0 + e1)];
            core.extend(syl[1..syl.len() - 1].iter().cloned());
            let inner_conj = Word {
                syllables: vec![(g1.clone(), *e1)],
            };
            let outer = Word { syllables: peeled }.inverse();
            return (Word { syllables: core }, &inner_conj * &outer);
        }
    }
    let core = Word {
        syllables: syl.to_vec(),
    };
    (core, Word { syllables: peeled }.inverse())
}

/// `b⁻¹ g b`.
pub fn conjugate(g: &Word, b: &Word) -> Word {
    &(&b.inverse() * g) * b
}

/// `g h g⁻¹ h⁻¹`.
pub fn commutator(g: &Word, h: &Word) -> Word {
    let mut raw = g.syllables.clone();
    raw.extend(h.syllables.iter().cloned());
    raw.extend(g.inverse().syllables);
    raw.extend(h.inverse().syllables);
    free_reduce(&raw)
}

/// `(v^u)⁻¹ v (v^u) v⁻²` with `v^u = u⁻¹ v u`.
pub fn bmt_word(v: &Word, u: &Word) -> Word {
    let vu = conjugate(v, u);
    let mut raw = vu.inverse().syllables;
    raw.extend(v.syllables.iter().cloned());
    raw.extend(vu.syllables);
    raw.extend(v.pow(-2).syllables);
    free_reduce(&raw)
}

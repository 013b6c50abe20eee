//! Builders for the explicit elements used in slope-set arguments.
//!
//! Each builder returns a freely reduced word over the alphabet of its inputs.

use crate::error::{Error, Result};
use crate::presentations::{figure_eight, torus_knot};
use crate::words::{bmt_word, commutator, conjugate, free_reduce, Word};

/// `g^{g^{w_n}} g⁻²` with `g = [x, y]` and `w_n = y (xy)^{n+1}` in the group of T(p,q).
pub fn torus_gn(p: i64, q: i64, n: u32) -> Result<Word> {
    if n == 0 {
        return Err(Error::InvalidParameter("torus_gn needs n ≥ 1".into()));
    }
    let t = torus_knot(p, q)?;
    let x = t.alphabet.word("x")?;
    let y = t.alphabet.word("y")?;
    let g = commutator(&x, &y);
    let wn = &y * &(&x * &y).pow(n as i64 + 1);
    Ok(bmt_word(&g, &wn))
}

/// `g^{g^α} g⁻²`; lies in the normal closure of `g`.
pub fn bmt_conjugate(g: &Word, alpha: &Word) -> Word {
    bmt_word(g, alpha)
}

/// `[a g_k a⁻¹, σ]`, where `a g_k a⁻¹ = g_k^{a⁻¹}`.
pub fn separation_commutator(a: &Word, gk: &Word, sigma: &Word) -> Word {
    commutator(&conjugate(gk, &a.inverse()), sigma)
}

/// `h^{qstep·n₁n₂ + 1} g^{n₁n₂}`.
pub fn separation_combine(h: &Word, g: &Word, qstep: u32, n1: u32, n2: u32) -> Result<Word> {
    if qstep == 0 || n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter("qstep, n1 and n2 must be positive".into()));
    }
    let nn = n1 as i64 * n2 as i64;
    Ok(&h.pow(qstep as i64 * nn + 1) * &g.pow(nn))
}

/// `gᵐ hⁿ`.
pub fn powered_product(g: &Word, h: &Word, m: i64, n: i64) -> Result<Word> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("exponents must be nonzero".into()));
    }
    Ok(&g.pow(m) * &h.pow(n))
}

/// `g^{p+pm−1} s g^{−p+1} s⁻¹`.
pub fn nonrigid_alpha(g: &Word, s: &Word, p: u32, m: u32) -> Result<Word> {
    if p == 0 || m == 0 {
        return Err(Error::InvalidParameter("p and m must be positive".into()));
    }
    let (p, m) = (p as i64, m as i64);
    let mut raw = g.pow(p + p * m - 1).syllables().to_vec();
    raw.extend_from_slice(s.syllables());
    raw.extend_from_slice(g.pow(1 - p).syllables());
    raw.extend_from_slice(s.inverse().syllables());
    Ok(free_reduce(&raw))
}

/// `[a, h]` in the figure-eight group.
pub fn fig8_persistent() -> Word {
    let p = figure_eight();
    commutator(&p.alphabet.word("a").expect("a"), &p.alphabet.word("h").expect("h"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::homology_class;
    use crate::torusnf::is_trivial_torus;
    use crate::words::parse_word;

    fn fig(text: &str) -> Word {
        figure_eight().word(text).unwrap()
    }

    /// The closed form with `X = x⁻¹`, `Y = y⁻¹`, written letter by letter.
    fn closed_form(n: u32) -> Word {
        let t = torus_knot(2, 3).unwrap();
        let mut s = String::new();
        let rep = |s: &mut String, unit: &str, k: u32| {
            for _ in 0..k {
                s.push_str(unit);
            }
        };
        rep(&mut s, "YX", n);
        s.push_str("YYX");
        s.push('y');
        rep(&mut s, "xy", n + 2);
        s.push_str("XYYX");
        rep(&mut s, "YX", n);
        s.push('Y');
        s.push_str("xyy");
        rep(&mut s, "xy", n - 1);
        s.push_str("xyyxYXyxYX");
        let text: Vec<&str> = s
            .chars()
            .map(|c| match c {
                'x' => "x",
                'y' => "y",
                'X' => "x^-1",
                _ => "y^-1",
            })
            .collect();
        parse_word(&text.join(" "), &t.alphabet).unwrap()
    }

    #[test]
    fn torus_gn_matches_closed_form() {
        for n in 1..=4 {
            assert_eq!(torus_gn(2, 3, n).unwrap(), closed_form(n), "n = {n}");
        }
        let t = torus_knot(2, 3).unwrap();
        let g1 = torus_gn(2, 3, 1).unwrap();
        assert!(homology_class(&t, &g1).unwrap().is_zero());
        assert!(!is_trivial_torus(2, 3, &g1).unwrap());
        assert!(torus_gn(2, 3, 0).is_err());
    }

    #[test]
    fn bmt_and_separation() {
        assert_eq!(bmt_conjugate(&fig("a"), &fig("h")), fig("h^-1 a^-1 h a h^-1 a h a^-2"));
        let sigma = fig("a^3 h");
        assert_eq!(
            separation_commutator(&Word::identity(), &fig("h"), &sigma),
            commutator(&fig("h"), &sigma)
        );
        let out = separation_commutator(&fig("a h"), &fig("h a^2"), &sigma);
        assert!(homology_class(&figure_eight(), &out).unwrap().is_zero());
    }

    #[test]
    fn products_and_alpha() {
        let (h, g) = (fig("h"), fig("a"));
        assert_eq!(separation_combine(&h, &g, 1, 1, 1).unwrap(), fig("h^2 a"));
        assert_eq!(powered_product(&g, &h, 1, 1).unwrap(), fig("a h"));
        assert!(powered_product(&g, &g.inverse(), 1, 1).unwrap().is_identity());
        assert!(powered_product(&g, &h, 0, 1).is_err());
        assert_eq!(nonrigid_alpha(&g, &h, 2, 1).unwrap(), fig("a^3 h a^-1 h^-1"));
        assert_eq!(fig8_persistent(), fig("a h a^-1 h^-1"));
    }
}

//! Numerical PSL(2,ℂ) representations of knot groups.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentations::Presentation;
use crate::words::Word;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A 2×2 complex matrix of determinant one, up to sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl ProjectiveMatrix {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        ProjectiveMatrix { a, b, c, d }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        ProjectiveMatrix::new(one, zero, zero, one)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Self {
        ProjectiveMatrix::new(self.d, -self.b, -self.c, self.a)
    }

    fn scale(&self, s: Complex64) -> Self {
        ProjectiveMatrix::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Rescales to determinant one and picks the sign representative whose
    /// trace is canonical (see [`canonical_sign`]); traceless matrices get a
    /// first significant entry with positive real part (or positive imaginary
    /// part when that is zero).
    pub fn renormalize(&self) -> Self {
        let det = self.det();
        let m = if det.norm() > 0.0 { self.scale(det.sqrt().inv()) } else { *self };
        let tr = m.a + m.d;
        let flip = if tr.norm() > DEFAULT_TOLERANCE {
            canonical_sign(tr) != tr
        } else {
            m.entries()
                .into_iter()
                .find(|z| z.norm() > DEFAULT_TOLERANCE)
                .is_some_and(|z| z.re < -DEFAULT_TOLERANCE || (z.re.abs() <= DEFAULT_TOLERANCE && z.im < 0.0))
        };
        if flip {
            m.scale(Complex64::new(-1.0, 0.0))
        } else {
            m
        }
    }

    /// Largest entrywise distance to `other` or to `−other`.
    pub fn distance(&self, other: &Self) -> f64 {
        let plus = self.entries().iter().zip(other.entries()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        let minus = self.entries().iter().zip(other.entries()).map(|(x, y)| (x + y).norm()).fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn commutes_with(&self, other: &Self, tol: f64) -> bool {
        (*self * *other).approx_eq(&(*other * *self), tol)
    }
}

impl Mul for ProjectiveMatrix {
    type Output = ProjectiveMatrix;

    fn mul(self, o: ProjectiveMatrix) -> ProjectiveMatrix {
        ProjectiveMatrix::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl fmt::Display for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `z` or `−z`, whichever has nonnegative real part (ties: nonnegative imaginary part).
pub fn canonical_sign(z: Complex64) -> Complex64 {
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        -z
    } else {
        z
    }
}

/// Trace, well defined up to sign; returned with the canonical sign.
pub fn trace(m: &ProjectiveMatrix) -> Complex64 {
    canonical_sign(m.a + m.d)
}

#[derive(Clone, Debug)]
pub struct Representation {
    assignment: BTreeMap<String, ProjectiveMatrix>,
    pub tolerance: f64,
    validated: bool,
}

#[derive(Serialize, Deserialize)]
struct RepresentationFile {
    #[serde(default = "default_tolerance")]
    tolerance: f64,
    assignment: BTreeMap<String, [[f64; 2]; 4]>,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl Representation {
    /// An unvalidated representation; see [`Representation::validate`].
    pub fn new(assignment: BTreeMap<String, ProjectiveMatrix>, tolerance: f64) -> Self {
        Representation {
            assignment,
            tolerance,
            validated: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RepresentationFile =
            serde_json::from_str(text).map_err(|e| Error::Syntax(format!("representation file: {e}")))?;
        let c = |[re, im]: [f64; 2]| Complex64::new(re, im);
        let assignment = file
            .assignment
            .into_iter()
            .map(|(g, [a, b, cc, d])| (g, ProjectiveMatrix::new(c(a), c(b), c(cc), c(d))))
            .collect();
        Ok(Representation::new(assignment, file.tolerance))
    }

    pub fn to_json(&self) -> String {
        let assignment = self
            .assignment
            .iter()
            .map(|(g, m)| (g.clone(), m.entries().map(|z| [z.re, z.im])))
            .collect();
        let file = RepresentationFile {
            tolerance: self.tolerance,
            assignment,
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn get(&self, generator: &str) -> Option<&ProjectiveMatrix> {
        self.assignment.get(generator)
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Marks the representation validated when every relator of `pres` holds.
    pub fn validate(&mut self, pres: &Presentation) -> Result<bool> {
        self.validated = relator_check(self, pres, self.tolerance)?;
        Ok(self.validated)
    }
}

/// Image of `w`, renormalized.
pub fn evaluate(rep: &Representation, w: &Word) -> Result<ProjectiveMatrix> {
    let mut acc = ProjectiveMatrix::identity();
    for (g, e) in w.syllables() {
        let m = rep
            .assignment
            .get(g.name())
            .ok_or_else(|| Error::UnknownGenerator(g.name().to_string()))?;
        let base = if *e > 0 { *m } else { m.inverse() };
        for _ in 0..e.unsigned_abs() {
            acc = acc * base;
        }
    }
    Ok(acc.renormalize())
}

/// `ω = (−1 + √3 i)/2`.
pub fn omega() -> Complex64 {
    Complex64::new(-0.5, 3f64.sqrt() / 2.0)
}

/// Holonomy of the figure-eight complement: `a ↦ [[1,1],[0,1]]`, `h ↦ [[1,0],[−ω,1]]`.
pub fn fig8_holonomy() -> Representation {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let assignment = BTreeMap::from([
        ("a".to_string(), ProjectiveMatrix::new(one, one, zero, one)),
        ("h".to_string(), ProjectiveMatrix::new(one, zero, -omega(), one)),
    ]);
    let mut rep = Representation::new(assignment, DEFAULT_TOLERANCE);
    let ok = rep
        .validate(&crate::presentations::figure_eight())
        .expect("matching alphabet");
    debug_assert!(ok);
    rep
}

/// Every relator maps to `±I` within `tol`.
pub fn relator_check(rep: &Representation, pres: &Presentation, tol: f64) -> Result<bool> {
    for r in &pres.relators {
        if !evaluate(rep, r)?.approx_eq(&ProjectiveMatrix::identity(), tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `tr² ρ(w)` is within `tol` of 4 (parabolic or trivial image).
pub fn peripheral_test(rep: &Representation, w: &Word, tol: f64) -> Result<bool> {
    if !rep.validated {
        return Err(Error::NotValidated);
    }
    let t = trace(&evaluate(rep, w)?);
    Ok((t * t - 4.0).norm() <= tol)
}

/// For `ρ(g) = diag(α, α⁻¹)` and `ρ(h) = [[x,y],[z,u]]`: the value
/// `(α−α⁻¹)²((xu)² − xu) − 1`, which is `−ad` for the diagonal entries `a, d`
/// of `ρ(g^h)` and so determines the trace of `g^{g^h} g⁻²`.
pub fn invariant_nonperipheral(alpha: Complex64, x: Complex64, u: Complex64) -> Complex64 {
    let s = alpha - alpha.inv();
    let t = x * u;
    s * s * (t * t - t) - 1.0
}

/// Trace of `g^{g^h} g⁻²` (up to sign) for diagonal `ρ(g)`, from the product
/// `ad` of the diagonal entries of `ρ(g^h)`.
pub fn trace_from_diagonal_product(alpha: Complex64, ad: Complex64) -> Complex64 {
    let a1 = alpha + alpha.inv();
    let a3 = alpha.powi(3) + alpha.inv().powi(3);
    canonical_sign(ad * (a1 - a3) + a3)
}

/// `2z⁴α⁴ + 2`: the trace (up to sign) of `g^{g^h} g⁻²` for
/// `ρ(g) = [[1,α],[0,1]]` and `ρ(h) = [[x,y],[z,u]]`.
pub fn invariant_peripheral(alpha: Complex64, z: Complex64) -> Complex64 {
    2.0 * z.powi(4) * alpha.powi(4) + 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::figure_eight;
    use crate::words::{commutator, conjugate};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fig8_golden_values() {
        let rep = fig8_holonomy();
        let p = figure_eight();
        assert!(rep.is_validated());
        let mu = evaluate(&rep, p.meridian().unwrap()).unwrap();
        assert!(mu.approx_eq(&ProjectiveMatrix::new(c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)), 1e-12));
        let lambda = evaluate(&rep, p.longitude().unwrap()).unwrap();
        let expected = ProjectiveMatrix::new(c(1., 0.), c(0., 2. * 3f64.sqrt()), c(0., 0.), c(1., 0.));
        for (x, y) in lambda.entries().iter().zip(expected.entries()) {
            assert!((x - y).norm() < 1e-9, "{lambda}");
        }
        assert!(mu.commutes_with(&lambda, 1e-9));
        assert_eq!(trace(&mu), c(2., 0.));
        let t = trace(&evaluate(&rep, &commutator(&p.word("a").unwrap(), &p.word("h").unwrap())).unwrap());
        assert!((t - 2.0).norm() > 0.1);
        assert!(peripheral_test(&rep, &Word::identity(), 1e-9).unwrap());
    }

    #[test]
    fn trace_sign_convention() {
        assert_eq!(trace(&ProjectiveMatrix::identity()), c(2., 0.));
        assert_eq!(canonical_sign(c(-1., 3.)), c(1., -3.));
        assert_eq!(canonical_sign(c(0., -3.)), c(0., 3.));
    }

    #[test]
    fn conjugation_invariance_of_trace() {
        let rep = fig8_holonomy();
        let p = figure_eight();
        let w = p.word("a^2 h^-1 a h^3").unwrap();
        let t = trace(&evaluate(&rep, &w).unwrap());
        for cj in ["h", "a h^-2", "h a h a^-1"] {
            let t2 = trace(&evaluate(&rep, &conjugate(&w, &p.word(cj).unwrap())).unwrap());
            assert!((t - t2).norm() < 1e-9);
        }
    }

    #[test]
    fn relator_check_detects_perturbation() {
        let p = figure_eight();
        let mut rep = fig8_holonomy();
        assert!(relator_check(&rep, &p, 1e-9).unwrap());
        let mut h = *rep.get("h").unwrap();
        h.c += 1e-3;
        rep.assignment.insert("h".into(), h);
        assert!(!relator_check(&rep, &p, 1e-9).unwrap());
        let empty = Presentation::new("free", p.alphabet.clone(), vec![]).unwrap();
        assert!(relator_check(&rep, &empty, 1e-9).unwrap());
    }

    #[test]
    fn loaded_representations_must_be_validated() {
        let text = fig8_holonomy().to_json();
        let mut rep = Representation::from_json(&text).unwrap();
        let a = figure_eight().word("a").unwrap();
        assert_eq!(peripheral_test(&rep, &a, 1e-9), Err(Error::NotValidated));
        assert!(rep.validate(&figure_eight()).unwrap());
        assert!(peripheral_test(&rep, &a, 1e-9).unwrap());
        assert!(Representation::from_json("{").is_err());
    }

    #[test]
    fn invariant_degenerate_cases() {
        assert_eq!(invariant_nonperipheral(c(1., 0.), c(2., 1.), c(0.5, 0.)), c(-1., 0.));
        assert_eq!(invariant_peripheral(c(3., 1.), c(0., 0.)), c(2., 0.));
        let z = -omega();
        let alpha = c(1., 2. * 3f64.sqrt());
        assert!(((invariant_peripheral(alpha, z) - 2.0).norm() - 338.0).abs() < 1e-9);
    }
}

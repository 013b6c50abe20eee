//! The composed verdict pipeline and slope scans.
//!
//! Stages, in order: relator rewriting (trivial), homology (nontrivial),
//! coset enumeration (exact when it completes, trivial when the word's path
//! closes early), finite-quotient search (nontrivial). Every stage is sound on
//! its own, so the first conclusive stage decides; anything else is Unknown.
//!
//! The trivial-side stages work on a canonical cyclic representative of the
//! word, and the nontrivial side is invariant under conjugation and
//! inversion, so `w`, `w⁻¹` and every conjugate of `w` get the same verdict
//! kind under the same budget.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fillings::{fill, Slope};
use crate::oracles::certificate::{Certificate, COSET_TABLE_TARGET};
use crate::oracles::coset::{enumerate, Enumeration, EnumerationLimits};
use crate::oracles::groups::{target_ladder, Target};
use crate::oracles::quotient::{finite_quotient_search, SearchLimits};
use crate::oracles::rewrite::{canonical_cyclic, Rewriter};
use crate::presentations::{abelianization, homology_class, Presentation};
use crate::words::Word;

pub const DEFAULT_MAX_COSETS: usize = 200_000;

#[derive(Clone, Debug, Serialize)]
pub struct Budget {
    pub max_cosets: usize,
    pub sym_max: usize,
    pub psl2_primes: Vec<u64>,
    pub max_search_nodes: u64,
    pub rewrite_nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeout_ms: Option<u64>,
    /// Explicit targets tried after the built-in ladder.
    #[serde(skip)]
    pub extra_targets: Vec<Target>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cosets: DEFAULT_MAX_COSETS,
            sym_max: 6,
            psl2_primes: vec![5, 7, 11, 13],
            max_search_nodes: 50_000_000,
            rewrite_nodes: 2_000,
            timeout_ms: None,
            extra_targets: Vec::new(),
        }
    }
}

impl Budget {
    pub fn targets(&self) -> Vec<Target> {
        let mut t = target_ladder(self.sym_max, &self.psl2_primes);
        t.extend(self.extra_targets.iter().cloned());
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Trivial,
    Nontrivial,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Trivial => "trivial",
            VerdictKind::Nontrivial => "nontrivial",
            VerdictKind::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSpent {
    pub cosets: u64,
    pub homs_tried: u64,
    pub search_nodes: u64,
    pub rewrite_nodes: usize,
    /// Wall time; omitted from reports that must be byte-reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    pub certificate: Certificate,
    pub budgets: BudgetSpent,
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        self.verdict
    }

    pub fn is_trivial(&self) -> bool {
        self.verdict == VerdictKind::Trivial
    }

    pub fn is_nontrivial(&self) -> bool {
        self.verdict == VerdictKind::Nontrivial
    }

    pub fn without_timing(mut self) -> Self {
        self.budgets.wall_ms = None;
        self
    }
}

/// Returns a certificate iff `w` has a nonzero homology class.
pub fn abelian_test(pres: &Presentation, w: &Word) -> Result<Option<Certificate>> {
    let class = homology_class(pres, w)?;
    if class.is_zero() {
        return Ok(None);
    }
    Ok(Some(Certificate::Homology {
        group: abelianization(pres).to_string(),
        class: class.to_string(),
    }))
}

fn encoded_relators(pres: &Presentation) -> Result<Vec<Vec<usize>>> {
    pres.relators.iter().map(|r| pres.alphabet.encode(r)).collect()
}

fn coset_table_certificate(
    pres: &Presentation,
    table: &crate::oracles::coset::CosetTable,
    key: &[usize],
) -> (VerdictKind, Certificate) {
    if table.trace(0, key) == 0 {
        return (
            VerdictKind::Trivial,
            Certificate::CosetTable {
                target: COSET_TABLE_TARGET.into(),
                cosets: table.cosets(),
                images: None,
                word_image: None,
            },
        );
    }
    let images = pres
        .alphabet
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let perm = table.permutation(i).into_iter().map(|x| x + 1).collect();
            (g.name().to_string(), perm)
        })
        .collect();
    (
        VerdictKind::Nontrivial,
        Certificate::CosetTable {
            target: COSET_TABLE_TARGET.into(),
            cosets: table.cosets(),
            images: Some(images),
            word_image: Some(format!("moves a coset ({} -> {})", 1, table.trace(0, key) + 1)),
        },
    )
}

/// Sound three-valued decision of `w = 1` in the group presented by `pres`.
pub fn certify(pres: &Presentation, w: &Word, budget: &Budget) -> Result<Verdict> {
    let start = Instant::now();
    let deadline = budget.timeout_ms.map(|ms| start + Duration::from_millis(ms));
    let letters = pres.alphabet.encode(w)?;
    let key = canonical_cyclic(&letters);
    let mut spent = BudgetSpent::default();
    let finish = |kind, certificate, mut spent: BudgetSpent| {
        spent.wall_ms = Some(start.elapsed().as_millis() as u64);
        Ok(Verdict {
            verdict: kind,
            certificate,
            budgets: spent,
        })
    };

    let rewrite = Rewriter::new(&encoded_relators(pres)?).reduce(&key, budget.rewrite_nodes);
    spent.rewrite_nodes = rewrite.nodes;
    if rewrite.trivial {
        let cert = Certificate::RelatorRewriting {
            steps: rewrite.steps,
            nodes: rewrite.nodes,
        };
        return finish(VerdictKind::Trivial, cert, spent);
    }

    if let Some(cert) = abelian_test(pres, w)? {
        return finish(VerdictKind::Nontrivial, cert, spent);
    }

    let limits = EnumerationLimits {
        max_cosets: budget.max_cosets,
        deadline,
    };
    match enumerate(pres, Some(&key), &limits)? {
        Enumeration::Complete(table) => {
            spent.cosets = table.cosets() as u64;
            let (kind, cert) = coset_table_certificate(pres, &table, &key);
            return finish(kind, cert, spent);
        }
        Enumeration::TraceClosed { defined } => {
            spent.cosets = defined;
            let cert = Certificate::CosetTrace {
                target: COSET_TABLE_TARGET.into(),
                max_cosets: budget.max_cosets,
                cosets_defined: defined,
            };
            return finish(VerdictKind::Trivial, cert, spent);
        }
        Enumeration::Exceeded { defined } | Enumeration::TimedOut { defined } => spent.cosets = defined,
    }

    let search = SearchLimits {
        max_nodes: budget.max_search_nodes,
        deadline,
    };
    let (quotient, stats) = finite_quotient_search(pres, w, &budget.targets(), &search)?;
    spent.homs_tried = stats.homs_tried;
    spent.search_nodes = stats.nodes;
    if let Some(q) = quotient {
        let cert = Certificate::from_quotient(&q, w)?;
        return finish(VerdictKind::Nontrivial, cert, spent);
    }
    let reason = if stats.budget_exhausted || deadline.is_some_and(|d| Instant::now() >= d) {
        "budget exhausted"
    } else {
        "no stage was conclusive"
    };
    finish(VerdictKind::Unknown, Certificate::None { reason: reason.into() }, spent)
}

/// Verdicts for `w` in every filling `fill(pres, r)`. Slopes are independent,
/// so they run in parallel; the map is ordered by slope.
pub fn sk_scan(pres: &Presentation, w: &Word, slopes: &[Slope], budget: &Budget) -> Result<BTreeMap<Slope, Verdict>> {
    pres.alphabet.check(w)?;
    slopes
        .par_iter()
        .map(|&r| {
            let filled = fill(pres, r)?;
            Ok((r, certify(&filled, w, budget)?))
        })
        .collect()
}

/// What each stage concludes when run on its own (no short-circuiting).
#[derive(Clone, Debug, Default)]
pub struct StageReport {
    pub rewriting_trivial: bool,
    pub homology: Option<Certificate>,
    /// `Some(trivial)` when the enumeration completed.
    pub enumeration_exact: Option<bool>,
    pub trace_closed: bool,
    pub quotient: Option<Certificate>,
}

impl StageReport {
    pub fn says_trivial(&self) -> bool {
        self.rewriting_trivial || self.trace_closed || self.enumeration_exact == Some(true)
    }

    pub fn says_nontrivial(&self) -> bool {
        self.homology.is_some() || self.quotient.is_some() || self.enumeration_exact == Some(false)
    }

    pub fn contradiction(&self) -> bool {
        self.says_trivial() && self.says_nontrivial()
    }
}

/// Runs every stage independently; used to cross-check stage soundness.
pub fn run_all_stages(pres: &Presentation, w: &Word, budget: &Budget) -> Result<StageReport> {
    let key = canonical_cyclic(&pres.alphabet.encode(w)?);
    let mut report = StageReport {
        rewriting_trivial: key.is_empty()
            || Rewriter::new(&encoded_relators(pres)?).reduce(&key, budget.rewrite_nodes).trivial,
        homology: abelian_test(pres, w)?,
        ..StageReport::default()
    };
    match enumerate(pres, Some(&key), &EnumerationLimits::cosets(budget.max_cosets))? {
        Enumeration::Complete(t) => report.enumeration_exact = Some(t.trace(0, &key) == 0),
        Enumeration::TraceClosed { .. } => report.trace_closed = true,
        _ => {}
    }
    let search = SearchLimits {
        max_nodes: budget.max_search_nodes,
        deadline: None,
    };
    if let (Some(q), _) = finite_quotient_search(pres, w, &budget.targets(), &search)? {
        report.quotient = Some(Certificate::from_quotient(&q, w)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fillings::slope_element;
    use crate::oracles::certificate::replay;
    use crate::presentations::{figure_eight, torus_knot};
    use crate::words::commutator;

    fn small() -> Budget {
        Budget {
            max_cosets: 20_000,
            sym_max: 5,
            psl2_primes: vec![5, 7],
            ..Budget::default()
        }
    }

    #[test]
    fn longitude_is_trivial_in_zero_filling() {
        let p = figure_eight();
        let f = fill(&p, Slope::integral(0)).unwrap();
        let v = certify(&f, p.longitude().unwrap(), &small()).unwrap();
        assert_eq!(v.kind(), VerdictKind::Trivial);
        assert!(matches!(v.certificate, Certificate::RelatorRewriting { .. }));
    }

    #[test]
    fn trefoil_commutator_verdicts() {
        let t = torus_knot(2, 3).unwrap();
        let c = commutator(&t.word("x").unwrap(), &t.word("y").unwrap());
        for (p, kind) in [(5, VerdictKind::Trivial), (7, VerdictKind::Trivial), (6, VerdictKind::Nontrivial)] {
            let f = fill(&t, Slope::integral(p)).unwrap();
            let v = certify(&f, &c, &small()).unwrap();
            assert_eq!(v.kind(), kind, "slope {p}: {v:?}");
            assert!(replay(&f, &c, &v.certificate, &[]).unwrap(), "slope {p}: {v:?}");
        }
    }

    #[test]
    fn homology_catches_meridian() {
        let p = figure_eight();
        let f = fill(&p, Slope::integral(3)).unwrap();
        let a = p.word("a").unwrap();
        let cert = abelian_test(&f, &a).unwrap().expect("a is nonzero in Z/3");
        assert_eq!(
            cert,
            Certificate::Homology {
                group: "Z/3".into(),
                class: "(1 mod 3)".into()
            }
        );
        let c = commutator(&a, &p.word("h").unwrap());
        assert!(abelian_test(&f, &c).unwrap().is_none());
        let f = fill(&p, Slope::INFINITY).unwrap();
        assert!(abelian_test(&f, &a).unwrap().is_none());
    }

    #[test]
    fn slope_element_trivial_at_its_own_slope() {
        let p = figure_eight();
        let r = Slope::integral(2);
        let s = slope_element(&p, r).unwrap();
        let scan = sk_scan(&p, &s, &[r], &small()).unwrap();
        assert!(scan[&r].is_trivial());
    }

    #[test]
    fn scan_is_ordered_and_deterministic() {
        let t = torus_knot(2, 3).unwrap();
        let c = commutator(&t.word("x").unwrap(), &t.word("y").unwrap());
        let slopes: Vec<Slope> = [7, 5, 6].into_iter().map(Slope::integral).collect();
        let a = sk_scan(&t, &c, &slopes, &small()).unwrap();
        let b = sk_scan(&t, &c, &slopes, &small()).unwrap();
        let kinds: Vec<VerdictKind> = a.values().map(|v| v.kind()).collect();
        assert_eq!(kinds, [VerdictKind::Trivial, VerdictKind::Nontrivial, VerdictKind::Trivial]);
        let strip = |m: BTreeMap<Slope, Verdict>| -> Vec<Verdict> { m.into_values().map(|v| v.without_timing()).collect() };
        assert_eq!(strip(a), strip(b));
    }
}

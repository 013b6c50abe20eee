//! Machine-checkable evidence attached to verdicts, and its replay.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles::coset::{enumerate, todd_coxeter, Enumeration, EnumerationLimits};
use crate::oracles::groups::{FiniteGroup, Target};
use crate::oracles::quotient::FiniteQuotient;
use crate::oracles::rewrite::{canonical_cyclic, Rewriter};
use crate::presentations::{abelianization, homology_class, Presentation};
use crate::words::Word;

pub const COSET_TABLE_TARGET: &str = "coset_table";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Nontrivial: the word has a nonzero image in `H₁`.
    Homology { group: String, class: String },
    /// Nontrivial: a homomorphism onto a finite group that keeps the word.
    FiniteQuotient {
        target: String,
        images: BTreeMap<String, String>,
        word_image: String,
    },
    /// Decided in a completed coset table. Nontrivial verdicts carry the
    /// regular representation (1-based images of each coset).
    CosetTable {
        target: String,
        cosets: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        images: Option<BTreeMap<String, Vec<u32>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        word_image: Option<String>,
    },
    /// Trivial: the word's path closed up in a partial coset table.
    CosetTrace {
        target: String,
        max_cosets: usize,
        cosets_defined: u64,
    },
    /// Trivial: rewritten to the empty word by relator substitutions.
    RelatorRewriting { steps: usize, nodes: usize },
    None { reason: String },
}

impl Certificate {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Certificate::Homology { .. } => "homology",
            Certificate::FiniteQuotient { .. } => "finite_quotient",
            Certificate::CosetTable { .. } => "coset_table",
            Certificate::CosetTrace { .. } => "coset_trace",
            Certificate::RelatorRewriting { .. } => "relator_rewriting",
            Certificate::None { .. } => "none",
        }
    }

    pub fn target(&self) -> Option<&str> {
        match self {
            Certificate::FiniteQuotient { target, .. }
            | Certificate::CosetTable { target, .. }
            | Certificate::CosetTrace { target, .. } => Some(target),
            _ => None,
        }
    }

    /// One-line description for tables and logs.
    pub fn summary(&self) -> String {
        match self {
            Certificate::Homology { group, class } => format!("homology {class} in {group}"),
            Certificate::FiniteQuotient { target, .. } => format!("quotient {target}"),
            Certificate::CosetTable { cosets, .. } => format!("coset_table({cosets})"),
            Certificate::CosetTrace { cosets_defined, .. } => format!("coset_trace({cosets_defined})"),
            Certificate::RelatorRewriting { steps, .. } => format!("rewriting({steps})"),
            Certificate::None { reason } => reason.clone(),
        }
    }

    pub fn from_quotient(q: &FiniteQuotient, w: &Word) -> Result<Self> {
        Ok(Certificate::FiniteQuotient {
            target: q.group.name().to_string(),
            images: q.images_by_name(),
            word_image: q.group.label(q.image(w)?).to_string(),
        })
    }
}

/// Re-checks a certificate from scratch; true when it supports its verdict
/// for `w` in `pres`. `tables` supplies explicit targets by name.
pub fn replay(pres: &Presentation, w: &Word, cert: &Certificate, tables: &[Arc<FiniteGroup>]) -> Result<bool> {
    match cert {
        Certificate::Homology { group, .. } => {
            let class = homology_class(pres, w)?;
            Ok(!class.is_zero() && abelianization(pres).to_string() == *group)
        }
        Certificate::FiniteQuotient { target, images, .. } => {
            let group = match Target::from_name(target) {
                Some(t) => t.group()?,
                None => tables
                    .iter()
                    .find(|g| g.name() == target)
                    .cloned()
                    .ok_or_else(|| Error::Certificate(format!("unknown target `{target}`")))?,
            };
            let mut imgs = Vec::new();
            for g in pres.alphabet.generators() {
                let text = images
                    .get(g.name())
                    .ok_or_else(|| Error::Certificate(format!("no image for `{g}`")))?;
                imgs.push(
                    group
                        .parse_element(text)
                        .ok_or_else(|| Error::Certificate(format!("bad element `{text}`")))?,
                );
            }
            let q = match FiniteQuotient::new(pres, group, imgs) {
                Ok(q) => q,
                Err(_) => return Ok(false),
            };
            Ok(q.image(w)? != q.group.identity())
        }
        Certificate::CosetTable {
            cosets,
            images: Some(perms),
            ..
        } => replay_permutations(pres, w, *cosets, perms),
        Certificate::CosetTable { cosets, images: None, .. } => match todd_coxeter(pres, (*cosets).max(1000) * 8) {
            Ok(t) => Ok(t.cosets() == *cosets && crate::oracles::coset::decide_in_finite(&t, w)?),
            Err(_) => Ok(false),
        },
        Certificate::CosetTrace { max_cosets, .. } => {
            let key = canonical_cyclic(&pres.alphabet.encode(w)?);
            let out = enumerate(pres, Some(&key), &EnumerationLimits::cosets(*max_cosets))?;
            Ok(match out {
                Enumeration::TraceClosed { .. } => true,
                Enumeration::Complete(t) => t.trace(0, &key) == 0,
                _ => false,
            })
        }
        Certificate::RelatorRewriting { nodes, .. } => {
            let rels: Vec<Vec<usize>> = pres
                .relators
                .iter()
                .map(|r| pres.alphabet.encode(r))
                .collect::<Result<_>>()?;
            let key = canonical_cyclic(&pres.alphabet.encode(w)?);
            Ok(key.is_empty() || Rewriter::new(&rels).reduce(&key, (*nodes).max(1)).trivial)
        }
        Certificate::None { .. } => Ok(false),
    }
}

fn replay_permutations(
    pres: &Presentation,
    w: &Word,
    degree: usize,
    perms: &BTreeMap<String, Vec<u32>>,
) -> Result<bool> {
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for g in pres.alphabet.generators() {
        let p = perms
            .get(g.name())
            .ok_or_else(|| Error::Certificate(format!("no permutation for `{g}`")))?;
        let p: Vec<usize> = p.iter().map(|&x| (x as usize).wrapping_sub(1)).collect();
        let mut sorted = p.clone();
        sorted.sort_unstable();
        if p.len() != degree || sorted != (0..degree).collect::<Vec<_>>() {
            return Ok(false);
        }
        gens.push(p);
    }
    let inverses: Vec<Vec<usize>> = gens
        .iter()
        .map(|p| {
            let mut inv = vec![0; degree];
            for (i, &x) in p.iter().enumerate() {
                inv[x] = i;
            }
            inv
        })
        .collect();
    let act = |letters: &[usize], start: usize| {
        letters.iter().fold(start, |c, &l| {
            if l % 2 == 0 {
                gens[l / 2][c]
            } else {
                inverses[l / 2][c]
            }
        })
    };
    for r in &pres.relators {
        let letters = pres.alphabet.encode(r)?;
        if (0..degree).any(|c| act(&letters, c) != c) {
            return Ok(false);
        }
    }
    let letters = pres.alphabet.encode(w)?;
    Ok((0..degree).any(|c| act(&letters, c) != c))
}

//! Homomorphisms from a finitely presented group onto finite targets.
//!
//! Generator images are enumerated lexicographically (in the target's element
//! order) by depth-first backtracking; a relator is checked as soon as every
//! generator it mentions has an image.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::oracles::groups::{FiniteGroup, Target};
use crate::presentations::Presentation;
use crate::words::{Alphabet, Word};

/// A homomorphism `G → F` onto a finite target, given by generator images.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    pub group: Arc<FiniteGroup>,
    pub alphabet: Alphabet,
    pub images: Vec<u32>,
}

impl FiniteQuotient {
    /// Checks that every relator maps to the identity.
    pub fn new(pres: &Presentation, group: Arc<FiniteGroup>, images: Vec<u32>) -> Result<Self> {
        if images.len() != pres.alphabet.len() || images.iter().any(|&x| x as usize >= group.order()) {
            return Err(Error::Certificate("image list does not match the generators".into()));
        }
        let q = FiniteQuotient {
            group,
            alphabet: pres.alphabet.clone(),
            images,
        };
        for r in &pres.relators {
            if q.image(r)? != q.group.identity() {
                return Err(Error::Certificate(format!("relator `{r}` does not map to the identity")));
            }
        }
        Ok(q)
    }

    pub fn image(&self, w: &Word) -> Result<u32> {
        let letters = self.alphabet.encode(w)?;
        Ok(eval(&self.group, &self.images, &letters))
    }

    pub fn images_by_name(&self) -> BTreeMap<String, String> {
        self.alphabet
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, &x)| (g.name().to_string(), self.group.label(x).to_string()))
            .collect()
    }
}

#[inline]
fn eval(group: &FiniteGroup, images: &[u32], letters: &[usize]) -> u32 {
    letters.iter().fold(group.identity(), |acc, &l| {
        let g = images[l / 2];
        group.mul(acc, if l % 2 == 0 { g } else { group.inv(g) })
    })
}

#[derive(Clone, Debug, Default)]
pub struct SearchLimits {
    /// Cap on backtracking nodes (partial and full assignments) over all targets.
    pub max_nodes: u64,
    pub deadline: Option<Instant>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Full assignments that satisfied every relator.
    pub homs_tried: u64,
    pub nodes: u64,
    pub budget_exhausted: bool,
}

struct Backtrack<'a> {
    group: &'a FiniteGroup,
    /// `ready[k]`: relators whose largest generator index is `k`.
    ready: Vec<Vec<Vec<usize>>>,
    images: Vec<u32>,
    limits: &'a SearchLimits,
    stats: &'a mut SearchStats,
}

impl Backtrack<'_> {
    /// Visits homomorphisms in lexicographic order until `visit` returns true.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if depth == self.images.len() {
            self.stats.homs_tried += 1;
            return visit(&self.images);
        }
        for x in 0..self.group.order() as u32 {
            self.stats.nodes += 1;
            if self.stats.nodes > self.limits.max_nodes
                || (self.stats.nodes % 4096 == 0
                    && self.limits.deadline.is_some_and(|d| Instant::now() >= d))
            {
                self.stats.budget_exhausted = true;
                return true;
            }
            self.images[depth] = x;
            let ok = self.ready[depth]
                .iter()
                .all(|r| eval(self.group, &self.images, r) == self.group.identity());
            if ok && self.run(depth + 1, visit) {
                return true;
            }
        }
        false
    }
}

fn ready_relators(pres: &Presentation) -> Result<Vec<Vec<Vec<usize>>>> {
    let n = pres.alphabet.len();
    let mut ready = vec![Vec::new(); n];
    for r in &pres.relators {
        let letters = pres.alphabet.encode(r)?;
        if let Some(max) = letters.iter().map(|l| l / 2).max() {
            ready[max].push(letters);
        }
    }
    Ok(ready)
}

/// Calls `visit` on every homomorphism into `group`, in canonical order, until
/// it returns true or the limits run out.
pub fn for_each_homomorphism(
    pres: &Presentation,
    group: &FiniteGroup,
    limits: &SearchLimits,
    stats: &mut SearchStats,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> Result<()> {
    let mut bt = Backtrack {
        group,
        ready: ready_relators(pres)?,
        images: vec![0; pres.alphabet.len()],
        limits,
        stats,
    };
    bt.run(0, visit);
    Ok(())
}

/// First homomorphism (targets in order, images lexicographic) under which `w`
/// is not the identity.
pub fn finite_quotient_search(
    pres: &Presentation,
    w: &Word,
    targets: &[Target],
    limits: &SearchLimits,
) -> Result<(Option<FiniteQuotient>, SearchStats)> {
    let letters = pres.alphabet.encode(w)?;
    let mut stats = SearchStats::default();
    if letters.is_empty() {
        return Ok((None, stats));
    }
    for target in targets {
        let group = target.group()?;
        let mut found: Option<Vec<u32>> = None;
        for_each_homomorphism(pres, &group, limits, &mut stats, &mut |images| {
            if eval(&group, images, &letters) != group.identity() {
                found = Some(images.to_vec());
                true
            } else {
                false
            }
        })?;
        if let Some(images) = found {
            let q = FiniteQuotient::new(pres, group, images)?;
            return Ok((Some(q), stats));
        }
        if stats.budget_exhausted {
            break;
        }
    }
    Ok((None, stats))
}

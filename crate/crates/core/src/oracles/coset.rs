//! HLT coset enumeration over the trivial subgroup, with lookahead.
//!
//! Table entries are only ever set by definitions or by deductions that follow
//! from the relators, and coincidences merge cosets that are provably equal.
//! A partial table is therefore sound evidence: if a word traced from coset 0
//! returns to coset 0 through defined entries, the word is trivial in the
//! group even when the enumeration never completes.

use std::time::Instant;

use crate::error::Result;
use crate::presentations::Presentation;
use crate::words::{inverse_letter, Alphabet, Word};

const UNDEF: u32 = u32::MAX;

/// Complete coset table of the trivial subgroup: the regular permutation
/// representation of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    alphabet: Alphabet,
    cosets: usize,
    cols: usize,
    table: Vec<u32>,
}

impl CosetTable {
    pub fn cosets(&self) -> usize {
        self.cosets
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    #[inline]
    pub fn act(&self, coset: usize, letter: usize) -> usize {
        self.table[coset * self.cols + letter] as usize
    }

    pub fn trace(&self, start: usize, letters: &[usize]) -> usize {
        letters.iter().fold(start, |c, &l| self.act(c, l))
    }

    /// Permutation of cosets induced by generator `gen` (0-based images).
    pub fn permutation(&self, gen: usize) -> Vec<u32> {
        (0..self.cosets).map(|c| self.table[c * self.cols + 2 * gen]).collect()
    }
}

/// Whether `w` acts as the identity permutation on the cosets.
pub fn decide_in_finite(table: &CosetTable, w: &Word) -> Result<bool> {
    let letters = table.alphabet.encode(w)?;
    Ok((0..table.cosets).all(|c| table.trace(c, &letters) == c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Complete(CosetTable),
    /// The traced word closed up at coset 0 in a partial table.
    TraceClosed { defined: u64 },
    Exceeded { defined: u64 },
    TimedOut { defined: u64 },
}

#[derive(Clone, Debug)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
    pub deadline: Option<Instant>,
}

impl EnumerationLimits {
    pub fn cosets(max_cosets: usize) -> Self {
        EnumerationLimits {
            max_cosets,
            deadline: None,
        }
    }
}

/// Exceeding the limit proves nothing about infiniteness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exceeded {
    pub max_cosets: usize,
}

pub fn todd_coxeter(pres: &Presentation, max_cosets: usize) -> std::result::Result<CosetTable, Exceeded> {
    match enumerate(pres, None, &EnumerationLimits::cosets(max_cosets)).expect("relators are over the alphabet") {
        Enumeration::Complete(t) => Ok(t),
        _ => Err(Exceeded { max_cosets }),
    }
}

/// Runs the enumeration; with `trace`, first defines the word's path from
/// coset 0 and stops as soon as that path closes up.
pub fn enumerate(pres: &Presentation, trace: Option<&[usize]>, limits: &EnumerationLimits) -> Result<Enumeration> {
    let mut relators = Vec::new();
    for r in &pres.relators {
        let letters = pres.alphabet.encode(r)?;
        if !letters.is_empty() {
            relators.push(letters);
        }
    }
    let mut e = Enumerator::new(pres.alphabet.len(), relators, limits.max_cosets.max(1));
    Ok(e.run(trace, limits.deadline, pres.alphabet.clone()))
}

struct Full;

struct Enumerator {
    cols: usize,
    relators: Vec<Vec<usize>>,
    capacity: usize,
    allocated: usize,
    table: Vec<u32>,
    forward: Vec<u32>,
    queue: Vec<u32>,
    defined: u64,
}

impl Enumerator {
    fn new(ngens: usize, relators: Vec<Vec<usize>>, capacity: usize) -> Self {
        let cols = 2 * ngens;
        let mut e = Enumerator {
            cols,
            relators,
            capacity,
            allocated: 1,
            table: Vec::with_capacity(cols * capacity.min(1 << 16)),
            forward: vec![0],
            queue: Vec::new(),
            defined: 1,
        };
        e.table.resize(cols, UNDEF);
        e
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.cols + x] = v;
    }

    #[inline]
    fn live(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> std::result::Result<u32, Full> {
        if self.allocated == self.capacity {
            return Err(Full);
        }
        let n = self.allocated as u32;
        self.allocated += 1;
        self.defined += 1;
        self.table.resize(self.allocated * self.cols, UNDEF);
        self.forward.push(n);
        self.set(c, x, n);
        self.set(n, inverse_letter(x), c);
        Ok(n)
    }

    fn rep(&mut self, k: u32) -> u32 {
        let mut root = k;
        while self.forward[root as usize] != root {
            root = self.forward[root as usize];
        }
        let mut c = k;
        while self.forward[c as usize] != root {
            let next = self.forward[c as usize];
            self.forward[c as usize] = root;
            c = next;
        }
        root
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (lo, hi) = if k < l { (k, l) } else { (l, k) };
        self.forward[hi as usize] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        if a == b {
            return;
        }
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                let xi = inverse_letter(x);
                self.set(f, xi, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != UNDEF {
                    self.merge(f1, ex);
                } else {
                    let fx = self.get(f1, xi);
                    if fx != UNDEF {
                        self.merge(e1, fx);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, xi, e1);
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// HLT scan of relator `ri` at coset `c`, defining cosets as needed.
    fn scan_and_fill(&mut self, c: u32, ri: usize) -> std::result::Result<(), Full> {
        let n = self.relators[ri].len();
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, n);
        loop {
            while i < j {
                let next = self.get(f, self.relators[ri][i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                self.coincidence(f, b);
                return Ok(());
            }
            while j > i {
                let next = self.get(b, inverse_letter(self.relators[ri][j - 1]));
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            let x = self.relators[ri][i];
            if j == i + 1 {
                self.set(f, x, b);
                self.set(b, inverse_letter(x), f);
                return Ok(());
            }
            self.define(f, x)?;
        }
    }

    /// Scan without definitions; records deductions and coincidences only.
    fn scan(&mut self, c: u32, ri: usize) {
        let n = self.relators[ri].len();
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, n);
        while i < j {
            let next = self.get(f, self.relators[ri][i]);
            if next == UNDEF {
                break;
            }
            f = next;
            i += 1;
        }
        if i == j {
            self.coincidence(f, b);
            return;
        }
        while j > i {
            let next = self.get(b, inverse_letter(self.relators[ri][j - 1]));
            if next == UNDEF {
                break;
            }
            b = next;
            j -= 1;
        }
        if j == i {
            self.coincidence(f, b);
        } else if j == i + 1 {
            let x = self.relators[ri][i];
            self.set(f, x, b);
            self.set(b, inverse_letter(x), f);
        }
    }

    fn process(&mut self, c: u32) -> std::result::Result<(), Full> {
        for ri in 0..self.relators.len() {
            self.scan_and_fill(c, ri)?;
            if !self.live(c) {
                return Ok(());
            }
        }
        for x in 0..self.cols {
            if self.get(c, x) == UNDEF {
                self.define(c, x)?;
            }
        }
        Ok(())
    }

    fn lookahead(&mut self) {
        for c in 0..self.allocated as u32 {
            if !self.live(c) {
                continue;
            }
            for ri in 0..self.relators.len() {
                self.scan(c, ri);
                if !self.live(c) {
                    break;
                }
            }
        }
    }

    /// Renumbers live cosets in order; returns the new index of the first
    /// live coset at or after `cursor`.
    fn compact(&mut self, cursor: u32) -> u32 {
        let mut new_index = vec![UNDEF; self.allocated];
        let mut live = 0u32;
        let mut new_cursor = None;
        for c in 0..self.allocated as u32 {
            if c >= cursor && new_cursor.is_none() && self.live(c) {
                new_cursor = Some(live);
            }
            if self.live(c) {
                new_index[c as usize] = live;
                live += 1;
            }
        }
        let mut table = Vec::with_capacity(live as usize * self.cols);
        for c in 0..self.allocated as u32 {
            if !self.live(c) {
                continue;
            }
            for x in 0..self.cols {
                let v = self.get(c, x);
                table.push(if v == UNDEF {
                    UNDEF
                } else {
                    let r = self.rep(v);
                    new_index[r as usize]
                });
            }
        }
        self.table = table;
        self.allocated = live as usize;
        self.forward = (0..live).collect();
        new_cursor.unwrap_or(live)
    }

    fn trace_closes(&mut self, letters: &[usize]) -> bool {
        let mut c = 0u32;
        for &l in letters {
            let next = self.get(c, l);
            if next == UNDEF {
                return false;
            }
            c = self.rep(next);
        }
        c == 0
    }

    fn run(&mut self, trace: Option<&[usize]>, deadline: Option<Instant>, alphabet: Alphabet) -> Enumeration {
        if let Some(letters) = trace {
            let mut c = 0u32;
            for &l in letters {
                let next = self.get(c, l);
                c = if next != UNDEF {
                    next
                } else {
                    match self.define(c, l) {
                        Ok(n) => n,
                        Err(Full) => return Enumeration::Exceeded { defined: self.defined },
                    }
                };
            }
            if self.trace_closes(letters) {
                return Enumeration::TraceClosed { defined: self.defined };
            }
        }
        let mut c = 0u32;
        let mut processed = 0u64;
        while (c as usize) < self.allocated {
            if self.live(c) {
                if self.process(c).is_err() {
                    let before = self.allocated;
                    self.lookahead();
                    c = self.compact(c);
                    if let Some(letters) = trace {
                        if self.trace_closes(letters) {
                            return Enumeration::TraceClosed { defined: self.defined };
                        }
                    }
                    // Give up unless lookahead recovered a useful amount of room.
                    if before - self.allocated < (self.capacity / 100).max(1) {
                        return Enumeration::Exceeded { defined: self.defined };
                    }
                    continue;
                }
                processed += 1;
                if processed % 64 == 0 {
                    if let Some(letters) = trace {
                        if self.trace_closes(letters) {
                            return Enumeration::TraceClosed { defined: self.defined };
                        }
                    }
                    if processed % 1024 == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
                        return Enumeration::TimedOut { defined: self.defined };
                    }
                }
            }
            c += 1;
        }
        self.compact(0);
        debug_assert!(self.table.iter().all(|&v| v != UNDEF));
        Enumeration::Complete(CosetTable {
            alphabet,
            cosets: self.allocated,
            cols: self.cols,
            table: std::mem::take(&mut self.table),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fillings::{fill, Slope};
    use crate::presentations::{figure_eight, torus_knot};
    use crate::words::{commutator, parse_word};

    fn pres(gens: &[&str], rels: &[&str]) -> Presentation {
        let a = Alphabet::new(gens.iter().copied()).unwrap();
        let rels = rels.iter().map(|r| parse_word(r, &a).unwrap()).collect();
        Presentation::new("test", a, rels).unwrap()
    }

    #[test]
    fn classical_orders() {
        let cases: &[(&[&str], &[&str], usize)] = &[
            (&["a"], &["a^7"], 7),
            (&["a", "b"], &["a^2", "b^3", "a b a b"], 6),
            (&["a", "b"], &["a^2", "b^3", "a b a b a b"], 12),
            (&["a", "b"], &["a^2", "b^3", "a b a b a b a b"], 24),
            (&["a", "b"], &["a^2", "b^3", "a b a b a b a b a b"], 60),
            (&["a", "b"], &["a^4", "b^2 a^-2", "b^-1 a b a"], 8),
            (&["a", "b"], &["a b a^-1 b^-1", "a^3", "b^4"], 12),
            (&["a", "b", "c"], &["a^2", "b^2", "c^2", "a b a b a b", "b c b c b c", "a c a c"], 24),
        ];
        for (gens, rels, order) in cases {
            let t = todd_coxeter(&pres(gens, rels), 10_000).expect("finite");
            assert_eq!(t.cosets(), *order, "{rels:?}");
            for g in 0..gens.len() {
                let mut p = t.permutation(g);
                p.sort_unstable();
                assert_eq!(p, (0..*order as u32).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn trefoil_cyclic_fillings() {
        let t = torus_knot(2, 3).unwrap();
        for (p, order) in [(5, 5), (7, 7)] {
            let table = todd_coxeter(&fill(&t, Slope::integral(p)).unwrap(), 200_000).unwrap();
            assert_eq!(table.cosets(), order);
            let mu = t.meridian().unwrap();
            assert!(decide_in_finite(&table, &mu.pow(p)).unwrap());
            assert!(!decide_in_finite(&table, mu).unwrap());
            let c = commutator(&t.word("x").unwrap(), &t.word("y").unwrap());
            assert!(decide_in_finite(&table, &c).unwrap());
        }
    }

    #[test]
    fn poincare_sphere_filling_has_order_120() {
        let t = torus_knot(2, 3).unwrap();
        let table = todd_coxeter(&fill(&t, Slope::integral(1)).unwrap(), 200_000).unwrap();
        assert_eq!(table.cosets(), 120);
    }

    #[test]
    fn meridian_filling_is_trivial() {
        for p in [figure_eight(), torus_knot(2, 3).unwrap(), torus_knot(3, 5).unwrap()] {
            let table = todd_coxeter(&fill(&p, Slope::INFINITY).unwrap(), 200_000).unwrap();
            assert_eq!(table.cosets(), 1, "{}", p.name);
            assert!(decide_in_finite(&table, &p.word(&p.alphabet.generators()[0].to_string()).unwrap()).unwrap());
        }
    }

    #[test]
    fn infinite_group_exceeds() {
        let z2 = pres(&["a", "b"], &["a b a^-1 b^-1"]);
        assert_eq!(todd_coxeter(&z2, 500), Err(Exceeded { max_cosets: 500 }));
    }

    #[test]
    fn partial_trace_proves_relation_in_infinite_group() {
        let z2 = pres(&["a", "b"], &["a b a^-1 b^-1"]);
        let w = parse_word("a^2 b a^-1 b^-1 a^-1", &z2.alphabet).unwrap();
        let letters = z2.alphabet.encode(&w).unwrap();
        let out = enumerate(&z2, Some(&letters), &EnumerationLimits::cosets(2000)).unwrap();
        assert!(matches!(out, Enumeration::TraceClosed { .. }), "{out:?}");
        // A nontrivial element never closes.
        let w = parse_word("a b^2", &z2.alphabet).unwrap();
        let letters = z2.alphabet.encode(&w).unwrap();
        let out = enumerate(&z2, Some(&letters), &EnumerationLimits::cosets(2000)).unwrap();
        assert!(matches!(out, Enumeration::Exceeded { .. }));
    }

    #[test]
    fn small_capacity_still_completes_with_lookahead() {
        // Plain HLT on this presentation overshoots; lookahead keeps it in budget.
        let g = pres(&["a", "b"], &["a^2", "b^3", "a b a b a b a b a b"]);
        let t = todd_coxeter(&g, 400).unwrap();
        assert_eq!(t.cosets(), 60);
    }
}

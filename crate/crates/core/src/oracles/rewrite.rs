//! Bounded relator rewriting on cyclic words.
//!
//! A move replaces a cyclic subword `u` with `v⁻¹` whenever `u v` is a cyclic
//! rotation of a relator or its inverse; since each step multiplies by a
//! conjugate of a relator, reaching the empty word proves triviality.
//! Shortening moves run greedily (Dehn's algorithm); a small breadth-first
//! search over length-preserving moves covers presentations where the greedy
//! pass stalls.

use std::collections::{HashSet, VecDeque};

use crate::words::inverse_letter;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteOutcome {
    pub trivial: bool,
    /// Relator applications along the successful path (or explored, on failure).
    pub steps: usize,
    pub nodes: usize,
}

pub struct Rewriter {
    rotations: Vec<Vec<usize>>,
}

impl Rewriter {
    pub fn new(relators: &[Vec<usize>]) -> Self {
        let mut seen = HashSet::new();
        let mut rotations = Vec::new();
        for r in relators {
            let r = cyclic_core(r);
            if r.is_empty() {
                continue;
            }
            let inv: Vec<usize> = r.iter().rev().map(|&l| inverse_letter(l)).collect();
            for base in [&r, &inv] {
                for k in 0..base.len() {
                    let rot: Vec<usize> = base[k..].iter().chain(&base[..k]).copied().collect();
                    if seen.insert(rot.clone()) {
                        rotations.push(rot);
                    }
                }
            }
        }
        Rewriter { rotations }
    }

    /// All moves at `word` with replaced length `m` and `2m ≥ |r|`; `strict`
    /// keeps only shortening ones.
    fn moves(&self, word: &[usize], strict: bool) -> Vec<Vec<usize>> {
        let n = word.len();
        let mut out = Vec::new();
        for start in 0..n {
            for r in &self.rotations {
                let mut m = 0;
                while m < r.len() && m < n && word[(start + m) % n] == r[m] {
                    m += 1;
                }
                let rest = r.len() - m;
                let useful = if strict { m > rest } else { m == rest && m > 0 };
                if !useful {
                    continue;
                }
                // u = word[start..start+m], replace with (r[m..])⁻¹.
                let mut next: Vec<usize> = r[m..].iter().rev().map(|&l| inverse_letter(l)).collect();
                next.extend((m..n).map(|k| word[(start + k) % n]));
                out.push(cyclic_core(&next));
            }
        }
        out
    }

    fn greedy(&self, mut word: Vec<usize>, steps: &mut usize) -> Vec<usize> {
        while !word.is_empty() {
            match self.moves(&word, true).into_iter().next() {
                Some(next) => {
                    word = next;
                    *steps += 1;
                }
                None => break,
            }
        }
        word
    }

    pub fn reduce(&self, word: &[usize], max_nodes: usize) -> RewriteOutcome {
        let mut steps = 0;
        let start = self.greedy(cyclic_core(word), &mut steps);
        if start.is_empty() {
            return RewriteOutcome {
                trivial: true,
                steps,
                nodes: 1,
            };
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(min_rotation(&start));
        let mut frontier = VecDeque::from([(start, steps)]);
        let mut nodes = 1;
        while let Some((w, depth)) = frontier.pop_front() {
            for next in self.moves(&w, false) {
                if nodes >= max_nodes {
                    return RewriteOutcome {
                        trivial: false,
                        steps: depth,
                        nodes,
                    };
                }
                nodes += 1;
                let mut s = depth + 1;
                let reduced = self.greedy(next, &mut s);
                if reduced.is_empty() {
                    return RewriteOutcome {
                        trivial: true,
                        steps: s,
                        nodes,
                    };
                }
                if seen.insert(min_rotation(&reduced)) {
                    frontier.push_back((reduced, s));
                }
            }
        }
        RewriteOutcome {
            trivial: false,
            steps,
            nodes,
        }
    }
}

/// Free and cyclic reduction of an encoded letter sequence.
pub fn cyclic_core(letters: &[usize]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last() == Some(&inverse_letter(l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    let (mut i, mut j) = (0, stack.len());
    while j - i >= 2 && stack[i] == inverse_letter(stack[j - 1]) {
        i += 1;
        j -= 1;
    }
    stack[i..j].to_vec()
}

pub fn min_rotation(w: &[usize]) -> Vec<usize> {
    (0..w.len())
        .map(|k| w[k..].iter().chain(&w[..k]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Conjugation- and inversion-invariant representative of a word's cyclic class.
pub fn canonical_cyclic(letters: &[usize]) -> Vec<usize> {
    let core = cyclic_core(letters);
    let inv: Vec<usize> = core.iter().rev().map(|&l| inverse_letter(l)).collect();
    min_rotation(&core).min(min_rotation(&inv))
}

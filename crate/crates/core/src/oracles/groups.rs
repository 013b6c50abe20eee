//! Finite target groups for homomorphism search, stored as Cayley tables.
//!
//! Elements are indexed in a fixed order, which makes the lexicographic
//! enumeration of generator images reproducible. Symmetric groups are listed
//! breadth-first from the identity under right multiplication by `(1 2)` and
//! `(1 2 … n)`; `PSL(2, p)` in lexicographic order of sign-normalized matrices.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Symmetric(usize),
    Psl2(u64),
    Table,
}

/// A finite group given by its multiplication table.
#[derive(Debug)]
pub struct FiniteGroup {
    name: String,
    kind: GroupKind,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
    labels: Vec<String>,
    index: HashMap<String, u32>,
}

impl FiniteGroup {
    fn from_parts(name: String, kind: GroupKind, mul: Vec<u32>, labels: Vec<String>) -> Result<Self> {
        let order = labels.len();
        if mul.len() != order * order || order == 0 {
            return Err(Error::InvalidGroup(format!("{name}: table shape")));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] as usize == x && mul[x * order + e] as usize == x))
            .ok_or_else(|| Error::InvalidGroup(format!("{name}: no identity")))? as u32;
        let mut inv = vec![u32::MAX; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mul[x * order + y] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{name}: element without inverse")))?;
            inv[x] = y as u32;
        }
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        Ok(FiniteGroup {
            name,
            kind,
            order,
            mul,
            inv,
            identity,
            labels,
            index,
        })
    }

    /// An explicit group from a Cayley table (`table[i][j]` = index of `i·j`).
    pub fn from_table(name: &str, labels: Vec<String>, table: &[Vec<usize>]) -> Result<Self> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup(format!("{name}: table is not {n} × {n} over 0..{n}")));
        }
        let mul: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = mul[a * n + b] as usize;
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(Error::InvalidGroup(format!("{name}: not associative")));
                    }
                }
            }
        }
        FiniteGroup::from_parts(format!("table:{name}"), GroupKind::Table, mul, labels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    /// Looks up an element from its printed form (cycle notation for `S_n`,
    /// `[[a,b],[c,d]]` for `PSL(2,p)`, the table label otherwise).
    pub fn parse_element(&self, text: &str) -> Option<u32> {
        let canonical = match self.kind {
            GroupKind::Symmetric(n) => render_cycles(&parse_cycles(text, n)?),
            GroupKind::Psl2(p) => {
                let m = parse_matrix(text, p)?;
                render_matrix(normalize_psl(m, p))
            }
            GroupKind::Table => text.trim().to_string(),
        };
        self.index.get(&canonical).copied()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|a| (0..self.order as u32).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Target family for homomorphism search.
#[derive(Clone, Debug)]
pub enum Target {
    Symmetric(usize),
    Psl2(u64),
    Table(Arc<FiniteGroup>),
}

impl Target {
    pub fn group(&self) -> Result<Arc<FiniteGroup>> {
        match self {
            Target::Symmetric(n) => symmetric_group(*n),
            Target::Psl2(p) => psl2_group(*p),
            Target::Table(g) => Ok(g.clone()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Target::Symmetric(n) => format!("S{n}"),
            Target::Psl2(p) => format!("PSL2_{p}"),
            Target::Table(g) => g.name().to_string(),
        }
    }

    /// Inverse of [`Target::name`] for the built-in families.
    pub fn from_name(name: &str) -> Option<Target> {
        if let Some(n) = name.strip_prefix("PSL2_") {
            return n.parse().ok().map(Target::Psl2);
        }
        name.strip_prefix('S').and_then(|n| n.parse().ok()).map(Target::Symmetric)
    }
}

/// `S_1, …, S_{sym_max}` followed by `PSL(2, p)` for each listed prime.
pub fn target_ladder(sym_max: usize, psl2_primes: &[u64]) -> Vec<Target> {
    let mut out: Vec<Target> = (1..=sym_max).map(Target::Symmetric).collect();
    out.extend(psl2_primes.iter().map(|&p| Target::Psl2(p)));
    out
}

fn cache() -> &'static Mutex<HashMap<String, Arc<FiniteGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<FiniteGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(name: String, build: impl FnOnce() -> Result<FiniteGroup>) -> Result<Arc<FiniteGroup>> {
    if let Some(g) = cache().lock().expect("group cache poisoned").get(&name) {
        return Ok(g.clone());
    }
    let g = Arc::new(build()?);
    cache()
        .lock()
        .expect("group cache poisoned")
        .entry(name)
        .or_insert(g.clone());
    Ok(g)
}

const MAX_SYMMETRIC_DEGREE: usize = 8;

pub fn symmetric_group(n: usize) -> Result<Arc<FiniteGroup>> {
    if n == 0 || n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::InvalidGroup(format!("S{n}: degree must be in 1..={MAX_SYMMETRIC_DEGREE}")));
    }
    cached(format!("S{n}"), || build_symmetric(n))
}

fn perm_key(p: &[u8], n: usize) -> usize {
    p.iter().fold(0, |acc, &x| acc * n + x as usize)
}

fn build_symmetric(n: usize) -> Result<FiniteGroup> {
    let id: Vec<u8> = (0..n as u8).collect();
    let mut transposition = id.clone();
    if n >= 2 {
        transposition.swap(0, 1);
    }
    let cycle: Vec<u8> = (0..n as u8).map(|i| (i + 1) % n as u8).collect();
    let gens = [transposition, cycle];

    let mut elements: Vec<Vec<u8>> = vec![id.clone()];
    let mut key_to_index = vec![u32::MAX; n.pow(n as u32)];
    key_to_index[perm_key(&id, n)] = 0;
    let mut head = 0;
    while head < elements.len() {
        let e = elements[head].clone();
        head += 1;
        for s in &gens {
            let prod = compose(&e, s);
            let k = perm_key(&prod, n);
            if key_to_index[k] == u32::MAX {
                key_to_index[k] = elements.len() as u32;
                elements.push(prod);
            }
        }
    }
    let order = elements.len();
    let mut mul = vec![0u32; order * order];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            mul[i * order + j] = key_to_index[perm_key(&compose(a, b), n)];
        }
    }
    let labels = elements.iter().map(|p| render_cycles(p)).collect();
    FiniteGroup::from_parts(format!("S{n}"), GroupKind::Symmetric(n), mul, labels)
}

/// Apply `a`, then `b`.
fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().map(|&x| b[x as usize]).collect()
}

/// Disjoint cycle notation, 1-based, smallest point first; identity is `()`.
pub fn render_cycles(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = p[start] as usize;
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = p[x] as usize;
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses cycle notation (points 1..=n); cycles compose left to right.
pub fn parse_cycles(text: &str, n: usize) -> Option<Vec<u8>> {
    let mut perm: Vec<u8> = (0..n as u8).collect();
    let text = text.trim();
    if text.is_empty() || text == "()" {
        return Some(perm);
    }
    for chunk in text.split(')') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let inner = chunk.strip_prefix('(')?;
        let pts: Vec<usize> = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().ok().filter(|&v| v >= 1 && v <= n).map(|v| v - 1))
            .collect::<Option<_>>()?;
        let mut cyc: Vec<u8> = (0..n as u8).collect();
        for (i, &a) in pts.iter().enumerate() {
            cyc[a] = pts[(i + 1) % pts.len()] as u8;
        }
        let mut distinct = pts.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != pts.len() {
            return None;
        }
        perm = compose(&perm, &cyc);
    }
    Some(perm)
}

type Mat2 = [u64; 4];

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

const MAX_PSL2_PRIME: u64 = 31;

pub fn psl2_group(p: u64) -> Result<Arc<FiniteGroup>> {
    if !is_prime(p) || p > MAX_PSL2_PRIME {
        return Err(Error::InvalidGroup(format!("PSL2_{p}: need a prime ≤ {MAX_PSL2_PRIME}")));
    }
    cached(format!("PSL2_{p}"), || build_psl2(p))
}

fn normalize_psl(m: Mat2, p: u64) -> Mat2 {
    let neg = m.map(|x| (p - x) % p);
    if neg < m {
        neg
    } else {
        m
    }
}

fn mat_key(m: &Mat2, p: u64) -> usize {
    m.iter().fold(0, |acc, &x| acc * p as usize + x as usize)
}

fn build_psl2(p: u64) -> Result<FiniteGroup> {
    let mut elements: Vec<Mat2> = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let m = [a, b, c, d];
                    if (a * d + p * p - b * c % p) % p == 1 && normalize_psl(m, p) == m {
                        elements.push(m);
                    }
                }
            }
        }
    }
    elements.sort_unstable();
    let mut key_to_index = vec![u32::MAX; (p as usize).pow(4)];
    for (i, m) in elements.iter().enumerate() {
        key_to_index[mat_key(m, p)] = i as u32;
    }
    let order = elements.len();
    let mut mul = vec![0u32; order * order];
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            let prod = [
                (x[0] * y[0] + x[1] * y[2]) % p,
                (x[0] * y[1] + x[1] * y[3]) % p,
                (x[2] * y[0] + x[3] * y[2]) % p,
                (x[2] * y[1] + x[3] * y[3]) % p,
            ];
            mul[i * order + j] = key_to_index[mat_key(&normalize_psl(prod, p), p)];
        }
    }
    let labels = elements.iter().map(|m| render_matrix(*m)).collect();
    FiniteGroup::from_parts(format!("PSL2_{p}"), GroupKind::Psl2(p), mul, labels)
}

fn render_matrix(m: Mat2) -> String {
    format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3])
}

fn parse_matrix(text: &str, p: u64) -> Option<Mat2> {
    let nums: Vec<i64> = text
        .split(|c: char| !(c.is_ascii_digit() || c == '-'))
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect::<Option<_>>()?;
    if nums.len() != 4 {
        return None;
    }
    let m = [0, 1, 2, 3].map(|i| nums[i].rem_euclid(p as i64) as u64);
    ((m[0] * m[3] + p * p - m[1] * m[2] % p) % p == 1).then_some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_orders_and_ordering() {
        for (n, order) in [(1, 1), (2, 2), (3, 6), (4, 24), (5, 120), (6, 720)] {
            assert_eq!(symmetric_group(n).unwrap().order(), order);
        }
        let s3 = symmetric_group(3).unwrap();
        assert_eq!(s3.identity(), 0);
        assert_eq!(s3.label(1), "(1 2)");
        assert_eq!(s3.label(2), "(1 2 3)");
        assert!(!s3.is_abelian());
        assert!(symmetric_group(2).unwrap().is_abelian());
    }

    #[test]
    fn psl2_orders() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let g = psl2_group(p).unwrap();
            let expected = if p == 2 { 6 } else { (p * (p * p - 1) / 2) as usize };
            assert_eq!(g.order(), expected, "p = {p}");
        }
        assert!(psl2_group(9).is_err());
    }

    #[test]
    fn group_axioms_hold() {
        for g in [symmetric_group(4).unwrap(), psl2_group(5).unwrap()] {
            let n = g.order() as u32;
            for a in 0..n {
                assert_eq!(g.mul(a, g.inv(a)), g.identity());
                for b in 0..n.min(20) {
                    for c in 0..n.min(20) {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn element_parsing_round_trips() {
        let s4 = symmetric_group(4).unwrap();
        for i in 0..s4.order() as u32 {
            assert_eq!(s4.parse_element(s4.label(i)), Some(i));
        }
        assert_eq!(s4.parse_element("(2 1)"), s4.parse_element("(1 2)"));
        assert_eq!(s4.parse_element("(1 5)"), None);
        let p7 = psl2_group(7).unwrap();
        for i in (0..p7.order() as u32).step_by(7) {
            assert_eq!(p7.parse_element(p7.label(i)), Some(i));
        }
        assert_eq!(p7.parse_element("[[-1,0],[0,-1]]"), p7.parse_element("[[1,0],[0,1]]"));
        assert_eq!(p7.parse_element("[[1,1],[1,1]]"), None);
    }

    #[test]
    fn explicit_tables() {
        let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = FiniteGroup::from_table("z3", vec!["e".into(), "g".into(), "g2".into()], &z3).unwrap();
        assert_eq!(g.name(), "table:z3");
        assert_eq!(g.inv(1), 2);
        assert_eq!(g.parse_element("g2"), Some(2));
        let bad = vec![vec![0, 1], vec![0, 0]];
        assert!(FiniteGroup::from_table("bad", vec!["e".into(), "x".into()], &bad).is_err());
    }

    #[test]
    fn target_names() {
        assert_eq!(Target::Symmetric(4).name(), "S4");
        assert_eq!(Target::Psl2(7).name(), "PSL2_7");
        assert!(matches!(Target::from_name("PSL2_11"), Some(Target::Psl2(11))));
        assert!(matches!(Target::from_name("S5"), Some(Target::Symmetric(5))));
        assert!(Target::from_name("Q8").is_none());
        assert_eq!(target_ladder(6, &[5, 7, 11, 13]).len(), 10);
    }
}

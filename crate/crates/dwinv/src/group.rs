//! Finite groups given by multiplication tables, with conjugacy classes and centralizers.

use crate::error::{Error, Result};
use std::sync::Arc;

pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion,
    Generic,
}

/// A finite group on the element ids `0..order`. The ordering of ids is fixed at construction.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub name: String,
    pub kind: GroupKind,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Builds and validates a group from a row-major multiplication table.
    pub fn from_table(name: &str, kind: GroupKind, order: usize, mul: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::Table(format!("order {order} outside 1..={MAX_ORDER}")));
        }
        if mul.len() != order * order {
            return Err(Error::Table(format!("expected {} entries, got {}", order * order, mul.len())));
        }
        if let Some(bad) = mul.iter().find(|&&v| v >= order) {
            return Err(Error::Table(format!("entry {bad} out of range")));
        }
        let at = |a: usize, b: usize| mul[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::Table("no identity element".into()))?;
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::Table(format!("element {a} has no inverse")))?;
            inv[a] = b;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::Table(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let labels = if labels.len() == order { labels } else { (0..order).map(|i| i.to_string()).collect() };
        Ok(FiniteGroup { name: name.to_string(), kind, order, mul, inv, identity, labels })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    #[inline]
    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.commute(a, b)))
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    /// Subgroup on the sorted element list `elems`, returned with its embedding.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Subgroup> {
        let mut embed = elems.to_vec();
        embed.sort_unstable();
        embed.dedup();
        if embed.len() == self.order {
            return Ok(Subgroup { group: Arc::new(self.clone()), embed });
        }
        let mut pos = vec![usize::MAX; self.order];
        for (i, &g) in embed.iter().enumerate() {
            pos[g] = i;
        }
        let m = embed.len();
        let mut mul = Vec::with_capacity(m * m);
        for &a in &embed {
            for &b in &embed {
                let p = pos[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(Error::Table("subgroup not closed".into()));
                }
                mul.push(p);
            }
        }
        let labels = embed.iter().map(|&g| self.labels[g].clone()).collect();
        let name = format!("{}|sub{}", self.name, m);
        let group = FiniteGroup::from_table(&name, GroupKind::Generic, m, mul, labels)?;
        Ok(Subgroup { group: Arc::new(group), embed })
    }
}

/// A subgroup realized as its own [`FiniteGroup`], with `embed[i]` the parent id of local id `i`.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: Arc<FiniteGroup>,
    pub embed: Vec<usize>,
}

impl Subgroup {
    pub fn local(&self, parent: usize) -> Option<usize> {
        self.embed.binary_search(&parent).ok()
    }
}

#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    /// Minimal member under the element ordering.
    pub rep: usize,
    /// Members in ascending order.
    pub members: Vec<usize>,
    /// `transporters[k]` is the minimal `g` with `g rep g^-1 = members[k]`.
    pub transporters: Vec<usize>,
    pub centralizer: Subgroup,
}

impl ConjugacyClass {
    pub fn position(&self, y: usize) -> Option<usize> {
        self.members.binary_search(&y).ok()
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<ConjugacyClass> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        let mut members: Vec<usize> = g.elements().map(|h| g.conj(h, x)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            seen[m] = true;
        }
        let transporters = members
            .iter()
            .map(|&y| g.elements().find(|&h| g.conj(h, x) == y).expect("orbit member"))
            .collect();
        let cent: Vec<usize> = g.elements().filter(|&h| g.commute(h, x)).collect();
        let centralizer = g.subgroup(&cent).expect("centralizer is a subgroup");
        out.push(ConjugacyClass { rep: x, members, transporters, centralizer });
    }
    out
}

fn parse_param(s: &str, prefix: &str) -> Option<usize> {
    s.strip_prefix(prefix).and_then(|r| r.parse().ok())
}

/// Builds a group from a spec string: `Zn`, `Dn`, `S3`, `S4`, `Q8` or `file:PATH`.
pub fn build_named_group(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        return parse_table_text(path, &text);
    }
    if let Some(n) = parse_param(spec, "Z") {
        return cyclic(n);
    }
    if let Some(n) = parse_param(spec, "D") {
        return dihedral(n);
    }
    match spec {
        "S3" => symmetric(3),
        "S4" => symmetric(4),
        "Q8" => quaternion(),
        _ => Err(Error::GroupSpec(spec.to_string())),
    }
}

pub fn parse_table_text(name: &str, text: &str) -> Result<FiniteGroup> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Table("empty table file".into()))?
        .parse()
        .map_err(|_| Error::Table("first line must be the order".into()))?;
    let mut mul = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines.next().ok_or_else(|| Error::Table(format!("missing row {row}")))?;
        let vals: std::result::Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
        let vals = vals.map_err(|_| Error::Table(format!("row {row} is not numeric")))?;
        if vals.len() != n {
            return Err(Error::Table(format!("row {row} has {} entries", vals.len())));
        }
        mul.extend(vals);
    }
    if lines.next().is_some() {
        return Err(Error::Table("trailing rows".into()));
    }
    FiniteGroup::from_table(name, GroupKind::Generic, n, mul, Vec::new())
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::GroupSpec(format!("Z{n}")));
    }
    let mul = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    let labels = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect();
    FiniteGroup::from_table(&format!("Z{n}"), GroupKind::Cyclic(n), n, mul, labels)
}

/// Dihedral group of order `2n`, ordered `e, a, ..., a^{n-1}, b, ab, ..., a^{n-1}b`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 || 2 * n > MAX_ORDER {
        return Err(Error::GroupSpec(format!("D{n}")));
    }
    let m = 2 * n;
    let mut mul = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let (i, s) = (x % n, x / n);
            let (j, t) = (y % n, y / n);
            // a^i b^s a^j b^t = a^{i + (-1)^s j} b^{s+t}
            let k = if s == 0 { (i + j) % n } else { (i + n - j) % n };
            mul.push(k + n * ((s + t) % 2));
        }
    }
    let mut labels = Vec::with_capacity(m);
    for s in 0..2 {
        for i in 0..n {
            let a = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            let l = match (a.is_empty(), s) {
                (true, 0) => "e".to_string(),
                (false, 0) => a,
                (_, _) => format!("{a}b"),
            };
            labels.push(l);
        }
    }
    FiniteGroup::from_table(&format!("D{n}"), GroupKind::Dihedral(n), m, mul, labels)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Symmetric group on `k` points, lexicographic one-line order, `(st)(i) = s(t(i))`.
pub fn symmetric(k: usize) -> Result<FiniteGroup> {
    if !(1..=4).contains(&k) {
        return Err(Error::GroupSpec(format!("S{k}")));
    }
    let perms = permutations(k);
    let n = perms.len();
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("permutation");
    let mut mul = Vec::with_capacity(n * n);
    for s in &perms {
        for t in &perms {
            let st: Vec<usize> = (0..k).map(|i| s[t[i]]).collect();
            mul.push(index(&st));
        }
    }
    let labels = perms
        .iter()
        .map(|p| format!("[{}]", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    FiniteGroup::from_table(&format!("S{k}"), GroupKind::Symmetric(k), n, mul, labels)
}

/// Quaternion group ordered `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion() -> Result<FiniteGroup> {
    // unit u in {1,i,j,k} = 0..4, sign bit
    let unit_mul = |u: usize, v: usize| -> (usize, bool) {
        match (u, v) {
            (0, w) | (w, 0) => (w, false),
            (a, b) if a == b => (0, true),
            (1, 2) => (3, false),
            (2, 1) => (3, true),
            (2, 3) => (1, false),
            (3, 2) => (1, true),
            (3, 1) => (2, false),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mut mul = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (u, su) = (x / 2, x % 2 == 1);
            let (v, sv) = (y / 2, y % 2 == 1);
            let (w, sw) = unit_mul(u, v);
            let neg = su ^ sv ^ sw;
            mul.push(2 * w + neg as usize);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    FiniteGroup::from_table("Q8", GroupKind::Quaternion, 8, mul, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_class_count(g: &FiniteGroup) -> usize {
        let mut reps = std::collections::BTreeSet::new();
        for x in g.elements() {
            let m = g.elements().map(|h| g.conj(h, x)).min().unwrap();
            reps.insert(m);
        }
        reps.len()
    }

    #[test]
    fn trivial_group() {
        let g = build_named_group("Z1").unwrap();
        assert_eq!(g.order(), 1);
        let cls = conjugacy_classes(&g);
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].members, vec![0]);
    }

    #[test]
    fn dihedral_classes() {
        let g = build_named_group("D5").unwrap();
        assert_eq!(g.order(), 10);
        assert_eq!(conjugacy_classes(&g).len(), 4);
        let d7 = build_named_group("D7").unwrap();
        let cls = conjugacy_classes(&d7);
        let sizes: Vec<usize> = cls.iter().map(|c| c.members.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 7]);
        assert_eq!(cls[1].members, vec![1, 6]);
        // b a b^-1 = a^-1
        let (a, b) = (1, 7);
        assert_eq!(d7.conj(b, a), d7.inv(a));
        assert_eq!(d7.pow(a, 7), 0);
        assert_eq!(d7.mul(b, b), 0);
    }

    #[test]
    fn s3_and_q8_classes() {
        let s3 = build_named_group("S3").unwrap();
        assert_eq!(conjugacy_classes(&s3).len(), 3);
        assert_eq!(brute_class_count(&s3), 3);
        let q8 = build_named_group("Q8").unwrap();
        let mut sizes: Vec<usize> = conjugacy_classes(&q8).iter().map(|c| c.members.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        assert_eq!(q8.element_order(2), 4);
        let s4 = build_named_group("S4").unwrap();
        assert_eq!(conjugacy_classes(&s4).len(), 5);
    }

    #[test]
    fn class_equation() {
        for spec in ["Z6", "D4", "D6", "S4", "Q8"] {
            let g = build_named_group(spec).unwrap();
            let cls = conjugacy_classes(&g);
            assert_eq!(cls.iter().map(|c| c.members.len()).sum::<usize>(), g.order());
            for c in &cls {
                assert_eq!(c.members.len() * c.centralizer.group.order(), g.order());
                assert_eq!(c.rep, c.members[0]);
                for (k, &y) in c.members.iter().enumerate() {
                    assert_eq!(g.conj(c.transporters[k], c.rep), y);
                }
            }
        }
    }

    #[test]
    fn table_file_roundtrip() {
        let g = build_named_group("Z3").unwrap();
        let mut text = String::from("3\n");
        for a in 0..3 {
            let row: Vec<String> = (0..3).map(|b| g.mul(a, b).to_string()).collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        let h = parse_table_text("t", &text).unwrap();
        assert_eq!(h.order(), 3);
        assert!(parse_table_text("t", "2\n0 1\n1 1\n").is_err());
        assert!(parse_table_text("t", "2\n0 1\n").is_err());
        assert!(build_named_group("X7").is_err());
        assert!(build_named_group("Z0").is_err());
    }
}

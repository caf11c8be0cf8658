use super::parse::{Node, Tangle};
use crate::error::{Error, Result};
use crate::oracle::{Crossing, LinkDiagram};
use crate::qdouble::ObjLabel;

pub type Pt = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    Id,
    Cross,
    CrossInv,
    Cup,
    Cap,
}

#[derive(Debug, Clone)]
pub enum CKind {
    Leaf(Gen),
    Vert { top: usize, bottom: usize },
    Horiz { left: usize, right: usize },
    /// `inner` is the rotated tangle, `expanded` the cup/cap composite containing it.
    Rot { inner: usize, expanded: usize },
    Close { inner: usize, expanded: usize },
}

#[derive(Debug, Clone)]
pub struct CNode {
    pub kind: CKind,
    pub source: Vec<Pt>,
    pub target: Vec<Pt>,
}

#[derive(Debug, Clone, Copy)]
pub struct PointInfo {
    pub leaf: usize,
    pub is_source: bool,
    pub slot: usize,
}

#[derive(Debug, Clone)]
pub struct Component {
    /// Points in orientation order.
    pub points: Vec<Pt>,
    pub closed: bool,
    pub writhe: i64,
}

#[derive(Debug, Clone, Copy)]
pub struct CrossingInfo {
    pub leaf: usize,
    pub over: usize,
    pub under: usize,
    pub sign: i8,
}

/// A tangle expression lowered to generator leaves with glued endpoints, its strands,
/// their orientation and crossing signs.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub nodes: Vec<CNode>,
    pub root: usize,
    pub points: Vec<PointInfo>,
    internal: Vec<Pt>,
    glue: Vec<Option<Pt>>,
    pub components: Vec<Component>,
    pub comp_of: Vec<usize>,
    pub up: Vec<bool>,
    pub crossings: Vec<CrossingInfo>,
}

struct Builder {
    nodes: Vec<CNode>,
    points: Vec<PointInfo>,
    internal: Vec<Pt>,
    glue: Vec<Option<Pt>>,
}

impl Builder {
    fn push(&mut self, kind: CKind, source: Vec<Pt>, target: Vec<Pt>) -> usize {
        self.nodes.push(CNode { kind, source, target });
        self.nodes.len() - 1
    }

    fn leaf(&mut self, gen: Gen) -> usize {
        let id = self.nodes.len();
        let (ns, nt) = match gen {
            Gen::Id => (1, 1),
            Gen::Cross | Gen::CrossInv => (2, 2),
            Gen::Cup => (0, 2),
            Gen::Cap => (2, 0),
        };
        let mut alloc = |is_source: bool, slot: usize| {
            self.points.push(PointInfo { leaf: id, is_source, slot });
            self.internal.push(usize::MAX);
            self.glue.push(None);
            self.points.len() - 1
        };
        let s: Vec<Pt> = (0..ns).map(|k| alloc(true, k)).collect();
        let t: Vec<Pt> = (0..nt).map(|k| alloc(false, k)).collect();
        let mut link = |a: Pt, b: Pt| {
            self.internal[a] = b;
            self.internal[b] = a;
        };
        match gen {
            Gen::Id => link(s[0], t[0]),
            Gen::Cross | Gen::CrossInv => {
                link(s[0], t[1]);
                link(s[1], t[0]);
            }
            Gen::Cup => link(t[0], t[1]),
            Gen::Cap => link(s[0], s[1]),
        }
        self.push(CKind::Leaf(gen), s, t)
    }

    fn vert(&mut self, top: usize, bottom: usize) -> usize {
        let (up, down) = (self.nodes[top].source.clone(), self.nodes[bottom].target.clone());
        assert_eq!(up.len(), down.len(), "vertical composite arity");
        for (&a, &b) in up.iter().zip(&down) {
            self.glue[a] = Some(b);
            self.glue[b] = Some(a);
        }
        let (s, t) = (self.nodes[bottom].source.clone(), self.nodes[top].target.clone());
        self.push(CKind::Vert { top, bottom }, s, t)
    }

    fn horiz(&mut self, left: usize, right: usize) -> usize {
        let s = [self.nodes[left].source.clone(), self.nodes[right].source.clone()].concat();
        let t = [self.nodes[left].target.clone(), self.nodes[right].target.clone()].concat();
        self.push(CKind::Horiz { left, right }, s, t)
    }

    /// `m` identity strands side by side, `None` for `m = 0`.
    fn ids(&mut self, m: usize) -> Option<usize> {
        let mut acc = None;
        for _ in 0..m {
            let l = self.leaf(Gen::Id);
            acc = Some(match acc {
                None => l,
                Some(a) => self.horiz(a, l),
            });
        }
        acc
    }

    fn sandwich(&mut self, m: usize, mid: usize) -> usize {
        match (self.ids(m), self.ids(m)) {
            (Some(a), Some(b)) => {
                let h = self.horiz(a, mid);
                self.horiz(h, b)
            }
            _ => mid,
        }
    }

    fn build(&mut self, n: &Node) -> usize {
        match &n.kind {
            Tangle::Id => self.leaf(Gen::Id),
            Tangle::Cross => self.leaf(Gen::Cross),
            Tangle::CrossInv => self.leaf(Gen::CrossInv),
            Tangle::Cup => self.leaf(Gen::Cup),
            Tangle::Cap => self.leaf(Gen::Cap),
            Tangle::Twist(0) => {
                let a = self.leaf(Gen::Id);
                let b = self.leaf(Gen::Id);
                self.horiz(a, b)
            }
            Tangle::Twist(k) => {
                let g = if *k > 0 { Gen::Cross } else { Gen::CrossInv };
                let mut acc = self.leaf(g);
                for _ in 1..k.unsigned_abs() {
                    let l = self.leaf(g);
                    acc = self.vert(l, acc);
                }
                acc
            }
            Tangle::Vert(a, b) => {
                let bottom = self.build(b);
                let top = self.build(a);
                self.vert(top, bottom)
            }
            Tangle::Horiz(a, b) => {
                let l = self.build(a);
                let r = self.build(b);
                self.horiz(l, r)
            }
            Tangle::Rot(e) => {
                let ids = self.ids(2).unwrap();
                let cup = self.leaf(Gen::Cup);
                let bottom = self.horiz(ids, cup);
                let inner = self.build(e);
                let l = self.leaf(Gen::Id);
                let r = self.leaf(Gen::Id);
                let h = self.horiz(l, inner);
                let mid = self.horiz(h, r);
                let cap = self.leaf(Gen::Cap);
                let ids = self.ids(2).unwrap();
                let top = self.horiz(cap, ids);
                let lower = self.vert(mid, bottom);
                let expanded = self.vert(top, lower);
                let (s, t) = (self.nodes[expanded].source.clone(), self.nodes[expanded].target.clone());
                self.push(CKind::Rot { inner, expanded }, s, t)
            }
            Tangle::Close(e) => {
                let k = e.source;
                let inner = self.build(e);
                let expanded = if k == 0 {
                    inner
                } else {
                    let mut cups = self.leaf(Gen::Cup);
                    for m in 1..k {
                        let c = self.leaf(Gen::Cup);
                        let layer = self.sandwich(m, c);
                        cups = self.vert(layer, cups);
                    }
                    let back = self.ids(k).unwrap();
                    let mid = self.horiz(inner, back);
                    let mut acc = self.vert(mid, cups);
                    for m in (1..k).rev() {
                        let c = self.leaf(Gen::Cap);
                        let layer = self.sandwich(m, c);
                        acc = self.vert(layer, acc);
                    }
                    let c = self.leaf(Gen::Cap);
                    self.vert(c, acc)
                };
                self.push(CKind::Close { inner, expanded }, vec![], vec![])
            }
        }
    }
}

impl Compiled {
    pub fn new(root: &Node) -> Compiled {
        let mut b = Builder { nodes: Vec::new(), points: Vec::new(), internal: Vec::new(), glue: Vec::new() };
        let r = b.build(root);
        let mut c = Compiled {
            root: r,
            nodes: b.nodes,
            points: b.points,
            internal: b.internal,
            glue: b.glue,
            components: Vec::new(),
            comp_of: Vec::new(),
            up: Vec::new(),
            crossings: Vec::new(),
        };
        c.orient();
        c
    }

    pub fn source(&self) -> &[Pt] {
        &self.nodes[self.root].source
    }

    pub fn target(&self) -> &[Pt] {
        &self.nodes[self.root].target
    }

    pub fn is_closed(&self) -> bool {
        self.source().is_empty() && self.target().is_empty()
    }

    /// Walk from `start`, taking the internal edge first if `internal_first`.
    fn walk(&self, start: Pt, internal_first: bool) -> Vec<Pt> {
        let mut seq = vec![start];
        let mut p = start;
        let mut use_internal = internal_first;
        loop {
            let q = if use_internal { Some(self.internal[p]) } else { self.glue[p] };
            match q {
                Some(q) if q != start => {
                    seq.push(q);
                    p = q;
                    use_internal = !use_internal;
                }
                _ => break,
            }
        }
        seq
    }

    fn orient(&mut self) {
        let n = self.points.len();
        let mut comps: Vec<(Vec<Pt>, bool)> = Vec::new();
        let mut seen = vec![false; n];
        let src: Vec<Pt> = self.source().to_vec();
        let tgt: Vec<Pt> = self.target().to_vec();
        let pos_in = |v: &[Pt], p: Pt| v.iter().position(|&q| q == p);
        for &p in src.iter().chain(&tgt) {
            if seen[p] {
                continue;
            }
            let mut seq = self.walk(p, true);
            let q = *seq.last().unwrap();
            let flip = match (pos_in(&src, p), pos_in(&src, q)) {
                (Some(_), None) => false,
                (None, Some(_)) => true,
                (Some(a), Some(b)) => a < b,
                (None, None) => pos_in(&tgt, p) < pos_in(&tgt, q),
            };
            if flip {
                seq.reverse();
            }
            seq.iter().for_each(|&x| seen[x] = true);
            comps.push((seq, false));
        }
        for m in 0..n {
            if seen[m] {
                continue;
            }
            let internal_first = self.points[m].is_source;
            let seq = self.walk(m, internal_first);
            seq.iter().for_each(|&x| seen[x] = true);
            comps.push((seq, true));
        }
        comps.sort_by_key(|(s, _)| *s.iter().min().unwrap());
        self.comp_of = vec![0; n];
        self.up = vec![false; n];
        for (ci, (seq, closed)) in comps.iter().enumerate() {
            let offset = usize::from(*closed && self.glue[seq[0]] == Some(seq[1]));
            for (k, &p) in seq.iter().enumerate() {
                self.comp_of[p] = ci;
                let next_internal = (k + offset) % 2 == 0;
                self.up[p] = if self.points[p].is_source { next_internal } else { !next_internal };
            }
        }
        self.components = comps.into_iter().map(|(points, closed)| Component { points, closed, writhe: 0 }).collect();
        for (id, node) in self.nodes.iter().enumerate() {
            let CKind::Leaf(g) = node.kind else { continue };
            if g != Gen::Cross && g != Gen::CrossInv {
                continue;
            }
            let (s0, s1) = (node.source[0], node.source[1]);
            let same = self.up[s0] == self.up[s1];
            let (over, under, sign) = if g == Gen::Cross {
                (self.comp_of[s0], self.comp_of[s1], if same { 1 } else { -1 })
            } else {
                (self.comp_of[s1], self.comp_of[s0], if same { -1 } else { 1 })
            };
            self.crossings.push(CrossingInfo { leaf: id, over, under, sign });
            if over == under {
                self.components[over].writhe += sign as i64;
            }
        }
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    pub fn component_writhes(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.writhe).collect()
    }

    /// Object at every point for a coloring of the components: `V(c)` where the strand
    /// runs upward and `V(c)*` where it runs downward.
    pub fn labels(&self, colors: &[usize]) -> Result<Vec<ObjLabel>> {
        if colors.len() != self.components.len() {
            return Err(Error::Shape(format!("{} colors for {} components", colors.len(), self.components.len())));
        }
        Ok((0..self.points.len()).map(|p| ObjLabel { simple: colors[self.comp_of[p]], dual: !self.up[p] }).collect())
    }

    /// Planar diagram of a closed tangle, arcs numbered along the components.
    pub fn link_diagram(&self) -> Result<LinkDiagram> {
        if !self.is_closed() {
            return Err(Error::Diagram("diagram needs a closed tangle".into()));
        }
        #[derive(Clone, Copy, PartialEq)]
        enum Pass {
            Over,
            Under,
            Plain,
        }
        let mut over_arc = vec![usize::MAX; self.nodes.len()];
        let mut under_arcs = vec![(usize::MAX, usize::MAX); self.nodes.len()];
        let mut arcs = 0;
        for comp in &self.components {
            let seq = &comp.points;
            let offset = usize::from(self.glue[seq[0]] == Some(seq[1]));
            let m = seq.len() / 2;
            let edges: Vec<(usize, Pass)> = (0..m)
                .map(|k| {
                    let a = seq[(2 * k + offset) % seq.len()];
                    let info = self.points[a];
                    let pass = match self.nodes[info.leaf].kind {
                        CKind::Leaf(Gen::Cross) => {
                            if self.nodes[info.leaf].source[0] == a || self.nodes[info.leaf].target[1] == a {
                                Pass::Over
                            } else {
                                Pass::Under
                            }
                        }
                        CKind::Leaf(Gen::CrossInv) => {
                            if self.nodes[info.leaf].source[0] == a || self.nodes[info.leaf].target[1] == a {
                                Pass::Under
                            } else {
                                Pass::Over
                            }
                        }
                        _ => Pass::Plain,
                    };
                    (info.leaf, pass)
                })
                .collect();
            let first_arc = arcs;
            arcs += 1;
            let Some(u0) = edges.iter().position(|e| e.1 == Pass::Under) else {
                for &(leaf, pass) in &edges {
                    if pass == Pass::Over {
                        over_arc[leaf] = first_arc;
                    }
                }
                continue;
            };
            let mut current = first_arc;
            for step in 1..=m {
                let (leaf, pass) = edges[(u0 + step) % m];
                match pass {
                    Pass::Over => over_arc[leaf] = current,
                    Pass::Under => {
                        let next = if step == m {
                            first_arc
                        } else {
                            arcs += 1;
                            arcs - 1
                        };
                        under_arcs[leaf] = (current, next);
                        current = next;
                    }
                    Pass::Plain => {}
                }
            }
        }
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing { over: over_arc[c.leaf], under_in: under_arcs[c.leaf].0, under_out: under_arcs[c.leaf].1, sign: c.sign })
            .collect();
        LinkDiagram::new(arcs, crossings)
    }
}

use super::compile::{CKind, Compiled, Gen, Pt};
use crate::error::{Error, Result};
use crate::linalg::{apply_local, Mat};
use crate::qdouble::{braiding, braiding_inverse, cap, cup, BlockMatrix, Category, Morphism, Obj, ObjLabel};

/// Evaluates the nodes of a compiled tangle for one coloring.
pub struct Evaluator<'a> {
    pub cat: &'a Category,
    pub compiled: &'a Compiled,
    pub labels: Vec<ObjLabel>,
}

impl<'a> Evaluator<'a> {
    pub fn new(cat: &'a Category, compiled: &'a Compiled, colors: &[usize]) -> Result<Self> {
        if let Some(&c) = colors.iter().find(|&&c| c >= cat.len()) {
            return Err(Error::Shape(format!("color {c} is not a simple object")));
        }
        Ok(Evaluator { cat, compiled, labels: compiled.labels(colors)? })
    }

    fn obj(&self, p: Pt) -> &Obj {
        self.cat.module(self.labels[p])
    }

    fn dim(&self, pts: &[Pt]) -> usize {
        pts.iter().map(|&p| self.obj(p).dim()).product()
    }

    fn leaf_matrix(&self, gen: Gen, s: &[Pt], t: &[Pt]) -> Mat {
        match gen {
            Gen::Id => {
                let d = self.obj(s[0]).dim();
                Mat::identity(d, d)
            }
            Gen::Cross => braiding(self.obj(s[0]), self.obj(s[1])).matrix,
            Gen::CrossInv => braiding_inverse(self.obj(s[1]), self.obj(s[0])).matrix,
            Gen::Cup => {
                debug_assert_eq!(self.labels[t[1]], self.labels[t[0]].star());
                cup(self.obj(t[0])).matrix
            }
            Gen::Cap => {
                debug_assert_eq!(self.labels[s[0]], self.labels[s[1]].star());
                cap(self.obj(s[1])).matrix
            }
        }
    }

    /// `(id_left (x) F(node) (x) id_right) x`.
    fn apply(&self, n: usize, left: usize, right: usize, x: Mat) -> Mat {
        let node = &self.compiled.nodes[n];
        match node.kind {
            CKind::Leaf(g) => apply_local(left, &self.leaf_matrix(g, &node.source, &node.target), right, &x),
            CKind::Vert { top, bottom } => {
                let y = self.apply(bottom, left, right, x);
                self.apply(top, left, right, y)
            }
            CKind::Horiz { left: a, right: b } => {
                let na = &self.compiled.nodes[a];
                let nb = &self.compiled.nodes[b];
                let y = self.apply(b, left * self.dim(&na.source), right, x);
                self.apply(a, left, right * self.dim(&nb.target), y)
            }
            CKind::Rot { expanded, .. } | CKind::Close { expanded, .. } => self.apply(expanded, left, right, x),
        }
    }

    pub fn objects(&self, pts: &[Pt]) -> Vec<Obj> {
        pts.iter().map(|&p| self.obj(p).clone()).collect()
    }

    pub fn node_labels(&self, pts: &[Pt]) -> Vec<ObjLabel> {
        pts.iter().map(|&p| self.labels[p]).collect()
    }

    pub fn morphism(&self, n: usize) -> Morphism {
        let node = &self.compiled.nodes[n];
        let d = self.dim(&node.source);
        let m = self.apply(n, 1, 1, Mat::identity(d, d));
        Morphism { source: self.objects(&node.source), target: self.objects(&node.target), matrix: m }
    }

    fn pair(&self, pts: &[Pt]) -> Result<[ObjLabel; 2]> {
        match pts {
            [a, b] => Ok([self.labels[*a], self.labels[*b]]),
            _ => Err(Error::Shape("block evaluation needs 2 -> 2 pieces".into())),
        }
    }

    /// Block form of a 2 -> 2 node built from crossings, vertical composites, rotations
    /// and parallel strands, using only `Phi(R)`, `ROT` and blockwise products.
    pub fn blocks(&self, n: usize) -> Result<BlockMatrix> {
        let node = &self.compiled.nodes[n];
        let (s, t) = (self.pair(&node.source)?, self.pair(&node.target)?);
        match node.kind {
            CKind::Leaf(Gen::Cross) => self.cat.phi_braiding(s[0], s[1]),
            CKind::Leaf(Gen::CrossInv) => self.cat.phi_braiding_inverse(s[0], s[1]),
            CKind::Vert { top, bottom } => self.blocks(top)?.compose(&self.blocks(bottom)?),
            CKind::Horiz { left, right } => {
                let leaf = |k: usize| matches!(self.compiled.nodes[k].kind, CKind::Leaf(Gen::Id));
                if leaf(left) && leaf(right) {
                    self.cat.identity_blocks(s)
                } else {
                    Err(Error::Shape("block evaluation only handles parallel identity strands".into()))
                }
            }
            CKind::Rot { inner, .. } => {
                let b = self.cat.rot_block(&self.blocks(inner)?)?;
                if b.source != s || b.target != t {
                    return Err(Error::Shape("rotation labels disagree with the diagram".into()));
                }
                Ok(b)
            }
            _ => Err(Error::Shape("node has no block form".into())),
        }
    }
}

use super::module::{braiding, braiding_inverse, rot, GradedModule, Morphism, Obj, ObjLabel};
use crate::error::{Error, Result};
use crate::espace::{EVector, SimpleCatalog};
use crate::group::FiniteGroup;
use crate::irrep::DEFAULT_IRREP_SEED;
use crate::linalg::{kron, max_abs_diff, orthonormalize, random_matrix, trace, unitarity_defect, Mat, C, ZERO};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Tolerance for recognising fusion numbers and hom-space ranks.
pub const FUSION_TOL: f64 = 1e-6;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn rng_for(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    let s = parts.iter().fold(splitmix(seed), |acc, &p| splitmix(acc ^ p));
    ChaCha8Rng::seed_from_u64(s)
}

/// Isometric embeddings `V(j) -> A (x) B`, `mult[j]` of them for each simple `j`.
#[derive(Debug)]
pub struct Beta {
    pub source: [ObjLabel; 2],
    pub mult: Vec<usize>,
    pub embeddings: Vec<Vec<Mat>>,
}

/// Per-simple blocks of a morphism between two pair products, transported by the
/// fixed decompositions.
#[derive(Debug, Clone)]
pub struct BlockMatrix {
    pub source: [ObjLabel; 2],
    pub target: [ObjLabel; 2],
    pub blocks: Vec<Mat>,
}

#[derive(Debug, Serialize)]
pub struct BlockJson {
    pub j: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl BlockMatrix {
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flatten(&self) -> Vec<C> {
        let mut out = Vec::with_capacity(self.len());
        for b in &self.blocks {
            for r in 0..b.nrows() {
                for c in 0..b.ncols() {
                    out.push(b[(r, c)]);
                }
            }
        }
        out
    }

    pub fn from_flat(source: [ObjLabel; 2], target: [ObjLabel; 2], shapes: &[(usize, usize)], v: &[C]) -> Self {
        let mut k = 0;
        let blocks = shapes
            .iter()
            .map(|&(r, c)| {
                let m = Mat::from_fn(r, c, |i, j| v[k + i * c + j]);
                k += r * c;
                m
            })
            .collect();
        BlockMatrix { source, target, blocks }
    }

    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| b.shape()).collect()
    }

    /// Blockwise `self * inner`.
    pub fn compose(&self, inner: &BlockMatrix) -> Result<BlockMatrix> {
        if self.source != inner.target {
            return Err(Error::Shape("block composition of incompatible labels".into()));
        }
        let blocks = self.blocks.iter().zip(&inner.blocks).map(|(a, b)| a * b).collect();
        Ok(BlockMatrix { source: inner.source, target: self.target, blocks })
    }

    pub fn max_diff(&self, other: &BlockMatrix) -> f64 {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| max_abs_diff(a, b)).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C) -> BlockMatrix {
        BlockMatrix { source: self.source, target: self.target, blocks: self.blocks.iter().map(|b| b * s).collect() }
    }

    pub fn to_json(&self) -> Vec<BlockJson> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(j, b)| BlockJson {
                j,
                rows: b.nrows(),
                cols: b.ncols(),
                entries: (0..b.nrows()).flat_map(|r| (0..b.ncols()).map(move |c| (r, c))).map(|(r, c)| [b[(r, c)].re, b[(r, c)].im]).collect(),
            })
            .collect()
    }
}

type RotKey = ([ObjLabel; 2], [ObjLabel; 2]);

/// Simple objects, their duals, fusion data and decompositions for one group, built
/// lazily and shared read-only.
#[derive(Debug)]
pub struct Category {
    pub group: Arc<FiniteGroup>,
    pub catalog: SimpleCatalog,
    simples: Vec<Obj>,
    duals: Vec<Obj>,
    dual_index: Vec<usize>,
    dual_iso: Vec<Mat>,
    seed: u64,
    fusion: Vec<OnceLock<std::result::Result<Arc<Vec<usize>>, (usize, f64)>>>,
    base_beta: Vec<OnceLock<std::result::Result<Arc<Beta>, String>>>,
    beta: Vec<OnceLock<std::result::Result<Arc<Beta>, String>>>,
    rot_ops: Mutex<HashMap<RotKey, Arc<Mat>>>,
}

impl Category {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self> {
        Self::with_seed(group, DEFAULT_IRREP_SEED)
    }

    pub fn with_seed(group: Arc<FiniteGroup>, seed: u64) -> Result<Self> {
        let catalog = SimpleCatalog::new(group.clone())?;
        let l = catalog.len();
        let mut simples = Vec::with_capacity(l);
        for i in 0..l {
            let m = simple_module(&catalog, i)?;
            let chi = m.character(&catalog.space);
            let d = chi.max_diff(&catalog.basis[i]);
            if d > 1e-9 {
                return Err(Error::Irrep(format!("character of simple {i} is off by {d:e}")));
            }
            simples.push(Arc::new(m.with_label(ObjLabel::plain(i))));
        }
        let duals: Vec<Obj> = simples.iter().map(|m| Arc::new(m.dual())).collect();
        let mut dual_index = Vec::with_capacity(l);
        let mut dual_iso = Vec::with_capacity(l);
        for (i, d) in duals.iter().enumerate() {
            let chi = d.character(&catalog.space);
            let j = (0..l)
                .find(|&j| (chi.inner(&catalog.basis[j]).unwrap() - C::new(1.0, 0.0)).norm() < FUSION_TOL)
                .ok_or_else(|| Error::Irrep(format!("dual of simple {i} is not simple")))?;
            let mut rng = rng_for(seed, &[0xd0a1, i as u64]);
            let iso = average_map(&mut rng, d, &simples[j]);
            let c = (iso.adjoint() * &iso)[(0, 0)].re;
            if c < 1e-9 {
                return Err(Error::Rank(format!("no isomorphism from dual of {i} onto {j}")));
            }
            let iso = iso.unscale(c.sqrt());
            if unitarity_defect(&iso) > 1e-9 {
                return Err(Error::Rank(format!("dual isomorphism of {i} is not unitary")));
            }
            dual_index.push(j);
            dual_iso.push(iso);
        }
        Ok(Category {
            group,
            catalog,
            simples,
            duals,
            dual_index,
            dual_iso,
            seed,
            fusion: (0..l * l).map(|_| OnceLock::new()).collect(),
            base_beta: (0..l * l).map(|_| OnceLock::new()).collect(),
            beta: (0..4 * l * l).map(|_| OnceLock::new()).collect(),
            rot_ops: Mutex::new(HashMap::new()),
        })
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn simple(&self, i: usize) -> &Obj {
        &self.simples[i]
    }

    pub fn module(&self, l: ObjLabel) -> &Obj {
        if l.dual {
            &self.duals[l.simple]
        } else {
            &self.simples[l.simple]
        }
    }

    pub fn dim(&self, i: usize) -> usize {
        self.simples[i].dim()
    }

    pub fn theta(&self, i: usize) -> C {
        self.catalog.theta(i)
    }

    /// `i*` with `V(i)* = V(i*)`.
    pub fn dual_index(&self, i: usize) -> usize {
        self.dual_index[i]
    }

    /// The fixed unitary `V(i)* -> V(i*)`.
    pub fn dual_iso(&self, i: usize) -> &Mat {
        &self.dual_iso[i]
    }

    /// Simple isomorphic to the labelled object.
    pub fn base(&self, l: ObjLabel) -> usize {
        if l.dual {
            self.dual_index[l.simple]
        } else {
            l.simple
        }
    }

    pub fn unit(&self) -> GradedModule {
        GradedModule::unit(&self.group)
    }

    /// `N_{i,i'}^j` for all `j`.
    pub fn fusion(&self, i: usize, i2: usize) -> Result<Arc<Vec<usize>>> {
        let l = self.len();
        let cell = self.fusion[i * l + i2].get_or_init(|| self.compute_fusion(i, i2));
        cell.clone().map_err(|(j, value)| Error::Fusion { i, i2, j, value })
    }

    pub fn fusion_labels(&self, a: ObjLabel, b: ObjLabel) -> Result<Arc<Vec<usize>>> {
        self.fusion(self.base(a), self.base(b))
    }

    fn compute_fusion(&self, i: usize, i2: usize) -> std::result::Result<Arc<Vec<usize>>, (usize, f64)> {
        let cat = &self.catalog;
        let prod = super::module::convolve_characters(&cat.basis[i], &cat.basis[i2]);
        let mut out = Vec::with_capacity(self.len());
        for (j, b) in cat.basis.iter().enumerate() {
            let c = prod.inner(b).unwrap();
            let r = c.re.round();
            if (c - C::new(r, 0.0)).norm() > FUSION_TOL || r < 0.0 {
                return Err((j, c.re));
            }
            out.push(r as usize);
        }
        let total: usize = out.iter().enumerate().map(|(j, n)| n * self.dim(j)).sum();
        if total != self.dim(i) * self.dim(i2) {
            return Err((usize::MAX, total as f64));
        }
        Ok(Arc::new(out))
    }

    fn base_beta(&self, i: usize, i2: usize) -> Result<Arc<Beta>> {
        let l = self.len();
        let cell = self.base_beta[i * l + i2].get_or_init(|| self.compute_base_beta(i, i2).map_err(|e| e.to_string()));
        cell.clone().map_err(Error::Rank)
    }

    fn compute_base_beta(&self, i: usize, i2: usize) -> Result<Arc<Beta>> {
        let mult = self.fusion(i, i2)?;
        let w = self.simples[i].tensor(&self.simples[i2])?;
        let mut embeddings = Vec::with_capacity(self.len());
        for (j, &n) in mult.iter().enumerate() {
            if n == 0 {
                embeddings.push(Vec::new());
                continue;
            }
            let vj = &self.simples[j];
            let mut rng = rng_for(self.seed, &[0xbe7a, i as u64, i2 as u64, j as u64]);
            let samples: Vec<Mat> = (0..n + 2).map(|_| average_map(&mut rng, vj, &w)).collect();
            let basis = orthonormalize(&samples, FUSION_TOL);
            if basis.len() != n {
                return Err(Error::Rank(format!(
                    "found {} of {n} embeddings of V({j}) into V({i}) V({i2})",
                    basis.len()
                )));
            }
            let s = (vj.dim() as f64).sqrt();
            embeddings.push(basis.into_iter().map(|m| m.scale(s)).collect());
        }
        Ok(Arc::new(Beta { source: [ObjLabel::plain(i), ObjLabel::plain(i2)], mult: (*mult).clone(), embeddings }))
    }

    /// Decomposition of `A (x) B`; dual labels go through the fixed `V(i)* -> V(i*)`.
    pub fn beta(&self, a: ObjLabel, b: ObjLabel) -> Result<Arc<Beta>> {
        if !a.dual && !b.dual {
            return self.base_beta(a.simple, b.simple);
        }
        let l = self.len();
        let idx = |x: ObjLabel| x.simple * 2 + x.dual as usize;
        let cell = self.beta[idx(a) * 2 * l + idx(b)].get_or_init(|| {
            let base = self.base_beta(self.base(a), self.base(b)).map_err(|e| e.to_string())?;
            let iso = |x: ObjLabel| {
                if x.dual {
                    self.dual_iso[x.simple].clone()
                } else {
                    let d = self.simples[x.simple].dim();
                    Mat::identity(d, d)
                }
            };
            let d = kron(&iso(a), &iso(b)).adjoint();
            let embeddings = base.embeddings.iter().map(|v| v.iter().map(|e| &d * e).collect()).collect();
            Ok(Arc::new(Beta { source: [a, b], mult: base.mult.clone(), embeddings }))
        });
        cell.clone().map_err(Error::Rank)
    }

    fn labels_of(list: &[Obj]) -> Result<[ObjLabel; 2]> {
        match list {
            [a, b] => match (a.label, b.label) {
                (Some(x), Some(y)) => Ok([x, y]),
                _ => Err(Error::Shape("phi needs labelled simple objects".into())),
            },
            _ => Err(Error::Shape("phi needs a morphism between pair products".into())),
        }
    }

    /// `Phi(f)_j[a][b] = tr(iota_a^dagger f iota_b) / dim V(j)`.
    pub fn phi(&self, f: &Morphism) -> Result<BlockMatrix> {
        let src = Self::labels_of(&f.source)?;
        let tgt = Self::labels_of(&f.target)?;
        let bs = self.beta(src[0], src[1])?;
        let bt = self.beta(tgt[0], tgt[1])?;
        let mut blocks = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            let dj = self.dim(j) as f64;
            let (es, et) = (&bs.embeddings[j], &bt.embeddings[j]);
            let fi: Vec<Mat> = es.iter().map(|e| &f.matrix * e).collect();
            blocks.push(Mat::from_fn(et.len(), es.len(), |r, c| trace(&(et[r].adjoint() * &fi[c])) / dj));
        }
        Ok(BlockMatrix { source: src, target: tgt, blocks })
    }

    /// `Phi^-1(B) = sum_j sum_{a,b} B_j[a][b] kappa_a iota_b^dagger`.
    pub fn phi_inverse(&self, b: &BlockMatrix) -> Result<Morphism> {
        let bs = self.beta(b.source[0], b.source[1])?;
        let bt = self.beta(b.target[0], b.target[1])?;
        let rows = self.module(b.target[0]).dim() * self.module(b.target[1]).dim();
        let cols = self.module(b.source[0]).dim() * self.module(b.source[1]).dim();
        let mut m = Mat::zeros(rows, cols);
        for j in 0..self.len() {
            let blk = &b.blocks[j];
            if blk.shape() != (bt.mult[j], bs.mult[j]) {
                return Err(Error::Shape(format!("block {j} has shape {:?}", blk.shape())));
            }
            for r in 0..blk.nrows() {
                for c in 0..blk.ncols() {
                    if blk[(r, c)] != ZERO {
                        m += (&bt.embeddings[j][r] * bs.embeddings[j][c].adjoint()) * blk[(r, c)];
                    }
                }
            }
        }
        let obj = |l: &[ObjLabel; 2]| vec![self.module(l[0]).clone(), self.module(l[1]).clone()];
        Morphism::new(obj(&b.source), obj(&b.target), m)
    }

    /// Block shapes `N^{target}_j x N^{source}_j`.
    pub fn block_shapes(&self, source: [ObjLabel; 2], target: [ObjLabel; 2]) -> Result<Vec<(usize, usize)>> {
        let ns = self.fusion_labels(source[0], source[1])?;
        let nt = self.fusion_labels(target[0], target[1])?;
        Ok(nt.iter().zip(ns.iter()).map(|(&r, &c)| (r, c)).collect())
    }

    pub fn zero_blocks(&self, source: [ObjLabel; 2], target: [ObjLabel; 2]) -> Result<BlockMatrix> {
        let shapes = self.block_shapes(source, target)?;
        Ok(BlockMatrix { source, target, blocks: shapes.iter().map(|&(r, c)| Mat::zeros(r, c)).collect() })
    }

    pub fn identity_blocks(&self, labels: [ObjLabel; 2]) -> Result<BlockMatrix> {
        let shapes = self.block_shapes(labels, labels)?;
        Ok(BlockMatrix { source: labels, target: labels, blocks: shapes.iter().map(|&(r, _)| Mat::identity(r, r)).collect() })
    }

    pub fn braiding_labels(&self, a: ObjLabel, b: ObjLabel) -> Morphism {
        braiding(self.module(a), self.module(b))
    }

    /// Inverse of `R_{a,b}`, a map `b (x) a -> a (x) b`.
    pub fn braiding_inverse_labels(&self, a: ObjLabel, b: ObjLabel) -> Morphism {
        braiding_inverse(self.module(a), self.module(b))
    }

    /// Blocks of `R_{a,b}`.
    pub fn phi_braiding(&self, a: ObjLabel, b: ObjLabel) -> Result<BlockMatrix> {
        self.phi(&self.braiding_labels(a, b))
    }

    /// Blocks of `R_{b,a}^-1 : a (x) b -> b (x) a`.
    pub fn phi_braiding_inverse(&self, a: ObjLabel, b: ObjLabel) -> Result<BlockMatrix> {
        self.phi(&self.braiding_inverse_labels(b, a))
    }

    /// `ROT = Phi o rot o Phi^-1` as a matrix on flattened blocks.
    pub fn rot_operator(&self, source: [ObjLabel; 2], target: [ObjLabel; 2]) -> Result<Arc<Mat>> {
        if let Some(m) = self.rot_ops.lock().unwrap().get(&(source, target)) {
            return Ok(m.clone());
        }
        let shapes = self.block_shapes(source, target)?;
        let (ns, nt) = rot_labels(source, target);
        let out_shapes = self.block_shapes(ns, nt)?;
        let n_in: usize = shapes.iter().map(|(r, c)| r * c).sum();
        let n_out: usize = out_shapes.iter().map(|(r, c)| r * c).sum();
        let mut op = Mat::zeros(n_out, n_in);
        let mut e = vec![ZERO; n_in];
        for k in 0..n_in {
            e[k] = C::new(1.0, 0.0);
            let b = BlockMatrix::from_flat(source, target, &shapes, &e);
            e[k] = ZERO;
            let r = self.phi(&rot(&self.phi_inverse(&b)?)?)?;
            for (row, v) in r.flatten().into_iter().enumerate() {
                op[(row, k)] = v;
            }
        }
        let op = Arc::new(op);
        self.rot_ops.lock().unwrap().insert((source, target), op.clone());
        Ok(op)
    }

    pub fn rot_block(&self, b: &BlockMatrix) -> Result<BlockMatrix> {
        let op = self.rot_operator(b.source, b.target)?;
        let (ns, nt) = rot_labels(b.source, b.target);
        let shapes = self.block_shapes(ns, nt)?;
        let v = nalgebra::DVector::from_vec(b.flatten());
        let out = &*op * v;
        Ok(BlockMatrix::from_flat(ns, nt, &shapes, out.as_slice()))
    }

    /// `Tr->(B) = sum_j tr(B_j) chi_j`.
    pub fn block_vector_trace(&self, b: &BlockMatrix) -> Result<EVector> {
        if b.source != b.target {
            return Err(Error::Shape("vector trace needs an endomorphism".into()));
        }
        let mut w = EVector::zero(&self.catalog.space);
        for (j, blk) in b.blocks.iter().enumerate() {
            if !blk.is_empty() {
                w.axpy(trace(blk), &self.catalog.basis[j]);
            }
        }
        Ok(w)
    }

    /// `|w| = sum_i Dim V(i) (w, chi_i)`.
    pub fn norm_bar(&self, w: &EVector) -> C {
        self.catalog.basis.iter().enumerate().map(|(i, b)| w.inner(b).unwrap() * self.dim(i) as f64).sum()
    }

    /// `|Tr->(B)| = sum_j Dim V(j) tr(B_j)`.
    pub fn closure_scalar(&self, b: &BlockMatrix) -> Result<C> {
        if b.source != b.target {
            return Err(Error::Shape("closure needs an endomorphism".into()));
        }
        Ok(b.blocks.iter().enumerate().filter(|(_, m)| !m.is_empty()).map(|(j, m)| trace(m) * self.dim(j) as f64).sum())
    }

    /// A seeded random equivariant grade-preserving map between two products.
    pub fn random_morphism(&self, source: &[ObjLabel], target: &[ObjLabel], rng: &mut ChaCha8Rng) -> Result<Morphism> {
        let obj = |l: &[ObjLabel]| l.iter().map(|&x| self.module(x).clone()).collect::<Vec<_>>();
        let (s, t) = (obj(source), obj(target));
        let sm = super::module::tensor_all(&self.group, &s)?;
        let tm = super::module::tensor_all(&self.group, &t)?;
        Morphism::new(s, t, average_map(rng, &sm, &tm))
    }
}

/// Labels of `rot(F)` for `F : s0 s1 -> t0 t1`.
pub fn rot_labels(source: [ObjLabel; 2], target: [ObjLabel; 2]) -> ([ObjLabel; 2], [ObjLabel; 2]) {
    ([target[0].star(), source[0]], [target[1], source[1].star()])
}

/// Group average of a random grade-preserving map `src -> tgt`.
pub fn average_map(rng: &mut ChaCha8Rng, src: &GradedModule, tgt: &GradedModule) -> Mat {
    let mut m = random_matrix(rng, tgt.dim(), src.dim());
    for r in 0..tgt.dim() {
        for c in 0..src.dim() {
            if tgt.grades[r] != src.grades[c] {
                m[(r, c)] = ZERO;
            }
        }
    }
    let g = &src.group;
    let mut acc = Mat::zeros(tgt.dim(), src.dim());
    for a in g.elements() {
        acc += &tgt.action[a] * &m * src.action[a].adjoint();
    }
    acc.unscale(g.order() as f64)
}

/// `V(c, rho)`: basis `(y, w)` for `y` in the class, action
/// `h (y, w) = (h y h^-1, rho(g_{y'}^-1 h g_y) w)`.
fn simple_module(cat: &SimpleCatalog, i: usize) -> Result<GradedModule> {
    let g = &cat.group;
    let class = cat.class_of(i);
    let rho = cat.irrep_of(i);
    let d = rho.dim;
    let k = class.members.len();
    let grades: Vec<usize> = class.members.iter().flat_map(|&y| std::iter::repeat(y).take(d)).collect();
    let mut action = Vec::with_capacity(g.order());
    for h in g.elements() {
        let mut m = Mat::zeros(k * d, k * d);
        for (p, &y) in class.members.iter().enumerate() {
            let y2 = g.conj(h, y);
            let p2 = class.position(y2).expect("class is closed under conjugation");
            let z = g.mul(g.mul(g.inv(class.transporters[p2]), h), class.transporters[p]);
            let local = class.centralizer.local(z).expect("lands in the centralizer");
            let r = &rho.matrices[local];
            for w2 in 0..d {
                for w in 0..d {
                    m[(p2 * d + w2, p * d + w)] = r[(w2, w)];
                }
            }
        }
        action.push(m);
    }
    GradedModule::new(g.clone(), grades, action)
}

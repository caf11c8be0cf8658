//! The space `E` of conjugation-invariant functions on commuting pairs, its canonical
//! orthonormal basis and the `SL(2,Z)` action.

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, ConjugacyClass, FiniteGroup};
use crate::irrep::{irreps, UnitaryIrrep};
use crate::linalg::{C, ONE, ZERO};
use serde::Serialize;
use std::sync::Arc;

/// Enumeration of the commuting pairs `(x, g)` in lexicographic element order.
#[derive(Debug)]
pub struct PairSpace {
    pub group: Arc<FiniteGroup>,
    pub pairs: Vec<(usize, usize)>,
    index: Vec<usize>,
}

impl PairSpace {
    pub fn new(group: Arc<FiniteGroup>) -> Arc<Self> {
        let n = group.order();
        let mut pairs = Vec::new();
        let mut index = vec![usize::MAX; n * n];
        for x in group.elements() {
            for g in group.elements() {
                if group.commute(x, g) {
                    index[x * n + g] = pairs.len();
                    pairs.push((x, g));
                }
            }
        }
        Arc::new(PairSpace { group, pairs, index })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, x: usize, g: usize) -> Option<usize> {
        let i = self.index[x * self.group.order() + g];
        (i != usize::MAX).then_some(i)
    }

    /// Number of orbits of commuting pairs under simultaneous conjugation.
    pub fn orbit_count(&self) -> usize {
        let gr = &self.group;
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for (k, &(x, g)) in self.pairs.iter().enumerate() {
            if seen[k] {
                continue;
            }
            count += 1;
            for a in gr.elements() {
                seen[self.index_of(gr.conj(a, x), gr.conj(a, g)).unwrap()] = true;
            }
        }
        count
    }
}

#[derive(Debug, Clone)]
pub struct EVector {
    pub space: Arc<PairSpace>,
    pub values: Vec<C>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairValueJson {
    pub x: usize,
    pub g: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffJson {
    pub index: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EVectorJson {
    pub values: Vec<PairValueJson>,
    pub basis: Vec<CoeffJson>,
}

impl EVector {
    pub fn zero(space: &Arc<PairSpace>) -> Self {
        EVector { space: space.clone(), values: vec![ZERO; space.len()] }
    }

    pub fn from_fn(space: &Arc<PairSpace>, f: impl Fn(usize, usize) -> C) -> Self {
        EVector { space: space.clone(), values: space.pairs.iter().map(|&(x, g)| f(x, g)).collect() }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.space.group
    }

    /// Value at a commuting pair. Panics on non-commuting input.
    pub fn at(&self, x: usize, g: usize) -> C {
        let k = self.space.index_of(x, g).expect("pair does not commute");
        self.values[k]
    }

    fn same_space(&self, other: &EVector) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space.group.table() == other.space.group.table() {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `(f1, f2) = (1/#G) sum f1 conj(f2)`, linear in the first argument.
    pub fn inner(&self, other: &EVector) -> Result<C> {
        self.same_space(other)?;
        let s: C = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s / self.space.group.order() as f64)
    }

    pub fn add(&self, other: &EVector) -> Result<EVector> {
        self.same_space(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(EVector { space: self.space.clone(), values })
    }

    pub fn scale(&self, s: C) -> EVector {
        EVector { space: self.space.clone(), values: self.values.iter().map(|v| v * s).collect() }
    }

    pub fn axpy(&mut self, s: C, other: &EVector) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += s * b;
        }
    }

    pub fn max_diff(&self, other: &EVector) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest violation of `f(a x a^-1, a g a^-1) = f(x, g)`.
    pub fn conjugation_defect(&self) -> f64 {
        let gr = &self.space.group;
        let mut worst: f64 = 0.0;
        for (k, &(x, g)) in self.space.pairs.iter().enumerate() {
            for a in gr.elements() {
                let v = self.at(gr.conj(a, x), gr.conj(a, g));
                worst = worst.max((v - self.values[k]).norm());
            }
        }
        worst
    }

    /// `(M f)(x, g) = f(x^a g^b, x^c g^d)` for `M = [[a, b], [c, d]]` with determinant 1.
    pub fn sl2z(&self, m: [[i64; 2]; 2]) -> EVector {
        assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1, "matrix must have determinant 1");
        let gr = &self.space.group;
        EVector::from_fn(&self.space, |x, g| {
            let u = gr.mul(gr.pow(x, m[0][0]), gr.pow(g, m[0][1]));
            let v = gr.mul(gr.pow(x, m[1][0]), gr.pow(g, m[1][1]));
            self.at(u, v)
        })
    }

    /// `Q^k f` with `Q = [[1, 0], [1, 1]]`.
    pub fn q_power(&self, k: i64) -> EVector {
        self.sl2z([[1, 0], [k, 1]])
    }

    pub fn to_json(&self, basis: &[EVector]) -> EVectorJson {
        let values = self
            .space
            .pairs
            .iter()
            .zip(&self.values)
            .map(|(&(x, g), v)| PairValueJson { x, g, re: v.re, im: v.im })
            .collect();
        let basis = basis
            .iter()
            .enumerate()
            .map(|(index, b)| {
                let c = self.inner(b).expect("same group");
                CoeffJson { index, re: c.re, im: c.im }
            })
            .collect();
        EVectorJson { values, basis }
    }
}

pub const Q: [[i64; 2]; 2] = [[1, 0], [1, 1]];
pub const S: [[i64; 2]; 2] = [[0, -1], [1, 0]];

pub fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut m = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// Position of a simple object `(c, rho)` in the canonical enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SimpleIndex {
    pub ordinal: usize,
    pub class: usize,
    pub irrep: usize,
}

/// Conjugacy classes with the irreps of their centralizers, enumerated class by class.
#[derive(Debug)]
pub struct SimpleCatalog {
    pub group: Arc<FiniteGroup>,
    pub space: Arc<PairSpace>,
    pub classes: Vec<ConjugacyClass>,
    pub irreps: Vec<Vec<UnitaryIrrep>>,
    pub simples: Vec<SimpleIndex>,
    pub basis: Vec<EVector>,
}

impl SimpleCatalog {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self> {
        let space = PairSpace::new(group.clone());
        let classes = conjugacy_classes(&group);
        let mut irr = Vec::with_capacity(classes.len());
        for c in &classes {
            irr.push(irreps(&c.centralizer.group)?);
        }
        let mut simples = Vec::new();
        for (ci, list) in irr.iter().enumerate() {
            for ri in 0..list.len() {
                simples.push(SimpleIndex { ordinal: simples.len(), class: ci, irrep: ri });
            }
        }
        let mut cat = SimpleCatalog { group, space, classes, irreps: irr, simples, basis: Vec::new() };
        cat.basis = cat.simples.iter().map(|s| cat.chi(*s)).collect();
        Ok(cat)
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }

    pub fn class_of(&self, i: usize) -> &ConjugacyClass {
        &self.classes[self.simples[i].class]
    }

    pub fn irrep_of(&self, i: usize) -> &UnitaryIrrep {
        let s = self.simples[i];
        &self.irreps[s.class][s.irrep]
    }

    /// `chi_{c,rho}(g x g^-1, g h g^-1) = rho(h)` and zero off the class.
    fn chi(&self, s: SimpleIndex) -> EVector {
        let g = &self.group;
        let class = &self.classes[s.class];
        let rho = &self.irreps[s.class][s.irrep];
        EVector::from_fn(&self.space, |y, k| match class.position(y) {
            None => ZERO,
            Some(p) => {
                let t = class.transporters[p];
                let h = g.mul(g.mul(g.inv(t), k), t);
                let local = class.centralizer.local(h).expect("element of the centralizer");
                rho.character[local]
            }
        })
    }

    /// `theta = chi(x, x) / chi(x, e)`, checked to be independent of `x` in the class.
    pub fn theta(&self, i: usize) -> C {
        let chi = &self.basis[i];
        let class = self.class_of(i);
        let e = self.group.identity();
        let t0 = chi.at(class.rep, class.rep) / chi.at(class.rep, e);
        for &x in &class.members {
            let t = chi.at(x, x) / chi.at(x, e);
            assert!((t - t0).norm() < 1e-9, "theta depends on the class member");
        }
        t0
    }

    /// Coefficients in the canonical basis and the residual norm.
    pub fn decompose(&self, f: &EVector) -> (Vec<C>, f64) {
        let coeffs: Vec<C> = self.basis.iter().map(|b| f.inner(b).expect("same group")).collect();
        let mut rec = EVector::zero(&self.space);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            rec.axpy(*c, b);
        }
        (coeffs, rec.max_diff(f))
    }

    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let expect = if i == j { ONE } else { ZERO };
                worst = worst.max((a.inner(b).unwrap() - expect).norm());
            }
        }
        worst
    }
}

/// All `chi_{c,rho}` with their indices.
pub fn canonical_basis(group: Arc<FiniteGroup>) -> Result<Vec<(SimpleIndex, EVector)>> {
    let cat = SimpleCatalog::new(group)?;
    Ok(cat.simples.iter().copied().zip(cat.basis.iter().cloned()).collect())
}

/// Element of `E^{(x) r}` given by coefficients on products of basis vectors,
/// indexed by tuples of simples in row-major order.
#[derive(Debug, Clone)]
pub struct ProductVector {
    pub factors: usize,
    pub simples: usize,
    pub coeffs: Vec<C>,
}

impl ProductVector {
    pub fn zero(factors: usize, simples: usize) -> Self {
        ProductVector { factors, simples, coeffs: vec![ZERO; simples.pow(factors as u32)] }
    }

    pub fn index_of(&self, colors: &[usize]) -> usize {
        colors.iter().fold(0, |acc, &c| acc * self.simples + c)
    }

    pub fn colors_of(&self, mut k: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors];
        for slot in out.iter_mut().rev() {
            *slot = k % self.simples;
            k /= self.simples;
        }
        out
    }

    pub fn coefficient(&self, colors: &[usize]) -> C {
        self.coeffs[self.index_of(colors)]
    }

    /// Value at one commuting pair per factor.
    pub fn value(&self, cat: &SimpleCatalog, args: &[(usize, usize)]) -> C {
        assert_eq!(args.len(), self.factors);
        let tables: Vec<Vec<C>> = args.iter().map(|&(x, g)| cat.basis.iter().map(|b| b.at(x, g)).collect()).collect();
        let mut s = ZERO;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            let colors = self.colors_of(k);
            s += colors.iter().zip(&tables).fold(*c, |acc, (&i, t)| acc * t[i]);
        }
        s
    }

    /// `Q^{k_1} (x) ... (x) Q^{k_r}` applied factorwise.
    pub fn twisted(&self, cat: &SimpleCatalog, powers: &[i64]) -> ProductVector {
        assert_eq!(powers.len(), self.factors);
        let theta: Vec<C> = (0..cat.len()).map(|i| cat.theta(i)).collect();
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            for (i, &p) in self.colors_of(k).iter().zip(powers) {
                *c *= theta[*i].powi(p as i32);
            }
        }
        out
    }

    pub fn to_evector(&self, cat: &SimpleCatalog) -> Option<EVector> {
        if self.factors != 1 {
            return None;
        }
        let mut v = EVector::zero(&cat.space);
        for (c, b) in self.coeffs.iter().zip(&cat.basis) {
            v.axpy(*c, b);
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_named_group;
    use proptest::prelude::*;

    fn catalog(spec: &str) -> SimpleCatalog {
        SimpleCatalog::new(Arc::new(build_named_group(spec).unwrap())).unwrap()
    }

    #[test]
    fn basis_sizes() {
        let t = catalog("Z1");
        assert_eq!(t.len(), 1);
        assert_eq!(t.basis[0].at(0, 0), ONE);
        assert_eq!(catalog("D3").len(), 8);
        assert_eq!(catalog("D5").len(), 16);
        for spec in ["Z2", "Z5", "S3", "D7", "Q8", "S4"] {
            let c = catalog(spec);
            assert_eq!(c.len(), c.space.orbit_count(), "{spec}");
            assert!(c.gram_defect() < 1e-9, "{spec}");
            for b in &c.basis {
                assert!(b.conjugation_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn w_plus_w_minus_orthogonal_in_d3() {
        let c = catalog("D3");
        assert_eq!(c.space.len(), 18);
        let (wp, wm) = (&c.basis[6], &c.basis[7]);
        assert!(wp.inner(wm).unwrap().norm() < 1e-12);
        assert!((wp.inner(wp).unwrap() - ONE).norm() < 1e-12);
        assert_eq!(wp.inner(&EVector::zero(&c.space)).unwrap(), ZERO);
    }

    #[test]
    fn theta_values_for_dihedral() {
        let n = 5;
        let c = catalog("D5");
        assert_eq!(c.theta(0), ONE);
        assert!((c.theta(14) - ONE).norm() < 1e-12);
        assert!((c.theta(15) + ONE).norm() < 1e-12);
        for i in 0..c.len() {
            let cl = c.class_of(i);
            assert!((c.theta(i).norm() - 1.0).abs() < 1e-12);
            if (1..=(n - 1) / 2).contains(&cl.rep) {
                let j = cl.rep as i64;
                let t = c.irrep_of(i).character[1];
                assert!((t.powi(j as i32) - c.theta(i)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn q_acts_diagonally() {
        let c = catalog("S3");
        for (i, b) in c.basis.iter().enumerate() {
            let qb = b.sl2z(Q);
            assert!(qb.max_diff(&b.scale(c.theta(i))) < 1e-12);
        }
    }

    #[test]
    fn s_squared_is_inversion() {
        let c = catalog("D3");
        let gr = &c.group;
        let f = EVector::from_fn(&c.space, |x, g| C::new((x * 7 + g) as f64, 0.0));
        let sym = EVector::from_fn(&c.space, |x, g| {
            (0..gr.order()).map(|a| f.at(gr.conj(a, x), gr.conj(a, g))).sum::<C>() / gr.order() as f64
        });
        let lhs = sym.sl2z(S).sl2z(S);
        let rhs = EVector::from_fn(&c.space, |x, g| sym.at(gr.inv(x), gr.inv(g)));
        assert!(lhs.max_diff(&rhs) < 1e-12);
    }

    fn word_matrix(word: &[bool]) -> [[i64; 2]; 2] {
        word.iter().fold([[1, 0], [0, 1]], |acc, &w| mat_mul(acc, if w { Q } else { S }))
    }

    proptest! {
        #[test]
        fn sl2z_is_a_right_action(w1 in proptest::collection::vec(any::<bool>(), 0..6),
                             w2 in proptest::collection::vec(any::<bool>(), 0..6),
                             i in 0usize..8) {
            let c = catalog("D3");
            let f = &c.basis[i];
            let (m1, m2) = (word_matrix(&w1), word_matrix(&w2));
            let lhs = f.sl2z(mat_mul(m1, m2));
            let rhs = f.sl2z(m1).sl2z(m2);
            prop_assert!(lhs.max_diff(&rhs) < 1e-9);
            let (_, residual) = c.decompose(&lhs);
            prop_assert!(residual < 1e-9);
        }
    }
}

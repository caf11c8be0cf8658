use crate::error::{Error, Result};
use crate::espace::{EVector, PairSpace};
use crate::group::FiniteGroup;
use crate::linalg::{kron, max_abs_diff, Mat, C, ONE, ZERO};
use serde::Serialize;
use std::sync::Arc;

/// Names an object as a simple `V(i)` or its literal dual `V(i)*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ObjLabel {
    pub simple: usize,
    pub dual: bool,
}

impl ObjLabel {
    pub fn plain(simple: usize) -> Self {
        ObjLabel { simple, dual: false }
    }

    pub fn star(self) -> Self {
        ObjLabel { simple: self.simple, dual: !self.dual }
    }
}

/// A graded unitary `G`-module: basis vector `a` lives in grade `grades[a]` and
/// `action[g]` sends grade `x` to grade `g x g^-1`.
#[derive(Debug, Clone)]
pub struct GradedModule {
    pub group: Arc<FiniteGroup>,
    pub grades: Vec<usize>,
    pub action: Vec<Mat>,
    pub label: Option<ObjLabel>,
}

pub type Obj = Arc<GradedModule>;

fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> Result<()> {
    if std::ptr::eq(a, b) || a.table() == b.table() {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

impl GradedModule {
    pub fn new(group: Arc<FiniteGroup>, grades: Vec<usize>, action: Vec<Mat>) -> Result<Self> {
        let m = GradedModule { group, grades, action, label: None };
        if m.action.len() != m.group.order() {
            return Err(Error::Shape("one action matrix per group element".into()));
        }
        if m.action.iter().any(|a| a.shape() != (m.dim(), m.dim())) {
            return Err(Error::Shape("action matrices must be dim x dim".into()));
        }
        let defect = m.structure_defect();
        if defect > 1e-9 {
            return Err(Error::Shape(format!("not a graded unitary module (defect {defect:e})")));
        }
        Ok(m)
    }

    /// The unit object: `C` in grade `e`.
    pub fn unit(group: &Arc<FiniteGroup>) -> Self {
        GradedModule {
            group: group.clone(),
            grades: vec![group.identity()],
            action: vec![Mat::identity(1, 1); group.order()],
            label: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.grades.len()
    }

    pub fn grade_dim(&self, x: usize) -> usize {
        self.grades.iter().filter(|&&g| g == x).count()
    }

    pub fn tensor(&self, other: &GradedModule) -> Result<GradedModule> {
        same_group(&self.group, &other.group)?;
        let g = &self.group;
        let mut grades = Vec::with_capacity(self.dim() * other.dim());
        for &x in &self.grades {
            for &y in &other.grades {
                grades.push(g.mul(x, y));
            }
        }
        let action = self.action.iter().zip(&other.action).map(|(a, b)| kron(a, b)).collect();
        Ok(GradedModule { group: g.clone(), grades, action, label: None })
    }

    /// `(U*)_x = conj(U_{x^-1})` with the conjugate basis; `dual(dual(U)) == U` literally.
    pub fn dual(&self) -> GradedModule {
        GradedModule {
            group: self.group.clone(),
            grades: self.grades.iter().map(|&x| self.group.inv(x)).collect(),
            action: self.action.iter().map(|a| a.map(|z| z.conj())).collect(),
            label: self.label.map(ObjLabel::star),
        }
    }

    pub fn with_label(mut self, label: ObjLabel) -> Self {
        self.label = Some(label);
        self
    }

    /// `chi_U(x, g) = tr(g : U_x -> U_x)`.
    pub fn character(&self, space: &Arc<PairSpace>) -> EVector {
        EVector::from_fn(space, |x, g| {
            let a = &self.action[g];
            self.grades.iter().enumerate().filter(|(_, &y)| y == x).map(|(k, _)| a[(k, k)]).sum()
        })
    }

    pub fn dim_total(&self) -> usize {
        self.dim()
    }

    /// Largest violation among homomorphism, unitarity and grade bookkeeping.
    pub fn structure_defect(&self) -> f64 {
        let g = &self.group;
        let mut worst: f64 = 0.0;
        for a in g.elements() {
            let m = &self.action[a];
            worst = worst.max(max_abs_diff(&(m.adjoint() * m), &Mat::identity(self.dim(), self.dim())));
            for col in 0..self.dim() {
                let to = g.conj(a, self.grades[col]);
                for row in 0..self.dim() {
                    if self.grades[row] != to {
                        worst = worst.max(m[(row, col)].norm());
                    }
                }
            }
            for b in g.elements() {
                worst = worst.max(max_abs_diff(&(m * &self.action[b]), &self.action[g.mul(a, b)]));
            }
        }
        worst
    }

    pub fn same_shape(&self, other: &GradedModule) -> bool {
        self.grades == other.grades
    }
}

pub fn tensor_all(group: &Arc<FiniteGroup>, list: &[Obj]) -> Result<GradedModule> {
    let mut acc = GradedModule::unit(group);
    for (k, m) in list.iter().enumerate() {
        acc = if k == 0 { (**m).clone() } else { acc.tensor(m)? };
    }
    acc.label = if list.len() == 1 { list[0].label } else { None };
    Ok(acc)
}

fn list_dim(list: &[Obj]) -> usize {
    list.iter().map(|m| m.dim()).product()
}

/// Max over `g` of `|T(g) m - m S(g)|`.
pub fn equivariance_defect(src: &GradedModule, tgt: &GradedModule, m: &Mat) -> f64 {
    src.group
        .elements()
        .map(|g| max_abs_diff(&(&tgt.action[g] * m), &(m * &src.action[g])))
        .fold(0.0, f64::max)
}

/// Largest entry of `m` connecting basis vectors of different grades.
pub fn grade_defect(src: &GradedModule, tgt: &GradedModule, m: &Mat) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..tgt.dim() {
        for c in 0..src.dim() {
            if tgt.grades[r] != src.grades[c] {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

/// Linear map from the tensor product of `source` to that of `target`, in the
/// lexicographic product basis.
#[derive(Debug, Clone)]
pub struct Morphism {
    pub source: Vec<Obj>,
    pub target: Vec<Obj>,
    pub matrix: Mat,
}

impl Morphism {
    pub fn new(source: Vec<Obj>, target: Vec<Obj>, matrix: Mat) -> Result<Self> {
        if matrix.shape() != (list_dim(&target), list_dim(&source)) {
            return Err(Error::Shape(format!(
                "matrix {:?} does not match {} -> {}",
                matrix.shape(),
                list_dim(&source),
                list_dim(&target)
            )));
        }
        Ok(Morphism { source, target, matrix })
    }

    pub fn identity(list: Vec<Obj>) -> Self {
        let d = list_dim(&list);
        Morphism { source: list.clone(), target: list, matrix: Mat::identity(d, d) }
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        let ok = self.source.len() == inner.target.len()
            && self.source.iter().zip(&inner.target).all(|(a, b)| a.same_shape(b));
        if !ok {
            return Err(Error::Shape("composition of incompatible morphisms".into()));
        }
        Ok(Morphism { source: inner.source.clone(), target: self.target.clone(), matrix: &self.matrix * &inner.matrix })
    }

    pub fn tensor(&self, other: &Morphism) -> Morphism {
        let cat = |a: &[Obj], b: &[Obj]| a.iter().chain(b).cloned().collect::<Vec<_>>();
        Morphism {
            source: cat(&self.source, &other.source),
            target: cat(&self.target, &other.target),
            matrix: kron(&self.matrix, &other.matrix),
        }
    }

    pub fn group(&self) -> Option<&Arc<FiniteGroup>> {
        self.source.first().or(self.target.first()).map(|m| &m.group)
    }

    fn modules(&self, group: &Arc<FiniteGroup>) -> (GradedModule, GradedModule) {
        (tensor_all(group, &self.source).unwrap(), tensor_all(group, &self.target).unwrap())
    }

    pub fn equivariance_defect(&self) -> f64 {
        let Some(g) = self.group() else { return 0.0 };
        let (s, t) = self.modules(&g.clone());
        equivariance_defect(&s, &t, &self.matrix)
    }

    pub fn grade_defect(&self) -> f64 {
        let Some(g) = self.group() else { return 0.0 };
        let (s, t) = self.modules(&g.clone());
        grade_defect(&s, &t, &self.matrix)
    }

    pub fn max_diff(&self, other: &Morphism) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source.len() == self.target.len() && self.source.iter().zip(&self.target).all(|(a, b)| a.same_shape(b))
    }
}

/// `R_{U,V} : u_x (x) v -> (x v) (x) u_x`.
pub fn braiding(u: &Obj, v: &Obj) -> Morphism {
    let (du, dv) = (u.dim(), v.dim());
    let mut m = Mat::zeros(du * dv, du * dv);
    for a in 0..du {
        let act = &v.action[u.grades[a]];
        for b in 0..dv {
            for b2 in 0..dv {
                let z = act[(b2, b)];
                if z != ZERO {
                    m[(b2 * du + a, a * dv + b)] = z;
                }
            }
        }
    }
    Morphism { source: vec![u.clone(), v.clone()], target: vec![v.clone(), u.clone()], matrix: m }
}

/// `R_{U,V}^-1 : v (x) u_x -> u_x (x) (x^-1 v)`.
pub fn braiding_inverse(u: &Obj, v: &Obj) -> Morphism {
    let (du, dv) = (u.dim(), v.dim());
    let g = &u.group;
    let mut m = Mat::zeros(du * dv, du * dv);
    for a in 0..du {
        let act = &v.action[g.inv(u.grades[a])];
        for b2 in 0..dv {
            for b in 0..dv {
                let z = act[(b, b2)];
                if z != ZERO {
                    m[(a * dv + b, b2 * du + a)] = z;
                }
            }
        }
    }
    Morphism { source: vec![v.clone(), u.clone()], target: vec![u.clone(), v.clone()], matrix: m }
}

/// `i_U : C -> U (x) U*`, `1 -> sum_a u_a (x) conj(u_a)`.
pub fn cup(u: &Obj) -> Morphism {
    let d = u.dim();
    let mut m = Mat::zeros(d * d, 1);
    for a in 0..d {
        m[(a * d + a, 0)] = ONE;
    }
    Morphism { source: vec![], target: vec![u.clone(), Arc::new(u.dual())], matrix: m }
}

/// `e_U : U* (x) U -> C`, `conj(u_a) (x) u_b -> delta_ab`.
pub fn cap(u: &Obj) -> Morphism {
    let d = u.dim();
    let mut m = Mat::zeros(1, d * d);
    for a in 0..d {
        m[(0, a * d + a)] = ONE;
    }
    Morphism { source: vec![Arc::new(u.dual()), u.clone()], target: vec![], matrix: m }
}

/// Quarter turn by index transposition: `rot(F)[(l, b), (k, a)] = F[(k, l), (a, b)]`
/// for `F : U1 U2 -> U3 U4`, giving `U3* U1 -> U4 U2*`.
pub fn rot(f: &Morphism) -> Result<Morphism> {
    let (s, t) = rot_shape(f)?;
    let (d1, d2, d3, d4) = (f.source[0].dim(), f.source[1].dim(), f.target[0].dim(), f.target[1].dim());
    let mut m = Mat::zeros(d4 * d2, d3 * d1);
    for k in 0..d3 {
        for l in 0..d4 {
            for a in 0..d1 {
                for b in 0..d2 {
                    m[(l * d2 + b, k * d1 + a)] = f.matrix[(k * d4 + l, a * d2 + b)];
                }
            }
        }
    }
    Ok(Morphism { source: s, target: t, matrix: m })
}

/// Quarter turn as the composite `(e_{U3} id id)(id F id)(id id i_{U2})`.
pub fn rot_categorical(f: &Morphism) -> Result<Morphism> {
    let (s, t) = rot_shape(f)?;
    let (u1, u2, u3, u4) = (&f.source[0], &f.source[1], &f.target[0], &f.target[1]);
    let u3s = s[0].clone();
    let u2s = t[1].clone();
    let id = |m: &Obj| Morphism::identity(vec![m.clone()]);
    let bottom = id(&u3s).tensor(&id(u1)).tensor(&cup(u2));
    let middle = id(&u3s).tensor(f).tensor(&id(&u2s));
    let top = cap(u3).tensor(&id(u4)).tensor(&id(&u2s));
    let m = &top.matrix * (&middle.matrix * &bottom.matrix);
    Ok(Morphism { source: s, target: t, matrix: m })
}

fn rot_shape(f: &Morphism) -> Result<(Vec<Obj>, Vec<Obj>)> {
    if f.source.len() != 2 || f.target.len() != 2 {
        return Err(Error::Shape("rot needs a morphism between pairs".into()));
    }
    let u3s: Obj = Arc::new(f.target[0].dual());
    let u2s: Obj = Arc::new(f.source[1].dual());
    Ok((vec![u3s, f.source[0].clone()], vec![f.target[1].clone(), u2s]))
}

/// `tr->(f)(x, g) = tr(P_x g f)` on the source object.
pub fn vector_trace(f: &Morphism, space: &Arc<PairSpace>) -> Result<EVector> {
    if !f.is_endomorphism() {
        return Err(Error::Shape("vector trace needs an endomorphism".into()));
    }
    let w = tensor_all(&space.group, &f.source)?;
    Ok(EVector::from_fn(space, |x, g| {
        let a = &w.action[g];
        let mut s = ZERO;
        for r in (0..w.dim()).filter(|&r| w.grades[r] == x) {
            for c in 0..w.dim() {
                s += a[(r, c)] * f.matrix[(c, r)];
            }
        }
        s
    }))
}

/// Character of `U (x) V` from those of the factors:
/// `sum_{x1 in C(g)} chi_U(x1, g) chi_V(x1^-1 x, g)`.
pub fn convolve_characters(f1: &EVector, f2: &EVector) -> EVector {
    let g = f1.group();
    EVector::from_fn(&f1.space, |x, h| {
        let mut s = ZERO;
        for x1 in g.elements().filter(|&x1| g.commute(x1, h)) {
            s += f1.at(x1, h) * f2.at(g.mul(g.inv(x1), x), h);
        }
        s
    })
}

pub fn scalar(m: &Morphism) -> Option<C> {
    (m.matrix.shape() == (1, 1)).then(|| m.matrix[(0, 0)])
}

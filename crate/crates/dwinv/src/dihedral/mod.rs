//! Closed forms for `D_n` with `n` odd: the simple objects, `Phi(R)` and `ROT` on
//! `W (x) W`, rational tangles and the count of `n`-colorings of Montesinos knots.
//!
//! `w = e^{pi i / n}`, `zeta = w^2` and `zeta^{x/2} := zeta^{x (n+1)/2} = w^{x (n+1)}`.

pub mod cyclotomic;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic, CyclotomicField};

use crate::error::{Error, Result};
use crate::group::GroupKind;
use crate::linalg::{approx_eq, C, ONE, ZERO};
use crate::montesinos::{continued_fraction, is_knot, MontesinosSpec};
use crate::qdouble::{BlockMatrix, Category, ObjLabel};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Arc;

/// Tolerance for rounding a float count.
pub const COUNT_TOL: f64 = 1e-6;

pub fn check_n(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Coloring(format!("n = {n}: need an odd n >= 3")));
    }
    Ok(())
}

fn half(n: usize) -> usize {
    (n - 1) / 2
}

/// Simple objects of the module category of `D(D_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DihedralLabel {
    Unit,
    Sign,
    Rho(usize),
    V { j: usize, t: usize },
    W { plus: bool },
}

impl DihedralLabel {
    /// 1-based position in the list `V(1), V(2), V(2+r), V^{j,t}, W+, W-`.
    pub fn position(self, n: usize) -> usize {
        match self {
            DihedralLabel::Unit => 1,
            DihedralLabel::Sign => 2,
            DihedralLabel::Rho(r) => 2 + r,
            DihedralLabel::V { j, t } => (n + 3) / 2 + (j - 1) * n + t,
            DihedralLabel::W { plus } => (n * n + 3) / 2 + if plus { 1 } else { 2 },
        }
    }

    pub fn dim(self, n: usize) -> usize {
        match self {
            DihedralLabel::Unit | DihedralLabel::Sign => 1,
            DihedralLabel::Rho(_) | DihedralLabel::V { .. } => 2,
            DihedralLabel::W { .. } => n,
        }
    }
}

impl std::fmt::Display for DihedralLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            DihedralLabel::Unit => write!(f, "V(1)"),
            DihedralLabel::Sign => write!(f, "V(2)"),
            DihedralLabel::Rho(r) => write!(f, "V(2+{r})"),
            DihedralLabel::V { j, t } => write!(f, "V^{{{j},{t}}}"),
            DihedralLabel::W { plus } => write!(f, "W{}", if plus { "+" } else { "-" }),
        }
    }
}

/// The labels in list order.
pub fn catalogue(n: usize) -> Vec<DihedralLabel> {
    let h = half(n);
    let mut out = vec![DihedralLabel::Unit, DihedralLabel::Sign];
    out.extend((1..=h).map(DihedralLabel::Rho));
    for j in 1..=h {
        out.extend((1..=n).map(|t| DihedralLabel::V { j, t }));
    }
    out.push(DihedralLabel::W { plus: true });
    out.push(DihedralLabel::W { plus: false });
    out
}

/// Summands of `W (x) W`: `V(1)`, `V(2+r)` and `V^{j,t}`, each once.
pub fn block_labels(n: usize) -> Vec<DihedralLabel> {
    catalogue(n).into_iter().filter(|l| !matches!(l, DihedralLabel::Sign | DihedralLabel::W { .. })).collect()
}

/// Correspondence between the labels and the simple indices of a generic [`Category`].
#[derive(Debug, Clone)]
pub struct DihedralSimpleTable {
    pub n: usize,
    pub labels: Vec<DihedralLabel>,
    index: HashMap<DihedralLabel, usize>,
}

impl DihedralSimpleTable {
    /// Reads each simple module of `cat` and names it.
    pub fn from_category(cat: &Category) -> Result<Self> {
        let GroupKind::Dihedral(n) = cat.group.kind else {
            return Err(Error::GroupSpec(format!("{} is not dihedral", cat.group.name)));
        };
        check_n(n)?;
        let tol = 1e-9;
        let root = |t: usize| C::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / n as f64);
        let mut labels = Vec::with_capacity(cat.len());
        for i in 0..cat.len() {
            let m = cat.simple(i);
            let x = m.grades[0];
            let b = n;
            let label = if x == 0 {
                let sb = m.action[b].trace();
                match m.dim() {
                    1 if approx_eq(sb, ONE, tol) => DihedralLabel::Unit,
                    1 => DihedralLabel::Sign,
                    _ => {
                        let ta = m.action[1].trace();
                        let r = (1..=half(n))
                            .find(|&r| approx_eq(ta, root(r) + root(n - r), tol))
                            .ok_or_else(|| Error::Irrep(format!("simple {i}: no matching rho")))?;
                        DihedralLabel::Rho(r)
                    }
                }
            } else if x < n {
                let (pos, j) = match m.grades.iter().position(|&g| g >= 1 && g <= half(n)) {
                    Some(p) => (p, m.grades[p]),
                    None => return Err(Error::Irrep(format!("simple {i}: no grade a^j"))),
                };
                let z = m.action[1][(pos, pos)];
                let t = (1..=n)
                    .find(|&t| approx_eq(z, root(t % n), tol))
                    .ok_or_else(|| Error::Irrep(format!("simple {i}: eigenvalue {z}")))?;
                DihedralLabel::V { j, t }
            } else {
                let pos = m.grades.iter().position(|&g| g == b).ok_or_else(|| Error::Irrep(format!("simple {i}")))?;
                DihedralLabel::W { plus: approx_eq(m.action[b][(pos, pos)], ONE, tol) }
            };
            labels.push(label);
        }
        let index: HashMap<DihedralLabel, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        if index.len() != labels.len() || labels.len() != (n * n + 7) / 2 {
            return Err(Error::Irrep(format!("D{n}: {} simples, {} distinct labels", labels.len(), index.len())));
        }
        Ok(DihedralSimpleTable { n, labels, index })
    }

    pub fn index(&self, l: DihedralLabel) -> usize {
        self.index[&l]
    }

    pub fn w(&self, plus: bool) -> usize {
        self.index(DihedralLabel::W { plus })
    }

    /// Block values of a morphism between products of two `W`s, in [`block_labels`] order.
    pub fn diagonal(&self, b: &BlockMatrix) -> Result<Vec<C>> {
        block_labels(self.n)
            .into_iter()
            .map(|l| {
                let m = &b.blocks[self.index(l)];
                if m.shape() != (1, 1) {
                    return Err(Error::Shape(format!("block {l:?} has shape {:?}", m.shape())));
                }
                Ok(m[(0, 0)])
            })
            .collect()
    }

    /// Generic `ROT` from `W (x) W -> W (x) W` as a matrix on block values.
    pub fn engine_rot(&self, cat: &Category, plus: bool) -> Result<Vec<Vec<C>>> {
        let w = ObjLabel::plain(self.w(plus));
        let labels = block_labels(self.n);
        let mut cols = Vec::with_capacity(labels.len());
        for &l in &labels {
            let mut b = cat.identity_blocks([w, w])?.scale(ZERO);
            b.blocks[self.index(l)][(0, 0)] = ONE;
            cols.push(self.diagonal(&cat.rot_block(&b)?)?);
        }
        Ok((0..labels.len()).map(|r| cols.iter().map(|c| c[r]).collect()).collect())
    }
}

/// A scalar per summand of `W (x) W`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalBlockForm {
    pub n: usize,
    pub labels: Vec<DihedralLabel>,
    pub values: Vec<Cyclotomic>,
}

impl DiagonalBlockForm {
    pub fn embed(&self) -> Vec<C> {
        self.values.iter().map(Cyclotomic::embed).collect()
    }

    pub fn value(&self, l: DihedralLabel) -> Option<&Cyclotomic> {
        self.labels.iter().position(|&x| x == l).map(|k| &self.values[k])
    }

    /// `sum Dim V(j) value_j`.
    pub fn quantum_trace(&self) -> Cyclotomic {
        let f = self.values[0].field.clone();
        self.labels.iter().zip(&self.values).fold(Cyclotomic::zero(&f), |s, (l, v)| &s + &v.scale(&rational(l.dim(self.n) as i64, 1)))
    }

    pub fn compose(&self, other: &DiagonalBlockForm) -> DiagonalBlockForm {
        DiagonalBlockForm { n: self.n, labels: self.labels.clone(), values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() }
    }
}

/// An exact matrix indexed by [`block_labels`] on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBlockMatrix {
    pub n: usize,
    pub labels: Vec<DihedralLabel>,
    pub entries: Vec<Vec<Cyclotomic>>,
}

impl ExactBlockMatrix {
    pub fn embed(&self) -> Vec<Vec<C>> {
        self.entries.iter().map(|r| r.iter().map(Cyclotomic::embed).collect()).collect()
    }

    pub fn apply(&self, d: &DiagonalBlockForm) -> DiagonalBlockForm {
        let f = d.values[0].field.clone();
        let values = self
            .entries
            .iter()
            .map(|row| row.iter().zip(&d.values).fold(Cyclotomic::zero(&f), |s, (a, b)| &s + &(a * b)))
            .collect();
        DiagonalBlockForm { n: self.n, labels: self.labels.clone(), values }
    }
}

fn rational(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// The field `Q(w)` used for `D_n`.
pub fn field(n: usize) -> Arc<CyclotomicField> {
    CyclotomicField::new(2 * n)
}

/// `zeta^{x/2}`.
pub fn zeta_half(f: &Arc<CyclotomicField>, n: usize, x: i64) -> Cyclotomic {
    Cyclotomic::root(f, (x.rem_euclid(2 * n as i64)) * (n as i64 + 1))
}

fn zeta(f: &Arc<CyclotomicField>, x: i64) -> Cyclotomic {
    Cyclotomic::root(f, 2 * x)
}

/// `Phi(R_{W,W})` for `W+` (`plus`) or `W-`.
pub fn phi_pm_r(n: usize, plus: bool) -> Result<DiagonalBlockForm> {
    check_n(n)?;
    let f = field(n);
    let s = if plus { 1 } else { -1 };
    let labels = block_labels(n);
    let values = labels
        .iter()
        .map(|l| match *l {
            DihedralLabel::V { j, t } => zeta_half(&f, n, (j * t) as i64).scale(&rational(s, 1)),
            _ => Cyclotomic::integer(&f, s),
        })
        .collect();
    Ok(DiagonalBlockForm { n, labels, values })
}

/// Shape of one `ROT` entry: `k/n`, or `(zeta^{x/2} + zeta^{-x/2}) / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotEntry {
    Rational(i64),
    Cosine(i64),
}

/// `ROT_{row,col}` on the summands of `W (x) W`; the same for both signs.
pub fn rot_entry(row: DihedralLabel, col: DihedralLabel) -> RotEntry {
    use DihedralLabel::*;
    match (row, col) {
        (_, Unit) => RotEntry::Rational(1),
        (Unit, _) | (Rho(_), Rho(_)) => RotEntry::Rational(2),
        (Rho(r), V { j, .. }) | (V { j, .. }, Rho(r)) => RotEntry::Cosine((j * r) as i64),
        (V { j, t }, V { j: j2, t: t2 }) => RotEntry::Cosine((j * t2 + j2 * t) as i64),
        _ => RotEntry::Rational(0),
    }
}

pub fn rot_pm(n: usize, _plus: bool) -> Result<ExactBlockMatrix> {
    check_n(n)?;
    let f = field(n);
    let inv_n = rational(1, n as i64);
    let labels = block_labels(n);
    let entries = labels
        .iter()
        .map(|&r| {
            labels
                .iter()
                .map(|&c| match rot_entry(r, c) {
                    RotEntry::Rational(k) => Cyclotomic::rational(&f, rational(k, n as i64)),
                    RotEntry::Cosine(x) => (&zeta_half(&f, n, x) + &zeta_half(&f, n, -x)).scale(&inv_n),
                })
                .collect()
        })
        .collect();
    Ok(ExactBlockMatrix { n, labels, entries })
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let e = a.extended_gcd(&m);
    (e.gcd == 1 || m == 1).then(|| e.x.rem_euclid(m.max(1)))
}

/// Value on `T(p/q)` coloured by `W+` or `W-`:
/// `(+-1)^{mu} (n,p) (1 + sum_{(n,p)|r} 1 + sum_{(n,p)|j,t} zeta^{-(q/2p) j t})`.
pub fn rational_closed_form(n: usize, plus: bool, p: i64, q: i64) -> Result<DiagonalBlockForm> {
    check_n(n)?;
    if p == 0 {
        return Err(Error::Fraction("no closed form for p = 0".into()));
    }
    let mu = continued_fraction(p, q)?.mu();
    let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
    let f = field(n);
    let ni = n as i64;
    let d = p.gcd(&ni);
    let nd = ni / d;
    let sign = if plus || mu % 2 == 0 { 1 } else { -1 };
    let pref = Cyclotomic::integer(&f, sign * d);
    let inv = mod_inverse((2 * p / d).rem_euclid(nd.max(1)), nd).ok_or_else(|| Error::Fraction(format!("{p}/{q}")))?;
    let labels = block_labels(n);
    let values = labels
        .iter()
        .map(|l| match *l {
            DihedralLabel::Unit => pref.clone(),
            DihedralLabel::Rho(r) if r as i64 % d == 0 => pref.clone(),
            DihedralLabel::V { j, t } if j as i64 % d == 0 && t as i64 % d == 0 => {
                let e = -(q % nd) * (j as i64 / d) % nd * (t as i64 / d) % nd * inv % nd * d;
                &pref * &zeta(&f, e)
            }
            _ => Cyclotomic::zero(&f),
        })
        .collect();
    Ok(DiagonalBlockForm { n, labels, values })
}

fn check_knot_spec(n: usize, spec: &MontesinosSpec) -> Result<()> {
    check_n(n)?;
    if spec.fractions.iter().any(|&(p, _)| p == 0) {
        return Err(Error::Fraction(format!("{spec}: some p_i = 0")));
    }
    if !is_knot(spec) {
        return Err(Error::NotKnot(spec.compiled().components.len()));
    }
    Ok(())
}

/// `n prod (n,p_i) (n/(n,L), N) / (n,L)` with `L = lcm p_i`, `N = L sum q_i/p_i`.
pub fn coloring_count_formula(n: usize, spec: &MontesinosSpec) -> Result<BigInt> {
    check_knot_spec(n, spec)?;
    let nb = BigInt::from(n);
    let l = spec.fractions.iter().fold(BigInt::one(), |a, &(p, _)| a.lcm(&BigInt::from(p)));
    let sum = spec.fractions.iter().fold(BigRational::zero(), |s, &(p, q)| s + BigRational::new(q.into(), p.into()));
    let big_n = BigRational::from_integer(l.clone()) * sum;
    if !big_n.is_integer() {
        return Err(Error::Fraction(format!("{spec}: N = {big_n} is not an integer")));
    }
    let big_n = big_n.to_integer();
    let nl = nb.gcd(&l);
    let prod = spec.fractions.iter().fold(BigInt::one(), |a, &(p, _)| a * nb.gcd(&BigInt::from(p)));
    let num = &nb * prod * (&nb / &nl).gcd(&big_n);
    let (count, rem) = num.div_rem(&nl);
    if !rem.is_zero() || count < nb {
        return Err(Error::Drift(format!("{spec}: count {num}/{nl}")));
    }
    Ok(count)
}

/// `F(K, W+-)` for a Montesinos knot from the block recursion with the closed `Phi(R)` and
/// `ROT`, in floating point; `ROT` is never stored.
pub fn w_scalar(n: usize, plus: bool, spec: &MontesinosSpec) -> Result<C> {
    check_n(n)?;
    let labels = block_labels(n);
    let cos: Vec<f64> = (0..2 * n).map(|k| 2.0 * (std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
    let m2 = 2 * n as i64;
    let cosine = |x: i64| cos[(x.rem_euclid(m2) * (n as i64 + 1)).rem_euclid(m2) as usize];
    let r_diag: Vec<C> = labels
        .iter()
        .map(|l| {
            let s = if plus { ONE } else { -ONE };
            match *l {
                DihedralLabel::V { j, t } => s * C::from_polar(1.0, std::f64::consts::PI * ((j * t) as i64 * (n as i64 + 1)).rem_euclid(m2) as f64 / n as f64),
                _ => s,
            }
        })
        .collect();
    let inv_n = 1.0 / n as f64;
    let rot = |v: &[C]| -> Vec<C> {
        labels
            .iter()
            .map(|&r| {
                labels
                    .iter()
                    .zip(v)
                    .map(|(&c, &x)| match rot_entry(r, c) {
                        RotEntry::Rational(k) => x * (k as f64 * inv_n),
                        RotEntry::Cosine(e) => x * (cosine(e) * inv_n),
                    })
                    .sum()
            })
            .collect()
    };
    let mut total = vec![ONE; labels.len()];
    for &(p, q) in &spec.fractions {
        let mut v = vec![ONE; labels.len()];
        for &s in &continued_fraction(p, q)?.coefficients {
            let twisted: Vec<C> = v.iter().zip(&r_diag).map(|(x, r)| x * r.powi(s as i32)).collect();
            v = rot(&twisted);
        }
        for (t, x) in total.iter_mut().zip(&v) {
            *t *= x;
        }
    }
    Ok(labels.iter().zip(&total).map(|(l, v)| v * l.dim(n) as f64).sum())
}

/// Count of `n`-colorings through the DW invariant, with both `W` scalars kept.
#[derive(Debug, Clone, PartialEq)]
pub struct DwColoring {
    pub n: usize,
    pub count: u64,
    /// `F(K, W+)`, `F(K, W-)` on the blackboard-framed diagram.
    pub plus: C,
    pub minus: C,
    pub writhe: i64,
    pub mu_total: i64,
    /// Distance of the unrounded count from `count`.
    pub drift: f64,
}

/// `CN_n(K) = sum_k (Z(K)(a^k b, e) + Z(K)(a^k b, a^k b))` with the framing-corrected `Z`; only
/// `W+-` have nonzero characters at reflections.
pub fn coloring_count_via_dw(n: usize, spec: &MontesinosSpec) -> Result<DwColoring> {
    check_knot_spec(n, spec)?;
    let writhe = spec.compiled().writhe();
    let plus = w_scalar(n, true, spec)?;
    let minus = w_scalar(n, false, spec)?;
    let order = 2.0 * n as f64;
    let framing = |theta: f64| theta.powi((-writhe) as i32);
    let corrected_plus = plus * framing(1.0);
    let corrected_minus = minus * framing(-1.0);
    // chi_{W+-}(a^k b, e) = 1, chi_{W+-}(a^k b, a^k b) = +-1
    let z = |g_is_e: bool| (corrected_plus + corrected_minus * if g_is_e { 1.0 } else { -1.0 }) / order;
    let raw: C = (0..n).map(|_| z(true) + z(false)).sum();
    let count = raw.re.round();
    let drift = (raw - C::new(count, 0.0)).norm();
    if drift > COUNT_TOL || count < 0.0 {
        return Err(Error::Drift(format!("{spec}, n = {n}: {raw}")));
    }
    if (corrected_plus - corrected_minus).norm() > COUNT_TOL * corrected_plus.norm().max(1.0) {
        return Err(Error::Drift(format!("{spec}, n = {n}: W+ gives {corrected_plus}, W- gives {corrected_minus}")));
    }
    Ok(DwColoring { n, count: count as u64, plus, minus, writhe, mu_total: spec.mu_total(), drift })
}

/// Phases `phi` and residual with `generic ~ diag(phi) exact`, reading `phi_a` off the
/// first column where `exact` is nonzero.
pub fn output_phases(generic: &[Vec<C>], exact: &[Vec<C>]) -> (Vec<C>, f64) {
    let mut phases = Vec::with_capacity(exact.len());
    let mut residual = 0f64;
    for (g, e) in generic.iter().zip(exact) {
        let k = (0..e.len()).max_by(|&a, &b| e[a].norm().total_cmp(&e[b].norm())).unwrap_or(0);
        let phi = if e[k].norm() > 0.0 { g[k] / e[k] } else { ONE };
        residual = residual.max((phi.norm() - 1.0).abs());
        for (x, y) in g.iter().zip(e) {
            residual = residual.max((x - phi * y).norm());
        }
        phases.push(phi);
    }
    (phases, residual)
}

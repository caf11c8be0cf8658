//! Continued fractions, rational tangles `T(p/q) = r(s_k * ... r(s_2 * r(s_1)))` and the
//! block recursion for Montesinos links `M(p_1/q_1, ..., p_m/q_m) = close(T_m * ... * T_1)`.

use crate::error::{Error, Result};
use crate::espace::ProductVector;
use crate::linalg::C;
use crate::qdouble::{BlockMatrix, Category, ObjLabel};
use crate::tangle::{CKind, Compiled, Node, TangleExpr, FRAMING_SIGN};
use num_integer::Integer;
use num_rational::Rational64;
use std::fmt;
use std::str::FromStr;

/// `[[s_1, ..., s_k]]` with `[[s_1]] = s_1` and `[[s_1, ..., s_k]] = s_k - 1/[[s_1, ..., s_{k-1}]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub coefficients: Vec<i64>,
}

impl ContinuedFraction {
    /// Exact value, `None` when an intermediate term is zero.
    pub fn value(&self) -> Option<Rational64> {
        let mut it = self.coefficients.iter();
        let mut v = Rational64::from_integer(*it.next()?);
        for &s in it {
            if v == Rational64::from_integer(0) {
                return None;
            }
            v = Rational64::from_integer(s) - v.recip();
        }
        Some(v)
    }

    pub fn mu(&self) -> i64 {
        self.coefficients.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// `s_k = ceil(p/q)`: every coefficient but the outermost is at least 2.
    Ceil,
    /// `s_k = floor(p/q)`: every coefficient but the outermost is at most -1.
    Floor,
}

fn reduced(p: i64, q: i64) -> Result<(i64, i64)> {
    if q == 0 {
        return Err(Error::Fraction(format!("{p}/{q} has zero denominator")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Fraction(format!("{p}/{q} is not in lowest terms")));
    }
    Ok(if q < 0 { (-p, -q) } else { (p, q) })
}

pub fn continued_fraction(p: i64, q: i64) -> Result<ContinuedFraction> {
    continued_fraction_with(p, q, Strategy::Ceil)
}

/// Expansion from the outermost coefficient inwards.
pub fn continued_fraction_with(p: i64, q: i64, strategy: Strategy) -> Result<ContinuedFraction> {
    let (mut p, mut q) = reduced(p, q)?;
    let mut outer_first = Vec::new();
    loop {
        let s = match strategy {
            Strategy::Ceil => Integer::div_ceil(&p, &q),
            Strategy::Floor => Integer::div_floor(&p, &q),
        };
        outer_first.push(s);
        // p/q = s - 1/x with x = q / (s q - p)
        let den = s * q - p;
        if den == 0 {
            break;
        }
        let (np, nq) = if den < 0 { (-q, -den) } else { (q, den) };
        p = np;
        q = nq;
    }
    outer_first.reverse();
    Ok(ContinuedFraction { coefficients: outer_first })
}

pub fn mu(p: i64, q: i64) -> Result<i64> {
    Ok(continued_fraction(p, q)?.mu())
}

/// `T(p/q)` built from an explicit expansion.
pub fn rational_tangle_from(cf: &ContinuedFraction) -> Node {
    let mut it = cf.coefficients.iter();
    let first = *it.next().expect("expansions are non-empty");
    let mut t = Node::rot(Node::twist(first)).expect("twists are 2 -> 2");
    for &s in it {
        t = Node::rot(Node::vert(Node::twist(s), t).expect("2 -> 2 pieces")).expect("twists are 2 -> 2");
    }
    t
}

pub fn rational_tangle(p: i64, q: i64) -> Result<Node> {
    Ok(rational_tangle_from(&continued_fraction(p, q)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MontesinosSpec {
    pub fractions: Vec<(i64, i64)>,
}

impl MontesinosSpec {
    pub fn new(fractions: Vec<(i64, i64)>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::Fraction("a Montesinos spec needs at least one fraction".into()));
        }
        let fractions = fractions.into_iter().map(|(p, q)| reduced(p, q)).collect::<Result<_>>()?;
        Ok(MontesinosSpec { fractions })
    }

    /// `T_m * ... * T_1`.
    pub fn tangle(&self) -> Node {
        let mut t = rational_tangle(self.fractions[0].0, self.fractions[0].1).unwrap();
        for &(p, q) in &self.fractions[1..] {
            t = Node::vert(rational_tangle(p, q).unwrap(), t).unwrap();
        }
        t
    }

    pub fn closure(&self) -> TangleExpr {
        TangleExpr { root: Node::close(self.tangle()).unwrap() }
    }

    pub fn compiled(&self) -> Compiled {
        Compiled::new(&self.closure().root)
    }

    pub fn mu_total(&self) -> i64 {
        self.fractions.iter().map(|&(p, q)| mu(p, q).unwrap()).sum()
    }
}

impl fmt::Display for MontesinosSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fractions.iter().map(|(p, q)| format!("{p}/{q}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for MontesinosSpec {
    type Err = Error;

    /// Comma separated fractions, `p/q` or an integer `p`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_int = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Fraction(format!("bad integer '{}'", t.trim())));
        let mut out = Vec::new();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            match part.split_once('/') {
                Some((p, q)) => out.push((parse_int(p)?, parse_int(q)?)),
                None => out.push((parse_int(part)?, 1)),
            }
        }
        MontesinosSpec::new(out)
    }
}

pub fn is_knot(spec: &MontesinosSpec) -> bool {
    spec.compiled().components.len() == 1
}

/// `sum mu(p_i/q_i) = wr (mod 2)`.
pub fn writhe_parity_check(spec: &MontesinosSpec) -> bool {
    (spec.mu_total() - spec.compiled().writhe()).rem_euclid(2) == 0
}

/// Block recursion output together with the labels of every step.
#[derive(Debug, Clone)]
pub struct RationalBlocks {
    pub blocks: BlockMatrix,
    /// Source and target labels after each rotation, innermost first.
    pub steps: Vec<([ObjLabel; 2], [ObjLabel; 2])>,
}

fn node_labels(c: &Compiled, labels: &[ObjLabel], n: usize) -> ([ObjLabel; 2], [ObjLabel; 2]) {
    let node = &c.nodes[n];
    ([labels[node.source[0]], labels[node.source[1]]], [labels[node.target[0]], labels[node.target[1]]])
}

/// `Phi(R^c)` for a vertical twist with bottom labels `source`.
fn twist_blocks(cat: &Category, source: [ObjLabel; 2], c: i64) -> Result<BlockMatrix> {
    let mut b = cat.identity_blocks(source)?;
    let mut l = source;
    for _ in 0..c.unsigned_abs() {
        let step = if c > 0 { cat.phi_braiding(l[0], l[1])? } else { cat.phi_braiding_inverse(l[0], l[1])? };
        b = step.compose(&b)?;
        l = [l[1], l[0]];
    }
    Ok(b)
}

/// `ROT(Phi(R^{c_k}) ROT(... ROT(Phi(R^{c_1}))))` for the rational tangle at node `n`, which
/// must have been built by `rational_tangle_from(cf)`.
fn rational_recursion(cat: &Category, c: &Compiled, labels: &[ObjLabel], n: usize, cf: &ContinuedFraction) -> Result<RationalBlocks> {
    let mut rots = Vec::with_capacity(cf.coefficients.len());
    let mut node = n;
    for k in 0..cf.coefficients.len() {
        let CKind::Rot { inner, .. } = c.nodes[node].kind else {
            return Err(Error::Shape("not a rational tangle".into()));
        };
        rots.push(node);
        if k + 1 < cf.coefficients.len() {
            let CKind::Vert { bottom, .. } = c.nodes[inner].kind else {
                return Err(Error::Shape("not a rational tangle".into()));
            };
            node = bottom;
        }
    }
    rots.reverse();
    let mut acc: Option<BlockMatrix> = None;
    let mut steps = Vec::new();
    for (&rot, &s) in rots.iter().zip(&cf.coefficients) {
        let CKind::Rot { inner, .. } = c.nodes[rot].kind else { unreachable!() };
        let (src, _) = node_labels(c, labels, inner);
        let inner_blocks = match acc.take() {
            None => twist_blocks(cat, src, s)?,
            Some(prev) => {
                let CKind::Vert { top, bottom } = c.nodes[inner].kind else { unreachable!() };
                let (bs, bt) = node_labels(c, labels, bottom);
                if prev.source != bs || prev.target != bt {
                    return Err(Error::Shape("labels of the rotated piece disagree with the diagram".into()));
                }
                twist_blocks(cat, node_labels(c, labels, top).0, s)?.compose(&prev)?
            }
        };
        let rotated = cat.rot_block(&inner_blocks)?;
        let want = node_labels(c, labels, rot);
        if (rotated.source, rotated.target) != want {
            return Err(Error::Shape("rotation labels disagree with the diagram".into()));
        }
        steps.push(want);
        acc = Some(rotated);
    }
    Ok(RationalBlocks { blocks: acc.unwrap(), steps })
}

/// Block form of `F(T(p/q), i)` with every strand colored `i`, orientations as in the
/// stand-alone tangle.
pub fn rational_tangle_morphism(cat: &Category, p: i64, q: i64, i: usize) -> Result<RationalBlocks> {
    let cf = continued_fraction(p, q)?;
    let c = Compiled::new(&rational_tangle_from(&cf));
    let labels = c.labels(&vec![i; c.components.len()])?;
    rational_recursion(cat, &c, &labels, c.root, &cf)
}

/// The Montesinos pieces `T_1, ..., T_m` inside a compiled closure, bottom first.
fn piece_nodes(c: &Compiled, m: usize) -> Vec<usize> {
    let CKind::Close { inner, .. } = c.nodes[c.root].kind else { panic!("not a closure") };
    let mut out = Vec::with_capacity(m);
    let mut node = inner;
    for _ in 1..m {
        let CKind::Vert { top, bottom } = c.nodes[node].kind else { panic!("not a Montesinos tangle") };
        out.push(top);
        node = bottom;
    }
    out.push(node);
    out.reverse();
    out
}

/// `|Tr->(Fc(T_m) ... Fc(T_1))|` for one coloring of the closure's components.
pub fn montesinos_scalar(cat: &Category, spec: &MontesinosSpec, c: &Compiled, colors: &[usize]) -> Result<C> {
    let labels = c.labels(colors)?;
    let pieces = piece_nodes(c, spec.fractions.len());
    let mut acc: Option<BlockMatrix> = None;
    for (&n, &(p, q)) in pieces.iter().zip(&spec.fractions) {
        let b = rational_recursion(cat, c, &labels, n, &continued_fraction(p, q)?)?.blocks;
        acc = Some(match acc {
            None => b,
            Some(prev) => b.compose(&prev)?,
        });
    }
    cat.closure_scalar(&acc.unwrap())
}

#[derive(Debug, Clone)]
pub struct MontesinosInvariant {
    pub spec: MontesinosSpec,
    /// `F(K, c)` indexed like the product basis (one factor per component).
    pub scalars: ProductVector,
    /// `(1/#G) sum_c F(K, c) chi_c`.
    pub raw: ProductVector,
    pub writhes: Vec<i64>,
}

impl MontesinosInvariant {
    pub fn corrected(&self, cat: &Category) -> ProductVector {
        let p: Vec<i64> = self.writhes.iter().map(|w| FRAMING_SIGN * w).collect();
        self.raw.twisted(&cat.catalog, &p)
    }

    pub fn is_knot(&self) -> bool {
        self.writhes.len() == 1
    }

    /// `F(K, c)` times `theta^{-wr}` per component.
    pub fn framed_scalars(&self, cat: &Category) -> ProductVector {
        let p: Vec<i64> = self.writhes.iter().map(|w| FRAMING_SIGN * w).collect();
        self.scalars.twisted(&cat.catalog, &p)
    }

    /// Product indices whose raw scalar has a negative real part.
    pub fn negative_scalars(&self) -> Vec<usize> {
        (0..self.scalars.coeffs.len()).filter(|&k| self.scalars.coeffs[k].re < -1e-9).collect()
    }
}

pub fn montesinos_invariant(spec: &MontesinosSpec, cat: &Category) -> Result<MontesinosInvariant> {
    let c = spec.compiled();
    let r = c.components.len();
    let mut scalars = ProductVector::zero(r, cat.len());
    for k in 0..scalars.coeffs.len() {
        let colors = scalars.colors_of(k);
        scalars.coeffs[k] = montesinos_scalar(cat, spec, &c, &colors)?;
    }
    let order = cat.group.order() as f64;
    let mut raw = scalars.clone();
    raw.coeffs.iter_mut().for_each(|z| *z /= order);
    Ok(MontesinosInvariant { spec: spec.clone(), scalars, raw, writhes: c.component_writhes() })
}

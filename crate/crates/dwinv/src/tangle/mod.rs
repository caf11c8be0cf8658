//! Framed tangle DSL, strand bookkeeping and the evaluation functor into the category.
//!
//! Grammar: `id`, `x`, `xi`, `cup`, `cap`, `twist(n)`, `r(E)`, `close(E)`, `E * E`
//! (left factor on top), `E | E` (binds tighter than `*`), parentheses.

mod compile;
mod eval;
mod parse;

pub use compile::{CKind, CNode, Compiled, Component, CrossingInfo, Gen, PointInfo, Pt};
pub use eval::Evaluator;
pub use parse::{parse, Node, Tangle, TangleExpr};

use crate::error::{Error, Result};
use crate::espace::ProductVector;
use crate::linalg::C;
use crate::qdouble::{vector_trace, Category, Morphism};

/// Exponent sign of the framing correction `Q^{sign * wr}` relating the evaluation to
/// homomorphism counts with Seifert longitudes.
pub const FRAMING_SIGN: i64 = -1;

pub fn compile(t: &TangleExpr) -> Compiled {
    Compiled::new(&t.root)
}

/// The functor applied to a colored tangle; `colors` lists one simple per component.
pub fn evaluate(t: &TangleExpr, colors: &[usize], cat: &Category) -> Result<Morphism> {
    let c = compile(t);
    let ev = Evaluator::new(cat, &c, colors)?;
    Ok(ev.morphism(c.root))
}

fn closure_of(t: &TangleExpr) -> Result<(Compiled, usize)> {
    let closed = Node::close(t.root.clone())?;
    let c = Compiled::new(&closed);
    let CKind::Close { inner, .. } = c.nodes[c.root].kind else { unreachable!() };
    Ok((c, inner))
}

/// `|tr->(F(T))|` for a tangle with matching ends; colors index the components of the closure.
pub fn closure_eval(t: &TangleExpr, colors: &[usize], cat: &Category) -> Result<C> {
    let (c, inner) = closure_of(t)?;
    let ev = Evaluator::new(cat, &c, colors)?;
    let f = ev.morphism(inner);
    Ok(cat.norm_bar(&vector_trace(&f, &cat.catalog.space)?))
}

/// The same closure evaluated as an explicit diagram with cups and caps.
pub fn closed_eval(t: &TangleExpr, colors: &[usize], cat: &Category) -> Result<C> {
    let (c, _) = closure_of(t)?;
    let ev = Evaluator::new(cat, &c, colors)?;
    Ok(ev.morphism(c.root).matrix[(0, 0)])
}

/// `Z(L) = (1/#G) sum_c F(L, c) chi_{c(1)} (x) ... (x) chi_{c(r)}` with the component writhes.
#[derive(Debug, Clone)]
pub struct LinkInvariant {
    pub raw: ProductVector,
    pub writhes: Vec<i64>,
}

impl LinkInvariant {
    /// `Q^{-wr}`-corrected vector, one framing exponent per component.
    pub fn corrected(&self, cat: &Category) -> ProductVector {
        let p: Vec<i64> = self.writhes.iter().map(|w| FRAMING_SIGN * w).collect();
        self.raw.twisted(&cat.catalog, &p)
    }

    pub fn components(&self) -> usize {
        self.writhes.len()
    }
}

pub fn dw_link_invariant(t: &TangleExpr, cat: &Category) -> Result<LinkInvariant> {
    let c = compile(t);
    if !c.is_closed() {
        return Err(Error::Shape("link invariant needs a closed diagram".into()));
    }
    let r = c.components.len();
    let mut raw = ProductVector::zero(r, cat.len());
    let order = cat.group.order() as f64;
    for k in 0..raw.coeffs.len() {
        let colors = raw.colors_of(k);
        let ev = Evaluator::new(cat, &c, &colors)?;
        raw.coeffs[k] = ev.morphism(c.root).matrix[(0, 0)] / order;
    }
    Ok(LinkInvariant { raw, writhes: c.component_writhes() })
}

#[cfg(test)]
mod tests;

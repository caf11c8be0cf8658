use super::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, FiniteGroup};

/// Candidate assignments above this bound are refused.
pub const SEARCH_GUARD: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

/// `x_out = x_over^-s x_in x_over^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relation {
    pub out: usize,
    pub over: usize,
    pub inp: usize,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub struct WirtingerPresentation {
    pub generators: usize,
    pub relations: Vec<Relation>,
    pub components: Vec<Vec<usize>>,
    /// First arc of each component.
    pub meridians: Vec<usize>,
    /// Blackboard longitude `c_n ... c_1`, `c_s = x_over^-sign` at the s-th undercrossing.
    pub longitudes: Vec<Vec<Letter>>,
    /// Signed count of crossings of each component with itself.
    pub writhes: Vec<i64>,
}

pub fn wirtinger_presentation(d: &LinkDiagram) -> WirtingerPresentation {
    let components = d.components();
    let mut comp_of = vec![0; d.arcs];
    for (ci, arcs) in components.iter().enumerate() {
        for &a in arcs {
            comp_of[a] = ci;
        }
    }
    let relations = d.crossings.iter().map(|c| Relation { out: c.under_out, over: c.over, inp: c.under_in, sign: c.sign }).collect();
    let mut longitudes = Vec::new();
    let mut writhes = vec![0i64; components.len()];
    for c in &d.crossings {
        if comp_of[c.over] == comp_of[c.under_in] {
            writhes[comp_of[c.over]] += c.sign as i64;
        }
    }
    for arcs in &components {
        let mut word = Vec::new();
        for &a in arcs {
            if let Some((_, k)) = d.next(a) {
                let c = d.crossings[k];
                word.push(Letter { gen: c.over, exp: -c.sign });
            }
        }
        longitudes.push(word);
    }
    WirtingerPresentation {
        generators: d.arcs,
        relations,
        meridians: components.iter().map(|c| c[0]).collect(),
        components,
        longitudes,
        writhes,
    }
}

impl WirtingerPresentation {
    /// Image of the longitude of component `k`; with `seifert` the blackboard word is
    /// multiplied by `x_meridian^wr`.
    pub fn longitude_image(&self, g: &FiniteGroup, images: &[usize], k: usize, seifert: bool) -> usize {
        let mut acc = g.identity();
        for l in &self.longitudes[k] {
            acc = g.mul(g.pow(images[l.gen], l.exp as i64), acc);
        }
        if seifert {
            acc = g.mul(g.pow(images[self.meridians[k]], self.writhes[k]), acc);
        }
        acc
    }

    /// Abelianized relations, one row per crossing.
    pub fn abelian_relations(&self) -> Vec<Vec<i64>> {
        self.relations
            .iter()
            .map(|r| {
                let mut row = vec![0; self.generators];
                row[r.out] += 1;
                row[r.inp] -= 1;
                row
            })
            .collect()
    }

    /// Meridian exponent sum of the corrected longitude of component `k` in the abelianization.
    pub fn longitude_self_exponent(&self, k: usize, seifert: bool) -> i64 {
        let own: i64 =
            self.longitudes[k].iter().filter(|l| self.components[k].contains(&l.gen)).map(|l| l.exp as i64).sum();
        if seifert {
            own + self.writhes[k]
        } else {
            own
        }
    }
}

/// Number of homomorphisms to `g`; `constraints[k] = Some((x, y))` asks that the meridian of
/// component `k` maps to `x` and its longitude (Seifert if `seifert`) to `y`.
pub fn hom_count(
    p: &WirtingerPresentation,
    g: &FiniteGroup,
    constraints: &[Option<(usize, usize)>],
    seifert: bool,
) -> Result<u64> {
    if !constraints.is_empty() && constraints.len() != p.components.len() {
        return Err(Error::Diagram(format!("{} constraints for {} components", constraints.len(), p.components.len())));
    }
    let classes = conjugacy_classes(g);
    let max_class = classes.iter().map(|c| c.members.len()).max().unwrap_or(1) as f64;
    let bound: f64 = p.components.iter().map(|c| g.order() as f64 * max_class.powi(c.len() as i32 - 1)).product();
    if bound > SEARCH_GUARD {
        return Err(Error::SearchGuard(bound));
    }
    let mut class_of = vec![0; g.order()];
    for (ci, c) in classes.iter().enumerate() {
        for &m in &c.members {
            class_of[m] = ci;
        }
    }
    let mut comp_of = vec![0; p.generators];
    for (ci, arcs) in p.components.iter().enumerate() {
        for &a in arcs {
            comp_of[a] = ci;
        }
    }
    let s = Search { p, g, constraints, seifert, classes: &classes, class_of, comp_of };
    let mut images = vec![None; p.generators];
    Ok(s.run(&mut images))
}

/// Gauge-invariant count for a link: `sum_{h_2..h_r} hom_count` with the boundary data
/// of components `2..r` conjugated by `h_k`. Equals `hom_count` for knots.
pub fn boundary_count(p: &WirtingerPresentation, g: &FiniteGroup, args: &[(usize, usize)], seifert: bool) -> Result<u64> {
    if args.len() != p.components.len() {
        return Err(Error::Diagram(format!("{} boundary pairs for {} components", args.len(), p.components.len())));
    }
    let r = args.len();
    let n = g.order();
    let mut total = 0;
    for k in 0..n.pow(r.saturating_sub(1) as u32) {
        let mut code = k;
        let mut cons = vec![Some(args[0])];
        for &(x, y) in &args[1..] {
            let h = code % n;
            code /= n;
            cons.push(Some((g.conj(h, x), g.conj(h, y))));
        }
        total += hom_count(p, g, &cons, seifert)?;
    }
    Ok(total)
}

struct Search<'a> {
    p: &'a WirtingerPresentation,
    g: &'a FiniteGroup,
    constraints: &'a [Option<(usize, usize)>],
    seifert: bool,
    classes: &'a [crate::group::ConjugacyClass],
    class_of: Vec<usize>,
    comp_of: Vec<usize>,
}

impl Search<'_> {
    fn propagate(&self, images: &mut [Option<usize>]) -> bool {
        let g = self.g;
        loop {
            let mut changed = false;
            for r in &self.p.relations {
                let Some(o) = images[r.over] else { continue };
                let c = g.pow(o, -r.sign as i64);
                match (images[r.inp], images[r.out]) {
                    (Some(i), Some(out)) => {
                        if g.conj(c, i) != out {
                            return false;
                        }
                    }
                    (Some(i), None) => {
                        images[r.out] = Some(g.conj(c, i));
                        changed = true;
                    }
                    (None, Some(out)) => {
                        images[r.inp] = Some(g.conj(g.inv(c), out));
                        changed = true;
                    }
                    (None, None) => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&self, images: &mut Vec<Option<usize>>) -> u64 {
        let mut work = images.clone();
        if !self.propagate(&mut work) {
            return 0;
        }
        let pick = self.p.meridians.iter().copied().find(|&m| work[m].is_none()).or_else(|| work.iter().position(|x| x.is_none()));
        let Some(a) = pick else {
            return self.accept(&work) as u64;
        };
        let comp = self.comp_of[a];
        let candidates: Vec<usize> = if a == self.p.meridians[comp] {
            match self.constraints.get(comp).copied().flatten() {
                Some((x, _)) => vec![x],
                None => self.g.elements().collect(),
            }
        } else {
            let m = work[self.p.meridians[comp]].expect("meridians are assigned first");
            self.classes[self.class_of[m]].members.clone()
        };
        let mut total = 0;
        for v in candidates {
            let mut next = work.clone();
            next[a] = Some(v);
            total += self.run(&mut next);
        }
        total
    }

    fn accept(&self, work: &[Option<usize>]) -> bool {
        let images: Vec<usize> = work.iter().map(|x| x.unwrap()).collect();
        let g = self.g;
        for r in &self.p.relations {
            if g.conj(g.pow(images[r.over], -r.sign as i64), images[r.inp]) != images[r.out] {
                return false;
            }
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if let Some((x, y)) = c {
                if images[self.p.meridians[k]] != *x || self.p.longitude_image(g, &images, k, self.seifert) != *y {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::super::diagram::fixtures;
    use super::super::snf::smith_normal_form;
    use super::*;
    use crate::group::build_named_group;

    #[test]
    fn presentations() {
        let u = wirtinger_presentation(&LinkDiagram::unknot());
        assert_eq!((u.generators, u.relations.len()), (1, 0));
        assert!(u.longitudes[0].is_empty());
        let t = wirtinger_presentation(&fixtures::trefoil());
        assert_eq!((t.generators, t.relations.len()), (3, 3));
        let snf = smith_normal_form(&t.abelian_relations());
        assert_eq!(t.generators - snf.rank(), 1);
        let f = wirtinger_presentation(&fixtures::figure_eight());
        assert_eq!(f.longitude_self_exponent(0, true), 0);
        assert_eq!(t.longitude_self_exponent(0, true), 0);
        let h = wirtinger_presentation(&fixtures::hopf());
        assert_eq!(h.generators - smith_normal_form(&h.abelian_relations()).rank(), 2);
    }

    #[test]
    fn counts_into_s3() {
        let s3 = build_named_group("S3").unwrap();
        let u = wirtinger_presentation(&LinkDiagram::unknot());
        assert_eq!(hom_count(&u, &s3, &[], true).unwrap(), 6);
        let t = wirtinger_presentation(&fixtures::trefoil());
        assert_eq!(hom_count(&t, &s3, &[], true).unwrap(), 12);
        let transposition = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let total: u64 = s3.elements().map(|y| hom_count(&t, &s3, &[Some((transposition, y))], true).unwrap()).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn longitude_commutes_with_meridian() {
        let g = build_named_group("S3").unwrap();
        for d in [fixtures::trefoil(), fixtures::figure_eight(), fixtures::kinked_unknot()] {
            let p = wirtinger_presentation(&d);
            for x in g.elements() {
                for y in g.elements() {
                    let n = hom_count(&p, &g, &[Some((x, y))], false).unwrap();
                    if n > 0 {
                        assert!(g.commute(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_invariant_counts() {
        let g = build_named_group("D5").unwrap();
        let p = wirtinger_presentation(&fixtures::figure_eight());
        for x in g.elements() {
            for y in g.elements().filter(|&y| g.commute(x, y)) {
                let n = hom_count(&p, &g, &[Some((x, y))], true).unwrap();
                for a in g.elements() {
                    assert_eq!(hom_count(&p, &g, &[Some((g.conj(a, x), g.conj(a, y)))], true).unwrap(), n);
                }
            }
        }
    }

    #[test]
    fn guard() {
        let d = crate::oracle::LinkDiagram::new(
            12,
            (0..12).map(|k| crate::oracle::Crossing { over: (k + 5) % 12, under_in: k, under_out: (k + 1) % 12, sign: 1 }).collect(),
        )
        .unwrap();
        let g = build_named_group("S4").unwrap();
        assert!(matches!(hom_count(&wirtinger_presentation(&d), &g, &[], true), Err(Error::SearchGuard(_))));
    }
}

use super::*;
use crate::group::build_named_group;
use crate::linalg::{max_abs_diff, Mat};
use crate::oracle::{boundary_count, wirtinger_presentation};
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

const TOL: f64 = 1e-9;

fn d3() -> &'static Category {
    static CAT: OnceLock<Category> = OnceLock::new();
    CAT.get_or_init(|| Category::new(Arc::new(build_named_group("D3").unwrap())).unwrap())
}

/// Component colors from colors of the source points, for open tangles whose strands all
/// reach the bottom.
fn colors_by_source(c: &Compiled, source_colors: &[usize]) -> Vec<usize> {
    let mut out = vec![usize::MAX; c.components.len()];
    for (&p, &col) in c.source().iter().zip(source_colors) {
        out[c.comp_of[p]] = col;
    }
    assert!(out.iter().all(|&x| x != usize::MAX));
    out
}

fn all_colorings(components: usize, simples: usize) -> Vec<Vec<usize>> {
    (0..simples.pow(components as u32))
        .map(|k| (0..components).map(|j| (k / simples.pow(j as u32)) % simples).collect())
        .collect()
}

fn eval_by_source(expr: &str, source_colors: &[usize], cat: &Category) -> Result<Mat> {
    let t = parse(expr).unwrap();
    let c = compile(&t);
    let colors = colors_by_source(&c, source_colors);
    Ok(Evaluator::new(cat, &c, &colors)?.morphism(c.root).matrix)
}

fn same_tangle(a: &str, b: &str, strands: usize) {
    let cat = d3();
    let mut colors = vec![0; strands];
    loop {
        let ma = eval_by_source(a, &colors, cat).unwrap();
        let mb = eval_by_source(b, &colors, cat).unwrap();
        assert!(max_abs_diff(&ma, &mb) < TOL, "{a} vs {b} at {colors:?}");
        let mut k = 0;
        loop {
            if k == strands {
                return;
            }
            colors[k] += 1;
            if colors[k] < cat.len() {
                break;
            }
            colors[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn reidemeister_two() {
    same_tangle("x * xi", "id | id", 2);
    same_tangle("xi * x", "id | id", 2);
    same_tangle("r(x) * r(xi)", "id | id", 2);
}

#[test]
fn reidemeister_three() {
    same_tangle("(x | id) * (id | x) * (x | id)", "(id | x) * (x | id) * (id | x)", 3);
    same_tangle("(xi | id) * (id | x) * (x | id)", "(id | x) * (x | id) * (id | xi)", 3);
}

#[test]
fn kink_is_theta() {
    let cat = d3();
    for i in 0..cat.len() {
        let theta = cat.theta(i);
        for (expr, p) in [("(cap | id) * (id | x) * (cup | id)", 1), ("(id | cap) * (xi | id) * (id | cup)", -1)] {
            let m = eval_by_source(expr, &[i], cat).unwrap();
            let d = cat.dim(i);
            let want = Mat::identity(d, d) * theta.powi(p);
            assert!(max_abs_diff(&m, &want) < TOL, "{expr} colored {i}");
        }
    }
}

#[test]
fn decomposition_independence() {
    same_tangle("twist(2) * twist(1)", "twist(3)", 2);
    same_tangle("x * x * x", "twist(3)", 2);
    same_tangle("twist(0)", "id | id", 2);
    same_tangle("(x | id) * (id | id | id)", "x | id", 3);
    same_tangle("(cap | id) * (id | cup)", "id", 1);
    same_tangle("(id | cap) * (cup | id)", "id", 1);
    same_tangle("r(r(x))", "x", 2);
    same_tangle("r(r(twist(-3)))", "twist(-3)", 2);
}

#[test]
fn closure_traces_agree() {
    let cat = d3();
    let suite = ["id", "x", "xi * x", "twist(3)", "r(twist(2))", "(x | id) * (id | xi)"];
    for expr in suite {
        let t = parse(expr).unwrap();
        let c = compile(&parse(&format!("close({expr})")).unwrap());
        for colors in all_colorings(c.components.len(), cat.len()) {
            let a = closure_eval(&t, &colors, cat).unwrap();
            let b = closed_eval(&t, &colors, cat).unwrap();
            assert!((a - b).norm() < TOL, "{expr} {colors:?}: {a} vs {b}");
        }
    }
}

#[test]
fn closed_unknot_is_dimension() {
    let cat = d3();
    let t = parse("id").unwrap();
    for i in 0..cat.len() {
        let v = closed_eval(&t, &[i], cat).unwrap();
        assert!((v - C::new(cat.dim(i) as f64, 0.0)).norm() < TOL);
    }
    let inv = dw_link_invariant(&parse("close(id)").unwrap(), cat).unwrap();
    let g = &cat.group;
    for x in g.elements() {
        for y in g.elements().filter(|&y| g.commute(x, y)) {
            let want = if y == g.identity() { 1.0 } else { 0.0 };
            assert!((inv.raw.value(&cat.catalog, &[(x, y)]) - want).norm() < TOL);
        }
    }
}

#[test]
fn writhes_and_components() {
    let c = compile(&parse("close(twist(3))").unwrap());
    assert_eq!(c.components.len(), 1);
    assert_eq!(c.component_writhes(), vec![3]);
    let c = compile(&parse("close(twist(2))").unwrap());
    assert_eq!(c.components.len(), 2);
    assert_eq!(c.component_writhes(), vec![0, 0]);
    assert_eq!(c.writhe(), 2);
    let c = compile(&parse("close(r(twist(3)))").unwrap());
    assert_eq!(c.component_writhes(), vec![-3]);
    assert!(parse("twist(3)").map(|t| dw_link_invariant(&t, d3())).unwrap().is_err());
}

#[test]
fn block_evaluation_matches_phi() {
    let cat = d3();
    for expr in ["x", "xi", "r(twist(3))", "twist(2) * r(twist(-1))", "r(r(x) * r(x))", "x * (id | id)"] {
        let t = parse(expr).unwrap();
        let c = compile(&t);
        for colors in all_colorings(c.components.len(), cat.len()) {
            let ev = Evaluator::new(cat, &c, &colors).unwrap();
            let blocks = ev.blocks(c.root).unwrap();
            let direct = cat.phi(&ev.morphism(c.root)).unwrap();
            assert!(blocks.max_diff(&direct) < TOL, "{expr} {colors:?}");
        }
    }
    let c = compile(&parse("(x | id) * (id | x)").unwrap());
    let ev = Evaluator::new(cat, &c, &[0, 0, 0]).unwrap();
    assert!(ev.blocks(c.root).is_err());
}

fn oracle_gap(gname: &str, expr: &str) -> (f64, f64) {
    let g = Arc::new(build_named_group(gname).unwrap());
    let cat = Category::new(g.clone()).unwrap();
    let t = parse(expr).unwrap();
    let inv = dw_link_invariant(&t, &cat).unwrap();
    let p = wirtinger_presentation(&compile(&t).link_diagram().unwrap());
    let pairs: Vec<(usize, usize)> =
        g.elements().flat_map(|x| g.elements().map(move |y| (x, y))).filter(|&(x, y)| g.commute(x, y)).collect();
    let mut tuples: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for _ in 0..inv.components() {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                pairs.iter().map(move |&p| {
                    let mut t = t.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    let corrected = inv.corrected(&cat);
    let (mut raw_gap, mut seifert_gap) = (0f64, 0f64);
    for tup in &tuples {
        let raw = inv.raw.value(&cat.catalog, tup) - boundary_count(&p, &g, tup, false).unwrap() as f64;
        let seif = corrected.value(&cat.catalog, tup) - boundary_count(&p, &g, tup, true).unwrap() as f64;
        raw_gap = raw_gap.max(raw.norm());
        seifert_gap = seifert_gap.max(seif.norm());
    }
    (raw_gap, seifert_gap)
}

#[test]
fn agrees_with_homomorphism_counts() {
    for (g, expr) in [
        ("S3", "close(id)"),
        ("S3", "close(twist(1))"),
        ("S3", "close(twist(3))"),
        ("D5", "close(twist(-3))"),
        ("D5", "close(r(twist(3)))"),
        ("D5", "close(r(twist(2)) * r(twist(-2)))"),
        ("S3", "close(twist(2))"),
        ("Q8", "close(twist(4))"),
        ("D3", "close((x | id) * (id | x))"),
        ("D3", "close(id | id)"),
    ] {
        let (raw, seifert) = oracle_gap(g, expr);
        assert!(raw < 1e-9 && seifert < 1e-9, "{g} {expr}: {raw} {seifert}");
    }
}

#[test]
fn trefoil_over_s3_at_transposition() {
    let g = Arc::new(build_named_group("S3").unwrap());
    let cat = Category::new(g.clone()).unwrap();
    let t = parse("close(twist(3))").unwrap();
    let inv = dw_link_invariant(&t, &cat).unwrap();
    let p = wirtinger_presentation(&compile(&t).link_diagram().unwrap());
    let tr = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
    let z = inv.corrected(&cat).value(&cat.catalog, &[(tr, g.identity())]);
    let n = crate::oracle::hom_count(&p, &g, &[Some((tr, g.identity()))], true).unwrap();
    assert!((z - C::new(n as f64, 0.0)).norm() < TOL);
    assert_eq!(n, 3);
}

fn braid_word(strands: usize, word: &[(usize, bool)]) -> String {
    let rows: Vec<String> = word
        .iter()
        .map(|&(k, pos)| {
            let mut parts = vec!["id"; k];
            parts.push(if pos { "x" } else { "xi" });
            parts.extend(vec!["id"; strands - 2 - k]);
            format!("({})", parts.join(" | "))
        })
        .collect();
    rows.join(" * ")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn crossing_signs_sum_to_writhes(word in proptest::collection::vec((0usize..2, any::<bool>()), 1..7)) {
        let expr = format!("close({})", braid_word(3, &word));
        let c = compile(&parse(&expr).unwrap());
        let d = c.link_diagram().unwrap();
        prop_assert_eq!(d.crossings.len(), word.len());
        prop_assert_eq!(d.writhe(), c.writhe());
        let p = wirtinger_presentation(&d);
        prop_assert_eq!(p.writhes, c.component_writhes());
    }

    #[test]
    fn braid_times_inverse_is_identity(word in proptest::collection::vec((0usize..2, any::<bool>()), 1..4)) {
        let inverse: Vec<(usize, bool)> = word.iter().rev().map(|&(k, s)| (k, !s)).collect();
        let expr = format!("{} * {}", braid_word(3, &word), braid_word(3, &inverse));
        same_tangle(&expr, "id | id | id", 3);
    }
}

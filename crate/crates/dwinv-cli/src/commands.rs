use crate::output::{big, colors, complex, Report, Table};
use dwinv::dihedral::{check_n, coloring_count_formula, coloring_count_via_dw, DihedralSimpleTable};
use dwinv::espace::ProductVector;
use dwinv::group::{build_named_group, FiniteGroup};
use dwinv::montesinos::{is_knot, montesinos_invariant, MontesinosSpec};
use dwinv::oracle::{boundary_count, fox_count, hom_count, wirtinger_presentation, LinkDiagram, WirtingerPresentation};
use dwinv::qdouble::Category;
use dwinv::tangle::{compile, dw_link_invariant, evaluate, parse};
use dwinv::{Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};
use std::path::Path;
use std::sync::Arc;

/// A report and whether every comparison in it agreed.
pub type Outcome = Result<(Report, bool)>;

pub struct Ctx {
    pub seed: u64,
    pub tol: f64,
}

impl Ctx {
    fn category(&self, group: &str) -> Result<Category> {
        Category::with_seed(Arc::new(build_named_group(group)?), self.seed)
    }
}

fn element(g: &FiniteGroup, s: &str) -> Result<usize> {
    let s = s.trim();
    if let Some(x) = g.elements().find(|&x| g.label(x) == s) {
        return Ok(x);
    }
    match s.parse::<usize>() {
        Ok(x) if x < g.order() => Ok(x),
        _ => Err(Error::Diagram(format!("unknown element '{s}' of {}", g.name))),
    }
}

fn coefficient_table(name: &str, raw: &ProductVector, corrected: &ProductVector, show_raw: bool, show_corrected: bool, tol: f64) -> Table {
    let mut headers = vec!["colors"];
    if show_raw {
        headers.push("raw");
    }
    if show_corrected {
        headers.push("corrected");
    }
    let mut t = Table::new(name, &headers);
    for k in 0..raw.coeffs.len() {
        let mut row = vec![colors(&raw.colors_of(k))];
        if show_raw {
            row.push(complex(raw.coeffs[k], tol));
        }
        if show_corrected {
            row.push(complex(corrected.coeffs[k], tol));
        }
        t.push(row);
    }
    t
}

/// Every tuple of commuting pairs, one per component.
fn pair_tuples(cat: &Category, r: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs = &cat.catalog.space.pairs;
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out.into_iter().flat_map(|t| pairs.iter().map(move |&p| [t.clone(), vec![p]].concat())).collect();
    }
    out
}

fn pairs_text(g: &FiniteGroup, args: &[(usize, usize)]) -> Value {
    json!(args.iter().map(|&(x, y)| format!("({},{})", g.label(x), g.label(y))).collect::<Vec<_>>().join(" "))
}

pub fn simples(ctx: &Ctx, group: &str) -> Outcome {
    let cat = ctx.category(group)?;
    let g = &cat.group;
    let names = DihedralSimpleTable::from_category(&cat).ok();
    let mut t = Table::new("simples", &["index", "name", "class_rep", "class_size", "irrep_dim", "dim", "theta"]);
    let mut sum = 0usize;
    for i in 0..cat.len() {
        let class = cat.catalog.class_of(i);
        let d = cat.catalog.irrep_of(i).dim;
        let dim = class.members.len() * d;
        sum += dim * dim;
        let name = names.as_ref().map(|n| n.labels[i].to_string()).unwrap_or_default();
        t.push(vec![
            json!(i),
            json!(name),
            json!(g.label(class.rep)),
            json!(class.members.len()),
            json!(d),
            json!(dim),
            complex(cat.theta(i), ctx.tol),
        ]);
    }
    let mut r = Report::new("simples");
    r.meta("group", g.name.clone());
    r.meta("order", g.order());
    r.meta("simples", cat.len());
    r.meta("sum_dim_squared", sum);
    let ok = sum == g.order().pow(2);
    r.meta("sum_matches_order_squared", ok);
    r.tables.push(t);
    Ok((r, ok))
}

pub fn montesinos(ctx: &Ctx, group: &str, fractions: &str, oracle: bool, show_raw: bool, show_corrected: bool) -> Outcome {
    let spec: MontesinosSpec = fractions.parse()?;
    let cat = ctx.category(group)?;
    let inv = montesinos_invariant(&spec, &cat)?;
    let framed = inv.framed_scalars(&cat);
    let negative = inv.negative_scalars();
    let mut r = Report::new("montesinos");
    r.meta("group", cat.group.name.clone());
    r.meta("fractions", spec.to_string());
    r.meta("components", inv.writhes.len());
    r.meta("writhes", json!(inv.writhes));
    r.meta("mu_total", spec.mu_total());
    r.meta("negative_scalars", negative.len());

    let mut s = Table::new("scalars", &["colors", "scalar", "framed", "negative"]);
    for k in 0..inv.scalars.coeffs.len() {
        s.push(vec![
            colors(&inv.scalars.colors_of(k)),
            complex(inv.scalars.coeffs[k], ctx.tol),
            complex(framed.coeffs[k], ctx.tol),
            json!(negative.contains(&k)),
        ]);
    }
    r.tables.push(s);
    let corrected = inv.corrected(&cat);
    r.tables.push(coefficient_table("coefficients", &inv.raw, &corrected, show_raw, show_corrected, ctx.tol));

    let mut ok = true;
    if oracle {
        let p = wirtinger_presentation(&spec.compiled().link_diagram()?);
        let (t, mismatches) = oracle_table(ctx, &cat, &p, &inv.raw, &corrected, show_raw, show_corrected)?;
        ok = mismatches == 0;
        r.meta("oracle_mismatches", mismatches);
        r.meta("oracle", if ok { "all components match".to_string() } else { format!("{mismatches} components differ") });
        r.tables.push(t);
    }
    Ok((r, ok))
}

fn oracle_table(
    ctx: &Ctx,
    cat: &Category,
    p: &WirtingerPresentation,
    raw: &ProductVector,
    corrected: &ProductVector,
    show_raw: bool,
    show_corrected: bool,
) -> Result<(Table, usize)> {
    let g = &cat.group;
    let mut headers = vec!["pairs"];
    if show_raw {
        headers.extend(["raw", "blackboard_count"]);
    }
    if show_corrected {
        headers.extend(["corrected", "seifert_count"]);
    }
    headers.push("match");
    let mut t = Table::new("oracle", &headers);
    let mut mismatches = 0;
    for args in pair_tuples(cat, raw.factors) {
        let mut row = vec![pairs_text(g, &args)];
        let mut good = true;
        for (show, v, seifert) in [(show_raw, raw, false), (show_corrected, corrected, true)] {
            if !show {
                continue;
            }
            let z = v.value(&cat.catalog, &args);
            let count = boundary_count(p, g, &args, seifert)?;
            good &= (z - count as f64).norm() <= ctx.tol;
            row.push(complex(z, ctx.tol));
            row.push(json!(count));
        }
        row.push(json!(good));
        mismatches += usize::from(!good);
        t.push(row);
    }
    Ok((t, mismatches))
}

pub struct ColoringArgs<'a> {
    pub n: &'a [usize],
    pub fractions: Option<&'a str>,
    pub diagram: Option<&'a Path>,
    pub formula: bool,
    pub dw: bool,
    pub oracle: bool,
}

pub fn colorings(ctx: &Ctx, a: &ColoringArgs) -> Outcome {
    for &n in a.n {
        check_n(n)?;
    }
    let any = a.formula || a.dw || a.oracle;
    let (input, spec, diagram) = match (a.fractions, a.diagram) {
        (Some(f), None) => {
            let spec: MontesinosSpec = f.parse()?;
            let d = spec.compiled().link_diagram()?;
            (spec.to_string(), Some(spec), d)
        }
        (None, Some(path)) => (path.display().to_string(), None, LinkDiagram::parse(&std::fs::read_to_string(path)?)?),
        _ => return Err(Error::Diagram("give exactly one of --fractions and --diagram".into())),
    };
    let knot = spec.as_ref().is_some_and(is_knot);
    if (a.formula || a.dw) && !knot {
        return Err(match &spec {
            Some(_) => Error::NotKnot(diagram.components().len()),
            None => Error::Diagram("the formula and DW paths need a Montesinos knot given by --fractions".into()),
        });
    }
    let formula = a.formula || (!any && knot);
    let dw = a.dw || (!any && knot);
    let oracle = a.oracle || !any;

    let mut t = Table::new("counts", &["n", "input", "formula", "dw", "dw_drift", "oracle", "agree"]);
    let mut ok = true;
    for &n in a.n {
        let mut counts: Vec<BigInt> = Vec::new();
        let mut row = vec![json!(n), json!(input)];
        match (formula, &spec) {
            (true, Some(s)) => {
                let c = coloring_count_formula(n, s)?;
                row.push(big(&c));
                counts.push(c);
            }
            _ => row.push(Value::Null),
        }
        match (dw, &spec) {
            (true, Some(s)) => {
                let c = coloring_count_via_dw(n, s)?;
                row.push(json!(c.count));
                row.push(json!({ "value": c.drift, "tol": ctx.tol }));
                counts.push(BigInt::from(c.count));
            }
            _ => row.extend([Value::Null, Value::Null]),
        }
        if oracle {
            let c = fox_count(&diagram, n as u64)?;
            row.push(big(&c));
            counts.push(c);
        } else {
            row.push(Value::Null);
        }
        let agree = counts.windows(2).all(|w| w[0] == w[1]);
        ok &= agree;
        row.push(json!(agree));
        t.push(row);
    }
    let mut r = Report::new("colorings");
    r.meta("input", input);
    r.meta("components", diagram.components().len());
    r.tables.push(t);
    Ok((r, ok))
}

pub fn tangle(ctx: &Ctx, expr: &str, group: &str, col: Option<&[usize]>) -> Outcome {
    let t = parse(expr)?;
    let cat = ctx.category(group)?;
    let c = compile(&t);
    let mut r = Report::new("tangle");
    r.meta("expr", expr);
    r.meta("group", cat.group.name.clone());
    r.meta("components", c.components.len());
    r.meta("writhes", json!(c.component_writhes()));
    if c.is_closed() {
        let inv = dw_link_invariant(&t, &cat)?;
        let corrected = inv.corrected(&cat);
        if let Some(col) = col {
            let m = evaluate(&t, col, &cat)?;
            r.meta("colors", colors(col));
            r.meta("scalar", complex(m.matrix[(0, 0)], ctx.tol));
        }
        r.tables.push(coefficient_table("coefficients", &inv.raw, &corrected, true, true, ctx.tol));
        if let (Some(raw), Some(cor)) = (inv.raw.to_evector(&cat.catalog), corrected.to_evector(&cat.catalog)) {
            let g = &cat.group;
            let mut e = Table::new("evector", &["x", "g", "raw", "corrected"]);
            for (k, &(x, y)) in cat.catalog.space.pairs.iter().enumerate() {
                e.push(vec![json!(g.label(x)), json!(g.label(y)), complex(raw.values[k], ctx.tol), complex(cor.values[k], ctx.tol)]);
            }
            r.tables.push(e);
        }
    } else {
        let col = col.ok_or_else(|| Error::Arity { pos: 0, msg: format!("an open tangle needs --colors for its {} components", c.components.len()) })?;
        let m = evaluate(&t, col, &cat)?;
        let label = |list: &[dwinv::qdouble::Obj]| {
            json!(list
                .iter()
                .map(|o| o.label.map(|l| format!("{}{}", l.simple, if l.dual { "*" } else { "" })).unwrap_or_else(|| "?".into()))
                .collect::<Vec<_>>())
        };
        r.meta("colors", colors(col));
        r.meta("source", label(&m.source));
        r.meta("target", label(&m.target));
        r.meta("rows", m.matrix.nrows());
        r.meta("cols", m.matrix.ncols());
        let mut e = Table::new("matrix", &["row", "col", "value"]);
        for i in 0..m.matrix.nrows() {
            for j in 0..m.matrix.ncols() {
                let z = m.matrix[(i, j)];
                if z.norm() >= 1e-12 {
                    e.push(vec![json!(i), json!(j), complex(z, ctx.tol)]);
                }
            }
        }
        r.tables.push(e);
    }
    Ok((r, true))
}

pub fn homcount(ctx: &Ctx, path: &Path, group: &str, constraints: &[String], blackboard: bool) -> Outcome {
    let d = LinkDiagram::parse(&std::fs::read_to_string(path)?)?;
    let g = build_named_group(group)?;
    let p = wirtinger_presentation(&d);
    let mut cons = Vec::new();
    for c in constraints {
        cons.push(match c.trim() {
            "-" | "" => None,
            s => {
                let (x, y) = s.split_once(':').ok_or_else(|| Error::Diagram(format!("constraint '{s}' is not x:y")))?;
                Some((element(&g, x)?, element(&g, y)?))
            }
        });
    }
    let count = hom_count(&p, &g, &cons, !blackboard)?;
    let mut r = Report::new("homcount");
    r.meta("diagram", path.display().to_string());
    r.meta("group", g.name.clone());
    r.meta("seed", ctx.seed);
    r.meta("arcs", p.generators);
    r.meta("components", p.components.len());
    r.meta("writhes", json!(p.writhes));
    r.meta("longitude", if blackboard { "blackboard" } else { "seifert" });
    r.meta("constraints", json!(constraints));
    r.meta("count", count);
    Ok((r, true))
}

pub fn selftest(ctx: &Ctx) -> Result<(dwinv::selftest::SelftestReport, Report)> {
    let rep = dwinv::selftest::run(ctx.seed);
    let mut t = Table::new("checks", &["name", "pass", "max_error", "tol", "cases"]);
    for c in &rep.checks {
        t.push(vec![json!(c.name), json!(c.pass), json!(c.max_error), json!(c.tol), json!(c.cases)]);
    }
    let mut r = Report::new("selftest");
    r.meta("seed", ctx.seed);
    r.meta("pass", rep.pass);
    r.tables.push(t);
    Ok((rep, r))
}

//! A fixed battery of consistency checks with a seeded sampler; the report depends only on
//! the seed.

use crate::dihedral::{coloring_count_formula, coloring_count_via_dw, output_phases, phi_pm_r, rot_pm, DihedralSimpleTable};
use crate::group::build_named_group;
use crate::linalg::{max_abs_diff, unitarity_defect, Mat};
use crate::montesinos::MontesinosSpec;
use crate::oracle::{boundary_count, fox_count, smith_normal_form, wirtinger_presentation};
use crate::qdouble::{braiding, cap, cup, Category, Morphism, Obj, ObjLabel};
use crate::tangle::{closed_eval, closure_eval, compile, dw_link_invariant, parse};
use crate::Result;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub max_error: f64,
    pub tol: f64,
    pub cases: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SelftestReport {
    pub schema: u32,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn category(name: &str, seed: u64) -> Result<Category> {
    Category::with_seed(Arc::new(build_named_group(name)?), seed)
}

fn check(name: &str, tol: f64, f: impl FnOnce() -> Result<(f64, usize)>) -> Check {
    match f() {
        Ok((err, cases)) => Check { name: name.into(), pass: err <= tol, max_error: err, tol, cases },
        Err(_) => Check { name: name.into(), pass: false, max_error: f64::INFINITY, tol, cases: 0 },
    }
}

fn labels(c: &Category) -> Vec<ObjLabel> {
    (0..c.len()).flat_map(|i| [ObjLabel::plain(i), ObjLabel::plain(i).star()]).collect()
}

fn identity(m: &Obj) -> Morphism {
    Morphism::identity(vec![m.clone()])
}

pub fn run(seed: u64) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    checks.push(check("category_sanity", 1e-9, || {
        let mut err = 0f64;
        let groups = ["Z2", "Z3", "Z5", "S3", "D3", "Q8"];
        for g in groups {
            let c = category(g, seed)?;
            let total: usize = (0..c.len()).map(|i| c.dim(i).pow(2)).sum();
            err = err.max((total as f64 - (c.group.order() as f64).powi(2)).abs());
            err = err.max(c.catalog.gram_defect());
        }
        Ok((err, groups.len()))
    }));

    let d3 = category("D3", seed);
    let d3 = d3.as_ref();

    checks.push(check("braiding_unitarity_d3", 1e-9, || {
        let c = d3.map_err(|e| crate::Error::Irrep(e.to_string()))?;
        let l = labels(c);
        let mut err = 0f64;
        for &a in &l {
            for &b in &l {
                let r = c.braiding_labels(a, b);
                err = err.max(unitarity_defect(&r.matrix)).max(r.equivariance_defect());
                let id = c.braiding_inverse_labels(a, b).compose(&r)?;
                let n = id.matrix.nrows();
                err = err.max(max_abs_diff(&id.matrix, &Mat::identity(n, n)));
            }
        }
        Ok((err, l.len() * l.len()))
    }));

    let samples: Vec<(usize, usize, usize)> = (0..24).map(|_| (rng.gen_range(0..8), rng.gen_range(0..8), rng.gen_range(0..8))).collect();
    checks.push(check("yang_baxter_d3", 1e-9, || {
        let c = d3.map_err(|e| crate::Error::Irrep(e.to_string()))?;
        let mut err = 0f64;
        for &(i, j, k) in &samples {
            let (u, v, w) = (c.simple(i), c.simple(j), c.simple(k));
            let lhs = braiding(v, w).tensor(&identity(u)).compose(&identity(v).tensor(&braiding(u, w)))?.compose(&braiding(u, v).tensor(&identity(w)))?;
            let rhs = identity(w).tensor(&braiding(u, v)).compose(&braiding(u, w).tensor(&identity(v)))?.compose(&identity(u).tensor(&braiding(v, w)))?;
            err = err.max(lhs.max_diff(&rhs));
        }
        Ok((err, samples.len()))
    }));

    checks.push(check("zigzag_d3", 1e-9, || {
        let c = d3.map_err(|e| crate::Error::Irrep(e.to_string()))?;
        let mut err = 0f64;
        for l in labels(c) {
            let u = c.module(l);
            let us: Obj = Arc::new(u.dual());
            let n = u.dim();
            let z1 = identity(u).tensor(&cap(u)).compose(&cup(u).tensor(&identity(u)))?;
            let z2 = cap(u).tensor(&identity(&us)).compose(&identity(&us).tensor(&cup(u)))?;
            err = err.max(max_abs_diff(&z1.matrix, &Mat::identity(n, n))).max(max_abs_diff(&z2.matrix, &Mat::identity(n, n)));
        }
        Ok((err, 2 * c.len()))
    }));

    checks.push(check("phi_round_trip_d3", 1e-9, || {
        let c = d3.map_err(|e| crate::Error::Irrep(e.to_string()))?;
        let mut err = 0f64;
        for _ in 0..6 {
            let pick = |rng: &mut ChaCha8Rng| ObjLabel::plain(rng.gen_range(0..c.len()));
            let (a, b) = (pick(&mut rng), pick(&mut rng));
            let f = c.random_morphism(&[a, b], &[b, a], &mut rng)?;
            err = err.max(c.phi_inverse(&c.phi(&f)?)?.max_diff(&f));
        }
        Ok((err, 6))
    }));

    checks.push(check("closure_traces_d3", 1e-9, || {
        let c = d3.map_err(|e| crate::Error::Irrep(e.to_string()))?;
        let suite = ["id", "x", "xi * x", "twist(3)", "r(twist(2))", "(x | id) * (id | xi)"];
        let mut err = 0f64;
        let mut cases = 0;
        for expr in suite {
            let t = parse(expr)?;
            let k = compile(&parse(&format!("close({expr})"))?).components.len();
            for code in 0..c.len().pow(k as u32) {
                let colors: Vec<usize> = (0..k).map(|j| (code / c.len().pow(j as u32)) % c.len()).collect();
                err = err.max((closure_eval(&t, &colors, c)? - closed_eval(&t, &colors, c)?).norm());
                cases += 1;
            }
        }
        Ok((err, cases))
    }));

    checks.push(check("oracle_trefoil_s3", 1e-6, || {
        let c = category("S3", seed)?;
        let g = &c.group;
        let t = parse("close(twist(3))")?;
        let z = dw_link_invariant(&t, &c)?.corrected(&c);
        let p = wirtinger_presentation(&compile(&t).link_diagram()?);
        let mut err = 0f64;
        let mut cases = 0;
        for x in g.elements() {
            for y in g.elements().filter(|&y| g.commute(x, y)) {
                err = err.max((z.value(&c.catalog, &[(x, y)]) - boundary_count(&p, g, &[(x, y)], true)? as f64).norm());
                cases += 1;
            }
        }
        Ok((err, cases))
    }));

    checks.push(check("dihedral_closed_forms_d3", 1e-9, || {
        let c = d3.map_err(|e| crate::Error::Irrep(e.to_string()))?;
        let t = DihedralSimpleTable::from_category(c)?;
        let mut err = 0f64;
        let exact = rot_pm(3, true)?.embed();
        for plus in [true, false] {
            let w = ObjLabel::plain(t.w(plus));
            let generic = t.diagonal(&c.phi_braiding(w, w)?)?;
            for (a, b) in generic.iter().zip(phi_pm_r(3, plus)?.embed()) {
                err = err.max((a - b).norm());
            }
            err = err.max(output_phases(&t.engine_rot(c, plus)?, &exact).1);
        }
        Ok((err, 2))
    }));

    checks.push(check("coloring_counts", 0.0, || {
        let mut mismatches = 0;
        let mut cases = 0;
        for s in ["1/1,1/1,1/1", "3/1", "3/1,5/1,7/1"] {
            let spec: MontesinosSpec = s.parse()?;
            let d = spec.compiled().link_diagram()?;
            for n in [3usize, 5, 7, 9] {
                let f = coloring_count_formula(n, &spec)?;
                let dw = BigInt::from(coloring_count_via_dw(n, &spec)?.count);
                let fox = fox_count(&d, n as u64)?;
                if f != dw || f != fox {
                    mismatches += 1;
                }
                cases += 1;
            }
        }
        Ok((mismatches as f64, cases))
    }));

    checks.push(check("snf_random", 0.0, || {
        let mut bad = 0;
        for _ in 0..20 {
            let m: Vec<Vec<i64>> = (0..5).map(|_| (0..5).map(|_| rng.gen_range(-9..=9)).collect()).collect();
            if !smith_normal_form(&m).verify(&m) {
                bad += 1;
            }
        }
        Ok((bad as f64, 20))
    }));

    let pass = checks.iter().all(|c| c.pass);
    SelftestReport { schema: SCHEMA, seed, pass, checks }
}

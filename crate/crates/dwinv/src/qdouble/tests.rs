use super::*;
use crate::group::build_named_group;
use crate::linalg::{max_abs_diff, unitarity_defect, Mat, C, ONE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn cat(spec: &str) -> Category {
    Category::new(Arc::new(build_named_group(spec).unwrap())).unwrap()
}

fn p(i: usize) -> ObjLabel {
    ObjLabel::plain(i)
}

fn every_label(c: &Category) -> Vec<ObjLabel> {
    (0..c.len()).flat_map(|i| [p(i), p(i).star()]).collect()
}

#[test]
fn tensor_unit_and_dimensions() {
    let c = cat("D3");
    let unit = c.unit();
    for i in 0..c.len() {
        let v = c.simple(i);
        let t = v.tensor(&unit).unwrap();
        assert_eq!(t.grades, v.grades);
        assert_eq!(unit.tensor(v).unwrap().dim(), v.dim());
    }
    let w = c.simple(6).tensor(c.simple(6)).unwrap();
    assert_eq!(w.dim(), 9);
    assert_eq!(w.grade_dim(c.group.identity()), 3);
    assert!(w.structure_defect() < 1e-9);
    let other = cat("D3");
    assert!(c.simple(1).tensor(other.simple(1)).is_ok());
    let z = cat("Z3");
    assert!(c.simple(1).tensor(z.simple(1)).is_err());
}

#[test]
fn duals() {
    let c = cat("D5");
    let unit = c.unit();
    assert_eq!(unit.dual().grades, unit.grades);
    assert_eq!(c.dual_index(0), 0);
    assert_eq!(c.dual_index(14), 14);
    assert_eq!(c.dual_index(15), 15);
    for i in 0..c.len() {
        let v = c.simple(i);
        let dd = v.dual().dual();
        assert_eq!(dd.grades, v.grades);
        assert_eq!(max_abs_diff(&dd.action[3], &v.action[3]), 0.0);
        assert!(unitarity_defect(c.dual_iso(i)) < 1e-9);
        let d = c.module(p(i).star());
        assert!(equivariance_defect(d, c.simple(c.dual_index(i)), c.dual_iso(i)) < 1e-9);
    }
    let g = &c.group;
    let mut support: Vec<usize> = c.module(p(4).star()).grades.clone();
    support.dedup();
    assert_eq!(support, vec![g.pow(1, 4), 1]);
}

#[test]
fn simple_objects_are_modules() {
    for spec in ["Z1", "Z2", "Z5", "S3", "D3", "D5", "Q8", "S4"] {
        let c = cat(spec);
        let n = c.group.order();
        let total: usize = (0..c.len()).map(|i| c.dim(i) * c.dim(i)).sum();
        assert_eq!(total, n * n, "{spec}");
        for i in 0..c.len() {
            assert!(c.simple(i).structure_defect() < 1e-9, "{spec} {i}");
            let chi = c.simple(i).character(&c.catalog.space);
            assert!((chi.inner(&chi).unwrap() - ONE).norm() < 1e-9);
        }
        assert_eq!(c.dim(0), 1);
    }
    let d3 = cat("D3");
    let dims: Vec<usize> = (0..d3.len()).map(|i| d3.dim(i)).collect();
    assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 3, 3]);
}

#[test]
fn unit_character() {
    let c = cat("S3");
    let chi = c.unit().character(&c.catalog.space);
    for &(x, g) in &c.catalog.space.pairs {
        let expect = if x == c.group.identity() { ONE } else { C::new(0.0, 0.0) };
        assert_eq!(chi.at(x, g), expect);
    }
    assert_eq!(c.unit().dim_total(), 1);
}

#[test]
fn tensor_character_matches_convolution() {
    let c = cat("D3");
    for i in 0..c.len() {
        for j in 0..c.len() {
            let direct = c.simple(i).tensor(c.simple(j)).unwrap().character(&c.catalog.space);
            let conv = convolve_characters(&c.catalog.basis[i], &c.catalog.basis[j]);
            assert!(direct.max_diff(&conv) < 1e-9);
        }
    }
}

#[test]
fn braiding_is_unitary_natural_and_satisfies_yang_baxter() {
    let c = cat("D3");
    let l = every_label(&c);
    for &a in &l {
        for &b in &l {
            let r = c.braiding_labels(a, b);
            assert!(unitarity_defect(&r.matrix) < 1e-12);
            assert!(r.equivariance_defect() < 1e-12);
            assert!(r.grade_defect() < 1e-12);
            let ri = c.braiding_inverse_labels(a, b);
            let id = ri.compose(&r).unwrap();
            assert!(max_abs_diff(&id.matrix, &Mat::identity(id.matrix.nrows(), id.matrix.nrows())) < 1e-12);
        }
    }
    let unit: Obj = Arc::new(c.unit());
    let r = braiding(&unit, c.simple(5));
    assert_eq!(r.matrix, Mat::identity(2, 2));
    for i in 0..c.len() {
        for j in 0..c.len() {
            for k in 0..c.len() {
                let (u, v, w) = (c.simple(i), c.simple(j), c.simple(k));
                let id = |m: &Obj| Morphism::identity(vec![m.clone()]);
                let lhs = braiding(v, w)
                    .tensor(&id(u))
                    .compose(&id(v).tensor(&braiding(u, w)))
                    .unwrap()
                    .compose(&braiding(u, v).tensor(&id(w)))
                    .unwrap();
                let rhs = id(w)
                    .tensor(&braiding(u, v))
                    .compose(&braiding(u, w).tensor(&id(v)))
                    .unwrap()
                    .compose(&id(u).tensor(&braiding(v, w)))
                    .unwrap();
                assert!(lhs.max_diff(&rhs) < 1e-9);
            }
        }
    }
}

#[test]
fn zigzag_identities() {
    for spec in ["D3", "D5"] {
        let c = cat(spec);
        for l in every_label(&c) {
            let u = c.module(l);
            let us: Obj = Arc::new(u.dual());
            let id = |m: &Obj| Morphism::identity(vec![m.clone()]);
            let z1 = id(u).tensor(&cap(u)).compose(&cup(u).tensor(&id(u))).unwrap();
            assert!(max_abs_diff(&z1.matrix, &Mat::identity(u.dim(), u.dim())) < 1e-12);
            let z2 = cap(u).tensor(&id(&us)).compose(&id(&us).tensor(&cup(u))).unwrap();
            assert!(max_abs_diff(&z2.matrix, &Mat::identity(u.dim(), u.dim())) < 1e-12);
            let circle = cap(&us).compose(&cup(u)).unwrap();
            assert_eq!(scalar(&circle), Some(C::new(u.dim() as f64, 0.0)));
            assert!(cup(u).equivariance_defect() < 1e-12);
            assert!(cap(u).equivariance_defect() < 1e-12);
        }
    }
}

#[test]
fn fusion_is_integral_and_symmetric() {
    let c = cat("D3");
    for i in 0..c.len() {
        let n = c.fusion(0, i).unwrap();
        assert!(n.iter().enumerate().all(|(j, &v)| v == (i == j) as usize));
        for i2 in 0..c.len() {
            assert_eq!(c.fusion(i, i2).unwrap(), c.fusion(i2, i).unwrap());
        }
    }
    let wp = c.fusion(6, 6).unwrap();
    assert_eq!(*wp, vec![1, 0, 1, 1, 1, 1, 0, 0]);
}

#[test]
fn beta_is_a_complete_isometric_decomposition() {
    let c = cat("D3");
    for a in every_label(&c) {
        for b in every_label(&c) {
            let beta = c.beta(a, b).unwrap();
            let w = c.module(a).tensor(c.module(b)).unwrap();
            let mut proj = Mat::zeros(w.dim(), w.dim());
            for (j, list) in beta.embeddings.iter().enumerate() {
                for (x, e) in list.iter().enumerate() {
                    assert!(equivariance_defect(c.simple(j), &w, e) < 1e-9);
                    for (y, f) in list.iter().enumerate() {
                        let g = e.adjoint() * f;
                        let expect = if x == y { Mat::identity(c.dim(j), c.dim(j)) } else { Mat::zeros(c.dim(j), c.dim(j)) };
                        assert!(max_abs_diff(&g, &expect) < 1e-9);
                    }
                    proj += e * e.adjoint();
                }
            }
            assert!(max_abs_diff(&proj, &Mat::identity(w.dim(), w.dim())) < 1e-9);
        }
    }
}

#[test]
fn phi_round_trip_and_multiplicativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in ["D3", "S3", "Q8"] {
        let c = cat(spec);
        let l = every_label(&c);
        for k in 0..20 {
            let s = [l[(7 * k + 1) % l.len()], l[(3 * k + 2) % l.len()]];
            let t = [s[1], s[0]];
            let f = c.random_morphism(&s, &t, &mut rng).unwrap();
            let back = c.phi_inverse(&c.phi(&f).unwrap()).unwrap();
            assert!(back.max_diff(&f) < 1e-9, "{spec} {k}");
            let g = c.random_morphism(&t, &s, &mut rng).unwrap();
            let fg = c.phi(&f.compose(&g).unwrap()).unwrap();
            let pf = c.phi(&f).unwrap().compose(&c.phi(&g).unwrap()).unwrap();
            assert!(fg.max_diff(&pf) < 1e-9);
        }
        let id = c.phi(&Morphism::identity(vec![c.simple(1).clone(), c.simple(2).clone()])).unwrap();
        assert!(id.max_diff(&c.identity_blocks([p(1), p(2)]).unwrap()) < 1e-9);
    }
}

#[test]
fn rot_two_ways_and_block_transport() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c = cat("D3");
    let l = every_label(&c);
    for k in 0..20 {
        let s = [l[(5 * k) % l.len()], l[(11 * k + 3) % l.len()]];
        let t = [l[(3 * k + 1) % l.len()], l[(k + 7) % l.len()]];
        let f = c.random_morphism(&s, &t, &mut rng).unwrap();
        let a = rot(&f).unwrap();
        let b = rot_categorical(&f).unwrap();
        assert!(a.max_diff(&b) < 1e-12);
        assert!(a.equivariance_defect() < 1e-9);
        let pb = c.phi(&f).unwrap();
        let lhs = c.phi(&a).unwrap();
        let rhs = c.rot_block(&pb).unwrap();
        assert_eq!(lhs.source, rhs.source);
        assert!(lhs.max_diff(&rhs) < 1e-9);
    }
    let unit: Obj = Arc::new(c.unit());
    let id = Morphism::identity(vec![unit.clone(), unit.clone()]);
    assert_eq!(rot(&id).unwrap().matrix, Mat::identity(1, 1));
    let z = c.zero_blocks([p(6), p(6)], [p(6), p(6)]).unwrap();
    assert!(c.rot_block(&z).unwrap().flatten().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn rot_four_times_keeps_block_spectrum() {
    let c = cat("D3");
    for i in [2, 4, 6, 7] {
        let r = c.braiding_labels(p(i), p(i));
        let mut f = r.clone();
        for _ in 0..4 {
            f = rot(&f).unwrap();
        }
        let a = c.phi(&r).unwrap();
        let b = c.phi(&f).unwrap();
        for (x, y) in a.blocks.iter().zip(&b.blocks) {
            if x.is_empty() {
                continue;
            }
            let mut ex: Vec<_> = nalgebra::Schur::new(x.clone()).eigenvalues().unwrap().iter().cloned().collect();
            let mut ey: Vec<_> = nalgebra::Schur::new(y.clone()).eigenvalues().unwrap().iter().cloned().collect();
            let key = |z: &C| (z.re * 1e6).round() as i64 * 10_000_000 + (z.im * 1e6).round() as i64;
            ex.sort_by_key(key);
            ey.sort_by_key(key);
            for (u, v) in ex.iter().zip(&ey) {
                assert!((u - v).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn vector_trace_and_norm() {
    let c = cat("D5");
    let unit: Obj = Arc::new(c.unit());
    let t = vector_trace(&Morphism::identity(vec![unit]), &c.catalog.space).unwrap();
    assert!(t.max_diff(&c.catalog.basis[0]) < 1e-12);
    assert!((c.norm_bar(&t) - ONE).norm() < 1e-12);
    for i in 0..c.len() {
        let t = vector_trace(&Morphism::identity(vec![c.simple(i).clone()]), &c.catalog.space).unwrap();
        assert!(t.max_diff(&c.catalog.basis[i]) < 1e-9);
        assert!((c.norm_bar(&t) - C::new(c.dim(i) as f64, 0.0)).norm() < 1e-9);
    }
    let d3 = cat("D3");
    let r = d3.braiding_labels(p(6), p(6));
    let direct = vector_trace(&r, &d3.catalog.space).unwrap();
    let blocks = d3.block_vector_trace(&d3.phi(&r).unwrap()).unwrap();
    assert!(direct.max_diff(&blocks) < 1e-9);
    let tr: C = (0..9).map(|k| r.matrix[(k, k)]).sum();
    assert!((d3.closure_scalar(&d3.phi(&r).unwrap()).unwrap() - tr).norm() < 1e-9);
}

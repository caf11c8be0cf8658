//! Unitary irreducible representations of small finite groups.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupKind};
use crate::linalg::{random_hermitian, root_of_unity, unitarity_defect, Mat, C, ONE, ZERO};
use nalgebra::SymmetricEigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::sync::Arc;

pub const DEFAULT_IRREP_SEED: u64 = 0x5eed_1e55;

#[derive(Debug, Clone)]
pub struct UnitaryIrrep {
    pub group: Arc<FiniteGroup>,
    pub dim: usize,
    /// One unitary matrix per element id.
    pub matrices: Vec<Mat>,
    /// Character value per element id.
    pub character: Vec<C>,
    /// Seed of the numeric fallback, when it was used.
    pub seed: Option<u64>,
}

impl UnitaryIrrep {
    fn from_matrices(group: &Arc<FiniteGroup>, matrices: Vec<Mat>, seed: Option<u64>) -> Self {
        let dim = matrices[0].nrows();
        let character = matrices.iter().map(crate::linalg::trace).collect();
        UnitaryIrrep { group: group.clone(), dim, matrices, character, seed }
    }

    fn one_dim(group: &Arc<FiniteGroup>, values: Vec<C>) -> Self {
        let matrices = values.iter().map(|&v| Mat::from_element(1, 1, v)).collect();
        UnitaryIrrep { group: group.clone(), dim: 1, matrices, character: values, seed: None }
    }

    /// `(1/|G|) sum_g |chi(g)|^2`, equal to 1 exactly for irreducible representations.
    pub fn norm_sq(&self) -> f64 {
        self.character.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.group.order() as f64
    }

    /// Largest defect of the homomorphism and unitarity conditions.
    pub fn defect(&self) -> f64 {
        let g = &self.group;
        let mut worst: f64 = 0.0;
        for a in g.elements() {
            worst = worst.max(unitarity_defect(&self.matrices[a]));
            for b in g.elements() {
                let lhs = &self.matrices[a] * &self.matrices[b];
                worst = worst.max(crate::linalg::max_abs_diff(&lhs, &self.matrices[g.mul(a, b)]));
            }
        }
        worst
    }
}

fn quantize(x: f64) -> i64 {
    (x * 1e8).round() as i64
}

/// Ordering: dimension ascending, then character vector in descending lexicographic order
/// (real part before imaginary part, values rounded at 1e-8). The trivial character comes first.
fn irrep_cmp(a: &UnitaryIrrep, b: &UnitaryIrrep) -> Ordering {
    a.dim.cmp(&b.dim).then_with(|| {
        for (x, y) in a.character.iter().zip(&b.character) {
            let o = quantize(y.re).cmp(&quantize(x.re)).then(quantize(y.im).cmp(&quantize(x.im)));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

pub fn irreps(g: &Arc<FiniteGroup>) -> Result<Vec<UnitaryIrrep>> {
    irreps_seeded(g, DEFAULT_IRREP_SEED)
}

pub fn irreps_seeded(g: &Arc<FiniteGroup>, seed: u64) -> Result<Vec<UnitaryIrrep>> {
    let mut list = if g.is_abelian() {
        abelian_characters(g)
    } else {
        match g.kind {
            GroupKind::Dihedral(n) => dihedral_irreps(g, n),
            GroupKind::Symmetric(k) => symmetric_irreps(g, k),
            GroupKind::Quaternion => quaternion_irreps(g),
            _ => fallback_irreps(g, seed)?,
        }
    };
    list.sort_by(irrep_cmp);
    verify(g, &list)?;
    Ok(list)
}

fn verify(g: &FiniteGroup, list: &[UnitaryIrrep]) -> Result<()> {
    let total: usize = list.iter().map(|r| r.dim * r.dim).sum();
    if total != g.order() {
        return Err(Error::Irrep(format!("sum of squared dims {total} != {}", g.order())));
    }
    for (i, a) in list.iter().enumerate() {
        for (j, b) in list.iter().enumerate() {
            let s: C = a.character.iter().zip(&b.character).map(|(x, y)| x * y.conj()).sum::<C>() / g.order() as f64;
            let expect = if i == j { ONE } else { ZERO };
            if (s - expect).norm() > 1e-9 {
                return Err(Error::Irrep(format!("orthogonality fails for ({i},{j})")));
            }
        }
    }
    Ok(())
}

/// Characters of an abelian group, built by extending from `<e>` one cyclic step at a time.
fn abelian_characters(g: &Arc<FiniteGroup>) -> Vec<UnitaryIrrep> {
    let n = g.order();
    let e = g.identity();
    let mut in_h = vec![false; n];
    in_h[e] = true;
    let mut h_elems = vec![e];
    let mut chars: Vec<Vec<C>> = vec![{
        let mut v = vec![ZERO; n];
        v[e] = ONE;
        v
    }];
    for x in g.elements() {
        if in_h[x] {
            continue;
        }
        let mut m = 1;
        let mut xm = x;
        while !in_h[xm] {
            xm = g.mul(xm, x);
            m += 1;
        }
        let mut new_elems = Vec::with_capacity(h_elems.len() * m);
        let mut xs = e;
        for _ in 0..m {
            for &h in &h_elems {
                new_elems.push(g.mul(h, xs));
            }
            xs = g.mul(xs, x);
        }
        let mut next = Vec::with_capacity(chars.len() * m);
        for chi in &chars {
            let w = chi[xm];
            for k in 0..m {
                let ang = (w.arg() + std::f64::consts::TAU * k as f64) / m as f64;
                let z = C::from_polar(1.0, ang);
                let mut v = chi.clone();
                let mut zs = ONE;
                let mut xs = e;
                for _ in 0..m {
                    for &h in &h_elems {
                        v[g.mul(h, xs)] = chi[h] * zs;
                    }
                    xs = g.mul(xs, x);
                    zs *= z;
                }
                next.push(v);
            }
        }
        chars = next;
        for &y in &new_elems {
            in_h[y] = true;
        }
        h_elems = new_elems;
    }
    chars.into_iter().map(|v| UnitaryIrrep::one_dim(g, v)).collect()
}

fn dihedral_irreps(g: &Arc<FiniteGroup>, n: usize) -> Vec<UnitaryIrrep> {
    let mut out = Vec::new();
    let sign = |x: usize| if x >= n { -1.0 } else { 1.0 };
    out.push(UnitaryIrrep::one_dim(g, vec![ONE; 2 * n]));
    out.push(UnitaryIrrep::one_dim(g, (0..2 * n).map(|x| C::new(sign(x), 0.0)).collect()));
    if n % 2 == 0 {
        for s in [1.0, -1.0] {
            let vals = (0..2 * n)
                .map(|x| {
                    let k = x % n;
                    let a = if k % 2 == 0 { 1.0 } else { -1.0 };
                    C::new(a * if x >= n { s } else { 1.0 }, 0.0)
                })
                .collect();
            out.push(UnitaryIrrep::one_dim(g, vals));
        }
    }
    for r in 1..(n + 1) / 2 {
        if 2 * r == n {
            continue;
        }
        let mats = (0..2 * n)
            .map(|x| {
                let k = (x % n) as i64;
                let z = root_of_unity(r as i64 * k, n as i64);
                let mut m = Mat::zeros(2, 2);
                if x < n {
                    m[(0, 0)] = z;
                    m[(1, 1)] = z.conj();
                } else {
                    // a^k b
                    m[(0, 1)] = z;
                    m[(1, 0)] = z.conj();
                }
                m
            })
            .collect();
        out.push(UnitaryIrrep::from_matrices(g, mats, None));
    }
    out
}

/// Orthonormal basis of the complement of the all-ones vector in `C^k`.
fn sum_zero_basis(k: usize) -> Mat {
    let mut b = Mat::zeros(k, k - 1);
    for j in 0..k - 1 {
        // Helmert basis
        let norm = (((j + 1) * (j + 2)) as f64).sqrt();
        for i in 0..=j {
            b[(i, j)] = C::new(1.0 / norm, 0.0);
        }
        b[(j + 1, j)] = C::new(-((j + 1) as f64) / norm, 0.0);
    }
    b
}

fn perm_matrix(p: &[usize]) -> Mat {
    let k = p.len();
    let mut m = Mat::zeros(k, k);
    for (i, &pi) in p.iter().enumerate() {
        m[(pi, i)] = ONE;
    }
    m
}

fn parse_perm(label: &str) -> Vec<usize> {
    label
        .trim_matches(|c| c == '[' || c == ']')
        .split_whitespace()
        .map(|t| t.parse().expect("permutation label"))
        .collect()
}

fn perm_sign(p: &[usize]) -> f64 {
    let mut s = 1.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn restricted(perm_reps: &[Mat]) -> Vec<Mat> {
    let k = perm_reps[0].nrows();
    let b = sum_zero_basis(k);
    perm_reps.iter().map(|p| b.adjoint() * p * &b).collect()
}

fn symmetric_irreps(g: &Arc<FiniteGroup>, k: usize) -> Vec<UnitaryIrrep> {
    let perms: Vec<Vec<usize>> = g.elements().map(|x| parse_perm(g.label(x))).collect();
    let signs: Vec<f64> = perms.iter().map(|p| perm_sign(p)).collect();
    let mut out = vec![
        UnitaryIrrep::one_dim(g, vec![ONE; g.order()]),
        UnitaryIrrep::one_dim(g, signs.iter().map(|&s| C::new(s, 0.0)).collect()),
    ];
    let std: Vec<Mat> = restricted(&perms.iter().map(|p| perm_matrix(p)).collect::<Vec<_>>());
    if k == 4 {
        let pairings: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
        let key = |q: &[usize; 4]| {
            let mut a = [q[0].min(q[1]), q[0].max(q[1])];
            let mut b = [q[2].min(q[3]), q[2].max(q[3])];
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            (a, b)
        };
        let keys: Vec<_> = pairings.iter().map(key).collect();
        let on_pairings: Vec<Mat> = perms
            .iter()
            .map(|p| {
                let img: Vec<usize> = pairings
                    .iter()
                    .map(|q| {
                        let moved = [p[q[0]], p[q[1]], p[q[2]], p[q[3]]];
                        keys.iter().position(|kk| *kk == key(&moved)).expect("pairing")
                    })
                    .collect();
                perm_matrix(&img)
            })
            .collect();
        out.push(UnitaryIrrep::from_matrices(g, restricted(&on_pairings), None));
        let twisted = std.iter().zip(&signs).map(|(m, &s)| m * C::new(s, 0.0)).collect();
        out.push(UnitaryIrrep::from_matrices(g, twisted, None));
    }
    if k >= 2 {
        out.push(UnitaryIrrep::from_matrices(g, std, None));
    }
    out
}

fn quaternion_irreps(g: &Arc<FiniteGroup>) -> Vec<UnitaryIrrep> {
    // ids: 2u + sign, u in {1,i,j,k}
    let patterns = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    let mut out: Vec<UnitaryIrrep> = patterns
        .iter()
        .map(|pat| UnitaryIrrep::one_dim(g, (0..8).map(|x| C::new(if x < 2 { 1.0 } else { pat[x / 2 - 1] }, 0.0)).collect()))
        .collect();
    let i = C::new(0.0, 1.0);
    let mut units = vec![Mat::identity(2, 2); 4];
    units[1] = Mat::from_row_slice(2, 2, &[i, ZERO, ZERO, -i]);
    units[2] = Mat::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]);
    units[3] = &units[1] * &units[2];
    let mats = (0..8).map(|x| if x % 2 == 0 { units[x / 2].clone() } else { -units[x / 2].clone() }).collect();
    out.push(UnitaryIrrep::from_matrices(g, mats, None));
    out
}

/// Regular-representation decomposition through the eigenspaces of a random Hermitian
/// operator averaged into the commutant.
fn fallback_irreps(g: &Arc<FiniteGroup>, seed: u64) -> Result<Vec<UnitaryIrrep>> {
    let mut last = String::new();
    for attempt in 0..8u64 {
        match fallback_attempt(g, seed.wrapping_add(attempt)) {
            Ok(v) => return Ok(v),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::Irrep(format!("fallback failed after retries: {last}")))
}

fn fallback_attempt(g: &Arc<FiniteGroup>, seed: u64) -> Result<Vec<UnitaryIrrep>> {
    let n = g.order();
    let regular: Vec<Mat> = g
        .elements()
        .map(|x| {
            let mut m = Mat::zeros(n, n);
            for h in g.elements() {
                m[(g.mul(x, h), h)] = ONE;
            }
            m
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_hermitian(&mut rng, n);
    let mut avg = Mat::zeros(n, n);
    for l in &regular {
        avg += l * &a * l.adjoint();
    }
    avg.unscale_mut(n as f64);
    let eig = SymmetricEigen::new(avg);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match clusters.last_mut() {
            Some(c) if (eig.eigenvalues[k] - eig.eigenvalues[*c.last().unwrap()]).abs() < 1e-7 => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    let mut found: Vec<UnitaryIrrep> = Vec::new();
    for c in clusters {
        let basis = Mat::from_columns(&c.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect::<Vec<_>>());
        let mats: Vec<Mat> = regular.iter().map(|l| basis.adjoint() * l * &basis).collect();
        let rep = UnitaryIrrep::from_matrices(g, mats, Some(seed));
        if rep.defect() > 1e-8 || (rep.norm_sq() - 1.0).abs() > 1e-8 {
            return Err(Error::Irrep("eigenspace is not an irreducible invariant subspace".into()));
        }
        let dup = found.iter().any(|f| {
            f.dim == rep.dim && f.character.iter().zip(&rep.character).all(|(x, y)| (x - y).norm() < 1e-7)
        });
        if !dup {
            found.push(rep);
        }
    }
    Ok(found)
}

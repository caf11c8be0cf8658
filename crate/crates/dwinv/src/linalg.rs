//! Small dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;
pub type Mat = DMatrix<C>;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);

/// `exp(2 pi i * num / den)`.
pub fn root_of_unity(num: i64, den: i64) -> C {
    let k = num.rem_euclid(den) as f64;
    let t = std::f64::consts::TAU * k / den as f64;
    C::new(t.cos(), t.sin())
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = Mat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `id_{left} (x) m (x) id_{right}` without materializing identities in the caller.
pub fn kron_id(left: usize, m: &Mat, right: usize) -> Mat {
    let (mr, mc) = m.shape();
    let mut out = Mat::zeros(left * mr * right, left * mc * right);
    for a in 0..left {
        for i in 0..mr {
            for j in 0..mc {
                let s = m[(i, j)];
                if s == ZERO {
                    continue;
                }
                for c in 0..right {
                    out[((a * mr + i) * right + c, (a * mc + j) * right + c)] = s;
                }
            }
        }
    }
    out
}

/// Computes `(id_{left} (x) m (x) id_{right}) * x` directly.
pub fn apply_local(left: usize, m: &Mat, right: usize, x: &Mat) -> Mat {
    let (mr, mc) = m.shape();
    assert_eq!(x.nrows(), left * mc * right, "apply_local: row mismatch");
    let cols = x.ncols();
    let mut out = Mat::zeros(left * mr * right, cols);
    for a in 0..left {
        for i in 0..mr {
            for j in 0..mc {
                let s = m[(i, j)];
                if s == ZERO {
                    continue;
                }
                for c in 0..right {
                    let src = (a * mc + j) * right + c;
                    let dst = (a * mr + i) * right + c;
                    for col in 0..cols {
                        let v = x[(src, col)];
                        if v != ZERO {
                            out[(dst, col)] += s * v;
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn unitarity_defect(u: &Mat) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &Mat::identity(n, n))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let a = random_matrix(rng, n, n);
    (&a + a.adjoint()).scale(0.5)
}

/// Inner product `tr(a^dagger b)`.
pub fn frob_inner(a: &Mat, b: &Mat) -> C {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Gram-Schmidt on a family of equally shaped matrices with the Frobenius inner product.
/// Returns the orthonormal family; vectors with residual norm below `tol` are dropped.
pub fn orthonormalize(family: &[Mat], tol: f64) -> Vec<Mat> {
    let mut out: Vec<Mat> = Vec::new();
    for f in family {
        let mut v = f.clone();
        for _ in 0..2 {
            for q in &out {
                let c = frob_inner(q, &v);
                v -= q * c;
            }
        }
        let nrm = frob_inner(&v, &v).re.sqrt();
        if nrm > tol {
            out.push(v.unscale(nrm));
        }
    }
    out
}

pub fn trace(m: &Mat) -> C {
    assert_eq!(m.nrows(), m.ncols(), "trace of non-square matrix");
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

pub fn approx_eq(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn apply_local_matches_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 3, 2);
        let x = random_matrix(&mut rng, 2 * 2 * 4, 5);
        let direct = kron_id(2, &m, 4) * &x;
        let fast = apply_local(2, &m, 4, &x);
        assert!(max_abs_diff(&direct, &fast) < 1e-12);
        let k = kron(&kron(&Mat::identity(2, 2), &m), &Mat::identity(4, 4));
        assert!(max_abs_diff(&k, &kron_id(2, &m, 4)) < 1e-15);
    }

    #[test]
    fn orthonormalize_drops_dependent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 2, 2);
        let c = &a * C::new(2.0, 1.0) - &b;
        let q = orthonormalize(&[a, b, c], 1e-9);
        assert_eq!(q.len(), 2);
        assert!(frob_inner(&q[0], &q[1]).norm() < 1e-12);
    }

    #[test]
    fn roots() {
        assert!(approx_eq(root_of_unity(1, 4), C::new(0.0, 1.0), 1e-15));
        assert!(approx_eq(root_of_unity(-1, 3), root_of_unity(2, 3), 1e-15));
    }
}

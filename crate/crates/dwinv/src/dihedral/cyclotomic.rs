//! Exact arithmetic in `Q(w)`, `w = e^{2 pi i / m}`, as rational vectors modulo the `m`-th
//! cyclotomic polynomial.

use crate::linalg::C;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Monic integer coefficients of `Phi_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: usize) -> Vec<BigInt> {
    assert!(m >= 1);
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![BigInt::zero(); m + 1];
    num[0] = -BigInt::one();
    num[m] = BigInt::one();
    for d in (1..m).filter(|d| m % d == 0) {
        num = div_exact(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    pub m: usize,
    modulus: Vec<BigInt>,
}

impl CyclotomicField {
    pub fn new(m: usize) -> Arc<Self> {
        Arc::new(CyclotomicField { m, modulus: cyclotomic_polynomial(m) })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        for k in (d..c.len()).rev() {
            let lead = std::mem::replace(&mut c[k], BigRational::zero());
            if lead.is_zero() {
                continue;
            }
            for (i, a) in self.modulus[..d].iter().enumerate() {
                c[k - d + i] -= &lead * BigRational::from_integer(a.clone());
            }
        }
        c.truncate(d);
        c.resize(d, BigRational::zero());
        c
    }
}

/// An element of a cyclotomic field.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    pub field: Arc<CyclotomicField>,
    pub coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Cyclotomic { field: field.clone(), coeffs: vec![BigRational::zero(); field.degree()] }
    }

    pub fn rational(field: &Arc<CyclotomicField>, r: BigRational) -> Self {
        let mut z = Self::zero(field);
        z.coeffs[0] = r;
        z
    }

    pub fn integer(field: &Arc<CyclotomicField>, k: i64) -> Self {
        Self::rational(field, BigRational::from_integer(k.into()))
    }

    /// `w^k` for any integer `k`.
    pub fn root(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let e = k.rem_euclid(field.m as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Cyclotomic { field: field.clone(), coeffs: field.reduce(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Complex embedding with `w = e^{2 pi i / m}`.
    pub fn embed(&self) -> C {
        let m = self.field.m as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| C::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// `Some(r)` when the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &Cyclotomic) {
        assert!(Arc::ptr_eq(&self.field, &other.field) || self.field == other.field, "mixed cyclotomic fields");
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        self.check(o);
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        self.check(o);
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        self.check(o);
        let d = self.field.degree();
        let mut c = vec![BigRational::zero(); 2 * d];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in o.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                c[i + j] += a * b;
            }
        }
        Cyclotomic { field: self.field.clone(), coeffs: self.field.reduce(c) }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                _ if c.abs().is_one() => format!("{}w^{k}", if c.is_negative() { "-" } else { "" }),
                _ => format!("({c})w^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(m: usize) -> Vec<i64> {
        cyclotomic_polynomial(m).iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(poly(1), vec![-1, 1]);
        assert_eq!(poly(2), vec![1, 1]);
        assert_eq!(poly(6), vec![1, -1, 1]);
        assert_eq!(poly(10), vec![1, -1, 1, -1, 1]);
        assert_eq!(poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(CyclotomicField::new(42).degree(), 12);
    }

    #[test]
    fn roots_multiply_and_embed() {
        for m in [2usize, 6, 10, 14, 18] {
            let f = CyclotomicField::new(m);
            for a in -20i64..20 {
                for b in [-7i64, 0, 3, 11] {
                    let p = &Cyclotomic::root(&f, a) * &Cyclotomic::root(&f, b);
                    assert_eq!(p, Cyclotomic::root(&f, a + b));
                    let want = C::from_polar(1.0, 2.0 * std::f64::consts::PI * (a + b) as f64 / m as f64);
                    assert!((p.embed() - want).norm() < 1e-12);
                }
            }
            let sum: Cyclotomic = (0..m as i64).map(|k| Cyclotomic::root(&f, k)).fold(Cyclotomic::zero(&f), |s, x| &s + &x);
            assert!(sum.is_zero() || m == 1);
        }
    }

    #[test]
    fn rational_detection() {
        let f = CyclotomicField::new(6);
        let z = &Cyclotomic::root(&f, 1) + &Cyclotomic::root(&f, -1);
        assert_eq!(z.as_rational(), Some(BigRational::one()));
        assert!(Cyclotomic::root(&f, 1).as_rational().is_none());
        assert_eq!((&z - &z), Cyclotomic::zero(&f));
        assert_eq!(format!("{}", -&Cyclotomic::root(&f, 1)), "-w^1");
    }
}

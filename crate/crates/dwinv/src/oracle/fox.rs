use super::diagram::LinkDiagram;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Row per crossing: `2 over - under_in - under_out`.
pub fn coloring_matrix(d: &LinkDiagram) -> Vec<Vec<i64>> {
    d.crossings
        .iter()
        .map(|c| {
            let mut row = vec![0i64; d.arcs];
            row[c.over] += 2;
            row[c.under_in] -= 1;
            row[c.under_out] -= 1;
            row
        })
        .collect()
}

/// Number of Fox `n`-colorings: `prod_i gcd(d_i, n)` over the Smith form, with
/// `d_i = 0` past the rank.
pub fn fox_count(d: &LinkDiagram, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Coloring("n must be positive".into()));
    }
    let m = coloring_matrix(d);
    let nb = BigInt::from(n);
    let diag = if m.is_empty() { vec![] } else { smith_normal_form(&m).diagonal() };
    let mut count = BigInt::from(1);
    for i in 0..d.arcs {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        count *= di.gcd(&nb);
    }
    Ok(count)
}

/// The same count by a complete search over the `n^arcs` assignments, rejecting a partial
/// assignment as soon as one crossing with all three arcs colored fails.
pub fn fox_count_exhaustive(d: &LinkDiagram, n: u64) -> Result<u64> {
    let total = (n as f64).powi(d.arcs as i32);
    if total > 1e8 {
        return Err(Error::SearchGuard(total));
    }
    // checks[k]: crossings whose last arc to be colored is k
    let mut checks = vec![Vec::new(); d.arcs];
    for c in &d.crossings {
        checks[c.over.max(c.under_in).max(c.under_out)].push((c.over, c.under_in, c.under_out));
    }
    fn search(k: usize, n: i64, colors: &mut [i64], checks: &[Vec<(usize, usize, usize)>]) -> u64 {
        if k == colors.len() {
            return 1;
        }
        let mut count = 0;
        for x in 0..n {
            colors[k] = x;
            if checks[k].iter().all(|&(o, a, b)| (2 * colors[o] - colors[a] - colors[b]).rem_euclid(n) == 0) {
                count += search(k + 1, n, colors, checks);
            }
        }
        count
    }
    Ok(search(0, n as i64, &mut vec![0; d.arcs], &checks))
}

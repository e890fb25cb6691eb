//! Dimensions of `H^q(P^n, O(m))` from the Laurent-monomial decomposition
//! of the Čech complex of the standard cover.

use super::linalg::rank;
use super::SubsetComplex;

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of Laurent monomials of total degree `m` in `n + 1` variables
/// whose negative exponents are exactly those in `mask`, or `None` if
/// infinite.
fn monomial_count(n: usize, mask: u64, m: i64) -> Option<u64> {
    let vars = n as u64 + 1;
    let neg = mask.count_ones() as u64;
    match neg {
        0 if m < 0 => Some(0),
        0 => Some(binomial(m as u64 + n as u64, n as u64)),
        // exponents -1-b_k with b_k >= 0 summing to m
        k if k == vars => {
            let rest = -m - vars as i64;
            if rest < 0 {
                Some(0)
            } else {
                Some(binomial(rest as u64 + n as u64, n as u64))
            }
        }
        _ => None,
    }
}

/// `q`-th cohomology of the alternating complex on tuples containing `mask`.
fn subset_cohomology(n: usize, mask: u64, q: usize) -> usize {
    let charts = n + 1;
    if q >= charts {
        return 0;
    }
    let out = SubsetComplex::new(charts, mask, q);
    let kernel = out.cols.len() - rank(&out.matrix);
    let image = if q == 0 { 0 } else { rank(&SubsetComplex::new(charts, mask, q - 1).matrix) };
    kernel - image
}

/// `dim H^q(P^n, O(m))`.
pub fn cohomology_dim(n: usize, m: i64, q: usize) -> u64 {
    assert!(n < 63);
    let mut total = 0;
    for mask in 0u64..(1 << (n + 1)) {
        let h = subset_cohomology(n, mask, q) as u64;
        if h == 0 {
            continue;
        }
        let count = monomial_count(n, mask, m).expect("cone complexes are acyclic");
        total += h * count;
    }
    total
}

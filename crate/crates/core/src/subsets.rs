//! Vertex subsets as 64-bit masks and their colexicographic enumeration.
//!
//! Vertex `v` (1-based) is bit `v - 1`. Colex order on k-subsets coincides with
//! increasing numeric order of the masks, so Gosper's successor enumerates it.

use crate::error::{invalid, Result};

/// Largest supported vertex/qubit count for mask-based routines.
pub const MAX_VERTICES: usize = 64;

pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over all k-subsets of `[n]` in colex order.
#[derive(Debug, Clone)]
pub struct Colex {
    next: Option<u64>,
    limit: u64,
}

impl Iterator for Colex {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = gosper_next(cur).filter(|&m| m & !self.limit == 0);
        Some(cur)
    }
}

fn gosper_next(x: u64) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// All k-subsets of `[n]` in colex order. Empty when `k > n`.
pub fn colex(n: usize, k: usize) -> Colex {
    assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices supported");
    let limit = full_mask(n);
    let first = if k > n { None } else { Some(full_mask(k)) };
    Colex { next: first, limit }
}

/// Collects the colex enumeration; handy for parallel iteration.
pub fn colex_vec(n: usize, k: usize) -> Vec<u64> {
    colex(n, k).collect()
}

/// Mask → ascending list of 1-based vertices.
pub fn to_vertices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

/// Validates a list of 1-based vertices (distinct, in `1..=n`) and packs it.
/// Order does not matter.
pub fn from_vertices(vertices: &[usize], n: usize) -> Result<u64> {
    if n > MAX_VERTICES {
        return Err(invalid(format!("at most {MAX_VERTICES} vertices supported")));
    }
    let mut mask = 0u64;
    for &v in vertices {
        if v == 0 || v > n {
            return Err(invalid(format!("vertex {v} out of range 1..={n}")));
        }
        let bit = 1u64 << (v - 1);
        if mask & bit != 0 {
            return Err(invalid(format!("vertex {v} repeated in subset")));
        }
        mask |= bit;
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;

    #[test]
    fn counts_match_binomials() {
        for n in 0..=12 {
            for k in 0..=n + 1 {
                let expected = if k > n { 0 } else { binomial(n as u64, k as u64) };
                assert_eq!(colex(n, k).count() as u64, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn order_is_colex() {
        let got: Vec<Vec<usize>> = colex(4, 2).map(to_vertices).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 4],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        let masks = colex_vec(9, 4);
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn k_zero_yields_empty_set_once() {
        assert_eq!(colex_vec(5, 0), vec![0]);
    }

    #[test]
    fn full_width() {
        assert_eq!(colex(64, 64).count(), 1);
        assert_eq!(colex(64, 63).count(), 64);
        assert_eq!(colex(64, 1).last(), Some(1u64 << 63));
    }

    #[test]
    fn vertex_round_trip() {
        let m = from_vertices(&[5, 1, 3], 6).unwrap();
        assert_eq!(to_vertices(m), vec![1, 3, 5]);
        assert!(from_vertices(&[0], 6).is_err());
        assert!(from_vertices(&[7], 6).is_err());
        assert!(from_vertices(&[2, 2], 6).is_err());
    }
}

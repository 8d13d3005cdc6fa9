//! Linear algebra over F2 on packed words.
//!
//! A word of length `n <= 64` is a `u64` whose bit `i` is coordinate `i`.
//! Lexicographic order compares coordinate 0 first, so the echelon form used
//! throughout the crate puts each pivot on the *lowest* set bit of its row.
//! With that convention, reducing a word against a reduced echelon basis
//! yields the lexicographic minimum of its coset.

use std::cmp::Ordering;

#[inline]
pub fn weight(x: u64) -> u32 {
    x.count_ones()
}

#[inline]
pub fn dot(x: u64, y: u64) -> u32 {
    (x & y).count_ones() & 1
}

#[inline]
pub fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Lexicographic comparison of two words, coordinate 0 most significant.
pub fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let first = (a ^ b).trailing_zeros();
    if (a >> first) & 1 == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Reduced row echelon form. Rows are sorted by pivot (lowest set bit) and
/// every pivot column is clear in all other rows. Zero rows are dropped.
pub fn rref(rows: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::with_capacity(rows.len());
    for &r in rows {
        let x = reduce(r, &basis);
        if x == 0 {
            continue;
        }
        let p = x.trailing_zeros();
        for b in basis.iter_mut() {
            if (*b >> p) & 1 == 1 {
                *b ^= x;
            }
        }
        basis.push(x);
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    basis
}

/// Clears every pivot bit of `x` using an `rref` basis.
#[inline]
pub fn reduce(mut x: u64, basis: &[u64]) -> u64 {
    for &b in basis {
        if (x >> b.trailing_zeros()) & 1 == 1 {
            x ^= b;
        }
    }
    x
}

#[inline]
pub fn in_span(x: u64, basis: &[u64]) -> bool {
    reduce(x, basis) == 0
}

pub fn rank(rows: &[u64]) -> usize {
    rref(rows).len()
}

/// Basis of `{x in F2^n : <x, r> = 0 for every row r}`.
pub fn nullspace(rows: &[u64], n: usize) -> Vec<u64> {
    let basis = rref(rows);
    let pivots: u64 = basis.iter().fold(0, |m, b| m | (1u64 << b.trailing_zeros()));
    let mut out = Vec::with_capacity(n - basis.len());
    for f in 0..n {
        if (pivots >> f) & 1 == 1 {
            continue;
        }
        // free coordinate f set to 1, pivots solved from each row
        let mut x = 1u64 << f;
        for &b in &basis {
            if (b >> f) & 1 == 1 {
                x |= 1u64 << b.trailing_zeros();
            }
        }
        out.push(x);
    }
    rref(&out)
}

/// Visits every element of the span (including 0) in Gray-code order.
pub fn for_each_in_span(basis: &[u64], mut f: impl FnMut(u64)) {
    let k = basis.len();
    assert!(k < 40, "span of dimension {k} is too large to enumerate");
    let mut x = 0u64;
    f(x);
    for i in 1u64..(1u64 << k) {
        x ^= basis[i.trailing_zeros() as usize];
        f(x);
    }
}

pub fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << basis.len());
    for_each_in_span(basis, |x| out.push(x));
    out
}

/// Rows of `sup` (reduced) that extend an `rref` basis of `sub` to a basis of
/// `sub + sup`; these represent a basis of the quotient `sup / sub`.
pub fn complement(sub: &[u64], sup: &[u64]) -> Vec<u64> {
    let mut acc = sub.to_vec();
    let mut out = Vec::new();
    for &s in &rref(sup) {
        let acc_r = rref(&acc);
        let x = reduce(s, &acc_r);
        if x != 0 {
            out.push(x);
            acc.push(x);
        }
    }
    out
}

/// Calls `f` with the `rref` basis of every subspace of `F2^d`, grouped by
/// dimension in increasing order. Deterministic.
pub fn for_each_subspace(d: usize, mut f: impl FnMut(&[u64])) {
    for r in 0..=d {
        let mut rows = Vec::with_capacity(r);
        pivots_rec(d, r, 0, &mut Vec::new(), &mut rows, &mut f);
    }
}

fn pivots_rec(d: usize, r: usize, start: usize, pivots: &mut Vec<usize>, rows: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if pivots.len() == r {
        fill_rec(d, pivots, 0, rows, f);
        return;
    }
    let need = r - pivots.len();
    for p in start..=(d - need) {
        pivots.push(p);
        pivots_rec(d, r, p + 1, pivots, rows, f);
        pivots.pop();
    }
}

fn fill_rec(d: usize, pivots: &[usize], i: usize, rows: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if i == pivots.len() {
        f(rows);
        return;
    }
    let p = pivots[i];
    let pivot_mask: u64 = pivots.iter().fold(0, |m, &q| m | (1u64 << q));
    let free: Vec<usize> = (p + 1..d).filter(|c| (pivot_mask >> c) & 1 == 0).collect();
    for bits in 0u64..(1u64 << free.len()) {
        let mut row = 1u64 << p;
        for (j, &c) in free.iter().enumerate() {
            if (bits >> j) & 1 == 1 {
                row |= 1u64 << c;
            }
        }
        rows.push(row);
        fill_rec(d, pivots, i + 1, rows, f);
        rows.pop();
    }
}

/// Applies a coordinate permutation: coordinate `i` of `x` moves to `perm[i]`.
#[inline]
pub fn permute(x: u64, perm: &[usize]) -> u64 {
    let mut y = 0u64;
    let mut v = x;
    while v != 0 {
        let i = v.trailing_zeros() as usize;
        y |= 1u64 << perm[i];
        v &= v - 1;
    }
    y
}

pub fn to_bitstring(x: u64, n: usize) -> String {
    (0..n).map(|i| if (x >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn from_bitstring(s: &str) -> Option<u64> {
    let mut x = 0u64;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => x |= 1u64 << i,
            _ => return None,
        }
        if i >= 64 {
            return None;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexmin_brute(x: u64, basis: &[u64]) -> u64 {
        let mut best = x;
        for_each_in_span(basis, |c| {
            if lex_cmp(x ^ c, best) == Ordering::Less {
                best = x ^ c;
            }
        });
        best
    }

    #[test]
    fn reduction_is_coset_lexmin() {
        let rows = [0b1011_0110u64, 0b0110_1100, 0b1111_0000, 0b0000_1111];
        let b = rref(&rows);
        for x in 0u64..256 {
            assert_eq!(reduce(x, &b), lexmin_brute(x, &b));
        }
    }

    #[test]
    fn nullspace_is_orthogonal_and_full() {
        let rows = [0b1111_0000u64, 0b1100_1100, 0b1010_1010, 0b1111_1111];
        let ns = nullspace(&rows, 8);
        assert_eq!(ns.len() + rank(&rows), 8);
        for &v in &ns {
            for &r in &rows {
                assert_eq!(dot(v, r), 0);
            }
        }
    }

    #[test]
    fn subspace_count_matches_gaussian_binomials() {
        let mut count = [0usize; 5];
        for_each_subspace(4, |b| count[b.len()] += 1);
        assert_eq!(count, [1, 15, 35, 15, 1]);
    }

    #[test]
    fn lex_order_reads_coordinate_zero_first() {
        // "10" > "01"
        assert_eq!(lex_cmp(0b01, 0b10), Ordering::Greater);
        assert_eq!(to_bitstring(0b0110, 4), "0110");
        assert_eq!(from_bitstring("0110"), Some(0b0110));
    }
}

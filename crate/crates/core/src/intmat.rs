//! Exact integer matrix routines: Hermite and Smith normal forms,
//! determinants, rational inverses and integral LLL reduction.
//!
//! Matrices are `Vec<Vec<i64>>` in row-major order. Intermediate arithmetic is
//! done in `i128` (or `BigInt` where growth is unbounded) and every narrowing
//! step is checked.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Mat = Vec<Vec<i64>>;

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer matrix entry overflowed i64")
}

fn widen(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn narrow_mat(m: Vec<Vec<i128>>) -> Mat {
    m.into_iter().map(|r| r.into_iter().map(narrow).collect()).collect()
}

fn axpy(dst: &mut [i128], q: i128, src: &[i128]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.checked_sub(q.checked_mul(*s).expect("overflow")).expect("overflow");
    }
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(m: &[Vec<i64>]) -> Mat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter().map(|r| (0..cols).map(|j| narrow((0..inner).map(|k| r[k] as i128 * b[k][j] as i128).sum())).collect()).collect()
}

pub fn vec_mat(v: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    mul(&[v.to_vec()], m).remove(0)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`, processing
/// columns in `order`. Pivots are positive, entries above a pivot lie in
/// `[0, pivot)`, zero rows are dropped.
pub fn hnf_in_order(rows: &[Vec<i64>], order: &[usize]) -> Mat {
    let mut a = widen(rows);
    let mut r = 0;
    for &col in order {
        if r == a.len() {
            break;
        }
        loop {
            let piv = (r..a.len()).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col].abs());
            let Some(p) = piv else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][col] != 0 {
                    let q = Integer::div_floor(&a[i][col], &a[r][col]);
                    let src = a[r].clone();
                    axpy(&mut a[i], q, &src);
                    if a[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r == a.len() || a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        let src = a[r].clone();
        for i in 0..r {
            let q = Integer::div_floor(&a[i][col], &src[col]);
            if q != 0 {
                axpy(&mut a[i], q, &src);
            }
        }
        r += 1;
    }
    a.truncate(r);
    narrow_mat(a)
}

pub fn hnf(rows: &[Vec<i64>]) -> Mat {
    let n = rows.first().map_or(0, |r| r.len());
    hnf_in_order(rows, &(0..n).collect::<Vec<_>>())
}

/// Column index of the first nonzero entry of each row.
fn pivot_cols(h: &[Vec<i64>]) -> Vec<usize> {
    h.iter().map(|r| r.iter().position(|&x| x != 0).expect("zero row in HNF")).collect()
}

/// Reduces `v` modulo the lattice with HNF basis `h` (from [`hnf`]), giving a
/// canonical coset representative.
pub fn hnf_reduce(v: &[i64], h: &[Vec<i64>]) -> Vec<i64> {
    let mut x: Vec<i128> = v.iter().map(|&a| a as i128).collect();
    for (row, col) in h.iter().zip(pivot_cols(h)) {
        let p = row[col] as i128;
        let q = Integer::div_floor(&x[col], &p);
        if q != 0 {
            for (xi, &ri) in x.iter_mut().zip(row) {
                *xi -= q * ri as i128;
            }
        }
    }
    x.into_iter().map(narrow).collect()
}

/// Integer coefficients `c` with `c * h = v` for an HNF basis `h`, if any.
pub fn hnf_solve(v: &[i64], h: &[Vec<i64>]) -> Option<Vec<i64>> {
    let mut x: Vec<i128> = v.iter().map(|&a| a as i128).collect();
    let mut c = Vec::with_capacity(h.len());
    for (row, col) in h.iter().zip(pivot_cols(h)) {
        let p = row[col] as i128;
        if x[col] % p != 0 {
            return None;
        }
        let q = x[col] / p;
        for (xi, &ri) in x.iter_mut().zip(row) {
            *xi -= q * ri as i128;
        }
        c.push(narrow(q));
    }
    x.iter().all(|&r| r == 0).then_some(c)
}

/// Determinant by fraction-free elimination.
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    &a[n - 1][n - 1] * sign
}

pub type RatMat = Vec<Vec<BigRational>>;

pub fn to_rat(m: &[Vec<i64>]) -> RatMat {
    m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
}

/// Exact inverse over the rationals, or `None` for a singular matrix.
pub fn inverse(m: &[Vec<i64>]) -> Option<RatMat> {
    let n = m.len();
    let mut a = to_rat(m);
    let mut inv = to_rat(&identity(n));
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let pv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &pv;
            inv[c][j] = &inv[c][j] / &pv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[i][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

pub fn rat_vec_mat(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| v.iter().zip(m).fold(BigRational::zero(), |acc, (x, r)| acc + x * &r[j])).collect()
}

/// Converts a rational matrix to integers if every entry is integral.
pub fn rat_to_int(m: &[Vec<BigRational>]) -> Option<Mat> {
    m.iter().map(|r| r.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect()).collect()
}

/// Smith normal form with transforms: returns `(u, d, v)` where `u * m * v`
/// is diagonal with entries `d`, each dividing the next, and `u`, `v` are
/// unimodular.
pub fn snf(m: &[Vec<i64>]) -> (Mat, Vec<i64>, Mat) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = widen(m);
    let mut u = widen(&identity(rows));
    let mut v = widen(&identity(cols));
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        u.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        for r in v.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = Integer::div_floor(&a[i][t], &a[t][t]);
                    let (s, su) = (a[t].clone(), u[t].clone());
                    axpy(&mut a[i], q, &s);
                    axpy(&mut u[i], q, &su);
                    if a[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = Integer::div_floor(&a[t][j], &a[t][t]);
                    for r in 0..rows {
                        a[r][j] -= q * a[r][t];
                    }
                    for r in 0..cols {
                        v[r][j] -= q * v[r][t];
                    }
                    if a[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                // divisibility: fold a non-multiple back into row t
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % a[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let (s, su) = (a[i].clone(), u[i].clone());
                        axpy(&mut a[t], -1, &s);
                        axpy(&mut u[t], -1, &su);
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let best_r = (t..rows).filter(|&i| a[i][t] != 0).min_by_key(|&i| a[i][t].abs());
            if let Some(i) = best_r {
                if a[i][t].abs() < a[t][t].abs() {
                    a.swap(t, i);
                    u.swap(t, i);
                }
            }
            let best_c = (t..cols).filter(|&j| a[t][j] != 0).min_by_key(|&j| a[t][j].abs());
            if let Some(j) = best_c {
                if a[t][j].abs() < a[t][t].abs() {
                    for r in a.iter_mut() {
                        r.swap(t, j);
                    }
                    for r in v.iter_mut() {
                        r.swap(t, j);
                    }
                }
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        diag.push(narrow(a[t][t]));
    }
    (narrow_mat(u), diag, narrow_mat(v))
}

/// Integral LLL (delta = 3/4) driven by a positive definite Gram matrix.
/// Returns the unimodular transform `h`; the reduced basis is `h * basis`.
pub fn lll_gram(gram: &[Vec<i64>]) -> Mat {
    let n = gram.len();
    let g: Vec<Vec<BigInt>> = gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut h: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect()).collect();
    if n <= 1 {
        return narrow_big(h);
    }
    let ip = |h: &[Vec<BigInt>], i: usize, j: usize| -> BigInt {
        let mut s = BigInt::zero();
        for a in 0..n {
            if h[i][a].is_zero() {
                continue;
            }
            for b in 0..n {
                if !h[j][b].is_zero() {
                    s += &h[i][a] * &g[a][b] * &h[j][b];
                }
            }
        }
        s
    };
    // d[0] = 1, d[i+1] = d_i of the 1-indexed algorithm
    let mut d = vec![BigInt::one(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[1] = ip(&h, 0, 0);
    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = ip(&h, k, j);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "LLL input is not positive definite");
                    d[k + 1] = u;
                }
            }
        }
        redi(&mut h, &mut lam, &d, k, k - 1);
        let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
        let rhs = BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            // swap k and k-1
            h.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = b;
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                redi(&mut h, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    narrow_big(h)
}

fn redi(h: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let two_l = BigInt::from(2) * &lam[k][l];
    if two_l.abs() <= d[l + 1] {
        return;
    }
    // q = round(lam / d_l)
    let q = (BigInt::from(2) * &lam[k][l] + &d[l + 1]).div_floor(&(BigInt::from(2) * &d[l + 1]));
    let hl = h[l].clone();
    for (x, y) in h[k].iter_mut().zip(&hl) {
        *x -= &q * y;
    }
    lam[k][l] -= &q * &d[l + 1];
    for i in 0..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn narrow_big(h: Vec<Vec<BigInt>>) -> Mat {
    h.into_iter().map(|r| r.into_iter().map(|x| x.to_i64().expect("LLL transform overflowed i64")).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_is_canonical_and_idempotent() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16], vec![1, 1, 1]];
        let h = hnf(&a);
        assert_eq!(hnf(&h), h);
        let mut b = a.clone();
        b.reverse();
        b[0] = b[0].iter().map(|x| *x).collect();
        assert_eq!(hnf(&b), h);
        for r in &a {
            assert!(hnf_solve(r, &h).is_some());
        }
    }

    #[test]
    fn snf_transforms() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let (u, d, v) = snf(&m);
        let prod = mul(&mul(&u, &m), &v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { d[i] } else { 0 });
            }
        }
        assert_eq!(d, vec![2, 6, 12]);
        assert_eq!(det(&u).abs(), BigInt::one());
        assert_eq!(det(&v).abs(), BigInt::one());
    }

    #[test]
    fn inverse_and_det() {
        let m = vec![vec![2, 1], vec![1, 2]];
        assert_eq!(det(&m), BigInt::from(3));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0][0], BigRational::new(2.into(), 3.into()));
        assert!(inverse(&[vec![1, 2], vec![2, 4]]).is_none());
    }

    #[test]
    fn lll_shortens_a_skewed_basis() {
        // basis (1,0), (100,1) of Z^2
        let g = vec![vec![1, 100], vec![100, 10001]];
        let h = lll_gram(&g);
        assert_eq!(det(&h).abs(), BigInt::one());
        let b = mul(&h, &[vec![1, 0], vec![100, 1]]);
        assert!(b.iter().all(|r| r.iter().map(|x| x.abs()).max().unwrap() <= 1));
    }
}

//! Bounded-norm enumeration of lattice cosets.
//!
//! The search runs on an LLL-reduced basis. Floating point only steers the
//! recursion (with slack); every vector that reaches a leaf is re-checked with
//! exact integer arithmetic, so counts are exact as long as the slack covers
//! rounding, which it does by many orders of magnitude at these ranks.

use std::collections::HashMap;

use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

use super::{gram64_of, Lattice, GRID2};
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};
use crate::qseries::{QSeries, GRID as QGRID};

/// Largest number of vectors [`short_vectors`] will list.
pub const MAX_LIST: f64 = 4.0e6;
/// Largest estimated number of leaves a single counting pass may visit.
pub const MAX_COUNT: f64 = 6.0e7;
/// Cosets are counted directly below this estimate, otherwise split.
const SPLIT_THRESHOLD: f64 = 4.0e6;

/// Vectors of `lambda + L` grouped by norm, in increasing norm order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVectors {
    pub norm: Ratio<i64>,
    pub vectors: Vec<Vec<i64>>,
}

struct Kernel {
    /// Reduced basis (grid units).
    red: Mat,
    g64: Mat,
    q: Vec<Vec<f64>>,
}

impl Kernel {
    fn new(ambient: &[i64], basis: &[Vec<i64>]) -> Kernel {
        let g = gram64_of(ambient, basis);
        let h = intmat::lll_gram(&g);
        let red = intmat::mul(&h, basis);
        let g64 = gram64_of(ambient, &red);
        let n = red.len();
        // Q(y) = sum_i q_ii (y_i + sum_{j>i} q_ij y_j)^2, Gram scaled by 1/64
        let mut q: Vec<Vec<f64>> = g64.iter().map(|r| r.iter().map(|&x| x as f64 / GRID2 as f64).collect()).collect();
        for i in 0..n {
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        Kernel { red, g64, q }
    }

    fn rank(&self) -> usize {
        self.red.len()
    }

    /// Shift of `lambda` in reduced-basis coordinates, as `(p, d)` with `s = p/d`.
    fn shift(&self, lambda: Option<&[i64]>) -> Result<(Vec<i64>, i64)> {
        let n = self.rank();
        let Some(lam) = lambda else {
            return Ok((vec![0; n], 1));
        };
        let inv = intmat::inverse(&self.red).ok_or_else(|| Error::Defect("singular basis".into()))?;
        let lam: Vec<BigRational> = lam.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let s = intmat::rat_vec_mat(&lam, &inv);
        let d = s.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let p: Option<Vec<i64>> = s.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer().to_i64()).collect();
        Ok((p.ok_or(Error::GridOverflow)?, d.to_i64().ok_or(Error::GridOverflow)?))
    }

    /// Rough count of vectors of norm at most `bound`.
    fn estimate(&self, bound: f64) -> f64 {
        let n = self.rank() as f64;
        let det: f64 = (0..self.rank()).map(|i| self.q[i][i]).product();
        let r = bound.sqrt() + 0.5 * (0..self.rank()).map(|i| self.q[i][i]).fold(0.0f64, f64::max).sqrt();
        let ball = std::f64::consts::PI.powf(n / 2.0) * r.powf(n) / gamma_half(self.rank() + 2);
        ball / det.sqrt() + 1.0
    }

    /// Calls `f(x, 64*norm)` for every `x` in `Z^n` with `||x + s|| <= max64/64`,
    /// where `x` are reduced-basis coordinates.
    fn run(&self, shift: &(Vec<i64>, i64), max64: i64, f: &mut dyn FnMut(&[i64], i64)) {
        let n = self.rank();
        if n == 0 {
            f(&[], 0);
            return;
        }
        let (p, d) = shift;
        let s: Vec<f64> = p.iter().map(|&v| v as f64 / *d as f64).collect();
        let bound = max64 as f64 / GRID2 as f64;
        let mut st = Walk { k: self, s, p: p.clone(), d: *d, max64, x: vec![0i64; n], y: vec![0f64; n], f };
        st.rec(n - 1, bound * (1.0 + 1e-9) + 1e-9);
    }
}

fn gamma_half(k: usize) -> f64 {
    // Gamma(k / 2)
    let mut g = if k.is_multiple_of(2) { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut t = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    while t + 1e-9 < k as f64 / 2.0 {
        g *= t;
        t += 1.0;
    }
    g
}

struct Walk<'a> {
    k: &'a Kernel,
    s: Vec<f64>,
    p: Vec<i64>,
    d: i64,
    max64: i64,
    x: Vec<i64>,
    y: Vec<f64>,
    f: &'a mut dyn FnMut(&[i64], i64),
}

impl Walk<'_> {
    fn rec(&mut self, i: usize, rem: f64) {
        let q = &self.k.q;
        let n = self.x.len();
        let c: f64 = -(i + 1..n).map(|j| q[i][j] * self.y[j]).sum::<f64>();
        let r = (rem.max(0.0) / q[i][i]).sqrt() + 1e-7;
        let lo = (c - r - self.s[i]).ceil() as i64;
        let hi = (c + r - self.s[i]).floor() as i64;
        for xi in lo..=hi {
            let yi = xi as f64 + self.s[i];
            let t = yi - c;
            let left = rem - q[i][i] * t * t;
            if left < -1e-6 {
                continue;
            }
            self.x[i] = xi;
            self.y[i] = yi;
            if i == 0 {
                self.leaf();
            } else {
                self.rec(i - 1, left);
            }
        }
    }

    fn leaf(&mut self) {
        let n = self.x.len();
        let mut z = vec![0i128; n];
        for i in 0..n {
            z[i] = self.d as i128 * self.x[i] as i128 + self.p[i] as i128;
        }
        let g = &self.k.g64;
        let mut v: i128 = 0;
        for i in 0..n {
            let mut row: i128 = 0;
            for j in 0..n {
                row += g[i][j] as i128 * z[j];
            }
            v += z[i] * row;
        }
        let dd = self.d as i128 * self.d as i128;
        debug_assert!(v % dd == 0);
        let n64 = (v / dd) as i64;
        if n64 <= self.max64 {
            (self.f)(&self.x, n64);
        }
    }
}

/// Vectors of `lambda + L` (or of `L`) with norm at most `max_norm`, grouped
/// by norm. Vectors are grid coordinates, sorted within each group.
pub fn short_vectors(l: &Lattice, lambda: Option<&[i64]>, max_norm: Ratio<i64>) -> Result<Vec<ShortVectors>> {
    let max64 = (max_norm * GRID2).floor().to_integer();
    let k = Kernel::new(&l.ambient, &l.basis);
    let est = k.estimate(max64 as f64 / GRID2 as f64);
    if est > MAX_LIST {
        return Err(Error::TooLarge { what: "short vector list", limit: MAX_LIST as usize });
    }
    let shift = k.shift(lambda)?;
    // lambda = s * red, so the enumerated vector is x * red + lambda
    let base: Vec<i64> = lambda.map(|v| v.to_vec()).unwrap_or_else(|| vec![0; l.rank()]);
    let mut groups: HashMap<i64, Vec<Vec<i64>>> = HashMap::new();
    k.run(&shift, max64, &mut |x, n64| {
        let mut v = intmat::vec_mat(x, &k.red);
        for (a, b) in v.iter_mut().zip(&base) {
            *a += b;
        }
        groups.entry(n64).or_default().push(v);
    });
    let mut keys: Vec<i64> = groups.keys().copied().collect();
    keys.sort();
    Ok(keys
        .into_iter()
        .map(|n64| {
            let mut vectors = groups.remove(&n64).unwrap();
            vectors.sort();
            ShortVectors { norm: Ratio::new(n64, GRID2), vectors }
        })
        .collect())
}

/// `counts[m] = |{v in lambda + L : 64 (v, v) = m}|` for `m <= max64`.
pub fn count_by_norm(l: &Lattice, lambda: Option<&[i64]>, max64: i64) -> Result<Vec<u64>> {
    counts(&l.ambient, &l.basis, lambda, max64)
}

fn counts(ambient: &[i64], basis: &[Vec<i64>], lambda: Option<&[i64]>, max64: i64) -> Result<Vec<u64>> {
    let k = Kernel::new(ambient, basis);
    let est = k.estimate(max64 as f64 / GRID2 as f64);
    if est > SPLIT_THRESHOLD {
        if let Some(c) = split_counts(ambient, basis, lambda, max64)? {
            return Ok(c);
        }
    }
    if est > MAX_COUNT {
        return Err(Error::TooLarge { what: "enumeration size", limit: MAX_COUNT as usize });
    }
    let shift = k.shift(lambda)?;
    let mut out = vec![0u64; max64 as usize + 1];
    k.run(&shift, max64, &mut |_, n64| out[n64 as usize] += 1);
    Ok(out)
}

/// Splits `R^n` into the first and second half of the coordinates and sums
/// products of coset counts over the glue group `L / (L_1 + L_2)`.
fn split_counts(ambient: &[i64], basis: &[Vec<i64>], lambda: Option<&[i64]>, max64: i64) -> Result<Option<Vec<u64>>> {
    let n = ambient.len();
    if n < 4 {
        return Ok(None);
    }
    let h = n / 2;
    let part = |lo: usize, hi: usize| -> Option<Mat> {
        // columns outside [lo, hi) first, so rows with pivots inside are exactly L cap V
        let mut order: Vec<usize> = (0..n).filter(|c| *c < lo || *c >= hi).collect();
        order.extend(lo..hi);
        let hnf = intmat::hnf_in_order(basis, &order);
        let rows: Mat = hnf
            .into_iter()
            .filter(|r| r.iter().enumerate().all(|(c, &x)| (lo..hi).contains(&c) || x == 0))
            .map(|r| r[lo..hi].to_vec())
            .collect();
        (rows.len() == hi - lo).then(|| intmat::hnf(&rows))
    };
    let (Some(b1), Some(b2)) = (part(0, h), part(h, n)) else {
        return Ok(None);
    };
    let mut sum_rows: Mat = b1.iter().map(|r| r.iter().copied().chain(std::iter::repeat_n(0, n - h)).collect()).collect();
    sum_rows.extend(b2.iter().map(|r| std::iter::repeat_n(0, h).chain(r.iter().copied()).collect::<Vec<i64>>()));
    let sub = intmat::hnf(&sum_rows);
    // glue classes by breadth-first closure
    let zero = vec![0i64; n];
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut queue = vec![intmat::hnf_reduce(&zero, &sub)];
    seen.insert(queue[0].clone(), ());
    let mut idx = 0;
    while idx < queue.len() {
        let g = queue[idx].clone();
        idx += 1;
        for b in basis {
            let w: Vec<i64> = g.iter().zip(b).map(|(x, y)| x + y).collect();
            let r = intmat::hnf_reduce(&w, &sub);
            if seen.insert(r.clone(), ()).is_none() {
                queue.push(r);
            }
            if queue.len() > 1 << 16 {
                return Ok(None);
            }
        }
    }
    let (a1, a2) = (&ambient[..h], &ambient[h..]);
    let mut memo1: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    let mut memo2: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    let mut total = vec![0u64; max64 as usize + 1];
    let lam = lambda.map(|v| v.to_vec()).unwrap_or_else(|| zero.clone());
    for g in &queue {
        let v: Vec<i64> = g.iter().zip(&lam).map(|(x, y)| x + y).collect();
        let v1 = intmat::hnf_reduce(&v[..h], &b1);
        let v2 = intmat::hnf_reduce(&v[h..], &b2);
        if !memo1.contains_key(&v1) {
            let c = counts(a1, &b1, Some(&v1), max64)?;
            memo1.insert(v1.clone(), c);
        }
        if !memo2.contains_key(&v2) {
            let c = counts(a2, &b2, Some(&v2), max64)?;
            memo2.insert(v2.clone(), c);
        }
        let (c1, c2) = (&memo1[&v1], &memo2[&v2]);
        for (i, &x) in c1.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in c2.iter().enumerate().take(max64 as usize + 1 - i) {
                total[i + j] += x * y;
            }
        }
    }
    Ok(Some(total))
}

/// `Theta_{lambda+L}` with every term through `q^prec`.
pub fn theta_series(l: &Lattice, lambda: Option<&[i64]>, prec: i64) -> Result<QSeries> {
    let max64 = 2 * prec * GRID2;
    let c = count_by_norm(l, lambda, max64)?;
    let mut terms = Vec::new();
    for (m, &cnt) in c.iter().enumerate() {
        if cnt == 0 {
            continue;
        }
        // q^(norm/2) with norm = m/64, on the 1/48 grid
        let (e, r) = (m as i64 * QGRID).div_rem(&(2 * GRID2));
        if r != 0 {
            return Err(Error::OffGrid(m as i64, 2 * GRID2));
        }
        terms.push((e, cnt as i128));
    }
    Ok(QSeries::from_terms(&terms, crate::qseries::through(prec)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bincodes::BinaryCode;
    use crate::lattices::{construction_a_lattice, direct_sum};

    #[test]
    fn e8_counts() {
        let e8 = Lattice::e8();
        let c = count_by_norm(&e8, None, 4 * GRID2).unwrap();
        assert_eq!((c[0], c[128], c[256]), (1, 240, 2160));
        let sv = short_vectors(&e8, None, Ratio::from_integer(2)).unwrap();
        assert_eq!(sv.len(), 2);
        assert_eq!(sv[1].vectors.len(), 240);
        assert!(sv[1].vectors.iter().all(|v| e8.contains(v) && e8.norm(v) == Ratio::from_integer(2)));
    }

    #[test]
    fn split_matches_direct() {
        let d16 = construction_a_lattice(&BinaryCode::d16plus()).unwrap();
        let e88 = direct_sum(&Lattice::e8(), &Lattice::e8());
        for l in [d16, e88] {
            let max64 = 6 * GRID2;
            let k = Kernel::new(&l.ambient, &l.basis);
            let mut direct = vec![0u64; max64 as usize + 1];
            k.run(&(vec![0; 16], 1), max64, &mut |_, m| direct[m as usize] += 1);
            let split = split_counts(&l.ambient, &l.basis, None, max64).unwrap().unwrap();
            assert_eq!(direct, split);
            assert_eq!(direct[128], 480);
        }
    }

    #[test]
    fn coset_counts() {
        let c = BinaryCode::e8();
        let lp = crate::lattices::construction_b_lattice(&c).unwrap();
        let a1 = crate::lattices::unit(8, 0, 8);
        let inside = count_by_norm(&lp, None, 2 * GRID2).unwrap();
        let coset = count_by_norm(&lp, Some(&a1), 2 * GRID2).unwrap();
        assert_eq!(inside[128], 112);
        assert_eq!(coset[128], 112 + 16);
        assert_eq!(coset[0], 0);
    }

    #[test]
    fn e8_theta() {
        let t = theta_series(&Lattice::e8(), None, 3).unwrap();
        assert_eq!(t.terms(), vec![(0, 1), (48, 240), (96, 2160), (144, 6720)]);
    }
}

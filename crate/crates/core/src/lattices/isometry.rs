//! Isometry testing by backtracking over short-vector images.
//!
//! A generating set of `L` is chosen among its shortest vectors. Each
//! generator is then sent, in turn, to a vector of `N` of the same norm and
//! the same inner products with the images chosen so far. A complete
//! assignment defines a linear isometry, which is turned into an integer
//! basis change and re-verified. Before searching, cheap invariants (norm
//! counts, discriminant group, the component sizes of the minimal-vector
//! graph) rule out most non-isometric pairs.

use std::collections::HashMap;

use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde_json::json;
use sha2::{Digest, Sha256};

use super::enumerate::short_vectors;
use super::{discriminant_group, Lattice, GRID2};
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};

/// Norm levels considered when looking for a generating set.
const MAX_GEN_NORM: i64 = 8;

/// `t` with `t * gram(N) * t^T = gram(L)`; row `i` holds the `N`-coordinates
/// of the image of the `i`-th basis vector of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub t: Mat,
}

impl Isometry {
    /// Exact re-check of the Gram identity and unimodularity.
    pub fn verify(&self, l: &Lattice, n: &Lattice) -> bool {
        if self.t.len() != l.rank() || l.rank() != n.rank() {
            return false;
        }
        let lhs = intmat::mul(&intmat::mul(&self.t, &n.gram64()), &intmat::transpose(&self.t));
        lhs == l.gram64() && intmat::det(&self.t).abs().is_one()
    }

    /// Hex SHA-256 of `t * gram(N) * t^T` (scaled by 64), row by row.
    pub fn gram_hash(&self, n: &Lattice) -> String {
        let g = intmat::mul(&intmat::mul(&self.t, &n.gram64()), &intmat::transpose(&self.t));
        let text: Vec<String> = g.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        let digest = Sha256::digest(text.join("\n").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self, n: &Lattice) -> serde_json::Value {
        json!({ "matrix": self.t, "gram_sha256": self.gram_hash(n) })
    }
}

/// Why two lattices were found non-isometric.
fn screen(l: &Lattice, n: &Lattice) -> Result<Option<String>> {
    if l.rank() != n.rank() {
        return Err(Error::RankMismatch(l.rank(), n.rank()));
    }
    if l.det() != n.det() {
        return Ok(Some("determinants differ".into()));
    }
    if l.is_integral() != n.is_integral() || l.is_even() != n.is_even() {
        return Ok(Some("parity differs".into()));
    }
    if l.is_integral() && discriminant_group(l)?.factors != discriminant_group(n)?.factors {
        return Ok(Some("discriminant groups differ".into()));
    }
    Ok(None)
}

/// Graph on the minimal vectors joining non-orthogonal pairs; sorted
/// component sizes.
pub(crate) fn min_graph_components(l: &Lattice, vs: &[Vec<i64>]) -> Vec<usize> {
    let m = vs.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for i in 0..m {
        for j in i + 1..m {
            if l.inner64(&vs[i], &vs[j]) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut sizes = std::collections::HashMap::new();
    for i in 0..m {
        *sizes.entry(find(&mut parent, i)).or_insert(0usize) += 1;
    }
    let mut s: Vec<usize> = sizes.into_values().collect();
    s.sort();
    s
}

/// Short vectors by norm level until they generate the lattice.
fn generating_levels(l: &Lattice) -> Result<Option<(Ratio<i64>, Vec<super::ShortVectors>)>> {
    let mut bound = Ratio::from_integer(0);
    let min = Ratio::new(1, GRID2);
    loop {
        // step the bound to the next norm present
        let probe = short_vectors(l, None, bound + Ratio::from_integer(2))?;
        let next = probe.iter().map(|g| g.norm).find(|&x| x > bound);
        let Some(next) = next else {
            bound += Ratio::from_integer(2);
            if bound > Ratio::from_integer(MAX_GEN_NORM) {
                return Ok(None);
            }
            continue;
        };
        bound = next;
        let levels: Vec<_> = probe.into_iter().filter(|g| g.norm <= bound && g.norm >= min).collect();
        let rows: Vec<Vec<i64>> = levels.iter().flat_map(|g| g.vectors.iter().cloned()).collect();
        if !rows.is_empty() && intmat::hnf(&rows) == *l.basis() {
            return Ok(Some((bound, levels)));
        }
        if bound > Ratio::from_integer(MAX_GEN_NORM) {
            return Ok(None);
        }
    }
}

/// Searches for an isometry from `l` onto `n`.
pub fn lattice_isometric(l: &Lattice, n: &Lattice) -> Result<Option<Isometry>> {
    Ok(isometry_with_reason(l, n)?.0)
}

/// Like [`lattice_isometric`], also reporting the invariant that failed.
pub fn isometry_with_reason(l: &Lattice, n: &Lattice) -> Result<(Option<Isometry>, Option<String>)> {
    if let Some(why) = screen(l, n)? {
        return Ok((None, Some(why)));
    }
    let Some((bound, lv)) = generating_levels(l)? else {
        return Err(Error::Unsupported("no generating set of short vectors".into()));
    };
    let nv = short_vectors(n, None, bound)?;
    let counts = |g: &[super::ShortVectors]| g.iter().map(|x| (x.norm, x.vectors.len())).collect::<Vec<_>>();
    let lc = counts(&lv);
    let nc: Vec<_> = counts(&nv).into_iter().filter(|x| x.0 > Ratio::from_integer(0)).collect();
    if lc != nc {
        return Ok((None, Some("short vector counts differ".into())));
    }
    let lmin = &lv[0].vectors;
    let nmin = &nv.iter().find(|g| g.norm > Ratio::from_integer(0)).expect("nonzero level").vectors;
    if lmin.len() <= 6000 && min_graph_components(l, lmin) != min_graph_components(n, nmin) {
        return Ok((None, Some("minimal-vector graphs differ".into())));
    }

    let gens = choose_generators(l, &lv);
    let profile = |lat: &Lattice, v: &[i64], mins: &[Vec<i64>]| {
        let mut h: Vec<i64> = mins.iter().map(|w| lat.inner64(v, w)).collect();
        h.sort();
        h
    };
    let mut nprof: HashMap<Ratio<i64>, Vec<Vec<i64>>> = HashMap::new();
    let mut pools: Vec<Vec<Vec<i64>>> = Vec::with_capacity(gens.len());
    for g in &gens {
        let norm = l.norm(g);
        let fp = profile(l, g, lmin);
        let level = nv.iter().find(|x| x.norm == norm).map(|x| x.vectors.as_slice()).unwrap_or(&[]);
        let profs = nprof.entry(norm).or_insert_with(|| level.iter().map(|c| profile(n, c, nmin)).collect());
        let pool: Vec<Vec<i64>> = level.iter().zip(profs.iter()).filter(|(_, p)| **p == fp).map(|(c, _)| c.clone()).collect();
        if pool.is_empty() {
            return Ok((None, Some("no candidate image for a generator".into())));
        }
        pools.push(pool);
    }
    let gram: Vec<Vec<i64>> = gens.iter().map(|a| gens.iter().map(|b| l.inner64(a, b)).collect()).collect();
    let mut search = Search { n, gens: &gens, pools: &pools, gram: &gram, img: Vec::new(), l };
    let found = search.dfs();
    let why = found.is_none().then(|| "backtracking search exhausted".to_string());
    Ok((found, why))
}

/// Greedy generating set: walk the short vectors in norm order, keep those
/// that enlarge the span, then order them so each one meets an earlier one.
fn choose_generators(l: &Lattice, levels: &[super::ShortVectors]) -> Vec<Vec<i64>> {
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    let mut span: Mat = Vec::new();
    'outer: for g in levels {
        for v in &g.vectors {
            if !span.is_empty() && intmat::hnf_solve(v, &span).is_some() {
                continue;
            }
            chosen.push(v.clone());
            span = intmat::hnf(&chosen);
            if span == *l.basis() {
                break 'outer;
            }
        }
    }
    // connectivity order
    let mut order: Vec<Vec<i64>> = Vec::with_capacity(chosen.len());
    let mut rest = chosen;
    while !rest.is_empty() {
        let pick = rest.iter().position(|v| order.iter().any(|w| l.inner64(v, w) != 0)).unwrap_or(0);
        order.push(rest.remove(pick));
    }
    order
}

struct Search<'a> {
    l: &'a Lattice,
    n: &'a Lattice,
    gens: &'a [Vec<i64>],
    pools: &'a [Vec<Vec<i64>>],
    gram: &'a [Vec<i64>],
    img: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self) -> Option<Isometry> {
        let i = self.img.len();
        if i == self.gens.len() {
            return self.finish();
        }
        for (ci, c) in self.pools[i].iter().enumerate() {
            let ok = (0..i).all(|j| self.n.inner64(c, &self.pools[j][self.img[j]]) == self.gram[i][j]);
            if !ok {
                continue;
            }
            self.img.push(ci);
            if let Some(t) = self.dfs() {
                return Some(t);
            }
            self.img.pop();
        }
        None
    }

    fn finish(&self) -> Option<Isometry> {
        let rank = self.l.rank();
        // pick rank-many independent generators
        let mut idx: Vec<usize> = Vec::new();
        for k in 0..self.gens.len() {
            let mut trial: Vec<Vec<i64>> = idx.iter().map(|&j| self.gens[j].clone()).collect();
            trial.push(self.gens[k].clone());
            if intmat::hnf(&trial).len() == trial.len() {
                idx.push(k);
            }
            if idx.len() == rank {
                break;
            }
        }
        let m0: Mat = idx.iter().map(|&j| self.l.coords(&self.gens[j]).expect("generator in L")).collect();
        let h0: Option<Mat> = idx.iter().map(|&j| self.n.coords(&self.pools[j][self.img[j]])).collect();
        let inv = intmat::inverse(&m0)?;
        let h0 = intmat::to_rat(&h0?);
        let t: Vec<Vec<BigRational>> = inv.iter().map(|r| intmat::rat_vec_mat(r, &h0)).collect();
        if t.iter().flatten().any(|x| !x.is_integer()) || t.iter().flatten().all(|x| x.is_zero()) {
            return None;
        }
        let iso = Isometry { t: intmat::rat_to_int(&t)? };
        iso.verify(self.l, self.n).then_some(iso)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bincodes::BinaryCode;
    use crate::lattices::{construction_a_lattice, construction_b_lattice, direct_sum, scale_sqrt2};

    #[test]
    fn e8_self_and_relabelled() {
        let e8 = Lattice::e8();
        let iso = lattice_isometric(&e8, &e8).unwrap().unwrap();
        assert!(iso.verify(&e8, &e8));
        let perm = [3, 1, 4, 0, 7, 2, 6, 5];
        let other = construction_a_lattice(&BinaryCode::e8().permute(&perm)).unwrap();
        assert!(lattice_isometric(&e8, &other).unwrap().is_some());
        assert!(lattice_isometric(&e8, &scale_sqrt2(&e8)).unwrap().is_none());
    }

    #[test]
    fn rank16_pairs() {
        let e88 = direct_sum(&Lattice::e8(), &Lattice::e8());
        let d16 = construction_a_lattice(&BinaryCode::d16plus()).unwrap();
        let (w, why) = isometry_with_reason(&e88, &d16).unwrap();
        assert!(w.is_none());
        assert_eq!(why.as_deref(), Some("minimal-vector graphs differ"));
        let a = construction_b_lattice(&BinaryCode::e8_squared()).unwrap();
        let b = construction_b_lattice(&BinaryCode::d16plus()).unwrap();
        let iso = lattice_isometric(&a, &b).unwrap().expect("isometric");
        assert!(iso.verify(&a, &b));
        assert_eq!(iso.gram_hash(&b).len(), 64);
    }
}

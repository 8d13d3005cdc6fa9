//! Overlattices inside the dual: even overlattice enumeration, unimodular
//! embedding, and recognising `L = L^+(C)` from a coset rich in norm-2
//! vectors.

use num_rational::Ratio;

use super::enumerate::{count_by_norm, short_vectors};
use super::isometry::lattice_isometric;
use super::{construction_a_lattice, construction_b_lattice, discriminant_group, scale_sqrt2, Lattice, GRID2};
use crate::bincodes::BinaryCode;
use crate::error::{Error, Result};
use crate::f2;

/// One isometry class of even overlattices.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: Lattice,
    /// Dimension of the subgroup of `L*/L` it corresponds to.
    pub subgroup_dim: usize,
    /// Invariant factors of its own discriminant group.
    pub disc_factors: Vec<i64>,
    /// Number of subgroups giving a lattice in this class.
    pub members: usize,
}

/// Even lattices `M` with `L <= M <= L*`, one per isometry class, ordered by
/// subgroup dimension. Needs `L*/L = Z_2^k` with `k <= 8`.
pub fn even_overlattices(l: &Lattice) -> Result<Vec<Overlattice>> {
    if !l.is_even() {
        return Err(Error::Precondition("lattice is not even".into()));
    }
    let d = discriminant_group(l)?;
    let k = d.two_rank().ok_or_else(|| Error::Precondition("discriminant group is not 2-elementary".into()))?;
    if k > 8 {
        return Err(Error::TooLarge { what: "discriminant 2-rank", limit: 8 });
    }
    let g = &d.generators;
    let b: Vec<Vec<i64>> = g.iter().map(|x| g.iter().map(|y| l.inner64(x, y)).collect()).collect();
    let lift = |mask: u64| -> Vec<i64> {
        let mut v = vec![0i64; l.rank()];
        for (i, gi) in g.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                for (a, c) in v.iter_mut().zip(gi) {
                    *a += c;
                }
            }
        }
        v
    };
    let norm64 = |mask: u64| -> i64 {
        let bits: Vec<usize> = (0..k).filter(|&i| (mask >> i) & 1 == 1).collect();
        bits.iter().map(|&i| bits.iter().map(|&j| b[i][j]).sum::<i64>()).sum()
    };
    let ip64 = |x: u64, y: u64| -> i64 {
        let bx: Vec<usize> = (0..k).filter(|&i| (x >> i) & 1 == 1).collect();
        let by: Vec<usize> = (0..k).filter(|&i| (y >> i) & 1 == 1).collect();
        bx.iter().map(|&i| by.iter().map(|&j| b[i][j]).sum::<i64>()).sum()
    };
    let mut found: Vec<(Lattice, usize)> = Vec::new();
    let mut failure: Option<Error> = None;
    f2::for_each_subspace(k, |rows| {
        if failure.is_some() {
            return;
        }
        let even = rows.iter().all(|&r| norm64(r) % (2 * GRID2) == 0)
            && rows.iter().enumerate().all(|(i, &x)| rows[i + 1..].iter().all(|&y| ip64(x, y) % GRID2 == 0));
        if !even {
            return;
        }
        let lifts: Vec<Vec<i64>> = rows.iter().map(|&r| lift(r)).collect();
        match l.extend(&lifts) {
            Ok(m) => found.push((m, rows.len())),
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut classes: Vec<Overlattice> = Vec::new();
    for (m, dim) in found {
        let factors = discriminant_group(&m)?.factors;
        let mut placed = false;
        for c in classes.iter_mut() {
            if c.subgroup_dim == dim && c.disc_factors == factors && lattice_isometric(&c.lattice, &m)?.is_some() {
                c.members += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(Overlattice { lattice: m, subgroup_dim: dim, disc_factors: factors, members: 1 });
        }
    }
    Ok(classes)
}

/// An even unimodular lattice containing `l`, climbing through even
/// overlattices one dual vector at a time.
pub fn embed_unimodular(l: &Lattice) -> Result<Lattice> {
    if !l.rank().is_multiple_of(8) {
        return Err(Error::Precondition(format!("rank {} is not a multiple of 8", l.rank())));
    }
    if !l.is_even() {
        return Err(Error::Precondition("lattice is not even".into()));
    }
    if !scale_sqrt2(&l.dual()?).is_even() {
        return Err(Error::Precondition("sqrt(2) L* is not even".into()));
    }
    climb(l)?.ok_or_else(|| Error::Defect("no even unimodular overlattice reached".into()))
}

fn climb(m: &Lattice) -> Result<Option<Lattice>> {
    if m.is_unimodular() {
        return Ok(Some(m.clone()));
    }
    let d = discriminant_group(m)?;
    for r in d.elements()? {
        if r.iter().all(|&x| x == 0) {
            continue;
        }
        let v = d.element(m, &r);
        if m.inner64(&v, &v) % (2 * GRID2) != 0 {
            continue;
        }
        if let Some(u) = climb(&m.extend(&[v])?)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Orthogonal frame found in `lambda + L` and the code it reveals.
#[derive(Clone, Debug)]
pub struct FrameWitness {
    pub code: BinaryCode,
    /// Pairwise orthogonal norm-2 vectors of `lambda + L` (grid units).
    pub frame: Vec<Vec<i64>>,
    /// Image of `L` in frame coordinates; equals `L^+(code)`.
    pub plus_image: Lattice,
    /// Image of `L + Z lambda`; equals `L(code)`.
    pub full_image: Lattice,
}

impl FrameWitness {
    /// Re-derives both images from the frame and compares them with the
    /// constructions of `code`.
    pub fn verify(&self, l: &Lattice, lambda: &[i64]) -> bool {
        let n = l.rank();
        if self.frame.len() != n {
            return false;
        }
        for (i, a) in self.frame.iter().enumerate() {
            for (j, b) in self.frame.iter().enumerate() {
                let want = if i == j { 2 * GRID2 } else { 0 };
                if l.inner64(a, b) != want {
                    return false;
                }
            }
        }
        let (Ok(plus), Ok(full)) = (frame_image(l, &self.frame, None), frame_image(l, &self.frame, Some(lambda))) else {
            return false;
        };
        plus == self.plus_image
            && full == self.full_image
            && construction_b_lattice(&self.code).is_ok_and(|x| x == plus)
            && construction_a_lattice(&self.code).is_ok_and(|x| x == full)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DetectError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: |(lambda+L)(2)| = {found} < 2n + |L(2)| = {needed}")]
    HypothesisViolation { found: u64, needed: u64 },
    #[error("defect: {0}")]
    Defect(String),
    #[error(transparent)]
    Lattice(#[from] Error),
}

/// Maps `v` to its frame coordinates `(v, beta_i)` in units of `alpha_i / 2`.
fn frame_image(l: &Lattice, frame: &[Vec<i64>], extra: Option<&[i64]>) -> Result<Lattice> {
    let mut rows: Vec<Vec<i64>> = l.basis().clone();
    if let Some(x) = extra {
        rows.push(x.to_vec());
    }
    let img: Result<Vec<Vec<i64>>> = rows
        .iter()
        .map(|v| {
            frame
                .iter()
                .map(|b| {
                    let ip = l.inner64(v, b);
                    // grid coordinate 4 (v, beta)
                    if ip % 16 != 0 {
                        Err(Error::GridOverflow)
                    } else {
                        Ok(ip / 16)
                    }
                })
                .collect()
        })
        .collect();
    Lattice::from_generators(vec![2; l.rank()], &img?)
}

/// For even `L` and `lambda` in `L* \ L` with `2 lambda` in `L`: if
/// `|(lambda+L)(2)| >= 2n + |L(2)|`, finds `C` with `L = L^+(C)` and
/// `L + Z lambda = L(C)` in the coordinates of an orthogonal frame.
pub fn detect_construction_b(l: &Lattice, lambda: &[i64]) -> std::result::Result<FrameWitness, DetectError> {
    let n = l.rank();
    if !l.is_even() {
        return Err(DetectError::Precondition("lattice is not even".into()));
    }
    if lambda.len() != n || !l.in_dual(lambda) {
        return Err(DetectError::Precondition("lambda is not in the dual lattice".into()));
    }
    if l.contains(lambda) {
        return Err(DetectError::Precondition("lambda lies in L".into()));
    }
    let twice: Vec<i64> = lambda.iter().map(|x| 2 * x).collect();
    if !l.contains(&twice) {
        return Err(DetectError::Precondition("2 lambda is not in L".into()));
    }
    let inner = count_by_norm(l, None, 2 * GRID2)?;
    let coset = count_by_norm(l, Some(lambda), 2 * GRID2)?;
    let (found, needed) = (coset[2 * GRID2 as usize], 2 * n as u64 + inner[2 * GRID2 as usize]);
    if found < needed {
        return Err(DetectError::HypothesisViolation { found, needed });
    }
    let groups = short_vectors(l, Some(lambda), Ratio::from_integer(2))?;
    let mut cands: Vec<Vec<i64>> = groups
        .into_iter()
        .filter(|g| g.norm == Ratio::from_integer(2))
        .flat_map(|g| g.vectors)
        .filter(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect();
    cands.sort();
    let mut frame: Vec<usize> = Vec::new();
    if !frame_dfs(l, &cands, n, 0, &mut frame) {
        return Err(DetectError::Defect("no orthogonal frame in the coset".into()));
    }
    let frame: Vec<Vec<i64>> = frame.into_iter().map(|i| cands[i].clone()).collect();
    let plus_image = frame_image(l, &frame, None)?;
    let full_image = frame_image(l, &frame, Some(lambda))?;
    let rows: Vec<u64> = full_image
        .basis()
        .iter()
        .map(|r| r.iter().enumerate().fold(0u64, |acc, (i, &x)| if (x / 4).rem_euclid(2) == 1 { acc | (1 << i) } else { acc }))
        .collect();
    let code = BinaryCode::new(n, &rows);
    let w = FrameWitness { code, frame, plus_image, full_image };
    if !w.code.is_doubly_even() || !w.verify(l, lambda) {
        return Err(DetectError::Defect("frame images do not match the constructions".into()));
    }
    Ok(w)
}

fn frame_dfs(l: &Lattice, cands: &[Vec<i64>], n: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == n {
        return true;
    }
    let open: Vec<usize> =
        (start..cands.len()).filter(|&i| chosen.iter().all(|&j| l.inner64(&cands[i], &cands[j]) == 0)).collect();
    if open.len() < n - chosen.len() {
        return false;
    }
    for &i in &open {
        chosen.push(i);
        if frame_dfs(l, cands, n, i + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bincodes::code_equivalent;
    use crate::lattices::{direct_sum, unit};

    #[test]
    fn five_overlattices_of_scaled_e8() {
        let s = scale_sqrt2(&Lattice::e8());
        let classes = even_overlattices(&s).unwrap();
        assert_eq!(classes.len(), 5);
        let mut discs: Vec<Vec<i64>> = classes.iter().map(|c| c.disc_factors.clone()).collect();
        discs.sort();
        discs.dedup();
        assert_eq!(discs.len(), 5);
        assert_eq!(even_overlattices(&Lattice::e8()).unwrap().len(), 1);
    }

    #[test]
    fn detection_round_trip() {
        let c = BinaryCode::e8();
        let lp = construction_b_lattice(&c).unwrap();
        let w = detect_construction_b(&lp, &unit(8, 0, 8)).unwrap();
        assert!(code_equivalent(&w.code, &c).is_some());
        let e8 = Lattice::e8();
        assert!(matches!(detect_construction_b(&e8, &unit(8, 0, 8)), Err(DetectError::Precondition(_))));
    }

    #[test]
    fn unimodular_embeddings() {
        let s = scale_sqrt2(&Lattice::e8());
        let u = embed_unimodular(&s).unwrap();
        assert!(u.is_unimodular() && u.is_even());
        assert!(lattice_isometric(&u, &Lattice::e8()).unwrap().is_some());
        let e88 = direct_sum(&Lattice::e8(), &Lattice::e8());
        assert_eq!(embed_unimodular(&e88).unwrap(), e88);
    }
}

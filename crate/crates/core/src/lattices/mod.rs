//! Positive definite lattices on a fixed rational grid.
//!
//! Vectors live in `R^n` with an orthogonal frame `alpha_1..alpha_n` of
//! norms `a_1..a_n` (all 2 by default). Coordinates are integers in units of
//! `alpha_i / 8`, so `(u, v) = sum u_i v_i a_i / 64`. A lattice is stored by the
//! Hermite normal form of its basis, which makes equality a row comparison.

mod enumerate;
mod isometry;
mod overlattice;

pub use enumerate::{count_by_norm, short_vectors, theta_series, ShortVectors, MAX_COUNT, MAX_LIST};
pub use isometry::{isometry_with_reason, lattice_isometric, Isometry};
pub use overlattice::{detect_construction_b, embed_unimodular, even_overlattices, DetectError, FrameWitness, Overlattice};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive};

use crate::bincodes::BinaryCode;
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};
use crate::kleinian::KleinianCode;

/// Grid denominator: coordinates are multiples of `alpha_i / GRID`.
pub const GRID: i64 = 8;
const GRID2: i64 = GRID * GRID;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient: Vec<i64>,
    basis: Mat,
}

impl Lattice {
    /// The lattice spanned by `rows` (grid units). The rows must have full rank.
    pub fn from_generators(ambient: Vec<i64>, rows: &[Vec<i64>]) -> Result<Self> {
        let n = ambient.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch(n, r.len()));
        }
        if ambient.iter().any(|&a| a <= 0) {
            return Err(Error::Precondition("frame norms must be positive".into()));
        }
        let basis = intmat::hnf(rows);
        if basis.len() != n {
            return Err(Error::RankMismatch(n, basis.len()));
        }
        Ok(Lattice { ambient, basis })
    }

    /// `Z alpha_1 + ... + Z alpha_n` with the standard norm-2 frame.
    pub fn frame(n: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i, GRID)).collect();
        Lattice::from_generators(vec![2; n], &rows).expect("full rank")
    }

    /// `E_8`, built as the Construction A lattice of the extended Hamming code.
    pub fn e8() -> Self {
        construction_a_lattice(&BinaryCode::e8()).expect("e8 is doubly-even")
    }

    pub fn rank(&self) -> usize {
        self.ambient.len()
    }

    pub fn ambient(&self) -> &[i64] {
        &self.ambient
    }

    /// HNF basis in grid units.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Smallest `d` in `{1, 2, 4, 8}` such that every coordinate is a multiple
    /// of `alpha_i / d`.
    pub fn denom(&self) -> i64 {
        let g = self.basis.iter().flatten().fold(0i64, |g, &x| g.gcd(&x));
        GRID / g.gcd(&GRID)
    }

    /// `64 (u, v)` for grid vectors.
    pub fn inner64(&self, u: &[i64], v: &[i64]) -> i64 {
        let s: i128 = u.iter().zip(v).zip(&self.ambient).map(|((&a, &b), &w)| a as i128 * b as i128 * w as i128).sum();
        i64::try_from(s).expect("inner product overflow")
    }

    pub fn inner(&self, u: &[i64], v: &[i64]) -> Ratio<i64> {
        Ratio::new(self.inner64(u, v), GRID2)
    }

    pub fn norm(&self, v: &[i64]) -> Ratio<i64> {
        self.inner(v, v)
    }

    /// Gram matrix of the basis, scaled by 64.
    pub fn gram64(&self) -> Mat {
        gram64_of(&self.ambient, &self.basis)
    }

    pub fn gram(&self) -> Vec<Vec<Ratio<i64>>> {
        self.gram64().iter().map(|r| r.iter().map(|&x| Ratio::new(x, GRID2)).collect()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.gram64().iter().flatten().all(|&x| x % GRID2 == 0)
    }

    pub fn is_even(&self) -> bool {
        let g = self.gram64();
        self.is_integral() && (0..g.len()).all(|i| g[i][i] % (2 * GRID2) == 0)
    }

    /// Integral Gram matrix, if the lattice is integral.
    pub fn int_gram(&self) -> Option<Mat> {
        self.is_integral().then(|| self.gram64().iter().map(|r| r.iter().map(|&x| x / GRID2).collect()).collect())
    }

    /// Determinant of the Gram matrix.
    pub fn det(&self) -> BigRational {
        let d = intmat::det(&self.gram64());
        BigRational::new(d, BigInt::from(GRID2).pow(self.rank() as u32))
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.det().is_one()
    }

    /// Integer coordinates of `v` in the basis, if `v` is in the lattice.
    pub fn coords(&self, v: &[i64]) -> Option<Vec<i64>> {
        intmat::hnf_solve(v, &self.basis)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.rank() && self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && other.basis.iter().all(|b| self.contains(b))
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        intmat::hnf_reduce(v, &self.basis)
    }

    /// Grid vector with coordinates `c` in the basis.
    pub fn vector(&self, c: &[i64]) -> Vec<i64> {
        intmat::vec_mat(c, &self.basis)
    }

    /// `L + Z v_1 + ...`.
    pub fn extend(&self, vs: &[Vec<i64>]) -> Result<Lattice> {
        let mut rows = self.basis.clone();
        rows.extend_from_slice(vs);
        Lattice::from_generators(self.ambient.clone(), &rows)
    }

    pub fn dual(&self) -> Result<Lattice> {
        dual_lattice(self)
    }

    /// Whether `v` pairs integrally with the lattice.
    pub fn in_dual(&self, v: &[i64]) -> bool {
        self.basis.iter().all(|b| self.inner64(v, b) % GRID2 == 0)
    }

    pub fn scale_sqrt2(&self) -> Lattice {
        scale_sqrt2(self)
    }

    /// Image under the linear map sending the frame vector `alpha_i` to the
    /// grid vector `rows[i] / scale` of a target frame with norms `ambient`.
    pub fn map_rows(&self, rows: &[Vec<i64>], scale: i64, ambient: Vec<i64>) -> Result<Lattice> {
        let img: Result<Vec<Vec<i64>>> = self
            .basis
            .iter()
            .map(|b| {
                let w = intmat::vec_mat(b, rows);
                w.iter().map(|&x| if x % scale == 0 { Ok(x / scale) } else { Err(Error::GridOverflow) }).collect()
            })
            .collect();
        Lattice::from_generators(ambient, &img?)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.denom();
        let step = GRID / d;
        writeln!(f, "lattice {} {}", self.rank(), d)?;
        if self.ambient.iter().any(|&a| a != 2) {
            let a: Vec<String> = self.ambient.iter().map(|x| x.to_string()).collect();
            writeln!(f, "ambient {}", a.join(" "))?;
        }
        for r in &self.basis {
            let row: Vec<String> = r.iter().map(|x| (x / step).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn unit(n: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = scale;
    v
}

pub(crate) fn gram64_of(ambient: &[i64], rows: &[Vec<i64>]) -> Mat {
    rows.iter()
        .map(|u| {
            rows.iter()
                .map(|v| {
                    let s: i128 = u.iter().zip(v).zip(ambient).map(|((&a, &b), &w)| a as i128 * b as i128 * w as i128).sum();
                    i64::try_from(s).expect("gram overflow")
                })
                .collect()
        })
        .collect()
}

fn code_rows(c: &BinaryCode) -> Vec<Vec<i64>> {
    c.basis().iter().map(|&w| (0..c.len()).map(|i| if (w >> i) & 1 == 1 { GRID / 2 } else { 0 }).collect()).collect()
}

/// `L(C) = sum Z alpha_i + sum_{c in C} Z alpha_c / 2`.
pub fn construction_a_lattice(c: &BinaryCode) -> Result<Lattice> {
    if !c.is_doubly_even() {
        return Err(Error::Precondition("Construction A needs a doubly-even code".into()));
    }
    let n = c.len();
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i, GRID)).collect();
    rows.extend(code_rows(c));
    Lattice::from_generators(vec![2; n], &rows)
}

/// `L^+(C) = sum Z (alpha_i + alpha_j) + sum_{c in C} Z alpha_c / 2`.
pub fn construction_b_lattice(c: &BinaryCode) -> Result<Lattice> {
    if !c.is_doubly_even() {
        return Err(Error::Precondition("Construction B needs a doubly-even code".into()));
    }
    let n = c.len();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    if n == 1 {
        rows.push(vec![2 * GRID]);
    }
    for i in 1..n {
        let mut v = unit(n, 0, GRID);
        v[i] = GRID;
        rows.push(v);
        let mut w = unit(n, 0, GRID);
        w[i] = -GRID;
        rows.push(w);
    }
    rows.extend(code_rows(c));
    Lattice::from_generators(vec![2; n], &rows)
}

/// `L* = {u : (u, L) in Z}`; fails when the dual leaves the grid.
pub fn dual_lattice(l: &Lattice) -> Result<Lattice> {
    let inv = intmat::inverse(&l.gram64()).ok_or_else(|| Error::Defect("singular Gram matrix".into()))?;
    let b = intmat::to_rat(&l.basis);
    let scale = BigRational::from_integer(GRID2.into());
    let rows: Vec<Vec<BigRational>> =
        inv.iter().map(|r| intmat::rat_vec_mat(r, &b).into_iter().map(|x| x * &scale).collect()).collect();
    let rows = intmat::rat_to_int(&rows).ok_or(Error::GridOverflow)?;
    Lattice::from_generators(l.ambient.clone(), &rows)
}

/// `sqrt(2) L`, realised by doubling the frame norms.
pub fn scale_sqrt2(l: &Lattice) -> Lattice {
    Lattice { ambient: l.ambient.iter().map(|a| 2 * a).collect(), basis: l.basis.clone() }
}

pub fn direct_sum(l: &Lattice, m: &Lattice) -> Lattice {
    let (p, q) = (l.rank(), m.rank());
    let mut rows: Vec<Vec<i64>> = l.basis.iter().map(|r| r.iter().copied().chain(std::iter::repeat_n(0, q)).collect()).collect();
    rows.extend(m.basis.iter().map(|r| std::iter::repeat_n(0, p).chain(r.iter().copied()).collect()));
    let mut ambient = l.ambient.clone();
    ambient.extend_from_slice(&m.ambient);
    Lattice::from_generators(ambient, &rows).expect("direct sum has full rank")
}

/// `L*/L` through the Smith form of the integral Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Invariant factors greater than 1, each dividing the next.
    pub factors: Vec<i64>,
    /// Grid vectors of `L*` generating the cyclic factors, in order.
    pub generators: Vec<Vec<i64>>,
    /// Row `i` maps the pairings of a dual vector with the basis to its
    /// residue modulo `factors[i]`.
    residue_rows: Mat,
}

impl DiscriminantGroup {
    pub fn order(&self) -> u64 {
        self.factors.iter().map(|&d| d as u64).product()
    }

    pub fn is_elementary_2(&self) -> bool {
        self.factors.iter().all(|&d| d == 2)
    }

    /// `k` with `L*/L = Z_2^k`, if the group is 2-elementary.
    pub fn two_rank(&self) -> Option<usize> {
        self.is_elementary_2().then_some(self.factors.len())
    }

    /// Residue vector of a dual vector `v`.
    pub fn residue(&self, l: &Lattice, v: &[i64]) -> Vec<i64> {
        let z: Vec<i64> = l.basis.iter().map(|b| l.inner64(v, b) / GRID2).collect();
        self.residue_rows
            .iter()
            .zip(&self.factors)
            .map(|(row, &d)| row.iter().zip(&z).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>().rem_euclid(d as i128) as i64)
            .collect()
    }

    /// Canonical grid representative of the class with residue `r`.
    pub fn element(&self, l: &Lattice, r: &[i64]) -> Vec<i64> {
        let mut v = vec![0i64; l.rank()];
        for (g, &k) in self.generators.iter().zip(r) {
            for (x, &y) in v.iter_mut().zip(g) {
                *x += k * y;
            }
        }
        l.reduce(&v)
    }

    /// Every residue vector, in lexicographic order.
    pub fn elements(&self) -> Result<Vec<Vec<i64>>> {
        let ord = self.order();
        if ord > 1 << 20 {
            return Err(Error::TooLarge { what: "discriminant group order", limit: 1 << 20 });
        }
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..d).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

pub fn discriminant_group(l: &Lattice) -> Result<DiscriminantGroup> {
    let g = l.int_gram().ok_or_else(|| Error::Precondition("lattice is not integral".into()))?;
    let (u, d, v) = intmat::snf(&g);
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    let mut residue_rows = Vec::new();
    for (i, &di) in d.iter().enumerate() {
        if di == 1 {
            continue;
        }
        // generator with basis coordinates V[., i] / d_i
        let coeffs: Vec<BigRational> = v.iter().map(|r| BigRational::new(r[i].into(), di.into())).collect();
        let amb = intmat::rat_vec_mat(&coeffs, &intmat::to_rat(&l.basis));
        let amb: Option<Vec<i64>> = amb.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect();
        generators.push(amb.ok_or(Error::GridOverflow)?);
        factors.push(di);
        residue_rows.push(u[i].clone());
    }
    Ok(DiscriminantGroup { factors, generators, residue_rows })
}

/// The block map of an even Kleinian code of length `m`, as the integer
/// matrix `R` with `rho(alpha_j) = (R_j . alpha) / 2`.
pub fn rho_matrix(m: usize) -> Mat {
    let n = 4 * m;
    let mut r = vec![vec![0i64; n]; n];
    for b in 0..m {
        let base = 4 * b;
        for j in 0..4 {
            for k in 0..4 {
                r[base + j][base + k] = match (j, k) {
                    (3, _) => 1,
                    (_, 3) => 1,
                    _ if j == k => 1,
                    _ => -1,
                };
            }
        }
    }
    r
}

/// Applies the block map to `L(C^+(K))` and checks that the image is exactly
/// `L^+(C(K))`. Returns the matrix from [`rho_matrix`].
pub fn rho_isomorphism(k: &KleinianCode) -> Result<Mat> {
    if !k.is_even() {
        return Err(Error::Precondition("Kleinian code is not even".into()));
    }
    let m = k.len();
    let r = rho_matrix(m);
    // orthogonality: R R^T = 4 I
    let rrt = intmat::mul(&r, &intmat::transpose(&r));
    let four_i: Mat = (0..4 * m).map(|i| unit(4 * m, i, 4)).collect();
    if rrt != four_i {
        return Err(Error::Defect("block map is not orthogonal".into()));
    }
    let src = construction_a_lattice(&crate::bincodes::construction_b_code(k))?;
    let dst = construction_b_lattice(&crate::bincodes::construction_a_code(k))?;
    let img = src.map_rows(&r, 2, vec![2; 4 * m])?;
    if img != dst {
        return Err(Error::Defect("block map does not carry L(C+(K)) onto L+(C(K))".into()));
    }
    Ok(r)
}

/// `epsilon_c`: the sign change on the coordinates in the support of `c`,
/// with its matrix in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignChange {
    pub signs: Vec<i64>,
    /// Row `i`: basis coordinates of the image of basis vector `i`.
    pub matrix: Mat,
}

pub fn epsilon_automorphism(l: &Lattice, code: &BinaryCode, c: u64) -> Result<SignChange> {
    if l.rank() != code.len() {
        return Err(Error::LengthMismatch(l.rank(), code.len()));
    }
    if !code.dual().contains(c) {
        return Err(Error::NotAutomorphism("word is not in the dual code".into()));
    }
    let signs: Vec<i64> = (0..l.rank()).map(|i| if (c >> i) & 1 == 1 { -1 } else { 1 }).collect();
    let matrix: Option<Mat> =
        l.basis.iter().map(|b| l.coords(&b.iter().zip(&signs).map(|(x, s)| x * s).collect::<Vec<_>>())).collect();
    let matrix = matrix.ok_or_else(|| Error::NotAutomorphism("image leaves the lattice".into()))?;
    if !intmat::det(&matrix).abs().is_one() {
        return Err(Error::NotAutomorphism("image is a proper sublattice".into()));
    }
    Ok(SignChange { signs, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_is_even_unimodular() {
        let e8 = Lattice::e8();
        assert!(e8.is_even() && e8.is_unimodular());
        assert_eq!(e8.dual().unwrap(), e8);
        assert_eq!(e8.denom(), 2);
        assert!(discriminant_group(&e8).unwrap().factors.is_empty());
    }

    #[test]
    fn scaled_e8() {
        let s = scale_sqrt2(&Lattice::e8());
        let g = discriminant_group(&s).unwrap();
        assert_eq!(g.factors, vec![2; 8]);
        assert!(scale_sqrt2(&s.dual().unwrap()).is_even());
        assert_eq!(scale_sqrt2(&s.dual().unwrap()).gram64(), Lattice::e8().gram64());
    }

    #[test]
    fn construction_b_dual() {
        let c = BinaryCode::e8();
        let lp = construction_b_lattice(&c).unwrap();
        let l = construction_a_lattice(&c).unwrap();
        assert!(l.contains_lattice(&lp));
        assert_eq!(l.det() * BigRational::from_integer(4.into()), lp.det());
        assert_eq!(discriminant_group(&lp).unwrap().order(), 4);
        // L+(C)* = L(C^perp) + Z alpha_(1^n) / 4
        let expect = construction_a_lattice(&c.dual()).unwrap().extend(&[vec![2; 8]]).unwrap();
        assert_eq!(lp.dual().unwrap(), expect);
        assert_eq!(lp.dual().unwrap().dual().unwrap(), lp);
    }

    #[test]
    fn rho_examples() {
        let e2 = KleinianCode::epsilon2();
        assert!(rho_isomorphism(&e2).is_ok());
        assert!(rho_isomorphism(&e2.direct_sum(&e2)).is_ok());
        assert!(rho_isomorphism(&KleinianCode::delta4_plus()).is_ok());
    }

    #[test]
    fn sign_changes() {
        let c = BinaryCode::e8();
        let lp = construction_b_lattice(&c).unwrap();
        assert_eq!(epsilon_automorphism(&lp, &c, 0).unwrap().matrix, intmat::identity(8));
        assert!(epsilon_automorphism(&lp, &c, 0xFF).is_ok());
        assert!(epsilon_automorphism(&lp, &c, 0b1).is_err());
    }
}

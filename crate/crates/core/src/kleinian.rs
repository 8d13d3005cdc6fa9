//! Kleinian codes: subgroups of `K^n` where `K = {0, a, b, c}` is the Klein
//! four-group.
//!
//! Coordinate `i` of a word occupies bits `2i` and `2i + 1` of a `u64`, with
//! `a = (1,0)`, `b = (0,1)`, `c = (1,1)`. The product table `a.b = a.c = b.c = 1`,
//! `x.x = 0` is the symplectic form `x1*y2 + x2*y1` on each pair, which turns
//! duality into an ordinary F2 nullspace after swapping the two halves.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2;

/// Longest code accepted by the exhaustive routines.
pub const MAX_LEN: usize = 8;
/// Longest length for which every subspace is enumerated.
pub const MAX_ENUM_LEN: usize = 4;

const LOW: u64 = 0x5555_5555_5555_5555;

/// The six permutations of `{a, b, c}` as lookup tables on 2-bit symbols.
pub const SYMBOL_PERMS: [[u8; 4]; 6] = [[0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1]];

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct KleinianWord {
    pub n: usize,
    pub bits: u64,
}

impl KleinianWord {
    pub fn zero(n: usize) -> Self {
        KleinianWord { n, bits: 0 }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = 0u64;
        let mut n = 0;
        for (i, ch) in s.chars().enumerate() {
            let v = symbol_value(ch)?;
            bits |= v << (2 * i);
            n = i + 1;
        }
        if n > 32 {
            return None;
        }
        Some(KleinianWord { n, bits })
    }

    pub fn symbol(&self, i: usize) -> u8 {
        ((self.bits >> (2 * i)) & 3) as u8
    }

    pub fn weight(&self) -> u32 {
        support(self.bits).count_ones()
    }
}

impl fmt::Display for KleinianWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", symbol_char(self.symbol(i)))?;
        }
        Ok(())
    }
}

fn symbol_value(ch: char) -> Option<u64> {
    match ch {
        '0' => Some(0),
        'a' => Some(1),
        'b' => Some(2),
        'c' => Some(3),
        _ => None,
    }
}

pub fn symbol_char(s: u8) -> char {
    ['0', 'a', 'b', 'c'][s as usize]
}

/// One bit per coordinate (at position `2i`) marking the nonzero symbols.
#[inline]
fn support(x: u64) -> u64 {
    (x | (x >> 1)) & LOW
}

#[inline]
fn swap_halves(x: u64) -> u64 {
    ((x & LOW) << 1) | ((x >> 1) & LOW)
}

#[inline]
fn inner_bits(x: u64, y: u64) -> u32 {
    (x & swap_halves(y)).count_ones() & 1
}

#[inline]
fn weight_bits(x: u64) -> u32 {
    support(x).count_ones()
}

/// The product `x . y` in F2.
pub fn k_inner(x: &KleinianWord, y: &KleinianWord) -> Result<u8> {
    if x.n != y.n {
        return Err(Error::LengthMismatch(x.n, y.n));
    }
    Ok(inner_bits(x.bits, y.bits) as u8)
}

/// A Kleinian code, stored by the reduced echelon basis of its 2n-bit flattening.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct KleinianCode {
    n: usize,
    basis: Vec<u64>,
}

impl KleinianCode {
    pub fn new(n: usize, generators: &[KleinianWord]) -> Result<Self> {
        if n > 32 {
            return Err(Error::TooLarge { what: "Kleinian code length", limit: 32 });
        }
        for g in generators {
            if g.n != n {
                return Err(Error::LengthMismatch(n, g.n));
            }
        }
        let rows: Vec<u64> = generators.iter().map(|g| g.bits).collect();
        Ok(Self::from_bits(n, &rows))
    }

    pub fn from_bits(n: usize, rows: &[u64]) -> Self {
        let m = f2::mask(2 * n);
        let rows: Vec<u64> = rows.iter().map(|r| r & m).collect();
        KleinianCode { n, basis: f2::rref(&rows) }
    }

    pub fn from_words(n: usize, words: &[&str]) -> Result<Self> {
        let mut gens = Vec::with_capacity(words.len());
        for w in words {
            let kw = KleinianWord::parse(w).ok_or_else(|| Error::Precondition(format!("bad Kleinian word {w:?}")))?;
            gens.push(kw);
        }
        Self::new(n, &gens)
    }

    pub fn zero(n: usize) -> Self {
        KleinianCode { n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let rows: Vec<u64> = (0..2 * n).map(|i| 1u64 << i).collect();
        Self::from_bits(n, &rows)
    }

    /// `epsilon_2`, generated by `aa` and `bb`.
    pub fn epsilon2() -> Self {
        Self::from_words(2, &["aa", "bb"]).expect("static words")
    }

    /// `delta_4^+`, generated by `aa00, a0a0, a00a, bbbb`.
    pub fn delta4_plus() -> Self {
        Self::from_words(4, &["aa00", "a0a0", "a00a", "bbbb"]).expect("static words")
    }

    pub fn direct_sum(&self, other: &KleinianCode) -> KleinianCode {
        let shift = 2 * self.n;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().map(|b| b << shift));
        Self::from_bits(self.n + other.n, &rows)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// F2-rank of the code, i.e. twice its dimension `t` where `|K| = 4^t`.
    pub fn f2_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.basis.len()
    }

    pub fn basis_bits(&self) -> &[u64] {
        &self.basis
    }

    pub fn basis(&self) -> Vec<KleinianWord> {
        self.basis.iter().map(|&bits| KleinianWord { n: self.n, bits }).collect()
    }

    pub fn contains(&self, w: &KleinianWord) -> bool {
        w.n == self.n && f2::in_span(w.bits, &self.basis)
    }

    pub fn codewords(&self) -> Vec<KleinianWord> {
        f2::span(&self.basis).into_iter().map(|bits| KleinianWord { n: self.n, bits }).collect()
    }

    pub fn is_even(&self) -> bool {
        // wt(x + y) = wt(x) + wt(y) + x.y (mod 2), so checking the basis suffices
        self.basis.iter().all(|&b| weight_bits(b).is_multiple_of(2))
            && self.basis.iter().enumerate().all(|(i, &x)| self.basis[i + 1..].iter().all(|&y| inner_bits(x, y) == 0))
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, &x)| self.basis[i..].iter().all(|&y| inner_bits(x, y) == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        self.basis.len() == self.n && self.is_self_orthogonal()
    }

    pub fn dual(&self) -> KleinianCode {
        k_dual(self)
    }

    pub fn weight_enumerator(&self) -> Result<KWeightEnumerator> {
        k_weight_enumerator(self)
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.n > MAX_LEN {
            return Err(Error::TooLarge { what: "Kleinian code length", limit: MAX_LEN });
        }
        Ok(())
    }
}

impl fmt::Display for KleinianCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kleinian {}", self.n)?;
        for w in self.basis() {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}

/// `K^perp` with respect to the symplectic product.
pub fn k_dual(k: &KleinianCode) -> KleinianCode {
    let swapped: Vec<u64> = k.basis.iter().map(|&b| swap_halves(b)).collect();
    KleinianCode::from_bits(k.n, &f2::nullspace(&swapped, 2 * k.n))
}

/// Coefficients `c[m] = |K(m)|` of `W_K(X, Y) = sum X^wt Y^(n - wt)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct KWeightEnumerator {
    pub n: usize,
    pub coeffs: Vec<u64>,
}

impl KWeightEnumerator {
    pub fn new(n: usize, coeffs: Vec<u64>) -> Self {
        assert_eq!(coeffs.len(), n + 1);
        KWeightEnumerator { n, coeffs }
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// The length-4 family `(2^(k-4)+1) X^4 + (2^(k-4)-2) X^2 Y^2 + Y^4`, `k = 5, 6, 7`.
    pub fn family_wk(k: u32) -> Self {
        let t = 1u64 << (k - 4);
        KWeightEnumerator::new(4, vec![1, 0, t - 2, 0, t + 1])
    }
}

impl fmt::Display for KWeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}X^{m}Y^{}", self.n - m)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn k_weight_enumerator(k: &KleinianCode) -> Result<KWeightEnumerator> {
    k.check_enumerable()?;
    let mut coeffs = vec![0u64; k.n + 1];
    f2::for_each_in_span(&k.basis, |x| coeffs[weight_bits(x) as usize] += 1);
    Ok(KWeightEnumerator { n: k.n, coeffs })
}

/// Coordinate permutation plus a symbol permutation at every coordinate.
/// Symbol `s` at coordinate `i` becomes `symbols[i][s]` at coordinate `perm[i]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KEquivalence {
    pub perm: Vec<usize>,
    pub symbols: Vec<[u8; 4]>,
}

impl KEquivalence {
    pub fn identity(n: usize) -> Self {
        KEquivalence { perm: (0..n).collect(), symbols: vec![SYMBOL_PERMS[0]; n] }
    }

    pub fn apply_bits(&self, x: u64) -> u64 {
        let mut y = 0u64;
        for (i, &p) in self.perm.iter().enumerate() {
            let s = (x >> (2 * i)) & 3;
            y |= (self.symbols[i][s as usize] as u64) << (2 * p);
        }
        y
    }

    pub fn apply(&self, k: &KleinianCode) -> KleinianCode {
        let rows: Vec<u64> = k.basis.iter().map(|&b| self.apply_bits(b)).collect();
        KleinianCode::from_bits(k.n, &rows)
    }

    /// Re-checks that the map sends `k` onto `j`.
    pub fn verify(&self, k: &KleinianCode, j: &KleinianCode) -> bool {
        self.perm.len() == k.n && k.n == j.n && self.apply(k) == *j
    }
}

/// Invariant of a coordinate under code equivalence: rank of the projection
/// onto it and the weight distribution of codewords nonzero there.
fn coordinate_fingerprints(k: &KleinianCode, words: &[u64]) -> Vec<(usize, Vec<u32>)> {
    (0..k.n)
        .map(|i| {
            let proj: Vec<u64> = k.basis.iter().map(|b| (b >> (2 * i)) & 3).collect();
            let mut hist = vec![0u32; k.n + 1];
            for &w in words {
                if (w >> (2 * i)) & 3 != 0 {
                    hist[weight_bits(w) as usize] += 1;
                }
            }
            (f2::rank(&proj), hist)
        })
        .collect()
}

fn coord_mask(coords: impl Iterator<Item = usize>) -> u64 {
    coords.fold(0, |m, i| m | (3u64 << (2 * i)))
}

/// Searches for an equivalence mapping `k` onto `j`.
pub fn k_equivalent(k: &KleinianCode, j: &KleinianCode) -> Option<KEquivalence> {
    if k.n != j.n || k.f2_rank() != j.f2_rank() || k.n > MAX_LEN {
        return None;
    }
    let kw = f2::span(&k.basis);
    let jw = f2::span(&j.basis);
    let enum_of = |ws: &[u64]| {
        let mut c = vec![0u32; k.n + 1];
        for &w in ws {
            c[weight_bits(w) as usize] += 1;
        }
        c
    };
    if enum_of(&kw) != enum_of(&jw) {
        return None;
    }
    let fk = coordinate_fingerprints(k, &kw);
    let fj = coordinate_fingerprints(j, &jw);
    let mut sk = fk.clone();
    let mut sj = fj.clone();
    sk.sort();
    sj.sort();
    if sk != sj {
        return None;
    }
    let mut search = KSearch {
        n: k.n,
        k,
        j,
        kw: &kw,
        fk: &fk,
        fj: &fj,
        perm: vec![usize::MAX; k.n],
        symbols: vec![SYMBOL_PERMS[0]; k.n],
        used: vec![false; k.n],
    };
    if search.dfs(0) {
        let eq = KEquivalence { perm: search.perm, symbols: search.symbols };
        debug_assert!(eq.verify(k, j));
        Some(eq)
    } else {
        None
    }
}

struct KSearch<'a> {
    n: usize,
    k: &'a KleinianCode,
    j: &'a KleinianCode,
    kw: &'a [u64],
    fk: &'a [(usize, Vec<u32>)],
    fj: &'a [(usize, Vec<u32>)],
    perm: Vec<usize>,
    symbols: Vec<[u8; 4]>,
    used: Vec<bool>,
}

impl KSearch<'_> {
    fn partial_map(&self, x: u64, assigned: usize) -> u64 {
        let mut y = 0u64;
        for i in 0..assigned {
            let s = (x >> (2 * i)) & 3;
            y |= (self.symbols[i][s as usize] as u64) << (2 * self.perm[i]);
        }
        y
    }

    fn consistent(&self, assigned: usize) -> bool {
        let dom = coord_mask(0..assigned);
        let img = coord_mask(self.perm[..assigned].iter().copied());
        // projections onto the assigned coordinates must correspond
        let pk: Vec<u64> = self.k.basis.iter().map(|&b| self.partial_map(b, assigned)).collect();
        let pj: Vec<u64> = self.j.basis.iter().map(|&b| b & img).collect();
        if f2::rref(&pk) != f2::rref(&pj) {
            return false;
        }
        // codewords living inside the assigned coordinates must land in j
        self.kw.iter().filter(|&&w| w & !dom == 0).all(|&w| f2::in_span(self.partial_map(w, assigned), &self.j.basis))
    }

    fn dfs(&mut self, i: usize) -> bool {
        if i == self.n {
            let eq = KEquivalence { perm: self.perm.clone(), symbols: self.symbols.clone() };
            return eq.apply(self.k) == *self.j;
        }
        let only_identity = self.fk[i].0 == 0;
        for target in 0..self.n {
            if self.used[target] || self.fk[i] != self.fj[target] {
                continue;
            }
            self.used[target] = true;
            self.perm[i] = target;
            for (si, sp) in SYMBOL_PERMS.iter().enumerate() {
                if only_identity && si > 0 {
                    break;
                }
                self.symbols[i] = *sp;
                if self.consistent(i + 1) && self.dfs(i + 1) {
                    return true;
                }
            }
            self.used[target] = false;
        }
        self.perm[i] = usize::MAX;
        self.symbols[i] = SYMBOL_PERMS[0];
        false
    }
}

/// Filter for [`k_enumerate`]. An empty `enumerators` list accepts any enumerator.
#[derive(Clone, Debug, Default)]
pub struct KPredicate {
    pub even: bool,
    pub self_dual: bool,
    pub enumerators: Vec<KWeightEnumerator>,
}

impl KPredicate {
    pub fn even_self_dual() -> Self {
        KPredicate { even: true, self_dual: true, enumerators: Vec::new() }
    }

    fn accepts(&self, k: &KleinianCode) -> bool {
        if self.self_dual && !k.is_self_dual() {
            return false;
        }
        if self.even && !k.is_even() {
            return false;
        }
        if !self.enumerators.is_empty() {
            let w = k_weight_enumerator(k).expect("length checked by caller");
            return self.enumerators.contains(&w);
        }
        true
    }
}

/// All codes of length `n <= 4` satisfying `pred`, one per equivalence class,
/// in the order their first member appears in the echelon enumeration.
pub fn k_enumerate(n: usize, pred: &KPredicate) -> Result<Vec<KleinianCode>> {
    if n > MAX_ENUM_LEN {
        return Err(Error::TooLarge { what: "Kleinian enumeration length", limit: MAX_ENUM_LEN });
    }
    let mut reps: Vec<KleinianCode> = Vec::new();
    let mut by_key: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    f2::for_each_subspace(2 * n, |rows| {
        let k = KleinianCode { n, basis: rows.to_vec() };
        if !pred.accepts(&k) {
            return;
        }
        let words = f2::span(&k.basis);
        let mut key: Vec<u64> = k_weight_enumerator(&k).expect("n <= 4").coeffs;
        let mut fps = coordinate_fingerprints(&k, &words);
        fps.sort();
        for (r, h) in fps {
            key.push(r as u64);
            key.extend(h.iter().map(|&x| x as u64));
        }
        let bucket = by_key.entry(key).or_default();
        if bucket.iter().any(|&ri| k_equivalent(&reps[ri], &k).is_some()) {
            return;
        }
        bucket.push(reps.len());
        reps.push(k);
    });
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> KleinianWord {
        KleinianWord::parse(s).unwrap()
    }

    #[test]
    fn product_table() {
        assert_eq!(k_inner(&w("a"), &w("b")).unwrap(), 1);
        assert_eq!(k_inner(&w("a"), &w("a")).unwrap(), 0);
        assert_eq!(k_inner(&w("ab"), &w("ba")).unwrap(), 0);
        for x in ["a", "b", "c"] {
            for y in ["a", "b", "c"] {
                let expect = u8::from(x != y);
                assert_eq!(k_inner(&w(x), &w(y)).unwrap(), expect, "{x}.{y}");
            }
        }
        assert!(k_inner(&w("a"), &w("ab")).is_err());
    }

    #[test]
    fn word_round_trip() {
        for s in ["0abc", "cc", "a0b0c"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert!(KleinianWord::parse("ax").is_none());
    }

    #[test]
    fn duals_of_small_codes() {
        let e2 = KleinianCode::epsilon2();
        assert_eq!(k_dual(&e2), e2);
        assert_eq!(k_dual(&KleinianCode::zero(1)), KleinianCode::full(1));
        let d4 = KleinianCode::delta4_plus();
        assert_eq!(k_dual(&d4), d4);
        assert!(e2.is_self_dual() && e2.is_even());
        assert!(d4.is_self_dual() && d4.is_even());
    }

    #[test]
    fn enumerators() {
        assert_eq!(k_weight_enumerator(&KleinianCode::epsilon2()).unwrap().coeffs, vec![1, 0, 3]);
        assert_eq!(k_weight_enumerator(&KleinianCode::delta4_plus()).unwrap().coeffs, vec![1, 0, 6, 0, 9]);
        assert_eq!(k_weight_enumerator(&KleinianCode::zero(3)).unwrap().coeffs, vec![1, 0, 0, 0]);
        assert!(k_weight_enumerator(&KleinianCode::zero(9)).is_err());
        assert_eq!(KWeightEnumerator::family_wk(7).coeffs, vec![1, 0, 6, 0, 9]);
    }

    #[test]
    fn relabelled_epsilon2_is_equivalent() {
        let e2 = KleinianCode::epsilon2();
        let renamed = KleinianCode::from_words(2, &["cc", "bb"]).unwrap();
        let eq = k_equivalent(&e2, &renamed).expect("a <-> c relabelling");
        assert!(eq.verify(&e2, &renamed));
    }

    #[test]
    fn epsilon2_squared_and_delta4_are_inequivalent() {
        let e22 = KleinianCode::epsilon2().direct_sum(&KleinianCode::epsilon2());
        assert!(k_equivalent(&e22, &KleinianCode::delta4_plus()).is_none());
    }

    #[test]
    fn double_dual_gives_identity_witness() {
        let k = KleinianCode::from_words(3, &["ab0", "0cc"]).unwrap();
        let kk = k_dual(&k_dual(&k));
        assert_eq!(kk, k);
        let eq = k_equivalent(&k, &kk).unwrap();
        assert!(eq.verify(&k, &kk));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(k_enumerate(2, &KPredicate::even_self_dual()).unwrap().len(), 1);
        assert_eq!(k_enumerate(4, &KPredicate::even_self_dual()).unwrap().len(), 2);
        assert!(k_enumerate(5, &KPredicate::default()).is_err());
    }
}

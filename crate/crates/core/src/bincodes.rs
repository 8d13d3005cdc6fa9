//! Binary linear codes, with the passage from Kleinian codes to doubly-even
//! codes and back.
//!
//! The block for Kleinian coordinate `i` is binary coordinates `4i..4i+4`.
//! `a`, `b`, `c` map to `1100`, `1010`, `0110`, and `u_i` is the all-ones word
//! on block `i`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::f2;
use crate::kleinian::{KleinianCode, KleinianWord};
use crate::text;

/// Codes larger than this are never enumerated word by word.
pub const MAX_ENUM_DIM: usize = 24;
/// Longest length accepted by [`code_equivalent`].
pub const MAX_EQUIV_LEN: usize = 32;

const E8_SRC: &str = include_str!("../data/e8.code");
const D16PLUS_SRC: &str = include_str!("../data/d16plus.code");

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryCode {
    n: usize,
    basis: Vec<u64>,
}

impl BinaryCode {
    pub fn new(n: usize, rows: &[u64]) -> Self {
        assert!(n <= 64, "binary codes are limited to length 64");
        let m = f2::mask(n);
        let rows: Vec<u64> = rows.iter().map(|r| r & m).collect();
        BinaryCode { n, basis: f2::rref(&rows) }
    }

    pub fn zero(n: usize) -> Self {
        BinaryCode { n, basis: Vec::new() }
    }

    pub fn e8() -> Self {
        text::parse_binary(E8_SRC).expect("bundled e8 data")
    }

    pub fn d16plus() -> Self {
        text::parse_binary(D16PLUS_SRC).expect("bundled d16+ data")
    }

    pub fn e8_squared() -> Self {
        Self::e8().direct_sum(&Self::e8())
    }

    /// `d_4^m`, spanned by the block words `u_i`.
    pub fn d4m(m: usize) -> Self {
        let rows: Vec<u64> = (0..m).map(|i| 0xFu64 << (4 * i)).collect();
        Self::new(4 * m, &rows)
    }

    /// `(d_4^m)_0`, spanned by the sums `u_i + u_j`.
    pub fn d4m0(m: usize) -> Self {
        let rows: Vec<u64> = (1..m).map(|i| (0xFu64 << (4 * (i - 1))) | (0xFu64 << (4 * i))).collect();
        Self::new(4 * m, &rows)
    }

    /// Resolves the names used on the command line.
    pub fn named(name: &str) -> Option<Self> {
        match name {
            "e8" => Some(Self::e8()),
            "d16plus" | "d16+" => Some(Self::d16plus()),
            "e8^2" | "e8e8" => Some(Self::e8_squared()),
            _ => {
                let (head, zero) = match name.strip_suffix(")0") {
                    Some(h) => (h.strip_prefix('(')?, true),
                    None => (name, false),
                };
                let m: usize = head.strip_prefix("d4^")?.parse().ok()?;
                if m == 0 || m > 16 {
                    return None;
                }
                Some(if zero { Self::d4m0(m) } else { Self::d4m(m) })
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn contains(&self, x: u64) -> bool {
        x & !f2::mask(self.n) == 0 && f2::in_span(x, &self.basis)
    }

    pub fn is_subcode_of(&self, other: &BinaryCode) -> bool {
        self.n == other.n && self.basis.iter().all(|&b| other.contains(b))
    }

    pub fn codewords(&self) -> Result<Vec<u64>> {
        self.check_enumerable()?;
        Ok(f2::span(&self.basis))
    }

    pub fn direct_sum(&self, other: &BinaryCode) -> BinaryCode {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().map(|b| b << self.n));
        Self::new(self.n + other.n, &rows)
    }

    /// Moves coordinate `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> BinaryCode {
        let rows: Vec<u64> = self.basis.iter().map(|&b| f2::permute(b, perm)).collect();
        Self::new(self.n, &rows)
    }

    pub fn span_with(&self, extra: &[u64]) -> BinaryCode {
        let mut rows = self.basis.clone();
        rows.extend_from_slice(extra);
        Self::new(self.n, &rows)
    }

    pub fn dual(&self) -> BinaryCode {
        code_dual(self)
    }

    pub fn is_doubly_even(&self) -> bool {
        is_doubly_even(self)
    }

    pub fn is_self_dual(&self) -> bool {
        is_self_dual(self)
    }

    pub fn weight_enumerator(&self) -> Result<BWeightEnumerator> {
        coset_weight_enumerator(&CosetLabel::new(self.clone(), 0))
    }

    /// `|C(m)|`.
    pub fn count_weight(&self, m: u32) -> Result<u64> {
        Ok(self.weight_enumerator()?.coeffs.get(m as usize).copied().unwrap_or(0))
    }

    pub fn rows_as_strings(&self) -> Vec<String> {
        self.basis.iter().map(|&b| f2::to_bitstring(b, self.n)).collect()
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.basis.len() > MAX_ENUM_DIM {
            return Err(Error::TooLarge { what: "code dimension", limit: MAX_ENUM_DIM });
        }
        Ok(())
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "binary {}", self.n)?;
        for r in self.rows_as_strings() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

pub fn code_dual(c: &BinaryCode) -> BinaryCode {
    BinaryCode { n: c.n, basis: f2::nullspace(&c.basis, c.n) }
}

pub fn is_doubly_even(c: &BinaryCode) -> bool {
    // wt(x + y) = wt(x) + wt(y) - 2|x & y|
    c.basis.iter().all(|&b| f2::weight(b).is_multiple_of(4))
        && c.basis.iter().enumerate().all(|(i, &x)| c.basis[i + 1..].iter().all(|&y| f2::dot(x, y) == 0))
}

pub fn is_self_dual(c: &BinaryCode) -> bool {
    2 * c.basis.len() == c.n && c.basis.iter().enumerate().all(|(i, &x)| c.basis[i..].iter().all(|&y| f2::dot(x, y) == 0))
}

/// A coset `x + C` with its canonical representative, the lexicographic
/// minimum of the coset.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CosetLabel {
    pub code: BinaryCode,
    pub rep: u64,
}

impl CosetLabel {
    pub fn new(code: BinaryCode, x: u64) -> Self {
        let rep = f2::reduce(x & f2::mask(code.n), &code.basis);
        CosetLabel { code, rep }
    }
}

/// Coefficients `c[m] = |(x + C)(m)|`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BWeightEnumerator {
    pub n: usize,
    pub coeffs: Vec<u64>,
}

impl BWeightEnumerator {
    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for BWeightEnumerator {
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
            let y = self.n - m;
            let coef = if c == 1 && (m > 0 || y > 0) { String::new() } else { c.to_string() };
            write!(f, "{coef}")?;
            if m > 0 {
                write!(f, "X^{m}")?;
            }
            if y > 0 {
                write!(f, "Y^{y}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn coset_weight_enumerator(x: &CosetLabel) -> Result<BWeightEnumerator> {
    x.code.check_enumerable()?;
    let mut coeffs = vec![0u64; x.code.n + 1];
    f2::for_each_in_span(&x.code.basis, |c| coeffs[f2::weight(c ^ x.rep) as usize] += 1);
    Ok(BWeightEnumerator { n: x.code.n, coeffs })
}

/// Image of a Kleinian word under `a -> 1100, b -> 1010, c -> 0110`.
pub fn hat_map(w: &KleinianWord) -> u64 {
    hat_bits(w.bits, w.n)
}

fn hat_bits(bits: u64, m: usize) -> u64 {
    const IMG: [u64; 4] = [0b0000, 0b0011, 0b0101, 0b0110];
    (0..m).fold(0, |acc, i| acc | (IMG[((bits >> (2 * i)) & 3) as usize] << (4 * i)))
}

/// Reads the Kleinian symbol of an even 4-bit block pattern, the inverse of
/// the hat map modulo `1111`.
fn read_block(p: u64) -> Option<u64> {
    let p = if p & 0b1000 != 0 { p ^ 0b1111 } else { p };
    match p {
        0b0000 => Some(0),
        0b0011 => Some(1),
        0b0101 => Some(2),
        0b0110 => Some(3),
        _ => None,
    }
}

fn read_kleinian(x: u64, m: usize) -> Option<u64> {
    let mut bits = 0u64;
    for i in 0..m {
        bits |= read_block((x >> (4 * i)) & 0xF)? << (2 * i);
    }
    Some(bits)
}

fn hat_rows(k: &KleinianCode) -> Vec<u64> {
    k.basis_bits().iter().map(|&b| hat_bits(b, k.len())).collect()
}

/// `C(K)`: the hat image of `K` plus `d_4^m`.
pub fn construction_a_code(k: &KleinianCode) -> BinaryCode {
    BinaryCode::d4m(k.len()).span_with(&hat_rows(k))
}

/// `C^+(K)`: the hat image of `K` plus `(d_4^m)_0`.
pub fn construction_b_code(k: &KleinianCode) -> BinaryCode {
    BinaryCode::d4m0(k.len()).span_with(&hat_rows(k))
}

/// Weight enumerator predicted from the Kleinian enumerator: every codeword
/// `k` contributes `(2X^2Y^2)^wt(k) (X^4+Y^4)^(m-wt(k))`; the `plus` variant
/// averages this with `(Y^4 - X^4)^m`. `X` marks the support.
pub fn enumerator_from_kleinian(k: &KleinianCode, plus: bool) -> Result<BWeightEnumerator> {
    let m = k.len();
    let w = k.weight_enumerator()?;
    // polynomials in X with Y implied by homogeneity
    let pow = |base: &[i128], e: usize| {
        let mut acc = vec![1i128];
        for _ in 0..e {
            acc = poly_mul(&acc, base);
        }
        acc
    };
    let nz = [0, 0, 2];
    let z = [1, 0, 0, 0, 1];
    let mut total = vec![0i128; 4 * m + 1];
    for (wt, &cnt) in w.coeffs.iter().enumerate() {
        let term = poly_mul(&pow(&nz, wt), &pow(&z, m - wt));
        for (i, t) in term.iter().enumerate() {
            total[i] += cnt as i128 * t;
        }
    }
    if plus {
        let corr = pow(&[1, 0, 0, 0, -1], m);
        for (i, t) in corr.iter().enumerate() {
            total[i] += t;
        }
        for t in total.iter_mut() {
            if *t % 2 != 0 {
                return Err(Error::Defect("odd coefficient in the halved enumerator".into()));
            }
            *t /= 2;
        }
    }
    let coeffs = total
        .into_iter()
        .map(|t| u64::try_from(t).map_err(|_| Error::Defect("negative enumerator coefficient".into())))
        .collect::<Result<Vec<u64>>>()?;
    Ok(BWeightEnumerator { n: 4 * m, coeffs })
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Weight enumerator and, per coordinate, the weights of codewords through it.
fn eq_invariants(c: &BinaryCode, words: &[u64]) -> (Vec<u64>, Vec<Vec<u32>>) {
    let n = c.n;
    let mut enumerator = vec![0u64; n + 1];
    let mut coord = vec![vec![0u32; n + 1]; n];
    for &w in words {
        let wt = f2::weight(w) as usize;
        enumerator[wt] += 1;
        let mut v = w;
        while v != 0 {
            coord[v.trailing_zeros() as usize][wt] += 1;
            v &= v - 1;
        }
    }
    (enumerator, coord)
}

/// A permutation `perm` with `c.permute(perm) == d`, or `None`.
pub fn code_equivalent(c: &BinaryCode, d: &BinaryCode) -> Option<Vec<usize>> {
    if c.n != d.n || c.dim() != d.dim() || c.n > MAX_EQUIV_LEN {
        return None;
    }
    let cw = c.codewords().ok()?;
    let dw = d.codewords().ok()?;
    let (ec, hc) = eq_invariants(c, &cw);
    let (ed, hd) = eq_invariants(d, &dw);
    if ec != ed {
        return None;
    }
    let (pc, pd) = shared_pair_ids(c.n, &cw, &dw);
    let fc: Vec<_> = (0..c.n).map(|i| coord_key(&hc[i], &pc[i], i)).collect();
    let fd: Vec<_> = (0..c.n).map(|i| coord_key(&hd[i], &pd[i], i)).collect();
    let mut sc = fc.clone();
    let mut sd = fd.clone();
    sc.sort();
    sd.sort();
    if sc != sd {
        return None;
    }
    let order = search_order(c.n, &pc);
    let mut s = BSearch {
        c,
        d,
        cw: &cw,
        pc: &pc,
        pd: &pd,
        fc: &fc,
        fd: &fd,
        order: &order,
        perm: vec![usize::MAX; c.n],
        used: vec![false; c.n],
    };
    if s.dfs(0) {
        let perm = s.perm;
        debug_assert!(c.permute(&perm) == *d);
        Some(perm)
    } else {
        None
    }
}

type CoordKey = (Vec<u32>, Vec<u64>);

fn coord_key(hist: &[u32], pair_row: &[u64], i: usize) -> CoordKey {
    let mut row: Vec<u64> = pair_row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
    row.sort();
    (hist.to_vec(), row)
}

/// Pair invariants of both codes labelled from one dictionary.
fn shared_pair_ids(n: usize, cw: &[u64], dw: &[u64]) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let hist = |words: &[u64]| {
        let mut h = vec![vec![vec![0u32; n + 1]; n]; n];
        for &w in words {
            let wt = f2::weight(w) as usize;
            let support: Vec<usize> = (0..n).filter(|&i| (w >> i) & 1 == 1).collect();
            for (a, &i) in support.iter().enumerate() {
                for &j in &support[a + 1..] {
                    h[i][j][wt] += 1;
                }
            }
        }
        h
    };
    let hc = hist(cw);
    let hd = hist(dw);
    let mut ids: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut label = |h: &Vec<Vec<Vec<u32>>>| {
        let mut p = vec![vec![u64::MAX; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let next = ids.len() as u64;
                let id = *ids.entry(h[i][j].clone()).or_insert(next);
                p[i][j] = id;
                p[j][i] = id;
            }
        }
        p
    };
    let pc = label(&hc);
    let pd = label(&hd);
    (pc, pd)
}

/// Coordinates ordered so that each one is tied to the earlier ones by the
/// rarest pair invariant available, which makes the pair pruning bite early.
fn search_order(n: usize, pc: &[Vec<u64>]) -> Vec<usize> {
    let mut freq: HashMap<u64, usize> = HashMap::new();
    for (i, row) in pc.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j {
                *freq.entry(v).or_default() += 1;
            }
        }
    }
    let mut order = vec![0usize];
    let mut placed = vec![false; n];
    placed[0] = true;
    while order.len() < n {
        let mut best: Option<(usize, usize)> = None;
        for cand in (0..n).filter(|&j| !placed[j]) {
            let score = order.iter().map(|&i| freq[&pc[i][cand]]).min().unwrap_or(usize::MAX);
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, cand));
            }
        }
        let (_, cand) = best.expect("unplaced coordinate");
        placed[cand] = true;
        order.push(cand);
    }
    order
}

struct BSearch<'a> {
    c: &'a BinaryCode,
    d: &'a BinaryCode,
    cw: &'a [u64],
    pc: &'a [Vec<u64>],
    pd: &'a [Vec<u64>],
    fc: &'a [CoordKey],
    fd: &'a [CoordKey],
    order: &'a [usize],
    perm: Vec<usize>,
    used: Vec<bool>,
}

impl BSearch<'_> {
    fn consistent(&self, depth: usize) -> bool {
        let dom: u64 = self.order[..depth].iter().fold(0, |m, &i| m | (1u64 << i));
        let img: u64 = self.order[..depth].iter().fold(0, |m, &i| m | (1u64 << self.perm[i]));
        let map = |x: u64| {
            self.order[..depth].iter().fold(0u64, |y, &i| if (x >> i) & 1 == 1 { y | (1u64 << self.perm[i]) } else { y })
        };
        let pc: Vec<u64> = self.c.basis.iter().map(|&b| map(b & dom)).collect();
        let pd: Vec<u64> = self.d.basis.iter().map(|&b| b & img).collect();
        if f2::rref(&pc) != f2::rref(&pd) {
            return false;
        }
        self.cw.iter().filter(|&&w| w & !dom == 0).all(|&w| self.d.contains(map(w)))
    }

    fn dfs(&mut self, depth: usize) -> bool {
        let n = self.c.n;
        if depth == n {
            return self.c.permute(&self.perm) == *self.d;
        }
        let i = self.order[depth];
        for t in 0..n {
            if self.used[t] || self.fc[i] != self.fd[t] {
                continue;
            }
            if self.order[..depth].iter().any(|&j| self.pc[i][j] != self.pd[t][self.perm[j]]) {
                continue;
            }
            self.used[t] = true;
            self.perm[i] = t;
            if self.consistent(depth + 1) && self.dfs(depth + 1) {
                return true;
            }
            self.used[t] = false;
            self.perm[i] = usize::MAX;
        }
        false
    }
}

/// Result of [`recover_kleinian`]: `code.permute(perm)` equals
/// `construction_b_code(kleinian)` (coset given) or `construction_a_code(kleinian)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    pub kleinian: KleinianCode,
    pub perm: Vec<usize>,
    /// The disjoint weight-4 words found, in block order, before permuting.
    pub frame: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RecoveryError {
    #[error("code is not doubly-even")]
    NotDoublyEven,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("defect: {0}")]
    Defect(String),
}

/// Disjoint weight-4 words from `words` covering all `n` coordinates, found
/// by depth-first exact cover. Output sorted lexicographically.
fn exact_cover_by_tetrads(n: usize, words: &[u64]) -> Option<Vec<u64>> {
    let mut by_coord: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut tetrads: Vec<u64> = words.iter().copied().filter(|&w| f2::weight(w) == 4).collect();
    tetrads.sort_by(|a, b| f2::lex_cmp(*a, *b));
    tetrads.dedup();
    for &w in &tetrads {
        by_coord[w.trailing_zeros() as usize].push(w);
    }
    fn rec(n: usize, covered: u64, by_coord: &[Vec<u64>], out: &mut Vec<u64>) -> bool {
        if covered == f2::mask(n) {
            return true;
        }
        let first = (!covered).trailing_zeros() as usize;
        for &w in &by_coord[first] {
            if w & covered == 0 {
                out.push(w);
                if rec(n, covered | w, by_coord, out) {
                    return true;
                }
                out.pop();
            }
        }
        false
    }
    let mut out = Vec::new();
    if n.is_multiple_of(4) && rec(n, 0, &by_coord, &mut out) {
        out.sort_by(|a, b| f2::lex_cmp(*a, *b));
        Some(out)
    } else {
        None
    }
}

/// Sends the support of `frame[i]` to block `i`, keeping the natural order
/// inside a block except that coordinate `last[i]` (if given) goes to the end.
fn block_perm(n: usize, frame: &[u64], last: &[Option<usize>]) -> Vec<usize> {
    let mut perm = vec![0usize; n];
    for (b, &w) in frame.iter().enumerate() {
        let mut coords: Vec<usize> = (0..n).filter(|&i| (w >> i) & 1 == 1).collect();
        if let Some(l) = last[b] {
            coords.retain(|&i| i != l);
            coords.push(l);
        }
        for (j, &i) in coords.iter().enumerate() {
            perm[i] = 4 * b + j;
        }
    }
    perm
}

fn read_code(c: &BinaryCode, m: usize) -> Option<KleinianCode> {
    let rows: Option<Vec<u64>> = c.basis.iter().map(|&b| read_kleinian(b, m)).collect();
    Some(KleinianCode::from_bits(m, &rows?))
}

/// Recovers a Kleinian code from a doubly-even binary code.
///
/// Without `x`, looks for `d_4^m` inside `C` up to permutation and returns `K`
/// with `C ~ C(K)`, or `Ok(None)` when no such frame exists. With `x` in
/// `C^perp \ C`, requires `|(x+C)(4)| >= n/4 + |C(4)|` and returns `K` with
/// `C ~ C^+(K)` and `C + F2 x ~ C(K)`.
pub fn recover_kleinian(c: &BinaryCode, x: Option<u64>) -> std::result::Result<Option<Recovery>, RecoveryError> {
    if !c.is_doubly_even() {
        return Err(RecoveryError::NotDoublyEven);
    }
    let n = c.n;
    if !n.is_multiple_of(4) {
        return Err(RecoveryError::HypothesisViolation(format!("length {n} is not a multiple of 4")));
    }
    let m = n / 4;
    let words = c.codewords().map_err(|e| RecoveryError::HypothesisViolation(e.to_string()))?;
    let Some(x) = x else {
        let Some(frame) = exact_cover_by_tetrads(n, &words) else {
            return Ok(None);
        };
        let perm = block_perm(n, &frame, &vec![None; m]);
        let pc = c.permute(&perm);
        let k = read_code(&pc, m).ok_or_else(|| RecoveryError::Defect("block pattern of odd weight".into()))?;
        if construction_a_code(&k) != pc {
            return Err(RecoveryError::Defect("recovered code does not rebuild C".into()));
        }
        return Ok(Some(Recovery { kleinian: k, perm, frame }));
    };

    let x = x & f2::mask(n);
    if c.contains(x) {
        return Err(RecoveryError::HypothesisViolation("x lies in C".into()));
    }
    if c.basis.iter().any(|&b| f2::dot(b, x) == 1) {
        return Err(RecoveryError::HypothesisViolation("x is not in the dual of C".into()));
    }
    let coset4 = words.iter().filter(|&&w| f2::weight(w ^ x) == 4).count();
    let code4 = words.iter().filter(|&&w| f2::weight(w) == 4).count();
    if coset4 < m + code4 {
        return Err(RecoveryError::HypothesisViolation(format!("|(x+C)(4)| = {coset4} < n/4 + |C(4)| = {}", m + code4)));
    }
    let coset: Vec<u64> = words.iter().map(|&w| w ^ x).collect();
    let frame =
        exact_cover_by_tetrads(n, &coset).ok_or_else(|| RecoveryError::Defect("no disjoint weight-4 words in x + C".into()))?;
    let big = c.span_with(&[x]);
    // y cuts C out of C + F2 x; in each block its odd-one-out coordinate goes last
    let y = code_dual(c)
        .basis
        .iter()
        .copied()
        .find(|&y| f2::dot(y, x) == 1)
        .ok_or_else(|| RecoveryError::Defect("no separating dual word".into()))?;
    let last: Vec<Option<usize>> = frame
        .iter()
        .map(|&w| {
            let inside = y & w;
            let pick = if f2::weight(inside) == 1 { inside } else { w & !y };
            Some(pick.trailing_zeros() as usize)
        })
        .collect();
    if frame.iter().any(|&w| f2::weight(y & w).is_multiple_of(2)) {
        return Err(RecoveryError::Defect("separating word has even weight on a block".into()));
    }
    let perm = block_perm(n, &frame, &last);
    let pbig = big.permute(&perm);
    let k = read_code(&pbig, m).ok_or_else(|| RecoveryError::Defect("block pattern of odd weight".into()))?;
    if construction_a_code(&k) != pbig || construction_b_code(&k) != c.permute(&perm) {
        return Err(RecoveryError::Defect("recovered code does not rebuild C".into()));
    }
    Ok(Some(Recovery { kleinian: k, perm, frame }))
}

/// A doubly-even self-dual code containing `c`.
pub fn embed_self_dual(c: &BinaryCode) -> Result<BinaryCode> {
    if !c.is_doubly_even() {
        return Err(Error::Precondition("code is not doubly-even".into()));
    }
    if !c.n.is_multiple_of(8) {
        return Err(Error::Precondition(format!("length {} is not a multiple of 8", c.n)));
    }
    embed_rec(c).ok_or_else(|| Error::Defect("no doubly-even self-dual extension found".into()))
}

fn embed_rec(c: &BinaryCode) -> Option<BinaryCode> {
    if c.is_self_dual() {
        return Some(c.clone());
    }
    let quotient = f2::complement(&c.basis, &code_dual(c).basis);
    if quotient.len() > 22 {
        return None;
    }
    let mut reps: Vec<u64> = Vec::new();
    f2::for_each_in_span(&quotient, |q| {
        let r = f2::reduce(q, &c.basis);
        if r != 0 && f2::weight(r).is_multiple_of(4) {
            reps.push(r);
        }
    });
    reps.sort_by(|a, b| f2::lex_cmp(*a, *b));
    reps.dedup();
    reps.into_iter().find_map(|r| embed_rec(&c.span_with(&[r])))
}

/// Doubly-even codes of length 8 containing `1^8`, one per equivalence class,
/// sorted by dimension.
pub fn enumerate_doubly_even_containing_allones(n: usize) -> Result<Vec<BinaryCode>> {
    if n != 8 {
        return Err(Error::Unsupported(format!("enumeration only at length 8, not {n}")));
    }
    let ones = f2::mask(n);
    let even: Vec<u64> = (1..n).map(|i| 1u64 | (1u64 << i)).collect();
    let quotient = f2::complement(&f2::rref(&[ones]), &even);
    let mut classes: Vec<BinaryCode> = Vec::new();
    f2::for_each_subspace(quotient.len(), |rows| {
        let lifted: Vec<u64> = rows
            .iter()
            .map(|&r| (0..quotient.len()).filter(|&j| (r >> j) & 1 == 1).fold(0, |acc, j| acc ^ quotient[j]))
            .collect();
        let code = BinaryCode::new(n, &[ones]).span_with(&lifted);
        if !code.is_doubly_even() {
            return;
        }
        if classes.iter().any(|k| code_equivalent(k, &code).is_some()) {
            return;
        }
        classes.push(code);
    });
    classes.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| cmp_basis(a, b)));
    Ok(classes)
}

fn cmp_basis(a: &BinaryCode, b: &BinaryCode) -> Ordering {
    for (x, y) in a.basis.iter().zip(&b.basis) {
        match f2::lex_cmp(*x, *y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.basis.len().cmp(&b.basis.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kleinian::{k_enumerate, KPredicate};

    fn kw(s: &str) -> KleinianWord {
        KleinianWord::parse(s).unwrap()
    }

    #[test]
    fn hat_images() {
        assert_eq!(f2::to_bitstring(hat_map(&kw("a")), 4), "1100");
        assert_eq!(hat_map(&kw("0")), 0);
        assert_eq!(f2::to_bitstring(hat_map(&kw("bc")), 8), "10100110");
    }

    #[test]
    fn bundled_codes() {
        for c in [BinaryCode::e8(), BinaryCode::d16plus(), BinaryCode::e8_squared()] {
            assert!(c.is_doubly_even() && c.is_self_dual());
        }
        let e8 = BinaryCode::e8().weight_enumerator().unwrap();
        assert_eq!(e8.coeffs, vec![1, 0, 0, 0, 14, 0, 0, 0, 1]);
        assert_eq!(BinaryCode::d16plus().count_weight(4).unwrap(), 28);
        assert_eq!(BinaryCode::e8_squared().count_weight(4).unwrap(), 28);
        assert!(BinaryCode::d4m0(3).is_doubly_even());
        assert_eq!(BinaryCode::named("(d4^3)0"), Some(BinaryCode::d4m0(3)));
    }

    #[test]
    fn construction_examples() {
        let e2 = KleinianCode::epsilon2();
        let d4 = KleinianCode::delta4_plus();
        let e22 = e2.direct_sum(&e2);
        assert!(code_equivalent(&construction_a_code(&e2), &BinaryCode::e8()).is_some());
        assert!(code_equivalent(&construction_a_code(&e22), &BinaryCode::e8_squared()).is_some());
        assert!(code_equivalent(&construction_a_code(&d4), &BinaryCode::d16plus()).is_some());
        assert!(code_equivalent(&construction_b_code(&e22), &construction_b_code(&d4)).is_some());
        assert!(code_equivalent(&BinaryCode::e8_squared(), &BinaryCode::d16plus()).is_none());
        assert_eq!(construction_b_code(&e22).dim(), 7);
        assert_eq!(construction_a_code(&KleinianCode::zero(3)), BinaryCode::d4m(3));
    }

    #[test]
    fn enumerator_substitution_matches_enumeration() {
        for n in 1..=4 {
            let pred = KPredicate { even: true, ..Default::default() };
            for k in k_enumerate(n, &pred).unwrap() {
                let a = construction_a_code(&k);
                let b = construction_b_code(&k);
                assert_eq!(enumerator_from_kleinian(&k, false).unwrap(), a.weight_enumerator().unwrap());
                assert_eq!(enumerator_from_kleinian(&k, true).unwrap(), b.weight_enumerator().unwrap());
            }
        }
    }

    #[test]
    fn recovery_round_trips() {
        let pred = KPredicate { even: true, ..Default::default() };
        for n in 1..=4 {
            for k in k_enumerate(n, &pred).unwrap() {
                let c = construction_b_code(&k);
                let r = recover_kleinian(&c, Some(0xF)).unwrap().unwrap();
                assert!(crate::kleinian::k_equivalent(&r.kleinian, &k).is_some(), "{k}");
                let r1 = recover_kleinian(&construction_a_code(&k), None).unwrap().unwrap();
                assert!(crate::kleinian::k_equivalent(&r1.kleinian, &k).is_some());
                // equality case of the counting bound
                let coset = coset_weight_enumerator(&CosetLabel::new(c.clone(), 0xF)).unwrap();
                assert_eq!(coset.coeffs[4], n as u64 + c.count_weight(4).unwrap());
            }
        }
        let e8 = BinaryCode::e8();
        assert!(matches!(recover_kleinian(&e8, Some(0b11)), Err(RecoveryError::HypothesisViolation(_))));
    }

    #[test]
    fn self_dual_embedding() {
        let c = BinaryCode::new(8, &[0xFF]);
        let e = embed_self_dual(&c).unwrap();
        assert!(code_equivalent(&e, &BinaryCode::e8()).is_some());
        let e22 = KleinianCode::epsilon2().direct_sum(&KleinianCode::epsilon2());
        let e = embed_self_dual(&construction_b_code(&e22)).unwrap();
        assert!(e.is_self_dual() && e.is_doubly_even());
        assert!(construction_b_code(&e22).is_subcode_of(&e));
        assert_eq!(embed_self_dual(&BinaryCode::e8()).unwrap(), BinaryCode::e8());
    }

    #[test]
    fn four_codes_containing_all_ones() {
        let classes = enumerate_doubly_even_containing_allones(8).unwrap();
        let dims: Vec<usize> = classes.iter().map(|c| c.dim()).collect();
        assert_eq!(dims, vec![1, 2, 3, 4]);
        assert!(code_equivalent(&classes[3], &BinaryCode::e8()).is_some());
    }
}

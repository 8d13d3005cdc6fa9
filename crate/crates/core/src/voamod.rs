//! Irreducible `V_L^+`-modules as symbolic labels, their characters, and
//! the two isomorphism decisions for `V_L^+`.
//!
//! Twisted modules `V_L^{T_chi,+-}` are opaque: for `L*/L = Z_2^k` there are
//! `2^k` indices `chi`, each with `dim T_chi = 2^((n-k)/2)`.

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bincodes::BinaryCode;
use crate::error::{Error, Result};
use crate::lattices::{
    construction_a_lattice, construction_b_lattice, count_by_norm, detect_construction_b, discriminant_group,
    isometry_with_reason, scale_sqrt2, short_vectors, theta_series, DetectError, FrameWitness, Isometry, Lattice, GRID,
};
use crate::qseries::{self, QSeries};

const GRID2: i64 = GRID * GRID;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleLabel {
    /// `V_{lambda+L}^+-` for `lambda` in `L* cap L/2`; `rep` is the reduced
    /// grid vector of the coset, zero for `V_L^+-` itself.
    UntwistedSplit {
        rep: Vec<i64>,
        plus: bool,
    },
    /// `V_{mu+L}` for `mu` in `L* \ L/2`, one label per pair `{mu, -mu}`.
    UntwistedPair {
        rep: Vec<i64>,
    },
    Twisted {
        chi: usize,
        plus: bool,
    },
}

impl ModuleLabel {
    pub fn is_vl(&self) -> bool {
        matches!(self, ModuleLabel::UntwistedSplit { rep, .. } if rep.iter().all(|&x| x == 0))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub labels: Vec<ModuleLabel>,
    /// Set when `L*/L` is not 2-elementary and twisted labels were skipped.
    pub twisted_unsupported: bool,
}

impl Census {
    pub fn count_split(&self) -> usize {
        self.labels.iter().filter(|l| matches!(l, ModuleLabel::UntwistedSplit { .. })).count()
    }

    pub fn count_pairs(&self) -> usize {
        self.labels.iter().filter(|l| matches!(l, ModuleLabel::UntwistedPair { .. })).count()
    }

    pub fn count_twisted(&self) -> usize {
        self.labels.iter().filter(|l| matches!(l, ModuleLabel::Twisted { .. })).count()
    }
}

fn require_even(l: &Lattice) -> Result<()> {
    if l.is_even() {
        Ok(())
    } else {
        Err(Error::Precondition("lattice is not even".into()))
    }
}

pub fn module_census(l: &Lattice) -> Result<Census> {
    require_even(l)?;
    let d = discriminant_group(l)?;
    let mut labels = Vec::new();
    for r in d.elements()? {
        let split = r.iter().zip(&d.factors).all(|(&x, &m)| (2 * x) % m == 0);
        if split {
            let rep = d.element(l, &r);
            labels.push(ModuleLabel::UntwistedSplit { rep: rep.clone(), plus: true });
            labels.push(ModuleLabel::UntwistedSplit { rep, plus: false });
        } else {
            let neg: Vec<i64> = r.iter().zip(&d.factors).map(|(&x, &m)| (m - x) % m).collect();
            if r < neg {
                labels.push(ModuleLabel::UntwistedPair { rep: d.element(l, &r) });
            }
        }
    }
    let twisted_unsupported = match d.two_rank() {
        Some(k) => {
            for chi in 0..1usize << k {
                labels.push(ModuleLabel::Twisted { chi, plus: true });
                labels.push(ModuleLabel::Twisted { chi, plus: false });
            }
            false
        }
        None => true,
    };
    Ok(Census { labels, twisted_unsupported })
}

/// Whether `sqrt(2) L*` is even, i.e. every irreducible `V_L^+`-module is a
/// self-dual simple current.
pub fn all_self_dual_simple_current(l: &Lattice) -> Result<bool> {
    Ok(scale_sqrt2(&l.dual()?).is_even())
}

/// `Some(false)` for pair labels, `Some(true)` for `V_L^+-` and whenever all
/// modules are simple currents; `None` where the label alone does not decide.
pub fn is_simple_current(label: &ModuleLabel, l: &Lattice) -> Result<Option<bool>> {
    if matches!(label, ModuleLabel::UntwistedPair { .. }) {
        return Ok(Some(false));
    }
    if label.is_vl() || all_self_dual_simple_current(l)? {
        return Ok(Some(true));
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FusionGroupInfo {
    pub order: u64,
    pub elementary_2: bool,
    /// `L*/L = Z_2^k`.
    pub k: usize,
}

pub fn fusion_group(l: &Lattice) -> Result<FusionGroupInfo> {
    require_even(l)?;
    if !all_self_dual_simple_current(l)? {
        return Err(Error::Precondition("sqrt(2) L* is not even".into()));
    }
    let d = discriminant_group(l)?;
    let k = d.two_rank().ok_or_else(|| Error::Defect("sqrt(2) L* even but L*/L not 2-elementary".into()))?;
    Ok(FusionGroupInfo { order: 1 << (k + 2), elementary_2: true, k })
}

/// `dim T_chi = 2^((n-k)/2)` for `L*/L = Z_2^k`.
pub fn twisted_dimension(l: &Lattice) -> Result<u64> {
    let k = discriminant_group(l)?
        .two_rank()
        .ok_or_else(|| Error::Unsupported("twisted modules need a 2-elementary discriminant group".into()))?;
    let n = l.rank();
    if !(n - k).is_multiple_of(2) {
        return Err(Error::Unsupported(format!("rank {n} and 2-rank {k} have different parity")));
    }
    Ok(1 << ((n - k) / 2))
}

/// Smallest norm in `v + L`.
fn coset_min_norm(l: &Lattice, v: &[i64]) -> Result<Ratio<i64>> {
    let mut bound = Ratio::from_integer(2);
    loop {
        let groups = short_vectors(l, Some(v), bound)?;
        if let Some(g) = groups.first() {
            return Ok(g.norm);
        }
        bound *= 2;
    }
}

pub fn lowest_weight(label: &ModuleLabel, l: &Lattice) -> Result<Ratio<i64>> {
    match label {
        ModuleLabel::UntwistedSplit { rep, plus } if rep.iter().all(|&x| x == 0) => {
            Ok(Ratio::from_integer(if *plus { 0 } else { 1 }))
        }
        ModuleLabel::UntwistedSplit { rep, .. } | ModuleLabel::UntwistedPair { rep } => Ok(coset_min_norm(l, rep)? / 2),
        ModuleLabel::Twisted { plus, .. } => {
            let h = Ratio::new(l.rank() as i64, 16);
            Ok(if *plus { h } else { h + Ratio::new(1, 2) })
        }
    }
}

/// Character through `q^n` (weights up to `n`, before the `q^(-rank/24)` shift).
pub fn character_of(label: &ModuleLabel, l: &Lattice, n: i64) -> Result<QSeries> {
    let rank = l.rank() as u32;
    match label {
        ModuleLabel::UntwistedSplit { rep, plus } if rep.iter().all(|&x| x == 0) => {
            qseries::ch_vl_sign(&theta_series(l, None, n)?, rank, *plus)
        }
        ModuleLabel::UntwistedSplit { rep, .. } => qseries::ch_untwisted_pm(&theta_series(l, Some(rep), n)?, rank),
        ModuleLabel::UntwistedPair { rep } => qseries::ch_lattice(&theta_series(l, Some(rep), n)?, rank),
        ModuleLabel::Twisted { plus, .. } => qseries::ch_twisted_pm(rank, twisted_dimension(l)?, *plus, n),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Isomorphic,
    ExceptionalPair,
    NotIsomorphic,
    CodeLatticePair,
}

/// An invariant on which two lattices (or modules) disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Distinction {
    /// Number of vectors of norm `norm64 / 64`.
    Theta {
        norm64: i64,
        left: u64,
        right: u64,
    },
    Discriminant {
        left: Vec<i64>,
        right: Vec<i64>,
    },
    FusionGroup {
        left: Option<u64>,
        right: Option<u64>,
    },
    /// Same theta series and discriminant group, not isometric.
    NonIsometric {
        reason: String,
    },
    /// Weight `w` coefficient of `ch V_L^+` against `ch V_N`.
    Character {
        weight: i64,
        left: i128,
        right: i128,
    },
    /// Best norm-2 count over cosets `lambda + N` with `2 lambda` in `N`,
    /// against `|N(2)| + 2n`.
    Counting {
        best: u64,
        needed: u64,
    },
    /// `N = L^+(C)` was found but `L` is not isometric to `L(C)`.
    CodeMismatch {
        code: Vec<String>,
        reason: String,
    },
}

#[derive(Clone, Debug)]
pub enum Certificate {
    Isometry(Isometry),
    Unimodular { rank: usize, reason: String },
    Distinction(Distinction),
    Code { code: BinaryCode, lambda: Vec<i64>, frame: FrameWitness, to_full: Isometry, to_plus: Isometry },
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub certificate: Certificate,
    pub invariants_checked: Vec<String>,
    pub trace: Option<Vec<String>>,
}

impl Verdict {
    /// Re-checks the certificate against the pair it was issued for.
    pub fn verify(&self, l: &Lattice, n: &Lattice) -> Result<bool> {
        Ok(match (&self.outcome, &self.certificate) {
            (Outcome::Isomorphic, Certificate::Isometry(t)) => t.verify(l, n),
            (Outcome::ExceptionalPair, Certificate::Unimodular { rank, .. }) => {
                *rank == 16
                    && [l, n].iter().all(|x| x.rank() == 16 && x.is_even() && x.is_unimodular())
                    && isometry_with_reason(l, n)?.0.is_none()
            }
            (Outcome::NotIsomorphic, Certificate::Distinction(d)) => verify_distinction(d, l, n)?,
            (Outcome::CodeLatticePair, Certificate::Code { code, lambda, frame, to_full, to_plus }) => {
                let full = construction_a_lattice(code)?;
                let plus = construction_b_lattice(code)?;
                code.is_doubly_even() && frame.verify(n, lambda) && to_full.verify(l, &full) && to_plus.verify(n, &plus)
            }
            _ => false,
        })
    }

    pub fn to_json(&self, l: &Lattice, n: &Lattice) -> Value {
        let certificate = match &self.certificate {
            Certificate::Isometry(t) => json!({ "isometry": t.to_json(n) }),
            Certificate::Unimodular { rank, reason } => json!({
                "rank": rank,
                "det": [1, 1],
                "even": [true, true],
                "non_isometric": reason,
            }),
            Certificate::Distinction(d) => json!({ "distinction": d }),
            Certificate::Code { code, lambda, frame, to_full, to_plus } => json!({
                "code": code.rows_as_strings(),
                "lambda": lambda,
                "frame": frame.frame,
                "to_construction_a": to_full.to_json(&construction_a_lattice(code).expect("code lattice")),
                "to_construction_b": to_plus.to_json(&construction_b_lattice(code).expect("code lattice")),
            }),
        };
        let _ = l;
        let mut v = json!({
            "outcome": self.outcome,
            "certificate": certificate,
            "invariants_checked": self.invariants_checked,
        });
        if let Some(t) = &self.trace {
            v["trace"] = json!(t);
        }
        v
    }
}

fn fusion_order(l: &Lattice) -> Result<Option<u64>> {
    Ok(if all_self_dual_simple_current(l)? { Some(fusion_group(l)?.order) } else { None })
}

fn verify_distinction(d: &Distinction, l: &Lattice, n: &Lattice) -> Result<bool> {
    Ok(match d {
        Distinction::Theta { norm64, left, right } => {
            left != right
                && count_by_norm(l, None, *norm64)?[*norm64 as usize] == *left
                && count_by_norm(n, None, *norm64)?[*norm64 as usize] == *right
        }
        Distinction::Discriminant { left, right } => {
            left != right && discriminant_group(l)?.factors == *left && discriminant_group(n)?.factors == *right
        }
        Distinction::FusionGroup { left, right } => left != right && fusion_order(l)? == *left && fusion_order(n)? == *right,
        Distinction::NonIsometric { .. } => isometry_with_reason(l, n)?.0.is_none(),
        Distinction::Character { weight, left, right } => {
            let w = *weight;
            left != right
                && weight_coeff(&character_of(&vl_plus(l), l, w)?, w, l.rank()) == *left
                && weight_coeff(&ch_full(n, w)?, w, n.rank()) == *right
        }
        Distinction::Counting { best, needed } => {
            best < needed && mixed_candidates(n)?.iter().map(|c| c.1).max().unwrap_or(0) == *best
        }
        Distinction::CodeMismatch { code, .. } => {
            let rows: Option<Vec<u64>> = code.iter().map(|s| crate::f2::from_bitstring(s)).collect();
            match rows {
                Some(rows) => {
                    let c = BinaryCode::new(l.rank(), &rows);
                    isometry_with_reason(l, &construction_a_lattice(&c)?)?.0.is_none()
                }
                None => false,
            }
        }
    })
}

fn vl_plus(l: &Lattice) -> ModuleLabel {
    ModuleLabel::UntwistedSplit { rep: vec![0; l.rank()], plus: true }
}

fn ch_full(l: &Lattice, n: i64) -> Result<QSeries> {
    qseries::ch_vl(&theta_series(l, None, n)?, l.rank() as u32)
}

/// Coefficient of weight `w` (grid exponent `48 w - 2 rank`).
pub fn weight_coeff(s: &QSeries, w: i64, rank: usize) -> i128 {
    s.coeff(qseries::GRID * w - 2 * rank as i64).unwrap_or(0)
}

fn theta_distinction(l: &Lattice, n: &Lattice, prec: i64) -> Result<Option<Distinction>> {
    let max64 = 2 * prec * GRID2;
    let a = count_by_norm(l, None, max64)?;
    let b = count_by_norm(n, None, max64)?;
    Ok(a.iter().zip(&b).enumerate().find(|(_, (x, y))| x != y).map(|(m, (x, y))| Distinction::Theta {
        norm64: m as i64,
        left: *x,
        right: *y,
    }))
}

/// Decides `V_L^+ = V_N^+` for even lattices of equal rank: isometric
/// lattices, or two even unimodular lattices of rank 16.
pub fn classify_pair_plus(l: &Lattice, n: &Lattice, prec: i64, trace: bool) -> Result<Verdict> {
    if l.rank() != n.rank() {
        return Err(Error::RankMismatch(l.rank(), n.rank()));
    }
    require_even(l)?;
    require_even(n)?;
    let mut checked = vec!["isometry".to_string()];
    let tr = if trace { Some(plus_trace(l, n)?) } else { None };
    let (iso, reason) = isometry_with_reason(l, n)?;
    if let Some(t) = iso {
        return Ok(Verdict {
            outcome: Outcome::Isomorphic,
            certificate: Certificate::Isometry(t),
            invariants_checked: checked,
            trace: tr,
        });
    }
    let reason = reason.unwrap_or_default();
    checked.push("unimodular rank 16".into());
    if l.rank() == 16 && l.is_unimodular() && n.is_unimodular() {
        return Ok(Verdict {
            outcome: Outcome::ExceptionalPair,
            certificate: Certificate::Unimodular { rank: 16, reason },
            invariants_checked: checked,
            trace: tr,
        });
    }
    checked.push("theta".into());
    let d = if let Some(d) = theta_distinction(l, n, prec)? {
        d
    } else {
        checked.push("discriminant".into());
        let (fl, fr) = (discriminant_group(l)?.factors, discriminant_group(n)?.factors);
        if fl != fr {
            Distinction::Discriminant { left: fl, right: fr }
        } else {
            checked.push("fusion group".into());
            let (gl, gr) = (fusion_order(l)?, fusion_order(n)?);
            if gl != gr {
                Distinction::FusionGroup { left: gl, right: gr }
            } else {
                Distinction::NonIsometric { reason }
            }
        }
    };
    Ok(Verdict {
        outcome: Outcome::NotIsomorphic,
        certificate: Certificate::Distinction(d),
        invariants_checked: checked,
        trace: tr,
    })
}

/// Replays the four possibilities for `V_N^-` as a `V_L^+`-module, with
/// untwisted signs taken to be `+`.
fn plus_trace(l: &Lattice, n: &Lattice) -> Result<Vec<String>> {
    let rank = l.rank() as u64;
    let l2 = count_by_norm(l, None, 2 * GRID2)?[2 * GRID2 as usize];
    let n2 = count_by_norm(n, None, 2 * GRID2)?[2 * GRID2 as usize];
    let mut out = vec![format!("|L(2)| = {l2}, |N(2)| = {n2}, n = {rank}")];
    out.push(format!("(i) V_N^- = V_L^-: weight-one dimensions {} and {}", rank + n2 / 2, rank + l2 / 2));
    let best = mixed_candidates(l)?.iter().map(|c| c.1).max();
    match best {
        Some(b) => {
            out.push(format!("(ii) V_N^- = V_{{lambda+L}}^+: best |(lambda+L)(2)| = {b}, |L(2)| + 2n = {}", l2 + 2 * rank))
        }
        None => out.push("(ii) no coset lambda + L with 2 lambda in L".into()),
    }
    let sd = all_self_dual_simple_current(l)?;
    out.push(format!("(iii) V_N^- = V_L^(T,-): lowest weight n/16 + 1/2 = 1 needs n = 8 (n = {rank}); sqrt(2) L* even: {sd}"));
    if sd && rank == 16 {
        let d = discriminant_group(l)?;
        let k2 = d.two_rank().unwrap_or(0);
        if k2 % 2 == 0 {
            let k = k2 as u32 / 2;
            let want = (1i64 << (9 - k)) - 32;
            out.push(format!("(iv) V_N^- = V_L^(T,+): |L*/L| = 2^{k2}, needs |L(2)| = 2^(9-{k}) - 32 = {want}; found {l2}"));
        }
    } else {
        out.push(format!("(iv) V_N^- = V_L^(T,+): lowest weight n/16 = 1 needs n = 16 and sqrt(2) L* even (n = {rank})"));
    }
    Ok(out)
}

/// Cosets `lambda + N` with `2 lambda` in `N`, `lambda` outside `N`, and
/// their norm-2 counts, strongest first.
fn mixed_candidates(n: &Lattice) -> Result<Vec<(Vec<i64>, u64)>> {
    let d = discriminant_group(n)?;
    let mut out = Vec::new();
    for r in d.elements()? {
        let zero = r.iter().all(|&x| x == 0);
        let split = r.iter().zip(&d.factors).all(|(&x, &m)| (2 * x) % m == 0);
        if zero || !split {
            continue;
        }
        let v = d.element(n, &r);
        let c = count_by_norm(n, Some(&v), 2 * GRID2)?[2 * GRID2 as usize];
        out.push((v, c));
    }
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Decides `V_L^+ = V_N` for even lattices of equal rank: it holds exactly
/// when `L = L(C)` and `N = L^+(C)` for a doubly even code `C`.
pub fn classify_pair_mixed(l: &Lattice, n: &Lattice, prec: i64, trace: bool) -> Result<Verdict> {
    if l.rank() != n.rank() {
        return Err(Error::RankMismatch(l.rank(), n.rank()));
    }
    require_even(l)?;
    require_even(n)?;
    let rank = n.rank() as u64;
    let mut log = Vec::new();
    let mut checked = vec!["character".to_string()];
    let a = character_of(&vl_plus(l), l, prec)?;
    let b = ch_full(n, prec)?;
    for w in 0..=prec {
        let (x, y) = (weight_coeff(&a, w, l.rank()), weight_coeff(&b, w, n.rank()));
        if x != y {
            log.push(format!("weight {w}: ch V_L^+ = {x}, ch V_N = {y}"));
            return Ok(Verdict {
                outcome: Outcome::NotIsomorphic,
                certificate: Certificate::Distinction(Distinction::Character { weight: w, left: x, right: y }),
                invariants_checked: checked,
                trace: trace.then_some(log),
            });
        }
    }
    checked.push("coset counting".into());
    let n2 = count_by_norm(n, None, 2 * GRID2)?[2 * GRID2 as usize];
    let needed = n2 + 2 * rank;
    let cands = mixed_candidates(n)?;
    let best = cands.first().map_or(0, |c| c.1);
    log.push(format!("|N(2)| + 2n = {needed}, best coset count {best}"));
    let mut mismatch = None;
    for (lambda, c) in cands.iter().filter(|c| c.1 >= needed) {
        checked.push("construction B frame".into());
        let frame = match detect_construction_b(n, lambda) {
            Ok(f) => f,
            Err(DetectError::Defect(msg)) => return Err(Error::Defect(msg)),
            Err(e) => return Err(Error::Defect(e.to_string())),
        };
        log.push(format!("coset with {c} norm-2 vectors gives a code of dimension {}", frame.code.dim()));
        let full = construction_a_lattice(&frame.code)?;
        let plus = construction_b_lattice(&frame.code)?;
        let (to_full, why) = isometry_with_reason(l, &full)?;
        let Some(to_full) = to_full else {
            mismatch = Some(Distinction::CodeMismatch { code: frame.code.rows_as_strings(), reason: why.unwrap_or_default() });
            continue;
        };
        let to_plus = isometry_with_reason(n, &plus)?
            .0
            .ok_or_else(|| Error::Defect("frame image is not isometric to the construction".into()))?;
        return Ok(Verdict {
            outcome: Outcome::CodeLatticePair,
            certificate: Certificate::Code { code: frame.code.clone(), lambda: lambda.clone(), frame, to_full, to_plus },
            invariants_checked: checked,
            trace: trace.then_some(log),
        });
    }
    let d = mismatch.unwrap_or(Distinction::Counting { best, needed });
    Ok(Verdict {
        outcome: Outcome::NotIsomorphic,
        certificate: Certificate::Distinction(d),
        invariants_checked: checked,
        trace: trace.then_some(log),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::direct_sum;

    fn e8sq() -> Lattice {
        direct_sum(&Lattice::e8(), &Lattice::e8())
    }

    #[test]
    fn census_sizes() {
        let c = module_census(&Lattice::e8()).unwrap();
        assert_eq!(c.labels.len(), 4);
        let s = scale_sqrt2(&Lattice::e8());
        let c = module_census(&s).unwrap();
        assert_eq!((c.count_split(), c.count_pairs(), c.count_twisted()), (512, 0, 512));
        assert_eq!(fusion_group(&s).unwrap().order, 1024);
        let b4 = Lattice::from_generators(vec![4], &[vec![8]]).unwrap();
        let c = module_census(&direct_sum(&Lattice::e8(), &b4)).unwrap();
        assert_eq!((c.count_split(), c.count_pairs()), (4, 1));
        assert!(c.twisted_unsupported);
    }

    #[test]
    fn simple_currents() {
        let ab = Lattice::from_generators(vec![2, 4], &[vec![8, 0], vec![0, 8]]).unwrap();
        assert!(!all_self_dual_simple_current(&ab).unwrap());
        assert!(all_self_dual_simple_current(&scale_sqrt2(&Lattice::e8())).unwrap());
        assert_eq!(is_simple_current(&ModuleLabel::UntwistedPair { rep: vec![0; 8] }, &Lattice::e8()).unwrap(), Some(false));
    }

    #[test]
    fn weights_and_characters() {
        let e8 = Lattice::e8();
        let minus = ModuleLabel::UntwistedSplit { rep: vec![0; 8], plus: false };
        assert_eq!(lowest_weight(&minus, &e8).unwrap(), Ratio::from_integer(1));
        assert_eq!(lowest_weight(&ModuleLabel::Twisted { chi: 0, plus: true }, &e8).unwrap(), Ratio::new(1, 2));
        let p = character_of(&vl_plus(&e8), &e8, 3).unwrap();
        let m = character_of(&minus, &e8, 3).unwrap();
        assert_eq!(weight_coeff(&p, 1, 8), 120);
        assert_eq!(weight_coeff(&m, 1, 8), 128);
        assert!(p.add(&m).agrees_with(&ch_full(&e8, 3).unwrap()));
        let t = character_of(&ModuleLabel::Twisted { chi: 0, plus: true }, &e8, 3).unwrap();
        assert!(t.is_nonnegative());
    }

    #[test]
    fn plus_verdicts() {
        let d16 = construction_a_lattice(&BinaryCode::d16plus()).unwrap();
        let v = classify_pair_plus(&e8sq(), &d16, 4, true).unwrap();
        assert_eq!(v.outcome, Outcome::ExceptionalPair);
        assert!(v.verify(&e8sq(), &d16).unwrap());
        let lp = construction_b_lattice(&BinaryCode::e8()).unwrap();
        let s = scale_sqrt2(&Lattice::e8());
        let v = classify_pair_plus(&lp, &s, 4, false).unwrap();
        assert_eq!(v.outcome, Outcome::NotIsomorphic);
        assert!(matches!(v.certificate, Certificate::Distinction(Distinction::Theta { norm64: 128, left: 112, right: 0 })));
        assert!(v.verify(&lp, &s).unwrap());
    }

    #[test]
    fn mixed_verdicts() {
        let c = BinaryCode::e8();
        let (full, plus) = (construction_a_lattice(&c).unwrap(), construction_b_lattice(&c).unwrap());
        let v = classify_pair_mixed(&full, &plus, 4, false).unwrap();
        assert_eq!(v.outcome, Outcome::CodeLatticePair);
        assert!(v.verify(&full, &plus).unwrap());
        let e8 = Lattice::e8();
        let v = classify_pair_mixed(&e8, &e8, 4, false).unwrap();
        assert_eq!(v.outcome, Outcome::NotIsomorphic);
        assert!(v.verify(&e8, &e8).unwrap());
    }
}

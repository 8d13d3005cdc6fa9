//! Named verifications run by the `kleinlat verify` command and the
//! acceptance suite. Each check is deterministic and returns a [`Report`]
//! with a JSON certificate.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bincodes::{
    code_equivalent, construction_a_code, construction_b_code, coset_weight_enumerator, enumerate_doubly_even_containing_allones,
    enumerator_from_kleinian, recover_kleinian, BinaryCode, CosetLabel, Recovery, RecoveryError,
};
use crate::error::{Error, Result};
use crate::f2;
use crate::intmat;
use crate::kleinian::{k_enumerate, k_equivalent, KPredicate, KWeightEnumerator, KleinianCode};
use crate::lattices::{
    construction_a_lattice, construction_b_lattice, count_by_norm, direct_sum, discriminant_group, even_overlattices,
    isometry_with_reason, lattice_isometric, rho_isomorphism, scale_sqrt2, theta_series, Lattice, GRID,
};
use crate::qseries::{self, through, QSeries};
use crate::text;
use crate::voamod::{all_self_dual_simple_current, classify_pair_mixed, classify_pair_plus, weight_coeff, Outcome, Verdict};

const GRID2: i64 = GRID * GRID;
const NORM2: usize = (2 * GRID2) as usize;

/// Registered check ids in run order.
pub const CHECK_IDS: &[&str] = &[
    "lemma-LHo1",
    "construction-identities",
    "code-counts",
    "recovery",
    "lattice-identities",
    "isometry",
    "overlattices",
    "characters",
    "thm-MTT",
    "table2-row:L(C)~L(D)",
    "table2-row:VL~VN",
    "table2-row:L+(C)~L+(D)",
    "table2-row:VL+~VN+",
    "table2-row:L+(C)~L(D)",
    "table2-row:VL+~VN",
    "properties",
];

#[derive(Clone, Copy, Debug)]
pub struct Params {
    /// Series and theta comparisons run through `q^precision`.
    pub precision: i64,
    pub trace: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params { precision: 10, trace: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Defect,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub id: String,
    pub status: Status,
    pub millis: u128,
    pub certificate: Value,
    pub failures: Vec<String>,
}

impl Report {
    /// JSON without the timing field, for byte-for-byte comparisons.
    pub fn stable_json(&self) -> Value {
        json!({ "id": self.id, "status": self.status, "certificate": self.certificate, "failures": self.failures })
    }
}

struct Ctx {
    params: Params,
    cert: Map<String, Value>,
    failures: Vec<String>,
}

impl Ctx {
    fn expect(&mut self, ok: bool, what: impl Into<String>) -> bool {
        if !ok {
            self.failures.push(what.into());
        }
        ok
    }

    fn put(&mut self, key: &str, v: Value) {
        self.cert.insert(key.to_string(), v);
    }
}

pub fn is_registered(id: &str) -> bool {
    CHECK_IDS.contains(&id)
}

pub fn run_check(id: &str, params: &Params) -> Result<Report> {
    let f: fn(&mut Ctx) -> Result<()> = match id {
        "lemma-LHo1" => lemma_lho1,
        "construction-identities" => construction_identities,
        "code-counts" => code_counts,
        "recovery" => recovery,
        "lattice-identities" => lattice_identities,
        "isometry" => isometry,
        "overlattices" => overlattices,
        "characters" => characters,
        "thm-MTT" | "table2-row:L+(C)~L+(D)" => plus_lattices_of_codes,
        "table2-row:L(C)~L(D)" => lattices_of_codes,
        "table2-row:VL~VN" => lattice_voas,
        "table2-row:VL+~VN+" => plus_voas,
        "table2-row:L+(C)~L(D)" => mixed_lattices_of_codes,
        "table2-row:VL+~VN" => mixed_voas,
        "properties" => properties,
        _ => return Err(Error::Unsupported(format!("unknown check id {id:?}"))),
    };
    let start = Instant::now();
    let mut ctx = Ctx { params: *params, cert: Map::new(), failures: Vec::new() };
    let status = match f(&mut ctx) {
        Ok(()) if ctx.failures.is_empty() => Status::Pass,
        Ok(()) => Status::Fail,
        Err(Error::Defect(msg)) => {
            ctx.failures.push(format!("defect: {msg}"));
            Status::Defect
        }
        Err(e) => {
            ctx.failures.push(format!("error: {e}"));
            Status::Fail
        }
    };
    Ok(Report {
        id: id.to_string(),
        status,
        millis: start.elapsed().as_millis(),
        certificate: Value::Object(ctx.cert),
        failures: ctx.failures,
    })
}

/// Runs `ids` on up to `jobs` threads; reports come back in `ids` order.
pub fn run_batch(ids: &[String], params: &Params, jobs: usize) -> Result<Vec<Report>> {
    if let Some(bad) = ids.iter().find(|id| !is_registered(id)) {
        return Err(Error::Unsupported(format!("unknown check id {bad:?}")));
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Result<Report>>>> = ids.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1).min(ids.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= ids.len() {
                    break;
                }
                let r = run_check(&ids[i], params);
                *slots[i].lock().expect("report slot") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("report slot").expect("every slot filled")).collect()
}

// ---------------------------------------------------------------- corpora

/// Named Kleinian codes: `eps2`, `eps2^2`, `delta4+` and the even length-4
/// codes with enumerator `W_k` (k = 5..8).
pub fn kleinian_corpus() -> Result<Vec<(String, KleinianCode)>> {
    let e2 = KleinianCode::epsilon2();
    let e22 = e2.direct_sum(&e2);
    let d4 = KleinianCode::delta4_plus();
    let mut out = vec![("eps2".to_string(), e2)];
    for (i, k) in wk_classes()?.into_iter().enumerate() {
        let name = if k_equivalent(&k, &e22).is_some() {
            "eps2^2".to_string()
        } else if k_equivalent(&k, &d4).is_some() {
            "delta4+".to_string()
        } else {
            let e = k.weight_enumerator()?;
            let fam = (5..=8).find(|&j| KWeightEnumerator::family_wk(j) == e).unwrap_or(0);
            format!("W{fam}#{i}")
        };
        out.push((name, k));
    }
    Ok(out)
}

/// Even Kleinian codes of length 4 whose enumerator is `W_k` for some k.
pub fn wk_classes() -> Result<Vec<KleinianCode>> {
    let pred = KPredicate { even: true, self_dual: false, enumerators: (5..=8).map(KWeightEnumerator::family_wk).collect() };
    k_enumerate(4, &pred)
}

/// Doubly even codes of length 8 and 16 used for the code-to-lattice rows.
pub fn code_corpus() -> Result<Vec<(String, BinaryCode)>> {
    let mut out = vec![
        ("zero8".to_string(), BinaryCode::zero(8)),
        ("e8".to_string(), BinaryCode::e8()),
        ("C+(eps2)".to_string(), construction_b_code(&KleinianCode::epsilon2())),
    ];
    for c in enumerate_doubly_even_containing_allones(8)? {
        if c.dim() < 3 {
            out.push((format!("1^8-dim{}", c.dim()), c));
        }
    }
    out.push(("e8^2".into(), BinaryCode::e8_squared()));
    out.push(("d16+".into(), BinaryCode::d16plus()));
    for (name, k) in kleinian_corpus()? {
        if k.len() == 4 {
            out.push((format!("C+({name})"), construction_b_code(&k)));
        }
    }
    Ok(out)
}

/// Named even lattices of rank 8 and 16.
pub fn lattice_corpus() -> Result<Vec<(String, Lattice)>> {
    let e8 = Lattice::e8();
    let s8 = scale_sqrt2(&e8);
    let lb = |c: &BinaryCode| construction_b_lattice(c);
    let la = |c: &BinaryCode| construction_a_lattice(c);
    let cp2 = construction_b_code(&KleinianCode::epsilon2());
    Ok(vec![
        ("E8".into(), e8.clone()),
        ("sqrt2E8".into(), s8.clone()),
        ("L+(e8)".into(), lb(&BinaryCode::e8())?),
        ("A1^8".into(), Lattice::frame(8)),
        ("L(C+(eps2))".into(), la(&cp2)?),
        ("E8^2".into(), direct_sum(&e8, &e8)),
        ("D16+".into(), la(&BinaryCode::d16plus())?),
        ("L+(e8^2)".into(), lb(&BinaryCode::e8_squared())?),
        ("L+(d16+)".into(), lb(&BinaryCode::d16plus())?),
        ("E8+sqrt2E8".into(), direct_sum(&e8, &s8)),
        ("sqrt2E8^2".into(), direct_sum(&s8, &s8)),
    ])
}

fn lattice(name: &str) -> Result<Lattice> {
    lattice_corpus()?
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|x| x.1)
        .ok_or_else(|| Error::Defect(format!("corpus lattice {name} missing")))
}

/// Non-isometric pairs of equal rank for the `V_L^+` row.
pub const CURATED_PAIRS: [(&str, &str); 10] = [
    ("L+(e8)", "sqrt2E8"),
    ("E8", "L+(e8)"),
    ("E8", "sqrt2E8"),
    ("sqrt2E8", "A1^8"),
    ("L+(e8)", "A1^8"),
    ("E8^2", "L+(e8^2)"),
    ("D16+", "L+(d16+)"),
    ("E8+sqrt2E8", "sqrt2E8^2"),
    ("L+(e8^2)", "E8+sqrt2E8"),
    ("L(C+(eps2))", "sqrt2E8"),
];

fn words(k: &KleinianCode) -> Value {
    json!(k.basis().iter().map(|w| w.to_string()).collect::<Vec<_>>())
}

/// `K` with `D = C^+(K)`, locating the coset `x + D` in `D^perp` by the
/// count `|(x+D)(4)| = n/4 + |D(4)|`.
pub fn recover_plus(d: &BinaryCode) -> std::result::Result<Option<Recovery>, RecoveryError> {
    let n = d.len();
    if !n.is_multiple_of(4) {
        return Ok(None);
    }
    let d4 = d.count_weight(4).map_err(|e| RecoveryError::Defect(e.to_string()))?;
    let comp = f2::complement(d.basis(), d.dual().basis());
    let mut found = None;
    f2::for_each_in_span(&comp, |x| {
        if found.is_some() || x == 0 {
            return;
        }
        let ok = coset_weight_enumerator(&CosetLabel::new(d.clone(), x))
            .map(|c| c.coeffs.get(4).copied().unwrap_or(0) == n as u64 / 4 + d4)
            .unwrap_or(false);
        if ok {
            found = Some(x);
        }
    });
    match found {
        Some(x) => recover_kleinian(d, Some(x)),
        None => Ok(None),
    }
}

// ---------------------------------------------------------------- codes

fn lemma_lho1(ctx: &mut Ctx) -> Result<()> {
    let pred = KPredicate::even_self_dual();
    let c2 = k_enumerate(2, &pred)?;
    let c4 = k_enumerate(4, &pred)?;
    ctx.expect(c2.len() == 1, format!("n=2: {} classes, expected 1", c2.len()));
    ctx.expect(c4.len() == 2, format!("n=4: {} classes, expected 2", c4.len()));
    ctx.expect(c2.iter().all(|k| k_equivalent(k, &KleinianCode::epsilon2()).is_some()), "n=2 class is not eps2");
    let e22 = KleinianCode::epsilon2().direct_sum(&KleinianCode::epsilon2());
    let d4 = KleinianCode::delta4_plus();
    let hit = |t: &KleinianCode| c4.iter().filter(|k| k_equivalent(k, t).is_some()).count() == 1;
    ctx.expect(hit(&e22) && hit(&d4), "n=4 classes are not eps2^2 and delta4+");
    ctx.put("n2", json!(c2.iter().map(words).collect::<Vec<_>>()));
    ctx.put("n4", json!(c4.iter().map(words).collect::<Vec<_>>()));
    Ok(())
}

fn construction_identities(ctx: &mut Ctx) -> Result<()> {
    let e2 = KleinianCode::epsilon2();
    let e22 = e2.direct_sum(&e2);
    let d4 = KleinianCode::delta4_plus();
    let pairs: [(&str, BinaryCode, BinaryCode); 4] = [
        ("C(eps2) ~ e8", construction_a_code(&e2), BinaryCode::e8()),
        ("C(eps2^2) ~ e8^2", construction_a_code(&e22), BinaryCode::e8_squared()),
        ("C(delta4+) ~ d16+", construction_a_code(&d4), BinaryCode::d16plus()),
        ("C+(eps2^2) ~ C+(delta4+)", construction_b_code(&e22), construction_b_code(&d4)),
    ];
    let mut perms = Map::new();
    for (name, a, b) in pairs {
        match code_equivalent(&a, &b) {
            Some(p) => {
                ctx.expect(a.permute(&p) == b, format!("{name}: permutation does not verify"));
                perms.insert(name.to_string(), json!(p));
            }
            None => {
                ctx.expect(false, format!("{name}: not equivalent"));
            }
        }
    }
    ctx.put("equivalences", Value::Object(perms));
    let mut checked = 0;
    let pred = KPredicate { even: true, ..Default::default() };
    for n in 1..=4 {
        for k in k_enumerate(n, &pred)? {
            for plus in [false, true] {
                let code = if plus { construction_b_code(&k) } else { construction_a_code(&k) };
                let direct = code.weight_enumerator()?;
                let subst = enumerator_from_kleinian(&k, plus)?;
                ctx.expect(
                    direct == subst,
                    format!(
                        "enumerator substitution fails for {} (plus={plus})",
                        k.basis().iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
                    ),
                );
            }
            checked += 1;
        }
    }
    ctx.put("even_kleinian_classes_checked", json!(checked));
    Ok(())
}

fn code_counts(ctx: &mut Ctx) -> Result<()> {
    let e = BinaryCode::e8_squared().count_weight(4)?;
    let d = BinaryCode::d16plus().count_weight(4)?;
    ctx.expect(e == 28 && d == 28, format!("|E(4)|: e8^2 {e}, d16+ {d}, expected 28"));
    let classes = enumerate_doubly_even_containing_allones(8)?;
    ctx.expect(classes.len() == 4, format!("{} doubly even length-8 classes containing 1^8, expected 4", classes.len()));
    let wk = wk_classes()?;
    ctx.expect(wk.len() == 4, format!("{} even length-4 Kleinian classes with enumerator W_k, expected 4", wk.len()));
    ctx.put("E4", json!({ "e8^2": e, "d16+": d }));
    ctx.put("doubly_even_8_with_all_ones", json!(classes.iter().map(|c| c.rows_as_strings()).collect::<Vec<_>>()));
    ctx.put("wk_classes", json!(wk.iter().map(|k| json!({ "size": k.size(), "basis": words(k) })).collect::<Vec<_>>()));
    Ok(())
}

fn recovery(ctx: &mut Ctx) -> Result<()> {
    let pred = KPredicate { even: true, ..Default::default() };
    let mut rows = Vec::new();
    for n in 1..=4usize {
        for k in k_enumerate(n, &pred)? {
            let c = construction_b_code(&k);
            let name = if k.f2_rank() == 0 {
                "0".repeat(n)
            } else {
                k.basis().iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
            };
            match recover_kleinian(&c, Some(0xF)) {
                Ok(Some(r)) => {
                    ctx.expect(k_equivalent(&r.kleinian, &k).is_some(), format!("[{name}]: recovered code is not equivalent"));
                    ctx.expect(
                        c.permute(&r.perm) == construction_b_code(&r.kleinian),
                        format!("[{name}]: witness permutation fails"),
                    );
                }
                Ok(None) => {
                    ctx.expect(false, format!("[{name}]: nothing recovered"));
                }
                Err(RecoveryError::Defect(m)) => return Err(Error::Defect(m)),
                Err(e) => {
                    ctx.expect(false, format!("[{name}]: {e}"));
                }
            }
            let coset = coset_weight_enumerator(&CosetLabel::new(c.clone(), 0xF))?;
            let lhs = coset.coeffs.get(4).copied().unwrap_or(0);
            let rhs = n as u64 + c.count_weight(4)?;
            ctx.expect(lhs == rhs, format!("[{name}]: |(u1+C)(4)| = {lhs}, n/4 + |C(4)| = {rhs}"));
            rows.push(json!({ "kleinian": name, "length": 4 * n, "u1_coset_weight4": lhs }));
        }
    }
    let v = recover_kleinian(&BinaryCode::e8(), Some(0b11));
    ctx.expect(matches!(v, Err(RecoveryError::HypothesisViolation(_))), "e8 with a weight-2 coset should violate the hypothesis");
    ctx.put("codes", json!(rows));
    Ok(())
}

// ---------------------------------------------------------------- lattices

/// `W_C(theta_3, theta_2)` and `(W_C(theta_3, theta_2) + theta_4^n) / 2`.
fn theta_from_code(c: &BinaryCode, prec: i64) -> Result<(QSeries, QSeries)> {
    let w = c.weight_enumerator()?;
    let n = c.len() as u32;
    let (t2, t3, t4) = (qseries::theta(2, prec)?, qseries::theta(3, prec)?, qseries::theta(4, prec)?);
    let mut full = QSeries::zero(through(prec));
    for (wt, &a) in w.coeffs.iter().enumerate() {
        if a > 0 {
            let term = t3.pow(n - wt as u32).mul(&t2.pow(wt as u32)).scale(a as i128);
            full = full.add(&term);
        }
    }
    let plus = full.add(&t4.pow(n)).div_int(2)?;
    Ok((full.truncate(through(prec)), plus.truncate(through(prec))))
}

fn lattice_identities(ctx: &mut Ctx) -> Result<()> {
    let prec = ctx.params.precision;
    let mut codes = vec![
        ("e8".to_string(), BinaryCode::e8()),
        ("e8^2".to_string(), BinaryCode::e8_squared()),
        ("d16+".to_string(), BinaryCode::d16plus()),
    ];
    for (name, k) in kleinian_corpus()? {
        codes.push((format!("C+({name})"), construction_b_code(&k)));
    }
    let mut done = Vec::new();
    for (name, c) in &codes {
        let (full, plus) = theta_from_code(c, prec)?;
        let a = theta_series(&construction_a_lattice(c)?, None, prec)?;
        let b = theta_series(&construction_b_lattice(c)?, None, prec)?;
        ctx.expect(a.agrees_with(&full), format!("{name}: theta of L(C) differs from W_C(theta3, theta2)"));
        ctx.expect(b.agrees_with(&plus), format!("{name}: theta of L+(C) differs from the substitution"));
        done.push(json!({ "code": name, "theta_L_q1": a.coeff(qseries::GRID).unwrap_or(0), "theta_L+_q1": b.coeff(qseries::GRID).unwrap_or(0) }));
    }
    ctx.put("theta_checks", json!(done));
    let e2 = KleinianCode::epsilon2();
    let mut rho = Vec::new();
    for (name, k) in [("eps2", e2.clone()), ("eps2^2", e2.direct_sum(&e2)), ("delta4+", KleinianCode::delta4_plus())] {
        match rho_isomorphism(&k) {
            Ok(_) => rho.push(name),
            Err(Error::Defect(m)) => return Err(Error::Defect(format!("{name}: {m}"))),
            Err(e) => {
                ctx.expect(false, format!("rho for {name}: {e}"));
            }
        }
    }
    ctx.put("rho_exact", json!(rho));
    for name in ["E8^2", "D16+"] {
        let p2 = count_by_norm(&lattice(name)?, None, 2 * GRID2)?[NORM2];
        ctx.expect(p2 == 480, format!("|{name}(2)| = {p2}, expected 480"));
        ctx.put(&format!("{name}(2)"), json!(p2));
    }
    Ok(())
}

fn isometry(ctx: &mut Ctx) -> Result<()> {
    let a = construction_b_lattice(&BinaryCode::e8_squared())?;
    let b = construction_b_lattice(&BinaryCode::d16plus())?;
    let t0 = Instant::now();
    match lattice_isometric(&a, &b)? {
        Some(t) => {
            ctx.expect(t.verify(&a, &b), "witness for L+(e8^2) ~ L+(d16+) does not verify");
            ctx.put("plus_witness", t.to_json(&b));
        }
        None => {
            ctx.expect(false, "L+(e8^2) and L+(d16+) reported non-isometric");
        }
    }
    let ms1 = t0.elapsed().as_millis();
    let t1 = Instant::now();
    let (e, d) = (lattice("E8^2")?, lattice("D16+")?);
    let (w, why) = isometry_with_reason(&e, &d)?;
    ctx.expect(w.is_none(), "E8^2 and D16+ reported isometric");
    ctx.put("E8^2_vs_D16+", json!(why));
    ctx.put("millis", json!([ms1, t1.elapsed().as_millis()]));
    Ok(())
}

fn overlattices(ctx: &mut Ctx) -> Result<()> {
    let classes = even_overlattices(&scale_sqrt2(&Lattice::e8()))?;
    ctx.expect(classes.len() == 5, format!("{} even overlattice classes of sqrt2 E8, expected 5", classes.len()));
    let mut discs: Vec<Vec<i64>> = classes.iter().map(|c| c.disc_factors.clone()).collect();
    discs.sort();
    discs.dedup();
    ctx.expect(discs.len() == classes.len(), "discriminant groups are not pairwise distinct");
    ctx.put(
        "classes",
        json!(classes
            .iter()
            .map(|c| json!({ "subgroup_dim": c.subgroup_dim, "discriminant": c.disc_factors, "subgroups": c.members }))
            .collect::<Vec<_>>()),
    );
    Ok(())
}

// ---------------------------------------------------------------- characters

fn characters(ctx: &mut Ctx) -> Result<()> {
    let prec = ctx.params.precision;
    let mut all: Vec<(String, QSeries)> = Vec::new();
    let plus_of = |l: &Lattice| qseries::ch_vl_plus(&theta_series(l, None, prec)?, l.rank() as u32);
    let (e, d) = (lattice("E8^2")?, lattice("D16+")?);
    let (pe, pd) = (plus_of(&e)?, plus_of(&d)?);
    ctx.expect(pe.agrees_with(&pd), "ch V+ of E8^2 and D16+ differ");
    all.push(("V+(E8^2)".into(), pe));
    all.push(("V+(D16+)".into(), pd));
    for (name, c) in [("e8", BinaryCode::e8()), ("e8^2", BinaryCode::e8_squared()), ("d16+", BinaryCode::d16plus())] {
        let full = construction_a_lattice(&c)?;
        let plus = construction_b_lattice(&c)?;
        let n = c.len();
        let target = plus_of(&full)?;
        let alpha1: Vec<i64> = (0..n).map(|i| if i == 0 { GRID } else { 0 }).collect();
        let a = plus_of(&plus)?;
        let b = qseries::ch_untwisted_pm(&theta_series(&plus, Some(&alpha1), prec)?, n as u32)?;
        ctx.expect(
            a.add(&b).agrees_with(&target),
            format!("{name}: ch V+ + ch V(alpha1+L+)^+ over L+(C) differs from ch V+ of L(C)"),
        );
        let vlp = qseries::ch_vl(&theta_series(&plus, None, prec)?, n as u32)?;
        ctx.expect(vlp.agrees_with(&target), format!("{name}: ch V of L+(C) differs from ch V+ of L(C)"));
        all.push((format!("V+(L({name}))"), target));
        all.push((format!("V(alpha1+L+({name}))+"), b));
    }
    for (name, l) in lattice_corpus()? {
        let th = theta_series(&l, None, prec)?;
        let n = l.rank() as u32;
        let (p, m, v) = (qseries::ch_vl_plus(&th, n)?, qseries::ch_vl_minus(&th, n)?, qseries::ch_vl(&th, n)?);
        ctx.expect(p.add(&m).agrees_with(&v), format!("{name}: ch V+ + ch V- differs from ch V"));
        let l2 = count_by_norm(&l, None, 2 * GRID2)?[NORM2] as i128;
        ctx.expect(
            weight_coeff(&m, 1, l.rank()) == n as i128 + l2 / 2,
            format!("{name}: weight-one dimension of V- is not n + |L(2)|/2"),
        );
        all.push((format!("V-({name})"), m));
        all.push((format!("V+({name})"), p));
    }
    for n in [8u32, 16] {
        for plus in [true, false] {
            all.push((format!("twisted n={n} plus={plus}"), qseries::ch_twisted_pm(n, 1 << (n / 2), plus, prec)?));
        }
    }
    for (name, s) in &all {
        ctx.expect(s.is_nonnegative(), format!("{name} has a negative coefficient"));
    }
    ctx.put("series_checked_nonnegative", json!(all.len()));
    // weight one in rank 16 with sqrt(2) L* even and |L*/L| = 2^(2k): twisted equals minus iff |L(2)| = 2^(9-k) - 32
    let mut rows = Vec::new();
    let mut saw_480 = false;
    for (name, l) in lattice_corpus()? {
        if l.rank() != 16 || !all_self_dual_simple_current(&l)? {
            continue;
        }
        let k2 = discriminant_group(&l)?.two_rank().unwrap_or(usize::MAX);
        if k2 % 2 != 0 || k2 > 16 {
            continue;
        }
        let k = (k2 / 2) as u32;
        let dim_t = 1u64 << (8 - k);
        let tw = weight_coeff(&qseries::ch_twisted_pm(16, dim_t, true, 1)?, 1, 16);
        let minus = weight_coeff(&qseries::ch_vl_minus(&theta_series(&l, None, 1)?, 16)?, 1, 16);
        let l2 = count_by_norm(&l, None, 2 * GRID2)?[NORM2] as i128;
        ctx.expect(tw == dim_t as i128, format!("{name}: twisted weight-one coefficient {tw}, expected {dim_t}"));
        ctx.expect(minus == 16 + l2 / 2, format!("{name}: V- weight-one coefficient {minus}"));
        let formula = (1i128 << (9 - k)) - 32;
        ctx.expect((tw == minus) == (l2 == formula), format!("{name}: weight-one equality and |L(2)| = 2^(9-k) - 32 disagree"));
        saw_480 |= k == 0 && l2 == 480 && tw == minus;
        rows.push(json!({ "lattice": name, "k": k, "L2": l2, "formula": formula, "holds": l2 == formula }));
    }
    ctx.expect(saw_480, "the unimodular case k = 0, |L(2)| = 480 was not reproduced");
    ctx.put("root_count_criterion", json!(rows));
    Ok(())
}

// ---------------------------------------------------------------- table rows

fn same_length_pairs(codes: &[(String, BinaryCode)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..codes.len() {
        for j in i..codes.len() {
            if codes[i].1.len() == codes[j].1.len() {
                out.push((i, j));
            }
        }
    }
    out
}

fn lattices_of_codes(ctx: &mut Ctx) -> Result<()> {
    let codes = code_corpus()?;
    let lats: Vec<Lattice> = codes.iter().map(|c| construction_a_lattice(&c.1)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (i, j) in same_length_pairs(&codes) {
        let iso = lattice_isometric(&lats[i], &lats[j])?;
        let eq = code_equivalent(&codes[i].1, &codes[j].1).is_some();
        if let Some(t) = &iso {
            ctx.expect(t.verify(&lats[i], &lats[j]), format!("witness for {} ~ {} fails", codes[i].0, codes[j].0));
        }
        ctx.expect(
            iso.is_some() == eq,
            format!("L({}) ~ L({}) is {}, codes equivalent {eq}", codes[i].0, codes[j].0, iso.is_some()),
        );
        rows.push(json!([codes[i].0, codes[j].0, iso.is_some()]));
    }
    ctx.put("pairs", json!(rows));
    Ok(())
}

fn plus_lattices_of_codes(ctx: &mut Ctx) -> Result<()> {
    let codes = code_corpus()?;
    let lats: Vec<Lattice> = codes.iter().map(|c| construction_b_lattice(&c.1)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut exceptional = false;
    for (i, j) in same_length_pairs(&codes) {
        let (c, d) = (&codes[i].1, &codes[j].1);
        let iso = lattice_isometric(&lats[i], &lats[j])?;
        if let Some(t) = &iso {
            ctx.expect(t.verify(&lats[i], &lats[j]), format!("witness for {} ~ {} fails", codes[i].0, codes[j].0));
        }
        let eq = code_equivalent(c, d).is_some();
        let both16 = c.len() == 16 && c.is_self_dual() && d.is_self_dual();
        exceptional |= iso.is_some() && !eq && both16;
        ctx.expect(
            iso.is_some() == (eq || both16),
            format!("L+({}) ~ L+({}) is {}, expected {}", codes[i].0, codes[j].0, iso.is_some(), eq || both16),
        );
        rows.push(json!([codes[i].0, codes[j].0, iso.is_some(), eq]));
    }
    ctx.expect(exceptional, "the pair e8^2, d16+ was not seen");
    ctx.put("pairs", json!(rows));
    Ok(())
}

fn lattice_voas(ctx: &mut Ctx) -> Result<()> {
    let corpus = lattice_corpus()?;
    let prec = ctx.params.precision.min(4);
    let mut rows = Vec::new();
    for i in 0..corpus.len() {
        for j in i + 1..corpus.len() {
            let ((a, l), (b, n)) = (&corpus[i], &corpus[j]);
            if l.rank() != n.rank() {
                continue;
            }
            let (iso, why) = isometry_with_reason(l, n)?;
            let same_ch = qseries::ch_vl(&theta_series(l, None, prec)?, l.rank() as u32)?
                .agrees_with(&qseries::ch_vl(&theta_series(n, None, prec)?, n.rank() as u32)?);
            if let Some(t) = &iso {
                ctx.expect(t.verify(l, n) && same_ch, format!("{a} ~ {b}: witness or characters fail"));
            }
            rows.push(json!({ "pair": [a, b], "isomorphic": iso.is_some(), "reason": why, "characters_agree": same_ch }));
        }
    }
    ctx.put("pairs", json!(rows));
    Ok(())
}

fn record(ctx: &mut Ctx, v: &Verdict, l: &Lattice, n: &Lattice, a: &str, b: &str) -> Result<Value> {
    ctx.expect(v.verify(l, n)?, format!("{a} / {b}: certificate does not re-verify"));
    let mut j = v.to_json(l, n);
    j["pair"] = json!([a, b]);
    Ok(j)
}

fn plus_voas(ctx: &mut Ctx) -> Result<()> {
    let prec = ctx.params.precision;
    let trace = ctx.params.trace;
    let mut out = Vec::new();
    let cases: Vec<(&str, &str, Outcome)> = [
        ("E8^2", "D16+", Outcome::ExceptionalPair),
        ("L+(e8^2)", "L+(d16+)", Outcome::Isomorphic),
        ("E8^2", "E8^2", Outcome::Isomorphic),
    ]
    .into_iter()
    .chain(CURATED_PAIRS.iter().map(|&(a, b)| (a, b, Outcome::NotIsomorphic)))
    .collect();
    for (a, b, want) in cases {
        let (l, n) = (lattice(a)?, lattice(b)?);
        let v = classify_pair_plus(&l, &n, prec, trace)?;
        let back = classify_pair_plus(&n, &l, prec, false)?;
        ctx.expect(v.outcome == want, format!("{a} / {b}: {:?}, expected {want:?}", v.outcome));
        ctx.expect(back.outcome == v.outcome, format!("{a} / {b}: verdict is not symmetric"));
        ctx.expect(back.verify(&n, &l)?, format!("{b} / {a}: transposed certificate does not re-verify"));
        out.push(record(ctx, &v, &l, &n, a, b)?);
    }
    ctx.put("verdicts", json!(out));
    Ok(())
}

fn mixed_lattices_of_codes(ctx: &mut Ctx) -> Result<()> {
    let codes = code_corpus()?;
    let pred = KPredicate { even: true, ..Default::default() };
    let mut rows = Vec::new();
    for len in [8usize, 16] {
        let ks = k_enumerate(len / 4, &pred)?;
        let images: Vec<(BinaryCode, BinaryCode)> = ks.iter().map(|k| (construction_a_code(k), construction_b_code(k))).collect();
        let group: Vec<&(String, BinaryCode)> = codes.iter().filter(|c| c.1.len() == len).collect();
        for (cn, c) in &group {
            for (dn, d) in &group {
                let lp = construction_b_lattice(c)?;
                let ld = construction_a_lattice(d)?;
                let iso = lattice_isometric(&lp, &ld)?;
                if let Some(t) = &iso {
                    ctx.expect(t.verify(&lp, &ld), format!("witness for L+({cn}) ~ L({dn}) fails"));
                }
                let oracle = images.iter().any(|(a, b)| {
                    a.dim() == c.dim() && b.dim() == d.dim() && code_equivalent(c, a).is_some() && code_equivalent(d, b).is_some()
                });
                ctx.expect(iso.is_some() == oracle, format!("L+({cn}) ~ L({dn}) is {}, Kleinian oracle {oracle}", iso.is_some()));
                if iso.is_some() {
                    rows.push(json!([cn, dn]));
                }
            }
        }
    }
    ctx.put("isomorphic_pairs", json!(rows));
    // code-level: K comes back from C^+(K) alone
    let mut rec = Vec::new();
    for (name, k) in kleinian_corpus()? {
        let d = construction_b_code(&k);
        match recover_plus(&d) {
            Ok(Some(r)) => {
                let plus_ok = code_equivalent(&construction_b_code(&r.kleinian), &d).is_some();
                let full_same = code_equivalent(&construction_a_code(&r.kleinian), &construction_a_code(&k)).is_some();
                // C+(eps2^2) ~ C+(delta4+) has two preimages with C = e8^2 and C = d16+
                let exceptional = k.is_self_dual() && r.kleinian.is_self_dual() && k.len() == 4;
                ctx.expect(plus_ok, format!("{name}: C+ of the recovered Kleinian code is not equivalent to D"));
                ctx.expect(full_same || exceptional, format!("{name}: recovered Kleinian code gives a different C"));
                rec.push(json!({ "kleinian": name, "recovered": words(&r.kleinian), "same_full_code": full_same }));
            }
            Ok(None) => {
                ctx.expect(false, format!("{name}: no coset meets the counting identity"));
            }
            Err(RecoveryError::Defect(m)) => return Err(Error::Defect(m)),
            Err(e) => {
                ctx.expect(false, format!("{name}: {e}"));
            }
        }
    }
    ctx.put("recovered", json!(rec));
    Ok(())
}

fn mixed_voas(ctx: &mut Ctx) -> Result<()> {
    let prec = ctx.params.precision;
    let trace = ctx.params.trace;
    let mut out = Vec::new();
    let mut cases: Vec<(String, Lattice, String, Lattice, Outcome)> = Vec::new();
    for (name, c) in code_corpus()? {
        if c.dim() == 0 {
            continue;
        }
        cases.push((
            format!("L({name})"),
            construction_a_lattice(&c)?,
            format!("L+({name})"),
            construction_b_lattice(&c)?,
            Outcome::CodeLatticePair,
        ));
    }
    cases.push(("E8^2".into(), lattice("E8^2")?, "L+(d16+)".into(), lattice("L+(d16+)")?, Outcome::CodeLatticePair));
    for (a, b) in [("E8", "E8"), ("L+(e8)", "E8"), ("sqrt2E8", "sqrt2E8"), ("D16+", "D16+"), ("L+(e8^2)", "E8^2")] {
        cases.push((a.into(), lattice(a)?, b.into(), lattice(b)?, Outcome::NotIsomorphic));
    }
    for (a, l, b, n, want) in &cases {
        let v = classify_pair_mixed(l, n, prec, trace)?;
        ctx.expect(v.outcome == *want, format!("{a} / {b}: {:?}, expected {want:?}", v.outcome));
        out.push(record(ctx, &v, l, n, a, b)?);
    }
    ctx.put("verdicts", json!(out));
    Ok(())
}

// ---------------------------------------------------------------- properties

/// A lattice derived from a corpus code: permuted coordinates, construction
/// A or B, optionally scaled by `sqrt 2` or summed with `E_8`.
pub fn random_corpus_lattice(rng: &mut impl Rng) -> Result<Lattice> {
    let e2 = KleinianCode::epsilon2();
    let codes = [
        BinaryCode::e8(),
        BinaryCode::e8_squared(),
        BinaryCode::d16plus(),
        BinaryCode::zero(8),
        BinaryCode::d4m(2),
        BinaryCode::d4m0(2),
        construction_b_code(&e2),
        construction_b_code(&e2.direct_sum(&e2)),
        construction_b_code(&KleinianCode::delta4_plus()),
    ];
    let c = codes.choose(rng).expect("non-empty").clone();
    let mut perm: Vec<usize> = (0..c.len()).collect();
    perm.shuffle(rng);
    let c = c.permute(&perm);
    let mut l = if rng.gen_bool(0.5) { construction_a_lattice(&c)? } else { construction_b_lattice(&c)? };
    if rng.gen_bool(0.25) {
        l = scale_sqrt2(&l);
    }
    if l.rank() == 8 && rng.gen_bool(0.3) {
        l = direct_sum(&l, &Lattice::e8());
    }
    Ok(l)
}

/// `U * B` for a random unimodular `U` built from elementary row operations.
pub fn scramble_basis(b: &[Vec<i64>], rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let mut rows = b.to_vec();
    let n = rows.len();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k: i64 = rng.gen_range(-2..=2);
        let src = rows[j].clone();
        for (x, y) in rows[i].iter_mut().zip(&src) {
            *x += k * y;
        }
        if rng.gen_bool(0.2) {
            rows.swap(i, j);
        }
    }
    rows
}

/// Property outcomes for one lattice; returns the failed property names and
/// whether `sqrt(2) L*` was even.
pub fn lattice_properties(l: &Lattice, rng: &mut impl Rng) -> Result<(Vec<&'static str>, bool)> {
    let mut bad = Vec::new();
    let b = l.basis().clone();
    if intmat::hnf(&b) != b {
        bad.push("hnf idempotence");
    }
    if Lattice::from_generators(l.ambient().to_vec(), &scramble_basis(&b, rng))? != *l {
        bad.push("hnf basis independence");
    }
    let d = l.dual()?;
    if d.dual()? != *l {
        bad.push("duality involution");
    }
    if text::parse_lattice(&l.to_string())? != *l {
        bad.push("parse/print round trip");
    }
    let premise = scale_sqrt2(&d).is_even();
    if premise {
        let twice: Vec<Vec<i64>> = d.basis().iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
        if !twice.iter().all(|v| l.contains(v)) {
            bad.push("sqrt2 L* even implies 2 L* in L");
        }
    }
    Ok((bad, premise))
}

fn properties(ctx: &mut Ctx) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6c_6569_6e6c_6174);
    let mut premise = 0;
    let mut by_rank = std::collections::BTreeMap::new();
    for i in 0..200 {
        let l = random_corpus_lattice(&mut rng)?;
        *by_rank.entry(l.rank()).or_insert(0) += 1;
        let (bad, p) = lattice_properties(&l, &mut rng)?;
        premise += p as usize;
        for b in bad {
            ctx.expect(false, format!("lattice #{i}: {b}"));
        }
    }
    ctx.put("lattices", json!(200));
    ctx.put("by_rank", json!(by_rank));
    ctx.put("sqrt2_dual_even", json!(premise));
    let mut codes = 0;
    for (name, c) in code_corpus()? {
        ctx.expect(c.dual().dual() == c, format!("{name}: code duality is not an involution"));
        ctx.expect(text::parse_binary(&c.to_string())? == c, format!("{name}: code parse/print round trip"));
        codes += 1;
    }
    for (name, k) in kleinian_corpus()? {
        ctx.expect(k.dual().dual() == k, format!("{name}: Kleinian duality is not an involution"));
        ctx.expect(text::parse_kleinian(&k.to_string())? == k, format!("{name}: Kleinian parse/print round trip"));
        codes += 1;
    }
    ctx.put("codes", json!(codes));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_id() {
        assert!(run_check("bogus", &Params::default()).is_err());
        assert!(run_batch(&["bogus".to_string()], &Params::default(), 1).is_err());
    }

    #[test]
    fn quick_checks_pass() {
        let p = Params { precision: 3, trace: false };
        for id in ["lemma-LHo1", "code-counts", "recovery", "overlattices"] {
            let r = run_check(id, &p).unwrap();
            assert_eq!(r.status, Status::Pass, "{id}: {:?}", r.failures);
        }
    }

    #[test]
    fn corpus_shape() {
        assert_eq!(wk_classes().unwrap().len(), 4);
        let names: Vec<String> = kleinian_corpus().unwrap().into_iter().map(|x| x.0).collect();
        assert!(names.contains(&"eps2^2".to_string()) && names.contains(&"delta4+".to_string()));
    }
}

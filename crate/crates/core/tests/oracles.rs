//! Library results against small independent computations.

use kleinlat::bincodes::{construction_b_code, BinaryCode};
use kleinlat::kleinian::KleinianCode;
use kleinlat::lattices::{construction_a_lattice, construction_b_lattice, count_by_norm, direct_sum, theta_series, Lattice};
use kleinlat::qseries::{self, QSeries, GRID};

fn sigma3(n: i128) -> i128 {
    (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
}

/// Counts `x` in `{-r..r}^n` with `x mod 2` in `c` (and, for the plus
/// lattice, `sum x / 2` even), grouped by `|x|^2 / 2`.
fn brute_counts(c: &BinaryCode, plus: bool, r: i64, max_half_norm: usize) -> Vec<u64> {
    let n = c.len();
    let words = c.codewords().unwrap();
    let mut out = vec![0u64; max_half_norm + 1];
    let side = (2 * r + 1) as u64;
    for idx in 0..side.pow(n as u32) {
        let mut t = idx;
        let mut x = vec![0i64; n];
        for xi in x.iter_mut() {
            *xi = (t % side) as i64 - r;
            t /= side;
        }
        let parity: u64 = x.iter().enumerate().map(|(i, &v)| ((v.rem_euclid(2)) as u64) << i).sum();
        if !words.contains(&parity) {
            continue;
        }
        if plus {
            // L+(C) keeps the vectors whose integral part has even coordinate sum
            let s: i64 = x.iter().map(|&v| v.div_euclid(2)).sum();
            if s.rem_euclid(2) != 0 {
                continue;
            }
        }
        let sq: i64 = x.iter().map(|v| v * v).sum();
        if sq % 2 == 0 && (sq / 2) as usize <= max_half_norm {
            out[(sq / 2) as usize] += 1;
        }
    }
    out
}

#[test]
fn e8_theta_is_eisenstein() {
    let th = theta_series(&Lattice::e8(), None, 6).unwrap();
    for m in 0..=6i64 {
        let want = if m == 0 { 1 } else { 240 * sigma3(m as i128) };
        assert_eq!(th.coeff(GRID * m), Some(want), "q^{m}");
    }
}

#[test]
fn construction_a_counts_match_box_enumeration() {
    let c = BinaryCode::e8();
    let l = construction_a_lattice(&c).unwrap();
    let counts = count_by_norm(&l, None, 4 * 64).unwrap();
    // norm = |x|^2 / 2, so norm <= 4 needs entries in {-2..2}
    let brute = brute_counts(&c, false, 2, 4);
    assert_eq!(counts[2 * 64], brute[2]);
    assert_eq!(counts[4 * 64], brute[4]);
    assert_eq!(brute[2], 240);
}

#[test]
fn construction_b_counts_match_box_enumeration() {
    let c = BinaryCode::e8();
    let l = construction_b_lattice(&c).unwrap();
    let counts = count_by_norm(&l, None, 4 * 64).unwrap();
    let brute = brute_counts(&c, true, 2, 4);
    assert_eq!(counts[2 * 64], brute[2]);
    assert_eq!(counts[4 * 64], brute[4]);
}

#[test]
fn inverse_eta_counts_partitions() {
    fn partitions(n: usize) -> Vec<i128> {
        let mut p = vec![0i128; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for m in part..=n {
                p[m] += p[m - part];
            }
        }
        p
    }
    let n = 12;
    let inv = QSeries::one(qseries::through(n as i64)).div(&qseries::eta(1, 1, n as i64).unwrap()).unwrap();
    let p = partitions(n);
    for m in 0..=n {
        // 1/eta = q^{-1/24} sum p(m) q^m
        assert_eq!(inv.coeff(GRID * m as i64 - 2), Some(p[m]), "p({m})");
    }
}

#[test]
fn theta_of_e8_squared_is_square_of_e8() {
    let e8 = Lattice::e8();
    let sq = theta_series(&e8, None, 4).unwrap();
    let sq = sq.mul(&sq);
    let direct = theta_series(&direct_sum(&e8, &e8), None, 4).unwrap();
    let d16 = theta_series(&construction_a_lattice(&BinaryCode::d16plus()).unwrap(), None, 4).unwrap();
    assert!(direct.agrees_with(&sq));
    assert!(d16.agrees_with(&sq));
}

#[test]
fn plus_code_has_index_two() {
    for k in [KleinianCode::epsilon2(), KleinianCode::delta4_plus()] {
        let full = kleinlat::bincodes::construction_a_code(&k);
        let plus = construction_b_code(&k);
        assert_eq!(full.dim(), plus.dim() + 1);
        assert!(plus.is_subcode_of(&full));
    }
}

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kleinlat::bincodes::BinaryCode;
use kleinlat::checks::{lattice_properties, random_corpus_lattice};
use kleinlat::f2;
use kleinlat::kleinian::KleinianCode;
use kleinlat::qseries::QSeries;
use kleinlat::text;

fn code(n: usize) -> impl Strategy<Value = BinaryCode> {
    prop::collection::vec(0..(1u64 << n), 0..=n).prop_map(move |rows| BinaryCode::new(n, &rows))
}

fn binom(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Krawtchouk polynomial `K_k(i)` for length `n`.
fn kraw(n: u64, k: u64, i: u64) -> i128 {
    (0..=k).map(|j| if j <= i && k - j <= n - i { (-1i128).pow(j as u32) * binom(i, j) * binom(n - i, k - j) } else { 0 }).sum()
}

fn series(max_len: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec((-20i64..100, -5i128..6), 0..max_len).prop_map(|t| QSeries::from_terms(&t, 150))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn code_dual_is_an_involution(c in code(10)) {
        prop_assert_eq!(c.dual().dual(), c.clone());
        prop_assert_eq!(c.dim() + c.dual().dim(), 10);
    }

    #[test]
    fn macwilliams_identity(c in code(9)) {
        let n = 9u64;
        let a = c.weight_enumerator().unwrap().coeffs;
        let b = c.dual().weight_enumerator().unwrap().coeffs;
        let size = 1i128 << c.dim();
        for k in 0..=n {
            let rhs: i128 = (0..=n).map(|i| a.get(i as usize).copied().unwrap_or(0) as i128 * kraw(n, k, i)).sum();
            prop_assert_eq!(size * b.get(k as usize).copied().unwrap_or(0) as i128, rhs);
        }
    }

    #[test]
    fn binary_text_round_trip(c in code(12)) {
        prop_assert_eq!(text::parse_binary(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn kleinian_text_round_trip(rows in prop::collection::vec(0..(1u64 << 8), 0..5)) {
        let k = KleinianCode::from_bits(4, &rows);
        prop_assert_eq!(text::parse_kleinian(&k.to_string()).unwrap(), k.clone());
        prop_assert_eq!(k.dual().dual(), k);
    }

    #[test]
    fn span_size_matches_rank(rows in prop::collection::vec(0..(1u64 << 7), 0..7)) {
        prop_assert_eq!(f2::span(&f2::rref(&rows)).len(), 1usize << f2::rank(&rows));
    }

    #[test]
    fn series_ring_laws(a in series(6), b in series(6), c in series(6)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).terms().is_empty());
    }

    #[test]
    fn corpus_lattice_properties(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_corpus_lattice(&mut rng).unwrap();
        let (bad, _) = lattice_properties(&l, &mut rng).unwrap();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }
}

use std::collections::BTreeSet;

use proptest::prelude::*;
use rug::{Float, Integer};
use zetaforge::characters::{characters_mod, euler_phi, gauss_sum, DirichletCharacter, Parity};
use zetaforge::PrecisionContext;

fn gcd(a: u64, b: u64) -> u64 {
    Integer::from(a).gcd(&Integer::from(b)).to_u64().unwrap()
}

fn brute_phi(q: u64) -> u64 {
    (1..=q).filter(|&a| gcd(a, q) == 1).count() as u64
}

/// Smallest `d | q` such that `chi(a) = 1` whenever `a = 1 mod d` and `gcd(a, q) = 1`.
fn brute_conductor(chi: &DirichletCharacter) -> u64 {
    let q = chi.modulus();
    (1..=q)
        .filter(|d| q % d == 0)
        .find(|&d| {
            (1..=q)
                .filter(|&a| gcd(a, q) == 1 && a % d == 1 % d)
                .all(|a| chi.value_exponent(a as i64) == Some(0))
        })
        .unwrap()
}

#[test]
fn counts_and_distinct_tables() {
    for q in 1..=100u64 {
        let chars = characters_mod(q).unwrap();
        assert_eq!(chars.len() as u64, brute_phi(q), "q={q}");
        assert_eq!(euler_phi(q), brute_phi(q));
        let tables: BTreeSet<_> = chars.iter().map(|c| c.value_table()).collect();
        assert_eq!(tables.len(), chars.len(), "q={q}");
        let even = chars.iter().filter(|c| c.parity() == Parity::Even).count();
        let odd = chars.len() - even;
        // -1 = 1 mod q only for q <= 2
        assert_eq!(odd > 0, q > 2, "q={q}");
        if q > 2 {
            assert_eq!(even, odd, "q={q}");
        }
    }
}

#[test]
fn conductors_by_brute_force() {
    for q in 1..=60u64 {
        for chi in characters_mod(q).unwrap() {
            assert_eq!(chi.conductor(), brute_conductor(&chi), "q={q} index={}", chi.index());
            assert_eq!(chi.is_primitive(), chi.conductor() == q);
        }
    }
}

#[test]
fn exact_orthogonality() {
    for q in 1..=30u64 {
        let chars = characters_mod(q).unwrap();
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let want = if i == j { brute_phi(q) as i64 } else { 0 };
                assert_eq!(a.inner_product(b).exact_integer(), Some(want), "q={q} ({i},{j})");
            }
        }
    }
}

#[test]
fn gauss_sums_of_primitive_characters() {
    let cx = PrecisionContext::default();
    for q in 3..=50u64 {
        for chi in characters_mod(q).unwrap().iter().filter(|c| c.is_primitive()) {
            let tau = gauss_sum(chi, &cx).value;
            let err = Float::with_val(256, tau.abs().square() - q).abs().to_f64();
            assert!(err < 1e-25, "q={q} index={} err={err:e}", chi.index());
        }
    }
}

proptest! {
    #[test]
    fn multiplicative_and_periodic(q in 1u64..=120, a in -500i64..500, b in -500i64..500, pick in 0usize..1000) {
        let chars = characters_mod(q).unwrap();
        let chi = &chars[pick % chars.len()];
        let l = chi.root_order();
        let (ea, eb, eab) = (chi.value_exponent(a), chi.value_exponent(b), chi.value_exponent(a * b));
        match (ea, eb) {
            (Some(x), Some(y)) => prop_assert_eq!(eab, Some((x + y) % l)),
            _ => prop_assert_eq!(eab, None),
        }
        prop_assert_eq!(chi.value_exponent(a + q as i64), ea);
        prop_assert_eq!(ea.is_some(), gcd(a.unsigned_abs(), q) == 1);
        let conj = chi.conj();
        prop_assert_eq!(conj.value_exponent(a), ea.map(|x| (l - x) % l));
    }
}

mod fixtures;

use fixtures::{omega_vs_rank, rank_profiles};
use moduli::exact::{double_factorial, factorial, from_big, multi_binomial, ordered_decompositions, rint, MultiIndex, Rational};
use moduli::fabering::*;
use proptest::prelude::*;

/// The entry from its definition: a signed sum over ordered decompositions of `L + L'`.
fn entry_by_definition(g: i64, m: &MultiIndex) -> Rational {
    let len = m.length() as usize;
    if m.is_zero() {
        return from_big(factorial((2 * g - 3) as u64));
    }
    let mut acc = rint(0);
    for r in 1..=len {
        let sign = if (len - r).is_multiple_of(2) { rint(1) } else { rint(-1) };
        let mut inner = rint(0);
        for parts in ordered_decompositions(m, r) {
            let mut t = from_big(multi_binomial(m, &parts).unwrap());
            for p in &parts {
                t /= from_big(double_factorial(2 * p.weight() as i64 + 1).unwrap());
            }
            inner += t;
        }
        acc += sign * from_big(factorial((2 * g - 3 + r as i64) as u64)) / from_big(factorial(r as u64)) * inner;
    }
    acc
}

#[test]
fn entries_match_definition() {
    for g in 2..=8i64 {
        let k = (g - 2) as u64;
        for l in partition_indices(k / 2) {
            for lp in partition_indices(k - k / 2) {
                let want = entry_by_definition(g, &l.add(&lp));
                assert_eq!(faber_entry(g, &l, &lp).unwrap(), want, "g={g} {l} {lp}");
            }
        }
    }
}

#[test]
fn table_one_through_genus_twenty_three() {
    for (g, want) in rank_profiles() {
        assert_eq!(rank_profile(g as i64).unwrap(), want.iter().map(|&x| x as usize).collect::<Vec<_>>(), "g={g}");
    }
}

#[test]
fn r18_middle_rank_is_sixteen() {
    assert_eq!(FaberMatrix::new(18, 8).unwrap().rank(), 16);
}

#[test]
fn totals_match_printed_row() {
    for (g, _, r) in omega_vs_rank().into_iter().filter(|x| x.0 <= 23) {
        let total: usize = rank_profile(g as i64).unwrap().iter().sum();
        assert_eq!(total as u64, r, "g={g}");
    }
}

#[test]
fn matrices_are_transposes() {
    for g in 4..=10i64 {
        for k in 0..=(g - 2) as u64 {
            let a = FaberMatrix::new(g, k).unwrap();
            let b = FaberMatrix::new(g, (g - 2) as u64 - k).unwrap();
            for (i, row) in a.entries.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    assert_eq!(x, &b.entries[j][i]);
                }
            }
        }
    }
}

#[test]
fn rejects_bad_shapes() {
    assert!(FaberMatrix::new(1, 0).is_err());
    assert!(FaberMatrix::new(5, 4).is_err());
    assert!(rank_profile(1).is_err());
    assert!(faber_relation_coefficient(5, &MultiIndex::delta(2)).is_err());
}

proptest! {
    #[test]
    fn rank_bounded_by_shape(g in 2i64..14, k in 0u64..12) {
        prop_assume!(k as i64 <= g - 2);
        let m = FaberMatrix::new(g, k).unwrap();
        let r = m.rank();
        prop_assert!(r >= 1);
        prop_assert!(r <= m.rows.len().min(m.cols.len()));
    }

    #[test]
    fn rank_invariant_under_row_scaling(g in 4i64..12, k in 0u64..5, c in 1i64..50) {
        prop_assume!(k as i64 <= g - 2);
        let m = FaberMatrix::new(g, k).unwrap();
        let scaled: Vec<Vec<Rational>> = m.entries.iter().enumerate()
            .map(|(i, row)| row.iter().map(|x| x * rint(c + i as i64)).collect())
            .collect();
        prop_assert_eq!(exact_rank(&scaled), m.rank());
    }
}

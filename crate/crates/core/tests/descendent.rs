use moduli::descendent::*;
use moduli::exact::{rat, rint, Rational};
use num_traits::Zero;
use proptest::prelude::*;

/// `⟨τ_{3g−2}⟩_g = 1/(24^g g!)`.
fn one_point(g: i64) -> Rational {
    let mut v = rint(1);
    for k in 1..=g {
        v /= rint(24 * k);
    }
    v
}

#[test]
fn initial_values() {
    assert_eq!(psi_correlator(0, &[0, 0, 0]), rint(1));
    assert_eq!(psi_correlator(1, &[1]), rat(1, 24));
}

#[test]
fn one_point_closed_form() {
    for g in 1..=8i64 {
        assert_eq!(psi_correlator(g, &[(3 * g - 2) as u32]), one_point(g), "g={g}");
    }
}

#[test]
fn dvv_and_effective_recursion_agree_through_dimension_twelve() {
    let mut checked = 0;
    for g in 0..=5i64 {
        for n in 1..=15usize {
            let dim = 3 * g - 3 + n as i64;
            if dim > 12 {
                break;
            }
            for d in admissible_indices(g, n) {
                assert_eq!(psi_correlator(g, &d), effective_recursion(g, &d), "g={g} d={d:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn genus_zero_matches_multinomial() {
    for n in 3..=9usize {
        for d in admissible_indices(0, n) {
            assert_eq!(psi_correlator(0, &d), genus0_closed(&d).unwrap(), "d={d:?}");
        }
    }
}

#[test]
fn kdv_coefficient_identity() {
    for g in 0..=3i64 {
        for n in 1..=(3 * g + 2) as u32 {
            for s in [vec![], vec![0], vec![1], vec![2, 0], vec![1, 1], vec![3, 1, 0]] {
                let (l, r) = kdv_sides(g, n, &s);
                assert_eq!(l, r, "g={g} n={n} s={s:?}");
            }
        }
    }
}

#[test]
fn unstable_and_off_dimension_are_zero() {
    assert!(psi_correlator(0, &[0, 0]).is_zero());
    assert!(psi_correlator(1, &[]).is_zero());
    assert!(psi_correlator(1, &[2]).is_zero());
    assert!(psi_correlator(-1, &[0]).is_zero());
}

fn tuple() -> impl Strategy<Value = (i64, Vec<u32>)> {
    (0i64..4, proptest::collection::vec(0u32..6, 1..5))
}

proptest! {
    #[test]
    fn string_equation(gd in tuple()) {
        let (g, mut d) = gd;
        prop_assume!(2 * g - 2 + d.len() as i64 > 0);
        let mut lower = rint(0);
        for j in 0..d.len() {
            if d[j] > 0 {
                let mut e = d.clone();
                e[j] -= 1;
                lower += psi_correlator(g, &e);
            }
        }
        d.push(0);
        prop_assert_eq!(psi_correlator(g, &d), lower);
    }

    #[test]
    fn dilaton_equation(gd in tuple()) {
        let (g, mut d) = gd;
        let n = d.len() as i64;
        prop_assume!(2 * g - 2 + n > 0);
        let base = psi_correlator(g, &d);
        d.push(1);
        prop_assert_eq!(psi_correlator(g, &d), rint(2 * g - 2 + n) * base);
    }

    #[test]
    fn symmetric_in_insertions(gd in tuple(), k in 0usize..5) {
        let (g, d) = gd;
        let mut e = d.clone();
        let len = e.len();
        e.rotate_left(k % len);
        prop_assert_eq!(psi_correlator(g, &d), psi_correlator(g, &e));
    }

    #[test]
    fn dimension_constraint(gd in tuple()) {
        let (g, d) = gd;
        let key = CorrelatorKey::new(g, &d);
        if !key.dimension_ok() {
            prop_assert!(psi_correlator(g, &d).is_zero());
        } else if key.is_stable() {
            prop_assert!(psi_correlator(g, &d) > rint(0));
        }
    }
}

mod fixtures;

use fixtures::rspin_rows;
use moduli::descendent::psi_correlator;
use moduli::exact::{rat, rint, Rational};
use moduli::npoint::compositions;
use moduli::rspin::*;
use num_traits::Zero;
use proptest::prelude::*;

fn check_table(r: u32) {
    let rows = rspin_rows(r);
    assert!(!rows.is_empty());
    for (g, ins, want) in rows {
        let key = RSpinKey::new(r, g, &ins).unwrap();
        assert!(selection_check(&key), "{key}");
        assert_eq!(rspin_correlator(&key).unwrap(), want, "{key}");
    }
}

#[test]
fn table_three_entries() {
    check_table(3);
}

#[test]
fn table_four_entries() {
    check_table(4);
}

#[test]
fn r_two_is_witten_kontsevich() {
    let mut checked = 0;
    for g in 0..=4i64 {
        for s in 1..=6usize {
            let dim = 3 * g - 3 + s as i64;
            if !(0..=8).contains(&dim) || 2 * g - 2 + s as i64 <= 0 {
                continue;
            }
            for d in compositions(s, dim as u32) {
                let ins: Vec<(u32, u32)> = d.iter().map(|&n| (n, 0)).collect();
                assert_eq!(rspin(2, g, &ins).unwrap(), psi_correlator(g, &d), "g={g} d={d:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn selection_rule_examples() {
    assert!(selection_check(&RSpinKey::new(3, 3, &[(6, 1)]).unwrap()));
    assert!(selection_check(&RSpinKey::new(4, 1, &[(1, 0)]).unwrap()));
    assert!(!selection_check(&RSpinKey::new(3, 1, &[(1, 1)]).unwrap()));
    assert!(rspin(3, 1, &[(1, 1)]).unwrap().is_zero());
}

#[test]
fn genus_zero_base_values() {
    for r in 2..=4u32 {
        for a in 0..=r - 2 {
            for b in 0..=r - 2 {
                for c in 0..=r - 2 {
                    let want = if a + b + c == r - 2 { rint(1) } else { rint(0) };
                    assert_eq!(genus0_wdvv(r, &[(0, a), (0, b), (0, c)]).unwrap(), want);
                }
            }
        }
        assert!(genus0_wdvv(r, &[(0, 0), (0, r - 2)]).unwrap().is_zero());
    }
    assert_eq!(genus0_wdvv(3, &[(0, 1); 4]).unwrap(), rat(1, 3));
    assert_eq!(genus0_wdvv(4, &[(0, 1), (0, 1), (0, 2), (0, 2)]).unwrap(), rat(1, 4));
    assert_eq!(genus0_wdvv(4, &[(0, 2); 5]).unwrap(), rat(1, 8));
}

#[test]
fn ramond_labels_vanish() {
    assert!(rspin(3, 0, &[(0, 2), (0, 0), (0, 0)]).unwrap().is_zero());
    assert!(rspin(4, 1, &[(0, 3), (1, 0)]).unwrap().is_zero());
}

#[test]
fn rejects_unsupported_input() {
    assert!(RSpinKey::new(5, 1, &[(1, 0)]).is_err());
    assert!(RSpinKey::new(3, 1, &[(1, 3)]).is_err());
    assert!(RSpinKey::new(3, -1, &[(1, 0)]).is_err());
    assert!(puncture_recursion(3, 0, &[(1, 1)]).is_err());
}

/// Both sides of WDVV at primaries `a,b | c,d` with passengers.
fn wdvv_sides(r: u32, abcd: [(u32, u32); 4], rest: &[(u32, u32)]) -> (Rational, Rational) {
    let side = |x: (u32, u32), y: (u32, u32), z: (u32, u32), w: (u32, u32)| {
        let mut acc = rint(0);
        for mask in 0..1u32 << rest.len() {
            let (mut i, mut j) = (vec![x, y], vec![z, w]);
            for (k, &p) in rest.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    i.push(p)
                } else {
                    j.push(p)
                }
            }
            for e in 0..=r - 2 {
                let mut ie = i.clone();
                ie.push((0, e));
                let mut jf = j.clone();
                jf.push((0, r - 2 - e));
                acc += genus0_wdvv(r, &ie).unwrap() * genus0_wdvv(r, &jf).unwrap();
            }
        }
        acc
    };
    let [a, b, c, d] = abcd;
    (side(a, b, c, d), side(a, c, b, d))
}

#[test]
fn genus_zero_satisfies_wdvv() {
    let mut nontrivial = 0;
    for r in 3..=4u32 {
        let pts: Vec<(u32, u32)> = (0..=2u32).flat_map(|n| (0..=r - 2).map(move |m| (n, m))).collect();
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    for d in &pts {
                        for extra in [vec![], vec![(0, 1)], vec![(1, r - 2)], vec![(0, r - 2), (1, 1)]] {
                            let (l, rr) = wdvv_sides(r, [*a, *b, *c, *d], &extra);
                            assert_eq!(l, rr, "r={r} {a:?}{b:?}|{c:?}{d:?} {extra:?}");
                            if !l.is_zero() {
                                nontrivial += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(nontrivial > 50);
}

#[test]
fn dilaton_equation_holds() {
    for r in 3..=4u32 {
        for g in 1..=3i64 {
            for s in 1..=3usize {
                for (key, v) in table(r, g, s).unwrap() {
                    let mut ins = key.insertions.clone();
                    ins.push((1, 0));
                    let want = rint(2 * g - 2 + s as i64) * v;
                    assert_eq!(rspin(r, g, &ins).unwrap(), want, "{key}");
                }
            }
        }
    }
}

#[test]
fn puncture_recursion_at_r_two() {
    for g in 1..=3i64 {
        for s in 1..=3usize {
            for d in compositions(s, (3 * g - 2 + s as i64 - 1) as u32) {
                let others: Vec<(u32, u32)> = d.iter().map(|&n| (n, 0)).collect();
                let mut full = d.clone();
                full.push(0);
                assert_eq!(puncture_recursion(2, g, &others).unwrap(), psi_correlator(g, &full), "g={g} d={d:?}");
            }
        }
    }
}

#[test]
fn low_terms_vanish_in_genus_zero() {
    for r in 2..=4u32 {
        assert!(low_r(r, 0, &[(0, 1), (1, 0)]).unwrap().is_zero());
    }
    // (1/12)⟨τ_0^4 τ_2⟩_0 = 1/12
    assert_eq!(low_r(2, 1, &[(2, 0)]).unwrap(), rat(1, 12));
}

proptest! {
    #[test]
    fn insertion_order_is_irrelevant(r in 3u32..5, g in 1i64..3, raw in proptest::collection::vec((0u32..5, 0u32..3), 1..4), seed in any::<u64>()) {
        let ins: Vec<(u32, u32)> = raw.iter().map(|&(n, m)| (n, m % (r - 1))).collect();
        let mut shuffled = ins.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        prop_assert_eq!(rspin(r, g, &ins).unwrap(), rspin(r, g, &shuffled).unwrap());
    }

    #[test]
    fn selection_failure_gives_zero(r in 2u32..5, g in 0i64..3, raw in proptest::collection::vec((0u32..6, 0u32..3), 1..4)) {
        let ins: Vec<(u32, u32)> = raw.iter().map(|&(n, m)| (n, m % (r - 1))).collect();
        let key = RSpinKey::new(r, g, &ins).unwrap();
        if !selection_check(&key) {
            prop_assert!(rspin_correlator(&key).unwrap().is_zero());
        }
    }
}

use moduli::descendent::psi_correlator;
use moduli::exact::{bernoulli, double_factorial, rat, rint, MultiIndex, Rational};
use moduli::hodge::{hodge_integral, HodgeIntegrand};
use moduli::npoint::compositions;
use moduli::wpvolumes::*;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn kappa_route(g: i64, b: &MultiIndex, d: &[u32]) -> Rational {
    hodge_integral(&HodgeIntegrand::new(g, d).with_kappa(b.clone()))
}

fn mirzakhani(l: u32) -> Rational {
    let p = Rational::from_integer(BigInt::from(2).pow(2 * l)) - rint(2);
    let s = if l % 2 == 1 { rint(1) } else { rint(-1) };
    s * p * bernoulli(2 * l as i64).unwrap() / Rational::from_integer(double_factorial(2 * l as i64 - 1).unwrap())
}

#[test]
fn alpha_single_kappa_one_matches_closed_form() {
    for l in 1..=8u32 {
        let b = MultiIndex::from_multiplicities(&[l]);
        assert_eq!(alpha(&b), mirzakhani(l), "l={l}");
        assert_eq!(alpha_closed(l), mirzakhani(l));
    }
}

#[test]
fn alpha_delta_is_reciprocal_double_factorial() {
    for l in 1..=8usize {
        let want = rint(1) / Rational::from_integer(double_factorial(2 * l as i64 + 1).unwrap());
        assert_eq!(alpha(&MultiIndex::delta(l)), want);
    }
}

#[test]
fn alpha_defining_relation_through_weight_eight() {
    for w in 1..=8u64 {
        for b in MultiIndex::of_weight(w) {
            assert!(alpha_relation(&b).is_zero(), "b={b}");
        }
    }
}

#[test]
fn volumes_agree_across_three_routes() {
    let mut checked = 0;
    for g in 0..=3i64 {
        for n in 1..=3usize {
            let w = 3 * g - 3 + n as i64;
            if w < 0 {
                continue;
            }
            for b in MultiIndex::of_weight(w as u64) {
                if b.length() > 3 {
                    continue;
                }
                let zeros = vec![0; n];
                let v = wp_volume(g, n, &b).unwrap();
                assert_eq!(v, wp_mixed(g, &b, &zeros).unwrap(), "g={g} n={n} b={b}");
                assert_eq!(v, kappa_route(g, &b, &zeros), "g={g} n={n} b={b}");
                checked += 1;
            }
        }
    }
    assert!(checked > 30);
}

#[test]
fn mixed_psi_kappa_matches_kappa_removal() {
    for g in 0..=2i64 {
        for n in 1..=3usize {
            let dim = 3 * g - 3 + n as i64;
            for kw in 1..=dim.max(0) as u64 {
                for b in MultiIndex::of_weight(kw) {
                    if b.length() > 2 {
                        continue;
                    }
                    for d in compositions(n, (dim - kw as i64) as u32) {
                        let want = kappa_route(g, &b, &d);
                        assert_eq!(wp_mixed(g, &b, &d).unwrap(), want, "g={g} b={b} d={d:?}");
                        assert_eq!(mixed_via_volumes(g, &b, &d).unwrap(), want, "g={g} b={b} d={d:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn mixed_without_kappa_is_descendent() {
    for (g, d) in [(1i64, vec![1u32]), (2, vec![4]), (2, vec![2, 3]), (3, vec![2, 2, 3, 2])] {
        assert_eq!(wp_mixed(g, &MultiIndex::zero(), &d).unwrap(), psi_correlator(g, &d));
    }
}

#[test]
fn closed_genus_recursion_matches_reduction() {
    for g in 2..=3i64 {
        for b in MultiIndex::of_weight((3 * g - 3) as u64) {
            if b.length() > 3 {
                continue;
            }
            let v = wp_volume_closed(g, &b).unwrap();
            assert_eq!(v, wp_n0(g, &b).unwrap(), "g={g} b={b}");
            assert_eq!(v, kappa_route(g, &b, &[]), "g={g} b={b}");
        }
    }
}

#[test]
fn kappa_one_cubed_genus_two() {
    let b = MultiIndex::from_multiplicities(&[3]);
    assert_eq!(wp_volume_closed(2, &b).unwrap(), rat(43, 2880));
    assert_eq!(wp_n0(2, &b).unwrap(), rat(43, 2880));
    assert_eq!(kappa_route(2, &b, &[]), rat(43, 2880));
}

#[test]
fn genus_three_kappa_one_powers_three_routes() {
    // κ_1^4 has the wrong degree on M̄_3, κ_1^6 is the classical volume
    let b4 = MultiIndex::from_multiplicities(&[4]);
    assert!(wp_volume_closed(3, &b4).unwrap().is_zero());
    assert!(wp_n0(3, &b4).unwrap().is_zero());
    assert!(kappa_route(3, &b4, &[]).is_zero());
    let b6 = MultiIndex::from_multiplicities(&[6]);
    let v = wp_volume_closed(3, &b6).unwrap();
    assert_eq!(v, wp_n0(3, &b6).unwrap());
    assert_eq!(v, kappa_route(3, &b6, &[]));
    assert_eq!(v, rat(176557, 107520));
}

#[test]
fn other_kappa_zero_readings_disagree() {
    let b = MultiIndex::from_multiplicities(&[3]);
    let want = rat(43, 2880);
    assert_ne!(wp_volume_closed_with(2, &b, KappaZero::Drop).unwrap(), want);
    assert_ne!(wp_volume_closed_with(2, &b, KappaZero::Identity).unwrap(), want);
}

#[test]
fn classical_volumes_small() {
    // V_{0,5}(2δ_1) = 5 and V_{0,6}(3δ_1) = 61
    assert_eq!(wp_volume(0, 5, &MultiIndex::from_multiplicities(&[2])).unwrap(), rint(5));
    assert_eq!(wp_volume(0, 6, &MultiIndex::from_multiplicities(&[3])).unwrap(), rint(61));
    assert_eq!(wp_volume(1, 2, &MultiIndex::from_multiplicities(&[2])).unwrap(), rat(1, 8));
}

#[test]
fn genus_zero_single_kappa_is_one() {
    for n in 4..=9usize {
        assert_eq!(wp_volume(0, n, &MultiIndex::delta(n - 3)).unwrap(), rint(1));
    }
}

#[test]
fn n0_rejections() {
    assert!(wp_n0_reduce(1, &MultiIndex::zero()).is_err());
    assert!(wp_volume_closed(1, &MultiIndex::zero()).is_err());
    assert!(wp_mixed(2, &MultiIndex::delta(3), &[]).is_err());
    assert!(wp_volume(2, 0, &MultiIndex::delta(3)).is_err());
}

proptest! {
    #[test]
    fn exchange_preserves_degree(g in 1i64..4, d in proptest::collection::vec(0u32..4, 1..4), dn in 1u32..4, k in 1usize..4) {
        let mut d = d;
        d.push(dn);
        let b = MultiIndex::delta(k).add_delta(1);
        let before = d.iter().map(|&x| x as u64).sum::<u64>() + b.weight();
        for (_, d2, b2) in kappa_psi_exchange(g, &d, &b).unwrap() {
            let after = d2.iter().map(|&x| x as u64).sum::<u64>() + b2.weight();
            prop_assert_eq!(after + 1, before);
        }
    }
}

//! Hodge integrals against their closed formulas, and Hurwitz numbers via ELSV.
use moduli::exact::{fmt_rational, Partition};
use moduli::hodge::{closed_formula_oracle, elsv_hurwitz, psi_lambda, ClosedFormula};

fn main() {
    for g in 2..=4i64 {
        let k = g as u32 - 1;
        let v = psi_lambda(g, &[], &[k, k, k]);
        assert_eq!(v, closed_formula_oracle(ClosedFormula::L3g, g, &[]).unwrap());
        println!("<lambda_{k}^3>_{g} = {}", fmt_rational(&v));
    }
    for mu in [vec![1, 1, 1], vec![2, 1, 1], vec![3, 1, 1]] {
        let h = elsv_hurwitz(0, &Partition::new(mu.clone()).unwrap()).unwrap();
        println!("H_0,{mu:?} = {}", fmt_rational(&h));
    }
}

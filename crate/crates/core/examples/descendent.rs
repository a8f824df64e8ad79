//! ψ-class intersection numbers by DVV and by the effective recursion.
use moduli::descendent::{effective_recursion, psi_correlator};
use moduli::exact::fmt_rational;

fn main() {
    for (g, d) in [(0, vec![0, 0, 0]), (1, vec![1]), (2, vec![4]), (2, vec![2, 3]), (3, vec![2, 3, 3, 2])] {
        let v = psi_correlator(g, &d);
        assert_eq!(v, effective_recursion(g, &d));
        println!("<tau {d:?}>_{g} = {}", fmt_rational(&v));
    }
}

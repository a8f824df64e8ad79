//! Weil–Petersson volumes V_{g,n} = <tau_0^n kappa_1^{3g-3+n}>_g.
use moduli::exact::{fmt_rational, MultiIndex};
use moduli::wpvolumes::{wp_volume, wp_volume_closed};

fn main() {
    for (g, n) in [(0, 4), (1, 1), (1, 2), (2, 1), (3, 1)] {
        let b = MultiIndex::from_multiplicities(&[(3 * g - 3 + n) as u32]);
        println!("V_{g},{n} = {}", fmt_rational(&wp_volume(g, n as usize, &b).unwrap()));
    }
    let b = MultiIndex::from_multiplicities(&[3]);
    println!("V_2 = {}", fmt_rational(&wp_volume_closed(2, &b).unwrap()));
}

//! Witten r-spin numbers for r = 3 and 4.
use moduli::exact::fmt_rational;
use moduli::rspin::table;

fn main() {
    for r in [3, 4] {
        for g in 1..=2 {
            for (key, v) in table(r, g, 1).unwrap().into_iter().chain(table(r, g, 2).unwrap()) {
                println!("{key} = {}", fmt_rational(&v));
            }
        }
    }
}

//! ω(n) exactly and from the rapidly convergent real series.
use moduli::mocktheta::{conjecture_report, garthwaite_sum, omega_series};

fn main() {
    let s = omega_series(100);
    for n in [10, 50, 100] {
        let gs = garthwaite_sum(n, 25).unwrap();
        println!("omega({n}) = {}  (float sum {}, distance {:.2e})", s.coeff(n as usize), gs.decimal, gs.distance);
    }
    let r = conjecture_report(20).unwrap();
    for c in &r.genera {
        println!("g={:2}  R_g={:3}  omega_g={:3}", c.g, c.r_g(), c.omega_g());
    }
    println!("first difference at {:?}", r.first_difference());
}

//! The n-point function F_g and its closed two-point form.
use moduli::npoint::{npoint_f, npoint_g, two_point_closed};

fn main() {
    println!("F_1(x, y) = {}", npoint_f(1, 2).unwrap());
    println!("F_2(x) = {}", npoint_f(2, 1).unwrap());
    for (g, p) in two_point_closed(8) {
        assert_eq!(npoint_g(g as i64, 2).unwrap(), p);
        println!("G_{g}(x, y) = {p}");
    }
}

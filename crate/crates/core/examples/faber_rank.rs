//! Rank profiles of the Faber intersection matrices.
use moduli::fabering::rank_profile;

fn main() {
    for g in 2..=14 {
        let p = rank_profile(g).unwrap();
        println!("g={g:2}  R_g={:3}  {p:?}", p.iter().sum::<usize>());
    }
}

//! Published reference tables, embedded from the text files under
//! `tests/fixtures/`. Used by `verify` and `table` and by the test suite.

use crate::exact::{parse_rational, Rational};
use crate::rspin::Insertion;

const FABER_RANKS: &str = include_str!("../tests/fixtures/faber_ranks.txt");
const OMEGA_PROFILES: &str = include_str!("../tests/fixtures/omega_profiles.txt");
const OMEGA_VS_RANK: &str = include_str!("../tests/fixtures/omega_vs_rank.txt");
const SEQUENCES: &str = include_str!("../tests/fixtures/sequences.txt");
const RSPIN3: &str = include_str!("../tests/fixtures/rspin3.txt");
const RSPIN4: &str = include_str!("../tests/fixtures/rspin4.txt");

fn lines(src: &str) -> impl Iterator<Item = &str> {
    src.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn numbers<T: std::str::FromStr>(s: &str) -> Vec<T>
where
    T::Err: std::fmt::Debug,
{
    s.split_whitespace().map(|x| x.parse().expect("fixture number")).collect()
}

fn half_profiles(src: &str) -> Vec<(u64, Vec<u64>)> {
    lines(src)
        .map(|l| {
            let (g, rest) = l.split_once(':').expect("fixture row");
            (g.trim().parse().expect("fixture genus"), numbers(rest))
        })
        .collect()
}

/// Extend a half profile `x_0 … x_{⌊(g−2)/2⌋}` by `x_k = x_{g−2−k}`.
pub fn mirror<T: Clone>(g: u64, half: &[T]) -> Vec<T> {
    let top = g - 2;
    (0..=top).map(|k| half[k.min(top - k) as usize].clone()).collect()
}

/// `(g, R_g^0 … R_g^{g−2})` for `2 ≤ g ≤ 23`.
pub fn faber_ranks() -> Vec<(u64, Vec<u64>)> {
    half_profiles(FABER_RANKS).into_iter().map(|(g, h)| (g, mirror(g, &h))).collect()
}

/// `(g, ω_g^0 … ω_g^{g−2})` for `18 ≤ g ≤ 23`.
pub fn omega_profiles() -> Vec<(u64, Vec<u64>)> {
    half_profiles(OMEGA_PROFILES).into_iter().map(|(g, h)| (g, mirror(g, &h))).collect()
}

/// `(g, ω_g, R_g)` for `18 ≤ g ≤ 30`.
pub fn omega_vs_rank() -> Vec<(u64, u64, u64)> {
    lines(OMEGA_VS_RANK)
        .map(|l| {
            let v: Vec<u64> = numbers(l);
            (v[0], v[1], v[2])
        })
        .collect()
}

/// A named sequence as `(first index, values)`: one of `omega`, `f`, `p`,
/// `p_omega`, `a_omega`, `a`.
pub fn sequence(name: &str) -> Option<(i64, Vec<i64>)> {
    lines(SEQUENCES).find_map(|l| {
        let (head, vals) = l.split_once(':')?;
        let mut it = head.split_whitespace();
        if it.next()? != name {
            return None;
        }
        Some((it.next()?.parse().ok()?, numbers(vals)))
    })
}

/// `(genus, insertions, value)` for `r = 3` or `4`.
pub fn rspin_table(r: u32) -> Vec<(i64, Vec<Insertion>, Rational)> {
    let src = match r {
        3 => RSPIN3,
        4 => RSPIN4,
        _ => return Vec::new(),
    };
    lines(src)
        .map(|l| {
            let parts: Vec<&str> = l.split('|').map(str::trim).collect();
            let ins = parts[1]
                .split_whitespace()
                .map(|p| {
                    let (n, m) = p.split_once(',').expect("insertion");
                    (n.parse().expect("n"), m.parse().expect("m"))
                })
                .collect();
            (parts[0].parse().expect("genus"), ins, parse_rational(parts[2]).expect("value"))
        })
        .collect()
}

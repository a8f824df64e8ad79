//! Published tables, read from the text files in this directory.
#![allow(dead_code)]

use moduli::exact::Rational;
use moduli::reference;

fn seq(name: &str) -> Vec<i64> {
    reference::sequence(name).expect("sequence").1
}

fn unsigned(name: &str) -> Vec<u64> {
    seq(name).into_iter().map(|v| v as u64).collect()
}

pub fn rank_profiles() -> Vec<(u64, Vec<u64>)> {
    reference::faber_ranks()
}

pub fn omega_profiles() -> Vec<(u64, Vec<u64>)> {
    reference::omega_profiles()
}

pub fn omega_vs_rank() -> Vec<(u64, u64, u64)> {
    reference::omega_vs_rank()
}

pub fn omega_coeffs() -> Vec<u64> {
    unsigned("omega")
}

pub fn f_coeffs() -> Vec<i64> {
    seq("f")
}

pub fn partitions() -> Vec<u64> {
    unsigned("p")
}

pub fn p_omega() -> Vec<u64> {
    unsigned("p_omega")
}

pub fn a_omega() -> Vec<u64> {
    unsigned("a_omega")
}

/// `a(n)` for `n ≥ 1`, stored from index 0.
pub fn a_faber() -> Vec<u64> {
    unsigned("a")
}

pub type RSpinRow = (i64, Vec<(u32, u32)>, Rational);

pub fn rspin_rows(r: u32) -> Vec<RSpinRow> {
    reference::rspin_table(r)
}

//! The Faber intersection matrices `V_g^k` and their ranks.
//!
//! `(V_g^k)_{L,L'}` depends only on `m = L + L'`:
//! `Σ_r (−1)^{||m||−r}/r! Σ_{m = m_1+⋯+m_r} binom(m; m_1..m_r) (2g−3+r)!/∏(2|m_j|+1)!!`.
//! Writing `C(s) = Σ_L s^L/(L!(2|L|+1)!!)`, the inner sum is `m!·[s^m](C(s)−1)^r`,
//! which does not depend on `g` and is memoized on `(m, r)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::exact::{dfq, factorial, from_big, partitions, sign, MultiIndex, Rational};
use crate::memo::Memo;

static POWER: Memo<(MultiIndex, u64), Rational> = Memo::new();
static ENTRY: Memo<(i64, MultiIndex), Rational> = Memo::new();

fn block(l: &MultiIndex) -> Rational {
    Rational::one() / (from_big(l.factorial()) * dfq(2 * l.weight() as i64 + 1))
}

/// `[s^m](C(s) − 1)^r`.
fn power_coeff(m: &MultiIndex, r: u64) -> Rational {
    if r == 0 {
        return if m.is_zero() { Rational::one() } else { Rational::zero() };
    }
    if r > m.length() {
        return Rational::zero();
    }
    if r == 1 {
        return block(m);
    }
    let key = (m.clone(), r);
    if let Some(v) = POWER.get(&key) {
        return v;
    }
    let mut acc = Rational::zero();
    for l in m.sub_indices() {
        if l.is_zero() {
            continue;
        }
        let rest = m.checked_sub(&l).expect("sub-index");
        if rest.length() < r - 1 {
            continue;
        }
        acc += block(&l) * power_coeff(&rest, r - 1);
    }
    POWER.insert(key, acc.clone());
    acc
}

fn entry_of_sum(g: i64, m: &MultiIndex) -> Rational {
    let key = (g, m.clone());
    if let Some(v) = ENTRY.get(&key) {
        return v;
    }
    let len = m.length();
    let mut acc = Rational::zero();
    // the r = 0 term only survives for m = 0, where it gives (2g−3)!
    for r in 0..=len {
        acc += sign((len - r) as i64) * from_big(factorial((2 * g - 3 + r as i64) as u64))
            / from_big(factorial(r))
            * power_coeff(m, r);
    }
    let v = from_big(m.factorial()) * acc;
    ENTRY.insert(key, v.clone());
    v
}

/// `(V_g^k)_{L,L'}` with `|L| + |L'| = g − 2`.
pub fn faber_entry(g: i64, l: &MultiIndex, lp: &MultiIndex) -> Result<Rational> {
    if g < 2 || l.weight() + lp.weight() != (g - 2) as u64 {
        return invalid("faber_entry needs |L| + |L'| = g − 2");
    }
    Ok(entry_of_sum(g, &l.add(lp)))
}

/// The constant `c` with `κ(m) = c·κ_{g−2}` in `R^{g−2}(M_g)`.
pub fn faber_relation_coefficient(g: i64, m: &MultiIndex) -> Result<Rational> {
    if g < 2 || m.weight() != (g - 2) as u64 {
        return invalid("the relation needs |m| = g − 2");
    }
    let ddf = dfq(2 * g - 2);
    Ok(entry_of_sum(g, m) / ddf)
}

/// Partitions of `k` as multi-indices, sorted lexicographically on the
/// multiplicity vector.
pub fn partition_indices(k: u64) -> Vec<MultiIndex> {
    let mut v: Vec<MultiIndex> = partitions(k).iter().map(|p| p.to_multi_index()).collect();
    v.sort();
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaberMatrix {
    pub g: i64,
    pub k: u64,
    pub rows: Vec<MultiIndex>,
    pub cols: Vec<MultiIndex>,
    pub entries: Vec<Vec<Rational>>,
}

impl FaberMatrix {
    pub fn new(g: i64, k: u64) -> Result<Self> {
        if g < 2 || k as i64 > g - 2 {
            return invalid("need g ≥ 2 and 0 ≤ k ≤ g − 2");
        }
        let rows = partition_indices(k);
        let cols = partition_indices((g - 2) as u64 - k);
        let entries = rows
            .iter()
            .map(|l| cols.iter().map(|lp| entry_of_sum(g, &l.add(lp))).collect())
            .collect();
        Ok(FaberMatrix { g, k, rows, cols, entries })
    }

    pub fn rank(&self) -> usize {
        exact_rank(&self.entries)
    }
}

/// Rank over `Q`: each row is scaled to integers, then Bareiss elimination.
pub fn exact_rank(m: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let den = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&den / q.denom())).collect()
        })
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].abs();
        if prev.is_zero() {
            prev = BigInt::one();
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// `[R_g^0, …, R_g^{g−2}]`; the sum is `R_g`.
pub fn rank_profile(g: i64) -> Result<Vec<usize>> {
    if g < 2 {
        return invalid("rank profile needs g ≥ 2");
    }
    let top = (g - 2) as u64;
    let half: Vec<usize> = (0..=top / 2)
        .map(|k| FaberMatrix::new(g, k).map(|m| m.rank()))
        .collect::<Result<_>>()?;
    Ok((0..=top).map(|k| half[k.min(top - k) as usize]).collect())
}

pub fn memo_clear() {
    POWER.clear();
    ENTRY.clear();
}

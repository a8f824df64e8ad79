//! ψ-class intersection numbers ⟨τ_{d_1}⋯τ_{d_n}⟩_g.
//!
//! The primary algorithm is the DVV recursion. The lower-genus effective
//! recursion is a second, independent algorithm with its own memo table.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{df, from_big, multinomial, multiset_splits, rat, rint, Rational};
use crate::memo::Memo;

/// Canonical memo key: genus plus the sorted (descending) index multiset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CorrelatorKey {
    pub genus: i64,
    pub indices: Vec<u32>,
}

impl CorrelatorKey {
    pub fn new(genus: i64, indices: &[u32]) -> Self {
        let mut indices = indices.to_vec();
        indices.sort_unstable_by(|a, b| b.cmp(a));
        CorrelatorKey { genus, indices }
    }

    pub fn n(&self) -> usize {
        self.indices.len()
    }

    pub fn is_stable(&self) -> bool {
        self.genus >= 0 && 2 * self.genus - 2 + self.n() as i64 > 0
    }

    /// `Σ d_i = 3g − 3 + n`.
    pub fn dimension_ok(&self) -> bool {
        let s: i64 = self.indices.iter().map(|&d| d as i64).sum();
        s == 3 * self.genus - 3 + self.n() as i64
    }

    /// Parse the `g;d1,d2,...` form produced by `Display`.
    pub fn parse(s: &str) -> Option<Self> {
        let (g, rest) = s.split_once(';')?;
        let g: i64 = g.parse().ok()?;
        let d: Option<Vec<u32>> = if rest.is_empty() {
            Some(Vec::new())
        } else {
            rest.split(',').map(|x| x.parse().ok()).collect()
        };
        Some(CorrelatorKey::new(g, &d?))
    }
}

impl fmt::Display for CorrelatorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.indices.iter().map(|d| d.to_string()).collect();
        write!(f, "{};{}", self.genus, d.join(","))
    }
}

/// A rational combination of correlators, as produced by the string and
/// dilaton reductions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expansion {
    pub terms: Vec<(Rational, CorrelatorKey)>,
}

impl Expansion {
    pub fn evaluate(&self) -> Rational {
        self.terms
            .iter()
            .map(|(c, k)| c * psi_correlator(k.genus, &k.indices))
            .sum()
    }
}

static DVV_MEMO: Memo<CorrelatorKey, Rational> = Memo::new();
static EFF_MEMO: Memo<CorrelatorKey, Rational> = Memo::new();

/// Memoized DVV values, for persistence.
pub fn memo_entries() -> Vec<(CorrelatorKey, Rational)> {
    DVV_MEMO.entries()
}

/// Seed the DVV memo (used when loading a persistent cache).
pub fn memo_seed(key: CorrelatorKey, value: Rational) {
    DVV_MEMO.insert(key, value);
}

pub fn memo_clear() {
    DVV_MEMO.clear();
    EFF_MEMO.clear();
}

/// `(2a+1)!!/(2b−1)!!` style ratios appear everywhere; `(2k+1)!!` as rational.
fn odd_df(k: i64) -> Rational {
    from_big(df(2 * k + 1))
}

/// Genus of a factor `⟨τ_{d}…⟩` forced by the dimension constraint, if any.
fn forced_genus(sum: i64, n: usize) -> Option<i64> {
    let t = sum - n as i64 + 3;
    if t >= 0 && t % 3 == 0 {
        Some(t / 3)
    } else {
        None
    }
}

/// `⟨τ_{d_1}⋯τ_{d_n}⟩_g` by the DVV recursion. Returns 0 on unstable input
/// or when the dimension constraint fails.
pub fn psi_correlator(g: i64, d: &[u32]) -> Rational {
    let key = CorrelatorKey::new(g, d);
    psi_key(&key)
}

pub fn psi_key(key: &CorrelatorKey) -> Rational {
    if !key.is_stable() || !key.dimension_ok() {
        return Rational::zero();
    }
    if let Some(v) = DVV_MEMO.get(key) {
        return v;
    }
    let v = dvv(key);
    DVV_MEMO.insert(key.clone(), v.clone());
    v
}

fn dvv(key: &CorrelatorKey) -> Rational {
    let g = key.genus;
    let d = &key.indices;
    if d[0] == 0 {
        // only ⟨τ_0³⟩_0 survives the dimension constraint
        return Rational::one();
    }
    if g == 1 && d.as_slice() == [1] {
        return rat(1, 24);
    }
    let k = d[0] as i64 - 1;
    let rest = &d[1..];
    let mut total = Rational::zero();

    for j in 0..rest.len() {
        if j > 0 && rest[j] == rest[j - 1] {
            continue;
        }
        let mult = rest.iter().filter(|&&x| x == rest[j]).count() as i64;
        let dj = rest[j] as i64;
        let mut nd = rest.to_vec();
        nd[j] = (dj + k) as u32;
        let c = from_big(df(2 * k + 2 * dj + 1)) / from_big(df(2 * dj - 1));
        total += c * rint(mult) * psi_correlator(g, &nd);
    }

    let half = rat(1, 2);
    for r in 0..k {
        let s = k - 1 - r;
        let c = &half * odd_df(r) * odd_df(s);
        let mut nd = rest.to_vec();
        nd.push(r as u32);
        nd.push(s as u32);
        let mut inner = psi_correlator(g - 1, &nd);
        for (a, b, w) in multiset_splits(rest) {
            let sa: i64 = a.iter().map(|&x| x as i64).sum::<i64>() + r;
            let Some(g1) = forced_genus(sa, a.len() + 1) else { continue };
            if g1 > g {
                continue;
            }
            let mut a1 = a.clone();
            a1.push(r as u32);
            let x = psi_correlator(g1, &a1);
            if x.is_zero() {
                continue;
            }
            let mut b1 = b.clone();
            b1.push(s as u32);
            inner += x * psi_correlator(g - g1, &b1) * rint(w as i64);
        }
        total += c * inner;
    }
    total / odd_df(k + 1)
}

/// `⟨τ_{d_1}⋯τ_{d_n}⟩_0 = (n−3)! / ∏ d_i!`.
pub fn genus0_closed(d: &[u32]) -> Result<Rational> {
    let n = d.len();
    if n < 3 {
        return Err(Error::Unstable { g: 0, n });
    }
    let s: u64 = d.iter().map(|&x| x as u64).sum();
    if s != n as u64 - 3 {
        return Ok(Rational::zero());
    }
    let ks: Vec<u64> = d.iter().map(|&x| x as u64).collect();
    Ok(from_big(multinomial(&ks)))
}

/// Remove one `τ_0` by the string equation.
pub fn string_reduce(g: i64, d: &[u32]) -> Result<Expansion> {
    let pos = d
        .iter()
        .position(|&x| x == 0)
        .ok_or_else(|| Error::Invalid("string reduction needs a τ_0".into()))?;
    let mut rest = d.to_vec();
    rest.remove(pos);
    if g < 0 || 2 * g - 2 + rest.len() as i64 <= 0 {
        return Err(Error::Unstable { g, n: rest.len() });
    }
    let mut terms: Vec<(Rational, CorrelatorKey)> = Vec::new();
    for j in 0..rest.len() {
        if rest[j] == 0 {
            continue;
        }
        let mut nd = rest.clone();
        nd[j] -= 1;
        let key = CorrelatorKey::new(g, &nd);
        match terms.iter_mut().find(|(_, k)| *k == key) {
            Some((c, _)) => *c += Rational::one(),
            None => terms.push((Rational::one(), key)),
        }
    }
    Ok(Expansion { terms })
}

/// Remove one `τ_1` by the dilaton equation.
pub fn dilaton_reduce(g: i64, d: &[u32]) -> Result<Expansion> {
    let pos = d
        .iter()
        .position(|&x| x == 1)
        .ok_or_else(|| Error::Invalid("dilaton reduction needs a τ_1".into()))?;
    let mut rest = d.to_vec();
    rest.remove(pos);
    let n = rest.len() as i64;
    if g < 0 || 2 * g - 2 + n <= 0 {
        return Err(Error::Unstable { g, n: rest.len() });
    }
    Ok(Expansion {
        terms: vec![(rint(2 * g - 2 + n), CorrelatorKey::new(g, &rest))],
    })
}

/// The same numbers by the recursion expressing genus `g` through strictly
/// lower genera, with `τ_0` removed by the string equation and genus zero
/// given by the multinomial formula. Shares nothing with [`psi_correlator`].
pub fn effective_recursion(g: i64, d: &[u32]) -> Rational {
    let key = CorrelatorKey::new(g, d);
    eff_key(&key)
}

fn eff_key(key: &CorrelatorKey) -> Rational {
    if !key.is_stable() || !key.dimension_ok() {
        return Rational::zero();
    }
    if let Some(v) = EFF_MEMO.get(key) {
        return v;
    }
    let v = eff(key);
    EFF_MEMO.insert(key.clone(), v.clone());
    v
}

fn eff_at(g: i64, d: &[u32]) -> Rational {
    eff_key(&CorrelatorKey::new(g, d))
}

fn eff(key: &CorrelatorKey) -> Rational {
    let g = key.genus;
    let d = &key.indices;
    if g == 0 {
        return genus0_closed(d).unwrap_or_else(|_| Rational::zero());
    }
    if *d.last().unwrap() == 0 {
        let mut rest = d.clone();
        rest.pop();
        let mut total = Rational::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut nd = rest.clone();
            nd[j] -= 1;
            total += eff_at(g, &nd);
        }
        return total;
    }
    let n = d.len() as i64;
    let d1 = d[0];
    let rest = &d[1..];
    let big = rint(2 * g + n - 1);

    let mut v = Vec::with_capacity(d.len() + 4);
    v.extend_from_slice(&[0, 0, 0, 0, d1 + 1]);
    v.extend_from_slice(rest);
    let mut total = rat(2 * d1 as i64 + 3, 12) * eff_at(g - 1, &v);

    let mut v = vec![0, 0, 0];
    v.extend_from_slice(d);
    total -= &big / rint(6) * eff_at(g - 1, &v);

    for (a, b, w) in multiset_splits(rest) {
        let w = rint(w as i64);
        let mut second = vec![0, 0];
        second.extend_from_slice(&b);
        let sb: i64 = b.iter().map(|&x| x as i64).sum();
        let Some(g2) = forced_genus(sb, b.len() + 2) else { continue };
        if g2 > g {
            continue;
        }
        let y = eff_at(g2, &second);
        if y.is_zero() {
            continue;
        }
        let mut first = vec![d1 + 1, 0, 0];
        first.extend_from_slice(&a);
        let x1 = eff_at(g - g2, &first);
        let mut first = vec![d1, 0];
        first.extend_from_slice(&a);
        let x2 = eff_at(g - g2, &first);
        total += (rint(2 * d1 as i64 + 3) * x1 - &big * x2) * y * w;
    }
    total / rint((2 * g + n - 1) * (2 * g + n - 2))
}

/// The KdV coefficient identity at zero coupling, with passenger insertions
/// `s` distributed over the product terms:
/// `⟨τ_n τ_0² S⟩_g = (1/(2n+1))[⟨τ_{n−1}τ_0 A⟩⟨τ_0³ B⟩ + 2⟨τ_{n−1}τ_0² A⟩⟨τ_0² B⟩
/// + ¼⟨τ_{n−1}τ_0⁴ S⟩_{g−1}]`, summed over `S = A ⊔ B` and genus splits.
pub fn kdv_identity_holds(g: i64, n: u32, s: &[u32]) -> bool {
    let (lhs, rhs) = kdv_sides(g, n, s);
    lhs == rhs
}

pub fn kdv_sides(g: i64, n: u32, s: &[u32]) -> (Rational, Rational) {
    assert!(n >= 1);
    let with = |head: &[u32], tail: &[u32]| {
        let mut v = head.to_vec();
        v.extend_from_slice(tail);
        v
    };
    let lhs = psi_correlator(g, &with(&[n, 0, 0], s));
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    let mut rhs = Rational::zero();
    for (a, b, w) in multiset_splits(&sorted) {
        let mut acc = Rational::zero();
        for g1 in 0..=g {
            let g2 = g - g1;
            acc += psi_correlator(g1, &with(&[n - 1, 0], &a)) * psi_correlator(g2, &with(&[0, 0, 0], &b));
            acc += rint(2)
                * psi_correlator(g1, &with(&[n - 1, 0, 0], &a))
                * psi_correlator(g2, &with(&[0, 0], &b));
        }
        rhs += acc * rint(w as i64);
    }
    rhs += rat(1, 4) * psi_correlator(g - 1, &with(&[n - 1, 0, 0, 0, 0], s));
    rhs /= rint(2 * n as i64 + 1);
    (lhs, rhs)
}

/// Every index tuple (sorted descending) with `Σ d = 3g − 3 + n`.
pub fn admissible_indices(g: i64, n: usize) -> Vec<Vec<u32>> {
    let total = 3 * g - 3 + n as i64;
    if total < 0 || 2 * g - 2 + n as i64 <= 0 {
        return Vec::new();
    }
    fn rec(left: u32, slots: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (0..=max.min(left)).rev() {
            cur.push(x);
            rec(left - x, slots - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total as u32, n, total as u32, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_values() {
        assert_eq!(psi_correlator(0, &[0, 0, 0]), rint(1));
        assert_eq!(psi_correlator(1, &[1]), rat(1, 24));
        assert_eq!(psi_correlator(2, &[4]), rat(1, 1152));
        assert_eq!(psi_correlator(0, &[0, 0, 1]), rint(0));
    }

    #[test]
    fn genus0_closed_values() {
        assert_eq!(genus0_closed(&[0, 0, 0]).unwrap(), rint(1));
        assert_eq!(genus0_closed(&[0, 0, 0, 1]).unwrap(), rint(1));
        assert_eq!(genus0_closed(&[0, 0, 0, 1, 1]).unwrap(), rint(2));
        assert!(genus0_closed(&[0, 0]).is_err());
    }

    #[test]
    fn string_and_dilaton_examples() {
        assert_eq!(string_reduce(1, &[0, 2]).unwrap().evaluate(), rat(1, 24));
        assert_eq!(string_reduce(0, &[0, 0, 0, 1]).unwrap().evaluate(), rint(1));
        assert!(string_reduce(0, &[0, 0, 0]).is_err());
        assert_eq!(dilaton_reduce(1, &[1, 1]).unwrap().evaluate(), rat(1, 24));
        let e = dilaton_reduce(2, &[1, 4]).unwrap();
        assert_eq!(e.terms[0].0, rint(3));
        assert_eq!(e.evaluate(), rat(1, 384));
        assert!(dilaton_reduce(0, &[1, 0, 0]).is_err());
    }

    #[test]
    fn effective_recursion_examples() {
        assert_eq!(effective_recursion(1, &[1]), rat(1, 24));
        assert_eq!(effective_recursion(2, &[4]), rat(1, 1152));
        assert_eq!(effective_recursion(2, &[1, 2, 2]), psi_correlator(2, &[1, 2, 2]));
    }

    #[test]
    fn known_genus_two_values() {
        // ⟨τ_2τ_3⟩_2 = 29/5760, ⟨τ_2³⟩_2 = 7/240
        assert_eq!(psi_correlator(2, &[2, 3]), rat(29, 5760));
        assert_eq!(psi_correlator(2, &[2, 2, 2]), rat(7, 240));
    }

    #[test]
    fn key_round_trip() {
        let k = CorrelatorKey::new(3, &[1, 5, 0]);
        assert_eq!(k.to_string(), "3;5,1,0");
        assert_eq!(CorrelatorKey::parse(&k.to_string()), Some(k));
        let k = CorrelatorKey::new(2, &[]);
        assert_eq!(CorrelatorKey::parse(&k.to_string()), Some(k));
    }
}

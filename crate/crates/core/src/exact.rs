//! Exact arithmetic and the combinatorial primitives every recursion leans on:
//! rationals, factorials, Bernoulli numbers, multi-indices over positive
//! indices, partitions, and multiset splittings.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Reduced fraction with positive denominator; normalized by every operation.
pub type Rational = BigRational;

/// Build `n/d` from machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Build an integral rational.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Render as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// `k!!` for `k >= -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(k: i64) -> Result<BigInt> {
    if k < -1 {
        return invalid(format!("double factorial of {k}"));
    }
    Ok(df(k))
}

/// Unchecked double factorial; callers guarantee `k >= -1`.
pub(crate) fn df(k: i64) -> BigInt {
    debug_assert!(k >= -1);
    let mut acc = BigInt::one();
    let mut i = k;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

pub(crate) fn dfq(k: i64) -> Rational {
    from_big(df(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(Σ k_i)! / ∏ k_i!`.
pub fn multinomial(ks: &[u64]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &k in ks {
        total += k;
        acc *= binomial(total, k);
    }
    acc
}

fn bernoulli_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// `B_n` for any `n >= 0` with `B_1 = -1/2`.
pub(crate) fn bernoulli_any(n: usize) -> Rational {
    if let Some(b) = bernoulli_table().read().unwrap().get(n) {
        return b.clone();
    }
    let mut table = bernoulli_table().write().unwrap();
    while table.len() <= n {
        let m = table.len();
        let mut s = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            s += from_big(binomial(m as u64 + 1, j as u64)) * b;
        }
        table.push(-s / rint(m as i64 + 1));
    }
    table[n].clone()
}

/// Bernoulli number `B_n` for even `n >= 2`.
pub fn bernoulli(n: i64) -> Result<Rational> {
    if n < 2 || n % 2 != 0 {
        return invalid(format!("bernoulli index {n} must be even and >= 2"));
    }
    Ok(bernoulli_any(n as usize))
}

/// Finitely supported multiplicity vector `(m_1, m_2, ...)`; trailing zeros
/// are trimmed so that structural and mathematical equality agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex(Vec::new())
    }

    /// The sequence with a single 1 at place `i >= 1`.
    pub fn delta(i: usize) -> Self {
        assert!(i >= 1, "multi-index places start at 1");
        let mut v = vec![0; i];
        v[i - 1] = 1;
        MultiIndex(v)
    }

    /// From `(m_1, m_2, ...)`.
    pub fn from_multiplicities(m: &[u32]) -> Self {
        let mut v = m.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        MultiIndex(v)
    }

    /// From a list of places, counting repeats: `[1, 1, 3]` is `2δ_1 + δ_3`.
    pub fn from_places(places: &[usize]) -> Self {
        let mut v = Vec::new();
        for &i in places {
            assert!(i >= 1, "multi-index places start at 1");
            if v.len() < i {
                v.resize(i, 0);
            }
            v[i - 1] += 1;
        }
        MultiIndex(v)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.0
    }

    /// Multiplicity at place `i >= 1`.
    pub fn get(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// Nonzero `(place, multiplicity)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
    }

    /// Places with repetition, ascending.
    pub fn places(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, m) in self.entries() {
            out.extend(std::iter::repeat_n(i, m as usize));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `|m| = Σ i·m_i`.
    pub fn weight(&self) -> u64 {
        self.entries().map(|(i, m)| i as u64 * m as u64).sum()
    }

    /// `||m|| = Σ m_i`.
    pub fn length(&self) -> u64 {
        self.0.iter().map(|&m| m as u64).sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let n = self.0.len().max(other.0.len());
        let v: Vec<u32> = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
            .collect();
        MultiIndex::from_multiplicities(&v)
    }

    pub fn add_delta(&self, i: usize) -> MultiIndex {
        self.add(&MultiIndex::delta(i))
    }

    /// `self - other` when componentwise nonnegative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        for (i, &m) in other.0.iter().enumerate() {
            if v[i] < m {
                return None;
            }
            v[i] -= m;
        }
        Some(MultiIndex::from_multiplicities(&v))
    }

    /// `m! = ∏ m_i!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&m| factorial(m as u64)).product()
    }

    /// `binom(m; l) = ∏ binom(m_i, l_i)`.
    pub fn binom(&self, l: &MultiIndex) -> BigInt {
        let mut acc = BigInt::one();
        for (i, &li) in l.0.iter().enumerate() {
            acc *= binomial(self.get(i + 1) as u64, li as u64);
        }
        acc
    }

    /// Every `l` with `0 <= l <= self` componentwise, in lexicographic order
    /// of the multiplicity vector.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &m in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for prefix in &out {
                for k in 0..=m {
                    let mut p: Vec<u32> = prefix.clone();
                    p.push(k);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|v| MultiIndex::from_multiplicities(&v))
            .collect()
    }

    /// All multi-indices of weight `w`, one per partition of `w`.
    pub fn of_weight(w: u64) -> Vec<MultiIndex> {
        partitions(w).iter().map(|p| p.to_multi_index()).collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .entries()
            .map(|(i, m)| if m == 1 { format!("d{i}") } else { format!("{m}d{i}") })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// `∏_i multinomial(m_i; parts_1(i), ..., parts_r(i))`.
pub fn multi_binomial(m: &MultiIndex, parts: &[MultiIndex]) -> Result<BigInt> {
    let total = parts.iter().fold(MultiIndex::zero(), |acc, p| acc.add(p));
    if &total != m {
        return invalid(format!("parts do not sum to {m}"));
    }
    let mut acc = BigInt::one();
    for i in 1..=m.multiplicities().len() {
        let ks: Vec<u64> = parts.iter().map(|p| p.get(i) as u64).collect();
        acc *= multinomial(&ks);
    }
    Ok(acc)
}

/// All ordered `r`-tuples of nonzero multi-indices summing to `m`.
pub fn ordered_decompositions(m: &MultiIndex, r: usize) -> Vec<Vec<MultiIndex>> {
    if r == 0 {
        return if m.is_zero() { vec![vec![]] } else { vec![] };
    }
    if m.is_zero() || r as u64 > m.length() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in m.sub_indices() {
        if first.is_zero() {
            continue;
        }
        let rest = m.checked_sub(&first).expect("sub-index");
        for mut tail in ordered_decompositions(&rest, r - 1) {
            let mut v = Vec::with_capacity(r);
            v.push(first.clone());
            v.append(&mut tail);
            out.push(v);
        }
    }
    out
}

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return invalid("partition parts must be positive");
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `m_r = #{parts equal to r}`.
    pub fn to_multi_index(&self) -> MultiIndex {
        let places: Vec<usize> = self.parts.iter().map(|&p| p as usize).collect();
        MultiIndex::from_places(&places)
    }

    /// `|Aut μ| = ∏ m_r!`.
    pub fn aut_order(&self) -> BigInt {
        self.to_multi_index().factorial()
    }
}

/// Partitions of `n`, parts descending, in reverse lexicographic order.
pub fn partitions(n: u64) -> Vec<Partition> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u32, n as u32, &mut Vec::new(), &mut out);
    out
}

/// `p(n)` by Euler's pentagonal number recurrence.
pub fn partition_count(n: i64) -> Result<BigInt> {
    if n < 0 {
        return invalid(format!("partition count of {n}"));
    }
    Ok(partition_counts(n as usize).pop().unwrap())
}

/// `p(0), ..., p(n)`.
pub fn partition_counts(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for m in 1..=n {
        let mut acc = BigInt::zero();
        let mut k: i64 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let s = if k % 2 == 1 { 1 } else { -1 };
            acc += &p[m - g1] * s;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += &p[m - g2] * s;
            }
            k += 1;
        }
        p.push(acc);
    }
    p
}

/// Splittings of a sorted multiset into an ordered pair `(A, B)` of
/// sub-multisets, grouped by equal elements; the weight counts the labelled
/// splittings represented by each pair.
pub fn multiset_splits<T: Clone + Eq>(items: &[T]) -> Vec<(Vec<T>, Vec<T>, u64)> {
    let mut groups: Vec<(T, usize)> = Vec::new();
    for it in items {
        match groups.last_mut() {
            Some((v, c)) if v == it => *c += 1,
            _ => groups.push((it.clone(), 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new(), 1u64)];
    for (v, c) in &groups {
        let mut next = Vec::with_capacity(out.len() * (c + 1));
        for (a, b, w) in &out {
            for k in 0..=*c {
                let mut a2 = a.clone();
                let mut b2 = b.clone();
                a2.extend(std::iter::repeat_n(v.clone(), k));
                b2.extend(std::iter::repeat_n(v.clone(), c - k));
                let wk = binomial(*c as u64, k as u64).to_u64().unwrap();
                next.push((a2, b2, w * wk));
            }
        }
        out = next;
    }
    out
}

//! Witten's r-spin intersection numbers `⟨τ_{n_1,m_1}⋯τ_{n_s,m_s}⟩_g` for
//! `r = 2, 3, 4`.
//!
//! Genus 0 uses the three- and four-point primaries, the string equation,
//! the genus-0 topological recursion for descendants and WDVV for the
//! remaining primaries. Higher genus moves a puncture in with the string
//! equation and then applies the puncture recursion, whose lower-genus part
//! `Low(r)` is known explicitly for these `r`.

use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exact::{rat, Rational};
use crate::memo::Memo;

/// One insertion `τ_{n,m}`: descendant level `n`, spin label `m`.
pub type Insertion = (u32, u32);

/// `(r, g, insertions)`.
pub type MemoKey = (u32, i64, Vec<Insertion>);

static MEMO: Memo<MemoKey, Rational> = Memo::new();

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RSpinKey {
    pub r: u32,
    pub genus: i64,
    /// sorted in decreasing order
    pub insertions: Vec<Insertion>,
}

impl RSpinKey {
    pub fn new(r: u32, genus: i64, insertions: &[Insertion]) -> Result<Self> {
        check_r(r)?;
        if genus < 0 {
            return invalid("genus must be ≥ 0");
        }
        if let Some(&(_, m)) = insertions.iter().find(|&&(_, m)| m >= r) {
            return invalid(format!("spin label {m} is out of range for r = {r}"));
        }
        Ok(RSpinKey { r, genus, insertions: canonical(insertions.to_vec()) })
    }

    pub fn s(&self) -> usize {
        self.insertions.len()
    }
}

impl std::fmt::Display for RSpinKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<")?;
        for (i, (n, m)) in self.insertions.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "t{n},{m}")?;
        }
        write!(f, ">_{} (r={})", self.genus, self.r)
    }
}

fn check_r(r: u32) -> Result<()> {
    if (2..=4).contains(&r) {
        Ok(())
    } else {
        invalid(format!("r = {r} is not supported (only 2, 3, 4)"))
    }
}

fn canonical(mut v: Vec<Insertion>) -> Vec<Insertion> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn selection(r: u32, g: i64, ins: &[Insertion]) -> bool {
    let (r, s) = (r as i64, ins.len() as i64);
    let rhs: i64 = ins.iter().map(|&(n, m)| r * n as i64 + m as i64).sum();
    (r + 1) * (2 * g - 2) + r * s == rhs
}

/// `(r+1)(2g−2) + rs = rΣn_j + Σm_j`.
pub fn selection_check(key: &RSpinKey) -> bool {
    selection(key.r, key.genus, &key.insertions)
}

/// `⟨τ_{n_1,m_1}⋯⟩_g`. Insertions with `m = r−1` give 0.
pub fn rspin_correlator(key: &RSpinKey) -> Result<Rational> {
    eval(key.r, key.genus, key.insertions.clone())
}

pub fn rspin(r: u32, g: i64, insertions: &[Insertion]) -> Result<Rational> {
    rspin_correlator(&RSpinKey::new(r, g, insertions)?)
}

/// Genus-0 correlator.
pub fn genus0_wdvv(r: u32, insertions: &[Insertion]) -> Result<Rational> {
    rspin(r, 0, insertions)
}

fn eval(r: u32, g: i64, ins: Vec<Insertion>) -> Result<Rational> {
    let ins = canonical(ins);
    if g < 0 || ins.iter().any(|&(_, m)| m + 1 >= r) || !selection(r, g, &ins) {
        return Ok(Rational::zero());
    }
    if 2 * g - 2 + ins.len() as i64 <= 0 {
        return Ok(Rational::zero());
    }
    let key = (r, g, ins);
    if let Some(v) = MEMO.get(&key) {
        return Ok(v);
    }
    let (r, g, ins) = key;
    let v = if g == 0 { genus0(r, &ins)? } else { higher(r, g, &ins)? };
    MEMO.insert((r, g, ins), v.clone());
    Ok(v)
}

fn string_equation(r: u32, g: i64, ins: &[Insertion]) -> Result<Rational> {
    let pos = ins.iter().position(|&x| x == (0, 0)).expect("puncture present");
    let mut rest = ins.to_vec();
    rest.remove(pos);
    let mut acc = Rational::zero();
    for j in 0..rest.len() {
        if rest[j].0 > 0 {
            let mut t = rest.clone();
            t[j].0 -= 1;
            acc += eval(r, g, t)?;
        }
    }
    Ok(acc)
}

/// Every way to send each passenger to one of `k` slots.
fn assignments(s: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = k.pow(s as u32);
    (0..total).map(move |mut c| {
        (0..s)
            .map(|_| {
                let d = c % k;
                c /= k;
                d
            })
            .collect()
    })
}

fn with(base: &[Insertion], extra: impl IntoIterator<Item = Insertion>) -> Vec<Insertion> {
    base.iter().copied().chain(extra).collect()
}

fn split(passengers: &[Insertion], side: &[usize], which: usize) -> Vec<Insertion> {
    passengers.iter().zip(side).filter(|(_, &s)| s == which).map(|(&x, _)| x).collect()
}

fn genus0(r: u32, ins: &[Insertion]) -> Result<Rational> {
    let s = ins.len();
    if s == 3 {
        // selection forces three primaries with labels summing to r − 2
        return Ok(Rational::one());
    }
    if ins.contains(&(0, 0)) {
        return string_equation(r, 0, ins);
    }
    if let Some(i) = ins.iter().position(|&(n, _)| n > 0) {
        return trr(r, ins, i);
    }
    if s == 4 {
        let m = ins.iter().map(|&(_, m)| m.min(r - 1 - m)).min().unwrap();
        return Ok(rat(m as i64, r as i64));
    }
    wdvv_primary(r, ins)
}

/// `⟨τ_{n+1,a} τ_j τ_k ∏S⟩_0 = Σ ⟨τ_{n,a} τ_{0,e} ∏I⟩_0 η^{ef} ⟨τ_{0,f} τ_j τ_k ∏J⟩_0`.
fn trr(r: u32, ins: &[Insertion], i: usize) -> Result<Rational> {
    let (n, a) = ins[i];
    let others: Vec<Insertion> = ins.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
    let (pj, pk, rest) = (others[0], others[1], &others[2..]);
    let mut acc = Rational::zero();
    for side in assignments(rest.len(), 2) {
        let (left, right) = (split(rest, &side, 0), split(rest, &side, 1));
        if left.is_empty() {
            continue;
        }
        for e in 0..=r - 2 {
            let f = r - 2 - e;
            let l = eval(r, 0, with(&left, [(n - 1, a), (0, e)]))?;
            if l.is_zero() {
                continue;
            }
            acc += l * eval(r, 0, with(&right, [(0, f), pj, pk]))?;
        }
    }
    Ok(acc)
}

/// `Σ_{I⊔J=S} Σ_{e+f=r−2} ⟨τ_a τ_b τ_e ∏I⟩_0 ⟨τ_f τ_c τ_d ∏J⟩_0`, optionally
/// leaving out the `I = ∅` term with a given `e`.
fn wdvv_side(r: u32, abcd: [u32; 4], rest: &[Insertion], skip_e: Option<u32>) -> Result<Rational> {
    let [a, b, c, d] = abcd;
    let mut acc = Rational::zero();
    for side in assignments(rest.len(), 2) {
        let (left, right) = (split(rest, &side, 0), split(rest, &side, 1));
        for e in 0..=r - 2 {
            if left.is_empty() && skip_e == Some(e) {
                continue;
            }
            let l = eval(r, 0, with(&left, [(0, a), (0, b), (0, e)]))?;
            if l.is_zero() {
                continue;
            }
            acc += l * eval(r, 0, with(&right, [(0, r - 2 - e), (0, c), (0, d)]))?;
        }
    }
    Ok(acc)
}

/// Primary `⟨τ_p τ_q τ_u ∏S⟩_0` with `s ≥ 5`, from WDVV on the points
/// `(1, p−1 | q, u)` plus `S`. The other correlators of the same length are
/// more concentrated in `Σ m_i²`, so the bootstrap terminates.
fn wdvv_primary(r: u32, ins: &[Insertion]) -> Result<Rational> {
    let mut labels: Vec<u32> = ins.iter().map(|&(_, m)| m).collect();
    labels.sort_unstable_by(|a, b| b.cmp(a));
    if labels.len() < 3 || labels[2] < 2 {
        return Err(Error::Limit(format!("no WDVV reduction for genus-0 labels {labels:?}")));
    }
    let (q, p, u) = (labels[0], labels[1], labels[2]);
    let rest: Vec<Insertion> = labels[3..].iter().map(|&m| (0, m)).collect();
    // the skipped term is ⟨τ_1 τ_{p−1} τ_{r−2−p}⟩_0 · ⟨τ_p τ_q τ_u ∏S⟩_0, the target
    let lhs = wdvv_side(r, [1, p - 1, q, u], &rest, Some(r - 2 - p))?;
    let rhs = wdvv_side(r, [1, q, p - 1, u], &rest, None)?;
    Ok(rhs - lhs)
}

fn higher(r: u32, g: i64, ins: &[Insertion]) -> Result<Rational> {
    if ins.contains(&(0, 0)) {
        return string_equation(r, g, ins);
    }
    // string equation read backwards on the largest descendant
    let (n1, m1) = ins[0];
    let rest = &ins[1..];
    let mut acc = puncture_recursion(r, g, &with(rest, [(n1 + 1, m1)]))?;
    for j in 0..rest.len() {
        if rest[j].0 > 0 {
            let mut t = rest.to_vec();
            t[j].0 -= 1;
            acc -= eval(r, g, with(&t, [(n1 + 1, m1)]))?;
        }
    }
    Ok(acc)
}

/// `⟨τ_{0,0} τ_{n_1,m_1}⋯τ_{n_s,m_s}⟩_g` for `g ≥ 1` from
/// `(2g−1+s−a)⟨τ_{0,0}⋯⟩_g = Σ~ ⟨τ_{0,0}τ_{0,m'}∏I⟩ η ⟨τ_{0,m''}τ_{0,0}∏J⟩ + Low(r)`.
pub fn puncture_recursion(r: u32, g: i64, others: &[Insertion]) -> Result<Rational> {
    check_r(r)?;
    if g < 1 {
        return invalid("the puncture recursion needs g ≥ 1");
    }
    let s = others.len() as i64;
    let a = others.iter().filter(|&&(n, _)| n == 0).count() as i64;
    let lead = Rational::from_integer((2 * g - 1 + s - a).into());
    if lead.is_zero() {
        return invalid("degenerate puncture recursion");
    }
    let excluded = |part: &[Insertion], genus: i64| genus == 0 && part.len() == 1 && part[0].0 == 0;
    let mut quad = Rational::zero();
    for side in assignments(others.len(), 2) {
        let (left, right) = (split(others, &side, 0), split(others, &side, 1));
        for g1 in 0..=g {
            if excluded(&left, g1) || excluded(&right, g - g1) {
                continue;
            }
            for m1 in 0..=r - 2 {
                let x = eval(r, g1, with(&left, [(0, 0), (0, m1)]))?;
                if x.is_zero() {
                    continue;
                }
                quad += x * eval(r, g - g1, with(&right, [(0, r - 2 - m1), (0, 0)]))?;
            }
        }
    }
    let total = quad / Rational::from_integer(2.into()) + low_r(r, g, others)?;
    Ok(total / lead)
}

struct LowTerm {
    coeff: Rational,
    factors: Vec<Vec<Insertion>>,
    drop: i64,
}

fn low_terms(r: u32) -> Vec<LowTerm> {
    let p = |k: usize| vec![(0u32, 0u32); k];
    let t = |c: Rational, factors: Vec<Vec<Insertion>>, drop: i64| LowTerm { coeff: c, factors, drop };
    match r {
        2 => vec![t(rat(1, 12), vec![p(4)], 1)],
        3 => vec![t(rat(1, 6), vec![with(&p(3), [(0, 1)])], 1)],
        _ => vec![
            t(rat(1, 4), vec![with(&p(3), [(0, 2)])], 1),
            t(rat(1, 48), vec![p(2), p(4)], 1),
            t(rat(1, 32), vec![p(3), p(3)], 1),
            t(rat(1, 480), vec![p(6)], 2),
        ],
    }
}

/// The lower-genus part of the puncture recursion, with the double
/// brackets expanded at the given passengers.
pub fn low_r(r: u32, g: i64, passengers: &[Insertion]) -> Result<Rational> {
    check_r(r)?;
    let mut acc = Rational::zero();
    for term in low_terms(r) {
        let total = g - term.drop;
        if total < 0 {
            continue;
        }
        let k = term.factors.len();
        let mut sum = Rational::zero();
        for side in assignments(passengers.len(), k) {
            let parts: Vec<Vec<Insertion>> =
                (0..k).map(|i| with(&term.factors[i], split(passengers, &side, i))).collect();
            sum += genus_convolution(r, total, &parts)?;
        }
        acc += term.coeff * sum;
    }
    Ok(acc)
}

/// `Σ_{g_1+⋯+g_k = total} ∏ ⟨parts_i⟩_{g_i}`.
fn genus_convolution(r: u32, total: i64, parts: &[Vec<Insertion>]) -> Result<Rational> {
    let Some((first, rest)) = parts.split_first() else {
        return Ok(if total == 0 { Rational::one() } else { Rational::zero() });
    };
    let mut acc = Rational::zero();
    for g1 in 0..=total {
        let x = eval(r, g1, first.clone())?;
        if !x.is_zero() {
            acc += x * genus_convolution(r, total - g1, rest)?;
        }
    }
    Ok(acc)
}

/// Every nonzero correlator of genus `g` with `s` insertions and no puncture
/// `τ_{0,0}`, labels below `r−1`, sorted by key.
pub fn table(r: u32, g: i64, s: usize) -> Result<Vec<(RSpinKey, Rational)>> {
    check_r(r)?;
    let budget = (r as i64 + 1) * (2 * g - 2) + r as i64 * s as i64;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    enumerate(r, s, budget, (u32::MAX, u32::MAX), &mut cur, &mut |ins| {
        if ins.contains(&(0, 0)) {
            return Ok(());
        }
        let key = RSpinKey::new(r, g, ins)?;
        let v = rspin_correlator(&key)?;
        if !v.is_zero() {
            out.push((key, v));
        }
        Ok(())
    })?;
    out.sort_by(|a, b| a.0.insertions.iter().rev().cmp(b.0.insertions.iter().rev()));
    Ok(out)
}

fn enumerate(
    r: u32,
    left: usize,
    budget: i64,
    max: Insertion,
    cur: &mut Vec<Insertion>,
    f: &mut dyn FnMut(&[Insertion]) -> Result<()>,
) -> Result<()> {
    if left == 0 {
        return if budget == 0 { f(cur) } else { Ok(()) };
    }
    if budget < 0 {
        return Ok(());
    }
    for n in (0..=(budget / r as i64) as u32).rev() {
        for m in (0..r - 1).rev() {
            if (n, m) > max {
                continue;
            }
            let cost = r as i64 * n as i64 + m as i64;
            if cost > budget {
                continue;
            }
            cur.push((n, m));
            enumerate(r, left - 1, budget - cost, (n, m), cur, f)?;
            cur.pop();
        }
    }
    Ok(())
}

/// Memoized `(r, g, insertions)` values, insertions in canonical order.
pub fn memo_entries() -> Vec<(MemoKey, Rational)> {
    MEMO.entries()
}

/// Seed the memo (used when loading a persistent cache).
pub fn memo_seed(r: u32, g: i64, ins: Vec<Insertion>, value: Rational) {
    MEMO.insert((r, g, canonical(ins)), value);
}

pub fn memo_clear() {
    MEMO.clear();
}

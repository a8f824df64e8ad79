//! Higher Weil–Petersson volumes `V_{g,n}(b) = ⟨τ_0^n κ(b)⟩_g` and mixed
//! ψ/κ integrals computed without passing through pure ψ integrals.
//!
//! Notation: for a multi-index `b`, `|b| = Σ i·b_i` is the degree of `κ(b)`
//! and `||b|| = Σ b_i` the number of κ factors.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exact::{dfq, from_big, multi_binomial, rat, rint, sign, MultiIndex, Rational};
use crate::memo::Memo;

static ALPHA: Memo<MultiIndex, Rational> = Memo::new();

/// `α_b = b! Σ_{L+L'=b, L'≠0} (−1)^{||L'||−1} α_L / (L! L'! (2|L'|+1)!!)`, `α_0 = 1`.
pub fn alpha(b: &MultiIndex) -> Rational {
    if b.is_zero() {
        return Rational::one();
    }
    if let Some(v) = ALPHA.get(b) {
        return v;
    }
    let mut acc = Rational::zero();
    for l in b.sub_indices() {
        let lp = b.checked_sub(&l).expect("sub-index");
        if lp.is_zero() {
            continue;
        }
        acc += sign(lp.length() as i64 - 1) * alpha(&l)
            / (from_big(l.factorial()) * from_big(lp.factorial()) * dfq(2 * lp.weight() as i64 + 1));
    }
    let v = from_big(b.factorial()) * acc;
    ALPHA.insert(b.clone(), v.clone());
    v
}

/// `Σ_{L+L'=b} (−1)^{||L||} α_L / (L! L'! (2|L'|+1)!!)`, which vanishes for `b ≠ 0`.
pub fn alpha_relation(b: &MultiIndex) -> Rational {
    b.sub_indices()
        .into_iter()
        .map(|l| {
            let lp = b.checked_sub(&l).expect("sub-index");
            sign(l.length() as i64) * alpha(&l)
                / (from_big(l.factorial()) * from_big(lp.factorial()) * dfq(2 * lp.weight() as i64 + 1))
        })
        .sum()
}

/// `α_ℓ = (−1)^{ℓ−1}(2^{2ℓ}−2)B_{2ℓ}/(2ℓ−1)!!` for `b = ℓδ_1`.
pub fn alpha_closed(l: u32) -> Rational {
    if l == 0 {
        return Rational::one();
    }
    let p = from_big(BigInt::from(2).pow(2 * l)) - rint(2);
    sign(l as i64 - 1) * p * crate::exact::bernoulli_any(2 * l as usize) / dfq(2 * l as i64 - 1)
}

fn trinomial(b: &MultiIndex, l: &MultiIndex, e: &MultiIndex, f: &MultiIndex) -> Rational {
    from_big(multi_binomial(b, &[l.clone(), e.clone(), f.clone()]).expect("parts sum to b"))
}

fn binom(b: &MultiIndex, l: &MultiIndex) -> Rational {
    from_big(b.binom(l))
}

type MixedKey = (i64, MultiIndex, Vec<u32>);
static MIXED: Memo<MixedKey, Rational> = Memo::new();

/// `⟨κ(b) τ_{d_1}⋯τ_{d_n}⟩_g` for `n ≥ 1`, through the α-recursion.
pub fn wp_mixed(g: i64, b: &MultiIndex, d: &[u32]) -> Result<Rational> {
    if d.is_empty() {
        return invalid("wp_mixed needs at least one τ insertion; use wp_n0 for n = 0");
    }
    Ok(mixed(g, b, d))
}

fn mixed(g: i64, b: &MultiIndex, d: &[u32]) -> Rational {
    let n = d.len() as i64;
    if g < 0 || 2 * g - 2 + n <= 0 {
        return Rational::zero();
    }
    let deg = d.iter().map(|&x| x as i64).sum::<i64>() + b.weight() as i64;
    if deg != 3 * g - 3 + n {
        return Rational::zero();
    }
    let mut key_d = d.to_vec();
    key_d.sort_unstable_by(|a, b| b.cmp(a));
    match (g, b.multiplicities(), key_d.as_slice()) {
        (0, [], [0, 0, 0]) => return Rational::one(),
        (1, [], [1]) => return rat(1, 24),
        (1, [1], [0]) => return rat(1, 24),
        _ => {}
    }
    let key = (g, b.clone(), key_d);
    if let Some(v) = MIXED.get(&key) {
        return v;
    }
    let v = mixed_step(g, b, &key.2);
    MIXED.insert(key, v.clone());
    v
}

fn mixed_step(g: i64, b: &MultiIndex, d: &[u32]) -> Rational {
    let d1 = d[0] as i64;
    let rest = &d[1..];
    let mut total = Rational::zero();
    for l in b.sub_indices() {
        let lp = b.checked_sub(&l).expect("sub-index");
        let w = l.weight() as i64;
        let a_l = alpha(&l);
        let c = &a_l * binom(b, &l);

        for j in 0..rest.len() {
            if j > 0 && rest[j] == rest[j - 1] {
                continue;
            }
            let mult = rest.iter().filter(|&&x| x == rest[j]).count() as i64;
            let dj = rest[j] as i64;
            let idx = w + d1 + dj - 1;
            if idx < 0 {
                continue;
            }
            let mut v: Vec<u32> = rest.to_vec();
            v.remove(j);
            v.push(idx as u32);
            total += &c * rint(mult) * dfq(2 * (w + d1 + dj) - 1) / dfq(2 * dj - 1) * mixed(g, &lp, &v);
        }

        let m = w + d1 - 2;
        for r in 0..=m.max(-1) {
            let s = m - r;
            let rs = dfq(2 * r + 1) * dfq(2 * s + 1) * rat(1, 2);
            let mut v = rest.to_vec();
            v.push(r as u32);
            v.push(s as u32);
            total += &c * &rs * mixed(g - 1, &lp, &v);

            for e in lp.sub_indices() {
                let f = lp.checked_sub(&e).expect("sub-index");
                let ce = &a_l * &rs * trinomial(b, &l, &e, &f);
                for (ia, ib, wt) in crate::exact::multiset_splits(rest) {
                    let mut x = ia.clone();
                    x.push(r as u32);
                    let t = x.iter().map(|&y| y as i64).sum::<i64>() + e.weight() as i64 - x.len() as i64 + 3;
                    if t < 0 || t % 3 != 0 || t / 3 > g {
                        continue;
                    }
                    let g1 = t / 3;
                    let a = mixed(g1, &e, &x);
                    if a.is_zero() {
                        continue;
                    }
                    let mut y = ib.clone();
                    y.push(s as u32);
                    total += &ce * rint(wt as i64) * a * mixed(g - g1, &f, &y);
                }
            }
        }
    }
    total / dfq(2 * d1 + 1)
}

/// Terms `(c, |L|+1, L')` of
/// `⟨κ(b)⟩_g = 1/(2g−2) Σ_{L+L'=b} (−1)^{||L||} binom(b;L) ⟨τ_{|L|+1} κ(L')⟩_g`.
pub fn wp_n0_reduce(g: i64, b: &MultiIndex) -> Result<Vec<(Rational, u32, MultiIndex)>> {
    if g < 2 {
        return invalid("the n = 0 reduction needs g ≥ 2");
    }
    let mut out = Vec::new();
    for l in b.sub_indices() {
        let lp = b.checked_sub(&l).expect("sub-index");
        let c = sign(l.length() as i64) * binom(b, &l) / rint(2 * g - 2);
        out.push((c, l.weight() as u32 + 1, lp));
    }
    Ok(out)
}

/// `⟨κ(b)⟩_g` through [`wp_n0_reduce`] and [`wp_mixed`].
pub fn wp_n0(g: i64, b: &MultiIndex) -> Result<Rational> {
    Ok(wp_n0_reduce(g, b)?
        .into_iter()
        .map(|(c, t, lp)| c * mixed(g, &lp, &[t]))
        .sum())
}

type VolKey = (i64, usize, MultiIndex);
static VOLUME: Memo<VolKey, Rational> = Memo::new();

/// `V_{g,n}(b)` for `n ≥ 1`, through the ψ-free recursion
/// `(2g−1+||b||)V_{g,n}(b) = V_{g−1,n+3}(b)/12 − Σ_{||L'||≥2} binom(b;L)V_{g,n}(L+δ_{|L'|})
///  + ½ Σ_{L,L'≠0} Σ_{r+s=n−1} binom(b;L) binom(n−1;r) V_{g',r+2}(L) V_{g−g',s+2}(L')`.
pub fn wp_volume(g: i64, n: usize, b: &MultiIndex) -> Result<Rational> {
    if n == 0 {
        return invalid("wp_volume needs n ≥ 1; use wp_volume_closed for n = 0");
    }
    Ok(volume(g, n, b))
}

fn volume(g: i64, n: usize, b: &MultiIndex) -> Rational {
    let ni = n as i64;
    if g < 0 || 2 * g - 2 + ni <= 0 || b.weight() as i64 != 3 * g - 3 + ni {
        return Rational::zero();
    }
    if g == 0 && (b.is_zero() || b.length() == 1) {
        // V_{0,3}(0) = 1 and V_{0,n}(δ_{n−3}) = 1
        return Rational::one();
    }
    let key = (g, n, b.clone());
    if let Some(v) = VOLUME.get(&key) {
        return v;
    }
    let mut total = rat(1, 12) * volume(g - 1, n + 3, b);
    let subs = b.sub_indices();
    for l in &subs {
        let lp = b.checked_sub(l).expect("sub-index");
        if lp.length() >= 2 {
            total -= binom(b, l) * volume(g, n, &l.add_delta(lp.weight() as usize));
        }
    }
    let mut sep = Rational::zero();
    for l in &subs {
        let lp = b.checked_sub(l).expect("sub-index");
        if l.is_zero() || lp.is_zero() {
            continue;
        }
        let cb = binom(b, l);
        for r in 0..n {
            let s = n - 1 - r;
            let t = l.weight() as i64 + 1 - r as i64;
            if t < 0 || t % 3 != 0 {
                continue;
            }
            let g1 = t / 3;
            let a = volume(g1, r + 2, l);
            if a.is_zero() {
                continue;
            }
            sep += &cb * from_big(crate::exact::binomial(n as u64 - 1, r as u64)) * a * volume(g - g1, s + 2, &lp);
        }
    }
    total += rat(1, 2) * sep;
    let v = total / rint(2 * g - 1 + b.length() as i64);
    VOLUME.insert(key, v.clone());
    v
}

/// How to read a `δ_0` (a `κ_0` factor) produced inside the n = 0 recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KappaZero {
    /// `κ_0 = 2g − 2 + n` as a scalar.
    Scalar,
    /// Terms containing `κ_0` are dropped.
    Drop,
    /// `κ_0` is ignored (`δ_0 = 0`).
    Identity,
}

type ClosedKey = (i64, MultiIndex, KappaZero);
static CLOSED: Memo<ClosedKey, Rational> = Memo::new();

/// `V_g(b)` for `g ≥ 2` through the n = 0 recursion, reading `κ_0` as the
/// scalar `2g − 2 + n`.
pub fn wp_volume_closed(g: i64, b: &MultiIndex) -> Result<Rational> {
    wp_volume_closed_with(g, b, KappaZero::Scalar)
}

pub fn wp_volume_closed_with(g: i64, b: &MultiIndex, mode: KappaZero) -> Result<Rational> {
    if g < 2 {
        return Err(Error::Unstable { g, n: 0 });
    }
    Ok(closed(g, b, mode))
}

/// `V_{g,n}(base + δ_k)`, with `k = 0` handled per `mode`.
fn vol_plus(g: i64, n: usize, base: &MultiIndex, k: u64, mode: KappaZero) -> Rational {
    let eval = |m: &MultiIndex| if n == 0 { closed(g, m, mode) } else { volume(g, n, m) };
    if k > 0 {
        return eval(&base.add_delta(k as usize));
    }
    match mode {
        KappaZero::Scalar => rint(2 * g - 2 + n as i64) * eval(base),
        KappaZero::Drop => Rational::zero(),
        KappaZero::Identity => eval(base),
    }
}

fn closed(g: i64, b: &MultiIndex, mode: KappaZero) -> Rational {
    if g < 2 || b.weight() as i64 != 3 * g - 3 {
        return Rational::zero();
    }
    let key = (g, b.clone(), mode);
    if let Some(v) = CLOSED.get(&key) {
        return v;
    }
    let nb = b.length() as i64;
    let subs = b.sub_indices();
    let mut total = Rational::zero();
    for l in &subs {
        let lp = b.checked_sub(l).expect("sub-index");
        let cb = binom(b, l);
        total += rint(5) * &cb * vol_plus(g, 1, l, lp.weight() + 1, mode);
        total -= rat(1, 6) * &cb * vol_plus(g - 1, 3, l, lp.weight(), mode);
        for e in lp.sub_indices() {
            let f = lp.checked_sub(&e).expect("sub-index");
            let t = e.weight() as i64 + l.weight() as i64 + 2;
            if t % 3 != 0 {
                continue;
            }
            let g1 = t / 3;
            let a = vol_plus(g1, 1, &e, l.weight(), mode);
            if a.is_zero() {
                continue;
            }
            total -= trinomial(b, l, &e, &f) * a * volume(g - g1, 2, &f);
        }
        if lp.length() >= 2 {
            let m = l.add_delta(lp.weight() as usize);
            total -= rint(2 * g - 1 + nb) * &cb * closed(g, &m, mode);
            for e in m.sub_indices() {
                let f = m.checked_sub(&e).expect("sub-index");
                total -= &cb * binom(&m, &e) * vol_plus(g, 0, &e, f.weight(), mode);
            }
        }
    }
    let v = total / rint((2 * g - 1) * (2 * g - 2) + (4 * g - 3) * nb + nb * nb);
    CLOSED.insert(key, v.clone());
    v
}

/// Terms `(c, d', b')` of
/// `⟨τ_{d_1}⋯τ_{d_n}κ(b)⟩_g = Σ_{L+L'=b} binom(b;L) ⟨τ_{d_1}⋯τ_{d_{n−1}}κ(L')κ_{|L|+d_n−1}⟩_g`.
/// A `κ_0` is folded in as the scalar `2g − 2 + (n − 1)`.
pub fn kappa_psi_exchange(g: i64, d: &[u32], b: &MultiIndex) -> Result<Vec<(Rational, Vec<u32>, MultiIndex)>> {
    let Some(&dn) = d.last() else {
        return invalid("no marked point to forget");
    };
    if dn == 0 {
        return invalid("the forgotten point needs a positive ψ exponent");
    }
    let rest = d[..d.len() - 1].to_vec();
    if 2 * g - 2 + rest.len() as i64 <= 0 {
        return Err(Error::Unstable { g, n: rest.len() });
    }
    let mut out = Vec::new();
    for l in b.sub_indices() {
        let lp = b.checked_sub(&l).expect("sub-index");
        let c = binom(b, &l);
        let k = l.weight() + dn as u64 - 1;
        if k == 0 {
            out.push((c * rint(2 * g - 2 + rest.len() as i64), rest.clone(), lp));
        } else {
            out.push((c, rest.clone(), lp.add_delta(k as usize)));
        }
    }
    Ok(out)
}

/// `⟨τ_d κ(b)⟩_g` by trading every positive ψ exponent for κ classes and
/// finishing with [`wp_volume`] or [`wp_volume_closed`].
pub fn mixed_via_volumes(g: i64, b: &MultiIndex, d: &[u32]) -> Result<Rational> {
    let n = d.len() as i64;
    if 2 * g - 2 + n <= 0 {
        return Err(Error::Unstable { g, n: d.len() });
    }
    let deg = d.iter().map(|&x| x as i64).sum::<i64>() + b.weight() as i64;
    if deg != 3 * g - 3 + n {
        return Ok(Rational::zero());
    }
    if g == 1 && n == 1 && b.is_zero() {
        // ⟨τ_1⟩_1: forgetting the point would land on M_{1,0}
        return Ok(rat(1, 24));
    }
    let mut d = d.to_vec();
    d.sort_unstable();
    if d.last().is_none_or(|&x| x == 0) {
        return if d.is_empty() { wp_volume_closed(g, b) } else { wp_volume(g, d.len(), b) };
    }
    let mut total = Rational::zero();
    for (c, d2, b2) in kappa_psi_exchange(g, &d, b)? {
        total += c * mixed_via_volumes(g, &b2, &d2)?;
    }
    Ok(total)
}

pub fn memo_clear() {
    ALPHA.clear();
    MIXED.clear();
    VOLUME.clear();
    CLOSED.clear();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&MultiIndex::zero()), rint(1));
        assert_eq!(alpha(&MultiIndex::delta(1)), rat(1, 3));
        assert_eq!(alpha_closed(1), rat(1, 3));
        for l in 1..6 {
            assert_eq!(alpha(&MultiIndex::delta(l)), rint(1) / dfq(2 * l as i64 + 1));
        }
    }

    #[test]
    fn mixed_initial_values() {
        assert_eq!(wp_mixed(1, &MultiIndex::delta(1), &[0]).unwrap(), rat(1, 24));
        assert_eq!(wp_mixed(0, &MultiIndex::zero(), &[0, 0, 0]).unwrap(), rint(1));
        assert_eq!(wp_mixed(1, &MultiIndex::zero(), &[1]).unwrap(), rat(1, 24));
        assert!(wp_mixed(1, &MultiIndex::delta(3), &[]).is_err());
    }

    #[test]
    fn volume_initial_values() {
        assert_eq!(wp_volume(0, 3, &MultiIndex::zero()).unwrap(), rint(1));
        assert_eq!(wp_volume(0, 5, &MultiIndex::delta(2)).unwrap(), rint(1));
        assert_eq!(wp_volume(1, 1, &MultiIndex::delta(1)).unwrap(), rat(1, 24));
        assert!(wp_volume(2, 0, &MultiIndex::delta(3)).is_err());
    }

    #[test]
    fn n0_reduction_shape() {
        assert_eq!(wp_n0_reduce(2, &MultiIndex::delta(3)).unwrap().len(), 2);
        assert!(wp_n0_reduce(1, &MultiIndex::delta(1)).is_err());
    }

    #[test]
    fn exchange_examples() {
        // ⟨τ_0τ_2⟩_1 = ⟨τ_0κ_1⟩_1
        let t = kappa_psi_exchange(1, &[0, 2], &MultiIndex::zero()).unwrap();
        assert_eq!(t, vec![(rint(1), vec![0], MultiIndex::delta(1))]);
        assert_eq!(mixed_via_volumes(1, &MultiIndex::zero(), &[1]).unwrap(), rat(1, 24));
        assert!(kappa_psi_exchange(1, &[1, 0], &MultiIndex::zero()).is_err());
        assert!(kappa_psi_exchange(1, &[1], &MultiIndex::zero()).is_err());
    }
}

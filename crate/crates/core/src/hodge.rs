//! Hodge integrals: ψ, κ, λ and ch(E) classes reduced to pure ψ integrals.
//!
//! κ classes are removed first, then λ classes are rewritten through odd
//! Chern characters, and each `ch_{2k−1}(E)` is peeled off with Mumford's
//! formula until only ψ classes remain.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::descendent::psi_correlator;
use crate::error::{invalid, Error, Result};
use crate::exact::{
    bernoulli, bernoulli_any, dfq, factorial, from_big, multi_binomial, multinomial, multiset_splits,
    ordered_decompositions, partitions, rat, rint, sign, MultiIndex, Partition, Rational,
};
use crate::memo::Memo;

/// `∫ ∏ψ_i^{d_i} · κ(m) · ∏λ_j^{k_j} · ∏ch_{c}(E)` over `M̄_{g,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HodgeIntegrand {
    pub genus: i64,
    pub psi: Vec<u32>,
    pub kappa: MultiIndex,
    /// `lambda[j-1]` is the exponent of `λ_j`.
    pub lambda: Vec<u32>,
    /// Odd degrees `2k−1` of the `ch` insertions.
    pub ch: Vec<u32>,
}

impl HodgeIntegrand {
    pub fn new(genus: i64, psi: &[u32]) -> Self {
        HodgeIntegrand { genus, psi: psi.to_vec(), kappa: MultiIndex::zero(), lambda: Vec::new(), ch: Vec::new() }
    }

    pub fn with_kappa(mut self, m: MultiIndex) -> Self {
        self.kappa = self.kappa.add(&m);
        self
    }

    /// Multiply by `λ_j` (`λ_0 = 1`).
    pub fn with_lambda(mut self, j: u32) -> Self {
        if j == 0 {
            return self;
        }
        if self.lambda.len() < j as usize {
            self.lambda.resize(j as usize, 0);
        }
        self.lambda[j as usize - 1] += 1;
        self
    }

    pub fn with_ch(mut self, c: u32) -> Self {
        self.ch.push(c);
        self
    }

    pub fn n(&self) -> usize {
        self.psi.len()
    }

    pub fn degree(&self) -> i64 {
        let p: i64 = self.psi.iter().map(|&d| d as i64).sum();
        let l: i64 = self.lambda.iter().enumerate().map(|(i, &k)| (i as i64 + 1) * k as i64).sum();
        let c: i64 = self.ch.iter().map(|&c| c as i64).sum();
        p + self.kappa.weight() as i64 + l + c
    }

    pub fn dimension(&self) -> i64 {
        3 * self.genus - 3 + self.n() as i64
    }

    fn lambda_is_empty(&self) -> bool {
        self.lambda.iter().all(|&k| k == 0)
    }
}

/// Remove κ classes:
/// `⟨∏τ_{d_j}κ(m)Ψ⟩ = Σ_k (−1)^{||m||−k}/k! Σ_{m=m_1+⋯+m_k} binom(m; m_1..m_k) ⟨∏τ_{d_j}∏τ_{|m_i|+1}Ψ⟩`.
/// λ and ch insertions ride along unchanged.
pub fn kappa_to_psi(h: &HodgeIntegrand) -> Vec<(Rational, HodgeIntegrand)> {
    let m = &h.kappa;
    if m.is_zero() {
        return vec![(Rational::one(), h.clone())];
    }
    let len = m.length() as usize;
    let mut out: Vec<(Rational, HodgeIntegrand)> = Vec::new();
    for k in 1..=len {
        let pref = sign((len - k) as i64) / from_big(factorial(k as u64));
        for parts in ordered_decompositions(m, k) {
            let c = &pref * from_big(multi_binomial(m, &parts).expect("decomposition sums to m"));
            let mut psi = h.psi.clone();
            psi.extend(parts.iter().map(|p| p.weight() as u32 + 1));
            let mut extra: Vec<u32> = psi[h.psi.len()..].to_vec();
            extra.sort_unstable();
            psi.truncate(h.psi.len());
            psi.extend(extra);
            let t = HodgeIntegrand { psi, kappa: MultiIndex::zero(), ..h.clone() };
            match out.iter_mut().find(|(_, x)| *x == t) {
                Some((acc, _)) => *acc += c,
                None => out.push((c, t)),
            }
        }
    }
    out.retain(|(c, _)| !c.is_zero());
    out
}

/// `λ_j = Σ_{μ⊢j} (−1)^{j−ℓ(μ)} ∏_r ((r−1)!)^{m_r}/m_r! · ch_μ`, keeping only
/// odd-part partitions since even Chern characters vanish.
pub fn lambda_j_to_ch(j: u32) -> Vec<(Rational, Vec<u32>)> {
    if j == 0 {
        return vec![(Rational::one(), Vec::new())];
    }
    let mut out = Vec::new();
    for mu in partitions(j as u64) {
        if mu.parts().iter().any(|&p| p % 2 == 0) {
            continue;
        }
        let mut c = sign(j as i64 - mu.len() as i64);
        for (r, mr) in mu.to_multi_index().entries() {
            c *= from_big(factorial(r as u64 - 1).pow(mr)) / from_big(factorial(mr as u64));
        }
        out.push((c, mu.parts().to_vec()));
    }
    out
}

/// Replace every λ factor by its ch expansion. `λ_j` with `j > g` is zero.
pub fn lambda_to_ch(h: &HodgeIntegrand) -> Vec<(Rational, HodgeIntegrand)> {
    let mut acc: Vec<(Rational, Vec<u32>)> = vec![(Rational::one(), h.ch.clone())];
    for (i, &k) in h.lambda.iter().enumerate() {
        let j = i as u32 + 1;
        if k > 0 && j as i64 > h.genus {
            return Vec::new();
        }
        for _ in 0..k {
            let mut next: Vec<(Rational, Vec<u32>)> = Vec::new();
            for (c, chs) in &acc {
                for (d, mu) in lambda_j_to_ch(j) {
                    let mut v = chs.clone();
                    v.extend(mu);
                    v.sort_unstable_by(|a, b| b.cmp(a));
                    let c2 = c * &d;
                    match next.iter_mut().find(|(_, x)| *x == v) {
                        Some((s, _)) => *s += c2,
                        None => next.push((c2, v)),
                    }
                }
            }
            acc = next;
        }
    }
    acc.into_iter()
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, ch)| (c, HodgeIntegrand { lambda: Vec::new(), ch, ..h.clone() }))
        .collect()
}

type ChKey = (i64, Vec<u32>, Vec<u32>);
static CH_MEMO: Memo<ChKey, Rational> = Memo::new();
static HURWITZ: Memo<(i64, Vec<u32>), Rational> = Memo::new();

/// Evaluate an integrand carrying only ψ and ch classes.
pub fn ch_reduce(h: &HodgeIntegrand) -> Result<Rational> {
    if !h.kappa.is_zero() || !h.lambda_is_empty() {
        return invalid("ch_reduce expects only ψ and ch classes");
    }
    if let Some(&c) = h.ch.iter().find(|&&c| c % 2 == 0) {
        return invalid(format!("ch_{c} is even"));
    }
    Ok(ch_eval(h.genus, &h.psi, &h.ch))
}

fn ch_eval(g: i64, psi: &[u32], ch: &[u32]) -> Rational {
    let n = psi.len() as i64;
    if g < 0 || 2 * g - 2 + n <= 0 {
        return Rational::zero();
    }
    let deg: i64 = psi.iter().map(|&d| d as i64).sum::<i64>() + ch.iter().map(|&c| c as i64).sum::<i64>();
    if deg != 3 * g - 3 + n {
        return Rational::zero();
    }
    if ch.is_empty() {
        return psi_correlator(g, psi);
    }
    if g == 0 {
        return Rational::zero();
    }
    let mut p = psi.to_vec();
    p.sort_unstable_by(|a, b| b.cmp(a));
    let mut c = ch.to_vec();
    c.sort_unstable_by(|a, b| b.cmp(a));
    let key = (g, p, c);
    if let Some(v) = CH_MEMO.get(&key) {
        return v;
    }
    let v = mumford_peel(g, &key.1, &key.2);
    CH_MEMO.insert(key, v.clone());
    v
}

/// One application of `ch_{2k−1} = B_{2k}/(2k)!·[κ_{2k−1} − Σψ_i^{2k−1} + ½Σ_ξ p_ξ*(…)]`
/// on the largest ch insertion.
fn mumford_peel(g: i64, psi: &[u32], ch: &[u32]) -> Rational {
    let top = ch[0] as i64;
    let k = (top + 1) / 2;
    let rest = &ch[1..];
    let pref = bernoulli_any(2 * k as usize) / from_big(factorial(2 * k as u64));

    let mut v = psi.to_vec();
    v.push(2 * k as u32);
    let mut total = ch_eval(g, &v, rest);

    for i in 0..psi.len() {
        if i > 0 && psi[i] == psi[i - 1] {
            continue;
        }
        let mult = psi.iter().filter(|&&x| x == psi[i]).count() as i64;
        let mut v = psi.to_vec();
        v[i] += top as u32;
        total -= rint(mult) * ch_eval(g, &v, rest);
    }

    let half = rat(1, 2);
    let mut irr = Rational::zero();
    for j in 0..=(2 * k - 2) {
        let mut v = psi.to_vec();
        v.push(j as u32);
        v.push((2 * k - 2 - j) as u32);
        irr += sign(j) * ch_eval(g - 1, &v, rest);
    }
    total += &half * irr;

    let mut sep = Rational::zero();
    let psplits = multiset_splits(psi);
    let csplits = multiset_splits(rest);
    for (pa, pb, wp) in &psplits {
        for (ca, cb, wc) in &csplits {
            let w = rint((*wp * *wc) as i64);
            for j in 0..=(2 * k - 2) {
                let mut a = pa.clone();
                a.push(j as u32);
                let sa: i64 = a.iter().map(|&x| x as i64).sum::<i64>() + ca.iter().map(|&x| x as i64).sum::<i64>();
                let t = sa - a.len() as i64 + 3;
                if t < 0 || t % 3 != 0 || t / 3 > g {
                    continue;
                }
                let g1 = t / 3;
                let x = ch_eval(g1, &a, ca);
                if x.is_zero() {
                    continue;
                }
                let mut b = pb.clone();
                b.push((2 * k - 2 - j) as u32);
                sep += sign(j) * x * ch_eval(g - g1, &b, cb) * &w;
            }
        }
    }
    total += half * sep;
    pref * total
}

/// Full pipeline: κ removal, λ → ch, then Mumford reduction. Degree
/// mismatch gives 0.
pub fn hodge_integral(h: &HodgeIntegrand) -> Rational {
    if h.degree() != h.dimension() || h.genus < 0 {
        return Rational::zero();
    }
    let mut total = Rational::zero();
    for (c1, a) in kappa_to_psi(h) {
        for (c2, b) in lambda_to_ch(&a) {
            total += &c1 * c2 * ch_eval(b.genus, &b.psi, &b.ch);
        }
    }
    total
}

/// `∫ ∏ψ_i^{d_i} λ_{j_1}⋯λ_{j_r}`.
pub fn psi_lambda(g: i64, psi: &[u32], lambdas: &[u32]) -> Rational {
    let mut h = HodgeIntegrand::new(g, psi);
    for &j in lambdas {
        h = h.with_lambda(j);
    }
    hodge_integral(&h)
}

/// Closed Hodge integral formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormula {
    /// `⟨τ_d | λ_g⟩_g = binom(2g−3+n; d)·(2^{2g−1}−1)/2^{2g−1}·|B_{2g}|/(2g)!`
    Lg,
    /// `⟨τ_d | λ_gλ_{g−1}⟩_g = (2g−3+n)!|B_{2g}|/(2^{2g−1}(2g)!∏(2d_j−1)!!)`,
    /// valid when at most one `d_j` is zero.
    L2g,
    /// `⟨λ_{g−1}³⟩_g = |B_{2g−2}||B_{2g}|/((2g−2)!(2g−2)(2g))`
    L3g,
}

pub fn closed_formula_oracle(which: ClosedFormula, g: i64, d: &[u32]) -> Result<Rational> {
    let n = d.len() as i64;
    let sd: i64 = d.iter().map(|&x| x as i64).sum();
    match which {
        ClosedFormula::Lg => {
            if g < 1 || sd != 2 * g - 3 + n || 2 * g - 2 + n <= 0 {
                return invalid("λ_g formula needs g ≥ 1 and Σd = 2g−3+n");
            }
            let ks: Vec<u64> = d.iter().map(|&x| x as u64).collect();
            let p = from_big(BigInt::from(2).pow(2 * g as u32 - 1));
            Ok(from_big(multinomial(&ks)) * (&p - rint(1)) / p * bernoulli(2 * g)?.abs()
                / from_big(factorial(2 * g as u64)))
        }
        ClosedFormula::L2g => {
            if g < 1 || sd != g - 2 + n || 2 * g - 2 + n <= 0 {
                return invalid("λ_gλ_{g−1} formula needs g ≥ 1 and Σd = g−2+n");
            }
            if d.iter().filter(|&&x| x == 0).count() > 1 {
                return invalid("λ_gλ_{g−1} formula is not compatible with the string equation for two τ_0's");
            }
            let mut den = from_big(BigInt::from(2).pow(2 * g as u32 - 1)) * from_big(factorial(2 * g as u64));
            for &x in d {
                den *= dfq(2 * x as i64 - 1);
            }
            Ok(from_big(factorial((2 * g - 3 + n) as u64)) * bernoulli(2 * g)?.abs() / den)
        }
        ClosedFormula::L3g => {
            if g < 2 || !d.is_empty() {
                return invalid("λ_{g−1}³ formula needs g ≥ 2 and no ψ insertions");
            }
            Ok(bernoulli(2 * g - 2)?.abs() / rint(2 * g - 2) * bernoulli(2 * g)?.abs() / rint(2 * g)
                / from_big(factorial(2 * g as u64 - 2)))
        }
    }
}

/// `H_{g,μ} = r!∏μ_i^{μ_i}/μ_i! ∫ (1 − λ_1 + ⋯ ± λ_g)/∏(1 − μ_iψ_i)` with
/// `r = 2g − 2 + |μ| + ℓ(μ)`.
pub fn elsv_hurwitz(g: i64, mu: &Partition) -> Result<Rational> {
    let n = mu.len();
    if g < 0 || n == 0 || 2 * g - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let key = (g, mu.parts().to_vec());
    if let Some(v) = HURWITZ.get(&key) {
        return Ok(v);
    }
    let dim = 3 * g - 3 + n as i64;
    let r = 2 * g - 2 + mu.weight() as i64 + n as i64;
    let mut pref = from_big(factorial(r as u64));
    for &m in mu.parts() {
        pref *= from_big(BigInt::from(m).pow(m)) / from_big(factorial(m as u64));
    }
    let mut integral = Rational::zero();
    for j in 0..=g.min(dim) {
        // Σ_d ∏μ_i^{d_i} grouped by the sorted exponent vector, so each
        // integral is evaluated once
        let mut by_shape: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for d in crate::npoint::compositions(n, (dim - j) as u32) {
            let mono: BigInt = mu.parts().iter().zip(&d).map(|(&m, &e)| BigInt::from(m).pow(e)).product();
            let mut shape = d;
            shape.sort_unstable();
            *by_shape.entry(shape).or_default() += mono;
        }
        for (shape, mono) in by_shape {
            integral += sign(j) * from_big(mono) * psi_lambda(g, &shape, &[j as u32]);
        }
    }
    let v = pref * integral;
    HURWITZ.insert(key, v.clone());
    Ok(v)
}

/// Invert ELSV:
/// `⟨τ_{d_1}⋯τ_{d_n}⟩_g = Σ_{1 ≤ μ_i ≤ d_i+1} 1/(2g−2+|μ|+n)! ∏ (−1)^{d_i+1−μ_i}/((d_i+1−μ_i)!μ_i^{μ_i−1}) H_{g,μ}`,
/// summing over ordered tuples `μ`. The `|Aut μ|` factor of the printed
/// statement is left out: it only matches an ELSV normalization that counts
/// unlabeled preimages, whereas the ELSV formula above labels them.
pub fn kl_invert(g: i64, d: &[u32]) -> Result<Rational> {
    let n = d.len();
    let sd: i64 = d.iter().map(|&x| x as i64).sum();
    if sd != 3 * g - 3 + n as i64 {
        return invalid("Σd must equal 3g−3+n");
    }
    if 2 * g - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let mut tuples: Vec<Vec<u32>> = vec![Vec::new()];
    for &di in d {
        let mut next = Vec::new();
        for t in &tuples {
            for m in 1..=di + 1 {
                let mut u = t.clone();
                u.push(m);
                next.push(u);
            }
        }
        tuples = next;
    }
    let mut total = Rational::zero();
    for mu in tuples {
        let weight: i64 = mu.iter().map(|&m| m as i64).sum();
        let mut c = Rational::one() / from_big(factorial((2 * g - 2 + weight + n as i64) as u64));
        for (&m, &di) in mu.iter().zip(d) {
            let e = (di + 1 - m) as i64;
            c *= sign(e) / (from_big(factorial(e as u64)) * from_big(BigInt::from(m).pow(m - 1)));
        }
        let part = Partition::new(mu.clone())?;
        total += c * elsv_hurwitz(g, &part)?;
    }
    Ok(total)
}

/// The three quantities of the ch_{2g−3} identity, for `g ≥ 2`, `d_j ≥ 1`,
/// `Σ(d_j − 1) = g`:
/// `(2g−2)!/B_{2g−2}·∫ψ^d ch_{2g−3}` (signed Bernoulli number; the form
/// `−(2g−2)!/|B_{2g−2}|` agrees only for odd `g`),
/// `(2g−2)/|B_{2g−2}|·(∫ψ^d λ_{g−1}λ_{g−2} − 3∫ψ^d λ_{g−3}λ_g)`,
/// `½Σ_j(−1)^j⟨τ_{2g−4−j}τ_jτ_d⟩_{g−1} + (2g−3+n)!/(2^{2g+1}(2g−3)!∏(2d_j−1)!!)`.
pub fn lx6_sides(g: i64, d: &[u32]) -> Result<[Rational; 3]> {
    let excess: i64 = d.iter().map(|&x| x as i64 - 1).sum();
    if g < 2 || d.contains(&0) || excess != g {
        return invalid("needs g ≥ 2, d_j ≥ 1 and Σ(d_j − 1) = g");
    }
    let n = d.len() as i64;
    let signed = bernoulli(2 * g - 2)?;
    let b = signed.abs();
    let ch = ch_eval(g, d, &[(2 * g - 3) as u32]);
    let first = from_big(factorial(2 * g as u64 - 2)) / signed * ch;

    let lam = |a: i64, c: i64| {
        if a < 0 || c < 0 {
            Rational::zero()
        } else {
            psi_lambda(g, d, &[a as u32, c as u32])
        }
    };
    let second = rint(2 * g - 2) / &b * (lam(g - 1, g - 2) - rint(3) * lam(g - 3, g));

    let mut s = Rational::zero();
    for j in 0..=(2 * g - 4) {
        let mut v = vec![(2 * g - 4 - j) as u32, j as u32];
        v.extend_from_slice(d);
        s += sign(j) * psi_correlator(g - 1, &v);
    }
    let mut den = from_big(BigInt::from(2).pow(2 * g as u32 + 1)) * from_big(factorial(2 * g as u64 - 3));
    for &x in d {
        den *= dfq(2 * x as i64 - 1);
    }
    let third = rat(1, 2) * s + from_big(factorial((2 * g - 3 + n) as u64)) / den;
    Ok([first, second, third])
}

pub fn lx6_identity_check(g: i64, d: &[u32]) -> Result<bool> {
    let [a, b, c] = lx6_sides(g, d)?;
    Ok(a == b && b == c)
}

/// Both sides of the top-intersection identity
/// `(2g−3+n)!/(2^{2g−1}(2g−1)!∏(2d_j−1)!!) = ⟨τ_{2g}τ_d⟩_g − Σ_j⟨τ_{d_j+2g−1}…⟩_g
/// + ½Σ_j(−1)^j⟨τ_{2g−2−j}τ_jτ_d⟩_{g−1} + ½Σ_{I⊔J}Σ_j(−1)^j⟨τ_jτ_{d_I}⟩⟨τ_{2g−2−j}τ_{d_J}⟩`,
/// for `d_j ≥ 1`, `Σd = g+n−2`.
pub fn fa3_sides(g: i64, d: &[u32]) -> Result<(Rational, Rational)> {
    let n = d.len() as i64;
    let sd: i64 = d.iter().map(|&x| x as i64).sum();
    if g < 1 || d.contains(&0) || sd != g + n - 2 {
        return invalid("needs d_j ≥ 1 and Σd = g+n−2");
    }
    let mut den = from_big(BigInt::from(2).pow(2 * g as u32 - 1)) * from_big(factorial(2 * g as u64 - 1));
    for &x in d {
        den *= dfq(2 * x as i64 - 1);
    }
    let lhs = from_big(factorial((2 * g - 3 + n) as u64)) / den;

    let mut v = vec![2 * g as u32];
    v.extend_from_slice(d);
    let mut rhs = psi_correlator(g, &v);
    for i in 0..d.len() {
        let mut v = d.to_vec();
        v[i] += 2 * g as u32 - 1;
        rhs -= psi_correlator(g, &v);
    }
    let mut irr = Rational::zero();
    for j in 0..=(2 * g - 2) {
        let mut v = vec![(2 * g - 2 - j) as u32, j as u32];
        v.extend_from_slice(d);
        irr += sign(j) * psi_correlator(g - 1, &v);
    }
    let mut sorted = d.to_vec();
    sorted.sort_unstable();
    let mut sep = Rational::zero();
    for (a, b, w) in multiset_splits(&sorted) {
        for j in 0..=(2 * g - 2) {
            let mut x = vec![j as u32];
            x.extend_from_slice(&a);
            let mut y = vec![(2 * g - 2 - j) as u32];
            y.extend_from_slice(&b);
            for g1 in 0..=g {
                sep += sign(j) * psi_correlator(g1, &x) * psi_correlator(g - g1, &y) * rint(w as i64);
            }
        }
    }
    rhs += rat(1, 2) * (irr + sep);
    Ok((lhs, rhs))
}

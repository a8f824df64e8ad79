//! n-point functions.
//!
//! `F_g(x_1..x_n)` collects every `⟨τ_{d_1}⋯τ_{d_n}⟩_g` as the coefficient of
//! `∏ x_j^{d_j}`, and `G = exp(−Σx³/24)·F` is its normalized form. Both are
//! symmetric and homogeneous, so the recursions run on [`SymTable`], which
//! stores one coefficient per sorted exponent vector. [`SymPoly`] is used
//! for the closed forms and tree expansions.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::descendent::psi_correlator;
use crate::error::{invalid, Error, Result};
use crate::exact::{df, factorial, from_big, multinomial, multiset_splits, partitions, rat, rint, sign, Rational};
use crate::memo::Memo;
use crate::poly::SymPoly;

/// Symmetric homogeneous polynomial in `n` variables of a fixed degree,
/// keyed by exponent vectors sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTable {
    n: usize,
    degree: u32,
    coeffs: HashMap<Vec<u32>, Rational>,
}

/// Sorted (descending) exponent vectors of length `n` and total `degree`,
/// in lexicographically descending order.
pub fn sorted_keys(n: usize, degree: u32) -> Vec<Vec<u32>> {
    partitions(degree as u64)
        .into_iter()
        .filter(|p| p.len() <= n)
        .map(|p| {
            let mut v = p.parts().to_vec();
            v.resize(n, 0);
            v
        })
        .collect()
}

fn sorted(mut e: Vec<u32>) -> Vec<u32> {
    e.sort_unstable_by(|a, b| b.cmp(a));
    e
}

impl SymTable {
    pub fn zero(n: usize, degree: u32) -> Self {
        SymTable { n, degree, coeffs: HashMap::new() }
    }

    fn set(&mut self, key: Vec<u32>, c: Rational) {
        debug_assert_eq!(key.iter().sum::<u32>(), self.degree);
        if !c.is_zero() {
            self.coeffs.insert(key, c);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `∏ x_j^{e_j}`, for exponents in any order.
    pub fn get(&self, e: &[u32]) -> Rational {
        if e.len() != self.n || e.iter().sum::<u32>() != self.degree {
            return Rational::zero();
        }
        self.coeffs.get(&sorted(e.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    fn get_sorted(&self, e: &[u32]) -> Option<&Rational> {
        self.coeffs.get(e)
    }

    pub fn scale(&self, c: &Rational) -> SymTable {
        let mut out = SymTable::zero(self.n, self.degree);
        for (k, v) in &self.coeffs {
            out.set(k.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &SymTable) -> SymTable {
        assert_eq!((self.n, self.degree), (other.n, other.degree));
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            let s = out.coeffs.get(k).cloned().unwrap_or_else(Rational::zero) + v;
            out.coeffs.remove(k);
            out.set(k.clone(), s);
        }
        out
    }

    /// Multiply by `Σ x_j`.
    pub fn mul_sum(&self) -> SymTable {
        let mut out = SymTable::zero(self.n, self.degree + 1);
        if self.is_zero() {
            return out;
        }
        for e in sorted_keys(self.n, self.degree + 1) {
            let mut acc = Rational::zero();
            for i in 0..self.n {
                if e[i] == 0 || (i > 0 && e[i] == e[i - 1]) {
                    continue;
                }
                let mult = e.iter().filter(|&&x| x == e[i]).count() as i64;
                let mut f = e.clone();
                // lowering the last copy of e[i] keeps f sorted
                let last = i + mult as usize - 1;
                f[last] -= 1;
                if let Some(c) = self.get_sorted(&f) {
                    acc += c * rint(mult);
                }
            }
            out.set(e, acc);
        }
        out
    }

    /// Multiply by `Σ x_j³`.
    pub fn mul_p3(&self) -> SymTable {
        let mut out = SymTable::zero(self.n, self.degree + 3);
        if self.is_zero() {
            return out;
        }
        for e in sorted_keys(self.n, self.degree + 3) {
            let mut acc = Rational::zero();
            for i in 0..self.n {
                if e[i] < 3 || (i > 0 && e[i] == e[i - 1]) {
                    continue;
                }
                let mult = e.iter().filter(|&&x| x == e[i]).count() as i64;
                let mut f = e.clone();
                f[i] -= 3;
                if let Some(c) = self.get_sorted(&sorted(f)) {
                    acc += c * rint(mult);
                }
            }
            out.set(e, acc);
        }
        out
    }

    /// Multiply by `Δ = ((Σx)³ − Σx³)/3`.
    pub fn mul_delta(&self) -> SymTable {
        let cube = self.mul_sum().mul_sum().mul_sum();
        cube.add(&self.mul_p3().scale(&-Rational::one())).scale(&rat(1, 3))
    }

    /// Exact division by `Σ x_j`. Solves for coefficients in lexicographically
    /// descending order, then multiplies back and fails on any remainder.
    pub fn div_sum(&self) -> Result<SymTable> {
        if self.degree == 0 {
            return if self.is_zero() {
                Err(Error::Numeric("division of zero-degree table".into()))
            } else {
                Err(Error::Numeric("constant is not divisible by a linear form".into()))
            };
        }
        let mut out = SymTable::zero(self.n, self.degree - 1);
        for d in sorted_keys(self.n, self.degree - 1) {
            let mut e = d.clone();
            e[0] += 1;
            let mut acc = self.get_sorted(&e).cloned().unwrap_or_else(Rational::zero);
            for i in 1..self.n {
                if e[i] == 0 || e[i] == e[i - 1] && i > 1 {
                    continue;
                }
                let mult = (1..self.n).filter(|&j| e[j] == e[i]).count() as i64;
                let mut f = e.clone();
                f[i] -= 1;
                let f = sorted(f);
                if let Some(c) = out.get_sorted(&f) {
                    acc -= c * rint(mult);
                }
            }
            out.set(d, acc);
        }
        if out.mul_sum() != *self {
            return Err(Error::Numeric("Σx does not divide the table".into()));
        }
        Ok(out)
    }

    /// Expand into an explicit polynomial. Refuses tables whose expansion
    /// would exceed `limit` monomials.
    pub fn to_poly_limited(&self, limit: usize) -> Result<SymPoly> {
        let mut out = SymPoly::zero(self.n);
        let mut count = 0usize;
        let mut keys: Vec<_> = self.coeffs.keys().cloned().collect();
        keys.sort();
        for k in keys {
            let c = &self.coeffs[&k];
            for perm in distinct_permutations(&k) {
                count += 1;
                if count > limit {
                    return Err(Error::Limit(format!("expansion exceeds {limit} monomials")));
                }
                out.add_term(perm, c.clone());
            }
        }
        Ok(out)
    }

    pub fn to_poly(&self) -> Result<SymPoly> {
        self.to_poly_limited(2_000_000)
    }

    /// Read a symmetric homogeneous polynomial into table form.
    pub fn from_poly(p: &SymPoly, degree: u32) -> Result<SymTable> {
        if !p.is_homogeneous(degree) {
            return invalid("polynomial is not homogeneous of the stated degree");
        }
        let mut out = SymTable::zero(p.nvars(), degree);
        for (e, c) in p.terms() {
            let s = sorted(e.clone());
            match out.coeffs.get(&s) {
                Some(prev) if prev != c => return invalid("polynomial is not symmetric"),
                _ => out.set(s, c.clone()),
            }
        }
        if !p.is_symmetric() {
            return invalid("polynomial is not symmetric");
        }
        Ok(out)
    }

    /// Nonzero entries, sorted.
    pub fn entries(&self) -> Vec<(Vec<u32>, Rational)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        v.sort();
        v
    }
}

fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut items = v.to_vec();
    items.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(items.clone());
        // next lexicographic permutation
        let Some(i) = (0..items.len().saturating_sub(1)).rev().find(|&i| items[i] < items[i + 1]) else {
            break;
        };
        let j = (i + 1..items.len()).rev().find(|&j| items[j] > items[i]).unwrap();
        items.swap(i, j);
        items[i + 1..].reverse();
    }
    out
}

/// Which identity assembles the normalized tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// `G_g = P_g/(2g+n−1) + Δ·G_{g−1}/(4(2g+n−1))`.
    Recursion,
    /// `G_g = Σ_{r+s=g} (2r+n−3)!!/(4^s(2g+n−1)!!)·P_r·Δ^s`.
    Theorem,
}

static G_MEMO: Memo<(Route, i64, usize), Arc<SymTable>> = Memo::new();
static F_MEMO: Memo<(i64, usize), Arc<SymTable>> = Memo::new();
static FK_MEMO: Memo<(i64, usize), Arc<SymTable>> = Memo::new();

fn check_stable(g: i64, n: usize) -> Result<()> {
    if g < 0 || n == 0 || 2 * g - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    Ok(())
}

/// `(Σ_I x)²·G_g(x_I)` with the one- and two-point conventions
/// `G_0(x) = 1/x²`, `G_0(x,y) = 1/(x+y)`.
fn h_table(route: Route, g: i64, m: usize) -> Result<SymTable> {
    let deg = (3 * g + m as i64 - 1) as u32;
    match (g, m) {
        (0, 1) => {
            let mut t = SymTable::zero(1, 0);
            t.set(vec![0], Rational::one());
            Ok(t)
        }
        (_, 1) => Ok(SymTable::zero(1, deg)),
        (0, 2) => {
            let mut t = SymTable::zero(2, 1);
            t.set(vec![1, 0], Rational::one());
            Ok(t)
        }
        _ => Ok(g_table(route, g, m)?.mul_sum().mul_sum()),
    }
}

/// `(Σ x)·2·P_g`: the split sum over ordered `I ⊔ J`, both nonempty.
fn split_sum(route: Route, g: i64, n: usize) -> Result<SymTable> {
    let deg = (3 * g + n as i64 - 2) as u32;
    let mut hs: HashMap<(i64, usize), SymTable> = HashMap::new();
    for m in 1..n {
        for r in 0..=g {
            hs.insert((r, m), h_table(route, r, m)?);
        }
    }
    let mut out = SymTable::zero(n, deg);
    for e in sorted_keys(n, deg) {
        let mut acc = Rational::zero();
        for (a, b, w) in multiset_splits(&e) {
            if a.is_empty() || b.is_empty() {
                continue;
            }
            let sa: i64 = a.iter().map(|&x| x as i64).sum();
            let t = sa - a.len() as i64 + 1;
            if t < 0 || t % 3 != 0 || t / 3 > g {
                continue;
            }
            let r = t / 3;
            let (Some(x), Some(y)) = (
                hs[&(r, a.len())].get_sorted(&a),
                hs[&(g - r, b.len())].get_sorted(&b),
            ) else {
                continue;
            };
            acc += x * y * rint(w as i64);
        }
        out.set(e, acc);
    }
    Ok(out)
}

/// `P_g(x_1..x_n)`; requires `n ≥ 3`, or `n = 2` with `g ≥ 1` where it vanishes.
fn p_table(route: Route, g: i64, n: usize) -> Result<SymTable> {
    if n == 2 {
        assert!(g >= 1);
        return Ok(SymTable::zero(2, (3 * g - 1) as u32));
    }
    Ok(split_sum(route, g, n)?.div_sum()?.scale(&rat(1, 2)))
}

fn delta_pow(mut t: SymTable, s: u32) -> SymTable {
    for _ in 0..s {
        t = t.mul_delta();
    }
    t
}

/// `Δ^s·G_0(x,y)` for `s ≥ 1`, using `Δ·G_0(x,y) = xy`.
fn two_point_delta_pow(s: u32) -> SymTable {
    assert!(s >= 1);
    let mut t = SymTable::zero(2, 2);
    t.set(vec![1, 1], Rational::one());
    delta_pow(t, s - 1)
}

/// Normalized table `G_g(x_1..x_n)` for `n ≥ 2` by the chosen route.
pub fn g_table(route: Route, g: i64, n: usize) -> Result<Arc<SymTable>> {
    check_stable(g, n)?;
    if n == 1 {
        // G(x) = 1/x² has no positive-genus part
        return Ok(Arc::new(SymTable::zero(1, (3 * g - 2) as u32)));
    }
    if let Some(t) = G_MEMO.get(&(route, g, n)) {
        return Ok(t);
    }
    let deg = (3 * g + n as i64 - 3) as u32;
    let denom = rint(2 * g + n as i64 - 1);
    let t = match route {
        Route::Recursion => {
            let mut t = if n == 2 { SymTable::zero(2, deg) } else { p_table(route, g, n)?.scale(&(Rational::one() / &denom)) };
            if g >= 1 {
                let dg = if n == 2 && g == 1 {
                    two_point_delta_pow(1)
                } else {
                    g_table(route, g - 1, n)?.mul_delta()
                };
                t = t.add(&dg.scale(&(Rational::one() / (rint(4) * &denom))));
            }
            t
        }
        Route::Theorem => {
            let mut t = SymTable::zero(n, deg);
            let top = from_big(df(2 * g + n as i64 - 1));
            for r in 0..=g {
                let s = (g - r) as u32;
                let c = from_big(df(2 * r + n as i64 - 3)) / (from_big(BigInt::from(4).pow(s)) * &top);
                let term = if n == 2 {
                    if r > 0 {
                        continue;
                    }
                    two_point_delta_pow(s)
                } else {
                    delta_pow(p_table(route, r, n)?, s)
                };
                t = t.add(&term.scale(&c));
            }
            t
        }
    };
    assert_eq!(t.degree, deg);
    let t = Arc::new(t);
    G_MEMO.insert((route, g, n), t.clone());
    Ok(t)
}

/// `G_g(x_1..x_n)` as an explicit polynomial.
pub fn npoint_g(g: i64, n: usize) -> Result<SymPoly> {
    if n == 2 && g == 0 || n == 1 && g == 0 {
        return Err(Error::Invalid(format!("G_0 with {n} points is not a polynomial")));
    }
    g_table(Route::Recursion, g, n)?.to_poly()
}

/// `F_g` from the normalized tables:
/// `(Σx)²F_g = Σ_j (Σx³/24)^j/j! · (Σx)²G_{g−j}`.
pub fn f_table(route: Route, g: i64, n: usize) -> Result<Arc<SymTable>> {
    check_stable(g, n)?;
    if route == Route::Recursion {
        if let Some(t) = F_MEMO.get(&(g, n)) {
            return Ok(t);
        }
    }
    let deg = (3 * g + n as i64 - 1) as u32;
    let mut acc = SymTable::zero(n, deg);
    for j in 0..=g {
        let mut t = h_table(route, g - j, n)?;
        for _ in 0..j {
            t = t.mul_p3();
        }
        let c = Rational::one() / from_big(BigInt::from(24).pow(j as u32) * factorial(j as u64));
        acc = acc.add(&t.scale(&c));
    }
    let t = Arc::new(acc.div_sum()?.div_sum()?);
    if route == Route::Recursion {
        F_MEMO.insert((g, n), t.clone());
    }
    Ok(t)
}

/// `F_g(x_1..x_n)`, whose coefficients are the correlators.
pub fn npoint_f(g: i64, n: usize) -> Result<SymPoly> {
    f_table(Route::Recursion, g, n)?.to_poly()
}

/// `⟨τ_{d_1}⋯τ_{d_n}⟩_g` read off the n-point function.
pub fn npoint_coefficient(g: i64, d: &[u32]) -> Result<Rational> {
    Ok(f_table(Route::Recursion, g, d.len())?.get(d))
}

/// `(Σ_I x)²·F_g(x_I)` with `F_g(x) = x^{3g−2}/(24^g g!)` and `F_0(x,y) = 1/(x+y)`.
fn hf_table(g: i64, m: usize) -> Result<SymTable> {
    match (g, m) {
        (_, 1) => {
            let mut t = SymTable::zero(1, (3 * g) as u32);
            t.set(vec![(3 * g) as u32], Rational::one() / from_big(BigInt::from(24).pow(g as u32) * factorial(g as u64)));
            Ok(t)
        }
        (0, 2) => {
            let mut t = SymTable::zero(2, 1);
            t.set(vec![1, 0], Rational::one());
            Ok(t)
        }
        _ => Ok(f_table_kdv(g, m)?.mul_sum().mul_sum()),
    }
}

/// `F_g` directly from
/// `(2g+n−1)(Σx)F_g = (1/12)(Σx)⁴F_{g−1} + ½ Σ_{g'} Σ_{I⊔J} (Σ_I x)²(Σ_J x)² F_{g'}(x_I)F_{g−g'}(x_J)`.
pub fn f_table_kdv(g: i64, n: usize) -> Result<Arc<SymTable>> {
    check_stable(g, n)?;
    if let Some(t) = FK_MEMO.get(&(g, n)) {
        return Ok(t);
    }
    let deg = (3 * g + n as i64 - 2) as u32;
    let mut rhs = SymTable::zero(n, deg);
    if g >= 1 {
        rhs = hf_table(g - 1, n)?.mul_sum().mul_sum().scale(&rat(1, 12));
    }
    let mut hs: HashMap<(i64, usize), SymTable> = HashMap::new();
    for m in 1..n {
        for r in 0..=g {
            hs.insert((r, m), hf_table(r, m)?);
        }
    }
    let mut split = SymTable::zero(n, deg);
    for e in sorted_keys(n, deg) {
        let mut acc = Rational::zero();
        for (a, b, w) in multiset_splits(&e) {
            if a.is_empty() || b.is_empty() {
                continue;
            }
            let sa: i64 = a.iter().map(|&x| x as i64).sum();
            let t = sa - a.len() as i64 + 1;
            if t < 0 || t % 3 != 0 || t / 3 > g {
                continue;
            }
            let r = t / 3;
            let (Some(x), Some(y)) = (hs[&(r, a.len())].get_sorted(&a), hs[&(g - r, b.len())].get_sorted(&b)) else {
                continue;
            };
            acc += x * y * rint(w as i64);
        }
        split.set(e, acc);
    }
    let rhs = rhs.add(&split.scale(&rat(1, 2)));
    let t = Arc::new(rhs.div_sum()?.scale(&(Rational::one() / rint(2 * g + n as i64 - 1))));
    FK_MEMO.insert((g, n), t.clone());
    Ok(t)
}

/// Leading factor `k!/(2k+1)!·2^{−k}` of the k-th summand of the two-point
/// function; the summand is this times `(xy)^k (x+y)^{k−1}`.
pub fn two_point_coefficient(k: u32) -> Rational {
    from_big(factorial(k as u64)) / (from_big(factorial(2 * k as u64 + 1)) * from_big(BigInt::from(2).pow(k)))
}

/// Genus-`k` component of the closed two-point function,
/// `k!/(2k+1)!·(xy/2)^k·(x+y)^{k−1}`, for `k ≥ 1` (the `k = 0` summand is
/// `1/(x+y)`).
pub fn two_point_term(k: u32) -> Result<SymPoly> {
    if k == 0 {
        return invalid("the k = 0 summand 1/(x+y) is not a polynomial");
    }
    let xy = &SymPoly::var(2, 0) * &SymPoly::var(2, 1);
    let s = SymPoly::linear_sum(2, &[0, 1]);
    Ok((&xy.pow(k) * &s.pow(k - 1)).scale(&two_point_coefficient(k)))
}

/// Components `G_g(x,y)` of the closed two-point function with total degree
/// at most `cap`, as `(g, polynomial)` pairs starting at `g = 1`.
pub fn two_point_closed(cap: u32) -> Vec<(u32, SymPoly)> {
    (1..).take_while(|&k| 3 * k - 1 <= cap).map(|k| (k, two_point_term(k).unwrap())).collect()
}

/// `Δ(x,y,z) = (x+y)(y+z)(z+x)`.
pub fn delta3() -> SymPoly {
    let x = SymPoly::var(3, 0);
    let y = SymPoly::var(3, 1);
    let z = SymPoly::var(3, 2);
    &(&(&x + &y) * &(&y + &z)) * &(&z + &x)
}

/// `S_r(x,y,z) = [(xy)^r(x+y)^{r+1} + (yz)^r(y+z)^{r+1} + (zx)^r(z+x)^{r+1}]/(x+y+z)`,
/// divided exactly.
pub fn zagier_s(r: u32) -> Result<SymPoly> {
    let v = [SymPoly::var(3, 0), SymPoly::var(3, 1), SymPoly::var(3, 2)];
    let mut num = SymPoly::zero(3);
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let t = &(&v[i] * &v[j]).pow(r) * &(&v[i] + &v[j]).pow(r + 1);
        num = &num + &t;
    }
    num.div_exact(&SymPoly::linear_sum(3, &[0, 1, 2]))
}

/// Genus-`g` component of the closed three-point function:
/// `Σ_{r+s=g} r!·S_r/(4^r(2r+1)!!·2) · Δ^s/(8^s(r+s+1)!)`.
pub fn three_point_term(g: u32) -> Result<SymPoly> {
    let mut acc = SymPoly::zero(3);
    let d = delta3();
    for r in 0..=g {
        let s = g - r;
        let c = from_big(factorial(r as u64))
            / (from_big(BigInt::from(4).pow(r)) * from_big(df(2 * r as i64 + 1)) * rint(2))
            / (from_big(BigInt::from(8).pow(s)) * from_big(factorial((r + s + 1) as u64)));
        acc = &acc + &(&zagier_s(r)? * &d.pow(s)).scale(&c);
    }
    Ok(acc)
}

/// Components `G_g(x,y,z)` of the closed three-point function up to total
/// degree `cap`.
pub fn three_point_closed(cap: u32) -> Result<Vec<(u32, SymPoly)>> {
    (0..).take_while(|&g| 3 * g <= cap).map(|g| Ok((g, three_point_term(g)?))).collect()
}

/// A weighted marked binary tree: every node carries a weight, leaves carry
/// distinct labels `1..=n`. Trees are stored in a canonical form where the
/// left subtree holds the smallest label, so each isomorphism class appears
/// exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WmbTree {
    Leaf { label: usize, weight: u32 },
    Node { weight: u32, left: Box<WmbTree>, right: Box<WmbTree> },
}

impl WmbTree {
    pub fn total_weight(&self) -> u32 {
        match self {
            WmbTree::Leaf { weight, .. } => *weight,
            WmbTree::Node { weight, left, right } => weight + left.total_weight() + right.total_weight(),
        }
    }

    pub fn labels(&self) -> Vec<usize> {
        match self {
            WmbTree::Leaf { label, .. } => vec![*label],
            WmbTree::Node { left, right, .. } => {
                let mut v = left.labels();
                v.extend(right.labels());
                v
            }
        }
    }

    /// Product of node factors
    /// `(|L(v)|−3+Σ_{w<v}2g(w))!!/(|L(v)|−1+Σ_{w≤v}2g(w))!!·(Σ_{L(v)} x)^{3g(v)+1}`,
    /// with the leaf numerator `(−2)!!` read as 1.
    pub fn evaluate(&self, n: usize) -> SymPoly {
        match self {
            WmbTree::Leaf { label, weight } => {
                let c = Rational::one() / from_big(df(2 * *weight as i64));
                SymPoly::var(n, label - 1).pow(3 * weight + 1).scale(&c)
            }
            WmbTree::Node { weight, left, right } => {
                let labels = self.labels();
                let l = labels.len() as i64;
                let below = 2 * (left.total_weight() + right.total_weight()) as i64;
                let all = below + 2 * *weight as i64;
                let c = from_big(df(l - 3 + below)) / from_big(df(l - 1 + all));
                let idx: Vec<usize> = labels.iter().map(|x| x - 1).collect();
                let f = SymPoly::linear_sum(n, &idx).pow(3 * weight + 1).scale(&c);
                &(&f * &left.evaluate(n)) * &right.evaluate(n)
            }
        }
    }
}

fn wmb_rec(labels: &[usize], h: u32) -> Vec<WmbTree> {
    if labels.len() == 1 {
        return vec![WmbTree::Leaf { label: labels[0], weight: h }];
    }
    let mut out = Vec::new();
    let rest = &labels[1..];
    // left side always contains labels[0]; choose which of the rest join it
    for mask in 0u64..(1u64 << rest.len()) {
        let mut l = vec![labels[0]];
        let mut r = Vec::new();
        for (i, &x) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                l.push(x);
            } else {
                r.push(x);
            }
        }
        if r.is_empty() {
            continue;
        }
        for w in 0..=h {
            for h1 in 0..=h - w {
                let ls = wmb_rec(&l, h1);
                let rs = wmb_rec(&r, h - w - h1);
                for a in &ls {
                    for b in &rs {
                        out.push(WmbTree::Node { weight: w, left: Box::new(a.clone()), right: Box::new(b.clone()) });
                    }
                }
            }
        }
    }
    out
}

/// All isomorphism classes in WMB(g, n).
pub fn wmb_trees(g: u32, n: usize) -> Vec<WmbTree> {
    let labels: Vec<usize> = (1..=n).collect();
    if n == 0 {
        return Vec::new();
    }
    wmb_rec(&labels, g)
}

pub fn wmb_count(g: u32, n: usize) -> usize {
    wmb_trees(g, n).len()
}

/// `Σ_{T ∈ WMB(g,n)} ∏_v (node factor)`, which equals
/// `12^g·(∏x_j)·(Σx_j)²·F_g(x_1..x_n)`.
pub fn wmb_expansion(g: u32, n: usize) -> Result<SymPoly> {
    check_stable(g as i64, n)?;
    let mut acc = SymPoly::zero(n);
    for t in wmb_trees(g, n) {
        acc = &acc + &t.evaluate(n);
    }
    Ok(acc)
}

/// The three coefficient statements about `G_g(z, x_1..x_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NptCase {
    /// Coefficient of `z^k∏x^d` vanishes for `k > 2g−2+n`, `Σd = 3g−2+n−k`.
    Vanishing { k: u32 },
    /// `z^{2g−2+n}` with `Σd = g`: `1/(4^g∏(2d_j+1)!!)`.
    Leading,
    /// `z^{2g−3+n}` with `Σd = g+1`: the quadratic-in-`g` numerator over the
    /// same denominator.
    Subleading,
}

/// `(extracted, predicted)` for a coefficient statement.
pub fn coeff_theorem_values(g: i64, case: NptCase, d: &[u32]) -> Result<(Rational, Rational)> {
    let n = d.len() as i64;
    let sd: i64 = d.iter().map(|&x| x as i64).sum();
    let denom = || {
        let mut acc = from_big(BigInt::from(4).pow(g as u32));
        for &x in d {
            acc *= from_big(df(2 * x as i64 + 1));
        }
        acc
    };
    let (k, predicted) = match case {
        NptCase::Vanishing { k } => {
            let k = k as i64;
            if k <= 2 * g - 2 + n || sd != 3 * g - 2 + n - k {
                return invalid("vanishing case needs k > 2g−2+n and Σd = 3g−2+n−k");
            }
            (k, Rational::zero())
        }
        NptCase::Leading => {
            if sd != g || 2 * g - 2 + n < 0 {
                return invalid("leading case needs Σd = g");
            }
            (2 * g - 2 + n, Rational::one() / denom())
        }
        NptCase::Subleading => {
            if sd != g + 1 || 2 * g - 3 + n < 0 {
                return invalid("subleading case needs Σd = g+1");
            }
            let a = d.iter().filter(|&&x| x == 0).count() as i64;
            let num = rint(2 * g * g + (2 * n - 1) * g - 3) + rat(n * n - n, 2) + rat(5 * a - a * a, 2);
            (2 * g - 3 + n, num / denom())
        }
    };
    if 2 * g - 2 + n < 0 || g == 0 && n < 2 {
        return Err(Error::Unstable { g, n: d.len() + 1 });
    }
    let mut e = vec![k as u32];
    e.extend_from_slice(d);
    let got = g_table(Route::Recursion, g, d.len() + 1)?.get(&e);
    Ok((got, predicted))
}

pub fn coeff_theorem_check(g: i64, case: NptCase, d: &[u32]) -> Result<bool> {
    let (a, b) = coeff_theorem_values(g, case, d)?;
    Ok(a == b)
}

/// Correlator with the genus-zero virtual conventions
/// `⟨τ_{−2}⟩_0 = 1` and `⟨τ_m τ_{−1−m}⟩_0 = (−1)^{max(m, −1−m)}`;
/// every other negative index gives 0.
pub fn virtual_correlator(g: i64, j: i64, rest: &[u32]) -> Rational {
    if g == 0 && rest.is_empty() && j == -2 {
        return Rational::one();
    }
    if g == 0 && rest.len() == 1 && j == -1 - rest[0] as i64 {
        return sign(rest[0] as i64);
    }
    if j < 0 {
        return Rational::zero();
    }
    let mut v = vec![j as u32];
    v.extend_from_slice(rest);
    psi_correlator(g, &v)
}

/// `binom(a, k)` for any integer `a` and `k ≥ 0`.
pub fn gen_binomial(a: i64, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc = acc * rint(a - i) / rint(i + 1);
    }
    acc
}

/// Every `e ≤ d` componentwise.
fn boxes(d: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &x in d {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..=x {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// One side `(±y + Σ_I x)^a F_{g'}(±y, x_I)` restricted to an `x`-exponent
/// vector `d_I`; returns `(y power, coefficient)` pairs.
fn lab_side(gp: i64, a: i64, neg: bool, d: &[u32]) -> Vec<(i64, Rational)> {
    let mut out: Vec<(i64, Rational)> = Vec::new();
    let m = d.len() as i64;
    for e in boxes(d) {
        let se: i64 = e.iter().map(|&x| x as i64).sum();
        let diff: Vec<u64> = d.iter().zip(&e).map(|(&x, &y)| (x - y) as u64).collect();
        let k: u64 = diff.iter().sum();
        let j = 3 * gp - 2 + m - se;
        let v = virtual_correlator(gp, j, &e);
        if v.is_zero() {
            continue;
        }
        let mut c = gen_binomial(a, k as u32) * from_big(multinomial(&diff)) * v;
        let ypow = a - k as i64 + j;
        if neg {
            c *= sign(a - k as i64 + j);
        }
        out.push((ypow, c));
    }
    out
}

/// Coefficient of `y^p ∏x_j^{d_j}` in
/// `L_g^{a,b} = Σ_{g'} Σ_{I⊔J} (y+Σ_I x)^a (−y+Σ_J x)^b F_{g'}(y,x_I) F_{g−g'}(−y,x_J)`,
/// with negative powers of `y` expanded as `y`-dominant binomial series and
/// the genus-zero virtual conventions in force. `I` or `J` may be empty.
pub fn lab_coefficient(g: i64, a: i64, b: i64, p: i64, d: &[u32]) -> Rational {
    let mut sd = d.to_vec();
    sd.sort_unstable();
    let mut total = Rational::zero();
    for (da, db, w) in multiset_splits(&sd) {
        let w = rint(w as i64);
        for gp in 0..=g {
            let left = lab_side(gp, a, false, &da);
            if left.is_empty() {
                continue;
            }
            let right = lab_side(g - gp, b, true, &db);
            for (p1, c1) in &left {
                for (p2, c2) in &right {
                    if p1 + p2 == p {
                        total += c1 * c2 * &w;
                    }
                }
            }
        }
    }
    total
}

/// Every `d ∈ N^n` with `Σd = total`.
pub fn compositions(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The `y^p` slice of `L_g^{a,b}` as a polynomial in `x_1..x_n`.
pub fn lab_slice(g: i64, a: i64, b: i64, p: i64, n: usize) -> SymPoly {
    let xdeg = a + b + 3 * g - 4 + n as i64 - p;
    let mut out = SymPoly::zero(n);
    if xdeg < 0 {
        return out;
    }
    for d in compositions(n, xdeg as u32) {
        let c = lab_coefficient(g, a, b, p, &d);
        out.add_term(d, c);
    }
    out
}

/// `Σ_{g'} Σ_{j∈Z} (−1)^j ⟨⟨τ_j P⟩⟩_{g'} ⟨⟨τ_{k−j} Q⟩⟩_{g−g'}` at zero coupling,
/// with the passenger insertions `s` distributed over both factors.
pub fn lx1_sum(g: i64, k: i64, p: &[u32], q: &[u32], s: &[u32]) -> Rational {
    let mut ss = s.to_vec();
    ss.sort_unstable();
    let mut total = Rational::zero();
    for (a, b, w) in multiset_splits(&ss) {
        let mut left = p.to_vec();
        left.extend_from_slice(&a);
        let mut right = q.to_vec();
        right.extend_from_slice(&b);
        // the two-point virtual values reach down to τ_{−1−max}
        let lo = -2 - left.iter().copied().max().unwrap_or(0) as i64;
        let hi = k + 2 + right.iter().copied().max().unwrap_or(0) as i64;
        for gp in 0..=g {
            for j in lo..=hi {
                let x = virtual_correlator(gp, j, &left);
                if x.is_zero() {
                    continue;
                }
                let y = virtual_correlator(g - gp, k - j, &right);
                total += sign(j) * x * y * rint(w as i64);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_zero_three_point_is_one() {
        let g = npoint_g(0, 3).unwrap();
        assert_eq!(g, SymPoly::one(3));
    }

    #[test]
    fn f_examples() {
        assert_eq!(npoint_coefficient(1, &[1]).unwrap(), rat(1, 24));
        assert_eq!(npoint_coefficient(0, &[1, 0, 0, 0]).unwrap(), rint(1));
        assert_eq!(npoint_coefficient(2, &[4]).unwrap(), rat(1, 1152));
    }

    #[test]
    fn division_by_sum_round_trips() {
        let t = g_table(Route::Recursion, 1, 4).unwrap();
        let q = t.mul_sum();
        assert_eq!(q.div_sum().unwrap(), *t);
    }

    #[test]
    fn zagier_s0_is_two() {
        assert_eq!(zagier_s(0).unwrap(), SymPoly::constant(3, rint(2)));
    }

    #[test]
    fn wmb_two_two_has_six_trees() {
        assert_eq!(wmb_count(2, 2), 6);
        assert_eq!(wmb_count(0, 3), 3);
    }

    #[test]
    fn two_point_coefficient_values() {
        assert_eq!(two_point_coefficient(0), rint(1));
        assert_eq!(two_point_coefficient(1), rat(1, 12));
    }

    #[test]
    fn virtual_one_over_x_plus_y() {
        // F_0(y,x) = 1/(x+y) = Σ (−1)^k x^k y^{−1−k}
        for k in 0..6u32 {
            assert_eq!(virtual_correlator(0, -1 - k as i64, &[k]), sign(k as i64));
        }
        assert_eq!(virtual_correlator(0, -2, &[]), rint(1));
    }
}

//! Ramanujan's third order mock theta function `ω(q)` and the integer
//! sequences `p_ω`, `a_ω` that split `ω_g = ω(g−2)` into a profile `ω_g^k`.

use std::collections::BTreeMap;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{invalid, numeric, Result};
use crate::exact::partition_counts;
use crate::fabering::rank_profile;

/// Truncated power series in `q` with integer coefficients `c[0..=N]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub coefficients: Vec<BigInt>,
}

impl QSeries {
    fn one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(1);
        QSeries { coefficients: c }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coefficients[i]
    }

    /// Multiply by `1/(1 − ε q^a)` with `ε = ±1`.
    fn div_binomial(&mut self, a: usize, eps: i64) {
        for i in a..self.coefficients.len() {
            let prev = self.coefficients[i - a].clone();
            if eps > 0 {
                self.coefficients[i] += prev;
            } else {
                self.coefficients[i] -= prev;
            }
        }
    }

    /// `self += q^shift · other`, truncated.
    fn add_shifted(&mut self, other: &QSeries, shift: usize) {
        for i in shift..self.coefficients.len() {
            self.coefficients[i] += &other.coefficients[i - shift];
        }
    }
}

/// `Σ_n q^{2n²+2n} / ∏_{j=0}^n (1 − q^{2j+1})²` through `q^N`.
pub fn omega_series(n_max: usize) -> QSeries {
    let mut out = QSeries { coefficients: vec![BigInt::zero(); n_max + 1] };
    let mut denom = QSeries::one(n_max);
    let mut n = 0usize;
    while 2 * n * n + 2 * n <= n_max {
        denom.div_binomial(2 * n + 1, 1);
        denom.div_binomial(2 * n + 1, 1);
        out.add_shifted(&denom, 2 * n * n + 2 * n);
        n += 1;
    }
    out
}

/// `Σ_n q^n / ∏_{j=0}^n (1 − q^{2j+1})` through `q^N`.
pub fn omega_series_alt(n_max: usize) -> QSeries {
    let mut out = QSeries { coefficients: vec![BigInt::zero(); n_max + 1] };
    let mut denom = QSeries::one(n_max);
    for n in 0..=n_max {
        denom.div_binomial(2 * n + 1, 1);
        out.add_shifted(&denom, n);
    }
    out
}

/// `f(q) = Σ_n q^{n²} / ∏_{j=1}^n (1 + q^j)²` through `q^N`.
pub fn f_series(n_max: usize) -> QSeries {
    let mut out = QSeries { coefficients: vec![BigInt::zero(); n_max + 1] };
    let mut denom = QSeries::one(n_max);
    let mut n = 0usize;
    while n * n <= n_max {
        if n > 0 {
            denom.div_binomial(n, -1);
            denom.div_binomial(n, -1);
        }
        out.add_shifted(&denom, n * n);
        n += 1;
    }
    out
}

/// The Kronecker symbol `(12/x)`.
pub fn chi12(x: i64) -> i32 {
    match x.rem_euclid(12) {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// Residues `x mod 24k` with `x² ≡ 1 − 24n` and `χ_12(x) ≠ 0`.
fn admissible(k: u64, n: i64) -> Vec<(u64, i32)> {
    let m = 24 * k as i128;
    let target = (1 - 24 * n as i128).rem_euclid(m);
    (0..m as u64)
        .filter(|&x| (x as i128 * x as i128) % m == target)
        .filter_map(|x| match chi12(x as i64) {
            0 => None,
            c => Some((x, c)),
        })
        .collect()
}

/// `A_k(n)` in double precision as `(re, im)`.
pub fn a_kn(k: u64, n: i64) -> Result<(f64, f64)> {
    if k == 0 {
        return invalid("A_k(n) needs k ≥ 1");
    }
    let scale = 0.5 * (k as f64 / 12.0).sqrt();
    let (mut re, mut im) = (0.0, 0.0);
    for (x, c) in admissible(k, n) {
        let t = 2.0 * std::f64::consts::PI * x as f64 / (12.0 * k as f64);
        re += c as f64 * t.cos();
        im += c as f64 * t.sin();
    }
    Ok((scale * re, scale * im))
}

const RM: RoundingMode = RoundingMode::ToEven;

struct Ctx {
    p: usize,
    cc: Consts,
    pi: BigFloat,
}

impl Ctx {
    fn new(p: usize) -> Result<Self> {
        let mut cc = Consts::new().map_err(|e| crate::error::Error::Numeric(format!("{e:?}")))?;
        let pi = cc.pi(p, RM);
        Ok(Ctx { p, cc, pi })
    }

    fn int(&self, i: i64) -> BigFloat {
        BigFloat::from_i64(i, self.p)
    }

    fn a_kn(&mut self, k: u64, n: i64) -> BigFloat {
        let p = self.p;
        let two_pi = self.pi.mul(&self.int(2), p, RM);
        let den = self.int(12 * k as i64);
        let mut acc = self.int(0);
        for (x, c) in admissible(k, n) {
            let t = two_pi.mul(&self.int(x as i64), p, RM).div(&den, p, RM);
            let cos = t.cos(p, RM, &mut self.cc);
            acc = if c > 0 { acc.add(&cos, p, RM) } else { acc.sub(&cos, p, RM) };
        }
        let scale = self.int(k as i64).div(&self.int(12), p, RM).sqrt(p, RM).div(&self.int(2), p, RM);
        acc.mul(&scale, p, RM)
    }
}

/// Nearest integer to a finite float.
fn to_bigint(x: &BigFloat) -> Option<BigInt> {
    let r = x.add(&BigFloat::from_f64(0.5, 64), x.precision()?.max(64), RM).floor();
    if r.is_zero() {
        return Some(BigInt::zero());
    }
    let (words, _, sign, e, _) = r.as_raw_parts()?;
    let mut m = BigInt::zero();
    for w in words.iter().rev() {
        m = (m << 64) + BigInt::from(*w);
    }
    let shift = e as i64 - 64 * words.len() as i64;
    let m = if shift >= 0 { m << shift as usize } else { m >> (-shift) as usize };
    Some(if sign == Sign::Neg { -m } else { m })
}

/// A partial sum of the exact formula for `ω(n)`.
#[derive(Clone, Debug)]
pub struct GarthwaiteSum {
    pub n: u64,
    pub k_max: u64,
    pub nearest: BigInt,
    /// `|S − nearest|`, to double precision
    pub distance: f64,
    /// `S` in decimal, about 38 significant digits
    pub decimal: String,
}

/// Working precision in bits, comfortably over 50 decimal digits.
pub const GARTHWAITE_BITS: usize = 256;

pub fn garthwaite_sum(n: u64, k_max: u64) -> Result<GarthwaiteSum> {
    if k_max == 0 {
        return invalid("k_max must be ≥ 1");
    }
    let mut c = Ctx::new(GARTHWAITE_BITS)?;
    let p = c.p;
    let m = c.int(3 * n as i64 + 2);
    let root = m.sqrt(p, RM);
    let mut acc = c.int(0);
    for k in 1..=k_max as i64 {
        let kk = (2 * k - 1) as u64;
        let arg = n as i64 * k - 3 * k * (k - 1) / 2;
        let a = c.a_kn(kk, arg);
        if a.is_zero() {
            continue;
        }
        // I_{1/2}(z) = √(2/(πz)) sinh z
        let z = c.pi.mul(&root, p, RM).div(&c.int(6 * k - 3), p, RM);
        let bessel = c.int(2).div(&c.pi.mul(&z, p, RM), p, RM).sqrt(p, RM).mul(&z.sinh(p, RM, &mut c.cc), p, RM);
        let mut term = a.mul(&bessel, p, RM).div(&c.int(kk as i64), p, RM);
        if k % 2 == 0 {
            term = term.neg();
        }
        acc = acc.add(&term, p, RM);
    }
    // π/(2√2) · (3n+2)^{−1/4}
    let pref = c.pi.div(&c.int(8).sqrt(p, RM), p, RM).div(&root.sqrt(p, RM), p, RM);
    let s = acc.mul(&pref, p, RM);
    if s.is_nan() || s.is_inf() {
        return numeric("Garthwaite sum is not finite");
    }
    let nearest = to_bigint(&s).ok_or_else(|| crate::error::Error::Numeric("rounding failed".into()))?;
    let near_f = BigFloat::parse(&nearest.to_string(), astro_float::Radix::Dec, p, RM, &mut c.cc);
    let diff = s.sub(&near_f, p, RM).abs();
    let distance = diff
        .format(astro_float::Radix::Dec, RM, &mut c.cc)
        .ok()
        .and_then(|t| t.parse::<f64>().ok())
        .unwrap_or(f64::NAN);
    let mut shown = s.clone();
    shown.set_precision(128, RM).map_err(|e| crate::error::Error::Numeric(format!("{e:?}")))?;
    let decimal = shown.format(astro_float::Radix::Dec, RM, &mut c.cc).unwrap_or_default();
    Ok(GarthwaiteSum { n, k_max, nearest, distance, decimal })
}

/// `ω(n)` from the first `k_max` terms of Garthwaite's series; fails when the
/// partial sum is 0.25 or more away from an integer.
pub fn garthwaite_omega(n: u64, k_max: u64) -> Result<BigInt> {
    let s = garthwaite_sum(n, k_max)?;
    if s.distance.is_nan() || s.distance >= 0.25 {
        return numeric(format!("ω({n}) partial sum {} is not near an integer", s.decimal));
    }
    Ok(s.nearest)
}

/// `ω_g^0 … ω_g^{g−2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaProfile {
    pub g: u64,
    pub components: Vec<BigInt>,
}

impl OmegaProfile {
    pub fn total(&self) -> BigInt {
        self.components.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct OmegaDecomposition {
    pub p: Vec<BigInt>,
    pub a: Vec<BigInt>,
    pub profiles: Vec<OmegaProfile>,
}

fn at(v: &[BigInt], i: i64) -> BigInt {
    if i <= 0 { BigInt::zero() } else { v[i as usize].clone() }
}

/// `p_ω(0..=n)` and `a_ω(0..=n)` from the two middle-column identities.
pub fn omega_pa(n: usize) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let m_max = n + 3;
    let w = omega_series(2 * m_max + 1);
    let omega_g = |g: i64| w.coeff((g - 2) as usize).clone();
    let mut p: Vec<BigInt> = Vec::new();
    let mut a: Vec<BigInt> = vec![BigInt::zero()];
    for m in 1..=m_max as i64 {
        // g = 2m: p(m−1) − a(m−3) = ω_{2m} − 2 Σ_{i<m−1} (p(i) − a(3i−2m))
        let mut r1 = omega_g(2 * m);
        for i in 0..m - 1 {
            r1 -= 2 * (&p[i as usize] - at(&a, 3 * i - 2 * m));
        }
        // g = 2m+1: p(m−1) − a(m−4) = ω_{2m+1}/2 − Σ_{i<m−1} (p(i) − a(3i−2m−1))
        let (half, rem) = omega_g(2 * m + 1).div_rem(&BigInt::from(2));
        if !rem.is_zero() {
            return numeric(format!("ω_{} is odd", 2 * m + 1));
        }
        let mut r2 = half;
        for i in 0..m - 1 {
            r2 -= &p[i as usize] - at(&a, 3 * i - 2 * m - 1);
        }
        let a_m3 = at(&a, m - 4) + &r2 - &r1;
        if m - 3 <= 0 {
            if !a_m3.is_zero() {
                return numeric(format!("a_ω({}) must vanish", m - 3));
            }
        } else {
            a.push(a_m3.clone());
        }
        p.push(r1 + at(&a, m - 3));
    }
    p.truncate(n + 1);
    a.truncate(n + 1);
    Ok((p, a))
}

/// `ω_g^k` for one genus from the sequences.
pub fn omega_profile(g: u64, p: &[BigInt], a: &[BigInt]) -> Result<OmegaProfile> {
    if g < 2 {
        return invalid("profile needs g ≥ 2");
    }
    let top = g - 2;
    if p.len() as u64 <= top / 2 || (a.len() as u64) <= top / 2 {
        return invalid("sequences too short for this genus");
    }
    let half: Vec<BigInt> = (0..=top / 2).map(|k| &p[k as usize] - at(a, 3 * k as i64 - g as i64)).collect();
    let components = (0..=top).map(|k| half[k.min(top - k) as usize].clone()).collect();
    Ok(OmegaProfile { g, components })
}

pub fn omega_decomposition(g_max: u64) -> Result<OmegaDecomposition> {
    if g_max < 2 {
        return invalid("decomposition needs G ≥ 2");
    }
    let (p, a) = omega_pa(g_max as usize)?;
    let w = omega_series(g_max as usize);
    let mut profiles = Vec::new();
    for g in 2..=g_max {
        let prof = omega_profile(g, &p, &a)?;
        if &prof.total() != w.coeff((g - 2) as usize) {
            return numeric(format!("profile of ω_{g} does not sum to ω({})", g - 2));
        }
        profiles.push(prof);
    }
    Ok(OmegaDecomposition { p, a, profiles })
}

#[derive(Clone, Debug)]
pub struct GenusComparison {
    pub g: u64,
    pub rank_profile: Vec<usize>,
    pub omega_profile: Vec<BigInt>,
}

impl GenusComparison {
    pub fn r_g(&self) -> usize {
        self.rank_profile.iter().sum()
    }

    pub fn omega_g(&self) -> BigInt {
        self.omega_profile.iter().sum()
    }

    pub fn profiles_equal(&self) -> bool {
        self.rank_profile.iter().zip(&self.omega_profile).all(|(r, w)| BigInt::from(*r) == *w)
    }

    /// `k` with `R_g^k < ω_g^k`.
    pub fn violations(&self) -> Vec<usize> {
        (0..self.rank_profile.len()).filter(|&k| BigInt::from(self.rank_profile[k]) < self.omega_profile[k]).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub genera: Vec<GenusComparison>,
    pub p: Vec<BigInt>,
    pub p_omega: Vec<BigInt>,
    pub a_omega: Vec<BigInt>,
    /// `a(n)` read off `R_g^k = p(k) − a(3k−g)`; every genus giving a reading is kept
    pub a_read: BTreeMap<i64, Vec<BigInt>>,
}

impl ConjectureReport {
    pub fn rank_violations(&self) -> Vec<u64> {
        self.genera.iter().filter(|c| BigInt::from(c.r_g()) < c.omega_g()).map(|c| c.g).collect()
    }

    pub fn partition_violations(&self) -> Vec<usize> {
        (0..self.p_omega.len()).filter(|&n| self.p[n] < self.p_omega[n]).collect()
    }

    /// `n` where a consistent `a(n)` exceeds `a_ω(n)`.
    pub fn a_violations(&self) -> Vec<i64> {
        self.a_read
            .iter()
            .filter(|(n, v)| {
                let n = **n as usize;
                n < self.a_omega.len() && v.iter().any(|x| x > &self.a_omega[n])
            })
            .map(|(n, _)| *n)
            .collect()
    }

    /// The first genus where the two profiles differ.
    pub fn first_difference(&self) -> Option<(u64, usize)> {
        self.genera.iter().find_map(|c| {
            (0..c.rank_profile.len()).find(|&k| BigInt::from(c.rank_profile[k]) != c.omega_profile[k]).map(|k| (c.g, k))
        })
    }
}

pub fn conjecture_report(g_max: u64) -> Result<ConjectureReport> {
    let dec = omega_decomposition(g_max)?;
    let p = partition_counts(dec.p.len());
    let mut genera = Vec::new();
    let mut a_read: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
    for prof in &dec.profiles {
        let g = prof.g;
        let ranks = rank_profile(g as i64)?;
        for k in 0..=(g - 2) / 2 {
            let n = 3 * k as i64 - g as i64;
            if n > 0 {
                a_read.entry(n).or_default().push(&p[k as usize] - BigInt::from(ranks[k as usize]));
            }
        }
        genera.push(GenusComparison { g, rank_profile: ranks, omega_profile: prof.components.clone() });
    }
    let p = p[..dec.p.len()].to_vec();
    Ok(ConjectureReport { genera, p, p_omega: dec.p, a_omega: dec.a, a_read })
}

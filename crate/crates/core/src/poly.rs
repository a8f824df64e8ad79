//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, Rational};

/// Polynomial in `nvars` variables; exponent vectors have length `nvars`,
/// and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SymPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SymPoly {
    pub fn zero(nvars: usize) -> Self {
        SymPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = SymPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        SymPoly::constant(nvars, Rational::one())
    }

    /// The variable `x_i`, counting from 0.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = SymPoly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = SymPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// `Σ_{i ∈ subset} x_i`.
    pub fn linear_sum(nvars: usize, subset: &[usize]) -> Self {
        let mut p = SymPoly::zero(nvars);
        for &i in subset {
            p = &p + &SymPoly::var(nvars, i);
        }
        p
    }

    /// `Σ_i x_i^k` over all variables.
    pub fn power_sum(nvars: usize, k: u32) -> Self {
        let mut p = SymPoly::zero(nvars);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = k;
            p.add_term(e, Rational::one());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        let mut remove = false;
        {
            let e = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                remove = true;
            }
        }
        if remove {
            self.terms.remove(&exps);
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero(self.nvars);
        }
        SymPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SymPoly {
        let mut acc = SymPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Total degrees present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == degree)
    }

    /// Degree-`d` homogeneous component.
    pub fn component(&self, degree: u32) -> SymPoly {
        SymPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop every term of total degree above `cap`.
    pub fn truncate(&self, cap: u32) -> SymPoly {
        SymPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= cap)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Invariant under every permutation of the variables. Checking
    /// adjacent transpositions suffices.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..self.nvars).collect();
            perm.swap(i, i + 1);
            self.permute(&perm) == *self
        })
    }

    /// Variable `i` of `self` becomes variable `perm[i]` of the result.
    pub fn permute(&self, perm: &[usize]) -> SymPoly {
        self.embed(self.nvars, perm)
    }

    /// Place into `nvars` variables, sending variable `i` to `slots[i]`.
    pub fn embed(&self, nvars: usize, slots: &[usize]) -> SymPoly {
        assert_eq!(slots.len(), self.nvars);
        let mut out = SymPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[slots[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Substitute `x_i → -x_i`.
    pub fn negate_var(&self, i: usize) -> SymPoly {
        SymPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), if e[i] % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor`; fails if the remainder is nonzero.
    /// Uses lexicographic division, which for a single divisor leaves zero
    /// remainder exactly when the divisor divides.
    pub fn div_exact(&self, divisor: &SymPoly) -> Result<SymPoly> {
        let (dl, dc) = divisor
            .leading()
            .ok_or_else(|| Error::Invalid("division by zero polynomial".into()))?;
        let (dl, dc) = (dl.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quo = SymPoly::zero(self.nvars);
        while let Some((e, c)) = rem.leading() {
            if e.iter().zip(&dl).any(|(a, b)| a < b) {
                return Err(Error::Numeric("polynomial division left a remainder".into()));
            }
            let qe: Vec<u32> = e.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let qc = c / &dc;
            let t = SymPoly::monomial(qe, qc);
            rem = &rem - &(&t * divisor);
            quo = &quo + &t;
        }
        Ok(quo)
    }
}

impl std::ops::Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = SymPoly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            if mono.is_empty() {
                parts.push(fmt_rational(c));
            } else {
                parts.push(format!("{}*{}", fmt_rational(c), mono.join("*")));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rint;

    #[test]
    fn exact_division_by_linear_form() {
        let s = SymPoly::linear_sum(3, &[0, 1, 2]);
        let f = &SymPoly::power_sum(3, 2) + &SymPoly::var(3, 1);
        let p = &f * &s;
        assert_eq!(p.div_exact(&s).unwrap(), f);
        let bad = SymPoly::var(3, 0);
        assert!(bad.div_exact(&s).is_err());
    }

    #[test]
    fn delta_identity_three_variables() {
        // (x+y)(y+z)(z+x) = ((x+y+z)^3 - (x^3+y^3+z^3))/3
        let x = SymPoly::var(3, 0);
        let y = SymPoly::var(3, 1);
        let z = SymPoly::var(3, 2);
        let lhs = &(&(&x + &y) * &(&y + &z)) * &(&z + &x);
        let rhs = (&SymPoly::linear_sum(3, &[0, 1, 2]).pow(3) - &SymPoly::power_sum(3, 3))
            .scale(&(rint(1) / rint(3)));
        assert_eq!(lhs, rhs);
        assert!(lhs.is_symmetric());
        assert!(lhs.is_homogeneous(3));
    }
}

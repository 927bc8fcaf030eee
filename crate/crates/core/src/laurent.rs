//! Exact Laurent polynomials in `q` with half-integer exponents.
//!
//! Exponents are stored doubled, so `q^{1/2}` has key `1` and `q^{-1}` has key
//! `-2`. Coefficients live in any [`Coefficient`] ring; all arithmetic is
//! checked and reports overflow instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("coefficient overflow")]
    Overflow,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division: nonzero remainder")]
    InexactDivision,
    #[error("half-integer exponent q^{0}/2 has no evaluation without a chosen square root")]
    NoSquareRoot(i64),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Laurent polynomial in `q^{1/2}` with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymLaurent<C> {
    // doubled exponent -> nonzero coefficient
    terms: BTreeMap<i64, C>,
}

impl<C: Coefficient> Default for SymLaurent<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> SymLaurent<C> {
    pub fn zero() -> Self {
        SymLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    /// `coeff * q^{doubled_exp / 2}`.
    pub fn monomial(coeff: C, doubled_exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(doubled_exp, coeff);
        }
        SymLaurent { terms }
    }

    pub fn constant(coeff: C) -> Self {
        Self::monomial(coeff, 0)
    }

    /// Builds from `(doubled_exp, coeff)` pairs, summing repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(iter: I) -> Result<Self, LaurentError> {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in strictly decreasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.terms.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `q^{doubled_exp / 2}`.
    pub fn coeff(&self, doubled_exp: i64) -> C {
        self.terms.get(&doubled_exp).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the integer power `q^exp`.
    pub fn coeff_int(&self, exp: i64) -> C {
        self.coeff(2 * exp)
    }

    /// Largest doubled exponent, `None` for the zero polynomial.
    pub fn top_doubled(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn bottom_doubled(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Degree as an exact half-integer, returned doubled.
    pub fn degree_doubled(&self) -> Option<i64> {
        self.top_doubled()
    }

    /// `coeff(e) == coeff(-e)` for every exponent.
    pub fn is_palindromic(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.terms.get(&-e) == Some(c))
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Coefficients are all nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn add_term(&mut self, e: i64, c: C) -> Result<(), LaurentError> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let sum = old.checked_add(&c).ok_or(LaurentError::Overflow)?;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        let mut out = self.clone();
        out.try_add_assign(other)?;
        Ok(out)
    }

    pub fn try_add_assign(&mut self, other: &Self) -> Result<(), LaurentError> {
        for (e, c) in &other.terms {
            self.add_term(*e, c.clone())?;
        }
        Ok(())
    }

    pub fn try_neg(&self) -> Result<Self, LaurentError> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let n = C::zero().checked_sub(c).ok_or(LaurentError::Overflow)?;
            terms.insert(*e, n);
        }
        Ok(SymLaurent { terms })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let n = C::zero().checked_sub(c).ok_or(LaurentError::Overflow)?;
            out.add_term(*e, n)?;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let c = c1.checked_mul(c2).ok_or(LaurentError::Overflow)?;
                let e = e1.checked_add(*e2).ok_or(LaurentError::Overflow)?;
                out.add_term(e, c)?;
            }
        }
        Ok(out)
    }

    pub fn try_scalar_mul(&self, k: &C) -> Result<Self, LaurentError> {
        if k.is_zero() {
            return Ok(Self::zero());
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(*e, c.checked_mul(k).ok_or(LaurentError::Overflow)?);
        }
        Ok(SymLaurent { terms })
    }

    pub fn try_pow(&self, k: u32) -> Result<Self, LaurentError> {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    /// Divides every coefficient by `k`, failing unless each division is exact.
    pub fn try_div_scalar_exact(&self, k: &C) -> Result<Self, LaurentError> {
        if k.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (quo, rem) = c.div_rem(k);
            if !rem.is_zero() {
                return Err(LaurentError::InexactDivision);
            }
            terms.insert(*e, quo);
        }
        Ok(SymLaurent { terms })
    }

    /// Substitutes `q -> q^k` (for `k >= 1`).
    pub fn substitute_power(&self, k: i64) -> Result<Self, LaurentError> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(e.checked_mul(k).ok_or(LaurentError::Overflow)?, c.clone());
        }
        Ok(SymLaurent { terms })
    }

    /// Exact quotient `self / den` by long division over descending exponents.
    pub fn exact_div(&self, den: &Self) -> Result<Self, LaurentError> {
        let (den_top, den_lead) = match den.terms.iter().next_back() {
            Some((e, c)) => (*e, c.clone()),
            None => return Err(LaurentError::DivisionByZero),
        };
        let den_bottom = den.bottom_doubled().expect("nonzero");
        let Some(num_bottom) = self.bottom_doubled() else {
            return Ok(Self::zero());
        };
        let min_quotient_exp = num_bottom - den_bottom;

        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some((&top, lead)) = rem.terms.iter().next_back() {
            let shift = top - den_top;
            if shift < min_quotient_exp {
                return Err(LaurentError::InexactDivision);
            }
            let (qc, r) = lead.div_rem(&den_lead);
            if !r.is_zero() {
                return Err(LaurentError::InexactDivision);
            }
            let step = Self::monomial(qc, shift);
            rem = rem.try_sub(&step.try_mul(den)?)?;
            quotient.try_add_assign(&step)?;
        }
        Ok(quotient)
    }

    /// Coefficient of `q^{top_deg - i}`.
    pub fn codeg_coeff(&self, top_deg: i64, i: i64) -> C {
        self.coeff_int(top_deg - i)
    }

    /// Evaluates at `q = root^2`, so `q^{e/2} = root^e`.
    pub fn eval_with_root<F>(&self, root: F) -> Result<F, LaurentError>
    where
        F: num_traits::Num + Clone,
        C: Into<F>,
    {
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let term = pow_signed(root.clone(), *e)?;
            acc = acc + c.clone().into() * term;
        }
        Ok(acc)
    }

    /// Evaluates at `q`. Half-integer exponents are only allowed at `q = 1`,
    /// where the square root is taken to be 1.
    pub fn eval<F>(&self, q: F) -> Result<F, LaurentError>
    where
        F: num_traits::Num + Clone,
        C: Into<F>,
    {
        if let Some(e) = self.terms.keys().find(|e| *e % 2 != 0) {
            if q.is_one() {
                return self.eval_with_root(F::one());
            }
            return Err(LaurentError::NoSquareRoot(*e));
        }
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            acc = acc + c.clone().into() * pow_signed(q.clone(), e / 2)?;
        }
        Ok(acc)
    }

    /// The quantum integer `[n] = (q^{n/2} - q^{-n/2}) / (q^{1/2} - q^{-1/2})`.
    pub fn qint(n: i64) -> Self {
        let sign = if n < 0 { -C::one() } else { C::one() };
        let m = n.abs();
        let mut p = Self::zero();
        // exponents (m-1)/2, (m-3)/2, ..., -(m-1)/2, doubled
        let mut e = m - 1;
        while e >= -(m - 1) && m > 0 {
            p.terms.insert(e, sign.clone());
            e -= 2;
        }
        p
    }

    /// `{n} = (q^{n/2} + q^{-n/2}) / (q^{1/2} + q^{-1/2})`, exact only for odd `n`.
    pub fn qbrace(n: i64) -> Result<Self, LaurentError> {
        let num = Self::from_terms([(n, C::one()), (-n, C::one())])?;
        let den = Self::from_terms([(1, C::one()), (-1, C::one())])?;
        num.exact_div(&den)
    }

    /// `[n]^2 = [n](q)^2`.
    pub fn bracket_sq(n: i64) -> Self {
        let b = Self::qint(n);
        b.try_mul(&b).expect("small bracket squares fit")
    }

    /// `[n]_2 = [n](q^2)`.
    pub fn bracket_sub2(n: i64) -> Self {
        Self::qint(n).substitute_power(2).expect("doubled exponents fit")
    }

    /// `[w1][w2][w1+w2] / [2]`, the factor for two paired edges.
    pub fn e2_factor(w1: i64, w2: i64) -> Result<Self, LaurentError> {
        let num = Self::qint(w1).try_mul(&Self::qint(w2))?.try_mul(&Self::qint(w1 + w2))?;
        num.exact_div(&Self::qint(2))
    }
}

fn pow_signed<F: num_traits::Num + Clone>(x: F, e: i64) -> Result<F, LaurentError> {
    if e >= 0 {
        return Ok(num_traits::pow(x, e as usize));
    }
    if x.is_zero() {
        return Err(LaurentError::DivisionByZero);
    }
    Ok(F::one() / num_traits::pow(x, e.unsigned_abs() as usize))
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<C: Coefficient> std::ops::$trait for SymLaurent<C> {
            type Output = SymLaurent<C>;
            fn $method(self, rhs: Self) -> Self {
                self.$try(&rhs).expect("Laurent arithmetic overflow")
            }
        }
        impl<'a, C: Coefficient> std::ops::$trait<&'a SymLaurent<C>> for &'a SymLaurent<C> {
            type Output = SymLaurent<C>;
            fn $method(self, rhs: Self) -> SymLaurent<C> {
                self.$try(rhs).expect("Laurent arithmetic overflow")
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl<C: Coefficient> std::ops::Neg for SymLaurent<C> {
    type Output = SymLaurent<C>;
    fn neg(self) -> Self {
        self.try_neg().expect("Laurent arithmetic overflow")
    }
}

impl<C: Coefficient> Zero for SymLaurent<C> {
    fn zero() -> Self {
        SymLaurent::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coefficient> One for SymLaurent<C> {
    fn one() -> Self {
        SymLaurent::one()
    }
}

impl<C: Coefficient> std::iter::Sum for SymLaurent<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

fn fmt_exp(doubled: i64) -> String {
    if doubled % 2 == 0 {
        format!("{}", doubled / 2)
    } else {
        format!("{}/2", doubled)
    }
}

/// Canonical serialization: `1*q^1 + 10*q^0 + 1*q^-1`, decreasing exponents,
/// half-integers as `<odd>/2`, the zero polynomial as `0`.
impl<C: Coefficient> fmt::Display for SymLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}*q^{}", c, fmt_exp(e))?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for SymLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymLaurent({})", self)
    }
}

impl<C: Coefficient> FromStr for SymLaurent<C> {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || LaurentError::Parse(s.to_string());
        let mut terms = Vec::new();
        for term in s.split(" + ") {
            let (coef, exp) = term.trim().split_once("*q^").ok_or_else(bad)?;
            let c: C = coef.parse().map_err(|_| bad())?;
            let doubled = match exp.split_once('/') {
                Some((num, "2")) => {
                    let v: i64 = num.parse().map_err(|_| bad())?;
                    if v % 2 == 0 {
                        return Err(bad());
                    }
                    v
                }
                Some(_) => return Err(bad()),
                None => 2 * exp.parse::<i64>().map_err(|_| bad())?,
            };
            terms.push((doubled, c));
        }
        Self::from_terms(terms)
    }
}

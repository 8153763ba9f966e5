use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Pow, Signed, Zero};
use serde::{Serialize, Serializer};

use super::poly::write_term;
use super::{gcd_int, lcm_int, power_of_two, Assignment, BigInt, BigRational, Monomial, Poly, Symbol};
use crate::error::{Error, Result};

/// An affine form `c + sum_s k_s * s` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LinearForm {
    constant: BigRational,
    coeffs: BTreeMap<Symbol, BigRational>,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(super::rat(n))
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(s, BigRational::one());
        Self {
            constant: BigRational::zero(),
            coeffs,
        }
    }

    /// `sum_i k_i * s_i + c` from integer coefficients.
    pub fn from_ints(terms: &[(Symbol, i64)], c: i64) -> Self {
        terms.iter().fold(Self::int(c), |acc, &(s, k)| {
            acc.add(&Self::symbol(s).scale(&super::rat(k)))
        })
    }

    pub fn constant_term(&self) -> &BigRational {
        &self.constant
    }

    pub fn coefficient(&self, s: Symbol) -> BigRational {
        self.coeffs.get(&s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Symbol, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn num_terms(&self) -> usize {
        self.coeffs.len() + usize::from(!self.constant.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (s, k) in &rhs.coeffs {
            let e = out.coeffs.entry(*s).or_insert_with(BigRational::zero);
            *e += k;
            if e.is_zero() {
                out.coeffs.remove(s);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            constant: &self.constant * q,
            coeffs: self.coeffs.iter().map(|(s, k)| (*s, k * q)).collect(),
        }
    }

    pub fn eval(&self, at: &Assignment) -> Result<BigRational> {
        let mut acc = self.constant.clone();
        for (s, k) in &self.coeffs {
            let v = at
                .get(s)
                .ok_or_else(|| Error::MissingSymbol(s.to_string()))?;
            acc += k * v;
        }
        Ok(acc)
    }

    /// Replaces the assigned symbols by their values.
    pub fn substitute(&self, at: &Assignment) -> Self {
        let mut out = Self::constant(self.constant.clone());
        for (s, k) in &self.coeffs {
            match at.get(s) {
                Some(v) => out.constant += k * v,
                None => {
                    out.coeffs.insert(*s, k.clone());
                }
            }
        }
        out
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(
            std::iter::once((Monomial::one(), self.constant.clone())).chain(
                self.coeffs
                    .iter()
                    .map(|(s, k)| (Monomial::var(*s), k.clone())),
            ),
        )
    }

    /// Splits `self = content * primitive`; the primitive form has integer
    /// coefficients with gcd 1 and a positive leading coefficient (the
    /// coefficient of its first symbol). Constant forms split as `c * 1`.
    pub fn primitive(&self) -> (BigRational, LinearForm) {
        if self.is_constant() {
            return (self.constant.clone(), Self::one());
        }
        let values = || self.coeffs.values().chain(std::iter::once(&self.constant));
        let den = values().fold(BigInt::one(), |acc, c| lcm_int(&acc, c.denom()));
        let num = values().fold(BigInt::zero(), |acc, c| {
            gcd_int(&acc, &(c.numer() * (&den / c.denom())))
        });
        let mut content = BigRational::new(num, den);
        if self.coeffs.values().next().unwrap().is_negative() {
            content = -content;
        }
        (content.clone(), self.scale(&content.recip()))
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_constant() && self.primitive().0.is_one()
    }

    /// Two non-constant forms are coprime unless they are proportional.
    pub fn is_proportional(&self, other: &Self) -> bool {
        !self.is_constant() && !other.is_constant() && self.primitive().1 == other.primitive().1
    }
}

impl fmt::Display for LinearForm {
    /// `x` first, then the constant, then the remaining symbols in order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let x = self.coeffs.get(&Symbol::X);
        if let Some(k) = x {
            write_term(f, first, k, &Symbol::X, true)?;
            first = false;
        }
        if !self.constant.is_zero() {
            write_term(f, first, &self.constant, &"", false)?;
            first = false;
        }
        for (s, k) in self.coeffs.iter().filter(|(s, _)| **s != Symbol::X) {
            write_term(f, first, k, s, true)?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A rational content times a product of primitive linear forms with
/// multiplicities; constant factors are folded into the content.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorProduct {
    content: BigRational,
    factors: BTreeMap<LinearForm, u32>,
}

impl Default for FactorProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl FactorProduct {
    pub fn one() -> Self {
        Self::from_content(BigRational::one())
    }

    pub fn from_content(content: BigRational) -> Self {
        Self {
            content,
            factors: BTreeMap::new(),
        }
    }

    pub fn from_forms<'a>(forms: impl IntoIterator<Item = (&'a LinearForm, u32)>) -> Self {
        let mut out = Self::one();
        for (f, e) in forms {
            out.push(f, e);
        }
        out
    }

    /// Multiplies in `form^exp`.
    pub fn push(&mut self, form: &LinearForm, exp: u32) {
        if exp == 0 {
            return;
        }
        let (c, p) = form.primitive();
        self.content *= Pow::pow(&c, exp);
        if self.content.is_zero() {
            self.factors.clear();
            return;
        }
        if !p.is_constant() {
            *self.factors.entry(p).or_insert(0) += exp;
        }
    }

    pub fn content(&self) -> &BigRational {
        &self.content
    }

    pub fn factors(&self) -> &BTreeMap<LinearForm, u32> {
        &self.factors
    }

    pub fn multiplicity(&self, form: &LinearForm) -> u32 {
        let (_, p) = form.primitive();
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.content.is_zero()
    }

    /// Number of linear factors counted with multiplicity.
    pub fn degree(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::from_content(&self.content * &other.content);
        if out.is_zero() {
            return out;
        }
        for (f, e) in self.factors.iter().chain(&other.factors) {
            *out.factors.entry(f.clone()).or_insert(0) += e;
        }
        out
    }

    /// Factor-wise maximum of multiplicities; contents combine by integer
    /// lcm of numerators over gcd of denominators.
    pub fn lcm(&self, other: &Self) -> Self {
        let num = lcm_int(self.content.numer(), other.content.numer());
        let den = gcd_int(self.content.denom(), other.content.denom());
        let mut out = Self::from_content(BigRational::new(num, den));
        for (f, &e) in self.factors.iter().chain(&other.factors) {
            let slot = out.factors.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        out
    }

    /// `self / other` when every factor of `other` occurs in `self` with at
    /// least the same multiplicity.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let mut out = Self {
            content: &self.content / &other.content,
            factors: self.factors.clone(),
        };
        for (f, &e) in &other.factors {
            let slot = out.factors.get_mut(f)?;
            match (*slot).cmp(&e) {
                std::cmp::Ordering::Less => return None,
                std::cmp::Ordering::Equal => {
                    out.factors.remove(f);
                }
                std::cmp::Ordering::Greater => *slot -= e,
            }
        }
        Some(out)
    }

    pub fn eval(&self, at: &Assignment) -> Result<BigRational> {
        let mut acc = self.content.clone();
        for (f, &e) in &self.factors {
            acc *= Pow::pow(&f.eval(at)?, e);
        }
        Ok(acc)
    }

    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.content.clone());
        for (f, &e) in &self.factors {
            acc = &acc * &f.to_poly().pow(e);
        }
        acc
    }

    /// Human-readable multiset difference, used in mismatch reports.
    pub fn describe_difference(&self, other: &Self) -> String {
        let mut parts = Vec::new();
        if self.content != other.content {
            parts.push(format!("content {} vs {}", self.content, other.content));
        }
        let keys: std::collections::BTreeSet<_> =
            self.factors.keys().chain(other.factors.keys()).collect();
        for f in keys {
            let (a, b) = (
                self.factors.get(f).copied().unwrap_or(0),
                other.factors.get(f).copied().unwrap_or(0),
            );
            if a != b {
                parts.push(format!("({f}): {a} vs {b}"));
            }
        }
        if parts.is_empty() {
            "identical".into()
        } else {
            parts.join("; ")
        }
    }
}

fn fmt_content(c: &BigRational) -> String {
    match power_of_two(c) {
        Some(k) if k >= 2 => format!("2^{k}"),
        _ => c.to_string(),
    }
}

impl fmt::Display for FactorProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() || self.is_zero() {
            return f.write_str(&fmt_content(&self.content));
        }
        if self.content.is_one() && self.factors.len() == 1 {
            if let Some((form, 1)) = self.factors.iter().next().map(|(k, &e)| (k, e)) {
                return write!(f, "{form}");
            }
        }
        // sorted by the bare form text, parenthesised afterwards
        let mut parts: Vec<(String, u32, bool)> = self
            .factors
            .iter()
            .map(|(form, &e)| (form.to_string(), e, form.num_terms() > 1))
            .collect();
        parts.sort();
        let mut out = String::new();
        if self.content == -BigRational::one() {
            out.push('-');
        } else if !self.content.is_one() {
            out.push_str(&fmt_content(&self.content));
            out.push('*');
        }
        let body: Vec<String> = parts
            .into_iter()
            .map(|(s, e, wrap)| {
                let s = if wrap { format!("({s})") } else { s };
                if e == 1 { s } else { format!("{s}^{e}") }
            })
            .collect();
        out.push_str(&body.join("*"));
        f.write_str(&out)
    }
}

impl Serialize for FactorProduct {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    fn form(terms: &[(Symbol, i64)], c: i64) -> LinearForm {
        LinearForm::from_ints(terms, c)
    }

    #[test]
    fn rendering_puts_x_then_constant_first() {
        use Symbol::*;
        assert_eq!(form(&[(Alpha, 2)], 1).to_string(), "1+2a");
        assert_eq!(form(&[(Alpha, 2), (Beta, 1)], 0).to_string(), "2a+b");
        assert_eq!(form(&[(X, 1), (Alpha, 2), (Beta, 1)], 0).to_string(), "x+2a+b");
        assert_eq!(form(&[(Alpha, -2)], -1).to_string(), "-1-2a");
        assert_eq!(LinearForm::zero().to_string(), "0");
    }

    #[test]
    fn primitive_normalization() {
        use Symbol::*;
        let f = form(&[(Alpha, -4), (Beta, -2)], -2);
        let (c, p) = f.primitive();
        assert_eq!(c, rat(-2));
        assert_eq!(p.to_string(), "1+2a+b");
        let g = LinearForm::symbol(Beta).scale(&ratio(1, 3)).add(&LinearForm::constant(ratio(1, 2)));
        let (c, p) = g.primitive();
        assert_eq!(c, ratio(1, 6));
        assert_eq!(p.to_string(), "3+2b");
        assert!(f.is_proportional(&form(&[(Alpha, 2), (Beta, 1)], 1)));
        assert!(!f.is_proportional(&form(&[(Alpha, 2), (Beta, 1)], 0)));
    }

    #[test]
    fn product_rendering_matches_closed_form_style() {
        use Symbol::*;
        let mut z = FactorProduct::from_content(rat(8));
        z.push(&form(&[(Alpha, 2)], 1), 3);
        z.push(&form(&[(Beta, 1)], 1), 3);
        z.push(&form(&[(Alpha, 2), (Beta, 1)], 0), 1);
        assert_eq!(z.to_string(), "2^3*(1+2a)^3*(1+b)^3*(2a+b)");
        let mut w = FactorProduct::one();
        w.push(&LinearForm::int(2), 1);
        w.push(&form(&[(Beta, 2)], 2), 1);
        assert_eq!(w.to_string(), "2^2*(1+b)");
    }

    #[test]
    fn lcm_and_division() {
        use Symbol::*;
        let x1 = form(&[(X, 1)], 1);
        let a = FactorProduct::from_forms([(&x1, 1)]);
        let b = FactorProduct::from_forms([(&x1, 2)]);
        let l = a.lcm(&b);
        assert_eq!(l.multiplicity(&x1), 2);
        assert_eq!(l.checked_div(&a).unwrap(), a);
        assert!(a.checked_div(&b).is_none());
    }
}

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Pow, Signed, Zero};

use super::{gcd_int, is_integer, lcm_int, BigInt, BigRational, ExactScalar, LinearForm, Symbol};
use crate::error::{Error, Result};

/// Values for symbols, used to evaluate polynomials and forms.
pub type Assignment = BTreeMap<Symbol, BigRational>;

/// A monomial: symbols with positive exponents, sorted by symbol.
///
/// Ordered lexicographically with the first symbol as the most significant
/// variable, which is a monomial order (compatible with multiplication).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Self(vec![(s, 1)])
    }

    pub fn from_powers(mut powers: Vec<(Symbol, u32)>) -> Self {
        powers.retain(|&(_, e)| e > 0);
        powers.sort_by_key(|&(s, _)| s);
        let mut merged: Vec<(Symbol, u32)> = Vec::with_capacity(powers.len());
        for (s, e) in powers {
            match merged.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => merged.push((s, e)),
            }
        }
        Self(merged)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Symbol) -> u32 {
        self.0
            .iter()
            .find(|&&(t, _)| t == s)
            .map_or(0, |&(_, e)| e)
    }

    pub fn powers(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == s {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((s, e - f)),
                }
            } else {
                out.push((s, e));
            }
        }
        (j == other.0.len()).then_some(Self(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(s, e)), Some(&(t, f))) => {
                    if s != t {
                        // the monomial containing the higher-priority symbol is larger
                        return if s < t {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    if e != f {
                        return e.cmp(&f);
                    }
                }
            }
            i += 1;
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(<BigRational as One>::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(super::rat(n))
    }

    pub fn var(s: Symbol) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(s), <BigRational as One>::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(<BigRational as Zero>::zero)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(<BigRational as Zero>::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self
            .terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|&(s, _)| s))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if Zero::is_zero(q) {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * q))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    ///
    /// Uses leading-term division in the lexicographic order; for a single
    /// divisor the remainder vanishes exactly when `d` divides `self`.
    pub fn divide_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading_term()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            for (n, c) in &d.terms {
                rem.add_term(n.mul(&qm), -(c * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn eval(&self, at: &Assignment) -> Result<BigRational> {
        let mut acc = <BigRational as Zero>::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(s, e) in m.powers() {
                let v = at
                    .get(&s)
                    .ok_or_else(|| Error::MissingSymbol(s.to_string()))?;
                t *= Pow::pow(v, e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes values for the assigned symbols, keeping the others.
    pub fn substitute(&self, at: &Assignment) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(s, e) in m.powers() {
                match at.get(&s) {
                    Some(v) => coeff *= Pow::pow(v, e),
                    None => rest.push((s, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Splits `self = content * primitive` where `primitive` has integer
    /// coefficients with gcd 1 and a positive leading coefficient.
    /// The zero polynomial splits as `0 * 1`.
    pub fn content_primitive(&self) -> (BigRational, Poly) {
        if self.is_zero() {
            return (<BigRational as Zero>::zero(), Poly::one());
        }
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| lcm_int(&acc, c.denom()));
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| gcd_int(&acc, &(c.numer() * (&den / c.denom()))));
        let mut content = BigRational::new(num, den);
        if self.leading_term().unwrap().1.is_negative() {
            content = -content;
        }
        let primitive = self.scale(&content.recip());
        debug_assert!(primitive.terms.values().all(is_integer));
        (content, primitive)
    }

    pub fn to_linear_form(&self) -> Option<LinearForm> {
        let mut form = LinearForm::zero();
        for (m, c) in &self.terms {
            match m.powers() {
                [] => form = form.add(&LinearForm::constant(c.clone())),
                [(s, 1)] => form = form.add(&LinearForm::symbol(*s).scale(c)),
                _ => return None,
            }
        }
        Some(form)
    }
}

impl From<&LinearForm> for Poly {
    fn from(f: &LinearForm) -> Self {
        f.to_poly()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl ExactScalar for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        Poly::constant(q.clone())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.divide_exact(rhs)
    }
    fn to_rational(&self) -> Option<BigRational> {
        self.as_constant()
    }
    fn scale(&self, q: &BigRational) -> Self {
        Poly::scale(self, q)
    }
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &BigRational,
    body: &dyn fmt::Display,
    has_body: bool,
) -> fmt::Result {
    let negative = coeff.is_negative();
    if negative {
        f.write_str("-")?;
    } else if !first {
        f.write_str("+")?;
    }
    let mag = coeff.abs();
    if !has_body {
        return write!(f, "{mag}");
    }
    if One::is_one(&mag) {
        write!(f, "{body}")
    } else if is_integer(&mag) {
        write!(f, "{mag}{body}")
    } else {
        write!(f, "{mag}*{body}")
    }
}

impl fmt::Display for Poly {
    /// Canonical rendering: by increasing total degree, then by decreasing
    /// monomial order within a degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|(m, _), (n, _)| m.degree().cmp(&n.degree()).then(n.cmp(m)));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            write_term(f, i == 0, c, m, !m.is_one())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    fn a() -> Poly {
        Poly::var(Symbol::Alpha)
    }
    fn b() -> Poly {
        Poly::var(Symbol::Beta)
    }

    #[test]
    fn lex_order_prefers_earlier_symbols() {
        let ma = Monomial::var(Symbol::Alpha);
        let mb2 = Monomial::from_powers(vec![(Symbol::Beta, 2)]);
        assert!(ma > mb2);
        assert!(mb2 > Monomial::one());
        let ab = Monomial::from_powers(vec![(Symbol::Alpha, 1), (Symbol::Beta, 1)]);
        assert!(ab > ma);
    }

    #[test]
    fn arithmetic_and_rendering() {
        let p = &(&a().scale(&rat(2)) + &b()) + &Poly::one();
        assert_eq!(p.to_string(), "1+2a+b");
        let sq = p.pow(2);
        assert_eq!(sq.to_string(), "1+4a+2b+4a^2+4a*b+b^2");
        assert_eq!((&sq - &sq).to_string(), "0");
        assert_eq!((-&a()).scale(&ratio(1, 2)).to_string(), "-1/2*a");
    }

    #[test]
    fn exact_division() {
        let f = &a().scale(&rat(2)) + &b();
        let g = &Poly::one() + &a().scale(&rat(2));
        let prod = &(&f * &g) * &b();
        assert_eq!(prod.divide_exact(&f).unwrap(), &g * &b());
        assert_eq!(prod.divide_exact(&g).unwrap(), &f * &b());
        assert!(prod.divide_exact(&(&Poly::one() + &b())).is_none());
        assert!(f.divide_exact(&Poly::zero()).is_none());
    }

    #[test]
    fn content_split() {
        let p = &a().scale(&ratio(-2, 3)) + &b().scale(&ratio(4, 9));
        let (c, q) = p.content_primitive();
        assert_eq!(c, ratio(-2, 9));
        assert_eq!(q.to_string(), "3a-2b");
        assert_eq!(q.scale(&c), p);
    }

    #[test]
    fn evaluation_and_substitution() {
        let p = &(&a() * &b()) + &a().scale(&rat(3));
        let mut at = Assignment::new();
        at.insert(Symbol::Alpha, ratio(1, 2));
        assert!(p.eval(&at).is_err());
        assert_eq!(p.substitute(&at).to_string(), "3/2+1/2*b");
        at.insert(Symbol::Beta, rat(2));
        assert_eq!(p.eval(&at).unwrap(), ratio(5, 2));
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{Assignment, BigRational, ExactScalar, FactorProduct, LinearForm, Poly};
use crate::error::{Error, Result};

/// A rational function `content * numerator / prod(denominator forms)`.
///
/// The numerator has integer coefficients with gcd 1 and positive leading
/// coefficient, every denominator form is primitive and non-constant, and
/// no denominator form divides the numerator. Under these invariants the
/// representation is unique, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredRational {
    content: BigRational,
    num: Poly,
    den: BTreeMap<LinearForm, u32>,
}

impl FactoredRational {
    pub fn new(numerator: &Poly, denominator: &FactorProduct) -> Option<Self> {
        if denominator.is_zero() {
            return None;
        }
        let (c, num) = numerator.content_primitive();
        Some(
            Self {
                content: c / denominator.content(),
                num,
                den: denominator.factors().clone(),
            }
            .reduce(),
        )
    }

    pub fn from_poly(p: &Poly) -> Self {
        let (content, num) = p.content_primitive();
        Self::canonical(content, num, BTreeMap::new())
    }

    pub fn from_form(f: &LinearForm) -> Self {
        Self::from_poly(&f.to_poly())
    }

    fn canonical(content: BigRational, num: Poly, den: BTreeMap<LinearForm, u32>) -> Self {
        if Zero::is_zero(&content) {
            return Self {
                content,
                num: Poly::one(),
                den: BTreeMap::new(),
            };
        }
        Self { content, num, den }
    }

    pub fn content(&self) -> &BigRational {
        &self.content
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_forms(&self) -> &BTreeMap<LinearForm, u32> {
        &self.den
    }

    /// The denominator of the reduced form over the integers: integer
    /// content times the product of the denominator forms.
    pub fn denominator(&self) -> FactorProduct {
        let mut d = FactorProduct::from_content(BigRational::from_integer(
            self.content.denom().clone(),
        ));
        for (f, &e) in &self.den {
            d.push(f, e);
        }
        d
    }

    /// Numerator of the reduced form over the integers.
    pub fn numerator_integral(&self) -> Poly {
        self.num
            .scale(&BigRational::from_integer(self.content.numer().clone()))
    }

    /// Cancels every denominator form that divides the numerator.
    pub fn reduce(mut self) -> Self {
        if Zero::is_zero(&self.content) {
            return Self::canonical(self.content, self.num, BTreeMap::new());
        }
        let forms: Vec<LinearForm> = self.den.keys().cloned().collect();
        for f in forms {
            let divisor = f.to_poly();
            while self.den.contains_key(&f) {
                match self.num.divide_exact(&divisor) {
                    Some(q) => {
                        self.num = q;
                        let e = self.den.get_mut(&f).unwrap();
                        *e -= 1;
                        if *e == 0 {
                            self.den.remove(&f);
                        }
                    }
                    None => break,
                }
            }
        }
        let (c, num) = self.num.content_primitive();
        Self::canonical(self.content * c, num, self.den)
    }

    pub fn is_reduced(&self) -> bool {
        self.den
            .keys()
            .all(|f| self.num.divide_exact(&f.to_poly()).is_none())
    }

    pub fn eval(&self, at: &Assignment) -> Result<BigRational> {
        let mut d = <BigRational as One>::one();
        for (f, &e) in &self.den {
            let v = f.eval(at)?;
            if Zero::is_zero(&v) {
                return Err(Error::Invalid(format!("denominator form {f} vanishes")));
            }
            d *= num_traits::Pow::pow(&v, e);
        }
        Ok(&self.content * self.num.eval(at)? / d)
    }

    fn with_denominator(&self, target: &BTreeMap<LinearForm, u32>) -> Poly {
        let mut p = self.num.scale(&self.content);
        for (f, &e) in target {
            let have = self.den.get(f).copied().unwrap_or(0);
            if e > have {
                p = &p * &f.to_poly().pow(e - have);
            }
        }
        p
    }

    fn divide_by_form(&self, f: &LinearForm, exp: u32) -> Option<Self> {
        let (c, p) = f.primitive();
        if Zero::is_zero(&c) {
            return None;
        }
        let c = num_traits::Pow::pow(&c, exp);
        let mut den = self.den.clone();
        if !p.is_constant() {
            *den.entry(p).or_insert(0) += exp;
        }
        Some(Self::canonical(&self.content / c, self.num.clone(), den).reduce())
    }
}

impl ExactScalar for FactoredRational {
    fn zero() -> Self {
        Self::canonical(<BigRational as Zero>::zero(), Poly::one(), BTreeMap::new())
    }

    fn one() -> Self {
        Self::from_rational(&<BigRational as One>::one())
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::canonical(q.clone(), Poly::one(), BTreeMap::new())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.content)
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (f, &e) in &rhs.den {
            let slot = den.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        let sum = &self.with_denominator(&den) + &rhs.with_denominator(&den);
        let (c, num) = sum.content_primitive();
        Self::canonical(c, num, den).reduce()
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (f, &e) in &rhs.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        Self::canonical(&self.content * &rhs.content, &self.num * &rhs.num, den).reduce()
    }

    fn neg(&self) -> Self {
        Self {
            content: -&self.content,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// Succeeds when the divisor's numerator is a constant, a linear form,
    /// or divides this numerator exactly.
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // multiply by the divisor's denominator first
        let mut num = self.num.clone();
        for (f, &e) in &rhs.den {
            num = &num * &f.to_poly().pow(e);
        }
        let content = &self.content / &rhs.content;
        let base = Self::canonical(content, num, self.den.clone());
        if rhs.num.as_constant().is_some() {
            return Some(base.reduce());
        }
        if let Some(form) = rhs.num.to_linear_form() {
            return base.divide_by_form(&form, 1);
        }
        let q = base.num.divide_exact(&rhs.num)?;
        let (c, num) = q.content_primitive();
        Some(Self::canonical(base.content * c, num, base.den).reduce())
    }

    fn to_rational(&self) -> Option<BigRational> {
        (self.den.is_empty() && self.num.as_constant().is_some()).then(|| self.content.clone())
    }

    fn scale(&self, q: &BigRational) -> Self {
        if Zero::is_zero(q) {
            return Self::zero();
        }
        Self {
            content: &self.content * q,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }
}

impl From<&Poly> for FactoredRational {
    fn from(p: &Poly) -> Self {
        Self::from_poly(p)
    }
}

/// Numerators of `fs` over one shared denominator (the per-form maximum
/// multiplicity, content one), so that linear combinations only touch
/// polynomials.
pub fn common_denominator(fs: &[FactoredRational]) -> (Vec<Poly>, FactorProduct) {
    let mut den: BTreeMap<LinearForm, u32> = BTreeMap::new();
    for f in fs {
        for (form, &e) in &f.den {
            let slot = den.entry(form.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let nums = fs.iter().map(|f| f.with_denominator(&den)).collect();
    (nums, FactorProduct::from_forms(den.iter().map(|(f, &e)| (f, e))))
}

/// Least common multiple of the reduced denominators: per primitive form the
/// largest multiplicity, times the integer lcm of denominator contents.
pub fn lcm_denominators<'a>(fs: impl IntoIterator<Item = &'a FactoredRational>) -> FactorProduct {
    fs.into_iter()
        .fold(FactorProduct::one(), |acc, f| acc.lcm(&f.denominator()))
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.numerator_integral();
        let d = self.denominator();
        if d.degree() == 0 && One::is_one(d.content()) {
            return write!(f, "{n}");
        }
        if n.num_terms() > 1 {
            write!(f, "({n})")?;
        } else {
            write!(f, "{n}")?;
        }
        if d.degree() == 0 {
            return write!(f, "/{}", d.content());
        }
        let ds = d.to_string();
        if ds.chars().all(char::is_alphanumeric) {
            write!(f, "/{ds}")
        } else {
            write!(f, "/({ds})")
        }
    }
}

impl Serialize for FactoredRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, Symbol};
    use super::*;

    fn a() -> Poly {
        Poly::var(Symbol::Alpha)
    }
    fn b() -> Poly {
        Poly::var(Symbol::Beta)
    }
    fn lf(p: &Poly) -> LinearForm {
        p.to_linear_form().unwrap()
    }
    fn fp(forms: &[&Poly]) -> FactorProduct {
        let mut out = FactorProduct::one();
        for p in forms {
            out.push(&lf(p), 1);
        }
        out
    }

    #[test]
    fn reduce_cancels_single_factor() {
        let two_a_b = &a().scale(&rat(2)) + &b();
        let one_2a = &Poly::one() + &a().scale(&rat(2));
        let r = FactoredRational::new(&two_a_b, &fp(&[&two_a_b])).unwrap();
        assert_eq!(r, FactoredRational::one());
        let r = FactoredRational::new(&(&b() * &two_a_b), &fp(&[&one_2a, &two_a_b])).unwrap();
        assert_eq!(r.to_string(), "b/(1+2a)");
    }

    #[test]
    fn reduce_keeps_coprime_numerator() {
        // y_11 at L = 2: b((2a+b)(2a+1)+1) / ((1+b)(2a+b)(2a+1))
        let two_a_b = &a().scale(&rat(2)) + &b();
        let one_2a = &Poly::one() + &a().scale(&rat(2));
        let one_b = &Poly::one() + &b();
        let num = &b() * &(&(&two_a_b * &one_2a) + &Poly::one());
        let r = FactoredRational::new(&num, &fp(&[&one_b, &two_a_b, &one_2a])).unwrap();
        assert!(r.is_reduced());
        assert_eq!(r.denominator_forms().len(), 3);
        assert_eq!(r.numerator_integral(), num);
    }

    #[test]
    fn arithmetic_matches_evaluation() {
        let x = FactoredRational::new(&b(), &fp(&[&(&a().scale(&rat(2)) + &b())])).unwrap();
        let y = FactoredRational::new(&Poly::one(), &fp(&[&(&Poly::one() + &a().scale(&rat(2)))])).unwrap();
        let mut at = Assignment::new();
        at.insert(Symbol::Alpha, rat(3));
        at.insert(Symbol::Beta, super::super::ratio(2, 5));
        let (xv, yv) = (x.eval(&at).unwrap(), y.eval(&at).unwrap());
        assert_eq!(x.add(&y).eval(&at).unwrap(), &xv + &yv);
        assert_eq!(x.sub(&y).eval(&at).unwrap(), &xv - &yv);
        assert_eq!(x.mul(&y).eval(&at).unwrap(), &xv * &yv);
        assert_eq!(x.div_exact(&y).unwrap().eval(&at).unwrap(), &xv / &yv);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.div_exact(&x).unwrap(), FactoredRational::one());
    }

    #[test]
    fn integer_content_lands_in_denominator() {
        let f = FactoredRational::from_poly(&b()).scale(&super::super::ratio(1, 4));
        assert_eq!(f.denominator().to_string(), "2^2");
        assert_eq!(f.to_string(), "b/4");
    }

    #[test]
    fn lcm_examples() {
        let x1 = &Poly::var(Symbol::X) + &Poly::one();
        let f = FactoredRational::new(&Poly::one(), &fp(&[&x1])).unwrap();
        let g = FactoredRational::new(&Poly::one(), &fp(&[&x1, &x1])).unwrap();
        let l = lcm_denominators([&f, &g]);
        assert_eq!(l.to_string(), "(x+1)^2");

        // v_1 = (a+b, a)/(2a+b)
        let two_a_b = &a().scale(&rat(2)) + &b();
        let v0 = FactoredRational::new(&(&a() + &b()), &fp(&[&two_a_b])).unwrap();
        let v1 = FactoredRational::new(&a(), &fp(&[&two_a_b])).unwrap();
        assert_eq!(lcm_denominators([&v0, &v1]).to_string(), "2a+b");
    }
}

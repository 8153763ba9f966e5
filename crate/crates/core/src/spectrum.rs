//! Closed-form spectrum, the specialized characteristic polynomial, and
//! the exact checks that tie them to the dense generator.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::bits::BitState;
use crate::error::{Error, Result};
use crate::exact::{
    interpolate_charpoly, rank_rational, Assignment, BigRational, ExactScalar, FactorProduct, LinearForm, Matrix,
    Poly, Symbol, UniPoly,
};
use crate::operators::{build_m_general, two_symbol_assignment, Params};
use crate::transform::htilde_conjugate;

/// Scalars whose value can be read as a linear form in the symbols.
pub trait ToLinearForm {
    fn to_form(&self) -> Option<LinearForm>;
}

impl ToLinearForm for Poly {
    fn to_form(&self) -> Option<LinearForm> {
        self.to_linear_form()
    }
}

impl ToLinearForm for BigRational {
    fn to_form(&self) -> Option<LinearForm> {
        Some(LinearForm::constant(self.clone()))
    }
}

/// `lambda_b = sum_c alpha_c (-1)^{b.c}`, the eigenvalue of `A_L(alpha)`
/// on the Walsh vector `w^b`.
pub fn lambda<T: ExactScalar>(p: &Params<T>, b: BitState) -> T {
    p.alpha().iter().fold(T::zero(), |acc, (c, a)| {
        if b.dot(*c).expect("same length") == 0 {
            acc.add(a)
        } else {
            acc.sub(a)
        }
    })
}

/// `lambda*_b = 2 sum_{c : b.c = 1} alpha_c`.
pub fn lambda_star<T: ExactScalar>(p: &Params<T>, b: BitState) -> T {
    let half = p
        .alpha()
        .iter()
        .filter(|(c, _)| b.dot(**c).expect("same length") == 1)
        .fold(T::zero(), |acc, (_, a)| acc.add(a));
    half.add(&half)
}

/// The diagonal entry of the triangularized generator at `b`:
/// `lambda_{b^Δ} - beta^rev . b`.
pub fn closed_form_eigenvalue<T: ExactScalar>(p: &Params<T>, b: BitState) -> T {
    lambda(p, b.delta()).sub(&p.beta_rev_dot(b))
}

/// All `2^L` closed-form eigenvalues in value order of `b`.
pub fn eigenvalue_list<T: ExactScalar>(p: &Params<T>) -> Vec<T> {
    BitState::all(p.len()).map(|b| closed_form_eigenvalue(p, b)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub eigenvalue: LinearForm,
    pub multiplicity: u32,
    /// Smallest configuration producing this eigenvalue.
    pub witness: BitState,
}

/// Distinct eigenvalues with algebraic multiplicities, ordered by witness.
pub fn eigenvalues_closed_form<T: ExactScalar + ToLinearForm>(p: &Params<T>) -> Result<Vec<SpectrumEntry>> {
    let mut seen: BTreeMap<LinearForm, usize> = BTreeMap::new();
    let mut out: Vec<SpectrumEntry> = Vec::new();
    for b in BitState::all(p.len()) {
        let mu = closed_form_eigenvalue(p, b);
        let form = mu
            .to_form()
            .ok_or_else(|| Error::Invalid(format!("eigenvalue {mu} is not linear in the parameters")))?;
        match seen.get(&form) {
            Some(&i) => out[i].multiplicity += 1,
            None => {
                seen.insert(form.clone(), out.len());
                out.push(SpectrumEntry {
                    eigenvalue: form,
                    multiplicity: 1,
                    witness: b,
                });
            }
        }
    }
    Ok(out)
}

/// A characteristic polynomial kept as a product of linear forms in `x`
/// and the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredCharPoly(FactorProduct);

impl FactoredCharPoly {
    pub fn one() -> Self {
        Self(FactorProduct::one())
    }

    /// Multiplies by `(x - root)^mult`.
    pub fn push_root(&mut self, root: &LinearForm, mult: u32) {
        if mult > 0 {
            self.0.push(&LinearForm::symbol(Symbol::X).sub(root), mult);
        }
    }

    pub fn from_spectrum(entries: &[SpectrumEntry]) -> Self {
        let mut p = Self::one();
        for e in entries {
            p.push_root(&e.eigenvalue, e.multiplicity);
        }
        p
    }

    pub fn product(&self) -> &FactorProduct {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.degree()
    }

    pub fn distinct_factors(&self) -> usize {
        self.0.factors().len()
    }

    /// Multiplicity of the root `mu`.
    pub fn multiplicity(&self, root: &LinearForm) -> u32 {
        let (_, f) = LinearForm::symbol(Symbol::X).sub(root).primitive();
        self.0.multiplicity(&f)
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        self.0.checked_div(&other.0).map(Self)
    }

    pub fn substitute(&self, at: &Assignment) -> Self {
        let mut out = FactorProduct::from_content(self.0.content().clone());
        for (f, &e) in self.0.factors() {
            out.push(&f.substitute(at), e);
        }
        Self(out)
    }

    /// Expands to a polynomial in `x` once every other symbol has a value.
    pub fn to_unipoly(&self, at: &Assignment) -> Result<UniPoly<BigRational>> {
        let x = LinearForm::symbol(Symbol::X);
        let mut acc = UniPoly::constant(self.0.content().clone());
        for (f, &e) in self.0.factors() {
            let k = f.coefficient(Symbol::X);
            let rest = f.sub(&x.scale(&k)).eval(at)?;
            acc = acc.mul(&UniPoly::from_coeffs(vec![rest, k]).pow(e));
        }
        Ok(acc)
    }
}

impl fmt::Display for FactoredCharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for FactoredCharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn two_symbol(a: i64, b: i64, c: i64) -> LinearForm {
    LinearForm::from_ints(&[(Symbol::Alpha, a), (Symbol::Beta, b)], c)
}

/// `A_L(x + shift) = prod_k (x + shift + 2k)^{C(L-1, 2k)}` and the odd
/// family `B_L`, pushed onto `p`.
fn push_family(p: &mut FactoredCharPoly, len: usize, shift: &LinearForm, odd: bool) {
    let n = len as u64 - 1;
    for m in (if odd { 1 } else { 0 }..=n).step_by(2) {
        let root = shift.add(&LinearForm::int(m as i64)).neg();
        p.push_root(&root, binomial(n, m) as u32);
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 {
        return Err(Error::Invalid("lattice size must be at least 1".into()));
    }
    BitState::new(len, 0).map(|_| ())
}

/// `P_L(x) = A_L(x) A_L(x+2a+b) B_L(x+b) B_L(x+2a)` in the symbols `a`, `b`.
pub fn charpoly_specialized(len: usize) -> Result<FactoredCharPoly> {
    check_len(len)?;
    let mut p = FactoredCharPoly::one();
    push_family(&mut p, len, &two_symbol(0, 0, 0), false);
    push_family(&mut p, len, &two_symbol(2, 1, 0), false);
    push_family(&mut p, len, &two_symbol(0, 1, 0), true);
    push_family(&mut p, len, &two_symbol(2, 0, 0), true);
    Ok(p)
}

/// The same polynomial assembled from the four weight/first-bit classes
/// of configurations, each counted by a binomial coefficient.
pub fn charpoly_by_classification(len: usize) -> Result<FactoredCharPoly> {
    check_len(len)?;
    let n = len as u64 - 1;
    let mut p = FactoredCharPoly::one();
    for w in 0..=len as u64 {
        let odd = w % 2 == 1;
        for b1 in [0u64, 1] {
            // configurations of weight w with the given first bit
            let count = if b1 == 1 {
                if w == 0 { 0 } else { binomial(n, w - 1) }
            } else {
                binomial(n, w)
            };
            if count == 0 {
                continue;
            }
            let eig = two_symbol(
                if odd { -2 } else { 0 },
                -(b1 as i64),
                -((w - b1) as i64),
            );
            p.push_root(&eig, count as u32);
        }
    }
    Ok(p)
}

/// The same polynomial read off the closed-form spectrum.
pub fn charpoly_from_closed_form(len: usize) -> Result<FactoredCharPoly> {
    let p = Params::<Poly>::symbolic_specialized(len)?;
    Ok(FactoredCharPoly::from_spectrum(&eigenvalues_closed_form(&p)?))
}

/// `P_{L+1}(x) / P_L(x) = B_L(x+1) B_L(x+2a+b+1) A_L(x+b+1) A_L(x+2a+1)`.
pub fn charpoly_ratio(len: usize) -> Result<FactoredCharPoly> {
    check_len(len)?;
    let mut p = FactoredCharPoly::one();
    push_family(&mut p, len, &two_symbol(0, 0, 1), true);
    push_family(&mut p, len, &two_symbol(2, 1, 1), true);
    push_family(&mut p, len, &two_symbol(0, 1, 1), false);
    push_family(&mut p, len, &two_symbol(2, 0, 1), false);
    Ok(p)
}

/// Outcome of comparing the triangularized generator with the closed form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumCheck {
    pub len: usize,
    pub lower_triangular: bool,
    /// First nonzero entry above the diagonal, as (row, col).
    pub first_above_diagonal: Option<(usize, usize)>,
    pub diagonal_matches: bool,
    /// First configuration whose diagonal entry differs from the closed form.
    pub first_diagonal_mismatch: Option<BitState>,
    pub trace_matches: bool,
    /// Present when the characteristic polynomial was interpolated.
    pub charpoly_matches: Option<bool>,
}

impl SpectrumCheck {
    pub fn passed(&self) -> bool {
        self.lower_triangular && self.diagonal_matches && self.trace_matches && self.charpoly_matches != Some(false)
    }
}

fn triangular_check<T: ExactScalar>(p: &Params<T>) -> Result<(SpectrumCheck, Matrix<T>)> {
    let m = build_m_general(p)?;
    let c = htilde_conjugate(&m)?;
    let closed = eigenvalue_list(p);
    let diag = c.diagonal();
    let first_diagonal_mismatch = BitState::all(p.len()).find(|b| diag[b.index()] != closed[b.index()]);
    let trace = closed.iter().fold(T::zero(), |acc, x| acc.add(x));
    let check = SpectrumCheck {
        len: p.len(),
        lower_triangular: c.is_lower_triangular(),
        first_above_diagonal: c.first_above_diagonal(),
        diagonal_matches: first_diagonal_mismatch.is_none(),
        first_diagonal_mismatch,
        trace_matches: trace == m.trace(),
        charpoly_matches: None,
    };
    Ok((check, m))
}

/// Triangularity, diagonal and trace checks with symbolic parameters.
pub fn verify_spectrum_symbolic(p: &Params<Poly>) -> Result<SpectrumCheck> {
    Ok(triangular_check(p)?.0)
}

/// As [`verify_spectrum_symbolic`], plus (optionally) the interpolated
/// characteristic polynomial against the product of closed-form roots.
pub fn verify_spectrum(p: &Params<BigRational>, interpolate: bool) -> Result<SpectrumCheck> {
    let (mut check, m) = triangular_check(p)?;
    if interpolate {
        let roots = eigenvalue_list(p);
        let expected = UniPoly::from_roots(roots.iter());
        check.charpoly_matches = Some(interpolate_charpoly(&m) == expected);
    }
    Ok(check)
}

/// Interpolated characteristic polynomial of the specialized generator
/// against the expansion of `P_L(x)` at the same point.
pub fn verify_charpoly_at(len: usize, alpha: &BigRational, beta: &BigRational) -> Result<bool> {
    let m = build_m_general(&Params::specialized(len, alpha.clone(), beta.clone())?)?;
    let expected = charpoly_specialized(len)?.to_unipoly(&two_symbol_assignment(alpha, beta))?;
    Ok(interpolate_charpoly(&m) == expected)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityEntry {
    pub eigenvalue: String,
    pub alg_mult: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geo_mult: Option<u32>,
    pub witness: BitState,
}

/// Largest size for the exact-rank probe.
pub const MAX_RANK_LEN: usize = 6;

/// For each distinct eigenvalue `mu` of the specialized generator at a
/// rational point: algebraic multiplicity and `2^L - rank(M - mu I)`.
pub fn geometric_multiplicities(len: usize, alpha: &BigRational, beta: &BigRational) -> Result<Vec<MultiplicityEntry>> {
    if len > MAX_RANK_LEN {
        return Err(Error::Infeasible {
            what: "geometric multiplicities".into(),
            len,
            max: MAX_RANK_LEN,
        });
    }
    let p = Params::specialized(len, alpha.clone(), beta.clone())?;
    let m = build_m_general(&p)?;
    let n = m.rows();
    let entries = eigenvalues_closed_form(&p)?;
    let compute = |e: &SpectrumEntry| {
        let mu = e.eigenvalue.constant_term().clone();
        let shifted = Matrix::from_fn(n, n, |r, c| {
            if r == c {
                m.get(r, c) - &mu
            } else {
                m.get(r, c).clone()
            }
        });
        MultiplicityEntry {
            eigenvalue: mu.to_string(),
            alg_mult: e.multiplicity,
            geo_mult: Some((n - rank_rational(&shifted)) as u32),
            witness: e.witness,
        }
    };
    #[cfg(feature = "parallel")]
    let out = {
        use rayon::prelude::*;
        entries.par_iter().map(compute).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let out = entries.iter().map(compute).collect();
    Ok(out)
}

/// Spectrum document: `{L, parameters, entries}`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    #[serde(rename = "L")]
    pub len: usize,
    pub parameters: BTreeMap<String, String>,
    pub entries: Vec<MultiplicityEntry>,
}

/// Specialized spectrum at a rational point, optionally with geometric
/// multiplicities.
pub fn spectrum_report(len: usize, alpha: &BigRational, beta: &BigRational, geometric: bool) -> Result<SpectrumReport> {
    let entries = if geometric {
        geometric_multiplicities(len, alpha, beta)?
    } else {
        let p = Params::specialized(len, alpha.clone(), beta.clone())?;
        eigenvalues_closed_form(&p)?
            .into_iter()
            .map(|e| MultiplicityEntry {
                eigenvalue: e.eigenvalue.to_string(),
                alg_mult: e.multiplicity,
                geo_mult: None,
                witness: e.witness,
            })
            .collect()
    };
    Ok(SpectrumReport {
        len,
        parameters: [("alpha".into(), alpha.to_string()), ("beta".into(), beta.to_string())].into(),
        entries,
    })
}

/// Symbolic two-parameter spectrum.
pub fn spectrum_report_symbolic(len: usize) -> Result<SpectrumReport> {
    let p = Params::<Poly>::symbolic_specialized(len)?;
    let entries = eigenvalues_closed_form(&p)?
        .into_iter()
        .map(|e| MultiplicityEntry {
            eigenvalue: e.eigenvalue.to_string(),
            alg_mult: e.multiplicity,
            geo_mult: None,
            witness: e.witness,
        })
        .collect();
    Ok(SpectrumReport {
        len,
        parameters: [("alpha".into(), "a".into()), ("beta".into(), "b".into())].into(),
        entries,
    })
}

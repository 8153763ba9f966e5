//! Steady state through the triangular system in the rearranged Walsh
//! basis, and the partition function as the lcm of its denominators.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::BitState;
use crate::error::{Error, Result};
use crate::exact::{common_denominator, lcm_denominators, pow2, BigRational, ExactScalar, FactorProduct, FactoredRational, LinearForm, Poly};
use crate::operators::{apply_m, Params};
use crate::spectrum::{binomial, lambda_star, ToLinearForm};
use crate::transform::{hdelta_apply, hdelta_apply_normalized};

/// Solution of `(lambda*_{b^Δ} + beta^rev.b) y_b = sum_{j: b_j=1} beta_{L-j+1} y_{psi_j b}`
/// with `y_{00..0} = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularSolution<T> {
    pub len: usize,
    /// Indexed by value order of `b`.
    pub y: Vec<T>,
    /// The pivot `lambda*_{b^Δ} + beta^rev.b` at each `b` (zero at `b = 0`).
    pub pivots: Vec<T>,
}

/// `lambda*_{b^Δ} + beta^rev . b`.
pub fn pivot<T: ExactScalar>(p: &Params<T>, b: BitState) -> T {
    lambda_star(p, b.delta()).add(&p.beta_rev_dot(b))
}

pub fn solve_y<T: ExactScalar>(p: &Params<T>) -> Result<TriangularSolution<T>> {
    let len = p.len();
    let mut y = Vec::with_capacity(p.dim());
    let mut pivots = Vec::with_capacity(p.dim());
    y.push(T::one());
    pivots.push(T::zero());
    for b in BitState::all(len).skip(1) {
        let rhs = (1..=len)
            .filter(|&j| b.bit(j) == 1)
            .fold(T::zero(), |acc, j| {
                // psi_j lowers b, so y at that index is already known
                let lower = b.psi(j).expect("site in range");
                acc.add(&p.beta(len - j + 1).mul(&y[lower.index()]))
            });
        let piv = pivot(p, b);
        let yb = if piv.is_zero() {
            None
        } else {
            rhs.div_exact(&piv)
        }
        .ok_or(Error::Resonance { witness: b })?;
        y.push(yb);
        pivots.push(piv);
    }
    Ok(TriangularSolution { len, y, pivots })
}

/// `x = 2^{-L} Ĥ_Δ y`; sums to one because only `y_{00..0}` survives the sum.
pub fn steady_state<T: ExactScalar>(p: &Params<T>) -> Result<Vec<T>> {
    hdelta_apply_normalized(&solve_y(p)?.y)
}

/// Rational steady state as integer numerators over one scale: `x = v / s`.
/// Large sizes stay cheap because the transform and any follow-up checks
/// never add fractions with unrelated denominators.
pub fn steady_state_scaled(p: &Params<BigRational>) -> Result<(Vec<BigRational>, BigRational)> {
    use num_integer::Integer;
    let y = solve_y(p)?.y;
    let den = y.iter().fold(num_bigint::BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let d = BigRational::from_integer(den);
    let nums: Vec<BigRational> = y.iter().map(|v| v * &d).collect();
    Ok((hdelta_apply(&nums)?, d * pow2(p.len() as i64)))
}

/// As [`steady_state`] for rational functions: the transform runs on
/// numerators over one shared denominator and each entry is reduced once.
pub fn steady_state_factored(p: &Params<FactoredRational>) -> Result<Vec<FactoredRational>> {
    factored_from_y(p.len(), &solve_y(p)?.y)
}

fn factored_from_y(len: usize, y: &[FactoredRational]) -> Result<Vec<FactoredRational>> {
    let (nums, den) = common_denominator(y);
    let s = pow2(-(len as i64));
    Ok(hdelta_apply(&nums)?
        .iter()
        .map(|n| FactoredRational::new(&n.scale(&s), &den).expect("nonzero denominator"))
        .collect())
}

/// Steady state of the two-parameter model with symbolic `a`, `b`.
pub fn steady_state_symbolic(len: usize) -> Result<Vec<FactoredRational>> {
    let p = Params::<Poly>::symbolic_specialized(len)?.map(FactoredRational::from_poly);
    steady_state_factored(&p)
}

/// `M x = (sum_c alpha_c) x`, checked without forming `M`.
pub fn check_eigen_equation<T: ExactScalar>(p: &Params<T>, x: &[T]) -> Result<bool> {
    let mx = apply_m(p, x)?;
    let abar = p.alpha_sum();
    Ok(mx.iter().zip(x).all(|(l, r)| *l == r.mul(&abar)))
}

/// `prod_{b != 0} (lambda*_{b^Δ} + beta^rev.b)`.
pub fn partition_general<T: ExactScalar + ToLinearForm>(p: &Params<T>) -> Result<FactorProduct> {
    partition_product(p, |_| true)
}

/// The sub-product over `b` of weight one or two.
pub fn partition_restricted<T: ExactScalar + ToLinearForm>(p: &Params<T>) -> Result<FactorProduct> {
    partition_product(p, |b| matches!(b.weight(), 1 | 2))
}

fn partition_product<T: ExactScalar + ToLinearForm>(
    p: &Params<T>,
    keep: impl Fn(BitState) -> bool,
) -> Result<FactorProduct> {
    let mut z = FactorProduct::one();
    for b in BitState::all(p.len()).skip(1).filter(|b| keep(*b)) {
        let v = pivot(p, b);
        let f = v
            .to_form()
            .ok_or_else(|| Error::Invalid(format!("pivot {v} is not linear")))?;
        z.push(&f, 1);
    }
    Ok(z)
}

/// `2^{C(L-1,2)} (1+2a)^{L-1} (1+b)^{L-1} (2a+b)`.
pub fn partition_specialized(len: usize) -> Result<FactorProduct> {
    if len == 0 {
        return Err(Error::Invalid("lattice size must be at least 1".into()));
    }
    use crate::exact::Symbol::{Alpha, Beta};
    let n = len as u32 - 1;
    let mut z = FactorProduct::from_content(pow2(binomial(n as u64, 2) as i64));
    z.push(&LinearForm::from_ints(&[(Alpha, 2)], 1), n);
    z.push(&LinearForm::from_ints(&[(Beta, 1)], 1), n);
    z.push(&LinearForm::from_ints(&[(Alpha, 2), (Beta, 1)], 0), 1);
    Ok(z)
}

/// Lcm of the reduced denominators of a normalized steady state.
pub fn partition_from_steady(x: &[FactoredRational]) -> FactorProduct {
    lcm_denominators(x)
}

/// Largest size for the symbolic partition checks.
pub const MAX_SYMBOLIC_PARTITION_LEN: usize = 5;
pub const MAX_GENERAL_PARTITION_LEN: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct PartitionCheck {
    #[serde(rename = "L")]
    pub len: usize,
    pub lcm: FactorProduct,
    pub closed_form: FactorProduct,
    pub restricted_product: FactorProduct,
    pub matches_closed_form: bool,
    pub matches_restricted_product: bool,
    pub sums_to_one: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<String>,
}

impl PartitionCheck {
    pub fn passed(&self) -> bool {
        self.matches_closed_form && self.matches_restricted_product && self.sums_to_one
    }
}

/// Two-symbol check of the lcm against the closed form and against the
/// weight-one-or-two part of the general product.
pub fn verify_partition(len: usize) -> Result<PartitionCheck> {
    if len > MAX_SYMBOLIC_PARTITION_LEN {
        return Err(Error::Infeasible {
            what: "symbolic partition check".into(),
            len,
            max: MAX_SYMBOLIC_PARTITION_LEN,
        });
    }
    let x = steady_state_symbolic(len)?;
    let lcm = partition_from_steady(&x);
    let closed_form = partition_specialized(len)?;
    let restricted_product = partition_restricted(&Params::<Poly>::symbolic_specialized(len)?)?;
    let sum = x.iter().fold(FactoredRational::zero(), |acc, v| acc.add(v));
    let matches_closed_form = lcm == closed_form;
    Ok(PartitionCheck {
        len,
        difference: (!matches_closed_form).then(|| lcm.describe_difference(&closed_form)),
        matches_restricted_product: lcm == restricted_product,
        matches_closed_form,
        sums_to_one: sum == FactoredRational::one(),
        lcm,
        closed_form,
        restricted_product,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralPartitionCheck {
    #[serde(rename = "L")]
    pub len: usize,
    pub lcm: FactorProduct,
    pub product: FactorProduct,
    pub matches: bool,
    /// Every `y_b` has denominator equal to the product of pivots over
    /// configurations reachable from `b` by lowering `psi` steps.
    pub reachability_holds: bool,
    pub eigen_equation_holds: bool,
}

impl GeneralPartitionCheck {
    pub fn passed(&self) -> bool {
        self.matches && self.reachability_holds && self.eigen_equation_holds
    }
}

/// Configurations reachable from `b` by lowering `psi_j` steps, excluding `00..0`.
pub fn lowering_closure(b: BitState) -> BTreeSet<BitState> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![b];
    while let Some(c) = stack.pop() {
        if c.value() == 0 || !seen.insert(c) {
            continue;
        }
        for j in (1..=c.len()).filter(|&j| c.bit(j) == 1) {
            stack.push(c.psi(j).expect("site in range"));
        }
    }
    seen
}

/// Fully general symbols (one per configuration and per site).
pub fn verify_partition_general(len: usize) -> Result<GeneralPartitionCheck> {
    if len > MAX_GENERAL_PARTITION_LEN {
        return Err(Error::Infeasible {
            what: "general-symbol partition check".into(),
            len,
            max: MAX_GENERAL_PARTITION_LEN,
        });
    }
    let ps = Params::<Poly>::symbolic_general(len)?;
    let p = ps.map(FactoredRational::from_poly);
    let sol = solve_y(&p)?;
    let x = factored_from_y(len, &sol.y)?;
    let lcm = partition_from_steady(&x);
    let product = partition_general(&ps)?;
    let reachability_holds = BitState::all(len).skip(1).all(|b| {
        let mut expected = FactorProduct::one();
        for c in lowering_closure(b) {
            let f = pivot(&ps, c).to_linear_form().expect("linear pivot");
            expected.push(&f, 1);
        }
        let got = sol.y[b.index()].denominator();
        got.factors() == expected.factors()
    });
    Ok(GeneralPartitionCheck {
        len,
        matches: lcm == product,
        // one shared denominator: the identity reduces to one on numerators
        eigen_equation_holds: check_eigen_equation(&ps, &common_denominator(&x).0)?,
        reachability_holds,
        lcm,
        product,
    })
}

/// One configuration with its exact stationary probability.
#[derive(Clone, Debug, Serialize)]
pub struct SteadyEntry {
    pub state: BitState,
    pub probability: String,
}

pub fn steady_entries<T: ExactScalar>(x: &[T], len: usize) -> Vec<SteadyEntry> {
    BitState::all(len)
        .map(|b| SteadyEntry {
            state: b,
            probability: x[b.index()].to_string(),
        })
        .collect()
}

/// Steady state of the two-parameter model over any exact scalar.
pub fn steady_state_specialized_generic<T: ExactScalar>(len: usize, alpha: &T, beta: &T) -> Result<Vec<T>> {
    steady_state(&Params::specialized(len, alpha.clone(), beta.clone())?)
}

/// Steady state of the two-parameter model at a rational point.
pub fn steady_state_specialized(len: usize, alpha: &BigRational, beta: &BigRational) -> Result<Vec<BigRational>> {
    steady_state_rational(&Params::specialized(len, alpha.clone(), beta.clone())?)
}

/// [`steady_state`] at a rational point, through [`steady_state_scaled`].
pub fn steady_state_rational(p: &Params<BigRational>) -> Result<Vec<BigRational>> {
    let (v, s) = steady_state_scaled(p)?;
    Ok(v.iter().map(|n| n / &s).collect())
}

//! Transfer matrices `T_{L,L+1}` built by the order-one block recursion,
//! and the intertwining check `M_{L+1} T = T M_L`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Matrix};
use crate::operators::{build_m_specialized, sigma_kron_identity};
use crate::steady::steady_state_specialized_generic;

/// `T_{1,2}`: rows `00, 01, 10, 11`, columns `0, 1`.
pub fn initial_transfer<T: ExactScalar>(alpha: &T, beta: &T) -> Matrix<T> {
    let one = T::one();
    let ab = alpha.mul(beta);
    Matrix::from_rows(vec![
        vec![one.add(beta).add(&ab), alpha.add(beta).add(&ab)],
        vec![alpha.clone(), one.clone()],
        vec![alpha.add(&ab), ab.clone()],
        vec![T::zero(), alpha.clone()],
    ])
}

/// One step of the recursion, from `T_{L-1,L}` (split into upper and lower
/// square halves `T1`, `T2`) to `T_{L,L+1}`:
///
/// ```text
/// T1' = [ T1 + a^-1 T2    2 T2 + a^-1 T2 ]     T2' = [ 2 T2   T2 S ]
///       [ S T2            a^-1 T2        ]           [ 0      T2   ]
/// ```
///
/// with `S = sigma (x) 1` of the block size.
pub fn transfer_step<T: ExactScalar>(previous: &Matrix<T>, alpha: &T) -> Result<Matrix<T>> {
    let inv = T::one().div_exact(alpha).ok_or(Error::ZeroAlpha)?;
    let h = previous.cols();
    let t1 = previous.block(0, 0, h, h);
    let t2 = previous.block(h, 0, h, h);
    let s = sigma_kron_identity::<T>(h.trailing_zeros() as usize - 1);
    let inv_t2 = t2.map(|x| x.mul(&inv));
    let two_t2 = t2.map(|x| x.add(x));
    let upper = Matrix::from_blocks(&[
        &[&t1.add(&inv_t2), &two_t2.add(&inv_t2)],
        &[&s.mul(&t2), &inv_t2],
    ]);
    let lower = Matrix::from_blocks(&[&[&two_t2, &t2.mul(&s)], &[&Matrix::zeros(h, h), &t2]]);
    Ok(Matrix::from_blocks(&[&[&upper], &[&lower]]))
}

/// `T_{L,L+1}` for `L >= 1`.
pub fn build_t<T: ExactScalar>(len: usize, alpha: &T, beta: &T) -> Result<Matrix<T>> {
    if len == 0 {
        return Err(Error::Invalid("transfer matrices start at L = 1".into()));
    }
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    let mut t = initial_transfer(alpha, beta);
    for _ in 1..len {
        t = transfer_step(&t, alpha)?;
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TmaCheck {
    #[serde(rename = "L")]
    pub len: usize,
    pub intertwines: bool,
    /// First (row, col) where `M_{L+1} T` and `T M_L` differ.
    pub first_difference: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_entry: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_entry: Option<String>,
    pub nonzero: bool,
}

impl TmaCheck {
    pub fn passed(&self) -> bool {
        self.intertwines && self.nonzero
    }
}

/// Checks `M_{L+1} T = T M_L != 0` for an explicit `T`.
pub fn verify_tma_with<T: ExactScalar>(len: usize, t: &Matrix<T>, alpha: &T, beta: &T) -> Result<TmaCheck> {
    let small = build_m_specialized(len, alpha, beta)?;
    let big = build_m_specialized(len + 1, alpha, beta)?;
    if t.rows() != big.rows() || t.cols() != small.rows() {
        return Err(Error::DimensionMismatch {
            expected: big.rows(),
            found: t.rows(),
        });
    }
    let lhs = big.mul(t);
    let rhs = t.mul(&small);
    let first_difference = lhs.first_difference(&rhs);
    Ok(TmaCheck {
        len,
        intertwines: first_difference.is_none(),
        lhs_entry: first_difference.map(|(r, c)| lhs.get(r, c).to_string()),
        rhs_entry: first_difference.map(|(r, c)| rhs.get(r, c).to_string()),
        first_difference,
        nonzero: !lhs.is_zero(),
    })
}

pub fn verify_tma<T: ExactScalar>(len: usize, alpha: &T, beta: &T) -> Result<TmaCheck> {
    verify_tma_with(len, &build_t(len, alpha, beta)?, alpha, beta)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropagationCheck {
    #[serde(rename = "L")]
    pub len: usize,
    pub image_nonzero: bool,
    pub proportional: bool,
    /// `(T v_L)_i / (v_{L+1})_i`, when proportional.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
}

impl PropagationCheck {
    pub fn passed(&self) -> bool {
        self.image_nonzero && self.proportional
    }
}

/// `T_{L,L+1} v_L` against `v_{L+1}` by an exact cross-ratio test.
pub fn propagate_steady<T: ExactScalar>(len: usize, alpha: &T, beta: &T) -> Result<PropagationCheck> {
    let t = build_t(len, alpha, beta)?;
    let v = steady_state_specialized_generic(len, alpha, beta)?;
    let w = steady_state_specialized_generic(len + 1, alpha, beta)?;
    let image = t.mul_vec(&v);
    let image_nonzero = image.iter().any(|x| !x.is_zero());
    let pivot = w.iter().position(|x| !x.is_zero());
    let scalar = match (image_nonzero, pivot) {
        (true, Some(i)) => image[i].div_exact(&w[i]),
        _ => None,
    };
    let proportional = match &scalar {
        Some(s) => image.iter().zip(&w).all(|(l, r)| *l == r.mul(s)),
        None => false,
    };
    Ok(PropagationCheck {
        len,
        image_nonzero,
        proportional,
        scalar: scalar.filter(|_| proportional).map(|s| s.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, BigRational, FactoredRational, Poly, Symbol};

    fn sym() -> (FactoredRational, FactoredRational) {
        (
            FactoredRational::from_poly(&Poly::var(Symbol::Alpha)),
            FactoredRational::from_poly(&Poly::var(Symbol::Beta)),
        )
    }

    #[test]
    fn printed_initial_entries() {
        let (a, b) = sym();
        let t = build_t(1, &a, &b).unwrap();
        assert_eq!(t.get(0, 0).to_string(), "1+b+a*b");
        assert!(t.get(3, 0).is_zero());
    }

    #[test]
    fn shape_of_second_step() {
        let t = build_t(2, &ratio(1, 3), &ratio(2, 7)).unwrap();
        assert_eq!((t.rows(), t.cols()), (8, 4));
        assert!(matches!(build_t(2, &rat(0), &rat(1)), Err(Error::ZeroAlpha)));
    }

    #[test]
    fn l1_intertwines_symbolically() {
        let (a, b) = sym();
        assert!(verify_tma(1, &a, &b).unwrap().passed());
        let p = propagate_steady(1, &a, &b).unwrap();
        assert!(p.passed(), "{p:?}");
    }

    #[test]
    fn perturbation_is_detected() {
        let (a, b) = (ratio(1, 3), ratio(2, 7));
        let mut t: Matrix<BigRational> = build_t(1, &a, &b).unwrap();
        let e = t.get(0, 0) + rat(1);
        t.set(0, 0, e);
        assert!(!verify_tma_with(1, &t, &a, &b).unwrap().passed());
    }
}

//! Walsh-Hadamard transform and the Δ-rearranged conjugation.
//!
//! Everything works with the integer matrix `Ĥ = [(-1)^{b.c}]`; the
//! normalised `H̃ = 2^{-L/2} Ĥ_Δ` only ever appears squared, so the
//! conjugation is `2^{-L} Ĥ_Δ m Ĥ_Δ` and stays rational.

use crate::bits::{BitState, DeltaMap};
use crate::error::{Error, Result};
use crate::exact::{pow2, ExactScalar, Matrix};
use crate::operators::{build_b, Params};

fn log2_len(n: usize) -> Result<usize> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len: n });
    }
    Ok(n.trailing_zeros() as usize)
}

/// `Ĥ v` by the in-place butterfly; no normalisation.
pub fn fwht_apply<T: ExactScalar>(v: &[T]) -> Result<Vec<T>> {
    log2_len(v.len())?;
    let mut out = v.to_vec();
    fwht_in_place(&mut out);
    Ok(out)
}

fn fwht_in_place<T: ExactScalar>(v: &mut [T]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (v[i].clone(), v[i + h].clone());
                v[i] = a.add(&b);
                v[i + h] = a.sub(&b);
            }
        }
        h *= 2;
    }
}

/// `Ĥ_Δ v` with `Ĥ_Δ[b][c] = (-1)^{b . c^Δ}`: scatter `v[c]` to position
/// `c^Δ`, then butterfly.
pub fn hdelta_apply<T: ExactScalar>(v: &[T]) -> Result<Vec<T>> {
    let len = log2_len(v.len())?;
    BitState::new(len, 0)?;
    let map = DeltaMap::for_len(len);
    let mut u = vec![T::zero(); v.len()];
    for c in BitState::all(len) {
        u[map.apply(c).index()] = v[c.index()].clone();
    }
    fwht_in_place(&mut u);
    Ok(u)
}

/// `H̃ v = 2^{-L/2} Ĥ_Δ v` is irrational in general; this returns
/// `2^{-L} Ĥ_Δ v`, the half-way point used by the steady-state solver.
pub fn hdelta_apply_normalized<T: ExactScalar>(v: &[T]) -> Result<Vec<T>> {
    let len = log2_len(v.len())? as i64;
    let s = pow2(-len);
    Ok(hdelta_apply(v)?.into_iter().map(|x| x.scale(&s)).collect())
}

fn hdelta_columns<T: ExactScalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let cols: Vec<&[T]> = m.columns().collect();
    #[cfg(feature = "parallel")]
    let out: Result<Vec<Vec<T>>> = {
        use rayon::prelude::*;
        cols.par_iter().map(|c| hdelta_apply(c)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let out: Result<Vec<Vec<T>>> = cols.iter().map(|c| hdelta_apply(c)).collect();
    Ok(Matrix::from_columns(out?))
}

/// `H̃ m H̃ = 2^{-L} Ĥ_Δ m Ĥ_Δ`, exact.
pub fn htilde_conjugate<T: ExactScalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let len = log2_len(m.rows())? as i64;
    // Ĥ_Δ is symmetric, so right-multiplication is a column transform of the transpose.
    let left = hdelta_columns(m)?;
    let both = hdelta_columns(&left.transpose())?.transpose();
    Ok(both.scale(&pow2(-len)))
}

/// `H̃ B_L(beta) H̃ == B_L(beta^rev)^t`.
pub fn verify_b_transform<T: ExactScalar>(beta: &[T]) -> Result<bool> {
    let p = Params::new(beta.len(), Default::default(), beta.to_vec())?;
    let lhs = htilde_conjugate(&build_b(&p)?)?;
    let rhs = build_b(&p.with_reversed_beta())?.transpose();
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, BigRational, Poly, Symbol};
    use crate::operators::build_m_specialized;

    fn r(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn butterfly_examples() {
        assert_eq!(fwht_apply(&r(&[1, 0])).unwrap(), r(&[1, 1]));
        assert_eq!(fwht_apply(&r(&[1, 1])).unwrap(), r(&[2, 0]));
        assert_eq!(fwht_apply(&r(&[1, 0, 0, 0, 0, 0, 0, 0])).unwrap(), r(&[1; 8]));
        assert!(matches!(fwht_apply(&r(&[1, 2, 3])), Err(Error::NotPowerOfTwo { len: 3 })));
    }

    #[test]
    fn butterfly_matches_character_table() {
        let len = 4;
        for c in BitState::all(len) {
            let mut e = vec![rat(0); 16];
            e[c.index()] = rat(1);
            let col = fwht_apply(&e).unwrap();
            for b in BitState::all(len) {
                let s = if b.dot(c).unwrap() == 0 { 1 } else { -1 };
                assert_eq!(col[b.index()], rat(s));
            }
        }
    }

    #[test]
    fn hdelta_columns_are_rearranged_characters() {
        let len = 3;
        let map = DeltaMap::for_len(len);
        for c in BitState::all(len) {
            let mut e = vec![rat(0); 8];
            e[c.index()] = rat(1);
            let col = hdelta_apply(&e).unwrap();
            for b in BitState::all(len) {
                let s = if b.dot(map.apply(c)).unwrap() == 0 { 1 } else { -1 };
                assert_eq!(col[b.index()], rat(s));
            }
        }
    }

    #[test]
    fn conjugating_identity() {
        let id = Matrix::<BigRational>::identity(8);
        assert_eq!(htilde_conjugate(&id).unwrap(), id);
    }

    #[test]
    fn printed_b3_instance() {
        let beta: Vec<Poly> = (1..=3).map(|j| Poly::var(Symbol::BetaAt(j))).collect();
        assert!(verify_b_transform(&beta).unwrap());
        assert!(verify_b_transform(&[Poly::var(Symbol::Beta)]).unwrap());
    }

    #[test]
    fn m2_conjugate_is_lower_triangular() {
        let a = Poly::var(Symbol::Alpha);
        let b = Poly::var(Symbol::Beta);
        let m = build_m_specialized(2, &a, &b).unwrap();
        let c = htilde_conjugate(&m).unwrap();
        assert!(c.is_lower_triangular());
        let diag: Vec<String> = c.diagonal().iter().map(|x| x.to_string()).collect();
        assert_eq!(diag, ["0", "-1-2a", "-2a-b", "-1-b"]);
    }

    #[test]
    fn random_beta_l6() {
        let beta: Vec<_> = (1..=6).map(|j| ratio(j * 7 + 1, 3 * j + 2)).collect();
        assert!(verify_b_transform(&beta).unwrap());
    }
}

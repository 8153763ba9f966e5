use super::{det_rational, rat, BigRational, ExactScalar, Matrix, UniPoly};

/// `det(xI - m)` as a polynomial, recovered by interpolating exact
/// determinants at the integer nodes `0..=n`.
pub fn interpolate_charpoly(m: &Matrix<BigRational>) -> UniPoly<BigRational> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let shifted_det = |x: usize| {
        let mut s = m.scale(&rat(-1));
        for i in 0..n {
            let d = s.get(i, i).add(&rat(x as i64));
            s.set(i, i, d);
        }
        det_rational(&s)
    };
    #[cfg(feature = "parallel")]
    let values: Vec<BigRational> = {
        use rayon::prelude::*;
        (0..=n).into_par_iter().map(shifted_det).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<BigRational> = (0..=n).map(shifted_det).collect();

    newton_interpolate(&values)
}

/// The unique polynomial of degree `< values.len()` taking `values[i]` at `x = i`.
fn newton_interpolate(values: &[BigRational]) -> UniPoly<BigRational> {
    let n = values.len();
    let mut coef = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / rat(level as i64);
        }
    }
    let mut p = UniPoly::zero();
    for k in (0..n).rev() {
        p = p
            .mul(&UniPoly::monic_linear(&rat(k as i64)))
            .add(&UniPoly::constant(coef[k].clone()));
    }
    p
}

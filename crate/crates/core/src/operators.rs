//! Generators of the process and of its generalized form.
//!
//! `A_L(alpha)` has entry `alpha_{b xor c}` at `(b, c)`; `B_L(beta)` is the
//! weighted sum of the projections `P_{L,j}` whose column `b` (when
//! `b_j = 1`) carries `+1` on the diagonal and `-1` at row `psi_j(b)`.
//! `M_L = A_L - B_L`, and the two-parameter Markov generator is the
//! specialization produced by [`Params::specialized`].

use std::collections::BTreeMap;

use crate::bits::BitState;
use crate::error::{Error, Result};
use crate::exact::{expect_len, Assignment, BigRational, ExactScalar, Matrix, Poly, Symbol};

/// Largest lattice size for which dense operators are built.
pub const MAX_DENSE_LEN: usize = 12;

pub type DenseOperator<T> = Matrix<T>;

/// Parameters of the generalized model: one coefficient per configuration
/// (absent entries are zero) and one rate per site.
#[derive(Clone, Debug, PartialEq)]
pub struct Params<T> {
    len: usize,
    alpha: BTreeMap<BitState, T>,
    beta: Vec<T>,
}

impl<T: ExactScalar> Params<T> {
    pub fn new(len: usize, alpha: BTreeMap<BitState, T>, beta: Vec<T>) -> Result<Self> {
        BitState::new(len, 0)?;
        if let Some(b) = alpha.keys().find(|b| b.len() != len) {
            return Err(Error::LengthMismatch {
                left: len,
                right: b.len(),
            });
        }
        expect_len(len, beta.len())?;
        let alpha = alpha.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Self { len, alpha, beta })
    }

    /// `alpha_{00..0} = -alpha`, `alpha_{10..0} = alpha`, `beta_j = 1` for
    /// `j < L` and `beta_L = beta`.
    pub fn specialized(len: usize, alpha: T, beta: T) -> Result<Self> {
        BitState::new(len, 0)?;
        let mut a = BTreeMap::new();
        a.insert(BitState::zero(len), alpha.neg());
        a.insert(BitState::first_site(len), alpha);
        let mut b = vec![T::one(); len];
        b[len - 1] = beta;
        Self::new(len, a, b)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        1 << self.len
    }

    pub fn alpha(&self) -> &BTreeMap<BitState, T> {
        &self.alpha
    }

    pub fn alpha_at(&self, b: BitState) -> T {
        self.alpha.get(&b).cloned().unwrap_or_else(T::zero)
    }

    /// `beta_j` for `1 <= j <= L`.
    pub fn beta(&self, j: usize) -> &T {
        &self.beta[j - 1]
    }

    pub fn betas(&self) -> &[T] {
        &self.beta
    }

    /// `sum_c alpha_c`, the common column sum of `M_L(alpha, beta)`.
    pub fn alpha_sum(&self) -> T {
        self.alpha.values().fold(T::zero(), |acc, a| acc.add(a))
    }

    /// `beta^rev . b = sum_j beta_{L-j+1} b_j`.
    pub fn beta_rev_dot(&self, b: BitState) -> T {
        (1..=self.len)
            .filter(|&j| b.bit(j) == 1)
            .fold(T::zero(), |acc, j| acc.add(self.beta(self.len - j + 1)))
    }

    pub fn with_reversed_beta(&self) -> Self {
        let mut out = self.clone();
        out.beta.reverse();
        out
    }

    pub fn map<U: ExactScalar>(&self, f: impl Fn(&T) -> U) -> Params<U> {
        Params {
            len: self.len,
            alpha: self
                .alpha
                .iter()
                .map(|(b, v)| (*b, f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            beta: self.beta.iter().map(f).collect(),
        }
    }
}

impl Params<Poly> {
    /// Every `alpha_b` and `beta_j` an independent symbol.
    pub fn symbolic_general(len: usize) -> Result<Self> {
        let alpha = BitState::all(len)
            .map(|b| (b, Poly::var(Symbol::AlphaAt(b))))
            .collect();
        let beta = (1..=len).map(|j| Poly::var(Symbol::BetaAt(j as u8))).collect();
        Self::new(len, alpha, beta)
    }

    /// The two-parameter model with symbolic `alpha`, `beta`.
    pub fn symbolic_specialized(len: usize) -> Result<Self> {
        Self::specialized(len, Poly::var(Symbol::Alpha), Poly::var(Symbol::Beta))
    }

    pub fn evaluate(&self, at: &Assignment) -> Result<Params<BigRational>> {
        let alpha = self
            .alpha
            .iter()
            .map(|(b, p)| Ok((*b, p.eval(at)?)))
            .collect::<Result<_>>()?;
        let beta = self.beta.iter().map(|p| p.eval(at)).collect::<Result<_>>()?;
        Params::new(self.len, alpha, beta)
    }
}

/// Values for the symbols `a` and `b` of the two-parameter model.
pub fn two_symbol_assignment(alpha: &BigRational, beta: &BigRational) -> Assignment {
    let mut at = Assignment::new();
    at.insert(Symbol::Alpha, alpha.clone());
    at.insert(Symbol::Beta, beta.clone());
    at
}

fn check_dense(len: usize) -> Result<()> {
    if len > MAX_DENSE_LEN {
        return Err(Error::DenseCap {
            len,
            max: MAX_DENSE_LEN,
        });
    }
    Ok(())
}

pub fn build_a<T: ExactScalar>(p: &Params<T>) -> Result<DenseOperator<T>> {
    check_dense(p.len)?;
    let n = p.dim();
    let mut m = Matrix::zeros(n, n);
    for c in BitState::all(p.len) {
        for (d, a) in &p.alpha {
            let r = c.xor(*d)?;
            m.set(r.index(), c.index(), a.clone());
        }
    }
    Ok(m)
}

pub fn build_b<T: ExactScalar>(p: &Params<T>) -> Result<DenseOperator<T>> {
    check_dense(p.len)?;
    let n = p.dim();
    let mut m = Matrix::zeros(n, n);
    for c in BitState::all(p.len) {
        let mut diag = T::zero();
        for j in (1..=p.len).filter(|&j| c.bit(j) == 1) {
            let r = c.psi_unchecked(j);
            m.set(r.index(), c.index(), p.beta(j).neg());
            diag = diag.add(p.beta(j));
        }
        m.set(c.index(), c.index(), diag);
    }
    Ok(m)
}

/// `A_L(alpha) - B_L(beta)`. Off-diagonal entries are the rates; each
/// diagonal entry is completed from the column sum `sum_c alpha_c`.
pub fn build_m_general<T: ExactScalar>(p: &Params<T>) -> Result<DenseOperator<T>> {
    check_dense(p.len)?;
    let n = p.dim();
    let zero = BitState::zero(p.len);
    let column_sum = p.alpha_sum();
    let columns = BitState::all(p.len)
        .map(|c| {
            let mut col = vec![T::zero(); n];
            for (d, a) in p.alpha.iter().filter(|(d, _)| **d != zero) {
                let r = c.xor(*d).expect("same length");
                col[r.index()] = col[r.index()].add(a);
            }
            for j in (1..=p.len).filter(|&j| c.bit(j) == 1) {
                let r = c.psi_unchecked(j);
                col[r.index()] = col[r.index()].add(p.beta(j));
            }
            let off = col.iter().fold(T::zero(), |acc, x| acc.add(x));
            col[c.index()] = column_sum.sub(&off);
            col
        })
        .collect();
    Ok(Matrix::from_columns(columns))
}

pub fn build_m_specialized<T: ExactScalar>(len: usize, alpha: &T, beta: &T) -> Result<DenseOperator<T>> {
    build_m_general(&Params::specialized(len, alpha.clone(), beta.clone())?)
}

/// `M_L(alpha, beta) v` without forming the matrix: the `A` part is a sum
/// of xor-permutations, the `B` part follows the `psi_j` transitions.
pub fn apply_m<T: ExactScalar>(p: &Params<T>, v: &[T]) -> Result<Vec<T>> {
    expect_len(p.dim(), v.len())?;
    let mut out = vec![T::zero(); v.len()];
    for (d, a) in &p.alpha {
        for b in BitState::all(p.len) {
            let src = b.xor(*d)?;
            if !v[src.index()].is_zero() {
                out[b.index()] = out[b.index()].add(&a.mul(&v[src.index()]));
            }
        }
    }
    for c in BitState::all(p.len) {
        let x = &v[c.index()];
        if x.is_zero() {
            continue;
        }
        for j in (1..=p.len).filter(|&j| c.bit(j) == 1) {
            let flow = p.beta(j).mul(x);
            let r = c.psi_unchecked(j);
            out[c.index()] = out[c.index()].sub(&flow);
            out[r.index()] = out[r.index()].add(&flow);
        }
    }
    Ok(out)
}

/// `sigma (x) 1_{2^k}`: swaps the two halves of a vector of length `2^(k+1)`.
pub fn sigma_kron_identity<T: ExactScalar>(k: usize) -> Matrix<T> {
    let h = 1 << k;
    Matrix::from_fn(2 * h, 2 * h, |r, c| if r ^ c == h { T::one() } else { T::zero() })
}

/// Assembles `M_L` from `M_{L-1}` by the two-by-two block recursion:
///
/// ```text
/// [ M' - a S        a I + S       ]
/// [ a I             M' - I - a S  ]
/// ```
///
/// with `S = sigma (x) 1_{L-2}` and `M' = M_{L-1}`.
pub fn assemble_block_recursion<T: ExactScalar>(
    previous: &Matrix<T>,
    alpha: &T,
) -> Matrix<T> {
    let h = previous.rows();
    let k = h.trailing_zeros() as usize - 1;
    let s = sigma_kron_identity::<T>(k);
    let id = Matrix::<T>::identity(h);
    let a_s = s.map(|x| x.mul(alpha));
    let a_id = id.map(|x| x.mul(alpha));
    let top_left = previous.sub(&a_s);
    let top_right = a_id.add(&s);
    let bottom_right = previous.sub(&id).sub(&a_s);
    Matrix::from_blocks(&[&[&top_left, &top_right], &[&a_id, &bottom_right]])
}

pub fn check_block_recursion<T: ExactScalar>(len: usize, alpha: &T, beta: &T) -> Result<bool> {
    if len < 2 {
        return Err(Error::Invalid("block recursion needs L >= 2".into()));
    }
    let prev = build_m_specialized(len - 1, alpha, beta)?;
    let full = build_m_specialized(len, alpha, beta)?;
    Ok(assemble_block_recursion(&prev, alpha) == full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn a() -> Poly {
        Poly::var(Symbol::Alpha)
    }
    fn b() -> Poly {
        Poly::var(Symbol::Beta)
    }
    fn bs(s: &str) -> BitState {
        BitState::parse(s).unwrap()
    }

    #[test]
    fn a_operator_at_one_site() {
        let a0 = Poly::var(Symbol::AlphaAt(bs("0")));
        let a1 = Poly::var(Symbol::AlphaAt(bs("1")));
        let p = Params::new(
            1,
            [(bs("0"), a0.clone()), (bs("1"), a1.clone())].into(),
            vec![Poly::zero()],
        )
        .unwrap();
        let m = build_a(&p).unwrap();
        assert_eq!(m, Matrix::from_rows(vec![vec![a0.clone(), a1.clone()], vec![a1, a0]]));
    }

    #[test]
    fn a_operator_entry_and_column_sums() {
        let p = Params::new(2, [(bs("00"), -&a()), (bs("10"), a())].into(), vec![Poly::zero(); 2]).unwrap();
        let m = build_a(&p).unwrap();
        assert_eq!(*m.get(0, 2), a());
        let g = Params::<Poly>::symbolic_general(3).unwrap();
        let m = build_a(&g).unwrap();
        assert!(m.column_sums().iter().all(|s| *s == g.alpha_sum()));
        assert_eq!(m, m.transpose());
    }

    #[test]
    fn b_operator_matches_printed_l3() {
        let (be, ga, de) = (
            Poly::var(Symbol::BetaAt(1)),
            Poly::var(Symbol::BetaAt(2)),
            Poly::var(Symbol::BetaAt(3)),
        );
        let p = Params::new(3, BTreeMap::new(), vec![be.clone(), ga.clone(), de.clone()]).unwrap();
        let m = build_b(&p).unwrap();
        let z = Poly::zero();
        let n = |x: &Poly| -x;
        let s = |xs: &[&Poly]| xs.iter().fold(Poly::zero(), |acc, x| &acc + *x);
        let expected = Matrix::from_rows(vec![
            vec![z.clone(), n(&de), z.clone(), n(&ga), z.clone(), z.clone(), n(&be), z.clone()],
            vec![z.clone(), de.clone(), n(&ga), z.clone(), z.clone(), z.clone(), z.clone(), n(&be)],
            vec![z.clone(), z.clone(), ga.clone(), n(&de), n(&be), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), s(&[&de, &ga]), z.clone(), n(&be), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone(), be.clone(), n(&de), z.clone(), n(&ga)],
            vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), s(&[&de, &be]), n(&ga), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), s(&[&ga, &be]), n(&de)],
            vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), s(&[&de, &ga, &be])],
        ]);
        assert_eq!(m, expected);
        assert!(m.is_upper_triangular());
        assert!(m.column(0).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn zero_parameters_give_zero_generator() {
        let p = Params::<BigRational>::new(3, BTreeMap::new(), vec![rat(0); 3]).unwrap();
        assert!(build_m_general(&p).unwrap().is_zero());
    }

    #[test]
    fn specialized_l1_matches_printed() {
        let m = build_m_specialized(1, &a(), &b()).unwrap();
        let ab = &a() + &b();
        assert_eq!(m, Matrix::from_rows(vec![vec![-&a(), ab.clone()], vec![a(), -&ab]]));
    }

    #[test]
    fn specialized_l2_entries() {
        let m = build_m_specialized(2, &a(), &b()).unwrap();
        assert_eq!(*m.get(0, 3), Poly::one());
        assert_eq!(*m.get(3, 3), -&(&(&Poly::one() + &a()) + &b()));
    }

    #[test]
    fn apply_kernel_of_m1() {
        let p = Params::specialized(1, a(), b()).unwrap();
        let v = vec![&a() + &b(), a()];
        assert!(apply_m(&p, &v).unwrap().iter().all(|x| x.is_zero()));
        assert!(matches!(apply_m(&p, &[a()]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn block_recursion_small() {
        assert!(check_block_recursion(2, &a(), &b()).unwrap());
        assert!(check_block_recursion(3, &a(), &b()).unwrap());
        assert!(check_block_recursion(6, &ratio(1, 3), &ratio(2, 7)).unwrap());
        assert!(check_block_recursion(1, &a(), &b()).is_err());
    }

    #[test]
    fn dense_cap_enforced() {
        let p = Params::specialized(13, rat(1), rat(1)).unwrap();
        assert!(matches!(build_m_general(&p), Err(Error::DenseCap { .. })));
    }
}

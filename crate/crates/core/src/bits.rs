//! Configurations of the lattice as bit vectors.
//!
//! A configuration `b = b1 b2 ... bL` is stored by its integer value
//! `(b)_2 = bL + 2 b(L-1) + ... + 2^(L-1) b1`, so `b1` is the most
//! significant bit and the derived ordering on [`BitState`] is the natural
//! order used to index every matrix and vector in the crate.

use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest lattice size representable by a [`BitState`].
pub const MAX_LEN: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitState {
    len: u8,
    value: u32,
}

impl BitState {
    pub fn new(len: usize, value: u32) -> Result<Self> {
        check_len(len)?;
        if (value as u64) >> len != 0 {
            return Err(Error::Invalid(format!(
                "value {value} does not fit in {len} bits"
            )));
        }
        Ok(Self {
            len: len as u8,
            value,
        })
    }

    /// All-zero configuration of length `len`.
    pub fn zero(len: usize) -> Self {
        Self::new(len, 0).expect("valid length")
    }

    /// The configuration `10...0` (only site 1 occupied).
    pub fn first_site(len: usize) -> Self {
        Self::new(len, 1 << (len - 1)).expect("valid length")
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_len(bits.len())?;
        let mut value = 0u32;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::Parse {
                    position: i,
                    message: format!("bit must be 0 or 1, found {b}"),
                });
            }
            value = (value << 1) | b as u32;
        }
        Self::new(bits.len(), value)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse {
                    position: i,
                    message: format!("expected '0' or '1', found {ch:?}"),
                }),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(&bits)
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn index(self) -> usize {
        self.value as usize
    }

    /// Component `b_j` for `1 <= j <= L`.
    pub fn bit(self, j: usize) -> u8 {
        debug_assert!((1..=self.len()).contains(&j));
        ((self.value >> (self.len() - j)) & 1) as u8
    }

    pub fn bits(self) -> impl Iterator<Item = u8> {
        (1..=self.len()).map(move |j| self.bit(j))
    }

    /// Hamming weight `||b||`.
    pub fn weight(self) -> u32 {
        self.value.count_ones()
    }

    pub fn xor(self, other: Self) -> Result<Self> {
        same_len(self, other)?;
        Ok(Self {
            len: self.len,
            value: self.value ^ other.value,
        })
    }

    /// Scalar product over the binary field.
    pub fn dot(self, other: Self) -> Result<u8> {
        same_len(self, other)?;
        Ok(parity(self.value & other.value))
    }

    /// `phi_j`: complement component `j`.
    pub fn phi(self, j: usize) -> Result<Self> {
        self.check_site(j)?;
        Ok(self.flip_unchecked(j))
    }

    /// `psi_j`: complement components `j` and `j + 1`; `psi_L = phi_L`.
    pub fn psi(self, j: usize) -> Result<Self> {
        self.check_site(j)?;
        Ok(self.psi_unchecked(j))
    }

    pub(crate) fn flip_unchecked(self, j: usize) -> Self {
        Self {
            len: self.len,
            value: self.value ^ (1 << (self.len() - j)),
        }
    }

    pub(crate) fn psi_unchecked(self, j: usize) -> Self {
        let l = self.len();
        let mask = if j < l { 0b11 << (l - j - 1) } else { 1 };
        Self {
            len: self.len,
            value: self.value ^ mask,
        }
    }

    fn check_site(self, j: usize) -> Result<()> {
        if j == 0 || j > self.len() {
            return Err(Error::SiteOutOfRange {
                index: j,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Every configuration of length `len` in increasing order.
    pub fn all(len: usize) -> impl Iterator<Item = BitState> {
        check_len(len).expect("valid length");
        (0..1u32 << len).map(move |value| BitState {
            len: len as u8,
            value,
        })
    }

    pub fn delta(self) -> Self {
        DeltaMap::for_len(self.len()).apply(self)
    }

    pub fn delta_inv(self) -> Self {
        DeltaMap::for_len(self.len()).apply_inverse(self)
    }
}

pub fn dot(b: BitState, c: BitState) -> Result<u8> {
    b.dot(c)
}

pub fn psi(j: usize, b: BitState) -> Result<BitState> {
    b.psi(j)
}

pub fn phi(j: usize, b: BitState) -> Result<BitState> {
    b.phi(j)
}

pub fn delta(b: BitState) -> BitState {
    b.delta()
}

pub fn delta_inv(b: BitState) -> BitState {
    b.delta_inv()
}

#[inline]
pub(crate) fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_LEN {
        return Err(Error::UnsupportedLength { len, max: MAX_LEN });
    }
    Ok(())
}

fn same_len(a: BitState, b: BitState) -> Result<()> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

impl fmt::Display for BitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitState({self})")
    }
}

impl Serialize for BitState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A square matrix over the binary field acting on `L`-bit configurations.
///
/// Row `j` (1-based) is stored as a mask in value coordinates, so component
/// `j` of the image of `b` is the parity of `rows[j-1] & b.value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    len: usize,
    rows: Vec<u32>,
}

impl BinaryMatrix {
    pub fn identity(len: usize) -> Self {
        Self {
            len,
            rows: (1..=len).map(|j| 1 << (len - j)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Entry in row `i`, column `j` (both 1-based).
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        ((self.rows[i - 1] >> (self.len - j)) & 1) as u8
    }

    pub fn apply(&self, b: BitState) -> BitState {
        debug_assert_eq!(b.len(), self.len);
        let mut value = 0u32;
        for &row in &self.rows {
            value = (value << 1) | parity(row & b.value) as u32;
        }
        BitState {
            len: b.len,
            value,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![0u32; self.len];
        for i in 1..=self.len {
            for j in 1..=self.len {
                if self.entry(i, j) == 1 {
                    rows[j - 1] |= 1 << (self.len - i);
                }
            }
        }
        Self {
            len: self.len,
            rows,
        }
    }

    /// Gauss-Jordan inversion over the binary field.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.len;
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n).rows;
        for col in 1..=n {
            let bit = 1u32 << (n - col);
            let pivot = (col - 1..n).find(|&r| a[r] & bit != 0)?;
            a.swap(col - 1, pivot);
            inv.swap(col - 1, pivot);
            for r in 0..n {
                if r != col - 1 && a[r] & bit != 0 {
                    a[r] ^= a[col - 1];
                    inv[r] ^= inv[col - 1];
                }
            }
        }
        Some(Self { len: n, rows: inv })
    }
}

/// The map `b -> b^Delta` whose component `j` is `b_1 + ... + b_(L-j+1)`
/// over the binary field, together with its inverse.
#[derive(Clone, Debug)]
pub struct DeltaMap {
    forward: BinaryMatrix,
    inverse: BinaryMatrix,
}

impl DeltaMap {
    pub fn new(len: usize) -> Self {
        check_len(len).expect("valid length");
        let rows = (1..=len)
            .map(|j| {
                let width = len - j + 1;
                (((1u64 << width) - 1) as u32) << (j - 1)
            })
            .collect();
        let forward = BinaryMatrix { len, rows };
        let inverse = forward.inverse().expect("Delta is invertible");
        Self { forward, inverse }
    }

    /// Shared instance for lattice size `len`, built on first use.
    pub fn for_len(len: usize) -> &'static DeltaMap {
        static CACHE: [OnceLock<DeltaMap>; MAX_LEN + 1] = [const { OnceLock::new() }; MAX_LEN + 1];
        CACHE[len].get_or_init(|| DeltaMap::new(len))
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.forward
    }

    pub fn inverse_matrix(&self) -> &BinaryMatrix {
        &self.inverse
    }

    pub fn apply(&self, b: BitState) -> BitState {
        self.forward.apply(b)
    }

    pub fn apply_inverse(&self, b: BitState) -> BitState {
        self.inverse.apply(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitState {
        BitState::parse(s).unwrap()
    }

    #[test]
    fn value_order_has_b1_most_significant() {
        let b = bs("100");
        assert_eq!(b.value(), 4);
        assert_eq!(b.bit(1), 1);
        assert_eq!(bs("001").value(), 1);
        assert!(bs("011") < bs("100"));
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(bs("000"), bs("101")).unwrap(), 0);
        assert_eq!(dot(bs("011"), bs("011")).unwrap(), 0);
        assert_eq!(dot(bs("011"), bs("001")).unwrap(), 1);
        assert!(matches!(
            dot(bs("01"), bs("011")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(1, bs("101")).unwrap(), bs("011"));
        assert_eq!(psi(3, bs("101")).unwrap(), bs("100"));
        // right shift 10 -> 01
        assert_eq!(psi(1, bs("10")).unwrap(), bs("01"));
        assert!(matches!(
            psi(4, bs("101")),
            Err(Error::SiteOutOfRange { index: 4, len: 3 })
        ));
        assert!(psi(0, bs("101")).is_err());
    }

    #[test]
    fn delta_table_l3() {
        let table = [
            ("000", "000"),
            ("001", "100"),
            ("010", "110"),
            ("011", "010"),
            ("100", "111"),
            ("101", "011"),
            ("110", "001"),
            ("111", "101"),
        ];
        for (b, d) in table {
            assert_eq!(delta(bs(b)), bs(d), "delta({b})");
            assert_eq!(delta_inv(bs(d)), bs(b), "delta_inv({d})");
        }
    }

    #[test]
    fn delta_matrix_is_symmetric() {
        for len in 1..=12 {
            let m = DeltaMap::for_len(len).matrix();
            assert_eq!(&m.transpose(), m, "L = {len}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BitState::parse("012").is_err());
        assert!(BitState::parse("").is_err());
        assert!(BitState::new(3, 8).is_err());
    }

    #[test]
    fn decreasing_transitions_need_bj_set() {
        for len in 1..=8 {
            for b in BitState::all(len) {
                for j in 1..=len {
                    let p = b.psi(j).unwrap();
                    assert_eq!(p < b, b.bit(j) == 1, "b = {b}, j = {j}");
                }
            }
        }
    }

    #[test]
    fn delta_intertwines_psi_and_phi() {
        for len in 1..=10 {
            for b in BitState::all(len) {
                for j in 1..=len {
                    let lhs = b.psi(j).unwrap().delta();
                    let rhs = b.delta().phi(len - j + 1).unwrap();
                    assert_eq!(lhs, rhs, "L = {len}, b = {b}, j = {j}");
                }
            }
        }
    }

    #[test]
    fn delta_shifts_scalar_product() {
        for len in 1..=6 {
            for b in BitState::all(len) {
                let bd = b.delta();
                for c in BitState::all(len) {
                    for j in 1..=len {
                        let lhs = bd.dot(c.psi(j).unwrap()).unwrap();
                        let rhs = bd.dot(c).unwrap() ^ b.bit(len - j + 1);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn involutions_and_bijection() {
        for len in 1..=10 {
            let mut seen = vec![false; 1 << len];
            for b in BitState::all(len) {
                for j in 1..=len {
                    assert_eq!(b.psi(j).unwrap().psi(j).unwrap(), b);
                    assert_eq!(b.phi(j).unwrap().phi(j).unwrap(), b);
                }
                let d = b.delta();
                assert!(!seen[d.index()]);
                seen[d.index()] = true;
                assert_eq!(d.delta_inv(), b);
            }
        }
    }
}

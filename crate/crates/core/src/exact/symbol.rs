use std::fmt;

use crate::bits::BitState;

/// An indeterminate. The derived order is the variable priority used by
/// the lexicographic monomial order (earlier variants rank higher).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Symbol {
    /// The characteristic-polynomial variable.
    X,
    /// Boundary rate `alpha` of the two-parameter model.
    Alpha,
    /// Boundary rate `beta` of the two-parameter model.
    Beta,
    /// Coefficient `alpha_b` of the generalized model.
    AlphaAt(BitState),
    /// Rate `beta_j` of the generalized model (1-based).
    BetaAt(u8),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::X => f.write_str("x"),
            Symbol::Alpha => f.write_str("a"),
            Symbol::Beta => f.write_str("b"),
            Symbol::AlphaAt(b) => write!(f, "a[{b}]"),
            Symbol::BetaAt(j) => write!(f, "b{j}"),
        }
    }
}

//! Exact arithmetic in the infinite dihedral group `⟨r, s | s r s = r⁻¹, s²⟩`.
//!
//! Every element has the unique normal form `s^ε r^k` with `ε ∈ {0, 1}`.
//! Throughout the crate `r` is the infinite-order generator and `s` the
//! reflection.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The element `s^ε r^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DihedralElement {
    pub reflect: bool,
    pub shift: BigInt,
}

impl DihedralElement {
    pub fn new(reflect: bool, shift: impl Into<BigInt>) -> Self {
        Self {
            reflect,
            shift: shift.into(),
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// `r^k`.
    pub fn rotation(k: impl Into<BigInt>) -> Self {
        Self::new(false, k)
    }

    /// `s r^k`.
    pub fn reflection(k: impl Into<BigInt>) -> Self {
        Self::new(true, k)
    }

    pub fn is_identity(&self) -> bool {
        !self.reflect && self.shift.is_zero()
    }

    pub fn is_infinite_order(&self) -> bool {
        !self.reflect && !self.shift.is_zero()
    }

    /// `(ε₁,k₁)·(ε₂,k₂) = (ε₁⊕ε₂, (−1)^{ε₂}·k₁ + k₂)`.
    pub fn mul(&self, other: &Self) -> Self {
        let carried = if other.reflect {
            -&self.shift
        } else {
            self.shift.clone()
        };
        Self {
            reflect: self.reflect ^ other.reflect,
            shift: carried + &other.shift,
        }
    }

    pub fn inverse(&self) -> Self {
        if self.reflect {
            self.clone()
        } else {
            Self::rotation(-&self.shift)
        }
    }

    pub fn pow(&self, n: &BigInt) -> Self {
        if self.reflect {
            // reflections are involutions
            if n.is_odd() {
                self.clone()
            } else {
                Self::identity()
            }
        } else {
            Self::rotation(&self.shift * n)
        }
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    /// Letter length in the generators `r`, `s` of the normal form.
    pub fn letter_length(&self) -> BigInt {
        let s = if self.reflect { BigInt::one() } else { BigInt::zero() };
        s + self.shift.abs()
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", u8::from(self.reflect), self.shift)
    }
}

/// Finite-index subgroups of the infinite dihedral group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DihedralSubgroup {
    /// `⟨r^k⟩`, `k ≠ 0`.
    Cyclic(BigInt),
    /// `⟨r^k, s r^l⟩`, `k ≠ 0`.
    DihedralType(BigInt, BigInt),
}

impl DihedralSubgroup {
    /// Index in the whole group, or `None` for a degenerate (`k = 0`) subgroup,
    /// which has infinite index.
    pub fn index(&self) -> Option<BigInt> {
        match self {
            Self::Cyclic(k) if !k.is_zero() => Some(BigInt::from(2) * k.abs()),
            Self::DihedralType(k, _) if !k.is_zero() => Some(k.abs()),
            _ => None,
        }
    }

    /// Subgroup generated by the image of a vertex group: the rotation
    /// part `rot` (must be a pure rotation) and an optional reflection.
    pub fn generated_by(rot: &DihedralElement, refl: Option<&DihedralElement>) -> Option<Self> {
        if rot.reflect {
            return None;
        }
        match refl {
            None => Some(Self::Cyclic(rot.shift.clone())),
            Some(x) if x.reflect => Some(Self::DihedralType(rot.shift.clone(), x.shift.clone())),
            Some(_) => None,
        }
    }
}

/// Index of `H` in the infinite dihedral group; `None` when infinite.
pub fn subgroup_index(h: &DihedralSubgroup) -> Option<BigInt> {
    h.index()
}

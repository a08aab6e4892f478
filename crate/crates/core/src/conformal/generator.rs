use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Assignment of intrinsic conformal weights to the four generator kinds.
///
/// `DeRham`: x ↦ 0, y ↦ 1, φ ↦ 0, ψ ↦ 1. `Polyvector`: x ↦ 0, y ↦ 1, φ ↦ 1, ψ ↦ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Profile {
    DeRham,
    Polyvector,
}

impl Profile {
    pub fn toggled(self) -> Profile {
        match self {
            Profile::DeRham => Profile::Polyvector,
            Profile::Polyvector => Profile::DeRham,
        }
    }

    pub fn intrinsic_weight(self, kind: Kind) -> u32 {
        match (self, kind) {
            (_, Kind::X) => 0,
            (_, Kind::Y) => 1,
            (Profile::DeRham, Kind::Phi) => 0,
            (Profile::DeRham, Kind::Psi) => 1,
            (Profile::Polyvector, Kind::Phi) => 1,
            (Profile::Polyvector, Kind::Psi) => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    X,
    Y,
    Phi,
    Psi,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::X, Kind::Y, Kind::Phi, Kind::Psi];

    pub fn is_odd(self) -> bool {
        matches!(self, Kind::Phi | Kind::Psi)
    }

    /// Position in the canonical factor order (Y, PHI, PSI, X).
    fn order_rank(self) -> u8 {
        match self {
            Kind::Y => 0,
            Kind::Phi => 1,
            Kind::Psi => 2,
            Kind::X => 3,
        }
    }

    /// `a_(0) b = pairing(a, b) Ω` for generators with equal index.
    pub fn pairing(self, other: Kind) -> i64 {
        match (self, other) {
            (Kind::Y, Kind::X) => 1,
            (Kind::X, Kind::Y) => -1,
            (Kind::Phi, Kind::Psi) => 1,
            (Kind::Psi, Kind::Phi) => 1,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::X => "x",
            Kind::Y => "y",
            Kind::Phi => "phi",
            Kind::Psi => "psi",
        }
    }
}

/// The algebra a state lives in: the number of coordinate directions and the
/// weight profile. Pairings are fixed by [`Kind::pairing`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraContext {
    dim: usize,
    profile: Profile,
}

impl AlgebraContext {
    pub fn new(dim: usize, profile: Profile) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { dim, profile })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn with_profile(&self, profile: Profile) -> Self {
        Self { dim: self.dim, profile }
    }
}

/// δ^deriv applied to one of the free generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub kind: Kind,
    pub index: u32,
    pub deriv: u32,
}

impl Generator {
    pub fn new(kind: Kind, index: u32, deriv: u32) -> Self {
        Self { kind, index, deriv }
    }

    pub fn is_odd(&self) -> bool {
        self.kind.is_odd()
    }

    pub fn weight(&self, profile: Profile) -> u32 {
        profile.intrinsic_weight(self.kind) + self.deriv
    }

    pub(crate) fn order_key(&self, profile: Profile) -> (Reverse<u32>, u8, u32, Reverse<u32>) {
        (
            Reverse(self.weight(profile)),
            self.kind.order_rank(),
            self.index,
            Reverse(self.deriv),
        )
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.deriv {
            0 => {}
            1 => write!(f, "d")?,
            k => write!(f, "d^{k}")?,
        }
        write!(f, "{}{}", self.kind.name(), self.index)
    }
}

/// Sorts `factors` into canonical order for `profile`.
///
/// Returns the Koszul sign of the permutation, or `None` when an odd symbol is
/// repeated (the monomial vanishes).
pub(crate) fn canonicalize(profile: Profile, factors: &mut [Generator]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..factors.len() {
        let mut j = i;
        while j > 0 {
            let left = factors[j - 1];
            let right = factors[j];
            match left.order_key(profile).cmp(&right.order_key(profile)) {
                std::cmp::Ordering::Greater => {
                    if left.is_odd() && right.is_odd() {
                        sign = -sign;
                    }
                    factors.swap(j - 1, j);
                    j -= 1;
                }
                std::cmp::Ordering::Equal => {
                    if left.is_odd() {
                        return None;
                    }
                    break;
                }
                std::cmp::Ordering::Less => break,
            }
        }
    }
    Some(sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_sorts_heavy_factors_first() {
        let mut f = vec![
            Generator::new(Kind::X, 1, 0),
            Generator::new(Kind::Y, 1, 0),
            Generator::new(Kind::X, 1, 1),
        ];
        let s = canonicalize(Profile::Polyvector, &mut f).unwrap();
        assert_eq!(s, 1);
        assert_eq!(f[0], Generator::new(Kind::Y, 1, 0));
        assert_eq!(f[1], Generator::new(Kind::X, 1, 1));
        assert_eq!(f[2], Generator::new(Kind::X, 1, 0));
    }

    #[test]
    fn odd_swaps_flip_sign_and_squares_vanish() {
        let mut f = vec![Generator::new(Kind::Psi, 1, 0), Generator::new(Kind::Phi, 1, 0)];
        assert_eq!(canonicalize(Profile::Polyvector, &mut f), Some(-1));
        let mut g = vec![Generator::new(Kind::Psi, 1, 0), Generator::new(Kind::Psi, 1, 0)];
        assert_eq!(canonicalize(Profile::Polyvector, &mut g), None);
    }

    #[test]
    fn profile_weights() {
        assert_eq!(Profile::Polyvector.intrinsic_weight(Kind::Psi), 0);
        assert_eq!(Profile::DeRham.intrinsic_weight(Kind::Psi), 1);
        assert_eq!(Generator::new(Kind::Phi, 2, 3).weight(Profile::Polyvector), 4);
    }
}

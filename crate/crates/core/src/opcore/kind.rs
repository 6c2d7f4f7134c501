use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which completed ring (or bimodule) an operator is taken from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Completed symmetric ring: power-series coefficients, unbounded d-degree.
    DSym,
    /// Operators free of d_n.
    DHatN,
    /// Polynomial in d_n over the d_n-free operators.
    DHat,
    /// Pseudodifferential in d_n: finitely many positive d_n powers, a tail of negative ones.
    EHat,
    /// The bimodule containing both DSym and EHat.
    PiHat,
    /// Constant coefficients.
    VElem,
}

impl Kind {
    pub const ALL: [Kind; 6] = [Kind::DSym, Kind::DHatN, Kind::DHat, Kind::EHat, Kind::PiHat, Kind::VElem];

    pub fn allows_negative(self) -> bool {
        matches!(self, Kind::EHat | Kind::PiHat | Kind::VElem)
    }

    pub fn is_differential(self) -> bool {
        matches!(self, Kind::DSym | Kind::DHat | Kind::DHatN)
    }

    /// Whether elements of `self` are elements of `other`.
    pub fn le(self, other: Kind) -> bool {
        use Kind::*;
        match (self, other) {
            (a, b) if a == b => true,
            (DHatN, VElem) => false,
            (DHatN, _) => true,
            (DHat, DSym | EHat | PiHat) => true,
            (VElem, EHat | PiHat) => true,
            (EHat, PiHat) | (DSym, PiHat) => true,
            _ => false,
        }
    }

    /// Least kind containing both.
    pub fn join(self, other: Kind) -> Kind {
        use Kind::*;
        for c in [VElem, DHatN, DHat, EHat, DSym, PiHat] {
            if self.le(c) && other.le(c) {
                return c;
            }
        }
        PiHat
    }

    /// Kind of a product, following the ring and bimodule structure.
    pub fn product(self, other: Kind) -> Result<Kind> {
        use Kind::*;
        let k = match (self, other) {
            (VElem, VElem) => VElem,
            (a, b) if a.is_differential() && b.is_differential() => a.join(b),
            (DHatN | DHat, EHat | VElem) => EHat,
            (DHatN | DHat | DSym, PiHat) => PiHat,
            (DSym, EHat | VElem) => PiHat,
            (EHat | VElem, DHatN | DHat | EHat | VElem) => EHat,
            (PiHat, DHatN | DHat | EHat | VElem) => PiHat,
            (a, b) => return Err(Error::KindIncompatible(format!("{a} * {b}"))),
        };
        Ok(k)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::DSym => "DSym",
            Kind::DHatN => "DHatN",
            Kind::DHat => "DHat",
            Kind::EHat => "EHat",
            Kind::PiHat => "PiHat",
            Kind::VElem => "VElem",
        };
        f.write_str(s)
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        Kind::ALL
            .iter()
            .copied()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown operator kind '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_table() {
        use Kind::*;
        assert_eq!(DSym.product(DSym).unwrap(), DSym);
        assert_eq!(DHat.product(EHat).unwrap(), EHat);
        assert_eq!(DSym.product(EHat).unwrap(), PiHat);
        assert_eq!(PiHat.product(EHat).unwrap(), PiHat);
        assert!(EHat.product(DSym).is_err());
        assert!(PiHat.product(DSym).is_err());
        assert_eq!(DHat.join(VElem), EHat);
        assert_eq!(EHat.join(DSym), PiHat);
    }
}

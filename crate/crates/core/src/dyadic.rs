//! Exact dyadic rationals `p / 2^k` used for budgets, bids, and interval cutoffs.
//!
//! All arithmetic is exact; values are kept in canonical form (odd or zero
//! numerator) so structural equality coincides with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

/// An exact dyadic rational: `num / 2^scale`, canonicalized so `num` is odd or zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    scale: u32,
}

/// Error from parsing a dyadic literal.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid dyadic literal {input:?}: expected an integer or `p/2^k`")]
pub struct DyadicParseError {
    pub input: String,
}

impl Dyadic {
    /// Builds `num / 2^scale`, reducing to canonical form.
    pub fn new(num: impl Into<BigInt>, scale: u32) -> Self {
        let mut d = Dyadic { num: num.into(), scale };
        d.canonicalize();
        d
    }

    /// The integer `n` as a dyadic.
    pub fn from_int(n: i64) -> Self {
        Dyadic::new(n, 0)
    }

    /// `1 / 2^k`.
    pub fn unit(k: u32) -> Self {
        Dyadic { num: BigInt::one(), scale: k }
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), scale: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: BigInt::one(), scale: 0 }
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.scale = 0;
            return;
        }
        while self.scale > 0 {
            let (half, rem) = {
                use num::Integer;
                self.num.div_rem(&BigInt::from(2))
            };
            if rem.is_zero() {
                self.num = half;
                self.scale -= 1;
            } else {
                break;
            }
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// Halves the value (scale + 1 on the canonical representation).
    pub fn half(&self) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { num: self.num.clone(), scale: self.scale + 1 }
    }

    /// Multiplies by an integer.
    pub fn scaled_by_int(&self, k: i64) -> Self {
        Dyadic::new(&self.num * BigInt::from(k), self.scale)
    }

    /// Exact conversion to an arbitrary rational.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << (self.scale as usize))
    }

    /// Exact comparison against an arbitrary rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // self = num / 2^scale vs r = p / q with q > 0.
        let lhs = &self.num * r.denom();
        let rhs = r.numer() << (self.scale as usize);
        lhs.cmp(&rhs)
    }

    /// If the value is an exact multiple of `2^-k`, returns the multiple.
    pub fn units_at_scale(&self, k: u32) -> Option<BigInt> {
        if self.scale <= k {
            Some(&self.num << ((k - self.scale) as usize))
        } else {
            None
        }
    }

    /// Builds `units / 2^k` from an integer count of `2^-k` grid units.
    pub fn from_units(units: impl Into<BigInt>, k: u32) -> Self {
        Dyadic::new(units, k)
    }

    /// Converts a rational into a dyadic when the denominator is a power of two.
    pub fn try_from_rational(r: &BigRational) -> Option<Self> {
        let denom = r.denom();
        if denom.is_zero() || denom.is_negative() {
            return None;
        }
        // A positive integer is a power of two iff it has exactly one set bit.
        let bits = denom.bits();
        if denom != &(BigInt::one() << ((bits - 1) as usize)) {
            return None;
        }
        Some(Dyadic::new(r.numer().clone(), (bits - 1) as u32))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = self.scale.max(other.scale);
        let lhs = &self.num << ((s - self.scale) as usize);
        let rhs = &other.num << ((s - other.scale) as usize);
        lhs.cmp(&rhs)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let s = self.scale.max(rhs.scale);
        let a = &self.num << ((s - self.scale) as usize);
        let b = &rhs.num << ((s - rhs.scale) as usize);
        Dyadic::new(a + b, s)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let s = self.scale.max(rhs.scale);
        let a = &self.num << ((s - self.scale) as usize);
        let b = &rhs.num << ((s - rhs.scale) as usize);
        Dyadic::new(a - b, s)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num.clone(), scale: self.scale }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.scale)
        }
    }
}

impl FromStr for Dyadic {
    type Err = DyadicParseError;

    /// Parses `p` or `p/2^k` with `p` an integer and `k` a non-negative integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DyadicParseError { input: s.to_string() };
        match s.split_once('/') {
            None => {
                let num = BigInt::from_str(s.trim()).map_err(|_| err())?;
                Ok(Dyadic::new(num, 0))
            }
            Some((p, rest)) => {
                let num = BigInt::from_str(p.trim()).map_err(|_| err())?;
                let rest = rest.trim();
                let k = rest.strip_prefix("2^").ok_or_else(err)?;
                let k: u32 = k.trim().parse().map_err(|_| err())?;
                Ok(Dyadic::new(num, k))
            }
        }
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

//! Coefficient fields for rank computations.
//!
//! All cohomology dimensions are computed by Gaussian elimination over a
//! field chosen by the caller: exact rationals by default, or a prime
//! field `F_p`. Simplicial-type complexes can carry torsion, so the two
//! choices may disagree; the field is part of the query.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact arithmetic field used as the scalar type of matrices.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn inv(&self) -> Self;
}

/// Default coefficient field: arbitrary-precision rationals.
pub type Rat = BigRational;

impl Field for Rat {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }

    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Prime field element with a runtime modulus.
///
/// Literals produced by `zero()`/`one()` carry modulus 0 and adopt the
/// modulus of whatever they are combined with, so the type satisfies the
/// context-free `Zero`/`One` traits without global state.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let v = value.rem_euclid(modulus as i64) as u64;
        Fp { value: v, modulus }
    }

    fn unify(self, other: Fp) -> (u64, u64, u64) {
        let p = match (self.modulus, other.modulus) {
            (0, 0) => 0,
            (0, p) | (p, 0) => p,
            (p, q) => {
                assert_eq!(p, q, "mixed moduli");
                p
            }
        };
        if p == 0 {
            // both are small literals; arithmetic stays exact below any modulus
            (self.value, other.value, 0)
        } else {
            (self.value % p, other.value % p, p)
        }
    }

    fn reduce(v: u128, p: u64) -> Fp {
        if p == 0 {
            Fp {
                value: v as u64,
                modulus: 0,
            }
        } else {
            Fp {
                value: (v % p as u128) as u64,
                modulus: p,
            }
        }
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.unify(*other);
        a == b
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b, p) = self.unify(rhs);
        Fp::reduce(a as u128 + b as u128, p)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.modulus == 0 {
            // only 0 and 1 occur as modulus-free literals
            assert!(self.value <= 1, "cannot negate modulus-free literal");
            if self.value == 0 {
                self
            } else {
                panic!("negation of a modulus-free one is ambiguous")
            }
        } else {
            Fp {
                value: (self.modulus - self.value % self.modulus) % self.modulus,
                modulus: self.modulus,
            }
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b, p) = self.unify(rhs);
        Fp::reduce(a as u128 * b as u128, p)
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv()
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        if self.modulus == 0 {
            self.value == 0
        } else {
            self.value % self.modulus == 0
        }
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp {
            value: 1,
            modulus: 0,
        }
    }
}

impl Field for Fp {
    fn from_int(n: i64) -> Self {
        // modulus-free carrier; reduced on first contact with a real element
        assert!(n >= 0, "modulus-free literals must be nonnegative");
        Fp {
            value: n as u64,
            modulus: 0,
        }
    }

    fn inv(&self) -> Self {
        let p = self.modulus;
        assert!(p > 0, "inverse needs a modulus");
        let a = self.value % p;
        assert!(a != 0, "division by zero in F_p");
        // extended Euclid
        let (mut r0, mut r1) = (p as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        assert_eq!(r0, 1, "modulus is not prime");
        Fp::new(s0 as i64, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic() {
        let p = 7;
        let a = Fp::new(3, p);
        let b = Fp::new(5, p);
        assert_eq!(a + b, Fp::new(1, p));
        assert_eq!(a * b, Fp::new(1, p));
        assert_eq!(a.inv() * a, Fp::new(1, p));
        assert_eq!(a - b, Fp::new(-2, p));
    }

    #[test]
    fn fp_literals_adopt_modulus() {
        let one: Fp = One::one();
        let a = Fp::new(6, 7);
        assert_eq!(one + a, Fp::new(0, 7));
        assert!((a + Fp::new(1, 7)).is_zero());
    }
}

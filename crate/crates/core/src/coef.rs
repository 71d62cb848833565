//! Exact coefficients in `ℚ(√q)`.

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `a + b·√q` with `a, b` rational and `q` fixed for the run.
///
/// When `q` is a perfect square the `b` part is folded into `a`, so equal
/// values always have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HallCoef {
    a: BigRational,
    b: BigRational,
    q: u64,
}

fn int_sqrt(q: u64) -> Option<u64> {
    let r = q.sqrt();
    (r * r == q).then_some(r)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl HallCoef {
    pub fn new(a: BigRational, b: BigRational, q: u64) -> Self {
        HallCoef { a, b, q }.canonical()
    }

    fn canonical(mut self) -> Self {
        if !self.b.is_zero() {
            if let Some(r) = int_sqrt(self.q) {
                let b = core::mem::replace(&mut self.b, BigRational::zero());
                self.a += b * rat(r as i64);
            }
        }
        self
    }

    pub fn zero(q: u64) -> Self {
        HallCoef {
            a: BigRational::zero(),
            b: BigRational::zero(),
            q,
        }
    }

    pub fn one(q: u64) -> Self {
        Self::from_int(1, q)
    }

    pub fn from_int(n: i64, q: u64) -> Self {
        HallCoef {
            a: rat(n),
            b: BigRational::zero(),
            q,
        }
    }

    pub fn from_big(n: BigInt, q: u64) -> Self {
        HallCoef {
            a: BigRational::from_integer(n),
            b: BigRational::zero(),
            q,
        }
    }

    pub fn from_rational(r: BigRational, q: u64) -> Self {
        HallCoef {
            a: r,
            b: BigRational::zero(),
            q,
        }
    }

    /// `n / d` for machine integers.
    pub fn ratio(n: i128, d: i128, q: u64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)), q)
    }

    /// `v^n` with `v = √q`: `q^{⌊n/2⌋}·(√q)^{n mod 2}`, negative `n` allowed.
    pub fn v_pow(n: i64, q: u64) -> Self {
        let half = n.div_euclid(2);
        let odd = n.rem_euclid(2) == 1;
        let base = BigRational::from_integer(BigInt::from(q));
        let power = if half >= 0 {
            num_traits::pow(base, half as usize)
        } else {
            num_traits::pow(base, (-half) as usize).recip()
        };
        if odd {
            HallCoef::new(BigRational::zero(), power, q)
        } else {
            HallCoef::from_rational(power, q)
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// The value as a rational when the `√q` part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.q, other.q, "coefficients from runs with different q");
    }

    /// `(a − b√q) / (a² − b²q)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let qq = rat(self.q as i64);
        let norm = &self.a * &self.a - &self.b * &self.b * qq;
        Ok(HallCoef::new(&self.a / &norm, -&self.b / &norm, self.q))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let r = rat(n);
        HallCoef {
            a: &self.a * &r,
            b: &self.b * &r,
            q: self.q,
        }
    }

    /// `"a + b·sqrt(q)"`-style rendering with zero parts omitted.
    pub fn render(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for HallCoef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a_zero = self.a.is_zero();
        let b_zero = self.b.is_zero();
        if a_zero && b_zero {
            return f.write_str("0");
        }
        if !a_zero {
            write!(f, "{}", self.a)?;
        }
        if !b_zero {
            let mag = self.b.abs();
            let sign = if self.b.is_negative() { "-" } else { "+" };
            if a_zero {
                if self.b.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "sqrt({})", self.q)?;
            } else {
                write!(f, "{}·sqrt({})", mag, self.q)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a HallCoef> for &'a HallCoef {
    type Output = HallCoef;
    fn add(self, rhs: &HallCoef) -> HallCoef {
        self.check(rhs);
        HallCoef {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            q: self.q,
        }
    }
}

impl Add for HallCoef {
    type Output = HallCoef;
    fn add(self, rhs: HallCoef) -> HallCoef {
        &self + &rhs
    }
}

impl AddAssign<&HallCoef> for HallCoef {
    fn add_assign(&mut self, rhs: &HallCoef) {
        self.check(rhs);
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl<'a> Sub<&'a HallCoef> for &'a HallCoef {
    type Output = HallCoef;
    fn sub(self, rhs: &HallCoef) -> HallCoef {
        self.check(rhs);
        HallCoef {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            q: self.q,
        }
    }
}

impl Sub for HallCoef {
    type Output = HallCoef;
    fn sub(self, rhs: HallCoef) -> HallCoef {
        &self - &rhs
    }
}

impl<'a> Mul<&'a HallCoef> for &'a HallCoef {
    type Output = HallCoef;
    fn mul(self, rhs: &HallCoef) -> HallCoef {
        self.check(rhs);
        let qq = rat(self.q as i64);
        HallCoef::new(
            &self.a * &rhs.a + &self.b * &rhs.b * qq,
            &self.a * &rhs.b + &self.b * &rhs.a,
            self.q,
        )
    }
}

impl Mul for HallCoef {
    type Output = HallCoef;
    fn mul(self, rhs: HallCoef) -> HallCoef {
        &self * &rhs
    }
}

impl Neg for HallCoef {
    type Output = HallCoef;
    fn neg(self) -> HallCoef {
        HallCoef {
            a: -self.a,
            b: -self.b,
            q: self.q,
        }
    }
}

impl Neg for &HallCoef {
    type Output = HallCoef;
    fn neg(self) -> HallCoef {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn c(a: (i64, i64), b: (i64, i64), q: u64) -> HallCoef {
        HallCoef::new(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
            q,
        )
    }

    #[test]
    fn v_powers() {
        assert_eq!(HallCoef::v_pow(0, 2), HallCoef::one(2));
        assert_eq!(HallCoef::v_pow(2, 2), HallCoef::from_int(2, 2));
        assert_eq!(HallCoef::v_pow(-1, 2), c((0, 1), (1, 2), 2));
        assert_eq!(HallCoef::v_pow(-3, 3), c((0, 1), (1, 9), 3));
        assert_eq!(HallCoef::v_pow(1, 4), HallCoef::from_int(2, 4));
        assert_eq!(HallCoef::v_pow(-1, 4), HallCoef::ratio(1, 2, 4));
        for n in -5..5 {
            assert_eq!(&HallCoef::v_pow(n, 3) * &HallCoef::v_pow(-n, 3), HallCoef::one(3));
        }
    }

    #[test]
    fn perfect_square_folds() {
        let x = c((1, 1), (1, 1), 9);
        assert!(x.b().is_zero());
        assert_eq!(x, HallCoef::from_int(4, 9));
    }

    #[test]
    fn rendering() {
        assert_eq!(HallCoef::zero(2).to_string(), "0");
        assert_eq!(HallCoef::ratio(-1, 2, 2).to_string(), "-1/2");
        assert_eq!(c((0, 1), (1, 2), 2).to_string(), "1/2·sqrt(2)");
        assert_eq!(c((1, 1), (-1, 1), 2).to_string(), "1 - sqrt(2)");
        assert_eq!(c((0, 1), (-1, 1), 3).to_string(), "-sqrt(3)");
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(HallCoef::zero(2).inv(), Err(Error::DivisionByZero));
    }

    proptest! {
        #[test]
        fn field_operations(a in -20i64..20, b in -20i64..20, d in 1i64..7,
                            x in -20i64..20, y in -20i64..20, q in prop::sample::select(vec![2u64, 3, 4, 5, 9])) {
            let u = c((a, d), (b, 1), q);
            let w = c((x, 1), (y, d), q);
            // distributivity and commutativity
            prop_assert_eq!(&u * &w, &w * &u);
            let s = &u + &w;
            prop_assert_eq!(&s * &u, &(&u * &u) + &(&w * &u));
            prop_assert_eq!(&(&u - &w) + &w, u.clone());
            if !u.is_zero() {
                prop_assert_eq!(&u * &u.inv().unwrap(), HallCoef::one(q));
            }
        }
    }
}

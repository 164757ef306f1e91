use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Exact complex rational scalar `re + im*i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coefficient {
    re: BigRational,
    im: BigRational,
}

impl Coefficient {
    pub fn new(re: BigRational, im: BigRational) -> Coefficient {
        Coefficient { re, im }
    }

    pub fn zero() -> Coefficient {
        Coefficient::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Coefficient {
        Coefficient::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Coefficient {
        Coefficient::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Coefficient {
        Coefficient::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// num/den as a real rational. Panics on a zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Coefficient {
        Coefficient::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Coefficient {
        Coefficient::new(self.re.clone(), -self.im.clone())
    }

    /// Exact reciprocal; None for zero.
    pub fn inverse(&self) -> Option<Coefficient> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Coefficient::new(&self.re / &norm, -&self.im / &norm))
    }

    /// Sign convention used by the printer: a coefficient is displayed with a
    /// leading minus when its real part is negative, or when it is purely
    /// imaginary with negative imaginary part.
    pub fn is_display_negative(&self) -> bool {
        if !self.re.is_zero() {
            self.re.is_negative()
        } else {
            self.im.is_negative()
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl std::ops::Add for Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Coefficient) -> Coefficient {
        Coefficient::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl std::ops::Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Coefficient) -> Coefficient {
        Coefficient::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl std::ops::Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient::new(-self.re, -self.im)
    }
}

impl std::ops::Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Coefficient) -> Coefficient {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Coefficient::new(re, im)
    }
}

impl std::ops::Mul<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        self.clone() * rhs.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = Coefficient::from_ratio(3, 2);
        let b = Coefficient::i() * Coefficient::from_int(2);
        let s = a.clone() + b.clone();
        assert_eq!(s.re(), Coefficient::from_ratio(3, 2).re());
        let p = s.clone() * s.clone().conj();
        // |3/2 + 2i|^2 = 9/4 + 4 = 25/4
        assert_eq!(p, Coefficient::from_ratio(25, 4));
        let inv = s.inverse().unwrap();
        assert_eq!(s * inv, Coefficient::one());
        assert_eq!(Coefficient::zero().inverse(), None);
        assert_eq!(a - Coefficient::from_ratio(3, 2), Coefficient::zero());
        assert_eq!(-b.clone() * b, Coefficient::from_int(4));
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(
            Coefficient::i() * Coefficient::i(),
            Coefficient::from_int(-1)
        );
    }

    #[test]
    fn display_sign() {
        assert!(Coefficient::from_int(-2).is_display_negative());
        assert!((-Coefficient::i()).is_display_negative());
        assert!(!Coefficient::i().is_display_negative());
        // Real part wins for mixed coefficients.
        let z = Coefficient::from_int(1) + -Coefficient::i();
        assert!(!z.is_display_negative());
    }
}

//! Integer-coefficient polynomials in the single variable `p`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in `p` with arbitrary-precision integer coefficients.
///
/// `coeffs[d]` multiplies `p^d`. Trailing zeros are always stripped, so the
/// zero polynomial has no coefficients and equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyP {
    coeffs: Vec<BigInt>,
}

impl PolyP {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut poly = Self { coeffs };
        poly.normalize();
        poly
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The monomial `c * p^degree`.
    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        Self::new(coeffs)
    }

    /// `c * p^a * (1 - p)^b` expanded with exact binomial coefficients.
    pub fn bernstein_term(c: &BigInt, a: usize, b: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); a + b + 1];
        let mut binom = BigInt::one();
        for l in 0..=b {
            let term = c * &binom;
            coeffs[a + l] = if l % 2 == 0 { term } else { -term };
            binom = binom * BigInt::from(b - l) / BigInt::from(l + 1);
        }
        Self::new(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self, c: &BigInt) -> bool {
        match self.coeffs.as_slice() {
            [] => c.is_zero(),
            [only] => only == c,
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.is_constant(&BigInt::one())
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, p: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * p + BigRational::from(c.clone())
            })
    }
}

/// Exact evaluation of `poly` at the rational `p`.
pub fn eval_poly(poly: &PolyP, p: &BigRational) -> BigRational {
    poly.eval(p)
}

impl Add<&PolyP> for &PolyP {
    type Output = PolyP;

    fn add(self, rhs: &PolyP) -> PolyP {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PolyP {
    type Output = PolyP;

    fn add(mut self, rhs: PolyP) -> PolyP {
        self += &rhs;
        self
    }
}

impl AddAssign<&PolyP> for PolyP {
    fn add_assign(&mut self, rhs: &PolyP) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.normalize();
    }
}

impl Neg for &PolyP {
    type Output = PolyP;

    fn neg(self) -> PolyP {
        PolyP {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub<&PolyP> for &PolyP {
    type Output = PolyP;

    fn sub(self, rhs: &PolyP) -> PolyP {
        self + &(-rhs)
    }
}

impl Mul<&PolyP> for &PolyP {
    type Output = PolyP;

    fn mul(self, rhs: &PolyP) -> PolyP {
        if self.is_zero() || rhs.is_zero() {
            return PolyP::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyP::new(coeffs)
    }
}

impl std::iter::Sum for PolyP {
    fn sum<I: Iterator<Item = PolyP>>(iter: I) -> PolyP {
        iter.fold(PolyP::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

/// Human-readable form, highest degree first: `-p^2 + 2p`.
impl fmt::Display for PolyP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if d == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => f.write_str("p")?,
                _ => write!(f, "p^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_form() {
        assert!(PolyP::from_i64s(&[0, 0]).is_zero());
        assert_eq!(PolyP::from_i64s(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert_eq!(PolyP::from_i64s(&[3]).degree(), Some(0));
        assert_eq!(PolyP::zero().degree(), None);
    }

    #[test]
    fn evaluation() {
        let two_p_minus_p2 = PolyP::from_i64s(&[0, 2, -1]);
        assert_eq!(eval_poly(&two_p_minus_p2, &q(1, 2)), q(3, 4));
        assert_eq!(eval_poly(&PolyP::monomial(1, 2), &q(1, 3)), q(1, 9));
        let poly = PolyP::from_i64s(&[7, -3, 5]);
        assert_eq!(poly.eval(&q(0, 1)), q(7, 1));
        assert_eq!(PolyP::zero().eval(&q(5, 7)), q(0, 1));
    }

    #[test]
    fn bernstein_expansion() {
        // 1 - (1 - p)^2 = 2p - p^2
        let one = PolyP::constant(1);
        let sq = PolyP::bernstein_term(&BigInt::one(), 0, 2);
        assert_eq!(&one - &sq, PolyP::from_i64s(&[0, 2, -1]));
        // 3 p (1-p)^3
        let t = PolyP::bernstein_term(&BigInt::from(3), 1, 3);
        assert_eq!(t, PolyP::from_i64s(&[0, 3, -9, 9, -3]));
        let via_mul = &PolyP::from_i64s(&[0, 3])
            * &(&(&PolyP::from_i64s(&[1, -1]) * &PolyP::from_i64s(&[1, -1]))
                * &PolyP::from_i64s(&[1, -1]));
        assert_eq!(t, via_mul);
    }

    #[test]
    fn display() {
        assert_eq!(PolyP::from_i64s(&[0, 2, -1]).to_string(), "-p^2 + 2p");
        assert_eq!(PolyP::from_i64s(&[1]).to_string(), "1");
        assert_eq!(PolyP::from_i64s(&[-1, 0, 3]).to_string(), "3p^2 - 1");
        assert_eq!(PolyP::zero().to_string(), "0");
    }
}

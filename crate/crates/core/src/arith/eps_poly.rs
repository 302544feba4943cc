//! Dense univariate polynomials in the regulator `ε` with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;

/// Coefficients in ascending degree; empty for zero, otherwise the last
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EpsPoly {
    coeffs: Vec<Rational>,
}

impl EpsPoly {
    fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        EpsPoly { coeffs }.normalize()
    }

    pub fn zero() -> Self {
        EpsPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `ε`.
    pub fn eps() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Multiplicity of the root `ε = 0`; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        EpsPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Divides out `ε^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        EpsPoly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&(Rational::one() / l)),
        }
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &EpsPoly) -> (EpsPoly, EpsPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &EpsPoly) -> EpsPoly {
        if self.degree() == Some(0) || other.degree() == Some(0) {
            return Self::one();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Power-series inverse modulo `ε^len`; requires a nonzero constant term.
    pub fn series_inverse(&self, len: usize) -> Vec<Rational> {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "series inverse needs a unit constant term");
        let mut inv = vec![Rational::zero(); len];
        if len == 0 {
            return inv;
        }
        inv[0] = Rational::one() / &c0;
        for k in 1..len {
            let mut s = Rational::zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s += &self.coeffs[j] * &inv[k - j];
            }
            inv[k] = -s / &c0;
        }
        inv
    }
}

impl Add for &EpsPoly {
    type Output = EpsPoly;
    fn add(self, o: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        EpsPoly::from_coeffs(coeffs)
    }
}

impl Sub for &EpsPoly {
    type Output = EpsPoly;
    fn sub(self, o: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        EpsPoly::from_coeffs(coeffs)
    }
}

impl Mul for &EpsPoly {
    type Output = EpsPoly;
    fn mul(self, o: &EpsPoly) -> EpsPoly {
        if self.is_zero() || o.is_zero() {
            return EpsPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        EpsPoly::from_coeffs(c)
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ε")?,
                _ => write!(f, "({c})ε^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(cs: &[i64]) -> EpsPoly {
        EpsPoly::from_coeffs(cs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (ε+1)(ε+2) and (ε+1)(ε-3)
        let a = p(&[2, 3, 1]);
        let b = p(&[-3, -2, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        let (q, r) = a.div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn series_inverse_of_one_minus_eps() {
        let inv = p(&[1, -1]).series_inverse(4);
        assert!(inv.iter().all(|c| *c == rat(1, 1)));
    }
}

//! Rational functions of the regulator `ε`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{EpsPoly, Rational};

/// An exact element of `Q(ε)`, stored as `num/den` with `gcd(num, den) = 1`
/// and `den` monic. Zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegulatedScalar {
    num: EpsPoly,
    den: EpsPoly,
}

/// Behaviour of a regulated value as `ε → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(Rational),
    /// `leading · ε^{-order}` is the most singular term.
    Pole { order: usize, leading: Rational },
}

impl RegulatedScalar {
    pub fn zero() -> Self {
        RegulatedScalar {
            num: EpsPoly::zero(),
            den: EpsPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RegulatedScalar {
            num: EpsPoly::constant(c),
            den: EpsPoly::one(),
        }
    }

    /// `base + reg·ε`.
    pub fn affine(base: Rational, reg: Rational) -> Self {
        RegulatedScalar {
            num: EpsPoly::from_coeffs(vec![base, reg]),
            den: EpsPoly::one(),
        }
    }

    pub fn eps() -> Self {
        Self::affine(Rational::zero(), Rational::one())
    }

    /// Builds `num/den` and brings it to canonical form.
    pub fn from_parts(num: EpsPoly, den: EpsPoly) -> Self {
        assert!(!den.is_zero(), "regulated scalar with zero denominator");
        Self::canonical(num, den)
    }

    fn canonical(num: EpsPoly, den: EpsPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.degree() == Some(0) {
            let inv = Rational::one() / den.coeff(0);
            return RegulatedScalar {
                num: num.scale(&inv),
                den: EpsPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = d.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = Rational::one() / lead;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RegulatedScalar { num: n, den: d }
    }

    /// `num / (c · Π (f0 + f1·ε))`. Common factors are cancelled by testing the
    /// numerator at each root, which avoids general polynomial gcds.
    pub fn from_linear_factors(num: EpsPoly, c: &Rational, factors: &[(Rational, Rational)]) -> Self {
        assert!(!c.is_zero(), "regulated scalar with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let mut num = num.scale(&(Rational::one() / c));
        let mut den = EpsPoly::one();
        for (f0, f1) in factors {
            if f1.is_zero() {
                assert!(!f0.is_zero(), "regulated scalar with zero denominator");
                num = num.scale(&(Rational::one() / f0));
                continue;
            }
            // f0 + f1·ε = f1·(ε − r)
            let r = -(f0 / f1);
            let root = EpsPoly::from_coeffs(vec![-r.clone(), Rational::one()]);
            if num.eval(&r).is_zero() {
                num = num.div_rem(&root).0;
            } else {
                den = &den * &root;
            }
            num = num.scale(&(Rational::one() / f1));
        }
        RegulatedScalar { num, den }
    }

    pub fn numerator(&self) -> &EpsPoly {
        &self.num
    }

    pub fn denominator(&self) -> &EpsPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value does not depend on `ε`.
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.degree().unwrap_or(0) == 0
    }

    /// The value at a rational point; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Order of vanishing at `ε = 0` (negative for poles); `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().unwrap() as i64;
        Some(vn - vd)
    }

    pub fn limit(&self) -> Limit {
        regulated_limit(self)
    }

    /// Coefficient of `ε^order` in the Laurent expansion around `ε = 0`.
    pub fn laurent_coeff(&self, order: i64) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let k = self.den.valuation().unwrap();
        // self = ε^{-k} · num / den', den'(0) ≠ 0
        let shifted = order + k as i64;
        if shifted < 0 {
            return Rational::zero();
        }
        let s = shifted as usize;
        let den_unit = self.den.shift_down(k);
        let inv = den_unit.series_inverse(s + 1);
        (0..=s).fold(Rational::zero(), |acc, i| acc + self.num.coeff(i) * &inv[s - i])
    }
}

/// Finite value or leading pole term of `v` at `ε = 0`.
pub fn regulated_limit(v: &RegulatedScalar) -> Limit {
    let k = v.den.valuation().unwrap();
    if k == 0 {
        return Limit::Finite(v.num.coeff(0) / v.den.coeff(0));
    }
    // Canonical form means ε does not divide the numerator here.
    let leading = v.num.coeff(0) / v.den.coeff(k);
    Limit::Pole { order: k, leading }
}

impl Add for &RegulatedScalar {
    type Output = RegulatedScalar;
    fn add(self, o: &RegulatedScalar) -> RegulatedScalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RegulatedScalar::canonical(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() || o.den.is_one() {
            // one side is a polynomial: the sum stays coprime to the other denominator
            let (p, q) = if self.den.is_one() { (self, o) } else { (o, self) };
            return RegulatedScalar {
                num: &(&p.num * &q.den) + &q.num,
                den: q.den.clone(),
            };
        }
        // Henrici: only the common factor of the denominators can cancel
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            if num.is_zero() {
                return RegulatedScalar::zero();
            }
            return RegulatedScalar {
                num,
                den: &self.den * &o.den,
            };
        }
        let d1 = self.den.div_rem(&g).0;
        let d2 = o.den.div_rem(&g).0;
        let num = &(&self.num * &d2) + &(&o.num * &d1);
        if num.is_zero() {
            return RegulatedScalar::zero();
        }
        let h = num.gcd(&g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (num.div_rem(&h).0, g.div_rem(&h).0)
        };
        RegulatedScalar {
            num,
            den: &(&d1 * &d2) * &g,
        }
    }
}

impl Sub for &RegulatedScalar {
    type Output = RegulatedScalar;
    fn sub(self, o: &RegulatedScalar) -> RegulatedScalar {
        self + &(-o)
    }
}

impl Mul for &RegulatedScalar {
    type Output = RegulatedScalar;
    fn mul(self, o: &RegulatedScalar) -> RegulatedScalar {
        if self.is_zero() || o.is_zero() {
            return RegulatedScalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RegulatedScalar {
                num: &self.num * &o.num,
                den: EpsPoly::one(),
            };
        }
        // cross-cancel before multiplying
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        RegulatedScalar {
            num: &n1 * &n2,
            den: &d1 * &d2,
        }
    }
}

/// Removes the common factor of `n` and the monic `d`; the result keeps `d` monic.
fn cancel(n: &EpsPoly, d: &EpsPoly) -> (EpsPoly, EpsPoly) {
    if d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = n.gcd(d);
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.div_rem(&g).0, d.div_rem(&g).0)
    }
}

impl Div for &RegulatedScalar {
    type Output = RegulatedScalar;
    fn div(self, o: &RegulatedScalar) -> RegulatedScalar {
        assert!(!o.is_zero(), "division by zero regulated scalar");
        RegulatedScalar::canonical(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RegulatedScalar {
    type Output = RegulatedScalar;
    fn neg(self) -> RegulatedScalar {
        RegulatedScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RegulatedScalar {
            type Output = RegulatedScalar;
            fn $m(self, o: RegulatedScalar) -> RegulatedScalar {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RegulatedScalar {
    type Output = RegulatedScalar;
    fn neg(self) -> RegulatedScalar {
        -&self
    }
}

impl Zero for RegulatedScalar {
    fn zero() -> Self {
        RegulatedScalar::zero()
    }
    fn is_zero(&self) -> bool {
        RegulatedScalar::is_zero(self)
    }
}

impl One for RegulatedScalar {
    fn one() -> Self {
        RegulatedScalar::one()
    }
}

impl fmt::Display for RegulatedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn eps() -> RegulatedScalar {
        RegulatedScalar::eps()
    }

    fn c(p: i64, q: i64) -> RegulatedScalar {
        RegulatedScalar::constant(rat(p, q))
    }

    #[test]
    fn cancellation_gives_canonical_form() {
        // (ε² + ε) / ε = ε + 1
        let v = &(&(&eps() * &eps()) + &eps()) / &eps();
        assert_eq!(v, RegulatedScalar::affine(rat(1, 1), rat(1, 1)));
        assert_eq!(v.limit(), Limit::Finite(rat(1, 1)));
    }

    #[test]
    fn pole_and_laurent() {
        // (1 + 2ε) / (3ε²)
        let v = &RegulatedScalar::affine(rat(1, 1), rat(2, 1)) / &(&c(3, 1) * &(&eps() * &eps()));
        assert_eq!(
            v.limit(),
            Limit::Pole {
                order: 2,
                leading: rat(1, 3)
            }
        );
        assert_eq!(v.laurent_coeff(-2), rat(1, 3));
        assert_eq!(v.laurent_coeff(-1), rat(2, 3));
        assert_eq!(v.laurent_coeff(0), rat(0, 1));
        assert_eq!(v.valuation(), Some(-2));
    }

    #[test]
    fn laurent_of_geometric_series() {
        // 1 / (1 - ε) = Σ ε^k
        let v = &c(1, 1) / &(&c(1, 1) - &eps());
        for k in 0..5 {
            assert_eq!(v.laurent_coeff(k), rat(1, 1));
        }
    }

    #[test]
    fn sums_that_cancel_are_zero() {
        let a = &c(1, 1) / &eps();
        assert!((&a - &a).is_zero());
    }
}

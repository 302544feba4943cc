//! Polynomial test functions and the real sl(2) generator action on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Rational, Scalar};
use crate::error::{Error, Result};

/// A polynomial in `x`, coefficients ascending by degree, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<S = Rational> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![S::zero(); k + 1];
        c[k] = S::one();
        Poly { coeffs: c }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(c)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![S::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Poly { coeffs: c }
    }

    /// The `k`-th derivative.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, c)| {
                // i!/(i-k)!
                let f = ((i - k + 1)..=i).fold(S::one(), |acc, t| acc * S::from_i64(t as i64));
                c.clone() * f
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}·x"),
                _ => format!("{c}·x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// The sl(2) generators in their real form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorTag {
    P,
    D,
    K,
}

impl GeneratorTag {
    pub const ALL: [GeneratorTag; 3] = [GeneratorTag::P, GeneratorTag::D, GeneratorTag::K];
}

/// `P = ∂`, `D = x∂ + (1−a)`, `K = x²∂ + 2(1−a)x` acting on `π_a`.
pub fn sl2_apply<S: Scalar>(g: GeneratorTag, a: &S, f: &Poly<S>) -> Poly<S> {
    let df = f.derivative(1);
    let one_minus_a = S::one() - a.clone();
    match g {
        GeneratorTag::P => df,
        GeneratorTag::D => df.shift(1).add(&f.scale(&one_minus_a)),
        GeneratorTag::K => df
            .shift(2)
            .add(&f.shift(1).scale(&(one_minus_a.clone() + one_minus_a))),
    }
}

/// The Leibniz expansion of `Δg`: the `i`-th tuple has `g` applied in slot `i`.
pub fn coproduct_apply<S: Scalar>(
    g: GeneratorTag,
    dims: &[S],
    fs: &[Poly<S>],
) -> Result<Vec<Vec<Poly<S>>>> {
    if dims.len() != fs.len() || fs.is_empty() {
        return Err(Error::LengthMismatch {
            expected: dims.len().max(1),
            got: fs.len(),
        });
    }
    Ok((0..fs.len())
        .map(|i| {
            let mut t = fs.to_vec();
            t[i] = sl2_apply(g, &dims[i], &fs[i]);
            t
        })
        .collect())
}

use num_bigint::BigInt;

use super::{Rational, Scalar};

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`; `(x)_0 = 1`.
pub fn pochhammer<S: Scalar>(x: &S, n: usize) -> S {
    let mut acc = S::one();
    for k in 0..n {
        acc = acc * (x.clone() + S::from_i64(k as i64));
    }
    acc
}

pub fn pochhammer_rational(x: &Rational, n: usize) -> Rational {
    pochhammer(x, n)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

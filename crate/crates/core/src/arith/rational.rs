use num_bigint::BigInt;
use num_rational::BigRational;
use std::str::FromStr;

/// Exact rational number in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

/// Shorthand constructor `p/q`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Parses `"p/q"` or `"p"`. Surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let r = Rational::from_str(s).ok()?;
    Some(r)
}

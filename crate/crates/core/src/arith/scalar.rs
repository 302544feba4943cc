use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Rational, RegulatedScalar};

/// Exact field element usable by the intertwiner and matrix code.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Send
    + Sync
{
    fn from_rational(r: &Rational) -> Self;
    /// Value of a (possibly regulated) scaling dimension.
    fn from_dim(d: Dim) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }
}

/// A scaling dimension `base + reg·ε`.
///
/// Physical dimensions are integers; the regulator part makes singular
/// matrix entries well-defined rational functions. Summation indices of
/// intertwiners only ever depend on `base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim {
    pub base: i64,
    pub reg: i64,
}

impl Dim {
    pub const fn new(base: i64, reg: i64) -> Self {
        Dim { base, reg }
    }

    pub const fn int(base: i64) -> Self {
        Dim { base, reg: 0 }
    }

    pub fn is_regulated(&self) -> bool {
        self.reg != 0
    }
}

impl Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reg {
            0 => write!(f, "{}", self.base),
            r => write!(f, "{}{:+}ε", self.base, r),
        }
    }
}

impl Add for Dim {
    type Output = Dim;
    fn add(self, o: Dim) -> Dim {
        Dim::new(self.base + o.base, self.reg + o.reg)
    }
}

impl Sub for Dim {
    type Output = Dim;
    fn sub(self, o: Dim) -> Dim {
        Dim::new(self.base - o.base, self.reg - o.reg)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_dim(d: Dim) -> Self {
        assert_eq!(d.reg, 0, "regulated dimension {d} used with plain rationals");
        Rational::from_integer(d.base.into())
    }
}

impl Scalar for RegulatedScalar {
    fn from_rational(r: &Rational) -> Self {
        RegulatedScalar::constant(r.clone())
    }
    fn from_dim(d: Dim) -> Self {
        RegulatedScalar::affine(
            Rational::from_integer(d.base.into()),
            Rational::from_integer(d.reg.into()),
        )
    }
}

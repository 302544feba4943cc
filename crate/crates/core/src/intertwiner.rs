//! Local intertwiners `λ^c_{ab}` and the multi-argument bases `T` built from them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::arith::{pochhammer, Dim, Rational, Scalar};
use crate::error::{Error, Result};
use crate::testfn::Poly;

fn sign<S: Scalar>(k: usize) -> S {
    if k % 2 == 0 {
        S::one()
    } else {
        -S::one()
    }
}

fn inv_factorial<S: Scalar>(n: usize) -> S {
    S::one() / pochhammer(&S::one(), n)
}

/// Coefficient `λ^c_{ab}(p,q)` for (possibly regulated) dimensions.
///
/// The support `p + q = a+b−c−1` only looks at the integer parts.
pub fn lambda_coeff_dim<S: Scalar>(a: Dim, b: Dim, c: Dim, p: usize, q: usize) -> S {
    let n = a.base + b.base - c.base - 1;
    if n < 0 || (p + q) as i64 != n {
        return S::zero();
    }
    let cba = S::from_dim(c + b - a);
    let cab = S::from_dim(c + a - b);
    sign::<S>(q) * pochhammer(&cba, p) * inv_factorial::<S>(p) * pochhammer(&cab, q) * inv_factorial::<S>(q)
}

/// `λ^c_{ab}(p,q) = (−1)^q (c+b−a)_p/p! · (c+a−b)_q/q!` for `p+q = a+b−c−1`, else 0.
pub fn lambda_coeff(a: i64, b: i64, c: i64, p: usize, q: usize) -> Rational {
    lambda_coeff_dim(Dim::int(a), Dim::int(b), Dim::int(c), p, q)
}

/// The full table `(p, q) ↦ λ^c_{ab}(p,q)`; empty when `c ≥ a+b`.
pub fn lambda_table(a: i64, b: i64, c: i64) -> BTreeMap<(usize, usize), Rational> {
    let n = a + b - c - 1;
    if n < 0 {
        return BTreeMap::new();
    }
    let n = n as usize;
    (0..=n)
        .map(|p| ((p, n - p), lambda_coeff(a, b, c, p, n - p)))
        .collect()
}

/// `λ^c_{ab}(f, g) = Σ λ(p,q) ∂^p f · ∂^q g`.
pub fn lambda_apply_dim<S: Scalar>(a: Dim, b: Dim, c: Dim, f: &Poly<S>, g: &Poly<S>) -> Poly<S> {
    let n = a.base + b.base - c.base - 1;
    if n < 0 {
        return Poly::zero();
    }
    let n = n as usize;
    (0..=n).fold(Poly::zero(), |acc, p| {
        let coeff: S = lambda_coeff_dim(a, b, c, p, n - p);
        if coeff.is_zero() {
            return acc;
        }
        acc.add(&f.derivative(p).mul(&g.derivative(n - p)).scale(&coeff))
    })
}

pub fn lambda_apply(a: i64, b: i64, c: i64, f: &Poly, g: &Poly) -> Poly {
    lambda_apply_dim(Dim::int(a), Dim::int(b), Dim::int(c), f, g)
}

/// A binary nesting pattern with ordered leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BracketScheme {
    Leaf,
    Node(Box<BracketScheme>, Box<BracketScheme>),
}

impl BracketScheme {
    pub fn node(l: BracketScheme, r: BracketScheme) -> Self {
        BracketScheme::Node(Box::new(l), Box::new(r))
    }

    /// Right comb `(1,(2,(…,n)))`, the default scheme.
    pub fn right_comb(n: usize) -> Self {
        assert!(n >= 1);
        if n == 1 {
            BracketScheme::Leaf
        } else {
            Self::node(BracketScheme::Leaf, Self::right_comb(n - 1))
        }
    }

    /// Left comb `((…(1,2),…),n)`; for three arguments this is the S-scheme.
    pub fn left_comb(n: usize) -> Self {
        assert!(n >= 1);
        if n == 1 {
            BracketScheme::Leaf
        } else {
            Self::node(Self::left_comb(n - 1), BracketScheme::Leaf)
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            BracketScheme::Leaf => 1,
            BracketScheme::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn is_default(&self) -> bool {
        *self == Self::right_comb(self.leaves())
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, next: &mut usize) -> fmt::Result {
        match self {
            BracketScheme::Leaf => {
                *next += 1;
                write!(f, "{}", *next)
            }
            BracketScheme::Node(l, r) => {
                write!(f, "(")?;
                l.write(f, next)?;
                write!(f, ",")?;
                r.write(f, next)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for BracketScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, &mut 0)
    }
}

impl FromStr for BracketScheme {
    type Err = Error;

    /// Parses forms like `(1,(2,3))`; leaf labels must read 1..n left to right.
    fn from_str(s: &str) -> Result<Self> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let mut next = 0;
        let bad = |msg: &str| Error::Invalid(format!("bracket scheme `{s}`: {msg}"));
        fn parse(
            t: &[char],
            pos: &mut usize,
            next: &mut usize,
            bad: &dyn Fn(&str) -> Error,
        ) -> Result<BracketScheme> {
            match t.get(*pos) {
                Some('(') => {
                    *pos += 1;
                    let l = parse(t, pos, next, bad)?;
                    if t.get(*pos) != Some(&',') {
                        return Err(bad("expected `,`"));
                    }
                    *pos += 1;
                    let r = parse(t, pos, next, bad)?;
                    if t.get(*pos) != Some(&')') {
                        return Err(bad("expected `)`"));
                    }
                    *pos += 1;
                    Ok(BracketScheme::node(l, r))
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = *pos;
                    while t.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                        *pos += 1;
                    }
                    let label: usize = t[start..*pos].iter().collect::<String>().parse().unwrap();
                    *next += 1;
                    if label != *next {
                        return Err(bad("leaves must be numbered 1..n in order"));
                    }
                    Ok(BracketScheme::Leaf)
                }
                _ => Err(bad("unexpected token")),
            }
        }
        let out = parse(&toks, &mut pos, &mut next, &bad)?;
        if pos != toks.len() {
            return Err(bad("trailing input"));
        }
        Ok(out)
    }
}

/// One element `T_B^m` of an intertwiner basis.
///
/// `m` lists one index per internal node of the scheme, in pre-order (root
/// first); for the default right comb this is `(m_1, …, m_{n−1})` from the
/// outside in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntertwinerBasisElement {
    pub scheme: BracketScheme,
    pub dims: Vec<Dim>,
    pub m: Vec<usize>,
    pub target: Dim,
}

impl IntertwinerBasisElement {
    pub fn new(scheme: BracketScheme, dims: Vec<Dim>, m: Vec<usize>) -> Result<Self> {
        let n = dims.len();
        if scheme.leaves() != n {
            return Err(Error::LengthMismatch {
                expected: scheme.leaves(),
                got: n,
            });
        }
        if m.len() + 1 != n {
            return Err(Error::LengthMismatch {
                expected: n - 1,
                got: m.len(),
            });
        }
        let target = node_dims(&scheme, &dims, &m)[0];
        Ok(IntertwinerBasisElement {
            scheme,
            dims,
            m,
            target,
        })
    }

    pub fn default_scheme(dims: Vec<Dim>, m: Vec<usize>) -> Result<Self> {
        Self::new(BracketScheme::right_comb(dims.len()), dims, m)
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn total_m(&self) -> usize {
        self.m.iter().sum()
    }
}

/// `M(a; e) = Σ a_i − e − n + 1` (integer parts).
pub fn total_degree(dims: &[Dim], e: i64) -> i64 {
    dims.iter().map(|d| d.base).sum::<i64>() - e - dims.len() as i64 + 1
}

/// All compositions of `total` into `parts` nonnegative parts, lexicographic.
pub fn compositions(parts: usize, total: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The basis of the intertwiner space `π_{a_1} × … × π_{a_n} → π_e` for a scheme.
///
/// Intermediate dimensions may come out nonpositive; such elements are kept.
pub fn enumerate_m_tuples(
    scheme: &BracketScheme,
    dims: &[Dim],
    e: i64,
) -> Vec<IntertwinerBasisElement> {
    let total = total_degree(dims, e);
    if total < 0 || dims.is_empty() {
        return Vec::new();
    }
    compositions(dims.len() - 1, total as usize)
        .into_iter()
        .map(|m| {
            IntertwinerBasisElement::new(scheme.clone(), dims.to_vec(), m)
                .expect("scheme arity checked by caller")
        })
        .collect()
}

/// Dimensions of the internal nodes in pre-order (first entry is the target).
pub fn node_dims(scheme: &BracketScheme, dims: &[Dim], m: &[usize]) -> Vec<Dim> {
    fn walk(
        s: &BracketScheme,
        dims: &[Dim],
        m: &[usize],
        leaf: &mut usize,
        node: &mut usize,
        out: &mut Vec<Dim>,
    ) -> Dim {
        match s {
            BracketScheme::Leaf => {
                *leaf += 1;
                dims[*leaf - 1]
            }
            BracketScheme::Node(l, r) => {
                let slot = out.len();
                let mi = m[*node];
                *node += 1;
                out.push(Dim::int(0));
                let dl = walk(l, dims, m, leaf, node, out);
                let dr = walk(r, dims, m, leaf, node, out);
                let d = dl + dr - Dim::int(mi as i64 + 1);
                out[slot] = d;
                d
            }
        }
    }
    let mut out = Vec::new();
    let mut leaf = 0;
    let mut node = 0;
    walk(scheme, dims, m, &mut leaf, &mut node, &mut out);
    out
}

/// Intermediate dimensions `(ε_1, …, ε_{n−2}, e)` of the default basis.
pub fn intermediate_dims(dims: &[Dim], m: &[usize]) -> Vec<Dim> {
    let mut nd = node_dims(&BracketScheme::right_comb(dims.len()), dims, m);
    if nd.is_empty() {
        return nd;
    }
    let e = nd.remove(0);
    nd.push(e);
    nd
}

/// Applies `T_B^m` to a tuple of polynomials.
pub fn t_apply<S: Scalar>(elem: &IntertwinerBasisElement, fs: &[Poly<S>]) -> Result<Poly<S>> {
    if fs.len() != elem.arity() {
        return Err(Error::LengthMismatch {
            expected: elem.arity(),
            got: fs.len(),
        });
    }
    fn walk<S: Scalar>(
        s: &BracketScheme,
        e: &IntertwinerBasisElement,
        fs: &[Poly<S>],
        leaf: &mut usize,
        node: &mut usize,
    ) -> (Poly<S>, Dim) {
        match s {
            BracketScheme::Leaf => {
                *leaf += 1;
                (fs[*leaf - 1].clone(), e.dims[*leaf - 1])
            }
            BracketScheme::Node(l, r) => {
                let mi = e.m[*node];
                *node += 1;
                let (pl, dl) = walk(l, e, fs, leaf, node);
                let (pr, dr) = walk(r, e, fs, leaf, node);
                let d = dl + dr - Dim::int(mi as i64 + 1);
                (lambda_apply_dim(dl, dr, d, &pl, &pr), d)
            }
        }
    }
    Ok(walk(&elem.scheme, elem, fs, &mut 0, &mut 0).0)
}

/// Map from derivative orders `(r_1,…,r_n)` to coefficients.
pub type MonomialTable<S> = BTreeMap<Vec<usize>, S>;

fn differentiate<S: Scalar>(t: &MonomialTable<S>) -> MonomialTable<S> {
    let mut out: MonomialTable<S> = BTreeMap::new();
    for (r, c) in t {
        for i in 0..r.len() {
            let mut k = r.clone();
            k[i] += 1;
            let e = out.entry(k).or_insert_with(S::zero);
            *e = e.clone() + c.clone();
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Coefficients of `∂^{r_1} f_1 ⋯ ∂^{r_n} f_n` in `T_B^m(f_1,…,f_n)`.
pub fn t_monomial_coeffs<S: Scalar>(elem: &IntertwinerBasisElement) -> MonomialTable<S> {
    fn walk<S: Scalar>(
        s: &BracketScheme,
        e: &IntertwinerBasisElement,
        leaf: &mut usize,
        node: &mut usize,
    ) -> (MonomialTable<S>, Dim) {
        match s {
            BracketScheme::Leaf => {
                *leaf += 1;
                (BTreeMap::from([(vec![0], S::one())]), e.dims[*leaf - 1])
            }
            BracketScheme::Node(l, r) => {
                let mi = e.m[*node];
                *node += 1;
                let (tl, dl) = walk::<S>(l, e, leaf, node);
                let (tr, dr) = walk::<S>(r, e, leaf, node);
                let d = dl + dr - Dim::int(mi as i64 + 1);
                let mut out: MonomialTable<S> = BTreeMap::new();
                let mut dtl = tl;
                let mut dtr_list = vec![tr];
                for _ in 0..mi {
                    let next = differentiate(dtr_list.last().unwrap());
                    dtr_list.push(next);
                }
                for p in 0..=mi {
                    let q = mi - p;
                    let coeff: S = lambda_coeff_dim(dl, dr, d, p, q);
                    if !coeff.is_zero() {
                        for (rl, cl) in &dtl {
                            for (rr, cr) in &dtr_list[q] {
                                let mut k = rl.clone();
                                k.extend_from_slice(rr);
                                let v = coeff.clone() * cl.clone() * cr.clone();
                                let ent = out.entry(k).or_insert_with(S::zero);
                                *ent = ent.clone() + v;
                            }
                        }
                    }
                    if p < mi {
                        dtl = differentiate(&dtl);
                    }
                }
                out.retain(|_, c| !c.is_zero());
                (out, d)
            }
        }
    }
    walk(&elem.scheme, elem, &mut 0, &mut 0).0
}

/// Evaluates a monomial table on polynomial inputs.
pub fn apply_monomial_table<S: Scalar>(t: &MonomialTable<S>, fs: &[Poly<S>]) -> Poly<S> {
    t.iter().fold(Poly::zero(), |acc, (r, c)| {
        let prod = r
            .iter()
            .zip(fs)
            .fold(Poly::constant(c.clone()), |p, (&k, f)| p.mul(&f.derivative(k)));
        acc.add(&prod)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn d(v: &[i64]) -> Vec<Dim> {
        v.iter().map(|&x| Dim::int(x)).collect()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_coeff(1, 1, 1, 0, 0), rat(1, 1));
        assert_eq!(lambda_coeff(2, 2, 2, 1, 0), rat(2, 1));
        assert_eq!(lambda_coeff(2, 2, 2, 0, 1), rat(-2, 1));
        assert_eq!(lambda_coeff(2, 1, 1, 1, 0), rat(0, 1));
        assert_eq!(lambda_coeff(2, 2, 2, 2, 0), rat(0, 1));
        assert!(lambda_table(2, 2, 4).is_empty());
    }

    #[test]
    fn lambda_apply_examples() {
        let x = Poly::from_i64(&[0, 1]);
        let one = Poly::from_i64(&[1]);
        assert_eq!(lambda_apply(1, 1, 1, &x, &one), x);
        let x2 = Poly::from_i64(&[0, 0, 1]);
        assert_eq!(lambda_apply(2, 2, 2, &x2, &x), Poly::from_i64(&[0, 0, 2]));
        assert!(lambda_apply(2, 2, 2, &one, &one).is_zero());
    }

    #[test]
    fn enumeration_examples() {
        let s = BracketScheme::right_comb(3);
        let b = enumerate_m_tuples(&s, &d(&[2, 2, 2]), 2);
        let ms: Vec<_> = b.iter().map(|e| e.m.clone()).collect();
        assert_eq!(ms, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let b = enumerate_m_tuples(&BracketScheme::right_comb(2), &d(&[1, 1]), 1);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].m, vec![0]);
        assert!(enumerate_m_tuples(&BracketScheme::right_comb(2), &d(&[2, 2]), 4).is_empty());
    }

    #[test]
    fn intermediate_dim_examples() {
        assert_eq!(intermediate_dims(&d(&[2, 2, 2]), &[1, 1]), d(&[2, 2]));
        assert_eq!(intermediate_dims(&d(&[2, 2, 2]), &[0, 2]), d(&[1, 2]));
        assert_eq!(intermediate_dims(&d(&[1, 1, 1]), &[0, 0]), d(&[1, 1]));
    }

    #[test]
    fn t_examples() {
        let e = IntertwinerBasisElement::default_scheme(d(&[2, 2, 2]), vec![0, 1]).unwrap();
        let table: MonomialTable<Rational> = t_monomial_coeffs(&e);
        let expected = BTreeMap::from([(vec![0, 1, 0], rat(2, 1)), (vec![0, 0, 1], rat(-2, 1))]);
        assert_eq!(table, expected);
        let e = IntertwinerBasisElement::default_scheme(d(&[1, 1, 1]), vec![0, 0]).unwrap();
        let x: Poly = Poly::from_i64(&[0, 1]);
        let one = Poly::from_i64(&[1]);
        assert_eq!(t_apply(&e, &[x.clone(), one.clone(), one]).unwrap(), x);
    }

    #[test]
    fn scheme_roundtrip() {
        for s in [
            BracketScheme::right_comb(4),
            BracketScheme::left_comb(4),
            "((1,2),(3,4))".parse().unwrap(),
        ] {
            assert_eq!(s.to_string().parse::<BracketScheme>().unwrap(), s);
        }
        assert!("(1,(3,2))".parse::<BracketScheme>().is_err());
        assert_eq!(BracketScheme::right_comb(3).to_string(), "(1,(2,3))");
    }
}

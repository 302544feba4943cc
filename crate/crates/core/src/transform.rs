//! Transformation matrices between permuted and re-bracketed intertwiner bases.
//!
//! All matrices use one layout: `entries[i][j]` is the coefficient of target
//! basis element `i` in the expansion of source basis element `j`. With that
//! layout, changes of basis compose by the ordinary matrix product, applied
//! right to left.
//!
//! Three-argument blocks (`Y`, `I`, `X`) are indexed by `m_2 = 0..=n` where the
//! m-tuple is `(n − m_2, m_2)`. General `Z` matrices are indexed by m-tuples in
//! lexicographic order, matching [`enumerate_m_tuples`].

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use once_cell::sync::Lazy;

use crate::arith::{binomial, pochhammer, Dim, EpsPoly, Rational, RegulatedScalar, Scalar};
use crate::error::{Error, Result};
use crate::intertwiner::{
    compositions, enumerate_m_tuples, node_dims, t_monomial_coeffs, total_degree, BracketScheme,
    IntertwinerBasisElement, MonomialTable,
};
use crate::linalg::Matrix;

pub type RMatrix = Matrix<RegulatedScalar>;

/// Genericity multipliers for the regulator: the k-th dimension of a tuple
/// (0-based) becomes `a_k + base^k ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum RegulatorSet {
    #[default]
    Pow3,
    Pow5,
}

impl RegulatorSet {
    pub fn base(self) -> i64 {
        match self {
            RegulatorSet::Pow3 => 3,
            RegulatorSet::Pow5 => 5,
        }
    }

    pub fn multiplier(self, k: usize) -> i64 {
        self.base().pow(k as u32)
    }

    pub fn regulate(self, dims: &[i64]) -> Vec<Dim> {
        dims.iter()
            .enumerate()
            .map(|(k, &a)| Dim::new(a, self.multiplier(k)))
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            RegulatorSet::Pow3 => "3pow",
            RegulatorSet::Pow5 => "5pow",
        }
    }
}

impl std::str::FromStr for RegulatorSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "3pow" => Ok(RegulatorSet::Pow3),
            "5pow" => Ok(RegulatorSet::Pow5),
            _ => Err(Error::Invalid(format!("unknown regulator set `{s}`"))),
        }
    }
}

fn sign<S: Scalar>(k: usize) -> S {
    if k % 2 == 0 {
        S::one()
    } else {
        -S::one()
    }
}

fn big<S: Scalar>(n: BigInt) -> S {
    S::from_rational(&Rational::from_integer(n))
}

fn lin<S: Scalar>(c: i64, terms: &[(i64, Dim)]) -> S {
    // c + Σ k·d
    terms
        .iter()
        .fold(S::from_i64(c), |acc, &(k, d)| acc + S::from_i64(k) * S::from_dim(d))
}

/// The closed-form expression for `Y_abc(n)`, rows `m̃_2`, columns `m_2`.
pub fn y_closed<S: Scalar>(a: Dim, b: Dim, c: Dim, n: usize) -> Matrix<S> {
    let ni = n as i64;
    Matrix::from_fn(n + 1, n + 1, |mt, m| {
        let (mti, mi) = (mt as i64, m as i64);
        let two_minus_2b: S = lin(2, &[(-2, b)]);
        let low: S = lin(-2 * mti - 2, &[(2, a), (2, b)]);
        // (low)_{mt−s} = (low)_{mt} / (low + mt − s)_s, so the sum shares one denominator
        let mut sum = S::zero();
        for s in 0..=mt.min(n - m) {
            let si = s as i64;
            let term = big::<S>(binomial(n - m, s) * binomial(n - s, mt - s))
                * pochhammer(&lin::<S>(ni + mi - si + 4, &[(-2, b), (-2, c)]), s)
                * pochhammer(&lin::<S>(si + 2, &[(-2, a)]), n - m - s)
                * pochhammer(&lin::<S>(ni - mti + 2, &[(-2, c)]), mt - s)
                * pochhammer(&(low.clone() + S::from_i64((mt - s) as i64)), s);
            sum = sum + term;
        }
        let num = sign::<S>(n - mt) * big::<S>(binomial(n, m)) * pochhammer(&two_minus_2b, m) * sum;
        let den = big::<S>(binomial(n, mt))
            * pochhammer(&two_minus_2b, mt)
            * pochhammer(&lin::<S>(2 * mti + 4, &[(-2, a), (-2, b)]), n - mt)
            * pochhammer(&low, mt);
        num / den
    })
}

/// `c + Σ k·d` as an affine polynomial `(f0, f1)` in `ε`.
fn affine(c: i64, terms: &[(i64, Dim)]) -> (i64, i64) {
    terms
        .iter()
        .fold((c, 0), |(x, y), &(k, d)| (x + k * d.base, y + k * d.reg))
}

fn poch_factors(x: (i64, i64), k: usize) -> impl Iterator<Item = (i64, i64)> {
    (0..k as i64).map(move |i| (x.0 + i, x.1))
}

fn affine_product(factors: impl Iterator<Item = (i64, i64)>) -> EpsPoly {
    factors.fold(EpsPoly::one(), |acc, (f0, f1)| {
        &acc * &EpsPoly::from_coeffs(vec![Rational::from_integer(f0.into()), Rational::from_integer(f1.into())])
    })
}

/// [`y_closed`] over `Q(ε)`, built as one polynomial over a product of
/// affine factors per entry.
fn y_closed_regulated(a: Dim, b: Dim, c: Dim, n: usize) -> RMatrix {
    let ni = n as i64;
    Matrix::from_fn(n + 1, n + 1, |mt, m| {
        let (mti, mi) = (mt as i64, m as i64);
        let two_minus_2b = affine(2, &[(-2, b)]);
        let low = affine(-2 * mti - 2, &[(2, a), (2, b)]);
        let mut sum = EpsPoly::zero();
        for s in 0..=mt.min(n - m) {
            let si = s as i64;
            let factors = poch_factors(affine(ni + mi - si + 4, &[(-2, b), (-2, c)]), s)
                .chain(poch_factors(affine(si + 2, &[(-2, a)]), n - m - s))
                .chain(poch_factors(affine(ni - mti + 2, &[(-2, c)]), mt - s))
                .chain(poch_factors((low.0 + (mt - s) as i64, low.1), s));
            let coef = Rational::from_integer(binomial(n - m, s) * binomial(n - s, mt - s));
            sum = &sum + &affine_product(factors).scale(&coef);
        }
        let pref = Rational::from_integer(binomial(n, m)) * sign::<Rational>(n - mt);
        let num = (&sum * &affine_product(poch_factors(two_minus_2b, m))).scale(&pref);
        let to_rat = |(x, y): (i64, i64)| (Rational::from_integer(x.into()), Rational::from_integer(y.into()));
        let den: Vec<(Rational, Rational)> = poch_factors(two_minus_2b, mt)
            .chain(poch_factors(affine(2 * mti + 4, &[(-2, a), (-2, b)]), n - mt))
            .chain(poch_factors(low, mt))
            .map(to_rat)
            .collect();
        RegulatedScalar::from_linear_factors(num, &Rational::from_integer(binomial(n, mt)), &den)
    })
}

fn y_elements(a: Dim, b: Dim, c: Dim, n: usize) -> (Vec<IntertwinerBasisElement>, Vec<IntertwinerBasisElement>) {
    let mk = |dims: Vec<Dim>| -> Vec<IntertwinerBasisElement> {
        (0..=n)
            .map(|m2| IntertwinerBasisElement::default_scheme(dims.clone(), vec![n - m2, m2]).unwrap())
            .collect()
    };
    (mk(vec![a, b, c]), mk(vec![c, a, b]))
}

/// `Y_abc(n)` from the triangular recursion on the probe triples `(k, 0, n−k)`.
pub fn y_recursive<S: Scalar>(a: Dim, b: Dim, c: Dim, n: usize) -> Result<Matrix<S>> {
    let (src, tgt) = y_elements(a, b, c, n);
    let src_t: Vec<MonomialTable<S>> = src.iter().map(t_monomial_coeffs).collect();
    let tgt_t: Vec<MonomialTable<S>> = tgt.iter().map(t_monomial_coeffs).collect();
    // T_cab(h,f,g) is keyed by (r_h, r_f, r_g); the probe (r_f, r_g, r_h) = (k, 0, n−k).
    let tgt_at = |j: usize, k: usize| -> S {
        tgt_t[j].get(&vec![n - k, k, 0]).cloned().unwrap_or_else(S::zero)
    };
    let src_at = |m: usize, k: usize| -> S {
        src_t[m].get(&vec![k, 0, n - k]).cloned().unwrap_or_else(S::zero)
    };
    for k in 0..=n {
        for j in k + 1..=n {
            if !tgt_at(j, k).is_zero() {
                return Err(Error::Singular(format!(
                    "recursion is not triangular at ({k}, {j})"
                )));
            }
        }
    }
    let mut y: Matrix<S> = Matrix::zeros(n + 1, n + 1);
    for m in 0..=n {
        for mt in 0..=n {
            let diag = tgt_at(mt, mt);
            if diag.is_zero() {
                return Err(Error::Singular(format!(
                    "vanishing pivot T_cab at m̃2 = {mt} for dims ({a}, {b}, {c})"
                )));
            }
            let mut num = src_at(m, mt);
            for j in 0..mt {
                num = num - y[(j, m)].clone() * tgt_at(j, mt);
            }
            y[(mt, m)] = num / diag;
        }
    }
    Ok(y)
}

/// Expresses each `source[j] ∘ τ` in the `target` basis by solving on all
/// monomial coefficients. `perm` is 1-based: `τ(f)_k = f_{perm[k]}`, and the
/// source elements carry the permuted dimensions.
pub fn change_of_basis_oracle<S: Scalar>(
    source: &[IntertwinerBasisElement],
    perm: &[usize],
    target: &[IntertwinerBasisElement],
) -> Result<Matrix<S>> {
    let src_t: Vec<MonomialTable<S>> = source
        .iter()
        .map(|e| {
            t_monomial_coeffs::<S>(e)
                .into_iter()
                .map(|(r, c)| {
                    let mut g = vec![0; r.len()];
                    for (p, &rp) in r.iter().enumerate() {
                        g[perm[p] - 1] = rp;
                    }
                    (g, c)
                })
                .collect()
        })
        .collect();
    let tgt_t: Vec<MonomialTable<S>> = target.iter().map(t_monomial_coeffs).collect();
    let keys: BTreeSet<Vec<usize>> = src_t
        .iter()
        .chain(tgt_t.iter())
        .flat_map(|t| t.keys().cloned())
        .collect();
    let keys: Vec<_> = keys.into_iter().collect();
    let get = |t: &MonomialTable<S>, k: &Vec<usize>| t.get(k).cloned().unwrap_or_else(S::zero);
    let a = Matrix::from_fn(keys.len(), target.len(), |r, i| get(&tgt_t[i], &keys[r]));
    let b = Matrix::from_fn(keys.len(), source.len(), |r, j| get(&src_t[j], &keys[r]));
    if target.is_empty() {
        return if b.is_zero() {
            Ok(Matrix::zeros(0, source.len()))
        } else {
            Err(Error::Singular("empty target basis".into()))
        };
    }
    a.solve_unique_many(&b)
        .ok_or_else(|| Error::Singular("probe system is singular or inconsistent".into()))
}

/// `Y_abc(n)` by brute-force solving on all monomial coefficients.
pub fn y_oracle<S: Scalar>(a: Dim, b: Dim, c: Dim, n: usize) -> Result<Matrix<S>> {
    let (src, tgt) = y_elements(a, b, c, n);
    // target arguments (h, f, g); source T_abc(f, g, h) reads them as (2, 3, 1)
    change_of_basis_oracle(&src, &[2, 3, 1], &tgt)
}

type YKey = (Dim, Dim, Dim, usize);
static Y_CACHE: Lazy<RwLock<HashMap<YKey, Arc<RMatrix>>>> = Lazy::new(Default::default);

/// Cached regulated `Y_abc(n)` (closed form).
pub fn y_matrix(a: Dim, b: Dim, c: Dim, n: usize) -> Arc<RMatrix> {
    let key = (a, b, c, n);
    if let Some(m) = Y_CACHE.read().unwrap().get(&key) {
        return m.clone();
    }
    let m = Arc::new(y_closed_regulated(a, b, c, n));
    Y_CACHE.write().unwrap().entry(key).or_insert(m).clone()
}

/// `diag((−1)^{m_2})`.
pub fn i_matrix<S: Scalar>(n: usize) -> Matrix<S> {
    Matrix::diagonal((0..=n).map(sign::<S>).collect())
}

/// Re-bracketing `T_abc^m = Σ X[m̃][m] T_S^m̃` with `T_S = λ(λ(f,g),h)`.
pub fn x_matrix<S: Scalar>(a: Dim, b: Dim, c: Dim, n: usize) -> Matrix<S> {
    i_matrix::<S>(n)
        .mul(&y_closed(a, b, c, n))
        .scale(&sign::<S>(n))
}

/// `X` by probe solving against the S-scheme basis.
pub fn x_oracle<S: Scalar>(a: Dim, b: Dim, c: Dim, n: usize) -> Result<Matrix<S>> {
    let dims = vec![a, b, c];
    let src: Vec<_> = (0..=n)
        .map(|m2| IntertwinerBasisElement::default_scheme(dims.clone(), vec![n - m2, m2]).unwrap())
        .collect();
    let tgt: Vec<_> = (0..=n)
        .map(|m2| {
            IntertwinerBasisElement::new(BracketScheme::left_comb(3), dims.clone(), vec![n - m2, m2])
                .unwrap()
        })
        .collect();
    change_of_basis_oracle(&src, &[1, 2, 3], &tgt)
}

/// Lexicographic m-tuples of the intertwiner space `dims → e`.
pub fn basis_tuples(dims: &[Dim], e: i64) -> Vec<Vec<usize>> {
    let total = total_degree(dims, e);
    if total < 0 || dims.is_empty() {
        return Vec::new();
    }
    compositions(dims.len() - 1, total as usize)
}

fn index_of(tuples: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()
}

/// Default-basis matrix of the transposition `k ↔ k+1` (1-based `k`):
/// `T_{s(b)}^j ∘ τ_s = Σ_i A[i][j] T_b^i`.
pub fn adjacent_transposition(dims: &[Dim], e: i64, k: usize) -> RMatrix {
    let n = dims.len();
    assert!(k >= 1 && k < n, "transposition index out of range");
    let tuples = basis_tuples(dims, e);
    let idx = index_of(&tuples);
    let mut out = Matrix::zeros(tuples.len(), tuples.len());
    for (j, m) in tuples.iter().enumerate() {
        if k == n - 1 {
            out[(j, j)] = sign(m[k - 1]);
            continue;
        }
        // subtree λ(f_k, λ(f_{k+1}, R)) with R of dimension ε_{k+1}
        let nd = node_dims(&BracketScheme::right_comb(n), dims, m);
        let eps = if k + 1 <= n - 2 { nd[k + 1] } else { dims[n - 1] };
        let block = m[k - 1] + m[k];
        let y = y_matrix(dims[k], eps, dims[k - 1], block);
        for t in 0..=block {
            let mut mt = m.clone();
            mt[k - 1] = block - t;
            mt[k] = t;
            let v = &y[(t, m[k])] * &sign::<RegulatedScalar>(m[k]);
            if !v.is_zero() {
                out[(idx[&mt], j)] = v;
            }
        }
    }
    out
}

/// Applies a 1-based permutation array to dims: `σ(a)_k = a_{perm[k]}`.
pub fn permute_dims(dims: &[Dim], perm: &[usize]) -> Vec<Dim> {
    perm.iter().map(|&p| dims[p - 1]).collect()
}

fn compose_word_dims(dims: &[Dim], word: &[usize]) -> Vec<Vec<Dim>> {
    // dims seen by each factor: (s_{k1}∘…∘s_{k(j−1)})(a)
    let mut cur: Vec<usize> = (1..=dims.len()).collect();
    let mut out = Vec::new();
    for &k in word {
        out.push(permute_dims(dims, &cur));
        // π ↦ π∘s_k swaps entries k−1 and k of the array
        cur.swap(k - 1, k);
    }
    out
}

/// The permutation (1-based array) represented by a word `s_{k1}∘…∘s_{kL}`.
pub fn word_to_perm(n: usize, word: &[usize]) -> Vec<usize> {
    let mut cur: Vec<usize> = (1..=n).collect();
    for &k in word {
        cur.swap(k - 1, k);
    }
    cur
}

/// All reduced words of a permutation.
pub fn reduced_words(perm: &[usize]) -> Vec<Vec<usize>> {
    // σ = s_k ∘ ρ with ρ = s_k∘σ shorter iff value k+1 precedes value k in σ
    let pos = |p: &[usize], v: usize| p.iter().position(|&x| x == v).unwrap();
    let n = perm.len();
    let descents: Vec<usize> = (1..n).filter(|&k| pos(perm, k + 1) < pos(perm, k)).collect();
    if descents.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in descents {
        let rest: Vec<usize> = perm
            .iter()
            .map(|&v| if v == k { k + 1 } else if v == k + 1 { k } else { v })
            .collect();
        for mut w in reduced_words(&rest) {
            w.insert(0, k);
            out.push(w);
        }
    }
    out
}

/// One reduced word (bubble sort order).
pub fn reduced_word(perm: &[usize]) -> Vec<usize> {
    reduced_words(perm).into_iter().next().unwrap()
}

/// Default-basis `Z` for the permutation `σ = s_{k1}∘…∘s_{kL}`.
pub fn z_from_word(dims: &[Dim], e: i64, word: &[usize]) -> RMatrix {
    let size = basis_tuples(dims, e).len();
    compose_word_dims(dims, word)
        .iter()
        .zip(word)
        .fold(Matrix::identity(size), |acc, (d, &k)| {
            acc.mul(&adjacent_transposition(d, e, k))
        })
}

fn add_term(map: &mut HashMap<Vec<usize>, RegulatedScalar>, k: Vec<usize>, v: RegulatedScalar) {
    if v.is_zero() {
        return;
    }
    let ent = map.entry(k).or_insert_with(RegulatedScalar::zero);
    *ent = &*ent + &v;
}

/// Expands `T_{B,dims}^m` in the default basis of the same dims.
fn expand_scheme(
    scheme: &BracketScheme,
    dims: &[Dim],
    m: &[usize],
) -> HashMap<Vec<usize>, RegulatedScalar> {
    match scheme {
        BracketScheme::Leaf => HashMap::from([(vec![], RegulatedScalar::one())]),
        BracketScheme::Node(l, r) => {
            let nl = l.leaves();
            let (ml, mr) = m[1..].split_at(nl - 1);
            let el = expand_scheme(l, &dims[..nl], ml);
            let er = expand_scheme(r, &dims[nl..], mr);
            let mut out = HashMap::new();
            for (mlp, cl) in &el {
                for (mrp, cr) in &er {
                    let c = cl * cr;
                    if nl == 1 {
                        let mut k = vec![m[0]];
                        k.extend_from_slice(mrp);
                        add_term(&mut out, k, c);
                        continue;
                    }
                    // λ^{m0}(λ^{l0}(x, Y), Z) with x the first leaf
                    let l0 = mlp[0];
                    let ycomb = BracketScheme::right_comb(nl - 1);
                    let dy = if nl == 2 {
                        dims[1]
                    } else {
                        node_dims(&ycomb, &dims[1..nl], &mlp[1..])[0]
                    };
                    let dz = if dims.len() - nl == 1 {
                        dims[nl]
                    } else {
                        node_dims(&BracketScheme::right_comb(dims.len() - nl), &dims[nl..], mrp)[0]
                    };
                    let block = m[0] + l0;
                    let xinv = x_matrix::<RegulatedScalar>(dims[0], dy, dz, block)
                        .inverse()
                        .expect("X is invertible at generic regulator");
                    let rest = BracketScheme::node(ycomb, BracketScheme::right_comb(dims.len() - nl));
                    for i2 in 0..=block {
                        let coeff = &xinv[(i2, l0)] * &c;
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut mrest = vec![i2];
                        mrest.extend_from_slice(&mlp[1..]);
                        mrest.extend_from_slice(mrp);
                        for (tail, ct) in expand_scheme(&rest, &dims[1..], &mrest) {
                            let mut k = vec![block - i2];
                            k.extend(tail);
                            add_term(&mut out, k, &coeff * &ct);
                        }
                    }
                }
            }
            out
        }
    }
}

/// `T_{B}^j = Σ_i R[i][j] T_default^i`.
pub fn scheme_to_default(scheme: &BracketScheme, dims: &[Dim], e: i64) -> RMatrix {
    let tuples = basis_tuples(dims, e);
    let idx = index_of(&tuples);
    let mut out = Matrix::zeros(tuples.len(), tuples.len());
    for (j, m) in tuples.iter().enumerate() {
        for (k, v) in expand_scheme(scheme, dims, m) {
            out[(idx[&k], j)] = v;
        }
    }
    out
}

/// A change-of-basis matrix with its row and column labels.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformMatrix {
    pub rows: Vec<Vec<usize>>,
    pub cols: Vec<Vec<usize>>,
    pub entries: RMatrix,
}

/// `T_{B1, σ(a)}^j ∘ τ_σ = Σ_i Z[i][j] T_{B2, a}^i` on the block with target `e`.
pub fn z_matrix(
    dims: &[Dim],
    perm: &[usize],
    source: &BracketScheme,
    target: &BracketScheme,
    e: i64,
) -> Result<TransformMatrix> {
    validate_perm(perm, dims.len())?;
    for s in [source, target] {
        if s.leaves() != dims.len() {
            return Err(Error::LengthMismatch {
                expected: dims.len(),
                got: s.leaves(),
            });
        }
    }
    let tuples = basis_tuples(dims, e);
    let zp = z_from_word(dims, e, &reduced_word(perm));
    let r1 = scheme_to_default(source, &permute_dims(dims, perm), e);
    let r2 = scheme_to_default(target, dims, e);
    let r2inv = r2
        .inverse()
        .ok_or_else(|| Error::Singular("re-bracketing matrix".into()))?;
    Ok(TransformMatrix {
        rows: tuples.clone(),
        cols: tuples,
        entries: r2inv.mul(&zp).mul(&r1),
    })
}

/// Independent `Z` by probe solving.
pub fn z_oracle(
    dims: &[Dim],
    perm: &[usize],
    source: &BracketScheme,
    target: &BracketScheme,
    e: i64,
) -> Result<RMatrix> {
    validate_perm(perm, dims.len())?;
    let pd = permute_dims(dims, perm);
    let src = enumerate_m_tuples(source, &pd, e);
    let tgt = enumerate_m_tuples(target, dims, e);
    change_of_basis_oracle(&src, perm, &tgt)
}

fn validate_perm(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

/// Left side of the chain-sum identity: sum over chains `s = j_1 < … < j_l = m`.
pub fn multiple_sum_lhs<S: Scalar>(a: &S, b: &S, s: usize, m: usize) -> S {
    assert!(s < m);
    let two_ab = S::from_i64(2) * (a.clone() + b.clone());
    let factor = |from: usize, to: usize| -> S {
        let x = two_ab.clone() - S::from_i64(2 * to as i64 + 3);
        pochhammer(&x, to - from) / pochhammer(&S::one(), to - from)
    };
    // f[j] = signed sum over chains from s ending at j
    let mut f: Vec<S> = vec![S::zero(); m + 1];
    f[s] = S::one();
    for j in s + 1..=m {
        let mut acc = S::zero();
        for i in s..j {
            acc = acc - f[i].clone() * factor(i, j);
        }
        f[j] = acc;
    }
    f[m].clone()
}

/// Right side: `(−1)^{m−s} (2a+2b−2m−3)(2a+2b−m−s−2)_{m−s−1}/(m−s)!`.
pub fn multiple_sum_rhs<S: Scalar>(a: &S, b: &S, s: usize, m: usize) -> S {
    assert!(s < m);
    let two_ab = S::from_i64(2) * (a.clone() + b.clone());
    let d = m - s;
    sign::<S>(d) * (two_ab.clone() - S::from_i64(2 * m as i64 + 3))
        * pochhammer(&(two_ab - S::from_i64((m + s + 2) as i64)), d - 1)
        / pochhammer(&S::one(), d)
}

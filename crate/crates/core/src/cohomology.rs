//! Cochains on the reduced space and the coboundary operators.
//!
//! A degree-`n` cochain assigns to fields `X_1 … X_n` (carrying scaling
//! dimensions `d_1 … d_n`) and a target grade `e` one vector of `V_e` per
//! default-basis m-tuple of the intertwiner space `d_1 × … × d_n → e`. It is
//! the reduced form of the antisymmetric map
//! `Ω(X_1(f_1), …) = Σ_m ω(X)_m ⊗ T^m(f_1, …)`.
//!
//! Cochains are evaluated lazily through [`CochainMap`]. Dimensions may be
//! regulated; every field occurrence keeps its own regulator and brackets add
//! them up, so all identities are checked exactly in `Q(ε)`.
//!
//! The coboundary is the Chevalley–Eilenberg differential of `Ω`:
//! `dΩ(Y_1…Y_{n+1}) = Σ_i (−1)^{i+1} [Y_i, Ω(…Ŷ_i…)] + Σ_{j<k} (−1)^{j+k} Ω([Y_j,Y_k], …)`.
//! With this sign, `b¹(id) = Γ*` and `b²Γ* = 2·RJI`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, RwLock};

use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{Dim, Rational, RegulatedScalar};
use crate::error::{Error, Result};
use crate::linalg::{rank_fraction_free, Matrix};
use crate::reduced::{ReducedSpace, StructureConstants};
use crate::transform::{
    adjacent_transposition, basis_tuples, permute_dims, reduced_word, z_from_word, RMatrix,
    RegulatorSet,
};

/// Values at one argument tuple and target grade: `block[t][k]` is the
/// coefficient of the `k`-th basis field of `V_e` for the `t`-th m-tuple of
/// [`basis_tuples`].
pub type Block = Vec<Vec<RegulatedScalar>>;

/// A lazily evaluated cochain.
pub trait CochainMap: Sync {
    fn degree(&self) -> usize;
    /// `dims[i].base` must equal the grade of `fields[i]`.
    fn block(&self, fields: &[usize], dims: &[Dim], e: i64) -> Result<Block>;
}

fn zero_block(dims: &[Dim], e: i64, width: usize) -> Block {
    vec![vec![RegulatedScalar::zero(); width]; basis_tuples(dims, e).len()]
}

fn tuple_index(dims: &[Dim], e: i64) -> HashMap<Vec<usize>, usize> {
    basis_tuples(dims, e)
        .into_iter()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect()
}

fn add_into(acc: &mut RegulatedScalar, v: &RegulatedScalar) {
    if !v.is_zero() {
        *acc = &*acc + v;
    }
}

fn sign(k: usize) -> RegulatedScalar {
    if k % 2 == 0 {
        RegulatedScalar::one()
    } else {
        -RegulatedScalar::one()
    }
}

fn signature(perm: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    inv
}

/// All permutations of `1..=n` as 1-based arrays.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out.sort();
    out
}

type ZKey = (Vec<Dim>, Vec<usize>, i64);
static Z_CACHE: Lazy<RwLock<HashMap<ZKey, Arc<RMatrix>>>> = Lazy::new(Default::default);

/// Default-basis `Z_{d,σ}`: `T_{σ(d)}^j ∘ τ_σ = Σ_i Z[i][j] T_d^i`.
pub fn z_default(dims: &[Dim], perm: &[usize], e: i64) -> Arc<RMatrix> {
    let key = (dims.to_vec(), perm.to_vec(), e);
    if let Some(z) = Z_CACHE.read().unwrap().get(&key) {
        return z.clone();
    }
    let z = Arc::new(z_from_word(dims, e, &reduced_word(perm)));
    Z_CACHE.write().unwrap().insert(key, z.clone());
    z
}

type AKey = (Vec<Dim>, i64, usize);
static A_CACHE: Lazy<RwLock<HashMap<AKey, Arc<RMatrix>>>> = Lazy::new(Default::default);

fn transposition(dims: &[Dim], e: i64, k: usize) -> Arc<RMatrix> {
    let key = (dims.to_vec(), e, k);
    if let Some(a) = A_CACHE.read().unwrap().get(&key) {
        return a.clone();
    }
    let a = Arc::new(adjacent_transposition(dims, e, k));
    A_CACHE.write().unwrap().insert(key, a.clone());
    a
}

/// `s · Z_{d,σ} · c`, applying the factors of a reduced word one at a time.
fn apply_z(dims: &[Dim], perm: &[usize], e: i64, c: &Block, s: &RegulatedScalar) -> Block {
    let word = reduced_word(perm);
    // the j-th factor acts on (s_{k1}∘…∘s_{k(j−1)})(d)
    let mut cur: Vec<usize> = (1..=dims.len()).collect();
    let mut factors = Vec::with_capacity(word.len());
    for &k in &word {
        factors.push(transposition(&permute_dims(dims, &cur), e, k));
        cur.swap(k - 1, k);
    }
    let mut v: Block = c
        .iter()
        .map(|row| row.iter().map(|x| x * s).collect())
        .collect();
    for a in factors.iter().rev() {
        let mut next = vec![vec![RegulatedScalar::zero(); v.first().map_or(0, Vec::len)]; a.rows()];
        add_transformed(&mut next, a, &v, &RegulatedScalar::one());
        v = next;
    }
    v
}

/// Accumulates `s · Z · c` into `out`.
fn add_transformed(out: &mut Block, z: &RMatrix, c: &Block, s: &RegulatedScalar) {
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cj) in c.iter().enumerate() {
            let zij = &z[(i, j)];
            if zij.is_zero() {
                continue;
            }
            let f = if s.is_one() { zij.clone() } else { zij * s };
            for (o, v) in row.iter_mut().zip(cj) {
                if !v.is_zero() {
                    add_into(o, &(&f * v));
                }
            }
        }
    }
}

fn accumulate(out: &mut Block, v: Block) {
    for (o, r) in out.iter_mut().zip(v) {
        for (x, y) in o.iter_mut().zip(r) {
            add_into(x, &y);
        }
    }
}

fn check_dims(space: &ReducedSpace, fields: &[usize], dims: &[Dim]) -> Result<()> {
    if fields.len() != dims.len() {
        return Err(Error::LengthMismatch {
            expected: fields.len(),
            got: dims.len(),
        });
    }
    for (&f, d) in fields.iter().zip(dims) {
        if space.grade(f) != d.base {
            return Err(Error::Invalid(format!(
                "dimension {d} does not match the grade of {}",
                space.label(f)
            )));
        }
    }
    Ok(())
}

/// A stored cochain with regulator-independent rational components.
///
/// Components are keyed by `(fields, m)`; absent keys are zero. The cochain
/// is defined on the argument grades in `sector`; evaluating outside it is a
/// [`Error::MissingComponent`].
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub degree: usize,
    pub sector: BTreeSet<i64>,
    pub components: BTreeMap<(Vec<usize>, Vec<usize>), Vec<Rational>>,
}

impl Cochain {
    pub fn zero(degree: usize, sector: impl IntoIterator<Item = i64>) -> Self {
        Cochain {
            degree,
            sector: sector.into_iter().collect(),
            components: BTreeMap::new(),
        }
    }

    /// The identity map as a degree-1 cochain.
    pub fn identity(space: &ReducedSpace, sector: impl IntoIterator<Item = i64>) -> Self {
        let mut q = Cochain::zero(1, sector);
        for g in q.sector.clone() {
            let basis = space.basis(g);
            for (k, &x) in basis.iter().enumerate() {
                let mut v = vec![Rational::zero(); basis.len()];
                v[k] = Rational::one();
                q.components.insert((vec![x], vec![]), v);
            }
        }
        q
    }

    /// `Γ*` as a degree-2 cochain on `sector`.
    pub fn from_bracket(
        space: &ReducedSpace,
        f: &StructureConstants,
        sector: impl IntoIterator<Item = i64>,
    ) -> Self {
        let mut out = Cochain::zero(2, sector);
        for ((a, b, c), v) in f.entries() {
            let (ga, gb, gc) = (space.grade(*a), space.grade(*b), space.grade(*c));
            if !out.sector.contains(&ga) || !out.sector.contains(&gb) {
                continue;
            }
            let m = (ga + gb - 1 - gc) as usize;
            let basis = space.basis(gc);
            let ent = out
                .components
                .entry((vec![*a, *b], vec![m]))
                .or_insert_with(|| vec![Rational::zero(); basis.len()]);
            ent[space.position(*c)] = v.clone();
        }
        out
    }

    pub fn get(&self, fields: &[usize], m: &[usize]) -> Option<&Vec<Rational>> {
        self.components.get(&(fields.to_vec(), m.to_vec()))
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|v| v.iter().all(Zero::is_zero))
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        let mut out = self.clone();
        for v in out.components.values_mut() {
            for x in v.iter_mut() {
                *x = &*x * s;
            }
        }
        out.prune();
        out
    }

    pub fn add(&self, o: &Cochain) -> Result<Self> {
        if self.degree != o.degree {
            return Err(Error::Invalid(format!(
                "cannot add cochains of degrees {} and {}",
                self.degree, o.degree
            )));
        }
        let mut out = self.clone();
        out.sector.extend(o.sector.iter().copied());
        for (k, v) in &o.components {
            match out.components.get_mut(k) {
                Some(w) => {
                    for (x, y) in w.iter_mut().zip(v) {
                        *x = &*x + y;
                    }
                }
                None => {
                    out.components.insert(k.clone(), v.clone());
                }
            }
        }
        out.prune();
        Ok(out)
    }

    fn prune(&mut self) {
        self.components.retain(|_, v| v.iter().any(|x| !x.is_zero()));
    }
}

impl CochainMap for Cochain {
    fn degree(&self) -> usize {
        self.degree
    }

    fn block(&self, fields: &[usize], dims: &[Dim], e: i64) -> Result<Block> {
        if let Some(d) = dims.iter().find(|d| !self.sector.contains(&d.base)) {
            return Err(Error::MissingComponent(format!(
                "argument grade {} lies outside the cochain's sector",
                d.base
            )));
        }
        Ok(basis_tuples(dims, e)
            .iter()
            .map(|m| match self.get(fields, m) {
                Some(v) => v.iter().cloned().map(RegulatedScalar::constant).collect(),
                None => Vec::new(),
            })
            .collect())
    }
}

/// Blocks from [`Cochain`] leave absent components as empty rows; this pads
/// them to the width of `V_e`.
fn padded(mut b: Block, width: usize) -> Block {
    for row in &mut b {
        if row.is_empty() {
            *row = vec![RegulatedScalar::zero(); width];
        }
    }
    b
}

/// `Γ*` as a degree-2 cochain on all grades.
pub struct BracketCochain<'a> {
    pub space: &'a ReducedSpace,
    pub f: &'a StructureConstants,
}

impl CochainMap for BracketCochain<'_> {
    fn degree(&self) -> usize {
        2
    }

    fn block(&self, fields: &[usize], dims: &[Dim], e: i64) -> Result<Block> {
        check_dims(self.space, fields, dims)?;
        let basis = self.space.basis(e);
        Ok(basis_tuples(dims, e)
            .iter()
            .map(|_| {
                basis
                    .iter()
                    .map(|&c| RegulatedScalar::constant(self.f.get(fields[0], fields[1], c)))
                    .collect()
            })
            .collect())
    }
}

type MemoKey = (Vec<usize>, Vec<Dim>, i64);

#[derive(Default)]
struct Memo(Mutex<HashMap<MemoKey, Arc<Block>>>);

impl Memo {
    fn get_or(&self, key: MemoKey, f: impl FnOnce() -> Result<Block>) -> Result<Arc<Block>> {
        if let Some(b) = self.0.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let b = Arc::new(f()?);
        self.0.lock().unwrap().insert(key, b.clone());
        Ok(b)
    }
}

/// `b^n ω`, evaluated on demand and memoized.
pub struct Coboundary<'a> {
    space: &'a ReducedSpace,
    f: &'a StructureConstants,
    inner: &'a dyn CochainMap,
    memo: Memo,
}

impl<'a> Coboundary<'a> {
    pub fn new(space: &'a ReducedSpace, f: &'a StructureConstants, inner: &'a dyn CochainMap) -> Self {
        Coboundary {
            space,
            f,
            inner,
            memo: Memo::default(),
        }
    }

    fn compute(&self, fields: &[usize], dims: &[Dim], e: i64) -> Result<Block> {
        let sp = self.space;
        let n = self.inner.degree();
        if n == 0 {
            return Err(Error::Invalid(
                "degree-0 cochains are handled by coboundary0".into(),
            ));
        }
        let width = sp.basis(e).len();
        let mut out = zero_block(dims, e, width);
        if out.is_empty() || width == 0 {
            return Ok(out);
        }
        let args = n + 1;

        // [X_i, ω(rest)] lives in the default basis of (X_i, rest)
        for i in 0..args {
            let perm: Vec<usize> = std::iter::once(i + 1)
                .chain((1..=args).filter(|&k| k != i + 1))
                .collect();
            let sd = permute_dims(dims, &perm);
            let sidx = tuple_index(&sd, e);
            let mut c = zero_block(&sd, e, width);
            let rest: Vec<usize> = perm[1..].iter().map(|&k| fields[k - 1]).collect();
            let drest: Vec<Dim> = perm[1..].iter().map(|&k| dims[k - 1]).collect();
            let xi = fields[i];
            for g in sp.grade_list() {
                let mu = dims[i].base + g - 1 - e;
                if mu < 0 {
                    continue;
                }
                let inner_tuples = basis_tuples(&drest, g);
                if inner_tuples.is_empty() {
                    continue;
                }
                let inner = padded(self.inner.block(&rest, &drest, g)?, sp.basis(g).len());
                for (t, mp) in inner_tuples.iter().enumerate() {
                    let mut key = vec![mu as usize];
                    key.extend_from_slice(mp);
                    let row = &mut c[sidx[&key]];
                    for (w, &wf) in sp.basis(g).iter().enumerate() {
                        let coef = &inner[t][w];
                        if coef.is_zero() {
                            continue;
                        }
                        for (k, &ef) in sp.basis(e).iter().enumerate() {
                            let fv = self.f.get(xi, wf, ef);
                            if !fv.is_zero() {
                                add_into(&mut row[k], &(coef * &RegulatedScalar::constant(fv)));
                            }
                        }
                    }
                }
            }
            accumulate(&mut out, apply_z(dims, &perm, e, &c, &sign(i)));
        }

        // ω(rest, [X_j, X_k]) lives in the default basis of (rest, X_j, X_k)
        for j in 0..args {
            for k in j + 1..args {
                let mut perm: Vec<usize> = (1..=args).filter(|&x| x != j + 1 && x != k + 1).collect();
                perm.extend([j + 1, k + 1]);
                let sd = permute_dims(dims, &perm);
                let sidx = tuple_index(&sd, e);
                let mut c = zero_block(&sd, e, width);
                let rest: Vec<usize> = perm[..n - 1].iter().map(|&x| fields[x - 1]).collect();
                let drest: Vec<Dim> = perm[..n - 1].iter().map(|&x| dims[x - 1]).collect();
                for g in sp.grade_list() {
                    let mu = dims[j].base + dims[k].base - 1 - g;
                    if mu < 0 {
                        continue;
                    }
                    let dw = dims[j] + dims[k] - Dim::int(1 + mu);
                    let mut args_f = rest.clone();
                    let mut args_d = drest.clone();
                    args_f.push(0);
                    args_d.push(dw);
                    let inner_tuples = basis_tuples(&args_d, e);
                    if inner_tuples.is_empty() {
                        continue;
                    }
                    for &w in sp.basis(g) {
                        let fw = self.f.get(fields[j], fields[k], w);
                        if fw.is_zero() {
                            continue;
                        }
                        let fw = RegulatedScalar::constant(fw);
                        *args_f.last_mut().unwrap() = w;
                        let inner = padded(self.inner.block(&args_f, &args_d, e)?, width);
                        for (t, mp) in inner_tuples.iter().enumerate() {
                            let mut key = mp.clone();
                            key.push(mu as usize);
                            let row = &mut c[sidx[&key]];
                            for (x, v) in row.iter_mut().zip(&inner[t]) {
                                if !v.is_zero() {
                                    add_into(x, &(&fw * v));
                                }
                            }
                        }
                    }
                }
                let s = &sign(j + k) * &sign(n - 1);
                accumulate(&mut out, apply_z(dims, &perm, e, &c, &s));
            }
        }
        Ok(out)
    }
}

impl CochainMap for Coboundary<'_> {
    fn degree(&self) -> usize {
        self.inner.degree() + 1
    }

    fn block(&self, fields: &[usize], dims: &[Dim], e: i64) -> Result<Block> {
        check_dims(self.space, fields, dims)?;
        let key = (fields.to_vec(), dims.to_vec(), e);
        Ok((*self.memo.get_or(key, || self.compute(fields, dims, e))?).clone())
    }
}

/// `b⁰X`: the degree-1 cochain `A ↦ Γ*(A, X)_{g−1}` for `X` of grade `g`,
/// given as a coefficient vector over `V_g`.
pub fn coboundary0(
    space: &ReducedSpace,
    f: &StructureConstants,
    g: i64,
    x: &[Rational],
    sector: impl IntoIterator<Item = i64>,
) -> Cochain {
    let mut out = Cochain::zero(1, sector);
    for a in out.sector.clone() {
        for &af in space.basis(a) {
            let v: Vec<Rational> = space
                .basis(a)
                .iter()
                .map(|&c| {
                    space
                        .basis(g)
                        .iter()
                        .zip(x)
                        .map(|(&xf, xv)| f.get(af, xf, c) * xv)
                        .sum()
                })
                .collect();
            out.components.insert((vec![af], vec![]), v);
        }
    }
    out.prune();
    out
}

/// The cyclic composite `α(A, β(B,C)) + α(B, β(C,A)) + α(C, β(A,B))` of two
/// degree-2 cochains, as a degree-3 cochain. `J(Γ*, Γ*)` is the reduced
/// Jacobi combination.
pub struct Jacobiator<'a> {
    space: &'a ReducedSpace,
    alpha: &'a dyn CochainMap,
    beta: &'a dyn CochainMap,
}

impl<'a> Jacobiator<'a> {
    pub fn new(space: &'a ReducedSpace, alpha: &'a dyn CochainMap, beta: &'a dyn CochainMap) -> Self {
        Jacobiator { space, alpha, beta }
    }
}

impl CochainMap for Jacobiator<'_> {
    fn degree(&self) -> usize {
        3
    }

    fn block(&self, fields: &[usize], dims: &[Dim], e: i64) -> Result<Block> {
        check_dims(self.space, fields, dims)?;
        let sp = self.space;
        let width = sp.basis(e).len();
        let mut out = zero_block(dims, e, width);
        if out.is_empty() || width == 0 {
            return Ok(out);
        }
        for perm in [[1, 2, 3], [2, 3, 1], [3, 1, 2]] {
            let sd = permute_dims(dims, &perm);
            let sidx = tuple_index(&sd, e);
            let mut c = zero_block(&sd, e, width);
            let [x, y, z] = perm.map(|k| fields[k - 1]);
            for g in sp.grade_list() {
                let mb = sd[1].base + sd[2].base - 1 - g;
                if mb < 0 || sp.basis(g).is_empty() {
                    continue;
                }
                let inner = padded(self.beta.block(&[y, z], &sd[1..], g)?, sp.basis(g).len());
                let dw = sd[1] + sd[2] - Dim::int(1 + mb);
                let outer_dims = [sd[0], dw];
                let outer_tuples = basis_tuples(&outer_dims, e);
                for (wpos, &w) in sp.basis(g).iter().enumerate() {
                    let coef = &inner[0][wpos];
                    if coef.is_zero() || outer_tuples.is_empty() {
                        continue;
                    }
                    let outer = padded(self.alpha.block(&[x, w], &outer_dims, e)?, width);
                    let key = vec![outer_tuples[0][0], mb as usize];
                    let row = &mut c[sidx[&key]];
                    for (r, v) in row.iter_mut().zip(&outer[0]) {
                        if !v.is_zero() {
                            add_into(r, &(coef * v));
                        }
                    }
                }
            }
            accumulate(&mut out, apply_z(dims, &perm, e, &c, &RegulatedScalar::one()));
        }
        Ok(out)
    }
}

/// A seeded random Zᵉ-symmetric cochain, generated slot by slot.
///
/// Raw entries are drawn from a generator seeded by `(seed, slot)` only, so
/// values do not depend on evaluation order. The raw data is then averaged
/// over `S_n` with the Zᵉ matrices.
pub struct RandomCochain<'a> {
    space: &'a ReducedSpace,
    degree: usize,
    seed: u64,
    memo: Memo,
}

impl<'a> RandomCochain<'a> {
    pub fn new(space: &'a ReducedSpace, degree: usize, seed: u64) -> Self {
        RandomCochain {
            space,
            degree,
            seed,
            memo: Memo::default(),
        }
    }

    fn raw(&self, fields: &[usize], dims: &[Dim], e: i64) -> Block {
        let width = self.space.basis(e).len();
        basis_tuples(dims, e)
            .iter()
            .map(|m| {
                let mut rng = ChaCha8Rng::seed_from_u64(slot_hash(self.seed, fields, dims, e, m));
                (0..width)
                    .map(|_| RegulatedScalar::constant(Rational::from_integer(rng.gen_range(-3..=3).into())))
                    .collect()
            })
            .collect()
    }
}

/// FNV-1a over the slot description; stable across builds and platforms.
fn slot_hash(seed: u64, fields: &[usize], dims: &[Dim], e: i64, m: &[usize]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: i64| {
        for b in x.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(seed as i64);
    for &f in fields {
        eat(f as i64);
    }
    for d in dims {
        eat(d.base);
        eat(d.reg);
    }
    eat(e);
    for &x in m {
        eat(x as i64);
    }
    h
}

impl CochainMap for RandomCochain<'_> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn block(&self, fields: &[usize], dims: &[Dim], e: i64) -> Result<Block> {
        check_dims(self.space, fields, dims)?;
        let key = (fields.to_vec(), dims.to_vec(), e);
        let b = self.memo.get_or(key, || {
            let width = self.space.basis(e).len();
            let mut out = zero_block(dims, e, width);
            let perms = permutations(self.degree);
            for perm in &perms {
                let sf: Vec<usize> = perm.iter().map(|&k| fields[k - 1]).collect();
                let sd = permute_dims(dims, perm);
                let raw = self.raw(&sf, &sd, e);
                accumulate(&mut out, apply_z(dims, perm, e, &raw, &sign(signature(perm))));
            }
            let norm = RegulatedScalar::constant(Rational::from_integer(perms.len().into()));
            for row in &mut out {
                for x in row.iter_mut() {
                    *x = &*x / &norm;
                }
            }
            Ok(out)
        })?;
        Ok((*b).clone())
    }
}

/// One argument tuple of a cochain evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub fields: Vec<usize>,
    pub dims: Vec<Dim>,
    pub e: i64,
}

/// All slots with argument grades in `grades` and target grades in `targets`,
/// regulated by position.
pub fn slots(
    space: &ReducedSpace,
    n: usize,
    grades: &BTreeSet<i64>,
    targets: &BTreeSet<i64>,
    reg: RegulatorSet,
) -> Vec<Slot> {
    let pool: Vec<usize> = (0..space.len())
        .filter(|&i| grades.contains(&space.grade(i)))
        .collect();
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |&x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for fields in tuples {
        let g: Vec<i64> = fields.iter().map(|&f| space.grade(f)).collect();
        let dims = reg.regulate(&g);
        for &e in targets {
            if space.basis(e).is_empty() || basis_tuples(&dims, e).is_empty() {
                continue;
            }
            out.push(Slot {
                fields: fields.clone(),
                dims: dims.clone(),
                e,
            });
        }
    }
    out
}

/// A failure of `ω(X) = sgn(σ) Z_{d,σ} ω(X_σ)` for an adjacent transposition.
#[derive(Clone, Debug, PartialEq)]
pub struct ZsymViolation {
    pub slot: Slot,
    /// 1-based position `k` of the transposition `k ↔ k+1`.
    pub transposition: usize,
    pub m: Vec<usize>,
    pub difference: Vec<RegulatedScalar>,
}

/// Checks Zᵉ-symmetry on the given slots against the generating transpositions.
pub fn zsym_check(
    space: &ReducedSpace,
    w: &dyn CochainMap,
    slots: &[Slot],
) -> Result<Vec<ZsymViolation>> {
    let n = w.degree();
    let per_slot: Vec<Result<Vec<ZsymViolation>>> = slots
        .par_iter()
        .map(|s| {
            let width = space.basis(s.e).len();
            let lhs = padded(w.block(&s.fields, &s.dims, s.e)?, width);
            let tuples = basis_tuples(&s.dims, s.e);
            let mut out = Vec::new();
            for k in 1..n {
                let mut perm: Vec<usize> = (1..=n).collect();
                perm.swap(k - 1, k);
                let sf: Vec<usize> = perm.iter().map(|&p| s.fields[p - 1]).collect();
                let sd = permute_dims(&s.dims, &perm);
                let other = padded(w.block(&sf, &sd, s.e)?, width);
                let mut rhs = zero_block(&s.dims, s.e, width);
                accumulate(&mut rhs, apply_z(&s.dims, &perm, s.e, &other, &sign(1)));
                for (t, m) in tuples.iter().enumerate() {
                    let diff: Vec<RegulatedScalar> =
                        lhs[t].iter().zip(&rhs[t]).map(|(a, b)| a - b).collect();
                    if diff.iter().any(|x| !x.is_zero()) {
                        out.push(ZsymViolation {
                            slot: s.clone(),
                            transposition: k,
                            m: m.clone(),
                            difference: diff,
                        });
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_slot {
        all.extend(r?);
    }
    Ok(all)
}

fn constant_value(x: &RegulatedScalar, what: &str) -> Result<Rational> {
    if x.is_constant() {
        Ok(x.numerator().coeff(0))
    } else {
        Err(Error::NonClosedSector(format!(
            "{what} depends on the regulator ({x})"
        )))
    }
}

/// Evaluates a cochain on `slots` and stores the (regulator-independent) result.
pub fn materialize(
    space: &ReducedSpace,
    w: &dyn CochainMap,
    sector: &BTreeSet<i64>,
    slots: &[Slot],
) -> Result<Cochain> {
    let blocks: Vec<Result<(Slot, Block)>> = slots
        .par_iter()
        .map(|s| Ok((s.clone(), w.block(&s.fields, &s.dims, s.e)?)))
        .collect();
    let mut out = Cochain::zero(w.degree(), sector.iter().copied());
    for r in blocks {
        let (s, b) = r?;
        let width = space.basis(s.e).len();
        for (m, row) in basis_tuples(&s.dims, s.e).into_iter().zip(padded(b, width)) {
            let v = row
                .iter()
                .map(|x| constant_value(x, "cochain value"))
                .collect::<Result<Vec<_>>>()?;
            if v.iter().any(|x| !x.is_zero()) {
                out.components.insert((s.fields.clone(), m), v);
            }
        }
    }
    Ok(out)
}

/// Group-averages raw component data into a Zᵉ-symmetric cochain on `sector`.
pub fn zsym_project(space: &ReducedSpace, raw: &Cochain, reg: RegulatorSet) -> Result<Cochain> {
    struct Proj<'a> {
        raw: &'a Cochain,
        width: Box<dyn Fn(i64) -> usize + Sync + 'a>,
    }
    impl CochainMap for Proj<'_> {
        fn degree(&self) -> usize {
            self.raw.degree
        }
        fn block(&self, fields: &[usize], dims: &[Dim], e: i64) -> Result<Block> {
            let width = (self.width)(e);
            let mut out = zero_block(dims, e, width);
            let perms = permutations(self.raw.degree);
            for perm in &perms {
                let sf: Vec<usize> = perm.iter().map(|&k| fields[k - 1]).collect();
                let sd = permute_dims(dims, perm);
                let r = padded(self.raw.block(&sf, &sd, e)?, width);
                accumulate(&mut out, apply_z(dims, perm, e, &r, &sign(signature(perm))));
            }
            let norm = RegulatedScalar::constant(Rational::from_integer(perms.len().into()));
            for row in &mut out {
                for x in row.iter_mut() {
                    *x = &*x / &norm;
                }
            }
            Ok(out)
        }
    }
    let p = Proj {
        raw,
        width: Box::new(|e| space.basis(e).len()),
    };
    let s = slots(space, raw.degree, &raw.sector, &raw.sector, reg);
    materialize(space, &p, &raw.sector, &s)
}

/// Coordinates of the slot space of a sector: one per `(slot, m, output field)`.
#[derive(Clone, Debug)]
pub struct SlotCoordinates {
    pub slots: Vec<Slot>,
    pub coords: Vec<(usize, Vec<usize>, usize)>,
    widths: Vec<usize>,
    index: HashMap<(Vec<usize>, Vec<usize>, usize), usize>,
}

impl SlotCoordinates {
    pub fn new(space: &ReducedSpace, n: usize, sector: &BTreeSet<i64>, reg: RegulatorSet) -> Self {
        let slots = slots(space, n, sector, sector, reg);
        let mut coords = Vec::new();
        let mut index = HashMap::new();
        for (si, s) in slots.iter().enumerate() {
            for m in basis_tuples(&s.dims, s.e) {
                for k in 0..space.basis(s.e).len() {
                    index.insert((s.fields.clone(), m.clone(), k), coords.len());
                    coords.push((si, m.clone(), k));
                }
            }
        }
        let widths = slots.iter().map(|s| space.basis(s.e).len()).collect();
        SlotCoordinates {
            slots,
            coords,
            widths,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn vector(&self, c: &Cochain) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        for ((fields, m), vals) in &c.components {
            for (k, x) in vals.iter().enumerate() {
                if let Some(&i) = self.index.get(&(fields.clone(), m.clone(), k)) {
                    v[i] = x.clone();
                }
            }
        }
        v
    }

    pub fn cochain(&self, degree: usize, sector: &BTreeSet<i64>, v: &[Rational]) -> Cochain {
        let mut out = Cochain::zero(degree, sector.iter().copied());
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (si, m, k) = &self.coords[i];
            let s = &self.slots[*si];
            let width = self.widths[*si];
            let ent = out
                .components
                .entry((s.fields.clone(), m.clone()))
                .or_insert_with(|| vec![Rational::zero(); width]);
            ent[*k] = x.clone();
        }
        out
    }
}

/// Checks that brackets of sector grades land in the sector or in an empty grade.
pub fn check_closed(space: &ReducedSpace, sector: &BTreeSet<i64>) -> Result<()> {
    for &a in sector {
        for &b in sector {
            for g in 1..a + b {
                if !space.basis(g).is_empty() && !sector.contains(&g) {
                    return Err(Error::NonClosedSector(format!(
                        "brackets of grades {a} and {b} reach grade {g}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A basis of the Zᵉ-symmetric cochains of degree `n` on `sector`, from the
/// nullspace of the transposition conditions.
pub fn cochain_space_basis(
    space: &ReducedSpace,
    n: usize,
    sector: &BTreeSet<i64>,
    reg: RegulatorSet,
) -> Result<Vec<Cochain>> {
    let coords = SlotCoordinates::new(space, n, sector, reg);
    if coords.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for s in &coords.slots {
        let tuples = basis_tuples(&s.dims, s.e);
        for k in 1..n {
            let mut perm: Vec<usize> = (1..=n).collect();
            perm.swap(k - 1, k);
            let sf: Vec<usize> = perm.iter().map(|&p| s.fields[p - 1]).collect();
            let sd = permute_dims(&s.dims, &perm);
            let z = z_default(&s.dims, &perm, s.e);
            let stuples = basis_tuples(&sd, s.e);
            for (i, m) in tuples.iter().enumerate() {
                for c in 0..space.basis(s.e).len() {
                    // ω(X)_m + Σ Z[m][m̃] ω(X_s)_m̃ = 0
                    let mut row = vec![Rational::zero(); coords.len()];
                    row[coords.index[&(s.fields.clone(), m.clone(), c)]] += Rational::one();
                    for (j, mt) in stuples.iter().enumerate() {
                        let zij = constant_value(&z[(i, j)], "Z matrix entry")?;
                        if !zij.is_zero() {
                            row[coords.index[&(sf.clone(), mt.clone(), c)]] += zij;
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    let basis = if rows.is_empty() {
        (0..coords.len())
            .map(|i| {
                let mut v = vec![Rational::zero(); coords.len()];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows).nullspace()
    };
    Ok(basis
        .iter()
        .map(|v| coords.cochain(n, sector, v))
        .collect())
}

/// Dimensions of cocycles, coboundaries and cohomology in one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RlhDims {
    pub dim_c: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_rlh: usize,
}

fn column_matrix(cols: &[Vec<Rational>], rows: usize) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
}

/// Images under `b` of the given cochains, as coordinate vectors of degree `n+1`.
pub fn coboundary_images(
    space: &ReducedSpace,
    f: &StructureConstants,
    cochains: &[Cochain],
    sector: &BTreeSet<i64>,
    reg: RegulatorSet,
) -> Result<(SlotCoordinates, Vec<Vec<Rational>>)> {
    let n = cochains.first().map_or(0, |c| c.degree);
    let coords = SlotCoordinates::new(space, n + 1, sector, reg);
    let images = cochains
        .iter()
        .map(|c| {
            let b = Coboundary::new(space, f, c);
            Ok(coords.vector(&materialize(space, &b, sector, &coords.slots)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((coords, images))
}

/// `RLH^n` on a closed sector, by exact ranks of the coboundary matrices.
pub fn rlh_dims(
    space: &ReducedSpace,
    f: &StructureConstants,
    n: usize,
    sector: &BTreeSet<i64>,
    reg: RegulatorSet,
) -> Result<RlhDims> {
    check_closed(space, sector)?;
    let cn = cochain_space_basis(space, n, sector, reg)?;
    let dim_c = cn.len();
    let rank_out = if cn.is_empty() {
        0
    } else {
        let (coords, imgs) = coboundary_images(space, f, &cn, sector, reg)?;
        rank_fraction_free(&column_matrix(&imgs, coords.len()))
    };
    let coords_n = SlotCoordinates::new(space, n, sector, reg);
    let below: Vec<Vec<Rational>> = if n == 0 {
        Vec::new()
    } else if n == 1 {
        let mut v = Vec::new();
        for &g in sector {
            for k in 0..space.basis(g).len() {
                let mut x = vec![Rational::zero(); space.basis(g).len()];
                x[k] = Rational::one();
                v.push(coords_n.vector(&coboundary0(space, f, g, &x, sector.iter().copied())));
            }
        }
        v
    } else {
        let cm = cochain_space_basis(space, n - 1, sector, reg)?;
        if cm.is_empty() {
            Vec::new()
        } else {
            coboundary_images(space, f, &cm, sector, reg)?.1
        }
    };
    let dim_b = if below.is_empty() {
        0
    } else {
        rank_fraction_free(&column_matrix(&below, coords_n.len()))
    };
    let dim_z = dim_c - rank_out;
    Ok(RlhDims {
        dim_c,
        dim_z,
        dim_b,
        dim_rlh: dim_z - dim_b,
    })
}

/// Outcome of a `b∘b = 0` identity test.
#[derive(Clone, Debug, PartialEq)]
pub struct BbReport {
    pub degree: usize,
    pub seed: u64,
    pub slots_checked: usize,
    /// First offending slot with its m-tuple and value, if any.
    pub failure: Option<(Slot, Vec<usize>, Vec<RegulatedScalar>)>,
}

impl BbReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Evaluates `b^{n+1} b^n ω` for a seeded random Zᵉ-symmetric `ω` of degree
/// `n` on every argument tuple with grades `≤ cutoff`.
pub fn bb_test(
    space: &ReducedSpace,
    f: &StructureConstants,
    n: usize,
    cutoff: i64,
    seed: u64,
    reg: RegulatorSet,
) -> Result<BbReport> {
    if n == 0 {
        return Err(Error::Invalid("bb-test needs degree >= 1".into()));
    }
    let w = RandomCochain::new(space, n, seed);
    let b1 = Coboundary::new(space, f, &w);
    let b2 = Coboundary::new(space, f, &b1);
    let grades: BTreeSet<i64> = space.grade_list().into_iter().filter(|&g| g <= cutoff).collect();
    let targets: BTreeSet<i64> = space.grade_list().into_iter().collect();
    let all = slots(space, n + 2, &grades, &targets, reg);
    let results: Vec<Result<Option<(Slot, Vec<usize>, Vec<RegulatedScalar>)>>> = all
        .par_iter()
        .map(|s| {
            let b = b2.block(&s.fields, &s.dims, s.e)?;
            for (m, row) in basis_tuples(&s.dims, s.e).into_iter().zip(b) {
                if row.iter().any(|x| !x.is_zero()) {
                    return Ok(Some((s.clone(), m, row)));
                }
            }
            Ok(None)
        })
        .collect();
    let mut failure = None;
    for r in results {
        if let Some(x) = r? {
            failure.get_or_insert(x);
        }
    }
    Ok(BbReport {
        degree: n,
        seed,
        slots_checked: all.len(),
        failure,
    })
}

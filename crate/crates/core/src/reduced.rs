//! The reduced space, the multi-component bracket `Γ*`, and the constraint
//! systems on structure constants.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;

use crate::arith::{pochhammer, Dim, Rational, RegulatedScalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::transform::{y_matrix, RegulatorSet};

/// Graded multiplicity space `V = ⊕ V_a` with labeled bases.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ReducedSpace {
    labels: Vec<String>,
    grades: Vec<i64>,
    by_grade: BTreeMap<i64, Vec<usize>>,
    index: HashMap<String, usize>,
}

impl ReducedSpace {
    pub fn new<S: AsRef<str>>(grades: &[(i64, Vec<S>)]) -> Result<Self> {
        let mut sp = ReducedSpace::default();
        for (g, fields) in grades {
            if *g < 1 {
                return Err(Error::UnitarityBound(*g));
            }
            for f in fields {
                sp.push(*g, f.as_ref())?;
            }
        }
        Ok(sp)
    }

    fn push(&mut self, grade: i64, label: &str) -> Result<()> {
        if self.index.contains_key(label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.grades.push(grade);
        self.by_grade.entry(grade).or_default().push(i);
        self.index.insert(label.to_string(), i);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn grade(&self, i: usize) -> i64 {
        self.grades[i]
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Field indices of grade `g` (empty if unpopulated).
    pub fn basis(&self, g: i64) -> &[usize] {
        self.by_grade.get(&g).map_or(&[], Vec::as_slice)
    }

    pub fn grades(&self) -> impl Iterator<Item = (i64, &[usize])> {
        self.by_grade.iter().map(|(g, v)| (*g, v.as_slice()))
    }

    pub fn grade_list(&self) -> Vec<i64> {
        self.by_grade.keys().copied().collect()
    }

    /// Position of field `i` inside its grade's basis.
    pub fn position(&self, i: usize) -> usize {
        self.basis(self.grades[i]).iter().position(|&j| j == i).unwrap()
    }
}

/// `(−1)^{a+b−c}` relating `F^C_{AB}` and `F^C_{BA}`.
pub fn graded_sign(a: i64, b: i64, c: i64) -> i64 {
    if (a + b - c).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Structure constants `F^C_{AB}` keyed by field indices `(A, B, C)`.
///
/// Only nonzero values are stored. The table is kept complete under graded
/// symmetry when built through [`StructureConstants::insert_completed`].
#[derive(Clone, Debug, PartialEq, Default)]
pub struct StructureConstants {
    table: BTreeMap<(usize, usize, usize), Rational>,
}

impl StructureConstants {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> Rational {
        self.table.get(&(a, b, c)).cloned().unwrap_or_default()
    }

    /// Raw insertion with no symmetry completion.
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: Rational) {
        if v == Rational::default() {
            self.table.remove(&(a, b, c));
        } else {
            self.table.insert((a, b, c), v);
        }
    }

    /// Inserts `F^C_{AB}` and the partner `F^C_{BA}`; rejects conflicts.
    pub fn insert_completed(
        &mut self,
        space: &ReducedSpace,
        a: usize,
        b: usize,
        c: usize,
        v: Rational,
    ) -> Result<()> {
        let (ga, gb, gc) = (space.grade(a), space.grade(b), space.grade(c));
        let err = |kind: fn(String, String, String) -> Error| {
            kind(
                space.label(a).into(),
                space.label(b).into(),
                space.label(c).into(),
            )
        };
        if gc > ga + gb - 1 {
            return Err(err(|a, b, c| Error::GradeMismatch { a, b, c }));
        }
        let partner = v.clone() * Rational::from_integer(graded_sign(ga, gb, gc).into());
        let conflict = |cur: Option<&Rational>, want: &Rational| cur.is_some_and(|x| x != want);
        if conflict(self.table.get(&(a, b, c)), &v)
            || conflict(self.table.get(&(b, a, c)), &partner)
            || (a == b && v != partner)
        {
            return Err(err(|a, b, c| Error::SymmetryConflict { a, b, c }));
        }
        self.set(a, b, c, v);
        self.set(b, a, c, partner);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rational)> {
        self.table.iter()
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        let mut out = Self::new();
        for (k, v) in &self.table {
            out.set(k.0, k.1, k.2, v * s);
        }
        out
    }
}

/// `Γ*(A, B)_m` as a coefficient vector over the basis of grade `a+b−1−m`.
pub fn gamma_apply(
    space: &ReducedSpace,
    f: &StructureConstants,
    a: usize,
    b: usize,
    m: usize,
) -> (i64, Vec<Rational>) {
    let c = space.grade(a) + space.grade(b) - 1 - m as i64;
    let v = space.basis(c).iter().map(|&k| f.get(a, b, k)).collect();
    (c, v)
}

/// A violation of `F^C_{AB} = (−1)^{a+b−c} F^C_{BA}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryViolation {
    pub a: String,
    pub b: String,
    pub c: String,
    pub f_ab: Rational,
    pub f_ba: Rational,
}

pub fn check_symmetry(space: &ReducedSpace, f: &StructureConstants) -> Vec<SymmetryViolation> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (&(a, b, c), _) in f.entries() {
        let key = (a.min(b), a.max(b), c);
        if !seen.insert(key) {
            continue;
        }
        let (a, b, c) = key;
        let s = graded_sign(space.grade(a), space.grade(b), space.grade(c));
        let (fab, fba) = (f.get(a, b, c), f.get(b, a, c));
        if fab != fba.clone() * Rational::from_integer(s.into()) {
            out.push(SymmetryViolation {
                a: space.label(a).into(),
                b: space.label(b).into(),
                c: space.label(c).into(),
                f_ab: fab,
                f_ba: fba,
            });
        }
    }
    out
}

/// Regulated dimensions attached to the three arguments of a Jacobi triple.
fn triple_dims(space: &ReducedSpace, abc: [usize; 3], reg: RegulatorSet) -> [Dim; 3] {
    let d = reg.regulate(&abc.map(|i| space.grade(i)));
    [d[0], d[1], d[2]]
}

/// The two `Y` matrices of the block: `Y_bca` and `Y_bca · Y_cab`.
fn rji_matrices(d: [Dim; 3], n: usize) -> (Matrix<RegulatedScalar>, Matrix<RegulatedScalar>) {
    let [a, b, c] = d;
    let ybca = y_matrix(b, c, a, n);
    let ycab = y_matrix(c, a, b, n);
    let prod = ybca.mul(&ycab);
    ((*ybca).clone(), prod)
}

/// `[Σ_{E2} F^E_{X E2} F^{E2}_{YZ}]` for each `m_2 = 0..=n`, generic over how a
/// product of two structure constants is represented.
fn nested<T>(
    space: &ReducedSpace,
    x: usize,
    y: usize,
    z: usize,
    e: usize,
    n: usize,
    mut term: impl FnMut(usize, usize, usize, usize, usize, usize) -> T,
) -> Vec<Vec<T>> {
    (0..=n)
        .map(|m2| {
            let e2 = space.grade(y) + space.grade(z) - m2 as i64 - 1;
            space
                .basis(e2)
                .iter()
                .map(|&k| term(x, k, e, y, z, k))
                .collect()
        })
        .collect()
}

/// Components of `RJI(A,B,C)_{m_1 m_2}` over the basis of grade `e`.
pub fn rji_evaluate(
    space: &ReducedSpace,
    f: &StructureConstants,
    abc: [usize; 3],
    e: i64,
    m1: usize,
    m2: usize,
    reg: RegulatorSet,
) -> Result<Vec<RegulatedScalar>> {
    let [a, b, c] = abc;
    let n = m1 + m2;
    if (space.grade(a) + space.grade(b) + space.grade(c) - e - 2) != n as i64 {
        return Err(Error::Invalid(format!(
            "m1 + m2 = {n} does not match the grades and e = {e}"
        )));
    }
    let (ybca, prod) = rji_matrices(triple_dims(space, abc, reg), n);
    let value = |x, k, ee, y, z, k2| f.get(x, k, ee) * f.get(y, z, k2);
    let out = space
        .basis(e)
        .iter()
        .map(|&ee| {
            let sum = |g: Vec<Vec<Rational>>| -> Vec<RegulatedScalar> {
                g.into_iter()
                    .map(|v| RegulatedScalar::constant(v.into_iter().sum()))
                    .collect()
            };
            let g1 = sum(nested(space, a, b, c, ee, n, value));
            let g2 = sum(nested(space, b, c, a, ee, n, value));
            let g3 = sum(nested(space, c, a, b, ee, n, value));
            let t2 = ybca.mul_vec(&g2);
            let t3 = prod.mul_vec(&g3);
            &(&g1[m2] + &t2[m2]) + &t3[m2]
        })
        .collect();
    Ok(out)
}

/// A structure-constant variable `F^C_{AB}` in canonical orientation `A ≤ B`.
pub type FVar = (usize, usize, usize);

/// Canonical variable and sign for `F^C_{AB}`; `None` if it vanishes by symmetry.
pub fn canonical_var(space: &ReducedSpace, a: usize, b: usize, c: usize) -> Option<(FVar, i64)> {
    if a <= b {
        return Some(((a, b, c), 1));
    }
    let s = graded_sign(space.grade(a), space.grade(b), space.grade(c));
    Some(((b, a, c), s))
}

fn var_nonzero(space: &ReducedSpace, v: FVar) -> bool {
    v.0 != v.1 || graded_sign(space.grade(v.0), space.grade(v.1), space.grade(v.2)) == 1
}

/// One quadratic monomial `coeff · F_1 · F_2` with `F_1 ≤ F_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Rational,
    pub vars: [FVar; 2],
}

/// Where a constraint comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintContext {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub e: usize,
    pub m1: usize,
    pub m2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub context: ConstraintContext,
    pub monomials: Vec<Monomial>,
    /// Power of `ε` whose coefficient was kept after clearing denominators.
    pub eps_order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConstraintSystem {
    pub constraints: Vec<Constraint>,
    /// Number of `(A,B,C,E,m_1,m_2)` contexts examined.
    pub contexts: usize,
}

/// Options for constraint generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct GenerateOptions {
    pub regulator: RegulatorSet,
    /// Also emit the subleading `ε` orders up to this many beyond the leading one.
    pub extra_orders: usize,
}

type SymPoly = BTreeMap<[FVar; 2], RegulatedScalar>;

fn sym_nested(space: &ReducedSpace, x: usize, y: usize, z: usize, e: usize, n: usize) -> Vec<SymPoly> {
    let term = |x, k, ee, y, z, k2| -> Option<([FVar; 2], i64)> {
        let (v1, s1) = canonical_var(space, x, k, ee)?;
        let (v2, s2) = canonical_var(space, y, z, k2)?;
        if !var_nonzero(space, v1) || !var_nonzero(space, v2) {
            return None;
        }
        let mut vars = [v1, v2];
        vars.sort();
        Some((vars, s1 * s2))
    };
    nested(space, x, y, z, e, n, term)
        .into_iter()
        .map(|terms| {
            let mut p = SymPoly::new();
            for (vars, s) in terms.into_iter().flatten() {
                let ent = p.entry(vars).or_insert_with(RegulatedScalar::zero);
                *ent = &*ent + &RegulatedScalar::constant(Rational::from_integer(s.into()));
            }
            p
        })
        .collect()
}

fn sym_add_scaled(acc: &mut SymPoly, p: &SymPoly, s: &RegulatedScalar) {
    if s.is_zero() {
        return;
    }
    for (k, v) in p {
        let ent = acc.entry(*k).or_insert_with(RegulatedScalar::zero);
        *ent = &*ent + &(v * s);
    }
}

/// Clears the `ε`-denominators of a regulated quadratic form: returns the
/// coefficient polynomials of `ε^{-k}, ε^{-k+1}, …` where `k ≥ 0` is the
/// highest pole order present.
fn clear(p: &SymPoly, extra: usize) -> Vec<(i64, Vec<Monomial>)> {
    let nonzero: Vec<_> = p.iter().filter(|(_, v)| !v.is_zero()).collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    let k = nonzero
        .iter()
        .map(|(_, v)| (-v.valuation().unwrap()).max(0))
        .max()
        .unwrap();
    let mut out = Vec::new();
    for step in 0..=extra as i64 {
        let order = -k + step;
        let monos: Vec<Monomial> = nonzero
            .iter()
            .map(|(vars, v)| Monomial {
                coeff: v.laurent_coeff(order),
                vars: **vars,
            })
            .filter(|m| m.coeff != Rational::default())
            .collect();
        if !monos.is_empty() {
            out.push((order, monos));
        }
    }
    out
}

/// All reduced-Jacobi constraints with `a+b+c ≤ max_total_grade`; constraints
/// that vanish identically are dropped.
pub fn generate_constraints(
    space: &ReducedSpace,
    max_total_grade: i64,
    opts: GenerateOptions,
) -> ConstraintSystem {
    let mut triples = Vec::new();
    for a in 0..space.len() {
        for b in 0..space.len() {
            for c in 0..space.len() {
                let tot = space.grade(a) + space.grade(b) + space.grade(c);
                if tot <= max_total_grade {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    let results: Vec<(usize, Vec<Constraint>)> = triples
        .par_iter()
        .map(|&abc| triple_constraints(space, abc, opts))
        .collect();
    let mut sys = ConstraintSystem::default();
    for (n, cs) in results {
        sys.contexts += n;
        sys.constraints.extend(cs);
    }
    sys
}

fn triple_constraints(
    space: &ReducedSpace,
    abc: [usize; 3],
    opts: GenerateOptions,
) -> (usize, Vec<Constraint>) {
    let [a, b, c] = abc;
    let tot = space.grade(a) + space.grade(b) + space.grade(c);
    let mut contexts = 0;
    let mut out = Vec::new();
    for e in space.grade_list() {
        let n = tot - e - 2;
        if n < 0 {
            continue;
        }
        let n = n as usize;
        let (ybca, prod) = rji_matrices(triple_dims(space, abc, opts.regulator), n);
        for &ee in space.basis(e) {
            let g1 = sym_nested(space, a, b, c, ee, n);
            let g2 = sym_nested(space, b, c, a, ee, n);
            let g3 = sym_nested(space, c, a, b, ee, n);
            for m2 in 0..=n {
                contexts += 1;
                let mut p = g1[m2].clone();
                for j in 0..=n {
                    sym_add_scaled(&mut p, &g2[j], &ybca[(m2, j)]);
                    sym_add_scaled(&mut p, &g3[j], &prod[(m2, j)]);
                }
                for (order, monomials) in clear(&p, opts.extra_orders) {
                    out.push(Constraint {
                        context: ConstraintContext {
                            a,
                            b,
                            c,
                            e: ee,
                            m1: n - m2,
                            m2,
                        },
                        monomials,
                        eps_order: order,
                    });
                }
            }
        }
    }
    (contexts, out)
}

/// Residual of one constraint at a numeric assignment.
pub fn constraint_residual(c: &Constraint, f: &StructureConstants) -> Rational {
    c.monomials
        .iter()
        .map(|m| {
            let [v1, v2] = m.vars;
            &m.coeff * f.get(v1.0, v1.1, v1.2) * f.get(v2.0, v2.1, v2.2)
        })
        .sum()
}

/// Nonzero residuals, as `(constraint index, residual)`.
pub fn check_constraints(sys: &ConstraintSystem, f: &StructureConstants) -> Vec<(usize, Rational)> {
    sys.constraints
        .iter()
        .enumerate()
        .map(|(i, c)| (i, constraint_residual(c, f)))
        .filter(|(_, r)| *r != Rational::default())
        .collect()
}

/// Per-grade symmetric matrices `⟨⟨A B⟩⟩` in the order of [`ReducedSpace::basis`].
#[derive(Clone, Debug, PartialEq, Default)]
pub struct QuadraticForm {
    pub blocks: BTreeMap<i64, Matrix<Rational>>,
}

impl QuadraticForm {
    pub fn identity(space: &ReducedSpace) -> Self {
        QuadraticForm {
            blocks: space
                .grades()
                .map(|(g, b)| (g, Matrix::identity(b.len())))
                .collect(),
        }
    }

    /// `⟨⟨A B⟩⟩` for field indices (zero across grades).
    pub fn value(&self, space: &ReducedSpace, a: usize, b: usize) -> Rational {
        if space.grade(a) != space.grade(b) {
            return Rational::default();
        }
        self.blocks
            .get(&space.grade(a))
            .map(|m| m[(space.position(a), space.position(b))].clone())
            .unwrap_or_default()
    }
}

/// An invariance residual for the triple `(A, B, C)`: `lhs − rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceResidual {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub residual: Rational,
}

/// `(−1)^c (2c)_{a+b−c−1} Σ F^{C'}_{AB}⟨⟨C'C⟩⟩ − (−1)^a (2a)_{b+c−a−1} Σ F^{A'}_{BC}⟨⟨A'A⟩⟩`
/// for every triple where both exponents are nonnegative.
pub fn invariance_residuals(
    space: &ReducedSpace,
    f: &StructureConstants,
    g: &QuadraticForm,
) -> Vec<InvarianceResidual> {
    let n = space.len();
    let mut out = Vec::new();
    let sgn = |k: i64| Rational::from_integer(if k % 2 == 0 { 1 } else { -1 }.into());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (ga, gb, gc) = (space.grade(a), space.grade(b), space.grade(c));
                let (p, q) = (ga + gb - gc - 1, gb + gc - ga - 1);
                if p < 0 || q < 0 {
                    continue;
                }
                let lhs: Rational = space
                    .basis(gc)
                    .iter()
                    .map(|&cp| f.get(a, b, cp) * g.value(space, cp, c))
                    .sum::<Rational>()
                    * sgn(gc)
                    * pochhammer(&Rational::from_integer((2 * gc).into()), p as usize);
                let rhs: Rational = space
                    .basis(ga)
                    .iter()
                    .map(|&ap| f.get(b, c, ap) * g.value(space, ap, a))
                    .sum::<Rational>()
                    * sgn(ga)
                    * pochhammer(&Rational::from_integer((2 * ga).into()), q as usize);
                out.push(InvarianceResidual {
                    a,
                    b,
                    c,
                    residual: lhs - rhs,
                });
            }
        }
    }
    out
}

/// Result of the exact positive-definiteness test.
#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    pub positive: bool,
    /// Grade and vector `x` with `xᵀ G x ≤ 0`, when not positive.
    pub witness: Option<(i64, Vec<Rational>)>,
}

/// Positive definiteness of one symmetric block via exact `LDLᵀ`; returns a
/// witness vector on failure.
pub fn positive_definite(m: &Matrix<Rational>) -> std::result::Result<(), Vec<Rational>> {
    let n = m.rows();
    let zero = Rational::default();
    let mut l: Matrix<Rational> = Matrix::identity(n);
    let mut d = vec![zero.clone(); n];
    for j in 0..n {
        let mut dj = m[(j, j)].clone();
        for k in 0..j {
            dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
        }
        if dj <= zero {
            // x = L^{-T} e_j on the leading (j+1)-block gives xᵀ G x = d_j
            let mut x = vec![zero.clone(); n];
            x[j] = Rational::from_integer(1.into());
            for i in (0..j).rev() {
                let mut s = zero.clone();
                for k in i + 1..=j {
                    s += &l[(k, i)] * &x[k];
                }
                x[i] = -s;
            }
            return Err(x);
        }
        d[j] = dj;
        for i in j + 1..n {
            let mut v = m[(i, j)].clone();
            for k in 0..j {
                v -= &l[(i, k)] * &l[(j, k)] * &d[k];
            }
            l[(i, j)] = v / &d[j];
        }
    }
    Ok(())
}

pub fn gram_positivity_check(g: &QuadraticForm) -> GramReport {
    for (&grade, m) in &g.blocks {
        if let Err(x) = positive_definite(m) {
            return GramReport {
                positive: false,
                witness: Some((grade, x)),
            };
        }
    }
    GramReport {
        positive: true,
        witness: None,
    }
}

/// A random table satisfying graded symmetry, with small rational entries.
pub fn random_structure_constants<R: Rng>(
    space: &ReducedSpace,
    rng: &mut R,
    density: f64,
) -> StructureConstants {
    let mut f = StructureConstants::new();
    for a in 0..space.len() {
        for b in a..space.len() {
            for c in 0..space.len() {
                if space.grade(c) > space.grade(a) + space.grade(b) - 1 {
                    continue;
                }
                if a == b && graded_sign(space.grade(a), space.grade(b), space.grade(c)) == -1 {
                    continue;
                }
                if !rng.gen_bool(density) {
                    continue;
                }
                let v = Rational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into());
                f.insert_completed(space, a, b, c, v).unwrap();
            }
        }
    }
    f
}

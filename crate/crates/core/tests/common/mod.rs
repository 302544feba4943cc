//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use num_traits::{One, Zero};
use walg::arith::{rat, Rational};
use walg::reduced::{ReducedSpace, StructureConstants};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn grade1(labels: &[&str]) -> ReducedSpace {
    ReducedSpace::new(&[(1, labels.to_vec())]).unwrap()
}

/// A table from `[X_a, X_b] = Σ v X_c` entries (one orientation each).
pub fn table(space: &ReducedSpace, entries: &[(usize, usize, usize, i64)]) -> StructureConstants {
    let mut f = StructureConstants::new();
    for &(a, b, c, v) in entries {
        f.insert_completed(space, a, b, c, rat(v, 1)).unwrap();
    }
    f
}

pub fn su2() -> (ReducedSpace, StructureConstants) {
    let sp = grade1(&["X1", "X2", "X3"]);
    let f = table(&sp, &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)]);
    (sp, f)
}

/// `[X1,X2] = X1`, `[X2,X3] = X2`, `[X1,X3] = X3`.
pub fn non_lie() -> (ReducedSpace, StructureConstants) {
    let sp = grade1(&["X1", "X2", "X3"]);
    let f = table(&sp, &[(0, 1, 0, 1), (1, 2, 1, 1), (0, 2, 2, 1)]);
    (sp, f)
}

/// Currents `J1, J2` spanning the 2-dim non-abelian algebra, primary under a
/// Virasoro field `T`.
pub fn mixed() -> (ReducedSpace, StructureConstants) {
    let sp = ReducedSpace::new(&[(1, vec!["J1", "J2"]), (2, vec!["T"])]).unwrap();
    let mut f = StructureConstants::new();
    let h = rat(-1, 2);
    f.insert_completed(&sp, 2, 2, 2, h.clone()).unwrap();
    for j in [0, 1] {
        f.insert_completed(&sp, j, 2, j, h.clone()).unwrap();
    }
    f.insert_completed(&sp, 0, 1, 1, rat(1, 1)).unwrap();
    (sp, f)
}

// ---------------------------------------------------------------- exact rank

/// Rank by plain Gaussian elimination over the rationals.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &pivot;
                for k in c..cols {
                    let v = &rows[r][k] * &factor;
                    rows[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

// ---------------------------------------------------------------- classical CE complex

/// Adjoint Chevalley–Eilenberg cohomology of a Lie algebra given by
/// `c[i][j][k]` with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
pub struct ClassicalCe {
    pub dim: usize,
    pub c: Vec<Vec<Vec<Rational>>>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct CeDims {
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in subsets(n, k - 1) {
            if rest.first().map_or(true, |&r| r > first) {
                let mut s = vec![first];
                s.extend(rest);
                out.push(s);
            }
        }
    }
    out
}

/// Sorts a tuple of basis indices; `None` if an index repeats.
fn sort_sign(t: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = t.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

impl ClassicalCe {
    pub fn from_table(space: &ReducedSpace, f: &StructureConstants) -> Self {
        let dim = space.len();
        let c = (0..dim)
            .map(|i| (0..dim).map(|j| (0..dim).map(|k| f.get(i, j, k)).collect()).collect())
            .collect();
        ClassicalCe { dim, c }
    }

    /// Coordinates of `C^n`: (sorted n-subset, output index).
    fn basis(&self, n: usize) -> Vec<(Vec<usize>, usize)> {
        let mut out = Vec::new();
        for s in subsets(self.dim, n) {
            for k in 0..self.dim {
                out.push((s.clone(), k));
            }
        }
        out
    }

    /// `ω(x_{t_1}, …)` as a vector, for ω given by coordinates over `basis(n)`.
    fn eval(&self, w: &[Rational], n: usize, t: &[usize]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        let Some((s, sign)) = sort_sign(t) else {
            return out;
        };
        let pos = subsets(self.dim, n).iter().position(|x| *x == s).unwrap();
        for k in 0..self.dim {
            out[k] = &w[pos * self.dim + k] * rat(sign, 1);
        }
        out
    }

    fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                if x[i].is_zero() || y[j].is_zero() {
                    continue;
                }
                for k in 0..self.dim {
                    out[k] += &x[i] * &y[j] * &self.c[i][j][k];
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    /// `(dω)(x_0 … x_n) = Σ_i (−1)^i [x_i, ω(…x̂_i…)] + Σ_{i<j} (−1)^{i+j} ω([x_i,x_j], …x̂_i…x̂_j…)`
    /// on basis arguments, as the image coordinates over `basis(n+1)`.
    fn d(&self, w: &[Rational], n: usize) -> Vec<Rational> {
        let mut out = Vec::new();
        for (s, k) in self.basis(n + 1) {
            let mut acc = Rational::zero();
            for i in 0..=n {
                let rest: Vec<usize> = s.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &x)| x).collect();
                let v = self.eval(w, n, &rest);
                let b = self.bracket(&self.unit(s[i]), &v);
                acc += rat(if i % 2 == 0 { 1 } else { -1 }, 1) * &b[k];
            }
            for i in 0..=n {
                for j in i + 1..=n {
                    let xy = self.bracket(&self.unit(s[i]), &self.unit(s[j]));
                    let rest: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != i && p != j)
                        .map(|(_, &x)| x)
                        .collect();
                    for (l, coeff) in xy.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut args = vec![l];
                        args.extend(&rest);
                        let v = self.eval(w, n, &args);
                        acc += rat(if (i + j) % 2 == 0 { 1 } else { -1 }, 1) * coeff * &v[k];
                    }
                }
            }
            out.push(acc);
        }
        out
    }

    fn rank_d(&self, n: usize) -> usize {
        let size = self.basis(n).len();
        if size == 0 || self.basis(n + 1).is_empty() {
            return 0;
        }
        let images: Vec<Vec<Rational>> = (0..size)
            .map(|j| {
                let mut w = vec![Rational::zero(); size];
                w[j] = Rational::one();
                self.d(&w, n)
            })
            .collect();
        rank(images)
    }

    pub fn dims(&self, n: usize) -> CeDims {
        let cochains = self.basis(n).len();
        let cocycles = cochains - self.rank_d(n);
        let coboundaries = if n == 0 { 0 } else { self.rank_d(n - 1) };
        CeDims {
            cochains,
            cocycles,
            coboundaries,
            cohomology: cocycles - coboundaries,
        }
    }
}

/// Small Lie algebras with known adjoint cohomology.
pub fn lie_algebras() -> Vec<(&'static str, ReducedSpace, StructureConstants)> {
    let three = || grade1(&["X1", "X2", "X3"]);
    let two = || grade1(&["X1", "X2"]);
    let (s, f) = su2();
    let sl2 = three();
    // H, E, F
    let sl2_f = table(&sl2, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]);
    let heis = three();
    let heis_f = table(&heis, &[(0, 1, 2, 1)]);
    let aff = two();
    let aff_f = table(&aff, &[(0, 1, 1, 1)]);
    let four = grade1(&["X1", "X2", "X3", "U"]);
    let gl2 = table(&four, &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)]);
    vec![
        ("su(2)", s, f),
        ("sl(2) real", sl2, sl2_f),
        ("heisenberg", heis, heis_f),
        ("aff(1)", aff, aff_f),
        ("abelian 2", two(), StructureConstants::new()),
        ("abelian 3", three(), StructureConstants::new()),
        ("su(2)+u(1)", four, gl2),
    ]
}

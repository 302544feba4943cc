//! Formal deformations `Γ*(λ) = Γ*_0 + λΓ_1 + λ²Γ_2 + …` of the reduced bracket.
//!
//! Order `n` of the deformed Jacobi identity reads `b²Γ_n = G^n` with
//! `G^n = −Σ_{k=1}^{n−1} J(Γ_k, Γ_{n−k})`, where `J` is the cyclic composite
//! of [`Jacobiator`]. All computations run on a closed sector, where cochains
//! are finite rational vectors and `b` is an exact matrix.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::arith::Rational;
use crate::cohomology::{
    check_closed, cochain_space_basis, coboundary_images, materialize, slots, Coboundary,
    Cochain, Jacobiator, SlotCoordinates,
};
use crate::error::{Error, Result};
use crate::linalg::{rank_fraction_free, Matrix};
use crate::reduced::{ReducedSpace, StructureConstants};
use crate::transform::RegulatorSet;

/// The terms `Γ_1, Γ_2, …` of a deformation of `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationSeries {
    pub base: StructureConstants,
    pub terms: Vec<Cochain>,
}

/// A closed sector with the regulator used to evaluate `Z` matrices on it.
#[derive(Clone, Debug)]
pub struct Sector {
    pub grades: BTreeSet<i64>,
    pub reg: RegulatorSet,
}

impl Sector {
    pub fn new(space: &ReducedSpace, grades: impl IntoIterator<Item = i64>, reg: RegulatorSet) -> Result<Self> {
        let grades = grades.into_iter().collect();
        check_closed(space, &grades)?;
        Ok(Sector { grades, reg })
    }

    fn slots(&self, space: &ReducedSpace, n: usize) -> SlotCoordinates {
        SlotCoordinates::new(space, n, &self.grades, self.reg)
    }
}

fn require_degree(c: &Cochain, n: usize) -> Result<()> {
    if c.degree != n {
        return Err(Error::Invalid(format!(
            "expected a degree-{n} cochain, got degree {}",
            c.degree
        )));
    }
    Ok(())
}

/// `b^n ω` evaluated on the sector.
pub fn coboundary_on(
    space: &ReducedSpace,
    f: &StructureConstants,
    w: &Cochain,
    sector: &Sector,
) -> Result<Cochain> {
    let b = Coboundary::new(space, f, w);
    let s = slots(space, w.degree + 1, &sector.grades, &sector.grades, sector.reg);
    materialize(space, &b, &sector.grades, &s)
}

/// Result of the first-order condition `b²Γ_1 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    pub is_cocycle: bool,
    /// `b²Γ_1` on the sector.
    pub residual: Cochain,
}

pub fn first_order_cocycle_check(
    space: &ReducedSpace,
    f: &StructureConstants,
    gamma1: &Cochain,
    sector: &Sector,
) -> Result<CocycleReport> {
    require_degree(gamma1, 2)?;
    let residual = coboundary_on(space, f, gamma1, sector)?;
    Ok(CocycleReport {
        is_cocycle: residual.is_zero(),
        residual,
    })
}

/// The first-order term `b¹q` of the trivial deformation generated by `q`.
pub fn trivial_first_order(
    space: &ReducedSpace,
    f: &StructureConstants,
    q: &Cochain,
    sector: &Sector,
) -> Result<Cochain> {
    require_degree(q, 1)?;
    coboundary_on(space, f, q, sector)
}

/// `G^n[Γ_1 … Γ_{n−1}]` on the sector. `terms` must hold at least `n − 1` entries.
pub fn obstruction_gn(
    space: &ReducedSpace,
    terms: &[Cochain],
    n: usize,
    sector: &Sector,
) -> Result<Cochain> {
    if n < 2 || terms.len() < n - 1 {
        return Err(Error::Invalid(format!(
            "G^{n} needs n >= 2 and {} lower-order terms, got {}",
            n.saturating_sub(1),
            terms.len()
        )));
    }
    for t in &terms[..n - 1] {
        require_degree(t, 2)?;
    }
    let s = slots(space, 3, &sector.grades, &sector.grades, sector.reg);
    let mut out = Cochain::zero(3, sector.grades.iter().copied());
    for k in 1..n {
        let j = Jacobiator::new(space, &terms[k - 1], &terms[n - k - 1]);
        out = out.add(&materialize(space, &j, &sector.grades, &s)?)?;
    }
    Ok(out.scaled(&-Rational::from_integer(1.into())))
}

/// Outcome of solving `b²Γ_n = G^n`.
#[derive(Clone, Debug, PartialEq)]
pub enum IntegrateOutcome {
    /// A particular solution; any other differs from it by a cocycle, and
    /// `cocycle_dim` is the dimension of that ambiguity.
    Solved { gamma: Cochain, cocycle_dim: usize },
    /// `G^n` is not a coboundary. `rank_augmented > rank_image` witnesses it.
    Obstructed {
        obstruction: Cochain,
        rank_image: usize,
        rank_augmented: usize,
    },
}

/// Solves order `n` of the deformation given `Γ_1 … Γ_{n−1}`.
///
/// The particular solution sets all free coordinates (in the fixed order of
/// the symmetric cochain basis) to zero.
pub fn integrate_step(
    space: &ReducedSpace,
    series: &DeformationSeries,
    n: usize,
    sector: &Sector,
) -> Result<IntegrateOutcome> {
    let g = obstruction_gn(space, &series.terms, n, sector)?;
    let basis = cochain_space_basis(space, 2, &sector.grades, sector.reg)?;
    let coords3 = sector.slots(space, 3);
    let target = coords3.vector(&g);
    let images = if basis.is_empty() {
        Vec::new()
    } else {
        coboundary_images(space, &series.base, &basis, &sector.grades, sector.reg)?.1
    };
    let m = Matrix::from_fn(coords3.len(), images.len(), |i, j| images[j][i].clone());
    let rank_image = if images.is_empty() { 0 } else { rank_fraction_free(&m) };
    let solution = if images.is_empty() {
        target.iter().all(Zero::is_zero).then(Vec::new)
    } else {
        m.solve(&target)
    };
    match solution {
        Some(x) => {
            let mut gamma = Cochain::zero(2, sector.grades.iter().copied());
            for (c, b) in x.iter().zip(&basis) {
                if !c.is_zero() {
                    gamma = gamma.add(&b.scaled(c))?;
                }
            }
            Ok(IntegrateOutcome::Solved {
                gamma,
                cocycle_dim: basis.len() - rank_image,
            })
        }
        None => {
            let aug = Matrix::from_fn(coords3.len(), images.len() + 1, |i, j| {
                if j < images.len() {
                    images[j][i].clone()
                } else {
                    target[i].clone()
                }
            });
            Ok(IntegrateOutcome::Obstructed {
                obstruction: g,
                rank_image,
                rank_augmented: rank_fraction_free(&aug),
            })
        }
    }
}

/// Result of testing `b³G^n = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct BgReport {
    pub vanishes: bool,
    pub value: Cochain,
}

/// Evaluates `b³G^n`; the vanishing is an expectation, reported rather than assumed.
pub fn bg_test(
    space: &ReducedSpace,
    series: &DeformationSeries,
    n: usize,
    sector: &Sector,
) -> Result<BgReport> {
    let g = obstruction_gn(space, &series.terms, n, sector)?;
    let value = coboundary_on(space, &series.base, &g, sector)?;
    Ok(BgReport {
        vanishes: value.is_zero(),
        value,
    })
}

/// Whether `ω` lies in the image of `b` from one degree lower on the sector.
pub fn is_coboundary(
    space: &ReducedSpace,
    f: &StructureConstants,
    w: &Cochain,
    sector: &Sector,
) -> Result<bool> {
    let n = w.degree;
    if n == 0 {
        return Ok(w.is_zero());
    }
    let coords = sector.slots(space, n);
    let target = coords.vector(w);
    let images: Vec<Vec<Rational>> = if n == 1 {
        let mut v = Vec::new();
        for &g in &sector.grades {
            for k in 0..space.basis(g).len() {
                let mut x = vec![Rational::zero(); space.basis(g).len()];
                x[k] = Rational::from_integer(1.into());
                let b0 = crate::cohomology::coboundary0(space, f, g, &x, sector.grades.iter().copied());
                v.push(coords.vector(&b0));
            }
        }
        v
    } else {
        let basis = cochain_space_basis(space, n - 1, &sector.grades, sector.reg)?;
        if basis.is_empty() {
            Vec::new()
        } else {
            coboundary_images(space, f, &basis, &sector.grades, sector.reg)?.1
        }
    };
    if images.is_empty() {
        return Ok(target.iter().all(Zero::is_zero));
    }
    let m = Matrix::from_fn(coords.len(), images.len(), |i, j| images[j][i].clone());
    Ok(m.solve(&target).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn space() -> ReducedSpace {
        ReducedSpace::new(&[(1, vec!["X1", "X2", "X3"])]).unwrap()
    }

    fn table(sp: &ReducedSpace, entries: &[(usize, usize, usize)]) -> StructureConstants {
        let mut f = StructureConstants::new();
        for &(a, b, c) in entries {
            f.insert_completed(sp, a, b, c, rat(1, 1)).unwrap();
        }
        f
    }

    fn su2(sp: &ReducedSpace) -> StructureConstants {
        table(sp, &[(0, 1, 2), (1, 2, 0), (2, 0, 1)])
    }

    fn sector(sp: &ReducedSpace) -> Sector {
        Sector::new(sp, [1], RegulatorSet::Pow3).unwrap()
    }

    fn redefinition() -> Cochain {
        let mut q = Cochain::zero(1, [1]);
        for (i, row) in [[1, 2, 0], [0, -1, 3], [2, 1, 1]].iter().enumerate() {
            q.components.insert((vec![i], vec![]), row.iter().map(|&x| rat(x, 1)).collect());
        }
        q
    }

    #[test]
    fn trivial_deformation_is_a_cocycle() {
        let sp = space();
        let f = su2(&sp);
        let g1 = trivial_first_order(&sp, &f, &redefinition(), &sector(&sp)).unwrap();
        assert!(!g1.is_zero());
        assert!(first_order_cocycle_check(&sp, &f, &g1, &sector(&sp)).unwrap().is_cocycle);
        assert!(is_coboundary(&sp, &f, &g1, &sector(&sp)).unwrap());
    }

    #[test]
    fn identity_generates_the_bracket() {
        let sp = space();
        let f = su2(&sp);
        let q = Cochain::identity(&sp, [1]);
        let g1 = trivial_first_order(&sp, &f, &q, &sector(&sp)).unwrap();
        assert_eq!(g1, Cochain::from_bracket(&sp, &f, [1]));
    }

    #[test]
    fn rescaling_the_bracket_is_unobstructed() {
        let sp = space();
        let f = su2(&sp);
        let g0 = Cochain::from_bracket(&sp, &f, [1]);
        assert!(obstruction_gn(&sp, &[g0.clone()], 2, &sector(&sp)).unwrap().is_zero());
        let series = DeformationSeries { base: f, terms: vec![g0] };
        match integrate_step(&sp, &series, 2, &sector(&sp)).unwrap() {
            IntegrateOutcome::Solved { gamma, .. } => assert!(gamma.is_zero()),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn su2_second_order() {
        let sp = space();
        let f = su2(&sp);
        let g1 = trivial_first_order(&sp, &f, &redefinition(), &sector(&sp)).unwrap();
        let mut series = DeformationSeries { base: f.clone(), terms: vec![g1] };
        assert!(bg_test(&sp, &series, 2, &sector(&sp)).unwrap().vanishes);
        let g2 = match integrate_step(&sp, &series, 2, &sector(&sp)).unwrap() {
            IntegrateOutcome::Solved { gamma, cocycle_dim } => {
                assert_eq!(cocycle_dim, 6);
                gamma
            }
            o => panic!("{o:?}"),
        };
        let lhs = coboundary_on(&sp, &f, &g2, &sector(&sp)).unwrap();
        let rhs = obstruction_gn(&sp, &series.terms, 2, &sector(&sp)).unwrap();
        assert_eq!(lhs, rhs);
        series.terms.push(g2);
        assert!(bg_test(&sp, &series, 3, &sector(&sp)).unwrap().vanishes);
    }

    #[test]
    fn non_lie_first_order_over_abelian_base_is_obstructed() {
        let sp = space();
        let nl = table(&sp, &[(0, 1, 0), (1, 2, 1), (0, 2, 2)]);
        let series = DeformationSeries {
            base: StructureConstants::new(),
            terms: vec![Cochain::from_bracket(&sp, &nl, [1])],
        };
        match integrate_step(&sp, &series, 2, &sector(&sp)).unwrap() {
            IntegrateOutcome::Obstructed { obstruction, rank_image, rank_augmented } => {
                assert!(!obstruction.is_zero());
                assert!(rank_augmented > rank_image);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn input_validation() {
        let sp = space();
        let f = su2(&sp);
        let q = redefinition();
        assert!(first_order_cocycle_check(&sp, &f, &q, &sector(&sp)).is_err());
        assert!(obstruction_gn(&sp, &[], 2, &sector(&sp)).is_err());
        let mixed = ReducedSpace::new(&[(1, vec!["J"]), (2, vec!["T"])]).unwrap();
        assert!(Sector::new(&mixed, [2], RegulatorSet::Pow3).is_err());
    }
}

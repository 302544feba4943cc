//! Order-by-order integration of a formal deformation of su(2).

use walg::arith::rat;
use walg::cohomology::Cochain;
use walg::deformation::{
    bg_test, first_order_cocycle_check, integrate_step, trivial_first_order, DeformationSeries,
    IntegrateOutcome, Sector,
};
use walg::reduced::{ReducedSpace, StructureConstants};
use walg::transform::RegulatorSet;

fn main() {
    let space = ReducedSpace::new(&[(1, vec!["X1", "X2", "X3"])]).unwrap();
    let mut f = StructureConstants::new();
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        f.insert_completed(&space, a, b, c, rat(1, 1)).unwrap();
    }
    let sector = Sector::new(&space, [1], RegulatorSet::Pow3).unwrap();

    // a linear field redefinition q generates the trivial deformation b¹q
    let mut q = Cochain::zero(1, [1]);
    for (i, row) in [[1, 2, 0], [0, -1, 3], [2, 1, 1]].iter().enumerate() {
        q.components.insert((vec![i], vec![]), row.iter().map(|&x| rat(x, 1)).collect());
    }
    let gamma1 = trivial_first_order(&space, &f, &q, &sector).unwrap();
    let rep = first_order_cocycle_check(&space, &f, &gamma1, &sector).unwrap();
    println!("Γ_1 = b¹q is a cocycle: {}", rep.is_cocycle);

    let mut series = DeformationSeries {
        base: f,
        terms: vec![gamma1],
    };
    for n in 2..=3 {
        let bg = bg_test(&space, &series, n, &sector).unwrap();
        match integrate_step(&space, &series, n, &sector).unwrap() {
            IntegrateOutcome::Solved { gamma, cocycle_dim } => {
                println!("order {n}: solved (ambiguity {cocycle_dim}), bG = 0: {}", bg.vanishes);
                series.terms.push(gamma);
            }
            IntegrateOutcome::Obstructed { rank_image, rank_augmented, .. } => {
                println!("order {n}: obstructed ({rank_image} < {rank_augmented})");
                break;
            }
        }
    }
}

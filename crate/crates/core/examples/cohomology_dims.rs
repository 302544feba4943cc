//! Cohomology of the reduced complex on a grade-1 sector.

use std::collections::BTreeSet;

use walg::arith::rat;
use walg::cohomology::rlh_dims;
use walg::reduced::{ReducedSpace, StructureConstants};
use walg::transform::RegulatorSet;

fn main() {
    let sector: BTreeSet<i64> = [1].into();
    let space = ReducedSpace::new(&[(1, vec!["X1", "X2", "X3"])]).unwrap();
    let mut su2 = StructureConstants::new();
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        su2.insert_completed(&space, a, b, c, rat(1, 1)).unwrap();
    }
    for n in 1..=2 {
        let d = rlh_dims(&space, &su2, n, &sector, RegulatorSet::Pow3).unwrap();
        println!("su(2)  n={n}: C={} Z={} B={} H={}", d.dim_c, d.dim_z, d.dim_b, d.dim_rlh);
    }

    let plane = ReducedSpace::new(&[(1, vec!["A", "B"])]).unwrap();
    for n in 1..=2 {
        let d = rlh_dims(&plane, &StructureConstants::new(), n, &sector, RegulatorSet::Pow3).unwrap();
        println!("abelian n={n}: C={} Z={} B={} H={}", d.dim_c, d.dim_z, d.dim_b, d.dim_rlh);
    }
}

//! b∘b = 0 on random cochains over a space with grades 1 and 2.
//!
//! Dimensions are regulated per field occurrence, so the identity is checked
//! exactly in Q(ε).

use walg::arith::rat;
use walg::cohomology::bb_test;
use walg::reduced::{ReducedSpace, StructureConstants};
use walg::transform::RegulatorSet;

fn main() {
    let space = ReducedSpace::new(&[(1, vec!["J1", "J2"]), (2, vec!["T"])]).unwrap();
    let idx = |l: &str| space.index(l).unwrap();
    let mut f = StructureConstants::new();
    let half = rat(-1, 2);
    f.insert_completed(&space, idx("T"), idx("T"), idx("T"), half.clone()).unwrap();
    for j in ["J1", "J2"] {
        f.insert_completed(&space, idx(j), idx("T"), idx(j), half.clone()).unwrap();
    }
    f.insert_completed(&space, idx("J1"), idx("J2"), idx("J2"), rat(1, 1)).unwrap();

    for seed in 0..3 {
        for n in 1..=2 {
            let rep = bb_test(&space, &f, n, 2, seed, RegulatorSet::Pow3).unwrap();
            println!(
                "seed {seed} degree {n}: {} slots, passed = {}",
                rep.slots_checked,
                rep.passed()
            );
        }
    }
}

//! A single grade-2 field: every reduced Jacobi constraint is identically zero.

use walg::reduced::{generate_constraints, GenerateOptions, ReducedSpace};
use walg::transform::RegulatorSet;

fn main() {
    let space = ReducedSpace::new(&[(2, vec!["T"])]).unwrap();
    for regulator in [RegulatorSet::Pow3, RegulatorSet::Pow5] {
        let opts = GenerateOptions {
            regulator,
            extra_orders: 2,
        };
        let sys = generate_constraints(&space, 6, opts);
        println!(
            "{}: {} contexts, {} nonvanishing constraints",
            regulator.name(),
            sys.contexts,
            sys.constraints.len()
        );
    }
}

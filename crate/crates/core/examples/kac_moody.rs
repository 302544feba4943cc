//! Grade-1 algebras: the reduced Jacobi identity is the classical one.

use walg::arith::rat;
use walg::reduced::{
    check_constraints, generate_constraints, gram_positivity_check, invariance_residuals,
    GenerateOptions, QuadraticForm, ReducedSpace, StructureConstants,
};

fn table(space: &ReducedSpace, entries: &[(&str, &str, &str)]) -> StructureConstants {
    let mut f = StructureConstants::new();
    for (a, b, c) in entries {
        let (a, b, c) = (space.index(a).unwrap(), space.index(b).unwrap(), space.index(c).unwrap());
        f.insert_completed(space, a, b, c, rat(1, 1)).unwrap();
    }
    f
}

fn main() {
    let space = ReducedSpace::new(&[(1, vec!["X1", "X2", "X3"])]).unwrap();
    let sys = generate_constraints(&space, 3, GenerateOptions::default());
    println!("{} constraints from {} contexts", sys.constraints.len(), sys.contexts);

    let su2 = table(&space, &[("X1", "X2", "X3"), ("X2", "X3", "X1"), ("X3", "X1", "X2")]);
    println!("su(2) violations: {}", check_constraints(&sys, &su2).len());

    let non_lie = table(&space, &[("X1", "X2", "X1"), ("X2", "X3", "X2"), ("X1", "X3", "X3")]);
    println!("non-Lie violations: {}", check_constraints(&sys, &non_lie).len());

    let id = QuadraticForm::identity(&space);
    let nonzero = invariance_residuals(&space, &su2, &id)
        .iter()
        .filter(|r| r.residual != rat(0, 1))
        .count();
    println!("Killing-type form invariant: {}", nonzero == 0);
    println!("positive definite: {}", gram_positivity_check(&id).positive);
}

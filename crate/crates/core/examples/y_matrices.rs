//! The 3-point change of basis Y_abc(n): closed form, recursion and oracle.

use walg::arith::{Limit, RegulatedScalar};
use walg::linalg::Matrix;
use walg::transform::{y_matrix, y_oracle, y_recursive, RegulatorSet};

fn show(m: &Matrix<RegulatedScalar>) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| match m[(i, j)].limit() {
                Limit::Finite(r) => r.to_string(),
                Limit::Pole { order, leading } => format!("{leading}·ε^-{order}"),
            })
            .collect();
        println!("  [{}]", row.join(", "));
    }
}

fn main() {
    let d = RegulatorSet::Pow3.regulate(&[2, 2, 2]);
    let y = y_matrix(d[0], d[1], d[2], 1);
    println!("Y_222(1) at ε → 0:");
    show(&y);

    // with distinct regulators the cyclic relation needs the rotated dimensions
    let (a, b, c) = (d[0], d[1], d[2]);
    let cyc = y_matrix(b, c, a, 1).mul(&y_matrix(c, a, b, 1)).mul(&y);
    println!("Y_bca · Y_cab · Y_abc = 1: {}", cyc.is_identity());

    let d = RegulatorSet::Pow3.regulate(&[3, 2, 4]);
    let closed = y_matrix(d[0], d[1], d[2], 2);
    let rec = y_recursive::<RegulatedScalar>(d[0], d[1], d[2], 2).unwrap();
    let oracle = y_oracle::<RegulatedScalar>(d[0], d[1], d[2], 2).unwrap();
    println!("Y_324(2): closed = recursive = oracle: {}", *closed == rec && rec == oracle);
    show(&closed);
}

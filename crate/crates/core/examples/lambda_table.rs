//! The 2-point intertwiner λ^c_{ab} and its sl(2) covariance.
//!
//! Run with `cargo run --example lambda_table`.

use walg::arith::{format_rational, Rational};
use walg::intertwiner::{lambda_apply, lambda_table};
use walg::testfn::{sl2_apply, GeneratorTag, Poly};

fn main() {
    let (a, b, c) = (2, 3, 2);
    println!("λ^{c}_{{{a}{b}}}(p,q):");
    for ((p, q), v) in lambda_table(a, b, c) {
        println!("  ({p},{q}) -> {}", format_rational(&v));
    }

    // λ(g·f, h) + λ(f, g·h) = g·λ(f, h) for every generator g
    let f = Poly::from_i64(&[1, -2, 0, 3]);
    let h = Poly::from_i64(&[0, 1, 5]);
    let dim = |x: i64| Rational::from_integer(x.into());
    for g in GeneratorTag::ALL {
        let lhs = lambda_apply(a, b, c, &sl2_apply(g, &dim(a), &f), &h)
            .add(&lambda_apply(a, b, c, &f, &sl2_apply(g, &dim(b), &h)));
        let rhs = sl2_apply(g, &dim(c), &lambda_apply(a, b, c, &f, &h));
        println!("{g:?}: intertwines = {}", lhs == rhs);
    }
}

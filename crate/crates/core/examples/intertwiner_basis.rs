//! Enumerating the n-point intertwiner basis and evaluating basis elements.

use walg::arith::Dim;
use walg::intertwiner::{enumerate_m_tuples, intermediate_dims, t_apply, BracketScheme};
use walg::testfn::Poly;

fn main() {
    let dims: Vec<Dim> = [2, 2, 2].map(Dim::int).to_vec();
    let e = 2;
    let scheme = BracketScheme::right_comb(3);
    println!("basis of π_2 × π_2 × π_2 → π_{e} in scheme {scheme}:");
    let fs: [Poly; 3] = [Poly::from_i64(&[0, 1]), Poly::from_i64(&[1, 0, 1]), Poly::from_i64(&[2])];
    for el in enumerate_m_tuples(&scheme, &dims, e) {
        let inter: Vec<String> = intermediate_dims(&dims, &el.m).iter().map(|d| d.to_string()).collect();
        let value = t_apply(&el, &fs).expect("arity matches");
        println!("  m = {:?}  dims = [{}]  T(x, 1+x², 2) = {value}", el.m, inter.join(", "));
    }

    let s: BracketScheme = "((1,2),3)".parse().expect("valid scheme");
    println!("the S-scheme has {} elements", enumerate_m_tuples(&s, &dims, e).len());
}

//! Permutation matrices Z on the 4-point intertwiner space and the S4 relations.

use walg::arith::Dim;
use walg::intertwiner::BracketScheme;
use walg::transform::{reduced_words, z_from_word, z_matrix, RegulatorSet};

fn main() {
    let dims: Vec<Dim> = RegulatorSet::Pow3.regulate(&[2, 2, 2, 2]);
    let e = 3;
    let comb = BracketScheme::right_comb(4);
    let perm = [3, 1, 4, 2];
    let z = z_matrix(&dims, &perm, &comb, &comb, e).unwrap();
    println!("Z for {perm:?} on target {e}: {}×{}", z.entries.rows(), z.entries.cols());

    let words = reduced_words(&perm);
    let first = z_from_word(&dims, e, &words[0]);
    let agree = words.iter().all(|w| z_from_word(&dims, e, w) == first);
    println!("{} reduced words, all give the same matrix: {agree}", words.len());

    // s_1 s_2 s_1 = s_2 s_1 s_2
    let braid = z_from_word(&dims, e, &[1, 2, 1]) == z_from_word(&dims, e, &[2, 1, 2]);
    println!("braid relation holds: {braid}");
}

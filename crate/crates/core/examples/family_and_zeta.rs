//! The first members of the polynomial family and of the irrational
//! sequence the construction pairs them with.

use shilov::polynomials::{enumerate_family, zeta_sequence};

fn main() {
    for (i, p) in enumerate_family(3, 4, 20).iter().enumerate() {
        println!("p[{i:2}] = {:<24} l1 = {:.4}", p.to_string(), p.as_complex().l1_norm());
    }
    let zeta = zeta_sequence(12);
    for (i, z) in zeta.complex_values().iter().enumerate() {
        println!("zeta[{i:2}] = {:+.12} {:+.12}i", z.re, z.im);
    }
}

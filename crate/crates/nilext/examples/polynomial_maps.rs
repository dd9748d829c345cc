//! Calculus of polynomial maps in the multi-binomial basis: exact shifts,
//! discrete derivatives, and periodicity checks.
//!
//! Run with: cargo run --example polynomial_maps

use nilext::polymap::{check_period_bound, MultiIndex, Poly, QPoly, RatVec, ZmEl, ZmPoly};
use nilext::rat::{rat, rat_int};

fn main() {
    // f(v) = binom(v, 2)
    let f: QPoly = Poly::from_coeffs(
        1,
        1usize,
        [(MultiIndex(vec![2]), RatVec::scalar(rat_int(1)))],
    );
    println!("f = {:?}", f);

    // shifting by 1/2 re-expands in the same basis with exact rationals
    let shifted = f.shift_rat(&[rat(1, 2)]);
    println!("f(v + 1/2) = {:?}", shifted);

    // the discrete derivative along 1 drops the degree: binom(v,2) -> v
    let diff = f.derivative_int(&[1]);
    println!("f(v+1) - f(v) = {:?}", diff);

    // shift composition is a group action
    let twice = f.shift_rat(&[rat(1, 3)]).shift_rat(&[rat(2, 3)]);
    assert_eq!(twice, f.shift_int(&[1]));
    println!("shift by 1/3 then 2/3 equals shift by 1: ok");

    // maps into Z_m of degree <= k are m k!-periodic
    let g: ZmPoly = Poly::from_coeffs(1, 2i128, [(MultiIndex(vec![2]), ZmEl::new(1, 2))]);
    println!(
        "binom(v,2) mod 2 is {}-periodic: {}",
        2 * 2,
        check_period_bound(&g, 2)
    );
    for v in 0..8i128 {
        let a = g.eval_int(&[v]).value;
        let b = g.eval_int(&[v + 4]).value;
        assert_eq!(a, b);
    }
    println!("verified pointwise on v = 0..8");
}

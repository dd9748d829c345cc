//! Gowers norms by three independent routes, and the phase-polynomial
//! extremality that motivates the whole pipeline.
//!
//! Run with: cargo run --example gowers_norms

use nilext::abgroup::{Character, FinAbGroup};
use nilext::gowers::{gowers_norm, gowers_norm_naive, gowers_u2_fourier, GroupFunction};
use nilext::polymap::{MultiIndex, Poly, TPoly, TorusVec};
use nilext::rat::rat;
use nilext::torus::TorusPoint;

fn main() -> nilext::Result<()> {
    let budget = 1u128 << 28;

    // a character has U^1 = 0 and U^2 = 1
    let g = FinAbGroup::cyclic(16);
    let chi = GroupFunction::character(&Character::new(&g, vec![1]), &g);
    println!("character on Z_16:");
    println!("  U^1 = {:.12}", gowers_norm(&chi, 1)?);
    println!("  U^2 (recursive) = {:.12}", gowers_norm(&chi, 2)?);
    println!("  U^2 (fourier)   = {:.12}", gowers_u2_fourier(&chi));
    println!("  U^2 (naive)     = {:.12}", gowers_norm_naive(&chi, 2, budget)?);

    // a quadratic phase saturates U^3 but not U^2
    let g20 = FinAbGroup::cyclic(20);
    let p: TPoly = Poly::from_coeffs(
        1,
        1usize,
        [(MultiIndex(vec![2]), TorusVec(vec![TorusPoint::new(rat(1, 5))]))],
    );
    let f = GroupFunction::phase(&g20, &p)?;
    println!("\nquadratic phase e(binom(x,2)/5) on Z_20:");
    println!("  U^2 = {:.12}  (strictly below 1)", gowers_norm(&f, 2)?);
    println!("  U^3 = {:.12}  (saturated)", gowers_norm(&f, 3)?);

    // monotonicity on a bounded random-looking function
    let g24 = FinAbGroup::cyclic(24);
    let h = GroupFunction::from_fn(&g24, |x| {
        let t = x.coords()[0] as f64;
        nilext::gowers::C64::new((t * 0.7).cos() * 0.8, (t * 1.3).sin() * 0.5)
    });
    print!("\nmonotonicity on Z_24:");
    for d in 1..=4 {
        print!("  U^{} = {:.6}", d, gowers_norm(&h, d)?);
    }
    println!();
    Ok(())
}

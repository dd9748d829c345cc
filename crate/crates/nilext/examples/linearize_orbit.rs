//! Polynomial-orbit linearization: a degree-k map into the torus becomes a
//! product of commuting generator powers in the polynomial shift group, with
//! exact agreement at every domain point.
//!
//! Run with: cargo run --example linearize_orbit

use nilext::abgroup::FinAbGroup;
use nilext::orbit::{linearize, OrbitValue};
use nilext::polymap::{MultiIndex, Poly, TPoly, TorusVec};
use nilext::rat::rat;
use nilext::torus::TorusPoint;

fn main() -> nilext::Result<()> {
    // phi(v1, v2) = v1 v2 / 3 on Z_3 x Z_3
    let domain = FinAbGroup::new(vec![3, 3])?;
    let phi: TPoly = Poly::from_coeffs(
        2,
        1usize,
        [(
            MultiIndex(vec![1, 1]),
            TorusVec(vec![TorusPoint::new(rat(1, 3))]),
        )],
    );
    let orbit = linearize(&phi, &domain)?;
    println!("phi(v1,v2) = v1 v2 / 3 on {:?}", domain);
    for (i, g) in orbit.gens().iter().enumerate() {
        println!("  h_{} = {:?}", i + 1, g);
    }
    println!("  generators commute: {}", orbit.validate().is_ok());

    // the defining identity: orbit(z) = phi(z) mod 1 for every z
    let mut checked = 0;
    for z in domain.elements() {
        let direct = phi.eval_int(z.coords()).0;
        match orbit.eval(&z) {
            OrbitValue::Inside(v) => assert_eq!(v, direct),
            OrbitValue::Outside => unreachable!("linearization stays on-section"),
        }
        checked += 1;
    }
    println!("  orbit value = phi value at all {} points (bit-exact)", checked);

    // generator powers wrap into the lattice at the moduli
    for (i, g) in orbit.gens().iter().enumerate() {
        let n = domain.factors()[i];
        println!(
            "  h_{}^{} is a lattice point: {}",
            i + 1,
            n,
            g.pow_int(n).in_lattice()
        );
    }
    Ok(())
}

//! Host-Kra cube sets of degree-k abelian structures: membership, counting,
//! Gray-code signatures, and corner completion.
//!
//! Run with: cargo run --example host_kra_cubes

use nilext::abgroup::FinAbGroup;
use nilext::cubes::{
    complete_corner, cube_count, enumerate_cubes, gray_code, is_cube, signature_image_count,
    Corner, CubeMap,
};

fn main() -> nilext::Result<()> {
    let budget = 1u128 << 22;
    let z2 = FinAbGroup::cyclic(2);
    let z3 = FinAbGroup::cyclic(3);

    for (g, k, n) in [(&z2, 1u32, 2usize), (&z2, 1, 3), (&z3, 2, 2), (&z3, 1, 3)] {
        let count = cube_count(g, k, n);
        let listed = enumerate_cubes(g, k, n, budget)?.len();
        let signatures = signature_image_count(g, k, n, budget)?;
        println!(
            "{:?}, k={}, n={}: {} cubes (enumerated {}), {} distinct signatures",
            g, k, n, count, listed, signatures
        );
    }

    // parallelogram law: a 2-corner over Z_5 completes uniquely
    let z5 = FinAbGroup::cyclic(5);
    let corner = Corner::new(
        z5.clone(),
        2,
        vec![z5.element(vec![1]), z5.element(vec![3]), z5.element(vec![0])],
    )?;
    let completed = complete_corner(&corner, 1)?;
    println!(
        "\ncorner (1, 3, 0) over Z_5 completes to {:?}",
        completed.value(3).coords()
    );

    // gray code detects the top coordinate of an elementary cube
    let mut vals = vec![z5.zero(); 4];
    vals[3] = z5.element(vec![2]);
    let elementary = CubeMap::new(z5.clone(), 2, vals)?;
    println!(
        "gray code of the elementary cube with top value 2: {:?}",
        gray_code(&elementary, 2)?.coords()
    );
    println!(
        "the elementary cube is a degree-1 cube: {}",
        is_cube(&elementary, 1)
    );
    println!(
        "the elementary cube is a degree-2 cube: {}",
        is_cube(&elementary, 2)
    );
    Ok(())
}

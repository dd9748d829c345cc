//! Characters, annihilators, and the exact subgroup indicator identity.
//!
//! Run with: cargo run --example characters_and_annihilators

use nilext::abgroup::{annihilator, indicator_via_annihilator, subgroup_from_generators, FinAbGroup};

fn main() -> nilext::Result<()> {
    let g = FinAbGroup::new(vec![4, 2])?;
    let emb = subgroup_from_generators(&g, &[g.element(vec![2, 1])])?;
    println!(
        "Z_0 = <(2,1)> inside {:?}: order {}, index {}",
        g,
        emb.sub().order(),
        emb.index()
    );

    let ann = annihilator(&emb)?;
    println!("annihilator has {} characters:", ann.len());
    for chi in &ann {
        println!("  xi = {:?}", chi.frequency());
    }

    // averaging the annihilator gives the exact indicator of the subgroup
    println!("\nindicator identity (exact rational):");
    for x in g.elements() {
        let ind = indicator_via_annihilator(&emb, &ann, &x)?;
        println!(
            "  1_Z0({:?}) = {}{}",
            x.coords(),
            ind,
            if emb.contains(&x) { "  (member)" } else { "" }
        );
    }
    Ok(())
}

//! Canonical decompositions, subgroup generation, and the extension ladder.
//!
//! Run with: cargo run --example group_ladders

use nilext::abgroup::{subgroup_from_generators, FinAbGroup};
use nilext::ladder::{build_ladder, StepKind};

fn main() -> nilext::Result<()> {
    // canonical form of Z_6 x Z_4: invariant factors 2 | 12
    let g = FinAbGroup::new(vec![6, 4])?;
    let dec = g.canonical_decomposition();
    println!("group {:?}", g);
    println!("  invariant factors: {:?}", dec.invariant_factors());
    println!("  primary decomposition: {:?}", dec.primary);

    // a subgroup of Z_8 x Z_9 x Z_2 from two generators
    let big = FinAbGroup::new(vec![8, 9, 2])?;
    let gens = vec![big.element(vec![2, 3, 1]), big.element(vec![4, 0, 0])];
    let emb = subgroup_from_generators(&big, &gens)?;
    println!(
        "\nsubgroup of {:?} generated by {:?}:",
        big,
        gens.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>()
    );
    println!("  canonical form {:?}, index {}", emb.sub(), emb.index());

    // the ladder from the subgroup to the full group
    let ladder = build_ladder(&emb, 1 << 20)?;
    println!("  ladder with {} steps:", ladder.len());
    for (i, step) in ladder.steps().iter().enumerate() {
        let kind = match &step.kind {
            StepKind::Split { p } => format!("split, new Z_{} summand", p),
            StepKind::NonSplit { p, d, .. } => {
                format!("non-split, deepen Z_{} into Z_{}", d, p * d)
            }
        };
        println!("    step {}: {:?}  [{}]", i + 1, step.group, kind);
    }
    ladder.validate()?;
    println!("  composed embeddings reproduce the inclusion: ok");
    Ok(())
}

//! The non-extendable quadratic map: on Z = Z_{p^2} x Z_p with subgroup
//! Z_0 = (p Z_{p^2}) x Z_p, the map g(px, y) = xy/p admits no degree-2
//! polynomial extension to Z, but its linearized orbit extends across the
//! non-split step and agrees with g on Z_0 exactly.
//!
//! Run with: cargo run --example nonextendable_map

use nilext::extension::{check_extension_feasible, nonext_instance, ExtensionOutcome, RowLabel};
use nilext::ladder::build_ladder;
use nilext::nilseq::{extend_along_ladder, Nilsequence};

fn main() -> nilext::Result<()> {
    for p in [2i128, 3, 5] {
        let (emb, g) = nonext_instance(p)?;
        println!(
            "p = {}: ambient {:?}, subgroup {:?}, map coefficient 1/{} at v1 v2",
            p,
            emb.amb(),
            emb.sub(),
            p
        );

        match check_extension_feasible(&g, &emb, 2)? {
            ExtensionOutcome::Infeasible(cert) => {
                cert.verify()?;
                println!(
                    "  degree-2 extension: infeasible ({} constraints, certificate verified)",
                    cert.system.matrix.rows()
                );
                let without_first = cert
                    .system
                    .filtered(|l| !matches!(l, RowLabel::Periodicity { var: 0, .. }));
                println!(
                    "  still infeasible without the first-coordinate periodicity rows: {}",
                    without_first.solve().is_err()
                );
            }
            ExtensionOutcome::Feasible(_) => unreachable!("the example must be infeasible"),
        }

        // the linear route succeeds
        let n0 = Nilsequence::from_phase(emb.sub(), g.clone())?;
        let ladder = build_ladder(&emb, 1 << 20)?;
        let (ext, ledger) = extend_along_ladder(&n0, &ladder)?;
        println!(
            "  linear-form extension: ok ({} step{}, {} non-split), agrees on all {} subgroup points",
            ledger.steps,
            if ledger.steps == 1 { "" } else { "s" },
            ledger.nonsplit_steps,
            emb.sub().order()
        );
        for y in emb.sub().elements() {
            assert_eq!(
                ext.torus_value(&emb.apply(&y)).unwrap(),
                g.eval_int(y.coords()).0
            );
        }
        println!();
    }
    Ok(())
}

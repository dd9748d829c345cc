//! Command implementations behind the `nilext` binary. Each command consumes
//! plain JSON values and produces a deterministic [`RunReport`].

use crate::abgroup::{factorize, subgroup_from_generators, Character};
use crate::error::{Error, Result};
use crate::extension::{check_extension_feasible, nonext_instance, ExtensionOutcome, RowLabel};
use crate::gowers::{gowers_norm, gowers_norm_naive, gowers_u2_fourier, GroupFunction, C64};
use crate::json::{
    embedding_from_json, function_from_json, function_to_json, group_from_json, nilseq_from_json,
    nilseq_to_json, orbit_to_json, tpoly_from_json, verify_document, FUNCTION_SCHEMA,
};
use crate::ladder::{build_ladder, StepKind};
use crate::nilseq::{assemble_full_nilsequence, extend_along_ladder, Nilsequence};
use crate::orbit::linearize;
use crate::report::RunReport;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub budget: u128,
    pub tolerance: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            budget: 1_000_000,
            tolerance: 1e-9,
        }
    }
}

fn is_prime(p: i128) -> bool {
    p >= 2 && factorize(p) == vec![(p, 1)]
}

/// Reproduces the worked non-extendable example: the degree-bounded
/// polynomial extension is infeasible (with a verifiable certificate and with
/// the first-coordinate periodicity constraints shown redundant), while the
/// linearized orbit extends across the non-split step with exact agreement.
pub fn cmd_nonext(p: i128, k: u32, opts: &RunOptions) -> Result<RunReport> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{} is not prime", p)));
    }
    if p > 13 {
        return Err(Error::Budget {
            what: "nonext instance prime".into(),
            needed: p as u128,
            budget: 13,
        });
    }
    if k == 0 {
        return Err(Error::Precondition("degree bound must be positive".into()));
    }
    let (emb, g) = nonext_instance(p)?;
    let outcome = check_extension_feasible(&g, &emb, k)?;
    let mut outputs = json!({
        "p": p,
        "k": k,
        "ambient": emb.amb().factors(),
        "subgroup": emb.sub().factors(),
        "expected_infeasible": k == 2,
    });

    match &outcome {
        ExtensionOutcome::Infeasible(cert) => {
            cert.verify()?;
            outputs["polynomial_extension"] = json!("infeasible");
            outputs["certificate_valid"] = json!(true);
            outputs["certificate_rows"] = json!(cert.system.matrix.rows());
            // redundancy of the first-coordinate periodicity constraints
            let reduced = cert
                .system
                .filtered(|l| !matches!(l, RowLabel::Periodicity { var: 0, .. }));
            let still_infeasible = reduced.solve().is_err();
            outputs["circ1_redundant"] = json!(still_infeasible);
            if k == 2 && !still_infeasible {
                return Err(Error::Identity(
                    "system became feasible without the redundant constraints".into(),
                ));
            }
        }
        ExtensionOutcome::Feasible(_) => {
            outputs["polynomial_extension"] = json!("feasible");
            if k == 2 {
                return Err(Error::Identity(
                    "the degree-2 extension must not exist for this instance".into(),
                ));
            }
        }
    }

    // the linear-form route always succeeds
    let n0 = Nilsequence::from_phase(emb.sub(), g)?;
    let ladder = build_ladder(&emb, opts.budget)?;
    let (_, ledger) = extend_along_ladder(&n0, &ladder)?;
    outputs["linear_extension_agrees"] = json!(true);
    outputs["ladder_steps"] = json!(ledger.steps);
    outputs["nonsplit_steps"] = json!(ledger.nonsplit_steps);
    outputs["step_kinds"] = json!(ladder
        .steps()
        .iter()
        .map(|s| match &s.kind {
            StepKind::Split { p } => format!("split(p={})", p),
            StepKind::NonSplit { p, d, .. } => format!("nonsplit(p={},d={})", p, d),
        })
        .collect::<Vec<_>>());

    let inputs = json!({"p": p, "k": k});
    Ok(RunReport::new("nonext", opts.seed, &inputs, outputs))
}

/// Builds the function described by a generator spec (or parses a serialized
/// function document).
pub fn resolve_function(input: &Value, opts: &RunOptions) -> Result<GroupFunction> {
    if input.get("schema").and_then(Value::as_str) == Some(FUNCTION_SCHEMA) {
        return function_from_json(input);
    }
    if let Some(spec) = input.get("function") {
        return function_from_json(spec);
    }
    if let Some(spec) = input.get("character") {
        let group = group_from_json(spec.get("group").ok_or_else(|| {
            Error::InvalidInput("character spec needs a group".into())
        })?)?;
        let xi: Vec<i128> = spec
            .get("xi")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("character spec needs xi".into()))?
            .iter()
            .map(|v| v.as_i64().map(|n| n as i128))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidInput("xi entries must be integers".into()))?;
        let chi = Character::new(&group, xi);
        return Ok(GroupFunction::character(&chi, &group));
    }
    if let Some(spec) = input.get("phase") {
        let group = group_from_json(spec.get("group").ok_or_else(|| {
            Error::InvalidInput("phase spec needs a group".into())
        })?)?;
        let poly = tpoly_from_json(spec.get("poly").ok_or_else(|| {
            Error::InvalidInput("phase spec needs a poly".into())
        })?)?;
        return GroupFunction::phase(&group, &poly);
    }
    if let Some(spec) = input.get("random") {
        let group = group_from_json(spec.get("group").ok_or_else(|| {
            Error::InvalidInput("random spec needs a group".into())
        })?)?;
        let unimodular = spec
            .get("kind")
            .and_then(Value::as_str)
            .map_or(true, |s| s == "unimodular");
        let mut rng = StdRng::seed_from_u64(opts.seed);
        return Ok(GroupFunction::from_fn(&group, |_| {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = if unimodular {
                1.0
            } else {
                rng.gen_range(0.0f64..1.0).sqrt()
            };
            C64::new(r * theta.cos(), r * theta.sin())
        }));
    }
    Err(Error::InvalidInput(
        "expected a function document or a character/phase/random generator spec".into(),
    ))
}

/// Computes the `U^d` norm by every applicable route and cross-checks them.
pub fn cmd_gowers(input: &Value, d: u32, opts: &RunOptions) -> Result<RunReport> {
    let f = resolve_function(input, opts)?;
    let order = f.group().order();
    let recursive = gowers_norm(&f, d)?;
    let mut outputs = json!({
        "d": d,
        "group": f.group().factors(),
        "norms": {"recursive": recursive},
    });
    let mut methods = vec![("recursive", recursive)];

    let naive_cost = (order as u128).saturating_pow(d + 1);
    if naive_cost <= opts.budget {
        let naive = gowers_norm_naive(&f, d, opts.budget)?;
        outputs["norms"]["naive"] = json!(naive);
        methods.push(("naive", naive));
    }
    if d == 2 {
        let fourier = gowers_u2_fourier(&f);
        outputs["norms"]["fourier"] = json!(fourier);
        methods.push(("fourier", fourier));
    }
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            let (na, va) = methods[i];
            let (nb, vb) = methods[j];
            if (va - vb).abs() > opts.tolerance {
                return Err(Error::Identity(format!(
                    "U^{} disagreement: {} = {} vs {} = {}",
                    d, na, va, nb, vb
                )));
            }
        }
    }
    outputs["methods_agree"] = json!(true);
    Ok(RunReport::new("gowers", opts.seed, input, outputs))
}

/// Closed-loop demonstration: build a function correlating with a subgroup
/// nilsequence (plus optional noise), measure its uniformity norm, extend and
/// assemble, and report the achieved correlation against the index floor.
pub fn cmd_pipeline(config: &Value, opts: &RunOptions) -> Result<RunReport> {
    let group = group_from_json(
        config
            .get("group")
            .ok_or_else(|| Error::InvalidInput("pipeline config needs a group".into()))?,
    )?;
    let gens_json = config
        .get("subgroup_gens")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("pipeline config needs subgroup_gens".into()))?;
    let gens: Vec<_> = gens_json
        .iter()
        .map(|v| {
            let coords: Vec<i128> = v
                .as_array()
                .ok_or_else(|| Error::InvalidInput("generator must be an array".into()))?
                .iter()
                .map(|x| x.as_i64().map(|n| n as i128))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidInput("generator entries must be ints".into()))?;
            Ok(group.element(coords))
        })
        .collect::<Result<_>>()?;
    let emb = subgroup_from_generators(&group, &gens)?;
    let t0_coords: Vec<i128> = config
        .get("t0")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("pipeline config needs t0".into()))?
        .iter()
        .map(|x| x.as_i64().map(|n| n as i128))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidInput("t0 entries must be ints".into()))?;
    let t0 = group.element(t0_coords);
    let phase = tpoly_from_json(
        config
            .get("phase")
            .ok_or_else(|| Error::InvalidInput("pipeline config needs a phase".into()))?,
    )?;
    if phase.arity() != emb.sub().rank() {
        return Err(Error::Mismatch(format!(
            "phase arity {} != canonical subgroup rank {} (subgroup is {:?})",
            phase.arity(),
            emb.sub().rank(),
            emb.sub()
        )));
    }
    let n0 = Nilsequence::from_phase(emb.sub(), phase)?;
    let noise_amp = config.get("noise").and_then(Value::as_f64).unwrap_or(0.0);

    // f = conj(N_0) planted on the shifted subgroup coset, plus seeded noise
    let mut values = vec![C64::new(0.0, 0.0); group.order() as usize];
    for y in emb.sub().elements() {
        let x = t0.add(&emb.apply(&y));
        values[group.index_of(&x)] = n0.eval(&y).conj();
    }
    let mut rng = StdRng::seed_from_u64(opts.seed);
    if noise_amp != 0.0 {
        for v in &mut values {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(0.0f64..1.0).sqrt() * noise_amp;
            *v += C64::new(r * theta.cos(), r * theta.sin());
        }
    }
    let f = GroupFunction::new(group.clone(), values)?;

    // measured uniformity norm of the built function
    let k = n0.degree().max(1);
    let delta = gowers_norm(&f, k + 1)?;

    // claimed eps_0: configured, or the measured subgroup correlation
    let eps0 = match config.get("eps0").and_then(Value::as_f64) {
        Some(e) => e,
        None => {
            let mut acc = crate::gowers::KahanC64::new();
            for y in emb.sub().elements() {
                let x = t0.add(&emb.apply(&y));
                acc.add(f.value(&x) * n0.eval(&y));
            }
            (acc.total() / emb.sub().order() as f64).norm() * (1.0 - 1e-12)
        }
    };

    let (assembled, report) = assemble_full_nilsequence(&f, &emb, &t0, &n0, eps0, opts.budget)?;
    let outputs = json!({
        "group": group.factors(),
        "subgroup": emb.sub().factors(),
        "index": emb.index() as i64,
        "noise": noise_amp,
        "delta": delta,
        "degree": k,
        "eps0": eps0,
        "epsilon": report.epsilon,
        "epsilon_floor": report.epsilon_floor,
        "floor_met": report.epsilon + opts.tolerance >= report.epsilon_floor,
        "subgroup_correlation": report.subgroup_correlation,
        "character": report.character.iter().map(|&c| c as i64).collect::<Vec<_>>(),
        "ladder_steps": report.ladder_steps,
        "nonsplit_steps": report.nonsplit_steps,
        "complexity": {
            "degree": report.complexity.degree,
            "rank": report.complexity.domain_rank,
            "fiber_dim": report.complexity.fiber_dim,
            "max_denominator": report.complexity.max_denominator as i64,
        },
        "nilseq": nilseq_to_json(&assembled),
    });
    Ok(RunReport::new("pipeline", opts.seed, config, outputs))
}

/// Linearizes a polynomial map into an orbit and verifies the defining
/// identity over the whole domain.
pub fn cmd_linearize(input: &Value, opts: &RunOptions) -> Result<RunReport> {
    let domain = group_from_json(
        input
            .get("domain")
            .ok_or_else(|| Error::InvalidInput("linearize input needs a domain".into()))?,
    )?;
    let poly = tpoly_from_json(
        input
            .get("poly")
            .ok_or_else(|| Error::InvalidInput("linearize input needs a poly".into()))?,
    )?;
    if domain.order() as u128 > opts.budget {
        return Err(Error::Budget {
            what: "linearization agreement sweep".into(),
            needed: domain.order() as u128,
            budget: opts.budget,
        });
    }
    let orbit = linearize(&poly, &domain)?;
    for z in domain.elements() {
        let direct = poly.eval_int(z.coords()).0;
        match orbit.eval(&z) {
            crate::orbit::OrbitValue::Inside(v) if v == direct => {}
            other => {
                return Err(Error::Identity(format!(
                    "linearized orbit disagrees at {:?}: {:?}",
                    z.coords(),
                    other
                )))
            }
        }
    }
    let outputs = json!({
        "orbit": orbit_to_json(&orbit),
        "agreement_points": domain.order() as i64,
    });
    Ok(RunReport::new("linearize", opts.seed, input, outputs))
}

/// Extends a nilsequence along the ladder of a subgroup embedding.
pub fn cmd_extend(input: &Value, opts: &RunOptions) -> Result<RunReport> {
    let emb = embedding_from_json(
        input
            .get("embedding")
            .ok_or_else(|| Error::InvalidInput("extend input needs an embedding".into()))?,
    )?;
    let n0 = nilseq_from_json(
        input
            .get("nilseq")
            .ok_or_else(|| Error::InvalidInput("extend input needs a nilseq".into()))?,
    )?;
    let ladder = build_ladder(&emb, opts.budget)?;
    let (extended, ledger) = extend_along_ladder(&n0, &ladder)?;
    let outputs = json!({
        "nilseq": nilseq_to_json(&extended),
        "ladder_steps": ledger.steps,
        "nonsplit_steps": ledger.nonsplit_steps,
        "agreement_points": emb.sub().order() as i64,
        "max_denominator": extended.complexity().max_denominator as i64,
    });
    Ok(RunReport::new("extend", opts.seed, input, outputs))
}

/// Runs the character-twist assembly on serialized inputs.
pub fn cmd_assemble(input: &Value, opts: &RunOptions) -> Result<RunReport> {
    let f = function_from_json(
        input
            .get("function")
            .ok_or_else(|| Error::InvalidInput("assemble input needs a function".into()))?,
    )?;
    let emb = embedding_from_json(
        input
            .get("embedding")
            .ok_or_else(|| Error::InvalidInput("assemble input needs an embedding".into()))?,
    )?;
    let t0_coords: Vec<i128> = input
        .get("t0")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("assemble input needs t0".into()))?
        .iter()
        .map(|x| x.as_i64().map(|n| n as i128))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidInput("t0 entries must be ints".into()))?;
    let t0 = emb.amb().element(t0_coords);
    let n0 = nilseq_from_json(
        input
            .get("nilseq")
            .ok_or_else(|| Error::InvalidInput("assemble input needs a nilseq".into()))?,
    )?;
    let eps0 = input
        .get("eps0")
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::InvalidInput("assemble input needs eps0".into()))?;
    let (assembled, report) = assemble_full_nilsequence(&f, &emb, &t0, &n0, eps0, opts.budget)?;
    let outputs = json!({
        "nilseq": nilseq_to_json(&assembled),
        "epsilon": report.epsilon,
        "epsilon_floor": report.epsilon_floor,
        "subgroup_correlation": report.subgroup_correlation,
        "character": report.character.iter().map(|&c| c as i64).collect::<Vec<_>>(),
        "ladder_steps": report.ladder_steps,
        "nonsplit_steps": report.nonsplit_steps,
    });
    Ok(RunReport::new("assemble", opts.seed, input, outputs))
}

/// Re-checks the invariants of any serialized document.
pub fn cmd_verify(input: &Value, opts: &RunOptions) -> Result<RunReport> {
    let checks = verify_document(input)?;
    let outputs = json!({"valid": true, "checks": checks});
    Ok(RunReport::new("verify", opts.seed, input, outputs))
}

/// Round-trips a function through its serialized form (used by the binary to
/// emit generated inputs).
pub fn function_document(f: &GroupFunction) -> Value {
    function_to_json(f)
}

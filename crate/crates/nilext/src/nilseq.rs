//! Nilsequences on finite abelian groups and their extension pipeline.
//!
//! A nilsequence here is an orbit (a torus-valued polynomial map, or its
//! linearized form) together with a declared fiber rule
//! `tau -> e(sum_j w_j tau_j)` with integer weights; points where a
//! linearized orbit leaves its section evaluate to zero.
//!
//! Extension from a subgroup walks a ladder: split steps precompose with the
//! projection, non-split steps replace the leading generator by its p-th
//! root. Values on the original subgroup are preserved bit-exactly, which
//! `extend_along_ladder` verifies pointwise before returning.

use crate::abgroup::{annihilator, FinAbGroup, GroupElement, SubgroupEmbedding};
use crate::error::{Error, Result};
use crate::gowers::{correlation, GroupFunction, KahanC64, C64};
use crate::ladder::{build_ladder, Ladder, StepKind};
use crate::matrix::IntMat;
use crate::orbit::{linearize, LinearOrbit, OrbitValue};
use crate::polymap::TPoly;
use crate::torus::TorusPoint;

#[derive(Clone, Debug)]
pub enum OrbitForm {
    Poly(TPoly),
    Linear(LinearOrbit),
}

/// Structure summary used as the complexity ledger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complexity {
    pub degree: u32,
    pub domain_rank: usize,
    pub fiber_dim: usize,
    pub max_denominator: i128,
}

#[derive(Clone, Debug)]
pub struct Nilsequence {
    domain: FinAbGroup,
    form: OrbitForm,
    weights: Vec<i128>,
}

impl Nilsequence {
    /// Phase nilsequence `e(sum of fiber components of phi)`.
    pub fn from_phase(domain: &FinAbGroup, phi: TPoly) -> Result<Self> {
        if phi.arity() != domain.rank() {
            return Err(Error::Mismatch("phase arity != domain rank".into()));
        }
        if !phi.descends_to_quotient(domain.factors()) {
            return Err(Error::Precondition(
                "phase polynomial does not descend to the domain".into(),
            ));
        }
        let weights = vec![1; *phi.shape()];
        Ok(Nilsequence {
            domain: domain.clone(),
            form: OrbitForm::Poly(phi),
            weights,
        })
    }

    pub fn from_linear(orbit: LinearOrbit, weights: Vec<i128>) -> Result<Self> {
        if weights.len() != orbit.fiber_dim() {
            return Err(Error::Mismatch("weight count != fiber dimension".into()));
        }
        Ok(Nilsequence {
            domain: orbit.domain().clone(),
            form: OrbitForm::Linear(orbit),
            weights,
        })
    }

    pub fn domain(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn form(&self) -> &OrbitForm {
        &self.form
    }

    pub fn weights(&self) -> &[i128] {
        &self.weights
    }

    pub fn fiber_dim(&self) -> usize {
        match &self.form {
            OrbitForm::Poly(p) => *p.shape(),
            OrbitForm::Linear(o) => o.fiber_dim(),
        }
    }

    pub fn degree(&self) -> u32 {
        match &self.form {
            OrbitForm::Poly(p) => p.total_degree(),
            OrbitForm::Linear(o) => o.degree(),
        }
    }

    /// The torus point fed into the fiber rule, when the orbit stays on its
    /// section.
    pub fn torus_value(&self, z: &GroupElement) -> Option<Vec<TorusPoint>> {
        match &self.form {
            OrbitForm::Poly(p) => Some(p.eval_int(z.coords()).0),
            OrbitForm::Linear(o) => match o.eval(z) {
                OrbitValue::Inside(v) => Some(v),
                OrbitValue::Outside => None,
            },
        }
    }

    /// Complex value at a point; off-section points evaluate to zero.
    pub fn eval(&self, z: &GroupElement) -> C64 {
        match self.torus_value(z) {
            Some(tau) => {
                let mut total = TorusPoint::zero();
                for (t, &w) in tau.iter().zip(&self.weights) {
                    total = total + t.mul_int(w);
                }
                total.exp()
            }
            None => C64::new(0.0, 0.0),
        }
    }

    pub fn to_group_function(&self) -> GroupFunction {
        GroupFunction::from_fn(&self.domain, |x| self.eval(x))
    }

    /// Complex conjugate nilsequence (weights negated, orbit unchanged).
    pub fn conj(&self) -> Nilsequence {
        Nilsequence {
            domain: self.domain.clone(),
            form: self.form.clone(),
            weights: self.weights.iter().map(|w| -w).collect(),
        }
    }

    /// The linear-orbit form of this nilsequence.
    pub fn linearized(&self) -> Result<Nilsequence> {
        match &self.form {
            OrbitForm::Linear(_) => Ok(self.clone()),
            OrbitForm::Poly(p) => {
                let orbit = linearize(p, &self.domain)?;
                Ok(Nilsequence {
                    domain: self.domain.clone(),
                    form: OrbitForm::Linear(orbit),
                    weights: self.weights.clone(),
                })
            }
        }
    }

    pub fn complexity(&self) -> Complexity {
        let max_denominator = match &self.form {
            OrbitForm::Poly(p) => {
                let mut m = 1i128;
                for (_, c) in p.coeffs() {
                    for t in &c.0 {
                        m = m.max(t.order());
                    }
                }
                m
            }
            OrbitForm::Linear(o) => o.max_denominator(),
        };
        Complexity {
            degree: self.degree(),
            domain_rank: self.domain.rank(),
            fiber_dim: self.fiber_dim(),
            max_denominator,
        }
    }
}

/// Split extension: precompose with the projection `Z_p (+) A -> A`. The
/// orbit representation and complexity are unchanged.
pub fn extend_split(n: &Nilsequence, p: i128) -> Result<Nilsequence> {
    let mut factors = vec![p];
    factors.extend_from_slice(n.domain.factors());
    let bigger = FinAbGroup::new(factors)?;
    let r = n.domain.rank();
    // projection matrix [0 | I]
    let mut proj = IntMat::zero(r, r + 1);
    for i in 0..r {
        proj[(i, i + 1)] = 1;
    }
    let form = match &n.form {
        OrbitForm::Poly(phi) => {
            OrbitForm::Poly(crate::polymap::compose_affine(phi, &proj, &vec![0; r]))
        }
        OrbitForm::Linear(orbit) => OrbitForm::Linear(orbit.precompose(&proj, &bigger)?),
    };
    Ok(Nilsequence {
        domain: bigger,
        form,
        weights: n.weights.clone(),
    })
}

/// Non-split extension from `(p Z_{pd}) (+) K` to `Z_{pd} (+) K`: the input
/// must be in linear form with leading modulus `d`; the leading generator is
/// replaced by its `p`-th root. Values agree on the embedded subgroup
/// (`z_1 = p x`) exactly.
pub fn extend_nonsplit(n: &Nilsequence, p: i128, d: i128) -> Result<Nilsequence> {
    let orbit = match &n.form {
        OrbitForm::Linear(o) => o,
        OrbitForm::Poly(_) => {
            return Err(Error::Precondition(
                "non-split extension needs the linear orbit form".into(),
            ))
        }
    };
    if n.domain.factors().first() != Some(&d) {
        return Err(Error::Mismatch(format!(
            "leading modulus {:?} != deepened order {}",
            n.domain.factors().first(),
            d
        )));
    }
    let mut factors = n.domain.factors().to_vec();
    factors[0] = p * d;
    let bigger = FinAbGroup::new(factors)?;
    let mut gens = orbit.gens().to_vec();
    gens[0] = gens[0].pow(crate::rat::rat(1, p));
    // LinearOrbit::new re-validates commutation and w_1^{pd} in the lattice
    let rooted = LinearOrbit::new(bigger.clone(), orbit.base().clone(), gens, orbit.degree())?;
    Ok(Nilsequence {
        domain: bigger,
        form: OrbitForm::Linear(rooted),
        weights: n.weights.clone(),
    })
}

/// Bookkeeping from a ladder extension.
#[derive(Clone, Debug)]
pub struct ExtensionLedger {
    pub steps: usize,
    pub nonsplit_steps: usize,
    pub complexity_trace: Vec<Complexity>,
}

/// Extends a nilsequence from the ladder's subgroup to its ambient group by
/// folding the split and non-split steps, transporting along the recorded
/// isomorphisms. Agreement on the subgroup is verified pointwise, bit-exactly.
pub fn extend_along_ladder(
    n0: &Nilsequence,
    ladder: &Ladder,
) -> Result<(Nilsequence, ExtensionLedger)> {
    let emb = ladder.emb();
    if n0.domain != *emb.sub() {
        return Err(Error::Mismatch(
            "nilsequence domain is not the ladder base".into(),
        ));
    }
    let linear = n0.linearized()?;
    let OrbitForm::Linear(orbit0) = &linear.form else {
        unreachable!()
    };

    // onto the primary-refined coordinates
    let mut current = orbit0.precompose(&ladder.base_iso().bwd, ladder.base())?;
    let mut trace = vec![Complexity {
        degree: current.degree(),
        domain_rank: current.domain().rank(),
        fiber_dim: current.fiber_dim(),
        max_denominator: current.max_denominator(),
    }];
    let mut nonsplit_steps = 0usize;
    for step in ladder.steps() {
        let as_seq = Nilsequence {
            domain: current.domain().clone(),
            form: OrbitForm::Linear(current),
            weights: linear.weights.clone(),
        };
        let extended = match &step.kind {
            StepKind::Split { p } => extend_split(&as_seq, *p)?,
            StepKind::NonSplit { p, d, realign } => {
                let OrbitForm::Linear(o) = &as_seq.form else {
                    unreachable!()
                };
                let realigned = o.precompose(&realign.bwd, &realign.dst)?;
                let aligned_seq = Nilsequence {
                    domain: realign.dst.clone(),
                    form: OrbitForm::Linear(realigned),
                    weights: linear.weights.clone(),
                };
                nonsplit_steps += 1;
                extend_nonsplit(&aligned_seq, *p, *d)?
            }
        };
        if extended.domain != step.group {
            return Err(Error::Identity(
                "extension step produced an unexpected group".into(),
            ));
        }
        let OrbitForm::Linear(o) = extended.form else {
            unreachable!()
        };
        current = o;
        trace.push(Complexity {
            degree: current.degree(),
            domain_rank: current.domain().rank(),
            fiber_dim: current.fiber_dim(),
            max_denominator: current.max_denominator(),
        });
    }

    // onto the ambient coordinates
    let final_orbit = current.precompose(&ladder.final_iso().bwd, emb.amb())?;
    let result = Nilsequence {
        domain: emb.amb().clone(),
        form: OrbitForm::Linear(final_orbit),
        weights: linear.weights.clone(),
    };

    // bit-exact agreement on the subgroup
    for y in emb.sub().elements() {
        let expect = n0.torus_value(&y);
        let got = result.torus_value(&emb.apply(&y));
        if expect != got {
            return Err(Error::Identity(format!(
                "extension disagrees on subgroup point {:?}: {:?} vs {:?}",
                y.coords(),
                expect,
                got
            )));
        }
    }

    let ledger = ExtensionLedger {
        steps: ladder.len(),
        nonsplit_steps,
        complexity_trace: trace,
    };
    Ok((result, ledger))
}

/// Outcome summary of the assembly step.
#[derive(Clone, Debug)]
pub struct CorrelationReport {
    /// Claimed uniformity-norm lower bound, when the caller measured one.
    pub delta: Option<f64>,
    /// Achieved correlation with the assembled nilsequence.
    pub epsilon: f64,
    /// Guaranteed floor `eps_0 |Z_0| / |Z|`.
    pub epsilon_floor: f64,
    pub degree: u32,
    pub complexity: Complexity,
    pub ladder_steps: usize,
    pub nonsplit_steps: usize,
    /// Frequency of the annihilator character used in the twist.
    pub character: Vec<i128>,
    /// The measured subgroup correlation `|E_y f(t_0 + y) N_0(y)|`.
    pub subgroup_correlation: f64,
}

/// Extends the subgroup nilsequence along the ladder, shifts by `t_0`,
/// twists by the best annihilator character and returns the assembled
/// nilsequence with the achieved correlation
/// `epsilon = |E_x f(x) conj(N(x))| >= eps_0 |Z_0| / |Z|`.
pub fn assemble_full_nilsequence(
    f: &GroupFunction,
    emb: &SubgroupEmbedding,
    t0: &GroupElement,
    n0: &Nilsequence,
    eps0: f64,
    budget: u128,
) -> Result<(Nilsequence, CorrelationReport)> {
    if f.group() != emb.amb() {
        return Err(Error::Mismatch("function not on the ambient group".into()));
    }
    if t0.group() != emb.amb() {
        return Err(Error::Mismatch("shift not in the ambient group".into()));
    }
    if n0.domain() != emb.sub() {
        return Err(Error::Mismatch(
            "subgroup nilsequence on the wrong group".into(),
        ));
    }

    // precondition: |E_{y in Z_0} f(t_0 + y) N_0(y)| >= eps_0
    let mut acc = KahanC64::new();
    for y in emb.sub().elements() {
        let x = t0.add(&emb.apply(&y));
        acc.add(f.value(&x) * n0.eval(&y));
    }
    let sub_corr = (acc.total() / emb.sub().order() as f64).norm();
    if sub_corr + 1e-12 < eps0 {
        return Err(Error::Precondition(format!(
            "subgroup correlation {} is below the claimed eps_0 = {}",
            sub_corr, eps0
        )));
    }

    let ladder = build_ladder(emb, budget)?;
    let (extended, ledger) = extend_along_ladder(n0, &ladder)?;

    // tabulate N'(x) once
    let amb = emb.amb();
    let ext_values: Vec<C64> = amb.elements().map(|x| extended.eval(&x)).collect();

    // argmax over the annihilator of |E_x f(t_0 + x) N'(x) chi(x)|
    let chars = annihilator(emb)?;
    let mut best: Option<(f64, usize)> = None;
    for (ci, chi) in chars.iter().enumerate() {
        let mut inner = KahanC64::new();
        for (xi, x) in amb.elements().enumerate() {
            let shifted = t0.add(&x);
            inner.add(f.value(&shifted) * ext_values[xi] * chi.eval(&x).exp());
        }
        let score = (inner.total() / amb.order() as f64).norm();
        if best.map_or(true, |(s, _)| score > s) {
            best = Some((score, ci));
        }
    }
    let (best_score, best_idx) = best.expect("annihilator is never empty");
    let chi = &chars[best_idx];

    // assemble: twist by the character, fold the t_0 shift into the base,
    // and conjugate so that correlation(f, N) = E f conj(N) is the achieved
    // inner product
    let OrbitForm::Linear(ext_orbit) = extended.form() else {
        unreachable!()
    };
    let twisted = ext_orbit.twist_character(chi)?;
    let shifted = twisted.shift_domain(t0)?;
    let mut weights = extended.weights().to_vec();
    weights.push(1);
    let assembled = Nilsequence::from_linear(shifted, weights)?.conj();

    let epsilon = correlation(f, &assembled.to_group_function())?.norm();
    if (epsilon - best_score).abs() > 1e-9 {
        return Err(Error::Identity(format!(
            "assembled correlation {} drifted from the selected inner product {}",
            epsilon, best_score
        )));
    }
    let epsilon_floor = eps0 * emb.sub().order() as f64 / amb.order() as f64;
    if epsilon + 1e-9 < epsilon_floor {
        return Err(Error::Identity(format!(
            "achieved correlation {} fell below the floor {}",
            epsilon, epsilon_floor
        )));
    }

    let report = CorrelationReport {
        delta: None,
        epsilon,
        epsilon_floor,
        degree: assembled.degree(),
        complexity: assembled.complexity(),
        ladder_steps: ledger.steps,
        nonsplit_steps: ledger.nonsplit_steps,
        character: chi.frequency().to_vec(),
        subgroup_correlation: sub_corr,
    };
    Ok((assembled, report))
}

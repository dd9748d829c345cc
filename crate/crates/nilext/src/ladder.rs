//! Subgroup ladders: a chain `Z_0 <= Z_1 <= ... <= Z_t = Z` in which every
//! step either adds a direct `Z_p` summand (split) or deepens one cyclic
//! factor `Z_d` into `Z_pd` (non-split).
//!
//! The construction is concrete: the chain lives inside the ambient group as
//! an evolving basis of prime-power-order elements, so every step embedding
//! is an explicit matrix and composing all of them reproduces the original
//! inclusion exactly, up to the recorded end isomorphisms.
//!
//! Step order is deterministic: primes ascending, and within a prime the
//! candidate raising the smallest deficient exponent wins (ties broken by
//! enumeration order).

use crate::abgroup::{factorize, mod_inverse, subgroup_from_generators, FinAbGroup, GroupElement, IsoPair, SubgroupEmbedding};
use crate::error::{Error, Result};
use crate::matrix::{smith_normal_form, IntMat};
use std::collections::{HashMap, HashSet};

#[derive(Clone, Debug)]
pub enum StepKind {
    /// `Z_i = Z_p (+) Z_{i-1}`, the new summand in coordinate 0.
    Split { p: i128 },
    /// `Z_{i-1} = (p Z_{pd}) (+) K` inside `Z_i = Z_pd (+) K`; the deepened
    /// factor sits in coordinate 0 of both groups after realignment.
    NonSplit {
        p: i128,
        d: i128,
        /// Change of coordinates on `Z_{i-1}` putting the factor that is
        /// about to deepen first.
        realign: IsoPair,
    },
}

#[derive(Clone, Debug)]
pub struct LadderStep {
    /// The group `Z_i` after this step (a factor list, prime-power factors).
    pub group: FinAbGroup,
    /// Embedding matrix `Z_{i-1} -> Z_i` (composite of realignment and the
    /// standard inclusion).
    pub embedding: IntMat,
    pub kind: StepKind,
}

#[derive(Clone, Debug)]
pub struct Ladder {
    emb: SubgroupEmbedding,
    /// `C_0`: primary refinement of the subgroup.
    base: FinAbGroup,
    base_iso: IsoPair,
    steps: Vec<LadderStep>,
    /// `C_t -> Z`.
    final_iso: IsoPair,
}

impl Ladder {
    pub fn emb(&self) -> &SubgroupEmbedding {
        &self.emb
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn base_iso(&self) -> &IsoPair {
        &self.base_iso
    }

    pub fn steps(&self) -> &[LadderStep] {
        &self.steps
    }

    pub fn final_iso(&self) -> &IsoPair {
        &self.final_iso
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Verifies the ladder invariants: step count equals the prime
    /// multiplicity of the index and respects the log2 bound, every step has
    /// the advertised shape, and the composed embeddings reproduce the
    /// original inclusion through the recorded isomorphisms.
    pub fn validate(&self) -> Result<()> {
        let index = self.emb.index();
        let expected_t: u32 = factorize(index).iter().map(|&(_, e)| e).sum();
        if self.steps.len() != expected_t as usize {
            return Err(Error::Identity(format!(
                "ladder length {} != prime multiplicity {} of index {}",
                self.steps.len(),
                expected_t,
                index
            )));
        }
        // t <= log2(index), i.e. 2^t <= index
        if (1i128 << self.steps.len()) > index {
            return Err(Error::Identity(format!(
                "ladder length {} exceeds log2 of index {}",
                self.steps.len(),
                index
            )));
        }

        self.base_iso.validate()?;
        self.final_iso.validate()?;

        // shape of each step
        let mut prev = self.base.clone();
        for step in &self.steps {
            match &step.kind {
                StepKind::Split { p } => {
                    let mut expect = vec![*p];
                    expect.extend_from_slice(prev.factors());
                    if step.group.factors() != expect.as_slice() {
                        return Err(Error::Identity("split step has wrong factors".into()));
                    }
                }
                StepKind::NonSplit { p, d, realign } => {
                    realign.validate()?;
                    if realign.src != prev {
                        return Err(Error::Identity("realignment source mismatch".into()));
                    }
                    if realign.dst.factors().first() != Some(d) {
                        return Err(Error::Identity(
                            "realigned group does not lead with the deepened factor".into(),
                        ));
                    }
                    let mut expect = realign.dst.factors().to_vec();
                    expect[0] = p * d;
                    if step.group.factors() != expect.as_slice() {
                        return Err(Error::Identity("non-split step has wrong factors".into()));
                    }
                }
            }
            prev = step.group.clone();
        }
        if prev != self.final_iso.src {
            return Err(Error::Identity("final isomorphism source mismatch".into()));
        }

        // composed embeddings equal the original inclusion
        let mut composed = self.base_iso.fwd.clone();
        for step in &self.steps {
            composed = step.embedding.mul(&composed);
        }
        composed = self.final_iso.fwd.mul(&composed);
        let amb = self.emb.amb();
        for j in 0..self.emb.sub().rank() {
            for i in 0..amb.rank() {
                let diff = composed[(i, j)] - self.emb.map()[(i, j)];
                if diff.rem_euclid(amb.factors()[i]) != 0 {
                    return Err(Error::Identity(
                        "composed ladder does not reproduce the inclusion".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// State of the growing subgroup during construction.
struct Chain<'a> {
    amb: &'a FinAbGroup,
    /// Current basis elements, each of prime-power order.
    basis: Vec<GroupElement>,
    orders: Vec<i128>,
    /// Ambient coordinates -> basis coordinates for every element of H.
    table: HashMap<Vec<i128>, Vec<i128>>,
}

impl<'a> Chain<'a> {
    fn new(amb: &'a FinAbGroup, basis: Vec<GroupElement>, orders: Vec<i128>) -> Result<Self> {
        let mut chain = Chain {
            amb,
            basis,
            orders,
            table: HashMap::new(),
        };
        chain.rebuild_table()?;
        Ok(chain)
    }

    fn group(&self) -> FinAbGroup {
        FinAbGroup::new(self.orders.clone()).expect("orders are positive")
    }

    fn size(&self) -> i128 {
        self.orders.iter().product()
    }

    fn contains(&self, x: &GroupElement) -> bool {
        self.table.contains_key(x.coords())
    }

    fn coords_of(&self, x: &GroupElement) -> Option<&Vec<i128>> {
        self.table.get(x.coords())
    }

    fn combine(&self, coords: &[i128]) -> GroupElement {
        let mut acc = self.amb.zero();
        for (c, b) in coords.iter().zip(&self.basis) {
            acc = acc.add(&b.mul_int(*c));
        }
        acc
    }

    fn rebuild_table(&mut self) -> Result<()> {
        let size = self.size();
        self.table = HashMap::with_capacity(size as usize);
        let group = self.group();
        for x in group.elements() {
            let elem = self.combine(x.coords());
            if self
                .table
                .insert(elem.coords().to_vec(), x.coords().to_vec())
                .is_some()
            {
                return Err(Error::Identity(
                    "chain basis is not independent: duplicate element".into(),
                ));
            }
        }
        Ok(())
    }

    /// Sorted multiset of `p`-exponents of the current group.
    fn p_exponents(&self, p: i128) -> Vec<u32> {
        let mut exps: Vec<u32> = self
            .orders
            .iter()
            .filter_map(|&q| {
                let fs = factorize(q);
                fs.iter().find(|&&(pp, _)| pp == p).map(|&(_, e)| e)
            })
            .collect();
        exps.sort();
        exps
    }
}

fn p_exponents_of(group: &FinAbGroup, p: i128) -> Vec<u32> {
    let mut exps: Vec<u32> = group
        .factors()
        .iter()
        .flat_map(|&q| factorize(q))
        .filter(|&(pp, _)| pp == p)
        .map(|(_, e)| e)
        .collect();
    exps.sort();
    exps
}

/// Which exponent gets raised going from `old` to `new` (both sorted
/// multisets differing in exactly one entry `a -> a+1`, where a fresh factor
/// counts as raising 0).
fn bump_exponent(old: &[u32], new: &[u32]) -> Option<u32> {
    if new.len() == old.len() + 1 {
        // candidate split: new = old + {1}
        let mut rest = new.to_vec();
        if let Some(pos) = rest.iter().position(|&e| e == 1) {
            rest.remove(pos);
            if rest == old {
                return Some(0);
            }
        }
        return None;
    }
    if new.len() != old.len() {
        return None;
    }
    // one entry a -> a+1
    for &a in old {
        let mut o2 = old.to_vec();
        let mut n2 = new.to_vec();
        if let (Some(i), Some(j)) = (
            o2.iter().position(|&e| e == a),
            n2.iter().position(|&e| e == a + 1),
        ) {
            o2.remove(i);
            n2.remove(j);
            if o2 == n2 {
                return Some(a);
            }
        }
    }
    None
}

/// Presentation of the quotient `amb / H` with explicit lift and projection.
struct Quotient {
    q: FinAbGroup,
    /// canonical coords -> ambient representative
    lift: IntMat,
    /// ambient coords -> canonical coords
    project: IntMat,
}

fn quotient_by(amb: &FinAbGroup, basis: &[GroupElement]) -> Quotient {
    let r = amb.rank();
    let mut cols: Vec<Vec<i128>> = basis.iter().map(|b| b.coords().to_vec()).collect();
    for i in 0..r {
        let mut col = vec![0i128; r];
        col[i] = amb.factors()[i];
        cols.push(col);
    }
    let relations = IntMat::from_cols(cols, r);
    let snf = smith_normal_form(&relations);
    let diag = snf.diagonal();
    let kept: Vec<usize> = (0..r).filter(|&i| diag[i] > 1).collect();
    let q = FinAbGroup::new(kept.iter().map(|&i| diag[i]).collect()).unwrap();
    let uinv = crate::abgroup::inverse_unimodular(&snf.u);
    let mut project = IntMat::zero(kept.len(), r);
    let mut lift = IntMat::zero(r, kept.len());
    for (row, &i) in kept.iter().enumerate() {
        for j in 0..r {
            project[(row, j)] = snf.u[(i, j)];
            lift[(j, row)] = uinv[(j, i)];
        }
    }
    Quotient { q, lift, project }
}

/// Builds the ladder from the subgroup to the ambient group. The ambient
/// order must stay within `budget` because intermediate subgroups are
/// enumerated.
pub fn build_ladder(emb: &SubgroupEmbedding, budget: u128) -> Result<Ladder> {
    let amb = emb.amb();
    if amb.order() as u128 > budget {
        return Err(Error::Budget {
            what: "ladder construction (ambient enumeration)".into(),
            needed: amb.order() as u128,
            budget,
        });
    }

    let (base, base_iso) = emb.sub().primary_refinement();
    // starting basis: images of the refined generators
    let mut basis = Vec::with_capacity(base.rank());
    for j in 0..base.rank() {
        let mut unit = vec![0i128; base.rank()];
        unit[j] = 1;
        let in_sub = base_iso.apply_inverse(&base.element(unit));
        basis.push(emb.apply(&in_sub));
    }
    let mut chain = Chain::new(amb, basis, base.factors().to_vec())?;
    if chain.size() != emb.sub().order() {
        return Err(Error::Identity("initial chain has wrong order".into()));
    }

    let index = emb.index();
    let mut steps: Vec<LadderStep> = Vec::new();

    for (p, mult) in factorize(index) {
        for _ in 0..mult {
            let step = extend_once(&mut chain, p)?;
            steps.push(step);
        }
    }

    // final isomorphism: basis matrix one way, discrete logs the other
    let ct = chain.group();
    if chain.size() != amb.order() {
        return Err(Error::Identity("ladder did not reach the ambient group".into()));
    }
    let fwd = IntMat::from_cols(
        chain.basis.iter().map(|b| b.coords().to_vec()).collect(),
        amb.rank(),
    );
    let mut bwd = IntMat::zero(ct.rank(), amb.rank());
    for i in 0..amb.rank() {
        let mut unit = vec![0i128; amb.rank()];
        unit[i] = 1;
        let coords = chain
            .coords_of(&amb.element(unit))
            .ok_or_else(|| Error::Identity("ambient generator missing from chain".into()))?;
        for (row, &c) in coords.iter().enumerate() {
            bwd[(row, i)] = c;
        }
    }
    let final_iso = IsoPair {
        src: ct,
        dst: amb.clone(),
        fwd,
        bwd,
    };
    final_iso.validate()?;

    let ladder = Ladder {
        emb: emb.clone(),
        base,
        base_iso,
        steps,
        final_iso,
    };
    ladder.validate()?;
    Ok(ladder)
}

/// One index-`p` extension of the chain, choosing the candidate that raises
/// the smallest deficient exponent.
fn extend_once(chain: &mut Chain, p: i128) -> Result<LadderStep> {
    let amb = chain.amb;
    let quotient = quotient_by(amb, &chain.basis);
    let old_exps = chain.p_exponents(p);

    // candidates: nonzero order-p elements of the quotient
    let mut best: Option<(u32, GroupElement)> = None;
    for qbar in quotient.q.elements() {
        if qbar.is_zero() || !qbar.mul_int(p).is_zero() {
            continue;
        }
        let g = amb.element(quotient.lift.mul_vec(qbar.coords()));
        debug_assert_eq!(
            quotient.q.element(quotient.project.mul_vec(g.coords())),
            qbar
        );
        debug_assert!(chain.contains(&g.mul_int(p)));
        debug_assert!(!chain.contains(&g));
        let mut gens: Vec<GroupElement> = chain.basis.clone();
        gens.push(g.clone());
        let bigger = subgroup_from_generators(amb, &gens)?;
        let new_exps = p_exponents_of(bigger.sub(), p);
        let bump = bump_exponent(&old_exps, &new_exps).ok_or_else(|| {
            Error::Identity("index-p extension changed the type by more than one box".into())
        })?;
        if best.as_ref().map_or(true, |(b, _)| bump < *b) {
            best = Some((bump, g));
        }
        if matches!(best, Some((0, _))) {
            break;
        }
    }
    let (bump, g) = best.ok_or_else(|| {
        Error::Identity(format!("no index-{} extension found (is p | index?)", p))
    })?;

    let prev_group = chain.group();
    if bump == 0 {
        split_step(chain, p, &g, &prev_group)
    } else {
        nonsplit_step(chain, p, bump, &g, &prev_group)
    }
}

fn split_step(
    chain: &mut Chain,
    p: i128,
    g: &GroupElement,
    prev_group: &FinAbGroup,
) -> Result<LadderStep> {
    // pg is p-divisible inside H: solve p h = p g coordinate-wise
    let pg = g.mul_int(p);
    let c = chain
        .coords_of(&pg)
        .ok_or_else(|| Error::Identity("p g is not in the chain".into()))?
        .clone();
    let mut h_coords = vec![0i128; chain.basis.len()];
    for (j, (&cj, &qj)) in c.iter().zip(&chain.orders).enumerate() {
        if qj % p == 0 {
            if cj % p != 0 {
                return Err(Error::Identity(
                    "split candidate is not p-divisible in the chain".into(),
                ));
            }
            h_coords[j] = cj / p;
        } else {
            let inv = mod_inverse(p, qj).expect("p invertible mod coprime order");
            h_coords[j] = (cj * inv).rem_euclid(qj);
        }
    }
    let h = chain.combine(&h_coords);
    let complement = g.sub(&h);
    if complement.order() != p || chain.contains(&complement) {
        return Err(Error::Identity("split complement is invalid".into()));
    }

    chain.basis.insert(0, complement);
    chain.orders.insert(0, p);
    chain.rebuild_table()?;

    let s = prev_group.rank();
    let mut embedding = IntMat::zero(s + 1, s);
    for j in 0..s {
        embedding[(j + 1, j)] = 1;
    }
    Ok(LadderStep {
        group: chain.group(),
        embedding,
        kind: StepKind::Split { p },
    })
}

fn nonsplit_step(
    chain: &mut Chain,
    p: i128,
    bump: u32,
    g: &GroupElement,
    prev_group: &FinAbGroup,
) -> Result<LadderStep> {
    let d = p.pow(bump);
    // reduce g to p-power order without changing H + <g>
    let ord = g.order();
    let mut coprime = ord;
    while coprime % p == 0 {
        coprime /= p;
    }
    let g_p = g.mul_int(coprime);
    let pg_p = g_p.mul_int(p);

    // the p-primary component of H
    let p_slots: Vec<usize> = (0..chain.orders.len())
        .filter(|&j| chain.orders[j] % p == 0)
        .collect();
    let p_group = FinAbGroup::new(p_slots.iter().map(|&j| chain.orders[j]).collect())?;
    let p_elements: Vec<GroupElement> = p_group
        .elements()
        .map(|x| {
            let mut coords = vec![0i128; chain.basis.len()];
            for (slot, &j) in p_slots.iter().enumerate() {
                coords[j] = x.coords()[slot];
            }
            chain.combine(&coords)
        })
        .collect();
    let pa_p: HashSet<Vec<i128>> = p_elements
        .iter()
        .map(|w| w.mul_int(d).coords().to_vec())
        .collect();

    // search for h in P making v' = p(g_p - h) a pure element of order p^bump
    let mut found: Option<(GroupElement, GroupElement)> = None;
    for h in &p_elements {
        let v = pg_p.sub(&h.mul_int(p));
        if v.order() != d {
            continue;
        }
        let socle_rep = v.mul_int(d / p);
        if pa_p.contains(socle_rep.coords()) {
            continue; // not pure: p^{a-1} v' in p^a P
        }
        found = Some((g_p.sub(h), v));
        break;
    }
    let (g_new, v) = found.ok_or_else(|| {
        Error::Identity("no pure deepening element found for non-split step".into())
    })?;
    debug_assert_eq!(g_new.mul_int(p), v);
    debug_assert_eq!(g_new.order(), p * d);

    // complement of <v> inside P via the retraction slot j*
    let v_coords = chain
        .coords_of(&v)
        .ok_or_else(|| Error::Identity("v' is not in the chain".into()))?
        .clone();
    // slot with order at least p^bump whose coordinate in v' is a p-unit;
    // purity of v' guarantees one exists
    let jstar = p_slots
        .iter()
        .copied()
        .find(|&j| chain.orders[j] % d == 0 && v_coords[j] % p != 0)
        .ok_or_else(|| Error::Identity("purity retraction slot not found".into()))?;

    // new basis: g' first, every old slot except j*, then the leftover of j*
    let mut new_basis = vec![g_new];
    let mut new_orders = vec![p * d];
    for j in 0..chain.basis.len() {
        if j == jstar {
            continue;
        }
        new_basis.push(chain.basis[j].clone());
        new_orders.push(chain.orders[j]);
    }
    let leftover_order = chain.orders[jstar] / d;
    if leftover_order > 1 {
        new_basis.push(chain.basis[jstar].mul_int(d));
        new_orders.push(leftover_order);
    }

    // realignment: H in old coordinates -> H in (v', K) coordinates
    let aligned_basis: Vec<GroupElement> = {
        let mut b = vec![v];
        b.extend(new_basis.iter().skip(1).cloned());
        b
    };
    let mut aligned_orders = new_orders.clone();
    aligned_orders[0] = d;
    let aligned_chain = Chain::new(chain.amb, aligned_basis.clone(), aligned_orders.clone())?;
    if aligned_chain.size() != chain.size() {
        return Err(Error::Identity(
            "aligned decomposition has the wrong order".into(),
        ));
    }
    let aligned_group = FinAbGroup::new(aligned_orders)?;
    let mut realign_fwd = IntMat::zero(aligned_group.rank(), prev_group.rank());
    for (j, b) in chain.basis.iter().enumerate() {
        let coords = aligned_chain
            .coords_of(b)
            .ok_or_else(|| Error::Identity("old basis not in aligned chain".into()))?;
        for (i, &c) in coords.iter().enumerate() {
            realign_fwd[(i, j)] = c;
        }
    }
    let mut realign_bwd = IntMat::zero(prev_group.rank(), aligned_group.rank());
    for (j, b) in aligned_basis.iter().enumerate() {
        let coords = chain
            .coords_of(b)
            .ok_or_else(|| Error::Identity("aligned basis not in old chain".into()))?;
        for (i, &c) in coords.iter().enumerate() {
            realign_bwd[(i, j)] = c;
        }
    }
    let realign = IsoPair {
        src: prev_group.clone(),
        dst: aligned_group.clone(),
        fwd: realign_fwd.clone(),
        bwd: realign_bwd,
    };
    realign.validate()?;

    chain.basis = new_basis;
    chain.orders = new_orders;
    chain.rebuild_table()?;

    // embedding = diag(p, 1, ..) . realign
    let mut deepen = IntMat::identity(aligned_group.rank());
    deepen[(0, 0)] = p;
    let embedding = deepen.mul(&realign_fwd);

    Ok(LadderStep {
        group: chain.group(),
        embedding,
        kind: StepKind::NonSplit { p, d, realign },
    })
}

//! Deciding whether a torus-valued polynomial map on a subgroup extends to a
//! degree-bounded polynomial map on the ambient group.
//!
//! The unknown extension's Taylor coefficients are torus unknowns subject to
//! two families of integer-linear constraints: periodicity in every ambient
//! coordinate, and restriction to the given map along the embedding. Smith
//! reduction either produces an extension or an integer functional that
//! annihilates the constraint matrix while pairing non-integrally with the
//! right-hand side, which is a checkable proof that no extension exists.

use crate::abgroup::SubgroupEmbedding;
use crate::error::{Error, Result};
use crate::matrix::{solve_mod1, IntMat, TorusSolution};
use crate::polymap::{multi_indices, MultiIndex, Poly, TPoly, TorusVec};
use crate::rat::{binom_int, Rat};
use crate::torus::TorusPoint;
use num_traits::Zero;

/// Provenance of a constraint row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowLabel {
    /// Coefficient comparison of `h(v + n_var e_var) = h(v)` at `index`.
    Periodicity { var: usize, index: MultiIndex },
    /// Coefficient comparison of `h(E v) = g(v)` at `index`.
    Restriction { index: MultiIndex },
}

/// Integer-linear system over torus unknowns `a_w`.
pub struct TorusSystem {
    pub matrix: IntMat,
    pub rhs: Vec<TorusPoint>,
    pub unknowns: Vec<MultiIndex>,
    pub rows: Vec<RowLabel>,
}

impl TorusSystem {
    pub fn column_of(&self, w: &MultiIndex) -> Option<usize> {
        self.unknowns.iter().position(|u| u == w)
    }

    /// Restricts to the rows satisfying the predicate.
    pub fn filtered<F: Fn(&RowLabel) -> bool>(&self, keep: F) -> TorusSystem {
        let keep_idx: Vec<usize> = (0..self.rows.len())
            .filter(|&i| keep(&self.rows[i]))
            .collect();
        let mut matrix = IntMat::zero(keep_idx.len(), self.matrix.cols());
        let mut rhs = Vec::with_capacity(keep_idx.len());
        let mut rows = Vec::with_capacity(keep_idx.len());
        for (new_i, &i) in keep_idx.iter().enumerate() {
            for j in 0..self.matrix.cols() {
                matrix[(new_i, j)] = self.matrix[(i, j)];
            }
            rhs.push(self.rhs[i]);
            rows.push(self.rows[i].clone());
        }
        TorusSystem {
            matrix,
            rhs,
            unknowns: self.unknowns.clone(),
            rows,
        }
    }

    pub fn solve(&self) -> std::result::Result<TorusSolution, Vec<i128>> {
        let rhs: Vec<Rat> = self.rhs.iter().map(|t| t.value()).collect();
        solve_mod1(&self.matrix, &rhs).map_err(|o| o.functional)
    }
}

/// Inconsistency witness for one fiber component of the extension system.
pub struct InfeasibilityCertificate {
    pub component: usize,
    pub system: TorusSystem,
    pub functional: Vec<i128>,
}

impl InfeasibilityCertificate {
    /// Checks the defining property: the functional is integral, annihilates
    /// the matrix, and pairs non-integrally with the right-hand side.
    pub fn verify(&self) -> Result<()> {
        if self.functional.len() != self.system.matrix.rows() {
            return Err(Error::Mismatch("functional length != row count".into()));
        }
        for j in 0..self.system.matrix.cols() {
            let s: i128 = (0..self.system.matrix.rows())
                .map(|i| self.functional[i] * self.system.matrix[(i, j)])
                .sum();
            if s != 0 {
                return Err(Error::Identity(format!(
                    "functional does not annihilate column {}",
                    j
                )));
            }
        }
        let pairing: Rat = self
            .functional
            .iter()
            .zip(&self.system.rhs)
            .map(|(&l, t)| t.value() * Rat::from_integer(l))
            .sum();
        if pairing.is_integer() {
            return Err(Error::Identity(
                "functional pairs integrally with the right-hand side".into(),
            ));
        }
        Ok(())
    }
}

pub enum ExtensionOutcome {
    Feasible(TPoly),
    Infeasible(InfeasibilityCertificate),
}

impl ExtensionOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ExtensionOutcome::Feasible(_))
    }
}

/// Builds the constraint system for one fiber component of the unknown
/// degree-`<= k` extension along `emb`.
pub fn extension_system(
    g: &TPoly,
    emb: &SubgroupEmbedding,
    k: u32,
    component: usize,
) -> Result<TorusSystem> {
    let r = emb.amb().rank();
    let s = emb.sub().rank();
    if g.arity() != s {
        return Err(Error::Mismatch(format!(
            "map arity {} != subgroup rank {}",
            g.arity(),
            s
        )));
    }
    let unknowns = multi_indices(r, k);
    let col_of = |w: &MultiIndex| unknowns.iter().position(|u| u == w).unwrap();

    let mut rows: Vec<Vec<i128>> = Vec::new();
    let mut rhs: Vec<TorusPoint> = Vec::new();
    let mut labels: Vec<RowLabel> = Vec::new();

    // periodicity: h(v + n_i e_i) - h(v) has zero coefficient at every w,
    // i.e. sum_{b >= 1} binom(n_i, b) a_{w + b e_i} = 0
    for var in 0..r {
        let n = emb.amb().factors()[var];
        for w in &unknowns {
            let mut row = vec![0i128; unknowns.len()];
            let mut nonzero = false;
            let mut b = 1u32;
            loop {
                let mut target = w.0.clone();
                target[var] += b;
                let target = MultiIndex(target);
                if target.total() > k {
                    break;
                }
                row[col_of(&target)] += binom_int(n, b);
                nonzero = true;
                b += 1;
            }
            if nonzero {
                rows.push(row);
                rhs.push(TorusPoint::zero());
                labels.push(RowLabel::Periodicity {
                    var,
                    index: w.clone(),
                });
            }
        }
    }

    // restriction: coefficients of h(E v) match those of g
    // binom(E v, w) = sum_u beta_{w,u} binom(v, u) with integer beta
    let e = emb.map();
    let mut beta: Vec<Vec<(usize, i128)>> = Vec::with_capacity(unknowns.len());
    let sub_indices = multi_indices(s, k);
    let sub_col = |u: &MultiIndex| sub_indices.iter().position(|x| x == u).unwrap();
    for w in &unknowns {
        let mut scalar = Poly::constant(
            s,
            crate::polymap::RatVec::scalar(Rat::from_integer(1)),
        );
        for i in 0..r {
            if w.0[i] == 0 {
                continue;
            }
            let row: Vec<i128> = (0..s).map(|j| e[(i, j)]).collect();
            scalar = crate::polymap::mul_scalar(
                &scalar,
                &crate::polymap::binom_of_affine_form(&row, 0, w.0[i]),
            );
        }
        let mut entries = Vec::new();
        for (u, c) in scalar.coeffs() {
            let q = c.0[0];
            assert!(q.is_integer());
            if !q.is_zero() {
                entries.push((sub_col(u), *q.numer()));
            }
        }
        beta.push(entries);
    }
    for (ui, u) in sub_indices.iter().enumerate() {
        let mut row = vec![0i128; unknowns.len()];
        for (wi, entries) in beta.iter().enumerate() {
            for &(uj, coef) in entries {
                if uj == ui {
                    row[wi] += coef;
                }
            }
        }
        let gval = g.coeff(u).0[component];
        rows.push(row);
        rhs.push(gval);
        labels.push(RowLabel::Restriction { index: u.clone() });
    }

    Ok(TorusSystem {
        matrix: IntMat::from_rows(rows),
        rhs,
        unknowns,
        rows: labels,
    })
}

/// Decides whether a degree-`<= k` polynomial map on the ambient group
/// restricts to `g` along the embedding. Returns either such an extension
/// (verified coefficient-exactly and pointwise) or an infeasibility
/// certificate.
pub fn check_extension_feasible(
    g: &TPoly,
    emb: &SubgroupEmbedding,
    k: u32,
) -> Result<ExtensionOutcome> {
    if g.total_degree() > k {
        return Err(Error::Precondition(format!(
            "map has degree {} > bound {}",
            g.total_degree(),
            k
        )));
    }
    if !g.descends_to_quotient(emb.sub().factors()) {
        return Err(Error::Precondition(
            "map is not well-defined on the subgroup".into(),
        ));
    }
    let d = *g.shape();
    let r = emb.amb().rank();
    let mut components: Vec<TPoly> = Vec::with_capacity(d);
    for component in 0..d {
        let system = extension_system(g, emb, k, component)?;
        match system.solve() {
            Ok(sol) => {
                let mut h: TPoly = Poly::zero(r, 1usize);
                for (w, q) in system.unknowns.iter().zip(&sol.particular) {
                    h.set_coeff(w.clone(), TorusVec(vec![TorusPoint::new(*q)]));
                }
                components.push(h);
            }
            Err(functional) => {
                let cert = InfeasibilityCertificate {
                    component,
                    system,
                    functional,
                };
                cert.verify()?;
                return Ok(ExtensionOutcome::Infeasible(cert));
            }
        }
    }
    // assemble the d components into one map
    let mut h: TPoly = Poly::zero(r, d);
    for (c, hc) in components.iter().enumerate() {
        for (w, val) in hc.coeffs() {
            let mut full = h.coeff(w);
            full.0[c] = full.0[c] + val.0[0];
            h.set_coeff(w.clone(), full);
        }
    }
    verify_extension(&h, g, emb)?;
    Ok(ExtensionOutcome::Feasible(h))
}

/// Exact verification that `h` extends `g`: periodicity on the ambient group,
/// coefficient-level restriction, and a pointwise sweep of the subgroup.
pub fn verify_extension(h: &TPoly, g: &TPoly, emb: &SubgroupEmbedding) -> Result<()> {
    if !h.descends_to_quotient(emb.amb().factors()) {
        return Err(Error::Identity(
            "candidate extension does not descend to the ambient group".into(),
        ));
    }
    let restricted = crate::polymap::compose_affine(h, emb.map(), &vec![0; emb.amb().rank()]);
    if restricted != *g {
        return Err(Error::Identity(
            "candidate extension does not restrict to the map".into(),
        ));
    }
    for x in emb.sub().elements() {
        let via_h = h.eval_int(emb.apply(&x).coords());
        let via_g = g.eval_int(x.coords());
        if via_h != via_g {
            return Err(Error::Identity(format!(
                "extension disagrees at {:?}",
                x.coords()
            )));
        }
    }
    Ok(())
}

/// The worked non-extendability instance: `Z = Z_{p^2} x Z_p`,
/// `Z_0 = (p Z_{p^2}) x Z_p`, and `g(p x, y) = x y / p` on the subgroup
/// coordinates.
pub fn nonext_instance(p: i128) -> Result<(SubgroupEmbedding, TPoly)> {
    let amb = crate::abgroup::FinAbGroup::new(vec![p * p, p])?;
    let sub = crate::abgroup::FinAbGroup::new(vec![p, p])?;
    let map = IntMat::from_rows(vec![vec![p, 0], vec![0, 1]]);
    let emb = SubgroupEmbedding::new(sub, amb, map)?;
    let g: TPoly = Poly::from_coeffs(
        2,
        1usize,
        [(
            MultiIndex(vec![1, 1]),
            TorusVec(vec![TorusPoint::new(Rat::new(1, p))]),
        )],
    );
    Ok((emb, g))
}

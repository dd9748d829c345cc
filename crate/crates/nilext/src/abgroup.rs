//! Finite abelian groups of bounded rank.
//!
//! A group is a product of cyclic factors `Z_{n_1} x ... x Z_{n_r}`; elements
//! are coordinate vectors reduced mod the factors. Canonical decomposition,
//! subgroup generation and annihilators all go through Smith normal form so
//! that every isomorphism in play is an explicit integer matrix.

use crate::error::{Error, Result};
use crate::matrix::{kernel_basis, smith_normal_form, solve_diophantine, IntMat};
use crate::rat::Rat;
use crate::torus::TorusPoint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Product of cyclic groups, the trivial group having rank 0.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    factors: Vec<i128>,
}

impl FinAbGroup {
    pub fn new(factors: Vec<i128>) -> Result<Self> {
        if factors.iter().any(|&n| n < 1) {
            return Err(Error::InvalidInput(format!(
                "group factors must be positive, got {:?}",
                factors
            )));
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    pub fn cyclic(n: i128) -> Self {
        assert!(n >= 1);
        FinAbGroup { factors: vec![n] }
    }

    pub fn factors(&self) -> &[i128] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> i128 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![0; self.rank()],
        }
    }

    /// Element with the given coordinates, reduced mod the factors.
    pub fn element(&self, coords: Vec<i128>) -> GroupElement {
        assert_eq!(coords.len(), self.rank(), "coordinate arity mismatch");
        let coords = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| c.rem_euclid(n))
            .collect();
        GroupElement {
            group: self.clone(),
            coords,
        }
    }

    /// All elements in row-major order (last coordinate varies fastest).
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let total = self.order();
        (0..total).map(move |i| self.element_at(i))
    }

    /// Row-major index of an element.
    pub fn index_of(&self, x: &GroupElement) -> usize {
        assert_eq!(&x.group, self, "element of a different group");
        let mut idx: i128 = 0;
        for (c, n) in x.coords.iter().zip(&self.factors) {
            idx = idx * n + c;
        }
        idx as usize
    }

    pub fn element_at(&self, mut idx: i128) -> GroupElement {
        let mut coords = vec![0i128; self.rank()];
        for i in (0..self.rank()).rev() {
            coords[i] = idx % self.factors[i];
            idx /= self.factors[i];
        }
        GroupElement {
            group: self.clone(),
            coords,
        }
    }

    /// Canonical decomposition: invariant factors `d_1 | d_2 | ...` with
    /// explicit coordinate changes both ways.
    pub fn canonical_decomposition(&self) -> CanonicalDecomposition {
        let r = self.rank();
        let mut relations = IntMat::zero(r, r);
        for i in 0..r {
            relations[(i, i)] = self.factors[i];
        }
        canonical_from_relations_unchecked(self.clone(), &relations)
    }

    /// Splits every factor into prime-power parts via CRT; refined factors are
    /// sorted by `(prime, exponent, source factor)`.
    pub fn primary_refinement(&self) -> (FinAbGroup, IsoPair) {
        let mut parts: Vec<(i128, u32, usize, i128)> = Vec::new(); // (p, e, src, q=p^e)
        for (j, &n) in self.factors.iter().enumerate() {
            for (p, e) in factorize(n) {
                parts.push((p, e, j, p.pow(e)));
            }
        }
        parts.sort();
        let refined = FinAbGroup {
            factors: parts.iter().map(|&(_, _, _, q)| q).collect(),
        };
        let m = parts.len();
        let mut fwd = IntMat::zero(m, self.rank());
        let mut bwd = IntMat::zero(self.rank(), m);
        for (i, &(_, _, j, q)) in parts.iter().enumerate() {
            fwd[(i, j)] = 1;
            let n = self.factors[j];
            let cofactor = n / q;
            // CRT coefficient: cofactor * (cofactor^{-1} mod q)
            let inv = mod_inverse(cofactor.rem_euclid(q), q)
                .expect("cofactor coprime to prime power");
            bwd[(j, i)] = (cofactor * inv).rem_euclid(n);
        }
        let iso = IsoPair {
            src: self.clone(),
            dst: refined.clone(),
            fwd,
            bwd,
        };
        debug_assert!(iso.validate().is_ok());
        (refined, iso)
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "Z_1")
        } else {
            let parts: Vec<String> = self.factors.iter().map(|n| format!("Z_{}", n)).collect();
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Element of a [`FinAbGroup`], coordinates reduced into `[0, n_i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FinAbGroup,
    coords: Vec<i128>,
}

impl GroupElement {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.group, other.group, "elements of different groups");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        self.group.element(coords)
    }

    pub fn neg(&self) -> GroupElement {
        let coords = self.coords.iter().map(|c| -c).collect();
        self.group.element(coords)
    }

    pub fn sub(&self, other: &GroupElement) -> GroupElement {
        self.add(&other.neg())
    }

    pub fn mul_int(&self, n: i128) -> GroupElement {
        let coords = self.coords.iter().map(|c| c * n).collect();
        self.group.element(coords)
    }

    pub fn order(&self) -> i128 {
        self.coords
            .iter()
            .zip(self.group.factors())
            .map(|(&c, &n)| n / n.gcd(&c))
            .fold(1i128, |acc, o| acc.lcm(&o))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// Character `x -> e(sum_i xi_i x_i / n_i)` of a finite abelian group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Character {
    group: FinAbGroup,
    xi: Vec<i128>,
}

impl Character {
    pub fn new(group: &FinAbGroup, xi: Vec<i128>) -> Self {
        let xi = xi
            .iter()
            .zip(group.factors())
            .map(|(&c, &n)| c.rem_euclid(n))
            .collect();
        Character {
            group: group.clone(),
            xi,
        }
    }

    pub fn trivial(group: &FinAbGroup) -> Self {
        Character {
            group: group.clone(),
            xi: vec![0; group.rank()],
        }
    }

    pub fn frequency(&self) -> &[i128] {
        &self.xi
    }

    pub fn is_trivial(&self) -> bool {
        self.xi.iter().all(|&c| c == 0)
    }

    /// Exact value `sum_i xi_i x_i / n_i mod 1`.
    pub fn eval(&self, x: &GroupElement) -> TorusPoint {
        assert_eq!(self.group, *x.group(), "character applied across groups");
        let q: Rat = self
            .xi
            .iter()
            .zip(x.coords())
            .zip(self.group.factors())
            .map(|((&xi, &c), &n)| Rat::new(xi * c, n))
            .sum();
        TorusPoint::new(q)
    }
}

/// Explicit injective homomorphism from a subgroup in canonical form into an
/// ambient group; columns of `map` are the images of the canonical generators.
#[derive(Clone, PartialEq, Eq)]
pub struct SubgroupEmbedding {
    sub: FinAbGroup,
    amb: FinAbGroup,
    map: IntMat,
}

impl SubgroupEmbedding {
    pub fn new(sub: FinAbGroup, amb: FinAbGroup, map: IntMat) -> Result<Self> {
        if map.rows() != amb.rank() || map.cols() != sub.rank() {
            return Err(Error::Mismatch(format!(
                "embedding matrix is {}x{}, expected {}x{}",
                map.rows(),
                map.cols(),
                amb.rank(),
                sub.rank()
            )));
        }
        let emb = SubgroupEmbedding { sub, amb, map };
        emb.validate()?;
        Ok(emb)
    }

    pub fn identity(group: &FinAbGroup) -> Self {
        SubgroupEmbedding {
            sub: group.clone(),
            amb: group.clone(),
            map: IntMat::identity(group.rank()),
        }
    }

    pub fn sub(&self) -> &FinAbGroup {
        &self.sub
    }

    pub fn amb(&self) -> &FinAbGroup {
        &self.amb
    }

    pub fn map(&self) -> &IntMat {
        &self.map
    }

    pub fn index(&self) -> i128 {
        self.amb.order() / self.sub.order()
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        assert_eq!(*x.group(), self.sub, "element not in the subgroup domain");
        self.amb.element(self.map.mul_vec(x.coords()))
    }

    /// Images of all subgroup elements, in the subgroup's row-major order.
    pub fn image(&self) -> Vec<GroupElement> {
        self.sub.elements().map(|x| self.apply(&x)).collect()
    }

    /// Membership in the image, decided by an integer linear solve.
    pub fn contains(&self, y: &GroupElement) -> bool {
        self.preimage(y).is_some()
    }

    /// Solves `map . x = y (mod amb)` for `x` in the subgroup.
    pub fn preimage(&self, y: &GroupElement) -> Option<GroupElement> {
        assert_eq!(*y.group(), self.amb, "element not in the ambient group");
        let r = self.amb.rank();
        let mut moduli = IntMat::zero(r, r);
        for i in 0..r {
            moduli[(i, i)] = self.amb.factors()[i];
        }
        let stacked = self.map.hcat(&moduli);
        solve_diophantine(&stacked, y.coords()).map(|sol| {
            self.sub.element(sol[..self.sub.rank()].to_vec())
        })
    }

    /// Checks the matrix is a well-defined injective homomorphism.
    pub fn validate(&self) -> Result<()> {
        // well-defined: d_j * column_j = 0 in the ambient group
        for j in 0..self.sub.rank() {
            let d = self.sub.factors()[j];
            for i in 0..self.amb.rank() {
                if (d * self.map[(i, j)]).rem_euclid(self.amb.factors()[i]) != 0 {
                    return Err(Error::InvalidInput(format!(
                        "column {} does not respect modulus {}",
                        j, d
                    )));
                }
            }
        }
        if self.sub.order() > self.amb.order() {
            return Err(Error::InvalidInput(
                "subgroup larger than ambient group".into(),
            ));
        }
        // injectivity: trivial kernel, via the lattice of solutions of
        // map.x = 0 (mod amb)
        let r = self.amb.rank();
        let mut moduli = IntMat::zero(r, r);
        for i in 0..r {
            moduli[(i, i)] = self.amb.factors()[i];
        }
        let stacked = self.map.hcat(&moduli);
        for v in kernel_basis(&stacked) {
            let x = self.sub.element(v[..self.sub.rank()].to_vec());
            if !x.is_zero() {
                return Err(Error::InvalidInput(
                    "embedding has nontrivial kernel".into(),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SubgroupEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?} via {:?}", self.sub, self.amb, self.map)
    }
}

/// Invariant factors plus explicit coordinate changes.
pub struct CanonicalDecomposition {
    pub source: FinAbGroup,
    pub canonical: FinAbGroup,
    /// Prime -> ascending exponent list.
    pub primary: BTreeMap<i128, Vec<u32>>,
    pub iso: IsoPair,
}

impl CanonicalDecomposition {
    pub fn invariant_factors(&self) -> &[i128] {
        self.canonical.factors()
    }
}

/// Group presented by generators of `Z^r` subject to integer relations
/// (columns of `relations`). Rejects presentations of infinite groups.
pub fn canonical_from_relations(rank: usize, relations: &IntMat) -> Result<CanonicalDecomposition> {
    if relations.rows() != rank {
        return Err(Error::Mismatch(format!(
            "relation matrix has {} rows, expected {}",
            relations.rows(),
            rank
        )));
    }
    let snf = smith_normal_form(relations);
    if snf.rank() < rank {
        return Err(Error::InvalidInput(
            "relations do not have full rank: the group is infinite".into(),
        ));
    }
    let diag = snf.diagonal();
    let factors: Vec<i128> = diag[..rank].to_vec();
    let source = FinAbGroup::new(factors)?;
    Ok(canonical_from_relations_unchecked(source, relations))
}

fn canonical_from_relations_unchecked(
    source: FinAbGroup,
    relations: &IntMat,
) -> CanonicalDecomposition {
    let r = source.rank();
    let snf = smith_normal_form(relations);
    let diag = snf.diagonal();
    assert!(diag.iter().take(r).all(|&d| d > 0), "infinite group");

    let kept: Vec<usize> = (0..r).filter(|&i| diag[i] > 1).collect();
    let canonical = FinAbGroup {
        factors: kept.iter().map(|&i| diag[i]).collect(),
    };

    // forward: x -> (U x) restricted to nontrivial invariant factors
    let mut fwd = IntMat::zero(kept.len(), r);
    for (row, &i) in kept.iter().enumerate() {
        for j in 0..r {
            fwd[(row, j)] = snf.u[(i, j)];
        }
    }
    let uinv = inverse_unimodular(&snf.u);
    let mut bwd = IntMat::zero(r, kept.len());
    for (col, &i) in kept.iter().enumerate() {
        for j in 0..r {
            bwd[(j, col)] = uinv[(j, i)];
        }
    }

    let mut primary: BTreeMap<i128, Vec<u32>> = BTreeMap::new();
    for &d in canonical.factors() {
        for (p, e) in factorize(d) {
            primary.entry(p).or_default().push(e);
        }
    }
    for exps in primary.values_mut() {
        exps.sort();
    }

    let iso = IsoPair {
        src: source.clone(),
        dst: canonical.clone(),
        fwd,
        bwd,
    };
    debug_assert!(iso.validate().is_ok());
    CanonicalDecomposition {
        source,
        canonical,
        primary,
        iso,
    }
}

/// A pair of mutually inverse homomorphism matrices between two groups.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsoPair {
    pub src: FinAbGroup,
    pub dst: FinAbGroup,
    /// dst coordinates of src generators: dst_coords = fwd . src_coords.
    pub fwd: IntMat,
    pub bwd: IntMat,
}

impl IsoPair {
    pub fn identity(group: &FinAbGroup) -> Self {
        IsoPair {
            src: group.clone(),
            dst: group.clone(),
            fwd: IntMat::identity(group.rank()),
            bwd: IntMat::identity(group.rank()),
        }
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        assert_eq!(*x.group(), self.src);
        self.dst.element(self.fwd.mul_vec(x.coords()))
    }

    pub fn apply_inverse(&self, y: &GroupElement) -> GroupElement {
        assert_eq!(*y.group(), self.dst);
        self.src.element(self.bwd.mul_vec(y.coords()))
    }

    pub fn inverse(&self) -> IsoPair {
        IsoPair {
            src: self.dst.clone(),
            dst: self.src.clone(),
            fwd: self.bwd.clone(),
            bwd: self.fwd.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.src.order() != self.dst.order() {
            return Err(Error::Mismatch("isomorphism between unequal orders".into()));
        }
        let well_defined = |m: &IntMat, from: &FinAbGroup, to: &FinAbGroup| -> bool {
            (0..from.rank()).all(|j| {
                let d = from.factors()[j];
                (0..to.rank()).all(|i| (d * m[(i, j)]).rem_euclid(to.factors()[i]) == 0)
            })
        };
        if !well_defined(&self.fwd, &self.src, &self.dst)
            || !well_defined(&self.bwd, &self.dst, &self.src)
        {
            return Err(Error::InvalidInput("iso matrix not a homomorphism".into()));
        }
        let round_src = self.bwd.mul(&self.fwd);
        for j in 0..self.src.rank() {
            for i in 0..self.src.rank() {
                let expect = if i == j { 1 } else { 0 };
                if (round_src[(i, j)] - expect).rem_euclid(self.src.factors()[i]) != 0 {
                    return Err(Error::Identity("bwd . fwd is not the identity".into()));
                }
            }
        }
        let round_dst = self.fwd.mul(&self.bwd);
        for j in 0..self.dst.rank() {
            for i in 0..self.dst.rank() {
                let expect = if i == j { 1 } else { 0 };
                if (round_dst[(i, j)] - expect).rem_euclid(self.dst.factors()[i]) != 0 {
                    return Err(Error::Identity("fwd . bwd is not the identity".into()));
                }
            }
        }
        Ok(())
    }

    /// Composition `other . self` (apply self first).
    pub fn then(&self, other: &IsoPair) -> IsoPair {
        assert_eq!(self.dst, other.src);
        IsoPair {
            src: self.src.clone(),
            dst: other.dst.clone(),
            fwd: other.fwd.mul(&self.fwd),
            bwd: self.bwd.mul(&other.bwd),
        }
    }
}

/// Subgroup generated by the given elements, in canonical (invariant factor)
/// form, with the explicit embedding. Computed by Smith reduction of the
/// generator-and-relation lattice.
pub fn subgroup_from_generators(
    amb: &FinAbGroup,
    gens: &[GroupElement],
) -> Result<SubgroupEmbedding> {
    for g in gens {
        if g.group() != amb {
            return Err(Error::Mismatch("generator from a different group".into()));
        }
    }
    let r = amb.rank();
    if r == 0 {
        return Ok(SubgroupEmbedding::identity(amb));
    }
    // lattice spanned by generators and the relation lattice diag(n)
    let mut cols: Vec<Vec<i128>> = gens.iter().map(|g| g.coords().to_vec()).collect();
    for i in 0..r {
        let mut col = vec![0i128; r];
        col[i] = amb.factors()[i];
        cols.push(col);
    }
    let b = IntMat::from_cols(cols, r);
    let snf = smith_normal_form(&b);
    let diag = snf.diagonal();
    assert!(diag[..r].iter().all(|&d| d > 0));
    let uinv = inverse_unimodular(&snf.u);

    // basis of the lattice L = B Z^k: b_i = d_i * col_i(U^{-1})
    // relation lattice diag(n) expressed in that basis: C = diag(d)^{-1} U diag(n)
    let mut c = IntMat::zero(r, r);
    for i in 0..r {
        for j in 0..r {
            let num = snf.u[(i, j)] * amb.factors()[j];
            assert_eq!(num % diag[i], 0, "relation lattice not inside L");
            c[(i, j)] = num / diag[i];
        }
    }
    let snf2 = smith_normal_form(&c);
    let diag2 = snf2.diagonal();
    let u2inv = inverse_unimodular(&snf2.u);

    let kept: Vec<usize> = (0..r).filter(|&i| diag2[i] > 1).collect();
    let sub = FinAbGroup {
        factors: kept.iter().map(|&i| diag2[i]).collect(),
    };
    // embedding column for canonical generator i: B_L . U2^{-1} e_i
    let mut map = IntMat::zero(r, kept.len());
    for (col, &i) in kept.iter().enumerate() {
        let y = u2inv.col(i);
        for row in 0..r {
            let mut acc = 0i128;
            for t in 0..r {
                acc += uinv[(row, t)] * diag[t] * y[t];
            }
            map[(row, col)] = acc.rem_euclid(amb.factors()[row]);
        }
    }
    SubgroupEmbedding::new(sub, amb.clone(), map)
}

/// All characters of the ambient group vanishing on the image of the
/// embedding. The count always equals the index.
pub fn annihilator(emb: &SubgroupEmbedding) -> Result<Vec<Character>> {
    let amb = emb.amb();
    let r = amb.rank();
    let s = emb.sub().rank();
    if r == 0 {
        return Ok(vec![Character::trivial(amb)]);
    }
    let lcm = amb.factors().iter().fold(1i128, |acc, n| acc.lcm(n));
    // constraint per generator j: sum_i (lcm/n_i) map_{ij} xi_i = 0 (mod lcm)
    let mut w = IntMat::zero(s, r + s);
    for j in 0..s {
        for i in 0..r {
            w[(j, i)] = (lcm / amb.factors()[i]) * emb.map()[(i, j)];
        }
        w[(j, r + j)] = lcm;
    }
    let gens: Vec<GroupElement> = if s == 0 {
        // trivial subgroup: every character annihilates it
        (0..r)
            .map(|i| {
                let mut coords = vec![0i128; r];
                coords[i] = 1;
                amb.element(coords)
            })
            .collect()
    } else {
        kernel_basis(&w)
            .into_iter()
            .map(|v| amb.element(v[..r].to_vec()))
            .collect()
    };
    // the frequencies form a subgroup of the (isomorphic) character group
    let lattice = subgroup_from_generators(amb, &gens)?;
    let mut chars: Vec<Character> = lattice
        .image()
        .into_iter()
        .map(|xi| Character::new(amb, xi.coords().to_vec()))
        .collect();
    chars.sort_by(|a, b| a.frequency().cmp(b.frequency()));
    let expected = emb.index();
    if chars.len() as i128 != expected {
        return Err(Error::Identity(format!(
            "annihilator size {} != index {}",
            chars.len(),
            expected
        )));
    }
    Ok(chars)
}

/// Exact indicator of the subgroup via averaging its annihilator: returns 1
/// when `x` lies in the image and 0 otherwise, verifying on the way that the
/// character values cancel exactly as roots of unity.
pub fn indicator_via_annihilator(
    emb: &SubgroupEmbedding,
    chars: &[Character],
    x: &GroupElement,
) -> Result<Rat> {
    let values: Vec<TorusPoint> = chars.iter().map(|chi| chi.eval(x)).collect();
    if values.iter().all(|v| v.is_zero()) {
        return Ok(Rat::from_integer(1));
    }
    // chi -> chi(x) is a nontrivial character of the annihilator group, so its
    // values cover a cyclic subgroup of Q/Z uniformly and sum to zero
    let m = values.iter().map(|v| v.order()).max().unwrap();
    let mut counts: BTreeMap<TorusPoint, usize> = BTreeMap::new();
    for v in &values {
        *counts.entry(*v).or_default() += 1;
    }
    let expected = values.len() / m as usize;
    let uniform = counts.len() == m as usize && counts.values().all(|&c| c == expected);
    if !uniform {
        return Err(Error::Identity(
            "annihilator values do not cancel uniformly".into(),
        ));
    }
    if emb.contains(x) {
        return Err(Error::Identity(
            "nonzero character on a subgroup element".into(),
        ));
    }
    Ok(Rat::from_integer(0))
}

/// Trial-division factorization, smallest primes first.
pub fn factorize(mut n: i128) -> Vec<(i128, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2i128;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let e = i128::extended_gcd(&a.rem_euclid(m), &m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m))
}

/// Exact inverse of a unimodular integer matrix.
pub fn inverse_unimodular(m: &IntMat) -> IntMat {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut inv = IntMat::zero(n, n);
    for j in 0..n {
        let mut e = vec![0i128; n];
        e[j] = 1;
        let col = solve_diophantine(m, &e).expect("matrix is unimodular");
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    debug_assert_eq!(m.mul(&inv), IntMat::identity(n));
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn canonical_of_4_2_is_2_4() {
        let g = FinAbGroup::new(vec![4, 2]).unwrap();
        let dec = g.canonical_decomposition();
        assert_eq!(dec.invariant_factors(), &[2, 4]);
        assert_eq!(dec.primary[&2], vec![1, 2]);
    }

    #[test]
    fn canonical_of_6_4_is_2_12() {
        let g = FinAbGroup::new(vec![6, 4]).unwrap();
        let dec = g.canonical_decomposition();
        assert_eq!(dec.invariant_factors(), &[2, 12]);
        assert_eq!(dec.primary[&2], vec![1, 2]);
        assert_eq!(dec.primary[&3], vec![1]);
        dec.iso.validate().unwrap();
        // idempotence on the invariant-factor list
        let again = dec.canonical.canonical_decomposition();
        assert_eq!(again.invariant_factors(), dec.invariant_factors());
    }

    #[test]
    fn canonical_of_trivial_factor_list() {
        let g = FinAbGroup::new(vec![1]).unwrap();
        let dec = g.canonical_decomposition();
        assert_eq!(dec.invariant_factors().len(), 0);
        assert!(dec.canonical.is_trivial());
    }

    #[test]
    fn relations_presentation_rejects_infinite_groups() {
        let rels = IntMat::from_cols(vec![vec![2, 0]], 2);
        assert!(canonical_from_relations(2, &rels).is_err());
    }

    #[test]
    fn subgroup_of_z4_generated_by_2() {
        let g = FinAbGroup::cyclic(4);
        let emb = subgroup_from_generators(&g, &[g.element(vec![2])]).unwrap();
        assert_eq!(emb.sub().factors(), &[2]);
        assert_eq!(emb.map()[(0, 0)], 2);
        assert!(emb.contains(&g.element(vec![2])));
        assert!(!emb.contains(&g.element(vec![1])));
    }

    #[test]
    fn subgroup_of_z4xz2_with_two_generators() {
        let g = FinAbGroup::new(vec![4, 2]).unwrap();
        let gens = vec![g.element(vec![2, 0]), g.element(vec![0, 1])];
        let emb = subgroup_from_generators(&g, &gens).unwrap();
        assert_eq!(emb.sub().factors(), &[2, 2]);
        // enumerate: the image must be the 4 elements {0,2} x {0,1}
        let image: std::collections::HashSet<Vec<i128>> = emb
            .image()
            .into_iter()
            .map(|e| e.coords().to_vec())
            .collect();
        let expected: std::collections::HashSet<Vec<i128>> =
            [vec![0, 0], vec![2, 0], vec![0, 1], vec![2, 1]]
                .into_iter()
                .collect();
        assert_eq!(image, expected);
    }

    #[test]
    fn subgroup_with_no_generators_is_trivial() {
        let g = FinAbGroup::new(vec![4, 2]).unwrap();
        let emb = subgroup_from_generators(&g, &[]).unwrap();
        assert!(emb.sub().is_trivial());
        assert_eq!(emb.index(), 8);
    }

    #[test]
    fn annihilator_of_2z4_in_z4() {
        let g = FinAbGroup::cyclic(4);
        let emb = subgroup_from_generators(&g, &[g.element(vec![2])]).unwrap();
        let ann = annihilator(&emb).unwrap();
        let mut freqs: Vec<i128> = ann.iter().map(|c| c.frequency()[0]).collect();
        freqs.sort();
        assert_eq!(freqs, vec![0, 2]);
        // oracle: e(2 * 2x / 4) = 1 for all x in 2Z_4
        for x in [0i128, 2] {
            let chi = Character::new(&g, vec![2]);
            assert!(chi.eval(&g.element(vec![x])).is_zero());
        }
    }

    #[test]
    fn annihilator_of_full_group_is_trivial() {
        let g = FinAbGroup::new(vec![4, 2]).unwrap();
        let emb = SubgroupEmbedding::identity(&g);
        let ann = annihilator(&emb).unwrap();
        assert_eq!(ann.len(), 1);
        assert!(ann[0].is_trivial());
    }

    #[test]
    fn annihilator_of_trivial_subgroup_is_everything() {
        let g = FinAbGroup::new(vec![4, 2]).unwrap();
        let emb = subgroup_from_generators(&g, &[]).unwrap();
        let ann = annihilator(&emb).unwrap();
        assert_eq!(ann.len(), 8);
    }

    #[test]
    fn character_values() {
        let g = FinAbGroup::cyclic(4);
        let chi = Character::new(&g, vec![1]);
        assert_eq!(chi.eval(&g.element(vec![1])), TorusPoint::new(rat(1, 4)));
        let chi2 = Character::new(&g, vec![2]);
        assert!(chi2.eval(&g.element(vec![2])).is_zero());
        let g2 = FinAbGroup::new(vec![2, 3]).unwrap();
        let chi3 = Character::new(&g2, vec![1, 1]);
        assert_eq!(
            chi3.eval(&g2.element(vec![1, 2])),
            TorusPoint::new(rat(1, 6))
        );
    }

    #[test]
    fn indicator_identity_is_exact() {
        let g = FinAbGroup::new(vec![4, 2]).unwrap();
        let emb = subgroup_from_generators(&g, &[g.element(vec![2, 1])]).unwrap();
        let ann = annihilator(&emb).unwrap();
        for x in g.elements() {
            let ind = indicator_via_annihilator(&emb, &ann, &x).unwrap();
            let expected = if emb.contains(&x) { 1 } else { 0 };
            assert_eq!(ind, Rat::from_integer(expected));
        }
    }

    #[test]
    fn primary_refinement_round_trips() {
        let g = FinAbGroup::new(vec![12, 6]).unwrap();
        let (refined, iso) = g.primary_refinement();
        assert_eq!(refined.factors(), &[2i128, 4, 3, 3]);
        iso.validate().unwrap();
        for x in g.elements() {
            assert_eq!(iso.apply_inverse(&iso.apply(&x)), x);
        }
    }

    #[test]
    fn element_order_and_indexing() {
        let g = FinAbGroup::new(vec![4, 6]).unwrap();
        assert_eq!(g.element(vec![2, 3]).order(), 2);
        assert_eq!(g.element(vec![1, 1]).order(), 12);
        for (i, x) in g.elements().enumerate() {
            assert_eq!(g.index_of(&x), i);
        }
    }
}

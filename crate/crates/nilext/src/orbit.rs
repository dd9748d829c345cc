//! Linear orbits: a base point and one commuting generator per domain
//! coordinate, evaluated by reducing the product's translation part into the
//! lattice and reading the fiber polynomial at zero.
//!
//! `linearize` converts a torus-valued polynomial map `phi` that descends to
//! the domain into this form with generators `h_i = (d_{e_i} phi, e_i)`,
//! which satisfies `orbit(z) = phi(z) mod 1` at every domain point, exactly.

use crate::abgroup::{Character, FinAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::hpoint::HPoint;
use crate::matrix::IntMat;
use crate::polymap::{Poly, QPoly, RatVec, TPoly};
use crate::rat::Rat;
use crate::torus::TorusPoint;
use num_traits::Zero;

/// Value of an orbit at a domain point: a torus fiber point, or `Outside`
/// when the translation part cannot be reduced into the lattice (off the
/// section where the fiber function is defined; the evaluation rule maps
/// `Outside` to zero).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrbitValue {
    Inside(Vec<TorusPoint>),
    Outside,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearOrbit {
    domain: FinAbGroup,
    base: HPoint,
    gens: Vec<HPoint>,
    degree: u32,
}

impl LinearOrbit {
    pub fn new(domain: FinAbGroup, base: HPoint, gens: Vec<HPoint>, degree: u32) -> Result<Self> {
        let orbit = LinearOrbit {
            domain,
            base,
            gens,
            degree,
        };
        orbit.validate()?;
        Ok(orbit)
    }

    pub fn domain(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    pub fn gens(&self) -> &[HPoint] {
        &self.gens
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn fiber_dim(&self) -> usize {
        self.base.fiber_dim()
    }

    /// Checks the structural invariants: one generator per domain coordinate,
    /// all shapes consistent, generators pairwise commuting (exactly), and
    /// `g_i^{n_i}` in the lattice.
    pub fn validate(&self) -> Result<()> {
        if self.gens.len() != self.domain.rank() {
            return Err(Error::Mismatch(format!(
                "{} generators for a rank-{} domain",
                self.gens.len(),
                self.domain.rank()
            )));
        }
        let arity = self.base.arity();
        let d = self.base.fiber_dim();
        for g in &self.gens {
            if g.arity() != arity || g.fiber_dim() != d {
                return Err(Error::Mismatch("generator shape mismatch".into()));
            }
        }
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                if !self.gens[i].commutes_with(&self.gens[j]) {
                    return Err(Error::Identity(format!(
                        "generators {} and {} do not commute",
                        i, j
                    )));
                }
            }
        }
        for (i, g) in self.gens.iter().enumerate() {
            let n = self.domain.factors()[i];
            if !g.pow_int(n).in_lattice() {
                return Err(Error::Identity(format!(
                    "generator {} to the power {} is not a lattice point",
                    i, n
                )));
            }
        }
        Ok(())
    }

    /// Forms `base . prod_i g_i^{z_i}`, reduces the translation part to zero
    /// by a lattice translation if possible, and evaluates the fiber at the
    /// origin.
    pub fn eval(&self, z: &GroupElement) -> OrbitValue {
        assert_eq!(z.group(), &self.domain, "point outside the orbit domain");
        let mut point = self.base.clone();
        for (g, &c) in self.gens.iter().zip(z.coords()) {
            if c != 0 {
                point = point.mul(&g.pow_int(c));
            }
        }
        self.eval_point(&point)
    }

    fn eval_point(&self, point: &HPoint) -> OrbitValue {
        if !point.shift().iter().all(|q| q.is_integer()) {
            return OrbitValue::Outside;
        }
        // (f, m) (0, -m) = (f, 0); ev_0 reads f(0), the constant coefficient
        let d = self.fiber_dim();
        let zero_index = crate::polymap::MultiIndex(vec![0; point.arity()]);
        let constant = point.poly().coeff(&zero_index);
        let mut out = Vec::with_capacity(d);
        for q in &constant.0 {
            out.push(TorusPoint::new(*q));
        }
        OrbitValue::Inside(out)
    }

    /// Largest denominator across base and generators.
    pub fn max_denominator(&self) -> i128 {
        let mut m = self.base.max_denominator();
        for g in &self.gens {
            m = m.max(g.max_denominator());
        }
        m
    }

    /// Precomposition with a homomorphism `hom: new_domain -> domain` given
    /// by its integer matrix: the result satisfies
    /// `out.eval(z) = self.eval(hom . z)`.
    pub fn precompose(&self, hom: &IntMat, new_domain: &FinAbGroup) -> Result<LinearOrbit> {
        if hom.rows() != self.domain.rank() || hom.cols() != new_domain.rank() {
            return Err(Error::Mismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                hom.rows(),
                hom.cols(),
                self.domain.rank(),
                new_domain.rank()
            )));
        }
        // well-definedness of the homomorphism
        for j in 0..new_domain.rank() {
            let nj = new_domain.factors()[j];
            for i in 0..self.domain.rank() {
                if (nj * hom[(i, j)]).rem_euclid(self.domain.factors()[i]) != 0 {
                    return Err(Error::InvalidInput(
                        "matrix is not a homomorphism between the domains".into(),
                    ));
                }
            }
        }
        let mut gens = Vec::with_capacity(new_domain.rank());
        for j in 0..new_domain.rank() {
            let mut g = HPoint::identity(self.base.arity(), self.fiber_dim());
            for i in 0..self.domain.rank() {
                let e = hom[(i, j)].rem_euclid(self.domain.factors()[i]);
                if e != 0 {
                    g = g.mul(&self.gens[i].pow_int(e));
                }
            }
            gens.push(g);
        }
        LinearOrbit::new(new_domain.clone(), self.base.clone(), gens, self.degree)
    }

    /// Folds a translation of the domain into the base point:
    /// `out.eval(z) = self.eval(z - t)`.
    pub fn shift_domain(&self, t: &GroupElement) -> Result<LinearOrbit> {
        if t.group() != &self.domain {
            return Err(Error::Mismatch("shift from a different group".into()));
        }
        let mut base = self.base.clone();
        for (g, &c) in self.gens.iter().zip(t.coords()) {
            if c != 0 {
                base = base.mul(&g.pow_int(-c));
            }
        }
        LinearOrbit::new(self.domain.clone(), base, self.gens.clone(), self.degree)
    }

    /// Appends one fiber coordinate carrying the character `x -> xi . x`:
    /// the new coordinate of `eval(z)` is exactly `chi(z)`.
    pub fn twist_character(&self, chi: &Character) -> Result<LinearOrbit> {
        let d = self.fiber_dim();
        let grow = |h: &HPoint, extra: Rat| -> HPoint {
            let mut poly: QPoly = h.poly().map_coeffs(d + 1, |c| {
                let mut v = c.0.clone();
                v.push(Rat::zero());
                RatVec(v)
            });
            if !extra.is_zero() {
                let mut cvec = vec![Rat::zero(); d + 1];
                cvec[d] = extra;
                poly = poly.add(&Poly::constant(h.arity(), RatVec(cvec)));
            }
            HPoint::new(poly, h.shift().to_vec())
        };
        let base = grow(&self.base, Rat::zero());
        let mut gens = Vec::with_capacity(self.gens.len());
        for (i, g) in self.gens.iter().enumerate() {
            let n = self.domain.factors()[i];
            let freq = chi.frequency()[i];
            gens.push(grow(g, Rat::new(freq, n)));
        }
        LinearOrbit::new(self.domain.clone(), base, gens, self.degree)
    }
}

/// Linearization of a torus-valued polynomial map that descends to the
/// domain: base `(phi, 0)` and generators `h_i = (d_{e_i} phi, e_i)`.
pub fn linearize(phi: &TPoly, domain: &FinAbGroup) -> Result<LinearOrbit> {
    if phi.arity() != domain.rank() {
        return Err(Error::Mismatch(format!(
            "map arity {} != domain rank {}",
            phi.arity(),
            domain.rank()
        )));
    }
    if !phi.descends_to_quotient(domain.factors()) {
        return Err(Error::Precondition(
            "map is not well-defined on the domain".into(),
        ));
    }
    let lifted = phi.lift_to_rational();
    let r = domain.rank();
    let base = HPoint::fiber(lifted.clone());
    let mut gens = Vec::with_capacity(r);
    for i in 0..r {
        let mut e = vec![0i128; r];
        e[i] = 1;
        let diff = lifted.derivative_int(&e);
        let shift: Vec<Rat> = (0..r)
            .map(|j| {
                if j == i {
                    Rat::from_integer(1)
                } else {
                    Rat::zero()
                }
            })
            .collect();
        gens.push(HPoint::new(diff, shift));
    }
    LinearOrbit::new(domain.clone(), base, gens, lifted.total_degree())
}

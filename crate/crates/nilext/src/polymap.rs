//! Polynomial maps of bounded degree in the multi-binomial Taylor basis.
//!
//! A map `f(v) = sum_w a_w binom(v, w)` is stored as its nonzero coefficients
//! indexed by multi-indices `w` in graded-lexicographic order, where
//! `binom(v, w) = prod_i binom(v_i, w_i)`. The shift `f(. + x)` is a
//! Vandermonde convolution of coefficients and stays exact; the discrete
//! derivative `f(. + x) - f` strictly drops total degree.
//!
//! Coefficients can live in `Q^d` (orbit fibers), `T^d` (phase polynomials)
//! or `Z_m` (finite targets). Shifts along rational vectors are only defined
//! for rational coefficient spaces; integer shifts work everywhere because
//! `binom(n, j)` is an integer.

use crate::rat::{binom_int, binom_rat, check_denominator, Rat};
use crate::torus::TorusPoint;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector with graded-lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All multi-indices of the given arity with total degree at most `k`,
/// in graded-lex order.
pub fn multi_indices(arity: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(arity: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() == arity {
            out.push(MultiIndex(prefix.clone()));
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(arity, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    for total in 0..=k {
        let mut layer = Vec::new();
        rec(arity, total, &mut prefix, &mut layer);
        layer.retain(|w: &MultiIndex| w.total() == total);
        layer.sort();
        out.extend(layer);
    }
    out
}

/// Coefficient space of a polynomial map: an abelian group with integer
/// scalar action. `Shape` pins the runtime type (dimension or modulus).
pub trait Coeff: Clone + Eq + fmt::Debug {
    type Shape: Clone + Eq + fmt::Debug;
    fn zero(shape: &Self::Shape) -> Self;
    fn shape(&self) -> Self::Shape;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, n: i128) -> Self;
}

/// Coefficient spaces that are rational vector spaces.
pub trait RatCoeff: Coeff {
    fn mul_rat(&self, q: &Rat) -> Self;
}

/// `Q^d` coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct RatVec(pub Vec<Rat>);

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", crate::rat::format_rat(&self.0[0]))
        } else {
            let parts: Vec<String> = self.0.iter().map(crate::rat::format_rat).collect();
            write!(f, "[{}]", parts.join(", "))
        }
    }
}

impl Coeff for RatVec {
    type Shape = usize;
    fn zero(shape: &usize) -> Self {
        RatVec(vec![Rat::zero(); *shape])
    }
    fn shape(&self) -> usize {
        self.0.len()
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|q| q.is_zero())
    }
    fn add(&self, other: &Self) -> Self {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
    fn neg(&self) -> Self {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
    fn mul_int(&self, n: i128) -> Self {
        let n = Rat::from_integer(n);
        RatVec(self.0.iter().map(|a| a * n).collect())
    }
}

impl RatCoeff for RatVec {
    fn mul_rat(&self, q: &Rat) -> Self {
        RatVec(
            self.0
                .iter()
                .map(|a| {
                    let v = a * q;
                    check_denominator(&v);
                    v
                })
                .collect(),
        )
    }
}

impl RatVec {
    pub fn scalar(q: Rat) -> Self {
        RatVec(vec![q])
    }
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|q| q.is_integer())
    }
}

/// `T^d` coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusVec(pub Vec<TorusPoint>);

impl fmt::Debug for TorusVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
            write!(f, "[{}]", parts.join(", "))
        }
    }
}

impl Coeff for TorusVec {
    type Shape = usize;
    fn zero(shape: &usize) -> Self {
        TorusVec(vec![TorusPoint::zero(); *shape])
    }
    fn shape(&self) -> usize {
        self.0.len()
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|t| t.is_zero())
    }
    fn add(&self, other: &Self) -> Self {
        TorusVec(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }
    fn neg(&self) -> Self {
        TorusVec(self.0.iter().map(|a| -*a).collect())
    }
    fn mul_int(&self, n: i128) -> Self {
        TorusVec(self.0.iter().map(|a| a.mul_int(n)).collect())
    }
}

/// `Z_m` coefficients (the modulus rides along in every value).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZmEl {
    pub value: i128,
    pub modulus: i128,
}

impl ZmEl {
    pub fn new(value: i128, modulus: i128) -> Self {
        assert!(modulus >= 1);
        ZmEl {
            value: value.rem_euclid(modulus),
            modulus,
        }
    }
}

impl Coeff for ZmEl {
    type Shape = i128;
    fn zero(shape: &i128) -> Self {
        ZmEl::new(0, *shape)
    }
    fn shape(&self) -> i128 {
        self.modulus
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        ZmEl::new(self.value + other.value, self.modulus)
    }
    fn neg(&self) -> Self {
        ZmEl::new(-self.value, self.modulus)
    }
    fn mul_int(&self, n: i128) -> Self {
        ZmEl::new(self.value * n.rem_euclid(self.modulus), self.modulus)
    }
}

/// Polynomial map in the multi-binomial basis; only nonzero coefficients are
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<C: Coeff> {
    arity: usize,
    shape: C::Shape,
    coeffs: BTreeMap<MultiIndex, C>,
}

pub type QPoly = Poly<RatVec>;
pub type TPoly = Poly<TorusVec>;
pub type ZmPoly = Poly<ZmEl>;

impl<C: Coeff> Poly<C> {
    pub fn zero(arity: usize, shape: C::Shape) -> Self {
        Poly {
            arity,
            shape,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: C) -> Self {
        let shape = c.shape();
        let mut p: Poly<C> = Poly::zero(arity, shape);
        p.set_coeff(MultiIndex(vec![0; arity]), c);
        p
    }

    pub fn from_coeffs<I: IntoIterator<Item = (MultiIndex, C)>>(
        arity: usize,
        shape: C::Shape,
        coeffs: I,
    ) -> Self {
        let mut p: Poly<C> = Poly::zero(arity, shape);
        for (w, c) in coeffs {
            assert_eq!(w.arity(), arity, "multi-index arity mismatch");
            let cur = p.coeff(&w);
            p.set_coeff(w, cur.add(&c));
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn shape(&self) -> &C::Shape {
        &self.shape
    }

    pub fn coeff(&self, w: &MultiIndex) -> C {
        self.coeffs
            .get(w)
            .cloned()
            .unwrap_or_else(|| C::zero(&self.shape))
    }

    pub fn set_coeff(&mut self, w: MultiIndex, c: C) {
        assert_eq!(w.arity(), self.arity);
        if c.is_zero() {
            self.coeffs.remove(&w);
        } else {
            self.coeffs.insert(w, c);
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree of the stored coefficients (0 for the zero map).
    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|w| w.total()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        assert_eq!(self.shape, other.shape);
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            let cur = out.coeff(w);
            out.set_coeff(w.clone(), cur.add(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out: Poly<C> = Poly::zero(self.arity, self.shape.clone());
        for (w, c) in &self.coeffs {
            out.set_coeff(w.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale_int(&self, n: i128) -> Self {
        let mut out: Poly<C> = Poly::zero(self.arity, self.shape.clone());
        for (w, c) in &self.coeffs {
            out.set_coeff(w.clone(), c.mul_int(n));
        }
        out
    }

    /// Exact evaluation at an integer point.
    pub fn eval_int(&self, v: &[i128]) -> C {
        assert_eq!(v.len(), self.arity);
        let mut acc = C::zero(&self.shape);
        for (w, c) in &self.coeffs {
            let mut scalar: i128 = 1;
            for (i, &e) in w.0.iter().enumerate() {
                scalar *= binom_int(v[i], e);
                if scalar == 0 {
                    break;
                }
            }
            if scalar != 0 {
                acc = acc.add(&c.mul_int(scalar));
            }
        }
        acc
    }

    /// Coefficients of `v -> f(v + x)` for an integer shift; exact for every
    /// coefficient space.
    pub fn shift_int(&self, x: &[i128]) -> Self {
        assert_eq!(x.len(), self.arity);
        let mut out: Poly<C> = Poly::zero(self.arity, self.shape.clone());
        for (w, c) in &self.coeffs {
            for u in sub_indices(w) {
                let mut scalar: i128 = 1;
                for i in 0..self.arity {
                    scalar *= binom_int(x[i], w.0[i] - u.0[i]);
                    if scalar == 0 {
                        break;
                    }
                }
                if scalar != 0 {
                    let cur = out.coeff(&u);
                    out.set_coeff(u, cur.add(&c.mul_int(scalar)));
                }
            }
        }
        out
    }

    /// Discrete derivative `f(. + x) - f` along an integer vector.
    pub fn derivative_int(&self, x: &[i128]) -> Self {
        self.shift_int(x).sub(self)
    }

    /// True iff the map is `n_i`-periodic in every variable, decided by exact
    /// coefficient comparison.
    pub fn descends_to_quotient(&self, moduli: &[i128]) -> bool {
        assert_eq!(moduli.len(), self.arity);
        for (i, &n) in moduli.iter().enumerate() {
            let mut x = vec![0i128; self.arity];
            x[i] = n;
            if self.shift_int(&x) != *self {
                return false;
            }
        }
        true
    }

    /// Maps coefficients into another space, preserving support.
    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, shape: D::Shape, f: F) -> Poly<D> {
        let mut out: Poly<D> = Poly::zero(self.arity, shape);
        for (w, c) in &self.coeffs {
            let cur = out.coeff(w);
            out.set_coeff(w.clone(), cur.add(&f(c)));
        }
        out
    }
}

impl<C: RatCoeff> Poly<C> {
    pub fn scale_rat(&self, q: &Rat) -> Self {
        let mut out: Poly<C> = Poly::zero(self.arity, self.shape.clone());
        for (w, c) in &self.coeffs {
            out.set_coeff(w.clone(), c.mul_rat(q));
        }
        out
    }

    /// Exact evaluation at a rational point via generalized binomials.
    pub fn eval_rat(&self, v: &[Rat]) -> C {
        assert_eq!(v.len(), self.arity);
        let mut acc = C::zero(&self.shape);
        for (w, c) in &self.coeffs {
            let mut scalar = Rat::from_integer(1);
            for (i, &e) in w.0.iter().enumerate() {
                scalar *= binom_rat(v[i], e);
            }
            acc = acc.add(&c.mul_rat(&scalar));
        }
        acc
    }

    /// Coefficients of `v -> f(v + x)` for a rational shift.
    pub fn shift_rat(&self, x: &[Rat]) -> Self {
        assert_eq!(x.len(), self.arity);
        let mut out: Poly<C> = Poly::zero(self.arity, self.shape.clone());
        for (w, c) in &self.coeffs {
            for u in sub_indices(w) {
                let mut scalar = Rat::from_integer(1);
                for i in 0..self.arity {
                    scalar *= binom_rat(x[i], w.0[i] - u.0[i]);
                }
                if !scalar.is_zero() {
                    let cur = out.coeff(&u);
                    out.set_coeff(u, cur.add(&c.mul_rat(&scalar)));
                }
            }
        }
        out
    }

    pub fn derivative_rat(&self, x: &[Rat]) -> Self {
        self.shift_rat(x).sub(self)
    }
}

impl Poly<RatVec> {
    /// True iff every stored coefficient is an integer vector.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integral())
    }

    /// Reduces coefficients mod 1 into a torus-valued map.
    pub fn reduce_mod1(&self) -> Poly<TorusVec> {
        let d = self.shape;
        self.map_coeffs(d, |c| {
            TorusVec(c.0.iter().map(|q| TorusPoint::new(*q)).collect())
        })
    }
}

impl Poly<TorusVec> {
    /// Lifts each torus coefficient to its canonical rational representative
    /// in `[0, 1)`.
    pub fn lift_to_rational(&self) -> Poly<RatVec> {
        let d = self.shape;
        self.map_coeffs(d, |c| RatVec(c.0.iter().map(|t| t.value()).collect()))
    }
}

/// Verifies the periodicity bound for maps into `Z_m` of degree at most `k`:
/// `f(v + m k! e_i) = f(v)` for every `i`. Holds for every valid input.
pub fn check_period_bound(f: &Poly<ZmEl>, k: u32) -> bool {
    let m = *f.shape();
    let factorial: i128 = (1..=k as i128).product::<i128>().max(1);
    let period = m * factorial;
    let moduli = vec![period; f.arity()];
    f.descends_to_quotient(&moduli)
}

/// All multi-indices `u <= w` componentwise.
fn sub_indices(w: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex(Vec::with_capacity(w.arity()))];
    for &e in &w.0 {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for prefix in &out {
            for v in 0..=e {
                let mut p = prefix.0.clone();
                p.push(v);
                next.push(MultiIndex(p));
            }
        }
        out = next;
    }
    out
}

/// Product of two scalar rational polynomials in the binomial basis, via the
/// per-coordinate expansion
/// `binom(x,a) binom(x,b) = sum_c binom(c,a) binom(a, a+b-c) binom(x,c)`.
pub fn mul_scalar(a: &Poly<RatVec>, b: &Poly<RatVec>) -> Poly<RatVec> {
    assert_eq!(a.arity(), b.arity());
    assert_eq!(*a.shape(), 1, "scalar polynomials only");
    assert_eq!(*b.shape(), 1, "scalar polynomials only");
    let arity = a.arity();
    let mut out: Poly<RatVec> = Poly::zero(arity, 1usize);
    for (wa, ca) in a.coeffs() {
        for (wb, cb) in b.coeffs() {
            let scalar = ca.0[0] * cb.0[0];
            if scalar.is_zero() {
                continue;
            }
            // per-coordinate expansions, then their cartesian product
            let mut terms: Vec<(Vec<u32>, i128)> = vec![(Vec::new(), 1)];
            for i in 0..arity {
                let pieces = binom_product_1d(wa.0[i], wb.0[i]);
                let mut next = Vec::with_capacity(terms.len() * pieces.len());
                for (prefix, coef) in &terms {
                    for &(e, m) in &pieces {
                        let mut p = prefix.clone();
                        p.push(e);
                        next.push((p, coef * m));
                    }
                }
                terms = next;
            }
            for (exps, m) in terms {
                let w = MultiIndex(exps);
                let cur = out.coeff(&w);
                out.set_coeff(
                    w,
                    cur.add(&RatVec::scalar(scalar * Rat::from_integer(m))),
                );
            }
        }
    }
    out
}

/// 1-D expansion `binom(x,a) binom(x,b) = sum (c, m) m binom(x,c)`.
fn binom_product_1d(a: u32, b: u32) -> Vec<(u32, i128)> {
    if a == 0 {
        return vec![(b, 1)];
    }
    if b == 0 {
        return vec![(a, 1)];
    }
    (a.max(b)..=a + b)
        .map(|c| {
            let m = binom_int(c as i128, a) * binom_int(a as i128, a + b - c);
            (c, m)
        })
        .filter(|&(_, m)| m != 0)
        .collect()
}

/// Scalar polynomial `v -> binom(l(v), j)` where `l(v) = offset + sum_i m_i v_i`
/// is an integer affine form.
pub fn binom_of_affine_form(coeffs: &[i128], offset: i128, j: u32) -> Poly<RatVec> {
    let arity = coeffs.len();
    // the affine form itself, in the binomial basis (degree <= 1)
    let mut ell: Poly<RatVec> = Poly::zero(arity, 1usize);
    ell.set_coeff(
        MultiIndex(vec![0; arity]),
        RatVec::scalar(Rat::from_integer(offset)),
    );
    for (i, &m) in coeffs.iter().enumerate() {
        let mut w = vec![0u32; arity];
        w[i] = 1;
        ell.set_coeff(MultiIndex(w), RatVec::scalar(Rat::from_integer(m)));
    }
    let mut acc = Poly::constant(arity, RatVec::scalar(Rat::from_integer(1)));
    for step in 0..j {
        let shifted = ell.add(&Poly::constant(
            arity,
            RatVec::scalar(Rat::from_integer(-(step as i128))),
        ));
        acc = mul_scalar(&acc, &shifted).scale_rat(&Rat::new(1, step as i128 + 1));
    }
    acc
}

/// Precomposition with an integer affine map: `v -> f(E v + t)`. The expansion
/// coefficients of `binom(E v + t, w)` are integers because integer-valued
/// polynomials are exactly the integer span of multi-binomials; this keeps the
/// operation well-defined for torus and finite coefficient spaces.
pub fn compose_affine<C: Coeff>(f: &Poly<C>, e: &crate::matrix::IntMat, t: &[i128]) -> Poly<C> {
    assert_eq!(e.rows(), f.arity(), "matrix rows must match poly arity");
    assert_eq!(t.len(), f.arity());
    let new_arity = e.cols();
    let mut out: Poly<C> = Poly::zero(new_arity, f.shape().clone());
    for (w, c) in f.coeffs() {
        // prod_i binom(l_i(v), w_i) as a scalar polynomial with integer coeffs
        let mut scalar = Poly::constant(new_arity, RatVec::scalar(Rat::from_integer(1)));
        for i in 0..f.arity() {
            if w.0[i] == 0 {
                continue;
            }
            let row: Vec<i128> = (0..new_arity).map(|j| e[(i, j)]).collect();
            scalar = mul_scalar(&scalar, &binom_of_affine_form(&row, t[i], w.0[i]));
        }
        for (u, s) in scalar.coeffs() {
            let q = s.0[0];
            assert!(q.is_integer(), "integer-valued expansion must be integral");
            let cur = out.coeff(u);
            out.set_coeff(u.clone(), cur.add(&c.mul_int(*q.numer())));
        }
    }
    out
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(w, c)| format!("{:?}*C(v,{:?})", c, w.0))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

//! Gowers uniformity norms and correlations of complex functions on finite
//! abelian groups.
//!
//! Norm convention on product groups: all expectations are uniform over the
//! full product, Fourier characters are `e(sum_i xi_i x_i / n_i)`, and
//! `f_hat(xi) = E_x f(x) e(-xi . x)`. Under this normalization
//! `||f||_{U^2}^4 = sum_xi |f_hat(xi)|^4` and Parseval reads
//! `sum_xi |f_hat(xi)|^2 = E|f|^2`.
//!
//! Three evaluation routes are kept deliberately independent so they can
//! cross-check each other: the `U^d` recursion over multiplicative
//! derivatives (which bottoms out in the DFT identity for `d >= 3`), the
//! direct `U^2` double sum, and the naive `|Z|^(d+1)` summation.

use crate::abgroup::{Character, FinAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::polymap::TPoly;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

pub type C64 = Complex<f64>;

/// Kahan-compensated complex accumulator; summation order is the iteration
/// order, so results are deterministic.
#[derive(Clone, Copy, Default)]
pub struct KahanC64 {
    sum: C64,
    comp: C64,
}

impl KahanC64 {
    pub fn new() -> Self {
        KahanC64 {
            sum: C64::new(0.0, 0.0),
            comp: C64::new(0.0, 0.0),
        }
    }

    pub fn add(&mut self, value: C64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> C64 {
        self.sum
    }
}

#[derive(Clone, Copy, Default)]
pub struct KahanF64 {
    sum: f64,
    comp: f64,
}

impl KahanF64 {
    pub fn add(&mut self, value: f64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}

/// Complex function on a finite abelian group, tabulated in row-major order.
#[derive(Clone, Debug)]
pub struct GroupFunction {
    group: FinAbGroup,
    values: Vec<C64>,
}

impl GroupFunction {
    pub fn new(group: FinAbGroup, values: Vec<C64>) -> Result<Self> {
        if values.len() as i128 != group.order() {
            return Err(Error::Mismatch(format!(
                "function table has {} entries for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        Ok(GroupFunction { group, values })
    }

    pub fn from_fn<F: FnMut(&GroupElement) -> C64>(group: &FinAbGroup, mut f: F) -> Self {
        let values = group.elements().map(|x| f(&x)).collect();
        GroupFunction {
            group: group.clone(),
            values,
        }
    }

    pub fn constant(group: &FinAbGroup, value: C64) -> Self {
        GroupFunction {
            group: group.clone(),
            values: vec![value; group.order() as usize],
        }
    }

    /// `e(chi(x))` for a character.
    pub fn character(chi: &Character, group: &FinAbGroup) -> Self {
        GroupFunction::from_fn(group, |x| chi.eval(x).exp())
    }

    /// Phase function `e(P(x))` of a torus-valued polynomial map tabulated on
    /// the group (one fiber component).
    pub fn phase(group: &FinAbGroup, p: &TPoly) -> Result<Self> {
        if p.arity() != group.rank() {
            return Err(Error::Mismatch("polynomial arity != group rank".into()));
        }
        if !p.descends_to_quotient(group.factors()) {
            return Err(Error::Precondition(
                "phase polynomial does not descend to the group".into(),
            ));
        }
        Ok(GroupFunction::from_fn(group, |x| {
            let v = p.eval_int(x.coords());
            v.0.iter().map(|t| t.exp()).product()
        }))
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn at(&self, idx: usize) -> C64 {
        self.values[idx]
    }

    pub fn value(&self, x: &GroupElement) -> C64 {
        self.values[self.group.index_of(x)]
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Validates the claimed 1-boundedness up to the documented slack.
    pub fn check_one_bounded(&self) -> Result<()> {
        let m = self.max_modulus();
        if m > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!(
                "function claimed 1-bounded but max modulus is {}",
                m
            )));
        }
        Ok(())
    }

    pub fn conj(&self) -> GroupFunction {
        GroupFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> GroupFunction {
        GroupFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &GroupFunction) -> Result<GroupFunction> {
        if self.group != other.group {
            return Err(Error::Mismatch("functions on different groups".into()));
        }
        Ok(GroupFunction {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul_pointwise(&self, other: &GroupFunction) -> Result<GroupFunction> {
        if self.group != other.group {
            return Err(Error::Mismatch("functions on different groups".into()));
        }
        Ok(GroupFunction {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Multiplicative derivative `x -> f(x + h) conj(f(x))`.
    pub fn derivative(&self, shift: &[usize]) -> GroupFunction {
        let values = (0..self.values.len())
            .map(|i| self.values[shift[i]] * self.values[i].conj())
            .collect();
        GroupFunction {
            group: self.group.clone(),
            values,
        }
    }

    pub fn mean(&self) -> C64 {
        let mut acc = KahanC64::new();
        for z in &self.values {
            acc.add(*z);
        }
        acc.total() / self.values.len() as f64
    }
}

/// Permutation of row-major indices given by adding `h`: pure mixed-radix
/// index arithmetic, no element materialization.
pub fn shift_permutation(group: &FinAbGroup, h: &GroupElement) -> Vec<usize> {
    let factors = group.factors();
    let rank = factors.len();
    let total = group.order() as usize;
    let h_coords = h.coords();
    let mut out = vec![0usize; total];
    let mut coords = vec![0i128; rank];
    for (idx, slot) in out.iter_mut().enumerate() {
        let mut target: i128 = 0;
        for i in 0..rank {
            let c = (coords[i] + h_coords[i]) % factors[i];
            target = target * factors[i] + c;
        }
        *slot = target as usize;
        // increment the row-major counter (last coordinate fastest)
        for i in (0..rank).rev() {
            coords[i] += 1;
            if coords[i] < factors[i] {
                break;
            }
            coords[i] = 0;
        }
        let _ = idx;
    }
    out
}

/// `E_x f(x) conj(g(x))`.
pub fn correlation(f: &GroupFunction, g: &GroupFunction) -> Result<C64> {
    if f.group != g.group {
        return Err(Error::Mismatch("correlation across different groups".into()));
    }
    let mut acc = KahanC64::new();
    for (a, b) in f.values.iter().zip(&g.values) {
        acc.add(a * b.conj());
    }
    Ok(acc.total() / f.values.len() as f64)
}

/// Multidimensional DFT with `f_hat(xi) = E_x f(x) e(-xi . x)`, one
/// mixed-radix transform per coordinate.
pub fn dft(f: &GroupFunction) -> Vec<C64> {
    let group = &f.group;
    let total = f.values.len();
    let mut data = f.values.clone();
    let mut planner = FftPlanner::<f64>::new();
    let rank = group.rank();
    for axis in 0..rank {
        let n = group.factors()[axis] as usize;
        if n == 1 {
            continue;
        }
        let stride: usize = group.factors()[axis + 1..]
            .iter()
            .map(|&x| x as usize)
            .product();
        let fft = planner.plan_fft_forward(n);
        let mut line = vec![C64::new(0.0, 0.0); n];
        let block = stride * n;
        for base_block in (0..total).step_by(block.max(1)) {
            for offset in 0..stride {
                let start = base_block + offset;
                for t in 0..n {
                    line[t] = data[start + t * stride];
                }
                fft.process(&mut line);
                for t in 0..n {
                    data[start + t * stride] = line[t];
                }
            }
        }
    }
    let scale = 1.0 / total as f64;
    for z in &mut data {
        *z *= scale;
    }
    data
}

/// `U^2` norm through the Fourier identity `||f||_{U^2}^4 = sum |f_hat|^4`.
pub fn gowers_u2_fourier(f: &GroupFunction) -> f64 {
    let spectrum = dft(f);
    let mut acc = KahanF64::default();
    for z in &spectrum {
        let m2 = z.norm_sqr();
        acc.add(m2 * m2);
    }
    acc.total().max(0.0).powf(0.25)
}

/// `||f||_{U^d}^{2^d}` by the derivative recursion; the base `d = 2` goes
/// through the DFT identity.
fn norm_pow_recursive(f: &GroupFunction, d: u32) -> f64 {
    if d == 2 {
        let u = gowers_u2_fourier(f);
        return u.powi(4);
    }
    let group = f.group.clone();
    let mut acc = KahanF64::default();
    for h in group.elements() {
        let perm = shift_permutation(&group, &h);
        let derived = f.derivative(&perm);
        acc.add(norm_pow_recursive(&derived, d - 1));
    }
    acc.total() / group.order() as f64
}

/// Gowers uniformity norm `||f||_{U^d}` by the recursion
/// `||f||_{U^d}^{2^d} = E_h ||Delta_h f||_{U^{d-1}}^{2^{d-1}}` with base
/// `||f||_{U^1} = |E f|`. The `d = 2` case is evaluated as the direct double
/// sum so that it stays independent of the Fourier route.
pub fn gowers_norm(f: &GroupFunction, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidInput("U^0 is not defined".into()));
    }
    if d == 1 {
        return Ok(f.mean().norm());
    }
    if d == 2 {
        // E_h |E_x f(x+h) conj f(x)|^2
        let group = f.group.clone();
        let mut acc = KahanF64::default();
        for h in group.elements() {
            let perm = shift_permutation(&group, &h);
            let mut inner = KahanC64::new();
            for i in 0..f.values.len() {
                inner.add(f.values[perm[i]] * f.values[i].conj());
            }
            let m = inner.total() / f.values.len() as f64;
            acc.add(m.norm_sqr());
        }
        let pow4 = acc.total() / group.order() as f64;
        return Ok(pow4.max(0.0).powf(0.25));
    }
    let pow = norm_pow_recursive(f, d);
    Ok(pow.max(0.0).powf(1.0 / f64::from(1u32 << d)))
}

/// Naive `|Z|^(d+1)` summation of the defining average, an independent oracle
/// for the recursive route.
pub fn gowers_norm_naive(f: &GroupFunction, d: u32, budget: u128) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidInput("U^0 is not defined".into()));
    }
    let n = f.values.len();
    let cost = (n as u128).pow(d + 1);
    if cost > budget {
        return Err(Error::Budget {
            what: format!("naive U^{} summation on order {}", d, n),
            needed: cost,
            budget,
        });
    }
    let group = &f.group;
    // addition table (n^2 <= budget so this fits)
    let elements: Vec<GroupElement> = group.elements().collect();
    let mut add = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            add[i * n + j] = group.index_of(&elements[i].add(&elements[j]));
        }
    }
    let mut acc = KahanC64::new();
    let mut shifts = vec![0usize; d as usize];
    loop {
        for x in 0..n {
            let mut term = C64::new(1.0, 0.0);
            for omega in 0..1usize << d {
                let mut idx = x;
                for (b, &h) in shifts.iter().enumerate() {
                    if omega >> b & 1 == 1 {
                        idx = add[idx * n + h];
                    }
                }
                let v = f.values[idx];
                term *= if (omega.count_ones()) % 2 == 1 {
                    v.conj()
                } else {
                    v
                };
            }
            acc.add(term);
        }
        // next shift tuple
        let mut i = 0;
        loop {
            if i == shifts.len() {
                let avg = acc.total() / (n as f64).powi(d as i32 + 1);
                return Ok(avg.re.max(0.0).powf(1.0 / f64::from(1u32 << d)));
            }
            shifts[i] += 1;
            if shifts[i] < n {
                break;
            }
            shifts[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymap::{MultiIndex, Poly, TorusVec};
    use crate::rat::rat;
    use crate::torus::TorusPoint;
    use rand::{Rng, SeedableRng};

    const TOL: f64 = 1e-9;
    const BUDGET: u128 = 1 << 28;

    fn z(n: i128) -> FinAbGroup {
        FinAbGroup::cyclic(n)
    }

    #[test]
    fn constant_function_has_unit_norms() {
        let f = GroupFunction::constant(&z(12), C64::new(1.0, 0.0));
        for d in 1..=4 {
            assert!((gowers_norm(&f, d).unwrap() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn character_has_zero_mean_and_unit_u2() {
        let g = z(16);
        let chi = Character::new(&g, vec![1]);
        let f = GroupFunction::character(&chi, &g);
        assert!(gowers_norm(&f, 1).unwrap() < TOL);
        assert!((gowers_norm(&f, 2).unwrap() - 1.0).abs() < TOL);
        assert!((gowers_u2_fourier(&f) - 1.0).abs() < TOL);
    }

    #[test]
    fn quadratic_phase_on_z20_saturates_u3_not_u2() {
        // e(binom(x,2)/5) on Z_20: degree-2 phase polynomial
        let g = z(20);
        let p: TPoly = Poly::from_coeffs(
            1,
            1usize,
            [(MultiIndex(vec![2]), TorusVec(vec![TorusPoint::new(rat(1, 5))]))],
        );
        let f = GroupFunction::phase(&g, &p).unwrap();
        let u3 = gowers_norm(&f, 3).unwrap();
        let u2 = gowers_norm(&f, 2).unwrap();
        assert!((u3 - 1.0).abs() < TOL, "u3 = {}", u3);
        assert!(u2 < 1.0 - 1e-3, "u2 = {}", u2);
        // cross-check both against the naive oracle
        assert!((gowers_norm_naive(&f, 3, BUDGET).unwrap() - u3).abs() < TOL);
        assert!((gowers_norm_naive(&f, 2, BUDGET).unwrap() - u2).abs() < TOL);
    }

    #[test]
    fn two_character_average_has_explicit_u2() {
        // f = (chi_a + chi_b)/2: two Fourier coefficients of 1/2, so
        // U^2 = (2 (1/2)^4)^(1/4) = 2^(-3/4)
        let g = z(8);
        let fa = GroupFunction::character(&Character::new(&g, vec![1]), &g);
        let fb = GroupFunction::character(&Character::new(&g, vec![3]), &g);
        let f = fa.add(&fb).unwrap().scale(0.5);
        let expected = 2f64.powf(-0.75);
        assert!((gowers_u2_fourier(&f) - expected).abs() < TOL);
        assert!((gowers_norm(&f, 2).unwrap() - expected).abs() < TOL);
    }

    #[test]
    fn fourier_and_direct_u2_agree_on_random_data() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let g = z(256);
        let f = GroupFunction::from_fn(&g, |_| {
            if rng.gen::<bool>() {
                C64::new(1.0, 0.0)
            } else {
                C64::new(-1.0, 0.0)
            }
        });
        let a = gowers_u2_fourier(&f);
        let b = gowers_norm(&f, 2).unwrap();
        assert!((a - b).abs() < TOL, "{} vs {}", a, b);
    }

    #[test]
    fn parseval_holds_to_machine_precision() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let g = FinAbGroup::new(vec![6, 5]).unwrap();
        let f = GroupFunction::from_fn(&g, |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let spectrum = dft(&f);
        let lhs: f64 = spectrum.iter().map(|z| z.norm_sqr()).sum();
        let rhs: f64 =
            f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / f.values().len() as f64;
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn dft_of_character_is_a_delta() {
        let g = FinAbGroup::new(vec![4, 3]).unwrap();
        let chi = Character::new(&g, vec![1, 2]);
        let f = GroupFunction::character(&chi, &g);
        let spectrum = dft(&f);
        let idx = g.index_of(&g.element(vec![1, 2]));
        for (i, z) in spectrum.iter().enumerate() {
            let expect = if i == idx { 1.0 } else { 0.0 };
            assert!((z.norm() - expect).abs() < 1e-12, "xi index {}", i);
        }
    }

    #[test]
    fn correlation_examples() {
        let g = z(9);
        let chi1 = GroupFunction::character(&Character::new(&g, vec![1]), &g);
        let chi2 = GroupFunction::character(&Character::new(&g, vec![2]), &g);
        // unimodular self-correlation is 1
        let c = correlation(&chi1, &chi1).unwrap();
        assert!((c - C64::new(1.0, 0.0)).norm() < TOL);
        // distinct characters are orthogonal
        assert!(correlation(&chi1, &chi2).unwrap().norm() < TOL);
    }

    #[test]
    fn correlation_with_noise_scales() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let g = z(64);
        let chi = GroupFunction::character(&Character::new(&g, vec![7]), &g);
        let noise = GroupFunction::from_fn(&g, |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let f = chi.add(&noise.scale(0.5)).unwrap();
        let c = correlation(&f, &chi).unwrap();
        // oracle: direct sum
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..64 {
            acc += f.at(i) * chi.at(i).conj();
        }
        acc /= 64.0;
        assert!((c - acc).norm() < 1e-12);
        assert!((c.re - 1.0).abs() < 0.3);
    }

    #[test]
    fn monotonicity_in_d() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let g = z(24);
            let f = GroupFunction::from_fn(&g, |_| {
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = rng.gen_range(0.0..1.0);
                C64::new(r * theta.cos(), r * theta.sin())
            });
            let mut prev = gowers_norm(&f, 1).unwrap();
            for d in 2..=4 {
                let cur = gowers_norm(&f, d).unwrap();
                assert!(prev <= cur + TOL, "U^{} = {} < U^{} = {}", d, cur, d - 1, prev);
                prev = cur;
            }
        }
    }

    #[test]
    fn naive_agrees_with_recursive_on_small_groups() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for &n in &[12i128, 16] {
            let g = z(n);
            let f = GroupFunction::from_fn(&g, |_| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            for d in 1..=3 {
                let naive = gowers_norm_naive(&f, d, BUDGET).unwrap();
                let rec = gowers_norm(&f, d).unwrap();
                assert!((naive - rec).abs() < TOL, "d={} {} vs {}", d, naive, rec);
            }
        }
    }

    #[test]
    fn product_group_normalization_is_pinned() {
        // on Z_2 x Z_2 the function e(x1 x2 / 2)... is multiplicative-ish;
        // pin the U^2 value of a known function to guard the normalization
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let f = GroupFunction::from_fn(&g, |x| {
            if (x.coords()[0] * x.coords()[1]) % 2 == 1 {
                C64::new(-1.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        });
        // spectrum of this function: |f_hat| = 1/2 at every xi, so
        // U^2 = (4 * (1/2)^4)^{1/4} = (1/4)^{1/4} = 2^{-1/2}
        let expected = 0.5f64.sqrt();
        assert!((gowers_u2_fourier(&f) - expected).abs() < TOL);
        assert!((gowers_norm(&f, 2).unwrap() - expected).abs() < TOL);
        assert!((gowers_norm_naive(&f, 2, BUDGET).unwrap() - expected).abs() < TOL);
    }

    #[test]
    fn rejects_u0_and_mismatched_groups() {
        let f = GroupFunction::constant(&z(4), C64::new(1.0, 0.0));
        assert!(gowers_norm(&f, 0).is_err());
        let g = GroupFunction::constant(&z(5), C64::new(1.0, 0.0));
        assert!(correlation(&f, &g).is_err());
    }
}

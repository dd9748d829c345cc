//! Exact rational scalars.
//!
//! All algebraic data in this crate (group coordinates, polynomial
//! coefficients, orbit shifts) is rational with an `i128` backbone.
//! Overflow checks are enabled workspace-wide, so arithmetic past the
//! `i128` range aborts instead of wrapping. On top of that, denominators
//! are capped at 2^63: the cap is far beyond anything desk-scale inputs
//! produce, and exceeding it is a bug we want to hear about.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rat = Ratio<i128>;

/// Hard bound on reduced denominators, see module docs.
pub const DENOMINATOR_CAP: i128 = 1 << 63;

/// Panics when a reduced denominator exceeds the documented cap.
pub fn check_denominator(q: &Rat) {
    if *q.denom() > DENOMINATOR_CAP {
        panic!(
            "denominator {} exceeds the 2^63 cap; input is outside desk scale",
            q.denom()
        );
    }
}

pub fn rat(num: i128, den: i128) -> Rat {
    Ratio::new(num, den)
}

pub fn rat_int(n: i128) -> Rat {
    Ratio::from_integer(n)
}

/// Generalized binomial coefficient `q (q-1) ... (q-j+1) / j!` for rational `q`.
pub fn binom_rat(q: Rat, j: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..j {
        acc *= q - rat_int(i as i128);
        acc /= rat_int(i as i128 + 1);
    }
    check_denominator(&acc);
    acc
}

/// Binomial coefficient for integer (possibly negative) upper argument.
pub fn binom_int(n: i128, j: u32) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..j {
        num *= n - i as i128;
        den *= i as i128 + 1;
        // keep intermediates small; den always divides a prefix product
        let g = num_integer::gcd(num.abs(), den.abs());
        if g > 1 {
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den.abs(), 1);
    num / den
}

/// Fractional part in `[0, 1)`.
pub fn fract_mod1(q: Rat) -> Rat {
    let f = q - q.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}

/// Formats as `num/den` (or plain integer when the denominator is 1).
pub fn format_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `num/den` or a bare integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(rat(n, d))
        }
        None => {
            let n: i128 = s.parse().ok()?;
            Some(rat_int(n))
        }
    }
}

pub fn is_zero(q: &Rat) -> bool {
    q.is_zero()
}

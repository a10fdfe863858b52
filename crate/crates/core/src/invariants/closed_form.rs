//! Closed-form counts of spectral numbers in `(-1/2 + a, 1/2 + a)`.
//!
//! Both formulas agree with a direct count for `0 <= a <= 1/2` and drift
//! away from it beyond (for `K_4` at `a = 1` the ordinary-point formula gives
//! `-6`). The checked entry point therefore refuses shifts outside
//! `[0, 1/2]`; the unchecked one evaluates the formula anywhere.

use num_traits::{One, Zero};
use thiserror::Error;

use super::spectrum::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Ordinary `p`-fold point, `x^p + y^p`.
    Omp { p: u32 },
    /// `x^p + y^{pk}`.
    Kpk { p: u32, k: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("shift {alpha} outside [0, 1/2] where the closed form holds")]
    OutsideDomain { alpha: Rational },
}

fn choose2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Evaluates the floor/ceiling formula without checking the shift.
pub fn closed_form_spectral_count_unchecked(family: Family, alpha: Rational) -> i64 {
    let half = Rational::new(1, 2);
    match family {
        Family::Omp { p } => {
            let p = i64::from(p);
            let pr = Rational::from_integer(p);
            (p - 1) * (p - 1)
                - choose2(((half - alpha) * pr).floor().to_integer())
                - choose2(((half + alpha) * pr).floor().to_integer())
        }
        Family::Kpk { p, k } => {
            let (p, k) = (i64::from(p), i64::from(k));
            let x = Rational::from_integer(p * k) * (half + alpha);
            let c = x.ceil().to_integer();
            let f = x.floor().to_integer();
            let cc = ceil_div(c, k);
            let ff = f.div_euclid(k);
            // k(p - 1 + cc)/2 and k(ff + 1)/2 may be half-integers; keep them doubled
            let first = (p - cc) * (k * (p - 1 + cc) - 2 * c);
            let second = ff * (2 * f - k * (ff + 1));
            let doubled = 2 * (p - 1) * (p * k - 1) - first - second;
            debug_assert!(doubled % 2 == 0);
            doubled / 2
        }
    }
}

/// Number of spectral numbers in `(-1/2 + alpha, 1/2 + alpha)` by the closed
/// formula, for `0 <= alpha <= 1/2`.
pub fn closed_form_spectral_count(family: Family, alpha: Rational) -> Result<u64, ClosedFormError> {
    if alpha < Rational::zero() || alpha > Rational::one() / 2 {
        return Err(ClosedFormError::OutsideDomain { alpha });
    }
    let n = closed_form_spectral_count_unchecked(family, alpha);
    Ok(u64::try_from(n).expect("count is non-negative inside the domain"))
}

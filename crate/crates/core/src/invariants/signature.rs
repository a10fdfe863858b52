use std::ops::Add;

use num_traits::One;
use serde::Serialize;

use super::spectrum::{BrieskornModel, Rational, Spectrum};

/// Inertia of the intersection form on the middle homology of the surface
/// `f + z^2 = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    #[serde(rename = "plus")]
    pub mu_plus: u64,
    #[serde(rename = "zero")]
    pub mu_zero: u64,
    #[serde(rename = "minus")]
    pub mu_minus: u64,
}

impl Signature {
    pub fn new(mu_plus: u64, mu_zero: u64, mu_minus: u64) -> Self {
        Signature {
            mu_plus,
            mu_zero,
            mu_minus,
        }
    }

    pub fn mu(&self) -> u64 {
        self.mu_plus + self.mu_zero + self.mu_minus
    }
}

impl Add for Signature {
    type Output = Signature;

    fn add(self, rhs: Signature) -> Signature {
        Signature::new(
            self.mu_plus + rhs.mu_plus,
            self.mu_zero + rhs.mu_zero,
            self.mu_minus + rhs.mu_minus,
        )
    }
}

impl std::iter::Sum for Signature {
    fn sum<I: Iterator<Item = Signature>>(iter: I) -> Signature {
        iter.fold(Signature::default(), Add::add)
    }
}

/// Counts the monomial basis `x^a y^b` of `x^p + y^q + z^2` by the weight
/// `l = (a+1)/p + (b+1)/q + 1/2`: integral weights span the radical, the
/// rest are positive when `floor(l)` is even and negative otherwise.
pub fn signature_steenbrink(m: BrieskornModel) -> Signature {
    let (p, q) = (i64::from(m.p), i64::from(m.q));
    let mut sig = Signature::default();
    for a in 0..p - 1 {
        for b in 0..q - 1 {
            let l = Rational::new(a + 1, p) + Rational::new(b + 1, q) + Rational::new(1, 2);
            if l.is_integer() {
                sig.mu_zero += 1;
            } else if l.floor().to_integer().rem_euclid(2) == 0 {
                sig.mu_plus += 1;
            } else {
                sig.mu_minus += 1;
            }
        }
    }
    sig
}

/// `mu_-` is the count in `(-1/2, 1/2)`, `mu_+` twice the count in
/// `(-1, -1/2)`, and `mu_0` the remainder.
pub fn signature_from_spectrum(s: &Spectrum) -> Signature {
    let half = Rational::new(1, 2);
    let mu_minus = s.open(-half, half);
    let mu_plus = 2 * s.open(-Rational::one(), -half);
    Signature::new(mu_plus, s.total() - mu_plus - mu_minus, mu_minus)
}

/// Closed form for `x^p + y^{pk} + z^2`, split by the parities of `p`
/// and `k`.
pub fn signature_closed_form(p: u32, k: u32) -> Signature {
    assert!(p >= 2 && k >= 1);
    let (p, k) = (i64::from(p), i64::from(k));
    let exact = |num: i64, den: i64| -> u64 {
        assert_eq!(num % den, 0, "closed form is integral");
        u64::try_from(num / den).expect("closed form is non-negative")
    };
    if p % 2 == 0 {
        let zero = exact(p - 2, 1);
        let plus = exact((p - 2) * (p * k - 4), 4);
        let minus = exact((3 * p - 2) * k * p - 4 * (p - 1), 4);
        Signature::new(plus, zero, minus)
    } else {
        let h = (p - 1) / 2;
        if k % 2 == 0 {
            let plus = exact(h * h * k - (p - 1), 1);
            let minus = exact((p - 1) * (3 * p * k + k - 4), 4);
            Signature::new(plus, exact(p - 1, 1), minus)
        } else {
            let plus = exact(h * h * k - h, 1);
            let minus = exact((p - 1) * (3 * p * k + k - 2), 4);
            Signature::new(plus, 0, minus)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::spectrum::spectrum;
    use super::*;

    #[test]
    fn steenbrink_examples() {
        let sig = |p, q| signature_steenbrink(BrieskornModel::new(p, q));
        assert_eq!(sig(3, 6), Signature::new(0, 2, 8));
        assert_eq!(sig(2, 4), Signature::new(0, 0, 3));
        assert_eq!(sig(5, 5), Signature::new(2, 0, 14));
    }

    #[test]
    fn from_spectrum_examples() {
        let sig = |p, q| signature_from_spectrum(&spectrum(BrieskornModel::new(p, q)));
        assert_eq!(sig(3, 6), Signature::new(0, 2, 8));
        assert_eq!(sig(2, 2), Signature::new(0, 0, 1));
        assert_eq!(sig(4, 8), Signature::new(2, 2, 17));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(signature_closed_form(3, 2), Signature::new(0, 2, 8));
        assert_eq!(signature_closed_form(5, 1), Signature::new(2, 0, 14));
        assert_eq!(signature_closed_form(2, 1), Signature::new(0, 0, 1));
        assert_eq!(signature_closed_form(4, 2), Signature::new(2, 2, 17));
    }

    #[test]
    fn serialized_field_names() {
        assert_eq!(
            serde_json::to_string(&Signature::new(2, 0, 14)).unwrap(),
            r#"{"plus":2,"zero":0,"minus":14}"#
        );
    }
}

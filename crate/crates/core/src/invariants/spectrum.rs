use std::collections::BTreeMap;
use std::ops::Add;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::tree::SingularityType;

pub type Rational = Ratio<i64>;

/// Exponents of `x^p + y^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BrieskornModel {
    pub p: u32,
    pub q: u32,
}

impl BrieskornModel {
    pub fn new(p: u32, q: u32) -> Self {
        assert!(p >= 2 && q >= 2, "exponents must be at least 2");
        let (p, q) = (p.min(q), p.max(q));
        BrieskornModel { p, q }
    }

    pub fn mu(&self) -> u64 {
        u64::from(self.p - 1) * u64::from(self.q - 1)
    }
}

/// Quasi-homogeneous model of a type, available when all branches have the
/// same pairwise contact: `K(p,k)` is `x^p + y^{pk}`.
pub fn brieskorn_model(t: &SingularityType) -> Option<BrieskornModel> {
    let k = t.graph().is_uniform()?;
    let p = u32::try_from(t.branches()).ok()?;
    Some(BrieskornModel::new(p, p.checked_mul(k)?))
}

/// Multiset of spectral numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Spectrum {
    entries: BTreeMap<Rational, u64>,
}

impl Spectrum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: Rational, multiplicity: u64) {
        if multiplicity > 0 {
            *self.entries.entry(s).or_insert(0) += multiplicity;
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn multiplicity(&self, s: Rational) -> u64 {
        self.entries.get(&s).copied().unwrap_or(0)
    }

    /// Distinct spectral numbers with multiplicities, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (Rational, u64)> + '_ {
        self.entries.iter().map(|(s, m)| (*s, *m))
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(s, m)| self.multiplicity(-s) == m)
    }
}

impl Add for &Spectrum {
    type Output = Spectrum;

    fn add(self, rhs: &Spectrum) -> Spectrum {
        let mut out = self.clone();
        for (s, m) in rhs.iter() {
            out.insert(s, m);
        }
        out
    }
}

impl<'a> std::iter::Sum<&'a Spectrum> for Spectrum {
    fn sum<I: Iterator<Item = &'a Spectrum>>(iter: I) -> Spectrum {
        iter.fold(Spectrum::new(), |acc, s| &acc + s)
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(
            self.iter()
                .map(|(s, m)| (format!("{}/{}", s.numer(), s.denom()), m)),
        )
    }
}

/// Spectrum of `x^p + y^q`: the numbers `(i+1)/p + (j+1)/q - 1` for
/// `0 <= i <= p-2`, `0 <= j <= q-2`.
pub fn spectrum(m: BrieskornModel) -> Spectrum {
    let (p, q) = (i64::from(m.p), i64::from(m.q));
    let mut out = Spectrum::new();
    for i in 0..p - 1 {
        for j in 0..q - 1 {
            out.insert(
                Rational::new(i + 1, p) + Rational::new(j + 1, q) - Rational::one(),
                1,
            );
        }
    }
    out
}

/// Number of spectral numbers (with multiplicity) in the interval from `lo`
/// to `hi`, each end open or closed as flagged.
pub fn interval_count(
    s: &Spectrum,
    lo: Rational,
    hi: Rational,
    lo_open: bool,
    hi_open: bool,
) -> u64 {
    assert!(lo < hi, "empty interval");
    use std::ops::Bound::{Excluded, Included};
    let lower = if lo_open { Excluded(lo) } else { Included(lo) };
    let upper = if hi_open { Excluded(hi) } else { Included(hi) };
    s.entries.range((lower, upper)).map(|(_, m)| m).sum()
}

impl Spectrum {
    /// Count in the open interval `(lo, hi)`.
    pub fn open(&self, lo: Rational, hi: Rational) -> u64 {
        interval_count(self, lo, hi, true, true)
    }

    /// Count in the half-open interval `(lo, hi]`.
    pub fn half_open(&self, lo: Rational, hi: Rational) -> u64 {
        interval_count(self, lo, hi, true, false)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() || self.total().is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{a_odd, d_even, make_named_type};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn models() {
        let m = |name: &str| brieskorn_model(&make_named_type(name).unwrap());
        assert_eq!(m("D4"), Some(BrieskornModel::new(3, 3)));
        assert_eq!(m("A7"), Some(BrieskornModel::new(2, 8)));
        assert_eq!(m("K(4,3)"), Some(BrieskornModel::new(4, 12)));
        assert_eq!(brieskorn_model(&d_even(2)), None);
        assert_eq!(brieskorn_model(&a_odd(1)), Some(BrieskornModel::new(2, 2)));
    }

    #[test]
    fn ordinary_quintuple_point() {
        let sp = spectrum(BrieskornModel::new(5, 5));
        let expected = [(-3, 1), (-2, 2), (-1, 3), (0, 4), (1, 3), (2, 2), (3, 1)];
        let got: Vec<_> = sp.iter().collect();
        let want: Vec<_> = expected.iter().map(|&(n, m)| (r(n, 5), m)).collect();
        assert_eq!(got, want);
        assert_eq!(sp.open(r(-1, 2), r(1, 2)), 14);
    }

    #[test]
    fn small_models() {
        let node = spectrum(BrieskornModel::new(2, 2));
        assert_eq!(node.iter().collect::<Vec<_>>(), vec![(r(0, 1), 1)]);
        let tacnode = spectrum(BrieskornModel::new(2, 4));
        assert_eq!(
            tacnode.iter().collect::<Vec<_>>(),
            vec![(r(-1, 4), 1), (r(0, 1), 1), (r(1, 4), 1)]
        );
        let j = spectrum(BrieskornModel::new(3, 6));
        assert_eq!(j.total(), 10);
        assert_eq!(j.open(r(-1, 2), r(1, 2)), 8);
    }

    #[test]
    fn endpoints() {
        let sp = spectrum(BrieskornModel::new(2, 4));
        let (a, b) = (r(-1, 4), r(1, 4));
        assert_eq!(interval_count(&sp, a, b, true, true), 1);
        assert_eq!(interval_count(&sp, a, b, false, true), 2);
        assert_eq!(interval_count(&sp, a, b, true, false), 2);
        assert_eq!(interval_count(&sp, a, b, false, false), 3);
        assert_eq!(interval_count(&Spectrum::new(), a, b, false, false), 0);
    }

    #[test]
    fn serialization() {
        let sp = spectrum(BrieskornModel::new(2, 4));
        assert_eq!(
            serde_json::to_string(&sp).unwrap(),
            r#"[["-1/4",1],["0/1",1],["1/4",1]]"#
        );
    }
}

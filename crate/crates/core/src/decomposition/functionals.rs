//! Power-sum functionals of edge weights.
//!
//! If `Γ = ⊕ Γ_i` then the weight vector of `Γ` is a sum of the (padded)
//! weight vectors of the `Γ_i`, so the `e`-norms obey Minkowski's
//! inequality, and each coordinate is a sum of at most `k` terms, giving
//! `Σ w^e <= k^{e-1} Σ_i Σ w_i^e` for `k` targets.

use std::cmp::Ordering;

use crate::graph::DualGraph;

/// `Σ w^e` over all edges.
pub fn power_sum(g: &DualGraph, e: u32) -> u128 {
    g.edge_weights().iter().map(|&w| u128::from(w).pow(e)).sum()
}

/// Largest `r` with `r^e <= x`.
pub fn integer_root(x: u128, e: u32) -> u128 {
    assert!(e >= 1);
    if e == 1 || x < 2 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / f64::from(e)) as u128;
    let pow_le = |r: u128| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..e {
            match acc.checked_mul(r) {
                Some(v) if v <= x => acc = v,
                _ => return false,
            }
        }
        true
    };
    while r > 0 && !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// Splits `x` as `c^e * d` with `d` free of `e`-th powers.
fn radical_split(mut x: u128, e: u32) -> (u128, u128) {
    let mut c = 1u128;
    let mut f = 2u128;
    while f.pow(e) <= x {
        let fe = f.pow(e);
        while x % fe == 0 {
            x /= fe;
            c *= f;
        }
        f += 1;
    }
    (c, x)
}

/// Compares `a^{1/e}` with `Σ b_i^{1/e}` exactly. Returns `None` only when
/// the values could not be separated at the available precision.
pub fn compare_root_sums(a: u128, bs: &[u128], e: u32) -> Option<Ordering> {
    assert!(e >= 1);
    if e == 1 {
        return Some(a.cmp(&bs.iter().sum()));
    }
    // exact path: both sides are integer multiples of one common radical
    let (ca, da) = radical_split(a, e);
    let mut groups: Vec<(u128, u128)> = Vec::new();
    for &b in bs.iter().filter(|&&b| b > 0) {
        let (c, d) = radical_split(b, e);
        match groups.iter_mut().find(|g| g.1 == d) {
            Some(g) => g.0 += c,
            None => groups.push((c, d)),
        }
    }
    if groups.is_empty() {
        return Some(a.cmp(&0));
    }
    if a == 0 {
        return Some(Ordering::Less);
    }
    if groups.len() == 1 && groups[0].1 == da {
        return Some(ca.cmp(&groups[0].0));
    }
    // distinct radicals are linearly independent, so the two sides differ;
    // separate them with fixed-point enclosures
    let bits_available = |x: u128| 126 - (128 - x.leading_zeros()).min(126);
    let max_input = bs.iter().copied().chain([a]).max().unwrap_or(0);
    let max_shift = bits_available(max_input) / e;
    let mut shift = 4.min(max_shift);
    loop {
        let scale = |x: u128| x << (shift * e);
        let lo_a = integer_root(scale(a), e);
        let hi_a = lo_a + 1;
        let mut lo_b = 0u128;
        let mut hi_b = 0u128;
        for &b in bs {
            let r = integer_root(scale(b), e);
            lo_b += r;
            hi_b += r + 1;
        }
        if lo_a >= hi_b {
            return Some(Ordering::Greater);
        }
        if hi_a <= lo_b {
            return Some(Ordering::Less);
        }
        if shift >= max_shift {
            return None;
        }
        shift = (shift * 2).min(max_shift);
    }
}

/// Outcome of one functional comparison between a source and targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalCheck {
    pub name: String,
    pub source: String,
    pub targets: String,
    pub violated: bool,
}

/// Minkowski check for exponent `e`: violated when
/// `(Σ w^e)^{1/e} > Σ_i (Σ w_i^e)^{1/e}`.
pub fn minkowski(source: &DualGraph, targets: &[&DualGraph], e: u32) -> FunctionalCheck {
    let a = power_sum(source, e);
    let bs: Vec<u128> = targets.iter().map(|g| power_sum(g, e)).collect();
    let violated = compare_root_sums(a, &bs, e) == Some(Ordering::Greater);
    FunctionalCheck {
        name: format!("minkowski_e{e}"),
        source: format!("({a})^(1/{e})"),
        targets: bs
            .iter()
            .map(|b| format!("({b})^(1/{e})"))
            .collect::<Vec<_>>()
            .join(" + "),
        violated,
    }
}

/// Power-mean check for exponent `e`: violated when
/// `Σ w^e > k^{e-1} Σ_i Σ w_i^e` with `k` the number of targets.
pub fn power_mean(source: &DualGraph, targets: &[&DualGraph], e: u32) -> FunctionalCheck {
    let a = power_sum(source, e);
    let k = targets.len() as u128;
    let b: u128 = targets.iter().map(|g| power_sum(g, e)).sum();
    let bound = k.pow(e - 1) * b;
    FunctionalCheck {
        name: format!("power_mean_e{e}"),
        source: a.to_string(),
        targets: format!("{k}^{} * {b} = {bound}", e - 1),
        violated: a > bound,
    }
}

/// All functional checks used as necessary conditions.
pub fn all_checks(source: &DualGraph, targets: &[&DualGraph]) -> Vec<FunctionalCheck> {
    let mut out: Vec<_> = (1..=3).map(|e| minkowski(source, targets, e)).collect();
    out.extend((2..=3).map(|e| power_mean(source, targets, e)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        assert_eq!(integer_root(26, 3), 2);
        assert_eq!(integer_root(27, 3), 3);
        assert_eq!(integer_root(u128::from(u64::MAX), 2), u128::from(u32::MAX));
        assert_eq!(integer_root(0, 2), 0);
        assert_eq!(radical_split(72, 2), (6, 2));
        assert_eq!(radical_split(54, 3), (3, 2));
    }

    #[test]
    fn exact_ties() {
        // sqrt(8) = sqrt(2) + sqrt(2)
        assert_eq!(compare_root_sums(8, &[2, 2], 2), Some(Ordering::Equal));
        assert_eq!(compare_root_sums(9, &[4, 1], 2), Some(Ordering::Equal));
        assert_eq!(compare_root_sums(10, &[4, 1], 2), Some(Ordering::Greater));
    }

    #[test]
    fn separated_radicals() {
        // sqrt(5) < sqrt(2) + sqrt(3)
        assert_eq!(compare_root_sums(5, &[2, 3], 2), Some(Ordering::Less));
        // sqrt(11) > sqrt(2) + sqrt(3) = 3.146...
        assert_eq!(compare_root_sums(11, &[2, 3], 2), Some(Ordering::Greater));
        // cbrt(17) = 2.571 vs cbrt(2) + cbrt(3) = 2.702
        assert_eq!(compare_root_sums(17, &[2, 3], 3), Some(Ordering::Less));
    }

    #[test]
    fn power_mean_needs_target_count() {
        // A_5 splitting into three nodes: 3^2 = 9 <= 3^1 * 3
        let a5 = DualGraph::uniform(2, 3).unwrap();
        let a1 = DualGraph::uniform(2, 1).unwrap();
        let check = power_mean(&a5, &[&a1, &a1, &a1], 2);
        assert!(!check.violated);
        // a single node cannot carry weight 3
        assert!(power_mean(&a5, &[&a1], 2).violated);
    }
}

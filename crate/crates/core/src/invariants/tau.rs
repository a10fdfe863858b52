use crate::tree::SingularityType;

/// Codimension of the equisingular stratum, for the types where it is
/// tabulated: `A_{2k-1}`, ordinary points and `J_10`.
pub fn tau_es(t: &SingularityType) -> Option<u64> {
    let p = t.branches() as u64;
    match (p, t.graph().is_uniform()) {
        (2, Some(k)) => Some(2 * u64::from(k) - 1),
        (_, Some(1)) => Some(p * (p + 1) / 2 - 2),
        (3, Some(2)) => Some(9),
        _ => None,
    }
}

/// `C(p+1, 2)` for ordinary points, i.e. without the two translation
/// parameters subtracted in [`tau_es`].
pub fn tau_es_unshifted(t: &SingularityType) -> Option<u64> {
    let p = t.branches() as u64;
    (t.graph().is_uniform() == Some(1)).then(|| p * (p + 1) / 2)
}

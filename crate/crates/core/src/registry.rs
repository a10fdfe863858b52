//! Names for the handful of graphs with a classical name.
//!
//! | name | graph |
//! |------|-------|
//! | `A_{2k-1}` | single edge of weight `k` |
//! | `D_{2k+2}` | triangle with weights `1, 1, k` |
//! | `J_10` | triangle with weights `2, 2, 2` |
//! | `J_{2,2}` | triangle with weights `2, 2, 3` |
//! | `X_9` | `K_4` with unit weights |
//! | `X_{1,2}` | `K_4` with one edge of weight 2 |
//! | `K_p` | `p` vertices, unit weights |
//! | `K(p,k)` | `p` vertices, all weights `k` |
//!
//! When several names fit, the first row wins, so `K_3` prints as `D_4` and
//! `K(2,k)` as an `A` type.

use crate::error::NameError;
use crate::graph::{DualGraph, Weight};
use crate::tree::{canonical_form, SingularityType};

/// `A_{2k-1}`: two branches with contact `k`.
pub fn a_odd(k: Weight) -> SingularityType {
    kpk(2, k)
}

/// `D_{2k+2}`: a smooth branch transversal to an `A_{2k-1}`.
pub fn d_even(k: Weight) -> SingularityType {
    assert!(k >= 1);
    canonical_form(&DualGraph::triangle(1, 1, k).expect("valid triangle"))
}

/// Ordinary `p`-fold point.
pub fn ordinary(p: usize) -> SingularityType {
    kpk(p, 1)
}

/// `x^p + y^{pk}`: `p` branches with pairwise contact `k`.
pub fn kpk(p: usize, k: Weight) -> SingularityType {
    assert!(p >= 2 && k >= 1);
    canonical_form(&DualGraph::uniform(p, k).expect("valid uniform graph"))
}

pub fn j10() -> SingularityType {
    kpk(3, 2)
}

pub fn j22() -> SingularityType {
    canonical_form(&DualGraph::triangle(2, 2, 3).expect("valid triangle"))
}

pub fn x9() -> SingularityType {
    ordinary(4)
}

pub fn x12() -> SingularityType {
    canonical_form(
        &DualGraph::validate(
            4,
            [(0, 1, 2), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
        )
        .expect("valid graph"),
    )
}

/// Display name of `t`, if it has one.
pub fn name_of(t: &SingularityType) -> Option<String> {
    let g = t.graph();
    let r = g.branches();
    let mut w: Vec<Weight> = g.edge_weights().to_vec();
    w.sort_unstable();
    match (r, w.as_slice()) {
        (2, [k]) => return Some(format!("A_{}", 2 * k - 1)),
        (3, [1, 1, k]) => return Some(format!("D_{}", 2 * k + 2)),
        (3, [2, 2, 2]) => return Some("J_10".into()),
        (3, [2, 2, 3]) => return Some("J_{2,2}".into()),
        (4, [1, 1, 1, 1, 1, 1]) => return Some("X_9".into()),
        (4, [1, 1, 1, 1, 1, 2]) => return Some("X_{1,2}".into()),
        _ => {}
    }
    match g.is_uniform()? {
        1 => Some(format!("K_{r}")),
        k => Some(format!("K({r},{k})")),
    }
}

/// Resolves a registry name.
///
/// Accepts the compact forms `A3`, `D6`, `J10`, `J22`, `X9`, `X12`, `K5`,
/// `K(3,4)` as well as the display forms `A_3`, `J_{2,2}`, `X_{1,2}`, `K_5`.
pub fn make_named_type(name: &str) -> Result<SingularityType, NameError> {
    let unknown = || NameError::UnknownName {
        name: name.to_string(),
    };
    let singular = || NameError::SingularBranchType {
        name: name.to_string(),
    };
    let mut s: String = name
        .chars()
        .filter(|c| !matches!(c, '_' | '{' | '}'))
        .collect();
    if s.starts_with('J') || s.starts_with('X') {
        s.retain(|c| c != ',');
    }
    let number = |digits: &str| -> Option<u64> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.parse().ok()
    };
    let weight = |n: u64| Weight::try_from(n).map_err(|_| unknown());

    match s.as_str() {
        "J10" => return Ok(j10()),
        "J22" => return Ok(j22()),
        "X9" => return Ok(x9()),
        "X12" => return Ok(x12()),
        "E6" | "E7" | "E8" => return Err(singular()),
        _ => {}
    }
    let (head, rest) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
    match head {
        "A" => {
            let n = number(rest).ok_or_else(unknown)?;
            match n {
                0 => Err(unknown()),
                n if n % 2 == 1 => Ok(a_odd(weight(n.div_ceil(2))?)),
                _ => Err(singular()),
            }
        }
        "D" => {
            let n = number(rest).ok_or_else(unknown)?;
            match n {
                0..=3 => Err(unknown()),
                n if n % 2 == 0 => Ok(d_even(weight((n - 2) / 2)?)),
                _ => Err(singular()),
            }
        }
        "K" => {
            if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                let (p, k) = inner.split_once(',').ok_or_else(unknown)?;
                let p = number(p.trim()).ok_or_else(unknown)?;
                let k = number(k.trim()).ok_or_else(unknown)?;
                if p < 2 || k < 1 || p > 4096 {
                    return Err(unknown());
                }
                Ok(kpk(p as usize, weight(k)?))
            } else {
                let p = number(rest).ok_or_else(unknown)?;
                if !(2..=4096).contains(&p) {
                    return Err(unknown());
                }
                Ok(ordinary(p as usize))
            }
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_deltas() {
        let cases = [
            ("A3", 2),
            ("D4", 3),
            ("X9", 6),
            ("J10", 6),
            ("J22", 7),
            ("X12", 7),
        ];
        for (name, delta) in cases {
            assert_eq!(make_named_type(name).unwrap().delta(), delta, "{name}");
        }
    }

    #[test]
    fn aliases() {
        assert_eq!(make_named_type("K(3,2)").unwrap(), make_named_type("J10").unwrap());
        assert_eq!(make_named_type("K(5,1)").unwrap(), make_named_type("K5").unwrap());
        assert_eq!(make_named_type("A7").unwrap(), make_named_type("K(2,4)").unwrap());
        assert_eq!(make_named_type("D4").unwrap(), make_named_type("K3").unwrap());
        assert_eq!(make_named_type("A3").unwrap().graph().weight(0, 1), 2);
    }

    #[test]
    fn display_names() {
        let names = [
            ("A1", "A_1"),
            ("A13", "A_13"),
            ("K3", "D_4"),
            ("D12", "D_12"),
            ("K(3,2)", "J_10"),
            ("J22", "J_{2,2}"),
            ("K4", "X_9"),
            ("X12", "X_{1,2}"),
            ("K5", "K_5"),
            ("K(3,4)", "K(3,4)"),
        ];
        for (input, shown) in names {
            let t = make_named_type(input).unwrap();
            assert_eq!(t.label(), shown);
            assert_eq!(make_named_type(shown).unwrap(), t);
        }
        let d6 = canonical_form(&DualGraph::triangle(2, 2, 4).unwrap());
        assert_eq!(d6.name(), None);
    }

    #[test]
    fn rejected_names() {
        for name in ["A4", "A2", "D5", "D7", "E6", "E8"] {
            assert!(
                matches!(make_named_type(name), Err(NameError::SingularBranchType { .. })),
                "{name}"
            );
        }
        for name in ["A", "A0", "D2", "K1", "K(1,3)", "K(3,0)", "Q7", "", "A-1", "K(3,"] {
            assert!(
                matches!(make_named_type(name), Err(NameError::UnknownName { .. })),
                "{name}"
            );
        }
    }
}

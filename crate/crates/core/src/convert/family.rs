//! Membership in the digraph families `K_{r,s}` (complete base, minimum
//! out-degree at least `s`) and `K*_{r,s}` (no base requirement).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMembership {
    pub member: bool,
    pub complete_base: bool,
    pub min_out_degree: usize,
    /// Only reported for `r = 3, s = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contains_c3: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contains_j3: Option<bool>,
}

/// Fast path used by the enumerators; `set` is assumed valid.
#[inline]
pub fn is_family_member(d: &Digraph, set: &[usize], s: usize, require_complete_base: bool) -> bool {
    (!require_complete_base || d.base_complete_on(set)) && d.min_out_degree_within(set) >= s
}

fn contains_cyclic_triangle(d: &Digraph, [a, b, c]: [usize; 3]) -> bool {
    (d.has_arc(a, b) && d.has_arc(b, c) && d.has_arc(c, a))
        || (d.has_arc(a, c) && d.has_arc(c, b) && d.has_arc(b, a))
}

/// Some vertex sends arcs to both others, which are joined by a double edge.
fn contains_j3(d: &Digraph, t: [usize; 3]) -> bool {
    (0..3).any(|i| {
        let (x, y, z) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
        d.has_arc(x, y) && d.has_arc(x, z) && d.has_arc(y, z) && d.has_arc(z, y)
    })
}

pub fn classify_family(
    d: &Digraph,
    set: &[usize],
    r: usize,
    s: usize,
    require_complete_base: bool,
) -> Result<FamilyMembership> {
    if set.len() != r {
        return Err(Error::SizeMismatch {
            expected: r,
            got: set.len(),
        });
    }
    if s >= r {
        return Err(Error::Precondition(format!("requires s < r, got s={s}, r={r}")));
    }
    for (i, &v) in set.iter().enumerate() {
        if v >= d.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: d.n() });
        }
        if set[..i].contains(&v) {
            return Err(Error::Precondition(format!("vertex {v} repeated in set")));
        }
    }
    let complete_base = d.base_complete_on(set);
    let min_out_degree = d.min_out_degree_within(set);
    let member = (!require_complete_base || complete_base) && min_out_degree >= s;
    let (contains_c3, contains_j3) = if r == 3 && s == 1 {
        let t = [set[0], set[1], set[2]];
        (Some(contains_cyclic_triangle(d, t)), Some(contains_j3(d, t)))
    } else {
        (None, None)
    };
    Ok(FamilyMembership {
        member,
        complete_base,
        min_out_degree,
        contains_c3,
        contains_j3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_triple() {
        let m = classify_family(&Digraph::complete(3), &[0, 1, 2], 3, 1, true).unwrap();
        assert!(m.member);
        assert_eq!(m.contains_c3, Some(true));
    }

    #[test]
    fn j3_triple() {
        let d = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let m = classify_family(&d, &[0, 1, 2], 3, 1, true).unwrap();
        assert!(m.member);
        assert_eq!((m.contains_c3, m.contains_j3), (Some(false), Some(true)));
    }

    #[test]
    fn transitive_triple_is_not_a_member() {
        let d = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let m = classify_family(&d, &[0, 1, 2], 3, 1, true).unwrap();
        assert!(!m.member);
        assert_eq!(m.min_out_degree, 0);
    }

    #[test]
    fn star_variant_ignores_base() {
        // two disjoint 2-cycles: out-degree 1 everywhere, base not complete
        let d = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert!(!classify_family(&d, &[0, 1, 2, 3], 4, 1, true).unwrap().member);
        assert!(classify_family(&d, &[0, 1, 2, 3], 4, 1, false).unwrap().member);
        assert_eq!(classify_family(&d, &[0, 1, 2, 3], 4, 1, false).unwrap().contains_c3, None);
    }

    #[test]
    fn rejects_bad_input() {
        let d = Digraph::complete(4);
        assert!(matches!(
            classify_family(&d, &[0, 1], 3, 1, true),
            Err(Error::SizeMismatch { expected: 3, got: 2 })
        ));
        assert!(classify_family(&d, &[0, 1, 2], 3, 3, true).is_err());
        assert!(classify_family(&d, &[0, 1, 1], 3, 1, true).is_err());
        assert!(classify_family(&d, &[0, 1, 7], 3, 1, true).is_err());
    }

    #[test]
    fn membership_iff_c3_or_j3_exhaustive() {
        let pairs = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
        let mut complete_base = 0;
        for mask in 0u32..64 {
            let arcs = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a);
            let d = Digraph::from_arcs(3, arcs).unwrap();
            let m = classify_family(&d, &[0, 1, 2], 3, 1, true).unwrap();
            if m.complete_base {
                complete_base += 1;
                let structural = m.contains_c3.unwrap() || m.contains_j3.unwrap();
                assert_eq!(m.member, structural, "mask {mask:06b}");
            } else {
                assert!(!m.member);
            }
        }
        assert_eq!(complete_base, 27);
    }
}

//! Finite posets with element identifiers.
//!
//! The order relation is stored reflexive-transitively closed, one upset
//! bit row and one downset bit row per element. Constructors reject
//! structurally malformed input (duplicate ids, relation cycles, a
//! non-transitive relation) — that is a different failure mode from a
//! well-formed poset that merely fails to be a frame.

use crate::bits::Bits;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element identifier `{0}`")]
    DuplicateId(String),
    #[error("unknown element identifier `{0}`")]
    UnknownId(String),
    #[error("order cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("relation is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("relation is not transitive: `{0}` <= `{1}` <= `{2}` but not `{0}` <= `{2}`")]
    NotTransitive(String, String, String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<String>,
    /// up[i] = { j : i <= j }
    up: Vec<Bits>,
    /// dn[i] = { j : j <= i }
    dn: Vec<Bits>,
}

impl Poset {
    /// Builds a poset from the reflexive-transitive closure of a cover
    /// (Hasse) relation. Rejects cycles.
    pub fn from_covers<S: AsRef<str>>(ids: &[S], covers: &[(S, S)]) -> Result<Poset, PosetError> {
        let ids: Vec<String> = ids.iter().map(|s| s.as_ref().to_string()).collect();
        check_unique(&ids)?;
        let n = ids.len();
        let index = |s: &S| -> Result<usize, PosetError> {
            ids.iter()
                .position(|t| t == s.as_ref())
                .ok_or_else(|| PosetError::UnknownId(s.as_ref().to_string()))
        };
        let mut up: Vec<Bits> = (0..n).map(|i| Bits::singleton(n, i)).collect();
        for (lo, hi) in covers {
            let (lo, hi) = (index(lo)?, index(hi)?);
            up[lo].insert(hi);
        }
        // Warshall closure.
        for k in 0..n {
            let row = up[k].clone();
            for r in up.iter_mut() {
                if r.contains(k) {
                    r.union_with(&row);
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if up[i].contains(j) && up[j].contains(i) {
                    return Err(PosetError::Cycle(ids[i].clone(), ids[j].clone()));
                }
            }
        }
        Ok(Poset::from_closed(ids, up))
    }

    /// Builds a poset from an explicit relation, which must already be
    /// reflexive, antisymmetric and transitive.
    pub fn from_leq<S: AsRef<str>>(ids: &[S], leq: &[(S, S)]) -> Result<Poset, PosetError> {
        let ids: Vec<String> = ids.iter().map(|s| s.as_ref().to_string()).collect();
        check_unique(&ids)?;
        let n = ids.len();
        let mut up: Vec<Bits> = (0..n).map(|_| Bits::empty(n)).collect();
        for (lo, hi) in leq {
            let find = |s: &S| {
                ids.iter()
                    .position(|t| t == s.as_ref())
                    .ok_or_else(|| PosetError::UnknownId(s.as_ref().to_string()))
            };
            up[find(lo)?].insert(find(hi)?);
        }
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(PosetError::NotReflexive(ids[i].clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && up[i].contains(j) && up[j].contains(i) {
                    return Err(PosetError::Cycle(ids[i].clone(), ids[j].clone()));
                }
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if !up[j].is_subset(&up[i]) {
                    let k = up[j].iter().find(|k| !up[i].contains(*k)).unwrap();
                    return Err(PosetError::NotTransitive(
                        ids[i].clone(),
                        ids[j].clone(),
                        ids[k].clone(),
                    ));
                }
            }
        }
        Ok(Poset::from_closed(ids, up))
    }

    fn from_closed(ids: Vec<String>, up: Vec<Bits>) -> Poset {
        let n = ids.len();
        let mut dn: Vec<Bits> = (0..n).map(|_| Bits::empty(n)).collect();
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                dn[j].insert(i);
            }
        }
        Poset { ids, up, dn }
    }

    /// Chain c0 < c1 < ... with generated identifiers.
    pub fn chain(n: usize) -> Poset {
        let ids: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| (format!("c{}", i - 1), format!("c{i}")))
            .collect();
        Poset::from_covers(&ids, &covers).unwrap()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|t| t == id)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn upset(&self, a: usize) -> &Bits {
        &self.up[a]
    }

    pub fn downset(&self, a: usize) -> &Bits {
        &self.dn[a]
    }

    /// Covering pairs (a, b): a < b with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.up[a].iter() {
                if a == b {
                    continue;
                }
                let between = (0..n).any(|k| k != a && k != b && self.leq(a, k) && self.leq(k, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Product poset on pairs, ordered componentwise. Pair (i, j) gets
    /// linear index i * other.len() + j.
    pub fn product(&self, other: &Poset) -> Poset {
        let n = self.len() * other.len();
        let mut ids = Vec::with_capacity(n);
        for i in 0..self.len() {
            for j in 0..other.len() {
                ids.push(format!("({},{})", self.ids[i], other.ids[j]));
            }
        }
        let mut up: Vec<Bits> = (0..n).map(|_| Bits::empty(n)).collect();
        for i in 0..self.len() {
            for j in 0..other.len() {
                let a = i * other.len() + j;
                for i2 in self.up[i].iter() {
                    for j2 in other.up[j].iter() {
                        up[a].insert(i2 * other.len() + j2);
                    }
                }
            }
        }
        Poset::from_closed(ids, up)
    }

    pub fn is_upper_set(&self, s: &Bits) -> bool {
        s.iter().all(|i| self.up[i].is_subset(s))
    }

    pub fn is_down_set(&self, s: &Bits) -> bool {
        s.iter().all(|i| self.dn[i].is_subset(s))
    }

    /// All upward-closed subsets, in a deterministic order
    /// (cardinality, then bit pattern). Brute-force over 2^n subsets;
    /// callers keep n small.
    pub fn upper_sets(&self) -> Vec<Bits> {
        let n = self.len();
        assert!(
            n <= 20,
            "upper-set enumeration is exponential; {n} elements is too many"
        );
        let mut out = Vec::new();
        for mask in 0..(1u32 << n) {
            let s = Bits::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
            if self.is_upper_set(&s) {
                out.push(s);
            }
        }
        out.sort_by_key(|s| (s.count(), s.clone()));
        out
    }
}

fn check_unique(ids: &[String]) -> Result<(), PosetError> {
    for (i, id) in ids.iter().enumerate() {
        if ids[..i].contains(id) {
            return Err(PosetError::DuplicateId(id.clone()));
        }
    }
    Ok(())
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset({:?})", self.ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_closure() {
        let p = Poset::chain(3);
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn cycle_rejected() {
        let ids = ["a", "b"];
        let err = Poset::from_covers(&ids, &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, PosetError::Cycle(..)));
    }

    #[test]
    fn non_reflexive_input_rejected() {
        let ids = ["a", "b"];
        let err = Poset::from_leq(&ids, &[("a", "a")]).unwrap_err();
        assert_eq!(err, PosetError::NotReflexive("b".into()));
    }

    #[test]
    fn non_transitive_input_rejected() {
        let ids = ["a", "b", "c"];
        let leq = [("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c")];
        let err = Poset::from_leq(&ids, &leq).unwrap_err();
        assert_eq!(
            err,
            PosetError::NotTransitive("a".into(), "b".into(), "c".into())
        );
    }

    #[test]
    fn product_order() {
        let p = Poset::chain(2).product(&Poset::chain(2));
        assert_eq!(p.len(), 4);
        assert!(p.leq(0, 3));
        assert!(!p.leq(1, 2));
        // upper sets of the 2x2 grid: 6 of them
        assert_eq!(p.upper_sets().len(), 6);
    }

    #[test]
    fn upper_sets_of_chain() {
        assert_eq!(Poset::chain(3).upper_sets().len(), 4);
        assert_eq!(Poset::chain(0).upper_sets().len(), 1);
    }
}

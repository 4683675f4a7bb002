//! The way-below relation, compactness, local compactness, and
//! interpolation on finite frames.
//!
//! `a` is way below `b` when every covering of `b` admits a finite
//! subfamily covering `a`; a covering of `b` is any subset whose join
//! dominates `b`. On a finite frame every family is finite, so way-below
//! collapses to the order itself — that shortcut is what `way_below`
//! computes, and `way_below_bruteforce` keeps the definitional scan over
//! all covering subsets as the oracle it is checked against. Chain
//! carriers get their own analytic rules in the chain module.

use crate::frame::Frame;
use thiserror::Error;

/// Way-below by the finite-frame shortcut: a << b iff a <= b.
pub fn way_below(f: &Frame, a: usize, b: usize) -> bool {
    f.leq(a, b)
}

/// Way-below straight from the definition: for every subset S with
/// join(S) >= b there is a subfamily T of S with join(T) >= a.
/// Exponential in the frame size; the meta-test oracle for `way_below`.
pub fn way_below_bruteforce(f: &Frame, a: usize, b: usize) -> bool {
    let n = f.len();
    assert!(n <= 16, "definitional way-below scan is exponential");
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if !f.leq(b, f.join_all(members.iter().copied())) {
            continue;
        }
        let mut dominated = false;
        let mut sub = mask;
        loop {
            let t = (0..n).filter(|i| sub >> i & 1 == 1);
            if f.leq(a, f.join_all(t)) {
                dominated = true;
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        if !dominated {
            return false;
        }
    }
    true
}

/// a is compact iff a << a.
pub fn is_compact(f: &Frame, a: usize) -> bool {
    way_below(f, a, a)
}

/// Verdict of the local-compactness check, with the first violating
/// element when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCompactness {
    pub witness: Option<usize>,
}

impl LocalCompactness {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Every open must be the join of the opens way below it.
pub fn locally_compact(f: &Frame) -> LocalCompactness {
    let witness = f.elems().find(|&a| {
        let approx = f.join_all(f.elems().filter(|&ap| way_below(f, ap, a)));
        approx != a
    });
    LocalCompactness { witness }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpolateError {
    #[error("`{0}` is not way below `{1}`")]
    NotWayBelow(String, String),
    #[error("frame is not locally compact (witness `{0}`)")]
    NotLocallyCompact(String),
}

/// Finds s with a' << s << a, following the interpolation lemma: the
/// doubly-approximating opens cover a, a finite subcover dominates a',
/// and s is the join of the finitely many middle terms.
pub fn interpolate(f: &Frame, a_prime: usize, a: usize) -> Result<usize, InterpolateError> {
    if let Some(w) = locally_compact(f).witness {
        return Err(InterpolateError::NotLocallyCompact(f.id(w).to_string()));
    }
    if !way_below(f, a_prime, a) {
        return Err(InterpolateError::NotWayBelow(
            f.id(a_prime).to_string(),
            f.id(a).to_string(),
        ));
    }
    // cover of a by elements t admitting t << s << a, remembering a
    // middle term for each
    let cover: Vec<(usize, usize)> = f
        .elems()
        .filter_map(|t| {
            f.elems()
                .find(|&s| way_below(f, t, s) && way_below(f, s, a))
                .map(|s| (t, s))
        })
        .collect();
    let covered = f.join_all(cover.iter().map(|&(t, _)| t));
    assert!(
        f.leq(a, covered),
        "local compactness guarantees the double cover reaches a"
    );
    // greedy finite subcover dominating a'
    let mut acc = f.bottom();
    let mut middles = Vec::new();
    for &(t, s) in &cover {
        if f.leq(a_prime, acc) {
            break;
        }
        acc = f.join(acc, t);
        middles.push(s);
    }
    assert!(f.leq(a_prime, acc), "subcover must dominate a'");
    let s = f.join_all(middles);
    assert!(
        way_below(f, a_prime, s) && way_below(f, s, a),
        "interpolant must satisfy both relations"
    );
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{boolean_square, chain, sierpinski, terminal};

    fn small_universe() -> Vec<Frame> {
        vec![
            chain(1),
            terminal(),
            sierpinski().0,
            boolean_square(),
            chain(5),
        ]
    }

    #[test]
    fn shortcut_matches_definition() {
        for f in small_universe() {
            for a in f.elems() {
                for b in f.elems() {
                    assert_eq!(
                        way_below(&f, a, b),
                        way_below_bruteforce(&f, a, b),
                        "mismatch at {a},{b} in {f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn bottom_is_way_below_everything() {
        for f in small_universe() {
            for b in f.elems() {
                assert!(way_below(&f, f.bottom(), b));
                assert!(way_below_bruteforce(&f, f.bottom(), b));
            }
        }
    }

    #[test]
    fn compactness_on_finite_frames() {
        for f in small_universe() {
            for a in f.elems() {
                assert!(is_compact(&f, a));
            }
        }
    }

    #[test]
    fn way_below_implies_leq_and_biclosure() {
        for f in small_universe() {
            for a in f.elems() {
                for b in f.elems() {
                    if way_below(&f, a, b) {
                        assert!(f.leq(a, b));
                        for a2 in f.elems() {
                            for b2 in f.elems() {
                                if f.leq(a2, a) && f.leq(b, b2) {
                                    assert!(way_below(&f, a2, b2));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn finite_joins_of_way_below() {
        for f in small_universe() {
            for b in f.elems() {
                for a1 in f.elems() {
                    for a2 in f.elems() {
                        if way_below(&f, a1, b) && way_below(&f, a2, b) {
                            assert!(way_below(&f, f.join(a1, a2), b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn finite_frames_are_locally_compact() {
        for f in small_universe() {
            assert!(locally_compact(&f).holds());
        }
    }

    #[test]
    fn interpolation_on_finite_frames() {
        for f in small_universe() {
            for a in f.elems() {
                for ap in f.elems() {
                    if way_below(&f, ap, a) {
                        let s = interpolate(&f, ap, a).unwrap();
                        assert!(way_below(&f, ap, s));
                        assert!(way_below(&f, s, a));
                    }
                }
            }
        }
    }

    #[test]
    fn interpolation_requires_way_below() {
        let sq = boolean_square();
        let (a, b) = (sq.index_of("a").unwrap(), sq.index_of("b").unwrap());
        let err = interpolate(&sq, a, b).unwrap_err();
        assert!(matches!(err, InterpolateError::NotWayBelow(..)));
    }

    /// If a' << a and a family covers a, some finite subfamily's join
    /// is way above a' — checked by enumerating covers.
    #[test]
    fn way_below_gives_finite_subcovers() {
        let f = boolean_square();
        let n = f.len();
        for a in f.elems() {
            for ap in f.elems() {
                if !way_below(&f, ap, a) {
                    continue;
                }
                for mask in 0u32..(1 << n) {
                    let cover: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    if !f.leq(a, f.join_all(cover.iter().copied())) {
                        continue;
                    }
                    let found = (0..(1u32 << cover.len())).any(|sub| {
                        let join = f.join_all(
                            cover
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| sub >> i & 1 == 1)
                                .map(|(_, &x)| x),
                        );
                        way_below(&f, ap, join)
                    });
                    assert!(found);
                }
            }
        }
    }
}

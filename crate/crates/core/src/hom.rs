//! Frame homomorphisms, points, and the specialization order.
//!
//! In a finite lattice, preserving top, bottom, binary meets and binary
//! joins already forces preservation of joins and meets of every subset
//! (arbitrary joins reduce to finite ones, finite ones to binary plus
//! nullary). `check_hom` therefore only scans pairs; the equivalence
//! itself is re-verified exhaustively on tiny frames in the test suite.

use crate::frame::Frame;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomDefect {
    #[error("top is not preserved")]
    Top,
    #[error("bottom is not preserved")]
    Bottom,
    #[error("meet of `{0}` and `{1}` is not preserved")]
    Meet(String, String),
    #[error("join of `{0}` and `{1}` is not preserved")]
    Join(String, String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("image has {got} entries for a source of {want} elements")]
    WrongLength { want: usize, got: usize },
    #[error("homomorphisms have different source frames")]
    SourceMismatch,
    #[error("not a homomorphism: {0}")]
    NotAHom(HomDefect),
}

/// A frame homomorphism: total map preserving finite meets and all joins.
/// Contravariantly, a locale map from target's locale to source's.
#[derive(Clone, PartialEq, Eq)]
pub struct FrameHom {
    source: Frame,
    target: Frame,
    image: Vec<usize>,
}

/// Checks the homomorphism laws for a candidate image map, returning the
/// first violated law with its witness pair.
pub fn check_hom(source: &Frame, target: &Frame, image: &[usize]) -> Result<(), HomDefect> {
    if image[source.top()] != target.top() {
        return Err(HomDefect::Top);
    }
    if image[source.bottom()] != target.bottom() {
        return Err(HomDefect::Bottom);
    }
    for a in source.elems() {
        for b in a..source.len() {
            if image[source.meet(a, b)] != target.meet(image[a], image[b]) {
                return Err(HomDefect::Meet(source.id(a).into(), source.id(b).into()));
            }
            if image[source.join(a, b)] != target.join(image[a], image[b]) {
                return Err(HomDefect::Join(source.id(a).into(), source.id(b).into()));
            }
        }
    }
    Ok(())
}

impl FrameHom {
    pub fn new(source: Frame, target: Frame, image: Vec<usize>) -> Result<FrameHom, HomError> {
        if image.len() != source.len() {
            return Err(HomError::WrongLength {
                want: source.len(),
                got: image.len(),
            });
        }
        check_hom(&source, &target, &image).map_err(HomError::NotAHom)?;
        Ok(FrameHom {
            source,
            target,
            image,
        })
    }

    pub fn identity(f: &Frame) -> FrameHom {
        FrameHom {
            source: f.clone(),
            target: f.clone(),
            image: f.elems().collect(),
        }
    }

    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    /// self after other: applies `other` first.
    pub fn compose(&self, other: &FrameHom) -> FrameHom {
        assert_eq!(other.target, self.source, "composition type mismatch");
        FrameHom {
            source: other.source.clone(),
            target: self.target.clone(),
            image: other.image.iter().map(|&a| self.image[a]).collect(),
        }
    }
}

impl std::fmt::Debug for FrameHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FrameHom({:?})", self.image)
    }
}

/// A point of the locale of `f`: a frame homomorphism into the
/// two-element frame.
pub type Point = FrameHom;

/// All points of a frame, i.e. all homomorphisms into the two-element
/// frame, in a deterministic order.
///
/// Each point is the characteristic map of the filter above a join-prime
/// element; the enumeration is by join-prime index. That this captures
/// every hom into 2 is re-checked against brute force in the tests.
pub fn points(f: &Frame) -> Vec<Point> {
    let two = crate::frame::terminal();
    f.join_primes()
        .into_iter()
        .map(|p| {
            let image: Vec<usize> = f
                .elems()
                .map(|u| if f.leq(p, u) { two.top() } else { two.bottom() })
                .collect();
            FrameHom::new(f.clone(), two.clone(), image).expect("prime filter map is a hom")
        })
        .collect()
}

/// Pointwise comparison of two points (or any two homs with equal
/// sources and targets): p <= q iff p(u) <= q(u) for every u.
pub fn specialization_leq(p: &FrameHom, q: &FrameHom) -> Result<bool, HomError> {
    if p.source != q.source || p.target != q.target {
        return Err(HomError::SourceMismatch);
    }
    Ok(p.source
        .elems()
        .all(|u| p.target.leq(p.apply(u), q.apply(u))))
}

/// Poset of points of `f` under specialization, with point ids `p0..`.
pub fn points_poset(f: &Frame) -> crate::poset::Poset {
    let pts = points(f);
    let ids: Vec<String> = (0..pts.len()).map(|i| format!("p{i}")).collect();
    let mut leq = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            if specialization_leq(p, q).unwrap() {
                leq.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    crate::poset::Poset::from_leq(&ids, &leq).expect("specialization is a partial order")
}

/// Every frame homomorphism from `f` to `g`, deterministically ordered.
///
/// Uses the finite duality with monotone maps between join-prime posets:
/// a hom f -> g corresponds to a monotone map J(g) -> J(f), with
/// h(u) = join of the primes q of g whose image lies below u.
pub fn all_homs(f: &Frame, g: &Frame) -> Vec<FrameHom> {
    let pf = f.join_primes();
    let pg = g.join_primes();
    let mut out = Vec::new();
    // assignment[i]: index into pf for the i-th prime of g
    let mut assignment = vec![0usize; pg.len()];
    enumerate_monotone(f, g, &pf, &pg, 0, &mut assignment, &mut out);
    out
}

fn enumerate_monotone(
    f: &Frame,
    g: &Frame,
    pf: &[usize],
    pg: &[usize],
    at: usize,
    assignment: &mut Vec<usize>,
    out: &mut Vec<FrameHom>,
) {
    if at == pg.len() {
        let image: Vec<usize> = f
            .elems()
            .map(|u| {
                g.join_all(
                    pg.iter()
                        .enumerate()
                        .filter(|(i, _)| f.leq(pf[assignment[*i]], u))
                        .map(|(_, &q)| q),
                )
            })
            .collect();
        out.push(
            FrameHom::new(f.clone(), g.clone(), image).expect("monotone prime map induces a hom"),
        );
        return;
    }
    for cand in 0..pf.len() {
        let ok = (0..at).all(|prev| {
            (!g.leq(pg[prev], pg[at]) || f.leq(pf[assignment[prev]], pf[cand]))
                && (!g.leq(pg[at], pg[prev]) || f.leq(pf[cand], pf[assignment[prev]]))
        });
        if ok {
            assignment[at] = cand;
            enumerate_monotone(f, g, pf, pg, at + 1, assignment, out);
        }
    }
}

/// Brute-force hom enumeration over all |g|^|f| maps. Exponential;
/// retained as the independent oracle for `all_homs` and `points`.
pub fn all_homs_bruteforce(f: &Frame, g: &Frame) -> Vec<FrameHom> {
    let n = f.len();
    let m = g.len();
    let total = (m as u64).checked_pow(n as u32).expect("hom space too big");
    assert!(total <= 1 << 24, "brute-force hom space too big");
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let image: Vec<usize> = (0..n)
            .map(|_| {
                let v = (c % m as u64) as usize;
                c /= m as u64;
                v
            })
            .collect();
        if check_hom(f, g, &image).is_ok() {
            out.push(FrameHom {
                source: f.clone(),
                target: g.clone(),
                image,
            });
        }
    }
    out
}

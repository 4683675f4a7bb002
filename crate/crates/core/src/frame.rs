//! Finite frames: complete lattices satisfying the frame distributive law.
//!
//! For a finite poset, being a complete lattice reduces to having a top,
//! a bottom, and binary meets and joins; frame distributivity reduces to
//! the binary law `a /\ (b \/ c) = (a /\ b) \/ (a /\ c)`. `check_frame`
//! reports the first violation it finds, with a witness.

use crate::bits::Bits;
use crate::poset::Poset;
use std::sync::Arc;
use thiserror::Error;

/// First reason a poset fails to be a frame.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameDefect {
    #[error("no greatest element")]
    NoTop,
    #[error("no least element")]
    NoBottom,
    #[error("elements `{0}` and `{1}` have no meet")]
    NoMeet(String, String),
    #[error("elements `{0}` and `{1}` have no join")]
    NoJoin(String, String),
    #[error("distributivity fails: {a} /\\ ({b} \\/ {c}) = {lhs} but ({a} /\\ {b}) \\/ ({a} /\\ {c}) = {rhs}")]
    Distributivity {
        a: String,
        b: String,
        c: String,
        lhs: String,
        rhs: String,
    },
}

/// Outcome of validating a poset as a frame.
#[derive(Debug, Clone)]
pub struct FrameReport {
    pub defect: Option<FrameDefect>,
}

impl FrameReport {
    pub fn valid(&self) -> bool {
        self.defect.is_none()
    }
}

struct Tables {
    top: usize,
    bottom: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
}

/// Greatest lower bound of a pair, if it exists: the greatest element of
/// the common lower bounds.
fn glb(p: &Poset, a: usize, b: usize) -> Option<usize> {
    let cand = p.downset(a).intersection(p.downset(b));
    let found = cand.iter().find(|&k| cand.is_subset(p.downset(k)));
    found
}

fn lub(p: &Poset, a: usize, b: usize) -> Option<usize> {
    let cand = p.upset(a).intersection(p.upset(b));
    let found = cand.iter().find(|&k| cand.is_subset(p.upset(k)));
    found
}

fn build_tables(p: &Poset) -> Result<Tables, FrameDefect> {
    let n = p.len();
    let top = (0..n)
        .find(|&t| (0..n).all(|x| p.leq(x, t)))
        .ok_or(FrameDefect::NoTop)?;
    let bottom = (0..n)
        .find(|&b| (0..n).all(|x| p.leq(b, x)))
        .ok_or(FrameDefect::NoBottom)?;
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for a in 0..n {
        for b in a..n {
            let m =
                glb(p, a, b).ok_or_else(|| FrameDefect::NoMeet(p.id(a).into(), p.id(b).into()))?;
            let j =
                lub(p, a, b).ok_or_else(|| FrameDefect::NoJoin(p.id(a).into(), p.id(b).into()))?;
            meet[a * n + b] = m as u32;
            meet[b * n + a] = m as u32;
            join[a * n + b] = j as u32;
            join[b * n + a] = j as u32;
        }
    }
    Ok(Tables {
        top,
        bottom,
        meet,
        join,
    })
}

/// Checks whether a (well-formed) poset is a frame. Malformed order data
/// never reaches this point: `Poset` constructors reject it.
pub fn check_frame(p: &Poset) -> FrameReport {
    let t = match build_tables(p) {
        Ok(t) => t,
        Err(d) => return FrameReport { defect: Some(d) },
    };
    let n = p.len();
    let meet = |a: usize, b: usize| t.meet[a * n + b] as usize;
    let join = |a: usize, b: usize| t.join[a * n + b] as usize;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = meet(a, join(b, c));
                let rhs = join(meet(a, b), meet(a, c));
                if lhs != rhs {
                    return FrameReport {
                        defect: Some(FrameDefect::Distributivity {
                            a: p.id(a).into(),
                            b: p.id(b).into(),
                            c: p.id(c).into(),
                            lhs: p.id(lhs).into(),
                            rhs: p.id(rhs).into(),
                        }),
                    };
                }
            }
        }
    }
    FrameReport { defect: None }
}

struct FrameInner {
    poset: Poset,
    top: usize,
    bottom: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
}

/// A finite frame. Immutable after construction; cloning is cheap.
#[derive(Clone)]
pub struct Frame {
    inner: Arc<FrameInner>,
}

// Associativity is implied by the tables being genuine glb/lub, but we
// scan anyway to catch constructor bugs. Cubic, so capped.
const LAW_SCAN_LIMIT: usize = 512;

impl Frame {
    pub fn new(poset: Poset) -> Result<Frame, FrameDefect> {
        if let Some(d) = check_frame(&poset).defect {
            return Err(d);
        }
        let t = build_tables(&poset).expect("checked");
        Ok(Frame::from_tables(poset, t))
    }

    /// Trusted path for lattices whose meet/join come from set
    /// operations (C-ideal intersections and saturated unions). The law
    /// scan still runs at small sizes.
    pub(crate) fn from_parts(
        poset: Poset,
        top: usize,
        bottom: usize,
        meet: Vec<u32>,
        join: Vec<u32>,
    ) -> Frame {
        Frame::from_tables(
            poset,
            Tables {
                top,
                bottom,
                meet,
                join,
            },
        )
    }

    fn from_tables(poset: Poset, t: Tables) -> Frame {
        let f = Frame {
            inner: Arc::new(FrameInner {
                poset,
                top: t.top,
                bottom: t.bottom,
                meet: t.meet,
                join: t.join,
            }),
        };
        if f.len() <= LAW_SCAN_LIMIT {
            f.law_scan();
        }
        f
    }

    /// Full scan of the lattice laws on the cached tables.
    fn law_scan(&self) {
        let n = self.len();
        for a in 0..n {
            assert_eq!(self.meet(a, a), a, "meet not idempotent");
            assert_eq!(self.join(a, a), a, "join not idempotent");
            assert_eq!(self.meet(a, self.top()), a);
            assert_eq!(self.join(a, self.bottom()), a);
            for b in 0..n {
                assert_eq!(self.meet(a, b), self.meet(b, a), "meet not commutative");
                assert_eq!(self.join(a, b), self.join(b, a), "join not commutative");
                assert_eq!(self.meet(a, self.join(a, b)), a, "absorption fails");
                assert_eq!(self.join(a, self.meet(a, b)), a, "absorption fails");
                for c in 0..n {
                    assert_eq!(
                        self.meet(a, self.meet(b, c)),
                        self.meet(self.meet(a, b), c),
                        "meet not associative"
                    );
                    assert_eq!(
                        self.join(a, self.join(b, c)),
                        self.join(self.join(a, b), c),
                        "join not associative"
                    );
                }
            }
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.inner.poset
    }

    pub fn len(&self) -> usize {
        self.inner.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    pub fn elems(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn top(&self) -> usize {
        self.inner.top
    }

    pub fn bottom(&self) -> usize {
        self.inner.bottom
    }

    pub fn id(&self, a: usize) -> &str {
        self.inner.poset.id(a)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.inner.poset.index_of(id)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.inner.poset.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.inner.meet[a * self.len() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.inner.join[a * self.len() + b] as usize
    }

    /// Meet of a set; the empty meet is top.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items
            .into_iter()
            .fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Join of a set; the empty join is bottom.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items
            .into_iter()
            .fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    /// Closure of a set under finite joins, including the empty join.
    /// The result is directed and has the same join as the input plus
    /// bottom. Returned sorted by element index.
    pub fn directify(&self, set: &[usize]) -> Vec<usize> {
        let mut out = Bits::singleton(self.len(), self.bottom());
        for &m in set {
            out.insert(m);
        }
        loop {
            let cur: Vec<usize> = out.iter().collect();
            let mut grew = false;
            for &a in &cur {
                for &b in &cur {
                    let j = self.join(a, b);
                    if !out.contains(j) {
                        out.insert(j);
                        grew = true;
                    }
                }
            }
            if !grew {
                return out.iter().collect();
            }
        }
    }

    /// Join-prime elements: p != bottom with p <= a \/ b implying
    /// p <= a or p <= b. In a finite frame these are exactly the points'
    /// filters' minima.
    pub fn join_primes(&self) -> Vec<usize> {
        self.elems()
            .filter(|&p| {
                p != self.bottom()
                    && self.elems().all(|a| {
                        self.elems().all(|b| {
                            !self.leq(p, self.join(a, b)) || self.leq(p, a) || self.leq(p, b)
                        })
                    })
            })
            .collect()
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.poset == other.inner.poset
                && self.inner.top == other.inner.top
                && self.inner.bottom == other.inner.bottom)
    }
}

impl Eq for Frame {}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Frame({:?})", self.inner.poset.ids())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("isomorphism search is capped at {cap} elements, got {got}")]
pub struct IsoCapError {
    pub cap: usize,
    pub got: usize,
}

const ISO_CAP: usize = 12;

/// Searches for an order isomorphism, returning the image vector if one
/// exists. Exponential, so guarded by a size cap.
pub fn order_iso(f: &Frame, g: &Frame) -> Result<Option<Vec<usize>>, IsoCapError> {
    if f.len() != g.len() {
        return Ok(None);
    }
    let n = f.len();
    if n > ISO_CAP {
        return Err(IsoCapError {
            cap: ISO_CAP,
            got: n,
        });
    }
    // Signature pruning: (downset size, upset size) must match.
    let sig = |fr: &Frame, x: usize| (fr.poset().downset(x).count(), fr.poset().upset(x).count());
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        f: &Frame,
        g: &Frame,
        sig: &dyn Fn(&Frame, usize) -> (usize, usize),
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        at: usize,
    ) -> bool {
        let n = f.len();
        if at == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || sig(f, at) != sig(g, cand) {
                continue;
            }
            let ok = (0..at).all(|prev| {
                f.leq(prev, at) == g.leq(image[prev], cand)
                    && f.leq(at, prev) == g.leq(cand, image[prev])
            });
            if ok {
                image[at] = cand;
                used[cand] = true;
                if rec(f, g, sig, image, used, at + 1) {
                    return true;
                }
                used[cand] = false;
            }
        }
        false
    }
    if rec(f, g, &sig, &mut image, &mut used, 0) {
        Ok(Some(image))
    } else {
        Ok(None)
    }
}

/// The two-element frame bot < top: the opens of the one-point space.
pub fn terminal() -> Frame {
    Frame::new(Poset::from_covers(&["bot", "top"], &[("bot", "top")]).unwrap()).unwrap()
}

/// The Sierpinski frame bot < omega < top, together with the index of
/// its generic open omega.
pub fn sierpinski() -> (Frame, usize) {
    let f = Frame::new(
        Poset::from_covers(
            &["bot", "omega", "top"],
            &[("bot", "omega"), ("omega", "top")],
        )
        .unwrap(),
    )
    .unwrap();
    let omega = f.index_of("omega").unwrap();
    (f, omega)
}

/// The four-element Boolean frame: opens of the two-point discrete space.
pub fn boolean_square() -> Frame {
    Frame::new(
        Poset::from_covers(
            &["bot", "a", "b", "top"],
            &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
        )
        .unwrap(),
    )
    .unwrap()
}

/// Chain frame with n elements; chain(1) is the trivial frame with
/// bot = top.
pub fn chain(n: usize) -> Frame {
    assert!(n >= 1, "a frame needs at least one element");
    Frame::new(Poset::chain(n)).unwrap()
}

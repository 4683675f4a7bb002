//! Exponential frames over the Sierpinski base, verified against an
//! independent upper-set oracle.
//!
//! For a finite frame A the exponential frame is presented by one
//! generator per open `s`, read "s is way below the putative open".
//! Antitonicity and the finite-join relation fold into the generator
//! semilattice (the meet of the generators at s and s' is the generator
//! at s \/ s'), so the semilattice is A with the order reversed; the
//! interpolation relation becomes a coverage instance per generator,
//! which on a finite base is satisfied by down-closure alone since
//! every open is way below itself.
//!
//! The oracle is Scott's: the frame of upward-closed subsets of A,
//! enumerated directly with no presentation machinery in the path.
//! The finite verification of the exponential's universal property is
//! evidence for the construction, not a proof of it — the infinite
//! side lives in the chain module.

use crate::bits::Bits;
use crate::frame::Frame;
use crate::hom::{all_homs, FrameHom};
use crate::poset::Poset;
use crate::presentation::{
    AssignmentViolation, CapError, GenSemilattice, Instance, Presentation, PresentedFrame,
};
use crate::tensor::{product_map, TensorFrame};
use crate::waybelow::way_below;
use thiserror::Error;

pub use crate::bexp::{bexp_relations, materialize_bexp, verify_bexp_universal, BExpRelations};

/// The exponential frame over the Sierpinski target, with its base and
/// generator embedding.
#[derive(Clone)]
pub struct SierpinskiExp {
    base: Frame,
    pf: PresentedFrame,
}

/// Presents the exponential frame for a finite (hence locally compact)
/// base. Generator k of the semilattice is the question at base open k.
pub fn sierpinski_exp(base: &Frame, cap: usize) -> Result<SierpinskiExp, CapError> {
    let n = base.len();
    let ids: Vec<String> = (0..n).map(|s| format!("[{}<<O]", base.id(s))).collect();
    let mut meet = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            meet[a * n + b] = base.join(a, b) as u32;
        }
    }
    let sl = GenSemilattice::new(ids, meet).expect("reversed frame order is a semilattice");
    // interpolation instances: each generator is covered by the
    // generators way above its open (on a finite base the open itself
    // qualifies, so these saturate trivially)
    let instances: Vec<Instance> = (0..n)
        .map(|s| Instance {
            target: s,
            cover: Bits::from_indices(n, (0..n).filter(|&sp| way_below(base, s, sp))),
        })
        .collect();
    let pres = Presentation::new(sl, instances);
    let pf = pres.presented_frame(cap)?;
    Ok(SierpinskiExp {
        base: base.clone(),
        pf,
    })
}

impl SierpinskiExp {
    pub fn base(&self) -> &Frame {
        &self.base
    }

    pub fn frame(&self) -> &Frame {
        self.pf.frame()
    }

    pub fn presented(&self) -> &PresentedFrame {
        &self.pf
    }

    /// The exponential element presented by the generator at base
    /// open `s`.
    pub fn generator(&self, s: usize) -> usize {
        self.pf.embed(s)
    }

    /// The point of the exponential corresponding to base open `a`:
    /// the generator at s holds exactly when s is way below a.
    pub fn point_of_open(&self, a: usize) -> FrameHom {
        let two = crate::frame::terminal();
        let images: Vec<usize> = (0..self.base.len())
            .map(|s| {
                if way_below(&self.base, s, a) {
                    two.top()
                } else {
                    two.bottom()
                }
            })
            .collect();
        self.pf
            .eval_assignment(&two, &images)
            .expect("way-below cones respect the relations")
    }
}

impl std::fmt::Debug for SierpinskiExp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SierpinskiExp(base {}, {} elements)",
            self.base.len(),
            self.frame().len()
        )
    }
}

/// The upper-set oracle: the frame of upward-closed subsets of the
/// base, ordered by inclusion. Built straight from subset enumeration;
/// shares nothing with the presentation path it validates.
pub struct ScottOracle {
    pub frame: Frame,
    /// the upper set backing each frame element, in element order
    pub sets: Vec<Bits>,
}

impl ScottOracle {
    pub fn element_of(&self, set: &Bits) -> Option<usize> {
        self.sets.iter().position(|s| s == set)
    }
}

pub fn scott_oracle(base: &Frame) -> ScottOracle {
    let sets = base.poset().upper_sets();
    let ids: Vec<String> = (0..sets.len()).map(|i| format!("u{i}")).collect();
    let mut leq = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            if a.is_subset(b) {
                leq.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let frame = Frame::new(Poset::from_leq(&ids, &leq).unwrap())
        .expect("upper sets form a frame under inclusion");
    ScottOracle { frame, sets }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpIsoError {
    #[error(transparent)]
    Cap(#[from] CapError),
    #[error("element counts differ: exponential has {exp}, oracle has {oracle}")]
    CountMismatch { exp: usize, oracle: usize },
    #[error("generator assignment rejected: {0}")]
    Assignment(AssignmentViolation),
    #[error("canonical map is not injective at elements {0} and {1}")]
    NotInjective(usize, usize),
    #[error("canonical map does not reflect order at elements {0} and {1}")]
    OrderMismatch(usize, usize),
}

/// Builds the canonical map sending the generator at `s` to the upper
/// set of opens `s` is way below, extends it along the presentation,
/// and verifies it is an order isomorphism onto the oracle.
pub fn exp_iso_check(base: &Frame, cap: usize) -> Result<FrameHom, ExpIsoError> {
    let exp = sierpinski_exp(base, cap)?;
    exp_iso_check_on(&exp)
}

/// The same check against a pre-built exponential, reporting the first
/// mismatch instead of panicking.
pub fn exp_iso_check_on(exp: &SierpinskiExp) -> Result<FrameHom, ExpIsoError> {
    let base = exp.base();
    let oracle = scott_oracle(base);
    if exp.frame().len() != oracle.frame.len() {
        return Err(ExpIsoError::CountMismatch {
            exp: exp.frame().len(),
            oracle: oracle.frame.len(),
        });
    }
    let images: Vec<usize> = (0..base.len())
        .map(|s| {
            let upper = Bits::from_indices(
                base.len(),
                (0..base.len()).filter(|&a| way_below(base, s, a)),
            );
            oracle
                .element_of(&upper)
                .expect("way-below cones are upper sets")
        })
        .collect();
    let hom = exp
        .presented()
        .eval_assignment(&oracle.frame, &images)
        .map_err(ExpIsoError::Assignment)?;
    for a in exp.frame().elems() {
        for b in exp.frame().elems() {
            if a != b && hom.apply(a) == hom.apply(b) {
                return Err(ExpIsoError::NotInjective(a, b));
            }
            if exp.frame().leq(a, b) != oracle.frame.leq(hom.apply(a), hom.apply(b)) {
                return Err(ExpIsoError::OrderMismatch(a, b));
            }
        }
    }
    Ok(hom)
}

/// Transposes a tensor element `u` of `Z (x) A` to the hom out of the
/// exponential: the generator at `s` maps to the join of the z's fitting
/// in `u` over some open way above `s`. A relation violation here would
/// falsify the construction, so it is a panic, not an error value.
pub fn curry(exp: &SierpinskiExp, t: &TensorFrame, u: usize) -> FrameHom {
    assert_eq!(
        t.right(),
        exp.base(),
        "tensor right factor must be the base"
    );
    let base = exp.base();
    let images: Vec<usize> = (0..base.len())
        .map(|s| t.big_f(|a, b| way_below(base, a, b), s, u))
        .collect();
    exp.presented().eval_assignment(t.left(), &images).expect(
        "internal consistency failure: curried assignment violates the exponential relations",
    )
}

/// Transposes a hom out of the exponential back to a tensor element:
/// the join over all base opens of the rectangle at the generator's
/// image.
pub fn uncurry(exp: &SierpinskiExp, t: &TensorFrame, h: &FrameHom) -> usize {
    assert_eq!(
        t.right(),
        exp.base(),
        "tensor right factor must be the base"
    );
    assert_eq!(
        h.source(),
        exp.frame(),
        "hom must come out of the exponential"
    );
    assert_eq!(
        h.target(),
        t.left(),
        "hom target must be the tensor left factor"
    );
    t.frame()
        .join_all((0..exp.base().len()).map(|s| t.rect(h.apply(exp.generator(s)), s)))
}

/// The evaluation open: the uncurrying of the identity, living in
/// `exponential (x) base`.
pub fn evaluation_open(exp: &SierpinskiExp, cap: usize) -> Result<(TensorFrame, usize), CapError> {
    let t = TensorFrame::new(exp.frame(), exp.base(), cap)?;
    let ev = uncurry(exp, &t, &FrameHom::identity(exp.frame()));
    Ok((t, ev))
}

/// All homs from the exponential into `z`, enumerated through the
/// presentation: every meet-preserving generator assignment that
/// respects the coverage. Candidate filtering is one of the parallel
/// surfaces.
pub fn all_exp_homs(exp: &SierpinskiExp, z: &Frame) -> Vec<FrameHom> {
    let base = exp.base();
    let n = base.len();
    let m = z.len();
    let total = m.checked_pow(n as u32).expect("assignment space too big");
    let candidates: Vec<Vec<usize>> = crate::par::filter_map_range(total, |code| {
        let mut c = code;
        let images: Vec<usize> = (0..n)
            .map(|_| {
                let v = c % m;
                c /= m;
                v
            })
            .collect();
        // semilattice meet of generators is the base join
        if images[base.bottom()] != z.top() {
            return None;
        }
        for a in 0..n {
            for b in a..n {
                if images[base.join(a, b)] != z.meet(images[a], images[b]) {
                    return None;
                }
            }
        }
        Some(images)
    });
    candidates
        .into_iter()
        .filter_map(|images| exp.presented().eval_assignment(z, &images).ok())
        .collect()
}

#[derive(Debug, Clone)]
pub struct ZReport {
    pub tensor_elements: usize,
    pub hom_count: usize,
}

#[derive(Debug, Clone)]
pub struct UniversalReport {
    pub per_z: Vec<ZReport>,
    pub squares_checked: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniversalFailure {
    #[error("cap exceeded: {0}")]
    Cap(#[from] CapError),
    #[error("in test frame {z}: {tensor} tensor elements against {homs} homs")]
    CountMismatch {
        z: usize,
        tensor: usize,
        homs: usize,
    },
    #[error("currying is not injective on test frame {z}: elements {u1} and {u2} collide")]
    CurryCollision { z: usize, u1: usize, u2: usize },
    #[error("curried element {u} of test frame {z} does not uncurry back")]
    UncurryRoundTrip { z: usize, u: usize },
    #[error("hom {h} of test frame {z} does not survive uncurry-then-curry")]
    CurryRoundTrip { z: usize, h: usize },
    #[error("naturality square fails for hom {hom} between test frames {z_from} and {z_to} at element {u}")]
    Naturality {
        z_from: usize,
        z_to: usize,
        hom: usize,
        u: usize,
    },
}

/// Checks that transposition is a natural bijection on a universe of
/// test frames: for every Z, currying is a bijection from the tensor
/// `Z (x) A` onto the homs out of the exponential, uncurrying inverts
/// it, and both sides commute with every hom between test frames.
pub fn verify_universal(
    base: &Frame,
    zs: &[Frame],
    cap: usize,
) -> Result<UniversalReport, UniversalFailure> {
    let exp = sierpinski_exp(base, cap)?;
    let tensors: Vec<TensorFrame> = zs
        .iter()
        .map(|z| TensorFrame::new(z, base, cap))
        .collect::<Result<_, _>>()?;
    let mut per_z = Vec::new();
    let mut curried: Vec<Vec<FrameHom>> = Vec::new();
    for (zi, (z, t)) in zs.iter().zip(&tensors).enumerate() {
        let currys: Vec<FrameHom> = t.frame().elems().map(|u| curry(&exp, t, u)).collect();
        let homs = all_exp_homs(&exp, z);
        if currys.len() != homs.len() {
            return Err(UniversalFailure::CountMismatch {
                z: zi,
                tensor: currys.len(),
                homs: homs.len(),
            });
        }
        for (u1, c1) in currys.iter().enumerate() {
            for (u2, c2) in currys.iter().enumerate().skip(u1 + 1) {
                if c1.image() == c2.image() {
                    return Err(UniversalFailure::CurryCollision { z: zi, u1, u2 });
                }
            }
        }
        // every hom is hit: injective + equal counts gives bijectivity,
        // but check the round trips explicitly
        for (u, c) in currys.iter().enumerate() {
            if uncurry(&exp, t, c) != u {
                return Err(UniversalFailure::UncurryRoundTrip { z: zi, u });
            }
        }
        for (hi, h) in homs.iter().enumerate() {
            let u = uncurry(&exp, t, h);
            if curry(&exp, t, u).image() != h.image() {
                return Err(UniversalFailure::CurryRoundTrip { z: zi, h: hi });
            }
        }
        per_z.push(ZReport {
            tensor_elements: t.frame().len(),
            hom_count: homs.len(),
        });
        curried.push(currys);
    }
    // naturality in Z: transposition commutes with every hom between
    // test frames
    let mut squares = 0;
    for (zi, z_from) in zs.iter().enumerate() {
        for (zj, z_to) in zs.iter().enumerate() {
            for (hi, f) in all_homs(z_from, z_to).iter().enumerate() {
                let pm = product_map(f, &tensors[zi], &tensors[zj]);
                for u in tensors[zi].frame().elems() {
                    let lhs = &curried[zj][pm.apply(u)];
                    let rhs = f.compose(&curried[zi][u]);
                    squares += 1;
                    if lhs.image() != rhs.image() {
                        return Err(UniversalFailure::Naturality {
                            z_from: zi,
                            z_to: zj,
                            hom: hi,
                            u,
                        });
                    }
                }
            }
        }
    }
    Ok(UniversalReport {
        per_z,
        squares_checked: squares,
    })
}

/// If a point sits in an open d' and the rectangle `d' (x) a'` fits
/// under the evaluation open, then a' is below the point's open —
/// checked exhaustively.
pub fn evaluation_bound_check(exp: &SierpinskiExp, t: &TensorFrame, ev: usize) -> bool {
    let base = exp.base();
    let two = crate::frame::terminal();
    (0..base.len()).all(|a| {
        let p = exp.point_of_open(a);
        exp.frame().elems().all(|d| {
            (0..base.len())
                .all(|ap| !(p.apply(d) == two.top() && t.rect_leq(d, ap, ev)) || base.leq(ap, a))
        })
    })
}

/// The strengthening: under the same hypotheses, every cover of the
/// point's open has a finite subfamily dominating a'.
pub fn evaluation_subcover_check(exp: &SierpinskiExp, t: &TensorFrame, ev: usize) -> bool {
    let base = exp.base();
    let two = crate::frame::terminal();
    let n = base.len();
    (0..n).all(|a| {
        let p = exp.point_of_open(a);
        exp.frame().elems().all(|d| {
            (0..n).all(|ap| {
                if !(p.apply(d) == two.top() && t.rect_leq(d, ap, ev)) {
                    return true;
                }
                // every cover of a admits a subfamily dominating a'
                (0u32..(1 << n)).all(|mask| {
                    let cover: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    if !base.leq(a, base.join_all(cover.iter().copied())) {
                        return true;
                    }
                    (0u32..(1 << cover.len())).any(|sub| {
                        let join = base.join_all(
                            cover
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| sub >> i & 1 == 1)
                                .map(|(_, &x)| x),
                        );
                        base.leq(ap, join)
                    })
                })
            })
        })
    })
}

//! Localic products: the tensor of two frames as C-ideals of the
//! product semilattice of rectangles.
//!
//! The generator semilattice is the set-theoretic product with
//! componentwise meets; the coverage says a rectangle built from joins
//! is covered by its grid of constituent rectangles. Instances are
//! generated one per pair of subsets (with at least two members on each
//! side) plus the nullary instances collapsing `bot (x) y` and
//! `x (x) bot`; together with down-closure this forces exactly the
//! closure the one-sided and translated conditions would, so the set is
//! already stable under meet-translation.

use crate::bits::Bits;
use crate::frame::Frame;
use crate::hom::FrameHom;
use crate::presentation::{CapError, GenSemilattice, Instance, Presentation, PresentedFrame};

/// A formal rectangle: a pair of elements of the two factor frames.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rectangle {
    pub x: usize,
    pub y: usize,
}

/// The frame coproduct `left (x) right`, materialized.
#[derive(Clone)]
pub struct TensorFrame {
    left: Frame,
    right: Frame,
    pf: PresentedFrame,
}

fn tensor_semilattice(left: &Frame, right: &Frame) -> GenSemilattice {
    let (nl, nr) = (left.len(), right.len());
    let n = nl * nr;
    let mut ids = Vec::with_capacity(n);
    for x in 0..nl {
        for y in 0..nr {
            ids.push(format!("{}*{}", left.id(x), right.id(y)));
        }
    }
    let mut meet = vec![0u32; n * n];
    for x1 in 0..nl {
        for y1 in 0..nr {
            for x2 in 0..nl {
                for y2 in 0..nr {
                    let a = x1 * nr + y1;
                    let b = x2 * nr + y2;
                    meet[a * n + b] = (left.meet(x1, x2) * nr + right.meet(y1, y2)) as u32;
                }
            }
        }
    }
    GenSemilattice::new(ids, meet).expect("componentwise meets form a semilattice")
}

fn tensor_instances(left: &Frame, right: &Frame) -> Vec<Instance> {
    let (nl, nr) = (left.len(), right.len());
    assert!(
        nl + nr <= 24,
        "tensor coverage enumerates subset pairs; factors this large are out of scope"
    );
    let n = nl * nr;
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    // nullary: rectangles with a bottom side are the tensor bottom
    for y in 0..nr {
        out.push(Instance {
            target: left.bottom() * nr + y,
            cover: Bits::empty(n),
        });
    }
    for x in 0..nl {
        let target = x * nr + right.bottom();
        if x != left.bottom() {
            out.push(Instance {
                target,
                cover: Bits::empty(n),
            });
        }
    }
    // one instance per pair of subsets with >= 2 members on each side
    let subsets = |count: usize| -> Vec<Vec<usize>> {
        (0..(1u32 << count))
            .filter(|m| m.count_ones() >= 2)
            .map(|m| (0..count).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    };
    let xsubs = subsets(nl);
    let ysubs = subsets(nr);
    for xs in &xsubs {
        let jx = left.join_all(xs.iter().copied());
        for ys in &ysubs {
            let jy = right.join_all(ys.iter().copied());
            // skip when both joins are attained: down-closure already
            // forces the target
            if xs.contains(&jx) && ys.contains(&jy) {
                continue;
            }
            let cover = Bits::from_indices(
                n,
                xs.iter().flat_map(|&x| ys.iter().map(move |&y| x * nr + y)),
            );
            let target = jx * nr + jy;
            if seen.insert((target, cover.clone())) {
                out.push(Instance { target, cover });
            }
        }
    }
    out
}

/// The tensor site alone: product semilattice plus coverage, without
/// materializing the C-ideals.
pub fn tensor_presentation(left: &Frame, right: &Frame) -> Presentation {
    Presentation::new_prestabilized(
        tensor_semilattice(left, right),
        tensor_instances(left, right),
    )
}

impl TensorFrame {
    pub fn new(left: &Frame, right: &Frame, cap: usize) -> Result<TensorFrame, CapError> {
        let grid = left.len() * right.len();
        if grid > cap {
            return Err(CapError { cap, reached: grid });
        }
        let pres = tensor_presentation(left, right);
        let pf = pres.presented_frame(cap)?;
        Ok(TensorFrame {
            left: left.clone(),
            right: right.clone(),
            pf,
        })
    }

    pub fn left(&self) -> &Frame {
        &self.left
    }

    pub fn right(&self) -> &Frame {
        &self.right
    }

    /// The underlying frame of C-ideals.
    pub fn frame(&self) -> &Frame {
        self.pf.frame()
    }

    pub fn presented(&self) -> &PresentedFrame {
        &self.pf
    }

    #[inline]
    pub fn gen_index(&self, x: usize, y: usize) -> usize {
        x * self.right.len() + y
    }

    /// The element presented by the rectangle `x (x) y`.
    pub fn rect(&self, x: usize, y: usize) -> usize {
        self.pf.embed(self.gen_index(x, y))
    }

    /// Is the rectangle below the tensor element `u`? A single bit
    /// lookup in the saturated ideal.
    #[inline]
    pub fn rect_leq(&self, x: usize, y: usize, u: usize) -> bool {
        self.pf.ideal_contains(u, self.gen_index(x, y))
    }

    /// Largest left coefficient at `s`: the join of all y with
    /// `y (x) s <= u`. Satisfies the adjunction
    /// `rect(y, s) <= u  iff  y <= coeff(s, u)`.
    pub fn coeff(&self, s: usize, u: usize) -> usize {
        self.left
            .join_all(self.left.elems().filter(|&y| self.rect_leq(y, s, u)))
    }

    /// The way-below-guarded coefficient: the join of all y admitting
    /// s' way above `s` with `y (x) s' <= u`. `wb` decides way-below on
    /// the right frame.
    pub fn big_f<W>(&self, wb: W, s: usize, u: usize) -> usize
    where
        W: Fn(usize, usize) -> bool,
    {
        self.left.join_all(self.left.elems().filter(|&y| {
            self.right
                .elems()
                .any(|sp| wb(s, sp) && self.rect_leq(y, sp, u))
        }))
    }

    /// The coefficient decomposition of `u`: pairs `(coeff(s, u), s)`
    /// over every right element. The join of the corresponding
    /// rectangles recovers `u` exactly (asserted).
    pub fn decompose(&self, u: usize) -> Vec<(usize, usize)> {
        let parts: Vec<(usize, usize)> =
            self.right.elems().map(|s| (self.coeff(s, u), s)).collect();
        let rebuilt = self
            .frame()
            .join_all(parts.iter().map(|&(y, s)| self.rect(y, s)));
        assert_eq!(rebuilt, u, "coefficient decomposition must rebuild u");
        parts
    }

    /// Coproduct injection of the left factor: y maps to `y (x) top`.
    pub fn inj_left(&self) -> FrameHom {
        let image: Vec<usize> = self
            .left
            .elems()
            .map(|y| self.rect(y, self.right.top()))
            .collect();
        FrameHom::new(self.left.clone(), self.frame().clone(), image)
            .expect("left injection is a hom")
    }

    /// Coproduct injection of the right factor: x maps to `top (x) x`.
    pub fn inj_right(&self) -> FrameHom {
        let image: Vec<usize> = self
            .right
            .elems()
            .map(|x| self.rect(self.left.top(), x))
            .collect();
        FrameHom::new(self.right.clone(), self.frame().clone(), image)
            .expect("right injection is a hom")
    }
}

impl std::fmt::Debug for TensorFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TensorFrame({} (x) {}, {} elements)",
            self.left.len(),
            self.right.len(),
            self.frame().len()
        )
    }
}

/// The product map induced by a hom f between left factors, building
/// both tensors over the shared right factor `x`. Returns the tensors
/// along with the hom for callers that do not already hold them.
pub fn product_map_over(
    f: &FrameHom,
    x: &Frame,
    cap: usize,
) -> Result<(TensorFrame, TensorFrame, FrameHom), CapError> {
    let src = TensorFrame::new(f.source(), x, cap)?;
    let dst = TensorFrame::new(f.target(), x, cap)?;
    let hom = product_map(f, &src, &dst);
    Ok((src, dst, hom))
}

/// The product map on tensors induced by a hom f between left factors:
/// the hom `src -> dst` determined by `rect(y, x) -> rect(f(y), x)`,
/// where `src = f.source (x) X` and `dst = f.target (x) X`.
pub fn product_map(f: &FrameHom, src: &TensorFrame, dst: &TensorFrame) -> FrameHom {
    assert_eq!(f.source(), src.left(), "source tensor left factor mismatch");
    assert_eq!(f.target(), dst.left(), "target tensor left factor mismatch");
    assert_eq!(src.right(), dst.right(), "right factors must agree");
    let images: Vec<usize> = (0..src.left().len())
        .flat_map(|y| (0..src.right().len()).map(move |x| dst.rect(f.apply(y), x)))
        .collect();
    src.presented()
        .eval_assignment(dst.frame(), &images)
        .expect("rectangle image of a hom respects the tensor coverage")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{boolean_square, chain, order_iso, sierpinski, terminal};
    use crate::hom::all_homs;
    use crate::presentation::Downset as Dn;

    fn ss() -> TensorFrame {
        let (s, _) = sierpinski();
        TensorFrame::new(&s, &s, 4096).unwrap()
    }

    #[test]
    fn sierpinski_square_has_six_elements() {
        assert_eq!(ss().frame().len(), 6);
    }

    #[test]
    fn unit_law() {
        let two = terminal();
        for f in [sierpinski().0, boolean_square(), chain(4)] {
            let t = TensorFrame::new(&two, &f, 4096).unwrap();
            assert_eq!(t.frame().len(), f.len());
            // the right injection is the canonical iso
            let inj = t.inj_right();
            let mut seen: Vec<usize> = inj.image().to_vec();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), f.len(), "injection must be bijective");
            for a in f.elems() {
                for b in f.elems() {
                    assert_eq!(
                        f.leq(a, b),
                        t.frame().leq(inj.apply(a), inj.apply(b)),
                        "injection must reflect order"
                    );
                }
            }
            assert!(order_iso(t.frame(), &f).unwrap().is_some());
        }
    }

    #[test]
    fn rect_bounds_and_meets() {
        let t = ss();
        let s = t.left().clone();
        for y in s.elems() {
            assert_eq!(t.rect(s.bottom(), y), t.frame().bottom());
            assert_eq!(t.rect(y, s.bottom()), t.frame().bottom());
        }
        assert_eq!(t.rect(s.top(), s.top()), t.frame().top());
        for x1 in s.elems() {
            for y1 in s.elems() {
                for x2 in s.elems() {
                    for y2 in s.elems() {
                        assert_eq!(
                            t.rect(s.meet(x1, x2), s.meet(y1, y2)),
                            t.frame().meet(t.rect(x1, y1), t.rect(x2, y2)),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn spec_one_step_example() {
        // d = down-closure of { omega*top, top*omega }: no tensor
        // instance applies, because the join of omega and omega is
        // omega, not top
        let (s, omega) = sierpinski();
        let sl = tensor_semilattice(&s, &s);
        let pres = Presentation::new_prestabilized(sl.clone(), tensor_instances(&s, &s));
        let nr = s.len();
        let d = Dn::from_seed(&sl, [omega * nr + s.top(), s.top() * nr + omega]);
        assert_eq!(pres.one_step(&d), d);
        assert_eq!(pres.stabilization_depth(&d), 0);
    }

    #[test]
    fn coeff_examples() {
        let t = ss();
        let s = t.right().clone();
        let omega = s.index_of("omega").unwrap();
        // coeff(bot, u) = top for every u
        for u in t.frame().elems() {
            assert_eq!(t.coeff(s.bottom(), u), t.left().top());
        }
        // coeff(s, rect(y, s')) = y whenever bot < s <= s' and y < top
        for sv in [omega, s.top()] {
            for sp in s.elems().filter(|&sp| s.leq(sv, sp)) {
                for y in t.left().elems().filter(|&y| y != t.left().top()) {
                    assert_eq!(t.coeff(sv, t.rect(y, sp)), y);
                }
            }
        }
        // coeff(top, bottom) = bot when the left frame is nontrivial
        assert_eq!(t.coeff(s.top(), t.frame().bottom()), t.left().bottom());
    }

    #[test]
    fn adjunction_and_monotonicity() {
        let t = ss();
        let left = t.left().clone();
        let right = t.right().clone();
        for u in t.frame().elems() {
            for sv in right.elems() {
                let c = t.coeff(sv, u);
                for y in left.elems() {
                    assert_eq!(t.rect_leq(y, sv, u), left.leq(y, c), "adjunction");
                }
                // antitone in s
                for sv2 in right.elems() {
                    if right.leq(sv, sv2) {
                        assert!(left.leq(t.coeff(sv2, u), c));
                    }
                }
                // monotone in u
                for u2 in t.frame().elems() {
                    if t.frame().leq(u, u2) {
                        assert!(left.leq(c, t.coeff(sv, u2)));
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_rebuilds_everything() {
        let t = ss();
        for u in t.frame().elems() {
            let parts = t.decompose(u); // asserts internally
            assert_eq!(parts.len(), t.right().len());
        }
        // u = rect(y, s) recovers u; u = top includes (top, top)
        let top_parts = t.decompose(t.frame().top());
        assert!(top_parts.contains(&(t.left().top(), t.right().top())));
    }

    #[test]
    fn big_f_equals_coeff_on_finite_frames() {
        let t = ss();
        let right = t.right().clone();
        let wb = |a: usize, b: usize| right.leq(a, b);
        for u in t.frame().elems() {
            for s in right.elems() {
                assert_eq!(t.big_f(wb, s, u), t.coeff(s, u));
                // bigF(bot, u) = top
                assert_eq!(t.big_f(wb, right.bottom(), u), t.left().top());
            }
        }
    }

    #[test]
    fn finite_join_inequality() {
        // rect(y1 /\ y2, s1 \/ s2) <= rect(y1, s1) \/ rect(y2, s2)
        let t = ss();
        let f = t.frame().clone();
        let s = t.left().clone();
        for y1 in s.elems() {
            for s1 in s.elems() {
                for y2 in s.elems() {
                    for s2 in s.elems() {
                        let lhs = t.rect(s.meet(y1, y2), s.join(s1, s2));
                        let rhs = f.join(t.rect(y1, s1), t.rect(y2, s2));
                        assert!(f.leq(lhs, rhs));
                    }
                }
            }
        }
    }

    #[test]
    fn product_map_cases() {
        let (s, omega) = sierpinski();
        let two = terminal();
        let t_ss = ss();
        let t_2s = TensorFrame::new(&two, &s, 4096).unwrap();
        // identity induces identity
        let id = crate::hom::FrameHom::identity(&s);
        let pm = product_map(&id, &t_ss, &t_ss);
        assert_eq!(pm.image(), (0..t_ss.frame().len()).collect::<Vec<_>>());
        // omega -> top hom: rect(omega, omega) -> rect(top, omega)
        let h = all_homs(&s, &two)
            .into_iter()
            .find(|h| h.apply(omega) == two.top())
            .unwrap();
        let pm = product_map(&h, &t_ss, &t_2s);
        assert_eq!(
            pm.apply(t_ss.rect(omega, omega)),
            t_2s.rect(two.top(), omega)
        );
    }

    #[test]
    fn coeff_naturality_on_finite_frames() {
        // f(coeff_s(u)) = coeff_s(product_map(f)(u)) for all homs
        // sierpinski -> 2 and the sierpinski-square tensor
        let (s, _) = sierpinski();
        let two = terminal();
        let t_src = ss();
        let t_dst = TensorFrame::new(&two, &s, 4096).unwrap();
        for h in all_homs(&s, &two) {
            let pm = product_map(&h, &t_src, &t_dst);
            for u in t_src.frame().elems() {
                for sv in s.elems() {
                    assert_eq!(h.apply(t_src.coeff(sv, u)), t_dst.coeff(sv, pm.apply(u)));
                }
            }
        }
    }

    #[test]
    fn injections_are_homs() {
        let t = ss();
        let _ = t.inj_left();
        let _ = t.inj_right();
    }

    /// The coproduct universal property at the assignment level: valid
    /// generator assignments of the tensor presentation into Z are
    /// exactly the pairs of homs out of the factors.
    #[test]
    fn assignments_are_hom_pairs() {
        let (s, _) = sierpinski();
        let two = terminal();
        let t = ss();
        let pf = t.presented();
        let n = s.len() * s.len();
        let mut valid: Vec<Vec<usize>> = Vec::new();
        for code in 0u32..(1 << n) {
            let images: Vec<usize> = (0..n).map(|i| (code >> i & 1) as usize).collect();
            if pf.eval_assignment(&two, &images).is_ok() {
                valid.push(images);
            }
        }
        let homs = all_homs(&s, &two);
        assert_eq!(valid.len(), homs.len() * homs.len());
        // each pair of homs induces the assignment (x, y) -> h1(x) /\ h2(y)
        for h1 in &homs {
            for h2 in &homs {
                let mut images = Vec::with_capacity(n);
                for x in s.elems() {
                    for y in s.elems() {
                        images.push(two.meet(h1.apply(x), h2.apply(y)));
                    }
                }
                assert!(valid.contains(&images));
                // and restricting along the injections recovers the pair
                let hom = pf.eval_assignment(&two, &images).unwrap();
                let il = t.inj_left();
                let ir = t.inj_right();
                for x in s.elems() {
                    assert_eq!(hom.apply(il.apply(x)), h1.apply(x));
                    assert_eq!(hom.apply(ir.apply(x)), h2.apply(x));
                }
            }
        }
    }

    #[test]
    fn saturation_adds_the_joined_rectangle() {
        // the union of a*omega and b*omega saturates to top*omega
        let (s, omega) = sierpinski();
        let sq = boolean_square();
        let (a, b) = (sq.index_of("a").unwrap(), sq.index_of("b").unwrap());
        let pres = tensor_presentation(&sq, &s);
        let sl = pres.semilattice().clone();
        let d = Dn::from_seed(&sl, [a * s.len() + omega, b * s.len() + omega]);
        let sat = pres.saturate(&d);
        assert!(sat.bits().contains(sq.top() * s.len() + omega));
        assert!(!d.bits().contains(sq.top() * s.len() + omega));
        // and at the frame level the join of the two rectangles is the
        // joined rectangle exactly
        let t = TensorFrame::new(&sq, &s, 4096).unwrap();
        assert_eq!(
            t.frame().join(t.rect(a, omega), t.rect(b, omega)),
            t.rect(sq.top(), omega)
        );
    }

    #[test]
    fn product_map_over_builds_both_sides() {
        let (s, omega) = sierpinski();
        let two = terminal();
        let h = all_homs(&s, &two)
            .into_iter()
            .find(|h| h.apply(omega) == two.top())
            .unwrap();
        let (src, dst, pm) = product_map_over(&h, &s, 4096).unwrap();
        assert_eq!(src.frame().len(), 6);
        assert_eq!(dst.frame().len(), 3);
        assert_eq!(pm.apply(src.frame().top()), dst.frame().top());
    }

    #[test]
    fn grid_cap_is_enforced() {
        let (s, _) = sierpinski();
        let err = TensorFrame::new(&s, &s, 8).unwrap_err();
        assert_eq!(err.reached, 9);
    }

    #[test]
    fn tensor_frames_pass_check_frame() {
        let (s, _) = sierpinski();
        for t in [
            ss(),
            TensorFrame::new(&boolean_square(), &s, 4096).unwrap(),
            TensorFrame::new(&chain(4), &chain(4), 4096).unwrap(),
        ] {
            assert!(crate::frame::check_frame(t.frame().poset()).valid());
        }
    }
}

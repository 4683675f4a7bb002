//! Lazily represented infinite chain frames and the staircase tensor.
//!
//! Two chains are modeled. The ascending chain is the frame
//! `Fin(0) < Fin(1) < ... < Limit`: the opens `[0, n)` of the ray
//! `[0, oo)` together with the whole ray. The descending chain is
//! `Y(0) > Y(1) > ...` with an extra bottom below every `Y(k)`: the
//! shrinking opens `[0, e^-k)` of the unit interval. A C-ideal of the
//! descending-by-ascending tensor has principal columns, so it is
//! exactly an antitone height function; `Staircase` stores finitely
//! many generator rectangles plus a tail rule and derives the height at
//! the limit from C-ideal saturation (the infimum of the finite
//! heights).
//!
//! Way-below is exposed for the ascending chain only: the descending
//! chain's relation at its bottom depends on limit structure this
//! module does not model, and nothing here needs it.

/// Element of the ascending chain omega+1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ChainElem {
    Fin(u32),
    Limit,
}

use ChainElem::{Fin, Limit};

impl ChainElem {
    pub fn leq(self, other: ChainElem) -> bool {
        match (self, other) {
            (_, Limit) => true,
            (Limit, Fin(_)) => false,
            (Fin(a), Fin(b)) => a <= b,
        }
    }

    pub fn bottom() -> ChainElem {
        Fin(0)
    }

    pub fn top() -> ChainElem {
        Limit
    }

    pub fn max(self, other: ChainElem) -> ChainElem {
        if self.leq(other) {
            other
        } else {
            self
        }
    }
}

/// Element of the descending chain with bottom: Y(0) is the top,
/// Y(k+1) sits strictly below Y(k), and Bot sits below every Y(k).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum YElem {
    Bot,
    Y(u32),
}

use YElem::{Bot, Y};

impl YElem {
    pub fn leq(self, other: YElem) -> bool {
        match (self, other) {
            (Bot, _) => true,
            (Y(_), Bot) => false,
            (Y(a), Y(b)) => a >= b,
        }
    }

    pub fn top() -> YElem {
        Y(0)
    }

    pub fn max(self, other: YElem) -> YElem {
        if self.leq(other) {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: YElem) -> YElem {
        if self.leq(other) {
            self
        } else {
            other
        }
    }
}

/// Way-below on the ascending chain: a << b iff a <= b and a is not
/// the limit. Every finite element is compact; the limit is not, since
/// the family of all finite elements covers it with no finite
/// subfamily reaching it.
pub fn asc_way_below(a: ChainElem, b: ChainElem) -> bool {
    a != Limit && a.leq(b)
}

pub fn asc_is_compact(a: ChainElem) -> bool {
    asc_way_below(a, a)
}

/// Local compactness of the ascending chain. Finite elements are
/// compact, so they approximate themselves; the limit is the join of
/// all finite elements (no finite element bounds them all), each way
/// below it. The per-element facts are checked on a probe prefix.
pub fn asc_locally_compact(probe: u32) -> bool {
    (0..probe).all(|n| asc_way_below(Fin(n), Fin(n)))
        && (0..probe).all(|n| asc_way_below(Fin(n), Limit))
}

/// Local compactness of the descending chain. Every Y(k) is compact:
/// the join of any set of elements strictly below Y(k) is at most
/// Y(k+1), so a cover of Y(k) must contain an element at or above it.
/// Bot is way below itself via the empty subfamily. Checked on a probe
/// prefix of indices.
pub fn desc_locally_compact(probe: u32) -> bool {
    // Y(k) compact: the join of everything strictly smaller is Y(k+1),
    // which misses it; Bot approximates itself via the empty subfamily
    (0..probe).all(|k| !Y(k).leq(Y(k + 1)))
}

/// Interpolation on the ascending chain: a' << a yields s with
/// a' << s << a. A finite a' is compact, so it interpolates itself.
pub fn asc_interpolate(a_prime: ChainElem, a: ChainElem) -> Option<ChainElem> {
    if !asc_way_below(a_prime, a) {
        return None;
    }
    let s = a_prime;
    assert!(asc_way_below(a_prime, s) && asc_way_below(s, a));
    Some(s)
}

/// The point of the descending chain at zero: the frame map to the
/// two-element frame sending every open above Bot to top. (Every open
/// `[0, e^-k)` contains the point 0.)
pub fn desc_point_zero(y: YElem) -> bool {
    y != Bot
}

/// Tail behavior of a staircase beyond its explicit rectangles.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tail {
    /// Constant height at every further finite column.
    Flat(YElem),
    /// Height Y(m) at column Fin(m): the staircase inscribed under the
    /// exponential decay curve.
    Diagonal,
}

/// A C-ideal of the descending-by-ascending chain tensor, represented
/// by its generating rectangles plus a tail rule. The height at the
/// limit column is derived, never stored: saturation forces it to the
/// infimum of the finite heights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Staircase {
    /// (height, x-extent) generator rectangles
    rects: Vec<(YElem, ChainElem)>,
    tail: Tail,
}

impl Staircase {
    pub fn from_rects(rects: &[(YElem, ChainElem)]) -> Staircase {
        let s = Staircase {
            rects: rects.to_vec(),
            tail: Tail::Flat(Bot),
        };
        s.validate();
        s
    }

    /// The counterexample ideal: the union of the rectangles
    /// `Y(n) (x) Fin(n)` for every n, i.e. the staircase under the
    /// curve of exponential decay.
    pub fn exp_counterexample() -> Staircase {
        let s = Staircase {
            rects: Vec::new(),
            tail: Tail::Diagonal,
        };
        s.validate();
        s
    }

    /// The counterexample truncated to steps n <= cutoff, with height
    /// Bot beyond.
    pub fn truncated_counterexample(cutoff: u32) -> Staircase {
        let rects: Vec<(YElem, ChainElem)> = (0..=cutoff).map(|n| (Y(n), Fin(n))).collect();
        Staircase::from_rects(&rects)
    }

    pub fn bottom() -> Staircase {
        Staircase::from_rects(&[])
    }

    pub fn top() -> Staircase {
        Staircase::from_rects(&[(Y(0), Limit)])
    }

    fn probe_bound(&self) -> u32 {
        let steps = self
            .rects
            .iter()
            .filter_map(|&(y, x)| match (y, x) {
                (Y(k), Fin(m)) => Some(k.max(m)),
                (Y(k), Limit) => Some(k),
                (Bot, Fin(m)) => Some(m),
                (Bot, Limit) => None,
            })
            .max()
            .unwrap_or(0);
        steps + 3
    }

    /// Height of the column at `x`: the largest y with (y, x) in the
    /// ideal.
    pub fn height(&self, x: ChainElem) -> YElem {
        match x {
            // the bottom column is the empty rectangle, contained in
            // everything
            Fin(0) => Y(0),
            Fin(_) => self.raw_height(x),
            Limit => self.limit_height(),
        }
    }

    fn raw_height(&self, x: ChainElem) -> YElem {
        let from_rects = self
            .rects
            .iter()
            .filter(|&&(_, ext)| x.leq(ext))
            .fold(Bot, |acc, &(y, _)| acc.max(y));
        let beyond_rects = !self.rects.iter().any(|&(_, ext)| x.leq(ext));
        let from_tail = match (self.tail, x) {
            (Tail::Diagonal, Fin(m)) => Y(m),
            (Tail::Flat(c), Fin(_)) if beyond_rects => c,
            _ => Bot,
        };
        from_rects.max(from_tail)
    }

    /// Saturation at the limit: the infimum of the heights at all
    /// finite columns. Rectangles of full extent contribute at every
    /// finite column, so they survive into the infimum.
    fn limit_height(&self) -> YElem {
        let full_extent = self
            .rects
            .iter()
            .filter(|&&(_, ext)| ext == Limit)
            .fold(Bot, |acc, &(y, _)| acc.max(y));
        let tail_floor = match self.tail {
            Tail::Flat(c) => c,
            // the heights Y(m) descend without bound
            Tail::Diagonal => Bot,
        };
        full_extent.max(tail_floor)
    }

    /// Membership of the rectangle (y, x), i.e. `y (x) x <= u`.
    pub fn member(&self, y: YElem, x: ChainElem) -> bool {
        y.leq(self.height(x))
    }

    /// The coefficient of `u` at `s`: the join of the y-column, which
    /// is just the staircase height.
    pub fn coeff(&self, s: ChainElem) -> YElem {
        self.height(s)
    }

    /// The way-below-guarded coefficient: join of all y admitting
    /// s' way above s with (y, s') in the ideal. At the limit nothing
    /// is way above, so the value is Bot; at a finite s the best
    /// witness is s itself.
    pub fn big_f(&self, s: ChainElem) -> YElem {
        match s {
            Limit => Bot,
            Fin(_) => self.height(s),
        }
    }

    /// Image of the ideal under the product of the point-at-zero of the
    /// descending chain with the ascending chain: an ideal of
    /// `2 (x) asc`, i.e. an ascending-chain element — the join of the
    /// columns with height above Bot.
    pub fn pushforward(&self) -> ChainElem {
        let unbounded = match self.tail {
            Tail::Diagonal => true,
            Tail::Flat(c) => {
                c != Bot || self.rects.iter().any(|&(y, ext)| y != Bot && ext == Limit)
            }
        };
        if unbounded {
            return Limit;
        }
        self.rects
            .iter()
            .filter(|&&(y, _)| y != Bot)
            .fold(Fin(0), |acc, &(_, ext)| acc.max(ext))
    }

    /// Down-closure and limit saturation, checked on a probe grid.
    /// Constructors call this on every value.
    pub fn validate(&self) {
        let bound = self.probe_bound();
        let xs: Vec<ChainElem> = (0..bound).map(Fin).chain([Limit]).collect();
        let ys: Vec<YElem> = [Bot].into_iter().chain((0..bound).map(Y)).collect();
        for &x in &xs {
            for &y in &ys {
                if self.member(y, x) {
                    for &x2 in &xs {
                        for &y2 in &ys {
                            if x2.leq(x) && y2.leq(y) {
                                assert!(self.member(y2, x2), "membership not down-closed");
                            }
                        }
                    }
                }
            }
        }
        // antitone heights
        for w in xs.windows(2) {
            assert!(
                self.height(w[1]).leq(self.height(w[0])),
                "heights must be antitone"
            );
        }
        // the limit column carries exactly the inf of the finite ones:
        // whatever holds at every finite column of the probe and is
        // stable past it must hold at the limit, and conversely
        for &y in &ys {
            let at_all_finite =
                (0..bound).all(|m| self.member(y, Fin(m))) && y.leq(self.raw_height(Fin(bound)));
            assert_eq!(
                self.member(y, Limit),
                at_all_finite,
                "limit column must be the infimum of the finite columns"
            );
        }
    }
}

/// Truth values of the two-element frame, for reporting the two sides
/// of the naturality comparison.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Two {
    Bot,
    Top,
}

impl std::fmt::Display for Two {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Two::Bot => write!(f, "bot"),
            Two::Top => write!(f, "top"),
        }
    }
}

/// The two sides of the naturality square for the coefficient at the
/// top open, evaluated against the point at zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CounterexampleReport {
    /// coeff_top of the pushforward ideal
    pub coeff_after_pushforward: Two,
    /// image of coeff_top(u) under the point
    pub pushforward_of_coeff: Two,
    pub equal: bool,
}

/// Evaluates both sides of the naturality comparison for any staircase.
pub fn naturality_sides(u: &Staircase) -> CounterexampleReport {
    // coeff at the top of the pushforward: top iff the whole x-axis is
    // covered
    let lhs = if u.pushforward() == Limit {
        Two::Top
    } else {
        Two::Bot
    };
    // the point applied to coeff at the top of u itself
    let rhs = if desc_point_zero(u.coeff(Limit)) {
        Two::Top
    } else {
        Two::Bot
    };
    CounterexampleReport {
        coeff_after_pushforward: lhs,
        pushforward_of_coeff: rhs,
        equal: lhs == rhs,
    }
}

/// The naturality failure: on the exponential-decay staircase the two
/// sides disagree (top against bot), while every finite truncation
/// restores equality.
pub fn counterexample_report() -> CounterexampleReport {
    naturality_sides(&Staircase::exp_counterexample())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_orders() {
        assert!(Fin(2).leq(Fin(5)));
        assert!(Fin(5).leq(Limit));
        assert!(!Limit.leq(Fin(100)));
        assert!(Y(5).leq(Y(2)));
        assert!(Bot.leq(Y(9)));
        assert!(!Y(0).leq(Y(1)));
    }

    #[test]
    fn asc_way_below_cases() {
        assert!(asc_way_below(Fin(3), Limit));
        assert!(!asc_way_below(Limit, Limit));
        assert!(asc_way_below(Fin(0), Fin(0)));
        assert!(asc_way_below(Fin(0), Limit));
        assert!(!asc_way_below(Fin(4), Fin(3)));
        assert!(asc_is_compact(Fin(7)));
        assert!(!asc_is_compact(Limit));
    }

    #[test]
    fn chains_are_locally_compact() {
        assert!(asc_locally_compact(64));
        assert!(desc_locally_compact(64));
    }

    #[test]
    fn asc_interpolation() {
        let s = asc_interpolate(Fin(3), Limit).unwrap();
        assert!(asc_way_below(Fin(3), s));
        assert!(asc_way_below(s, Limit));
        assert!(matches!(s, Fin(n) if n >= 3));
        assert_eq!(asc_interpolate(Fin(0), Fin(5)), Some(Fin(0)));
        assert_eq!(asc_interpolate(Limit, Limit), None);
    }

    #[test]
    fn membership_of_counterexample() {
        let u = Staircase::exp_counterexample();
        // member (Y(k), Fin(n)) iff n <= k
        for k in 0..12 {
            for n in 0..12 {
                assert_eq!(u.member(Y(k), Fin(n)), n <= k, "at k={k}, n={n}");
            }
            // limit columns are empty above Bot
            assert!(!u.member(Y(k), Limit));
        }
        for x in [Fin(0), Fin(3), Limit] {
            assert!(u.member(Bot, x));
        }
    }

    #[test]
    fn counterexample_coefficients() {
        let u = Staircase::exp_counterexample();
        assert_eq!(u.coeff(Fin(0)), YElem::top());
        assert_eq!(u.coeff(Limit), Bot);
        for n in 1..10 {
            assert_eq!(u.coeff(Fin(n)), Y(n));
        }
        // coeff is antitone in s
        for n in 0..10 {
            assert!(u.coeff(Fin(n + 1)).leq(u.coeff(Fin(n))));
        }
        assert!(u.coeff(Limit).leq(u.coeff(Fin(9))));
    }

    #[test]
    fn adjunction_on_staircases() {
        for u in [
            Staircase::exp_counterexample(),
            Staircase::truncated_counterexample(4),
            Staircase::from_rects(&[(Y(2), Fin(7)), (Y(5), Limit)]),
            Staircase::bottom(),
            Staircase::top(),
        ] {
            for x in (0..16).map(Fin).chain([Limit]) {
                let c = u.coeff(x);
                for y in [Bot].into_iter().chain((0..16).map(Y)) {
                    assert_eq!(u.member(y, x), y.leq(c));
                }
            }
        }
    }

    #[test]
    fn pushforward_cases() {
        assert_eq!(Staircase::exp_counterexample().pushforward(), Limit);
        assert_eq!(
            Staircase::from_rects(&[(Y(0), Fin(3))]).pushforward(),
            Fin(3)
        );
        assert_eq!(Staircase::bottom().pushforward(), Fin(0));
        assert_eq!(Staircase::top().pushforward(), Limit);
    }

    #[test]
    fn big_f_repairs_the_limit() {
        let u = Staircase::exp_counterexample();
        assert_eq!(u.big_f(Limit), Bot);
        for n in 0..8 {
            assert_eq!(u.big_f(Fin(n)), u.coeff(Fin(n)));
        }
    }

    #[test]
    fn report_exact_disagreement() {
        let r = counterexample_report();
        assert_eq!(r.coeff_after_pushforward, Two::Top);
        assert_eq!(r.pushforward_of_coeff, Two::Bot);
        assert!(!r.equal);
    }

    #[test]
    fn naturality_holds_on_rectangles_and_truncations() {
        let top_rect = naturality_sides(&Staircase::top());
        assert_eq!(top_rect.coeff_after_pushforward, Two::Top);
        assert_eq!(top_rect.pushforward_of_coeff, Two::Top);
        assert!(top_rect.equal);
        for cutoff in 0..12 {
            let r = naturality_sides(&Staircase::truncated_counterexample(cutoff));
            assert!(r.equal, "truncation at {cutoff} must restore naturality");
            assert_eq!(r.coeff_after_pushforward, Two::Bot);
        }
        assert!(naturality_sides(&Staircase::bottom()).equal);
    }

    #[test]
    fn asc_way_below_biclosure_sampled() {
        let elems: Vec<ChainElem> = (0..12).map(Fin).chain([Limit]).collect();
        for &a in &elems {
            for &b in &elems {
                if !asc_way_below(a, b) {
                    continue;
                }
                for &a2 in &elems {
                    for &b2 in &elems {
                        if a2.leq(a) && b.leq(b2) {
                            assert!(asc_way_below(a2, b2));
                        }
                    }
                }
            }
        }
    }

    /// Covers of the limit within a truncated window: any family whose
    /// join reaches the limit admits a finite subfamily way above a
    /// given finite element.
    #[test]
    fn truncated_chain_covers_have_dominating_subfamilies() {
        // the genuinely infinite cover by all finite elements: the
        // singleton {Fin(m)} with m >= k is the dominating subfamily
        for k in 0..10u32 {
            assert!(asc_way_below(Fin(k), Fin(k)));
            let m = k + 1;
            assert!(asc_way_below(Fin(k), Fin(m)));
        }
        // covers drawn from a finite window plus the limit itself:
        // their join reaches the limit only through the limit member,
        // which alone dominates any finite element
        let window: Vec<ChainElem> = (0..8).map(Fin).chain([Limit]).collect();
        for mask in 0u32..(1 << window.len()) {
            let family: Vec<ChainElem> = window
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect();
            let join = family.iter().fold(Fin(0), |acc, &x| acc.max(x));
            if join != Limit {
                continue;
            }
            for k in 0..8 {
                assert!(
                    family.iter().any(|&o| asc_way_below(Fin(k), o)),
                    "no dominating member for Fin({k})"
                );
            }
        }
    }

    #[test]
    fn point_zero_is_a_frame_map_on_prefixes() {
        // finite meets and joins, top and bottom, on a probe prefix
        let elems: Vec<YElem> = [Bot].into_iter().chain((0..32).map(Y)).collect();
        let f = desc_point_zero;
        assert!(f(YElem::top()));
        assert!(!f(Bot));
        for &a in &elems {
            for &b in &elems {
                assert_eq!(f(a.min(b)), f(a) && f(b));
                assert_eq!(f(a.max(b)), f(a) || f(b));
            }
        }
    }
}

//! Frames presented by a generator meet-semilattice plus coverage
//! relations.
//!
//! A coverage instance `(t, C)` declares that `t` is covered by the set
//! `C` of generators: a C-ideal is a downset that contains `t` whenever
//! it contains all of `C`. The C-ideal condition also demands stability
//! under meet-translation, so `Presentation::new` adds the instance
//! `(g /\ t, { g /\ c })` for every generator `g` up front; paths that
//! generate instances already stabilized (the tensor coverage) use
//! `new_prestabilized` and skip the expansion.
//!
//! Downsets are bit vectors indexed by semilattice position, so the
//! saturation fixpoint runs on word operations. Two engines are kept:
//! the worklist engine (`saturate`), which revisits an instance only
//! when one of its cover members was newly added, and a round-based
//! global sweep (`saturate_naive`) retained as the slow oracle the
//! worklist is checked — and benchmarked — against.

use crate::bits::Bits;
use crate::frame::Frame;
use crate::hom::FrameHom;
use crate::poset::Poset;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemilatticeError {
    #[error("meet table has wrong size for {0} generators")]
    WrongTableSize(usize),
    #[error("meet table entry out of range at `{0}`, `{1}`")]
    OutOfRange(String, String),
    #[error("meet is not commutative at `{0}`, `{1}`")]
    NotCommutative(String, String),
    #[error("meet is not idempotent at `{0}`")]
    NotIdempotent(String),
    #[error("meet is not associative at `{0}`, `{1}`, `{2}`")]
    NotAssociative(String, String, String),
    #[error("no top element: nothing is a meet identity")]
    NoTop,
}

/// A finite meet-semilattice of generators.
#[derive(Clone, PartialEq, Eq)]
pub struct GenSemilattice {
    ids: Vec<String>,
    meet: Vec<u32>,
    top: usize,
    /// dn[g] = { h : h <= g }, where h <= g iff h /\ g = h.
    dn: Vec<Bits>,
}

impl GenSemilattice {
    pub fn new(ids: Vec<String>, meet: Vec<u32>) -> Result<GenSemilattice, SemilatticeError> {
        let n = ids.len();
        if meet.len() != n * n {
            return Err(SemilatticeError::WrongTableSize(n));
        }
        let m = |a: usize, b: usize| meet[a * n + b] as usize;
        for a in 0..n {
            for b in 0..n {
                if m(a, b) >= n {
                    return Err(SemilatticeError::OutOfRange(ids[a].clone(), ids[b].clone()));
                }
                if m(a, b) != m(b, a) {
                    return Err(SemilatticeError::NotCommutative(
                        ids[a].clone(),
                        ids[b].clone(),
                    ));
                }
            }
            if m(a, a) != a {
                return Err(SemilatticeError::NotIdempotent(ids[a].clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(a, m(b, c)) != m(m(a, b), c) {
                        return Err(SemilatticeError::NotAssociative(
                            ids[a].clone(),
                            ids[b].clone(),
                            ids[c].clone(),
                        ));
                    }
                }
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|x| m(t, x) == x))
            .ok_or(SemilatticeError::NoTop)?;
        let mut dn: Vec<Bits> = (0..n).map(|_| Bits::empty(n)).collect();
        for (g, row) in dn.iter_mut().enumerate() {
            for h in 0..n {
                if m(h, g) == h {
                    row.insert(h);
                }
            }
        }
        Ok(GenSemilattice { ids, meet, top, dn })
    }

    /// Semilattice of all subsets of a fixed universe under intersection;
    /// handy for tests and random instances.
    pub fn powerset(universe_bits: u32) -> GenSemilattice {
        let n = 1usize << universe_bits;
        let ids: Vec<String> = (0..n)
            .map(|mask| format!("s{mask:0>width$b}", width = universe_bits as usize))
            .collect();
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = (a & b) as u32;
            }
        }
        GenSemilattice::new(ids, meet).unwrap()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, g: usize) -> &str {
        &self.ids[g]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|t| t == id)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.ids.len() + b] as usize
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn downset_of(&self, g: usize) -> &Bits {
        &self.dn[g]
    }

    pub fn down_close(&self, bits: &Bits) -> Bits {
        let mut out = Bits::empty(self.len());
        for g in bits.iter() {
            out.union_with(&self.dn[g]);
        }
        out
    }

    pub fn is_down_closed(&self, bits: &Bits) -> bool {
        bits.iter().all(|g| self.dn[g].is_subset(bits))
    }
}

impl std::fmt::Debug for GenSemilattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GenSemilattice({:?})", self.ids)
    }
}

/// A downward-closed subset of a generator semilattice.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Downset {
    bits: Bits,
}

impl Downset {
    /// Down-closure of an arbitrary seed set.
    pub fn from_seed<I: IntoIterator<Item = usize>>(sl: &GenSemilattice, seed: I) -> Downset {
        Downset {
            bits: sl.down_close(&Bits::from_indices(sl.len(), seed)),
        }
    }

    pub fn empty(sl: &GenSemilattice) -> Downset {
        Downset {
            bits: Bits::empty(sl.len()),
        }
    }

    pub fn full(sl: &GenSemilattice) -> Downset {
        Downset {
            bits: Bits::full(sl.len()),
        }
    }

    pub fn try_new(sl: &GenSemilattice, bits: Bits) -> Option<Downset> {
        sl.is_down_closed(&bits).then_some(Downset { bits })
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn contains(&self, g: usize) -> bool {
        self.bits.contains(g)
    }
}

/// A coverage-saturated downset: an element of the presented frame.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CIdeal {
    bits: Bits,
}

impl CIdeal {
    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn as_downset(&self) -> Downset {
        Downset {
            bits: self.bits.clone(),
        }
    }

    /// Intersections of C-ideals are C-ideals (no re-saturation needed);
    /// this is verified exhaustively in the tests.
    pub fn intersect(&self, other: &CIdeal) -> CIdeal {
        CIdeal {
            bits: self.bits.intersection(&other.bits),
        }
    }
}

/// One coverage declaration: `target` is covered by `cover`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Instance {
    pub target: usize,
    pub cover: Bits,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("presented frame would exceed the cap of {cap} C-ideals (reached {reached})")]
pub struct CapError {
    pub cap: usize,
    pub reached: usize,
}

/// Default bound on the number of C-ideals materialized by
/// `presented_frame`.
pub const DEFAULT_IDEAL_CAP: usize = 4096;

/// A generator semilattice together with its (stabilized) coverage.
/// The worklist engine reads the covers from a flattened word array and
/// a CSR member-to-instance index built once here.
#[derive(Clone)]
pub struct Presentation {
    sl: GenSemilattice,
    instances: Vec<Instance>,
    /// covers flattened to `stride` words per instance
    cover_words: Vec<u64>,
    stride: usize,
    /// CSR index: instances whose cover mentions generator g live at
    /// member_data[member_offsets[g]..member_offsets[g + 1]]
    member_offsets: Vec<u32>,
    member_data: Vec<u32>,
}

impl Presentation {
    /// Builds a presentation from raw instances, adding every
    /// meet-translate `(g /\ t, { g /\ c })` so that saturation computes
    /// genuine C-ideals.
    pub fn new(sl: GenSemilattice, raw: Vec<Instance>) -> Presentation {
        let n = sl.len();
        let mut seen: HashMap<(usize, Bits), ()> = HashMap::new();
        let mut instances = Vec::new();
        for inst in &raw {
            for g in 0..n {
                let target = sl.meet(g, inst.target);
                let cover = Bits::from_indices(n, inst.cover.iter().map(|c| sl.meet(g, c)));
                // a target below one of its cover members is already
                // forced by down-closure
                if cover.iter().any(|c| sl.leq(target, c)) {
                    continue;
                }
                if seen.insert((target, cover.clone()), ()).is_none() {
                    instances.push(Instance { target, cover });
                }
            }
        }
        Presentation::from_instances(sl, instances)
    }

    /// For coverages whose instance set is already closed under
    /// meet-translation, e.g. the tensor coverage.
    pub fn new_prestabilized(sl: GenSemilattice, instances: Vec<Instance>) -> Presentation {
        Presentation::from_instances(sl, instances)
    }

    fn from_instances(sl: GenSemilattice, instances: Vec<Instance>) -> Presentation {
        let stride = sl.len().div_ceil(64).max(1);
        let mut cover_words = Vec::with_capacity(instances.len() * stride);
        for inst in &instances {
            cover_words.extend_from_slice(inst.cover.words());
        }
        let mut counts = vec![0u32; sl.len() + 1];
        for inst in &instances {
            for c in inst.cover.iter() {
                counts[c + 1] += 1;
            }
        }
        for g in 0..sl.len() {
            counts[g + 1] += counts[g];
        }
        let member_offsets = counts.clone();
        let mut fill = counts;
        let mut member_data = vec![0u32; *member_offsets.last().unwrap() as usize];
        for (i, inst) in instances.iter().enumerate() {
            for c in inst.cover.iter() {
                member_data[fill[c] as usize] = i as u32;
                fill[c] += 1;
            }
        }
        Presentation {
            sl,
            instances,
            cover_words,
            stride,
            member_offsets,
            member_data,
        }
    }

    #[inline]
    fn members_of(&self, g: usize) -> &[u32] {
        &self.member_data[self.member_offsets[g] as usize..self.member_offsets[g + 1] as usize]
    }

    pub fn semilattice(&self) -> &GenSemilattice {
        &self.sl
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    /// One round of coverage application: everything forced by a single
    /// application of each instance against `d`, then down-closed.
    pub fn one_step(&self, d: &Downset) -> Downset {
        let mut out = d.bits.clone();
        for inst in &self.instances {
            if inst.cover.is_subset(&d.bits) {
                out.union_with(self.sl.downset_of(inst.target));
            }
        }
        Downset { bits: out }
    }

    /// Number of `one_step` rounds until the fixpoint.
    pub fn stabilization_depth(&self, d: &Downset) -> usize {
        let mut cur = d.clone();
        let mut depth = 0;
        loop {
            let next = self.one_step(&cur);
            if next == cur {
                return depth;
            }
            cur = next;
            depth += 1;
        }
    }

    pub fn is_cideal(&self, d: &Downset) -> bool {
        self.one_step(d) == *d
    }

    /// Least C-ideal containing `d`, by the counting worklist: each
    /// instance carries the number of cover members still missing and
    /// fires when it reaches zero, so every (instance, member) edge is
    /// handled exactly once. Scratch buffers are thread-local, so
    /// concurrent saturations stay independent.
    pub fn saturate(&self, d: &Downset) -> CIdeal {
        thread_local! {
            static SCRATCH: std::cell::RefCell<(Vec<u32>, Vec<u32>, Vec<usize>)> =
                const { std::cell::RefCell::new((Vec::new(), Vec::new(), Vec::new())) };
        }
        SCRATCH.with(|scratch| {
            let (missing, queue, fresh) = &mut *scratch.borrow_mut();
            missing.clear();
            queue.clear();
            let mut cur = d.bits.clone();
            if self.stride == 1 && !self.instances.is_empty() {
                // single-word fast path: covers scanned from the flat array
                let cur_word = cur.words()[0];
                for (i, &cw) in self.cover_words.iter().enumerate() {
                    let m = (cw & !cur_word).count_ones();
                    missing.push(m);
                    if m == 0 {
                        queue.push(i as u32);
                    }
                }
            } else {
                for (i, inst) in self.instances.iter().enumerate() {
                    let m = inst.cover.count_missing_from(&cur) as u32;
                    missing.push(m);
                    if m == 0 {
                        queue.push(i as u32);
                    }
                }
            }
            while let Some(i) = queue.pop() {
                let inst = &self.instances[i as usize];
                if cur.contains(inst.target) {
                    continue;
                }
                fresh.clear();
                for g in self.sl.downset_of(inst.target).iter() {
                    if !cur.contains(g) {
                        fresh.push(g);
                    }
                }
                cur.union_with(self.sl.downset_of(inst.target));
                for &g in fresh.iter() {
                    for &j in self.members_of(g) {
                        missing[j as usize] -= 1;
                        if missing[j as usize] == 0 {
                            queue.push(j);
                        }
                    }
                }
            }
            CIdeal { bits: cur }
        })
    }

    /// Least C-ideal by round-based global sweeps: each round fires
    /// every instance against the set as it stood at the round start.
    /// Kept as the oracle (and benchmark baseline) for `saturate`.
    pub fn saturate_naive(&self, d: &Downset) -> CIdeal {
        let mut cur = d.clone();
        loop {
            let next = self.one_step(&cur);
            if next == cur {
                return CIdeal { bits: cur.bits };
            }
            cur = next;
        }
    }

    /// All C-ideals, enumerated by closing the principal ideals under
    /// binary joins, returned as a frame plus the generator embedding.
    pub fn presented_frame(&self, cap: usize) -> Result<PresentedFrame, CapError> {
        let n = self.sl.len();
        let bottom = self.saturate(&Downset::empty(&self.sl));
        let principals: Vec<CIdeal> = (0..n)
            .map(|g| self.saturate(&Downset::from_seed(&self.sl, [g])))
            .collect();

        let mut index: HashMap<Bits, usize> = HashMap::new();
        let mut ideals: Vec<Bits> = Vec::new();
        let push = |b: Bits, ideals: &mut Vec<Bits>, index: &mut HashMap<Bits, usize>| {
            if !index.contains_key(&b) {
                index.insert(b.clone(), ideals.len());
                ideals.push(b);
            }
        };
        push(bottom.bits.clone(), &mut ideals, &mut index);
        for p in &principals {
            push(p.bits.clone(), &mut ideals, &mut index);
        }
        let mut frontier = 0;
        while frontier < ideals.len() {
            if ideals.len() > cap {
                return Err(CapError {
                    cap,
                    reached: ideals.len(),
                });
            }
            let cur = ideals[frontier].clone();
            for k in 0..=frontier {
                let union = cur.union(&ideals[k]);
                let joined = self
                    .saturate(&Downset {
                        bits: self.sl.down_close(&union),
                    })
                    .bits;
                push(joined, &mut ideals, &mut index);
            }
            frontier += 1;
        }
        if ideals.len() > cap {
            return Err(CapError {
                cap,
                reached: ideals.len(),
            });
        }

        // canonical element order: cardinality, then bit pattern
        ideals.sort_by_key(|b| (b.count(), b.clone()));
        let index: HashMap<Bits, usize> = ideals
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();

        let count = ideals.len();
        let ids: Vec<String> = (0..count).map(|i| format!("c{i}")).collect();
        let mut leq = Vec::new();
        for (i, a) in ideals.iter().enumerate() {
            for (j, b) in ideals.iter().enumerate() {
                if a.is_subset(b) {
                    leq.push((ids[i].clone(), ids[j].clone()));
                }
            }
        }
        let poset = Poset::from_leq(&ids, &leq).expect("inclusion is a partial order");
        let mut meet = vec![0u32; count * count];
        let mut join = vec![0u32; count * count];
        for i in 0..count {
            for j in i..count {
                let m = index[&ideals[i].intersection(&ideals[j])];
                let u = ideals[i].union(&ideals[j]);
                let jn = index[&self
                    .saturate(&Downset {
                        bits: self.sl.down_close(&u),
                    })
                    .bits];
                meet[i * count + j] = m as u32;
                meet[j * count + i] = m as u32;
                join[i * count + j] = jn as u32;
                join[j * count + i] = jn as u32;
            }
        }
        let top = index[&Bits::full(n)];
        let bottom_ix = index[&bottom.bits];
        let frame = Frame::from_parts(poset, top, bottom_ix, meet, join);
        let embed: Vec<usize> = principals.iter().map(|p| index[&p.bits]).collect();
        Ok(PresentedFrame {
            pres: self.clone(),
            frame,
            ideals,
            index,
            embed,
        })
    }
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Presentation({} gens, {} instances)",
            self.sl.len(),
            self.instances.len()
        )
    }
}

/// A materialized presented frame: every C-ideal an element.
#[derive(Clone)]
pub struct PresentedFrame {
    pres: Presentation,
    frame: Frame,
    ideals: Vec<Bits>,
    index: HashMap<Bits, usize>,
    embed: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssignmentViolation {
    #[error("assignment sends the semilattice top to a non-top element")]
    Top,
    #[error("assignment does not preserve the meet of `{0}` and `{1}`")]
    Meet(String, String),
    #[error("coverage instance {instance} violated: image of `{target}` is not below the join of the cover's image")]
    Cover { instance: usize, target: String },
}

impl PresentedFrame {
    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// The principal C-ideal of generator `g`, as a frame element.
    pub fn embed(&self, g: usize) -> usize {
        self.embed[g]
    }

    pub fn ideal(&self, element: usize) -> &Bits {
        &self.ideals[element]
    }

    pub fn element_of(&self, ideal: &Bits) -> Option<usize> {
        self.index.get(ideal).copied()
    }

    /// Does the C-ideal behind `element` contain generator `g`?
    /// Equivalent to: the principal ideal of `g` lies below `element`.
    #[inline]
    pub fn ideal_contains(&self, element: usize, g: usize) -> bool {
        self.ideals[element].contains(g)
    }

    /// The universal property of the presentation: a meet-preserving,
    /// coverage-respecting assignment of generators extends uniquely to
    /// a frame homomorphism out of the presented frame. Returns the
    /// extension, or the first violated requirement.
    pub fn eval_assignment(
        &self,
        target: &Frame,
        images: &[usize],
    ) -> Result<FrameHom, AssignmentViolation> {
        let sl = self.pres.semilattice();
        assert_eq!(images.len(), sl.len(), "one image per generator");
        if images[sl.top()] != target.top() {
            return Err(AssignmentViolation::Top);
        }
        for a in 0..sl.len() {
            for b in a..sl.len() {
                if images[sl.meet(a, b)] != target.meet(images[a], images[b]) {
                    return Err(AssignmentViolation::Meet(
                        sl.id(a).to_string(),
                        sl.id(b).to_string(),
                    ));
                }
            }
        }
        for (i, inst) in self.pres.instances().iter().enumerate() {
            let lhs = images[inst.target];
            let rhs = target.join_all(inst.cover.iter().map(|c| images[c]));
            if !target.leq(lhs, rhs) {
                return Err(AssignmentViolation::Cover {
                    instance: i,
                    target: sl.id(inst.target).to_string(),
                });
            }
        }
        let image: Vec<usize> = self
            .ideals
            .iter()
            .map(|b| target.join_all(b.iter().map(|g| images[g])))
            .collect();
        Ok(FrameHom::new(self.frame.clone(), target.clone(), image)
            .expect("valid assignment extends to a hom"))
    }
}

impl std::fmt::Debug for PresentedFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PresentedFrame({} elements)", self.ideals.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{order_iso, sierpinski, terminal};

    /// Free meet-semilattice on one generator: { top, g }.
    fn one_gen() -> GenSemilattice {
        GenSemilattice::new(vec!["top".into(), "g".into()], vec![0, 1, 1, 1]).unwrap()
    }

    /// top above three generators that pairwise meet to a fifth, least
    /// element.
    fn flat3() -> GenSemilattice {
        // order: bot < g1, g2, g3 < top
        let ids = vec!["top", "g1", "g2", "g3", "bot"];
        let n = 5;
        let mut meet = vec![0u32; n * n];
        let m = |a: usize, b: usize| -> u32 {
            if a == b {
                a as u32
            } else if a == 0 {
                b as u32
            } else if b == 0 {
                a as u32
            } else {
                4
            }
        };
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = m(a, b);
            }
        }
        GenSemilattice::new(ids.into_iter().map(String::from).collect(), meet).unwrap()
    }

    #[test]
    fn semilattice_laws_enforced() {
        // non-idempotent table
        let err = GenSemilattice::new(vec!["a".into(), "b".into()], vec![1, 1, 1, 1]);
        assert!(matches!(err, Err(SemilatticeError::NotIdempotent(_))));
        let err = GenSemilattice::new(vec!["a".into(), "b".into()], vec![0, 0, 1, 1]);
        assert!(matches!(err, Err(SemilatticeError::NotCommutative(..))));
    }

    #[test]
    fn one_step_fixpoint_is_identity() {
        let sl = flat3();
        let pres = Presentation::new(
            sl.clone(),
            vec![Instance {
                target: 1,
                cover: Bits::from_indices(5, [2]),
            }],
        );
        // { g2, bot } forces g1; a saturated set stays put
        let d = Downset::from_seed(&sl, [2]);
        let s = pres.saturate(&d).as_downset();
        assert_eq!(pres.one_step(&s), s);
        assert_eq!(pres.stabilization_depth(&s), 0);
        // empty downset, no applicable coverage
        let pres_empty = Presentation::new(sl.clone(), vec![]);
        let e = Downset::empty(&sl);
        assert_eq!(pres_empty.one_step(&e), e);
    }

    /// Chain semilattice c0 < c1 < c2 < c3 with meet = min.
    fn chain4() -> GenSemilattice {
        let ids: Vec<String> = (0..4).map(|i| format!("c{i}")).collect();
        let mut meet = vec![0u32; 16];
        for a in 0..4 {
            for b in 0..4 {
                meet[a * 4 + b] = a.min(b) as u32;
            }
        }
        GenSemilattice::new(ids, meet).unwrap()
    }

    #[test]
    fn chained_coverage_needs_two_steps() {
        // c1 <| {c0}, c2 <| {c1}: from {c0} the second instance fires
        // only after the first has. On a chain the meet-translates add
        // no shortcuts.
        let sl = chain4();
        let pres = Presentation::new(
            sl.clone(),
            vec![
                Instance {
                    target: 1,
                    cover: Bits::from_indices(4, [0]),
                },
                Instance {
                    target: 2,
                    cover: Bits::from_indices(4, [1]),
                },
            ],
        );
        let d = Downset::from_seed(&sl, [0]);
        assert_eq!(pres.stabilization_depth(&d), 2);
        let sat = pres.saturate(&d);
        assert!(sat.bits().contains(2));
        assert!(!sat.bits().contains(3));
        assert_eq!(sat, pres.saturate_naive(&d));
    }

    #[test]
    fn saturate_bounds() {
        let sl = flat3();
        let pres = Presentation::new(sl.clone(), vec![]);
        assert!(pres.saturate(&Downset::empty(&sl)).bits().is_empty());
        let full = Downset::full(&sl);
        assert_eq!(pres.saturate(&full).bits(), full.bits());
    }

    #[test]
    fn free_one_generator_frame_is_sierpinski() {
        let pres = Presentation::new(one_gen(), vec![]);
        let pf = pres.presented_frame(64).unwrap();
        assert_eq!(pf.frame().len(), 3);
        assert!(order_iso(pf.frame(), &sierpinski().0).unwrap().is_some());
    }

    #[test]
    fn nullary_cover_collapses_generator() {
        let sl = one_gen();
        let pres = Presentation::new(
            sl.clone(),
            vec![Instance {
                target: 1,
                cover: Bits::empty(2),
            }],
        );
        let pf = pres.presented_frame(64).unwrap();
        // g is forced into every C-ideal, so only bottom={g} and top remain
        assert_eq!(pf.frame().len(), 2);
        assert!(order_iso(pf.frame(), &terminal()).unwrap().is_some());
    }

    #[test]
    fn cap_errors_out() {
        let sl = GenSemilattice::powerset(3);
        let pres = Presentation::new(sl, vec![]);
        let err = pres.presented_frame(5).unwrap_err();
        assert_eq!(err.cap, 5);
        assert!(err.reached > 5);
    }

    /// The stabilized translates are really enforced: on the diamond
    /// semilattice { top, a, b, m = a /\ b }, the instance a <| {b}
    /// translates (with g = a) to a <| {m}, so the downset {m} must
    /// saturate to contain a even though b never appears.
    #[test]
    fn meet_translates_are_enforced() {
        let ids: Vec<String> = ["top", "a", "b", "m"].map(String::from).to_vec();
        #[rustfmt::skip]
        let meet = vec![
            0, 1, 2, 3,
            1, 1, 3, 3,
            2, 3, 2, 3,
            3, 3, 3, 3,
        ];
        let sl = GenSemilattice::new(ids, meet).unwrap();
        let pres = Presentation::new(
            sl.clone(),
            vec![Instance {
                target: 1,
                cover: Bits::from_indices(4, [2]),
            }],
        );
        let sat = pres.saturate(&Downset::from_seed(&sl, [3]));
        assert!(sat.bits().contains(1), "translate a <| {{m}} must fire");
        assert!(!sat.bits().contains(2));
        // the presented frame is the 4-chain of the surviving C-ideals
        let pf = pres.presented_frame(64).unwrap();
        assert_eq!(pf.frame().len(), 4);
    }

    /// Every pair of C-ideals of a small coverage intersects to a
    /// C-ideal, checked over all downsets.
    #[test]
    fn cideal_intersections_exhaustive() {
        let sl = flat3();
        let pres = Presentation::new(
            sl.clone(),
            vec![Instance {
                target: 1,
                cover: Bits::from_indices(5, [2, 3]),
            }],
        );
        let n = sl.len();
        let mut ideals = Vec::new();
        for mask in 0u32..(1 << n) {
            let bits = Bits::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
            if sl.is_down_closed(&bits) {
                ideals.push(pres.saturate(&Downset::try_new(&sl, bits).unwrap()));
            }
        }
        for a in &ideals {
            for b in &ideals {
                assert!(pres.is_cideal(&a.intersect(b).as_downset()));
            }
        }
    }

    #[test]
    fn presented_frame_with_coverage_is_frame() {
        let sl = flat3();
        let pres = Presentation::new(
            sl,
            vec![Instance {
                target: 1,
                cover: Bits::from_indices(5, [2, 3]),
            }],
        );
        let pf = pres.presented_frame(256).unwrap();
        assert!(crate::frame::check_frame(pf.frame().poset()).valid());
    }

    #[test]
    fn eval_assignment_free_case() {
        let pres = Presentation::new(one_gen(), vec![]);
        let pf = pres.presented_frame(64).unwrap();
        let (s, omega) = sierpinski();
        // send g anywhere; no relations to violate
        for target in [s.bottom(), omega, s.top()] {
            let hom = pf.eval_assignment(&s, &[s.top(), target]).unwrap();
            assert_eq!(hom.apply(pf.embed(1)), target);
        }
    }

    #[test]
    fn eval_assignment_detects_violations() {
        let sl = one_gen();
        let pres = Presentation::new(
            sl.clone(),
            vec![Instance {
                target: 1,
                cover: Bits::empty(2),
            }],
        );
        let pf = pres.presented_frame(64).unwrap();
        let two = terminal();
        // g <| {} forces image(g) <= bottom; sending g to top violates it
        let err = pf
            .eval_assignment(&two, &[two.top(), two.top()])
            .unwrap_err();
        assert!(matches!(err, AssignmentViolation::Cover { .. }));
        // a non-meet-preserving assignment is a distinct witness kind:
        // send g1, g2 to the two atoms of the square but their meet
        // (the least generator) to top
        let sl2 = flat3();
        let pres2 = Presentation::new(sl2, vec![]);
        let pf2 = pres2.presented_frame(64).unwrap();
        let sq = crate::frame::boolean_square();
        let (a, b) = (sq.index_of("a").unwrap(), sq.index_of("b").unwrap());
        let images = vec![sq.top(), a, b, sq.bottom(), sq.top()];
        let err2 = pf2.eval_assignment(&sq, &images).unwrap_err();
        assert!(matches!(err2, AssignmentViolation::Meet(..)));
    }
}

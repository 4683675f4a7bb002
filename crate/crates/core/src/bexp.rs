//! The relation scheme presenting general exponential frames, and its
//! hom-level verification.
//!
//! A generator is a pair `(a, b)` of opens of the base A and the target
//! B, read "a is way below the preimage of b". Eight schemata constrain
//! the generators; an assignment of the generators into a test frame Z
//! satisfying every instance corresponds exactly to a frame hom from
//! `B`'s opens into the tensor `Z (x) A` — which is the universal
//! property, checked here without materializing the exponential frame.
//! A materializing path exists for tiny generator sets, used as a
//! cross-check.
//!
//! Schema instances are enumerated over the finite frames: directed
//! covers as directifications of subsets with the right join, finite
//! covers as subsets whose join dominates the target (the covering
//! convention of the way-below module). On a finite base the
//! interpolation-flavored schemata are satisfied by reflexivity of
//! way-below, but the side conditions are kept explicit.

use crate::bits::Bits;
use crate::frame::Frame;
use crate::hom::{all_homs, FrameHom};
use crate::presentation::{CapError, GenSemilattice, Instance, Presentation, PresentedFrame};
use crate::tensor::TensorFrame;
use crate::waybelow::way_below;
use thiserror::Error;

/// One instantiated relation; `schema` is its position (1-8) in the
/// axiom list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaInstance {
    pub schema: u8,
    pub kind: SchemaKind,
}

/// Cells index the generator grid: `cell = a * |B| + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaKind {
    /// g(lhs) <= g(rhs)
    Order { lhs: usize, rhs: usize },
    /// g(cell) = top
    Forced { cell: usize },
    /// g(c1) /\ g(c2) <= g(rhs)
    MeetBelow { c1: usize, c2: usize, rhs: usize },
    /// g(lhs) <= \/ g(rhs_i)
    Disjunction { lhs: usize, rhs: Vec<usize> },
    /// g(lhs) <= join over functions (a_alpha) from the b-cover into A
    /// with join >= a of the meet of g(a_alpha, b_alpha)
    FiniteCover {
        lhs: usize,
        a: usize,
        b_cover: Vec<usize>,
    },
}

/// The instantiated relation set for a pair of finite frames.
pub struct BExpRelations {
    base: Frame,
    target: Frame,
    instances: Vec<SchemaInstance>,
}

pub fn bexp_relations(base: &Frame, target: &Frame) -> BExpRelations {
    let nb = target.len();
    let cell = |a: usize, b: usize| a * nb + b;
    let mut instances = Vec::new();
    // (1) antitone in a, monotone in b
    for a1 in base.elems() {
        for b1 in target.elems() {
            for a2 in base.elems() {
                for b2 in target.elems() {
                    if base.leq(a2, a1) && target.leq(b1, b2) && (a1, b1) != (a2, b2) {
                        instances.push(SchemaInstance {
                            schema: 1,
                            kind: SchemaKind::Order {
                                lhs: cell(a1, b1),
                                rhs: cell(a2, b2),
                            },
                        });
                    }
                }
            }
        }
    }
    // (2) the bottom open is way below everything
    for b in target.elems() {
        instances.push(SchemaInstance {
            schema: 2,
            kind: SchemaKind::Forced {
                cell: cell(base.bottom(), b),
            },
        });
    }
    // (3) joins on the a side
    for a1 in base.elems() {
        for a2 in base.elems().skip(a1 + 1) {
            for b in target.elems() {
                instances.push(SchemaInstance {
                    schema: 3,
                    kind: SchemaKind::MeetBelow {
                        c1: cell(a1, b),
                        c2: cell(a2, b),
                        rhs: cell(base.join(a1, a2), b),
                    },
                });
            }
        }
    }
    // (4) everything way below the top is way below the preimage of top
    for a in base.elems() {
        if way_below(base, a, base.top()) {
            instances.push(SchemaInstance {
                schema: 4,
                kind: SchemaKind::Forced {
                    cell: cell(a, target.top()),
                },
            });
        }
    }
    // (5) meets on the b side, after shrinking a
    for a in base.elems() {
        for ap in base.elems() {
            if !way_below(base, ap, a) {
                continue;
            }
            for b1 in target.elems() {
                for b2 in target.elems().skip(b1) {
                    instances.push(SchemaInstance {
                        schema: 5,
                        kind: SchemaKind::MeetBelow {
                            c1: cell(a, b1),
                            c2: cell(a, b2),
                            rhs: cell(ap, target.meet(b1, b2)),
                        },
                    });
                }
            }
        }
    }
    // (6) interpolation on the a side
    for a in base.elems() {
        for b in target.elems() {
            instances.push(SchemaInstance {
                schema: 6,
                kind: SchemaKind::Disjunction {
                    lhs: cell(a, b),
                    rhs: base
                        .elems()
                        .filter(|&ap| way_below(base, a, ap))
                        .map(|ap| cell(ap, b))
                        .collect(),
                },
            });
        }
    }
    // (7) directed covers of b, as directifications of subsets with
    // join b
    for b in target.elems() {
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..(1 << nb) {
            let m: Vec<usize> = (0..nb).filter(|i| mask >> i & 1 == 1).collect();
            if target.join_all(m.iter().copied()) != b {
                continue;
            }
            let d = target.directify(&m);
            if !seen.insert(d.clone()) {
                continue;
            }
            for a in base.elems() {
                instances.push(SchemaInstance {
                    schema: 7,
                    kind: SchemaKind::Disjunction {
                        lhs: cell(a, b),
                        rhs: d.iter().map(|&bd| cell(a, bd)).collect(),
                    },
                });
            }
        }
    }
    // (8) finite covers of b, with inner covers of a ranged over by the
    // evaluator
    for b in target.elems() {
        for mask in 0u32..(1 << nb) {
            let cov: Vec<usize> = (0..nb).filter(|i| mask >> i & 1 == 1).collect();
            if !target.leq(b, target.join_all(cov.iter().copied())) {
                continue;
            }
            for a in base.elems() {
                instances.push(SchemaInstance {
                    schema: 8,
                    kind: SchemaKind::FiniteCover {
                        lhs: cell(a, b),
                        a,
                        b_cover: cov.clone(),
                    },
                });
            }
        }
    }
    BExpRelations {
        base: base.clone(),
        target: target.clone(),
        instances,
    }
}

impl BExpRelations {
    pub fn base(&self) -> &Frame {
        &self.base
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    pub fn instances(&self) -> &[SchemaInstance] {
        &self.instances
    }

    pub fn cell(&self, a: usize, b: usize) -> usize {
        a * self.target.len() + b
    }

    /// Right-hand side of a finite-cover instance: the join over all
    /// families (a_alpha) indexed by the cover with join dominating
    /// `a` of the meet of the generators' values. Computed by dynamic
    /// programming on (accumulated join, accumulated meet) pairs.
    fn finite_cover_rhs(&self, z: &Frame, g: &[usize], a: usize, b_cover: &[usize]) -> usize {
        let mut states: Vec<(usize, usize)> = vec![(self.base.bottom(), z.top())];
        for &b_alpha in b_cover {
            let mut next: Vec<(usize, usize)> = Vec::new();
            for &(j, m) in &states {
                for a_alpha in self.base.elems() {
                    let s = (
                        self.base.join(j, a_alpha),
                        z.meet(m, g[self.cell(a_alpha, b_alpha)]),
                    );
                    if !next.contains(&s) {
                        next.push(s);
                    }
                }
            }
            states = next;
        }
        z.join_all(
            states
                .iter()
                .filter(|&&(j, _)| self.base.leq(a, j))
                .map(|&(_, m)| m),
        )
    }

    /// Checks one instance against an assignment.
    pub fn holds(&self, z: &Frame, g: &[usize], inst: &SchemaInstance) -> bool {
        match &inst.kind {
            SchemaKind::Order { lhs, rhs } => z.leq(g[*lhs], g[*rhs]),
            SchemaKind::Forced { cell } => g[*cell] == z.top(),
            SchemaKind::MeetBelow { c1, c2, rhs } => z.leq(z.meet(g[*c1], g[*c2]), g[*rhs]),
            SchemaKind::Disjunction { lhs, rhs } => {
                z.leq(g[*lhs], z.join_all(rhs.iter().map(|&c| g[c])))
            }
            SchemaKind::FiniteCover { lhs, a, b_cover } => {
                z.leq(g[*lhs], self.finite_cover_rhs(z, g, *a, b_cover))
            }
        }
    }

    /// First violated instance, if any.
    pub fn check(&self, z: &Frame, g: &[usize]) -> Result<(), usize> {
        for (i, inst) in self.instances.iter().enumerate() {
            if !self.holds(z, g, inst) {
                return Err(i);
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for BExpRelations {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BExpRelations({}x{} generators, {} instances)",
            self.base.len(),
            self.target.len(),
            self.instances.len()
        )
    }
}

/// Grid assignments into `z` consistent with the order schema and the
/// forced rows and columns: the candidate pool the full relation check
/// filters. The search fixes the schema-forced cells and walks the
/// remaining ones with antitone-monotone pruning.
pub fn candidate_assignments(rel: &BExpRelations, z: &Frame) -> Vec<Vec<usize>> {
    let (a_f, b_f) = (rel.base.clone(), rel.target.clone());
    let (na, nb) = (a_f.len(), b_f.len());
    let mut template = vec![usize::MAX; na * nb];
    for b in 0..nb {
        template[rel.cell(a_f.bottom(), b)] = z.top();
    }
    for a in 0..na {
        template[rel.cell(a, b_f.top())] = z.top();
        if a != a_f.bottom() {
            template[rel.cell(a, b_f.bottom())] = z.bottom();
        }
    }
    let free: Vec<usize> = (0..na * nb)
        .filter(|&c| template[c] == usize::MAX)
        .collect();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut cur = template.clone();
    dfs(rel, z, &free, 0, &mut cur, &mut candidates);
    candidates
}

/// Every assignment of the generator grid into `z` satisfying the full
/// relation set, in lexicographic cell order. Candidate checking is one
/// of the parallel surfaces.
pub fn valid_assignments(rel: &BExpRelations, z: &Frame) -> Vec<Vec<usize>> {
    let candidates = candidate_assignments(rel, z);
    crate::par::filter_vec(candidates, |g| rel.check(z, g).is_ok())
}

fn dfs(
    rel: &BExpRelations,
    z: &Frame,
    free: &[usize],
    at: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if at == free.len() {
        out.push(cur.clone());
        return;
    }
    let nb = rel.target.len();
    let (a1, b1) = (free[at] / nb, free[at] % nb);
    for v in z.elems() {
        // antitone in a, monotone in b against already-placed cells
        let ok = free[..at].iter().all(|&c| {
            let (a2, b2) = (c / nb, c % nb);
            let fwd = !(rel.base.leq(a2, a1) && rel.target.leq(b1, b2)) || z.leq(v, cur[c]);
            let bwd = !(rel.base.leq(a1, a2) && rel.target.leq(b2, b1)) || z.leq(cur[c], v);
            fwd && bwd
        });
        if ok {
            cur[free[at]] = v;
            dfs(rel, z, free, at + 1, cur, out);
        }
    }
    cur[free[at]] = usize::MAX;
}

/// Unpruned reference enumeration over every map of the grid into `z`.
/// Exponential; the oracle for `valid_assignments` on tiny inputs.
pub fn valid_assignments_bruteforce(rel: &BExpRelations, z: &Frame) -> Vec<Vec<usize>> {
    let cells = rel.base.len() * rel.target.len();
    let total = z.len().checked_pow(cells as u32).expect("grid too big");
    assert!(total <= 1 << 22, "brute-force assignment space too big");
    (0..total)
        .filter_map(|code| {
            let mut c = code;
            let g: Vec<usize> = (0..cells)
                .map(|_| {
                    let v = c % z.len();
                    c /= z.len();
                    v
                })
                .collect();
            rel.check(z, &g).is_ok().then_some(g)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BExpZReport {
    pub assignments: usize,
    pub homs: usize,
}

#[derive(Debug, Clone)]
pub struct BExpReport {
    pub per_z: Vec<BExpZReport>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BExpFailure {
    #[error("cap exceeded: {0}")]
    Cap(#[from] CapError),
    #[error("test frame {z}: {assignments} valid assignments against {homs} homs")]
    CountMismatch {
        z: usize,
        assignments: usize,
        homs: usize,
    },
    #[error("assignment {g} of test frame {z} induces no hom partner")]
    AssignmentWithoutHom { z: usize, g: usize },
    #[error("hom {h} of test frame {z} induces an invalid assignment (instance {instance})")]
    HomWithoutAssignment { z: usize, h: usize, instance: usize },
    #[error("round trip fails on test frame {z} at {which} {index}")]
    RoundTrip {
        z: usize,
        which: &'static str,
        index: usize,
    },
}

/// The universal property at the level of homs, without materializing
/// the exponential: for each test frame Z, Figure-eight-schemata-valid
/// assignments biject with frame homs from the target's opens into
/// `Z (x) A`, via
///   assignment -> hom:  b maps to the join of `g(a,b) (x) a`;
///   hom -> assignment:  `(a,b)` maps to the way-below-guarded
///                       coefficient of the hom's value at b.
pub fn verify_bexp_universal(
    base: &Frame,
    target: &Frame,
    zs: &[Frame],
    cap: usize,
) -> Result<BExpReport, BExpFailure> {
    let rel = bexp_relations(base, target);
    let mut per_z = Vec::new();
    for (zi, z) in zs.iter().enumerate() {
        let t = TensorFrame::new(z, base, cap)?;
        let assignments = valid_assignments(&rel, z);
        let homs = all_homs(target, t.frame());
        if assignments.len() != homs.len() {
            return Err(BExpFailure::CountMismatch {
                z: zi,
                assignments: assignments.len(),
                homs: homs.len(),
            });
        }
        let to_hom = |g: &[usize]| -> Vec<usize> {
            target
                .elems()
                .map(|b| {
                    t.frame()
                        .join_all(base.elems().map(|a| t.rect(g[rel.cell(a, b)], a)))
                })
                .collect()
        };
        let to_assignment = |k: &FrameHom| -> Vec<usize> {
            let mut g = vec![0usize; base.len() * target.len()];
            for a in base.elems() {
                for b in target.elems() {
                    g[rel.cell(a, b)] = t.big_f(|x, y| way_below(base, x, y), a, k.apply(b));
                }
            }
            g
        };
        for (gi, g) in assignments.iter().enumerate() {
            let image = to_hom(g);
            let Some(k) = homs.iter().find(|h| h.image() == image) else {
                return Err(BExpFailure::AssignmentWithoutHom { z: zi, g: gi });
            };
            if &to_assignment(k) != g {
                return Err(BExpFailure::RoundTrip {
                    z: zi,
                    which: "assignment",
                    index: gi,
                });
            }
        }
        for (hi, k) in homs.iter().enumerate() {
            let g = to_assignment(k);
            if let Err(instance) = rel.check(z, &g) {
                return Err(BExpFailure::HomWithoutAssignment {
                    z: zi,
                    h: hi,
                    instance,
                });
            }
            if to_hom(&g) != k.image() {
                return Err(BExpFailure::RoundTrip {
                    z: zi,
                    which: "hom",
                    index: hi,
                });
            }
        }
        per_z.push(BExpZReport {
            assignments: assignments.len(),
            homs: homs.len(),
        });
    }
    Ok(BExpReport { per_z })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MaterializeError {
    #[error("materialization is limited to {limit} generators, got {got}")]
    TooManyGenerators { limit: usize, got: usize },
    #[error(transparent)]
    Cap(#[from] CapError),
}

const MATERIALIZE_GEN_LIMIT: usize = 6;

/// Materializes the exponential frame from the relation scheme, for
/// generator grids of at most six cells: the semilattice is the free
/// meet-semilattice on the cells (subsets under union), the schemata
/// become coverage instances, and the C-ideals are enumerated outright.
pub fn materialize_bexp(
    base: &Frame,
    target: &Frame,
    cap: usize,
) -> Result<PresentedFrame, MaterializeError> {
    let rel = bexp_relations(base, target);
    let cells = base.len() * target.len();
    if cells > MATERIALIZE_GEN_LIMIT {
        return Err(MaterializeError::TooManyGenerators {
            limit: MATERIALIZE_GEN_LIMIT,
            got: cells,
        });
    }
    // free meet-semilattice on the cells: subsets under union,
    // with the empty set on top
    let n = 1usize << cells;
    let ids: Vec<String> = (0..n)
        .map(|m| format!("m{m:0>width$b}", width = cells))
        .collect();
    let mut meet = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            meet[x * n + y] = (x | y) as u32;
        }
    }
    let sl = GenSemilattice::new(ids, meet).expect("subsets under union form a semilattice");
    let single = |c: usize| 1usize << c;
    let mut instances = Vec::new();
    for inst in rel.instances() {
        let (t_mask, cover_masks): (usize, Vec<usize>) = match &inst.kind {
            SchemaKind::Order { lhs, rhs } => (single(*lhs), vec![single(*rhs)]),
            SchemaKind::Forced { cell } => (0, vec![single(*cell)]),
            SchemaKind::MeetBelow { c1, c2, rhs } => {
                (single(*c1) | single(*c2), vec![single(*rhs)])
            }
            SchemaKind::Disjunction { lhs, rhs } => {
                (single(*lhs), rhs.iter().map(|&c| single(c)).collect())
            }
            SchemaKind::FiniteCover { lhs, a, b_cover } => {
                // one cover member per inner family with dominating join
                let mut members = Vec::new();
                let mut stack = vec![(0usize, base.bottom(), 0usize)];
                while let Some((i, join, mask)) = stack.pop() {
                    if i == b_cover.len() {
                        if base.leq(*a, join) {
                            members.push(mask);
                        }
                        continue;
                    }
                    for a_alpha in base.elems() {
                        stack.push((
                            i + 1,
                            base.join(join, a_alpha),
                            mask | single(rel.cell(a_alpha, b_cover[i])),
                        ));
                    }
                }
                members.sort_unstable();
                members.dedup();
                (single(*lhs), members)
            }
        };
        instances.push(Instance {
            target: t_mask,
            cover: Bits::from_indices(n, cover_masks),
        });
    }
    let pres = Presentation::new(sl, instances);
    Ok(pres.presented_frame(cap)?)
}

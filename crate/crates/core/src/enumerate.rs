//! Enumeration of all small frames up to order isomorphism.
//!
//! Every finite frame is the downset lattice of the poset of its
//! join-primes, so enumerating the downset lattices of all posets on at
//! most four points, plus the chains, yields every frame with at most
//! six elements: a poset with five or more points has at least seven
//! downsets unless it is a chain.

use crate::bits::Bits;
use crate::frame::{chain, order_iso, Frame};
use crate::poset::Poset;

/// All labeled posets on n points, as strict-order pair lists.
fn labeled_posets(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let rel: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let has = |a: usize, b: usize| rel.contains(&(a, b));
        let antisym = rel.iter().all(|&(a, b)| !has(b, a));
        let trans = rel
            .iter()
            .all(|&(a, b)| rel.iter().all(|&(c, d)| b != c || has(a, d)));
        if antisym && trans {
            out.push(rel);
        }
    }
    out
}

fn downset_lattice(n: usize, rel: &[(usize, usize)]) -> Frame {
    let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut leq: Vec<(String, String)> = (0..n).map(|i| (ids[i].clone(), ids[i].clone())).collect();
    leq.extend(rel.iter().map(|&(a, b)| (ids[a].clone(), ids[b].clone())));
    let p = Poset::from_leq(&ids, &leq).unwrap();
    let mut downs: Vec<Bits> = (0..(1u32 << n))
        .map(|mask| Bits::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)))
        .filter(|s| p.is_down_set(s))
        .collect();
    downs.sort_by_key(|s| (s.count(), s.clone()));
    let dids: Vec<String> = (0..downs.len()).map(|i| format!("d{i}")).collect();
    let mut dleq = Vec::new();
    for (i, a) in downs.iter().enumerate() {
        for (j, b) in downs.iter().enumerate() {
            if a.is_subset(b) {
                dleq.push((dids[i].clone(), dids[j].clone()));
            }
        }
    }
    Frame::new(Poset::from_leq(&dids, &dleq).unwrap()).expect("downset lattices are frames")
}

/// Every frame with at most `max_size` elements, one per isomorphism
/// class, in a deterministic order. Supported up to six elements.
pub fn small_frames(max_size: usize) -> Vec<Frame> {
    assert!(
        (1..=6).contains(&max_size),
        "small-frame enumeration covers sizes 1..=6"
    );
    let mut found: Vec<Frame> = Vec::new();
    let mut push = |f: Frame| {
        if f.len() <= max_size && !found.iter().any(|g| order_iso(&f, g).unwrap().is_some()) {
            found.push(f);
        }
    };
    for n in 0..=4 {
        for rel in labeled_posets(n) {
            push(downset_lattice(n, &rel));
        }
    }
    for n in 1..=max_size {
        push(chain(n));
    }
    found.sort_by_key(|f| {
        let mut sig: Vec<usize> = f.elems().map(|x| f.poset().downset(x).count()).collect();
        sig.sort_unstable();
        (f.len(), sig)
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_per_size() {
        let all = small_frames(6);
        let count = |k: usize| all.iter().filter(|f| f.len() == k).count();
        // distributive lattices up to iso: 1, 1, 1, 2, 3, 5
        assert_eq!(count(1), 1);
        assert_eq!(count(2), 1);
        assert_eq!(count(3), 1);
        assert_eq!(count(4), 2);
        assert_eq!(count(5), 3);
        assert_eq!(count(6), 5);
    }

    #[test]
    fn known_members_present() {
        let all = small_frames(5);
        assert!(all
            .iter()
            .any(|f| order_iso(f, &crate::frame::boolean_square())
                .unwrap()
                .is_some()));
        assert!(all
            .iter()
            .any(|f| order_iso(f, &crate::frame::chain(5)).unwrap().is_some()));
        assert!(all
            .iter()
            .any(|f| order_iso(f, &crate::frame::sierpinski().0)
                .unwrap()
                .is_some()));
    }
}

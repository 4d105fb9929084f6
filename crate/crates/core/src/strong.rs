//! Strong and n-strong substructures, minimal pairs.

use crate::error::{Error, Result};
use crate::ordering::{self, find_hf_over, ConfinedCore, HfOrdering, HfSearch};
use crate::pstss::{PartialSts, VertexId, VertexSet};

/// Largest `|B \ A|` accepted by [`is_minimal_pair`].
pub const DEFAULT_MINIMAL_PAIR_CAP: usize = 12;
/// Largest grade accepted by [`is_n_strong`] below `|B \ A|`.
pub const DEFAULT_GRADE_CAP: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongResult {
    /// HF-ordering of `B` listing `A` first.
    Strong(HfOrdering),
    /// Core anchored over `A`.
    NotStrong(ConfinedCore),
}

impl StrongResult {
    pub fn is_strong(&self) -> bool {
        matches!(self, StrongResult::Strong(_))
    }
}

/// `A <= B`: some HF-ordering of `B` has `A` as an initial segment.
pub fn is_strong(base: &VertexSet, p: &PartialSts) -> Result<StrongResult> {
    Ok(match find_hf_over(p, base)? {
        HfSearch::Ordered(o) => StrongResult::Strong(o),
        HfSearch::Confined(c) => StrongResult::NotStrong(c),
    })
}

fn check_base(base: &VertexSet, p: &PartialSts) -> Result<()> {
    p.check_set(base)?;
    if !ordering::is_unconfined(&p.induced(base)?) {
        return Err(Error::BaseConfined);
    }
    Ok(())
}

/// Calls `visit` on every subset of `items` with at most `n` elements,
/// smallest first; stops early when `visit` returns false.
fn for_small_subsets(items: &[VertexId], n: usize, visit: &mut impl FnMut(&[VertexId]) -> bool) -> bool {
    fn rec(
        items: &[VertexId],
        start: usize,
        left: usize,
        cur: &mut Vec<VertexId>,
        visit: &mut impl FnMut(&[VertexId]) -> bool,
    ) -> bool {
        if left == 0 {
            return visit(cur);
        }
        for i in start..items.len() {
            cur.push(items[i]);
            let go = rec(items, i + 1, left - 1, cur, visit);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    let mut cur = Vec::with_capacity(n);
    (0..=n.min(items.len())).all(|k| rec(items, 0, k, &mut cur, visit))
}

/// `A <=^n B`: `A <= A ∪ X` for every `X ⊆ B \ A` with `|X| <= n`.
pub fn is_n_strong(base: &VertexSet, p: &PartialSts, n: usize) -> Result<bool> {
    is_n_strong_capped(base, p, n, DEFAULT_GRADE_CAP)
}

/// As [`is_n_strong`]; grades above `cap` are rejected unless they cover all
/// of `B \ A`, where the check is plain enumeration of every subset.
pub fn is_n_strong_capped(base: &VertexSet, p: &PartialSts, n: usize, cap: usize) -> Result<bool> {
    check_base(base, p)?;
    let outside: Vec<VertexId> = p.vertices().filter(|v| !base.contains(v)).collect();
    let n = n.min(outside.len());
    if n > cap && outside.len() > 20 {
        return Err(Error::TooLarge {
            what: "graded strongness check",
            size: outside.len(),
            cap: 20,
        });
    }
    let mut base_mask = vec![false; p.len()];
    for v in base {
        base_mask[v.index()] = true;
    }
    let mut universe = base_mask.clone();
    Ok(for_small_subsets(&outside, n, &mut |x| {
        for v in x {
            universe[v.index()] = true;
        }
        let ok = ordering::strong_within(p, &universe, &base_mask);
        for v in x {
            universe[v.index()] = false;
        }
        ok
    }))
}

/// The predicate `strong_n(x1..xk)` evaluated in `p`.
pub fn strong_n_holds(p: &PartialSts, tuple: &[VertexId], n: usize) -> Result<bool> {
    is_n_strong(&tuple.iter().copied().collect(), p, n)
}

/// `(A, B)` is a minimal pair: `A` is not strong in `B` but strong in every
/// proper intermediate substructure.
pub fn is_minimal_pair(base: &VertexSet, p: &PartialSts) -> Result<bool> {
    is_minimal_pair_capped(base, p, DEFAULT_MINIMAL_PAIR_CAP)
}

pub fn is_minimal_pair_capped(base: &VertexSet, p: &PartialSts, cap: usize) -> Result<bool> {
    check_base(base, p)?;
    let outside: Vec<VertexId> = p.vertices().filter(|v| !base.contains(v)).collect();
    if outside.len() > cap {
        return Err(Error::TooLarge {
            what: "minimal pair check",
            size: outside.len(),
            cap,
        });
    }
    if outside.is_empty() || !ordering::is_unconfined(p) {
        return Ok(false);
    }
    if is_strong(base, p)?.is_strong() {
        return Ok(false);
    }
    let mut base_mask = vec![false; p.len()];
    for v in base {
        base_mask[v.index()] = true;
    }
    let m = outside.len();
    let full = (1u32 << m) - 1;
    Ok((0..full).all(|bits| {
        let mut universe = base_mask.clone();
        for (i, v) in outside.iter().enumerate() {
            if bits >> i & 1 == 1 {
                universe[v.index()] = true;
            }
        }
        ordering::strong_within(p, &universe, &base_mask)
    }))
}

/// Nested minimal pairs `A_0 ⊊ A_1 ⊊ ... ⊊ A_k` inside one structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPairChain {
    pub structure: PartialSts,
    /// `A_0, ..., A_k`; the last one is every vertex.
    pub stages: Vec<VertexSet>,
}

impl MinimalPairChain {
    /// `(A_i, induced(A_{i+1}))` for each link.
    pub fn links(&self) -> Result<Vec<(VertexSet, PartialSts)>> {
        self.stages
            .windows(2)
            .map(|w| {
                let sub = self.structure.induced(&w[1])?;
                let base = w[0].iter().map(|&v| sub.id(self.structure.name(v))).collect::<Result<_>>()?;
                Ok((base, sub))
            })
            .collect()
    }
}

/// `b_{i-1} = (b_i * a2) * (b_i * a3)` for `i = 1..=k`, verified link by link.
pub fn minimal_pair_chain(k: usize) -> Result<MinimalPairChain> {
    if k == 0 {
        return Err(Error::PreconditionFailed("chain length must be at least 1".into()));
    }
    let mut names = vec!["b0".to_string(), "a2".to_string(), "a3".to_string()];
    let mut blocks = Vec::new();
    let mut stages = vec![VertexSet::from([0, 1, 2].map(VertexId))];
    for i in 1..=k {
        let b = names.len();
        names.push(format!("b{i}"));
        names.push(format!("p2_{i}"));
        names.push(format!("p3_{i}"));
        let prev = if i == 1 { 0 } else { b - 3 };
        blocks.push([b, 1, b + 1]);
        blocks.push([b, 2, b + 2]);
        blocks.push([b + 1, b + 2, prev]);
        let mut next = stages[i - 1].clone();
        next.extend([b, b + 1, b + 2].map(VertexId::from));
        stages.push(next);
    }
    let chain = MinimalPairChain {
        structure: PartialSts::from_indexed(names, blocks)?,
        stages,
    };
    for (i, (base, sub)) in chain.links()?.iter().enumerate() {
        if !is_minimal_pair(base, sub)? {
            return Err(Error::PostconditionFailed(format!("link {i} is not a minimal pair")));
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn minpair_base() -> (PartialSts, VertexSet) {
        let p = named::minpair();
        let a = p.ids(named::MINPAIR_BASE).unwrap();
        (p, a)
    }

    #[test]
    fn empty_base_is_strong_in_unconfined() {
        for p in [named::triangle(), named::noamalgam_b1(), named::minpair()] {
            match is_strong(&VertexSet::new(), &p).unwrap() {
                StrongResult::Strong(o) => assert_eq!(o.len(), p.len()),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn minpair_is_not_strong() {
        let (p, a) = minpair_base();
        match is_strong(&a, &p).unwrap() {
            StrongResult::NotStrong(core) => {
                assert!(core.verify(&p));
                assert_eq!(core.core, p.vertex_set());
            }
            other => panic!("{other:?}"),
        }
        assert!(is_n_strong(&a, &p, 2).unwrap());
        assert!(!is_n_strong(&a, &p, 3).unwrap());
        assert!(is_minimal_pair(&a, &p).unwrap());
    }

    #[test]
    fn noamalgam_base_is_not_strong() {
        let b1 = named::noamalgam_b1();
        let a = b1.ids(named::NOAMALGAM_BASE_1).unwrap();
        assert!(!is_strong(&a, &b1).unwrap().is_strong());
        assert!(!is_minimal_pair(&a, &b1).unwrap());
    }

    #[test]
    fn trivial_cases() {
        let t = named::triangle();
        let xy: Vec<VertexId> = t.ids(["x", "y"]).unwrap().into_iter().collect();
        for n in 0..4 {
            assert!(strong_n_holds(&t, &xy, n).unwrap());
            assert!(is_n_strong(&t.vertex_set(), &t, n).unwrap());
        }
        assert!(!is_minimal_pair(&t.ids(["x", "y"]).unwrap(), &t).unwrap());
        let f = named::fano();
        assert_eq!(is_strong(&f.vertex_set(), &f), Err(Error::BaseConfined));
    }

    #[test]
    fn small_subsets_counts() {
        let items: Vec<VertexId> = (0..5).map(VertexId).collect();
        let mut count = 0;
        for_small_subsets(&items, 2, &mut |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1 + 5 + 10);
    }

    #[test]
    fn chain_of_three() {
        let c = minimal_pair_chain(3).unwrap();
        assert_eq!(c.stages.len(), 4);
        assert_eq!(c.structure.len(), 12);
        assert_eq!(c.structure.blocks().len(), 9);
        let one = minimal_pair_chain(1).unwrap();
        assert_eq!(one.structure.len(), 6);
        let (base, sub) = &one.links().unwrap()[0];
        assert!(!is_strong(base, sub).unwrap().is_strong());
    }

    #[test]
    fn chain_lives_in_a_free_truncation() {
        use crate::map::PartialMap;
        let one = minimal_pair_chain(1).unwrap();
        let mut f = crate::free::truncate_free(4, 2).unwrap();
        let ext = crate::trees::find_strong_extension(&mut f, &PartialMap::new(), &one.structure).unwrap();
        assert!(ext.map.is_embedding(&one.structure, f.carrier()));
        // The single link is the whole chain over its first stage.
        let (base, sub) = &one.links().unwrap()[0];
        assert_eq!(sub.len(), one.structure.len());
        let to_carrier = |v: VertexId| ext.map.get(one.structure.id(sub.name(v)).unwrap()).unwrap();
        let image = f.carrier().induced(&ext.map.image()).unwrap();
        let base = image
            .ids(base.iter().map(|&v| f.carrier().name(to_carrier(v))))
            .unwrap();
        assert!(is_minimal_pair(&base, &image).unwrap());
    }
}

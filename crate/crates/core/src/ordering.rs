//! Hyperfree orderings.
//!
//! An ordering of a partial STS is hyperfree (HF) when every vertex is the top
//! of at most one block, i.e. at most one block has its other two members
//! strictly earlier. A structure admits an HF-ordering exactly when it is
//! unconfined, and a failed search is reported as a [`ConfinedCore`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::pstss::{Block, PartialSts, VertexId, VertexSet};

/// A verified HF-ordering of a specific structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HfOrdering {
    sequence: Vec<VertexId>,
    rank: Vec<usize>,
    down_block: Vec<Option<Block>>,
}

impl HfOrdering {
    pub fn sequence(&self) -> &[VertexId] {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn rank(&self, v: VertexId) -> usize {
        self.rank[v.index()]
    }

    pub fn precedes(&self, a: VertexId, b: VertexId) -> bool {
        self.rank(a) < self.rank(b)
    }

    /// The block whose other two members precede `v`, if any.
    pub fn down_block(&self, v: VertexId) -> Option<Block> {
        self.down_block[v.index()]
    }

    /// True when `set` is exactly the first `set.len()` elements.
    pub fn has_initial_segment(&self, set: &VertexSet) -> bool {
        self.sequence[..set.len().min(self.sequence.len())]
            .iter()
            .all(|v| set.contains(v))
            && set.len() <= self.sequence.len()
    }

    pub fn names(&self, p: &PartialSts) -> Vec<String> {
        self.sequence.iter().map(|&v| p.name(v).to_string()).collect()
    }
}

/// First vertex topping two blocks, with the two witnessing blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: VertexId,
    pub blocks: [Block; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HfCheck {
    Ok(HfOrdering),
    Violation(Violation),
}

impl HfCheck {
    pub fn ok(self) -> Option<HfOrdering> {
        match self {
            HfCheck::Ok(o) => Some(o),
            HfCheck::Violation(_) => None,
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, HfCheck::Ok(_))
    }
}

/// Witness that no (anchored) HF-ordering exists: every vertex of `core`
/// outside the anchor lies in at least two blocks inside `core`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfinedCore {
    pub core: VertexSet,
    pub anchored_over: Option<VertexSet>,
}

impl ConfinedCore {
    /// Re-checks the core invariant against `p`.
    pub fn verify(&self, p: &PartialSts) -> bool {
        let anchor = self.anchored_over.as_ref();
        if let Some(a) = anchor {
            if !a.is_subset(&self.core) {
                return false;
            }
        }
        self.core
            .iter()
            .filter(|v| anchor.is_none_or(|a| !a.contains(v)))
            .all(|&v| p.blocks_at(v).filter(|b| b.within(&self.core)).count() >= 2)
            && (anchor.is_some() || !self.core.is_empty())
            && (anchor.is_none_or(|a| self.core.len() > a.len()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HfSearch {
    Ordered(HfOrdering),
    Confined(ConfinedCore),
}

impl HfSearch {
    pub fn ordering(self) -> Option<HfOrdering> {
        match self {
            HfSearch::Ordered(o) => Some(o),
            HfSearch::Confined(_) => None,
        }
    }

    pub fn is_ordered(&self) -> bool {
        matches!(self, HfSearch::Ordered(_))
    }
}

/// Scans a duplicate-free sequence of vertices as an ordering of the
/// substructure it spans. Returns the down-blocks or the first violation.
fn scan(p: &PartialSts, seq: &[VertexId]) -> std::result::Result<Vec<Option<Block>>, Violation> {
    let mut rank = vec![usize::MAX; p.len()];
    for (i, &v) in seq.iter().enumerate() {
        rank[v.index()] = i;
    }
    let mut down = vec![None; p.len()];
    for (i, &v) in seq.iter().enumerate() {
        let mut found: Option<Block> = None;
        for b in p.blocks_at(v) {
            let (x, y) = b.others(v);
            if rank[x.index()] < i && rank[y.index()] < i {
                if let Some(first) = found {
                    return Err(Violation {
                        vertex: v,
                        blocks: [first, b],
                    });
                }
                found = Some(b);
            }
        }
        down[v.index()] = found;
    }
    Ok(down)
}

fn check_permutation(p: &PartialSts, seq: &[VertexId]) -> Result<()> {
    if seq.len() != p.len() {
        return Err(Error::NotAPermutation(format!(
            "{} entries for {} vertices",
            seq.len(),
            p.len()
        )));
    }
    let mut seen = vec![false; p.len()];
    for &v in seq {
        if !p.contains(v) {
            return Err(Error::NotAPermutation(format!("unknown vertex #{}", v.0)));
        }
        if std::mem::replace(&mut seen[v.index()], true) {
            return Err(Error::NotAPermutation(format!("`{}` repeated", p.name(v))));
        }
    }
    Ok(())
}

fn make_ordering(p: &PartialSts, sequence: Vec<VertexId>, down_block: Vec<Option<Block>>) -> HfOrdering {
    let mut rank = vec![usize::MAX; p.len()];
    for (i, &v) in sequence.iter().enumerate() {
        rank[v.index()] = i;
    }
    HfOrdering {
        sequence,
        rank,
        down_block,
    }
}

/// Checks that `order` (earliest first) is an HF-ordering of `p`.
pub fn verify_hf(p: &PartialSts, order: &[VertexId]) -> Result<HfCheck> {
    check_permutation(p, order)?;
    Ok(match scan(p, order) {
        Ok(down) => HfCheck::Ok(make_ordering(p, order.to_vec(), down)),
        Err(v) => HfCheck::Violation(v),
    })
}

/// [`verify_hf`] on an ordering given by vertex names.
pub fn verify_hf_names<S: AsRef<str>>(p: &PartialSts, order: &[S]) -> Result<HfCheck> {
    let seq = order
        .iter()
        .map(|n| p.id(n.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    verify_hf(p, &seq)
}

/// Whether `order` is an HF-ordering over `base`: every vertex outside the
/// base has at most one block whose other members are each earlier or in the base.
pub fn is_hf_over(p: &PartialSts, order: &HfOrdering, base: &VertexSet) -> bool {
    p.vertices().filter(|v| !base.contains(v)).all(|v| {
        let below = |x: VertexId| base.contains(&x) || order.precedes(x, v);
        p.blocks_at(v)
            .filter(|b| {
                let (x, y) = b.others(v);
                below(x) && below(y)
            })
            .count()
            <= 1
    })
}

struct Peel {
    removed: Vec<VertexId>,
    remaining: Vec<VertexId>,
}

/// Greedy peel inside `universe`: repeatedly delete the smallest-index vertex
/// outside `base` that lies in at most one block of the remaining structure.
fn peel(p: &PartialSts, universe: &[bool], base: &[bool]) -> Peel {
    let n = p.len();
    let mut active = universe.to_vec();
    let mut deg = vec![0usize; n];
    for b in p.blocks() {
        let m = b.members();
        if m.iter().all(|v| active[v.index()]) {
            for v in m {
                deg[v.index()] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<u32>> = (0..n)
        .filter(|&i| active[i] && !base[i] && deg[i] <= 1)
        .map(|i| Reverse(i as u32))
        .collect();
    let mut removed = Vec::new();
    while let Some(Reverse(i)) = heap.pop() {
        let v = VertexId(i);
        if !active[v.index()] {
            continue;
        }
        for b in p.blocks_at(v) {
            let (x, y) = b.others(v);
            if active[x.index()] && active[y.index()] {
                for w in [x, y] {
                    deg[w.index()] -= 1;
                    if deg[w.index()] == 1 && !base[w.index()] {
                        heap.push(Reverse(w.0));
                    }
                }
            }
        }
        active[v.index()] = false;
        removed.push(v);
    }
    let remaining = (0..n).filter(|&i| active[i]).map(VertexId::from).collect();
    Peel { removed, remaining }
}

fn mask(p: &PartialSts, set: &VertexSet) -> Vec<bool> {
    let mut m = vec![false; p.len()];
    for v in set {
        m[v.index()] = true;
    }
    m
}

/// Whether `base` is strong in the substructure on `universe`; base must be
/// unconfined (callers check). Cheap form used by the subset enumerations.
pub(crate) fn strong_within(p: &PartialSts, universe: &[bool], base: &[bool]) -> bool {
    let outer = peel(p, universe, base);
    outer
        .remaining
        .iter()
        .all(|v| base[v.index()])
}

/// Greedy HF-ordering search; never wrong because unconfinedness is
/// inherited by substructures.
pub fn find_hf(p: &PartialSts) -> HfSearch {
    let all = vec![true; p.len()];
    let pl = peel(p, &all, &vec![false; p.len()]);
    if pl.remaining.is_empty() {
        let seq: Vec<VertexId> = pl.removed.into_iter().rev().collect();
        let down = scan(p, &seq).expect("reverse peel order is hyperfree");
        HfSearch::Ordered(make_ordering(p, seq, down))
    } else {
        HfSearch::Confined(ConfinedCore {
            core: pl.remaining.into_iter().collect(),
            anchored_over: None,
        })
    }
}

pub fn is_unconfined(p: &PartialSts) -> bool {
    find_hf(p).is_ordered()
}

/// HF-ordering of `p` with `base` as an initial segment, or an anchored core.
pub fn find_hf_over(p: &PartialSts, base: &VertexSet) -> Result<HfSearch> {
    p.check_set(base)?;
    let none = vec![false; p.len()];
    let base_peel = peel(p, &mask(p, base), &none);
    if !base_peel.remaining.is_empty() {
        return Err(Error::BaseConfined);
    }
    let outer = peel(p, &vec![true; p.len()], &mask(p, base));
    if outer.remaining.len() > base.len() {
        return Ok(HfSearch::Confined(ConfinedCore {
            core: outer.remaining.into_iter().collect(),
            anchored_over: Some(base.clone()),
        }));
    }
    // Keep the base in insertion order when that is already hyperfree.
    let in_order: Vec<VertexId> = base.iter().copied().collect();
    let mut seq = if scan(p, &in_order).is_ok() {
        in_order
    } else {
        base_peel.removed.into_iter().rev().collect()
    };
    seq.extend(outer.removed.into_iter().rev());
    let down = scan(p, &seq).expect("anchored peel order is hyperfree");
    Ok(HfSearch::Ordered(make_ordering(p, seq, down)))
}

/// Order closure: least superset of `set` containing both lower members of
/// the down-block of each of its elements.
pub fn closure(p: &PartialSts, order: &HfOrdering, set: &VertexSet) -> Result<VertexSet> {
    p.check_set(set)?;
    if order.len() != p.len() {
        return Err(Error::InvalidOrdering(format!(
            "ordering has {} vertices, structure has {}",
            order.len(),
            p.len()
        )));
    }
    let mut closed = set.clone();
    let mut work: Vec<VertexId> = set.iter().copied().collect();
    while let Some(v) = work.pop() {
        if let Some(b) = order.down_block(v) {
            let (x, y) = b.others(v);
            for w in [x, y] {
                if closed.insert(w) {
                    work.push(w);
                }
            }
        }
    }
    Ok(closed)
}

/// Moves a closed set `closed` directly after the initial segment `prefix`,
/// optionally reordering `closed` by `replacement`, and re-verifies.
pub fn promote_closed(
    p: &PartialSts,
    order: &HfOrdering,
    closed: &VertexSet,
    prefix: &VertexSet,
    replacement: Option<&[VertexId]>,
) -> Result<HfOrdering> {
    p.check_set(closed)?;
    p.check_set(prefix)?;
    for &v in closed {
        if let Some(b) = order.down_block(v) {
            let (x, y) = b.others(v);
            for w in [x, y] {
                if !closed.contains(&w) {
                    return Err(Error::NotClosed(p.name(v).into(), p.name(w).into()));
                }
            }
        }
    }
    if let Some(v) = prefix.intersection(closed).next() {
        return Err(Error::NotInitialSegment(format!(
            "`{}` is in both sets",
            p.name(*v)
        )));
    }
    if !order.has_initial_segment(prefix) {
        return Err(Error::NotInitialSegment(
            "prefix is not an initial segment of the ordering".into(),
        ));
    }
    let inner: Vec<VertexId> = match replacement {
        Some(seq) => {
            let as_set: VertexSet = seq.iter().copied().collect();
            if as_set != *closed || seq.len() != closed.len() {
                return Err(Error::InvalidOrdering(
                    "replacement is not a permutation of the closed set".into(),
                ));
            }
            if let Err(v) = scan(p, seq) {
                return Err(Error::InvalidOrdering(format!(
                    "replacement is not hyperfree at `{}`",
                    p.name(v.vertex)
                )));
            }
            seq.to_vec()
        }
        None => order
            .sequence()
            .iter()
            .copied()
            .filter(|v| closed.contains(v))
            .collect(),
    };
    let mut seq: Vec<VertexId> = order.sequence()[..prefix.len()].to_vec();
    seq.extend(inner);
    seq.extend(
        order
            .sequence()
            .iter()
            .copied()
            .filter(|v| !closed.contains(v) && !prefix.contains(v)),
    );
    match verify_hf(p, &seq)? {
        HfCheck::Ok(o) => Ok(o),
        HfCheck::Violation(v) => Err(Error::ResultNotHF(p.name(v.vertex).into())),
    }
}

/// HF-ordering of `p` in which vertices are sorted by a key, e.g. level.
pub fn ordering_from_sequence(p: &PartialSts, seq: Vec<VertexId>) -> Result<HfOrdering> {
    match verify_hf(p, &seq)? {
        HfCheck::Ok(o) => Ok(o),
        HfCheck::Violation(v) => Err(Error::InvalidOrdering(format!(
            "`{}` tops two blocks",
            p.name(v.vertex)
        ))),
    }
}

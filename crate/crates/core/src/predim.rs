//! Predimension, well-embedding and orientations.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::pstss::{Block, PartialSts, VertexId, VertexSet};

/// Cap on the number of vertices for the exponential subset checks.
pub const DEFAULT_SUBSET_CAP: usize = 20;

/// `|vertices| - |blocks|`.
pub fn delta(p: &PartialSts) -> i64 {
    p.len() as i64 - p.blocks().len() as i64
}

/// Predimension of the substructure induced on `set`.
pub fn delta_of(p: &PartialSts, set: &VertexSet) -> i64 {
    set.len() as i64 - p.blocks_within(set) as i64
}

/// Bitmask view of a small structure for subset enumeration.
struct Masks {
    n: usize,
    blocks: Vec<u32>,
}

impl Masks {
    fn new(p: &PartialSts, cap: usize, what: &'static str) -> Result<Masks> {
        if p.len() > cap || p.len() > 31 {
            return Err(Error::TooLarge {
                what,
                size: p.len(),
                cap: cap.min(31),
            });
        }
        let blocks = p
            .blocks()
            .iter()
            .map(|b| b.members().iter().fold(0u32, |m, v| m | (1 << v.index())))
            .collect();
        Ok(Masks { n: p.len(), blocks })
    }

    fn of(set: &VertexSet) -> u32 {
        set.iter().fold(0, |m, v| m | (1 << v.index()))
    }

    fn delta(&self, mask: u32) -> i64 {
        mask.count_ones() as i64 - self.blocks.iter().filter(|&&b| mask & b == b).count() as i64
    }

    /// Minimum of delta over all supersets of `base`.
    fn min_delta_above(&self, base: u32) -> i64 {
        let free = ((1u64 << self.n) - 1) as u32 & !base;
        let mut best = self.delta(base);
        // Enumerate the submasks of `free`.
        let mut sub = free;
        loop {
            best = best.min(self.delta(base | sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        best
    }
}

/// `delta(A) <= delta(B0)` for every `B0` with `A ⊆ B0 ⊆ B`.
pub fn is_well_embedded(base: &VertexSet, p: &PartialSts) -> Result<bool> {
    is_well_embedded_capped(base, p, DEFAULT_SUBSET_CAP)
}

pub fn is_well_embedded_capped(base: &VertexSet, p: &PartialSts, cap: usize) -> Result<bool> {
    p.check_set(base)?;
    let m = Masks::new(p, cap, "well-embedding check")?;
    let a = Masks::of(base);
    Ok(m.delta(a) <= m.min_delta_above(a))
}

/// Injective choice of an apex inside each block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    /// `(block, apex)` in canonical block order.
    apex: Vec<(Block, VertexId)>,
}

impl Orientation {
    /// Validates an apex assignment against `p`.
    pub fn new(p: &PartialSts, mut apex: Vec<(Block, VertexId)>) -> Result<Orientation> {
        apex.sort();
        if apex.len() != p.blocks().len()
            || apex.iter().zip(p.blocks()).any(|((b, _), pb)| b != pb)
        {
            return Err(Error::InvalidOrientation(
                "must assign exactly one apex to every block".into(),
            ));
        }
        let mut used = vec![false; p.len()];
        for (b, v) in &apex {
            if !b.contains(*v) {
                return Err(Error::InvalidOrientation(format!(
                    "apex `{}` is not in its block",
                    p.name(*v)
                )));
            }
            if std::mem::replace(&mut used[v.index()], true) {
                return Err(Error::InvalidOrientation(format!(
                    "`{}` is the apex of two blocks",
                    p.name(*v)
                )));
            }
        }
        Ok(Orientation { apex })
    }

    pub fn pairs(&self) -> &[(Block, VertexId)] {
        &self.apex
    }

    pub fn apex_of(&self, b: &Block) -> Option<VertexId> {
        self.apex
            .binary_search_by(|(x, _)| x.cmp(b))
            .ok()
            .map(|i| self.apex[i].1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrientationSearch {
    Oriented(Orientation),
    /// Blocks covering fewer vertices than there are blocks.
    HallViolation(Vec<Block>),
}

/// Maximum matching of blocks into their members (augmenting paths).
pub fn find_orientation(p: &PartialSts) -> OrientationSearch {
    let blocks = p.blocks();
    let mut owner: Vec<Option<usize>> = vec![None; p.len()];
    let mut matched: Vec<Option<VertexId>> = vec![None; blocks.len()];

    fn augment(
        bi: usize,
        blocks: &[Block],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
        matched: &mut [Option<VertexId>],
    ) -> bool {
        for v in blocks[bi].members() {
            if std::mem::replace(&mut seen[v.index()], true) {
                continue;
            }
            let free = match owner[v.index()] {
                None => true,
                Some(other) => augment(other, blocks, seen, owner, matched),
            };
            if free {
                owner[v.index()] = Some(bi);
                matched[bi] = Some(v);
                return true;
            }
        }
        false
    }

    for bi in 0..blocks.len() {
        let mut seen = vec![false; p.len()];
        if !augment(bi, blocks, &mut seen, &mut owner, &mut matched) {
            // Blocks reachable by alternating paths from `bi` form a deficient set.
            let mut in_set = vec![false; blocks.len()];
            let mut queue = VecDeque::from([bi]);
            in_set[bi] = true;
            while let Some(c) = queue.pop_front() {
                for v in blocks[c].members() {
                    if let Some(o) = owner[v.index()] {
                        if !std::mem::replace(&mut in_set[o], true) {
                            queue.push_back(o);
                        }
                    }
                }
            }
            let set = (0..blocks.len())
                .filter(|&i| in_set[i])
                .map(|i| blocks[i])
                .collect();
            return OrientationSearch::HallViolation(set);
        }
    }
    let apex = blocks
        .iter()
        .zip(&matched)
        .map(|(b, v)| (*b, v.expect("all blocks matched")))
        .collect();
    OrientationSearch::Oriented(Orientation { apex })
}

/// Every block with apex in `set` lies inside `set`.
pub fn is_c_closed(p: &PartialSts, orientation: &Orientation, set: &VertexSet) -> Result<bool> {
    p.check_set(set)?;
    if orientation.pairs().len() != p.blocks().len() {
        return Err(Error::InvalidOrientation("orientation does not match structure".into()));
    }
    Ok(orientation
        .pairs()
        .iter()
        .all(|(b, apex)| !set.contains(apex) || b.within(set)))
}

/// Orientable and `delta(Y) >= min(|Y|, 2)` for every vertex subset `Y`.
pub fn in_class_or(p: &PartialSts) -> Result<bool> {
    in_class_or_capped(p, DEFAULT_SUBSET_CAP)
}

pub fn in_class_or_capped(p: &PartialSts, cap: usize) -> Result<bool> {
    let m = Masks::new(p, cap, "orientation class check")?;
    if !matches!(find_orientation(p), OrientationSearch::Oriented(_)) {
        return Ok(false);
    }
    let full = ((1u64 << m.n) - 1) as u32;
    Ok((0..=full).all(|y| m.delta(y) >= i64::from(y.count_ones().min(2))))
}

/// The class condition read literally: orientable, and every set of at most
/// two vertices is well-embedded.
pub fn in_class_or_by_definition(p: &PartialSts) -> Result<bool> {
    let m = Masks::new(p, DEFAULT_SUBSET_CAP, "orientation class check")?;
    if !matches!(find_orientation(p), OrientationSearch::Oriented(_)) {
        return Ok(false);
    }
    for i in 0..m.n {
        for j in i..m.n {
            let x = (1u32 << i) | (1u32 << j);
            if m.delta(x) > m.min_delta_above(x) {
                return Ok(false);
            }
        }
    }
    Ok(m.n == 0 || m.min_delta_above(0) >= 0)
}

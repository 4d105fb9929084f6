//! Exhaustive oracles for HF-ordering existence.
//!
//! These build orderings bottom-up, one vertex at a time, over every
//! permutation (memoising dead prefixes by their vertex set). They share no
//! code with the greedy peel in [`crate::ordering`] and exist to cross-check it.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::pstss::{PartialSts, VertexSet};

pub const DEFAULT_ORACLE_CAP: usize = 9;

struct Search {
    n: usize,
    /// For each vertex, the pair masks of the other two members of each block.
    pairs: Vec<Vec<u32>>,
    dead: HashSet<u32>,
    base: u32,
}

impl Search {
    fn tops(&self, v: usize, placed: u32) -> usize {
        self.pairs[v].iter().filter(|&&m| placed & m == m).count()
    }

    fn extend(&mut self, placed: u32) -> bool {
        let full = (1u32 << self.n) - 1;
        if placed == full {
            return true;
        }
        if self.dead.contains(&placed) {
            return false;
        }
        // Base vertices must all come before any other vertex.
        let pool = if placed & self.base != self.base {
            self.base & !placed
        } else {
            full & !placed
        };
        for v in 0..self.n {
            if pool & (1 << v) != 0 && self.tops(v, placed) <= 1 && self.extend(placed | (1 << v)) {
                return true;
            }
        }
        self.dead.insert(placed);
        false
    }
}

fn run(p: &PartialSts, base: u32, cap: usize) -> Result<bool> {
    if p.len() > cap || p.len() > 31 {
        return Err(Error::TooLarge {
            what: "exhaustive ordering oracle",
            size: p.len(),
            cap,
        });
    }
    let mut pairs = vec![Vec::new(); p.len()];
    for b in p.blocks() {
        let [x, y, z] = b.members().map(|v| v.index());
        pairs[x].push((1 << y) | (1 << z));
        pairs[y].push((1 << x) | (1 << z));
        pairs[z].push((1 << x) | (1 << y));
    }
    let mut s = Search {
        n: p.len(),
        pairs,
        dead: HashSet::new(),
        base,
    };
    Ok(s.extend(0))
}

pub fn oracle_hf_exists(p: &PartialSts) -> Result<bool> {
    run(p, 0, DEFAULT_ORACLE_CAP)
}

pub fn oracle_hf_exists_capped(p: &PartialSts, cap: usize) -> Result<bool> {
    run(p, 0, cap)
}

/// Whether some HF-ordering of `p` lists `base` first.
pub fn oracle_hf_over(p: &PartialSts, base: &VertexSet) -> Result<bool> {
    oracle_hf_over_capped(p, base, DEFAULT_ORACLE_CAP)
}

pub fn oracle_hf_over_capped(p: &PartialSts, base: &VertexSet, cap: usize) -> Result<bool> {
    p.check_set(base)?;
    let m = base.iter().fold(0u32, |m, v| m | (1 << v.index()));
    run(p, m, cap)
}

/// Unconfinedness read literally: every nonempty vertex subset has a member
/// lying in at most one block inside the subset.
pub fn oracle_unconfined_by_subsets(p: &PartialSts) -> Result<bool> {
    if p.len() > DEFAULT_ORACLE_CAP {
        return Err(Error::TooLarge {
            what: "subset unconfinedness oracle",
            size: p.len(),
            cap: DEFAULT_ORACLE_CAP,
        });
    }
    let blocks: Vec<u32> = p
        .blocks()
        .iter()
        .map(|b| b.members().iter().fold(0u32, |m, v| m | (1 << v.index())))
        .collect();
    let full = (1u32 << p.len()) - 1;
    Ok((1..=full).all(|s| {
        (0..p.len()).any(|v| {
            s >> v & 1 == 1
                && blocks
                    .iter()
                    .filter(|&&b| b >> v & 1 == 1 && s & b == b)
                    .count()
                    <= 1
        })
    }))
}

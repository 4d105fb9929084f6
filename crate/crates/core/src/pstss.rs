//! Partial Steiner triple systems.
//!
//! A [`PartialSts`] is a finite vertex set together with 3-element blocks such
//! that every unordered pair of vertices lies in at most one block. Values are
//! immutable once built; every derived structure (induced substructures,
//! amalgams, truncations) is a fresh value.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Index of a vertex inside one [`PartialSts`]; equals insertion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

/// Three distinct vertices, stored as the sorted triple of indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block([VertexId; 3]);

impl Block {
    /// Canonical block on three vertices, or `None` if two coincide.
    pub fn new(a: VertexId, b: VertexId, c: VertexId) -> Option<Block> {
        let mut m = [a, b, c];
        m.sort_unstable();
        if m[0] == m[1] || m[1] == m[2] {
            None
        } else {
            Some(Block(m))
        }
    }

    pub fn members(&self) -> [VertexId; 3] {
        self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    /// The two members other than `v`. `v` must be a member.
    pub fn others(&self, v: VertexId) -> (VertexId, VertexId) {
        let [a, b, c] = self.0;
        if v == a {
            (b, c)
        } else if v == b {
            (a, c)
        } else {
            debug_assert_eq!(v, c);
            (a, b)
        }
    }

    /// The member completing the pair `{x, y}`.
    pub fn third(&self, x: VertexId, y: VertexId) -> VertexId {
        self.0
            .into_iter()
            .find(|&m| m != x && m != y)
            .expect("block has three distinct members")
    }

    pub fn within(&self, set: &VertexSet) -> bool {
        self.0.iter().all(|v| set.contains(v))
    }
}

#[inline]
fn pair_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '#') {
        Err(Error::InvalidName(name.to_string()))
    } else {
        Ok(())
    }
}

/// A finite partial Steiner triple system.
#[derive(Clone)]
pub struct PartialSts {
    names: Vec<String>,
    by_name: HashMap<String, VertexId>,
    blocks: Vec<Block>,
    pair_index: HashMap<(VertexId, VertexId), usize>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for PartialSts {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.blocks == other.blocks
    }
}

impl Eq for PartialSts {}

impl fmt::Debug for PartialSts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<[&str; 3]> = self.blocks.iter().map(|b| self.block_names(b)).collect();
        f.debug_struct("PartialSts")
            .field("vertices", &self.names)
            .field("blocks", &blocks)
            .finish()
    }
}

impl PartialSts {
    /// Builds and validates a structure from vertex names and name triples.
    pub fn build<V, S, B>(vertices: V, blocks: B) -> Result<PartialSts>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        B: IntoIterator<Item = [S; 3]>,
    {
        let names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut by_name = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            check_name(n)?;
            if by_name.insert(n.clone(), VertexId::from(i)).is_some() {
                return Err(Error::DuplicateVertex(n.clone()));
            }
        }
        let mut triples = Vec::new();
        for [x, y, z] in blocks {
            let (x, y, z): (String, String, String) = (x.into(), y.into(), z.into());
            let look = |n: &String| {
                by_name
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::UnknownVertex(n.clone()))
            };
            let (a, b, c) = (look(&x)?, look(&y)?, look(&z)?);
            let block = Block::new(a, b, c).ok_or(Error::DegenerateBlock(x, y, z))?;
            triples.push(block);
        }
        Self::assemble(names, by_name, triples)
    }

    /// Builds from names and index triples; used by internal constructions.
    pub fn from_indexed(names: Vec<String>, blocks: Vec<[usize; 3]>) -> Result<PartialSts> {
        let mut by_name = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            check_name(n)?;
            if by_name.insert(n.clone(), VertexId::from(i)).is_some() {
                return Err(Error::DuplicateVertex(n.clone()));
            }
        }
        let n = names.len();
        let mut triples = Vec::with_capacity(blocks.len());
        for [a, b, c] in blocks {
            for i in [a, b, c] {
                if i >= n {
                    return Err(Error::UnknownVertex(format!("#{i}")));
                }
            }
            let block = Block::new(a.into(), b.into(), c.into()).ok_or_else(|| {
                Error::DegenerateBlock(names[a].clone(), names[b].clone(), names[c].clone())
            })?;
            triples.push(block);
        }
        Self::assemble(names, by_name, triples)
    }

    fn assemble(
        names: Vec<String>,
        by_name: HashMap<String, VertexId>,
        mut blocks: Vec<Block>,
    ) -> Result<PartialSts> {
        blocks.sort_unstable();
        blocks.dedup();
        let mut pair_index = HashMap::with_capacity(blocks.len() * 3);
        let mut incidence = vec![Vec::new(); names.len()];
        for (bi, block) in blocks.iter().enumerate() {
            let [a, b, c] = block.members();
            for (x, y) in [(a, b), (a, c), (b, c)] {
                if let Some(&prev) = pair_index.get(&(x, y)) {
                    let other: &Block = &blocks[prev];
                    return Err(Error::PairReuse {
                        a: names[x.index()].clone(),
                        b: names[y.index()].clone(),
                        first: names[other.third(x, y).index()].clone(),
                        second: names[block.third(x, y).index()].clone(),
                    });
                }
                pair_index.insert((x, y), bi);
            }
            for v in [a, b, c] {
                incidence[v.index()].push(bi);
            }
        }
        Ok(PartialSts {
            names,
            by_name,
            blocks,
            pair_index,
            incidence,
        })
    }

    pub fn empty() -> PartialSts {
        PartialSts::from_indexed(Vec::new(), Vec::new()).expect("empty structure is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + ExactSizeIterator + '_ {
        (0..self.names.len()).map(VertexId::from)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn id(&self, name: &str) -> Result<VertexId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    /// Resolves a list of names to a vertex set.
    pub fn ids<I, S>(&self, names: I) -> Result<VertexSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().map(|n| self.id(n.as_ref())).collect()
    }

    pub fn set_names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|&v| self.name(v).to_string()).collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.names.len()
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<()> {
        match set.iter().find(|v| !self.contains(**v)) {
            Some(v) => Err(Error::UnknownVertex(format!("#{}", v.0))),
            None => Ok(()),
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_names(&self, b: &Block) -> [&str; 3] {
        b.members().map(|v| self.name(v))
    }

    /// The unique block containing the pair, if any.
    pub fn block_of_pair(&self, a: VertexId, b: VertexId) -> Option<Block> {
        if a == b {
            return None;
        }
        self.pair_index
            .get(&pair_key(a, b))
            .map(|&i| self.blocks[i])
    }

    /// Partial product: the third vertex of the block through `a` and `b`.
    pub fn third(&self, a: VertexId, b: VertexId) -> Option<VertexId> {
        self.block_of_pair(a, b).map(|bl| bl.third(a, b))
    }

    pub fn has_block(&self, a: VertexId, b: VertexId, c: VertexId) -> bool {
        self.third(a, b) == Some(c)
    }

    pub fn blocks_at(&self, v: VertexId) -> impl Iterator<Item = Block> + '_ {
        self.incidence[v.index()].iter().map(|&i| self.blocks[i])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.index()].len()
    }

    pub fn degree_of(&self, name: &str) -> Result<usize> {
        Ok(self.degree(self.id(name)?))
    }

    /// Substructure on `set`: the blocks of `self` lying entirely inside it.
    /// Vertices keep their names and relative insertion order.
    pub fn induced(&self, set: &VertexSet) -> Result<PartialSts> {
        self.check_set(set)?;
        let mut remap = vec![usize::MAX; self.len()];
        let mut names = Vec::with_capacity(set.len());
        for (i, &v) in set.iter().enumerate() {
            remap[v.index()] = i;
            names.push(self.names[v.index()].clone());
        }
        let blocks = self
            .blocks
            .iter()
            .filter(|b| b.within(set))
            .map(|b| b.members().map(|v| remap[v.index()]))
            .collect();
        PartialSts::from_indexed(names, blocks)
    }

    /// Number of blocks lying entirely inside `set`.
    pub fn blocks_within(&self, set: &VertexSet) -> usize {
        self.blocks.iter().filter(|b| b.within(set)).count()
    }

    /// Least superset of `set` closed under the defined products.
    pub fn span(&self, set: &VertexSet) -> Result<VertexSet> {
        self.check_set(set)?;
        let mut closed = set.clone();
        let mut work: Vec<VertexId> = set.iter().copied().collect();
        while let Some(v) = work.pop() {
            for b in self.blocks_at(v) {
                let (x, y) = b.others(v);
                let missing = match (closed.contains(&x), closed.contains(&y)) {
                    (true, false) => y,
                    (false, true) => x,
                    _ => continue,
                };
                closed.insert(missing);
                work.push(missing);
            }
        }
        Ok(closed)
    }

    /// Every unordered pair of distinct vertices lies in exactly one block.
    pub fn is_total_sts(&self) -> bool {
        let n = self.len();
        self.pair_index.len() == n * n.saturating_sub(1) / 2
    }
}

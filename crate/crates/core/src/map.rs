//! Explicit vertex maps between two structures.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pstss::{PartialSts, VertexId, VertexSet};

/// Injective map from some vertices of a source structure to a target.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialMap {
    forward: HashMap<VertexId, VertexId>,
    backward: HashMap<VertexId, VertexId>,
    /// Insertion order, for deterministic output.
    pairs: Vec<(VertexId, VertexId)>,
}

impl PartialMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<PartialMap>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut m = PartialMap::new();
        for (a, b) in pairs {
            m.insert(a, b)?;
        }
        Ok(m)
    }

    pub fn from_names<S: AsRef<str>>(
        source: &PartialSts,
        target: &PartialSts,
        pairs: &[(S, S)],
    ) -> Result<PartialMap> {
        let mut m = PartialMap::new();
        for (a, b) in pairs {
            m.insert(source.id(a.as_ref())?, target.id(b.as_ref())?)
                .map_err(|_| {
                    Error::InvalidGlue(format!(
                        "`{}` -> `{}` breaks injectivity",
                        a.as_ref(),
                        b.as_ref()
                    ))
                })?;
        }
        Ok(m)
    }

    /// Adds a pair, rejecting anything that would break injectivity.
    pub fn insert(&mut self, a: VertexId, b: VertexId) -> Result<()> {
        match (self.forward.get(&a), self.backward.get(&b)) {
            (Some(&x), _) if x == b => return Ok(()),
            (None, None) => {}
            _ => {
                return Err(Error::InvalidGlue(format!(
                    "#{} -> #{} breaks injectivity",
                    a.0, b.0
                )))
            }
        }
        self.forward.insert(a, b);
        self.backward.insert(b, a);
        self.pairs.push((a, b));
        Ok(())
    }

    pub fn get(&self, a: VertexId) -> Option<VertexId> {
        self.forward.get(&a).copied()
    }

    pub fn preimage(&self, b: VertexId) -> Option<VertexId> {
        self.backward.get(&b).copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(VertexId, VertexId)] {
        &self.pairs
    }

    pub fn domain(&self) -> VertexSet {
        self.forward.keys().copied().collect()
    }

    pub fn image(&self) -> VertexSet {
        self.backward.keys().copied().collect()
    }

    pub fn image_of(&self, set: &VertexSet) -> Option<VertexSet> {
        set.iter().map(|&v| self.get(v)).collect()
    }

    /// Whether the map is an isomorphism between the substructures induced
    /// on its domain and on its image.
    pub fn is_embedding(&self, source: &PartialSts, target: &PartialSts) -> bool {
        let dom: Vec<VertexId> = self.pairs.iter().map(|p| p.0).collect();
        if dom.iter().any(|&v| !source.contains(v))
            || self.pairs.iter().any(|&(_, w)| !target.contains(w))
        {
            return false;
        }
        for (i, &u) in dom.iter().enumerate() {
            for &v in &dom[i + 1..] {
                let s = source.third(u, v).filter(|w| self.forward.contains_key(w));
                let t = target
                    .third(self.forward[&u], self.forward[&v])
                    .and_then(|w| self.preimage(w));
                if s != t {
                    return false;
                }
            }
        }
        true
    }

    /// `(source name, target name)` pairs in insertion order.
    pub fn name_pairs(&self, source: &PartialSts, target: &PartialSts) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(a, b)| (source.name(a).to_string(), target.name(b).to_string()))
            .collect()
    }
}

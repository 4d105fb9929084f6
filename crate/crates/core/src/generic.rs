//! Finite prefixes of the generic structure, grown inside free truncations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::free::{free_base_from_ordering, truncate_free, FreeTruncation};
use crate::map::PartialMap;
use crate::ordering::{find_hf_over, HfOrdering, HfSearch};
use crate::pstss::{PartialSts, VertexId, VertexSet};
use crate::strong::{is_strong, StrongResult};
use crate::trees::find_strong_extension;

/// Truncations larger than this are never requested.
const MAX_GENERATORS: usize = 24;
const MAX_LEVELS: usize = 2;

/// One extension demand `A <= B` discharged by the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// The first stage: a single block.
    Triangle,
    /// One new vertex in no block.
    FreePoint,
    /// A new vertex completing a block on two existing ones.
    Product(String, String),
    /// Two new vertices forming a block with an existing one.
    Pendant(String),
}

#[derive(Clone, Debug)]
pub struct GenericChain {
    pub truncation: FreeTruncation,
    pub requirements: Vec<Requirement>,
    /// `C_0 ⊆ C_1 ⊆ ...` as carrier vertices of the final truncation.
    pub stages: Vec<VertexSet>,
    /// HF-ordering of the carrier over each stage.
    pub certificates: Vec<HfOrdering>,
    pub free_base: VertexSet,
}

impl GenericChain {
    pub fn stage(&self, i: usize) -> Result<PartialSts> {
        self.truncation.carrier().induced(&self.stages[i])
    }
}

fn remap(old: &FreeTruncation, new: &mut FreeTruncation, set: &VertexSet) -> Result<VertexSet> {
    set.iter()
        .map(|&v| new.vertex_by_name(old.carrier().name(v)))
        .collect()
}

/// `A` plus the new vertices of the requirement.
fn demand(a: &PartialSts, req: &Requirement) -> Result<PartialSts> {
    let mut names: Vec<String> = a.names().to_vec();
    let mut blocks: Vec<[String; 3]> = a
        .blocks()
        .iter()
        .map(|b| a.block_names(b).map(str::to_string))
        .collect();
    match req {
        Requirement::Triangle => {
            names.extend(["x", "y", "z"].map(String::from));
            blocks.push(["x", "y", "z"].map(String::from));
        }
        Requirement::FreePoint => names.push("new0".into()),
        Requirement::Product(x, y) => {
            names.push("new0".into());
            blocks.push([x.clone(), y.clone(), "new0".into()]);
        }
        Requirement::Pendant(x) => {
            names.extend(["new0", "new1"].map(String::from));
            blocks.push([x.clone(), "new0".into(), "new1".into()]);
        }
    }
    PartialSts::build(names, blocks)
}

fn pick_requirement(rng: &mut ChaCha8Rng, f: &FreeTruncation, stage: &VertexSet) -> Requirement {
    let p = f.carrier();
    let low: Vec<VertexId> = stage
        .iter()
        .copied()
        .filter(|&v| f.level_of(v) < MAX_LEVELS)
        .collect();
    match rng.gen_range(0..3) {
        1 => {
            let mut pairs = Vec::new();
            for (i, &x) in low.iter().enumerate() {
                for &y in &low[i + 1..] {
                    if p.third(x, y).is_none_or(|z| !stage.contains(&z)) {
                        pairs.push((x, y));
                    }
                }
            }
            if pairs.is_empty() {
                return Requirement::FreePoint;
            }
            let (x, y) = pairs[rng.gen_range(0..pairs.len())];
            Requirement::Product(p.name(x).into(), p.name(y).into())
        }
        2 if !low.is_empty() => Requirement::Pendant(p.name(low[rng.gen_range(0..low.len())]).into()),
        _ => Requirement::FreePoint,
    }
}

/// Grows `steps` stages, each strong in the carrier, by discharging a seeded
/// schedule of extension demands; the truncation is enlarged on demand.
pub fn generic_prefix(steps: usize, seed: u64) -> Result<GenericChain> {
    if steps == 0 {
        return Err(Error::PreconditionFailed("at least one step".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = truncate_free(3, 2)?;
    let mut stages: Vec<VertexSet> = Vec::with_capacity(steps);
    let mut requirements = Vec::with_capacity(steps);
    while stages.len() < steps {
        let current = stages.last().cloned().unwrap_or_default();
        let req = if stages.is_empty() {
            Requirement::Triangle
        } else {
            pick_requirement(&mut rng, &f, &current)
        };
        let a = f.carrier().induced(&current)?;
        let b = demand(&a, &req)?;
        loop {
            let img = PartialMap::from_pairs(
                a.vertices()
                    .map(|v| Ok((b.id(a.name(v))?, f.vertex_by_name(a.name(v))?)))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            match find_strong_extension(&mut f, &img, &b) {
                Ok(ext) => {
                    stages.push(ext.map.image());
                    break;
                }
                Err(Error::NeedDeeper {
                    suggest_generators,
                    suggest_levels,
                    ..
                }) if suggest_generators <= MAX_GENERATORS && suggest_levels <= MAX_LEVELS => {
                    let mut bigger = truncate_free(suggest_generators, suggest_levels)?;
                    for s in stages.iter_mut() {
                        *s = remap(&f, &mut bigger, s)?;
                    }
                    f = bigger;
                }
                Err(Error::NeedDeeper {
                    suggest_generators,
                    suggest_levels,
                    ..
                }) => {
                    return Err(Error::ResourceLimit {
                        what: format!("generic prefix in F({suggest_generators},{suggest_levels})"),
                        needed: suggest_generators.max(suggest_levels),
                        cap: MAX_GENERATORS,
                    })
                }
                Err(e) => return Err(e),
            }
        }
        requirements.push(req);
    }

    let mut certificates = Vec::with_capacity(steps);
    for s in &stages {
        match find_hf_over(f.carrier(), s)? {
            HfSearch::Ordered(o) => certificates.push(o),
            HfSearch::Confined(_) => {
                return Err(Error::PostconditionFailed("stage is strong in the carrier".into()))
            }
        }
    }
    let free_base = free_base_from_ordering(f.carrier(), &f.level_ordering())?;
    Ok(GenericChain {
        truncation: f,
        requirements,
        stages,
        certificates,
        free_base,
    })
}

/// `C_i <= C_j` for every `i < j`, checked inside `C_j`.
pub fn chain_is_strong(chain: &GenericChain) -> Result<bool> {
    let p = chain.truncation.carrier();
    for j in 0..chain.stages.len() {
        let cj = p.induced(&chain.stages[j])?;
        for i in 0..j {
            if !chain.stages[i].is_subset(&chain.stages[j]) {
                return Ok(false);
            }
            let base = cj.ids(p.set_names(&chain.stages[i]))?;
            if !matches!(is_strong(&base, &cj)?, StrongResult::Strong(_)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_stage_is_a_triangle() {
        let c = generic_prefix(1, 0).unwrap();
        let c0 = c.stage(0).unwrap();
        assert_eq!(c0.len(), 3);
        assert_eq!(c0.blocks().len(), 1);
    }

    #[test]
    fn chain_is_certified() {
        let c = generic_prefix(8, 7).unwrap();
        assert_eq!(c.stages.len(), 8);
        assert!(chain_is_strong(&c).unwrap());
        assert_eq!(c.free_base, c.truncation.generator_set());
        let again = generic_prefix(8, 7).unwrap();
        assert_eq!(again.stages, c.stages);
        assert_eq!(again.requirements, c.requirements);
    }
}

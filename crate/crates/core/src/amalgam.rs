//! Free amalgams and the strong amalgamation procedure.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::map::PartialMap;
use crate::named;
use crate::ordering::{self, find_hf, ConfinedCore, HfOrdering, HfSearch};
use crate::predim::is_well_embedded;
use crate::pstss::{PartialSts, VertexId, VertexSet};
use crate::strong::{is_n_strong, is_strong, StrongResult};

/// A glued pair lying in a `B`-block and a `C`-block with different thirds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairConflict {
    /// The pair, as `B` vertices.
    pub pair: (VertexId, VertexId),
    pub b: VertexId,
    pub c: VertexId,
}

/// `D` together with the embeddings of its two parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAmalgam {
    pub d: PartialSts,
    pub f: PartialMap,
    pub g: PartialMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeAmalgamOutcome {
    Amalgam(FreeAmalgam),
    Conflict(PairConflict),
}

fn check_glue(b: &PartialSts, c: &PartialSts, glue: &PartialMap) -> Result<()> {
    if !glue.is_embedding(b, c) {
        return Err(Error::InvalidGlue(
            "glue is not an isomorphism of the induced bases".into(),
        ));
    }
    Ok(())
}

/// First glued pair, in canonical order, whose thirds differ and are not glued.
fn first_conflict(b: &PartialSts, c: &PartialSts, glue: &PartialMap) -> Option<PairConflict> {
    let mut dom: Vec<VertexId> = glue.domain().into_iter().collect();
    dom.sort();
    for (i, &a1) in dom.iter().enumerate() {
        for &a2 in &dom[i + 1..] {
            let tb = b.third(a1, a2);
            let tc = c.third(glue.get(a1).unwrap(), glue.get(a2).unwrap());
            if let (Some(tb), Some(tc)) = (tb, tc) {
                if glue.get(tb) != Some(tc) {
                    return Some(PairConflict {
                        pair: (a1, a2),
                        b: tb,
                        c: tc,
                    });
                }
            }
        }
    }
    None
}

/// Union of `B` and `C` over the glued base with no further blocks.
/// `C` keeps its names; `B` vertices outside the base are primed on clashes.
pub fn free_amalgam(b: &PartialSts, c: &PartialSts, glue: &PartialMap) -> Result<FreeAmalgamOutcome> {
    check_glue(b, c, glue)?;
    if let Some(conflict) = first_conflict(b, c, glue) {
        return Ok(FreeAmalgamOutcome::Conflict(conflict));
    }
    let mut names: Vec<String> = c.names().to_vec();
    let mut taken: HashSet<String> = names.iter().cloned().collect();
    let mut to_d = vec![0usize; b.len()];
    for v in b.vertices() {
        to_d[v.index()] = match glue.get(v) {
            Some(w) => w.index(),
            None => {
                let mut name = b.name(v).to_string();
                while taken.contains(&name) {
                    name.push('\'');
                }
                taken.insert(name.clone());
                names.push(name);
                names.len() - 1
            }
        };
    }
    let mut blocks: Vec<[usize; 3]> = c.blocks().iter().map(|bl| bl.members().map(VertexId::index)).collect();
    blocks.extend(b.blocks().iter().map(|bl| bl.members().map(|v| to_d[v.index()])));
    let d = PartialSts::from_indexed(names, blocks)?;
    let f = PartialMap::from_pairs(b.vertices().map(|v| (v, VertexId::from(to_d[v.index()]))))?;
    let g = PartialMap::from_pairs(c.vertices().map(|v| (v, v)))?;
    Ok(FreeAmalgamOutcome::Amalgam(FreeAmalgam { d, f, g }))
}

/// Glue extended by the forced identifications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub glue: PartialMap,
    /// `(b, c)` merges in the order performed.
    pub log: Vec<(VertexId, VertexId)>,
}

impl Resolution {
    /// The extended base `A*` inside `B`.
    pub fn base(&self) -> VertexSet {
        self.glue.domain()
    }
}

fn resolve_loop(b: &PartialSts, c: &PartialSts, glue: &PartialMap) -> Result<Resolution> {
    check_glue(b, c, glue)?;
    let mut glue = glue.clone();
    let mut log = Vec::new();
    while let Some(conflict) = first_conflict(b, c, &glue) {
        if glue.get(conflict.b).is_some() || glue.preimage(conflict.c).is_some() {
            return Err(Error::InvalidGlue(format!(
                "pair {{{}, {}}} has incompatible thirds `{}` and `{}`",
                b.name(conflict.pair.0),
                b.name(conflict.pair.1),
                b.name(conflict.b),
                c.name(conflict.c)
            )));
        }
        glue.insert(conflict.b, conflict.c)?;
        check_glue(b, c, &glue)?;
        log.push((conflict.b, conflict.c));
    }
    Ok(Resolution { glue, log })
}

/// Merges every `b` outside the base with the `c` sharing its pair of base
/// vertices, until no such pair is left. Requires `A <= B`.
pub fn resolve_identifications(b: &PartialSts, c: &PartialSts, glue: &PartialMap) -> Result<Resolution> {
    let base = glue.domain();
    match is_strong(&base, b) {
        Ok(StrongResult::Strong(_)) => {}
        Ok(StrongResult::NotStrong(_)) | Err(Error::BaseConfined) => return Err(Error::BaseNotStrong),
        Err(e) => return Err(e),
    }
    resolve_loop(b, c, glue)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmalgamMode {
    /// `A <=^(n + |B \ A|) C` in, `f(B*) <=^n D` out.
    Graded(usize),
    /// `A <= C` in, `f(B*) <= D` out.
    Full,
}

/// Certificates backing the postconditions of [`amalgamate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamCertificates {
    /// HF-ordering of `D`.
    pub d_order: HfOrdering,
    /// HF-ordering of `D` over `g(C)`.
    pub c_strong: HfOrdering,
    /// HF-ordering of `D` over `f(B*)`, in full mode.
    pub b_strong: Option<HfOrdering>,
    /// Grade verified for `f(B*)` by enumeration.
    pub b_grade: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamResult {
    pub d: PartialSts,
    pub f: PartialMap,
    pub g: PartialMap,
    pub identifications: Vec<(VertexId, VertexId)>,
    pub certificates: AmalgamCertificates,
}

fn precondition(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(what.to_string()))
    }
}

fn postcondition(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::PostconditionFailed(what.to_string()))
    }
}

/// Amalgamates `B` and `C` over the base glued by `glue` (`B` side to `C` side).
pub fn amalgamate(b: &PartialSts, c: &PartialSts, glue: &PartialMap, mode: AmalgamMode) -> Result<AmalgamResult> {
    check_glue(b, c, glue)?;
    let a_b = glue.domain();
    let a_c = glue.image();
    precondition(ordering::is_unconfined(b), "B is unconfined")?;
    precondition(ordering::is_unconfined(c), "C is unconfined")?;
    precondition(ordering::is_unconfined(&b.induced(&a_b)?), "A is unconfined")?;
    precondition(is_strong(&a_b, b)?.is_strong(), "A <= B")?;
    match mode {
        AmalgamMode::Full => precondition(is_strong(&a_c, c)?.is_strong(), "A <= C")?,
        AmalgamMode::Graded(n) => {
            let m = n + (b.len() - a_b.len());
            precondition(is_n_strong(&a_c, c, m)?, &format!("A <=^{m} C"))?
        }
    }

    let res = resolve_loop(b, c, glue)?;
    let am = match free_amalgam(b, c, &res.glue)? {
        FreeAmalgamOutcome::Amalgam(am) => am,
        FreeAmalgamOutcome::Conflict(_) => {
            return Err(Error::PostconditionFailed("conflict left after resolution".into()))
        }
    };
    let FreeAmalgam { d, f, g } = am;
    postcondition(f.is_embedding(b, &d) && f.len() == b.len(), "f embeds B")?;
    postcondition(g.is_embedding(c, &d) && g.len() == c.len(), "g embeds C")?;
    postcondition(
        d.blocks().len() + b.induced(&res.base())?.blocks().len() == b.blocks().len() + c.blocks().len(),
        "D has no blocks beyond B* and C",
    )?;
    let d_order = match find_hf(&d) {
        HfSearch::Ordered(o) => o,
        HfSearch::Confined(_) => return Err(Error::PostconditionFailed("D is unconfined".into())),
    };
    let c_strong = match is_strong(&g.image(), &d)? {
        StrongResult::Strong(o) => o,
        StrongResult::NotStrong(_) => return Err(Error::PostconditionFailed("g(C) <= D".into())),
    };
    let (b_strong, b_grade) = match mode {
        AmalgamMode::Full => match is_strong(&f.image(), &d)? {
            StrongResult::Strong(o) => (Some(o), None),
            StrongResult::NotStrong(_) => return Err(Error::PostconditionFailed("f(B*) <= D".into())),
        },
        AmalgamMode::Graded(n) => {
            postcondition(is_n_strong(&f.image(), &d, n)?, &format!("f(B*) <=^{n} D"))?;
            (None, Some(n))
        }
    };
    Ok(AmalgamResult {
        d,
        f,
        g,
        identifications: res.log,
        certificates: AmalgamCertificates {
            d_order,
            c_strong,
            b_strong,
            b_grade,
        },
    })
}

/// One line of a structured report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub value: FactValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactValue {
    Bool(bool),
    Int(i64),
}

/// Everything computed while reproducing the failure of amalgamation.
#[derive(Clone, Debug)]
pub struct NoAmalgamReport {
    pub facts: Vec<Fact>,
    pub amalgam: PartialSts,
    pub merges: Vec<(String, String)>,
    pub core: Option<ConfinedCore>,
}

impl NoAmalgamReport {
    pub fn fact(&self, name: &str) -> Option<FactValue> {
        self.facts.iter().find(|f| f.name == name).map(|f| f.value)
    }
}

/// Builds the two structures with a well-embedded but non-strong base, forces
/// the identification and checks that the resulting amalgam is confined.
pub fn reproduce_no_amalgam() -> NoAmalgamReport {
    let b1 = named::noamalgam_b1();
    let b2 = named::noamalgam_b2();
    let a1 = b1.ids(named::NOAMALGAM_BASE_1).expect("base names");
    let a2 = b2.ids(named::NOAMALGAM_BASE_2).expect("base names");
    let pairs: Vec<(&str, &str)> = named::NOAMALGAM_BASE_1
        .iter()
        .copied()
        .zip(named::NOAMALGAM_BASE_2.iter().copied())
        .collect();
    let glue = PartialMap::from_names(&b1, &b2, &pairs).expect("glue names");

    let mut facts = Vec::new();
    let mut push = |name: &str, value: FactValue| {
        facts.push(Fact {
            name: name.to_string(),
            value,
        })
    };
    let we = |a: &VertexSet, b: &PartialSts| is_well_embedded(a, b).expect("within caps");
    let st = |a: &VertexSet, b: &PartialSts| is_strong(a, b).expect("base unconfined").is_strong();
    push("A1 wellembedded in B1", FactValue::Bool(we(&a1, &b1)));
    push("A2 wellembedded in B2", FactValue::Bool(we(&a2, &b2)));
    push("A1 strong in B1", FactValue::Bool(st(&a1, &b1)));
    push("A2 strong in B2", FactValue::Bool(st(&a2, &b2)));

    let res = resolve_loop(&b1, &b2, &glue).expect("glue is valid");
    let merges: Vec<(String, String)> = res
        .log
        .iter()
        .map(|&(x, y)| (b1.name(x).to_string(), b2.name(y).to_string()))
        .collect();
    push(
        "forced merge ab=a'b'",
        FactValue::Bool(merges == [("ab".to_string(), "a'b'".to_string())]),
    );
    let d = match free_amalgam(&b1, &b2, &res.glue).expect("resolved glue") {
        FreeAmalgamOutcome::Amalgam(am) => am.d,
        FreeAmalgamOutcome::Conflict(_) => unreachable!("resolution removes every conflict"),
    };
    let merged = d.degree_of("a'b'").expect("merged vertex") as i64;
    push("merged vertex degree", FactValue::Int(merged));
    let min_degree = d.vertices().map(|v| d.degree(v)).min().unwrap_or(0) as i64;
    push("minimal amalgam min degree", FactValue::Int(min_degree));
    let core = match find_hf(&d) {
        HfSearch::Ordered(_) => None,
        HfSearch::Confined(core) => Some(core),
    };
    push("forced amalgam unconfined", FactValue::Bool(core.is_none()));
    push(
        "confined core is whole amalgam",
        FactValue::Bool(core.as_ref().is_some_and(|c| c.core == d.vertex_set())),
    );
    NoAmalgamReport {
        facts,
        amalgam: d,
        merges,
        core,
    }
}

//! Free Steiner quasigroups.
//!
//! Elements are reduced terms over generators `g0, g1, ...`: either a
//! generator or an unordered join of two distinct terms, neither of which is
//! a child of the other. Terms are interned in a [`TermArena`] so equality is
//! an id comparison. A [`FreeTruncation`] is the partial STS of all terms up
//! to a given level, with one block `{u, v, u*v}` per join.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ordering::{self, HfOrdering};
use crate::pstss::{PartialSts, VertexId, VertexSet};

pub const DEFAULT_VERTEX_CAP: usize = 200_000;

/// Interned term handle; only meaningful together with its arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermNode {
    Generator(u32),
    Join(Term, Term),
}

/// Interning table for terms. Not shared across threads while mutating.
#[derive(Clone, Debug, Default)]
pub struct TermArena {
    nodes: Vec<TermNode>,
    levels: Vec<u32>,
    table: HashMap<TermNode, Term>,
}

impl TermArena {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, node: TermNode, level: u32) -> Term {
        if let Some(&t) = self.table.get(&node) {
            return t;
        }
        let t = Term(self.nodes.len() as u32);
        self.nodes.push(node);
        self.levels.push(level);
        self.table.insert(node, t);
        t
    }

    pub fn generator(&mut self, index: usize) -> Term {
        self.intern(TermNode::Generator(index as u32), 0)
    }

    pub fn node(&self, t: Term) -> TermNode {
        self.nodes[t.0 as usize]
    }

    pub fn level(&self, t: Term) -> usize {
        self.levels[t.0 as usize] as usize
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Canonical total order: generators by index, then joins by level and
    /// lexicographically on their (ordered) children.
    pub fn cmp(&self, a: Term, b: Term) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        match self.level(a).cmp(&self.level(b)) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self.node(a), self.node(b)) {
            (TermNode::Generator(i), TermNode::Generator(j)) => i.cmp(&j),
            (TermNode::Join(l1, r1), TermNode::Join(l2, r2)) => {
                self.cmp(l1, l2).then_with(|| self.cmp(r1, r2))
            }
            // Same level implies same kind.
            _ => unreachable!("generator and join at the same level"),
        }
    }

    /// The quasigroup product. Idempotent, commutative and `x*(x*y) = y`.
    pub fn product(&mut self, u: Term, v: Term) -> Term {
        if u == v {
            return u;
        }
        if let TermNode::Join(a, b) = self.node(u) {
            if v == a {
                return b;
            }
            if v == b {
                return a;
            }
        }
        if let TermNode::Join(a, b) = self.node(v) {
            if u == a {
                return b;
            }
            if u == b {
                return a;
            }
        }
        let (l, r) = if self.cmp(u, v) == Ordering::Less {
            (u, v)
        } else {
            (v, u)
        };
        let level = self.levels[l.0 as usize].max(self.levels[r.0 as usize]) + 1;
        self.intern(TermNode::Join(l, r), level)
    }

    /// Children of a join, or `None` for a generator.
    pub fn children(&self, t: Term) -> Option<(Term, Term)> {
        match self.node(t) {
            TermNode::Join(l, r) => Some((l, r)),
            TermNode::Generator(_) => None,
        }
    }

    pub fn name(&self, t: Term) -> String {
        let mut s = String::new();
        self.write_name(t, &mut s);
        s
    }

    fn write_name(&self, t: Term, out: &mut String) {
        match self.node(t) {
            TermNode::Generator(i) => {
                out.push('g');
                out.push_str(&i.to_string());
            }
            TermNode::Join(l, r) => {
                out.push('(');
                self.write_name(l, out);
                out.push('*');
                self.write_name(r, out);
                out.push(')');
            }
        }
    }

    /// Parses `g<i>` or `(<term>*<term>)`, reducing products as it goes.
    pub fn parse(&mut self, s: &str) -> Result<Term> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let t = self.parse_at(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::InvalidName(s.to_string()));
        }
        Ok(t)
    }

    fn parse_at(&mut self, s: &[u8], pos: &mut usize) -> Result<Term> {
        let bad = || Error::InvalidName(String::from_utf8_lossy(s).into_owned());
        match s.get(*pos) {
            Some(b'g') => {
                *pos += 1;
                let start = *pos;
                while s.get(*pos).is_some_and(u8::is_ascii_digit) {
                    *pos += 1;
                }
                let digits = std::str::from_utf8(&s[start..*pos]).map_err(|_| bad())?;
                let i: usize = digits.parse().map_err(|_| bad())?;
                Ok(self.generator(i))
            }
            Some(b'(') => {
                *pos += 1;
                let l = self.parse_at(s, pos)?;
                if s.get(*pos) != Some(&b'*') {
                    return Err(bad());
                }
                *pos += 1;
                let r = self.parse_at(s, pos)?;
                if s.get(*pos) != Some(&b')') {
                    return Err(bad());
                }
                *pos += 1;
                Ok(self.product(l, r))
            }
            _ => Err(bad()),
        }
    }
}

/// Evaluates a term under a generator assignment in a target algebra.
pub fn eval_hom<T: Clone>(
    arena: &TermArena,
    t: Term,
    assignment: &[T],
    mult: &mut impl FnMut(&T, &T) -> T,
) -> Result<T> {
    match arena.node(t) {
        TermNode::Generator(i) => assignment
            .get(i as usize)
            .cloned()
            .ok_or(Error::MissingAssignment(i as usize)),
        TermNode::Join(l, r) => {
            let a = eval_hom(arena, l, assignment, mult)?;
            let b = eval_hom(arena, r, assignment, mult)?;
            Ok(mult(&a, &b))
        }
    }
}

/// A finite Steiner quasigroup given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuasigroup {
    table: Vec<Vec<usize>>,
}

impl FiniteQuasigroup {
    /// The quasigroup of a total STS: `x*x = x`, `x*y` the third point.
    pub fn from_sts(p: &PartialSts) -> Option<FiniteQuasigroup> {
        if !p.is_total_sts() {
            return None;
        }
        let n = p.len();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            i
                        } else {
                            p.third(i.into(), j.into())
                                .expect("total STS")
                                .index()
                        }
                    })
                    .collect()
            })
            .collect();
        Some(FiniteQuasigroup { table })
    }

    pub fn from_table(table: Vec<Vec<usize>>) -> FiniteQuasigroup {
        FiniteQuasigroup { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Checks idempotence, commutativity and `x*(x*y) = y` exhaustively.
    pub fn validate(&self) -> bool {
        let n = self.table.len();
        if self.table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return false;
        }
        (0..n).all(|x| {
            self.table[x][x] == x
                && (0..n).all(|y| {
                    self.table[x][y] == self.table[y][x] && self.table[x][self.table[x][y]] == y
                })
        })
    }
}

/// All reduced terms of level at most `depth` over `generators` generators.
#[derive(Clone, Debug)]
pub struct FreeTruncation {
    arena: TermArena,
    generators: usize,
    depth: usize,
    carrier: PartialSts,
    terms: Vec<Term>,
    vertex_of: HashMap<Term, VertexId>,
}

pub fn truncate_free(generators: usize, depth: usize) -> Result<FreeTruncation> {
    truncate_free_capped(generators, depth, DEFAULT_VERTEX_CAP)
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn truncate_free_capped(generators: usize, depth: usize, cap: usize) -> Result<FreeTruncation> {
    if generators == 0 {
        return Err(Error::PreconditionFailed("at least one generator".into()));
    }
    let mut arena = TermArena::new();
    let mut terms: Vec<Term> = (0..generators).map(|i| arena.generator(i)).collect();
    if generators > cap {
        return Err(Error::ResourceLimit {
            what: format!("F({generators},{depth})"),
            needed: generators,
            cap,
        });
    }
    let mut below = 0; // |S_{<n}|
    let mut top_joins = 0; // joins at level n
    for n in 0..depth {
        // New joins: pairs in S_n meeting level n, minus parent/child pairs.
        let fresh = choose2(terms.len()) - choose2(below) - 2 * top_joins;
        let needed = terms.len() + fresh;
        if needed > cap {
            return Err(Error::ResourceLimit {
                what: format!("F({generators},{depth})"),
                needed,
                cap,
            });
        }
        let mut next = Vec::with_capacity(fresh);
        for i in 0..terms.len() {
            for j in (i + 1).max(below)..terms.len() {
                let t = arena.product(terms[i], terms[j]);
                if arena.level(t) == n + 1 {
                    next.push(t);
                }
            }
        }
        debug_assert_eq!(next.len(), fresh);
        next.sort_by(|&a, &b| arena.cmp(a, b));
        below = terms.len();
        top_joins = next.len();
        terms.extend(next);
    }
    let vertex_of: HashMap<Term, VertexId> = terms
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, VertexId::from(i)))
        .collect();
    let names: Vec<String> = terms.iter().map(|&t| arena.name(t)).collect();
    let blocks: Vec<[usize; 3]> = terms
        .iter()
        .enumerate()
        .filter_map(|(i, &t)| {
            arena
                .children(t)
                .map(|(l, r)| [vertex_of[&l].index(), vertex_of[&r].index(), i])
        })
        .collect();
    let carrier = PartialSts::from_indexed(names, blocks)?;
    Ok(FreeTruncation {
        arena,
        generators,
        depth,
        carrier,
        terms,
        vertex_of,
    })
}

impl FreeTruncation {
    pub fn carrier(&self) -> &PartialSts {
        &self.carrier
    }

    pub fn arena(&self) -> &TermArena {
        &self.arena
    }

    pub fn arena_mut(&mut self) -> &mut TermArena {
        &mut self.arena
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, v: VertexId) -> Term {
        self.terms[v.index()]
    }

    pub fn vertex(&self, t: Term) -> Option<VertexId> {
        self.vertex_of.get(&t).copied()
    }

    pub fn level_of(&self, v: VertexId) -> usize {
        self.arena.level(self.terms[v.index()])
    }

    pub fn generator_set(&self) -> VertexSet {
        (0..self.generators).map(VertexId::from).collect()
    }

    /// Vertex of a term given by name, if it lies in the truncation.
    pub fn vertex_by_name(&mut self, name: &str) -> Result<VertexId> {
        let t = self.arena.parse(name)?;
        self.vertex(t)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Product inside the truncation, if the result is present.
    pub fn product(&mut self, a: VertexId, b: VertexId) -> Option<VertexId> {
        let t = self.arena.product(self.terms[a.index()], self.terms[b.index()]);
        self.vertex(t)
    }

    /// Vertices listed level by level, canonical order within a level. This
    /// is the insertion order of the carrier.
    pub fn level_ordering(&self) -> HfOrdering {
        ordering::ordering_from_sequence(&self.carrier, self.carrier.vertices().collect())
            .expect("level order of a free truncation is hyperfree")
    }

    /// `<name> <level>` lines for the sidecar levels file.
    pub fn levels_text(&self) -> String {
        let mut out = String::new();
        for v in self.carrier.vertices() {
            out.push_str(self.carrier.name(v));
            out.push(' ');
            out.push_str(&self.level_of(v).to_string());
            out.push('\n');
        }
        out
    }

    /// Standard-free-construction scan on the carrier: every block joins two
    /// lower vertices to one exactly a level higher than the larger of them,
    /// and each non-generator tops exactly one block.
    pub fn check_standard_construction(&self) -> std::result::Result<(), String> {
        let p = &self.carrier;
        for b in p.blocks() {
            let mut lv = b.members().map(|v| self.level_of(v));
            lv.sort_unstable();
            if lv[2] != lv[1] + 1 {
                return Err(format!("block {:?} has levels {:?}", p.block_names(b), lv));
            }
        }
        for v in p.vertices() {
            let l = self.level_of(v);
            let down = p
                .blocks_at(v)
                .filter(|b| {
                    let (x, y) = b.others(v);
                    self.level_of(x) < l && self.level_of(y) < l
                })
                .count();
            let want = usize::from(l > 0);
            if down != want {
                return Err(format!(
                    "`{}` at level {l} has {down} producing pairs",
                    p.name(v)
                ));
            }
        }
        Ok(())
    }
}

/// Vertices that are not the product of two earlier vertices.
pub fn free_base_from_ordering(p: &PartialSts, order: &HfOrdering) -> Result<VertexSet> {
    if order.len() != p.len() {
        return Err(Error::InvalidOrdering(format!(
            "ordering has {} vertices, structure has {}",
            order.len(),
            p.len()
        )));
    }
    Ok(p
        .vertices()
        .filter(|&v| order.down_block(v).is_none())
        .collect())
}

/// The endomorphism of the 3-generated free algebra fixing `g1`, `g2` and
/// sending `g0` to `(g0*g1)*(g0*g2)`, tabulated on a truncation.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    pub source: FreeTruncation,
    /// `image[v]` is the image of source vertex `v`, as a term in the
    /// source arena.
    pub image: Vec<Term>,
}

pub fn endomorphism_f3(depth: usize) -> Result<Endomorphism> {
    let mut source = truncate_free(3, depth)?;
    let arena = &mut source.arena;
    let (g0, g1, g2) = (arena.generator(0), arena.generator(1), arena.generator(2));
    let p01 = arena.product(g0, g1);
    let p02 = arena.product(g0, g2);
    let b = arena.product(p01, p02);
    let assignment = [b, g1, g2];
    let mut image = Vec::with_capacity(source.terms.len());
    let snapshot = source.arena.clone();
    for i in 0..source.terms.len() {
        let t = source.terms[i];
        let img = eval_hom(&snapshot, t, &assignment, &mut |&x, &y| source.arena.product(x, y))?;
        image.push(img);
    }
    Ok(Endomorphism { source, image })
}

impl Endomorphism {
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.image.iter().all(|t| seen.insert(*t))
    }

    pub fn hits(&self, t: Term) -> bool {
        self.image.contains(&t)
    }

    pub fn max_image_level(&self) -> usize {
        self.image
            .iter()
            .map(|&t| self.source.arena.level(t))
            .max()
            .unwrap_or(0)
    }
}

//! Binary trees inside partial Steiner triple systems, and strong extensions
//! into free truncations.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::free::FreeTruncation;
use crate::map::PartialMap;
use crate::ordering::{self, find_hf_over, HfCheck, HfOrdering, HfSearch};
use crate::pstss::{PartialSts, VertexId, VertexSet};

/// Largest `|B \ A|` accepted by [`find_strong_extension`].
pub const EXTENSION_CAP: usize = 8;

/// Nodes `a_s` for binary strings `s` with `|s| < height`; the root is `""`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryTreeLabeling {
    pub height: usize,
    pub nodes: BTreeMap<String, VertexId>,
}

/// Binary strings of length `< height`, shortest first, then lexicographic.
pub fn tree_addresses(height: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 1..height {
        layer = layer
            .iter()
            .flat_map(|s| [format!("{s}0"), format!("{s}1")])
            .collect();
        out.extend(layer.iter().cloned());
    }
    if height == 0 {
        out.clear();
    }
    out
}

impl BinaryTreeLabeling {
    pub fn node(&self, s: &str) -> Option<VertexId> {
        self.nodes.get(s).copied()
    }

    pub fn root(&self) -> Option<VertexId> {
        self.node("")
    }

    pub fn labels(&self) -> VertexSet {
        self.nodes.values().copied().collect()
    }

    /// Labels with deeper nodes first; lexicographic within a depth.
    fn natural_sequence(&self) -> Vec<VertexId> {
        let mut addrs = tree_addresses(self.height);
        addrs.reverse();
        let mut out = Vec::with_capacity(addrs.len());
        for depth in (0..self.height).rev() {
            let mut row: Vec<&String> = addrs.iter().filter(|s| s.len() == depth).collect();
            row.sort();
            out.extend(row.into_iter().filter_map(|s| self.node(s)));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeCheck {
    Ok,
    Violation(String),
}

impl TreeCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, TreeCheck::Ok)
    }
}

/// Injective labels, `{a_s, a_s0, a_s1}` a block at each internal node, and
/// no other blocks among the labels.
pub fn verify_tree(p: &PartialSts, t: &BinaryTreeLabeling) -> Result<TreeCheck> {
    for &v in t.nodes.values() {
        if !p.contains(v) {
            return Err(Error::UnknownVertex(format!("#{}", v.0)));
        }
    }
    let addrs = tree_addresses(t.height);
    if t.height == 0 {
        return Ok(TreeCheck::Violation("height must be at least 1".into()));
    }
    for s in &addrs {
        if t.node(s).is_none() {
            return Ok(TreeCheck::Violation(format!("missing node `{}`", display_address(s))));
        }
    }
    if t.nodes.len() != addrs.len() {
        return Ok(TreeCheck::Violation("nodes outside the tree addresses".into()));
    }
    let labels = t.labels();
    if labels.len() != addrs.len() {
        return Ok(TreeCheck::Violation("labeling is not injective".into()));
    }
    let mut internal = 0;
    for s in addrs.iter().filter(|s| s.len() + 1 < t.height) {
        internal += 1;
        let (a, l, r) = (
            t.node(s).unwrap(),
            t.node(&format!("{s}0")).unwrap(),
            t.node(&format!("{s}1")).unwrap(),
        );
        if !p.has_block(l, r, a) {
            return Ok(TreeCheck::Violation(format!(
                "no block {{{}, {}, {}}} at node `{}`",
                p.name(a),
                p.name(l),
                p.name(r),
                display_address(s)
            )));
        }
    }
    let inside = p.blocks_within(&labels);
    if inside != internal {
        return Ok(TreeCheck::Violation(format!(
            "{inside} blocks among the labels, expected {internal}"
        )));
    }
    Ok(TreeCheck::Ok)
}

/// `EPS` for the root, the string itself otherwise.
pub fn display_address(s: &str) -> &str {
    if s.is_empty() {
        "EPS"
    } else {
        s
    }
}

/// A tree of height `n` whose labels all lie above `a` in the level order:
/// `2^(n-1)` leaves at the first level above `a` that is wide enough, joined
/// pairwise up to the root.
pub fn tree_above(f: &mut FreeTruncation, a: VertexId, n: usize) -> Result<BinaryTreeLabeling> {
    if n == 0 {
        return Err(Error::PreconditionFailed("height must be at least 1".into()));
    }
    if !f.carrier().contains(a) {
        return Err(Error::UnknownVertex(format!("#{}", a.0)));
    }
    let leaves_needed = 1usize << (n - 1);
    let mut by_level: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for v in f.carrier().vertices() {
        by_level.entry(f.level_of(v)).or_default().push(v);
    }
    let start = f.level_of(a) + 1;
    let leaf_level = (start..=f.depth())
        .find(|l| by_level.get(l).is_some_and(|row| row.len() >= leaves_needed))
        .filter(|&l| l + n - 1 <= f.depth());
    let Some(leaf_level) = leaf_level else {
        let width_level = (start..)
            .find(|&l| level_width(f.generators(), l) >= leaves_needed)
            .unwrap_or(start);
        return Err(Error::ResourceLimit {
            what: format!(
                "tree of height {n} above `{}` in F({},{})",
                f.carrier().name(a),
                f.generators(),
                f.depth()
            ),
            needed: width_level + n - 1,
            cap: f.depth(),
        });
    };
    let mut nodes = BTreeMap::new();
    let leaves = &by_level[&leaf_level][..leaves_needed];
    let leaf_addrs: Vec<String> = tree_addresses(n).into_iter().filter(|s| s.len() == n - 1).collect();
    for (s, &v) in leaf_addrs.iter().zip(leaves) {
        nodes.insert(s.clone(), v);
    }
    for depth in (0..n - 1).rev() {
        for s in tree_addresses(n).into_iter().filter(|s| s.len() == depth) {
            let l = nodes[&format!("{s}0")];
            let r = nodes[&format!("{s}1")];
            let v = f.product(l, r).ok_or_else(|| Error::ResourceLimit {
                what: format!("tree of height {n}"),
                needed: leaf_level + n - 1,
                cap: f.depth(),
            })?;
            nodes.insert(s, v);
        }
    }
    Ok(BinaryTreeLabeling { height: n, nodes })
}

/// Number of terms of level exactly `l` over `k` generators.
fn level_width(k: usize, l: usize) -> usize {
    let mut total = k; // |S_l|
    let mut below = 0; // |S_{l-1}|
    let mut top = 0; // |S_l \ S_{l-1}|
    let mut width = k;
    for _ in 0..l {
        let c2 = |n: usize| n.saturating_mul(n.saturating_sub(1)) / 2;
        let fresh = c2(total) - c2(below) - 2 * top;
        below = total;
        top = fresh;
        total = total.saturating_add(fresh);
        width = fresh;
        if total > 1 << 40 {
            break;
        }
    }
    width
}

/// The tree as a standalone structure, vertices named `a` followed by the
/// address.
pub fn abstract_tree(height: usize) -> Result<(PartialSts, BinaryTreeLabeling)> {
    if height == 0 {
        return Err(Error::PreconditionFailed("height must be at least 1".into()));
    }
    let addrs = tree_addresses(height);
    let index: HashMap<&str, usize> = addrs.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let names = addrs.iter().map(|s| format!("a{s}")).collect();
    let blocks = addrs
        .iter()
        .filter(|s| s.len() + 1 < height)
        .map(|s| [index[s.as_str()], index[format!("{s}0").as_str()], index[format!("{s}1").as_str()]])
        .collect();
    let p = PartialSts::from_indexed(names, blocks)?;
    let nodes = addrs
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), VertexId::from(i)))
        .collect();
    Ok((p, BinaryTreeLabeling { height, nodes }))
}

/// The induced tree structure with its natural ordering (deeper nodes
/// first, root last) and the reverse (root first).
#[derive(Clone, Debug)]
pub struct TreeOrderings {
    pub structure: PartialSts,
    pub labeling: BinaryTreeLabeling,
    pub natural: HfOrdering,
    pub reversed: HfOrdering,
}

pub fn tree_orderings(p: &PartialSts, t: &BinaryTreeLabeling) -> Result<TreeOrderings> {
    if let TreeCheck::Violation(why) = verify_tree(p, t)? {
        return Err(Error::InvalidTree(why));
    }
    let sub = p.induced(&t.labels())?;
    let relabel = |v: VertexId| sub.id(p.name(v)).expect("label is in the induced structure");
    let labeling = BinaryTreeLabeling {
        height: t.height,
        nodes: t.nodes.iter().map(|(s, &v)| (s.clone(), relabel(v))).collect(),
    };
    let natural_seq = labeling.natural_sequence();
    let mut reversed_seq = natural_seq.clone();
    reversed_seq.reverse();
    let check = |seq: &[VertexId], what: &str| match ordering::verify_hf(&sub, seq)? {
        HfCheck::Ok(o) => Ok(o),
        HfCheck::Violation(v) => Err(Error::InvalidTree(format!(
            "{what} ordering fails at `{}`",
            sub.name(v.vertex)
        ))),
    };
    let natural = check(&natural_seq, "natural")?;
    let reversed = check(&reversed_seq, "reversed")?;
    Ok(TreeOrderings {
        structure: sub,
        labeling,
        natural,
        reversed,
    })
}

/// Embedding of `B` into a truncation carrier extending a given one on `A`.
#[derive(Clone, Debug)]
pub struct StrongExtension {
    pub map: PartialMap,
    /// HF-ordering of the carrier over the image of `B`.
    pub certificate: HfOrdering,
}

struct Search<'a> {
    f: &'a mut FreeTruncation,
    b: &'a PartialSts,
    order: Vec<VertexId>,
    down: Vec<Option<crate::pstss::Block>>,
    forward: Vec<Option<VertexId>>,
    fixed: Vec<bool>,
    backward: HashMap<VertexId, VertexId>,
    final_checks: usize,
    nodes: usize,
    missing_product: bool,
    found: Option<HfOrdering>,
}

const FINAL_CHECK_BUDGET: usize = 64;
const NODE_BUDGET: usize = 20_000;

impl Search<'_> {
    /// Placing `v` at `w` keeps the map an isomorphism onto its image.
    fn consistent(&self, v: VertexId, w: VertexId) -> bool {
        if self.backward.contains_key(&w) {
            return false;
        }
        let carrier = self.f.carrier();
        for u in self.b.vertices() {
            let Some(fu) = self.forward[u.index()] else { continue };
            let tb = self
                .b
                .third(v, u)
                .and_then(|x| self.forward[x.index()]);
            let tc = carrier
                .third(w, fu)
                .filter(|x| self.backward.contains_key(x));
            if tb != tc {
                return false;
            }
        }
        true
    }

    fn place(&mut self, v: VertexId, w: VertexId) {
        self.forward[v.index()] = Some(w);
        self.backward.insert(w, v);
    }

    fn unplace(&mut self, v: VertexId) {
        if let Some(w) = self.forward[v.index()].take() {
            self.backward.remove(&w);
        }
    }

    fn out_of_budget(&self) -> bool {
        self.final_checks >= FINAL_CHECK_BUDGET || self.nodes >= NODE_BUDGET
    }

    fn run(&mut self, i: usize) -> bool {
        self.nodes += 1;
        if self.out_of_budget() {
            return false;
        }
        if i == self.order.len() {
            self.final_checks += 1;
            let image: VertexSet = self.backward.keys().copied().collect();
            if let Ok(HfSearch::Ordered(o)) = find_hf_over(self.f.carrier(), &image) {
                self.found = Some(o);
                return true;
            }
            return false;
        }
        let v = self.order[i];
        if let Some(block) = self.down[v.index()] {
            let (x, y) = block.others(v);
            let (fx, fy) = (self.forward[x.index()].unwrap(), self.forward[y.index()].unwrap());
            let Some(w) = self.f.product(fx, fy) else {
                // Only a product over fixed images calls for more levels.
                if self.fixed[x.index()] && self.fixed[y.index()] {
                    self.missing_product = true;
                }
                return false;
            };
            if !self.consistent(v, w) {
                return false;
            }
            self.place(v, w);
            if self.run(i + 1) {
                return true;
            }
            self.unplace(v);
            return false;
        }
        for w in (0..self.f.len()).map(VertexId::from) {
            if self.out_of_budget() {
                return false;
            }
            if !self.consistent(v, w) {
                continue;
            }
            self.place(v, w);
            if self.run(i + 1) {
                return true;
            }
            self.unplace(v);
        }
        false
    }
}

/// Extends `img` (defined on `A ⊆ B`) to an embedding of `B` whose image is
/// strong in the carrier. Vertices of `B \ A` are placed along an HF-ordering
/// over `A`: products are forced, other vertices take the first fresh
/// carrier vertex in level order that creates no premature block.
pub fn find_strong_extension(f: &mut FreeTruncation, img: &PartialMap, b: &PartialSts) -> Result<StrongExtension> {
    let a = img.domain();
    if b.len() - a.len() > EXTENSION_CAP {
        return Err(Error::TooLarge {
            what: "strong extension search",
            size: b.len() - a.len(),
            cap: EXTENSION_CAP,
        });
    }
    if !img.is_embedding(b, f.carrier()) {
        return Err(Error::PreconditionFailed("map on A is an embedding".into()));
    }
    let order = match find_hf_over(b, &a) {
        Ok(HfSearch::Ordered(o)) => o,
        Ok(HfSearch::Confined(_)) => return Err(Error::PreconditionFailed("A <= B".into())),
        Err(Error::BaseConfined) => return Err(Error::PreconditionFailed("A is unconfined".into())),
        Err(e) => return Err(e),
    };
    match find_hf_over(f.carrier(), &img.image()) {
        Ok(HfSearch::Ordered(_)) => {}
        _ => return Err(Error::PreconditionFailed("image of A is strong in the carrier".into())),
    }
    let mut forward = vec![None; b.len()];
    let mut backward = HashMap::new();
    for &(x, y) in img.pairs() {
        forward[x.index()] = Some(y);
        backward.insert(y, x);
    }
    let (k, depth) = (f.generators(), f.depth());
    let mut search = Search {
        down: b.vertices().map(|v| order.down_block(v)).collect(),
        order: order.sequence()[a.len()..].to_vec(),
        fixed: forward.iter().map(Option::is_some).collect(),
        f,
        b,
        forward,
        backward,
        final_checks: 0,
        nodes: 0,
        missing_product: false,
        found: None,
    };
    if search.run(0) {
        let map = PartialMap::from_pairs(
            b.vertices()
                .map(|v| (v, search.forward[v.index()].expect("every vertex placed"))),
        )?;
        let certificate = search.found.take().expect("set on success");
        return Ok(StrongExtension { map, certificate });
    }
    let (sk, sl) = if search.missing_product {
        (k, depth + 1)
    } else {
        (k + 1, depth)
    };
    Err(Error::NeedDeeper {
        generators: k,
        levels: depth,
        suggest_generators: sk,
        suggest_levels: sl,
    })
}

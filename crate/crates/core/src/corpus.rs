//! Seeded generators of test structures and amalgamation instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::map::PartialMap;
use crate::pstss::{PartialSts, VertexId, VertexSet};

fn vertex_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn all_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn pairs_of(t: &[usize; 3]) -> [(usize, usize); 3] {
    [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
}

/// Every partial Steiner triple system on the labeled vertex sets
/// `v0..v(n-1)` for `n <= max_n`.
pub fn all_small(max_n: usize) -> Vec<PartialSts> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        let triples = all_triples(n);
        let mut chosen: Vec<[usize; 3]> = Vec::new();
        let mut used = vec![vec![false; n]; n];
        fn rec(
            i: usize,
            triples: &[[usize; 3]],
            chosen: &mut Vec<[usize; 3]>,
            used: &mut Vec<Vec<bool>>,
            n: usize,
            out: &mut Vec<PartialSts>,
        ) {
            if i == triples.len() {
                out.push(
                    PartialSts::from_indexed(vertex_names("v", n), chosen.clone())
                        .expect("pair-disjoint triples"),
                );
                return;
            }
            rec(i + 1, triples, chosen, used, n, out);
            let t = triples[i];
            if pairs_of(&t).iter().all(|&(a, b)| !used[a][b]) {
                for (a, b) in pairs_of(&t) {
                    used[a][b] = true;
                }
                chosen.push(t);
                rec(i + 1, triples, chosen, used, n, out);
                chosen.pop();
                for (a, b) in pairs_of(&t) {
                    used[a][b] = false;
                }
            }
        }
        rec(0, &triples, &mut chosen, &mut used, n, &mut out);
    }
    out
}

/// Random structure on `n` vertices: a random target block count, filled by
/// random triples that respect pair uniqueness.
pub fn random_pstss<R: Rng>(rng: &mut R, n: usize) -> PartialSts {
    let mut triples = all_triples(n);
    triples.shuffle(rng);
    let max = n * n.saturating_sub(1) / 6;
    let target = rng.gen_range(0..=max.max(1));
    let mut used = vec![vec![false; n]; n];
    let mut chosen = Vec::new();
    for t in triples {
        if chosen.len() >= target {
            break;
        }
        if pairs_of(&t).iter().all(|&(a, b)| !used[a][b]) {
            for (a, b) in pairs_of(&t) {
                used[a][b] = true;
            }
            chosen.push(t);
        }
    }
    PartialSts::from_indexed(vertex_names("v", n), chosen).expect("pair-disjoint triples")
}

/// Random subset of the vertices, each kept with probability `1/2`.
pub fn random_subset<R: Rng>(rng: &mut R, p: &PartialSts) -> VertexSet {
    p.vertices().filter(|_| rng.gen_bool(0.5)).collect()
}

/// Incremental builder where each new vertex forms at most one block with
/// the vertices already present.
struct Grower {
    names: Vec<String>,
    blocks: Vec<[usize; 3]>,
    used: std::collections::HashSet<(usize, usize)>,
}

impl Grower {
    fn from(p: &PartialSts) -> Grower {
        let mut g = Grower {
            names: p.names().to_vec(),
            blocks: Vec::new(),
            used: Default::default(),
        };
        for b in p.blocks() {
            g.add_block(b.members().map(VertexId::index));
        }
        g
    }

    fn pair_free(&self, a: usize, b: usize) -> bool {
        !self.used.contains(&(a.min(b), a.max(b)))
    }

    fn add_block(&mut self, t: [usize; 3]) {
        for (a, b) in pairs_of(&t) {
            self.used.insert((a.min(b), a.max(b)));
        }
        self.blocks.push(t);
    }

    fn add_vertex(&mut self, name: String) -> usize {
        self.names.push(name);
        self.names.len() - 1
    }

    /// New vertex, in a block with a random free pair of earlier vertices
    /// with probability `p_block`.
    fn grow<R: Rng>(&mut self, rng: &mut R, name: String, p_block: f64) -> usize {
        let n = self.names.len();
        let v = self.add_vertex(name);
        if n >= 2 && rng.gen_bool(p_block) {
            for _ in 0..8 {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b && self.pair_free(a, b) {
                    self.add_block([a, b, v]);
                    break;
                }
            }
        }
        v
    }

    fn build(self) -> PartialSts {
        PartialSts::from_indexed(self.names, self.blocks).expect("grower keeps pairs disjoint")
    }
}

/// Random unconfined structure on `n` vertices: the insertion order is an
/// HF-ordering by construction.
pub fn random_unconfined<R: Rng>(rng: &mut R, n: usize) -> PartialSts {
    let mut g = Grower::from(&PartialSts::empty());
    let p_block = rng.gen_range(0.3..0.95);
    for i in 0..n {
        g.grow(rng, format!("v{i}"), p_block);
    }
    g.build()
}

/// `A`, `B ⊇ A`, `C ⊇ A` sharing the vertex names of `A`.
#[derive(Clone, Debug)]
pub struct AmalgamInstance {
    pub base: PartialSts,
    pub b: PartialSts,
    pub c: PartialSts,
    pub glue: PartialMap,
    pub grade: Option<usize>,
}

fn identity_glue(base: &PartialSts, b: &PartialSts, c: &PartialSts) -> PartialMap {
    PartialMap::from_pairs(base.names().iter().map(|n| (b.id(n).unwrap(), c.id(n).unwrap())))
        .expect("names are distinct")
}

/// Strong extension of `base` by `extra` vertices named `prefix0..`; `shared`
/// lists base pairs whose products are added first.
fn extend<R: Rng>(rng: &mut R, base: &PartialSts, extra: usize, prefix: &str, shared: &[(usize, usize)]) -> PartialSts {
    let mut g = Grower::from(base);
    let mut k = 0;
    for &(a, b) in shared.iter().take(extra) {
        let v = g.add_vertex(format!("{prefix}{k}"));
        g.add_block([a, b, v]);
        k += 1;
    }
    let p_block = rng.gen_range(0.3..0.9);
    while k < extra {
        g.grow(rng, format!("{prefix}{k}"), p_block);
        k += 1;
    }
    g.build()
}

/// Free base pairs of `base`, shuffled, at most `count`.
fn free_pairs<R: Rng>(rng: &mut R, base: &PartialSts, count: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for a in 0..base.len() {
        for b in a + 1..base.len() {
            if base.third(VertexId::from(a), VertexId::from(b)).is_none() {
                pairs.push((a, b));
            }
        }
    }
    pairs.shuffle(rng);
    pairs.truncate(count);
    pairs
}

/// Triple with `A <= B` and `A <= C`, sometimes sharing products over `A`.
pub fn full_instance<R: Rng>(rng: &mut R) -> AmalgamInstance {
    let a_len = rng.gen_range(1..=4);
    let base = random_unconfined(rng, a_len);
    let nb = rng.gen_range(1..=10 - base.len());
    let nc = rng.gen_range(1..=10 - base.len());
    let k = rng.gen_range(0..=2);
    let shared = free_pairs(rng, &base, k);
    let b = extend(rng, &base, nb, "b", &shared);
    let c = extend(rng, &base, nc, "c", &shared);
    let glue = identity_glue(&base, &b, &c);
    AmalgamInstance {
        base,
        b,
        c,
        glue,
        grade: None,
    }
}

/// Triple with `A <= B` and `A <=^(n + |B \ A|) C`. About half of them have a
/// `C` that is not strong over `A`: a cycle of `s = m + 1` new vertices,
/// each pair of consecutive ones in a block with its own base vertex.
pub fn graded_instance<R: Rng>(rng: &mut R) -> AmalgamInstance {
    let n = rng.gen_range(0..=3);
    let a_len = rng.gen_range(1..=5);
    let b_extra = rng.gen_range(1..=(10 - a_len).min(3));
    let m = n + b_extra;
    let base = random_unconfined(rng, a_len);
    let k = rng.gen_range(0..=1);
    let shared = free_pairs(rng, &base, k);
    let b = extend(rng, &base, b_extra, "b", &shared);
    let s = m + 1;
    let c = if s >= 3 && a_len >= s && a_len + s <= 10 && rng.gen_bool(0.5) {
        let mut g = Grower::from(&base);
        let xs: Vec<usize> = (0..s).map(|i| g.add_vertex(format!("x{i}"))).collect();
        for i in 0..s {
            g.add_block([xs[i], xs[(i + 1) % s], i]);
        }
        // Further vertices hang off the base and each other only.
        let mut pool: Vec<usize> = (0..a_len).collect();
        let mut k = 0;
        while g.names.len() < 10 && rng.gen_bool(0.4) {
            let v = g.add_vertex(format!("c{k}"));
            let x = pool[rng.gen_range(0..pool.len())];
            let y = pool[rng.gen_range(0..pool.len())];
            if x != y && g.pair_free(x, y) {
                g.add_block([x, y, v]);
            }
            pool.push(v);
            k += 1;
        }
        Some(g.build()).filter(crate::ordering::is_unconfined)
    } else {
        None
    };
    let c = c.unwrap_or_else(|| {
        let nc = rng.gen_range(1..=10 - a_len);
        extend(rng, &base, nc, "c", &shared)
    });
    let glue = identity_glue(&base, &b, &c);
    AmalgamInstance {
        base,
        b,
        c,
        glue,
        grade: Some(n),
    }
}

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freests::amalgam::{free_amalgam, resolve_identifications, FreeAmalgamOutcome};
use freests::corpus::{full_instance, random_unconfined};
use freests::error::Error;
use freests::free::truncate_free;
use freests::map::PartialMap;
use freests::oracle::{oracle_hf_exists, oracle_hf_over};
use freests::ordering::{closure, find_hf, find_hf_over, is_unconfined, verify_hf, HfSearch};
use freests::predim::{delta, delta_of, find_orientation, in_class_or, in_class_or_by_definition, OrientationSearch};
use freests::strong::{is_n_strong, is_strong};
use freests::trees::find_strong_extension;
use freests::{PartialSts, VertexId, VertexSet};

/// Structure on `n` vertices from candidate triples, keeping each one that
/// reuses no pair.
fn pstss(max_n: usize) -> impl Strategy<Value = PartialSts> {
    (0..=max_n).prop_flat_map(|n| {
        let triple = (0..n.max(1), 0..n.max(1), 0..n.max(1));
        prop::collection::vec(triple, 0..12).prop_map(move |ts| {
            let mut used = std::collections::HashSet::new();
            let mut blocks = Vec::new();
            for (a, b, c) in ts {
                let mut t = [a, b, c];
                t.sort();
                if n == 0 || t[0] == t[1] || t[1] == t[2] {
                    continue;
                }
                let pairs = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
                if pairs.iter().any(|p| used.contains(p)) {
                    continue;
                }
                used.extend(pairs);
                blocks.push(t);
            }
            PartialSts::from_indexed((0..n).map(|i| format!("v{i}")).collect(), blocks).unwrap()
        })
    })
}

fn unconfined(max_n: usize) -> impl Strategy<Value = PartialSts> {
    (any::<u64>(), 0..=max_n).prop_map(|(seed, n)| random_unconfined(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

fn subset(p: &PartialSts, mask: u32) -> VertexSet {
    p.vertices().filter(|v| mask & (1 << v.index()) != 0).collect()
}

fn strong(base: &VertexSet, p: &PartialSts) -> bool {
    matches!(is_strong(base, p), Ok(r) if r.is_strong())
}

/// `inner` as a vertex set of the structure induced on `outer`.
fn inside(p: &PartialSts, outer: &VertexSet, inner: &VertexSet) -> (PartialSts, VertexSet) {
    let q = p.induced(outer).unwrap();
    let ids = q.ids(p.set_names(inner)).unwrap();
    (q, ids)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn induced_laws(p in pstss(9), s in any::<u32>(), t in any::<u32>()) {
        prop_assert_eq!(p.induced(&p.vertex_set()).unwrap(), p.clone());
        let s = subset(&p, s);
        let t: VertexSet = subset(&p, t).intersection(&s).copied().collect();
        let (q, t_in_q) = inside(&p, &s, &t);
        prop_assert_eq!(q.induced(&t_in_q).unwrap(), p.induced(&t).unwrap());
        prop_assert_eq!(q.blocks().len(), p.blocks_within(&s));
    }

    #[test]
    fn span_is_a_closure_operator(p in pstss(9), a in any::<u32>(), b in any::<u32>()) {
        let a = subset(&p, a);
        let b: VertexSet = subset(&p, b).union(&a).copied().collect();
        let sa = p.span(&a).unwrap();
        prop_assert!(a.is_subset(&sa));
        prop_assert_eq!(p.span(&sa).unwrap(), sa.clone());
        prop_assert!(sa.is_subset(&p.span(&b).unwrap()));
    }

    #[test]
    fn greedy_matches_oracle(p in pstss(8), a in any::<u32>()) {
        let found = find_hf(&p);
        prop_assert_eq!(found.is_ordered(), oracle_hf_exists(&p).unwrap());
        if let HfSearch::Ordered(o) = &found {
            prop_assert!(verify_hf(&p, o.sequence()).unwrap().is_ok());
        }
        let a = subset(&p, a);
        let over = match find_hf_over(&p, &a) {
            Ok(HfSearch::Ordered(o)) => {
                prop_assert!(o.has_initial_segment(&a));
                true
            }
            Ok(HfSearch::Confined(c)) => {
                prop_assert!(c.verify(&p));
                false
            }
            Err(Error::BaseConfined) => false,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(over, oracle_hf_over(&p, &a).unwrap());
    }

    #[test]
    fn unconfined_is_hereditary(p in unconfined(12), s in any::<u32>()) {
        prop_assert!(is_unconfined(&p.induced(&subset(&p, s)).unwrap()));
    }

    #[test]
    fn order_closure(p in unconfined(12), x in any::<u32>(), y in any::<u32>()) {
        let o = find_hf(&p).ordering().unwrap();
        let (x, y) = (subset(&p, x), subset(&p, y));
        let cx = closure(&p, &o, &x).unwrap();
        let cy = closure(&p, &o, &y).unwrap();
        prop_assert!(x.is_subset(&cx));
        prop_assert_eq!(closure(&p, &o, &cx).unwrap(), cx.clone());
        let union: VertexSet = x.union(&y).copied().collect();
        let cu: VertexSet = cx.union(&cy).copied().collect();
        prop_assert_eq!(closure(&p, &o, &union).unwrap(), cu);
        // A closed set has at most one block over it at each outside vertex.
        for v in p.vertices().filter(|v| !cx.contains(v)) {
            let over = p.blocks_at(v).filter(|b| {
                let (s, t) = b.others(v);
                cx.contains(&s) && cx.contains(&t)
            });
            prop_assert!(over.count() <= 1);
        }
    }

    #[test]
    fn closed_sets_have_closed_spans_in_truncations(mask in any::<u32>()) {
        let f = truncate_free(3, 2).unwrap();
        let o = f.level_ordering();
        let a = closure(f.carrier(), &o, &subset(f.carrier(), mask)).unwrap();
        let span = f.carrier().span(&a).unwrap();
        prop_assert_eq!(closure(f.carrier(), &o, &span).unwrap(), span);
    }

    #[test]
    fn submodularity(p in pstss(9), x in any::<u32>(), y in any::<u32>()) {
        let (x, y) = (subset(&p, x), subset(&p, y));
        let u: VertexSet = x.union(&y).copied().collect();
        let m: VertexSet = x.intersection(&y).copied().collect();
        prop_assert!(delta_of(&p, &u) + delta_of(&p, &m) <= delta_of(&p, &x) + delta_of(&p, &y));
    }

    #[test]
    fn unconfined_structures_are_orientable(p in unconfined(14)) {
        prop_assert!(delta(&p) >= 0);
        prop_assert!(in_class_or(&p).unwrap());
    }

    #[test]
    fn orientation_class_forms_agree(p in pstss(8)) {
        prop_assert_eq!(in_class_or(&p).unwrap(), in_class_or_by_definition(&p).unwrap());
        match find_orientation(&p) {
            OrientationSearch::Oriented(o) => prop_assert_eq!(o.pairs().len(), p.blocks().len()),
            OrientationSearch::HallViolation(h) => {
                let covered: VertexSet = h.iter().flat_map(|b| b.members()).collect();
                prop_assert!(h.len() > covered.len());
            }
        }
    }

    #[test]
    fn strong_is_every_grade(p in unconfined(9), a in any::<u32>()) {
        let a = subset(&p, a);
        let full = strong(&a, &p);
        prop_assert_eq!(full, oracle_hf_over(&p, &a).unwrap());
        let outside = p.len() - a.len();
        let graded = (0..=outside).all(|n| is_n_strong(&a, &p, n).unwrap());
        prop_assert_eq!(full, graded);
    }

    #[test]
    fn restriction(p in unconfined(10), a in any::<u32>(), b in any::<u32>()) {
        let a = subset(&p, a);
        let b: VertexSet = subset(&p, b).union(&a).copied().collect();
        if strong(&a, &p) {
            let (q, a_in_q) = inside(&p, &b, &a);
            prop_assert!(strong(&a_in_q, &q));
        }
    }

    #[test]
    fn intersection(p in unconfined(10), a1 in any::<u32>(), a2 in any::<u32>()) {
        let (a1, a2) = (subset(&p, a1), subset(&p, a2));
        if strong(&a1, &p) && strong(&a2, &p) {
            let m: VertexSet = a1.intersection(&a2).copied().collect();
            prop_assert!(strong(&m, &p));
        }
    }

    #[test]
    fn graded_transitivity(p in unconfined(9), a in any::<u32>(), b in any::<u32>(), n in 0usize..=3) {
        let a = subset(&p, a);
        let b: VertexSet = subset(&p, b).union(&a).copied().collect();
        let (q, a_in_b) = inside(&p, &b, &a);
        if is_unconfined(&q) && is_n_strong(&a_in_b, &q, n).unwrap() && is_n_strong(&b, &p, n).unwrap() {
            prop_assert!(is_n_strong(&a, &p, n).unwrap());
        }
    }

    #[test]
    fn block_extension(p in unconfined(9), a in any::<u32>(), n in 1usize..=3) {
        let a = subset(&p, a);
        let is_full = strong(&a, &p);
        let is_graded = is_n_strong(&a, &p, n).unwrap();
        for blk in p.blocks() {
            let outside: Vec<VertexId> = blk.members().into_iter().filter(|v| !a.contains(v)).collect();
            if let [b] = outside[..] {
                let mut ab = a.clone();
                ab.insert(b);
                if is_full {
                    prop_assert!(strong(&ab, &p));
                }
                if is_graded {
                    prop_assert!(is_n_strong(&ab, &p, n - 1).unwrap());
                }
            }
        }
    }

    #[test]
    fn free_amalgam_counts(seed in any::<u64>()) {
        let inst = full_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let res = resolve_identifications(&inst.b, &inst.c, &inst.glue).unwrap();
        prop_assert!(res.log.len() <= inst.b.len() - inst.glue.len());
        let mut glue = inst.glue.clone();
        for &(x, y) in &res.log {
            let shape = inst.b.blocks_at(x).any(|blk| {
                let (s, t) = blk.others(x);
                match (glue.get(s), glue.get(t)) {
                    (Some(gs), Some(gt)) => inst.c.has_block(gs, gt, y),
                    _ => false,
                }
            });
            prop_assert!(shape);
            glue.insert(x, y).unwrap();
        }
        let a_star = inst.b.induced(&res.base()).unwrap();
        let FreeAmalgamOutcome::Amalgam(am) = free_amalgam(&inst.b, &inst.c, &res.glue).unwrap() else {
            return Err(TestCaseError::fail("conflict after resolution"));
        };
        prop_assert_eq!(am.d.blocks().len() + a_star.blocks().len(), inst.b.blocks().len() + inst.c.blocks().len());
        prop_assert_eq!(delta(&am.d) + delta(&a_star), delta(&inst.b) + delta(&inst.c));
    }

    #[test]
    fn strong_extensions_are_embeddings(seed in any::<u64>(), n in 1usize..=5) {
        let b = random_unconfined(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let mut f = truncate_free(4, 2).unwrap();
        match find_strong_extension(&mut f, &PartialMap::new(), &b) {
            Ok(ext) => {
                prop_assert!(ext.map.is_embedding(&b, f.carrier()));
                prop_assert!(ext.certificate.has_initial_segment(&ext.map.image()));
                prop_assert!(verify_hf(f.carrier(), ext.certificate.sequence()).unwrap().is_ok());
            }
            Err(Error::NeedDeeper { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}

#[test]
fn truncations_grow_with_depth() {
    // Two generators close off in a single block.
    for l in 1..4 {
        assert_eq!(truncate_free(2, l).unwrap().len(), 3);
    }
    for k in 3..=4 {
        for l in 0..3 {
            assert!(truncate_free(k, l + 1).unwrap().len() > truncate_free(k, l).unwrap().len());
        }
    }
}

//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freests::amalgam::{amalgamate, reproduce_no_amalgam, AmalgamMode, FactValue};
use freests::corpus::{all_small, full_instance, graded_instance, random_pstss, random_subset, random_unconfined};
use freests::error::Error;
use freests::format;
use freests::free::{eval_hom, endomorphism_f3, free_base_from_ordering, truncate_free, FiniteQuasigroup};
use freests::generic::{chain_is_strong, generic_prefix};
use freests::named;
use freests::oracle::{oracle_hf_exists, oracle_hf_over, oracle_unconfined_by_subsets};
use freests::ordering::{find_hf, find_hf_over, is_unconfined, verify_hf, HfCheck, HfSearch};
use freests::predim::{delta, delta_of, find_orientation, in_class_or, OrientationSearch};
use freests::strong::{is_minimal_pair, is_n_strong, minimal_pair_chain};
use freests::trees::{abstract_tree, tree_above, tree_orderings, verify_tree};
use freests::{PartialSts, VertexId, VertexSet};

const SEED: u64 = 20240526;
const RANDOM_INSTANCES: usize = 10_000;
const SUBMODULAR_SAMPLES: usize = 10_000;
const AMALGAM_INSTANCES: usize = 1_000;

const FANO_LIMIT: Duration = Duration::from_millis(1);
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const DELTA_LIMIT: Duration = Duration::from_secs(30);
const NO_AMALGAM_LIMIT: Duration = Duration::from_secs(1);
const GRADED_LIMIT: Duration = Duration::from_secs(120);
const MINPAIR_LIMIT: Duration = Duration::from_secs(5);
const GENERIC_LIMIT: Duration = Duration::from_secs(30);

type Check = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn corpus() -> Vec<PartialSts> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut all = all_small(5);
    for i in 0..RANDOM_INSTANCES {
        all.push(random_pstss(&mut rng, 6 + i % 3));
    }
    all
}

fn fano_facts() -> Check {
    let start = Instant::now();
    let f = named::fano();
    let ok = f.len() == 7
        && f.blocks().len() == 7
        && f.vertices().all(|v| f.degree(v) == 3)
        && delta(&f) == 0
        && f.is_total_sts();
    let t = start.elapsed();
    ensure(ok, || "fact mismatch".into())?;
    ensure(t < FANO_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("7 points, 7 blocks, degree 3, delta 0, total ({t:?})"))
}

fn greedy_oracle(corpus: &[PartialSts]) -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut over_checked = 0;
    for p in corpus {
        let greedy = find_hf(p);
        match &greedy {
            HfSearch::Ordered(o) => ensure(verify_hf(p, o.sequence()).unwrap().is_ok(), || "bad certificate".into())?,
            HfSearch::Confined(c) => ensure(c.verify(p), || "bad core".into())?,
        }
        ensure(greedy.is_ordered() == oracle_hf_exists(p).unwrap(), || format!("disagree on {p:?}"))?;
        let base = random_subset(&mut rng, p);
        let anchored = match find_hf_over(p, &base) {
            Ok(HfSearch::Ordered(o)) => {
                ensure(o.has_initial_segment(&base), || "base not first".into())?;
                true
            }
            Ok(HfSearch::Confined(c)) => {
                ensure(c.verify(p), || "bad anchored core".into())?;
                false
            }
            Err(Error::BaseConfined) => false,
            Err(e) => return Err(e.to_string()),
        };
        ensure(anchored == oracle_hf_over(p, &base).unwrap(), || {
            format!("anchored disagree on {p:?} over {base:?}")
        })?;
        over_checked += 1;
    }
    let t = within(start, ORACLE_LIMIT)?;
    Ok(format!("{} structures, {over_checked} anchored, 100% agreement ({t:?})", corpus.len()))
}

fn unconfined_equivalence(corpus: &[PartialSts]) -> Check {
    let mut unconfined = 0;
    for p in corpus {
        let by_def = oracle_unconfined_by_subsets(p).unwrap();
        ensure(is_unconfined(p) == by_def, || format!("disagree on {p:?}"))?;
        unconfined += usize::from(by_def);
    }
    Ok(format!("{} structures ({unconfined} unconfined), 100% agreement", corpus.len()))
}

fn delta_laws(corpus: &[PartialSts]) -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    for i in 0..SUBMODULAR_SAMPLES {
        let p = &corpus[all_small(5).len() + i % RANDOM_INSTANCES];
        let x = random_subset(&mut rng, p);
        let y = random_subset(&mut rng, p);
        let u: VertexSet = x.union(&y).copied().collect();
        let m: VertexSet = x.intersection(&y).copied().collect();
        ensure(delta_of(p, &u) + delta_of(p, &m) <= delta_of(p, &x) + delta_of(p, &y), || {
            format!("submodularity fails on {p:?}")
        })?;
    }
    let mut unconfined = 0;
    for p in corpus.iter().filter(|p| is_unconfined(p)) {
        ensure(delta(p) >= 0, || format!("negative delta on {p:?}"))?;
        unconfined += 1;
    }
    let f = truncate_free(3, 2).unwrap();
    ensure(delta(f.carrier()) == 3, || "delta(F(3,2)) != 3".into())?;
    let t = within(start, DELTA_LIMIT)?;
    Ok(format!(
        "{SUBMODULAR_SAMPLES} subset pairs, {unconfined} unconfined with delta >= 0, delta(F(3,2)) = 3 ({t:?})"
    ))
}

fn class_separation(corpus: &[PartialSts]) -> Check {
    let g = named::grid9();
    ensure(!is_unconfined(&g), || "grid9 unconfined".into())?;
    ensure(in_class_or(&g).unwrap(), || "grid9 not in the orientation class".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut checked = 0;
    for p in corpus.iter().filter(|p| is_unconfined(p)) {
        ensure(in_class_or(p).unwrap(), || format!("{p:?}"))?;
        checked += 1;
    }
    for n in [12, 16, 20] {
        for _ in 0..50 {
            let p = random_unconfined(&mut rng, n);
            ensure(in_class_or(&p).unwrap(), || format!("{p:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("grid9 confined and orientable; {checked} unconfined instances orientable"))
}

fn no_amalgam() -> Check {
    let start = Instant::now();
    let r = reproduce_no_amalgam();
    let expect = [
        ("A1 wellembedded in B1", FactValue::Bool(true)),
        ("A2 wellembedded in B2", FactValue::Bool(true)),
        ("A1 strong in B1", FactValue::Bool(false)),
        ("A2 strong in B2", FactValue::Bool(false)),
        ("forced merge ab=a'b'", FactValue::Bool(true)),
        ("minimal amalgam min degree", FactValue::Int(2)),
        ("forced amalgam unconfined", FactValue::Bool(false)),
        ("confined core is whole amalgam", FactValue::Bool(true)),
    ];
    for (name, value) in expect {
        ensure(r.fact(name) == Some(value), || format!("{name}: {:?}", r.fact(name)))?;
    }
    ensure(r.merges == [("ab".to_string(), "a'b'".to_string())], || format!("{:?}", r.merges))?;
    let t = within(start, NO_AMALGAM_LIMIT)?;
    Ok(format!("all facts hold; amalgam has {} vertices ({t:?})", r.amalgam.len()))
}

fn graded_amalgamation() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let (mut merges, mut non_strong_c) = (0, 0);
    for _ in 0..AMALGAM_INSTANCES {
        let inst = graded_instance(&mut rng);
        let n = inst.grade.unwrap();
        if !find_hf_over(&inst.c, &inst.glue.image()).unwrap().is_ordered() {
            non_strong_c += 1;
        }
        let r = amalgamate(&inst.b, &inst.c, &inst.glue, AmalgamMode::Graded(n)).map_err(|e| format!("{e}: {inst:?}"))?;
        merges += r.identifications.len();
        ensure(verify_hf(&r.d, r.certificates.d_order.sequence()).unwrap().is_ok(), || "D order".into())?;
        let c_img = r.g.image();
        ensure(
            verify_hf(&r.d, r.certificates.c_strong.sequence()).unwrap().is_ok()
                && r.certificates.c_strong.has_initial_segment(&c_img),
            || "g(C) certificate".into(),
        )?;
        ensure(is_n_strong(&r.f.image(), &r.d, n).unwrap(), || "f(B*) grade".into())?;
    }
    let t = within(start, GRADED_LIMIT)?;
    Ok(format!(
        "{AMALGAM_INSTANCES} triples ({non_strong_c} with A not strong in C, {merges} merges), all certified ({t:?})"
    ))
}

fn full_amalgamation() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut merges = 0;
    for _ in 0..AMALGAM_INSTANCES {
        let inst = full_instance(&mut rng);
        let r = amalgamate(&inst.b, &inst.c, &inst.glue, AmalgamMode::Full).map_err(|e| format!("{e}: {inst:?}"))?;
        merges += r.identifications.len();
        let b_cert = r.certificates.b_strong.as_ref().ok_or("missing f(B) certificate")?;
        for (cert, img) in [(b_cert, r.f.image()), (&r.certificates.c_strong, r.g.image())] {
            ensure(
                verify_hf(&r.d, cert.sequence()).unwrap().is_ok() && cert.has_initial_segment(&img),
                || "image certificate".into(),
            )?;
        }
    }
    let t = start.elapsed();
    Ok(format!("{AMALGAM_INSTANCES} triples ({merges} merges), both images strong ({t:?})"))
}

fn minimal_pairs() -> Check {
    let start = Instant::now();
    let p = named::minpair();
    let a = p.ids(named::MINPAIR_BASE).unwrap();
    ensure(is_n_strong(&a, &p, 2).unwrap(), || "not 2-strong".into())?;
    ensure(!is_n_strong(&a, &p, 3).unwrap(), || "3-strong".into())?;
    ensure(is_minimal_pair(&a, &p).unwrap(), || "not minimal".into())?;
    let chain = minimal_pair_chain(3).map_err(|e| e.to_string())?;
    let links = chain.links().unwrap();
    ensure(links.len() == 3, || "chain length".into())?;
    for (base, sub) in &links {
        ensure(is_minimal_pair(base, sub).unwrap(), || "link not minimal".into())?;
    }
    let t = within(start, MINPAIR_LIMIT)?;
    Ok(format!("minpair 2-strong, not 3-strong, minimal; 3 chain links verified ({t:?})"))
}

fn free_construction() -> Check {
    for (l, (nv, nb)) in [(3, 0), (6, 3), (12, 9)].into_iter().enumerate() {
        let f = truncate_free(3, l).unwrap();
        ensure(f.len() == nv && f.carrier().blocks().len() == nb, || format!("F(3,{l})"))?;
    }
    for k in 1..=4 {
        for l in 0..=3 {
            let f = truncate_free(k, l).unwrap();
            f.check_standard_construction().map_err(|e| format!("F({k},{l}): {e}"))?;
            let base = free_base_from_ordering(f.carrier(), &f.level_ordering()).unwrap();
            ensure(base == f.generator_set(), || format!("free base of F({k},{l})"))?;
        }
    }
    Ok("sizes 3/6/12 with 0/3/9 blocks; standard construction and free base for k <= 4, L <= 3".into())
}

fn endomorphism() -> Check {
    let e = endomorphism_f3(2).unwrap();
    ensure(e.source.len() == 12, || "source size".into())?;
    ensure(e.is_injective(), || "not injective".into())?;
    let mut src = e.source.clone();
    let g0 = src.vertex_by_name("g0").unwrap();
    let g0 = src.term(g0);
    ensure(!e.hits(g0), || "g0 in the image".into())?;
    let fano = named::fano();
    let q = FiniteQuasigroup::from_sts(&fano).unwrap();
    let mut arena = e.source.arena().clone();
    let vertices: Vec<VertexId> = e.source.carrier().vertices().collect();
    let mut checks = 0;
    for a in 0..7 {
        for b in 0..7 {
            for c in 0..7 {
                let asg = [a, b, c];
                let ev = |arena: &freests::free::TermArena, t| {
                    eval_hom(arena, t, &asg, &mut |x: &usize, y: &usize| q.mult(*x, *y)).unwrap()
                };
                for &x in &vertices {
                    for &y in &vertices {
                        let (u, v) = (e.source.term(x), e.source.term(y));
                        let uv = arena.product(u, v);
                        ensure(ev(&arena, uv) == q.mult(ev(&arena, u), ev(&arena, v)), || {
                            "homomorphism law".into()
                        })?;
                        if let Some(w) = e.source.vertex(uv) {
                            let image = |z: VertexId| e.image[z.index()];
                            ensure(
                                ev(&arena, image(w)) == q.mult(ev(&arena, image(x)), ev(&arena, image(y))),
                                || "endomorphism law".into(),
                            )?;
                        }
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!("injective on 12 vertices, g0 not hit; {checks} homomorphism checks"))
}

fn trees() -> Check {
    let mut f = truncate_free(4, 4).unwrap();
    let g0 = f.vertex_by_name("g0").unwrap();
    let t = tree_above(&mut f, g0, 3).map_err(|e| e.to_string())?;
    ensure(verify_tree(f.carrier(), &t).unwrap().is_ok(), || "tree_above fails".into())?;
    tree_orderings(f.carrier(), &t).map_err(|e| e.to_string())?;
    for h in 1..=4 {
        let (p, t) = abstract_tree(h).unwrap();
        let o = tree_orderings(&p, &t).map_err(|e| e.to_string())?;
        for ord in [&o.natural, &o.reversed] {
            ensure(matches!(verify_hf(&o.structure, ord.sequence()), Ok(HfCheck::Ok(_))), || {
                format!("height {h}")
            })?;
        }
    }
    Ok("height-3 tree above g0 in F(4,4) verified; both orderings HF at heights 1..4".into())
}

fn genericity() -> Check {
    let start = Instant::now();
    let chain = generic_prefix(20, SEED).map_err(|e| e.to_string())?;
    ensure(chain.stages.len() == 20, || "chain length".into())?;
    ensure(chain_is_strong(&chain).unwrap(), || "chain not strong".into())?;
    let p = chain.truncation.carrier();
    for (s, cert) in chain.stages.iter().zip(&chain.certificates) {
        ensure(verify_hf(p, cert.sequence()).unwrap().is_ok() && cert.has_initial_segment(s), || {
            "stage certificate".into()
        })?;
    }
    ensure(chain.free_base == chain.truncation.generator_set(), || "free base".into())?;
    let t = within(start, GENERIC_LIMIT)?;
    Ok(format!(
        "20 stages strong in F({},{}), free base = generators ({t:?})",
        chain.truncation.generators(),
        chain.truncation.depth()
    ))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = freests::cli::run_with(std::iter::once("freests").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

fn determinism(corpus: &[PartialSts]) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let b1 = d("b1.pstss");
    let b2 = d("b2.pstss");
    std::fs::write(&b1, format::write_pstss(&named::noamalgam_b1())).unwrap();
    std::fs::write(&b2, format::write_pstss(&named::noamalgam_b2())).unwrap();
    let grid = d("grid.pstss");
    std::fs::write(&grid, format::write_pstss(&named::grid9())).unwrap();
    let glue = d("tri.glue");
    let tri_b = d("tb.pstss");
    let tri_c = d("tc.pstss");
    std::fs::write(&tri_b, "pstss 1\nv x\nv y\nv z\nb x y z\n").unwrap();
    std::fs::write(&tri_c, "pstss 1\nv x\nv u\nv v\nb x u v\n").unwrap();
    std::fs::write(&glue, "glue 1\nx x\n").unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["check-unconfined", &grid],
        vec!["hf-order", &b1],
        vec!["strong", &b1, "--base", "a,b"],
        vec!["orient", &grid],
        vec!["free", "--generators", "3", "--levels", "3"],
        vec!["amalgamate", &tri_b, &tri_c, "--glue", &glue, "-n", "2"],
        vec!["tree", "--generators", "4", "--levels", "3", "--above", "g0", "--height", "3"],
        vec!["minpair-chain", "-k", "3"],
        vec!["report-no-amalgam"],
        vec!["generic", "--steps", "10"],
    ];
    for args in &runs {
        let first = cli(args);
        ensure(first.0 != 2, || format!("{args:?} exited with an error"))?;
        ensure(first == cli(args), || format!("output differs for {args:?}"))?;
    }
    let mut written = Vec::new();
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    for dir in [dir.path(), second.path()] {
        let out = dir.join("d.pstss").to_str().unwrap().to_string();
        let code = cli(&["amalgamate", &tri_b, &tri_c, "--glue", &glue, "--out", &out]).0;
        ensure(code == 0, || format!("amalgamate --out exited {code}"))?;
        let mut files = Vec::new();
        for ext in ["", ".report.jsonl", ".order.hforder", ".c.hforder"] {
            let path = format!("{out}{ext}");
            files.push(std::fs::read(&path).map_err(|e| format!("{path}: {e}"))?);
        }
        written.push(files);
    }
    ensure(written[0] == written[1], || "--out files differ".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut round_trips = 0;
    for p in corpus {
        let text = format::write_pstss(p);
        ensure(format::parse_pstss(&text).as_ref() == Ok(p), || format!("pstss {p:?}"))?;
        if let HfSearch::Ordered(o) = find_hf(p) {
            let back = format::parse_hforder_in(p, &format::write_hforder(p, &o)).unwrap();
            ensure(back == o.sequence(), || "hforder".into())?;
        }
        if let OrientationSearch::Oriented(o) = find_orientation(p) {
            ensure(format::parse_orientation(p, &format::write_orientation(p, &o)).as_ref() == Ok(&o), || {
                "orient".into()
            })?;
        }
        let pairs: Vec<(String, String)> = p
            .set_names(&random_subset(&mut rng, p))
            .into_iter()
            .map(|n| (n.clone(), format!("{n}'")))
            .collect();
        ensure(format::parse_glue(&format::write_glue(&pairs)).as_ref() == Ok(&pairs), || "glue".into())?;
        round_trips += 1;
    }
    for h in 1..=4 {
        let (p, t) = abstract_tree(h).unwrap();
        ensure(format::parse_tree(&p, &format::write_tree(&p, &t)).as_ref() == Ok(&t), || "btree".into())?;
    }
    Ok(format!("{} CLI runs byte-identical; {round_trips} structures round-trip", runs.len()))
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("fano facts", Box::new(fano_facts)),
        ("greedy/oracle equivalence", Box::new(|| greedy_oracle(&corpus))),
        ("unconfined iff HF-ordering", Box::new(|| unconfined_equivalence(&corpus))),
        ("predimension laws", Box::new(|| delta_laws(&corpus))),
        ("class separation", Box::new(|| class_separation(&corpus))),
        ("amalgamation failure report", Box::new(no_amalgam)),
        ("graded amalgamation", Box::new(graded_amalgamation)),
        ("full amalgamation", Box::new(full_amalgamation)),
        ("minimal pairs", Box::new(minimal_pairs)),
        ("free construction", Box::new(free_construction)),
        ("endomorphism", Box::new(endomorphism)),
        ("trees", Box::new(trees)),
        ("genericity", Box::new(genericity)),
        ("determinism and round-trip", Box::new(|| determinism(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

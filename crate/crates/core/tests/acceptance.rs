//! The nine acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL …` line.

mod common;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{affine_check, canonical_text, in_ratio_group, report, Affine, Presentation};
use gog_core::balance::{
    brute_force_balance_oracle, build_groupoid, build_groupoid_without, edge_balanced, edge_node, group_balanced, OracleVerdict,
    Potentials,
};
use gog_core::certify::distortion_certificate;
use gog_core::conj_graph::{build_conjugacy_graph, class_of, edge_classes};
use gog_core::model::{Element, GraphOfGroups, Side, VertexKind, VertexSymbol};
use gog_core::parametrize::{hhg_verdict, parametrize, verify_parametrization, LinearParametrization, Verdict, VertexImage};
use gog_core::random::{baumslag_solitar, random_graph, random_word, relabel, rng, GraphParams};
use gog_core::report as json;
use gog_core::search::Bounds;
use gog_core::text::{parse, parse_word};
use gog_core::word::{is_trivial, to_path_form, RawLetter};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

fn verdict_line(n: u32, ok: bool, elapsed: Duration, limit: Duration, detail: &str) -> bool {
    let pass = ok && elapsed < limit;
    report(&format!(
        "criterion {n}: {} ({detail}; {:.3}s, limit {}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    ));
    pass
}

fn fixture(name: &str) -> GraphOfGroups {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn word(g: &GraphOfGroups, text: &str) -> gog_core::word::PathWord {
    to_path_form(g, &parse_word(text).unwrap(), 0).unwrap()
}

#[test]
fn criterion_1_free_group_example() {
    let t = Instant::now();
    let g = fixture("f2.gog");
    let mut failures = Vec::new();

    let classes = edge_classes(&g);
    let cg = build_conjugacy_graph(&g, &classes, class_of(&classes, 0));
    let d = &cg.delta;
    let mut exps: Vec<BigInt> = d.edges().iter().flat_map(|e| [e.img_from.exponent.abs(), e.img_to.exponent.abs()]).collect();
    exps.sort();
    let loop_shape = d.vertices().len() == 1
        && d.vertices()[0].kind == VertexKind::Free(1)
        && d.edges().len() == 1
        && d.edges()[0].from == d.edges()[0].to;
    if !loop_shape || exps != [BigInt::from(2), BigInt::from(3)] {
        failures.push("conjugacy graph is not a single Free(1) loop with exponents {2,3}".to_string());
    }
    if !cg.verify_provenance(&g) {
        failures.push("provenance".into());
    }

    match hhg_verdict(&g).unwrap() {
        Verdict::NotHhg { witness, .. } => {
            if witness.s.render(&g) != "v.2^-1 e.t" || witness.a.render(&g) != "v.1" {
                failures.push(format!("witness s = {}, a = {}", witness.s.render(&g), witness.a.render(&g)));
            }
            if (witness.i.clone(), witness.j.clone()) != (3.into(), 2.into()) {
                failures.push(format!("exponents {} {}", witness.i, witness.j));
            }
            if !witness.verify(&g) || witness.transcript.num_letters() != 0 {
                failures.push("witness does not verify".into());
            }
        }
        Verdict::Hhg { .. } => failures.push("verdict HHG".into()),
    }
    // s a³ s⁻¹ a⁻² with s = b⁻¹ t, checked by Britton reduction and by rewriting
    let rel = "v.2^-1 e.t v.1^3 e.t^-1 v.2 v.1^-2";
    if !is_trivial(&g, &word(&g, rel)) {
        failures.push("Britton reduction rejects s a^3 s^-1 = a^2".into());
    }
    let pres = Presentation::new(&g);
    if pres.reaches_identity(&pres.letters_of(&g, &parse_word(rel).unwrap()), 200_000) != Some(true) {
        failures.push("rewriting oracle rejects s a^3 s^-1 = a^2".into());
    }
    for f in &failures {
        report(&format!("  {f}"));
    }
    assert!(verdict_line(1, failures.is_empty(), t.elapsed(), Duration::from_secs(1), "F2 example"));
}

#[test]
fn criterion_2_baumslag_solitar_family() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for m in (-6i64..=6).filter(|&x| x != 0) {
        for n in (-6i64..=6).filter(|&x| x != 0) {
            count += 1;
            let g = baumslag_solitar(m, n);
            let v = hhg_verdict(&g).unwrap();
            let expect_hhg = m.abs() == n.abs();
            let ok = match &v {
                Verdict::Hhg { certificates } => {
                    expect_hhg
                        && certificates
                            .iter()
                            .all(|c| verify_parametrization(&c.conjugacy_graph.delta, &c.phi).is_ok())
                }
                Verdict::NotHhg { witness, .. } => {
                    !expect_hhg
                        && witness.transcript.num_letters() == 0
                        && witness.transcript.head().is_identity()
                        && witness.verify(&g)
                }
            };
            if !ok {
                bad.push(format!("BS({m},{n}) -> {}", v.status()));
            }
        }
    }
    for b in &bad {
        report(&format!("  {b}"));
    }
    let detail = format!("{count} groups, {} wrong", bad.len());
    assert!(verdict_line(2, bad.is_empty(), t.elapsed(), Duration::from_secs(5), &detail));
}

#[test]
fn criterion_3_trees_are_balanced() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..200u64 {
        let g = random_graph(&mut rng(seed), GraphParams::tree(6, 9));
        let edges_ok = (0..g.edges().len()).all(|e| edge_balanced(&g, e).is_balanced());
        let group_ok = group_balanced(&g).is_balanced();
        let v = hhg_verdict(&g).unwrap();
        if !(edges_ok && group_ok && matches!(v, Verdict::Hhg { .. }) && v.verify(&g)) {
            bad.push(seed);
        }
    }
    let detail = format!("200 trees, {} exceptions {:?}", bad.len(), bad);
    assert!(verdict_line(3, bad.is_empty(), t.elapsed(), Duration::from_secs(10), &detail));
}

/// Instances shared by criteria 4 and 6.
fn small_instances() -> Vec<GraphOfGroups> {
    (0..120u64)
        .map(|seed| random_graph(&mut rng(1000 + seed), GraphParams::small(4, 5, 5)))
        .collect()
}

/// `|x|` is a product of cycle moduli at the node of `e⁺` in the groupoid
/// of the whole graph.
fn has_cycle_with_modulus(g: &GraphOfGroups, e: usize, x: &BigRational) -> bool {
    let gr = build_groupoid(g);
    let p = Potentials::new(&gr);
    let node = gr.node_index(&edge_node(g, e, Side::To)).unwrap();
    let gens: Vec<BigRational> = p
        .violations(&gr)
        .filter(|&a| p.component[gr.arcs[a].from] == p.component[node])
        .map(|a| p.fundamental_cycle(&gr, g, a).modulus.abs())
        .collect();
    in_ratio_group(&x.abs(), &gens, 4)
}

#[test]
fn criterion_4_oracle_agreement() {
    let t = Instant::now();
    let bounds = Bounds {
        max_syllables: 4,
        max_exp: 4,
        node_cap: 200_000,
    };
    let instances = small_instances();
    let jobs: Vec<(usize, usize)> = instances
        .iter()
        .enumerate()
        .flat_map(|(i, g)| (0..g.edges().len()).map(move |e| (i, e)))
        .collect();
    let results = gog_core::par::map_slice(&jobs, |&(i, e)| {
        let g = &instances[i];
        (edge_balanced(g, e), brute_force_balance_oracle(g, e, bounds))
    });
    let (mut conclusive, mut unbalanced, mut inconclusive, mut budget) = (0, 0, 0, 0);
    let mut bad = Vec::new();
    for (&(i, e), (ours, oracle)) in jobs.iter().zip(&results) {
        let g = &instances[i];
        match oracle {
            Err(_) => budget += 1,
            Ok(OracleVerdict::BalancedWithinBounds) => inconclusive += 1,
            Ok(OracleVerdict::VacuouslyBalanced) => {
                conclusive += 1;
                if !ours.is_balanced() {
                    bad.push(format!("instance {i} edge {e}: oracle vacuous, ours Unbalanced"));
                }
            }
            Ok(OracleVerdict::Unbalanced { i: oi, j: oj, .. }) => {
                conclusive += 1;
                unbalanced += 1;
                if ours.is_balanced() {
                    bad.push(format!("instance {i} edge {e}: oracle Unbalanced ({oi},{oj}), ours Balanced"));
                } else if !has_cycle_with_modulus(g, e, &BigRational::new(oj.clone(), oi.clone())) {
                    bad.push(format!("instance {i} edge {e}: no groupoid cycle of modulus {oj}/{oi}"));
                }
            }
        }
    }
    for b in &bad {
        report(&format!("  {b}"));
    }
    let detail = format!(
        "{} instances, {} edges: {conclusive} conclusive ({unbalanced} unbalanced), {inconclusive} inconclusive, {budget} over budget, {} disagreements",
        instances.len(),
        jobs.len(),
        bad.len()
    );
    assert!(verdict_line(4, bad.is_empty(), t.elapsed(), Duration::from_secs(60), &detail));
}

fn element_letters(g: &GraphOfGroups, v: usize, el: &Element) -> Vec<RawLetter> {
    let vertex = g.vertex(v).name.clone();
    match el {
        Element::Free(w) => w
            .syllables()
            .iter()
            .map(|s| RawLetter::Vertex {
                vertex: vertex.clone(),
                symbol: VertexSymbol::Gen(s.gen),
                exp: s.exp.clone(),
            })
            .collect(),
        Element::Dihedral(d) => {
            let mut out = Vec::new();
            if d.reflect {
                out.push(RawLetter::Vertex {
                    vertex: vertex.clone(),
                    symbol: VertexSymbol::S,
                    exp: 1.into(),
                });
            }
            if d.shift != BigInt::from(0) {
                out.push(RawLetter::Vertex {
                    vertex,
                    symbol: VertexSymbol::R,
                    exp: d.shift.clone(),
                });
            }
            out
        }
    }
}

fn invert(w: &[RawLetter]) -> Vec<RawLetter> {
    w.iter()
        .rev()
        .map(|l| match l {
            RawLetter::Vertex { vertex, symbol, exp } => RawLetter::Vertex {
                vertex: vertex.clone(),
                symbol: *symbol,
                exp: if *symbol == VertexSymbol::S { exp.clone() } else { -exp },
            },
            RawLetter::Stable { edge, exp } => RawLetter::Stable {
                edge: edge.clone(),
                exp: -exp,
            },
        })
        .collect()
}

fn syllable_ok(w: &[RawLetter], max_syl: usize, max_exp: i64) -> bool {
    w.len() <= max_syl
        && w.iter().all(|l| match l {
            RawLetter::Vertex { exp, .. } | RawLetter::Stable { exp, .. } => exp.abs() <= BigInt::from(max_exp),
        })
}

/// A word that is trivial by construction: a conjugate of a relator, or a
/// relator with one syllable rotated to the other end.
fn relator_word(r: &mut impl Rng, g: &GraphOfGroups) -> Vec<RawLetter> {
    let mut rel = Vec::new();
    let dihedral: Vec<usize> = (0..g.vertices().len()).filter(|&v| g.vertex(v).kind == VertexKind::Dihedral).collect();
    if !dihedral.is_empty() && (g.edges().is_empty() || r.gen_bool(0.25)) {
        let v = &g.vertex(*dihedral.choose(r).unwrap()).name;
        let k: i64 = r.gen_range(-3..=3);
        let s = RawLetter::Vertex { vertex: v.clone(), symbol: VertexSymbol::S, exp: 1.into() };
        let rr = RawLetter::Vertex { vertex: v.clone(), symbol: VertexSymbol::R, exp: k.into() };
        rel.extend([s.clone(), rr.clone(), s, rr]);
    } else if !g.edges().is_empty() {
        let e = r.gen_range(0..g.edges().len());
        let edge = g.edge(e);
        let k: i64 = if r.gen_bool(0.8) { 1 } else { 2 };
        let t = |exp: i64| RawLetter::Stable { edge: edge.name.clone(), exp: exp.into() };
        rel.push(t(1));
        rel.extend(element_letters(g, edge.to, &edge.img_to.element.pow(&k.into())));
        rel.push(t(-1));
        rel.extend(invert(&element_letters(g, edge.from, &edge.img_from.element.pow(&k.into()))));
    }
    if r.gen_bool(0.5) && !rel.is_empty() {
        let k = r.gen_range(0..rel.len());
        rel.rotate_left(k);
    }
    let u = random_word(r, g, 2, 4);
    let mut w = u.clone();
    w.extend(rel);
    w.extend(invert(&u));
    w
}

#[test]
fn criterion_5_word_problem_oracle() {
    let t = Instant::now();
    let mut r = rng(5);
    let graphs: Vec<GraphOfGroups> = (0..25u64)
        .map(|s| random_graph(&mut rng(5000 + s), GraphParams::small(3, 3, 4)))
        .collect();
    let mut cases: Vec<(usize, Vec<RawLetter>)> = Vec::new();
    while cases.len() < 500 {
        let gi = r.gen_range(0..graphs.len());
        let g = &graphs[gi];
        let w = if cases.len().is_multiple_of(2) { random_word(&mut r, g, 8, 4) } else { relator_word(&mut r, g) };
        if syllable_ok(&w, 8, 4) {
            cases.push((gi, w));
        }
    }
    let pres: Vec<Presentation> = graphs.iter().map(Presentation::new).collect();
    let results = gog_core::par::map_slice(&cases, |(gi, w)| {
        let g = &graphs[*gi];
        let p = &pres[*gi];
        let pw = to_path_form(g, w, 0).unwrap();
        let ours = is_trivial(g, &pw);
        let letters = p.letters_of(g, w);
        // Some(trivial?) when the oracle is conclusive
        let oracle = if p.abelian_nontrivial(&letters) {
            Some(false)
        } else {
            p.reaches_identity(&letters, 20_000)
        };
        let double = is_trivial(g, &pw.mul(g, &pw.inverse(g)));
        (ours, oracle, double)
    });
    let (mut trivial, mut inconclusive) = (0, 0);
    let mut bad = Vec::new();
    for ((gi, w), (ours, oracle, double)) in cases.iter().zip(&results) {
        trivial += usize::from(*ours);
        match oracle {
            None => inconclusive += 1,
            Some(o) if o != ours => bad.push(format!("graph {gi}: {w:?}: ours {ours}, oracle {o}")),
            Some(_) => {}
        }
        if !double {
            bad.push(format!("graph {gi}: w w^-1 not trivial for {w:?}"));
        }
    }
    for b in bad.iter().take(10) {
        report(&format!("  {b}"));
    }
    let detail = format!(
        "500 words ({trivial} trivial), {inconclusive} over budget, {} disagreements",
        bad.len()
    );
    assert!(verdict_line(5, bad.is_empty(), t.elapsed(), Duration::from_secs(60), &detail));
}

/// Whether the two root classes of `e` fall into different components of
/// the groupoid once `e` is removed.
fn groupoid_bridge(g: &GraphOfGroups, e: usize) -> bool {
    let gr = build_groupoid_without(g, Some(e));
    let p = Potentials::new(&gr);
    let plus = gr.node_index(&edge_node(g, e, Side::To)).unwrap();
    let minus = gr.node_index(&edge_node(g, e, Side::From)).unwrap();
    p.component[plus] != p.component[minus]
}

#[test]
fn criterion_6_conjugacy_graph_transfer() {
    let t = Instant::now();
    let instances = small_instances();
    let mut bad = Vec::new();
    let (mut edges, mut bridges) = (0, 0);
    for (i, g) in instances.iter().enumerate() {
        let classes = edge_classes(g);
        let delta_unbalanced: Vec<bool> = (0..classes.len())
            .map(|c| !group_balanced(&build_conjugacy_graph(g, &classes, c).delta).is_balanced())
            .collect();
        for e in 0..g.edges().len() {
            edges += 1;
            let lhs = !edge_balanced(g, e).is_balanced();
            let rhs = delta_unbalanced[class_of(&classes, e)];
            if lhs != rhs {
                let bridge = groupoid_bridge(g, e);
                bridges += usize::from(bridge);
                bad.push(format!(
                    "instance {i} edge {}: edge Unbalanced = {lhs}, class graph Unbalanced = {rhs}, bridge = {bridge}",
                    g.edge(e).name
                ));
            }
        }
    }
    for b in bad.iter().take(5) {
        report(&format!("  {b}"));
    }
    let detail = format!(
        "{} instances, {edges} edges, {} disagreements, {bridges} of them on edges whose root classes are disconnected without the edge",
        instances.len(),
        bad.len()
    );
    assert!(verdict_line(6, bad.is_empty(), t.elapsed(), Duration::from_secs(60), &detail));
}

#[test]
fn criterion_7_distortion() {
    let t = Instant::now();
    let g = fixture("bs32.gog");
    let Verdict::NotHhg { witness, .. } = hhg_verdict(&g).unwrap() else {
        panic!("BS(2,3) is not HHG");
    };
    let c = distortion_certificate(&g, &witness, 10);
    let mut ok = !c.swapped && c.all_verified() && c.i == BigInt::from(2) && c.j == BigInt::from(3);
    for row in &c.rows {
        let k = row.k;
        let expected_bound = BigInt::from(2 * k) + BigInt::from(2).pow(k);
        ok &= row.exponent == BigInt::from(3).pow(k) && row.length_bound == expected_bound;
        ok &= row.letter_length <= row.length_bound;
        // the word is literally t^k a^{2^k} t^-k
        let text = format!("e.t^{k} v.1^{} e.t^-{k}", BigInt::from(2).pow(k));
        let text = if k == 1 { "e.t v.1^2 e.t^-1".to_string() } else { text };
        ok &= row.word.render(&g) == text;
    }
    // (2k + 2^k) / 3^k strictly decreasing from k = 2
    let ratios: Vec<f64> = (2..=10u32)
        .map(|k| (2.0 * f64::from(k) + 2f64.powi(k as i32)) / 3f64.powi(k as i32))
        .collect();
    ok &= ratios.windows(2).all(|w| w[1] < w[0]) && c.ratios_decreasing(2);
    let detail = format!("k = 1..10, row 10 bound {} vs exponent {}", c.rows[9].length_bound, c.rows[9].exponent);
    assert!(verdict_line(7, ok, t.elapsed(), Duration::from_secs(1), &detail));
}

fn affine_of(phi: &LinearParametrization) -> (Vec<Vec<Affine>>, Vec<Affine>) {
    let gens = phi
        .vertices
        .iter()
        .map(|v| match v {
            VertexImage::Cyclic(x) => vec![Affine::of(x)],
            VertexImage::Dihedral { r, s } => vec![Affine::of(r), Affine::of(s)],
        })
        .collect();
    (gens, phi.stable.iter().map(Affine::of).collect())
}

#[test]
fn criterion_8_certificate_robustness() {
    let t = Instant::now();
    let mut pool: Vec<(GraphOfGroups, LinearParametrization)> = Vec::new();
    let mut sources: Vec<GraphOfGroups> = ["trefoil.gog", "klein.gog", "dihedral.gog"].iter().map(|f| fixture(f)).collect();
    sources.extend((0..40u64).map(|s| random_graph(&mut rng(8000 + s), GraphParams::tree(5, 6))));
    sources.extend((0..40u64).map(|s| {
        let mut p = GraphParams::small(3, 4, 4);
        p.max_rank = 1;
        random_graph(&mut rng(8100 + s), p)
    }));
    for g in &sources {
        let classes = edge_classes(g);
        for c in 0..classes.len() {
            let d = build_conjugacy_graph(g, &classes, c).delta;
            if let Ok(Ok(phi)) = parametrize(&d) {
                pool.push((d, phi));
            }
        }
    }
    let mut r = rng(8);
    let mut ok = true;
    let (mut rejected, mut accepted) = (0, 0);
    for (d, phi) in &pool {
        let (gens, stable) = affine_of(phi);
        ok &= verify_parametrization(d, phi).is_ok() && affine_check(d, &gens, &stable);
    }
    for _ in 0..100 {
        let (d, phi) = pool.choose(&mut r).unwrap();
        let mut m = phi.clone();
        let delta: i64 = *[-2, -1, 1, 2].choose(&mut r).unwrap();
        let slots = m.vertices.len() * 2 + m.stable.len();
        let slot = r.gen_range(0..slots);
        let bump = |x: &mut gog_core::dihedral::DihedralElement| x.shift += delta;
        if slot < 2 * m.vertices.len() {
            match &mut m.vertices[slot / 2] {
                VertexImage::Cyclic(x) => bump(x),
                VertexImage::Dihedral { r, s } => bump(if slot % 2 == 0 { r } else { s }),
            }
        } else {
            bump(&mut m.stable[slot - 2 * m.vertices.len()]);
        }
        let (gens, stable) = affine_of(&m);
        let expected = affine_check(d, &gens, &stable);
        let got = verify_parametrization(d, &m).is_ok();
        if got != expected {
            ok = false;
            report(&format!("  mutation of {:?}: verifier {got}, affine check {expected}", m));
        }
        if got {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    let detail = format!("{} parametrizations, 100 mutations: {rejected} rejected, {accepted} still valid", pool.len());
    assert!(verdict_line(8, ok, t.elapsed(), Duration::from_secs(60), &detail));
}

/// `|k|` of every vertex-generator image, keyed by original letter.
fn vertex_images(g: &GraphOfGroups, v: &Verdict, rename: &dyn Fn(&str) -> String) -> BTreeMap<String, Vec<BigInt>> {
    let mut out: BTreeMap<String, Vec<BigInt>> = BTreeMap::new();
    if let Verdict::Hhg { certificates } = v {
        for c in certificates {
            let d = &c.conjugacy_graph.delta;
            for (dv, img) in c.phi.vertices.iter().enumerate() {
                let orig = rename(&g.vertex(c.conjugacy_graph.origin[dv].vertex).name);
                let k = match img {
                    VertexImage::Cyclic(x) => x.shift.abs(),
                    VertexImage::Dihedral { r, .. } => r.shift.abs(),
                };
                let _ = d;
                out.entry(orig).or_default().push(k);
            }
        }
    }
    for ks in out.values_mut() {
        ks.sort();
    }
    out
}

#[test]
fn criterion_9_relabeling_invariance() {
    let t = Instant::now();
    let names = ["bs32.gog", "trefoil.gog", "f2.gog", "klein.gog", "dihedral.gog", "mixed.gog", "pendant.gog"];
    let mut r = rng(9);
    let mut bad = Vec::new();
    for trial in 0..20 {
        let file = names[trial % names.len()];
        let g = fixture(file);
        let mut pool: Vec<String> = (0..26).map(|i| format!("{}{}", (b'a' + i as u8) as char, r.gen_range(0..100))).collect();
        pool.shuffle(&mut r);
        let vmap: BTreeMap<String, String> =
            g.vertices().iter().enumerate().map(|(i, v)| (v.name.clone(), pool[i].clone())).collect();
        let emap: BTreeMap<String, String> =
            g.edges().iter().enumerate().map(|(i, e)| (e.name.clone(), format!("x{}", pool[10 + i]))).collect();
        let h = relabel(&g, |v| vmap[v].clone(), |e| emap[e].clone(), &mut r).unwrap();
        let back: BTreeMap<String, String> = vmap.iter().map(|(a, b)| (b.clone(), a.clone())).collect();

        let vg = hhg_verdict(&g).unwrap();
        let vh = hhg_verdict(&h).unwrap();
        if vg.status() != vh.status() || !vh.verify(&h) {
            bad.push(format!("{file}: status {} vs {}", vg.status(), vh.status()));
        }
        let ident = |s: &str| s.to_string();
        let rev = |s: &str| back[s].clone();
        if vertex_images(&g, &vg, &ident) != vertex_images(&h, &vh, &rev) {
            bad.push(format!("{file}: certificates differ"));
        }
        let (cg, ch) = (canonical_text(&g), canonical_text(&h));
        let (pg, ph) = (parse(&cg).unwrap(), parse(&ch).unwrap());
        let jg = json::verdict(&pg, &hhg_verdict(&pg).unwrap(), true).to_string();
        let jh = json::verdict(&ph, &hhg_verdict(&ph).unwrap(), true).to_string();
        if cg != ch || jg != jh {
            bad.push(format!("{file}: canonical JSON differs"));
        }
    }
    for b in &bad {
        report(&format!("  {b}"));
    }
    let detail = format!("20 relabelings, {} mismatches", bad.len());
    assert!(verdict_line(9, bad.is_empty(), t.elapsed(), Duration::from_secs(60), &detail));
}

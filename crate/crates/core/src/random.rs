//! Seeded random instances for tests and benchmarks.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dihedral::DihedralElement;
use crate::free_words::FreeWord;
use crate::model::{Element, GraphBuilder, GraphOfGroups, ValidationError, VertexKind, VertexSymbol};
use crate::word::RawLetter;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct GraphParams {
    pub max_vertices: usize,
    /// Edges beyond a spanning tree are added up to this total.
    pub max_edges: usize,
    pub max_exp: i64,
    pub max_rank: u32,
    pub dihedral: bool,
    pub tree: bool,
}

impl GraphParams {
    /// Trees of `Free(1)` and dihedral vertices.
    pub fn tree(max_vertices: usize, max_exp: i64) -> Self {
        Self {
            max_vertices,
            max_edges: max_vertices.saturating_sub(1),
            max_exp,
            max_rank: 1,
            dihedral: true,
            tree: true,
        }
    }

    pub fn small(max_vertices: usize, max_edges: usize, max_exp: i64) -> Self {
        Self {
            max_vertices,
            max_edges,
            max_exp,
            max_rank: 2,
            dihedral: true,
            tree: false,
        }
    }
}

fn nonzero(rng: &mut impl Rng, max: i64) -> i64 {
    let k = rng.gen_range(1..=max);
    if rng.gen_bool(0.5) {
        k
    } else {
        -k
    }
}

fn attachment(rng: &mut impl Rng, kind: VertexKind, max_exp: i64) -> Element {
    let p = nonzero(rng, max_exp);
    match kind {
        VertexKind::Dihedral => {
            let r = DihedralElement::rotation(p);
            if rng.gen_bool(0.25) {
                Element::Dihedral(r.conjugate_by(&DihedralElement::reflection(rng.gen_range(0..3))))
            } else {
                Element::Dihedral(r)
            }
        }
        VertexKind::Free(rank) => {
            let base = if rank >= 2 && rng.gen_bool(0.2) {
                FreeWord::generator(1, 1).mul(&FreeWord::generator(2, 1))
            } else {
                FreeWord::generator(rng.gen_range(1..=rank), 1)
            };
            let mut w = base.pow(&BigInt::from(p));
            if rank >= 2 && rng.gen_bool(0.3) {
                let c = FreeWord::generator(rng.gen_range(1..=rank), nonzero(rng, 2));
                w = w.conjugate_by(&c);
            }
            Element::Free(w)
        }
    }
}

/// Connected graph: a random tree, then extra edges (loops allowed).
pub fn random_graph(rng: &mut impl Rng, p: GraphParams) -> GraphOfGroups {
    let n = rng.gen_range(1..=p.max_vertices.max(1));
    let kinds: Vec<VertexKind> = (0..n)
        .map(|_| {
            if p.dihedral && rng.gen_bool(0.3) {
                VertexKind::Dihedral
            } else {
                VertexKind::Free(rng.gen_range(1..=p.max_rank.max(1)))
            }
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    if !p.tree {
        let total = rng.gen_range(pairs.len().max(1)..=p.max_edges.max(pairs.len()).max(1));
        while pairs.len() < total {
            pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
    }
    let mut b = GraphBuilder::new();
    for (i, k) in kinds.iter().enumerate() {
        b.vertex(&format!("v{i}"), *k);
    }
    for (i, &(a, c)) in pairs.iter().enumerate() {
        let (a, c) = if rng.gen_bool(0.5) { (a, c) } else { (c, a) };
        b.edge(
            &format!("e{i}"),
            &format!("v{a}"),
            &format!("v{c}"),
            attachment(rng, kinds[a], p.max_exp),
            attachment(rng, kinds[c], p.max_exp),
        );
    }
    b.build().expect("generated graphs are valid")
}

/// `⟨a, t | t aᵐ t⁻¹ = aⁿ⟩` as a loop at a `Free(1)` vertex.
pub fn baumslag_solitar(m: i64, n: i64) -> GraphOfGroups {
    let mut b = GraphBuilder::new();
    b.vertex("v", VertexKind::Free(1)).edge(
        "e",
        "v",
        "v",
        Element::Free(FreeWord::generator(1, n)),
        Element::Free(FreeWord::generator(1, m)),
    );
    b.build().expect("m and n are nonzero")
}

/// A word of up to `max_syllables` letters `x^k`, `1 ≤ |k| ≤ max_exp`.
pub fn random_word(rng: &mut impl Rng, graph: &GraphOfGroups, max_syllables: usize, max_exp: i64) -> Vec<RawLetter> {
    let len = rng.gen_range(0..=max_syllables);
    (0..len)
        .map(|_| {
            let use_edge = !graph.edges().is_empty() && rng.gen_bool(0.35);
            if use_edge {
                let e = graph.edges().choose(rng).expect("nonempty");
                RawLetter::Stable {
                    edge: e.name.clone(),
                    exp: nonzero(rng, max_exp).into(),
                }
            } else {
                let v = graph.vertices().choose(rng).expect("graphs have vertices");
                let symbol = match v.kind {
                    VertexKind::Free(rank) => VertexSymbol::Gen(rng.gen_range(1..=rank)),
                    VertexKind::Dihedral if rng.gen_bool(0.5) => VertexSymbol::S,
                    VertexKind::Dihedral => VertexSymbol::R,
                };
                let exp = if symbol == VertexSymbol::S { 1 } else { nonzero(rng, max_exp) };
                RawLetter::Vertex {
                    vertex: v.name.clone(),
                    symbol,
                    exp: exp.into(),
                }
            }
        })
        .collect()
}

/// The same graph under new names, with declarations shuffled.
pub fn relabel(
    graph: &GraphOfGroups,
    vertex_name: impl Fn(&str) -> String,
    edge_name: impl Fn(&str) -> String,
    rng: &mut impl Rng,
) -> Result<GraphOfGroups, ValidationError> {
    let mut vs: Vec<usize> = (0..graph.vertices().len()).collect();
    let mut es: Vec<usize> = (0..graph.edges().len()).collect();
    vs.shuffle(rng);
    es.shuffle(rng);
    let mut b = GraphBuilder::new();
    for v in vs {
        let vx = graph.vertex(v);
        b.vertex(&vertex_name(&vx.name), vx.kind);
    }
    for e in es {
        let ex = graph.edge(e);
        b.edge(
            &edge_name(&ex.name),
            &vertex_name(&graph.vertex(ex.from).name),
            &vertex_name(&graph.vertex(ex.to).name),
            ex.img_from.element.clone(),
            ex.img_to.element.clone(),
        );
    }
    b.build()
}

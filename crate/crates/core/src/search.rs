//! Bounded breadth-first search for conjugators between elliptic elements.
//!
//! The search grows a conjugator `h` one syllable at a time on the left and
//! only keeps `z = h x h⁻¹` while it stays inside a vertex group: a reduced
//! conjugator between elliptic elements passes through elliptic conjugates
//! at every step, so nothing is lost. Syllables are single generator powers
//! `gen^k` with `|k| ≤ max_exp`, the reflection `s`, or a stable letter.

use std::collections::HashSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::dihedral::DihedralElement;
use crate::free_words::FreeWord;
use crate::model::{Element, GraphOfGroups, Side, Step, VertexKind};
use crate::word::{are_equal, pinch_membership, PathWord};

pub const DEFAULT_NODE_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search budget of {cap} nodes exceeded")]
    SearchBudgetExceeded { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Syl {
    Vertex(usize, Element, u32),
    Letter(Step),
}

#[derive(Clone)]
struct Node {
    vertex: usize,
    z: Element,
    // syllables in the order they were prepended
    h: Vec<Syl>,
}

/// Search limits: syllable count, exponent bound and node cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_syllables: usize,
    pub max_exp: u32,
    pub node_cap: usize,
}

impl Bounds {
    pub fn new(max_syllables: usize, max_exp: u32) -> Self {
        Self {
            max_syllables,
            max_exp,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

fn vertex_syllables(kind: VertexKind, v: usize, max_exp: u32) -> Vec<Syl> {
    let mut out = Vec::new();
    match kind {
        VertexKind::Free(rank) => {
            for gen in 1..=rank {
                for k in 1..=i64::from(max_exp) {
                    for e in [k, -k] {
                        out.push(Syl::Vertex(v, Element::Free(FreeWord::generator(gen, e)), gen));
                    }
                }
            }
        }
        VertexKind::Dihedral => {
            for k in 1..=i64::from(max_exp) {
                for e in [k, -k] {
                    out.push(Syl::Vertex(v, Element::Dihedral(DihedralElement::rotation(e)), 1));
                }
            }
            out.push(Syl::Vertex(v, Element::Dihedral(DihedralElement::reflection(0)), 0));
        }
    }
    out
}

fn assemble(graph: &GraphOfGroups, end_vertex: usize, h: &[Syl]) -> PathWord {
    let mut w = PathWord::identity(graph, end_vertex);
    for s in h.iter().rev() {
        let piece = match s {
            Syl::Vertex(v, g, _) => PathWord::element(*v, g.clone()),
            Syl::Letter(step) => PathWord::letter(graph, *step),
        };
        w = w.mul(graph, &piece);
    }
    w
}

/// Finds the shortest `h` (in syllables, within `bounds`) such that
/// `h x h⁻¹` is an element `z` of vertex `w` with `accept(w, z)`, where `x`
/// lies in vertex `xv`. Returns `h` together with `(w, z)`.
pub fn search_conjugates<F>(
    graph: &GraphOfGroups,
    xv: usize,
    x: &Element,
    bounds: Bounds,
    mut accept: F,
) -> Result<Option<(PathWord, usize, Element)>, SearchError>
where
    F: FnMut(usize, &Element) -> bool,
{
    let syllables: Vec<Vec<Syl>> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| vertex_syllables(v.kind, i, bounds.max_exp))
        .collect();
    let mut seen: HashSet<(usize, Element)> = HashSet::new();
    seen.insert((xv, x.clone()));
    let mut frontier = vec![Node {
        vertex: xv,
        z: x.clone(),
        h: Vec::new(),
    }];
    let mut nodes = 1usize;
    for depth in 0..=bounds.max_syllables {
        for n in &frontier {
            if accept(n.vertex, &n.z) {
                return Ok(Some((assemble(graph, n.vertex, &n.h), n.vertex, n.z.clone())));
            }
        }
        if depth == bounds.max_syllables {
            break;
        }
        let mut next = Vec::new();
        for n in &frontier {
            let last = n.h.last();
            let mut push = |vertex: usize, z: Element, syl: Syl, next: &mut Vec<Node>| -> Result<(), SearchError> {
                if !seen.insert((vertex, z.clone())) {
                    return Ok(());
                }
                nodes += 1;
                if nodes > bounds.node_cap {
                    return Err(SearchError::SearchBudgetExceeded { cap: bounds.node_cap });
                }
                let mut h = n.h.clone();
                h.push(syl);
                next.push(Node { vertex, z, h });
                Ok(())
            };
            for syl in &syllables[n.vertex] {
                let Syl::Vertex(_, g, gen) = syl else { unreachable!() };
                // a syllable on the same generator would merge with the last
                if matches!(last, Some(Syl::Vertex(_, _, prev)) if prev == gen) {
                    continue;
                }
                let z = n.z.conjugate_by(g);
                if z == n.z {
                    continue;
                }
                push(n.vertex, z, syl.clone(), &mut next)?;
            }
            for (e, side) in graph.incident(n.vertex) {
                // prepending t_e needs h to start at e⁺, t_e⁻¹ at e⁻
                let step = Step {
                    edge: e,
                    forward: side == Side::To,
                };
                if matches!(last, Some(Syl::Letter(prev)) if prev.edge == e && prev.forward != step.forward) {
                    continue;
                }
                let Some(k) = pinch_membership(graph, e, side, &n.z) else {
                    continue;
                };
                let edge = graph.edge(e);
                let z = edge.attachment(side.other()).element.pow(&k);
                push(edge.endpoint(side.other()), z, Syl::Letter(step), &mut next)?;
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// Some `h` with `h x h⁻¹ = y` among conjugators within `bounds`,
/// re-checked by the word engine.
pub fn bounded_conjugator_search(
    graph: &GraphOfGroups,
    (xv, x): (usize, &Element),
    (yv, y): (usize, &Element),
    bounds: Bounds,
) -> Result<Option<PathWord>, SearchError> {
    let found = search_conjugates(graph, xv, x, bounds, |v, z| v == yv && z == y)?;
    Ok(found.map(|(h, _, _)| {
        let lhs = PathWord::element(xv, x.clone()).conjugate_by(graph, &h);
        assert!(
            are_equal(graph, &lhs, &PathWord::element(yv, y.clone())),
            "search produced a conjugator the word engine rejects"
        );
        h
    }))
}

/// `z = g^n` for `g` an element of a vertex group; used by callers that
/// accept any power of a target within a range.
pub fn power_exponent(g: &Element, z: &Element) -> Option<BigInt> {
    match (g, z) {
        (Element::Dihedral(a), Element::Dihedral(b)) if !a.reflect && !b.reflect => {
            let (q, r) = num_integer::Integer::div_rem(&b.shift, &a.shift);
            (r == BigInt::from(0)).then_some(q)
        }
        (Element::Free(a), Element::Free(b)) => {
            let root = crate::free_words::primitive_root(a).ok()?;
            let inner = root.conjugator.inverse().mul(b).mul(&root.conjugator);
            let n = crate::free_words::as_power_of(&inner, &root.root)?;
            let (q, r) = num_integer::Integer::div_rem(&n, &root.exponent);
            (r == BigInt::from(0)).then_some(q)
        }
        _ => None,
    }
}

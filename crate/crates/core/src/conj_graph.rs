//! Edge classes and their conjugacy graphs.
//!
//! Two attachment occurrences are related when they are the two ends of one
//! edge or when they are commensurable inside one vertex group (same root
//! class). Each class yields a graph of two-ended groups: one vertex per
//! root class met by the class, of kind `Free(1)` (generated by the root)
//! or dihedral, and one edge per original edge with its root exponents.

use num_bigint::BigInt;

use crate::balance::{edge_node, Node};
use crate::model::{
    root_element, Element, GraphBuilder, GraphOfGroups, RootKey, Side, VertexKind, VertexSymbol,
};
use crate::model::element_from_letters;
use crate::word::{are_equal, PathWord};

/// An attachment occurrence: edge index and the side it sits on.
pub type Occurrence = (usize, Side);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub members: Vec<Occurrence>,
    pub edges: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Partition of all attachment occurrences, ordered by least member.
pub fn edge_classes(graph: &GraphOfGroups) -> Vec<EdgeClass> {
    let n = graph.edges().len();
    let occ = |e: usize, side: Side| 2 * e + usize::from(side == Side::To);
    let mut parent: Vec<usize> = (0..2 * n).collect();
    let mut first_at: std::collections::BTreeMap<Node, usize> = Default::default();
    for e in 0..n {
        union(&mut parent, occ(e, Side::From), occ(e, Side::To));
        for side in [Side::From, Side::To] {
            let node = edge_node(graph, e, side);
            match first_at.get(&node) {
                Some(&o) => union(&mut parent, o, occ(e, side)),
                None => {
                    first_at.insert(node, occ(e, side));
                }
            }
        }
    }
    let mut classes: Vec<EdgeClass> = Vec::new();
    let mut slot: std::collections::BTreeMap<usize, usize> = Default::default();
    for e in 0..n {
        for side in [Side::From, Side::To] {
            let root = find(&mut parent, occ(e, side));
            let k = *slot.entry(root).or_insert_with(|| {
                classes.push(EdgeClass {
                    members: Vec::new(),
                    edges: Vec::new(),
                });
                classes.len() - 1
            });
            classes[k].members.push((e, side));
            if classes[k].edges.last() != Some(&e) {
                classes[k].edges.push(e);
            }
        }
    }
    classes
}

/// Where an edge of a conjugacy graph comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeProvenance {
    pub original: usize,
    /// `img_from = conj_from · R₋^{p₋} · conj_from⁻¹` in the original vertex.
    pub conj_from: Element,
    /// `img_to = conj_to · R₊^{p₊} · conj_to⁻¹` in the original vertex.
    pub conj_to: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyGraph {
    pub class: usize,
    pub delta: GraphOfGroups,
    /// Per vertex of `delta`: original vertex and root class.
    pub origin: Vec<Node>,
    /// Per edge of `delta`.
    pub provenance: Vec<EdgeProvenance>,
}

impl ConjugacyGraph {
    /// The root an original vertex group element represents for vertex
    /// `v` of `delta`.
    pub fn root_of(&self, v: usize) -> Element {
        root_element(&self.origin[v].key)
    }

    /// Checks in the original group that each derived attachment is the
    /// recorded conjugate of a root power.
    pub fn verify_provenance(&self, graph: &GraphOfGroups) -> bool {
        self.delta.edges().iter().zip(&self.provenance).all(|(de, pr)| {
            let oe = graph.edge(pr.original);
            [
                (Side::From, &pr.conj_from, de.img_from.exponent.clone(), oe.from, de.from),
                (Side::To, &pr.conj_to, de.img_to.exponent.clone(), oe.to, de.to),
            ]
            .into_iter()
            .all(|(side, c, p, ov, dv)| {
                let rebuilt = self.root_of(dv).pow(&p).conjugate_by(c);
                are_equal(
                    graph,
                    &PathWord::element(ov, rebuilt),
                    &PathWord::element(ov, oe.attachment(side).element.clone()),
                ) && self.origin[dv].vertex == ov
            })
        })
    }
}

fn root_power(kind: VertexKind, name: &str, p: &BigInt) -> Element {
    let sym = match kind {
        VertexKind::Dihedral => VertexSymbol::R,
        VertexKind::Free(_) => VertexSymbol::Gen(1),
    };
    element_from_letters(name, kind, &[(sym, p.clone())]).expect("root letters are valid")
}

pub fn build_conjugacy_graph(graph: &GraphOfGroups, classes: &[EdgeClass], class: usize) -> ConjugacyGraph {
    let members = &classes[class].members;
    let mut nodes: Vec<Node> = members.iter().map(|&(e, s)| edge_node(graph, e, s)).collect();
    nodes.sort();
    nodes.dedup();
    let name_of = |n: &Node| -> String {
        let base = &graph.vertex(n.vertex).name;
        let same: Vec<&Node> = nodes.iter().filter(|m| m.vertex == n.vertex).collect();
        if same.len() == 1 {
            base.clone()
        } else {
            let idx = same.iter().position(|m| *m == n).expect("node is listed");
            format!("{base}_{idx}")
        }
    };
    let kind_of = |n: &Node| match n.key {
        RootKey::Rotation => VertexKind::Dihedral,
        RootKey::Free(_) => VertexKind::Free(1),
    };

    let mut b = GraphBuilder::new();
    for n in &nodes {
        b.vertex(&name_of(n), kind_of(n));
    }
    for &e in &classes[class].edges {
        let edge = graph.edge(e);
        let (nf, nt) = (edge_node(graph, e, Side::From), edge_node(graph, e, Side::To));
        let (vf, vt) = (name_of(&nf), name_of(&nt));
        b.edge(
            &edge.name,
            &vf,
            &vt,
            root_power(kind_of(&nf), &vf, &edge.img_from.exponent),
            root_power(kind_of(&nt), &vt, &edge.img_to.exponent),
        );
    }
    let delta = b.build().expect("a class spans a connected graph of two-ended groups");
    let origin: Vec<Node> = delta
        .vertices()
        .iter()
        .map(|v| {
            nodes
                .iter()
                .find(|n| name_of(n) == v.name)
                .expect("every derived vertex comes from a node")
                .clone()
        })
        .collect();
    let provenance = delta
        .edges()
        .iter()
        .map(|de| {
            let original = graph.edge_index(&de.name).expect("derived edges keep their names");
            let oe = graph.edge(original);
            EdgeProvenance {
                original,
                conj_from: oe.img_from.conjugator.clone(),
                conj_to: oe.img_to.conjugator.clone(),
            }
        })
        .collect();
    ConjugacyGraph {
        class,
        delta,
        origin,
        provenance,
    }
}

/// The class containing edge `e`.
pub fn class_of(classes: &[EdgeClass], e: usize) -> usize {
    classes
        .iter()
        .position(|c| c.edges.contains(&e))
        .expect("every edge belongs to a class")
}

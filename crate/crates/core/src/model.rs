//! Graphs of groups with free or infinite dihedral vertex groups and
//! infinite cyclic edge groups.
//!
//! Vertices and edges are kept sorted by name, so two graphs built from the
//! same declarations in different orders are identical values. Edge `e`
//! stores one orientation: `from` is e⁻, `to` is e⁺, and the defining
//! relation is `t_e · img_to · t_e⁻¹ = img_from`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::dihedral::DihedralElement;
use crate::free_words::{primitive_root, FreeWord, RootData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Free(u32),
    Dihedral,
}

impl VertexKind {
    pub fn identity(&self) -> Element {
        match self {
            Self::Free(_) => Element::Free(FreeWord::empty()),
            Self::Dihedral => Element::Dihedral(DihedralElement::identity()),
        }
    }
}

/// An element of a vertex group in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Free(FreeWord),
    Dihedral(DihedralElement),
}

impl Element {
    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Free(a), Self::Free(b)) => Self::Free(a.mul(b)),
            (Self::Dihedral(a), Self::Dihedral(b)) => Self::Dihedral(a.mul(b)),
            _ => panic!("product of elements from different kinds of vertex group"),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::Free(a) => Self::Free(a.inverse()),
            Self::Dihedral(a) => Self::Dihedral(a.inverse()),
        }
    }

    pub fn pow(&self, n: &BigInt) -> Self {
        match self {
            Self::Free(a) => Self::Free(a.pow(n)),
            Self::Dihedral(a) => Self::Dihedral(a.pow(n)),
        }
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Self::Free(a) => a.is_empty(),
            Self::Dihedral(a) => a.is_identity(),
        }
    }

    pub fn is_infinite_order(&self) -> bool {
        match self {
            Self::Free(a) => !a.is_empty(),
            Self::Dihedral(a) => a.is_infinite_order(),
        }
    }

    pub fn letter_length(&self) -> BigInt {
        match self {
            Self::Free(a) => a.letter_length(),
            Self::Dihedral(a) => a.letter_length(),
        }
    }

    pub fn as_free(&self) -> Option<&FreeWord> {
        match self {
            Self::Free(a) => Some(a),
            Self::Dihedral(_) => None,
        }
    }

    pub fn as_dihedral(&self) -> Option<&DihedralElement> {
        match self {
            Self::Dihedral(a) => Some(a),
            Self::Free(_) => None,
        }
    }

    /// Renders the element as letters of the vertex named `vertex`, e.g.
    /// `v.1^3 v.2^-1` or `v.s v.r^2`. The identity renders as `""`.
    pub fn render(&self, vertex: &str) -> String {
        let mut parts = Vec::new();
        let mut letter = |sym: String, exp: &BigInt| {
            if exp == &BigInt::from(1) {
                parts.push(format!("{vertex}.{sym}"));
            } else {
                parts.push(format!("{vertex}.{sym}^{exp}"));
            }
        };
        match self {
            Self::Free(w) => {
                for s in w.syllables() {
                    letter(s.gen.to_string(), &s.exp);
                }
            }
            Self::Dihedral(d) => {
                if d.reflect {
                    letter("s".into(), &BigInt::from(1));
                }
                if !d.shift.is_zero() {
                    letter("r".into(), &d.shift);
                }
            }
        }
        parts.join(" ")
    }
}

/// Letter of a vertex group as written in input words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexSymbol {
    Gen(u32),
    R,
    S,
}

impl fmt::Display for VertexSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gen(i) => write!(f, "{i}"),
            Self::R => f.write_str("r"),
            Self::S => f.write_str("s"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error("free vertex {vertex} has rank 0")]
    RankZero { vertex: String },
    #[error("name {name} is declared more than once")]
    DuplicateName { name: String },
    #[error("unknown vertex {vertex}")]
    UnknownVertex { vertex: String },
    #[error("unknown edge {edge}")]
    UnknownEdge { edge: String },
    #[error("letter {letter} does not belong to the group of vertex {vertex}")]
    UnknownGenerator { vertex: String, letter: String },
    #[error("attachment of edge {edge} at vertex {vertex} has finite order")]
    FiniteOrderAttachment { edge: String, vertex: String },
    #[error("the underlying graph is not connected")]
    DisconnectedGraph,
}

/// Converts raw letters of vertex `vertex` into a normal-form element.
pub fn element_from_letters(
    vertex: &str,
    kind: VertexKind,
    letters: &[(VertexSymbol, BigInt)],
) -> Result<Element, ValidationError> {
    let bad = |sym: &VertexSymbol| ValidationError::UnknownGenerator {
        vertex: vertex.to_string(),
        letter: format!("{vertex}.{sym}"),
    };
    match kind {
        VertexKind::Free(rank) => {
            let mut w = FreeWord::empty();
            for (sym, exp) in letters {
                match sym {
                    VertexSymbol::Gen(i) if *i >= 1 && *i <= rank => {
                        w = w.mul(&FreeWord::generator(*i, exp.clone()));
                    }
                    _ => return Err(bad(sym)),
                }
            }
            Ok(Element::Free(w))
        }
        VertexKind::Dihedral => {
            let mut d = DihedralElement::identity();
            for (sym, exp) in letters {
                let x = match sym {
                    VertexSymbol::R => DihedralElement::rotation(exp.clone()),
                    VertexSymbol::S => DihedralElement::reflection(0).pow(exp),
                    VertexSymbol::Gen(_) => return Err(bad(sym)),
                };
                d = d.mul(&x);
            }
            Ok(Element::Dihedral(d))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub kind: VertexKind,
}

/// Canonical root class of an attachment inside its vertex group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootKey {
    Free(FreeWord),
    /// The rotation subgroup of a dihedral vertex; all infinite-order
    /// elements there are commensurable.
    Rotation,
}

/// An attachment image together with its decomposition
/// `element = conjugator · root^exponent · conjugator⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub element: Element,
    pub key: RootKey,
    pub conjugator: Element,
    pub exponent: BigInt,
}

impl Attachment {
    fn new(element: Element) -> Option<Self> {
        match &element {
            Element::Free(w) => {
                let RootData {
                    conjugator,
                    root,
                    exponent,
                } = primitive_root(w).ok()?;
                Some(Self {
                    key: RootKey::Free(root),
                    conjugator: Element::Free(conjugator),
                    exponent,
                    element,
                })
            }
            Element::Dihedral(d) if d.is_infinite_order() => Some(Self {
                key: RootKey::Rotation,
                conjugator: Element::Dihedral(DihedralElement::identity()),
                exponent: d.shift.clone(),
                element,
            }),
            Element::Dihedral(_) => None,
        }
    }

    /// The canonical root as an element (`r` for dihedral vertices).
    pub fn root_element(&self) -> Element {
        root_element(&self.key)
    }
}

pub fn root_element(key: &RootKey) -> Element {
    match key {
        RootKey::Free(w) => Element::Free(w.clone()),
        RootKey::Rotation => Element::Dihedral(DihedralElement::rotation(1)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// e⁻
    pub from: usize,
    /// e⁺
    pub to: usize,
    /// φ_{e⁻}(c), in the group of `from`
    pub img_from: Attachment,
    /// φ_{e⁺}(c), in the group of `to`
    pub img_to: Attachment,
}

impl Edge {
    pub fn attachment(&self, side: Side) -> &Attachment {
        match side {
            Side::From => &self.img_from,
            Side::To => &self.img_to,
        }
    }

    pub fn endpoint(&self, side: Side) -> usize {
        match side {
            Side::From => self.from,
            Side::To => self.to,
        }
    }
}

/// Which end of an edge an attachment occurrence sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    From,
    To,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Self::From => Self::To,
            Self::To => Self::From,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::From => "source",
            Self::To => "target",
        }
    }
}

/// One traversal of an edge: `forward` goes from e⁻ to e⁺ and reads `t_e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphOfGroups {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    tree: Vec<bool>,
    // path from vertex 0 to each vertex inside the spanning tree
    tree_paths: Vec<Vec<Step>>,
}

impl GraphOfGroups {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices
            .binary_search_by(|v| v.name.as_str().cmp(name))
            .ok()
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.name.as_str().cmp(name)).ok()
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.tree[e]
    }

    /// Names of the spanning-tree edges.
    pub fn spanning_tree(&self) -> BTreeSet<String> {
        self.edges
            .iter()
            .zip(&self.tree)
            .filter(|(_, &t)| t)
            .map(|(e, _)| e.name.clone())
            .collect()
    }

    /// Steps through the spanning tree from the least vertex to `v`.
    pub fn tree_path_from_base(&self, v: usize) -> &[Step] {
        &self.tree_paths[v]
    }

    /// Steps through the spanning tree from `u` to `v`.
    pub fn tree_path(&self, u: usize, v: usize) -> Vec<Step> {
        let (pu, pv) = (&self.tree_paths[u], &self.tree_paths[v]);
        let common = pu.iter().zip(pv).take_while(|(a, b)| a == b).count();
        let mut out: Vec<Step> = pu[common..]
            .iter()
            .rev()
            .map(|s| Step {
                edge: s.edge,
                forward: !s.forward,
            })
            .collect();
        out.extend_from_slice(&pv[common..]);
        out
    }

    /// Edges incident to `v`, in name order, each with the sides at `v`.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, Side)> + '_ {
        self.edges.iter().enumerate().flat_map(move |(i, e)| {
            let mut sides = Vec::with_capacity(2);
            if e.from == v {
                sides.push((i, Side::From));
            }
            if e.to == v {
                sides.push((i, Side::To));
            }
            sides
        })
    }

    /// The subgraph of groups spanned by the named vertices and edges.
    pub fn subgraph(
        &self,
        vertices: &BTreeSet<String>,
        edges: &BTreeSet<String>,
    ) -> Result<GraphOfGroups, ValidationError> {
        let mut b = GraphBuilder::new();
        for name in vertices {
            let i = self
                .vertex_index(name)
                .ok_or_else(|| ValidationError::UnknownVertex { vertex: name.clone() })?;
            b.vertex(name, self.vertices[i].kind);
        }
        for name in edges {
            let i = self
                .edge_index(name)
                .ok_or_else(|| ValidationError::UnknownEdge { edge: name.clone() })?;
            let e = &self.edges[i];
            b.edge(
                name,
                &self.vertices[e.from].name,
                &self.vertices[e.to].name,
                e.img_from.element.clone(),
                e.img_to.element.clone(),
            );
        }
        b.build()
    }

    /// The graph without edge `e`, restricted to the component of `keep`.
    pub fn without_edge_component(&self, e: usize, keep: usize) -> GraphOfGroups {
        let mut seen = vec![false; self.vertices.len()];
        seen[keep] = true;
        let mut queue = VecDeque::from([keep]);
        while let Some(u) = queue.pop_front() {
            for (i, side) in self.incident(u) {
                if i == e {
                    continue;
                }
                let w = self.edges[i].endpoint(side.other());
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let vs: BTreeSet<String> = (0..self.vertices.len())
            .filter(|&v| seen[v])
            .map(|v| self.vertices[v].name.clone())
            .collect();
        let es: BTreeSet<String> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, x)| *i != e && seen[x.from])
            .map(|(_, x)| x.name.clone())
            .collect();
        self.subgraph(&vs, &es)
            .expect("a connected component of a valid graph is valid")
    }

    /// Checks every model invariant on an already built graph.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut b = GraphBuilder::new();
        for v in &self.vertices {
            b.vertex(&v.name, v.kind);
        }
        for e in &self.edges {
            b.edge(
                &e.name,
                &self.vertices[e.from].name,
                &self.vertices[e.to].name,
                e.img_from.element.clone(),
                e.img_to.element.clone(),
            );
        }
        let rebuilt = b.build()?;
        debug_assert_eq!(&rebuilt, self);
        Ok(())
    }
}

/// Accumulates declarations and validates them into a [`GraphOfGroups`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<(String, VertexKind)>,
    edges: Vec<(String, String, String, Element, Element)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: &str, kind: VertexKind) -> &mut Self {
        self.vertices.push((name.to_string(), kind));
        self
    }

    pub fn edge(
        &mut self,
        name: &str,
        from: &str,
        to: &str,
        img_from: Element,
        img_to: Element,
    ) -> &mut Self {
        self.edges.push((
            name.to_string(),
            from.to_string(),
            to.to_string(),
            img_from,
            img_to,
        ));
        self
    }

    pub fn build(&self) -> Result<GraphOfGroups, ValidationError> {
        if self.vertices.is_empty() {
            return Err(ValidationError::EmptyGraph);
        }
        let mut kinds: BTreeMap<&str, VertexKind> = BTreeMap::new();
        for (name, kind) in &self.vertices {
            if *kind == VertexKind::Free(0) {
                return Err(ValidationError::RankZero { vertex: name.clone() });
            }
            if kinds.insert(name, *kind).is_some() {
                return Err(ValidationError::DuplicateName { name: name.clone() });
            }
        }
        let vertices: Vec<Vertex> = kinds
            .iter()
            .map(|(name, kind)| Vertex {
                name: name.to_string(),
                kind: *kind,
            })
            .collect();
        let index = |name: &str| {
            vertices
                .binary_search_by(|v| v.name.as_str().cmp(name))
                .map_err(|_| ValidationError::UnknownVertex {
                    vertex: name.to_string(),
                })
        };

        let mut names = BTreeSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (name, from, to, img_from, img_to) in &self.edges {
            if !names.insert(name.as_str()) {
                return Err(ValidationError::DuplicateName { name: name.clone() });
            }
            let (f, t) = (index(from)?, index(to)?);
            let attach = |v: usize, el: &Element| {
                check_kind(&vertices[v], el)?;
                Attachment::new(el.clone()).ok_or_else(|| ValidationError::FiniteOrderAttachment {
                    edge: name.clone(),
                    vertex: vertices[v].name.clone(),
                })
            };
            edges.push(Edge {
                name: name.clone(),
                from: f,
                to: t,
                img_from: attach(f, img_from)?,
                img_to: attach(t, img_to)?,
            });
        }
        edges.sort_by(|a, b| a.name.cmp(&b.name));

        let (tree, tree_paths) = bfs_tree(vertices.len(), &edges)?;
        Ok(GraphOfGroups {
            vertices,
            edges,
            tree,
            tree_paths,
        })
    }
}

fn check_kind(v: &Vertex, el: &Element) -> Result<(), ValidationError> {
    let ok = match (v.kind, el) {
        (VertexKind::Free(rank), Element::Free(w)) => w.max_generator() <= rank,
        (VertexKind::Dihedral, Element::Dihedral(_)) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ValidationError::UnknownGenerator {
            vertex: v.name.clone(),
            letter: el.render(&v.name),
        })
    }
}

// BFS from vertex 0 visiting incident edges in name order
fn bfs_tree(n: usize, edges: &[Edge]) -> Result<(Vec<bool>, Vec<Vec<Step>>), ValidationError> {
    let mut tree = vec![false; edges.len()];
    let mut paths: Vec<Option<Vec<Step>>> = vec![None; n];
    paths[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for (i, e) in edges.iter().enumerate() {
            let (w, forward) = if e.from == u {
                (e.to, true)
            } else if e.to == u {
                (e.from, false)
            } else {
                continue;
            };
            if paths[w].is_none() {
                let mut p = paths[u].clone().expect("dequeued vertices are reached");
                p.push(Step { edge: i, forward });
                paths[w] = Some(p);
                tree[i] = true;
                queue.push_back(w);
            }
        }
    }
    let paths = paths
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(ValidationError::DisconnectedGraph)?;
    Ok((tree, paths))
}

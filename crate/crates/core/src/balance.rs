//! Balancedness through a groupoid of root classes with rational weights.
//!
//! A node is a vertex together with a commensurability class of cyclic
//! subgroups there, represented by a canonical root `R`. Edge `e` with
//! `img_to = c₊ R₊^{p₊} c₊⁻¹` and `img_from = c₋ R₋^{p₋} c₋⁻¹` gives the arc
//! `(e⁺, R₊) → (e⁻, R₋)` of weight `p₋/p₊`: conjugating by `c₋⁻¹ t_e c₊`
//! sends `R₊^{p₊n}` to `R₋^{p₋n}`. Dihedral vertices add a self-arc of
//! weight −1 for `s r s = r⁻¹`. Walks compose conjugators and multiply
//! weights, so a closed walk of weight ±1 is harmless while any other
//! closed walk relates `a^i` and `a^j` with `|i| ≠ |j|`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::model::{GraphOfGroups, RootKey, Side, VertexKind};
use crate::search::{power_exponent, search_conjugates, Bounds, SearchError};
use crate::word::PathWord;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub vertex: usize,
    pub key: RootKey,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcKind {
    Edge(usize),
    SignFlip(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub kind: ArcKind,
    pub weight: BigRational,
}

/// One traversal of an arc; `reversed` walks it against its direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleStep {
    pub kind: ArcKind,
    pub reversed: bool,
}

/// A closed walk in the groupoid with the product of its weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnbalancedCycle {
    pub steps: Vec<CycleStep>,
    pub modulus: BigRational,
}

impl UnbalancedCycle {
    pub fn render(&self, graph: &GraphOfGroups) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| {
                let name = match s.kind {
                    ArcKind::Edge(e) => graph.edge(e).name.clone(),
                    ArcKind::SignFlip(v) => format!("{}.s", graph.vertex(v).name),
                };
                if s.reversed {
                    format!("{name}^-1")
                } else {
                    name
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalanceVerdict {
    Balanced,
    Unbalanced(UnbalancedCycle),
}

impl BalanceVerdict {
    pub fn is_balanced(&self) -> bool {
        matches!(self, Self::Balanced)
    }
}

impl fmt::Display for BalanceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Balanced => f.write_str("Balanced"),
            Self::Unbalanced(_) => f.write_str("Unbalanced"),
        }
    }
}

/// Node of an edge end.
pub fn edge_node(graph: &GraphOfGroups, e: usize, side: Side) -> Node {
    let edge = graph.edge(e);
    Node {
        vertex: edge.endpoint(side),
        key: edge.attachment(side).key.clone(),
    }
}

/// Endpoints and weight of an arc kind, independent of any groupoid.
pub fn arc_data(graph: &GraphOfGroups, kind: ArcKind) -> (Node, Node, BigRational) {
    match kind {
        ArcKind::Edge(e) => {
            let edge = graph.edge(e);
            (
                edge_node(graph, e, Side::To),
                edge_node(graph, e, Side::From),
                BigRational::new(edge.img_from.exponent.clone(), edge.img_to.exponent.clone()),
            )
        }
        ArcKind::SignFlip(v) => {
            let n = Node {
                vertex: v,
                key: RootKey::Rotation,
            };
            (n.clone(), n, -BigRational::one())
        }
    }
}

pub fn step_weight(graph: &GraphOfGroups, s: CycleStep) -> BigRational {
    let w = arc_data(graph, s.kind).2;
    if s.reversed {
        w.recip()
    } else {
        w
    }
}

#[derive(Clone, Debug)]
pub struct Groupoid {
    pub nodes: Vec<Node>,
    pub arcs: Vec<Arc>,
    index: BTreeMap<Node, usize>,
    adjacency: Vec<Vec<(usize, bool)>>,
}

impl Groupoid {
    pub fn node_index(&self, n: &Node) -> Option<usize> {
        self.index.get(n).copied()
    }
}

/// The groupoid of all attachments, skipping the arc of `skip`. The nodes
/// of the skipped edge are still present.
pub fn build_groupoid_without(graph: &GraphOfGroups, skip: Option<usize>) -> Groupoid {
    let mut index = BTreeMap::new();
    for e in 0..graph.edges().len() {
        for side in [Side::From, Side::To] {
            index.entry(edge_node(graph, e, side)).or_insert(0);
        }
    }
    let nodes: Vec<Node> = index.keys().cloned().collect();
    for (i, n) in nodes.iter().enumerate() {
        index.insert(n.clone(), i);
    }
    let mut kinds: Vec<ArcKind> = (0..graph.edges().len())
        .filter(|&e| Some(e) != skip)
        .map(ArcKind::Edge)
        .collect();
    kinds.extend(
        nodes
            .iter()
            .filter(|n| graph.vertex(n.vertex).kind == VertexKind::Dihedral)
            .map(|n| ArcKind::SignFlip(n.vertex)),
    );
    let arcs: Vec<Arc> = kinds
        .into_iter()
        .map(|kind| {
            let (a, b, weight) = arc_data(graph, kind);
            Arc {
                from: index[&a],
                to: index[&b],
                kind,
                weight,
            }
        })
        .collect();
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for (i, a) in arcs.iter().enumerate() {
        adjacency[a.from].push((i, false));
        adjacency[a.to].push((i, true));
    }
    Groupoid {
        nodes,
        arcs,
        index,
        adjacency,
    }
}

pub fn build_groupoid(graph: &GraphOfGroups) -> Groupoid {
    build_groupoid_without(graph, None)
}

/// Spanning forest of a groupoid with signed rational potentials:
/// `pot(to) = pot(from) · weight` along tree arcs, `1` at each root.
#[derive(Clone, Debug)]
pub struct Potentials {
    pub component: Vec<usize>,
    pub potential: Vec<BigRational>,
    parent: Vec<Option<(usize, bool)>>,
    depth: Vec<usize>,
    pub tree_arc: Vec<bool>,
}

impl Potentials {
    pub fn new(g: &Groupoid) -> Self {
        let n = g.nodes.len();
        let mut component = vec![usize::MAX; n];
        let mut potential = vec![BigRational::one(); n];
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut tree_arc = vec![false; g.arcs.len()];
        let mut count = 0;
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            component[root] = count;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(a, reversed) in &g.adjacency[u] {
                    let arc = &g.arcs[a];
                    let (w, weight) = if reversed {
                        (arc.from, arc.weight.recip())
                    } else {
                        (arc.to, arc.weight.clone())
                    };
                    if component[w] == usize::MAX {
                        component[w] = count;
                        potential[w] = &potential[u] * weight;
                        parent[w] = Some((a, reversed));
                        depth[w] = depth[u] + 1;
                        tree_arc[a] = true;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        Self {
            component,
            potential,
            parent,
            depth,
            tree_arc,
        }
    }

    /// Tree walk from `u` to `v`; both must lie in one component.
    pub fn path(&self, g: &Groupoid, mut u: usize, mut v: usize) -> Vec<CycleStep> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[u] > self.depth[v] {
            let (a, rev) = self.parent[u].expect("non-root has a parent");
            up.push(CycleStep {
                kind: g.arcs[a].kind,
                reversed: !rev,
            });
            u = other_end(g, a, rev);
        }
        while self.depth[v] > self.depth[u] {
            let (a, rev) = self.parent[v].expect("non-root has a parent");
            down.push(CycleStep {
                kind: g.arcs[a].kind,
                reversed: rev,
            });
            v = other_end(g, a, rev);
        }
        while u != v {
            let (a, rev) = self.parent[u].expect("non-root has a parent");
            up.push(CycleStep {
                kind: g.arcs[a].kind,
                reversed: !rev,
            });
            u = other_end(g, a, rev);
            let (b, rev_b) = self.parent[v].expect("non-root has a parent");
            down.push(CycleStep {
                kind: g.arcs[b].kind,
                reversed: rev_b,
            });
            v = other_end(g, b, rev_b);
        }
        down.reverse();
        up.extend(down);
        up
    }

    /// Non-tree arcs whose weight disagrees with the potentials in
    /// absolute value, in arc order.
    pub fn violations<'a>(&'a self, g: &'a Groupoid) -> impl Iterator<Item = usize> + 'a {
        (0..g.arcs.len()).filter(move |&a| {
            let arc = &g.arcs[a];
            !self.tree_arc[a]
                && (&self.potential[arc.from] * &arc.weight).abs() != self.potential[arc.to].abs()
        })
    }

    /// The closed walk made of arc `a` followed by the tree path back.
    pub fn fundamental_cycle(&self, g: &Groupoid, graph: &GraphOfGroups, a: usize) -> UnbalancedCycle {
        let arc = &g.arcs[a];
        let mut steps = vec![CycleStep {
            kind: arc.kind,
            reversed: false,
        }];
        steps.extend(self.path(g, arc.to, arc.from));
        cycle(graph, steps)
    }
}

// the node a tree arc leads back to from its child end
fn other_end(g: &Groupoid, a: usize, reversed: bool) -> usize {
    if reversed {
        g.arcs[a].to
    } else {
        g.arcs[a].from
    }
}

pub fn cycle(graph: &GraphOfGroups, steps: Vec<CycleStep>) -> UnbalancedCycle {
    let modulus = steps
        .iter()
        .fold(BigRational::one(), |acc, s| acc * step_weight(graph, *s));
    UnbalancedCycle { steps, modulus }
}

pub fn group_balanced(graph: &GraphOfGroups) -> BalanceVerdict {
    let g = build_groupoid(graph);
    let p = Potentials::new(&g);
    let first = p.violations(&g).next();
    match first {
        None => BalanceVerdict::Balanced,
        Some(a) => BalanceVerdict::Unbalanced(p.fundamental_cycle(&g, graph, a)),
    }
}

/// Balancedness of edge `e`: whether conjugation in the graph without `e`
/// can relate `img_to^i` to `img_from^j` with `|i| ≠ |j|`.
pub fn edge_balanced(graph: &GraphOfGroups, e: usize) -> BalanceVerdict {
    let g = build_groupoid_without(graph, Some(e));
    let p = Potentials::new(&g);
    let plus = g.index[&edge_node(graph, e, Side::To)];
    let minus = g.index[&edge_node(graph, e, Side::From)];
    if p.component[plus] != p.component[minus] {
        return BalanceVerdict::Balanced;
    }
    let mut steps = vec![CycleStep {
        kind: ArcKind::Edge(e),
        reversed: false,
    }];
    steps.extend(p.path(&g, minus, plus));
    let closing = cycle(graph, steps);
    if closing.modulus.abs() != BigRational::one() {
        return BalanceVerdict::Unbalanced(closing);
    }
    let bad = p
        .violations(&g)
        .find(|&a| p.component[g.arcs[a].from] == p.component[plus]);
    match bad {
        None => BalanceVerdict::Balanced,
        Some(a) => {
            // detour around the bad cycle on the way back to e⁺
            let inner = p.fundamental_cycle(&g, graph, a);
            let y = g.arcs[a].from;
            let mut steps = vec![CycleStep {
                kind: ArcKind::Edge(e),
                reversed: false,
            }];
            steps.extend(p.path(&g, minus, y));
            steps.extend(inner.steps);
            steps.extend(p.path(&g, y, plus));
            BalanceVerdict::Unbalanced(cycle(graph, steps))
        }
    }
}

/// Result of the exhaustive search for unbalancing conjugators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// The endpoints of `e` fall into different components once `e` is
    /// removed.
    VacuouslyBalanced,
    /// `h · img_to^i · h⁻¹ = img_from^j` in `subgraph`, with `|i| ≠ |j|`.
    Unbalanced {
        subgraph: GraphOfGroups,
        conjugator: PathWord,
        i: BigInt,
        j: BigInt,
    },
    /// Nothing found within the bounds; inconclusive.
    BalancedWithinBounds,
}

/// Searches the component of `e⁺` in the graph without `e` for `h, i, j`
/// with `h img_to^i h⁻¹ = img_from^j`, `1 ≤ i ≤ max_exp`,
/// `1 ≤ |j| ≤ max_exp` and `i ≠ |j|`.
pub fn brute_force_balance_oracle(
    graph: &GraphOfGroups,
    e: usize,
    bounds: Bounds,
) -> Result<OracleVerdict, SearchError> {
    let edge = graph.edge(e);
    let sub = graph.without_edge_component(e, edge.to);
    let (Some(to), Some(from)) = (
        sub.vertex_index(&graph.vertex(edge.to).name),
        sub.vertex_index(&graph.vertex(edge.from).name),
    ) else {
        return Ok(OracleVerdict::VacuouslyBalanced);
    };
    let x = &edge.img_to.element;
    let y = &edge.img_from.element;
    let max = BigInt::from(bounds.max_exp);
    for i in 1..=bounds.max_exp {
        let i = BigInt::from(i);
        let xi = x.pow(&i);
        let mut hit = None;
        let found = search_conjugates(&sub, to, &xi, bounds, |v, z| {
            if v != from {
                return false;
            }
            match power_exponent(y, z) {
                Some(j) if j.abs() <= max && j.abs() != i && !j.is_zero() => {
                    hit = Some(j);
                    true
                }
                _ => false,
            }
        })?;
        if let Some((h, _, _)) = found {
            return Ok(OracleVerdict::Unbalanced {
                subgraph: sub,
                conjugator: h,
                i,
                j: hit.expect("accepted states record their exponent"),
            });
        }
    }
    Ok(OracleVerdict::BalancedWithinBounds)
}

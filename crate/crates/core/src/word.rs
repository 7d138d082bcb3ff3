//! Path words and the word problem in the fundamental group.
//!
//! A [`PathWord`] is `g₀ t₁ g₁ … tₙ gₙ` where each `tᵢ` is a stable letter
//! `t_e^{±1}` and each `gᵢ` is a normal-form element of the vertex group the
//! path currently sits in. `t_e` moves from e⁻ to e⁺. Words may be open
//! (ending at another vertex than they start); since tree letters are
//! trivial, an open word still names a group element, and [`is_trivial`]
//! closes it through the spanning tree before deciding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::free_words::as_power_of;
use crate::model::{
    element_from_letters, Element, GraphOfGroups, Side, Step, ValidationError, VertexSymbol,
};

/// A letter of an unprocessed input word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawLetter {
    Vertex {
        vertex: String,
        symbol: VertexSymbol,
        exp: BigInt,
    },
    Stable {
        edge: String,
        exp: BigInt,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathWord {
    start: usize,
    head: Element,
    tail: Vec<(Step, Element)>,
}

impl PathWord {
    pub fn identity(graph: &GraphOfGroups, v: usize) -> Self {
        Self::element(v, graph.vertex(v).kind.identity())
    }

    pub fn element(v: usize, g: Element) -> Self {
        Self {
            start: v,
            head: g,
            tail: Vec::new(),
        }
    }

    /// The single stable letter of `step`.
    pub fn letter(graph: &GraphOfGroups, step: Step) -> Self {
        let e = graph.edge(step.edge);
        let (a, b) = if step.forward {
            (e.from, e.to)
        } else {
            (e.to, e.from)
        };
        Self {
            start: a,
            head: graph.vertex(a).kind.identity(),
            tail: vec![(step, graph.vertex(b).kind.identity())],
        }
    }

    /// Letters of `steps` in order, with trivial syllables between them.
    pub fn path(graph: &GraphOfGroups, start: usize, steps: &[Step]) -> Self {
        let mut w = Self::identity(graph, start);
        for &s in steps {
            w = w.mul(graph, &Self::letter(graph, s));
        }
        w
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self, graph: &GraphOfGroups) -> usize {
        match self.tail.last() {
            None => self.start,
            Some((s, _)) => step_target(graph, *s),
        }
    }

    pub fn head(&self) -> &Element {
        &self.head
    }

    pub fn tail(&self) -> &[(Step, Element)] {
        &self.tail
    }

    pub fn num_letters(&self) -> usize {
        self.tail.len()
    }

    /// Vertex-group elements and stable letters count as one; vertex
    /// elements contribute their letter length. Tree letters are free.
    pub fn letter_length(&self, graph: &GraphOfGroups) -> BigInt {
        let mut n = self.head.letter_length();
        for (s, g) in &self.tail {
            if !graph.is_tree_edge(s.edge) {
                n += 1;
            }
            n += g.letter_length();
        }
        n
    }

    fn last_element_mut(&mut self) -> &mut Element {
        match self.tail.last_mut() {
            Some((_, g)) => g,
            None => &mut self.head,
        }
    }

    /// Concatenation, joining through the spanning tree when `self` does
    /// not end where `other` starts.
    pub fn mul(&self, graph: &GraphOfGroups, other: &Self) -> Self {
        let mut out = self.clone();
        let end = self.end(graph);
        if end != other.start {
            for s in graph.tree_path(end, other.start) {
                out.tail.push((s, graph.vertex(step_target(graph, s)).kind.identity()));
            }
        }
        let last = out.last_element_mut();
        *last = last.mul(&other.head);
        out.tail.extend(other.tail.iter().cloned());
        out
    }

    pub fn inverse(&self, graph: &GraphOfGroups) -> Self {
        let mut elements: Vec<&Element> = vec![&self.head];
        elements.extend(self.tail.iter().map(|(_, g)| g));
        let head = elements.pop().expect("nonempty").inverse();
        let tail = self
            .tail
            .iter()
            .rev()
            .zip(elements.into_iter().rev())
            .map(|((s, _), g)| {
                (
                    Step {
                        edge: s.edge,
                        forward: !s.forward,
                    },
                    g.inverse(),
                )
            })
            .collect();
        Self {
            start: self.end(graph),
            head,
            tail,
        }
    }

    /// `self^n` by repeated concatenation.
    pub fn pow(&self, graph: &GraphOfGroups, n: i64) -> Self {
        let base = if n < 0 {
            self.inverse(graph)
        } else {
            self.clone()
        };
        let mut out = Self::identity(graph, self.start);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(graph, &base);
        }
        out
    }

    pub fn conjugate_by(&self, graph: &GraphOfGroups, h: &Self) -> Self {
        h.mul(graph, self).mul(graph, &h.inverse(graph))
    }

    /// Closes the word into a loop at the least vertex through the tree.
    pub fn closed(&self, graph: &GraphOfGroups) -> Self {
        let pre = Self::path(graph, 0, graph.tree_path_from_base(self.start));
        let post = Self::identity(graph, 0);
        pre.mul(graph, self).mul(graph, &post)
    }

    /// Rendering with tree letters erased and letter runs merged, e.g.
    /// `e.t^2 v.1^3`; the identity renders as `""`.
    pub fn render(&self, graph: &GraphOfGroups) -> String {
        self.render_with(graph, false)
    }

    /// Rendering that keeps tree letters.
    pub fn render_full(&self, graph: &GraphOfGroups) -> String {
        self.render_with(graph, true)
    }

    fn render_with(&self, graph: &GraphOfGroups, keep_tree: bool) -> String {
        let mut parts: Vec<String> = Vec::new();
        let push_el = |parts: &mut Vec<String>, v: usize, g: &Element| {
            if !g.is_identity() {
                parts.push(g.render(&graph.vertex(v).name));
            }
        };
        push_el(&mut parts, self.start, &self.head);
        let mut run: Option<(usize, i64)> = None;
        let flush = |parts: &mut Vec<String>, run: &mut Option<(usize, i64)>| {
            if let Some((e, k)) = run.take() {
                if k == 0 {
                    return;
                }
                let name = &graph.edge(e).name;
                if k == 1 {
                    parts.push(format!("{name}.t"));
                } else {
                    parts.push(format!("{name}.t^{k}"));
                }
            }
        };
        for (s, g) in &self.tail {
            if keep_tree || !graph.is_tree_edge(s.edge) {
                let d = if s.forward { 1 } else { -1 };
                match &mut run {
                    Some((e, k)) if *e == s.edge && k.signum() == d => *k += d,
                    _ => {
                        flush(&mut parts, &mut run);
                        run = Some((s.edge, d));
                    }
                }
            }
            if !g.is_identity() {
                flush(&mut parts, &mut run);
                push_el(&mut parts, step_target(graph, *s), g);
            }
        }
        flush(&mut parts, &mut run);
        parts.join(" ")
    }
}

pub fn step_target(graph: &GraphOfGroups, s: Step) -> usize {
    let e = graph.edge(s.edge);
    if s.forward {
        e.to
    } else {
        e.from
    }
}

pub fn step_source(graph: &GraphOfGroups, s: Step) -> usize {
    let e = graph.edge(s.edge);
    if s.forward {
        e.from
    } else {
        e.to
    }
}

/// Builds the path form of a raw word starting at vertex `base`, inserting
/// tree letters wherever consecutive letters live at different vertices.
pub fn to_path_form(
    graph: &GraphOfGroups,
    raw: &[RawLetter],
    base: usize,
) -> Result<PathWord, ValidationError> {
    let mut w = PathWord::identity(graph, base);
    for letter in raw {
        match letter {
            RawLetter::Vertex {
                vertex,
                symbol,
                exp,
            } => {
                let v = graph
                    .vertex_index(vertex)
                    .ok_or_else(|| ValidationError::UnknownVertex {
                        vertex: vertex.clone(),
                    })?;
                let g = element_from_letters(vertex, graph.vertex(v).kind, &[(*symbol, exp.clone())])?;
                w = w.mul(graph, &PathWord::element(v, g));
            }
            RawLetter::Stable { edge, exp } => {
                let e = graph
                    .edge_index(edge)
                    .ok_or_else(|| ValidationError::UnknownEdge { edge: edge.clone() })?;
                let n = exp
                    .abs()
                    .to_usize()
                    .expect("stable letter exponent fits in memory");
                let step = Step {
                    edge: e,
                    forward: exp.is_positive(),
                };
                for _ in 0..n {
                    w = w.mul(graph, &PathWord::letter(graph, step));
                }
            }
        }
    }
    Ok(w)
}

/// Conjugates a word by the tree path from `new_base` to its start.
pub fn rebase(graph: &GraphOfGroups, w: &PathWord, new_base: usize) -> PathWord {
    let p = PathWord::path(graph, new_base, &graph.tree_path(new_base, w.start));
    w.conjugate_by(graph, &p)
}

/// `k` with `g = (attachment of e on side)^k`, if any.
pub fn pinch_membership(graph: &GraphOfGroups, edge: usize, side: Side, g: &Element) -> Option<BigInt> {
    let a = graph.edge(edge).attachment(side);
    if g.is_identity() {
        return Some(BigInt::zero());
    }
    match (g, &a.conjugator) {
        (Element::Free(x), Element::Free(c)) => {
            let crate::model::RootKey::Free(root) = &a.key else {
                return None;
            };
            let inner = c.inverse().mul(x).mul(c);
            let n = as_power_of(&inner, root)?;
            let (k, r) = n.div_rem(&a.exponent);
            r.is_zero().then_some(k)
        }
        (Element::Dihedral(d), _) => {
            if d.reflect {
                return None;
            }
            let (k, r) = d.shift.div_rem(&a.exponent);
            r.is_zero().then_some(k)
        }
        _ => None,
    }
}

/// Britton reduction: pinches `t_e g t_e⁻¹` (g in the e⁺ image) and
/// `t_e⁻¹ g t_e` (g in the e⁻ image) are removed, leftmost first.
pub fn britton_reduce(graph: &GraphOfGroups, w: &PathWord) -> PathWord {
    let mut head = w.head.clone();
    let mut stack: Vec<(Step, Element)> = Vec::with_capacity(w.tail.len());
    for (step, g) in &w.tail {
        stack.push((*step, g.clone()));
        while stack.len() >= 2 {
            let n = stack.len();
            let (s1, g1) = (&stack[n - 2].0, &stack[n - 2].1);
            let s2 = &stack[n - 1].0;
            if s1.edge != s2.edge || s1.forward == s2.forward {
                break;
            }
            // t_e g t_e⁻¹ sits at e⁺, t_e⁻¹ g t_e at e⁻
            let (inside, outside) = if s1.forward {
                (Side::To, Side::From)
            } else {
                (Side::From, Side::To)
            };
            let Some(k) = pinch_membership(graph, s1.edge, inside, g1) else {
                break;
            };
            let replaced = graph.edge(s1.edge).attachment(outside).element.pow(&k);
            let (_, g2) = stack.pop().expect("two entries");
            stack.pop();
            let prev = match stack.last_mut() {
                Some((_, g)) => g,
                None => &mut head,
            };
            *prev = prev.mul(&replaced).mul(&g2);
        }
    }
    PathWord {
        start: w.start,
        head,
        tail: stack,
    }
}

pub fn is_trivial(graph: &GraphOfGroups, w: &PathWord) -> bool {
    let r = britton_reduce(graph, &w.closed(graph));
    r.tail.is_empty() && r.head.is_identity()
}

pub fn are_equal(graph: &GraphOfGroups, u: &PathWord, v: &PathWord) -> bool {
    is_trivial(graph, &u.mul(graph, &v.inverse(graph)))
}

/// Whether a reduced word still contains a pinch (used by tests).
pub fn has_pinch(graph: &GraphOfGroups, w: &PathWord) -> bool {
    w.tail.windows(2).any(|pair| {
        let ((s1, g1), (s2, _)) = (&pair[0], &pair[1]);
        s1.edge == s2.edge
            && s1.forward != s2.forward
            && pinch_membership(graph, s1.edge, if s1.forward { Side::To } else { Side::From }, g1)
                .is_some()
    })
}

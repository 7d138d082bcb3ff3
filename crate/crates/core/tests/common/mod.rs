//! Test-side oracles that do not go through the library's reduction code.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::io::Write;

use gog_core::dihedral::DihedralElement;
use gog_core::model::{Element, GraphOfGroups, VertexKind, VertexSymbol};
use gog_core::text::{parse, serialize};
use gog_core::word::RawLetter;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

/// Writes past the test harness capture so the line shows up in logs.
pub fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

// ---------------------------------------------------------------------------
// presentation of π₁ and a rewriting search for the identity

/// Letters are `±(id + 1)` for generator ids.
pub type Letter = i32;

pub struct Presentation {
    pub relators: Vec<Vec<Letter>>,
    rules: Vec<(Vec<Letter>, Vec<Letter>)>,
    near_identity: HashSet<Vec<Letter>>,
}

fn gen_id(graph: &GraphOfGroups, v: usize, sym: VertexSymbol) -> i32 {
    // vertex generators first, then one stable letter per edge
    let mut id = 0;
    for (i, vx) in graph.vertices().iter().enumerate() {
        let count = match vx.kind {
            VertexKind::Free(r) => r as i32,
            VertexKind::Dihedral => 2,
        };
        if i == v {
            return id
                + match sym {
                    VertexSymbol::Gen(k) => k as i32 - 1,
                    VertexSymbol::R => 0,
                    VertexSymbol::S => 1,
                };
        }
        id += count;
    }
    unreachable!("vertex in range")
}

fn stable_id(graph: &GraphOfGroups, e: usize) -> i32 {
    let base: i32 = graph
        .vertices()
        .iter()
        .map(|v| match v.kind {
            VertexKind::Free(r) => r as i32,
            VertexKind::Dihedral => 2,
        })
        .sum();
    base + e as i32
}

fn power(id: i32, exp: i64) -> Vec<Letter> {
    let l = if exp > 0 { id + 1 } else { -(id + 1) };
    vec![l; exp.unsigned_abs() as usize]
}

fn element_letters(graph: &GraphOfGroups, v: usize, g: &Element) -> Vec<Letter> {
    match g {
        Element::Free(w) => w
            .syllables()
            .iter()
            .flat_map(|s| power(gen_id(graph, v, VertexSymbol::Gen(s.gen)), s.exp.to_i64().unwrap()))
            .collect(),
        Element::Dihedral(d) => {
            let mut out = Vec::new();
            if d.reflect {
                out.push(gen_id(graph, v, VertexSymbol::S) + 1);
            }
            out.extend(power(gen_id(graph, v, VertexSymbol::R), d.shift.to_i64().unwrap()));
            out
        }
    }
}

pub fn inverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| -l).collect()
}

pub fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Presentation {
    pub fn new(graph: &GraphOfGroups) -> Self {
        let mut relators = Vec::new();
        for (v, vx) in graph.vertices().iter().enumerate() {
            if vx.kind == VertexKind::Dihedral {
                let s = gen_id(graph, v, VertexSymbol::S) + 1;
                let r = gen_id(graph, v, VertexSymbol::R) + 1;
                relators.push(vec![s, s]);
                relators.push(vec![s, r, s, r]);
            }
        }
        for (i, e) in graph.edges().iter().enumerate() {
            let t = stable_id(graph, i) + 1;
            if graph.is_tree_edge(i) {
                relators.push(vec![t]);
            }
            let mut r = vec![t];
            r.extend(element_letters(graph, e.to, &e.img_to.element));
            r.push(-t);
            r.extend(inverse(&element_letters(graph, e.from, &e.img_from.element)));
            relators.push(free_reduce(&r));
        }
        let mut rules = HashSet::new();
        let mut variants = Vec::new();
        for r in &relators {
            for base in [r.clone(), inverse(r)] {
                for k in 0..base.len() {
                    let rot: Vec<Letter> = base[k..].iter().chain(&base[..k]).copied().collect();
                    variants.push(rot.clone());
                    for split in 1..=rot.len() {
                        let (u, v) = rot.split_at(split);
                        rules.insert((u.to_vec(), inverse(v)));
                    }
                }
            }
        }
        let rules: Vec<_> = rules.into_iter().collect();
        // words one relator insertion plus one rule away from the empty word
        let mut near_identity: HashSet<Vec<Letter>> = HashSet::new();
        near_identity.insert(Vec::new());
        for v in &variants {
            let w = free_reduce(v);
            for next in Self::successors(&rules, &w) {
                near_identity.insert(next);
            }
            near_identity.insert(w);
        }
        Self {
            relators,
            rules,
            near_identity,
        }
    }

    fn successors(rules: &[(Vec<Letter>, Vec<Letter>)], w: &[Letter]) -> Vec<Vec<Letter>> {
        let mut out = Vec::new();
        for (u, v) in rules {
            if u.len() > w.len() {
                continue;
            }
            for i in 0..=w.len() - u.len() {
                if &w[i..i + u.len()] == u.as_slice() {
                    let mut next = w[..i].to_vec();
                    next.extend_from_slice(v);
                    next.extend_from_slice(&w[i + u.len()..]);
                    out.push(free_reduce(&next));
                }
            }
        }
        out
    }

    /// Rewriting search from `w` (up to depth 8, shortest words first)
    /// meeting a search from the empty word (depth 2). `Some(false)` once
    /// depth 10 is exhausted, `None` when the state budget ran out first.
    pub fn reaches_identity(&self, w: &[Letter], budget: usize) -> Option<bool> {
        let start = free_reduce(w);
        let max_len = start.len() + 16;
        let mut seen: HashSet<Vec<Letter>> = HashSet::new();
        let mut heap = BinaryHeap::from([Reverse((start.len(), 0u32, start.clone()))]);
        seen.insert(start);
        while let Some(Reverse((_, d, x))) = heap.pop() {
            if self.near_identity.contains(&x) {
                return Some(true);
            }
            if d == 8 {
                continue;
            }
            for next in Self::successors(&self.rules, &x) {
                if next.len() <= max_len && seen.insert(next.clone()) {
                    if seen.len() > budget {
                        return None;
                    }
                    heap.push(Reverse((next.len(), d + 1, next)));
                }
            }
        }
        Some(false)
    }

    /// Whether the image of `w` in the abelianization is nonzero, i.e. the
    /// exponent vector is outside the integer row span of the relators.
    pub fn abelian_nontrivial(&self, w: &[Letter]) -> bool {
        let n = self
            .relators
            .iter()
            .flatten()
            .chain(w)
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let vec_of = |word: &[Letter]| {
            let mut v = vec![0i128; n];
            for &l in word {
                v[l.unsigned_abs() as usize - 1] += i128::from(l.signum());
            }
            v
        };
        let mut rows: Vec<Vec<i128>> = self.relators.iter().map(|r| vec_of(r)).collect();
        // integer row echelon form
        let mut pivots: Vec<(usize, Vec<i128>)> = Vec::new();
        for col in 0..n {
            loop {
                let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
                if nonzero.len() <= 1 {
                    if let Some(&i) = nonzero.first() {
                        pivots.push((col, rows.remove(i)));
                    }
                    break;
                }
                let &p = nonzero.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
                let pivot = rows[p].clone();
                for &i in &nonzero {
                    if i != p {
                        let q = rows[i][col] / pivot[col];
                        for (x, y) in rows[i].iter_mut().zip(&pivot) {
                            *x -= q * y;
                        }
                    }
                }
            }
        }
        let mut v = vec_of(w);
        for (col, row) in &pivots {
            if v[*col] % row[*col] != 0 {
                return true;
            }
            let q = v[*col] / row[*col];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        v.iter().any(|&x| x != 0)
    }

    pub fn letters_of(&self, graph: &GraphOfGroups, word: &[RawLetter]) -> Vec<Letter> {
        let mut out = Vec::new();
        for l in word {
            match l {
                RawLetter::Vertex { vertex, symbol, exp } => {
                    let v = graph.vertex_index(vertex).unwrap();
                    out.extend(power(gen_id(graph, v, *symbol), exp.to_i64().unwrap()));
                }
                RawLetter::Stable { edge, exp } => {
                    let e = graph.edge_index(edge).unwrap();
                    out.extend(power(stable_id(graph, e), exp.to_i64().unwrap()));
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// D∞ acting on ℤ by affine maps x ↦ σx + c

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub sign: i64,
    pub offset: i64,
}

impl Affine {
    pub const ID: Self = Self { sign: 1, offset: 0 };
    pub const R: Self = Self { sign: 1, offset: 1 };
    pub const S: Self = Self { sign: -1, offset: 0 };

    /// `self ∘ other`
    pub fn then_after(self, other: Self) -> Self {
        Self {
            sign: self.sign * other.sign,
            offset: self.sign * other.offset + self.offset,
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            sign: self.sign,
            offset: -self.sign * self.offset,
        }
    }

    pub fn pow(self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self };
        (0..n.unsigned_abs()).fold(Self::ID, |acc, _| acc.then_after(base))
    }

    /// `s^ε r^k`
    pub fn of(d: &DihedralElement) -> Self {
        let r = Self::R.pow(d.shift.to_i64().unwrap());
        if d.reflect {
            Self::S.then_after(r)
        } else {
            r
        }
    }
}

/// Image of `g ∈ G_v` given the images of the generators of `v`.
pub fn affine_image(g: &Element, gens: &[Affine]) -> Affine {
    match g {
        Element::Free(w) => w.syllables().iter().fold(Affine::ID, |acc, s| {
            acc.then_after(gens[s.gen as usize - 1].pow(s.exp.to_i64().unwrap()))
        }),
        Element::Dihedral(d) => {
            let r = gens[0].pow(d.shift.to_i64().unwrap());
            if d.reflect {
                gens[1].then_after(r)
            } else {
                r
            }
        }
    }
}

/// Whether generator images (per vertex) and stable images define a
/// parametrization: relations hold, tree letters are trivial, and every
/// vertex has a nonzero rotation image (and an involution for `s`).
pub fn affine_check(graph: &GraphOfGroups, gens: &[Vec<Affine>], stable: &[Affine]) -> bool {
    for (v, vx) in graph.vertices().iter().enumerate() {
        let g = &gens[v];
        match vx.kind {
            VertexKind::Free(1) => {
                if g[0].sign != 1 || g[0].offset == 0 {
                    return false;
                }
            }
            VertexKind::Free(_) => return false,
            VertexKind::Dihedral => {
                let (r, s) = (g[0], g[1]);
                if r.sign != 1 || r.offset == 0 {
                    return false;
                }
                if s.then_after(s) != Affine::ID || s.then_after(r).then_after(s) != r.inverse() {
                    return false;
                }
            }
        }
    }
    graph.edges().iter().enumerate().all(|(i, e)| {
        let t = stable[i];
        let lhs = t
            .then_after(affine_image(&e.img_to.element, &gens[e.to]))
            .then_after(t.inverse());
        (!graph.is_tree_edge(i) || t == Affine::ID) && lhs == affine_image(&e.img_from.element, &gens[e.from])
    })
}

// ---------------------------------------------------------------------------
// canonical relabeling

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Least serialization over all renamings of vertices to `n0, n1, …` and
/// edges to `m0, m1, …`.
pub fn canonical_text(graph: &GraphOfGroups) -> String {
    let nv = graph.vertices().len();
    let ne = graph.edges().len();
    let mut best: Option<String> = None;
    for pv in permutations(nv) {
        for pe in permutations(ne) {
            let vname = |v: usize| format!("n{}", pv[v]);
            let mut lines = Vec::new();
            for (v, vx) in graph.vertices().iter().enumerate() {
                lines.push(match vx.kind {
                    VertexKind::Free(r) => format!("vertex {} free {r}", vname(v)),
                    VertexKind::Dihedral => format!("vertex {} dihedral", vname(v)),
                });
            }
            for (i, e) in graph.edges().iter().enumerate() {
                lines.push(format!(
                    "edge m{} from={} to={} img_from=\"{}\" img_to=\"{}\"",
                    pe[i],
                    vname(e.from),
                    vname(e.to),
                    e.img_from.element.render(&vname(e.from)),
                    e.img_to.element.render(&vname(e.to)),
                ));
            }
            let text = serialize(&parse(&lines.join("\n")).expect("renamed graph parses"));
            if best.as_ref().is_none_or(|b| text < *b) {
                best = Some(text);
            }
        }
    }
    best.expect("at least one permutation")
}

// ---------------------------------------------------------------------------
// multiplicative subgroups of ℚ*

fn factor(mut n: BigInt, primes: &mut Vec<u64>) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while n > BigInt::from(1) {
        let mut k = 0;
        while (&n % p) == BigInt::from(0) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        p += 1;
    }
    out
}

/// Whether `x` lies in the subgroup of `ℚ_{>0}` generated by `gens`, trying
/// integer combinations with coefficients in `-bound..=bound`.
pub fn in_ratio_group(x: &num_rational::BigRational, gens: &[num_rational::BigRational], bound: i64) -> bool {
    let mut primes = Vec::new();
    let vec_of = |q: &num_rational::BigRational, primes: &mut Vec<u64>| {
        let mut v: Vec<(u64, i64)> = factor(q.numer().abs(), primes);
        for (p, k) in factor(q.denom().abs(), primes) {
            v.push((p, -k));
        }
        v
    };
    let target = vec_of(x, &mut primes);
    let gs: Vec<Vec<(u64, i64)>> = gens.iter().map(|g| vec_of(g, &mut primes)).collect();
    let dense = |v: &[(u64, i64)]| -> Vec<i64> {
        primes
            .iter()
            .map(|p| v.iter().filter(|(q, _)| q == p).map(|(_, k)| k).sum())
            .collect()
    };
    let target = dense(&target);
    let gs: Vec<Vec<i64>> = gs.iter().map(|g| dense(g)).collect();
    let mut coeffs = vec![-bound; gs.len()];
    loop {
        let sum: Vec<i64> = (0..primes.len())
            .map(|i| gs.iter().zip(&coeffs).map(|(g, c)| g[i] * c).sum())
            .collect();
        if sum == target {
            return true;
        }
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return false;
            }
            coeffs[i] += 1;
            if coeffs[i] > bound {
                coeffs[i] = -bound;
                i += 1;
            } else {
                break;
            }
        }
    }
}

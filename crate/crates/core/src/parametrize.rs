//! Linear parametrizations into the infinite dihedral group and the global
//! verdict.
//!
//! For a balanced graph of two-ended groups the spanning-tree relations
//! `p₊·k(e⁺) = p₋·k(e⁻)` fix the rotation exponent `k(v)` of every vertex
//! generator up to a common rational factor; clearing denominators makes
//! them integral. A non-tree stable letter then maps to `s` when the two
//! sides of its relation disagree in sign and to the identity otherwise.
//! Nothing here is trusted: [`verify_parametrization`] re-checks every
//! relation with exact dihedral arithmetic.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::balance::{edge_balanced, group_balanced, BalanceVerdict, UnbalancedCycle};
use crate::certify::{witness_from_cycle, BSWitness, CertifyError};
use crate::conj_graph::{build_conjugacy_graph, edge_classes, ConjugacyGraph};
use crate::dihedral::{DihedralElement, DihedralSubgroup};
use crate::model::{Element, GraphOfGroups, VertexKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParametrizeError {
    #[error("vertex {vertex} has a free group of rank {rank}, which is not two-ended")]
    NotTwoEnded { vertex: String, rank: u32 },
}

/// Images of the generators of one vertex group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexImage {
    /// Image of the single generator of `Free(1)`.
    Cyclic(DihedralElement),
    /// Images of `r` and `s`.
    Dihedral { r: DihedralElement, s: DihedralElement },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearParametrization {
    /// Per vertex, in vertex order.
    pub vertices: Vec<VertexImage>,
    /// Per edge, in edge order; tree edges map to the identity.
    pub stable: Vec<DihedralElement>,
}

impl LinearParametrization {
    /// `(letter, image)` pairs such as `("v.1", (0,3))`; non-tree stable
    /// letters are listed as `e.t`.
    pub fn entries(&self, graph: &GraphOfGroups) -> Vec<(String, DihedralElement)> {
        let mut out = Vec::new();
        for (v, img) in graph.vertices().iter().zip(&self.vertices) {
            match img {
                VertexImage::Cyclic(x) => out.push((format!("{}.1", v.name), x.clone())),
                VertexImage::Dihedral { r, s } => {
                    out.push((format!("{}.r", v.name), r.clone()));
                    out.push((format!("{}.s", v.name), s.clone()));
                }
            }
        }
        for (i, e) in graph.edges().iter().enumerate() {
            if !graph.is_tree_edge(i) {
                out.push((format!("{}.t", e.name), self.stable[i].clone()));
            }
        }
        out
    }

    /// Image of an element of vertex `v`.
    pub fn evaluate(&self, v: usize, g: &Element) -> Option<DihedralElement> {
        match (&self.vertices[v], g) {
            (VertexImage::Cyclic(x), Element::Free(w)) => {
                let mut out = DihedralElement::identity();
                for syl in w.syllables() {
                    if syl.gen != 1 {
                        return None;
                    }
                    out = out.mul(&x.pow(&syl.exp));
                }
                Some(out)
            }
            (VertexImage::Dihedral { r, s }, Element::Dihedral(d)) => {
                let sp = if d.reflect { s.clone() } else { DihedralElement::identity() };
                Some(sp.mul(&r.pow(&d.shift)))
            }
            _ => None,
        }
    }
}

fn two_ended_check(delta: &GraphOfGroups) -> Result<(), ParametrizeError> {
    for v in delta.vertices() {
        if let VertexKind::Free(rank) = v.kind {
            if rank != 1 {
                return Err(ParametrizeError::NotTwoEnded {
                    vertex: v.name.clone(),
                    rank,
                });
            }
        }
    }
    Ok(())
}

/// Builds a verified parametrization, or returns the unbalanced cycle that
/// rules one out.
pub fn parametrize(delta: &GraphOfGroups) -> Result<Result<LinearParametrization, UnbalancedCycle>, ParametrizeError> {
    two_ended_check(delta)?;
    if let BalanceVerdict::Unbalanced(c) = group_balanced(delta) {
        return Ok(Err(c));
    }
    let n = delta.vertices().len();
    // rational rotation exponents along the canonical spanning tree
    let mut k: Vec<Option<BigRational>> = vec![None; n];
    k[0] = Some(BigRational::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let ku = k[u].clone().expect("queued vertices are assigned");
        for (i, side) in delta.incident(u) {
            if !delta.is_tree_edge(i) {
                continue;
            }
            let e = delta.edge(i);
            let w = e.endpoint(side.other());
            if k[w].is_some() {
                continue;
            }
            // p(side)·k(u) = p(other)·k(w)
            let p_here = &e.attachment(side).exponent;
            let p_there = &e.attachment(side.other()).exponent;
            k[w] = Some(&ku * BigRational::new(p_here.clone(), p_there.clone()));
            queue.push_back(w);
        }
    }
    let k: Vec<BigRational> = k.into_iter().map(|x| x.expect("the tree spans")).collect();
    let lcm = k.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = k.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let ints: Vec<BigInt> = ints.into_iter().map(|x| x / &gcd).collect();

    let vertices = delta
        .vertices()
        .iter()
        .zip(&ints)
        .map(|(v, x)| match v.kind {
            VertexKind::Free(_) => VertexImage::Cyclic(DihedralElement::rotation(x.clone())),
            VertexKind::Dihedral => VertexImage::Dihedral {
                r: DihedralElement::rotation(x.clone()),
                s: DihedralElement::reflection(0),
            },
        })
        .collect();
    let stable = delta
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if delta.is_tree_edge(i) {
                return DihedralElement::identity();
            }
            let plus = &e.img_to.exponent * &ints[e.to];
            let minus = &e.img_from.exponent * &ints[e.from];
            if plus.is_negative() == minus.is_negative() {
                DihedralElement::identity()
            } else {
                DihedralElement::reflection(0)
            }
        })
        .collect();
    let phi = LinearParametrization { vertices, stable };
    debug_assert_eq!(verify_parametrization(delta, &phi), Ok(()));
    Ok(Ok(phi))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    #[error("vertex {vertex} is not two-ended")]
    NotTwoEnded { vertex: String },
    #[error("the image of vertex {vertex} has the wrong shape")]
    WrongShape { vertex: String },
    #[error("the restriction to vertex {vertex} has infinite kernel or infinite-index image")]
    NotFiniteIndex { vertex: String },
    #[error("a dihedral relation fails at vertex {vertex}")]
    DihedralRelation { vertex: String },
    #[error("tree edge {edge} does not map to the identity")]
    TreeLetter { edge: String },
    #[error("the relation of edge {edge} fails")]
    EdgeRelation { edge: String },
}

pub fn verify_parametrization(delta: &GraphOfGroups, phi: &LinearParametrization) -> Result<(), VerifyFailure> {
    if phi.vertices.len() != delta.vertices().len() || phi.stable.len() != delta.edges().len() {
        return Err(VerifyFailure::WrongShape {
            vertex: String::new(),
        });
    }
    for (v, img) in delta.vertices().iter().zip(&phi.vertices) {
        let name = || v.name.clone();
        let subgroup = match (v.kind, img) {
            (VertexKind::Free(1), VertexImage::Cyclic(x)) => DihedralSubgroup::generated_by(x, None),
            (VertexKind::Free(_), _) => return Err(VerifyFailure::NotTwoEnded { vertex: name() }),
            (VertexKind::Dihedral, VertexImage::Dihedral { r, s }) => {
                let id = DihedralElement::identity();
                if s.mul(s) != id || s.mul(r).mul(s) != r.inverse() {
                    return Err(VerifyFailure::DihedralRelation { vertex: name() });
                }
                DihedralSubgroup::generated_by(r, Some(s))
            }
            _ => return Err(VerifyFailure::WrongShape { vertex: name() }),
        };
        let finite = subgroup.and_then(|h| crate::dihedral::subgroup_index(&h)).is_some();
        if !finite {
            return Err(VerifyFailure::NotFiniteIndex { vertex: name() });
        }
    }
    for (i, e) in delta.edges().iter().enumerate() {
        let t = &phi.stable[i];
        if delta.is_tree_edge(i) && !t.is_identity() {
            return Err(VerifyFailure::TreeLetter { edge: e.name.clone() });
        }
        let fail = || VerifyFailure::EdgeRelation { edge: e.name.clone() };
        let plus = phi.evaluate(e.to, &e.img_to.element).ok_or_else(fail)?;
        let minus = phi.evaluate(e.from, &e.img_from.element).ok_or_else(fail)?;
        if t.mul(&plus).mul(&t.inverse()) != minus {
            return Err(fail());
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub class: usize,
    pub conjugacy_graph: ConjugacyGraph,
    pub phi: LinearParametrization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Hhg {
        certificates: Vec<Certificate>,
    },
    NotHhg {
        edge: usize,
        class: usize,
        witness: BSWitness,
    },
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        match self {
            Self::Hhg { .. } => "HHG",
            Self::NotHhg { .. } => "NotHHG",
        }
    }

    /// Re-verifies every certificate or the witness.
    pub fn verify(&self, graph: &GraphOfGroups) -> bool {
        match self {
            Self::Hhg { certificates } => certificates
                .iter()
                .all(|c| verify_parametrization(&c.conjugacy_graph.delta, &c.phi).is_ok()),
            Self::NotHhg { witness, .. } => witness.verify(graph),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerdictError {
    #[error(transparent)]
    Parametrize(#[from] ParametrizeError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Outcome of one class: a certificate or the first unbalanced edge in it.
pub fn class_outcome(
    graph: &GraphOfGroups,
    cg: ConjugacyGraph,
    edges: &[usize],
) -> Result<Result<Certificate, (usize, UnbalancedCycle)>, VerdictError> {
    match parametrize(&cg.delta)? {
        Ok(phi) => Ok(Ok(Certificate {
            class: cg.class,
            conjugacy_graph: cg,
            phi,
        })),
        Err(_) => {
            let found = edges.iter().find_map(|&e| match edge_balanced(graph, e) {
                BalanceVerdict::Unbalanced(c) => Some((e, c)),
                BalanceVerdict::Balanced => None,
            });
            Ok(Err(found.expect("an unbalanced class contains an unbalanced edge")))
        }
    }
}

pub fn hhg_verdict(graph: &GraphOfGroups) -> Result<Verdict, VerdictError> {
    let classes = edge_classes(graph);
    let outcomes = crate::par::map_indexed(classes.len(), |c| {
        class_outcome(graph, build_conjugacy_graph(graph, &classes, c), &classes[c].edges)
    });
    let mut certificates = Vec::new();
    for (class, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            Ok(cert) => certificates.push(cert),
            Err((edge, cycle)) => {
                let witness = witness_from_cycle(graph, &cycle)?;
                return Ok(Verdict::NotHhg { edge, class, witness });
            }
        }
    }
    Ok(Verdict::Hhg { certificates })
}

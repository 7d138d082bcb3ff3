//! Almost Baumslag–Solitar witnesses and distortion certificates.
//!
//! A closed walk of weight `μ ≠ ±1` in the balance groupoid turns into an
//! element `s` (the composite of the arc conjugators) and a root power `a`
//! with `s aⁱ s⁻¹ = aʲ` and `j/i = μ`. Every witness is re-verified by the
//! word engine before it is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::balance::{arc_data, BalanceVerdict, CycleStep, ArcKind, UnbalancedCycle};
use crate::dihedral::DihedralElement;
use crate::model::{root_element, Element, GraphOfGroups, Step};
use crate::word::{are_equal, britton_reduce, PathWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("the graph is balanced, so there is no witness")]
    NoWitness,
    #[error("the witness failed verification")]
    VerificationFailed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSWitness {
    pub vertex: usize,
    pub a: PathWord,
    pub s: PathWord,
    pub i: BigInt,
    pub j: BigInt,
    /// Britton-reduced form of `s aⁱ s⁻¹ a⁻ʲ`; empty for a valid witness.
    pub transcript: PathWord,
}

impl BSWitness {
    /// Re-checks the witness from scratch.
    pub fn verify(&self, graph: &GraphOfGroups) -> bool {
        let lhs = self.a_pow(&self.i).conjugate_by(graph, &self.s);
        let a_ok = self.a.num_letters() == 0 && self.a.head().is_infinite_order();
        let transcript = britton_reduce(graph, &lhs.mul(graph, &self.a_pow(&self.j).inverse(graph)).closed(graph));
        a_ok && self.i.abs() != self.j.abs()
            && are_equal(graph, &lhs, &self.a_pow(&self.j))
            && transcript.num_letters() == 0
            && transcript.head().is_identity()
    }

    fn a_pow(&self, n: &BigInt) -> PathWord {
        PathWord::element(self.vertex, self.a.head().pow(n))
    }
}

// conjugator of one step: carries root powers at the source node to the target node
fn step_conjugator(graph: &GraphOfGroups, step: CycleStep) -> PathWord {
    let forward = match step.kind {
        ArcKind::Edge(e) => {
            let edge = graph.edge(e);
            PathWord::element(edge.from, edge.img_from.conjugator.inverse())
                .mul(graph, &PathWord::letter(graph, Step { edge: e, forward: true }))
                .mul(graph, &PathWord::element(edge.to, edge.img_to.conjugator.clone()))
        }
        ArcKind::SignFlip(v) => PathWord::element(v, Element::Dihedral(DihedralElement::reflection(0))),
    };
    if step.reversed {
        forward.inverse(graph)
    } else {
        forward
    }
}

// exponent of the source root that a step can carry: multiples of this
fn step_divisor(graph: &GraphOfGroups, step: CycleStep) -> BigInt {
    match step.kind {
        ArcKind::Edge(e) => {
            let edge = graph.edge(e);
            if step.reversed {
                edge.img_from.exponent.abs()
            } else {
                edge.img_to.exponent.abs()
            }
        }
        ArcKind::SignFlip(_) => BigInt::one(),
    }
}

pub fn almost_bs_witness(graph: &GraphOfGroups, verdict: &BalanceVerdict) -> Result<BSWitness, CertifyError> {
    let BalanceVerdict::Unbalanced(cycle) = verdict else {
        return Err(CertifyError::NoWitness);
    };
    witness_from_cycle(graph, cycle)
}

pub fn witness_from_cycle(graph: &GraphOfGroups, cycle: &UnbalancedCycle) -> Result<BSWitness, CertifyError> {
    if cycle.modulus.abs() == BigRational::one() || cycle.steps.is_empty() {
        return Err(CertifyError::NoWitness);
    }
    let first = cycle.steps[0];
    let (src, dst, _) = arc_data(graph, first.kind);
    let start = if first.reversed { dst } else { src };

    let mut s = PathWord::identity(graph, start.vertex);
    let mut ratio = BigRational::one();
    let mut needed = BigInt::one();
    for &step in &cycle.steps {
        let d = BigRational::from_integer(step_divisor(graph, step));
        needed = needed.lcm((&ratio / d).denom());
        ratio *= crate::balance::step_weight(graph, step);
        s = step_conjugator(graph, step).mul(graph, &s);
    }
    debug_assert_eq!(ratio, cycle.modulus);
    let big_i = needed;
    let big_j = &cycle.modulus * &big_i;
    assert!(big_j.is_integer(), "the last step lands on an integral power");
    let big_j = big_j.to_integer();
    let g = big_i.gcd(&big_j);
    let a = PathWord::element(start.vertex, root_element(&start.key).pow(&g));
    let (i, j) = (&big_i / &g, &big_j / &g);
    let lhs = PathWord::element(start.vertex, a.head().pow(&i)).conjugate_by(graph, &s);
    let rhs = PathWord::element(start.vertex, a.head().pow(&j));
    let transcript = britton_reduce(graph, &lhs.mul(graph, &rhs.inverse(graph)).closed(graph));
    let w = BSWitness {
        vertex: start.vertex,
        a,
        s,
        i,
        j,
        transcript,
    };
    if w.verify(graph) {
        Ok(w)
    } else {
        Err(CertifyError::VerificationFailed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionRow {
    pub k: u32,
    /// `s^k a^{i^k} s^{-k}`
    pub word: PathWord,
    /// `j^k`
    pub exponent: BigInt,
    pub letter_length: BigInt,
    /// `2k·len(s) + |i|^k·len(a)`
    pub length_bound: BigInt,
    pub verified: bool,
}

impl DistortionRow {
    pub fn ratio(&self) -> BigRational {
        BigRational::new(self.length_bound.clone(), self.exponent.abs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionCertificate {
    /// Whether `s` was inverted to make `|j| > |i|`.
    pub swapped: bool,
    pub s: PathWord,
    pub i: BigInt,
    pub j: BigInt,
    pub rows: Vec<DistortionRow>,
}

impl DistortionCertificate {
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(|r| r.verified)
    }

    /// Whether `length_bound / |exponent|` strictly decreases from `from_k` on.
    pub fn ratios_decreasing(&self, from_k: u32) -> bool {
        let rs: Vec<BigRational> = self.rows.iter().filter(|r| r.k >= from_k).map(DistortionRow::ratio).collect();
        rs.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn distortion_certificate(graph: &GraphOfGroups, w: &BSWitness, depth: u32) -> DistortionCertificate {
    let swapped = w.j.abs() < w.i.abs();
    let (s, i, j) = if swapped {
        (w.s.inverse(graph), w.j.clone(), w.i.clone())
    } else {
        (w.s.clone(), w.i.clone(), w.j.clone())
    };
    let len_s = s.letter_length(graph);
    let len_a = w.a.letter_length(graph);
    let rows = (1..=depth)
        .map(|k| {
            let kk = k.to_usize().expect("depth fits in usize");
            let ik = num_traits::pow(i.clone(), kk);
            let jk = num_traits::pow(j.clone(), kk);
            let sk = s.pow(graph, i64::from(k));
            let word = PathWord::element(w.vertex, w.a.head().pow(&ik)).conjugate_by(graph, &sk);
            let target = PathWord::element(w.vertex, w.a.head().pow(&jk));
            let verified = are_equal(graph, &word, &target);
            DistortionRow {
                k,
                letter_length: word.letter_length(graph),
                length_bound: BigInt::from(2 * k) * &len_s + ik.abs() * &len_a,
                word,
                exponent: jk,
                verified,
            }
        })
        .collect();
    DistortionCertificate {
        swapped,
        s,
        i,
        j,
        rows,
    }
}

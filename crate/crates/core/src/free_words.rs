//! Words in finitely generated free groups.
//!
//! Words are stored exponent-compressed: one [`Syllable`] per maximal run of
//! a single generator, so `a^(3^20)` costs one syllable. A word is *freely
//! reduced* when adjacent syllables carry distinct generators and no
//! exponent is zero; every [`FreeWord`] upholds this.
//!
//! Cyclic reduction works at syllable granularity: a core is cyclically
//! reduced when its first and last syllables use different generators (or
//! it has at most one syllable). Powers of such a core concatenate without
//! merging, which keeps membership tests in cyclic subgroups a matter of
//! comparing syllables.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeWordError {
    #[error("generator {gen} is not among the {rank} generators of the free group")]
    UnknownGenerator { gen: u32, rank: u32 },
    #[error("the word is trivial")]
    TrivialWord,
}

/// `gen^exp` with a 1-based generator index and a nonzero exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub gen: u32,
    pub exp: BigInt,
}

impl Syllable {
    pub fn new(gen: u32, exp: impl Into<BigInt>) -> Self {
        Self {
            gen,
            exp: exp.into(),
        }
    }

    fn inverse(&self) -> Self {
        Self {
            gen: self.gen,
            exp: -&self.exp,
        }
    }

    // letter key: generator index, then sign with positive first
    fn letter_key(&self) -> (u32, bool) {
        (self.gen, self.exp.is_negative())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    syllables: Vec<Syllable>,
}

impl FreeWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn generator(gen: u32, exp: impl Into<BigInt>) -> Self {
        let mut w = Self::empty();
        w.push(Syllable::new(gen, exp));
        w
    }

    /// Builds a freely reduced word from arbitrary `(generator, exponent)`
    /// letters without checking generator bounds.
    pub fn from_letters<I, E>(letters: I) -> Self
    where
        I: IntoIterator<Item = (u32, E)>,
        E: Into<BigInt>,
    {
        let mut w = Self::empty();
        for (gen, exp) in letters {
            w.push(Syllable::new(gen, exp));
        }
        w
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Appends a syllable, merging and cancelling against the tail.
    pub fn push(&mut self, s: Syllable) {
        if s.exp.is_zero() {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.gen == s.gen => {
                last.exp += s.exp;
                if last.exp.is_zero() {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(s),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for s in &other.syllables {
            out.push(s.clone());
        }
        out
    }

    pub fn inverse(&self) -> Self {
        Self {
            syllables: self.syllables.iter().rev().map(Syllable::inverse).collect(),
        }
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    pub fn pow(&self, n: &BigInt) -> Self {
        if n.is_zero() || self.is_empty() {
            return Self::empty();
        }
        let (conj, core) = cyclic_reduce(self);
        conj.mul(&repeat_core(&core, n)).mul(&conj.inverse())
    }

    /// Sum of absolute exponents.
    pub fn letter_length(&self) -> BigInt {
        self.syllables.iter().map(|s| s.exp.abs()).sum()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> u32 {
        self.syllables.iter().map(|s| s.gen).max().unwrap_or(0)
    }

    /// Lexicographic order on the expanded letter sequences, letters keyed
    /// by generator index and then sign (positive first).
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        let (xs, ys) = (&self.syllables, &other.syllables);
        for i in 0..xs.len().min(ys.len()) {
            let (x, y) = (&xs[i], &ys[i]);
            match x.letter_key().cmp(&y.letter_key()) {
                Ordering::Equal => {}
                o => return o,
            }
            match x.exp.abs().cmp(&y.exp.abs()) {
                Ordering::Equal => continue,
                // the shorter run is followed by a different letter or nothing
                Ordering::Less => {
                    return match xs.get(i + 1) {
                        None => Ordering::Less,
                        Some(next) => next.letter_key().cmp(&x.letter_key()),
                    }
                }
                Ordering::Greater => {
                    return match ys.get(i + 1) {
                        None => Ordering::Greater,
                        Some(next) => y.letter_key().cmp(&next.letter_key()),
                    }
                }
            }
        }
        xs.len().cmp(&ys.len())
    }

    fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            syllables: self.syllables[range].to_vec(),
        }
    }

    fn rotation(&self, i: usize) -> Self {
        let mut syllables = self.syllables[i..].to_vec();
        syllables.extend_from_slice(&self.syllables[..i]);
        Self { syllables }
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

/// `core^n` for a syllable-cyclically reduced core.
fn repeat_core(core: &FreeWord, n: &BigInt) -> FreeWord {
    if core.len() == 1 {
        let s = &core.syllables[0];
        return FreeWord::generator(s.gen, &s.exp * n);
    }
    let base = if n.is_negative() {
        core.inverse()
    } else {
        core.clone()
    };
    let count = n
        .abs()
        .to_usize()
        .expect("power of a multi-syllable word is too large to expand");
    let mut syllables = Vec::with_capacity(base.len() * count);
    for _ in 0..count {
        syllables.extend_from_slice(&base.syllables);
    }
    FreeWord { syllables }
}

/// Freely reduces a raw letter sequence of the free group of rank `rank`.
pub fn free_reduce<I, E>(rank: u32, letters: I) -> Result<FreeWord, FreeWordError>
where
    I: IntoIterator<Item = (u32, E)>,
    E: Into<BigInt>,
{
    let mut w = FreeWord::empty();
    for (gen, exp) in letters {
        if gen == 0 || gen > rank {
            return Err(FreeWordError::UnknownGenerator { gen, rank });
        }
        w.push(Syllable::new(gen, exp));
    }
    Ok(w)
}

/// Splits a freely reduced `w` as `conjugator · core · conjugator⁻¹` with
/// `core` cyclically reduced.
pub fn cyclic_reduce(w: &FreeWord) -> (FreeWord, FreeWord) {
    let mut conj = FreeWord::empty();
    let mut core = w.clone();
    while core.len() >= 2 && core.syllables[0].gen == core.syllables[core.len() - 1].gen {
        let n = core.len();
        let first = core.syllables[0].clone();
        let last = core.syllables[n - 1].clone();
        // x^a M x^b = x^{-b} (x^{a+b} M) x^b
        conj.push(Syllable::new(last.gen, -&last.exp));
        let mut next = FreeWord::generator(first.gen, &first.exp + &last.exp);
        for s in &core.syllables[1..n - 1] {
            next.push(s.clone());
        }
        core = next;
    }
    (conj, core)
}

/// `w = conjugator · root^exponent · conjugator⁻¹` with `root` primitive,
/// cyclically reduced and canonical (least in its conjugacy class and that
/// of its inverse).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    pub conjugator: FreeWord,
    pub root: FreeWord,
    pub exponent: BigInt,
}

impl RootData {
    /// The generator `g · root · g⁻¹` of the maximal cyclic subgroup
    /// containing the input word.
    pub fn full_root(&self) -> FreeWord {
        self.root.conjugate_by(&self.conjugator)
    }

    pub fn reconstruct(&self) -> FreeWord {
        repeat_core(&self.root, &self.exponent).conjugate_by(&self.conjugator)
    }
}

// smallest period of a cyclically reduced core, in syllables
fn period(core: &FreeWord) -> usize {
    let n = core.len();
    (1..n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|i| core.syllables[i] == core.syllables[i % d]))
        .unwrap_or(n)
}

pub fn primitive_root(w: &FreeWord) -> Result<RootData, FreeWordError> {
    if w.is_empty() {
        return Err(FreeWordError::TrivialWord);
    }
    let (conj, core) = cyclic_reduce(w);
    let (root, power) = if core.len() == 1 {
        let s = &core.syllables[0];
        let unit = if s.exp.is_negative() { -1 } else { 1 };
        (FreeWord::generator(s.gen, unit), s.exp.abs())
    } else {
        let d = period(&core);
        (core.slice(0..d), BigInt::from(core.len() / d))
    };

    // core = root^power; choose the least rotation of root or root⁻¹
    let inv = root.inverse();
    let mut best: Option<(FreeWord, FreeWord, BigInt)> = None;
    for (cand_base, sign) in [(&root, BigInt::one()), (&inv, -BigInt::one())] {
        for i in 0..cand_base.len() {
            let cand = cand_base.rotation(i);
            if best.as_ref().is_some_and(|(b, _, _)| cand >= *b) {
                continue;
            }
            // cand_base = P · cand · P⁻¹ with P the rotated-off prefix
            let prefix = cand_base.slice(0..i);
            best = Some((cand, prefix, &sign * &power));
        }
    }
    let (canon, prefix, exponent) = best.expect("nonempty root has a rotation");
    Ok(RootData {
        conjugator: conj.mul(&prefix),
        root: canon,
        exponent,
    })
}

/// Returns `n` with `x = root^n`, for `root` cyclically reduced and primitive.
pub fn as_power_of(x: &FreeWord, root: &FreeWord) -> Option<BigInt> {
    if x.is_empty() {
        return Some(BigInt::zero());
    }
    if root.len() == 1 {
        let (xs, rs) = (&x.syllables, &root.syllables[0]);
        if xs.len() != 1 || xs[0].gen != rs.gen {
            return None;
        }
        let (q, r) = xs[0].exp.div_rem(&rs.exp);
        return r.is_zero().then_some(q);
    }
    let l = root.len();
    if !x.len().is_multiple_of(l) {
        return None;
    }
    let reps = BigInt::from(x.len() / l);
    let matches = |base: &FreeWord| {
        x.syllables
            .iter()
            .enumerate()
            .all(|(i, s)| *s == base.syllables[i % l])
    };
    if matches(root) {
        Some(reps)
    } else if matches(&root.inverse()) {
        Some(-reps)
    } else {
        None
    }
}

/// A conjugator `g` with `g u g⁻¹ = v`, when the cyclic cores of `u` and
/// `v` are rotations of each other.
pub fn cyclic_conjugacy(u: &FreeWord, v: &FreeWord) -> Option<FreeWord> {
    let (gu, cu) = cyclic_reduce(u);
    let (gv, cv) = cyclic_reduce(v);
    if cu.len() != cv.len() {
        return None;
    }
    if cu.is_empty() {
        return Some(FreeWord::empty());
    }
    (0..cu.len()).find(|&i| cu.rotation(i) == cv).map(|i| {
        let prefix = cu.slice(0..i);
        gv.mul(&prefix.inverse()).mul(&gu.inverse())
    })
}

/// Witness that `⟨u⟩` and `⟨v⟩` are commensurable:
/// `u = g_u r^p g_u⁻¹` and `v = g_v r^{sign·q} g_v⁻¹` with `p, q > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commensurability {
    pub root: FreeWord,
    pub conj_u: FreeWord,
    pub p: BigInt,
    pub conj_v: FreeWord,
    pub q: BigInt,
    pub sign: i8,
}

pub fn commensurability_data(
    u: &FreeWord,
    v: &FreeWord,
) -> Result<Option<Commensurability>, FreeWordError> {
    let ru = primitive_root(u)?;
    let rv = primitive_root(v)?;
    if ru.root != rv.root {
        return Ok(None);
    }
    let u_negative = ru.exponent.is_negative();
    let root = if u_negative {
        ru.root.inverse()
    } else {
        ru.root.clone()
    };
    let sign = if u_negative == rv.exponent.is_negative() {
        1
    } else {
        -1
    };
    Ok(Some(Commensurability {
        root,
        conj_u: ru.conjugator,
        p: ru.exponent.abs(),
        conj_v: rv.conjugator,
        q: rv.exponent.abs(),
        sign,
    }))
}

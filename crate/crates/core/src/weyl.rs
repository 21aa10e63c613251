//! Weyl group elements as words in simple reflections.
//!
//! Group elements are identified by their inversion sets. Left
//! multiplication by `s_i` acts on inversion sets by
//! `I(s_i v) = {α_i} ∪ s_i I(v)` when `α_i ∉ I(v)`, and
//! `I(s_i v) = s_i (I(v) \ {α_i})` otherwise.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coconvex::is_biconvex;
use crate::error::{Error, Result};
use crate::mask::{bit, bits, count, Mask};
use crate::poly::IntPoly;
use crate::rootsys::{Family, Root, RootSystem, SignedRoot};

/// Default cap on enumerated group sizes.
pub const DEFAULT_GROUP_BUDGET: u128 = 1_000_000;

/// A word `s_{i_1} s_{i_2} ... s_{i_k}` with 1-based letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylWord {
    letters: Vec<usize>,
}

impl WeylWord {
    pub fn new(letters: Vec<usize>) -> Self {
        WeylWord { letters }
    }

    pub fn identity() -> Self {
        WeylWord::default()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word for the inverse element.
    pub fn inverse(&self) -> Self {
        WeylWord { letters: self.letters.iter().rev().copied().collect() }
    }

    pub fn concat(&self, other: &WeylWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        WeylWord { letters }
    }

    pub fn check(&self, rank: usize) -> Result<()> {
        match self.letters.iter().find(|&&i| i == 0 || i > rank) {
            Some(&letter) => Err(Error::BadLetter { letter, rank }),
            None => Ok(()),
        }
    }

    /// Compact form such as `s2s1s3s2`; the identity renders as `e`.
    pub fn to_compact(&self) -> String {
        if self.letters.is_empty() {
            return "e".into();
        }
        self.letters.iter().map(|i| format!("s{i}")).collect()
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for WeylWord {
    type Err = Error;

    /// Accepts `"2 1 3 2"`, `"s2 s1 s3 s2"` and `"s2s1s3s2"`; an empty
    /// string, `e` or `id` is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "e" || t == "id" {
            return Ok(WeylWord::identity());
        }
        let mut letters = Vec::new();
        for tok in t.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let pieces: Vec<&str> = if tok.starts_with(['s', 'S']) {
                tok.split(['s', 'S']).filter(|p| !p.is_empty()).collect()
            } else {
                vec![tok]
            };
            for p in pieces {
                letters.push(p.parse::<usize>().map_err(|e| Error::Parse(s.into(), e.to_string()))?);
            }
        }
        Ok(WeylWord { letters })
    }
}

/// `I(s_i v)` from `I(v)`, with `i` 0-based.
pub fn left_mul_simple(sys: &RootSystem, i: usize, inv: Mask) -> Mask {
    let had = inv >> i & 1 == 1;
    let mut out = if had { 0 } else { bit(i) };
    for r in bits(inv & !bit(i)) {
        out |= bit(sys.reflect(i, r).index);
    }
    out
}

/// Image of a root under `w`; letters act right to left.
pub fn act(sys: &RootSystem, w: &WeylWord, r: &Root) -> Result<Root> {
    w.check(sys.rank())?;
    let (positive, idx) = if r.is_positive() {
        (true, sys.index_of(r))
    } else {
        (false, sys.index_of(&r.neg()))
    };
    let idx = idx.ok_or_else(|| Error::NotPositive(r.to_string()))?;
    let img = act_signed(sys, w, SignedRoot { positive, index: idx });
    let root = sys.root(img.index).clone();
    Ok(if img.positive { root } else { root.neg() })
}

pub fn act_signed(sys: &RootSystem, w: &WeylWord, r: SignedRoot) -> SignedRoot {
    w.letters.iter().rev().fold(r, |acc, &i| sys.reflect_signed(i - 1, acc))
}

/// `I(w) = {α > 0 : w⁻¹ α < 0}`. The word need not be reduced.
pub fn inversion_set(sys: &RootSystem, w: &WeylWord) -> Result<Mask> {
    w.check(sys.rank())?;
    Ok(w.letters.iter().rev().fold(0, |inv, &i| left_mul_simple(sys, i - 1, inv)))
}

pub fn length(sys: &RootSystem, w: &WeylWord) -> Result<usize> {
    inversion_set(sys, w).map(count)
}

pub fn is_reduced(sys: &RootSystem, w: &WeylWord) -> Result<bool> {
    Ok(length(sys, w)? == w.len())
}

/// Lexicographically least reduced word of the element with inversion set
/// `inv`, which must be biconvex.
fn lexmin_word(sys: &RootSystem, mut inv: Mask) -> WeylWord {
    let mut letters = Vec::with_capacity(count(inv));
    while inv != 0 {
        // A biconvex set always contains a simple root (a left descent).
        let i = (0..sys.rank()).find(|&i| inv >> i & 1 == 1).expect("biconvex set without simple root");
        letters.push(i + 1);
        inv = left_mul_simple(sys, i, inv);
    }
    WeylWord { letters }
}

/// A reduced word with the given inversion set, lexicographically least.
pub fn word_from_inversion_set(sys: &RootSystem, s: Mask) -> Result<WeylWord> {
    if !is_biconvex(sys, s) {
        return Err(Error::WrongClass("biconvex"));
    }
    Ok(lexmin_word(sys, s))
}

/// The canonical reduced word of any word.
pub fn reduce(sys: &RootSystem, w: &WeylWord) -> Result<WeylWord> {
    Ok(lexmin_word(sys, inversion_set(sys, w)?))
}

pub fn same_element(sys: &RootSystem, a: &WeylWord, b: &WeylWord) -> Result<bool> {
    Ok(inversion_set(sys, a)? == inversion_set(sys, b)?)
}

pub fn longest_element(sys: &RootSystem) -> WeylWord {
    lexmin_word(sys, sys.full_mask())
}

/// `|W(R)|` as a product over irreducible factors.
pub fn group_order(sys: &RootSystem) -> u128 {
    let fact = |n: u128| (1..=n).product::<u128>();
    sys.factors()
        .iter()
        .map(|f| {
            let n = f.rank as u128;
            match f.family {
                Family::A => fact(n + 1),
                Family::B | Family::C => (1u128 << n) * fact(n),
                Family::D => (1u128 << (n - 1)) * fact(n),
                Family::E => match n {
                    6 => 51_840,
                    7 => 2_903_040,
                    _ => 696_729_600,
                },
                Family::F => 1152,
                Family::G => 12,
            }
        })
        .product()
}

fn check_budget(sys: &RootSystem, budget: u128) -> Result<()> {
    let estimate = group_order(sys);
    if estimate > budget {
        return Err(Error::Budget { what: "Weyl group enumeration", estimate, limit: budget });
    }
    Ok(())
}

/// Inversion sets of all group elements, layer by layer in length.
pub fn all_inversion_sets(sys: &RootSystem, budget: u128) -> Result<Vec<Vec<Mask>>> {
    check_budget(sys, budget)?;
    let mut layers = vec![vec![0 as Mask]];
    loop {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for &v in layers.last().unwrap() {
            for i in 0..sys.rank() {
                if v >> i & 1 == 0 {
                    let u = left_mul_simple(sys, i, v);
                    if seen.insert(u) {
                        next.push(u);
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(layers);
        }
        next.sort_unstable();
        layers.push(next);
    }
}

/// One reduced word per element, sorted by length, then lexicographically.
pub fn all_elements(sys: &RootSystem, budget: u128) -> Result<Vec<WeylWord>> {
    let layers = all_inversion_sets(sys, budget)?;
    let mut out = Vec::new();
    for layer in layers {
        let mut words: Vec<WeylWord> = layer.into_iter().map(|inv| lexmin_word(sys, inv)).collect();
        words.sort();
        out.extend(words);
    }
    Ok(out)
}

/// Bruhat order via the lifting property: for a left descent `s` of `w`,
/// `x ≤ w` iff `sx ≤ sw` (when `s` is a descent of `x`) or `x ≤ sw`.
pub fn bruhat_leq(sys: &RootSystem, x: &WeylWord, w: &WeylWord) -> Result<bool> {
    Ok(bruhat_leq_sets(sys, inversion_set(sys, x)?, inversion_set(sys, w)?))
}

pub fn bruhat_leq_sets(sys: &RootSystem, mut x: Mask, mut w: Mask) -> bool {
    loop {
        if x == 0 {
            return true;
        }
        if count(x) >= count(w) {
            return x == w;
        }
        let s = (0..sys.rank()).find(|&i| w >> i & 1 == 1).unwrap();
        if x >> s & 1 == 1 {
            x = left_mul_simple(sys, s, x);
        }
        w = left_mul_simple(sys, s, w);
    }
}

/// Inversion sets of the Bruhat interval `[e, w]`: all products of
/// subwords of a reduced word.
pub fn lower_interval(sys: &RootSystem, w: &WeylWord) -> Result<Vec<Mask>> {
    let w = reduce(sys, w)?;
    let mut set: HashSet<Mask> = HashSet::from([0]);
    for &i in w.letters.iter().rev() {
        let grown: Vec<Mask> = set.iter().map(|&v| left_mul_simple(sys, i - 1, v)).collect();
        set.extend(grown);
    }
    let mut v: Vec<Mask> = set.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

/// `P_w(q) = Σ_{x ≤ w} q^{ℓ(x)}`.
pub fn interval_poincare(sys: &RootSystem, w: &WeylWord, budget: u128) -> Result<IntPoly> {
    check_budget(sys, budget)?;
    let lower = lower_interval(sys, w)?;
    let top = lower.iter().map(|&m| count(m)).max().unwrap_or(0);
    let mut c = vec![0i64; top + 1];
    for m in lower {
        c[count(m)] += 1;
    }
    Ok(IntPoly::new(c))
}

/// The multiset `{m_i}` with `P_w = Π [m_i + 1]_q`, if it exists.
pub fn exponents_of(sys: &RootSystem, w: &WeylWord, budget: u128) -> Result<Option<Vec<u32>>> {
    Ok(interval_poincare(sys, w, budget)?.q_integer_factors())
}

/// A word for the reflection `r_α` in positive root `a`: `u s_i u⁻¹` with
/// `α = u(α_i)`.
pub fn reflection_word(sys: &RootSystem, a: usize) -> WeylWord {
    let mut path = Vec::new();
    let mut cur = a;
    while !sys.is_simple(cur) {
        let j = (0..sys.rank())
            .find(|&j| {
                let img = sys.reflect(j, cur);
                img.positive && sys.height_of(img.index) < sys.height_of(cur)
            })
            .expect("non-simple positive root has a descending reflection");
        path.push(j + 1);
        cur = sys.reflect(j, cur).index;
    }
    let mut letters = path.clone();
    letters.push(cur + 1);
    letters.extend(path.iter().rev());
    WeylWord { letters }
}

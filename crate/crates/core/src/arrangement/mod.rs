//! Central hyperplane arrangements given by primitive integer normals.
//!
//! [`Arrangement`] is the explicit value type: restriction really changes
//! coordinates and the recursions memoize on the canonical normal list.
//! [`engine::FlatEngine`] computes the same invariants for arrangements
//! drawn from a fixed universe of vectors, sharing work across calls; root
//! subsets go through the engine of their root system.

pub mod engine;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero, kernel_basis, primitive, rank, span_key};
use crate::mask::{bit, bits, count, Mask};
use crate::poly::IntPoly;
use crate::rootsys::RootSystem;

/// Outcome of the freeness certification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FreenessVerdict {
    /// Inductively free; coexponents padded with zeros to the ambient
    /// dimension.
    Free(Vec<u32>),
    /// The Poincaré polynomial does not split.
    NonFree,
    /// Neither certificate applies.
    Ambiguous,
}

impl FreenessVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, FreenessVerdict::Free(_))
    }

    pub fn is_nonfree(&self) -> bool {
        matches!(self, FreenessVerdict::NonFree)
    }

    pub fn is_ambiguous(&self) -> bool {
        matches!(self, FreenessVerdict::Ambiguous)
    }

    pub fn is_decisive(&self) -> bool {
        !self.is_ambiguous()
    }

    /// Coexponents with the zero padding removed.
    pub fn coexponents(&self) -> Option<Vec<u32>> {
        match self {
            FreenessVerdict::Free(e) => Some(e.iter().copied().filter(|&m| m > 0).collect()),
            _ => None,
        }
    }

    pub fn padded_coexponents(&self) -> Option<&[u32]> {
        match self {
            FreenessVerdict::Free(e) => Some(e),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            FreenessVerdict::Free(_) => "free",
            FreenessVerdict::NonFree => "nonfree",
            FreenessVerdict::Ambiguous => "ambiguous",
        }
    }
}

impl fmt::Display for FreenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coexponents() {
            Some(e) => {
                let parts: Vec<String> = e.iter().map(u32::to_string).collect();
                write!(f, "free {{{}}}", parts.join(","))
            }
            None => f.write_str(self.status()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VerdictRepr {
    status: String,
    coexponents: Vec<u32>,
}

impl Serialize for FreenessVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VerdictRepr {
            status: self.status().into(),
            coexponents: self.padded_coexponents().map(<[u32]>::to_vec).unwrap_or_default(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreenessVerdict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = VerdictRepr::deserialize(d)?;
        match r.status.as_str() {
            "free" => Ok(FreenessVerdict::Free(r.coexponents)),
            "nonfree" => Ok(FreenessVerdict::NonFree),
            "ambiguous" => Ok(FreenessVerdict::Ambiguous),
            other => Err(serde::de::Error::custom(format!("unknown status `{other}`"))),
        }
    }
}

/// A flat given by the closed set of hyperplanes containing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    pub hyperplanes: Mask,
    pub corank: usize,
}

impl Flat {
    pub fn indices(&self) -> Vec<usize> {
        bits(self.hyperplanes).collect()
    }
}

/// Ziegler multirestriction to one hyperplane `H`: each restricted
/// hyperplane is keyed by the plane in which its preimages meet `H`'s
/// normal, with the number of preimages as multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiRestriction {
    pub base: Vec<i64>,
    pub entries: Vec<(Vec<Vec<i64>>, usize)>,
}

impl MultiRestriction {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// The multiplicities alone, sorted.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.entries.iter().map(|e| e.1).collect();
        m.sort_unstable();
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrangement {
    ambient_dim: usize,
    normals: Vec<Vec<i64>>,
}

impl Arrangement {
    /// Normalizes `normals` to primitive vectors with positive leading
    /// entry, sorted; proportional duplicates collapse.
    pub fn new(ambient_dim: usize, normals: Vec<Vec<i64>>) -> Result<Arrangement> {
        let mut out = Vec::with_capacity(normals.len());
        for n in normals {
            if n.len() != ambient_dim {
                return Err(Error::Precondition(format!(
                    "normal of length {} in dimension {ambient_dim}",
                    n.len()
                )));
            }
            if is_zero(&n) {
                return Err(Error::Precondition("zero normal".into()));
            }
            out.push(primitive(&n));
        }
        out.sort();
        out.dedup();
        Ok(Arrangement { ambient_dim, normals: out })
    }

    pub fn empty(ambient_dim: usize) -> Arrangement {
        Arrangement { ambient_dim, normals: Vec::new() }
    }

    /// The arrangement cut out by the positive roots in `mask`.
    pub fn from_subset(sys: &RootSystem, mask: Mask) -> Arrangement {
        let normals = bits(mask).map(|i| sys.root(i).to_i64()).collect();
        Arrangement::new(sys.rank(), normals).expect("roots are nonzero and pairwise non-proportional")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn rank(&self) -> usize {
        rank(&self.normals)
    }

    fn engine(&self) -> engine::FlatEngine {
        engine::FlatEngine::new(self.ambient_dim, self.normals.clone())
    }

    /// All flats of corank at most `max_corank` (all flats if `None`),
    /// ordered by corank, then by index set.
    pub fn flats(&self, max_corank: Option<usize>) -> Vec<Flat> {
        assert!(self.len() <= 128, "too many hyperplanes for flat masks");
        let e = self.engine();
        let top = max_corank.unwrap_or(self.ambient_dim).min(self.rank());
        (0..=top)
            .flat_map(|k| {
                e.flats_of_rank(k)
                    .iter()
                    .map(|&m| Flat { hyperplanes: m, corank: k })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// The closure of an arbitrary set of hyperplane indices.
    pub fn closure(&self, indices: Mask) -> Flat {
        let e = self.engine();
        let m = e.closure(indices);
        Flat { hyperplanes: m, corank: e.flat_rank(m) }
    }

    /// The hyperplanes containing flat `x`.
    pub fn localization(&self, x: &Flat) -> Result<Arrangement> {
        if self.closure(x.hyperplanes).hyperplanes != x.hyperplanes {
            return Err(Error::Precondition("index set is not a flat".into()));
        }
        Ok(self.sub_arrangement(x.hyperplanes))
    }

    pub fn sub_arrangement(&self, indices: Mask) -> Arrangement {
        Arrangement {
            ambient_dim: self.ambient_dim,
            normals: bits(indices).map(|i| self.normals[i].clone()).collect(),
        }
    }

    pub fn deletion(&self, i: usize) -> Result<Arrangement> {
        if i >= self.len() {
            return Err(Error::Index(i));
        }
        let mut normals = self.normals.clone();
        normals.remove(i);
        Ok(Arrangement { ambient_dim: self.ambient_dim, normals })
    }

    /// Restriction to hyperplane `i`, written in an integer basis of its
    /// lattice of points.
    pub fn restriction(&self, i: usize) -> Result<Arrangement> {
        if i >= self.len() {
            return Err(Error::Index(i));
        }
        let basis = kernel_basis(&self.normals[i]);
        let normals: Vec<Vec<i64>> = self
            .normals
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, n)| basis.iter().map(|b| dot(n, b)).collect::<Vec<i64>>())
            .filter(|v| !is_zero(v))
            .collect();
        Arrangement::new(self.ambient_dim - 1, normals)
    }

    pub fn ziegler_multirestriction(&self, i: usize) -> Result<MultiRestriction> {
        if i >= self.len() {
            return Err(Error::Index(i));
        }
        let base = &self.normals[i];
        let mut counts: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
        for (j, n) in self.normals.iter().enumerate() {
            if j != i {
                *counts.entry(span_key(self.ambient_dim, &[base.clone(), n.clone()])).or_default() += 1;
            }
        }
        let mut entries: Vec<_> = counts.into_iter().collect();
        entries.sort();
        Ok(MultiRestriction { base: base.clone(), entries })
    }

    /// Index of a given normal, after normalization.
    pub fn position(&self, normal: &[i64]) -> Option<usize> {
        self.normals.binary_search(&primitive(normal)).ok()
    }

    pub fn poincare_polynomial(&self) -> IntPoly {
        poincare_memo(self, &mut HashMap::new())
    }

    /// Exponents padded to the ambient dimension, if inductively free.
    pub fn inductively_free(&self) -> Option<Vec<u32>> {
        let mut q = HashMap::new();
        let mut f = HashMap::new();
        let exps = self.poincare_polynomial().splits()?;
        if !if_memo(self, &mut q, &mut f) {
            return None;
        }
        let mut padded = vec![0; self.ambient_dim - exps.len()];
        padded.extend(exps);
        Some(padded)
    }

    pub fn verify_freeness(&self) -> FreenessVerdict {
        if self.poincare_polynomial().splits().is_none() {
            return FreenessVerdict::NonFree;
        }
        match self.inductively_free() {
            Some(e) => FreenessVerdict::Free(e),
            None => FreenessVerdict::Ambiguous,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("arrangement serializes")
    }

    pub fn from_json(s: &str) -> Result<Arrangement> {
        let raw: Arrangement = serde_json::from_str(s)?;
        Arrangement::new(raw.ambient_dim, raw.normals)
    }

    /// Mask of all hyperplanes.
    pub fn all(&self) -> Mask {
        (0..self.len()).fold(0, |m, i| m | bit(i))
    }
}

fn poincare_memo(a: &Arrangement, memo: &mut HashMap<Arrangement, IntPoly>) -> IntPoly {
    if a.is_empty() {
        return IntPoly::one();
    }
    if let Some(p) = memo.get(a) {
        return p.clone();
    }
    let last = a.len() - 1;
    let del = a.deletion(last).unwrap();
    let res = a.restriction(last).unwrap();
    let p = &poincare_memo(&del, memo) + &poincare_memo(&res, memo).shift();
    memo.insert(a.clone(), p.clone());
    p
}

fn remove_one(sup: &[u32], sub: &[u32]) -> bool {
    let mut s = sup.to_vec();
    for x in sub {
        match s.iter().position(|y| y == x) {
            Some(p) => {
                s.remove(p);
            }
            None => return false,
        }
    }
    s.len() == 1
}

fn if_memo(
    a: &Arrangement,
    q: &mut HashMap<Arrangement, IntPoly>,
    f: &mut HashMap<Arrangement, bool>,
) -> bool {
    if a.is_empty() {
        return true;
    }
    if let Some(&b) = f.get(a) {
        return b;
    }
    let result = match poincare_memo(a, q).splits() {
        None => false,
        Some(e) if e.len() <= 2 => true,
        Some(exps) => (0..a.len()).any(|i| {
            let res = a.restriction(i).unwrap();
            let ok = poincare_memo(&res, q)
                .splits()
                .is_some_and(|s| remove_one(&exps, &s));
            ok && if_memo(&res, q, f) && if_memo(&a.deletion(i).unwrap(), q, f)
        }),
    };
    f.insert(a.clone(), result);
    result
}

/// Number of hyperplanes, for callers that only hold a mask.
pub fn size(mask: Mask) -> usize {
    count(mask)
}

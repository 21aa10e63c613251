//! Memoized Poincaré polynomials and inductive freeness over a fixed
//! universe of pairwise non-proportional integer vectors.
//!
//! Every arrangement reachable from a sub-arrangement of the universe by
//! deletion and restriction is a contraction: the images in `V / span(W)` of
//! a set of universe vectors, where `W` is a flat of the universe. Two
//! vectors give the same hyperplane there iff they span the same flat over
//! `W`. A state is therefore a pair `(W, M)` of masks, where `W` is a closed
//! flat and `M` is a union of full classes `join(W, t) \ W`. States are keys
//! for all memo tables, so results are shared between arrangements that
//! have sub-arrangements in common.

use std::sync::{Arc, Mutex};

use dashmap::DashMap;

use super::FreenessVerdict;
use crate::linalg::Echelon;
use crate::mask::{bit, bits, count, lowest, Mask};
use crate::poly::IntPoly;

struct FlatInfo {
    rank: usize,
    echelon: Echelon,
}

pub struct FlatEngine {
    dim: usize,
    vectors: Vec<Vec<i64>>,
    flats: DashMap<Mask, Arc<FlatInfo>>,
    joins: DashMap<(Mask, u8), Mask>,
    poincare: DashMap<(Mask, Mask), IntPoly>,
    free: DashMap<(Mask, Mask), bool>,
    verdicts: DashMap<Mask, FreenessVerdict>,
    levels: Mutex<Vec<Arc<Vec<Mask>>>>,
}

impl std::fmt::Debug for FlatEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FlatEngine")
            .field("dim", &self.dim)
            .field("vectors", &self.vectors.len())
            .field("flats", &self.flats.len())
            .field("poincare", &self.poincare.len())
            .field("free", &self.free.len())
            .finish()
    }
}

/// `sub` equals `sup` with exactly one element removed (both sorted).
fn is_one_removed(sup: &[u32], sub: &[u32]) -> bool {
    if sub.len() + 1 != sup.len() {
        return false;
    }
    let mut skipped = false;
    let mut j = 0;
    for &x in sup {
        if j < sub.len() && sub[j] == x {
            j += 1;
        } else if !skipped {
            skipped = true;
        } else {
            return false;
        }
    }
    j == sub.len()
}

impl FlatEngine {
    pub fn new(dim: usize, vectors: Vec<Vec<i64>>) -> Self {
        assert!(vectors.len() <= 128, "universe too large for a mask");
        assert!(vectors.iter().all(|v| v.len() == dim), "vector length mismatch");
        let engine = FlatEngine {
            dim,
            vectors,
            flats: DashMap::new(),
            joins: DashMap::new(),
            poincare: DashMap::new(),
            free: DashMap::new(),
            verdicts: DashMap::new(),
            levels: Mutex::new(vec![Arc::new(vec![0])]),
        };
        engine.flats.insert(0, Arc::new(FlatInfo { rank: 0, echelon: Echelon::new(dim) }));
        engine
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    fn info(&self, flat: Mask) -> Arc<FlatInfo> {
        if let Some(i) = self.flats.get(&flat) {
            return i.clone();
        }
        let mut e = Echelon::new(self.dim);
        for i in bits(flat) {
            e.insert(&self.vectors[i]);
        }
        let info = Arc::new(FlatInfo { rank: e.rank(), echelon: e });
        self.flats.insert(flat, info.clone());
        info
    }

    fn close(&self, e: &Echelon) -> Mask {
        let mut m = 0;
        for (i, v) in self.vectors.iter().enumerate() {
            if e.contains(v) {
                m |= bit(i);
            }
        }
        m
    }

    /// All universe vectors in the span of `mask`.
    pub fn closure(&self, mask: Mask) -> Mask {
        let mut e = Echelon::new(self.dim);
        for i in bits(mask) {
            e.insert(&self.vectors[i]);
        }
        let flat = self.close(&e);
        self.flats
            .entry(flat)
            .or_insert_with(|| Arc::new(FlatInfo { rank: e.rank(), echelon: e }));
        flat
    }

    pub fn rank(&self, mask: Mask) -> usize {
        self.info(self.closure(mask)).rank
    }

    /// Rank of an already closed flat.
    pub fn flat_rank(&self, flat: Mask) -> usize {
        self.info(flat).rank
    }

    /// The flat spanned by closed flat `w` and vector `t`.
    pub fn join(&self, w: Mask, t: usize) -> Mask {
        if w >> t & 1 == 1 {
            return w;
        }
        if let Some(j) = self.joins.get(&(w, t as u8)) {
            return *j;
        }
        let info = self.info(w);
        let mut e = info.echelon.clone();
        e.insert(&self.vectors[t]);
        let flat = self.close(&e);
        self.flats
            .entry(flat)
            .or_insert_with(|| Arc::new(FlatInfo { rank: e.rank(), echelon: e }));
        self.joins.insert((w, t as u8), flat);
        flat
    }

    /// Class-saturates `m` over flat `w`: the union of `join(w, t) \ w`.
    pub fn saturate(&self, w: Mask, m: Mask) -> Mask {
        let mut rem = m & !w;
        let mut out = 0;
        while let Some(t) = lowest(rem) {
            let cls = self.join(w, t) & !w;
            out |= cls;
            rem &= !cls;
        }
        out
    }

    /// Hyperplane classes of state `(w, m)`.
    pub fn classes(&self, w: Mask, m: Mask) -> Vec<Mask> {
        let mut rem = m;
        let mut out = Vec::new();
        while let Some(t) = lowest(rem) {
            let cls = self.join(w, t) & !w;
            out.push(cls);
            rem &= !cls;
        }
        out
    }

    /// Restriction of state `(w, m)` to the hyperplane of class `cls`.
    pub fn restrict(&self, w: Mask, m: Mask, cls: Mask) -> (Mask, Mask) {
        let t = lowest(cls).expect("empty class");
        let w2 = self.join(w, t);
        (w2, self.saturate(w2, m & !w2))
    }

    /// Poincaré polynomial of state `(w, m)` by deletion-restriction.
    pub fn poincare(&self, w: Mask, m: Mask) -> IntPoly {
        if m == 0 {
            return IntPoly::one();
        }
        if let Some(p) = self.poincare.get(&(w, m)) {
            return p.clone();
        }
        let t = lowest(m).unwrap();
        let cls = self.join(w, t) & !w;
        let rest = m & !cls;
        let p = if rest == 0 {
            IntPoly::linear(1)
        } else {
            let (w2, m2) = self.restrict(w, m, cls);
            &self.poincare(w, rest) + &self.poincare(w2, m2).shift()
        };
        self.poincare.insert((w, m), p.clone());
        p
    }

    /// Inductive freeness of state `(w, m)`. Exponents, when free, are the
    /// roots of the Poincaré polynomial.
    pub fn inductively_free(&self, w: Mask, m: Mask) -> bool {
        if m == 0 {
            return true;
        }
        if let Some(b) = self.free.get(&(w, m)) {
            return *b;
        }
        let q = self.poincare(w, m);
        let result = match q.splits() {
            None => false,
            // Every arrangement of rank <= 2 is inductively free.
            Some(e) if e.len() <= 2 => true,
            Some(exps) => self.find_certificate(w, m, &exps),
        };
        self.free.insert((w, m), result);
        result
    }

    fn find_certificate(&self, w: Mask, m: Mask, exps: &[u32]) -> bool {
        let classes = self.classes(w, m);
        // Candidates whose restriction has the right Poincaré polynomial,
        // smaller restrictions first.
        let mut candidates: Vec<(usize, Mask, Mask, Mask)> = Vec::new();
        for &cls in &classes {
            let (w2, m2) = self.restrict(w, m, cls);
            let ok = self
                .poincare(w2, m2)
                .splits()
                .is_some_and(|sub| is_one_removed(exps, &sub));
            if ok {
                candidates.push((count(m2), cls, w2, m2));
            }
        }
        candidates.sort_by_key(|c| c.0);
        candidates
            .into_iter()
            .any(|(_, cls, w2, m2)| self.inductively_free(w2, m2) && self.inductively_free(w, m & !cls))
    }

    /// Freeness verdict of the arrangement cut out by universe vectors in
    /// `mask`, with coexponents padded by zeros to the ambient dimension.
    pub fn verdict(&self, mask: Mask) -> FreenessVerdict {
        if let Some(v) = self.verdicts.get(&mask) {
            return v.clone();
        }
        let v = self.verdict_state(0, mask);
        self.verdicts.insert(mask, v.clone());
        v
    }

    /// Verdict for a general state; padding is to `dim - rank(w)`.
    pub fn verdict_state(&self, w: Mask, m: Mask) -> FreenessVerdict {
        let ambient = self.dim - self.flat_rank(w);
        let q = self.poincare(w, m);
        match q.splits() {
            None => FreenessVerdict::NonFree,
            Some(mut exps) => {
                if self.inductively_free(w, m) {
                    let mut padded = vec![0; ambient - exps.len()];
                    padded.append(&mut exps);
                    FreenessVerdict::Free(padded)
                } else {
                    FreenessVerdict::Ambiguous
                }
            }
        }
    }

    /// Flats of the whole universe of rank `k`, sorted by mask.
    pub fn flats_of_rank(&self, k: usize) -> Arc<Vec<Mask>> {
        let mut levels = self.levels.lock().unwrap();
        while levels.len() <= k {
            let prev = levels.last().unwrap().clone();
            let mut next: Vec<Mask> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for &f in prev.iter() {
                for t in 0..self.vectors.len() {
                    if f >> t & 1 == 1 {
                        continue;
                    }
                    let g = self.join(f, t);
                    if seen.insert(g) {
                        next.push(g);
                    }
                }
            }
            next.sort_unstable();
            levels.push(Arc::new(next));
        }
        levels[k].clone()
    }

    /// Flats of the universe spanned by subsets of `gens`, of rank exactly
    /// `k`, sorted by mask.
    pub fn flats_spanned_by(&self, gens: Mask, k: usize) -> Vec<Mask> {
        let mut level = vec![0 as Mask];
        for _ in 0..k {
            let mut seen = std::collections::HashSet::new();
            let mut next = Vec::new();
            for &f in &level {
                for t in bits(gens & !f) {
                    let g = self.join(f, t);
                    if seen.insert(g) {
                        next.push(g);
                    }
                }
            }
            level = next;
        }
        level.sort_unstable();
        level
    }

    pub fn cache_sizes(&self) -> (usize, usize, usize) {
        (self.flats.len(), self.poincare.len(), self.free.len())
    }
}

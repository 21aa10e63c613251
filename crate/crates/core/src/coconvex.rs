//! Convex, coconvex and biconvex subsets of positive roots, lower order
//! ideals and their exponent multisets, and exhaustive enumeration.

use crate::error::{Error, Result};
use crate::mask::{bit, bits, Mask};
use crate::rootsys::{Restriction, RootSystem, Subspace};

/// Subset of positive roots; bit `i` is positive root `i`.
pub type RootSubset = Mask;

/// Default cap on `|R^+|` for exhaustive enumeration.
pub const DEFAULT_ENUM_BUDGET: usize = 30;

/// Roots `b` such that `a + b` is a root, as a mask per `a`.
fn partners(sys: &RootSystem, a: usize) -> Mask {
    (0..sys.num_positive()).filter(|&b| sys.sum(a, b).is_some()).fold(0, |m, b| m | bit(b))
}

pub fn is_convex(sys: &RootSystem, s: Mask) -> bool {
    for a in bits(s) {
        for b in bits(s & !((bit(a) << 1) - 1)) {
            if let Some(c) = sys.sum(a, b) {
                if s >> c & 1 == 0 {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_coconvex(sys: &RootSystem, s: Mask) -> bool {
    is_convex(sys, sys.full_mask() & !s)
}

pub fn is_biconvex(sys: &RootSystem, s: Mask) -> bool {
    is_convex(sys, s) && is_coconvex(sys, s)
}

/// Closed downward under dominance.
pub fn is_lower_order_ideal(sys: &RootSystem, s: Mask) -> bool {
    bits(s).all(|b| (0..sys.num_positive()).all(|a| !sys.dominance_leq(a, b) || s >> a & 1 == 1))
}

/// The exponent multiset of a lower order ideal: `i` with multiplicity
/// `h_i - h_{i+1}`, where `h_i` counts roots of height `i` and `h_0 = l`.
pub fn exp_multiset(sys: &RootSystem, s: Mask) -> Result<Vec<u32>> {
    if !is_lower_order_ideal(sys, s) {
        return Err(Error::WrongClass("a lower order ideal"));
    }
    let top = bits(s).map(|i| sys.height_of(i)).max().unwrap_or(0) as usize;
    let mut h = vec![0usize; top + 2];
    h[0] = sys.rank();
    for i in bits(s) {
        h[sys.height_of(i) as usize] += 1;
    }
    let mut out = Vec::with_capacity(sys.rank());
    for i in 0..=top {
        out.extend(std::iter::repeat_n(i as u32, h[i] - h[i + 1]));
    }
    Ok(out)
}

fn check_budget(sys: &RootSystem, budget: usize) -> Result<()> {
    if sys.num_positive() > budget {
        return Err(Error::Budget {
            what: "subset enumeration (positive roots)",
            estimate: sys.num_positive() as u128,
            limit: budget as u128,
        });
    }
    Ok(())
}

/// All convex subsets, sorted by mask.
///
/// Roots are decided from the top height down. A root can join only if its
/// sum with every chosen root is either not a root or already chosen; sums
/// are higher, so they are always decided first.
pub fn enumerate_convex(sys: &RootSystem, budget: usize) -> Result<Vec<Mask>> {
    check_budget(sys, budget)?;
    let n = sys.num_positive();
    let part: Vec<Mask> = (0..n).map(|a| partners(sys, a)).collect();
    let mut out = Vec::new();
    fn go(sys: &RootSystem, part: &[Mask], k: usize, s: Mask, out: &mut Vec<Mask>) {
        if k == 0 {
            out.push(s);
            return;
        }
        let r = k - 1;
        go(sys, part, r, s, out);
        let ok = bits(s & part[r]).all(|b| s >> sys.sum(r, b).unwrap() & 1 == 1);
        if ok {
            go(sys, part, r, s | bit(r), out);
        }
    }
    go(sys, &part, n, 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// All coconvex subsets, sorted by mask.
pub fn enumerate_coconvex(sys: &RootSystem, budget: usize) -> Result<Vec<Mask>> {
    let full = sys.full_mask();
    let mut v: Vec<Mask> = enumerate_convex(sys, budget)?.into_iter().map(|s| full & !s).collect();
    v.sort_unstable();
    Ok(v)
}

/// All biconvex subsets (inversion sets), sorted by mask.
pub fn enumerate_biconvex(sys: &RootSystem, budget: usize) -> Result<Vec<Mask>> {
    let mut v = enumerate_convex(sys, budget)?;
    v.retain(|&s| is_coconvex(sys, s));
    Ok(v)
}

/// `S_U = S ∩ U` in the restriction's own indexing.
pub fn intersect_with_subspace(sys: &RootSystem, s: Mask, u: &Subspace) -> Result<(Restriction, Mask)> {
    let r = sys.restrict(u)?;
    let m = r.pull(s);
    Ok((r, m))
}

/// The dual system and the coroot image `Š` of `s`.
pub fn dual_subset(sys: &RootSystem, s: Mask) -> Result<(RootSystem, Mask)> {
    let (dual, map) = sys.dual()?;
    Ok((dual, RootSystem::map_mask(s, &map)))
}

/// Sum of heights, which strictly drops under nontrivial translation.
pub fn height_sum(sys: &RootSystem, s: Mask) -> u32 {
    bits(s).map(|i| sys.height_of(i)).sum()
}

//! Peterson translation of coconvex sets and the translation graphs.
//!
//! `τ(S, α)` replaces `S ∩ Σ` by the bottom `|S ∩ Σ|` roots of `Σ`, for
//! every `α`-string `Σ`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arrangement::FreenessVerdict;
use crate::coconvex::{enumerate_coconvex, exp_multiset, is_biconvex, is_coconvex, is_lower_order_ideal};
use crate::error::{Error, Result};
use crate::mask::{bit, bits, count, to_hex, Mask};
use crate::rootsys::{Family, RootSystem};
use crate::weyl::{inversion_set, reflection_word, reduce, WeylWord};

pub fn translate(sys: &RootSystem, s: Mask, a: usize) -> Mask {
    let mut out = 0;
    for string in sys.string_partition(a) {
        let k = string.iter().filter(|&&r| s >> r & 1 == 1).count();
        for &r in &string[..k] {
            out |= bit(r);
        }
    }
    out
}

/// Whether `a` lies in an irreducible factor of type `C` or `F`; `B_2`
/// counts as `C_2`.
pub fn in_cf_factor(sys: &RootSystem, a: usize) -> bool {
    let comp = sys.component_of(a);
    match sys.component_families()[comp] {
        Family::C | Family::F => true,
        Family::B => sys.component_simple(comp).len() == 2,
        _ => false,
    }
}

pub fn has_cf_factor(sys: &RootSystem) -> bool {
    (0..sys.num_components()).any(|c| in_cf_factor(sys, sys.component_simple(c)[0]))
}

/// Roots for which translation is guaranteed to preserve freeness.
pub fn qualifies(sys: &RootSystem, a: usize) -> bool {
    sys.is_long(a) || !in_cf_factor(sys, a)
}

/// One step along the canonical path: the first root of `s` (in root
/// order) that moves it.
pub fn canonical_step(sys: &RootSystem, s: Mask) -> Option<(usize, Mask)> {
    bits(s).find_map(|a| {
        let t = translate(sys, s, a);
        (t != s).then_some((a, t))
    })
}

/// Translates `s` to a lower order ideal along the canonical path. Each
/// path entry is the set before a step and the root used.
pub fn translate_to_ideal(sys: &RootSystem, s: Mask) -> Result<(Mask, Vec<(Mask, usize)>)> {
    if !is_coconvex(sys, s) {
        return Err(Error::WrongClass("coconvex"));
    }
    let mut cur = s;
    let mut path = Vec::new();
    while let Some((a, t)) = canonical_step(sys, cur) {
        path.push((cur, a));
        cur = t;
    }
    debug_assert!(is_lower_order_ideal(sys, cur));
    Ok((cur, path))
}

fn free_verdict(sys: &RootSystem, s: Mask) -> Result<bool> {
    match sys.engine().verdict(s) {
        FreenessVerdict::Ambiguous => Err(Error::Ambiguous(sys.format_mask(s))),
        v => Ok(v.is_free()),
    }
}

/// Coexponents of `𝒜(S)` read off the ideal reached by translation.
///
/// Unless `unchecked`, requires `S` coconvex with `𝒜(S)` free, and one of:
/// no factors of type `C`/`F`, `S` biconvex, or `S` Peterson-free.
pub fn coexponents_via_translation(sys: &RootSystem, s: Mask, unchecked: bool) -> Result<Vec<u32>> {
    if !unchecked {
        if !is_coconvex(sys, s) {
            return Err(Error::WrongClass("coconvex"));
        }
        if !free_verdict(sys, s)? {
            return Err(Error::Precondition("arrangement is not free".into()));
        }
        if has_cf_factor(sys) && !is_biconvex(sys, s) && !is_peterson_free(sys, s)? {
            return Err(Error::Precondition(
                "type C or F factor, and the set is neither biconvex nor Peterson-free".into(),
            ));
        }
    }
    let (ideal, _) = translate_to_ideal(sys, s)?;
    exp_multiset(sys, ideal)
}

/// `𝒜(S)` free, and `𝒜(τ(S, α))` free for every `α ∈ S`.
pub fn is_peterson_free(sys: &RootSystem, s: Mask) -> Result<bool> {
    if !is_coconvex(sys, s) {
        return Err(Error::WrongClass("coconvex"));
    }
    if !free_verdict(sys, s)? {
        return Ok(false);
    }
    for a in bits(s) {
        let t = translate(sys, s, a);
        if t != s && !free_verdict(sys, t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same answer as [`is_peterson_free`], checking `S_U` in every
/// three-dimensional root-spanned subspace `U` once `𝒜(S)` is known free.
pub fn is_peterson_free_local(sys: &RootSystem, s: Mask) -> Result<bool> {
    if !is_coconvex(sys, s) {
        return Err(Error::WrongClass("coconvex"));
    }
    if !free_verdict(sys, s)? {
        return Ok(false);
    }
    if sys.rank() < 3 {
        return Ok(true);
    }
    for &flat in sys.engine().flats_of_rank(3).iter() {
        let su = s & flat;
        // Arrangements of at most three hyperplanes are free.
        if count(su) < 4 {
            continue;
        }
        for a in bits(su) {
            // Strings through roots of U stay in U, so this is τ(S_U, α).
            let t = translate(sys, su, a);
            if t != su && !free_verdict(sys, t)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the edge `S → τ(S, α)` survives in the filtered graph: no
/// three-dimensional `U ∋ α` has `𝒜(S_U)` free and `𝒜(τ(S_U, α))` not free.
pub fn edge_preserves_freeness(sys: &RootSystem, s: Mask, a: usize) -> Result<bool> {
    edge_preserves_freeness_upto(sys, s, a, 3)
}

/// As [`edge_preserves_freeness`], over subspaces of dimension `3..=max_dim`.
pub fn edge_preserves_freeness_upto(sys: &RootSystem, s: Mask, a: usize, max_dim: usize) -> Result<bool> {
    let e = sys.engine();
    for k in 3..=max_dim.min(sys.rank()) {
        for &flat in e.flats_of_rank(k).iter() {
            if flat >> a & 1 == 0 {
                continue;
            }
            let su = s & flat;
            if count(su) < 4 {
                continue;
            }
            let tu = translate(sys, su, a);
            let (vs, vt) = (e.verdict(su), e.verdict(tu));
            match (&vs, &vt) {
                (FreenessVerdict::Free(_), FreenessVerdict::NonFree) => return Ok(false),
                (FreenessVerdict::Free(_), FreenessVerdict::Ambiguous)
                | (FreenessVerdict::Ambiguous, FreenessVerdict::NonFree | FreenessVerdict::Ambiguous) => {
                    return Err(Error::Ambiguous(format!(
                        "edge test {} by {}",
                        sys.format_mask(su),
                        sys.root(a)
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Index of the translating positive root.
    pub root: usize,
}

/// The Peterson translation graph on all coconvex sets, optionally
/// filtered to freeness-preserving edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationGraph {
    pub filtered: bool,
    pub vertices: Vec<Mask>,
    pub edges: Vec<Edge>,
}

/// Default cap on rank for graph construction.
pub const DEFAULT_GRAPH_RANK: usize = 4;

pub fn build_graph(sys: &RootSystem, filtered: bool, max_rank: usize) -> Result<TranslationGraph> {
    if sys.rank() > max_rank {
        return Err(Error::Budget {
            what: "translation graph (rank)",
            estimate: sys.rank() as u128,
            limit: max_rank as u128,
        });
    }
    let vertices = enumerate_coconvex(sys, crate::coconvex::DEFAULT_ENUM_BUDGET)?;
    let mut edges = Vec::new();
    for (from, &s) in vertices.iter().enumerate() {
        // Distinct targets only; the witness is the first root producing it.
        let mut seen: Vec<Mask> = Vec::new();
        for a in bits(s) {
            let t = translate(sys, s, a);
            if t == s || seen.contains(&t) {
                continue;
            }
            if filtered && !edge_preserves_freeness(sys, s, a)? {
                continue;
            }
            seen.push(t);
            let to = vertices.binary_search(&t).expect("translate of a coconvex set is coconvex");
            edges.push(Edge { from, to, root: a });
        }
    }
    Ok(TranslationGraph { filtered, vertices, edges })
}

impl TranslationGraph {
    pub fn out_degree(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for e in &self.edges {
            d[e.from] += 1;
        }
        d
    }

    /// Vertices with no outgoing edges.
    pub fn terminal(&self) -> Vec<Mask> {
        let d = self.out_degree();
        self.vertices.iter().zip(d).filter(|(_, d)| *d == 0).map(|(v, _)| *v).collect()
    }

    /// Vertex indices reachable from vertex `start`, including itself.
    pub fn reachable(&self, start: usize) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    pub fn index_of(&self, s: Mask) -> Option<usize> {
        self.vertices.binary_search(&s).ok()
    }

    pub fn to_dot(&self, sys: &RootSystem) -> String {
        let terminal: std::collections::HashSet<Mask> = self.terminal().into_iter().collect();
        let mut out = String::new();
        let name = if self.filtered { "GFr" } else { "G" };
        writeln!(out, "digraph {name} {{").unwrap();
        for (i, &v) in self.vertices.iter().enumerate() {
            let ideal = is_lower_order_ideal(sys, v);
            writeln!(
                out,
                "  v{i} [label=\"{}\", ideal={ideal}, terminal={}];",
                to_hex(v),
                terminal.contains(&v)
            )
            .unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, sys.root(e.root)).unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, sys: &RootSystem) -> serde_json::Value {
        let terminal: std::collections::HashSet<Mask> = self.terminal().into_iter().collect();
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push(serde_json::json!({"to": e.to, "root": sys.root(e.root).to_string()}));
        }
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .zip(adj)
            .map(|(&v, out)| {
                serde_json::json!({
                    "mask": to_hex(v),
                    "ideal": is_lower_order_ideal(sys, v),
                    "terminal": terminal.contains(&v),
                    "edges": out,
                })
            })
            .collect();
        serde_json::json!({"system": sys.name(), "filtered": self.filtered, "vertices": vertices})
    }
}

/// Translation of the pair `(S, I(y))` by `α ∈ I(y)`: returns `τ(S, α)`
/// and a reduced word for `r_α y`, checking `I(r_α y) ⊆ τ(S, α)`.
pub fn augmented_translate(sys: &RootSystem, s: Mask, y: &WeylWord, a: usize) -> Result<(Mask, WeylWord)> {
    let iy = inversion_set(sys, y)?;
    if !is_coconvex(sys, s) {
        return Err(Error::WrongClass("coconvex"));
    }
    if iy & !s != 0 {
        return Err(Error::Precondition("I(y) is not contained in S".into()));
    }
    if iy >> a & 1 == 0 {
        return Err(Error::Precondition(format!("{} is not in I(y)", sys.root(a))));
    }
    let t = translate(sys, s, a);
    let ry = reduce(sys, &reflection_word(sys, a).concat(y))?;
    let iry = inversion_set(sys, &ry)?;
    if iry & !t != 0 {
        return Err(Error::Precondition(format!(
            "inclusion I(r_a y) ⊆ τ(S, a) fails for S = {}",
            sys.format_mask(s)
        )));
    }
    Ok((t, ry))
}

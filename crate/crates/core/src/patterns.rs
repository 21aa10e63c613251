//! Root-system patterns, the minimal non-free pattern search and the
//! local-to-global checks `(L_k)` and `(T_k)`.
//!
//! Subspaces are always root-spanned: `R_U` only depends on `R ∩ U`, so the
//! subspaces of `V` that matter are the flats of the positive-root
//! universe.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arrangement::FreenessVerdict;
use crate::coconvex::{enumerate_biconvex, enumerate_coconvex, is_biconvex, is_coconvex, DEFAULT_ENUM_BUDGET};
use crate::error::{Error, Result};
use crate::mask::{count, from_hex, to_hex, Mask};
use crate::peterson::build_graph;
use crate::rootsys::{cartan_isomorphisms, format_factors, parse_factors, CartanType, Labeling, RootSystem, Subspace};
use crate::weyl::word_from_inversion_set;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternClass {
    Coconvex,
    Biconvex,
}

impl PatternClass {
    pub fn name(self) -> &'static str {
        match self {
            PatternClass::Coconvex => "coconvex",
            PatternClass::Biconvex => "biconvex",
        }
    }

    pub fn admits(self, sys: &RootSystem, s: Mask) -> bool {
        match self {
            PatternClass::Coconvex => is_coconvex(sys, s),
            PatternClass::Biconvex => is_biconvex(sys, s),
        }
    }
}

impl FromStr for PatternClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coconvex" => Ok(PatternClass::Coconvex),
            "biconvex" => Ok(PatternClass::Biconvex),
            _ => Err(Error::Parse(s.into(), "expected coconvex or biconvex".into())),
        }
    }
}

/// A marked subset `S_0` of a root system `R_0`.
#[derive(Clone, Debug)]
pub struct Pattern {
    pub system: Arc<RootSystem>,
    pub subset: Mask,
    pub class: PatternClass,
}

impl Pattern {
    pub fn new(system: Arc<RootSystem>, subset: Mask, class: PatternClass) -> Result<Pattern> {
        if !class.admits(&system, subset) {
            return Err(Error::WrongClass(class.name()));
        }
        Ok(Pattern { system, subset, class })
    }

    /// Whether `S_0` spans the ambient space of `R_0`.
    pub fn is_spanning(&self) -> bool {
        self.system.engine().rank(self.subset) == self.system.rank()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Free,
    NotMinimal,
    MinimalPattern,
    Ambiguous,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Free => "FREE",
            Status::NotMinimal => "NOT_MINIMAL",
            Status::MinimalPattern => "MINIMAL_PATTERN",
            Status::Ambiguous => "AMBIGUOUS",
        })
    }
}

/// Positive-root bijections `R1^+ → R2^+` induced by Dynkin diagram
/// isomorphisms.
pub fn iso_maps(r1: &RootSystem, r2: &RootSystem) -> Vec<Vec<usize>> {
    r1.iso_maps(r2)
}

fn push_along(map: &[usize], m: Mask) -> Mask {
    RootSystem::map_mask(m, map)
}

/// A subspace `U` with `R_U ≅ R_0` identifying `S_U` with `S_0`.
pub fn contains_pattern(sys: &RootSystem, s: Mask, p: &Pattern) -> Result<Option<Subspace>> {
    let k = p.system.rank();
    if k > sys.rank() {
        return Ok(None);
    }
    let target = p.system.classify();
    let want = count(p.subset);
    for &flat in sys.engine().flats_of_rank(k).iter() {
        if count(s & flat) != want {
            continue;
        }
        let res = sys.restrict_flat(flat)?;
        if res.system.classify() != target {
            continue;
        }
        let su = res.pull(s);
        if iso_maps(&res.system, &p.system).iter().any(|m| push_along(m, su) == p.subset) {
            return Ok(Some(Subspace::from_flat(sys, flat, Vec::new())));
        }
    }
    Ok(None)
}

/// The minimal-pattern procedure for one coconvex set.
///
/// Subspaces `U` range over root-spanned subspaces with `3 ≤ dim U < l`,
/// in increasing dimension and then root-mask order; `U = span(S)` is
/// therefore visited whenever `S` does not span `V`.
pub fn classify_subset(sys: &RootSystem, s: Mask) -> Status {
    let e = sys.engine();
    let v = e.verdict(s);
    if v.is_free() {
        return Status::Free;
    }
    for k in 3..sys.rank() {
        for &flat in e.flats_of_rank(k).iter() {
            let su = s & flat;
            // At most three hyperplanes are always free.
            if count(su) < 4 {
                continue;
            }
            match e.verdict(su) {
                FreenessVerdict::NonFree => return Status::NotMinimal,
                FreenessVerdict::Ambiguous => return Status::Ambiguous,
                FreenessVerdict::Free(_) => {}
            }
        }
    }
    if v.is_nonfree() {
        Status::MinimalPattern
    } else {
        Status::Ambiguous
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub system: String,
    pub class: PatternClass,
    pub statuses: Vec<(Mask, Status)>,
    pub counts: BTreeMap<Status, usize>,
    pub patterns: Vec<Mask>,
}

impl SearchReport {
    pub fn count(&self, s: Status) -> usize {
        self.counts.get(&s).copied().unwrap_or(0)
    }
}

pub fn find_minimal_patterns(sys: &RootSystem, class: PatternClass) -> Result<SearchReport> {
    find_minimal_patterns_with(sys, class, DEFAULT_ENUM_BUDGET, |_, _| {})
}

/// As [`find_minimal_patterns`] with an enumeration budget and a progress
/// callback receiving `(done, total)`.
pub fn find_minimal_patterns_with(
    sys: &RootSystem,
    class: PatternClass,
    budget: usize,
    mut progress: impl FnMut(usize, usize),
) -> Result<SearchReport> {
    let sets = match class {
        PatternClass::Coconvex => enumerate_coconvex(sys, budget)?,
        PatternClass::Biconvex => enumerate_biconvex(sys, budget)?,
    };
    let total = sets.len();
    let mut statuses = Vec::with_capacity(total);
    let mut counts = BTreeMap::new();
    let mut patterns = Vec::new();
    for chunk in sets.chunks(4096) {
        progress(statuses.len(), total);
        let done: Vec<Status> = chunk.par_iter().map(|&s| classify_subset(sys, s)).collect();
        for (&s, st) in chunk.iter().zip(done) {
            *counts.entry(st).or_insert(0) += 1;
            if st == Status::MinimalPattern {
                patterns.push(s);
            }
            statuses.push((s, st));
        }
    }
    progress(total, total);
    Ok(SearchReport { system: sys.name(), class, statuses, counts, patterns })
}

/// Outcome of an `(L_k)` or `(T_k)` run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<Mask>,
}

/// Whether `S` is a counterexample: all localizations of corank `≤ k`
/// are free but `𝒜(S)` is not. Ambiguity is an error only where it
/// decides the answer.
fn is_local_counterexample(sys: &RootSystem, s: Mask, k: usize) -> Result<bool> {
    let e = sys.engine();
    let v = e.verdict(s);
    if v.is_free() {
        return Ok(false);
    }
    let mut unknown = None;
    for r in 1..=k.min(sys.rank()) {
        for &flat in e.flats_of_rank(r).iter() {
            let sx = s & flat;
            if count(sx) < 4 {
                continue;
            }
            match e.verdict(sx) {
                FreenessVerdict::NonFree => return Ok(false),
                FreenessVerdict::Ambiguous => unknown = unknown.or(Some(sx)),
                FreenessVerdict::Free(_) => {}
            }
        }
    }
    if let Some(sx) = unknown {
        return Err(Error::Ambiguous(sys.format_mask(sx)));
    }
    match v {
        FreenessVerdict::NonFree => Ok(true),
        _ => Err(Error::Ambiguous(sys.format_mask(s))),
    }
}

fn run_check(sys: &RootSystem, sets: &[Mask], k: usize) -> Result<CheckReport> {
    for &s in sets {
        if is_local_counterexample(sys, s, k)? {
            return Ok(CheckReport { holds: false, checked: sets.len(), counterexample: Some(s) });
        }
    }
    Ok(CheckReport { holds: true, checked: sets.len(), counterexample: None })
}

/// `(L_k)`: every coconvex `S` whose localizations of corank `≤ k` are
/// all free is itself free.
pub fn check_lk(sys: &RootSystem, k: usize) -> Result<CheckReport> {
    let sets = enumerate_coconvex(sys, DEFAULT_ENUM_BUDGET)?;
    run_check(sys, &sets, k)
}

/// `(T_k)`: as `(L_k)`, for terminal vertices of the filtered graph.
pub fn check_tk(sys: &RootSystem, k: usize) -> Result<CheckReport> {
    let g = build_graph(sys, true, sys.rank().max(crate::peterson::DEFAULT_GRAPH_RANK))?;
    run_check(sys, &g.terminal(), k)
}

/// A database of minimal patterns per irreducible type, each closed under
/// diagram automorphisms (raw subsets).
#[derive(Clone, Debug, Default)]
pub struct PatternDb {
    pub class: Option<PatternClass>,
    entries: BTreeMap<String, (Arc<RootSystem>, HashSet<Mask>)>,
}

#[derive(Serialize, Deserialize)]
struct DbRecord {
    system: String,
    class: PatternClass,
    mask: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    word: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct DbFile {
    version: u32,
    labeling: String,
    labeling_hash: String,
    patterns: Vec<DbRecord>,
}

const DB_VERSION: u32 = 1;

/// Digest of the labeling convention: the Cartan matrices of the given
/// systems under `labeling`.
pub fn labeling_hash(specs: &[&str], labeling: Labeling) -> Result<String> {
    let mut h = Sha256::new();
    for spec in specs {
        h.update(spec.as_bytes());
        for f in parse_factors(spec)? {
            for row in f.cartan_matrix(labeling) {
                for x in row {
                    h.update(x.to_le_bytes());
                }
            }
        }
    }
    Ok(hex::encode(h.finalize()))
}

impl PatternDb {
    pub fn new() -> Self {
        PatternDb::default()
    }

    /// Runs the search for each system and collects its minimal patterns.
    pub fn build(specs: &[&str], class: PatternClass) -> Result<PatternDb> {
        let mut db = PatternDb { class: Some(class), entries: BTreeMap::new() };
        for spec in specs {
            let sys = RootSystem::parse(spec)?;
            let report = find_minimal_patterns(&sys, class)?;
            db.insert(Arc::new(sys), report.patterns);
        }
        Ok(db)
    }

    pub fn insert(&mut self, sys: Arc<RootSystem>, patterns: impl IntoIterator<Item = Mask>) {
        let key = format_factors(&sys.classify());
        let entry = self.entries.entry(key).or_insert_with(|| (sys, HashSet::new()));
        entry.1.extend(patterns);
    }

    pub fn systems(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn patterns_of(&self, spec: &str) -> Vec<Mask> {
        let mut v: Vec<Mask> = self.entries.get(spec).map(|e| e.1.iter().copied().collect()).unwrap_or_default();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(|e| e.1.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn ranks(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.entries.values().map(|e| e.0.rank()).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    /// The first `(U, type)` where `S_U` matches a stored pattern.
    pub fn find_in(&self, sys: &RootSystem, s: Mask) -> Result<Option<(Subspace, String)>> {
        let e = sys.engine();
        for k in self.ranks() {
            if k > sys.rank() {
                continue;
            }
            for &flat in e.flats_of_rank(k).iter() {
                if count(s & flat) < 4 {
                    continue;
                }
                let res = sys.restrict_flat(flat)?;
                let key = format_factors(&res.system.classify());
                let Some((std, set)) = self.entries.get(&key) else { continue };
                // One isomorphism suffices since `set` is automorphism-closed.
                let Some(p) = cartan_isomorphisms(res.system.cartan(), std.cartan(), true).pop() else {
                    continue;
                };
                let map = res.system.extend_simple_map(std, &p);
                if set.contains(&push_along(&map, res.pull(s))) {
                    return Ok(Some((Subspace::from_flat(sys, flat, Vec::new()), key)));
                }
            }
        }
        Ok(None)
    }

    fn to_file(&self, labeling: Labeling) -> Result<DbFile> {
        let specs: Vec<&str> = self.entries.keys().map(String::as_str).collect();
        let class = self.class.unwrap_or(PatternClass::Coconvex);
        let mut patterns = Vec::new();
        for (name, (sys, set)) in &self.entries {
            let mut masks: Vec<Mask> = set.iter().copied().collect();
            masks.sort_unstable();
            for m in masks {
                let word = (class == PatternClass::Biconvex)
                    .then(|| word_from_inversion_set(sys, m).map(|w| w.to_string()))
                    .transpose()?;
                patterns.push(DbRecord { system: name.clone(), class, mask: to_hex(m), word });
            }
        }
        Ok(DbFile {
            version: DB_VERSION,
            labeling: format!("{labeling:?}").to_lowercase(),
            labeling_hash: labeling_hash(&specs, labeling)?,
            patterns,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file(Labeling::Native)?)?)
    }

    pub fn from_json(s: &str) -> Result<PatternDb> {
        let file: DbFile = serde_json::from_str(s)?;
        if file.version != DB_VERSION {
            return Err(Error::Parse("pattern database".into(), format!("version {}", file.version)));
        }
        let mut by_sys: HashMap<String, Vec<Mask>> = HashMap::new();
        let mut class = None;
        for r in file.patterns {
            class = Some(r.class);
            let m = from_hex(&r.mask).ok_or_else(|| Error::Parse(r.mask.clone(), "bad mask".into()))?;
            by_sys.entry(r.system).or_default().push(m);
        }
        let mut db = PatternDb { class, entries: BTreeMap::new() };
        for (spec, masks) in by_sys {
            db.insert(Arc::new(RootSystem::parse(&spec)?), masks);
        }
        Ok(db)
    }

    /// Cache file for the given systems and class inside `dir`.
    pub fn cache_path(dir: &Path, specs: &[&str], class: PatternClass) -> Result<PathBuf> {
        let h = labeling_hash(specs, Labeling::Native)?;
        Ok(dir.join(format!("patterns-{}-{}-{}.json", class.name(), specs.join("_"), &h[..16])))
    }

    /// Loads the database from `dir` if cached, else builds and stores it.
    pub fn load_or_build(dir: &Path, specs: &[&str], class: PatternClass) -> Result<PatternDb> {
        let path = PatternDb::cache_path(dir, specs, class)?;
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(db) = PatternDb::from_json(&text) {
                return Ok(db);
            }
        }
        let db = PatternDb::build(specs, class)?;
        std::fs::create_dir_all(dir)?;
        std::fs::write(&path, db.to_json()?)?;
        Ok(db)
    }
}

/// Freeness predicted by avoiding every pattern in `db`.
pub fn freeness_by_avoidance(sys: &RootSystem, s: Mask, db: &PatternDb) -> Result<bool> {
    Ok(db.find_in(sys, s)?.is_none())
}

/// Coordinates of a `C_n` root (native labeling) in the `e`-basis.
fn c_to_e(c: &[i32]) -> Vec<i32> {
    let n = c.len();
    (0..n)
        .map(|i| match i {
            0 if n == 1 => 2 * c[0],
            0 => 2 * c[0] - c[1],
            _ if i == n - 1 => c[i],
            _ => c[i] - c[i + 1],
        })
        .collect()
}

/// Checks the two closure conditions on terminal vertices of the filtered
/// graph of `C_n`: `e_k - e_i ∈ S` forces `e_j - e_i ∈ S` for `i < j < k`,
/// and `e_l + e_k ∈ S` forces `e_j - e_i ∈ S` for all `i < j ≤ k`.
pub fn terminal_structure_check_cn(n: usize) -> Result<bool> {
    if !(3..=5).contains(&n) {
        return Err(Error::Precondition(format!("C{n} outside the supported range 3..=5")));
    }
    let sys = RootSystem::build(&[CartanType::new(crate::rootsys::Family::C, n)?])?;
    let g = build_graph(&sys, true, n)?;
    Ok(g.terminal().into_iter().all(|s| satisfies_cn_closure(&sys, s)))
}

/// The closure conditions above for one subset of `C_n^+`.
pub fn satisfies_cn_closure(sys: &RootSystem, s: Mask) -> bool {
    let n = sys.rank();
    let e: Vec<Vec<i32>> = sys.positive_roots().iter().map(|r| c_to_e(&r.0)).collect();
    let find = |v: &[i32]| e.iter().position(|x| x == v);
    let diff = |j: usize, i: usize| {
        let mut v = vec![0; n];
        v[j] += 1;
        v[i] -= 1;
        find(&v).expect("e_j - e_i is a root")
    };
    let has = |r: usize| s >> r & 1 == 1;
    for (r, v) in e.iter().enumerate() {
        if !has(r) {
            continue;
        }
        let plus: Vec<usize> = (0..n).filter(|&i| v[i] > 0).collect();
        let minus: Vec<usize> = (0..n).filter(|&i| v[i] < 0).collect();
        if minus.len() == 1 {
            let (k, i) = (plus[0], minus[0]);
            if !(i + 1..k).all(|j| has(diff(j, i))) {
                return false;
            }
        } else {
            for &k in &plus {
                for j in 0..=k {
                    for i in 0..j {
                        if !has(diff(j, i)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

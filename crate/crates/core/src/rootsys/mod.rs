//! Finite crystallographic root systems presented by their Cartan matrix.
//!
//! Roots are integer coefficient vectors over the simple roots. Positive
//! roots are generated by root-string closure and sorted by height, then
//! by coefficient vector in decreasing lexicographic order, so the simple
//! roots `α_1, ..., α_l` occupy indices `0..l`.

mod cartan;
mod subspace;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub use cartan::{
    cartan_isomorphisms, classify_cartan, components, format_factors, parse_factors, CartanType, Family,
    Labeling,
};
pub use subspace::{Restriction, Subspace};

use crate::arrangement::engine::FlatEngine;
use crate::error::{Error, Result};
use crate::mask::{bits, Mask};

/// A root as coefficients over the simple roots of its system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    /// Height of a positive root.
    pub fn height(&self) -> Result<u32> {
        if !self.is_positive() {
            return Err(Error::NotPositive(self.to_string()));
        }
        Ok(self.0.iter().sum::<i32>() as u32)
    }

    /// Dominance order: `b - a` has nonnegative coefficients.
    pub fn dominance_leq(&self, other: &Root) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| b >= a)
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&c| c as i64).collect()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl std::str::FromStr for Root {
    type Err = Error;
    fn from_str(s: &str) -> Result<Root> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(s.into(), "expected [c1,...,cl]".into()))?;
        inner
            .split(',')
            .map(|c| c.trim().parse::<i32>().map_err(|e| Error::Parse(s.into(), e.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(Root)
    }
}

/// Image of a positive root under a simple reflection or Weyl element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedRoot {
    pub positive: bool,
    pub index: usize,
}

impl SignedRoot {
    pub fn neg(self) -> SignedRoot {
        SignedRoot { positive: !self.positive, index: self.index }
    }
}

#[derive(Clone)]
pub struct RootSystem {
    factors: Vec<CartanType>,
    labeling: Labeling,
    cartan: Vec<Vec<i32>>,
    form: Vec<Vec<i64>>,
    roots: Vec<Root>,
    index: HashMap<Vec<i32>, usize>,
    heights: Vec<u32>,
    norms: Vec<i64>,
    sums: Vec<Option<u16>>,
    reflections: Vec<Vec<SignedRoot>>,
    strings: Vec<Vec<Vec<usize>>>,
    string_of: Vec<Vec<u16>>,
    comps: Vec<Vec<usize>>,
    comp_family: Vec<Family>,
    root_comp: Vec<usize>,
    long: Vec<bool>,
    engine: OnceLock<Arc<FlatEngine>>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}, {} positive roots)", format_factors(&self.factors), self.roots.len())
    }
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.cartan == other.cartan
    }
}

impl Eq for RootSystem {}

/// Upper bound on positive roots a mask can index.
pub const MAX_POSITIVE_ROOTS: usize = 128;

fn block_diagonal(blocks: &[Vec<Vec<i32>>]) -> Vec<Vec<i32>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut a = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                a[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    a
}

/// Half squared lengths `d_i` with `d_i A_ij = d_j A_ji`, normalized so the
/// shortest simple root of each component has `d = 1`.
fn symmetrizer(cartan: &[Vec<i32>]) -> Vec<i64> {
    let n = cartan.len();
    let mut d = vec![0i64; n];
    for comp in components(cartan) {
        d[comp[0]] = 6;
        let mut stack = vec![comp[0]];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && cartan[i][j] != 0 && d[j] == 0 {
                    d[j] = d[i] * cartan[j][i] as i64 / cartan[i][j] as i64;
                    stack.push(j);
                }
            }
        }
        let g = comp.iter().fold(0, |g, &i| crate::linalg::gcd(g, d[i]));
        for &i in &comp {
            d[i] /= g;
        }
    }
    d
}

impl RootSystem {
    /// Builds the product of the given irreducible types, in order.
    pub fn build(factors: &[CartanType]) -> Result<RootSystem> {
        RootSystem::build_with(factors, Labeling::Native)
    }

    pub fn build_with(factors: &[CartanType], labeling: Labeling) -> Result<RootSystem> {
        for f in factors {
            CartanType::new(f.family, f.rank)?;
        }
        if factors.is_empty() {
            return Err(Error::InvalidSystem(String::new(), "no factors".into()));
        }
        let blocks: Vec<_> = factors.iter().map(|f| f.cartan_matrix(labeling)).collect();
        RootSystem::from_parts(factors.to_vec(), labeling, block_diagonal(&blocks))
    }

    /// Parses a spec such as `"A3"` or `"A2xC3"`.
    pub fn parse(spec: &str) -> Result<RootSystem> {
        RootSystem::build(&parse_factors(spec)?)
    }

    pub fn parse_with(spec: &str, labeling: Labeling) -> Result<RootSystem> {
        RootSystem::build_with(&parse_factors(spec)?, labeling)
    }

    /// Builds a system from an arbitrary (validated) Cartan matrix.
    pub fn from_cartan(cartan: Vec<Vec<i32>>) -> Result<RootSystem> {
        let factors = classify_cartan(&cartan)?;
        RootSystem::from_parts(factors, Labeling::Native, cartan)
    }

    fn from_parts(factors: Vec<CartanType>, labeling: Labeling, cartan: Vec<Vec<i32>>) -> Result<RootSystem> {
        classify_cartan(&cartan)?;
        let l = cartan.len();
        let d = symmetrizer(&cartan);
        let form: Vec<Vec<i64>> = (0..l)
            .map(|i| (0..l).map(|j| d[j] * cartan[i][j] as i64).collect())
            .collect();

        // Root-string closure, one height layer at a time.
        let pairing = |beta: &[i32], i: usize| -> i32 { (0..l).map(|j| beta[j] * cartan[j][i]).sum() };
        let mut found: HashMap<Vec<i32>, ()> = HashMap::new();
        let mut layers: Vec<Vec<Vec<i32>>> = vec![(0..l)
            .map(|i| (0..l).map(|j| i32::from(i == j)).collect())
            .collect()];
        for r in &layers[0] {
            found.insert(r.clone(), ());
        }
        loop {
            let mut next: Vec<Vec<i32>> = Vec::new();
            for beta in layers.last().unwrap() {
                for i in 0..l {
                    if beta.iter().enumerate().all(|(j, &c)| (j == i) == (c != 0)) {
                        continue; // beta is a multiple of α_i
                    }
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if down[i] >= 0 && found.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - pairing(beta, i);
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !found.contains_key(&up) {
                            found.insert(up.clone(), ());
                            next.push(up);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
            if found.len() > MAX_POSITIVE_ROOTS {
                return Err(Error::InvalidSystem(
                    format_factors(&factors),
                    format!("more than {MAX_POSITIVE_ROOTS} positive roots"),
                ));
            }
        }
        let mut coeffs: Vec<Vec<i32>> = found.into_keys().collect();
        coeffs.sort_by(|a, b| {
            let (ha, hb): (i32, i32) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let n = coeffs.len();
        let index: HashMap<Vec<i32>, usize> = coeffs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let heights: Vec<u32> = coeffs.iter().map(|c| c.iter().sum::<i32>() as u32).collect();
        let norms: Vec<i64> = coeffs
            .iter()
            .map(|c| {
                (0..l)
                    .flat_map(|i| (0..l).map(move |j| (i, j)))
                    .map(|(i, j)| c[i] as i64 * c[j] as i64 * form[i][j])
                    .sum()
            })
            .collect();
        let mut sums = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<i32> = coeffs[a].iter().zip(&coeffs[b]).map(|(x, y)| x + y).collect();
                sums[a * n + b] = index.get(&s).map(|&k| k as u16);
            }
        }
        let reflections: Vec<Vec<SignedRoot>> = (0..l)
            .map(|i| {
                coeffs
                    .iter()
                    .map(|beta| {
                        let mut img = beta.clone();
                        img[i] -= pairing(beta, i);
                        if let Some(&k) = index.get(&img) {
                            SignedRoot { positive: true, index: k }
                        } else {
                            let neg: Vec<i32> = img.iter().map(|c| -c).collect();
                            SignedRoot { positive: false, index: index[&neg] }
                        }
                    })
                    .collect()
            })
            .collect();

        let comps = components(&cartan);
        let comp_family: Vec<Family> = comps
            .iter()
            .map(|comp| {
                let sub: Vec<Vec<i32>> = comp.iter().map(|&a| comp.iter().map(|&b| cartan[a][b]).collect()).collect();
                classify_cartan(&sub).map(|t| t[0].family)
            })
            .collect::<Result<_>>()?;
        let root_comp: Vec<usize> = coeffs
            .iter()
            .map(|c| {
                let first = c.iter().position(|&x| x != 0).unwrap();
                comps.iter().position(|cc| cc.contains(&first)).unwrap()
            })
            .collect();
        let long: Vec<bool> = (0..n)
            .map(|i| {
                let max = (0..n).filter(|&j| root_comp[j] == root_comp[i]).map(|j| norms[j]).max().unwrap();
                norms[i] == max
            })
            .collect();

        let mut sys = RootSystem {
            factors,
            labeling,
            cartan,
            form,
            roots: coeffs.into_iter().map(Root).collect(),
            index,
            heights,
            norms,
            sums,
            reflections,
            strings: Vec::new(),
            string_of: Vec::new(),
            comps,
            comp_family,
            root_comp,
            long,
            engine: OnceLock::new(),
        };
        let (strings, string_of): (Vec<_>, Vec<_>) = (0..n).map(|a| sys.compute_strings(a)).unzip();
        sys.strings = strings;
        sys.string_of = string_of;
        Ok(sys)
    }

    fn compute_strings(&self, a: usize) -> (Vec<Vec<usize>>, Vec<u16>) {
        let n = self.roots.len();
        let mut string_of = vec![u16::MAX; n];
        let mut strings = Vec::new();
        for b in 0..n {
            if string_of[b] != u16::MAX {
                continue;
            }
            let mut bottom = b;
            while let Some(lower) = self.difference(bottom, a) {
                bottom = lower;
            }
            let mut s = vec![bottom];
            let mut top = bottom;
            while let Some(up) = self.sum(top, a) {
                s.push(up);
                top = up;
            }
            for &r in &s {
                string_of[r] = strings.len() as u16;
            }
            strings.push(s);
        }
        (strings, string_of)
    }

    pub fn factors(&self) -> &[CartanType] {
        &self.factors
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn name(&self) -> String {
        format_factors(&self.factors)
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// Inner products `(α_i, α_j)`; short roots have squared length 2.
    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.index.get(&r.0).copied()
    }

    /// Index of `Σ c_i α_i`, if it is a positive root.
    pub fn index_of_coeffs(&self, c: &[i32]) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn height_of(&self, i: usize) -> u32 {
        self.heights[i]
    }

    pub fn height(&self, r: &Root) -> Result<u32> {
        if self.index_of(r).is_none() {
            return Err(Error::NotPositive(r.to_string()));
        }
        r.height()
    }

    /// `(α, α)` for the positive root with index `i`.
    pub fn norm(&self, i: usize) -> i64 {
        self.norms[i]
    }

    /// `2(a, b)/(b, b)`.
    pub fn pairing(&self, a: &Root, b: &Root) -> i64 {
        let ab = self.inner(a, b);
        let bb = self.inner(b, b);
        2 * ab / bb
    }

    pub fn inner(&self, a: &Root, b: &Root) -> i64 {
        let l = self.rank();
        (0..l)
            .flat_map(|i| (0..l).map(move |j| (i, j)))
            .map(|(i, j)| a.0[i] as i64 * b.0[j] as i64 * self.form[i][j])
            .sum()
    }

    /// Whether root `i` is long within its irreducible factor.
    pub fn is_long(&self, i: usize) -> bool {
        self.long[i]
    }

    /// Index of the irreducible factor (connected Dynkin component) that
    /// contains root `i`, numbered by smallest simple index.
    pub fn component_of(&self, i: usize) -> usize {
        self.root_comp[i]
    }

    /// The factor type of the component containing root `i`.
    pub fn family_of(&self, i: usize) -> Family {
        self.comp_family[self.root_comp[i]]
    }

    pub fn component_families(&self) -> &[Family] {
        &self.comp_family
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sums[a * self.roots.len() + b].map(usize::from)
    }

    pub fn difference(&self, a: usize, b: usize) -> Option<usize> {
        let c: Vec<i32> = self.roots[a].0.iter().zip(&self.roots[b].0).map(|(x, y)| x - y).collect();
        self.index_of_coeffs(&c)
    }

    pub fn dominance_leq(&self, a: usize, b: usize) -> bool {
        self.roots[a].dominance_leq(&self.roots[b])
    }

    /// Image of positive root `r` under the simple reflection `s_i`.
    pub fn reflect(&self, i: usize, r: usize) -> SignedRoot {
        self.reflections[i][r]
    }

    /// Image of a signed root under `s_i`.
    pub fn reflect_signed(&self, i: usize, r: SignedRoot) -> SignedRoot {
        let img = self.reflections[i][r.index];
        if r.positive {
            img
        } else {
            img.neg()
        }
    }

    /// Simple roots all have index `< rank`.
    pub fn is_simple(&self, i: usize) -> bool {
        i < self.rank()
    }

    pub fn full_mask(&self) -> Mask {
        crate::mask::full(self.num_positive())
    }

    /// The maximal `a`-string containing `b`, in increasing order.
    pub fn alpha_string(&self, b: usize, a: usize) -> &[usize] {
        &self.strings[a][self.string_of[a][b] as usize]
    }

    /// The partition of the positive roots into `a`-strings.
    pub fn string_partition(&self, a: usize) -> &[Vec<usize>] {
        &self.strings[a]
    }

    /// Shared memoizing freeness engine over the positive roots.
    pub fn engine(&self) -> &FlatEngine {
        self.engine
            .get_or_init(|| Arc::new(FlatEngine::new(self.rank(), self.roots.iter().map(Root::to_i64).collect())))
    }

    /// The dual system on the coroots, with `map[i]` the index of the
    /// coroot of positive root `i` in the dual. Simple indices are preserved.
    pub fn dual(&self) -> Result<(RootSystem, Vec<usize>)> {
        let l = self.rank();
        let transposed: Vec<Vec<i32>> = (0..l).map(|i| (0..l).map(|j| self.cartan[j][i]).collect()).collect();
        let factors: Vec<CartanType> = self
            .factors
            .iter()
            .map(|f| match f.family {
                Family::B => CartanType { family: Family::C, rank: f.rank },
                Family::C => CartanType { family: Family::B, rank: f.rank },
                _ => *f,
            })
            .collect();
        let dual = RootSystem::from_parts(factors, self.labeling, transposed)?;
        let d: Vec<i64> = (0..l).map(|i| self.form[i][i]).collect();
        let map = self
            .roots
            .iter()
            .enumerate()
            .map(|(k, r)| {
                // β^v = Σ c_j (α_j,α_j)/(β,β) α_j^v
                let bb = self.norms[k];
                let c: Vec<i32> = (0..l).map(|j| (r.0[j] as i64 * d[j] / bb) as i32).collect();
                dual.index_of_coeffs(&c).expect("coroot missing from dual system")
            })
            .collect();
        Ok((dual, map))
    }

    /// Maps a subset along the coroot correspondence.
    pub fn map_mask(mask: Mask, map: &[usize]) -> Mask {
        bits(mask).fold(0, |acc, i| acc | (1 << map[i]))
    }

    /// Indices of the simple roots of the factor with index `comp`.
    pub fn component_simple(&self, comp: usize) -> &[usize] {
        &self.comps[comp]
    }

    pub fn num_components(&self) -> usize {
        self.comps.len()
    }

    /// Positive-root permutations induced by Cartan-preserving bijections
    /// of simple roots from `self` onto `other`.
    pub fn iso_maps(&self, other: &RootSystem) -> Vec<Vec<usize>> {
        cartan_isomorphisms(&self.cartan, &other.cartan, false)
            .into_iter()
            .map(|p| self.extend_simple_map(other, &p))
            .collect()
    }

    /// Extends a simple-root bijection `p` linearly to positive roots.
    pub fn extend_simple_map(&self, other: &RootSystem, p: &[usize]) -> Vec<usize> {
        let l = self.rank();
        self.roots
            .iter()
            .map(|r| {
                let mut c = vec![0; l];
                for i in 0..l {
                    c[p[i]] = r.0[i];
                }
                other.index_of_coeffs(&c).expect("isomorphism does not preserve roots")
            })
            .collect()
    }

    /// Renders a subset as a sorted list of coefficient vectors.
    pub fn format_mask(&self, mask: Mask) -> String {
        let parts: Vec<String> = bits(mask).map(|i| self.roots[i].to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Parses a list of roots `"[1,0,0] [0,1,1]"` (commas, braces and
    /// whitespace between entries are ignored) into a mask.
    pub fn parse_roots(&self, s: &str) -> Result<Mask> {
        let mut mask = 0;
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut rest = body;
        while let Some(start) = rest.find('[') {
            let end = rest[start..]
                .find(']')
                .ok_or_else(|| Error::Parse(s.into(), "unbalanced bracket".into()))?;
            let r: Root = rest[start..start + end + 1].parse()?;
            if r.0.len() != self.rank() {
                return Err(Error::Parse(s.into(), format!("root {r} has wrong length")));
            }
            let i = self.index_of(&r).ok_or_else(|| Error::NotPositive(r.to_string()))?;
            mask |= 1 << i;
            rest = &rest[start + end + 1..];
        }
        Ok(mask)
    }
}

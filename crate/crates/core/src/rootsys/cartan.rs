//! Cartan types, their matrices under the supported labelings, Dynkin
//! diagram recognition and diagram isomorphisms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_char(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// Simple-root numbering convention.
///
/// `Native` puts the distinguished end of `B_n`/`C_n` at node 1
/// (`C_n`: `α_1 = 2e_1` long, `α_i = e_i - e_{i-1}`; `B_n`: `α_1 = e_1`
/// short), which makes `B_n` and `C_n` dual with identical numbering. All
/// other types use Bourbaki numbering under both conventions; in particular
/// node 2 is the trivalent node of `D_4`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Labeling {
    #[default]
    Native,
    Bourbaki,
}

impl FromStr for Labeling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "native" | "paper" => Ok(Labeling::Native),
            "bourbaki" => Ok(Labeling::Bourbaki),
            _ => Err(Error::Parse(s.into(), "expected `native` or `bourbaki`".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        let t = CartanType { family, rank };
        if ok {
            Ok(t)
        } else {
            Err(Error::InvalidSystem(t.to_string(), "rank out of range for type".into()))
        }
    }

    /// Cartan matrix `A_ij = 2(α_i, α_j)/(α_j, α_j)`, zero-based.
    pub fn cartan_matrix(&self, labeling: Labeling) -> Vec<Vec<i32>> {
        let n = self.rank;
        let mut a = vec![vec![0i32; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut bond = |i: usize, j: usize, aij: i32, aji: i32| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self.family {
            Family::A => (0..n - 1).for_each(|i| bond(i, i + 1, -1, -1)),
            Family::B | Family::C => {
                (1..n - 1).for_each(|i| bond(i, i + 1, -1, -1));
                // B: node 1 short, so <α_2, α_1^v> = -2.
                if self.family == Family::B {
                    bond(0, 1, -1, -2);
                } else {
                    bond(0, 1, -2, -1);
                }
            }
            Family::D => {
                (0..n - 2).for_each(|i| bond(i, i + 1, -1, -1));
                bond(n - 3, n - 1, -1, -1);
            }
            Family::E => {
                for (i, j) in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)] {
                    if i < n && j < n {
                        bond(i, j, -1, -1);
                    }
                }
            }
            Family::F => {
                bond(0, 1, -1, -1);
                bond(1, 2, -2, -1);
                bond(2, 3, -1, -1);
            }
            Family::G => bond(0, 1, -1, -3),
        }
        if labeling == Labeling::Bourbaki && matches!(self.family, Family::B | Family::C) {
            let rev = |i: usize| n - 1 - i;
            return (0..n)
                .map(|i| (0..n).map(|j| a[rev(i)][rev(j)]).collect())
                .collect();
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_char)
            .ok_or_else(|| Error::InvalidSystem(s.into(), "unknown type letter".into()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidSystem(s.into(), "missing or bad rank".into()))?;
        CartanType::new(family, rank).map_err(|_| Error::InvalidSystem(s.into(), "rank out of range for type".into()))
    }
}

/// Parses `"A3"`, `"b4"`, `"A2xC3"` into factor types.
pub fn parse_factors(spec: &str) -> Result<Vec<CartanType>> {
    if spec.trim().is_empty() {
        return Err(Error::InvalidSystem(spec.into(), "empty".into()));
    }
    spec.split(['x', 'X']).map(str::parse).collect()
}

pub fn format_factors(factors: &[CartanType]) -> String {
    factors.iter().map(ToString::to_string).collect::<Vec<_>>().join("x")
}

/// Connected components of the Dynkin diagram, each sorted.
pub fn components(cartan: &[Vec<i32>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && cartan[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn check_shape(cartan: &[Vec<i32>]) -> Result<()> {
    let n = cartan.len();
    for (i, row) in cartan.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidCartan("matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(Error::InvalidCartan(format!("diagonal entry {i} is {}", row[i])));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (cartan[i][j], cartan[j][i]);
            if !(-3..=0).contains(&a) {
                return Err(Error::InvalidCartan(format!("entry ({i},{j}) is {a}")));
            }
            if (a == 0) != (b == 0) {
                return Err(Error::InvalidCartan(format!("entries ({i},{j}) and ({j},{i}) disagree on zero")));
            }
            if a * b > 3 || (a != 0 && a != -1 && b != -1) {
                return Err(Error::InvalidCartan(format!("bond ({i},{j}) is not of finite type")));
            }
        }
    }
    Ok(())
}

fn classify_component(cartan: &[Vec<i32>], comp: &[usize]) -> Result<CartanType> {
    let n = comp.len();
    let bad = || Error::InvalidCartan(format!("component {comp:?} is not a finite Dynkin diagram"));
    let deg = |i: usize| comp.iter().filter(|&&j| j != i && cartan[i][j] != 0).count();
    let edges: Vec<(usize, usize)> = comp
        .iter()
        .flat_map(|&i| comp.iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| i < j && cartan[i][j] != 0)
        .collect();
    if edges.len() + 1 != n {
        return Err(bad()); // contains a cycle
    }
    if n == 1 {
        return Ok(CartanType { family: Family::A, rank: 1 });
    }
    let multiple: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(i, j)| cartan[i][j] * cartan[j][i] > 1)
        .collect();
    let max_deg = comp.iter().map(|&i| deg(i)).max().unwrap_or(0);
    match multiple.as_slice() {
        [] => {
            if max_deg <= 2 {
                return Ok(CartanType { family: Family::A, rank: n });
            }
            let branches: Vec<usize> = comp.iter().copied().filter(|&i| deg(i) >= 3).collect();
            if branches.len() != 1 || deg(branches[0]) != 3 {
                return Err(bad());
            }
            let center = branches[0];
            // Lengths of the three arms.
            let mut arms: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&j| j != center && cartan[center][j] != 0)
                .map(|start| {
                    let (mut prev, mut cur, mut len) = (center, start, 1);
                    loop {
                        let next = comp
                            .iter()
                            .copied()
                            .find(|&k| k != prev && k != cur && cartan[cur][k] != 0);
                        match next {
                            Some(k) => {
                                prev = cur;
                                cur = k;
                                len += 1;
                            }
                            None => return len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Ok(CartanType { family: Family::D, rank: n }),
                [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Ok(CartanType { family: Family::E, rank: n }),
                _ => Err(bad()),
            }
        }
        [(i, j)] if max_deg <= 2 => {
            let (i, j) = (*i, *j);
            let prod = cartan[i][j] * cartan[j][i];
            if prod == 3 {
                return if n == 2 { Ok(CartanType { family: Family::G, rank: 2 }) } else { Err(bad()) };
            }
            if n == 2 {
                return Ok(CartanType { family: Family::B, rank: 2 });
            }
            let (ei, ej) = (deg(i) == 1, deg(j) == 1);
            if ei || ej {
                // The double bond sits at an end; the end node decides B vs C.
                let (end, other) = if ei { (i, j) } else { (j, i) };
                // <α_end, α_other^v> = -2 means the end node is long.
                let end_long = cartan[end][other] == -2;
                Ok(CartanType { family: if end_long { Family::C } else { Family::B }, rank: n })
            } else if n == 4 {
                Ok(CartanType { family: Family::F, rank: 4 })
            } else {
                Err(bad())
            }
        }
        _ => Err(bad()),
    }
}

/// Irreducible factors of a Cartan matrix, sorted. `B_2` and `C_2` are both
/// reported as `B2`.
pub fn classify_cartan(cartan: &[Vec<i32>]) -> Result<Vec<CartanType>> {
    check_shape(cartan)?;
    let mut out = components(cartan)
        .iter()
        .map(|c| classify_component(cartan, c))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// All bijections `p` of simple indices with `from[i][j] == to[p[i]][p[j]]`.
pub fn cartan_isomorphisms(from: &[Vec<i32>], to: &[Vec<i32>], first_only: bool) -> Vec<Vec<usize>> {
    let n = from.len();
    if to.len() != n {
        return Vec::new();
    }
    // Cheap invariant per node: sorted row multiset.
    let sig = |m: &[Vec<i32>], i: usize| {
        let mut r = m[i].clone();
        r.sort_unstable();
        let mut c: Vec<i32> = (0..n).map(|j| m[j][i]).collect();
        c.sort_unstable();
        (r, c)
    };
    let sf: Vec<_> = (0..n).map(|i| sig(from, i)).collect();
    let st: Vec<_> = (0..n).map(|i| sig(to, i)).collect();
    let mut out = Vec::new();
    let mut p = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        from: &[Vec<i32>],
        to: &[Vec<i32>],
        sf: &[(Vec<i32>, Vec<i32>)],
        st: &[(Vec<i32>, Vec<i32>)],
        p: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        first_only: bool,
    ) {
        let n = from.len();
        if k == n {
            out.push(p.clone());
            return;
        }
        for c in 0..n {
            if used[c] || sf[k] != st[c] {
                continue;
            }
            if (0..k).any(|i| from[k][i] != to[c][p[i]] || from[i][k] != to[p[i]][c]) {
                continue;
            }
            p[k] = c;
            used[c] = true;
            go(k + 1, from, to, sf, st, p, used, out, first_only);
            used[c] = false;
            if first_only && !out.is_empty() {
                return;
            }
        }
    }
    go(0, from, to, &sf, &st, &mut p, &mut used, &mut out, first_only);
    out
}

//! Root-spanned subspaces and the restricted root systems `R_U = R ∩ U`.

use std::hash::{Hash, Hasher};

use super::{classify_cartan, CartanType, RootSystem};
use crate::error::{Error, Result};
use crate::linalg::span_key;
use crate::mask::{bits, count, Mask};

/// A subspace of the ambient space spanned by positive roots.
///
/// `roots` is the closed set of all positive roots in the span, which
/// determines the subspace since it is spanned by them.
#[derive(Clone, Debug)]
pub struct Subspace {
    generators: Vec<usize>,
    roots: Mask,
    dim: usize,
    basis: Vec<Vec<i64>>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.roots == other.roots && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.roots.hash(state);
    }
}

impl Subspace {
    /// The span of the positive roots in `gens`.
    pub fn spanned_by(sys: &RootSystem, gens: Mask) -> Subspace {
        let roots = sys.engine().closure(gens);
        Subspace::from_flat(sys, roots, bits(gens).collect())
    }

    /// Wraps a closed flat of the positive-root universe.
    pub fn from_flat(sys: &RootSystem, roots: Mask, generators: Vec<usize>) -> Subspace {
        let vecs: Vec<Vec<i64>> = bits(roots).map(|i| sys.root(i).to_i64()).collect();
        let basis = span_key(sys.rank(), &vecs);
        Subspace { generators, roots, dim: basis.len(), basis }
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// All positive roots in the subspace.
    pub fn roots(&self) -> Mask {
        self.roots
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical reduced integer basis.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn contains_root(&self, i: usize) -> bool {
        self.roots >> i & 1 == 1
    }
}

/// A restricted root system together with `map[j]`, the index in the
/// ambient system of positive root `j` of the restriction.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub system: RootSystem,
    pub map: Vec<usize>,
}

impl Restriction {
    /// Pulls an ambient subset back to the restriction's own indexing.
    pub fn pull(&self, mask: Mask) -> Mask {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, &i)| mask >> i & 1 == 1)
            .fold(0, |acc, (j, _)| acc | 1 << j)
    }

    /// Pushes a subset of the restriction forward to the ambient system.
    pub fn push(&self, mask: Mask) -> Mask {
        bits(mask).fold(0, |acc, j| acc | 1 << self.map[j])
    }
}

impl RootSystem {
    /// Dynkin types of the irreducible factors, sorted; `B_2` and `C_2`
    /// both report as `B2`.
    pub fn classify(&self) -> Vec<CartanType> {
        classify_cartan(self.cartan()).expect("root system holds a valid Cartan matrix")
    }

    /// Distinct subspaces of dimension exactly `k` spanned by roots of
    /// `from`, ordered by their root masks.
    pub fn root_spanned_subspaces(&self, k: usize, from: Mask) -> Vec<Subspace> {
        self.engine()
            .flats_spanned_by(from, k)
            .into_iter()
            .map(|flat| {
                let gens: Vec<usize> = bits(flat & from).collect();
                Subspace::from_flat(self, flat, gens)
            })
            .collect()
    }

    /// The root system `R ∩ U`, with simple roots the indecomposable positive
    /// roots in `U`.
    pub fn restrict(&self, u: &Subspace) -> Result<Restriction> {
        self.restrict_flat(u.roots())
    }

    /// As [`RootSystem::restrict`], for a closed flat given by its mask.
    pub fn restrict_flat(&self, flat: Mask) -> Result<Restriction> {
        if flat == 0 {
            return Err(Error::Precondition("restriction to the zero subspace".into()));
        }
        let members: Vec<usize> = bits(flat).collect();
        let simple: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&b| {
                !members
                    .iter()
                    .any(|&g| self.difference(b, g).is_some_and(|d| flat >> d & 1 == 1))
            })
            .collect();
        let k = simple.len();
        let cartan: Vec<Vec<i32>> = simple
            .iter()
            .map(|&a| {
                simple
                    .iter()
                    .map(|&b| {
                        let (ra, rb) = (self.root(a), self.root(b));
                        (2 * self.inner(ra, rb) / self.inner(rb, rb)) as i32
                    })
                    .collect()
            })
            .collect();
        let system = RootSystem::from_cartan(cartan)?;
        let l = self.rank();
        let map: Vec<usize> = system
            .positive_roots()
            .iter()
            .map(|r| {
                let mut c = vec![0i32; l];
                for (j, &s) in simple.iter().enumerate() {
                    for (ci, &x) in c.iter_mut().zip(&self.root(s).0) {
                        *ci += r.0[j] * x;
                    }
                }
                self.index_of_coeffs(&c).expect("restricted root missing from ambient system")
            })
            .collect();
        debug_assert_eq!(map.len(), count(flat));
        debug_assert_eq!(k, self.engine().flat_rank(flat));
        Ok(Restriction { system, map })
    }
}

//! Exact integer linear algebra on small dense vectors.
//!
//! Everything here is fraction-free: rows are kept as `i128` during
//! elimination and divided by their content after every step, so entries
//! stay small for the low-rank systems this crate deals with.

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

fn content(v: &[i128]) -> i128 {
    v.iter().fold(0, |g, &x| gcd128(g, x))
}

fn normalize128(v: &mut [i128]) {
    let g = content(v);
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    if let Some(&first) = v.iter().find(|&&x| x != 0) {
        if first < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn narrow(v: &[i128]) -> Vec<i64> {
    v.iter()
        .map(|&x| i64::try_from(x).expect("integer overflow in exact elimination"))
        .collect()
}

/// Divides out the content and fixes the sign so the first nonzero entry is
/// positive. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    normalize128(&mut w);
    narrow(&w)
}

pub fn is_zero(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Incrementally built reduced echelon basis of a rational subspace.
///
/// Each stored row has a distinct pivot column, and every pivot column is
/// zero in all other rows.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    dim: usize,
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &[i64]) -> Vec<i128> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (p, row) in &self.rows {
            let c = w[*p];
            if c == 0 {
                continue;
            }
            let a = row[*p];
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi = a * *wi - c * ri;
            }
            normalize128(&mut w);
        }
        w
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span. Returns `false` if it was already contained.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            let c = row[p];
            if c == 0 {
                continue;
            }
            let a = w[p];
            for (ri, wi) in row.iter_mut().zip(&w) {
                *ri = a * *ri - c * wi;
            }
            normalize128(row);
        }
        self.rows.push((p, w));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }

    /// The reduced echelon basis with primitive integer rows, ordered by
    /// pivot column. This is a canonical form of the rational span.
    pub fn basis(&self) -> Vec<Vec<i64>> {
        self.rows.iter().map(|(_, r)| narrow(r)).collect()
    }
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut e = Echelon::new(first.len());
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Canonical integer basis of the rational row span of `rows`.
pub fn span_key(dim: usize, rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut e = Echelon::new(dim);
    for r in rows {
        e.insert(r);
    }
    e.basis()
}

/// A basis of the integer lattice `{x ∈ Z^d : n·x = 0}`.
///
/// Computed by unimodular column operations reducing `n` to a single
/// nonzero entry; the remaining columns of the accumulated transform span
/// the kernel lattice.
pub fn kernel_basis(n: &[i64]) -> Vec<Vec<i64>> {
    let d = n.len();
    let mut a: Vec<i128> = n.iter().map(|&x| x as i128).collect();
    // cols[j] is the j-th column of the unimodular transform.
    let mut cols: Vec<Vec<i128>> = (0..d)
        .map(|j| (0..d).map(|i| i128::from(i == j)).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..d).filter(|&j| a[j] != 0).collect();
        if nonzero.len() <= 1 {
            let keep = nonzero.first().copied();
            return (0..d)
                .filter(|&j| Some(j) != keep)
                .map(|j| narrow(&cols[j]))
                .collect();
        }
        let piv = *nonzero.iter().min_by_key(|&&j| a[j].abs()).unwrap();
        for &k in &nonzero {
            if k == piv {
                continue;
            }
            let q = a[k].div_euclid(a[piv]);
            a[k] -= q * a[piv];
            let (src, dst) = if piv < k {
                let (l, r) = cols.split_at_mut(k);
                (&l[piv], &mut r[0])
            } else {
                let (l, r) = cols.split_at_mut(piv);
                (&r[0], &mut l[k])
            };
            for (x, y) in dst.iter_mut().zip(src.iter()) {
                *x -= q * y;
            }
        }
    }
}

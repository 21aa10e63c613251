//! Library results against independent brute-force computations.

use std::collections::{BTreeSet, HashSet};

use rootfree::arrangement::Arrangement;
use rootfree::coconvex::{enumerate_coconvex, exp_multiset, DEFAULT_ENUM_BUDGET};
use rootfree::mask::{bit, bits, count, Mask};
use rootfree::weyl::{
    all_elements, bruhat_leq_sets, exponents_of, group_order, interval_poincare, inversion_set, longest_element,
    DEFAULT_GROUP_BUDGET,
};
use rootfree::{IntPoly, RootSystem, WeylWord};

fn sys(spec: &str) -> RootSystem {
    RootSystem::parse(spec).unwrap()
}

fn rank_i128(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rk = 0;
    for c in 0..cols {
        let Some(p) = (rk..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rk, p);
        let pivot = m[rk].clone();
        for row in m.iter_mut().skip(rk + 1) {
            let (a, b) = (pivot[c], row[c]);
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = a * *x - b * y;
            }
            let g = row.iter().fold(0i128, |g, &x| gcd(g, x));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
        rk += 1;
    }
    rk
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn whitney(normals: &[Vec<i64>], dim: usize) -> IntPoly {
    let n = normals.len();
    let mut c = vec![0i64; dim + 1];
    for b in 0u32..1 << n {
        let rows: Vec<Vec<i64>> = (0..n).filter(|i| b >> i & 1 == 1).map(|i| normals[i].clone()).collect();
        let r = rank_i128(&rows);
        c[r] += if (b.count_ones() as usize + r).is_multiple_of(2) { 1 } else { -1 };
    }
    IntPoly::new(c)
}

/// Deterministic pseudo-random subsets of a given size.
fn sample_subsets(n: usize, size: usize, how_many: usize, seed: u64) -> Vec<Mask> {
    let mut x = seed;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    (0..how_many)
        .map(|_| {
            let mut m: Mask = 0;
            while count(m) < size {
                m |= bit(next() as usize % n);
            }
            m
        })
        .collect()
}

#[test]
fn poincare_matches_whitney_on_random_subsets() {
    for (spec, seed) in [("B3", 1), ("C3", 2), ("A4", 3), ("D4", 4), ("F4", 5), ("G2", 6)] {
        let r = sys(spec);
        let n = r.num_positive();
        for size in [4, 7.min(n), n.min(11)] {
            for s in sample_subsets(n, size, 25, seed * 97 + size as u64) {
                let a = Arrangement::from_subset(&r, s);
                let w = whitney(a.normals(), r.rank());
                assert_eq!(r.engine().poincare(0, s), w, "{spec} {}", r.format_mask(s));
                assert_eq!(a.poincare_polynomial(), w, "{spec} {}", r.format_mask(s));
            }
        }
    }
}

#[test]
fn full_systems_factor_by_exponents() {
    // Coxeter exponents of each type, listed directly.
    let cases: [(&str, &[i64]); 7] = [
        ("A3", &[1, 2, 3]),
        ("B3", &[1, 3, 5]),
        ("C3", &[1, 3, 5]),
        ("D4", &[1, 3, 3, 5]),
        ("F4", &[1, 5, 7, 11]),
        ("G2", &[1, 5]),
        ("A4", &[1, 2, 3, 4]),
    ];
    for (spec, exps) in cases {
        let r = sys(spec);
        let want = exps.iter().fold(IntPoly::one(), |acc, &m| &acc * &IntPoly::linear(m));
        assert_eq!(r.engine().poincare(0, r.full_mask()), want, "{spec}");
        let v = r.engine().verdict(r.full_mask());
        let got: Vec<i64> = v.coexponents().unwrap().into_iter().map(i64::from).collect();
        assert_eq!(got, exps, "{spec}");
        let order: i64 = exps.iter().map(|m| m + 1).product();
        assert_eq!(group_order(&r), order as u128, "{spec}");
    }
}

#[test]
fn positive_root_counts() {
    for (spec, n) in [
        ("A1", 1),
        ("A5", 15),
        ("B4", 16),
        ("C5", 25),
        ("D5", 20),
        ("E6", 36),
        ("E7", 63),
        ("E8", 120),
        ("F4", 24),
        ("G2", 6),
        ("A2xB2", 7),
    ] {
        assert_eq!(sys(spec).num_positive(), n, "{spec}");
    }
}

/// All group elements that are products of subwords of `word`, as
/// inversion sets.
fn subword_products(r: &RootSystem, word: &[usize]) -> HashSet<Mask> {
    let mut out = HashSet::new();
    for pick in 0u32..1 << word.len() {
        let sub: Vec<usize> = (0..word.len()).filter(|i| pick >> i & 1 == 1).map(|i| word[i]).collect();
        out.insert(inversion_set(r, &WeylWord::new(sub)).unwrap());
    }
    out
}

#[test]
fn bruhat_order_matches_subword_property() {
    for spec in ["A3", "B3", "G2", "A1xA2"] {
        let r = sys(spec);
        let elems = all_elements(&r, DEFAULT_GROUP_BUDGET).unwrap();
        let sets: Vec<Mask> = elems.iter().map(|w| inversion_set(&r, w).unwrap()).collect();
        for (w, &iw) in elems.iter().zip(&sets) {
            let below = subword_products(&r, w.letters());
            for &ix in &sets {
                assert_eq!(bruhat_leq_sets(&r, ix, iw), below.contains(&ix), "{spec} below {w}");
            }
        }
    }
}

#[test]
fn string_partition_matches_definition() {
    for spec in ["B3", "C3", "G2", "F4", "A1xB2"] {
        let r = sys(spec);
        let n = r.num_positive();
        let vec_of = |i: usize| r.root(i).0.clone();
        for a in 0..n {
            let mut seen = BTreeSet::new();
            for string in r.string_partition(a) {
                for w in string.windows(2) {
                    // consecutive entries differ by exactly α
                    let d: Vec<i32> = vec_of(w[1]).iter().zip(vec_of(w[0])).map(|(x, y)| x - y).collect();
                    assert_eq!(d, vec_of(a), "{spec}");
                }
                let lo = vec_of(string[0]);
                let hi = vec_of(*string.last().unwrap());
                let below: Vec<i32> = lo.iter().zip(vec_of(a)).map(|(x, y)| x - y).collect();
                let above: Vec<i32> = hi.iter().zip(vec_of(a)).map(|(x, y)| x + y).collect();
                assert!(r.index_of_coeffs(&below).is_none() && r.index_of_coeffs(&above).is_none(), "{spec}");
                for &b in string {
                    assert!(seen.insert(b), "{spec}: roots repeat");
                    assert_eq!(r.alpha_string(b, a), &string[..]);
                }
            }
            assert_eq!(seen.len(), n, "{spec}: strings do not cover");
        }
    }
}

#[test]
fn plane_types_in_b3() {
    // A rank-2 root-spanned subspace of B3 has type A1xA1, A2 or B2. Count
    // them from scratch through ranks of root pairs.
    let r = sys("B3");
    let n = r.num_positive();
    let mut planes: BTreeSet<Mask> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let pair = [r.root(i).to_i64(), r.root(j).to_i64()];
            let members = (0..n)
                .filter(|&k| rank_i128(&[pair[0].clone(), pair[1].clone(), r.root(k).to_i64()]) == 2)
                .fold(0, |m, k| m | bit(k));
            planes.insert(members);
        }
    }
    let mut by_size = [0usize; 5];
    for &p in &planes {
        by_size[count(p)] += 1;
    }
    // 4 roots: B2, 3 roots: A2, 2 roots: A1xA1
    assert_eq!(by_size, [0, 0, 6, 4, 3]);
    let lib = r.root_spanned_subspaces(2, r.full_mask());
    let lib: BTreeSet<Mask> = lib.iter().map(|u| u.roots()).collect();
    assert_eq!(lib, planes);
}

#[test]
fn kostant_rule_for_longest_element() {
    for spec in ["A3", "B3", "C3", "G2", "A1xA2"] {
        let r = sys(spec);
        let w0 = longest_element(&r);
        let mut m = exponents_of(&r, &w0, DEFAULT_GROUP_BUDGET).unwrap().unwrap();
        m.sort_unstable();
        let mut e = exp_multiset(&r, r.full_mask()).unwrap();
        e.retain(|&x| x > 0);
        assert_eq!(m, e, "{spec}");
        // Σ_{x ≤ w0} q^{ℓ(x)} counts the group by length.
        let p = interval_poincare(&r, &w0, DEFAULT_GROUP_BUDGET).unwrap();
        assert_eq!(p.eval(1) as u128, group_order(&r), "{spec}");
    }
}

#[test]
fn examples_with_known_answers() {
    let a3 = sys("A3");
    let w: WeylWord = "1 2 3 2 1".parse().unwrap();
    let s = inversion_set(&a3, &w).unwrap();
    assert_eq!(a3.engine().poincare(0, s), IntPoly::new(vec![1, 5, 8, 4]));
    assert_eq!(a3.engine().verdict(s).coexponents(), Some(vec![1, 2, 2]));
    let bad = inversion_set(&a3, &"2 1 3 2".parse().unwrap()).unwrap();
    assert!(a3.engine().verdict(bad).is_nonfree());
    let four_cycle = Arrangement::new(
        4,
        vec![vec![1, -1, 0, 0], vec![0, 1, -1, 0], vec![0, 0, 1, -1], vec![1, 0, 0, -1]],
    )
    .unwrap();
    assert!(four_cycle.verify_freeness().is_nonfree());
    let empty = Arrangement::empty(3);
    assert_eq!(empty.verify_freeness().padded_coexponents(), Some(&[0, 0, 0][..]));
}

#[test]
fn coconvex_counts_by_brute_force_in_rank_three() {
    for spec in ["A3", "B3", "C3"] {
        let r = sys(spec);
        let n = r.num_positive();
        let complement_closed = |s: Mask| {
            let c = r.full_mask() & !s;
            bits(c).all(|a| bits(c).all(|b| r.sum(a, b).is_none_or(|k| c >> k & 1 == 1)))
        };
        let brute = (0..1u128 << n).filter(|&s| complement_closed(s)).count();
        assert_eq!(enumerate_coconvex(&r, DEFAULT_ENUM_BUDGET).unwrap().len(), brute, "{spec}");
    }
}

//! Univariate integer polynomials: Poincaré polynomials of arrangements and
//! Bruhat intervals, splitting into linear factors, and q-integer
//! factorization.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Integer polynomial, constant term first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    /// `1 + m t`
    pub fn linear(m: i64) -> Self {
        IntPoly::new(vec![1, m])
    }

    /// The q-integer `[k]_q = 1 + q + ... + q^(k-1)`.
    pub fn q_integer(k: usize) -> Self {
        IntPoly::new(vec![1; k])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * x + c)
    }

    /// Multiplies by `t`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0);
        c.extend_from_slice(&self.coeffs);
        IntPoly { coeffs: c }
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Exact division by a polynomial whose leading coefficient is ±1 or
    /// divides every intermediate leading term. Returns `None` when the
    /// division leaves a remainder.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = *d.coeffs.last().unwrap();
        let dd = d.degree();
        let mut quot = vec![0; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let lead = rem[k + dd];
            if lead % dl != 0 {
                return None;
            }
            let q = lead / dl;
            quot[k] = q;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= q * dc;
            }
        }
        if rem.iter().any(|&x| x != 0) {
            return None;
        }
        Some(IntPoly::new(quot))
    }

    /// Writes `self` as `Π (1 + m_i t)` with positive integers `m_i`, if
    /// possible. Factors with `m_i = 0` are invisible and never reported;
    /// callers pad to the ambient dimension. Result is sorted.
    pub fn splits(&self) -> Option<Vec<u32>> {
        if self.coeff(0) != 1 {
            return None;
        }
        let mut p = self.clone();
        let mut out = Vec::new();
        while p.degree() > 0 {
            // The leading coefficient is the product of the remaining m_i.
            let lead = p.coeffs.last().unwrap().unsigned_abs();
            if *p.coeffs.last().unwrap() < 0 {
                return None;
            }
            let mut found = None;
            for m in 1..=lead {
                if !lead.is_multiple_of(m) {
                    continue;
                }
                if let Some(q) = p.exact_div(&IntPoly::linear(m as i64)) {
                    found = Some((m, q));
                    break;
                }
            }
            let (m, q) = found?;
            out.push(m as u32);
            p = q;
        }
        if p != IntPoly::one() {
            return None;
        }
        out.sort_unstable();
        Some(out)
    }

    /// Factors `self` as a product of q-integers `[m_i + 1]_q`, returning the
    /// sorted `m_i >= 1`. Divisors are tried smallest first, with
    /// backtracking, since greedy division alone is not confluent for
    /// arbitrary polynomials (e.g. `[2][6]`).
    pub fn q_integer_factors(&self) -> Option<Vec<u32>> {
        fn go(p: &IntPoly, min_k: usize, acc: &mut Vec<u32>) -> bool {
            if *p == IntPoly::one() {
                return true;
            }
            for k in min_k..=p.degree() + 1 {
                if let Some(q) = p.exact_div(&IntPoly::q_integer(k)) {
                    acc.push((k - 1) as u32);
                    if go(&q, k, acc) {
                        return true;
                    }
                    acc.pop();
                }
            }
            false
        }
        if self.coeff(0) != 1 {
            return None;
        }
        let mut acc = Vec::new();
        go(self, 2, &mut acc).then_some(acc)
    }

    /// Greedy variant of [`IntPoly::q_integer_factors`] without backtracking.
    pub fn q_integer_factors_greedy(&self) -> Option<Vec<u32>> {
        if self.coeff(0) != 1 {
            return None;
        }
        let mut p = self.clone();
        let mut out = Vec::new();
        'outer: while p != IntPoly::one() {
            for k in 2..=p.degree() + 1 {
                if let Some(q) = p.exact_div(&IntPoly::q_integer(k)) {
                    out.push((k - 1) as u32);
                    p = q;
                    continue 'outer;
                }
            }
            return None;
        }
        Some(out)
    }

    pub fn product_of_linear(ms: &[u32]) -> Self {
        ms.iter()
            .fold(IntPoly::one(), |acc, &m| &acc * &IntPoly::linear(m as i64))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

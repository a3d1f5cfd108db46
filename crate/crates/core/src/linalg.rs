//! Dense matrices over a group ring and the handful of exact algorithms the
//! rest of the crate needs: products, fraction-free determinants and
//! inverses, ranks over fields, and integer Smith normal form.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Coeff, CoefficientRing, GroupRingElement, RingContext};

#[derive(Debug, Clone)]
pub struct Matrix {
    ctx: Arc<RingContext>,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement>,
}

impl Matrix {
    pub fn zeros(ctx: &Arc<RingContext>, rows: usize, cols: usize) -> Self {
        Self { ctx: ctx.clone(), rows, cols, entries: vec![GroupRingElement::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &Arc<RingContext>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.entries[i * n + i] = GroupRingElement::one(ctx);
        }
        m
    }

    pub fn diagonal(ctx: &Arc<RingContext>, diag: &[GroupRingElement]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(ctx, n, n);
        for (i, v) in diag.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    pub fn from_rows(ctx: &Arc<RingContext>, rows: Vec<Vec<GroupRingElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            for v in row {
                if !v.same_context(&GroupRingElement::zero(ctx)) {
                    return Err(Error::ContextMismatch(format!("entry in row {i} lives in another ring")));
                }
                entries.push(v);
            }
        }
        Ok(Self { ctx: ctx.clone(), rows: r, cols: c, entries })
    }

    pub fn from_fn(ctx: &Arc<RingContext>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GroupRingElement) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { ctx: ctx.clone(), rows, cols, entries }
    }

    pub fn context(&self) -> &Arc<RingContext> { &self.ctx }

    pub fn rows(&self) -> usize { self.rows }

    pub fn cols(&self) -> usize { self.cols }

    pub fn is_square(&self) -> bool { self.rows == self.cols }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement { &self.entries[i * self.cols + j] }

    pub fn set(&mut self, i: usize, j: usize, v: GroupRingElement) { self.entries[i * self.cols + j] = v; }

    pub fn row(&self, i: usize) -> &[GroupRingElement] { &self.entries[i * self.cols..(i + 1) * self.cols] }

    pub fn to_rows(&self) -> Vec<Vec<GroupRingElement>> { (0..self.rows).map(|i| self.row(i).to_vec()).collect() }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GroupRingElement)> {
        self.entries.iter().enumerate().map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.checked_mul(b)?;
                    let slot = &mut out.entries[i * other.cols + j];
                    *slot = slot.checked_add(&prod)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[GroupRingElement]) -> Result<Vec<GroupRingElement>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{}x{} matrix on a length-{} vector", self.rows, self.cols, v.len())));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = GroupRingElement::zero(&self.ctx);
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix { Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone()) }

    /// Entrywise involution.
    pub fn alpha(&self) -> Matrix { self.map(GroupRingElement::alpha) }

    pub fn map(&self, f: impl Fn(&GroupRingElement) -> GroupRingElement) -> Matrix {
        Self { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map(&self, target: &Arc<RingContext>, f: impl Fn(&GroupRingElement) -> Result<GroupRingElement>) -> Result<Matrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self { ctx: target.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// Entrywise ring homomorphism, see [`GroupRingElement::substitute`].
    pub fn substitute(&self, target: &Arc<RingContext>, images: &[GroupRingElement]) -> Result<Matrix> {
        self.try_map(target, |v| v.substitute(target, images))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.entries().all(|(i, j, v)| if i == j { v.is_one() || (v - &GroupRingElement::one(&self.ctx)).is_zero() } else { v.is_zero() })
    }

    pub fn is_zero(&self) -> bool { self.entries.iter().all(GroupRingElement::is_zero) }

    pub fn is_diagonal(&self) -> bool { self.entries().all(|(i, j, v)| i == j || v.is_zero()) }

    /// Determinant by Bareiss fraction-free elimination (exact division at
    /// every step). Requires an exact integral-domain coefficient ring.
    pub fn determinant(&self) -> Result<GroupRingElement> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(GroupRingElement::one(&self.ctx));
        }
        let mut a = self.clone();
        let (_, sign, pivot) = bareiss_forward(&mut a, n)?;
        Ok(if sign < 0 { -pivot } else { pivot })
    }

    /// Exact inverse over `R`. Tries Gauss-Jordan with unit pivots first (the
    /// common case for braid generators); otherwise runs fraction-free
    /// elimination on `[A | I]`, which yields `det * A^{-1}` with entries in
    /// `R`, and divides by the determinant, which must be a unit.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("inverse of a {}x{} matrix", self.rows, self.cols)));
        }
        if let Some(inv) = self.unit_pivot_inverse()? {
            return Ok(inv);
        }
        self.bareiss_inverse()
    }

    fn unit_pivot_inverse(&self) -> Result<Option<Matrix>> {
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(&self.ctx, n);
        let mut used = vec![false; n];
        let mut pivot_row_of_col = vec![0usize; n];
        for col in 0..n {
            let mut found = None;
            for r in 0..n {
                if used[r] || a.get(r, col).is_zero() {
                    continue;
                }
                if let Some(u) = a.get(r, col).unit_inverse()? {
                    // prefer +-1 pivots to keep entries small
                    let better = found.as_ref().is_none_or(|(_, prev): &(usize, GroupRingElement)| prev.num_terms() > 1 && u.num_terms() == 1);
                    if better {
                        found = Some((r, u));
                    }
                }
            }
            let Some((r, uinv)) = found else {
                return Ok(None);
            };
            used[r] = true;
            pivot_row_of_col[col] = r;
            for j in 0..n {
                let v = a.get(r, j) * &uinv;
                a.set(r, j, v);
                let w = inv.get(r, j) * &uinv;
                inv.set(r, j, w);
            }
            for rr in 0..n {
                if rr == r || a.get(rr, col).is_zero() {
                    continue;
                }
                let f = a.get(rr, col).clone();
                for j in 0..n {
                    if !a.get(r, j).is_zero() {
                        let v = a.get(rr, j) - &(&f * a.get(r, j));
                        a.set(rr, j, v);
                    }
                    if !inv.get(r, j).is_zero() {
                        let w = inv.get(rr, j) - &(&f * inv.get(r, j));
                        inv.set(rr, j, w);
                    }
                }
            }
        }
        let rows = (0..n).map(|c| inv.row(pivot_row_of_col[c]).to_vec()).collect();
        Ok(Some(Self::from_rows(&self.ctx, rows)?))
    }

    fn bareiss_inverse(&self) -> Result<Matrix> {
        let n = self.rows;
        let mut aug = Self::zeros(&self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, GroupRingElement::one(&self.ctx));
        }
        let (_, _, pivot) = bareiss_forward(&mut aug, n)?;
        if pivot.is_zero() {
            return Err(Error::NotInvertible("determinant is zero".into()));
        }
        let pinv = pivot
            .unit_inverse()?
            .ok_or_else(|| Error::NotInvertible(format!("determinant {pivot} is not a unit of R")))?;
        // back substitution for Y = pivot * A^{-1}; each division is exact
        let mut y = Self::zeros(&self.ctx, n, n);
        for c in 0..n {
            for i in (0..n).rev() {
                let mut num = &pivot * aug.get(i, n + c);
                for k in i + 1..n {
                    num = &num - &(aug.get(i, k) * y.get(k, c));
                }
                let q = num
                    .div_exact(aug.get(i, i))?
                    .ok_or_else(|| Error::Internal("inexact division in fraction-free back substitution".into()))?;
                y.set(i, c, q);
            }
        }
        Ok(y.map(|v| v * &pinv))
    }
}

/// Bareiss elimination on the leading `n` columns of `a` (row swaps allowed).
/// Returns the swapped row order, the permutation sign and the final pivot,
/// which is `+-det` of the leading block (zero when singular).
fn bareiss_forward(a: &mut Matrix, n: usize) -> Result<(Vec<usize>, i32, GroupRingElement)> {
    if !a.ring_is_domain() {
        return Err(Error::UnsupportedCoefficients(format!(
            "fraction-free elimination needs an exact integral domain, not {}",
            a.ctx.coefficients()
        )));
    }
    let cols = a.cols;
    let mut order: Vec<usize> = (0..n).collect();
    let mut sign = 1;
    let mut prev = GroupRingElement::one(&a.ctx);
    for k in 0..n {
        if a.get(k, k).is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                return Ok((order, sign, GroupRingElement::zero(&a.ctx)));
            };
            for j in 0..cols {
                a.entries.swap(k * cols + j, r * cols + j);
            }
            order.swap(k, r);
            sign = -sign;
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            let aik = a.get(i, k).clone();
            for j in k + 1..cols {
                let num = &(&pivot * a.get(i, j)) - &(&aik * a.get(k, j));
                let v = if prev.is_one() {
                    num
                } else {
                    num.div_exact(&prev)?.ok_or_else(|| Error::Internal("inexact Bareiss division".into()))?
                };
                a.set(i, j, v);
            }
            a.set(i, k, GroupRingElement::zero(&a.ctx));
        }
        prev = pivot;
    }
    Ok((order, sign, prev))
}

impl Matrix {
    fn ring_is_domain(&self) -> bool { self.ctx.coefficients().is_integral_domain() }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries.iter().zip(&other.entries).all(|(a, b)| a == b)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a matrix of scalars. Exact Gaussian elimination over `Q` (integer
/// input is promoted) and `F_p`; singular values thresholded at
/// `tolerance * sigma_max` for complex-approx.
pub fn scalar_rank(ring: &CoefficientRing, rows: &[Vec<Coeff>]) -> Result<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("ragged scalar matrix".into()));
    }
    if rows.is_empty() || cols == 0 {
        return Ok(0);
    }
    match ring {
        CoefficientRing::ComplexApprox { tolerance } => {
            let m = DMatrix::from_fn(rows.len(), cols, |i, j| ring.to_complex(&rows[i][j]).unwrap_or(Complex64::new(f64::NAN, 0.0)));
            let sv = m.singular_values();
            let max = sv.iter().cloned().fold(0.0, f64::max);
            if max == 0.0 {
                return Ok(0);
            }
            Ok(sv.iter().filter(|s| **s > tolerance * max).count())
        }
        CoefficientRing::Integers => {
            let q = CoefficientRing::Rationals;
            let lifted = rows
                .iter()
                .map(|r| r.iter().map(|c| q.map_from(ring, c)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            scalar_rank(&q, &lifted)
        }
        _ => Ok(field_rank(ring, rows.to_vec())),
    }
}

fn field_rank(ring: &CoefficientRing, mut a: Vec<Vec<Coeff>>) -> usize {
    let rows = a.len();
    let cols = a[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !ring.is_zero(&a[r][c])) else { continue };
        a.swap(rank, p);
        let inv = ring.inverse(&a[rank][c]).expect("nonzero field element");
        for r in 0..rows {
            if r != rank && !ring.is_zero(&a[r][c]) {
                let f = ring.mul(&a[r][c], &inv);
                for j in c..cols {
                    let t = ring.mul(&f, &a[rank][j]);
                    a[r][j] = ring.sub(&a[r][j], &t);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Invariant factors (nonzero diagonal of the Smith normal form, each
/// dividing the next, all positive) of an integer matrix.
pub fn smith_invariants(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..m {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                for j in t..n {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..n {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for i in t..m {
                    let v = &a[i][t] * &q;
                    a[i][j] -= v;
                }
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold any non-multiple into the pivot row and retry
        if let Some(i) = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero())) {
            for j in t..n {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse;

    fn zx() -> Arc<RingContext> { RingContext::new(1, CoefficientRing::Integers) }

    fn m(ctx: &Arc<RingContext>, rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(ctx, rows.iter().map(|r| r.iter().map(|s| parse(ctx, s).unwrap()).collect()).collect()).unwrap()
    }

    #[test]
    fn burau_like_inverse() {
        let ctx = zx();
        let a = m(&ctx, &[&["-x", "1"], &["0", "1"]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(a.determinant().unwrap(), parse(&ctx, "-x").unwrap());
    }

    #[test]
    fn bareiss_path() {
        let ctx = zx();
        // det = (1+x)(1) - x*1 = 1, but no entry is a unit in column 0 except... none
        let a = m(&ctx, &[&["1 + x", "x"], &["1 + x + x^2", "1 + x^2"]]);
        let det = a.determinant().unwrap();
        let inv = a.bareiss_inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity(), "det {det}");
        let singular = m(&ctx, &[&["1 + x", "2 + 2*x"], &["1", "2"]]);
        assert!(singular.determinant().unwrap().is_zero());
        assert!(singular.inverse().is_err());
        let nonunit = m(&ctx, &[&["1 + x", "0"], &["0", "1"]]);
        assert!(matches!(nonunit.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn ranks() {
        let q = CoefficientRing::Rationals;
        let r = |v: i64| q.from_i64(v);
        assert_eq!(scalar_rank(&q, &[vec![r(1), r(2)], vec![r(2), r(4)]]).unwrap(), 1);
        let f2 = CoefficientRing::integers_mod(2).unwrap();
        let s = |v: i64| f2.from_i64(v);
        assert_eq!(scalar_rank(&f2, &[vec![s(1), s(1)], vec![s(1), s(3)]]).unwrap(), 1);
        let c = CoefficientRing::complex();
        let z = |v: f64| Coeff::Complex(Complex64::new(v, 0.0));
        assert_eq!(scalar_rank(&c, &[vec![z(1.0), z(2.0)], vec![z(2.0), z(4.0 + 1e-13)]]).unwrap(), 1);
        assert_eq!(scalar_rank(&c, &[vec![z(1.0), z(0.0)], vec![z(0.0), z(1.0)]]).unwrap(), 2);
    }

    #[test]
    fn smith() {
        let b = |v: i64| BigInt::from(v);
        assert_eq!(smith_invariants(&[vec![b(1), b(-1)], vec![b(-1), b(1)]]), vec![b(1)]);
        assert_eq!(smith_invariants(&[vec![b(2), b(4)], vec![b(6), b(8)]]), vec![b(2), b(4)]);
        assert_eq!(smith_invariants(&[vec![b(2), b(0)], vec![b(0), b(3)]]), vec![b(1), b(6)]);
        assert!(smith_invariants(&[vec![b(0)]]).is_empty());
    }
}

//! Dense matrices over truncated series, with the exact linear algebra the
//! group predicates and Newton solves need.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{rat_int, ExactScalar, Rational};
use crate::series::{SeriesCtx, ValSeries, Valuation};

/// Row-major dense matrix; all entries share a truncation context.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ValSeries>,
}

impl SeriesMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ValSeries>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{rows}x{cols}"),
                got: format!("{} entries", entries.len()),
            });
        }
        Ok(SeriesMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ValSeries,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        SeriesMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize, ctx: &SeriesCtx) -> Self {
        SeriesMatrix::from_fn(rows, cols, |_, _| ValSeries::zero(ctx))
    }

    pub fn identity(n: usize, ctx: &SeriesCtx) -> Self {
        SeriesMatrix::from_fn(n, n, |i, j| {
            if i == j {
                ValSeries::one(ctx)
            } else {
                ValSeries::zero(ctx)
            }
        })
    }

    /// Builds a square matrix of exact rational entries.
    pub fn from_rationals(n: usize, data: &[Vec<Rational>], ctx: &SeriesCtx) -> Self {
        SeriesMatrix::from_fn(n, n, |i, j| {
            ValSeries::from_rational(data[i][j].clone(), ctx)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &ValSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ValSeries) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[ValSeries] {
        &self.entries
    }

    /// Context of the first entry; entries share it by construction.
    pub fn ctx(&self) -> SeriesCtx {
        self.entries[0].ctx()
    }

    /// Least truncation among the entries — the precision this matrix is
    /// known to.
    pub fn min_trunc(&self) -> Rational {
        self.entries
            .iter()
            .map(|e| e.trunc())
            .min()
            .expect("nonempty matrix")
    }

    pub fn map(&self, f: impl Fn(&ValSeries) -> ValSeries) -> SeriesMatrix {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn conj(&self) -> SeriesMatrix {
        self.map(|e| e.conj())
    }

    /// Conjugate transpose; for members of the compact families this is the
    /// exact group inverse.
    pub fn conj_transpose(&self) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn scale(&self, c: &ValSeries) -> SeriesMatrix {
        self.map(|e| e * c)
    }

    pub fn scale_scalar(&self, c: &ExactScalar) -> SeriesMatrix {
        self.map(|e| e.scale(c))
    }

    pub fn trace(&self) -> ValSeries {
        debug_assert!(self.is_square());
        let mut acc = self.at(0, 0).clone();
        for i in 1..self.rows {
            acc = &acc + self.at(i, i);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_equiv(&self, other: &SeriesMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && (self - other).is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.is_equiv(&SeriesMatrix::identity(self.rows, &self.ctx()))
    }

    /// True when all entries of `self - I` lie in the maximal ideal.
    pub fn displacement_in_m(&self) -> bool {
        debug_assert!(self.is_square());
        let id = SeriesMatrix::identity(self.rows, &self.ctx());
        (self - &id).entries.iter().all(|e| e.in_m())
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square() && (&self.transpose() + self).is_zero()
    }

    pub fn is_anti_hermitian(&self) -> bool {
        self.is_square() && (&self.conj_transpose() + self).is_zero()
    }

    /// Least valuation among entries (Infinite for the zero matrix).
    pub fn min_val(&self) -> Valuation {
        self.entries
            .iter()
            .map(|e| e.val())
            .min()
            .expect("nonempty matrix")
    }

    pub fn mul_mat(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        SeriesMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = self.at(i, 0) * other.at(0, j);
            for k in 1..self.cols {
                acc = &acc + &(self.at(i, k) * other.at(k, j));
            }
            acc
        })
    }

    /// Entrywise standard part, as a constant-entry matrix; defined when all
    /// entries are bounded.
    pub fn standard_part(&self) -> Result<SeriesMatrix> {
        let ctx = self.ctx();
        let mut out = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            out.push(ValSeries::constant(e.standard_part()?, &ctx));
        }
        SeriesMatrix::new(self.rows, self.cols, out)
    }

    /// Fraction-free determinant (Bareiss one-step elimination) with
    /// minimal-valuation pivoting. Returns the zero series when the
    /// determinant vanishes modulo the working precision.
    pub fn det(&self) -> Result<ValSeries> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                expected: "square".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let ctx = self.ctx();
        if n == 1 {
            return Ok(self.at(0, 0).clone());
        }
        let mut m: Vec<Vec<ValSeries>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = 1i8;
        let mut prev = ValSeries::one(&ctx);
        for k in 0..n - 1 {
            // minimal-valuation pivot in the remaining submatrix
            let mut best: Option<(usize, usize, Valuation)> = None;
            for i in k..n {
                for j in k..n {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    let v = m[i][j].val();
                    if best.as_ref().map_or(true, |(_, _, bv)| v < *bv) {
                        best = Some((i, j, v));
                    }
                }
            }
            let (pi, pj) = match best {
                Some((i, j, _)) => (i, j),
                // remaining block vanishes: det is zero modulo the working precision
                None => {
                    let t = m[k][k].trunc();
                    return ValSeries::zero(&ctx).truncate_to(&t);
                }
            };
            if pi != k {
                m.swap(pi, k);
                sign = -sign;
            }
            if pj != k {
                for row in m.iter_mut() {
                    row.swap(pj, k);
                }
                sign = -sign;
            }
            let prev_inv = prev.inv()?;
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    // Bareiss: this division is exact at infinite precision
                    m[i][j] = &num * &prev_inv;
                }
            }
            prev = m[k][k].clone();
        }
        let mut d = m[n - 1][n - 1].clone();
        if sign < 0 {
            d = -&d;
        }
        Ok(d)
    }

    /// Inverse with the valuation certificate: refuses when
    /// `val(det) >= trunc/2`, which truncated arithmetic cannot distinguish
    /// from a vanishing determinant with enough headroom.
    pub fn inverse(&self) -> Result<SeriesMatrix> {
        let ctx = self.ctx();
        let bound = ctx.trunc() / rat_int(2);
        let d = self.det()?;
        let dv = d.val();
        let ok = match &dv {
            Valuation::Finite(v) => *v < bound,
            Valuation::Infinite => false,
        };
        if !ok {
            return Err(Error::Singular { det_val: dv, bound });
        }
        self.solve_gauss_jordan()
    }

    fn solve_gauss_jordan(&self) -> Result<SeriesMatrix> {
        let n = self.rows;
        let ctx = self.ctx();
        let mut a: Vec<Vec<ValSeries>> = (0..n)
            .map(|i| {
                let mut row: Vec<ValSeries> =
                    (0..n).map(|j| self.at(i, j).clone()).collect();
                for j in 0..n {
                    row.push(if i == j {
                        ValSeries::one(&ctx)
                    } else {
                        ValSeries::zero(&ctx)
                    });
                }
                row
            })
            .collect();
        for k in 0..n {
            let mut best: Option<(usize, Valuation)> = None;
            for (i, row) in a.iter().enumerate().skip(k) {
                if row[k].is_zero() {
                    continue;
                }
                let v = row[k].val();
                if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                    best = Some((i, v));
                }
            }
            let pi = match best {
                Some((i, _)) => i,
                None => {
                    return Err(Error::Singular {
                        det_val: Valuation::Infinite,
                        bound: ctx.trunc() / rat_int(2),
                    })
                }
            };
            a.swap(pi, k);
            let pinv = a[k][k].inv()?;
            for j in 0..2 * n {
                a[k][j] = &a[k][j] * &pinv;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    a[i][j] = &a[i][j] - &(&f * &a[k][j]);
                }
            }
        }
        let entries = a
            .into_iter()
            .flat_map(|row| row.into_iter().skip(n))
            .collect();
        SeriesMatrix::new(n, n, entries)
    }

    /// Block-diagonal assembly.
    pub fn block_diag(a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
        let ctx = a.ctx();
        SeriesMatrix::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            if i < a.rows && j < a.cols {
                a.at(i, j).clone()
            } else if i >= a.rows && j >= a.cols {
                b.at(i - a.rows, j - a.cols).clone()
            } else {
                ValSeries::zero(&ctx)
            }
        })
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> SeriesMatrix {
        SeriesMatrix::from_fn(h, w, |i, j| self.at(r0 + i, c0 + j).clone())
    }

    /// Places `self` into the top-left of an n-by-n identity.
    pub fn embed_in_identity(&self, n: usize, r0: usize) -> SeriesMatrix {
        debug_assert!(self.is_square() && r0 + self.rows <= n);
        let ctx = self.ctx();
        SeriesMatrix::from_fn(n, n, |i, j| {
            if i >= r0 && i < r0 + self.rows && j >= r0 && j < r0 + self.cols {
                self.at(i - r0, j - r0).clone()
            } else if i == j {
                ValSeries::one(&ctx)
            } else {
                ValSeries::zero(&ctx)
            }
        })
    }
}

impl Add for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn add(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn sub(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn mul(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        self.mul_mat(rhs)
    }
}

impl Neg for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn neg(self) -> SeriesMatrix {
        self.map(|e| -e)
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Matrix JSON: {"rows": r, "cols": c, "entries": [expression-string, ...]}.
impl Serialize for SeriesMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SeriesMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let strings: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        st.serialize_field("entries", &strings)?;
        st.end()
    }
}

/// Parses the matrix JSON emitted by `Serialize`.
pub fn matrix_from_json(value: &serde_json::Value, ctx: &SeriesCtx) -> Result<SeriesMatrix> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Config("matrix JSON must be an object".into()))?;
    let rows = obj
        .get("rows")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Config("missing rows".into()))? as usize;
    let cols = obj
        .get("cols")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Config("missing cols".into()))? as usize;
    let entries = obj
        .get("entries")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Config("missing entries".into()))?;
    let mut out = Vec::with_capacity(entries.len());
    for e in entries {
        let text = e
            .as_str()
            .ok_or_else(|| Error::Config("entries must be strings".into()))?;
        out.push(crate::parse::parse_expr(text, ctx)?);
    }
    SeriesMatrix::new(rows, cols, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn ctx() -> SeriesCtx {
        SeriesCtx::default()
    }

    fn m2(a: &str, b: &str, c: &str, d: &str) -> SeriesMatrix {
        SeriesMatrix::new(
            2,
            2,
            [a, b, c, d]
                .iter()
                .map(|t| parse_expr(t, &ctx()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_inverse() {
        let id = SeriesMatrix::identity(3, &ctx());
        assert!(id.inverse().unwrap().is_equiv(&id));
    }

    #[test]
    fn diagonal_inverse_by_back_multiplication() {
        let m = m2("1+e", "0", "0", "1");
        let inv = m.inverse().unwrap();
        assert!(m.mul_mat(&inv).is_identity());
        // top-left entry is the geometric series
        let expect = parse_expr("(1+e)^(-1)", &ctx()).unwrap();
        assert!(inv.at(0, 0).is_equiv(&expect));
    }

    #[test]
    fn all_eps_matrix_is_singular() {
        let m = m2("e", "e", "e", "e");
        assert!(matches!(m.inverse(), Err(Error::Singular { .. })));
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn det_with_infinitesimal_pivots() {
        let m = m2("e", "1", "1", "e");
        let d = m.det().unwrap();
        let expect = parse_expr("e^2 - 1", &ctx()).unwrap();
        assert!(d.is_equiv(&expect));
    }

    #[test]
    fn bareiss_matches_cofactor_3x3() {
        let texts = [
            ["1+e", "2", "0"],
            ["e", "1", "3"],
            ["1", "0", "1-e"],
        ];
        let m = SeriesMatrix::new(
            3,
            3,
            texts
                .iter()
                .flatten()
                .map(|t| parse_expr(t, &ctx()).unwrap())
                .collect(),
        )
        .unwrap();
        let d = m.det().unwrap();
        // cofactor expansion as an independent route
        let c = |i: usize, j: usize| m.at(i, j).clone();
        let minor = |a: ValSeries, b: ValSeries, cc: ValSeries, dd: ValSeries| &(&a * &dd) - &(&b * &cc);
        let expect = &(&(&c(0, 0) * &minor(c(1, 1), c(1, 2), c(2, 1), c(2, 2)))
            - &(&c(0, 1) * &minor(c(1, 0), c(1, 2), c(2, 0), c(2, 2))))
            + &(&c(0, 2) * &minor(c(1, 0), c(1, 1), c(2, 0), c(2, 1)));
        assert!(d.is_equiv(&expect));
    }

    #[test]
    fn standard_part_needs_bounded_entries() {
        let m = m2("e^(-1)", "0", "0", "1");
        assert!(matches!(m.standard_part(), Err(Error::OutsideO(_))));
        let b = m2("1+e", "e^2", "0", "1");
        let st = b.standard_part().unwrap();
        assert!(st.is_identity());
    }
}

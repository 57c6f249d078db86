use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::{Cplx, PrecisionContext, Scalar};

/// Which transition matrix a triangular matrix represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Monomial coefficients of the orthonormal polynomials, by column.
    B,
    /// Orthonormal-basis coefficients of the monomials, by column.
    C,
    Generic,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::B => "B",
            Role::C => "C",
            Role::Generic => "generic",
        })
    }
}

/// Upper-triangular `(N+1) x (N+1)` matrix stored by columns; column `j`
/// holds rows `0..=j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularMatrix<T> {
    columns: Vec<Vec<T>>,
    role: Role,
}

impl<T: Scalar> TriangularMatrix<T> {
    /// Checks the shape, and a positive diagonal for roles B and C.
    pub fn from_columns(columns: Vec<Vec<T>>, role: Role) -> Result<Self> {
        for (j, col) in columns.iter().enumerate() {
            if col.len() != j + 1 {
                return Err(Error::InvalidArgument(format!(
                    "column {j} of a triangular matrix must have {} entries, got {}",
                    j + 1,
                    col.len()
                )));
            }
            if role != Role::Generic && col[j].sign().is_le() {
                return Err(Error::ZeroDiagonal(j));
            }
        }
        Ok(TriangularMatrix { columns, role })
    }

    pub fn identity(order: usize, ctx: &PrecisionContext) -> Self {
        let columns =
            (0..=order).map(|j| (0..=j).map(|i| if i == j { T::one(ctx) } else { T::zero(ctx) }).collect()).collect();
        TriangularMatrix { columns, role: Role::Generic }
    }

    pub fn order(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    /// `t_{i,j}`, or `None` below the diagonal.
    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        self.columns.get(j).and_then(|c| c.get(i))
    }

    pub fn entry(&self, i: usize, j: usize, ctx: &PrecisionContext) -> T {
        self.get(i, j).cloned().unwrap_or_else(|| T::zero(ctx))
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.columns[j]
    }

    pub fn diagonal(&self, k: usize) -> &T {
        &self.columns[k][k]
    }

    /// Leading `(order+1) x (order+1)` block; exact because of triangularity.
    pub fn truncated(&self, order: usize) -> Self {
        TriangularMatrix { columns: self.columns[..=order.min(self.order())].to_vec(), role: self.role }
    }

    /// Entries promoted to at least `bits`.
    pub fn promote(&self, bits: u32) -> Self {
        let columns = self.columns.iter().map(|c| c.iter().map(|x| x.promote(bits)).collect()).collect();
        TriangularMatrix { columns, role: self.role }
    }

    /// Smallest entry precision, `None` for exact entries.
    pub fn precision(&self) -> Option<u32> {
        self.columns.iter().flatten().filter_map(|x| x.precision()).min()
    }

    /// Product of two triangular matrices of the same order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::InvalidArgument(format!("order mismatch: {} vs {}", self.order(), other.order())));
        }
        let columns = (0..self.size())
            .map(|j| {
                (0..=j)
                    .map(|i| {
                        let mut acc = self.columns[i][i].clone() * &other.columns[j][i];
                        for k in i + 1..=j {
                            acc = acc + self.columns[k][i].clone() * &other.columns[j][k];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(TriangularMatrix { columns, role: Role::Generic })
    }

    /// Whether the matrix is exactly the identity.
    pub fn is_identity(&self) -> bool {
        self.columns.iter().enumerate().all(|(j, col)| {
            col.iter().enumerate().all(|(i, x)| {
                if i == j {
                    (x.clone() - &T::from_rational(&rug::Rational::from(1), &PrecisionContext::exact())).is_zero()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    /// `max |t_{i,j} - delta_{i,j}|` evaluated at `bits`.
    pub fn identity_residual(&self, bits: u32) -> Float {
        let mut worst = Float::new(bits);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                let mut v = x.to_float(bits);
                if i == j {
                    v -= 1u32;
                }
                let v = v.abs();
                if v > worst {
                    worst = v;
                }
            }
        }
        worst
    }

    /// `T^t T` as a full row-major matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn gram(&self, ctx: &PrecisionContext) -> Vec<Vec<T>> {
        let n = self.size();
        let mut out = vec![vec![T::zero(ctx); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut acc = T::zero(ctx);
                for k in 0..=i {
                    acc = acc + self.columns[i][k].clone() * &self.columns[j][k];
                }
                out[j][i] = acc.clone();
                out[i][j] = acc;
            }
        }
        out
    }

    /// `T v` for a vector of length at most `order + 1`.
    pub fn apply(&self, v: &[Cplx<T>], ctx: &PrecisionContext) -> Result<Vec<Cplx<T>>> {
        self.check_len(v.len())?;
        Ok((0..v.len())
            .map(|i| {
                let mut acc = Cplx::zero(ctx);
                for (j, vj) in v.iter().enumerate().skip(i) {
                    acc = acc + vj.scale(&self.columns[j][i]);
                }
                acc
            })
            .collect())
    }

    /// `T^t v` for a vector of length at most `order + 1`; the result has the same length.
    pub fn transpose_apply(&self, v: &[Cplx<T>], ctx: &PrecisionContext) -> Result<Vec<Cplx<T>>> {
        self.check_len(v.len())?;
        Ok((0..v.len())
            .map(|n| {
                let mut acc = Cplx::zero(ctx);
                for (k, vk) in v.iter().enumerate().take(n + 1) {
                    acc = acc + vk.scale(&self.columns[n][k]);
                }
                acc
            })
            .collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len > self.size() {
            return Err(Error::OutOfRange { index: len - 1, order: self.order() });
        }
        Ok(())
    }

    /// Squared Frobenius mass of columns `0..=n` for each requested `n`.
    pub fn column_mass_partial_sums(&self, orders: &[usize], ctx: &PrecisionContext) -> Result<Vec<T>> {
        let mut cumulative = Vec::with_capacity(self.size());
        let mut acc = T::zero(ctx);
        for col in &self.columns {
            for x in col {
                acc = acc + x.square();
            }
            cumulative.push(acc.clone());
        }
        orders
            .iter()
            .map(|&n| cumulative.get(n).cloned().ok_or(Error::OutOfRange { index: n, order: self.order() }))
            .collect()
    }

    /// CSV dump `row,col,value` of the full square matrix in column-major order.
    pub fn to_csv(&self, digits: usize, ctx: &PrecisionContext) -> Result<String> {
        let rows: Vec<Vec<T>> =
            (0..self.size()).map(|i| (0..self.size()).map(|j| self.entry(i, j, ctx)).collect()).collect();
        matrix_csv(&rows, digits)
    }
}

/// CSV dump of a row-major square matrix in column-major order.
pub fn matrix_csv<T: Scalar>(rows: &[Vec<T>], digits: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(["row", "col", "value"]).map_err(io)?;
    let n = rows.len();
    for j in 0..n {
        for (i, row) in rows.iter().enumerate() {
            w.write_record([i.to_string(), j.to_string(), row[j].to_decimal(digits)]).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

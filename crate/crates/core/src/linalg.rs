//! Exact dense linear algebra over cyclotomic fields.
//!
//! Pivoting is "first nonzero" with positional tie-breaking: there are no
//! magnitude comparisons in exact arithmetic, so none are used. Row
//! reduction normalizes pivots to 1 and eliminates above and below, which
//! makes the reduced form (and hence [`Subspace`] bases) canonical.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::exactnum::{lcm_order, Cyclotomic, NumError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("matrix shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("entry count {got} does not fill a {rows}x{cols} matrix")]
    WrongEntryCount { rows: usize, cols: usize, got: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A dense matrix over a single cyclotomic field `Q(zeta_order)`. All
/// entries are promoted to a common order at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    order: u64,
    entries: Vec<Cyclotomic>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Cyclotomic>) -> Result<Self, LinAlgError> {
        if entries.len() != rows * cols {
            return Err(LinAlgError::WrongEntryCount { rows, cols, got: entries.len() });
        }
        let order = entries.iter().fold(1, |o, e| lcm_order(o, e.order()));
        let entries = entries
            .into_iter()
            .map(|e| e.embed(order))
            .collect::<Result<_, _>>()?;
        Ok(Matrix { rows, cols, order, entries })
    }

    pub fn from_rationals(rows: usize, cols: usize, values: Vec<Rational>) -> Result<Self, LinAlgError> {
        let entries = values
            .into_iter()
            .map(|v| Cyclotomic::from_rational(1, v))
            .collect();
        Matrix::new(rows, cols, entries)
    }

    pub fn zero(rows: usize, cols: usize, order: u64) -> Self {
        Matrix {
            rows,
            cols,
            order,
            entries: vec![Cyclotomic::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u64) -> Self {
        let mut m = Matrix::zero(n, n, order);
        for i in 0..n {
            m.entries[i * n + i] = Cyclotomic::one(order);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn at(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Cyclotomic::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    /// Re-embed every entry into `Q(zeta_new_order)`.
    pub fn promote(&self, new_order: u64) -> Result<Self, LinAlgError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed(new_order))
            .collect::<Result<_, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, order: new_order, entries })
    }

    fn common_order(&self, rhs: &Matrix) -> Result<(Matrix, Matrix), LinAlgError> {
        let order = lcm_order(self.order, rhs.order);
        Ok((self.promote(order)?, rhs.promote(order)?))
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Self, LinAlgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(self.shape_mismatch(rhs));
        }
        let (a, b) = self.common_order(rhs)?;
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.add(y))
            .collect::<Result<_, _>>()?;
        Ok(Matrix { rows: a.rows, cols: a.cols, order: a.order, entries })
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Self, LinAlgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(self.shape_mismatch(rhs));
        }
        let (a, b) = self.common_order(rhs)?;
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.sub(y))
            .collect::<Result<_, _>>()?;
        Ok(Matrix { rows: a.rows, cols: a.cols, order: a.order, entries })
    }

    fn shape_mismatch(&self, rhs: &Matrix) -> LinAlgError {
        LinAlgError::ShapeMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: rhs.rows,
            right_cols: rhs.cols,
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Self, LinAlgError> {
        if self.cols != rhs.rows {
            return Err(self.shape_mismatch(rhs));
        }
        let (a, b) = self.common_order(rhs)?;
        let mut entries = Vec::with_capacity(a.rows * b.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = Cyclotomic::zero(a.order);
                for k in 0..a.cols {
                    acc = acc.add(&a.at(i, k).mul(b.at(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Matrix { rows: a.rows, cols: b.cols, order: a.order, entries })
    }

    pub fn scale(&self, c: &Cyclotomic) -> Result<Self, LinAlgError> {
        let order = lcm_order(self.order, c.order());
        let c = c.embed(order)?;
        let m = self.promote(order)?;
        let entries = m
            .entries
            .iter()
            .map(|e| e.mul(&c))
            .collect::<Result<_, _>>()?;
        Ok(Matrix { rows: m.rows, cols: m.cols, order, entries })
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Result<Self, LinAlgError> {
        debug_assert!(self.is_square());
        let mut out = Matrix::identity(self.rows, self.order);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Cyclotomic {
        debug_assert!(self.is_square());
        let mut acc = Cyclotomic::zero(self.order);
        for i in 0..self.rows {
            acc = acc.add(self.at(i, i)).expect("uniform order");
        }
        acc
    }

    /// Stack matrices vertically (they must share a column count).
    pub fn stack(blocks: &[&Matrix]) -> Result<Self, LinAlgError> {
        let cols = blocks.first().map(|m| m.cols).unwrap_or(0);
        let order = blocks.iter().fold(1, |o, m| lcm_order(o, m.order));
        let mut entries = Vec::new();
        let mut rows = 0;
        for m in blocks {
            if m.cols != cols {
                return Err(blocks[0].shape_mismatch(m));
            }
            let p = m.promote(order)?;
            entries.extend(p.entries);
            rows += m.rows;
        }
        Ok(Matrix { rows, cols, order, entries })
    }

    /// Reduced row echelon form; returns the reduced matrix together with
    /// the pivot columns (whose count is the rank).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.entries.swap(row * m.cols + j, p * m.cols + j);
            }
            let inv = m.at(row, col).inverse().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.at(row, j).mul(&inv).expect("uniform order");
                m.entries[row * m.cols + j] = v;
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for j in 0..m.cols {
                        let v = m
                            .at(r, j)
                            .sub(&f.mul(m.at(row, j)).expect("uniform order"))
                            .expect("uniform order");
                        m.entries[r * m.cols + j] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The kernel `{x : Mx = 0}` as a canonical subspace.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let is_pivot: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (rank_idx, &c) in pivots.iter().enumerate() {
                v[c] = Some(rank_idx);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut vec_entries = vec![Cyclotomic::zero(self.order); self.cols];
            vec_entries[free] = Cyclotomic::one(self.order);
            for (&pc, row_idx) in pivots.iter().zip(0..) {
                vec_entries[pc] = r.at(row_idx, free).neg();
            }
            basis.push(vec_entries);
        }
        Subspace::from_rows(self.cols, self.order, basis)
    }

    /// Inverse of a square matrix, or `NotInvertible`.
    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        debug_assert!(self.is_square());
        let n = self.rows;
        let aug = Matrix {
            rows: n,
            cols: 2 * n,
            order: self.order,
            entries: {
                let id = Matrix::identity(n, self.order);
                let mut e = Vec::with_capacity(2 * n * n);
                for i in 0..n {
                    e.extend(self.entries[i * n..(i + 1) * n].iter().cloned());
                    e.extend(id.entries[i * n..(i + 1) * n].iter().cloned());
                }
                e
            },
        };
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinAlgError::NotInvertible);
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(r.at(i, n + j).clone());
            }
        }
        Ok(Matrix { rows: n, cols: n, order: self.order, entries })
    }
}

/// A linear subspace of `Q(zeta_order)^ambient`, stored as a reduced
/// row-echelon basis, which is canonical: two subspaces are equal iff
/// their stored bases are equal entrywise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    order: u64,
    basis: Vec<Vec<Cyclotomic>>,
}

impl Subspace {
    fn from_rows(ambient: usize, order: u64, rows: Vec<Vec<Cyclotomic>>) -> Subspace {
        if rows.is_empty() {
            return Subspace { ambient, order, basis: Vec::new() };
        }
        let m = Matrix {
            rows: rows.len(),
            cols: ambient,
            order,
            entries: rows.into_iter().flatten().collect(),
        };
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len())
            .map(|i| (0..ambient).map(|j| r.at(i, j).clone()).collect())
            .collect();
        Subspace { ambient, order, basis }
    }

    pub fn full(ambient: usize, order: u64) -> Subspace {
        let id = Matrix::identity(ambient, order);
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| id.at(i, j).clone()).collect())
            .collect();
        Subspace { ambient, order, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn basis(&self) -> &[Vec<Cyclotomic>] {
        &self.basis
    }

    /// Re-embed the basis into `Q(zeta_new_order)` (for comparing spaces
    /// computed at different working orders).
    pub fn promote(&self, new_order: u64) -> Result<Subspace, LinAlgError> {
        let basis = self
            .basis
            .iter()
            .map(|row| row.iter().map(|e| e.embed(new_order)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        Ok(Subspace { ambient: self.ambient, order: new_order, basis })
    }
}

/// `true` when `m^rows = 0` for the square matrix `m`.
pub fn is_nilpotent(m: &Matrix) -> bool {
    m.is_square() && m.pow(m.rows() as u32).map(|p| p.is_zero()).unwrap_or(false)
}

/// `exp(t*N)` for nilpotent `N`: the usual series, which is a finite sum
/// `sum_{k < dim} (tN)^k / k!` here.
pub fn exp_nilpotent(n: &Matrix, t: &Rational) -> Result<Matrix, LinAlgError> {
    if !is_nilpotent(n) {
        return Err(LinAlgError::NotNilpotent);
    }
    let tn = n.scale_rational(t);
    let mut out = Matrix::identity(n.rows(), n.order());
    let mut term = Matrix::identity(n.rows(), n.order());
    let mut factorial = Rational::one();
    for k in 1..n.rows() as u64 {
        term = term.mul(&tn)?;
        factorial *= Rational::from_integer(k.into());
        out = out.add(&term.scale_rational(&factorial.recip()))?;
    }
    Ok(out)
}

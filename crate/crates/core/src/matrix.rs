//! Square matrices over a [`FieldSpec`] and semilinear maps built from them.
//!
//! Matrices act on column vectors from the left; `a.mul(&b)` acts as
//! `v -> a(b(v))`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{GroupError, Result};
use crate::field::{FieldElement, FieldSpec};

pub type Vector = Vec<FieldElement>;

#[derive(Clone)]
pub struct SquareMatrix {
    field: Arc<FieldSpec>,
    dim: usize,
    entries: Vec<FieldElement>,
}

impl PartialEq for SquareMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.entries == other.entries
            && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }
}

impl Eq for SquareMatrix {}

impl Hash for SquareMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.dim.hash(state);
        self.entries.hash(state);
    }
}

impl SquareMatrix {
    pub fn identity(field: &Arc<FieldSpec>, dim: usize) -> Self {
        let mut entries = vec![FieldElement::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = field.one();
        }
        SquareMatrix { field: Arc::clone(field), dim, entries }
    }

    pub fn zero(field: &Arc<FieldSpec>, dim: usize) -> Self {
        SquareMatrix { field: Arc::clone(field), dim, entries: vec![FieldElement::ZERO; dim * dim] }
    }

    /// Row-major entries.
    pub fn from_entries(field: &Arc<FieldSpec>, dim: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(GroupError::Invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.0 >= field.order()) {
            return Err(GroupError::Invalid("entry outside the field".into()));
        }
        Ok(SquareMatrix { field: Arc::clone(field), dim, entries })
    }

    /// Convenience constructor from integer rows over the prime subfield.
    pub fn from_int_rows(field: &Arc<FieldSpec>, rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(GroupError::Invalid("matrix rows must have equal length".into()));
            }
            entries.extend(row.iter().map(|&x| field.from_int(x)));
        }
        SquareMatrix::from_entries(field, dim, entries)
    }

    pub fn diagonal(field: &Arc<FieldSpec>, diag: &[FieldElement]) -> Self {
        let mut m = SquareMatrix::zero(field, diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn same_ambient(&self, other: &SquareMatrix) -> bool {
        self.dim == other.dim && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| self.get(i, j).0 == if i == j { 1 } else { 0 })
        })
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        let f = &self.field;
        let n = self.dim;
        let mut out = vec![FieldElement::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.entries[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] = f.add(out[i * n + j], f.mul(a, b));
                    }
                }
            }
        }
        SquareMatrix { field: Arc::clone(f), dim: n, entries: out }
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vector {
        let f = &self.field;
        let n = self.dim;
        (0..n)
            .map(|i| {
                (0..n).fold(FieldElement::ZERO, |acc, j| f.add(acc, f.mul(self.entries[i * n + j], v[j])))
            })
            .collect()
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        out
    }

    pub fn scale(&self, s: FieldElement) -> SquareMatrix {
        let f = &self.field;
        SquareMatrix {
            field: Arc::clone(f),
            dim: self.dim,
            entries: self.entries.iter().map(|&e| f.mul(e, s)).collect(),
        }
    }

    pub fn sub(&self, other: &SquareMatrix) -> SquareMatrix {
        let f = &self.field;
        SquareMatrix {
            field: Arc::clone(f),
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &SquareMatrix) -> SquareMatrix {
        let f = &self.field;
        SquareMatrix {
            field: Arc::clone(f),
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    /// Apply the e-th power of Frobenius to every entry.
    pub fn frobenius(&self, e: u32) -> SquareMatrix {
        if e % self.field.degree() == 0 {
            return self.clone();
        }
        let f = &self.field;
        SquareMatrix {
            field: Arc::clone(f),
            dim: self.dim,
            entries: self.entries.iter().map(|&a| f.frobenius(a, e)).collect(),
        }
    }

    pub fn trace(&self) -> FieldElement {
        (0..self.dim).fold(FieldElement::ZERO, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn determinant(&self) -> FieldElement {
        let f = &self.field;
        let n = self.dim;
        let mut m = self.entries.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return FieldElement::ZERO;
            };
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let p = m[col * n + col];
            det = f.mul(det, p);
            let pinv = f.inv(p).expect("pivot is nonzero");
            for r in (col + 1)..n {
                let factor = f.mul(m[r * n + col], pinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<SquareMatrix> {
        let f = &self.field;
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut inv = SquareMatrix::identity(f, n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(GroupError::Singular)?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
            }
            let pinv = f.inv(a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = f.mul(a[col * n + j], pinv);
                inv[col * n + j] = f.mul(inv[col * n + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let x = f.mul(factor, a[col * n + j]);
                    a[r * n + j] = f.sub(a[r * n + j], x);
                    let y = f.mul(factor, inv[col * n + j]);
                    inv[r * n + j] = f.sub(inv[r * n + j], y);
                }
            }
        }
        Ok(SquareMatrix { field: Arc::clone(f), dim: n, entries: inv })
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.field, self.dim, (0..self.dim).map(|i| self.row(i)).collect())
    }

    pub fn row(&self, i: usize) -> Vector {
        self.entries[i * self.dim..(i + 1) * self.dim].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Arc<FieldSpec>, cols: &[Vector]) -> Result<SquareMatrix> {
        let n = cols.len();
        let mut m = SquareMatrix::zero(field, n);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(GroupError::Invalid("column length mismatch".into()));
            }
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// `[[a,b],[c,d]]` style, entries formatted in the field's notation.
    pub fn to_text(&self) -> String {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| {
                let r: Vec<String> = (0..self.dim).map(|j| self.field.format(self.get(i, j))).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Rank of a list of row vectors by Gaussian elimination.
pub fn rank_of_rows(field: &FieldSpec, width: usize, rows: Vec<Vector>) -> usize {
    echelon(field, width, rows).len()
}

/// Reduced row echelon basis of the span of `rows`.
pub fn echelon(field: &FieldSpec, width: usize, mut rows: Vec<Vector>) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows.iter_mut() {
        reduce_against(field, row, &basis, &pivots);
        if let Some(p) = (0..width).find(|&j| !row[j].is_zero()) {
            let inv = field.inv(row[p]).expect("nonzero");
            for x in row.iter_mut() {
                *x = field.mul(*x, inv);
            }
            // keep the basis fully reduced
            for b in basis.iter_mut() {
                let factor = b[p];
                if !factor.is_zero() {
                    for j in 0..width {
                        let v = field.mul(factor, row[j]);
                        b[j] = field.sub(b[j], v);
                    }
                }
            }
            basis.push(row.clone());
            pivots.push(p);
        }
    }
    basis
}

/// Reduce `v` modulo an echelon basis with the given pivot columns.
pub fn reduce_against(field: &FieldSpec, v: &mut [FieldElement], basis: &[Vector], pivots: &[usize]) {
    for (b, &p) in basis.iter().zip(pivots) {
        let factor = v[p];
        if !factor.is_zero() {
            for j in 0..v.len() {
                let x = field.mul(factor, b[j]);
                v[j] = field.sub(v[j], x);
            }
        }
    }
}

/// A semilinear map `v -> A · σ^e(v)` where σ is the r-power Frobenius applied entrywise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SemilinearElement {
    matrix: SquareMatrix,
    frob: u32,
}

impl SemilinearElement {
    pub fn new(matrix: SquareMatrix, frob: u32) -> Result<Self> {
        let k = matrix.field().degree();
        if frob >= k {
            return Err(GroupError::Invalid(format!("frobenius exponent {frob} must be below {k}")));
        }
        Ok(SemilinearElement { matrix, frob })
    }

    pub fn identity(field: &Arc<FieldSpec>, dim: usize) -> Self {
        SemilinearElement { matrix: SquareMatrix::identity(field, dim), frob: 0 }
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn frob(&self) -> u32 {
        self.frob
    }

    /// `(A,e)∘(B,f) = (A·σ^e(B), e+f mod k)`.
    pub fn compose(&self, other: &SemilinearElement) -> SemilinearElement {
        let k = self.matrix.field().degree();
        SemilinearElement {
            matrix: self.matrix.mul(&other.matrix.frobenius(self.frob)),
            frob: (self.frob + other.frob) % k,
        }
    }

    pub fn inverse(&self) -> Result<SemilinearElement> {
        let k = self.matrix.field().degree();
        let back = (k - self.frob) % k;
        Ok(SemilinearElement { matrix: self.matrix.inverse()?.frobenius(back), frob: back })
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vector {
        let f = self.matrix.field();
        let twisted: Vector = v.iter().map(|&x| f.frobenius(x, self.frob)).collect();
        self.matrix.apply(&twisted)
    }

    pub fn is_identity(&self) -> bool {
        self.frob == 0 && self.matrix.is_identity()
    }
}

impl fmt::Debug for SemilinearElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ frob^{}", self.matrix.to_text(), self.frob)
    }
}

use std::fmt;

use super::{Algebra, Element};
use crate::{Error, Result, Scalar};

/// A dense matrix whose entries lie in one algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgMatrix<K: Ord> {
    rows: usize,
    cols: usize,
    entries: Vec<Element<K>>,
}

impl<K: Ord + Clone> AlgMatrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        AlgMatrix { rows, cols, entries: vec![Element::zero(); rows * cols] }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Element<K>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}×{cols} matrix",
                entries.len()
            )));
        }
        Ok(AlgMatrix { rows, cols, entries })
    }

    pub fn identity<A: Algebra<Key = K>>(alg: &A, n: usize) -> Self {
        Self::scalar_matrix(alg, n, alg.one())
    }

    /// `e · I_n`.
    pub fn scalar_matrix<A: Algebra<Key = K>>(_alg: &A, n: usize, e: Element<K>) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Matrix with constant entries `c_ij · 1`.
    pub fn constant<A: Algebra<Key = K>>(alg: &A, rows: usize, cols: usize, values: &[Scalar]) -> Result<Self> {
        let entries = values.iter().map(|c| Element::scalar(alg, c.clone())).collect();
        Self::from_entries(rows, cols, entries)
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

    pub fn get(&self, i: usize, j: usize) -> &Element<K> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Element<K>) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn entries(&self) -> &[Element<K>] {
        &self.entries
    }

    pub fn mul<A: Algebra<Key = K>>(&self, other: &Self, alg: &A) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Element::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc.add_scaled(&a.mul(b, alg)?, &Scalar::from_int(1));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Element<K>, &Element<K>) -> Element<K>) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("entrywise operation on different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(AlgMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        AlgMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e.scaled(c)).collect() }
    }

    pub fn trace(&self) -> Element<K> {
        let mut t = Element::zero();
        for i in 0..self.rows.min(self.cols) {
            t.add_scaled(self.get(i, i), &Scalar::from_int(1));
        }
        t
    }

    /// Block diagonal sum `self ⊕ other`.
    pub fn block_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn map_entries<L: Ord + Clone>(&self, f: impl Fn(&Element<K>) -> Result<Element<L>>) -> Result<AlgMatrix<L>> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(AlgMatrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Exact test `e·e = e`.
    pub fn is_idempotent<A: Algebra<Key = K>>(&self, alg: &A) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("idempotent test needs a square matrix".into()));
        }
        Ok(self.mul(self, alg)? == *self)
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate<A: Algebra<Key = K>>(&self, g: &Self, g_inv: &Self, alg: &A) -> Result<Self> {
        g.mul(self, alg)?.mul(g_inv, alg)
    }
}

pub(crate) fn verify_inverse<A: Algebra>(alg: &A, g: &AlgMatrix<A::Key>, h: &AlgMatrix<A::Key>) -> Result<()> {
    if !g.is_square() || (g.rows, g.cols) != (h.rows, h.cols) {
        return Err(Error::DimensionMismatch("inverse candidate shape".into()));
    }
    let id = AlgMatrix::identity(alg, g.rows);
    if g.mul(h, alg)? == id && h.mul(g, alg)? == id {
        Ok(())
    } else {
        Err(Error::NotInvertible)
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for AlgMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AlgMatrix {}×{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.entries[i * self.cols + j])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

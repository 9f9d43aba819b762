//! Exact linear algebra over ℚ(i).
//!
//! Three tools cover every use in the crate:
//! - [`DenseMatrix`] for small systems (inverses, kernels, change of basis);
//! - [`exact_rank`], a fraction-free sparse elimination over ℤ[i] with
//!   Markowitz-style pivot selection;
//! - [`Echelon`], an incrementally built sparse echelon basis that supports
//!   canonical reduction modulo a subspace.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Scalar;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `a + c·b` for sparse vectors.
pub fn sparse_axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<Scalar>], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<DenseMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = DenseMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Some solution of `M x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = DenseMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.iter().all(|(i, _)| *i < rows)));
        SparseMatrix { rows, columns }
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m.get(i, j).is_zero())
                    .map(|i| (i, m.get(i, j).clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: m.rows(), columns }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i, j, v.clone());
            }
        }
        m
    }

    pub fn mul_sparse_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, c) in v {
            for (i, x) in &self.columns[*j] {
                let e = acc.entry(*i).or_insert_with(Scalar::zero);
                *e += &(c * x);
            }
        }
        sparse_from_map(acc)
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows);
        let columns = other.columns.iter().map(|c| self.mul_sparse_vec(c)).collect();
        SparseMatrix { rows: self.rows, columns }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| sparse_axpy(a, &Scalar::one(), b))
            .collect();
        SparseMatrix { rows: self.rows, columns }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

fn gauss_row(v: &SparseVec) -> Vec<(usize, GaussInt)> {
    let mut l = BigInt::one();
    for (_, c) in v {
        l = l.lcm(&c.denominator_lcm());
    }
    let lq = num_rational::BigRational::from_integer(l);
    v.iter()
        .map(|(i, c)| {
            let re = (c.re() * &lq).to_integer();
            let im = (c.im() * &lq).to_integer();
            (*i, GaussInt { re, im })
        })
        .collect()
}

fn remove_content(row: &mut [(usize, GaussInt)]) {
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(&x.re).gcd(&x.im);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, x) in row.iter_mut() {
        x.re = &x.re / &g;
        x.im = &x.im / &g;
    }
}

/// Exact rank of a sparse matrix.
///
/// Rows are scaled into ℤ[i] and eliminated without division
/// (`r ← p·r − a·pivot_row`, then the integer content is removed). The pivot
/// column is a sparsest remaining column and the pivot row a shortest row in
/// it, which bounds the Markowitz cost `(r−1)(c−1)` of each step.
pub fn exact_rank(m: &SparseMatrix) -> usize {
    // Eliminate along the shorter dimension; rank(M) = rank(Mᵀ).
    let vectors: Vec<SparseVec> = if m.cols() <= m.rows() {
        m.columns.clone()
    } else {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); m.rows()];
        for (j, col) in m.columns.iter().enumerate() {
            for (i, v) in col {
                rows[*i].push((j, v.clone()));
            }
        }
        rows
    };
    let ncols = if m.cols() <= m.rows() { m.rows() } else { m.cols() };
    rank_of_rows(vectors, ncols)
}

fn rank_of_rows(vectors: Vec<SparseVec>, ncols: usize) -> usize {
    let mut rows: Vec<Option<Vec<(usize, GaussInt)>>> =
        vectors.iter().map(|v| if v.is_empty() { None } else { Some(gauss_row(v)) }).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        if let Some(row) = row {
            for (c, _) in row {
                col_rows[*c].insert(r);
            }
        }
    }
    let mut queue: BTreeSet<(usize, usize)> =
        col_rows.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(c, s)| (s.len(), c)).collect();

    let mut rank = 0;
    while let Some(&(_, c)) = queue.iter().next() {
        let candidates = &col_rows[c];
        let r = *candidates
            .iter()
            .min_by_key(|&&r| rows[r].as_ref().map_or(usize::MAX, Vec::len))
            .expect("non-empty column");
        let pivot_row = rows[r].take().expect("active row");
        let p = pivot_row.iter().find(|(j, _)| *j == c).expect("pivot entry").1.clone();
        for (j, _) in &pivot_row {
            let old = col_rows[*j].len();
            queue.remove(&(old, *j));
            col_rows[*j].remove(&r);
            if !col_rows[*j].is_empty() {
                queue.insert((col_rows[*j].len(), *j));
            }
        }
        rank += 1;

        let others: Vec<usize> = col_rows[c].iter().copied().collect();
        for s in others {
            let row = rows[s].take().expect("active row");
            let a = row.iter().find(|(j, _)| *j == c).expect("entry in column").1.clone();
            let mut merged = Vec::with_capacity(row.len() + pivot_row.len());
            let (mut i, mut k) = (0, 0);
            while i < row.len() || k < pivot_row.len() {
                if k == pivot_row.len() || (i < row.len() && row[i].0 < pivot_row[k].0) {
                    merged.push((row[i].0, row[i].1.mul(&p)));
                    i += 1;
                } else if i == row.len() || pivot_row[k].0 < row[i].0 {
                    let v = GaussInt { re: BigInt::zero(), im: BigInt::zero() }.sub(&pivot_row[k].1.mul(&a));
                    merged.push((pivot_row[k].0, v));
                    k += 1;
                } else {
                    let v = row[i].1.mul(&p).sub(&pivot_row[k].1.mul(&a));
                    if !v.is_zero() {
                        merged.push((row[i].0, v));
                    }
                    i += 1;
                    k += 1;
                }
            }
            remove_content(&mut merged);
            let old_cols: BTreeSet<usize> = row.iter().map(|(j, _)| *j).collect();
            let new_cols: BTreeSet<usize> = merged.iter().map(|(j, _)| *j).collect();
            for j in old_cols.symmetric_difference(&new_cols) {
                let old = col_rows[*j].len();
                queue.remove(&(old, *j));
                if new_cols.contains(j) {
                    col_rows[*j].insert(s);
                } else {
                    col_rows[*j].remove(&s);
                }
                if !col_rows[*j].is_empty() {
                    queue.insert((col_rows[*j].len(), *j));
                }
            }
            if !merged.is_empty() {
                rows[s] = Some(merged);
            }
        }
    }
    rank
}

/// Incremental sparse echelon basis with monic pivot rows.
///
/// Every stored row has its leading entry equal to one at a distinct pivot
/// column. [`Echelon::reduce`] eliminates every pivot column, so the reduced
/// vector is the canonical representative modulo the span and the map is
/// linear.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.pivots.is_empty() {
            return v.clone();
        }
        let mut acc: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut cursor = 0usize;
        while let Some((&col, _)) = acc.range(cursor..).next() {
            cursor = col + 1;
            let Some(row) = self.pivots.get(&col) else { continue };
            let c = acc.remove(&col).expect("present");
            for (j, x) in row.iter().skip(1) {
                let e = acc.entry(*j).or_insert_with(Scalar::zero);
                *e -= &(&c * x);
                if e.is_zero() {
                    acc.remove(j);
                }
            }
        }
        acc.into_iter().collect()
    }

    /// Adds `v` to the span; returns the new pivot column if `v` was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let r = self.reduce(v);
        let (lead, c) = r.first()?.clone();
        let inv = c.inv().expect("nonzero leading entry");
        let row: SparseVec = r.into_iter().map(|(j, x)| (j, &x * &inv)).collect();
        self.pivots.insert(lead, row);
        Some(lead)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Basis of `{x : Σ x_j · cols[j] = 0}`.
pub fn kernel_of_columns(cols: &[SparseVec], nrows: usize) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        debug_assert!(v.iter().all(|(i, _)| *i < nrows));
        v.push((nrows + j, Scalar::one()));
        let r = ech.reduce(&v);
        match r.first() {
            Some((lead, _)) if *lead < nrows => {
                ech.insert(&r);
            }
            Some(_) => kernel.push(r.into_iter().map(|(i, c)| (i - nrows, c)).collect()),
            None => unreachable!("tracking coordinate cannot cancel"),
        }
    }
    kernel
}

/// Dense rank of a sparse matrix; used as an independent cross-check.
pub fn dense_rank(m: &SparseMatrix) -> usize {
    m.to_dense().rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> SparseMatrix {
        let d = DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect());
        SparseMatrix::from_dense(&d)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(exact_rank(&int_matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert_eq!(exact_rank(&SparseMatrix::zeros(3, 4)), 0);
        assert_eq!(exact_rank(&int_matrix(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn rank_with_gaussian_and_fractional_entries() {
        let d = DenseMatrix::from_rows(vec![
            vec![Scalar::i(), Scalar::ratio(1, 2)],
            vec![Scalar::from_int(-1), Scalar::new(num_rational::BigRational::zero(), num_rational::BigRational::new(1.into(), 2.into()))],
        ]);
        // second row = i · first row
        assert_eq!(exact_rank(&SparseMatrix::from_dense(&d)), 1);
        assert_eq!(d.rank(), 1);
    }

    #[test]
    fn kernel_and_inverse() {
        let d = DenseMatrix::from_rows(vec![
            vec![Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(3)],
            vec![Scalar::from_int(2), Scalar::from_int(4), Scalar::from_int(6)],
        ]);
        let k = d.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(d.mul_vec(v).iter().all(Zero::is_zero));
        }
        let cols = SparseMatrix::from_dense(&d);
        let ks = kernel_of_columns(cols.columns(), 2);
        assert_eq!(ks.len(), 2);
        let m = DenseMatrix::from_rows(vec![
            vec![Scalar::from_int(2), Scalar::from_int(1)],
            vec![Scalar::from_int(1), Scalar::from_int(1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), DenseMatrix::identity(2));
        assert!(int_matrix(&[&[1, 2], &[2, 4]]).to_dense().inverse().is_none());
    }

    #[test]
    fn echelon_reduction_is_canonical() {
        let mut e = Echelon::new();
        e.insert(&vec![(0, Scalar::from_int(2)), (2, Scalar::from_int(1))]);
        e.insert(&vec![(1, Scalar::from_int(1)), (2, Scalar::from_int(3))]);
        let v = vec![(0, Scalar::from_int(4)), (1, Scalar::from_int(1)), (3, Scalar::from_int(1))];
        let r = e.reduce(&v);
        assert!(r.iter().all(|(i, _)| *i != 0 && *i != 1));
        // v − 2·row0 − row1 = (0,0,-5,1)
        assert_eq!(r, vec![(2, Scalar::from_int(-5)), (3, Scalar::from_int(1))]);
        assert!(e.contains(&vec![(0, Scalar::from_int(1)), (1, Scalar::from_int(1)), (2, Scalar::ratio(7, 2))]));
    }
}

use num_traits::{One, Zero};

use super::{AlgMatrix, Algebra, Element};
use crate::linalg::{DenseMatrix, SparseMatrix, SparseVec};
use crate::{Error, Result, Scalar};

/// A finite-dimensional unital algebra given by structure constants.
///
/// Basis element 0 is always the unit, so `A/ℂ·1` is spanned by the basis
/// elements `1..dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDAlgebra {
    labels: Vec<String>,
    /// `table[i * dim + j]` is the product `e_i · e_j`.
    table: Vec<SparseVec>,
}

/// Failures found by [`FDAlgebra::validate`]; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Basis triples `(i, j, k)` with `(e_i e_j) e_k ≠ e_i (e_j e_k)`.
    pub associativity_failures: Vec<(usize, usize, usize)>,
    /// Basis indices `i` with `1·e_i ≠ e_i` or `e_i·1 ≠ e_i`.
    pub unit_failures: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.associativity_failures.is_empty() && self.unit_failures.is_empty()
    }
}

fn normalize(v: SparseVec) -> SparseVec {
    let mut v: Vec<_> = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += &c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl FDAlgebra {
    /// Builds an algebra whose unit is a basis vector.
    ///
    /// If the unit is `e_j` with `j ≠ 0` the basis is reordered to put it
    /// first. A unit that is not a single basis vector is rejected; use
    /// [`FDAlgebra::with_unit_rebased`] to adapt the basis instead.
    pub fn new(labels: Vec<String>, table: Vec<SparseVec>, unit: SparseVec) -> Result<Self> {
        let dim = labels.len();
        Self::check_shape(dim, &table)?;
        let unit = normalize(unit);
        match unit.as_slice() {
            [(j, c)] if c.is_one() => {
                let alg = FDAlgebra { labels, table: table.into_iter().map(normalize).collect() };
                if *j == 0 {
                    Ok(alg)
                } else {
                    let mut order: Vec<usize> = vec![*j];
                    order.extend((0..dim).filter(|i| i != j));
                    Ok(alg.permuted(&order))
                }
            }
            _ => Err(Error::InvalidAlgebra("unit is not a basis vector".into())),
        }
    }

    /// Builds an algebra from structure constants in an arbitrary basis,
    /// replacing one basis vector by the unit.
    ///
    /// Returns the algebra and the matrix whose columns express the new basis
    /// in the old coordinates.
    pub fn with_unit_rebased(
        labels: Vec<String>,
        table: Vec<SparseVec>,
        unit: SparseVec,
    ) -> Result<(Self, DenseMatrix)> {
        let dim = labels.len();
        Self::check_shape(dim, &table)?;
        let unit = normalize(unit);
        let Some(&(j, _)) = unit.first() else {
            return Err(Error::InvalidAlgebra("zero unit".into()));
        };
        let raw = FDAlgebra { labels: labels.clone(), table: table.into_iter().map(normalize).collect() };
        let mut p = DenseMatrix::zeros(dim, dim);
        for (i, c) in &unit {
            p.set(*i, 0, c.clone());
        }
        let mut new_labels = vec!["1".to_string()];
        let mut col = 1;
        for i in (0..dim).filter(|&i| i != j) {
            p.set(i, col, Scalar::one());
            new_labels.push(labels[i].clone());
            col += 1;
        }
        let alg = raw.change_basis_unchecked(&p, new_labels)?;
        Ok((alg, p))
    }

    fn check_shape(dim: usize, table: &[SparseVec]) -> Result<()> {
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if table.len() != dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants for {} of {} basis pairs",
                table.len(),
                dim * dim
            )));
        }
        if table.iter().flatten().any(|(k, _)| *k >= dim) {
            return Err(Error::InvalidAlgebra("structure constant index out of range".into()));
        }
        Ok(())
    }

    fn permuted(&self, order: &[usize]) -> Self {
        let dim = self.dim();
        let mut pos = vec![0; dim];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut table = vec![Vec::new(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let v = self.table[order[a] * dim + order[b]].iter().map(|(k, c)| (pos[*k], c.clone())).collect();
                table[a * dim + b] = normalize(v);
            }
        }
        FDAlgebra { labels: order.iter().map(|&i| self.labels[i].clone()).collect(), table }
    }

    /// The same algebra in the basis `f_j = Σ_i P_ij e_i`; `f_0` must be the unit.
    pub fn change_basis(&self, p: &DenseMatrix, labels: Vec<String>) -> Result<Self> {
        let dim = self.dim();
        if p.rows() != dim || p.cols() != dim || labels.len() != dim {
            return Err(Error::DimensionMismatch("change of basis".into()));
        }
        let first = p.column(0);
        if first.iter().enumerate().any(|(i, c)| if i == 0 { !c.is_one() } else { !c.is_zero() }) {
            return Err(Error::InvalidAlgebra("new first basis vector must be the unit".into()));
        }
        self.change_basis_unchecked(p, labels)
    }

    fn change_basis_unchecked(&self, p: &DenseMatrix, labels: Vec<String>) -> Result<Self> {
        let dim = self.dim();
        let pinv = p.inverse().ok_or(Error::NotInvertible)?;
        let cols: Vec<Vec<Scalar>> = (0..dim).map(|j| p.column(j)).collect();
        let mut table = vec![Vec::new(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let prod = self.mul_dense(&cols[a], &cols[b]);
                let coords = pinv.mul_vec(&prod);
                table[a * dim + b] =
                    coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        let alg = FDAlgebra { labels, table };
        let unit_ok = (0..dim).all(|i| {
            alg.table[i] == vec![(i, Scalar::one())] && alg.table[i * dim] == vec![(i, Scalar::one())]
        });
        if !unit_ok {
            return Err(Error::InvalidAlgebra("first basis vector is not a two-sided unit".into()));
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn mul_dense(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![Scalar::zero(); dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.product(i, j) {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    pub fn to_dense(&self, e: &Element<usize>) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        for (k, c) in e.terms() {
            v[*k] = c.clone();
        }
        v
    }

    pub fn from_dense(&self, v: &[Scalar]) -> Element<usize> {
        Element::from_terms(v.iter().cloned().enumerate())
    }

    /// Checks associativity on all basis triples and the unit laws.
    pub fn validate(&self) -> ValidationReport {
        let dim = self.dim();
        let mut report = ValidationReport::default();
        for i in 0..dim {
            let e = vec![(i, Scalar::one())];
            if self.table[i] != e || self.table[i * dim] != e {
                report.unit_failures.push(i);
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.product(i, j);
                for k in 0..dim {
                    let mut left: Element<usize> = Element::zero();
                    for (m, c) in ij {
                        left.add_scaled(&Element::from_terms(self.product(*m, k).iter().cloned()), c);
                    }
                    let mut right: Element<usize> = Element::zero();
                    for (m, c) in self.product(j, k) {
                        right.add_scaled(&Element::from_terms(self.product(i, *m).iter().cloned()), c);
                    }
                    if left != right {
                        report.associativity_failures.push((i, j, k));
                    }
                }
            }
        }
        report
    }

    pub fn is_commutative(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| (0..dim).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// `dim [A, A]`, the span of all commutators of basis elements.
    pub fn commutator_dim(&self) -> usize {
        let dim = self.dim();
        let mut cols = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let mut e: Element<usize> = Element::from_terms(self.product(i, j).iter().cloned());
                e.add_scaled(&Element::from_terms(self.product(j, i).iter().cloned()), &-Scalar::one());
                cols.push(e.terms().map(|(k, c)| (*k, c.clone())).collect());
            }
        }
        crate::linalg::exact_rank(&SparseMatrix::from_columns(dim, cols))
    }

    /// Matrix of left multiplication by `a`, in the basis.
    pub fn left_regular(&self, a: &[Scalar]) -> DenseMatrix {
        let dim = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..dim)
            .map(|j| {
                let mut e = vec![Scalar::zero(); dim];
                e[j] = Scalar::one();
                self.mul_dense(a, &e)
            })
            .collect();
        DenseMatrix::from_columns(&cols, dim)
    }

    /// Whether the linear map `phi` (columns = images of basis elements, in
    /// `target`'s basis) is a unital algebra homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &FDAlgebra, phi: &DenseMatrix) -> bool {
        let dim = self.dim();
        if phi.cols() != dim || phi.rows() != target.dim() {
            return false;
        }
        let images: Vec<Vec<Scalar>> = (0..dim).map(|j| phi.column(j)).collect();
        let mut unit = vec![Scalar::zero(); target.dim()];
        unit[0] = Scalar::one();
        if images[0] != unit {
            return false;
        }
        for i in 0..dim {
            for j in 0..dim {
                let mut prod = vec![Scalar::zero(); dim];
                for (k, c) in self.product(i, j) {
                    prod[*k] = c.clone();
                }
                if phi.mul_vec(&prod) != target.mul_dense(&images[i], &images[j]) {
                    return false;
                }
            }
        }
        true
    }
}

impl Algebra for FDAlgebra {
    type Key = usize;

    fn unit_key(&self) -> usize {
        0
    }

    fn mul_keys(&self, a: &usize, b: &usize) -> Result<Element<usize>> {
        Ok(Element::from_terms(self.product(*a, *b).iter().cloned()))
    }

    fn key_label(&self, key: &usize) -> String {
        self.labels[*key].clone()
    }

    fn symbol(&self, name: &str) -> Option<Element<usize>> {
        self.labels.iter().position(|l| l == name).map(Element::basis)
    }

    fn invert_matrix(
        &self,
        g: &AlgMatrix<usize>,
        candidate: Option<&AlgMatrix<usize>>,
    ) -> Result<AlgMatrix<usize>> {
        if let Some(h) = candidate {
            super::matrix::verify_inverse(self, g, h)?;
            return Ok(h.clone());
        }
        invert_by_regular_representation(self, g)
    }
}

/// Solves `g·h = 1` in `M_k(A)` as a linear system on `M_k(A) ≅ ℂ^{k²·dim}`.
fn invert_by_regular_representation(alg: &FDAlgebra, g: &AlgMatrix<usize>) -> Result<AlgMatrix<usize>> {
    let k = g.rows();
    if g.cols() != k {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let dim = alg.dim();
    let n = k * k * dim;
    let idx = |r: usize, c: usize, b: usize| (r * k + c) * dim + b;
    let mut cols = Vec::with_capacity(n);
    for r in 0..k {
        for c in 0..k {
            for b in 0..dim {
                // g · (E_rc ⊗ e_b) has column c equal to g[·, r]·e_b.
                let mut col = vec![Scalar::zero(); n];
                for i in 0..k {
                    let prod = g.get(i, r).mul(&Element::basis(b), alg)?;
                    for (m, v) in prod.terms() {
                        col[idx(i, c, *m)] = v.clone();
                    }
                }
                cols.push(col);
            }
        }
    }
    let lg = DenseMatrix::from_columns(&cols, n);
    let mut rhs = vec![Scalar::zero(); n];
    for i in 0..k {
        rhs[idx(i, i, 0)] = Scalar::one();
    }
    let x = lg.solve(&rhs).ok_or(Error::NotInvertible)?;
    let mut h = AlgMatrix::zeros(k, k);
    for r in 0..k {
        for c in 0..k {
            let e = Element::from_terms((0..dim).map(|b| (b, x[idx(r, c, b)].clone())));
            h.set(r, c, e);
        }
    }
    super::matrix::verify_inverse(alg, g, &h).map_err(|_| Error::NotInvertible)?;
    Ok(h)
}

//! Ready-made algebras and matrices: matrix algebras, truncated polynomial
//! rings, group algebras, the sphere and circle coordinate rings, and the
//! Bott projector.

use num_traits::One;

use crate::algebra::{AlgMatrix, Algebra, Element, FDAlgebra, Generator, Monomial, PresentedAlgebra, Rule};
use crate::linalg::SparseVec;
use crate::morita::{self, GroupTable};
use crate::{Result, Scalar};

/// Default monomial degree cap for presented models.
pub const DEFAULT_DEGREE_CAP: u32 = 24;

/// The ground field as a one-dimensional algebra.
pub fn complex_numbers() -> FDAlgebra {
    FDAlgebra::new(vec!["1".into()], vec![vec![(0, Scalar::one())]], vec![(0, Scalar::one())])
        .expect("ℂ is a valid algebra")
}

/// `ℂ[x]/(xⁿ)` with basis `1, x, …, x^{n−1}`.
pub fn truncated_polynomial(n: usize) -> FDAlgebra {
    assert!(n >= 1);
    let labels = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        })
        .collect();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(if i + j < n { vec![(i + j, Scalar::one())] } else { Vec::new() });
        }
    }
    FDAlgebra::new(labels, table, vec![(0, Scalar::one())]).expect("truncated polynomial ring")
}

/// Structure constants of `M_n(ℂ)` in the matrix-unit basis `e_ij`
/// (index `i·n + j`), with labels `e11, e12, …` and the unit `Σ e_ii`.
pub fn matrix_unit_table(n: usize) -> (Vec<String>, Vec<SparseVec>, SparseVec) {
    let dim = n * n;
    let labels = (0..dim).map(|k| format!("e{}{}", k / n + 1, k % n + 1)).collect();
    let mut table = vec![Vec::new(); dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let (i, j) = (a / n, a % n);
            let (k, l) = (b / n, b % n);
            if j == k {
                table[a * dim + b] = vec![(i * n + l, Scalar::one())];
            }
        }
    }
    let unit = (0..n).map(|i| (i * n + i, Scalar::one())).collect();
    (labels, table, unit)
}

/// `M_n(ℂ)` with the unit replacing `e11` as first basis vector.
pub fn matrix_algebra_c(n: usize) -> FDAlgebra {
    let (labels, table, unit) = matrix_unit_table(n);
    FDAlgebra::with_unit_rebased(labels, table, unit).expect("matrix algebra").0
}

/// Functions on `k` points.
pub fn function_algebra_c(k: usize) -> FDAlgebra {
    morita::function_algebra(k).expect("k ≥ 1")
}

/// Group algebra of `ℤ/n`.
pub fn cyclic_group_algebra(n: usize) -> FDAlgebra {
    morita::group_algebra(&GroupTable::cyclic(n)).expect("cyclic group")
}

/// Group algebra of the symmetric group on three letters.
pub fn symmetric_group_algebra_s3() -> FDAlgebra {
    morita::group_algebra(&GroupTable::symmetric(3)).expect("symmetric group")
}

/// `ℂ[x₁, …, x_m]` truncated at a monomial degree cap, without relations.
pub fn free_commutative(names: &[&str], cap: u32) -> Result<PresentedAlgebra> {
    PresentedAlgebra::new(names.iter().map(|n| Generator::new(n)).collect(), Vec::new(), cap)
}

/// Coordinate ring of the unit sphere `ℂ[x,y,z]/(x²+y²+z²−1)` with the rule
/// `z² → 1 − x² − y²`.
pub fn sphere_with_cap(cap: u32) -> Result<PresentedAlgebra> {
    let n = 3;
    let sq = |i: usize| {
        let mut m = Monomial::one(n);
        m.0[i] = 2;
        m
    };
    let rhs = Element::from_terms([(Monomial::one(n), Scalar::one()), (sq(0), -Scalar::one()), (sq(1), -Scalar::one())]);
    let gens = ["x", "y", "z"].iter().map(|g| Generator::new(g)).collect();
    PresentedAlgebra::new(gens, vec![Rule { lhs: sq(2), rhs }], cap)
}

pub fn sphere() -> PresentedAlgebra {
    sphere_with_cap(DEFAULT_DEGREE_CAP).expect("sphere presentation")
}

/// Laurent polynomials `ℂ[u, u⁻¹]`: generator `u` and its declared inverse `v`.
pub fn laurent(cap: u32) -> Result<PresentedAlgebra> {
    PresentedAlgebra::new(vec![Generator::new("u"), Generator::inverse_of("v", 0)], Vec::new(), cap)
}

/// `ℂ[x]/(xⁿ)` as a presented algebra.
pub fn truncated_polynomial_presented(n: u32, cap: u32) -> Result<PresentedAlgebra> {
    let rule = Rule { lhs: Monomial(vec![n]), rhs: Element::zero() };
    PresentedAlgebra::new(vec![Generator::new("x")], vec![rule], cap)
}

/// Constant 2×2 Pauli matrices `σ₁, σ₂, σ₃` over any algebra.
pub fn pauli<A: Algebra>(alg: &A) -> [AlgMatrix<A::Key>; 3] {
    let z = Scalar::from_int(0);
    let o = Scalar::one();
    let i = Scalar::i();
    let m = |v: [Scalar; 4]| AlgMatrix::constant(alg, 2, 2, &v).expect("2×2");
    [
        m([z.clone(), o.clone(), o.clone(), z.clone()]),
        m([z.clone(), -&i, i.clone(), z.clone()]),
        m([o.clone(), z.clone(), z, -o]),
    ]
}

/// The Bott projector `½(1 + xσ₁ + yσ₂ + zσ₃)` over an algebra with symbols
/// `x`, `y`, `z`.
pub fn bott_projector<A: Algebra>(alg: &A) -> Result<AlgMatrix<A::Key>> {
    let sym = |s: &str| {
        alg.symbol(s).ok_or_else(|| crate::Error::InvalidAlgebra(format!("algebra has no symbol `{s}`")))
    };
    let coords = [sym("x")?, sym("y")?, sym("z")?];
    let mut e = AlgMatrix::identity(alg, 2);
    for (s, c) in pauli(alg).iter().zip(&coords) {
        let scaled = s.map_entries(|a| a.mul(c, alg))?;
        e = e.add(&scaled)?;
    }
    Ok(e.scaled(&Scalar::ratio(1, 2)))
}

/// The 1×1 matrix `(a)`.
pub fn one_by_one<K: Ord + Clone>(a: Element<K>) -> AlgMatrix<K> {
    AlgMatrix::from_entries(1, 1, vec![a]).expect("1×1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_dimensions() {
        assert_eq!(complex_numbers().dim(), 1);
        assert_eq!(matrix_algebra_c(3).dim(), 9);
        assert_eq!(cyclic_group_algebra(4).dim(), 4);
        assert_eq!(symmetric_group_algebra_s3().dim(), 6);
        assert_eq!(function_algebra_c(4).dim(), 4);
        for a in [matrix_algebra_c(2), cyclic_group_algebra(3), symmetric_group_algebra_s3(), function_algebra_c(3)] {
            assert!(a.validate().is_valid());
        }
    }

    #[test]
    fn pauli_matrices_square_to_one() {
        let s = sphere();
        let id = AlgMatrix::identity(&s, 2);
        for p in pauli(&s) {
            assert_eq!(p.mul(&p, &s).unwrap(), id);
            assert!(p.trace().is_zero());
        }
    }

    #[test]
    fn bott_trace_is_one() {
        let s = sphere();
        let e = bott_projector(&s).unwrap();
        assert_eq!(e.trace(), s.one());
    }
}

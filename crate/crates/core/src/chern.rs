//! Cuntz–Quillen Chern characters of idempotents and invertibles.
//!
//! For an idempotent `e ∈ M_k(A)` the even character has components
//! `Tr e` in degree 0 and `s^n (2n)!/n! · Tr((e − ½)(de)^{2n})` in degree `2n`,
//! where `s = 1` for [`SignConvention::Plain`] and `s = −1` for
//! [`SignConvention::Alternating`]. For an invertible `g` the odd character
//! has components `n! · Tr(g⁻¹dg (dg⁻¹dg)ⁿ)` in degree `2n + 1`. Both are
//! emitted with `(2πi)⁰` tags; [`apply_scaling_c`] applies the normalization.

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{AlgMatrix, Algebra, Element, FDAlgebra};
use crate::homology::TruncatedCoordinates;
use crate::linalg::Echelon;
use crate::omega::{self, Form, GradedChain};
use crate::{Error, Result, Scalar};

/// Sign inserted in front of the degree-`2n` terms of the even character.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// Coefficients `(2n)!/n!`. With `b(ω da) = (−1)^{|ω|}[ω, a]` this makes the
    /// even character a `(B − b)`-cycle.
    #[default]
    Plain,
    /// Coefficients `(−1)ⁿ (2n)!/n!`.
    Alternating,
}

impl SignConvention {
    fn factor(self, n: usize) -> Scalar {
        match self {
            SignConvention::Alternating if n % 2 == 1 => -Scalar::one(),
            _ => Scalar::one(),
        }
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// A square matrix whose entries are forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix<K: Ord> {
    size: usize,
    entries: Vec<Form<K>>,
}

impl<K: Ord + Clone> FormMatrix<K> {
    /// Entries of `m` as degree-zero forms.
    pub fn from_matrix(m: &AlgMatrix<K>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("form matrices must be square".into()));
        }
        Ok(FormMatrix { size: m.rows(), entries: m.entries().iter().map(omega::zero_form).collect() })
    }

    /// Entrywise `d` of a matrix over `A`.
    pub fn differential<A: Algebra<Key = K>>(alg: &A, m: &AlgMatrix<K>) -> Result<Self> {
        let base = Self::from_matrix(m)?;
        Ok(FormMatrix { size: base.size, entries: base.entries.iter().map(|f| omega::d(alg, f)).collect() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Form<K> {
        &self.entries[i * self.size + j]
    }

    pub fn mul<A: Algebra<Key = K>>(&self, other: &Self, alg: &A) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch("form matrix sizes differ".into()));
        }
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Element::zero();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc.add_scaled(&omega::form_mul(alg, a, b)?, &Scalar::one());
                }
                entries.push(acc);
            }
        }
        Ok(FormMatrix { size: n, entries })
    }

    pub fn trace(&self) -> Form<K> {
        let mut t = Element::zero();
        for i in 0..self.size {
            t.add_scaled(self.get(i, i), &Scalar::one());
        }
        t
    }
}

/// Even Cuntz–Quillen character of an idempotent, degrees `0, 2, …, 2·n_max`.
pub fn ch_cq_even<A: Algebra>(
    alg: &A,
    e: &AlgMatrix<A::Key>,
    n_max: usize,
    sign: SignConvention,
) -> Result<GradedChain<A::Key>> {
    if !e.is_idempotent(alg)? {
        return Err(Error::NonIdempotent);
    }
    let mut chain = GradedChain::new();
    chain.add_component(0, &omega::zero_form(&e.trace()), 0)?;
    let half = AlgMatrix::identity(alg, e.rows()).scaled(&Scalar::ratio(1, 2));
    let mut cur = FormMatrix::from_matrix(&e.sub(&half)?)?;
    let de = FormMatrix::differential(alg, e)?;
    for n in 1..=n_max {
        cur = cur.mul(&de, alg)?.mul(&de, alg)?;
        let coeff = Scalar::from(factorial(2 * n) / factorial(n)) * sign.factor(n);
        chain.add_component(2 * n, &cur.trace().scaled(&coeff), 0)?;
    }
    Ok(chain)
}

/// Odd Cuntz–Quillen character of an invertible, degrees `1, 3, …, 2·n_max + 1`.
///
/// The inverse is computed by the algebra, or verified if supplied.
pub fn ch_cq_odd<A: Algebra>(
    alg: &A,
    g: &AlgMatrix<A::Key>,
    inverse: Option<&AlgMatrix<A::Key>>,
    n_max: usize,
) -> Result<GradedChain<A::Key>> {
    let h = alg.invert_matrix(g, inverse)?;
    let dg = FormMatrix::differential(alg, g)?;
    let dh = FormMatrix::differential(alg, &h)?;
    let step = dh.mul(&dg, alg)?;
    let mut cur = FormMatrix::from_matrix(&h)?.mul(&dg, alg)?;
    let mut chain = GradedChain::new();
    for n in 0..=n_max {
        chain.add_component(2 * n + 1, &cur.trace().scaled(&Scalar::from(factorial(n))), 0)?;
        if n < n_max {
            cur = cur.mul(&step, alg)?;
        }
    }
    Ok(chain)
}

/// Result of checking `(B − b)c = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleReport {
    pub holds: bool,
    /// Degrees `≤ checked_through` of `(B − b)c` were checked.
    pub checked_through: usize,
    pub failing_degrees: Vec<usize>,
}

/// Checks that every component of `(B − b)c` of degree `≤ through` vanishes.
/// Only components of `c` of degree `≤ through + 1` enter.
pub fn verify_cycle<A: Algebra>(alg: &A, c: &GradedChain<A::Key>, through: usize) -> Result<CycleReport> {
    let dc = omega::apply_periodic_differential(alg, &c.truncated(through + 1))?;
    let failing: Vec<usize> = dc.components().map(|(deg, _)| deg).filter(|&deg| deg <= through).collect();
    Ok(CycleReport { holds: failing.is_empty(), checked_through: through, failing_degrees: failing })
}

/// Checks a chain of top degree `t` through degree `t − 1`, the range in
/// which `(B − b)c` does not involve components above `t`.
pub fn verify_cycle_auto<A: Algebra>(alg: &A, c: &GradedChain<A::Key>) -> Result<CycleReport> {
    let top = c.max_degree().unwrap_or(0);
    verify_cycle(alg, c, top.saturating_sub(1))
}

/// The scaling map: degree `2k` gets `(2πi)^{−k}`, degree `2k+1` gets
/// `(2πi)^{−(k+1)}`; coefficients are unchanged.
pub fn apply_scaling_c<K: Ord + Clone>(c: &GradedChain<K>) -> GradedChain<K> {
    let mut out = c.clone();
    for deg in c.degrees() {
        let shift = if deg % 2 == 0 { deg / 2 } else { deg / 2 + 1 };
        out.set_twopi_power(deg, c.twopi_power(deg) - shift as i64);
    }
    out
}

/// Outcome of comparing `ch(g e g⁻¹)` with `ch(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationReport {
    /// The difference vanishes identically through the checked degree.
    pub difference_zero: bool,
    /// Degree-zero components agree modulo commutators.
    pub degree_zero_boundary: bool,
    /// `Some(true)` if the difference is `(B − b)` of a chain of degree
    /// `≤ 2n + 1`, `None` if that degree exceeds the cap.
    pub is_boundary: Option<bool>,
    pub checked_through: usize,
}

/// Checks that `ch(g e g⁻¹) − ch(e)`, through degree `2·n_max`, is a
/// `(B − b)`-boundary, by exact membership in the image of `B − b` on odd
/// forms of degree `≤ 2·n_max + 1` (truncated to degree `≤ 2·n_max`).
pub fn conjugate_class_check(
    alg: &FDAlgebra,
    e: &AlgMatrix<usize>,
    g: &AlgMatrix<usize>,
    inverse: Option<&AlgMatrix<usize>>,
    n_max: usize,
    cap: usize,
    sign: SignConvention,
) -> Result<ConjugationReport> {
    let h = alg.invert_matrix(g, inverse)?;
    let conj = e.conjugate(g, &h, alg)?;
    let diff = ch_cq_even(alg, &conj, n_max, sign)?.sub(&ch_cq_even(alg, e, n_max, sign)?)?;
    let top = 2 * n_max;
    let d0 = diff.form(0);
    let degree_zero_boundary = {
        let coords = TruncatedCoordinates::new(alg, 0);
        let mut ech = Echelon::new();
        for k in crate::omega::OmegaBasis::new(alg, 1).keys() {
            ech.insert(&coords.coordinates(&omega::b(alg, &Element::basis(k))?));
        }
        ech.contains(&coords.coordinates(&d0))
    };
    if diff.is_zero() {
        return Ok(ConjugationReport { difference_zero: true, degree_zero_boundary, is_boundary: Some(true), checked_through: top });
    }
    if top + 1 > cap {
        return Ok(ConjugationReport { difference_zero: false, degree_zero_boundary, is_boundary: None, checked_through: top });
    }
    let coords = TruncatedCoordinates::new(alg, top);
    let mut ech = Echelon::new();
    for n in (1..=top + 1).step_by(2) {
        for k in crate::omega::OmegaBasis::new(alg, n).keys() {
            let f: Form<usize> = Element::basis(k);
            let mut img = omega::b(alg, &f)?.scaled(&-Scalar::one());
            if n < top {
                img = img.add(&omega::connes_b(alg, &f));
            }
            ech.insert(&coords.coordinates(&img));
        }
    }
    let target = coords.coordinates(&diff.total_form());
    Ok(ConjugationReport {
        difference_zero: false,
        degree_zero_boundary,
        is_boundary: Some(ech.contains(&target)),
        checked_through: top,
    })
}

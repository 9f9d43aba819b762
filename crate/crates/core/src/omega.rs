//! Universal differential forms `ΩA` and the operators `d`, `b`, `κ`, `B`.
//!
//! A basis form `a₀ da₁ … daₙ` is stored as the key vector `[a₀, a₁, …, aₙ]`
//! where `a₀` is any basis key of `A` and `a₁, …, aₙ` are non-unit keys
//! (coordinates of `A/ℂ·1`). A [`Form`] is a finite linear combination of
//! such keys; keys of different lengths may be mixed.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{Algebra, Element, FDAlgebra};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::{Error, Result, Scalar};

/// Default form-degree cap.
pub const DEFAULT_CAP: usize = 8;

pub type Form<K> = Element<Vec<K>>;

/// Form degree of a basis key.
pub fn key_degree<K>(key: &[K]) -> usize {
    key.len() - 1
}

fn sign(k: usize) -> Scalar {
    if k % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// The degree-zero form given by an algebra element.
pub fn zero_form<K: Ord + Clone>(a: &Element<K>) -> Form<K> {
    Element::from_terms(a.terms().map(|(k, c)| (vec![k.clone()], c.clone())))
}

/// Degree-zero part of a form, read back as an algebra element.
pub fn degree_zero_part<K: Ord + Clone>(f: &Form<K>) -> Element<K> {
    Element::from_terms(f.terms().filter(|(k, _)| k.len() == 1).map(|(k, c)| (k[0].clone(), c.clone())))
}

/// Homogeneous component of a form.
pub fn component<K: Ord + Clone>(f: &Form<K>, degree: usize) -> Form<K> {
    Element::from_terms(f.terms().filter(|(k, _)| k.len() == degree + 1).map(|(k, c)| (k.clone(), c.clone())))
}

/// `d(a₀ da₁ … daₙ) = da₀ da₁ … daₙ`.
pub fn d<A: Algebra>(alg: &A, f: &Form<A::Key>) -> Form<A::Key> {
    let unit = alg.unit_key();
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        if key[0] == unit {
            continue;
        }
        let mut k = Vec::with_capacity(key.len() + 1);
        k.push(unit.clone());
        k.extend_from_slice(key);
        out.add_term(k, c);
    }
    out
}

/// Hochschild boundary, via the expanded formula
/// `b(a₀da₁…daₙ) = a₀a₁ da₂…daₙ + Σ (−1)ⁱ a₀da₁…d(aᵢaᵢ₊₁)…daₙ + (−1)ⁿ aₙa₀ da₁…daₙ₋₁`.
pub fn b<A: Algebra>(alg: &A, f: &Form<A::Key>) -> Result<Form<A::Key>> {
    let unit = alg.unit_key();
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        let n = key.len() - 1;
        if n == 0 {
            continue;
        }
        for (k, v) in alg.mul_keys(&key[0], &key[1])?.terms() {
            let mut t = Vec::with_capacity(n);
            t.push(k.clone());
            t.extend_from_slice(&key[2..]);
            out.add_term(t, &(c * v));
        }
        for i in 1..n {
            let s = sign(i);
            for (k, v) in alg.mul_keys(&key[i], &key[i + 1])?.terms() {
                if *k == unit {
                    continue;
                }
                let mut t = Vec::with_capacity(n);
                t.extend_from_slice(&key[..i]);
                t.push(k.clone());
                t.extend_from_slice(&key[i + 2..]);
                out.add_term(t, &(&(c * v) * &s));
            }
        }
        let s = sign(n);
        for (k, v) in alg.mul_keys(&key[n], &key[0])?.terms() {
            let mut t = Vec::with_capacity(n);
            t.push(k.clone());
            t.extend_from_slice(&key[1..n]);
            out.add_term(t, &(&(c * v) * &s));
        }
    }
    Ok(out)
}

/// `a · ω` for `a ∈ A`.
pub fn left_mul<A: Algebra>(alg: &A, a: &Element<A::Key>, f: &Form<A::Key>) -> Result<Form<A::Key>> {
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        for (ak, ac) in a.terms() {
            for (k, v) in alg.mul_keys(ak, &key[0])?.terms() {
                let mut t = key.clone();
                t[0] = k.clone();
                out.add_term(t, &(&(c * ac) * v));
            }
        }
    }
    Ok(out)
}

/// `ω · a` for `a ∈ A`, from the Leibniz rule
/// `(ω' daₙ)·a = ω' d(aₙa) − (ω'aₙ) da`.
pub fn right_mul<A: Algebra>(alg: &A, f: &Form<A::Key>, a: &Element<A::Key>) -> Result<Form<A::Key>> {
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        for (ak, ac) in a.terms() {
            out.add_scaled(&right_mul_key(alg, key, ak)?, &(c * ac));
        }
    }
    Ok(out)
}

fn right_mul_key<A: Algebra>(alg: &A, key: &[A::Key], a: &A::Key) -> Result<Form<A::Key>> {
    let unit = alg.unit_key();
    let n = key.len() - 1;
    let mut out = Element::zero();
    if n == 0 {
        for (k, v) in alg.mul_keys(&key[0], a)?.terms() {
            out.add_term(vec![k.clone()], v);
        }
        return Ok(out);
    }
    for (k, v) in alg.mul_keys(&key[n], a)?.terms() {
        if *k == unit {
            continue;
        }
        let mut t = key[..n].to_vec();
        t.push(k.clone());
        out.add_term(t, v);
    }
    if *a != unit {
        let inner = right_mul_key(alg, &key[..n], &key[n])?;
        for (t, v) in inner.terms() {
            let mut t = t.clone();
            t.push(a.clone());
            out.add_term(t, &-v);
        }
    }
    Ok(out)
}

/// Product in `ΩA`.
pub fn form_mul<A: Algebra>(alg: &A, f: &Form<A::Key>, g: &Form<A::Key>) -> Result<Form<A::Key>> {
    let mut out = Element::zero();
    for (gk, gc) in g.terms() {
        let head = right_mul(alg, f, &Element::basis(gk[0].clone()))?;
        for (hk, hc) in head.terms() {
            let mut t = hk.clone();
            t.extend_from_slice(&gk[1..]);
            out.add_term(t, &(hc * gc));
        }
    }
    Ok(out)
}

/// Hochschild boundary straight from `b(ω da) = (−1)^{|ω|}(ωa − aω)`.
pub fn b_from_definition<A: Algebra>(alg: &A, f: &Form<A::Key>) -> Result<Form<A::Key>> {
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        let n = key.len() - 1;
        if n == 0 {
            continue;
        }
        let omega = Element::basis(key[..n].to_vec());
        let a = Element::basis(key[n].clone());
        let comm = right_mul(alg, &omega, &a)?.sub(&left_mul(alg, &a, &omega)?);
        out.add_scaled(&comm, &(c * &sign(n - 1)));
    }
    Ok(out)
}

/// Karoubi operator `κ(ω da) = (−1)^{|ω|} da·ω`, identity on `Ω⁰`.
pub fn kappa<A: Algebra>(alg: &A, f: &Form<A::Key>) -> Result<Form<A::Key>> {
    let unit = alg.unit_key();
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        let n = key.len() - 1;
        if n == 0 {
            out.add_term(key.clone(), c);
            continue;
        }
        let s = &sign(n - 1) * c;
        // da·(a₀ da₁…) = d(a a₀) da₁… − a da₀ da₁…
        for (k, v) in alg.mul_keys(&key[n], &key[0])?.terms() {
            if *k == unit {
                continue;
            }
            let mut t = Vec::with_capacity(n + 1);
            t.push(unit.clone());
            t.push(k.clone());
            t.extend_from_slice(&key[1..n]);
            out.add_term(t, &(&s * v));
        }
        if key[0] != unit {
            let mut t = Vec::with_capacity(n + 1);
            t.push(key[n].clone());
            t.extend_from_slice(&key[..n]);
            out.add_term(t, &-&s);
        }
    }
    Ok(out)
}

/// Connes' operator `B = Σ_{i=0}^{n} κⁱ d` on `Ωⁿ`, using that `κ` acts on
/// exact forms by signed cyclic permutation.
pub fn connes_b<A: Algebra>(alg: &A, f: &Form<A::Key>) -> Form<A::Key> {
    let unit = alg.unit_key();
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        if key[0] == unit {
            continue;
        }
        let n = key.len() - 1;
        let m = key.len();
        for i in 0..=n {
            let mut t = Vec::with_capacity(m + 1);
            t.push(unit.clone());
            t.extend_from_slice(&key[m - i..]);
            t.extend_from_slice(&key[..m - i]);
            out.add_term(t, &(c * &sign(n * i)));
        }
    }
    out
}

/// `B = Σ κⁱ d` evaluated literally with [`kappa`].
pub fn connes_b_from_kappa<A: Algebra>(alg: &A, f: &Form<A::Key>) -> Result<Form<A::Key>> {
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        let n = key.len() - 1;
        let mut t = d(alg, &Element::basis(key.clone()));
        for _ in 0..=n {
            out.add_scaled(&t, c);
            t = kappa(alg, &t)?;
        }
    }
    Ok(out)
}

/// Image of a form under the map `Ω(φ)` induced by a unital algebra map.
pub fn map_form<K, L>(f: &Form<K>, unit: &L, phi: impl Fn(&K) -> Element<L>) -> Form<L>
where
    K: Ord + Clone,
    L: Ord + Clone,
{
    let mut out = Element::zero();
    for (key, c) in f.terms() {
        let mut partial: Vec<(Vec<L>, Scalar)> = vec![(Vec::new(), c.clone())];
        for (pos, a) in key.iter().enumerate() {
            let img = phi(a);
            let mut next = Vec::new();
            for (t, tc) in &partial {
                for (k, v) in img.terms() {
                    if pos > 0 && k == unit {
                        continue;
                    }
                    let mut t = t.clone();
                    t.push(k.clone());
                    next.push((t, tc * v));
                }
            }
            partial = next;
        }
        for (t, v) in partial {
            out.add_term(t, &v);
        }
    }
    out
}

/// A homogeneous component of a chain with its `(2πi)` exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component<K: Ord> {
    pub form: Form<K>,
    pub twopi_power: i64,
}

/// Forms indexed by degree, each degree tagged with a power of `2πi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedChain<K: Ord> {
    components: BTreeMap<usize, Component<K>>,
}

impl<K: Ord + Clone> Default for GradedChain<K> {
    fn default() -> Self {
        GradedChain { components: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> GradedChain<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Splits a form by degree; every component gets `(2πi)⁰`.
    pub fn from_form(f: &Form<K>) -> Self {
        let mut c = Self::new();
        for (key, v) in f.terms() {
            let deg = key.len() - 1;
            c.components
                .entry(deg)
                .or_insert_with(|| Component { form: Element::zero(), twopi_power: 0 })
                .form
                .add_term(key.clone(), v);
        }
        c.prune();
        c
    }

    fn prune(&mut self) {
        self.components.retain(|_, c| !c.form.is_zero());
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Component<K>)> {
        self.components.iter().map(|(d, c)| (*d, c))
    }

    pub fn component(&self, degree: usize) -> Option<&Component<K>> {
        self.components.get(&degree)
    }

    pub fn form(&self, degree: usize) -> Form<K> {
        self.components.get(&degree).map(|c| c.form.clone()).unwrap_or_else(Element::zero)
    }

    pub fn twopi_power(&self, degree: usize) -> i64 {
        self.components.get(&degree).map(|c| c.twopi_power).unwrap_or(0)
    }

    /// Adds a homogeneous form of the given degree.
    pub fn add_component(&mut self, degree: usize, form: &Form<K>, twopi_power: i64) -> Result<()> {
        if form.is_zero() {
            return Ok(());
        }
        if form.terms().any(|(k, _)| k.len() != degree + 1) {
            return Err(Error::DimensionMismatch(format!("form is not homogeneous of degree {degree}")));
        }
        match self.components.get_mut(&degree) {
            Some(c) => {
                if c.twopi_power != twopi_power {
                    return Err(Error::TwopiMismatch { left: c.twopi_power, right: twopi_power });
                }
                c.form = c.form.add(form);
            }
            None => {
                self.components.insert(degree, Component { form: form.clone(), twopi_power });
            }
        }
        self.prune();
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (deg, c) in &other.components {
            out.add_component(*deg, &c.form, c.twopi_power)?;
        }
        Ok(out)
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        let mut out = self.clone();
        for c in out.components.values_mut() {
            c.form = c.form.scaled(s);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(&-Scalar::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.components.keys().next_back().copied()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.components.keys().copied().collect()
    }

    /// Components of degree at most `max`.
    pub fn truncated(&self, max: usize) -> Self {
        GradedChain { components: self.components.range(..=max).map(|(d, c)| (*d, c.clone())).collect() }
    }

    /// All components flattened into one form, ignoring the tags.
    pub fn total_form(&self) -> Form<K> {
        let mut f = Element::zero();
        for c in self.components.values() {
            f.add_scaled(&c.form, &Scalar::one());
        }
        f
    }

    pub fn set_twopi_power(&mut self, degree: usize, p: i64) {
        if let Some(c) = self.components.get_mut(&degree) {
            c.twopi_power = p;
        }
    }

    /// Applies a linear operator shifting degree by `shift`, keeping tags.
    pub fn map_components(
        &self,
        shift: isize,
        op: impl Fn(&Form<K>) -> Result<Form<K>>,
    ) -> Result<Self> {
        let mut out = Self::new();
        for (deg, c) in &self.components {
            let target = *deg as isize + shift;
            if target < 0 {
                continue;
            }
            out.add_component(target as usize, &op(&c.form)?, c.twopi_power)?;
        }
        Ok(out)
    }
}

pub fn apply_b<A: Algebra>(alg: &A, c: &GradedChain<A::Key>) -> Result<GradedChain<A::Key>> {
    c.map_components(-1, |f| b(alg, f))
}

pub fn apply_kappa<A: Algebra>(alg: &A, c: &GradedChain<A::Key>) -> Result<GradedChain<A::Key>> {
    c.map_components(0, |f| kappa(alg, f))
}

/// `B` on a chain. A nonzero component landing above `cap` is an error unless
/// `allow_truncation` is set, in which case it is dropped.
pub fn apply_connes_b<A: Algebra>(
    alg: &A,
    c: &GradedChain<A::Key>,
    cap: usize,
    allow_truncation: bool,
) -> Result<GradedChain<A::Key>> {
    let out = c.map_components(1, |f| Ok(connes_b(alg, f)))?;
    if let Some(top) = out.max_degree() {
        if top > cap {
            if !allow_truncation {
                return Err(Error::CapOverflow { degree: top, cap });
            }
            return Ok(out.truncated(cap));
        }
    }
    Ok(out)
}

/// `(B − b)` applied to a chain, without a cap.
pub fn apply_periodic_differential<A: Algebra>(alg: &A, c: &GradedChain<A::Key>) -> Result<GradedChain<A::Key>> {
    let big = c.map_components(1, |f| Ok(connes_b(alg, f)))?;
    let small = apply_b(alg, c)?;
    big.sub(&small)
}

/// Enumeration of the basis of `Ωⁿ` for a finite-dimensional algebra.
///
/// Keys are ranked in mixed radix: `i₀·(D−1)ⁿ + Σ (iₖ − 1)(D−1)^{n−k}` with
/// `D = dim A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaBasis {
    dim: usize,
    degree: usize,
}

impl OmegaBasis {
    pub fn new(alg: &FDAlgebra, degree: usize) -> Self {
        OmegaBasis { dim: alg.dim(), degree }
    }

    /// `dim A · (dim A − 1)ⁿ`.
    pub fn len(&self) -> usize {
        if self.degree == 0 {
            return self.dim;
        }
        self.dim * (self.dim - 1).pow(self.degree as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn key(&self, mut idx: usize) -> Vec<usize> {
        let r = self.dim - 1;
        let mut key = vec![0; self.degree + 1];
        for k in (1..=self.degree).rev() {
            key[k] = idx % r + 1;
            idx /= r;
        }
        key[0] = idx;
        key
    }

    pub fn index(&self, key: &[usize]) -> usize {
        let r = self.dim - 1;
        let mut idx = key[0];
        for &k in &key[1..] {
            idx = idx * r + (k - 1);
        }
        idx
    }

    pub fn keys(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(|i| self.key(i))
    }

    /// Coordinates of a homogeneous form of this degree.
    pub fn coordinates(&self, f: &Form<usize>) -> SparseVec {
        let mut v: SparseVec = f
            .terms()
            .filter(|(k, _)| k.len() == self.degree + 1)
            .map(|(k, c)| (self.index(k), c.clone()))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    pub fn form(&self, v: &SparseVec) -> Form<usize> {
        Element::from_terms(v.iter().map(|(i, c)| (self.key(*i), c.clone())))
    }
}

/// Basis enumeration of `Ωⁿ A`, checked against a cap.
pub fn omega_basis(alg: &FDAlgebra, n: usize, cap: usize) -> Result<OmegaBasis> {
    if n > cap {
        return Err(Error::CapOverflow { degree: n, cap });
    }
    Ok(OmegaBasis::new(alg, n))
}

/// Sparse matrices of `b`, `B`, `κ` for a finite-dimensional algebra, built
/// on demand per degree and cached.
pub struct OmegaComplex<'a> {
    alg: &'a FDAlgebra,
    cap: usize,
    b: Vec<OnceLock<SparseMatrix>>,
    big_b: Vec<OnceLock<SparseMatrix>>,
    kappa: Vec<OnceLock<SparseMatrix>>,
}

impl<'a> OmegaComplex<'a> {
    pub fn new(alg: &'a FDAlgebra, cap: usize) -> Self {
        let cells = || (0..=cap + 1).map(|_| OnceLock::new()).collect();
        OmegaComplex { alg, cap, b: cells(), big_b: cells(), kappa: cells() }
    }

    pub fn algebra(&self) -> &FDAlgebra {
        self.alg
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn basis(&self, n: usize) -> OmegaBasis {
        OmegaBasis::new(self.alg, n)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis(n).len()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.cap {
            Err(Error::CapOverflow { degree: n, cap: self.cap })
        } else {
            Ok(())
        }
    }

    fn build(&self, source: usize, target: usize, op: impl Fn(&Form<usize>) -> Result<Form<usize>> + Sync) -> Result<SparseMatrix> {
        let src = self.basis(source);
        let tgt = self.basis(target);
        let cols: Result<Vec<SparseVec>> = (0..src.len())
            .into_par_iter()
            .map(|j| op(&Element::basis(src.key(j))).map(|f| tgt.coordinates(&f)))
            .collect();
        Ok(SparseMatrix::from_columns(tgt.len(), cols?))
    }

    /// `b: Ωⁿ → Ωⁿ⁻¹` (the zero map out of `Ω⁰`).
    pub fn b_matrix(&self, n: usize) -> Result<&SparseMatrix> {
        self.check(n)?;
        if let Some(m) = self.b[n].get() {
            return Ok(m);
        }
        let m = if n == 0 {
            SparseMatrix::zeros(0, self.dim(0))
        } else {
            self.build(n, n - 1, |f| b(self.alg, f))?
        };
        Ok(self.b[n].get_or_init(|| m))
    }

    /// `B: Ωⁿ → Ωⁿ⁺¹`.
    pub fn connes_matrix(&self, n: usize) -> Result<&SparseMatrix> {
        self.check(n + 1)?;
        if let Some(m) = self.big_b[n].get() {
            return Ok(m);
        }
        let m = self.build(n, n + 1, |f| Ok(connes_b(self.alg, f)))?;
        Ok(self.big_b[n].get_or_init(|| m))
    }

    /// `κ: Ωⁿ → Ωⁿ`.
    pub fn kappa_matrix(&self, n: usize) -> Result<&SparseMatrix> {
        self.check(n)?;
        if let Some(m) = self.kappa[n].get() {
            return Ok(m);
        }
        let m = self.build(n, n, |f| kappa(self.alg, f))?;
        Ok(self.kappa[n].get_or_init(|| m))
    }
}

/// Outcome of the identity checks in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeIdentities {
    pub degree: usize,
    pub b_squared_zero: bool,
    pub connes_squared_zero: bool,
    pub anticommute: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedIdentityReport {
    pub degrees: Vec<DegreeIdentities>,
}

impl MixedIdentityReport {
    pub fn all_hold(&self) -> bool {
        self.degrees.iter().all(|d| d.b_squared_zero && d.connes_squared_zero && d.anticommute)
    }
}

/// Checks `b² = 0`, `B² = 0` and `bB + Bb = 0` on every basis form of
/// degree `≤ n_max`.
///
/// Operators are applied form by form instead of through materialized
/// matrices, so the check is not limited by the cap for the target degrees.
pub fn verify_mixed_identities(alg: &FDAlgebra, n_max: usize) -> Result<MixedIdentityReport> {
    let mut degrees = Vec::new();
    for n in 0..=n_max {
        let basis = OmegaBasis::new(alg, n);
        let (bb, big, anti) = (0..basis.len())
            .into_par_iter()
            .map(|j| -> Result<(bool, bool, bool)> {
                let f = Element::basis(basis.key(j));
                let bf = b(alg, &f)?;
                let big_f = connes_b(alg, &f);
                let bb = b(alg, &bf)?.is_zero();
                let big = connes_b(alg, &big_f).is_zero();
                let anti = b(alg, &big_f)?.add(&connes_b(alg, &bf)).is_zero();
                Ok((bb, big, anti))
            })
            .try_reduce(|| (true, true, true), |x, y| Ok((x.0 && y.0, x.1 && y.1, x.2 && y.2)))?;
        degrees.push(DegreeIdentities { degree: n, b_squared_zero: bb, connes_squared_zero: big, anticommute: anti });
    }
    Ok(MixedIdentityReport { degrees })
}

//! Commutative differential forms on presented algebras.
//!
//! A [`KahlerForm`] is a sum of polynomial coefficients times wedge monomials
//! `dx_{i₁}∧…∧dx_{i_k}` in the primary generators (declared inverses are
//! differentiated through `d(u⁻¹) = −u⁻² du`). Relations among differentials,
//! such as `x dx + y dy + z dz = 0` on the sphere, are not divided out; forms
//! are representatives. [`canonicalize`] picks a unique representative on
//! relation-free algebras and on the sphere.
//!
//! The module also provides the comparison map `μ(a₀da₁…daₙ) = (1/n!) a₀ da₁∧…∧daₙ`,
//! the curvature `e(de)²` of the Grassmannian connection, Chern–Weil
//! characters, and exact pairings with closed currents.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{AlgMatrix, Algebra, Element, Monomial, PresentedAlgebra};
use crate::chern::{self, factorial, SignConvention};
use crate::omega::{self, Form, GradedChain};
use crate::{Error, Result, Scalar};

/// Strictly increasing list of primary generator indices.
pub type WedgeKey = Vec<usize>;

type Poly = Element<Monomial>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KahlerForm {
    degree: usize,
    terms: BTreeMap<WedgeKey, Poly>,
    twopi_power: i64,
}

/// Merges two wedge keys, returning the sorted key and the sign of the
/// sorting permutation, or `None` if an index repeats.
fn merge_keys(a: &[usize], b: &[usize]) -> Option<(WedgeKey, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut swaps = 0usize;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            swaps += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, swaps % 2 == 1))
}

impl KahlerForm {
    pub fn zero(degree: usize) -> Self {
        KahlerForm { degree, terms: BTreeMap::new(), twopi_power: 0 }
    }

    /// A function as a 0-form.
    pub fn function(alg: &PresentedAlgebra, f: &Poly) -> Result<Self> {
        let mut out = KahlerForm::zero(0);
        out.add_term(alg, Vec::new(), f)?;
        Ok(out)
    }

    /// Builds a form from `(wedge key, coefficient)` pairs. Keys must be
    /// strictly increasing lists of `degree` primary generators.
    pub fn from_terms(
        alg: &PresentedAlgebra,
        degree: usize,
        terms: impl IntoIterator<Item = (WedgeKey, Poly)>,
    ) -> Result<Self> {
        let primary = alg.primary_generators();
        let mut out = KahlerForm::zero(degree);
        for (key, c) in terms {
            let valid = key.len() == degree
                && key.windows(2).all(|w| w[0] < w[1])
                && key.iter().all(|k| primary.contains(k));
            if !valid {
                return Err(Error::Precondition(format!("invalid wedge monomial {key:?} for a {degree}-form")));
            }
            out.add_term(alg, key, &c)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, alg: &PresentedAlgebra, key: WedgeKey, c: &Poly) -> Result<()> {
        let c = alg.normal_form(c)?;
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Element::zero);
        entry.add_scaled(&c, &Scalar::one());
        if entry.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn twopi_power(&self) -> i64 {
        self.twopi_power
    }

    pub fn with_twopi_power(mut self, p: i64) -> Self {
        self.twopi_power = p;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WedgeKey, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &[usize]) -> Poly {
        self.terms.get(key).cloned().unwrap_or_else(Element::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.degree != o.degree {
            return Err(Error::Precondition(format!("cannot add forms of degree {} and {}", self.degree, o.degree)));
        }
        if self.twopi_power != o.twopi_power && !self.is_zero() && !o.is_zero() {
            return Err(Error::TwopiMismatch { left: self.twopi_power, right: o.twopi_power });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = self.clone();
        if self.is_zero() {
            out.twopi_power = o.twopi_power;
        }
        for (k, c) in &o.terms {
            let entry = out.terms.entry(k.clone()).or_insert_with(Element::zero);
            entry.add_scaled(c, &Scalar::one());
            if entry.is_zero() {
                out.terms.remove(k);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scaled(&-Scalar::one()))
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        let mut out = KahlerForm::zero(self.degree).with_twopi_power(self.twopi_power);
        if !s.is_zero() {
            out.terms = self.terms.iter().map(|(k, c)| (k.clone(), c.scaled(s))).collect();
        }
        out
    }

    pub fn mul_function(&self, alg: &PresentedAlgebra, f: &Poly) -> Result<Self> {
        let mut out = KahlerForm::zero(self.degree).with_twopi_power(self.twopi_power);
        for (k, c) in &self.terms {
            out.add_term(alg, k.clone(), &c.mul(f, alg)?)?;
        }
        Ok(out)
    }

    pub fn wedge(&self, o: &Self, alg: &PresentedAlgebra) -> Result<Self> {
        let mut out = KahlerForm::zero(self.degree + o.degree).with_twopi_power(self.twopi_power + o.twopi_power);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                if let Some((key, odd)) = merge_keys(ka, kb) {
                    let mut c = ca.mul(cb, alg)?;
                    if odd {
                        c = c.neg();
                    }
                    out.add_term(alg, key, &c)?;
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self, alg: &PresentedAlgebra) -> Result<Self> {
        let mut out = KahlerForm::zero(self.degree + 1).with_twopi_power(self.twopi_power);
        for (k, c) in &self.terms {
            for (j, dc) in differential_of(alg, c)?.terms {
                if let Some((key, odd)) = merge_keys(&j, k) {
                    out.add_term(alg, key, &if odd { dc.neg() } else { dc })?;
                }
            }
        }
        Ok(out)
    }
}

/// `df` as a 1-form on the primary differentials.
pub fn differential_of(alg: &PresentedAlgebra, f: &Poly) -> Result<KahlerForm> {
    let mut out = KahlerForm::zero(1);
    for g in 0..alg.num_generators() {
        let p = alg.partial(f, g);
        if p.is_zero() {
            continue;
        }
        for (j, c) in alg.generator_differential(g) {
            out.add_term(alg, vec![j], &p.mul(&c, alg)?)?;
        }
    }
    Ok(out)
}

/// Kähler forms indexed by degree, each with its own `(2πi)` power.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KahlerChain {
    components: BTreeMap<usize, KahlerForm>,
}

impl KahlerChain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a component, adding to any existing one of the same degree.
    pub fn insert(&mut self, f: KahlerForm) -> Result<()> {
        let merged = match self.components.get(&f.degree) {
            Some(old) => old.add(&f)?,
            None => f,
        };
        self.components.insert(merged.degree, merged);
        Ok(())
    }

    pub fn component(&self, degree: usize) -> Option<&KahlerForm> {
        self.components.get(&degree)
    }

    pub fn components(&self) -> impl Iterator<Item = &KahlerForm> {
        self.components.values()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.components.keys().copied().collect()
    }
}

/// `μ` on a homogeneous noncommutative form, tagged with `twopi_power`.
pub fn mu_form(alg: &PresentedAlgebra, f: &Form<Monomial>, twopi_power: i64) -> Result<KahlerForm> {
    let mut degree = None;
    let mut out: Option<KahlerForm> = None;
    for (key, c) in f.terms() {
        let n = omega::key_degree(key);
        if degree.is_some_and(|d| d != n) {
            return Err(Error::Precondition("μ expects a form of a single degree".into()));
        }
        degree = Some(n);
        let mut acc = KahlerForm::function(alg, &Element::from_terms([(key[0].clone(), c.clone())]))?;
        for a in &key[1..] {
            acc = acc.wedge(&differential_of(alg, &Element::basis(a.clone()))?, alg)?;
        }
        out = Some(match out {
            Some(o) => o.add(&acc)?,
            None => acc,
        });
    }
    let n = degree.unwrap_or(0);
    let norm = Scalar::from(factorial(n)).inv().expect("n! ≠ 0");
    Ok(out.unwrap_or_else(|| KahlerForm::zero(n)).scaled(&norm).with_twopi_power(twopi_power))
}

/// `μ` applied componentwise to a chain over a commutative presented algebra.
pub fn mu_map(alg: &PresentedAlgebra, c: &GradedChain<Monomial>) -> Result<KahlerChain> {
    let mut out = KahlerChain::new();
    for (deg, comp) in c.components() {
        let mut f = mu_form(alg, &comp.form, comp.twopi_power)?;
        if f.is_zero() {
            f.degree = deg;
        }
        out.insert(f)?;
    }
    Ok(out)
}

/// Which unique-representative rule applies to an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalModel {
    /// Polynomials with possibly inverted generators: forms are free on the
    /// primary differentials, so normal forms are already unique.
    Free,
    /// The sphere `x² + y² + z² = 1`.
    Sphere,
}

pub fn canonical_model(alg: &PresentedAlgebra) -> Option<CanonicalModel> {
    let gens = alg.generators();
    let inverse_rule = |lhs: &Monomial| {
        let idx: Vec<usize> = (0..gens.len()).filter(|&i| lhs.0[i] > 0).collect();
        lhs.degree() == 2
            && idx.len() == 2
            && (gens[idx[0]].inverse_of == Some(idx[1]) || gens[idx[1]].inverse_of == Some(idx[0]))
    };
    if alg.rules().iter().all(|r| inverse_rule(&r.lhs) && r.rhs == alg.one()) {
        return Some(CanonicalModel::Free);
    }
    if is_sphere(alg) {
        return Some(CanonicalModel::Sphere);
    }
    None
}

fn is_sphere(alg: &PresentedAlgebra) -> bool {
    alg.num_generators() == 3
        && alg.generators().iter().all(|g| g.inverse_of.is_none())
        && crate::models::sphere_with_cap(alg.degree_cap()).is_ok_and(|s| s.rules() == alg.rules())
}

/// Unique representative of a form modulo the differentials of relations.
///
/// On the sphere 1-forms are projected to their tangential part `v − (v·n)n`
/// and 2-forms are rewritten as `f·σ` with `σ = x dy∧dz + y dz∧dx + z dx∧dy`;
/// forms of degree ≥ 3 vanish there.
pub fn canonicalize(alg: &PresentedAlgebra, f: &KahlerForm) -> Result<KahlerForm> {
    match canonical_model(alg) {
        Some(CanonicalModel::Free) => Ok(f.clone()),
        Some(CanonicalModel::Sphere) => {
            let n: Vec<Poly> = (0..3).map(|i| alg.var(i)).collect();
            let mut out = KahlerForm::zero(f.degree).with_twopi_power(f.twopi_power);
            match f.degree {
                0 => return Ok(f.clone()),
                1 => {
                    let v: Vec<Poly> = (0..3).map(|i| f.coefficient(&[i])).collect();
                    let mut s = Element::zero();
                    for i in 0..3 {
                        s = s.add(&v[i].mul(&n[i], alg)?);
                    }
                    for i in 0..3 {
                        out.add_term(alg, vec![i], &v[i].sub(&s.mul(&n[i], alg)?))?;
                    }
                }
                2 => {
                    let density = sphere_density(alg, f)?;
                    out.add_term(alg, vec![1, 2], &density.mul(&n[0], alg)?)?;
                    out.add_term(alg, vec![0, 2], &density.mul(&n[1], alg)?.neg())?;
                    out.add_term(alg, vec![0, 1], &density.mul(&n[2], alg)?)?;
                }
                _ => {}
            }
            Ok(out)
        }
        None => Err(Error::Unverifiable),
    }
}

/// `P z + Q x + R y` for `ω = P dx∧dy + Q dy∧dz + R dz∧dx`.
fn sphere_density(alg: &PresentedAlgebra, f: &KahlerForm) -> Result<Poly> {
    let p = f.coefficient(&[0, 1]).mul(&alg.var(2), alg)?;
    let q = f.coefficient(&[1, 2]).mul(&alg.var(0), alg)?;
    let r = f.coefficient(&[0, 2]).neg().mul(&alg.var(1), alg)?;
    alg.normal_form(&p.add(&q).add(&r))
}

/// Equality modulo the differentials of relations.
pub fn forms_agree(alg: &PresentedAlgebra, a: &KahlerForm, b: &KahlerForm) -> Result<bool> {
    Ok(canonicalize(alg, &a.sub(b)?)?.is_zero())
}

/// Outcome of checking `μ∘B = d∘μ` and `μ∘b = 0` on one form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuCheck {
    pub intertwines_b_and_d: bool,
    pub kills_b: bool,
}

pub fn check_mu_identities(alg: &PresentedAlgebra, f: &Form<Monomial>) -> Result<MuCheck> {
    let n = f.terms().next().map(|(k, _)| omega::key_degree(k)).unwrap_or(0);
    let lhs = mu_form(alg, &omega::connes_b(alg, f), 0)?;
    let rhs = mu_form(alg, f, 0)?.d(alg)?;
    let lhs = if lhs.is_zero() { KahlerForm::zero(n + 1) } else { lhs };
    let bf = omega::b(alg, f)?;
    let mb = mu_form(alg, &bf, 0)?;
    Ok(MuCheck {
        intertwines_b_and_d: forms_agree(alg, &lhs, &rhs)?,
        kills_b: canonicalize(alg, &mb)?.is_zero(),
    })
}

/// Square matrix of Kähler forms of a common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KahlerMatrix {
    size: usize,
    degree: usize,
    entries: Vec<KahlerForm>,
}

impl KahlerMatrix {
    pub fn from_matrix(alg: &PresentedAlgebra, m: &AlgMatrix<Monomial>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("form matrices must be square".into()));
        }
        let entries = m.entries().iter().map(|a| KahlerForm::function(alg, a)).collect::<Result<_>>()?;
        Ok(KahlerMatrix { size: m.rows(), degree: 0, entries })
    }

    pub fn differential(alg: &PresentedAlgebra, m: &AlgMatrix<Monomial>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("form matrices must be square".into()));
        }
        let entries = m.entries().iter().map(|a| differential_of(alg, a)).collect::<Result<_>>()?;
        Ok(KahlerMatrix { size: m.rows(), degree: 1, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> &KahlerForm {
        &self.entries[i * self.size + j]
    }

    pub fn mul(&self, o: &Self, alg: &PresentedAlgebra) -> Result<Self> {
        if self.size != o.size {
            return Err(Error::DimensionMismatch("form matrix sizes differ".into()));
        }
        let n = self.size;
        let degree = self.degree + o.degree;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = KahlerForm::zero(degree);
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).wedge(o.get(k, j), alg)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(KahlerMatrix { size: n, degree, entries })
    }

    pub fn trace(&self) -> Result<KahlerForm> {
        (0..self.size).try_fold(KahlerForm::zero(self.degree), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(KahlerForm::is_zero)
    }

    /// Entrywise equality modulo the differentials of relations.
    pub fn agrees_with(&self, o: &Self, alg: &PresentedAlgebra) -> Result<bool> {
        if self.size != o.size || self.degree != o.degree {
            return Ok(false);
        }
        for (a, b) in self.entries.iter().zip(&o.entries) {
            if !forms_agree(alg, a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Curvature `R = e(de)²` of the Grassmannian connection `e·d·e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureForm {
    pub entries: KahlerMatrix,
    /// Whether `e(de)² = (de)²e` could be checked; it holds whenever checked.
    pub side_identity_checked: bool,
}

pub fn grassmann_curvature(alg: &PresentedAlgebra, e: &AlgMatrix<Monomial>) -> Result<CurvatureForm> {
    if !e.is_idempotent(alg)? {
        return Err(Error::NonIdempotent);
    }
    let em = KahlerMatrix::from_matrix(alg, e)?;
    let de = KahlerMatrix::differential(alg, e)?;
    let dede = de.mul(&de, alg)?;
    let r = em.mul(&dede, alg)?;
    let checked = canonical_model(alg).is_some();
    if checked && !r.agrees_with(&dede.mul(&em, alg)?, alg)? {
        return Err(Error::Assertion("e(de)² ≠ (de)²e".into()));
    }
    Ok(CurvatureForm { entries: r, side_identity_checked: checked })
}

/// Even Chern–Weil character: degree `2n` is `(1/n!)·Tr(e(de)^{2n})` with
/// `(2πi)^{−n}`, for `n ≤ n_max`.
pub fn ch_cw_even(alg: &PresentedAlgebra, e: &AlgMatrix<Monomial>, n_max: usize) -> Result<KahlerChain> {
    if !e.is_idempotent(alg)? {
        return Err(Error::NonIdempotent);
    }
    let mut cur = KahlerMatrix::from_matrix(alg, e)?;
    let de = KahlerMatrix::differential(alg, e)?;
    let mut out = KahlerChain::new();
    out.insert(cur.trace()?)?;
    for n in 1..=n_max {
        cur = cur.mul(&de, alg)?.mul(&de, alg)?;
        let coeff = Scalar::from(factorial(n)).inv().expect("n! ≠ 0");
        out.insert(cur.trace()?.scaled(&coeff).with_twopi_power(-(n as i64)))?;
    }
    Ok(out)
}

/// Power of `2πi` attached to the degree-`(2n+1)` Chern–Weil term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OddNormalization {
    /// `(2πi)^{−n}`.
    #[default]
    Printed,
    /// `(2πi)^{−(n+1)}`, matching the scaling map on odd degrees.
    Shifted,
}

/// Odd Chern–Weil character: degree `2n+1` is
/// `(−1)ⁿ n!/(2n+1)! · Tr((g⁻¹dg)^{2n+1})`.
pub fn ch_cw_odd(
    alg: &PresentedAlgebra,
    g: &AlgMatrix<Monomial>,
    inverse: Option<&AlgMatrix<Monomial>>,
    n_max: usize,
    normalization: OddNormalization,
) -> Result<KahlerChain> {
    let h = alg.invert_matrix(g, inverse)?;
    let x = KahlerMatrix::from_matrix(alg, &h)?.mul(&KahlerMatrix::differential(alg, g)?, alg)?;
    let x2 = x.mul(&x, alg)?;
    let mut cur = x;
    let mut out = KahlerChain::new();
    for n in 0..=n_max {
        let mut coeff = Scalar::from_rational(BigRational::new(factorial(n), factorial(2 * n + 1)));
        if n % 2 == 1 {
            coeff = -coeff;
        }
        let power = match normalization {
            OddNormalization::Printed => -(n as i64),
            OddNormalization::Shifted => -(n as i64 + 1),
        };
        out.insert(cur.trace()?.scaled(&coeff).with_twopi_power(power))?;
        if n < n_max {
            cur = cur.mul(&x2, alg)?;
        }
    }
    Ok(out)
}

/// `(2k−1)!!`, with `(−1)!! = 1`.
fn odd_double_factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(2 * j - 1))
}

/// `∫_{S²} x^a y^b z^c dS / 4π`: zero if any exponent is odd, otherwise
/// `(a−1)!!(b−1)!!(c−1)!!/(a+b+c+1)!!`.
pub fn sphere_moment(a: u32, b: u32, c: u32) -> BigRational {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return BigRational::zero();
    }
    let num = odd_double_factorial(a / 2) * odd_double_factorial(b / 2) * odd_double_factorial(c / 2);
    BigRational::new(num, odd_double_factorial((a + b + c) / 2 + 1))
}

fn require_sphere_coordinates(alg: &PresentedAlgebra) -> Result<()> {
    if alg.generators().iter().any(|g| g.inverse_of.is_some()) {
        return Err(Error::NonPolynomial("sphere integration needs polynomial coefficients".into()));
    }
    if alg.num_generators() != 3 {
        return Err(Error::Precondition("sphere integration needs generators x, y, z".into()));
    }
    Ok(())
}

/// `∫_{S²} ω` for a 2-form, with outward orientation, returned as
/// `(q, 1)` meaning `q·(2πi)¹`.
pub fn sphere_integrate(alg: &PresentedAlgebra, f: &KahlerForm) -> Result<(Scalar, i64)> {
    require_sphere_coordinates(alg)?;
    if f.degree != 2 {
        return Err(Error::DegreeMismatch { current: 2 });
    }
    let density = sphere_density(alg, f)?;
    let mut total = BigRational::zero();
    let mut total_im = BigRational::zero();
    for (m, c) in density.terms() {
        let w = sphere_moment(m.0[0], m.0[1], m.0[2]);
        total += c.re() * &w;
        total_im += c.im() * &w;
    }
    // 4π = (−2i)·(2πi)
    let q = Scalar::new(total, total_im) * Scalar::gaussian(0, -2);
    Ok((q, 1))
}

fn laurent_pair(alg: &PresentedAlgebra) -> Result<(usize, usize)> {
    let primary = alg.primary_generators();
    let inverse = (0..alg.num_generators()).find(|&i| alg.generators()[i].inverse_of.is_some());
    match (primary.as_slice(), inverse) {
        ([u], Some(v)) if alg.num_generators() == 2 && alg.generators()[v].inverse_of == Some(*u) => Ok((*u, v)),
        _ => Err(Error::Precondition("residue needs a generator u and its declared inverse".into())),
    }
}

/// Residue of `f du`: the coefficient of `u⁻¹` in `f`, returned as `(a₋₁, 1)`
/// meaning `a₋₁·(2πi)¹`.
pub fn circle_residue(alg: &PresentedAlgebra, f: &KahlerForm) -> Result<(Scalar, i64)> {
    let (u, v) = laurent_pair(alg)?;
    if f.degree != 1 {
        return Err(Error::DegreeMismatch { current: 1 });
    }
    let mut res = Scalar::zero();
    for (m, c) in f.coefficient(&[u]).terms() {
        if m.0[u] as i64 - m.0[v] as i64 == -1 {
            res += c;
        }
    }
    Ok((res, 1))
}

/// Value of a polynomial at a point given by generator values.
pub fn evaluate(alg: &PresentedAlgebra, f: &Poly, point: &[Scalar]) -> Result<Scalar> {
    if point.len() != alg.num_generators() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, algebra has {} generators",
            point.len(),
            alg.num_generators()
        )));
    }
    let mut total = Scalar::zero();
    for (m, c) in f.terms() {
        let mut v = c.clone();
        for (x, &e) in point.iter().zip(&m.0) {
            v = &v * &x.pow(e);
        }
        total += &v;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurrentKind {
    SphereIntegration,
    CircleResidue,
    PointEvaluation(Vec<Scalar>),
}

/// A closed current with an orientation and the `(2πi)` power it carries.
///
/// Integration and residue currents produce `q·(2πi)¹`; a current declared
/// with power `p` divides this by `(2πi)^{1−p}`. Pairing a form tagged
/// `(2πi)^t` requires `t + p = 0` and yields `±q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Current {
    pub kind: CurrentKind,
    pub orientation: i8,
    pub twopi_power: i64,
}

impl Current {
    pub fn sphere() -> Self {
        Current { kind: CurrentKind::SphereIntegration, orientation: 1, twopi_power: 1 }
    }

    pub fn circle() -> Self {
        Current { kind: CurrentKind::CircleResidue, orientation: 1, twopi_power: 1 }
    }

    pub fn point(coords: Vec<Scalar>) -> Self {
        Current { kind: CurrentKind::PointEvaluation(coords), orientation: 1, twopi_power: 0 }
    }

    /// Divides by `2πi`, removing the power produced by integration.
    pub fn normalized(mut self) -> Self {
        self.twopi_power = 0;
        self
    }

    pub fn reversed(mut self) -> Self {
        self.orientation = -self.orientation;
        self
    }

    pub fn degree(&self) -> usize {
        match self.kind {
            CurrentKind::SphereIntegration => 2,
            CurrentKind::CircleResidue => 1,
            CurrentKind::PointEvaluation(_) => 0,
        }
    }

    /// Raw value `q` of the current on `f`, before `(2πi)` bookkeeping.
    pub fn evaluate(&self, alg: &PresentedAlgebra, f: &KahlerForm) -> Result<Scalar> {
        if f.degree != self.degree() {
            return Err(Error::DegreeMismatch { current: self.degree() });
        }
        let q = match &self.kind {
            CurrentKind::SphereIntegration => sphere_integrate(alg, f)?.0,
            CurrentKind::CircleResidue => circle_residue(alg, f)?.0,
            CurrentKind::PointEvaluation(p) => {
                for r in alg.rules() {
                    if evaluate(alg, &Element::basis(r.lhs.clone()), p)? != evaluate(alg, &r.rhs, p)? {
                        return Err(Error::Precondition("evaluation point violates a relation".into()));
                    }
                }
                evaluate(alg, &f.coefficient(&[]), p)?
            }
        };
        Ok(if self.orientation < 0 { -q } else { q })
    }
}

/// Pairs a single form with a current.
pub fn pair_form(alg: &PresentedAlgebra, f: &KahlerForm, current: &Current) -> Result<Scalar> {
    if f.degree != current.degree() {
        return Err(Error::DegreeMismatch { current: current.degree() });
    }
    if f.twopi_power + current.twopi_power != 0 {
        return Err(Error::NormalizationMismatch { form: f.twopi_power, current: current.twopi_power });
    }
    current.evaluate(alg, f)
}

/// Pairs the component of matching degree with a current.
pub fn pair(alg: &PresentedAlgebra, chain: &KahlerChain, current: &Current) -> Result<Scalar> {
    let f = chain.component(current.degree()).ok_or(Error::DegreeMismatch { current: current.degree() })?;
    pair_form(alg, f, current)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChernInput {
    Idempotent(AlgMatrix<Monomial>),
    Invertible { g: AlgMatrix<Monomial>, inverse: Option<AlgMatrix<Monomial>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub degree: usize,
    /// Pairing of `μ` of the scaled Cuntz–Quillen character.
    pub cq_value: Scalar,
    /// Pairing of the Chern–Weil character.
    pub cw_value: Scalar,
    pub agree: bool,
}

/// Pairs both characters with the same current. Odd Chern–Weil terms use
/// [`OddNormalization::Shifted`] so that both routes carry the same power.
pub fn compare_cq_cw(
    alg: &PresentedAlgebra,
    input: &ChernInput,
    current: &Current,
    sign: SignConvention,
) -> Result<ComparisonReport> {
    let degree = current.degree();
    let n = degree / 2;
    let (cq, cw) = match input {
        ChernInput::Idempotent(e) => {
            if degree % 2 == 1 {
                return Err(Error::DegreeMismatch { current: degree });
            }
            (chern::ch_cq_even(alg, e, n, sign)?, ch_cw_even(alg, e, n)?)
        }
        ChernInput::Invertible { g, inverse } => {
            if degree % 2 == 0 {
                return Err(Error::DegreeMismatch { current: degree });
            }
            (
                chern::ch_cq_odd(alg, g, inverse.as_ref(), n)?,
                ch_cw_odd(alg, g, inverse.as_ref(), n, OddNormalization::Shifted)?,
            )
        }
    };
    let mu = scaled_mu_component(alg, &cq, degree)?;
    let cq_value = pair_form(alg, &mu, current)?;
    let cw_value = pair(alg, &cw, current)?;
    Ok(ComparisonReport { degree, agree: cq_value == cw_value, cq_value, cw_value })
}

/// `μ` of the degree-`k` component of `c` after the scaling map, for a raw
/// chain `c`. A missing component gives the zero `k`-form with the power the
/// scaling map assigns to degree `k`.
pub fn scaled_mu_component(alg: &PresentedAlgebra, c: &GradedChain<Monomial>, degree: usize) -> Result<KahlerForm> {
    let scaled = chern::apply_scaling_c(c);
    let (form, twopi) = match scaled.component(degree) {
        Some(comp) => (comp.form.clone(), comp.twopi_power),
        None => (Element::zero(), -(degree.div_ceil(2) as i64)),
    };
    let mut mu = mu_form(alg, &form, twopi)?;
    if mu.is_zero() {
        mu.degree = degree;
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_element;
    use crate::models;

    fn p(alg: &PresentedAlgebra, s: &str) -> Poly {
        parse_element(alg, s).unwrap()
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(merge_keys(&[1], &[0]), Some((vec![0, 1], true)));
        assert_eq!(merge_keys(&[0, 2], &[1]), Some((vec![0, 1, 2], true)));
        assert_eq!(merge_keys(&[1, 2], &[0]), Some((vec![0, 1, 2], false)));
        assert_eq!(merge_keys(&[1], &[1]), None);
    }

    #[test]
    fn mu_small_examples() {
        let a = models::free_commutative(&["x", "y"], 12).unwrap();
        let x = Monomial::var(2, 0);
        let y = Monomial::var(2, 1);
        let one = Monomial::one(2);
        let f: Form<Monomial> = Element::basis(vec![x.clone(), y.clone(), x.clone()]);
        let m = mu_form(&a, &f, 0).unwrap();
        let expected = KahlerForm::from_terms(&a, 2, [(vec![0, 1], p(&a, "-x/2"))]).unwrap();
        assert_eq!(m, expected);
        let g: Form<Monomial> = Element::basis(vec![one, y]);
        assert_eq!(mu_form(&a, &g, 0).unwrap(), KahlerForm::from_terms(&a, 1, [(vec![1], a.one())]).unwrap());
    }

    #[test]
    fn d_squared_vanishes() {
        let a = models::free_commutative(&["x", "y", "z"], 12).unwrap();
        let f = KahlerForm::function(&a, &p(&a, "x^2 y z + 3 y^3 - i x z^2")).unwrap();
        let df = f.d(&a).unwrap();
        assert!(!df.is_zero());
        assert!(df.d(&a).unwrap().is_zero());
        let w = KahlerForm::from_terms(&a, 1, [(vec![0], p(&a, "y^2 z")), (vec![2], p(&a, "x y"))]).unwrap();
        assert!(w.d(&a).unwrap().d(&a).unwrap().is_zero());
    }

    #[test]
    fn inverse_differential() {
        let l = models::laurent(16).unwrap();
        let v = differential_of(&l, &p(&l, "u^-1")).unwrap();
        assert_eq!(v.coefficient(&[0]), p(&l, "-u^-2"));
        // d(u·u⁻¹) = 0
        assert!(differential_of(&l, &p(&l, "u u^-1")).unwrap().is_zero());
    }

    #[test]
    fn sphere_canonical_forms() {
        let s = models::sphere();
        let radial = KahlerForm::from_terms(&s, 1, [(vec![0], p(&s, "x")), (vec![1], p(&s, "y")), (vec![2], p(&s, "z"))]).unwrap();
        assert!(canonicalize(&s, &radial).unwrap().is_zero());
        let dz = KahlerForm::from_terms(&s, 1, [(vec![2], s.one())]).unwrap();
        let rdr_dx = radial.wedge(&dz, &s).unwrap();
        assert!(!rdr_dx.is_zero());
        assert!(canonicalize(&s, &rdr_dx).unwrap().is_zero());
        let dxdy = KahlerForm::from_terms(&s, 2, [(vec![0, 1], s.one())]).unwrap();
        let c = canonicalize(&s, &dxdy).unwrap();
        assert_eq!(canonicalize(&s, &c).unwrap(), c);
    }

    #[test]
    fn sphere_moments_match_quadrature() {
        // tensor-product midpoint rule in (θ, φ) on the unit sphere
        let quad = |a: i32, b: i32, c: i32| {
            let (nt, np) = (400, 400);
            let mut s = 0.0;
            for i in 0..nt {
                let t = (i as f64 + 0.5) * std::f64::consts::PI / nt as f64;
                for j in 0..np {
                    let f = (j as f64 + 0.5) * 2.0 * std::f64::consts::PI / np as f64;
                    let (x, y, z) = (t.sin() * f.cos(), t.sin() * f.sin(), t.cos());
                    s += x.powi(a) * y.powi(b) * z.powi(c) * t.sin();
                }
            }
            s * (std::f64::consts::PI / nt as f64) * (2.0 * std::f64::consts::PI / np as f64)
        };
        let to_f64 = |q: &BigRational| {
            use num_traits::ToPrimitive;
            q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap()
        };
        for (a, b, c) in [(0, 0, 0), (2, 0, 0), (2, 2, 0), (4, 0, 2), (2, 2, 2), (1, 1, 0), (6, 0, 0), (0, 3, 1)] {
            let exact = 4.0 * std::f64::consts::PI * to_f64(&sphere_moment(a, b, c));
            let approx = quad(a as i32, b as i32, c as i32);
            assert!((exact - approx).abs() < 1e-4, "{a} {b} {c}: {exact} vs {approx}");
        }
    }

    #[test]
    fn sphere_integral_examples() {
        let s = models::sphere();
        let dxdy = KahlerForm::from_terms(&s, 2, [(vec![0, 1], s.one())]).unwrap();
        assert_eq!(sphere_integrate(&s, &dxdy).unwrap(), (Scalar::zero(), 1));
        // z dx∧dy + x dy∧dz + y dz∧dx integrates to the area 4π = −2i·(2πi)
        let sigma = KahlerForm::from_terms(&s, 2, [(vec![0, 1], p(&s, "z")), (vec![1, 2], p(&s, "x")), (vec![0, 2], p(&s, "-y"))]).unwrap();
        assert_eq!(sphere_integrate(&s, &sigma).unwrap(), (Scalar::gaussian(0, -2), 1));
        let xy = KahlerForm::from_terms(&s, 2, [(vec![0, 1], p(&s, "x y z"))]).unwrap();
        assert!(sphere_integrate(&s, &xy).unwrap().0.is_zero());
    }

    #[test]
    fn residue_examples() {
        let l = models::laurent(16).unwrap();
        let f = |s: &str| KahlerForm::from_terms(&l, 1, [(vec![0], p(&l, s))]).unwrap();
        assert_eq!(circle_residue(&l, &f("u^-1")).unwrap(), (Scalar::one(), 1));
        assert_eq!(circle_residue(&l, &f("1")).unwrap(), (Scalar::zero(), 1));
        assert_eq!(circle_residue(&l, &f("u^-3 u^2")).unwrap(), (Scalar::one(), 1));
    }

    #[test]
    fn curvature_of_constant_idempotent_vanishes() {
        let s = models::sphere();
        let e = AlgMatrix::constant(&s, 2, 2, &[Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()]).unwrap();
        let r = grassmann_curvature(&s, &e).unwrap();
        assert!(r.entries.is_zero());
        assert!(r.side_identity_checked);
        let ch = ch_cw_even(&s, &e, 1).unwrap();
        assert_eq!(ch.component(0).unwrap().coefficient(&[]), s.one());
        assert!(ch.component(2).unwrap().is_zero());
        assert_eq!(pair(&s, &ch, &Current::sphere()).unwrap(), Scalar::zero());
    }

    #[test]
    fn bott_curvature_and_powers() {
        let s = models::sphere();
        let e = models::bott_projector(&s).unwrap();
        let r = grassmann_curvature(&s, &e).unwrap();
        assert!(!r.entries.is_zero());
        let em = KahlerMatrix::from_matrix(&s, &e).unwrap();
        let de = KahlerMatrix::differential(&s, &e).unwrap();
        let mut rk = r.entries.clone();
        let mut direct = em.mul(&de, &s).unwrap().mul(&de, &s).unwrap();
        for _ in 2..=3 {
            rk = rk.mul(&r.entries, &s).unwrap();
            direct = direct.mul(&de, &s).unwrap().mul(&de, &s).unwrap();
            assert!(rk.agrees_with(&direct, &s).unwrap());
        }
        let ch = ch_cw_even(&s, &e, 1).unwrap();
        assert_eq!(ch.component(0).unwrap().coefficient(&[]), s.one());
        assert_eq!(ch.component(2).unwrap().twopi_power(), -1);
        let v = pair(&s, &ch, &Current::sphere()).unwrap();
        assert!(v == Scalar::one() || v == -Scalar::one(), "{v:?}");
    }

    #[test]
    fn odd_character_examples() {
        let l = models::laurent(16).unwrap();
        let one = AlgMatrix::identity(&l, 1);
        let ch = ch_cw_odd(&l, &one, None, 1, OddNormalization::Printed).unwrap();
        assert!(ch.components().all(KahlerForm::is_zero));
        let u = models::one_by_one(p(&l, "u"));
        let ch = ch_cw_odd(&l, &u, None, 1, OddNormalization::Printed).unwrap();
        assert_eq!(ch.component(1).unwrap().coefficient(&[0]), p(&l, "u^-1"));
        assert_eq!(ch.component(1).unwrap().twopi_power(), 0);
        let u2 = models::one_by_one(p(&l, "u^2"));
        let ch = ch_cw_odd(&l, &u2, None, 0, OddNormalization::Printed).unwrap();
        assert_eq!(ch.component(1).unwrap().coefficient(&[0]), p(&l, "2u^-1"));
        assert_eq!(pair(&l, &ch, &Current::circle().normalized()).unwrap(), Scalar::from_int(2));
        assert_eq!(
            pair(&l, &ch, &Current::circle()),
            Err(Error::NormalizationMismatch { form: 0, current: 1 })
        );
    }

    #[test]
    fn comparison_routes_agree() {
        let l = models::laurent(24).unwrap();
        for k in -3i32..=3 {
            let g = models::one_by_one(p(&l, &format!("u^{k}")));
            let input = ChernInput::Invertible { g, inverse: None };
            let r = compare_cq_cw(&l, &input, &Current::circle(), SignConvention::Plain).unwrap();
            assert!(r.agree);
            assert_eq!(r.cq_value, Scalar::from_int(k as i64));
        }
        let s = models::sphere();
        let e = models::bott_projector(&s).unwrap();
        let r = compare_cq_cw(&s, &ChernInput::Idempotent(e.clone()), &Current::sphere(), SignConvention::Plain).unwrap();
        assert!(r.agree, "{r:?}");
        let alt = compare_cq_cw(&s, &ChernInput::Idempotent(e), &Current::sphere(), SignConvention::Alternating).unwrap();
        assert!(!alt.agree);
        let pt = Current::point(vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
        let c = ChernInput::Idempotent(models::bott_projector(&s).unwrap());
        assert!(compare_cq_cw(&s, &c, &pt, SignConvention::Plain).unwrap().agree);
    }

    #[test]
    fn mu_identities_on_generated_forms() {
        let free = models::free_commutative(&["x", "y"], 16).unwrap();
        let l = models::laurent(16).unwrap();
        let s = models::sphere();
        let monos = |alg: &PresentedAlgebra, list: &[&str]| -> Vec<Monomial> {
            list.iter().map(|t| p(alg, t).terms().next().unwrap().0.clone()).collect()
        };
        for (alg, names) in [
            (&free, vec!["x", "y", "x^2", "x y"]),
            (&l, vec!["u", "u^-1", "u^2", "u^-2"]),
            (&s, vec!["x", "z", "x z", "y^2", "y z"]),
        ] {
            let ms = monos(alg, &names);
            let one = Monomial::one(alg.num_generators());
            for a0 in std::iter::once(&one).chain(&ms) {
                for a1 in &ms {
                    for a2 in &ms {
                        let f: Form<Monomial> = Element::basis(vec![a0.clone(), a1.clone(), a2.clone()]);
                        let r = check_mu_identities(alg, &f).unwrap();
                        assert!(r.intertwines_b_and_d && r.kills_b, "{f:?}");
                    }
                }
            }
        }
    }
}

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{AlgMatrix, Algebra, Element};
use crate::{Error, Result, Scalar};

/// Exponent vector over the generators of a presented algebra.
///
/// Ordered by total degree, then lexicographically with the *last* generator
/// most significant. This is a monomial order (a well-order compatible with
/// multiplication), so rules that decrease it terminate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.0[i] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(o.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Index of the generator this one is the declared inverse of.
    pub inverse_of: Option<usize>,
}

impl Generator {
    pub fn new(name: &str) -> Self {
        Generator { name: name.to_string(), inverse_of: None }
    }

    pub fn inverse_of(name: &str, of: usize) -> Self {
        Generator { name: name.to_string(), inverse_of: Some(of) }
    }
}

/// A rewrite rule `lhs → rhs`; every monomial of `rhs` is smaller than `lhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: Element<Monomial>,
}

/// A finitely generated commutative algebra `ℚ(i)[gens]/(rules)`.
///
/// Normal forms are computed by rewriting with user-supplied rules. The rule
/// set is checked for strict decrease and for local confluence on every
/// critical pair whose overlap fits under the degree cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedAlgebra {
    generators: Vec<Generator>,
    rules: Vec<Rule>,
    degree_cap: u32,
}

impl PresentedAlgebra {
    pub fn new(generators: Vec<Generator>, rules: Vec<Rule>, degree_cap: u32) -> Result<Self> {
        let n = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if g.name == "i" || g.name.is_empty() {
                return Err(Error::InvalidAlgebra(format!("invalid generator name `{}`", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidAlgebra(format!("duplicate generator `{}`", g.name)));
            }
            if let Some(j) = g.inverse_of {
                if j >= i || generators[j].inverse_of.is_some() {
                    return Err(Error::InvalidAlgebra(format!(
                        "`{}` must be the inverse of an earlier non-inverse generator",
                        g.name
                    )));
                }
            }
        }
        let mut all_rules = rules;
        for (i, g) in generators.iter().enumerate() {
            if let Some(j) = g.inverse_of {
                let lhs = Monomial::var(n, i).mul(&Monomial::var(n, j));
                if !all_rules.iter().any(|r| r.lhs == lhs) {
                    all_rules.push(Rule { lhs, rhs: Element::basis(Monomial::one(n)) });
                }
            }
        }
        for r in &all_rules {
            if r.lhs.0.len() != n || r.rhs.terms().any(|(m, _)| m.0.len() != n) {
                return Err(Error::InvalidAlgebra("rule arity differs from generator count".into()));
            }
            if r.lhs.is_one() {
                return Err(Error::InvalidAlgebra("rule rewrites the unit".into()));
            }
            if let Some((m, _)) = r.rhs.terms().find(|(m, _)| **m >= r.lhs) {
                return Err(Error::InvalidAlgebra(format!(
                    "rule {:?} → … does not decrease the monomial order (contains {:?})",
                    r.lhs, m
                )));
            }
        }
        let alg = PresentedAlgebra { generators, rules: all_rules, degree_cap };
        alg.check_confluence()?;
        Ok(alg)
    }

    fn check_confluence(&self) -> Result<()> {
        for (a, ra) in self.rules.iter().enumerate() {
            for rb in &self.rules[a + 1..] {
                if ra.lhs.coprime(&rb.lhs) {
                    continue;
                }
                let m = ra.lhs.lcm(&rb.lhs);
                if m.degree() > self.degree_cap {
                    continue;
                }
                let qa = ra.lhs.quotient_of(&m);
                let qb = rb.lhs.quotient_of(&m);
                let left = self.normal_form(&shift(&ra.rhs, &qa))?;
                let right = self.normal_form(&shift(&rb.rhs, &qb))?;
                if left != right {
                    return Err(Error::NonConfluent(format!(
                        "critical pair at {:?} reduces to {:?} and {:?}",
                        m, left, right
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Generators that are not declared inverses; their differentials span
    /// the Kähler 1-forms.
    pub fn primary_generators(&self) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.generators[i].inverse_of.is_none()).collect()
    }

    pub fn var(&self, i: usize) -> Element<Monomial> {
        Element::basis(Monomial::var(self.num_generators(), i))
    }

    /// Unique rewrite normal form.
    pub fn normal_form(&self, p: &Element<Monomial>) -> Result<Element<Monomial>> {
        let mut todo: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in p.terms() {
            if m.degree() > self.degree_cap {
                return Err(Error::DegreeOverflow { degree: m.degree(), cap: self.degree_cap });
            }
            todo.insert(m.clone(), c.clone());
        }
        let mut done: Vec<(Monomial, Scalar)> = Vec::new();
        while let Some((m, c)) = todo.pop_last() {
            match self.rules.iter().find(|r| r.lhs.divides(&m)) {
                Some(rule) => {
                    let q = rule.lhs.quotient_of(&m);
                    for (rm, rc) in rule.rhs.terms() {
                        let key = rm.mul(&q);
                        let v = &c * rc;
                        let e = todo.entry(key).or_insert_with(Scalar::zero);
                        *e += &v;
                        if e.is_zero() {
                            let key = rm.mul(&q);
                            todo.remove(&key);
                        }
                    }
                }
                None => done.push((m, c)),
            }
        }
        Ok(Element::from_terms(done))
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        !self.rules.iter().any(|r| r.lhs.divides(m))
    }

    /// Partial derivative of a polynomial with respect to generator `j`,
    /// treating all generators as independent variables.
    pub fn partial(&self, p: &Element<Monomial>, j: usize) -> Element<Monomial> {
        let mut out = Element::zero();
        for (m, c) in p.terms() {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[j] -= 1;
            out.add_term(dm, &(c * &Scalar::from_int(e as i64)));
        }
        out
    }

    /// `d(gen_j)` expressed on primary differentials: `d(v) = −v²·du` when
    /// `v` is the declared inverse of `u`.
    pub fn generator_differential(&self, j: usize) -> Vec<(usize, Element<Monomial>)> {
        match self.generators[j].inverse_of {
            None => vec![(j, Element::basis(Monomial::one(self.num_generators())))],
            Some(u) => {
                let mut v2 = Monomial::one(self.num_generators());
                v2.0[j] = 2;
                vec![(u, Element::from_terms([(v2, -Scalar::one())]))]
            }
        }
    }

    /// Inverse of a scalar multiple of a monomial in invertible generators.
    pub fn monomial_unit_inverse(&self, e: &Element<Monomial>) -> Option<Element<Monomial>> {
        let mut terms = e.terms();
        let (m, c) = terms.next()?;
        if terms.next().is_some() {
            return None;
        }
        let n = self.num_generators();
        let mut inv = Monomial::one(n);
        for (i, &k) in m.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let partner = self.inverse_partner(i)?;
            inv.0[partner] += k;
        }
        let inv_elem = Element::from_terms([(inv, c.inv()?)]);
        self.normal_form(&inv_elem).ok()
    }

    fn inverse_partner(&self, i: usize) -> Option<usize> {
        if let Some(j) = self.generators[i].inverse_of {
            return Some(j);
        }
        self.generators.iter().position(|g| g.inverse_of == Some(i))
    }
}

fn shift(p: &Element<Monomial>, q: &Monomial) -> Element<Monomial> {
    Element::from_terms(p.terms().map(|(m, c)| (m.mul(q), c.clone())))
}

impl Algebra for PresentedAlgebra {
    type Key = Monomial;

    fn unit_key(&self) -> Monomial {
        Monomial::one(self.num_generators())
    }

    fn mul_keys(&self, a: &Monomial, b: &Monomial) -> Result<Element<Monomial>> {
        self.normal_form(&Element::basis(a.mul(b)))
    }

    fn key_label(&self, key: &Monomial) -> String {
        if key.is_one() {
            return "1".into();
        }
        key.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = &self.generators[i].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    fn symbol(&self, name: &str) -> Option<Element<Monomial>> {
        self.generator_index(name).map(|i| self.var(i))
    }

    fn symbol_inverse(&self, name: &str) -> Option<Element<Monomial>> {
        let i = self.generator_index(name)?;
        self.inverse_partner(i).map(|j| self.var(j))
    }

    fn invert_matrix(
        &self,
        g: &AlgMatrix<Monomial>,
        candidate: Option<&AlgMatrix<Monomial>>,
    ) -> Result<AlgMatrix<Monomial>> {
        if let Some(h) = candidate {
            super::matrix::verify_inverse(self, g, h)?;
            return Ok(h.clone());
        }
        if !g.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        // Diagonal matrices of monomial units invert entrywise.
        let k = g.rows();
        let mut h = AlgMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                if i != j && !g.get(i, j).is_zero() {
                    return Err(Error::Unverifiable);
                }
            }
            let inv = self.monomial_unit_inverse(g.get(i, i)).ok_or(Error::Unverifiable)?;
            h.set(i, i, inv);
        }
        super::matrix::verify_inverse(self, g, &h)?;
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn poly(alg: &PresentedAlgebra, s: &str) -> Element<Monomial> {
        super::super::parse::parse_element(alg, s).unwrap()
    }

    #[test]
    fn sphere_rule_applies_once() {
        let s = models::sphere();
        let z2 = s.var(2).mul(&s.var(2), &s).unwrap();
        assert_eq!(z2, poly(&s, "1 - x^2 - y^2"));
    }

    #[test]
    fn truncated_square_vanishes() {
        let a = models::truncated_polynomial_presented(2, 8).unwrap();
        let x = a.var(0);
        assert!(x.mul(&x, &a).unwrap().is_zero());
    }

    #[test]
    fn declared_inverse_cancels() {
        let l = models::laurent(16).unwrap();
        let uv = l.var(0).mul(&l.var(1), &l).unwrap();
        assert_eq!(uv, l.one());
        assert_eq!(poly(&l, "u^-3 * u^2"), l.var(1));
    }

    #[test]
    fn normal_form_is_idempotent_and_linear() {
        let s = models::sphere();
        let p = poly(&s, "z^3 + 2*x*z^2 - y");
        let nf = s.normal_form(&p).unwrap();
        assert_eq!(s.normal_form(&nf).unwrap(), nf);
        assert!(nf.terms().all(|(m, _)| s.is_normal(m)));
        let q = poly(&s, "z^4 - x");
        let lhs = s.normal_form(&p.add(&q.scaled(&Scalar::from_int(3)))).unwrap();
        let rhs = nf.add(&s.normal_form(&q).unwrap().scaled(&Scalar::from_int(3)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_cap_is_a_hard_error() {
        let s = models::sphere_with_cap(4).unwrap();
        let x = s.var(0);
        let x3 = x.mul(&x, &s).unwrap().mul(&x, &s).unwrap();
        assert!(matches!(x3.mul(&x3, &s), Err(Error::DegreeOverflow { degree: 6, cap: 4 })));
    }

    #[test]
    fn increasing_rule_is_rejected() {
        let n = 1;
        let rule = Rule { lhs: Monomial::var(n, 0), rhs: Element::basis(Monomial(vec![2])) };
        assert!(PresentedAlgebra::new(vec![Generator::new("x")], vec![rule], 8).is_err());
    }

    #[test]
    fn non_confluent_rules_are_rejected() {
        // x*y -> x and x^2 -> y: overlap x^2*y reduces to x^2 -> y and to x*y^2 -> x*y -> x
        let gens = vec![Generator::new("x"), Generator::new("y")];
        let xy = Monomial(vec![1, 1]);
        let x2 = Monomial(vec![2, 0]);
        let r1 = Rule { lhs: xy, rhs: Element::basis(Monomial(vec![1, 0])) };
        let r2 = Rule { lhs: x2, rhs: Element::basis(Monomial(vec![0, 1])) };
        let res = PresentedAlgebra::new(gens, vec![r1, r2], 6);
        assert!(matches!(res, Err(Error::NonConfluent(_))), "{res:?}");
    }

    #[test]
    fn monomial_units_invert() {
        let l = models::laurent(16).unwrap();
        let g = AlgMatrix::scalar_matrix(&l, 1, poly(&l, "3*u^2"));
        let h = l.invert_matrix(&g, None).unwrap();
        assert_eq!(h.get(0, 0), &poly(&l, "1/3*u^-2"));
        let s = models::sphere();
        let g = AlgMatrix::scalar_matrix(&s, 1, poly(&s, "1 + x"));
        assert_eq!(s.invert_matrix(&g, None), Err(Error::Unverifiable));
    }
}

//! Algebras with a distinguished basis, their elements and matrices.
//!
//! An [`Algebra`] exposes a basis indexed by keys together with the product of
//! two basis keys. The unit must be a basis key: the quotient `A/ℂ·1` used by
//! the forms in [`crate::omega`] is then the span of the remaining keys.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::{Error, Result, Scalar};

mod fd;
mod matrix;
pub mod parse;
mod presented;

pub use fd::{FDAlgebra, ValidationReport};
pub use matrix::AlgMatrix;
pub use presented::{Generator, Monomial, PresentedAlgebra, Rule};

pub trait Algebra: Sync + Send {
    type Key: Clone + Ord + Eq + Hash + fmt::Debug + Send + Sync;

    fn unit_key(&self) -> Self::Key;

    /// Product of two basis elements, expanded in the basis.
    fn mul_keys(&self, a: &Self::Key, b: &Self::Key) -> Result<Element<Self::Key>>;

    fn key_label(&self, key: &Self::Key) -> String;

    /// Element named by a symbol in expressions (basis label or generator).
    fn symbol(&self, name: &str) -> Option<Element<Self::Key>>;

    /// Declared inverse of a symbol, used for negative exponents.
    fn symbol_inverse(&self, _name: &str) -> Option<Element<Self::Key>> {
        None
    }

    /// Inverse of a square matrix. The default only verifies a candidate.
    fn invert_matrix(
        &self,
        g: &AlgMatrix<Self::Key>,
        candidate: Option<&AlgMatrix<Self::Key>>,
    ) -> Result<AlgMatrix<Self::Key>>
    where
        Self: Sized,
    {
        match candidate {
            Some(h) => matrix::verify_inverse(self, g, h).map(|_| h.clone()),
            None => Err(Error::Unverifiable),
        }
    }

    fn one(&self) -> Element<Self::Key> {
        Element::basis(self.unit_key())
    }
}

/// A finite linear combination of basis keys.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> Element<K> {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn basis(key: K) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(key, Scalar::one());
        Element { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(terms: I) -> Self {
        let mut e = Element::zero();
        for (k, c) in terms {
            e.add_term(k, &c);
        }
        e
    }

    pub fn scalar<A: Algebra<Key = K>>(alg: &A, c: Scalar) -> Self {
        Element::from_terms([(alg.unit_key(), c)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: K, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element<K>, c: &Scalar) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn add(&self, other: &Element<K>) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &Scalar::one());
        r
    }

    pub fn sub(&self, other: &Element<K>) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &-Scalar::one());
        r
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-Scalar::one())
    }

    pub fn mul<A: Algebra<Key = K>>(&self, other: &Element<K>, alg: &A) -> Result<Self> {
        let mut out = Element::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let prod = alg.mul_keys(a, b)?;
                out.add_scaled(&prod, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Terms whose key is not the unit: the image in `A/ℂ·1`.
    pub fn nonunit_terms<'a>(&'a self, unit: &'a K) -> impl Iterator<Item = (&'a K, &'a Scalar)> + 'a {
        self.terms.iter().filter(move |(k, _)| *k != unit)
    }

    pub fn into_terms(self) -> BTreeMap<K, Scalar> {
        self.terms
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Element<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·{k:?}")?;
        }
        Ok(())
    }
}

/// Human-readable rendering of an element using the algebra's labels.
pub fn format_element<A: Algebra>(alg: &A, e: &Element<A::Key>) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let unit = alg.unit_key();
    e.terms()
        .map(|(k, c)| {
            if *k == unit {
                format!("({c})")
            } else {
                format!("({c})*{}", alg.key_label(k))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

//! Hochschild and periodic cyclic homology dimensions of finite-dimensional
//! algebras.
//!
//! Periodic cyclic homology is computed through the quotient complexes
//! `Q_k = ΩA / (bΩ^{k+1} + Ω^{>k})` with differential `B − b`. These are
//! finite-dimensional, `HP` is the inverse limit of `H(Q_k)`, and the
//! dimension is read off as the rank of `H(Q_K) → H(Q_{K−2})`, which is
//! constant once the tower has stabilized.

use rayon::prelude::*;

use crate::algebra::{Element, FDAlgebra};
use crate::linalg::{exact_rank, kernel_of_columns, Echelon, SparseVec};
use crate::omega::{self, Form, OmegaBasis, OmegaComplex};
use crate::{Error, Result, Scalar};

/// `HH_n = dim Ωⁿ − rank bₙ − rank bₙ₊₁` for `n ≤ n_max`.
pub fn hochschild_dims(alg: &FDAlgebra, n_max: usize) -> Result<Vec<usize>> {
    Ok(hochschild_with_ranks(alg, n_max)?.0)
}

/// Hochschild dimensions together with `rank(b: Ωⁿ → Ωⁿ⁻¹)` for `n ≤ n_max + 1`.
pub fn hochschild_with_ranks(alg: &FDAlgebra, n_max: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let cx = OmegaComplex::new(alg, n_max + 1);
    let ranks: Vec<usize> = (0..=n_max + 1)
        .map(|n| cx.b_matrix(n).map(exact_rank))
        .collect::<Result<_>>()?;
    let dims = (0..=n_max).map(|n| cx.dim(n) - ranks[n] - ranks[n + 1]).collect();
    Ok((dims, ranks))
}

/// `dim A − dim [A, A]`, read from the structure constants alone.
pub fn commutator_quotient_dim(alg: &FDAlgebra) -> usize {
    alg.dim() - alg.commutator_dim()
}

/// Global coordinates on `Ω^{≤m}`: degree `n` occupies a block after all
/// lower degrees.
#[derive(Clone, Debug)]
pub struct TruncatedCoordinates {
    bases: Vec<OmegaBasis>,
    offsets: Vec<usize>,
}

impl TruncatedCoordinates {
    pub fn new(alg: &FDAlgebra, max_degree: usize) -> Self {
        let bases: Vec<OmegaBasis> = (0..=max_degree).map(|n| OmegaBasis::new(alg, n)).collect();
        let mut offsets = Vec::with_capacity(bases.len() + 1);
        let mut acc = 0;
        for b in &bases {
            offsets.push(acc);
            acc += b.len();
        }
        offsets.push(acc);
        TruncatedCoordinates { bases, offsets }
    }

    pub fn max_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn len(&self) -> usize {
        *self.offsets.last().expect("nonempty")
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree_range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    /// Coordinates of the components of degree `≤ max_degree`.
    pub fn coordinates(&self, f: &Form<usize>) -> SparseVec {
        let mut v: SparseVec = f
            .terms()
            .filter(|(k, _)| k.len() <= self.bases.len())
            .map(|(k, c)| {
                let n = k.len() - 1;
                (self.offsets[n] + self.bases[n].index(k), c.clone())
            })
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    pub fn key(&self, idx: usize) -> Vec<usize> {
        let n = self.offsets.partition_point(|&o| o <= idx) - 1;
        self.bases[n].key(idx - self.offsets[n])
    }

    pub fn form(&self, v: &SparseVec) -> Form<usize> {
        Element::from_terms(v.iter().map(|(i, c)| (self.key(*i), c.clone())))
    }
}

/// `(B − b)` of a basis form, truncated to degrees `≤ max`.
fn periodic_differential_key(alg: &FDAlgebra, key: Vec<usize>, max: usize) -> Result<Form<usize>> {
    let n = key.len() - 1;
    let f = Element::basis(key);
    let mut out = omega::b(alg, &f)?.scaled(&-Scalar::from_int(1));
    if n < max {
        out = out.add(&omega::connes_b(alg, &f));
    }
    Ok(out)
}

/// Parity of a homology class: `0` even, `1` odd.
pub type Parity = usize;

/// Image of `H_p(Q_K) → H_p(Q_k)` with `k = K − 2`, as a subspace of
/// `Ω^{≤k}_p` modulo boundaries.
#[derive(Clone, Debug)]
pub struct StableImage {
    pub source_level: usize,
    pub target_level: usize,
    pub parity: Parity,
    coords: TruncatedCoordinates,
    boundaries: Echelon,
    /// Cycle representatives whose classes form a basis of the image.
    representatives: Vec<SparseVec>,
}

impl StableImage {
    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    pub fn coordinates(&self) -> &TruncatedCoordinates {
        &self.coords
    }

    pub fn representatives(&self) -> Vec<Form<usize>> {
        self.representatives.iter().map(|v| self.coords.form(v)).collect()
    }

    /// Rank of the classes of the given forms (truncated to degrees `≤ k`)
    /// modulo boundaries of `Q_k`.
    pub fn class_rank(&self, forms: &[Form<usize>]) -> usize {
        let mut ech = self.boundaries.clone();
        let base = ech.rank();
        for f in forms {
            ech.insert(&self.parity_part(f));
        }
        ech.rank() - base
    }

    /// Whether a form lies in the span of representatives and boundaries.
    pub fn contains_class(&self, f: &Form<usize>) -> bool {
        let mut ech = self.boundaries.clone();
        for r in &self.representatives {
            ech.insert(r);
        }
        ech.contains(&self.parity_part(f))
    }

    /// Whether a form is a boundary in `Q_k` (after truncation to `≤ k`).
    pub fn is_boundary(&self, f: &Form<usize>) -> bool {
        self.boundaries.contains(&self.parity_part(f))
    }

    fn parity_part(&self, f: &Form<usize>) -> SparseVec {
        let k = self.target_level;
        let g = Element::from_terms(
            f.terms().filter(|(key, _)| key.len() <= k + 1 && (key.len() - 1) % 2 == self.parity).map(|(key, c)| (key.clone(), c.clone())),
        );
        self.coords.coordinates(&g)
    }

    /// Dimension of the subspace fixed by a family of linear maps acting on
    /// forms, assuming they generate a finite group acting on the image.
    ///
    /// Uses `V = V^G ⊕ Σ_g im(g − 1)` for finite groups in characteristic 0.
    pub fn fixed_dim<F>(&self, maps: &[F]) -> usize
    where
        F: Fn(&Form<usize>) -> Form<usize>,
    {
        let mut ech = self.boundaries.clone();
        let base = ech.rank();
        for g in maps {
            for r in &self.representatives {
                let f = self.coords.form(r);
                let moved = g(&f).sub(&f);
                ech.insert(&self.parity_part(&moved));
            }
        }
        self.rank() - (ech.rank() - base)
    }
}

/// Computes the image of `H_p(Q_K) → H_p(Q_{K−2})`.
pub fn stable_image(alg: &FDAlgebra, source_level: usize, parity: Parity) -> Result<StableImage> {
    if source_level < 2 {
        return Err(Error::Precondition("source truncation level must be at least 2".into()));
    }
    let big_k = source_level;
    let k = big_k - 2;
    let coords_k = TruncatedCoordinates::new(alg, k);
    let empty = |coords: TruncatedCoordinates| StableImage {
        source_level: big_k,
        target_level: k,
        parity,
        coords,
        boundaries: Echelon::new(),
        representatives: Vec::new(),
    };
    if parity > k {
        return Ok(empty(coords_k));
    }

    let full = TruncatedCoordinates::new(alg, big_k + 1);
    let diff = |key: Vec<usize>| -> Result<SparseVec> {
        Ok(full.coordinates(&periodic_differential_key(alg, key, big_k)?))
    };

    // Relations from the parity-p basis in degrees (k, K+1].
    let mut relations = Echelon::new();
    for n in (k + 1..=big_k + 1).filter(|n| n % 2 == parity) {
        let basis = OmegaBasis::new(alg, n);
        let images: Vec<SparseVec> =
            (0..basis.len()).into_par_iter().map(|j| diff(basis.key(j))).collect::<Result<_>>()?;
        for v in images {
            relations.insert(&v);
        }
    }

    // Free variables: the parity-p basis of Ω^{≤k}.
    let mut free_keys: Vec<Vec<usize>> = Vec::new();
    for n in (0..=k).filter(|n| n % 2 == parity) {
        free_keys.extend(OmegaBasis::new(alg, n).keys());
    }
    let reduced: Vec<SparseVec> = free_keys
        .par_iter()
        .map(|key| diff(key.clone()).map(|v| relations.reduce(&v)))
        .collect::<Result<_>>()?;
    let projected_cycles = kernel_of_columns(&reduced, full.len());

    // Boundaries of Q_k in parity p: (B − b) of Ω^{≤k+1}_{1−p}, truncated to ≤ k.
    let mut boundaries = Echelon::new();
    for n in (0..=k + 1).filter(|n| n % 2 != parity) {
        let basis = OmegaBasis::new(alg, n);
        let images: Vec<SparseVec> = (0..basis.len())
            .into_par_iter()
            .map(|j| periodic_differential_key(alg, basis.key(j), k).map(|f| coords_k.coordinates(&f)))
            .collect::<Result<_>>()?;
        for v in images {
            boundaries.insert(&v);
        }
    }

    let mut span = boundaries.clone();
    let mut representatives = Vec::new();
    for z in projected_cycles {
        let form = Element::from_terms(z.iter().map(|(j, c)| (free_keys[*j].clone(), c.clone())));
        let v = coords_k.coordinates(&form);
        if span.insert(&v).is_some() {
            representatives.push(v);
        }
    }
    Ok(StableImage { source_level: big_k, target_level: k, parity, coords: coords_k, boundaries, representatives })
}

/// Periodic cyclic homology dimensions with the ranks behind them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpDims {
    pub even: usize,
    pub odd: usize,
    /// Whether the image ranks agreed for three consecutive source levels.
    pub stabilized: bool,
    /// The largest source level used.
    pub truncation: usize,
    /// `(K, even rank, odd rank)` for each source level examined.
    pub ranks: Vec<(usize, usize, usize)>,
}

/// `HP_*` dimensions from the image ranks at source levels `N−2, N−1, N`
/// (those that are `≥ 2`). The reported dimensions are the ranks at `N`.
pub fn hp_dims(alg: &FDAlgebra, n: usize) -> Result<HpDims> {
    if n < 2 {
        return Err(Error::Precondition("truncation must be at least 2".into()));
    }
    let mut ranks = Vec::new();
    for level in n.saturating_sub(2).max(2)..=n {
        let even = stable_image(alg, level, 0)?.rank();
        let odd = stable_image(alg, level, 1)?.rank();
        ranks.push((level, even, odd));
    }
    let (_, even, odd) = *ranks.last().expect("at least one level");
    let stabilized = ranks.len() == 3 && ranks.iter().all(|&(_, e, o)| e == even && o == odd);
    Ok(HpDims { even, odd, stabilized, truncation: n, ranks })
}

/// Largest truncation that keeps the periodic computation at desk scale.
pub fn default_truncation(alg: &FDAlgebra) -> usize {
    match alg.dim() {
        0..=2 => 8,
        3..=4 => 4,
        _ => 2,
    }
}

/// Combined homology summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub hh_dims: Vec<usize>,
    /// `rank(b: Ωⁿ → Ωⁿ⁻¹)` for `n = 0, …, len − 1`.
    pub b_ranks: Vec<usize>,
    pub hp: HpDims,
}

impl HomologyReport {
    /// Every Hochschild dimension satisfies `rank bₙ + rank bₙ₊₁ ≤ dim Ωⁿ`.
    pub fn is_consistent(&self, alg: &FDAlgebra) -> bool {
        (0..self.hh_dims.len())
            .all(|n| self.b_ranks[n] + self.b_ranks[n + 1] <= OmegaBasis::new(alg, n).len())
    }
}

pub fn homology_report(alg: &FDAlgebra, hh_degree: usize, hp_truncation: usize) -> Result<HomologyReport> {
    let (hh_dims, b_ranks) = hochschild_with_ranks(alg, hh_degree)?;
    let hp = hp_dims(alg, hp_truncation)?;
    Ok(HomologyReport { hh_dims, b_ranks, hp })
}

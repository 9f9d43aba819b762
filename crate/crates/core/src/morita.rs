//! Finite models: group algebras, functions on finite sets, group actions and
//! invariant subalgebras, matrix algebras, direct sums, and block models of
//! the form `⊕ M_n(C(X))^W`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::algebra::{Element, FDAlgebra};
use crate::homology::{self, HpDims};
use crate::linalg::{DenseMatrix, SparseVec};
use crate::omega::{self, Form};
use crate::{Error, Result, Scalar};

/// Multiplication table of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates a table `rows[a][b] = a·b`.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("table must be square and nonempty".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("product index out of range".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!("associativity fails on ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(GroupTable { order: n, table, identity, inverse })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `ℤ/n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        Self::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).expect("cyclic group")
    }

    /// The symmetric group on `n` letters, permutations in lexicographic
    /// order, with `(στ)(x) = σ(τ(x))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let rows = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&t.iter().map(|&x| s[x]).collect())).collect())
            .collect();
        Self::new(rows).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// `ℂ[G]` with basis the group elements, the identity first.
pub fn group_algebra(g: &GroupTable) -> Result<FDAlgebra> {
    let n = g.order();
    let labels = (0..n).map(|a| if a == g.identity() { "1".to_string() } else { format!("g{a}") }).collect();
    let table = (0..n * n).map(|ab| vec![(g.mul(ab / n, ab % n), Scalar::one())]).collect();
    FDAlgebra::new(labels, table, vec![(g.identity(), Scalar::one())])
}

/// Functions on `k` points with the pointwise product, in the basis
/// `1, p₂, …, p_k` where `p_x` is the indicator of point `x`.
pub fn function_algebra(k: usize) -> Result<FDAlgebra> {
    Ok(function_algebra_with_basis(k)?.0)
}

/// [`function_algebra`] together with the matrix whose columns express its
/// basis in indicator coordinates.
pub fn function_algebra_with_basis(k: usize) -> Result<(FDAlgebra, DenseMatrix)> {
    if k == 0 {
        return Err(Error::Precondition("a function algebra needs at least one point".into()));
    }
    let labels = (0..k).map(|x| format!("p{}", x + 1)).collect();
    let table = (0..k * k).map(|ab| if ab / k == ab % k { vec![(ab / k, Scalar::one())] } else { Vec::new() }).collect();
    let unit = (0..k).map(|x| (x, Scalar::one())).collect();
    FDAlgebra::with_unit_rebased(labels, table, unit)
}

/// A finite group acting on a finite-dimensional algebra by automorphisms.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: GroupTable,
    algebra: FDAlgebra,
    matrices: Vec<DenseMatrix>,
}

impl GroupAction {
    /// `matrices[g]` is the automorphism `σ(g)` in the algebra's basis.
    pub fn new(group: GroupTable, algebra: FDAlgebra, matrices: Vec<DenseMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::InvalidAction("one matrix per group element is required".into()));
        }
        for (g, m) in matrices.iter().enumerate() {
            if !algebra.is_homomorphism(&algebra, m) || m.inverse().is_none() {
                return Err(Error::InvalidAction(format!("σ({g}) is not an algebra automorphism")));
            }
        }
        if matrices[group.identity()] != DenseMatrix::identity(algebra.dim()) {
            return Err(Error::InvalidAction("identity must act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if matrices[g].mul(&matrices[h]) != matrices[group.mul(g, h)] {
                    return Err(Error::InvalidAction(format!("σ({g})σ({h}) ≠ σ({g}·{h})")));
                }
            }
        }
        Ok(GroupAction { group, algebra, matrices })
    }

    /// Action on functions on `points` points induced by permutations:
    /// `σ(g)` sends the indicator of `x` to the indicator of `perms[g][x]`.
    pub fn on_points(group: GroupTable, points: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.len() != group.order() || perms.iter().any(|p| !is_permutation(p, points)) {
            return Err(Error::InvalidAction("expected one permutation of the points per group element".into()));
        }
        let (alg, p) = function_algebra_with_basis(points)?;
        let p_inv = p.inverse().ok_or(Error::NotInvertible)?;
        let matrices = perms
            .iter()
            .map(|perm| p_inv.mul(&permutation_matrix(perm, 1)).mul(&p))
            .collect();
        Self::new(group, alg, matrices)
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn algebra(&self) -> &FDAlgebra {
        &self.algebra
    }

    pub fn matrix(&self, g: usize) -> &DenseMatrix {
        &self.matrices[g]
    }

    /// The map `Ω(σ(g))` on forms.
    pub fn act_on_form(&self, g: usize, f: &Form<usize>) -> Form<usize> {
        let m = &self.matrices[g];
        omega::map_form(f, &0, |k| Element::from_terms(m.column(*k).into_iter().enumerate()))
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    p.len() == n && p.iter().copied().collect::<BTreeSet<_>>() == (0..n).collect()
}

/// Matrix sending basis block `x` to block `perm[x]`, blocks of size `block`.
fn permutation_matrix(perm: &[usize], block: usize) -> DenseMatrix {
    let n = perm.len() * block;
    let mut m = DenseMatrix::zeros(n, n);
    for (x, &y) in perm.iter().enumerate() {
        for i in 0..block {
            m.set(y * block + i, x * block + i, Scalar::one());
        }
    }
    m
}

/// Fixed-point subalgebra with the matrix of its inclusion (columns are the
/// new basis vectors in the ambient basis). The unit comes first.
pub fn invariant_subalgebra(act: &GroupAction) -> Result<(FDAlgebra, DenseMatrix)> {
    let alg = act.algebra();
    let dim = alg.dim();
    let id = DenseMatrix::identity(dim);
    let mut stacked = Vec::new();
    for g in 0..act.group().order() {
        let diff = act.matrix(g).sub(&id);
        for i in 0..dim {
            stacked.push(diff.row(i).to_vec());
        }
    }
    let kernel = DenseMatrix::from_rows(stacked).kernel();
    let mut unit = vec![Scalar::zero(); dim];
    unit[0] = Scalar::one();
    let mut basis = vec![unit.clone()];
    for v in kernel {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if DenseMatrix::from_columns(&trial, dim).rank() == trial.len() {
            basis.push(v);
        }
    }
    let inclusion = DenseMatrix::from_columns(&basis, dim);
    if inclusion.column(0) != unit {
        return Err(Error::Assertion("fixed subspace does not contain the unit".into()));
    }
    let m = basis.len();
    let mut table = Vec::with_capacity(m * m);
    for a in &basis {
        for b in &basis {
            let prod = alg.mul_dense(a, b);
            let coords = inclusion
                .solve(&prod)
                .ok_or_else(|| Error::Assertion("fixed subspace is not closed under the product".into()))?;
            table.push(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect::<SparseVec>());
        }
    }
    let labels = (0..m).map(|i| if i == 0 { "1".to_string() } else { format!("w{i}") }).collect();
    Ok((FDAlgebra::new(labels, table, vec![(0, Scalar::one())])?, inclusion))
}

/// `M_n(A)` with its corner inclusion `a ↦ E₁₁ ⊗ a`.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    pub algebra: FDAlgebra,
    /// Columns: the basis of `M_n(A)` in the coordinates `E_ij ⊗ a_b`
    /// (index `(i·n + j)·dim A + b`).
    pub basis_change: DenseMatrix,
    /// Columns: `E₁₁ ⊗ a_b` in the basis of `M_n(A)`.
    pub corner: DenseMatrix,
}

pub fn matrix_algebra(a: &FDAlgebra, n: usize) -> Result<MatrixAlgebra> {
    if n == 0 {
        return Err(Error::Precondition("matrix size must be positive".into()));
    }
    let d = a.dim();
    let dim = n * n * d;
    let idx = |i: usize, j: usize, b: usize| (i * n + j) * d + b;
    let mut labels = Vec::with_capacity(dim);
    for i in 0..n {
        for j in 0..n {
            for b in 0..d {
                labels.push(format!("e{}{}:{}", i + 1, j + 1, a.labels()[b]));
            }
        }
    }
    let mut table = vec![Vec::new(); dim * dim];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for b in 0..d {
                    for c in 0..d {
                        let prod = a.product(b, c).iter().map(|(k, v)| (idx(i, l, *k), v.clone())).collect();
                        table[idx(i, j, b) * dim + idx(j, l, c)] = prod;
                    }
                }
            }
        }
    }
    let unit: SparseVec = (0..n).map(|i| (idx(i, i, 0), Scalar::one())).collect();
    let (algebra, p) = FDAlgebra::with_unit_rebased(labels, table, unit)?;
    let p_inv = p.inverse().ok_or(Error::NotInvertible)?;
    let mut corner = DenseMatrix::zeros(dim, d);
    for b in 0..d {
        let mut raw = vec![Scalar::zero(); dim];
        raw[idx(0, 0, b)] = Scalar::one();
        for (i, v) in p_inv.mul_vec(&raw).into_iter().enumerate() {
            corner.set(i, b, v);
        }
    }
    Ok(MatrixAlgebra { algebra, basis_change: p, corner })
}

/// `A₁ ⊕ … ⊕ A_m` and the matrix whose columns express its basis in the
/// concatenated block bases.
pub fn direct_sum(parts: &[FDAlgebra]) -> Result<(FDAlgebra, DenseMatrix)> {
    if parts.is_empty() {
        return Err(Error::Precondition("direct sum of no algebras".into()));
    }
    let dim: usize = parts.iter().map(FDAlgebra::dim).sum();
    let mut labels = Vec::with_capacity(dim);
    let mut table = vec![Vec::new(); dim * dim];
    let mut unit = Vec::new();
    let mut offset = 0;
    for (s, part) in parts.iter().enumerate() {
        let d = part.dim();
        for (i, l) in part.labels().iter().enumerate() {
            labels.push(if parts.len() == 1 { l.clone() } else { format!("{l}@{}", s + 1) });
            for j in 0..d {
                table[(offset + i) * dim + offset + j] =
                    part.product(i, j).iter().map(|(k, v)| (offset + k, v.clone())).collect();
            }
        }
        unit.push((offset, Scalar::one()));
        offset += d;
    }
    FDAlgebra::with_unit_rebased(labels, table, unit)
}

/// Report of the orbit-space comparison for a permutation action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WassermannReport {
    /// `dim HP₀(A^W)`.
    pub hp0_invariants: usize,
    /// `|X/W|`.
    pub orbits: usize,
    /// `dim HP₀(A)^W`, from the induced action on cycle representatives.
    pub hp0_fixed: usize,
    pub hp_invariants: HpDims,
}

impl WassermannReport {
    pub fn holds(&self) -> bool {
        self.hp0_invariants == self.orbits && self.orbits == self.hp0_fixed
    }
}

/// Orbits of a permutation action.
pub fn orbits(perms: &[Vec<usize>], points: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; points];
    let mut out = Vec::new();
    for x in 0..points {
        if seen[x] {
            continue;
        }
        let mut orbit: BTreeSet<usize> = BTreeSet::new();
        for p in perms {
            orbit.insert(p[x]);
        }
        for &y in &orbit {
            seen[y] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

/// Compares `dim HP₀(A^W)`, `|X/W|` and `dim HP₀(A)^W` for a permutation
/// action on functions on `X`.
pub fn wassermann_toy_check(group: &GroupTable, points: usize, perms: &[Vec<usize>]) -> Result<WassermannReport> {
    let act = GroupAction::on_points(group.clone(), points, perms.to_vec())?;
    let (inv, _) = invariant_subalgebra(&act)?;
    let hp_invariants = homology::hp_dims(&inv, homology::default_truncation(&inv))?;
    let image = homology::stable_image(act.algebra(), homology::default_truncation(act.algebra()), 0)?;
    let maps: Vec<_> = (0..group.order()).map(|g| {
        let act = &act;
        move |f: &Form<usize>| act.act_on_form(g, f)
    }).collect();
    let hp0_fixed = image.fixed_dim(&maps);
    Ok(WassermannReport {
        hp0_invariants: hp_invariants.even,
        orbits: orbits(perms, points).len(),
        hp0_fixed,
        hp_invariants,
    })
}

/// One block `M_n(C(X))^W` of a block model; `W` acts on the points and
/// entrywise on matrices.
#[derive(Clone, Debug)]
pub struct LeviBlock {
    pub points: usize,
    pub group: GroupTable,
    pub permutations: Vec<Vec<usize>>,
    pub size: usize,
}

/// `⊕_blocks M_n(C(X))^W` with its realization as tuples of matrix-valued
/// functions.
#[derive(Clone, Debug)]
pub struct LeviModel {
    pub algebra: FDAlgebra,
    pub blocks: Vec<LeviBlock>,
    /// Columns: basis elements as concrete vectors, block after block, each
    /// block in coordinates `E_ij ⊗ δ_x` (index `(i·n + j)·|X| + x`).
    pub realization: DenseMatrix,
    offsets: Vec<usize>,
}

impl LeviModel {
    /// `Σ |X/W|` over blocks.
    pub fn expected_hp0(&self) -> usize {
        self.blocks.iter().map(|b| orbits(&b.permutations, b.points).len()).sum()
    }

    fn concrete_index(&self, block: usize, i: usize, j: usize, x: usize) -> usize {
        let b = &self.blocks[block];
        self.offsets[block] + (i * b.size + j) * b.points + x
    }

    /// `(block, orbit)` pairs in a fixed order.
    pub fn orbit_labels(&self) -> Vec<(usize, Vec<usize>)> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(s, b)| orbits(&b.permutations, b.points).into_iter().map(move |o| (s, o)))
            .collect()
    }

    /// Trace-of-value functionals `a ↦ Tr a(x)` at one point of each orbit,
    /// as rows over the algebra's basis.
    pub fn point_traces(&self) -> Vec<Vec<Scalar>> {
        self.orbit_labels()
            .into_iter()
            .map(|(s, orbit)| {
                let x = orbit[0];
                let mut row = vec![Scalar::zero(); self.algebra.dim()];
                for i in 0..self.blocks[s].size {
                    let r = self.concrete_index(s, i, i, x);
                    for (c, v) in row.iter_mut().enumerate() {
                        *v += self.realization.get(r, c);
                    }
                }
                row
            })
            .collect()
    }

    /// The idempotents `E₁₁ ⊗ 1_orbit`, one per orbit of each block.
    pub fn minimal_idempotents(&self) -> Result<Vec<Element<usize>>> {
        self.orbit_labels()
            .into_iter()
            .map(|(s, orbit)| {
                let mut target = vec![Scalar::zero(); self.realization.rows()];
                for &x in &orbit {
                    target[self.concrete_index(s, 0, 0, x)] = Scalar::one();
                }
                let c = self
                    .realization
                    .solve(&target)
                    .ok_or_else(|| Error::Assertion("idempotent is not in the block model".into()))?;
                Ok(self.algebra.from_dense(&c))
            })
            .collect()
    }
}

pub fn levi_block_model(blocks: &[LeviBlock]) -> Result<LeviModel> {
    if blocks.is_empty() {
        return Err(Error::Precondition("block model needs at least one block".into()));
    }
    let mut parts = Vec::new();
    let mut realizations = Vec::new();
    for blk in blocks {
        let (n, k) = (blk.size, blk.points);
        if n == 0 || k == 0 {
            return Err(Error::Precondition("blocks need positive size and points".into()));
        }
        if blk.permutations.len() != blk.group.order() || blk.permutations.iter().any(|p| !is_permutation(p, k)) {
            return Err(Error::InvalidAction("expected one permutation of the points per group element".into()));
        }
        // M_n(C(X)) in concrete coordinates E_ij ⊗ δ_x.
        let dim = n * n * k;
        let idx = |i: usize, j: usize, x: usize| (i * n + j) * k + x;
        let mut labels = Vec::with_capacity(dim);
        let mut table = vec![Vec::new(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                for x in 0..k {
                    labels.push(format!("e{}{}:p{}", i + 1, j + 1, x + 1));
                    for l in 0..n {
                        table[idx(i, j, x) * dim + idx(j, l, x)] = vec![(idx(i, l, x), Scalar::one())];
                    }
                }
            }
        }
        let unit: SparseVec = (0..n).flat_map(|i| (0..k).map(move |x| (idx(i, i, x), Scalar::one()))).collect();
        let (alg, p) = FDAlgebra::with_unit_rebased(labels, table, unit)?;
        let p_inv = p.inverse().ok_or(Error::NotInvertible)?;
        let matrices = blk
            .permutations
            .iter()
            .map(|perm| {
                let mut m = DenseMatrix::zeros(dim, dim);
                for i in 0..n {
                    for j in 0..n {
                        for x in 0..k {
                            m.set(idx(i, j, perm[x]), idx(i, j, x), Scalar::one());
                        }
                    }
                }
                p_inv.mul(&m).mul(&p)
            })
            .collect();
        let act = GroupAction::new(blk.group.clone(), alg, matrices)?;
        let (inv, inclusion) = invariant_subalgebra(&act)?;
        realizations.push(p.mul(&inclusion));
        parts.push(inv);
    }
    let (algebra, s) = direct_sum(&parts)?;
    let total_rows: usize = blocks.iter().map(|b| b.size * b.size * b.points).sum();
    let mut block_diag = DenseMatrix::zeros(total_rows, s.rows());
    let mut offsets = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    for r in &realizations {
        offsets.push(r0);
        for i in 0..r.rows() {
            for j in 0..r.cols() {
                block_diag.set(r0 + i, c0 + j, r.get(i, j).clone());
            }
        }
        r0 += r.rows();
        c0 += r.cols();
    }
    Ok(LeviModel { algebra, blocks: blocks.to_vec(), realization: block_diag.mul(&s), offsets })
}

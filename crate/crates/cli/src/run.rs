//! Builds the algebras and elements of a manifest and executes its tasks.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{anyhow, bail, Context as _, Result};
use cyclochern_core::algebra::parse::parse_element;
use cyclochern_core::algebra::{format_element, Generator, Rule};
use cyclochern_core::chern::{self, SignConvention};
use cyclochern_core::derham::{self, ChernInput, Current, CurrentKind, KahlerChain, KahlerForm, OddNormalization};
use cyclochern_core::linalg::DenseMatrix;
use cyclochern_core::morita::{self, GroupAction, GroupTable, LeviBlock};
use cyclochern_core::omega::{self, GradedChain};
use cyclochern_core::{homology, models};
use cyclochern_core::{AlgMatrix, Algebra, Element, FDAlgebra, Monomial, PresentedAlgebra, Scalar};
use serde_json::{json, Value};

use crate::manifest::*;
use crate::report::{scalar_json, Assertion, TaskReport};

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    /// Form-degree cap for every task.
    pub cap: usize,
    /// Overrides per-task sign conventions when set.
    pub sign: Option<SignConvention>,
}

enum AnyAlgebra {
    Fd(FDAlgebra),
    Presented(PresentedAlgebra),
}

enum AnyMatrix {
    Fd { m: AlgMatrix<usize>, inverse: Option<AlgMatrix<usize>> },
    Presented { m: AlgMatrix<Monomial>, inverse: Option<AlgMatrix<Monomial>> },
}

struct ElementEntry {
    algebra: String,
    matrix: AnyMatrix,
}

pub struct Context {
    algebras: BTreeMap<String, AnyAlgebra>,
    elements: BTreeMap<String, ElementEntry>,
}

fn group_table(spec: &GroupSpec) -> Result<GroupTable> {
    Ok(match spec {
        GroupSpec::Trivial => GroupTable::trivial(),
        GroupSpec::Cyclic(n) => GroupTable::cyclic(*n),
        GroupSpec::Symmetric(n) => GroupTable::symmetric(*n),
        GroupSpec::Table(rows) => GroupTable::new(rows.clone())?,
    })
}

fn scalar_vec(defs: &[ScalarDef]) -> Result<Vec<Scalar>> {
    defs.iter().map(ScalarDef::value).collect()
}

impl Context {
    pub fn build(m: &Manifest) -> Result<Self> {
        let mut ctx = Context { algebras: BTreeMap::new(), elements: BTreeMap::new() };
        for def in &m.algebras {
            if ctx.algebras.contains_key(&def.name) {
                bail!("algebra `{}` is defined twice", def.name);
            }
            let alg = ctx.build_algebra(&def.kind).with_context(|| format!("algebra `{}`", def.name))?;
            ctx.algebras.insert(def.name.clone(), alg);
        }
        for def in &m.elements {
            if ctx.elements.contains_key(&def.name) {
                bail!("element `{}` is defined twice", def.name);
            }
            let matrix = ctx.build_element(def).with_context(|| format!("element `{}`", def.name))?;
            ctx.elements.insert(def.name.clone(), ElementEntry { algebra: def.algebra.clone(), matrix });
        }
        Ok(ctx)
    }

    fn fd(&self, name: &str) -> Result<&FDAlgebra> {
        match self.algebras.get(name) {
            Some(AnyAlgebra::Fd(a)) => Ok(a),
            Some(AnyAlgebra::Presented(_)) => bail!("algebra `{name}` is presented; a finite-dimensional algebra is required"),
            None => bail!("unknown algebra `{name}`"),
        }
    }

    fn presented(&self, name: &str) -> Result<&PresentedAlgebra> {
        match self.algebras.get(name) {
            Some(AnyAlgebra::Presented(a)) => Ok(a),
            Some(AnyAlgebra::Fd(_)) => bail!("algebra `{name}` is finite-dimensional; a presented algebra is required"),
            None => bail!("unknown algebra `{name}`"),
        }
    }

    fn element(&self, name: &str) -> Result<&ElementEntry> {
        self.elements.get(name).ok_or_else(|| anyhow!("unknown element `{name}`"))
    }

    fn build_algebra(&self, kind: &AlgebraKind) -> Result<AnyAlgebra> {
        Ok(match kind {
            AlgebraKind::StructureConstants { labels, products, unit } => {
                AnyAlgebra::Fd(structure_constants(labels, products, unit)?)
            }
            AlgebraKind::Presented { preset, generators, rules, degree_cap } => {
                let cap = degree_cap.unwrap_or(models::DEFAULT_DEGREE_CAP);
                AnyAlgebra::Presented(match preset {
                    Some(Preset::Sphere) => models::sphere_with_cap(cap)?,
                    Some(Preset::Laurent) => models::laurent(cap)?,
                    None => presented(generators, rules, cap)?,
                })
            }
            AlgebraKind::GroupAlgebra { group } => AnyAlgebra::Fd(morita::group_algebra(&group_table(group)?)?),
            AlgebraKind::FunctionAlgebra { points } => AnyAlgebra::Fd(morita::function_algebra(*points)?),
            AlgebraKind::MatrixOver { base, size } => AnyAlgebra::Fd(morita::matrix_algebra(self.fd(base)?, *size)?.algebra),
            AlgebraKind::InvariantSubalgebra { group, action } => {
                let group = group_table(group)?;
                let act = match action {
                    ActionDef::Points { points, permutations } => GroupAction::on_points(group, *points, permutations.clone())?,
                    ActionDef::Matrices { base, matrices } => {
                        let ms = matrices
                            .iter()
                            .map(|rows| Ok(DenseMatrix::from_rows(rows.iter().map(|r| scalar_vec(r)).collect::<Result<_>>()?)))
                            .collect::<Result<Vec<_>>>()?;
                        GroupAction::new(group, self.fd(base)?.clone(), ms)?
                    }
                };
                AnyAlgebra::Fd(morita::invariant_subalgebra(&act)?.0)
            }
            AlgebraKind::DirectSum { parts } => {
                let algs = parts.iter().map(|p| self.fd(p).cloned()).collect::<Result<Vec<_>>>()?;
                AnyAlgebra::Fd(morita::direct_sum(&algs)?.0)
            }
        })
    }

    fn build_element(&self, def: &ElementDef) -> Result<AnyMatrix> {
        let rows = match (&def.matrix, &def.value) {
            (Some(m), None) => m.clone(),
            (None, Some(v)) => vec![vec![v.clone()]],
            _ => bail!("give exactly one of `matrix` and `value`"),
        };
        match self.algebras.get(&def.algebra) {
            Some(AnyAlgebra::Fd(a)) => Ok(AnyMatrix::Fd {
                m: matrix(a, &rows)?,
                inverse: def.inverse.as_ref().map(|r| matrix(a, r)).transpose()?,
            }),
            Some(AnyAlgebra::Presented(a)) => Ok(AnyMatrix::Presented {
                m: matrix(a, &rows)?,
                inverse: def.inverse.as_ref().map(|r| matrix(a, r)).transpose()?,
            }),
            None => bail!("unknown algebra `{}`", def.algebra),
        }
    }
}

fn structure_constants(
    labels: &[String],
    products: &[ProductDef],
    unit: &BTreeMap<String, ScalarDef>,
) -> Result<FDAlgebra> {
    let dim = labels.len();
    let index = |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| anyhow!("unknown basis label `{l}`"));
    let sparse = |m: &BTreeMap<String, ScalarDef>| -> Result<Vec<(usize, Scalar)>> {
        let mut v: Vec<(usize, Scalar)> = m.iter().map(|(l, c)| Ok((index(l)?, c.value()?))).collect::<Result<_>>()?;
        v.sort_by_key(|(i, _)| *i);
        v.retain(|(_, c)| *c != Scalar::from_int(0));
        Ok(v)
    };
    let mut table = vec![Vec::new(); dim * dim];
    for p in products {
        table[index(&p.left)? * dim + index(&p.right)?] = sparse(&p.result)?;
    }
    let unit = sparse(unit)?;
    let unit_is_first = unit.len() == 1 && unit[0].0 == 0 && unit[0].1 == Scalar::from_int(1);
    Ok(if unit_is_first {
        FDAlgebra::new(labels.to_vec(), table, unit)?
    } else {
        FDAlgebra::with_unit_rebased(labels.to_vec(), table, unit)?.0
    })
}

fn presented(generators: &[GeneratorDef], rules: &[RuleDef], cap: u32) -> Result<PresentedAlgebra> {
    let names: Vec<&str> = generators.iter().map(GeneratorDef::name).collect();
    let gens = generators
        .iter()
        .map(|g| match g.inverse_of() {
            None => Ok(Generator::new(g.name())),
            Some(of) => {
                let idx = names.iter().position(|n| *n == of).ok_or_else(|| anyhow!("unknown generator `{of}`"))?;
                Ok(Generator::inverse_of(g.name(), idx))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let free = PresentedAlgebra::new(gens.clone(), Vec::new(), cap)?;
    let rules = rules
        .iter()
        .map(|r| {
            let lhs = parse_element(&free, &r.lhs)?;
            let mut terms = lhs.terms();
            let lhs = match (terms.next(), terms.next()) {
                (Some((m, c)), None) if *c == Scalar::from_int(1) => m.clone(),
                _ => bail!("rule left side `{}` must be a single monomial", r.lhs),
            };
            Ok(Rule { lhs, rhs: parse_element(&free, &r.rhs)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PresentedAlgebra::new(gens, rules, cap)?)
}

trait EntryParse: Algebra + Sized {
    fn entry(&self, e: &EntryDef) -> Result<Element<Self::Key>>;
}

impl EntryParse for FDAlgebra {
    fn entry(&self, e: &EntryDef) -> Result<Element<usize>> {
        match e {
            EntryDef::Expr(s) => Ok(parse_element(self, s)?),
            EntryDef::Coefficients(c) => {
                if c.len() != self.dim() {
                    bail!("expected {} basis coefficients, got {}", self.dim(), c.len());
                }
                Ok(self.from_dense(&scalar_vec(c)?))
            }
        }
    }
}

impl EntryParse for PresentedAlgebra {
    fn entry(&self, e: &EntryDef) -> Result<Element<Monomial>> {
        match e {
            EntryDef::Expr(s) => Ok(parse_element(self, s)?),
            EntryDef::Coefficients(_) => bail!("presented algebras take entries as expressions"),
        }
    }
}

fn matrix<A: EntryParse>(alg: &A, rows: &[Vec<EntryDef>]) -> Result<AlgMatrix<A::Key>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
        bail!("matrix rows must be nonempty and of equal length");
    }
    let entries = rows.iter().flatten().map(|e| alg.entry(e)).collect::<Result<Vec<_>>>()?;
    Ok(AlgMatrix::from_entries(rows.len(), cols, entries)?)
}

// ---------------------------------------------------------------------------
// Serialization of results.

fn chain_json<A: Algebra>(alg: &A, c: &GradedChain<A::Key>) -> Value {
    let comps: Vec<Value> = c
        .components()
        .map(|(deg, comp)| {
            let terms: Vec<Value> = comp
                .form
                .terms()
                .map(|(key, coeff)| json!({"key": key.iter().map(|k| alg.key_label(k)).collect::<Vec<_>>(), "coeff": scalar_json(coeff)}))
                .collect();
            json!({"degree": deg, "twopi_power": comp.twopi_power, "terms": terms})
        })
        .collect();
    Value::Array(comps)
}

fn kahler_json(alg: &PresentedAlgebra, f: &KahlerForm) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(key, c)| {
            let wedge: Vec<String> = key.iter().map(|&j| format!("d{}", alg.generators()[j].name)).collect();
            json!({"wedge": wedge, "coeff": format_element(alg, c)})
        })
        .collect();
    json!({"degree": f.degree(), "twopi_power": f.twopi_power(), "terms": terms})
}

fn kahler_chain_json(alg: &PresentedAlgebra, c: &KahlerChain) -> Value {
    Value::Array(c.components().map(|f| kahler_json(alg, f)).collect())
}

fn sign_name(s: SignConvention) -> &'static str {
    match s {
        SignConvention::Plain => "plain",
        SignConvention::Alternating => "alternating",
    }
}

fn current(def: &CurrentDef) -> Result<Current> {
    let mut c = match def.kind {
        CurrentKindDef::Sphere => Current::sphere(),
        CurrentKindDef::Circle => Current::circle(),
        CurrentKindDef::Point => {
            let p = def.point.as_ref().ok_or_else(|| anyhow!("point current needs `point`"))?;
            Current::point(scalar_vec(p)?)
        }
    };
    if def.normalized && !matches!(c.kind, CurrentKind::PointEvaluation(_)) {
        c = c.normalized();
    }
    match def.orientation {
        1 => {}
        -1 => c = c.reversed(),
        o => bail!("orientation must be 1 or -1, got {o}"),
    }
    Ok(c)
}

fn check_cap(degree: usize, cap: usize) -> Result<()> {
    if degree > cap {
        return Err(cyclochern_core::Error::CapOverflow { degree, cap }.into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Task execution.

type Outcome = (Value, Vec<Assertion>);

fn chern_even<A: Algebra>(alg: &A, e: &AlgMatrix<A::Key>, n: usize, sign: SignConvention) -> Result<Outcome> {
    let ch = chern::ch_cq_even(alg, e, n, sign)?;
    let cycle = chern::verify_cycle_auto(alg, &ch)?;
    let result = json!({"sign_convention": sign_name(sign), "chain": chain_json(alg, &ch), "checked_through": cycle.checked_through});
    Ok((result, vec![Assertion::new("(B−b)ch vanishes below the top degree", cycle.holds, format!("failing degrees {:?}", cycle.failing_degrees))]))
}

fn chern_odd<A: Algebra>(alg: &A, g: &AlgMatrix<A::Key>, inverse: Option<&AlgMatrix<A::Key>>, n: usize) -> Result<Outcome> {
    let ch = chern::ch_cq_odd(alg, g, inverse, n)?;
    let cycle = chern::verify_cycle_auto(alg, &ch)?;
    let result = json!({"chain": chain_json(alg, &ch), "checked_through": cycle.checked_through});
    Ok((result, vec![Assertion::new("(B−b)ch vanishes below the top degree", cycle.holds, format!("failing degrees {:?}", cycle.failing_degrees))]))
}

fn verify_cycle<A: Algebra>(
    alg: &A,
    m: &AlgMatrix<A::Key>,
    inverse: Option<&AlgMatrix<A::Key>>,
    parity: Parity,
    through: usize,
    sign: SignConvention,
) -> Result<Outcome> {
    let ch = match parity {
        Parity::Even => chern::ch_cq_even(alg, m, (through + 1) / 2, sign)?,
        Parity::Odd => chern::ch_cq_odd(alg, m, inverse, through / 2)?,
    };
    let r = chern::verify_cycle(alg, &ch, through)?;
    let result = json!({"holds": r.holds, "checked_through": r.checked_through, "failing_degrees": r.failing_degrees});
    Ok((result, vec![Assertion::new(format!("(B−b)ch = 0 through degree {through}"), r.holds, format!("failing degrees {:?}", r.failing_degrees))]))
}

fn expect_assertion(name: &str, value: &Scalar, expect: &Option<ScalarDef>) -> Result<Option<Assertion>> {
    let Some(e) = expect else { return Ok(None) };
    let e = e.value()?;
    Ok(Some(Assertion::new(name, *value == e, format!("got {value}, expected {e}"))))
}

impl Context {
    pub fn run_task(&self, task: &TaskDef, index: usize, settings: &Settings) -> TaskReport {
        let start = Instant::now();
        let id = task.id.clone().unwrap_or_else(|| format!("task-{}", index + 1));
        let (result, assertions) = match self.execute(&task.kind, settings) {
            Ok(out) => out,
            Err(e) => (Value::Null, vec![Assertion::new("error", false, format!("{e:#}"))]),
        };
        TaskReport { id, kind: task.kind.name().to_string(), assertions, result, timing_ms: start.elapsed().as_millis() as u64 }
    }

    fn execute(&self, kind: &TaskKind, settings: &Settings) -> Result<Outcome> {
        let cap = settings.cap;
        let sign = |task: &Option<SignDef>| {
            settings.sign.unwrap_or(match task {
                Some(SignDef::Alternating) => SignConvention::Alternating,
                _ => SignConvention::Plain,
            })
        };
        match kind {
            TaskKind::CheckIdentities { algebra, degree } => {
                let alg = self.fd(algebra)?;
                let n = degree.unwrap_or(cap.min(6));
                check_cap(n, cap)?;
                let r = omega::verify_mixed_identities(alg, n)?;
                let per_degree: Vec<Value> = r
                    .degrees
                    .iter()
                    .map(|d| json!({"degree": d.degree, "b_squared_zero": d.b_squared_zero, "connes_squared_zero": d.connes_squared_zero, "anticommute": d.anticommute}))
                    .collect();
                let ok = r.all_hold();
                Ok((json!({"degrees": per_degree}), vec![Assertion::new(format!("b² = B² = bB + Bb = 0 through degree {n}"), ok, "")]))
            }
            TaskKind::Homology { algebra, hh_degree, truncation, expect_hh, expect_hp } => {
                let alg = self.fd(algebra)?;
                let hh = hh_degree.unwrap_or(cap.min(4));
                let level = truncation.unwrap_or_else(|| homology::default_truncation(alg));
                check_cap(hh + 1, cap)?;
                check_cap(level + 1, cap + 1)?;
                let r = homology::homology_report(alg, hh, level)?;
                let mut asserts = vec![Assertion::new("HH₀ equals the commutator quotient", r.is_consistent(alg), "")];
                if let Some(e) = expect_hh {
                    asserts.push(Assertion::new("Hochschild dimensions", &r.hh_dims == e, format!("got {:?}, expected {e:?}", r.hh_dims)));
                }
                if let Some(e) = expect_hp {
                    let got = [r.hp.even, r.hp.odd];
                    asserts.push(Assertion::new("periodic cyclic dimensions", &got == e, format!("got {got:?}, expected {e:?}")));
                }
                let ranks: Vec<Value> = r.hp.ranks.iter().map(|(lvl, e, o)| json!({"level": lvl, "even": e, "odd": o})).collect();
                let result = json!({
                    "hh_dims": r.hh_dims,
                    "hp": {"even": r.hp.even, "odd": r.hp.odd, "stabilized": r.hp.stabilized, "truncation": r.hp.truncation, "ranks": ranks},
                });
                Ok((result, asserts))
            }
            TaskKind::ChernEven { element, degree, sign: s } => {
                check_cap(2 * degree, cap)?;
                match &self.element(element)?.matrix {
                    AnyMatrix::Fd { m, .. } => chern_even(self.fd(&self.element(element)?.algebra)?, m, *degree, sign(s)),
                    AnyMatrix::Presented { m, .. } => chern_even(self.presented(&self.element(element)?.algebra)?, m, *degree, sign(s)),
                }
            }
            TaskKind::ChernOdd { element, degree } => {
                check_cap(2 * degree + 1, cap)?;
                let entry = self.element(element)?;
                match &entry.matrix {
                    AnyMatrix::Fd { m, inverse } => chern_odd(self.fd(&entry.algebra)?, m, inverse.as_ref(), *degree),
                    AnyMatrix::Presented { m, inverse } => chern_odd(self.presented(&entry.algebra)?, m, inverse.as_ref(), *degree),
                }
            }
            TaskKind::VerifyCycle { element, parity, through, sign: s } => {
                check_cap(through + 1, cap)?;
                let entry = self.element(element)?;
                match &entry.matrix {
                    AnyMatrix::Fd { m, inverse } => verify_cycle(self.fd(&entry.algebra)?, m, inverse.as_ref(), *parity, *through, sign(s)),
                    AnyMatrix::Presented { m, inverse } => {
                        verify_cycle(self.presented(&entry.algebra)?, m, inverse.as_ref(), *parity, *through, sign(s))
                    }
                }
            }
            TaskKind::Pair { element, character, current: cdef, odd_normalization, sign: s, expect } => {
                let entry = self.element(element)?;
                let alg = self.presented(&entry.algebra)?;
                let AnyMatrix::Presented { m, inverse } = &entry.matrix else { unreachable!("presented algebra") };
                let cur = current(cdef)?;
                let degree = cur.degree();
                check_cap(degree, cap)?;
                let n = degree / 2;
                let norm = match odd_normalization {
                    Some(OddNormalizationDef::Shifted) => OddNormalization::Shifted,
                    _ => OddNormalization::Printed,
                };
                let form = match character {
                    Character::CwEven | Character::CwOdd => {
                        let chain = if matches!(character, Character::CwEven) {
                            derham::ch_cw_even(alg, m, n)?
                        } else {
                            derham::ch_cw_odd(alg, m, inverse.as_ref(), n, norm)?
                        };
                        chain.component(degree).cloned().ok_or(cyclochern_core::Error::DegreeMismatch { current: degree })?
                    }
                    Character::CqEven => derham::scaled_mu_component(alg, &chern::ch_cq_even(alg, m, n, sign(s))?, degree)?,
                    Character::CqOdd => derham::scaled_mu_component(alg, &chern::ch_cq_odd(alg, m, inverse.as_ref(), n)?, degree)?,
                };
                let value = derham::pair_form(alg, &form, &cur)?;
                let asserts = expect_assertion("pairing value", &value, expect)?.into_iter().collect();
                Ok((json!({"value": scalar_json(&value), "form": kahler_json(alg, &form), "current_twopi_power": cur.twopi_power}), asserts))
            }
            TaskKind::CompareCw { element, parity, current: cdef, sign: s, expect } => {
                let entry = self.element(element)?;
                let alg = self.presented(&entry.algebra)?;
                let AnyMatrix::Presented { m, inverse } = &entry.matrix else { unreachable!("presented algebra") };
                let cur = current(cdef)?;
                check_cap(cur.degree(), cap)?;
                let input = match parity {
                    Parity::Even => ChernInput::Idempotent(m.clone()),
                    Parity::Odd => ChernInput::Invertible { g: m.clone(), inverse: inverse.clone() },
                };
                let sc = sign(s);
                let r = derham::compare_cq_cw(alg, &input, &cur, sc)?;
                let mut asserts = vec![Assertion::new(
                    "Cuntz–Quillen and Chern–Weil pairings agree",
                    r.agree,
                    format!("μ∘c∘ch_CQ gives {}, ch_CW gives {}", r.cq_value, r.cw_value),
                )];
                asserts.extend(expect_assertion("pairing value", &r.cw_value, expect)?);
                let mut result = json!({
                    "degree": r.degree,
                    "sign_convention": sign_name(sc),
                    "cq_value": scalar_json(&r.cq_value),
                    "cw_value": scalar_json(&r.cw_value),
                });
                if matches!(parity, Parity::Even) {
                    result["cw_character"] = kahler_chain_json(alg, &derham::ch_cw_even(alg, m, r.degree / 2)?);
                }
                Ok((result, asserts))
            }
            TaskKind::Wassermann { group, points, permutations } => {
                let r = morita::wassermann_toy_check(&group_table(group)?, *points, permutations)?;
                let result = json!({
                    "hp0_invariant_subalgebra": r.hp0_invariants,
                    "orbits": r.orbits,
                    "hp0_fixed": r.hp0_fixed,
                    "hp_invariant_subalgebra": [r.hp_invariants.even, r.hp_invariants.odd],
                });
                let detail = format!("{} / {} / {}", r.hp0_invariants, r.orbits, r.hp0_fixed);
                Ok((result, vec![Assertion::new("dim HP₀(A^W) = |X/W| = dim HP₀(A)^W", r.holds(), detail)]))
            }
            TaskKind::Morita { algebra, sizes } => {
                let a = self.fd(algebra)?;
                let base = homology::hp_dims(a, homology::default_truncation(a))?;
                let mut rows = Vec::new();
                let mut asserts = Vec::new();
                for &n in sizes {
                    let m = morita::matrix_algebra(a, n)?;
                    let hp = homology::hp_dims(&m.algebra, homology::default_truncation(&m.algebra))?;
                    let ok = (hp.even, hp.odd) == (base.even, base.odd);
                    asserts.push(Assertion::new(
                        format!("dim HP(M_{n}(A)) = dim HP(A)"),
                        ok,
                        format!("({}, {}) vs ({}, {})", hp.even, hp.odd, base.even, base.odd),
                    ));
                    rows.push(json!({"size": n, "dim": m.algebra.dim(), "hp": [hp.even, hp.odd], "stabilized": hp.stabilized}));
                }
                Ok((json!({"base_hp": [base.even, base.odd], "matrix_algebras": rows}), asserts))
            }
            TaskKind::LeviModel { blocks } => levi_model(blocks),
        }
    }
}

fn levi_model(blocks: &[BlockDef]) -> Result<Outcome> {
    let blocks = blocks
        .iter()
        .map(|b| {
            Ok(LeviBlock { points: b.points, group: group_table(&b.group)?, permutations: b.permutations.clone(), size: b.size })
        })
        .collect::<Result<Vec<_>>>()?;
    let model = morita::levi_block_model(&blocks)?;
    let alg = &model.algebra;
    let mut images = Vec::new();
    for p in model.minimal_idempotents()? {
        images.push(chern::ch_cq_even(alg, &models::one_by_one(p), 0, SignConvention::Plain)?.form(0));
    }
    let pairing: Vec<Vec<Scalar>> = model
        .point_traces()
        .iter()
        .map(|row| {
            images
                .iter()
                .map(|f| {
                    let v = alg.to_dense(&omega::degree_zero_part(f));
                    row.iter().zip(&v).fold(Scalar::from_int(0), |acc, (a, b)| acc + a * b)
                })
                .collect()
        })
        .collect();
    let one = Scalar::from_int(1);
    let zero = Scalar::from_int(0);
    let is_perm = pairing.len() == images.len()
        && pairing.iter().all(|r| r.iter().filter(|v| **v == one).count() == 1 && r.iter().all(|v| *v == one || *v == zero))
        && (0..images.len()).all(|j| pairing.iter().filter(|r| r[j] == one).count() == 1);
    let level = homology::default_truncation(alg);
    let hp = homology::hp_dims(alg, level)?;
    let rank = homology::stable_image(alg, level, 0)?.class_rank(&images);
    let result = json!({
        "dim": alg.dim(),
        "pairing": pairing.iter().map(|r| r.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "class_rank": rank,
        "hp": [hp.even, hp.odd],
        "orbits": model.expected_hp0(),
    });
    let asserts = vec![
        Assertion::new("pairing against point traces is a permutation matrix", is_perm, ""),
        Assertion::new(
            "idempotent classes span HP₀",
            rank == hp.even && rank == images.len() && hp.even == model.expected_hp0(),
            format!("rank {rank}, dim HP₀ {}, orbits {}", hp.even, model.expected_hp0()),
        ),
    ];
    Ok((result, asserts))
}

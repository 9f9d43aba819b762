//! Manifest schema. Scalars are integers, strings (`"p/q"`) or `{re, im}`
//! pairs of strings; floats are rejected.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use cyclochern_core::scalar::parse_rational;
use cyclochern_core::Scalar;
use serde::Deserialize;

pub const MANIFEST_SCHEMA: &str = "cyclochern/manifest/1";

#[derive(Debug, Deserialize)]
pub struct Manifest {
    pub schema: String,
    #[serde(default)]
    pub algebras: Vec<AlgebraDef>,
    #[serde(default)]
    pub elements: Vec<ElementDef>,
    pub tasks: Vec<TaskDef>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        let m: Manifest = serde_json::from_str(text).context("malformed manifest")?;
        if m.schema != MANIFEST_SCHEMA {
            bail!("unsupported manifest schema `{}` (expected `{MANIFEST_SCHEMA}`)", m.schema);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ScalarDef {
    Int(i64),
    Text(String),
    Parts {
        re: String,
        #[serde(default)]
        im: Option<String>,
    },
}

impl ScalarDef {
    pub fn value(&self) -> Result<Scalar> {
        match self {
            ScalarDef::Int(n) => Ok(Scalar::from_int(*n)),
            ScalarDef::Text(s) => Ok(Scalar::from_rational(parse_rational(s).map_err(|e| anyhow!("scalar `{s}`: {e}"))?)),
            ScalarDef::Parts { re, im } => Scalar::from_parts_strings(re, im.as_deref().unwrap_or("0"))
                .map_err(|e| anyhow!("scalar {{re: {re}, im: {im:?}}}: {e}")),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct AlgebraDef {
    pub name: String,
    #[serde(flatten)]
    pub kind: AlgebraKind,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlgebraKind {
    StructureConstants {
        labels: Vec<String>,
        products: Vec<ProductDef>,
        unit: BTreeMap<String, ScalarDef>,
    },
    Presented {
        #[serde(default)]
        preset: Option<Preset>,
        #[serde(default)]
        generators: Vec<GeneratorDef>,
        #[serde(default)]
        rules: Vec<RuleDef>,
        #[serde(default)]
        degree_cap: Option<u32>,
    },
    GroupAlgebra {
        group: GroupSpec,
    },
    FunctionAlgebra {
        points: usize,
    },
    MatrixOver {
        base: String,
        size: usize,
    },
    InvariantSubalgebra {
        group: GroupSpec,
        #[serde(flatten)]
        action: ActionDef,
    },
    DirectSum {
        parts: Vec<String>,
    },
}

/// A group action, by permutations of points or by matrices on a base algebra.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ActionDef {
    Points { points: usize, permutations: Vec<Vec<usize>> },
    Matrices { base: String, matrices: Vec<Vec<Vec<ScalarDef>>> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Sphere,
    Laurent,
}

#[derive(Debug, Deserialize)]
pub struct ProductDef {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, ScalarDef>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum GeneratorDef {
    Name(String),
    Full {
        name: String,
        #[serde(default)]
        inverse_of: Option<String>,
    },
}

impl GeneratorDef {
    pub fn name(&self) -> &str {
        match self {
            GeneratorDef::Name(n) | GeneratorDef::Full { name: n, .. } => n,
        }
    }

    pub fn inverse_of(&self) -> Option<&str> {
        match self {
            GeneratorDef::Name(_) => None,
            GeneratorDef::Full { inverse_of, .. } => inverse_of.as_deref(),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct RuleDef {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Symmetric(usize),
    Table(Vec<Vec<usize>>),
}

#[derive(Debug, Deserialize)]
pub struct ElementDef {
    pub name: String,
    pub algebra: String,
    /// Matrix entries; a single entry may be given as `value`.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<EntryDef>>>,
    #[serde(default)]
    pub value: Option<EntryDef>,
    /// Candidate inverse, verified before use.
    #[serde(default)]
    pub inverse: Option<Vec<Vec<EntryDef>>>,
}

/// An algebra element as an expression or as basis coefficients.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EntryDef {
    Expr(String),
    Coefficients(Vec<ScalarDef>),
}

#[derive(Debug, Deserialize)]
pub struct TaskDef {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(flatten)]
    pub kind: TaskKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignDef {
    Plain,
    Alternating,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Character {
    CqEven,
    CqOdd,
    CwEven,
    CwOdd,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OddNormalizationDef {
    Printed,
    Shifted,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CurrentDef {
    pub kind: CurrentKindDef,
    #[serde(default = "default_orientation")]
    pub orientation: i8,
    /// Divide by `2πi` (integration and residue currents only).
    #[serde(default)]
    pub normalized: bool,
    #[serde(default)]
    pub point: Option<Vec<ScalarDef>>,
}

fn default_orientation() -> i8 {
    1
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurrentKindDef {
    Sphere,
    Circle,
    Point,
}

#[derive(Debug, Deserialize)]
pub struct BlockDef {
    pub points: usize,
    pub group: GroupSpec,
    pub permutations: Vec<Vec<usize>>,
    pub size: usize,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TaskKind {
    CheckIdentities {
        algebra: String,
        #[serde(default)]
        degree: Option<usize>,
    },
    Homology {
        algebra: String,
        #[serde(default)]
        hh_degree: Option<usize>,
        #[serde(default)]
        truncation: Option<usize>,
        #[serde(default)]
        expect_hh: Option<Vec<usize>>,
        #[serde(default)]
        expect_hp: Option<[usize; 2]>,
    },
    ChernEven {
        element: String,
        degree: usize,
        #[serde(default)]
        sign: Option<SignDef>,
    },
    ChernOdd {
        element: String,
        degree: usize,
    },
    VerifyCycle {
        element: String,
        parity: Parity,
        through: usize,
        #[serde(default)]
        sign: Option<SignDef>,
    },
    Pair {
        element: String,
        character: Character,
        current: CurrentDef,
        #[serde(default)]
        odd_normalization: Option<OddNormalizationDef>,
        #[serde(default)]
        sign: Option<SignDef>,
        #[serde(default)]
        expect: Option<ScalarDef>,
    },
    CompareCw {
        element: String,
        parity: Parity,
        current: CurrentDef,
        #[serde(default)]
        sign: Option<SignDef>,
        #[serde(default)]
        expect: Option<ScalarDef>,
    },
    Wassermann {
        group: GroupSpec,
        points: usize,
        permutations: Vec<Vec<usize>>,
    },
    Morita {
        algebra: String,
        sizes: Vec<usize>,
    },
    LeviModel {
        blocks: Vec<BlockDef>,
    },
}

impl TaskKind {
    pub fn name(&self) -> &'static str {
        match self {
            TaskKind::CheckIdentities { .. } => "check-identities",
            TaskKind::Homology { .. } => "homology",
            TaskKind::ChernEven { .. } => "chern-even",
            TaskKind::ChernOdd { .. } => "chern-odd",
            TaskKind::VerifyCycle { .. } => "verify-cycle",
            TaskKind::Pair { .. } => "pair",
            TaskKind::CompareCw { .. } => "compare-cw",
            TaskKind::Wassermann { .. } => "wassermann",
            TaskKind::Morita { .. } => "morita",
            TaskKind::LeviModel { .. } => "levi-model",
        }
    }
}

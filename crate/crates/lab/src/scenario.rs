//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! name = "veronese"
//! field = 1                  # cyclotomic index; 1 means ℚ
//! vars = 2
//! seed = 7
//! group = [[["-1", "0"], ["0", "-1"]]]   # generator matrices, rows of entries
//!
//! [functor]
//! i = 2
//! ideal = "S+"               # or "unit", "zero"; alternatively
//! # generators = ["X1^2", "X1*X2"]
//!
//! [window]
//! n_range = [-10, 3]
//! t_range = [-6, 3]
//! extension = 20
//!
//! [policy]                   # Čech truncation policy
//! t_max = 128
//!
//! [hsop]                     # fundamental invariant search
//! order = "grevlex"          # or "lex"
//! ```
//!
//! Matrix entries are integers or strings in the polynomial constant syntax
//! (`"1/2"`, `"zeta^2"`). Everything is validated on load, and every error
//! carries the line and column of the offending value.

use std::fmt;
use std::ops::Range;
use std::path::Path;
use std::sync::Arc;

use lclab_core::cech::{invariant_generators, CechPolicy};
use lclab_core::groebner::GroebnerBudget;
use lclab_core::invariants::HsopBudget;
use lclab_core::{
    close_group, parse_constant, parse_poly, Error as CoreError, ExactMatrix, MatrixGroup,
    MultiPoly, OrderKind,
};
use serde::{Deserialize, Serialize};
use toml::Spanned;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ScenarioError {
    pub origin: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}",
            self.origin, self.line, self.column, self.message
        )
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    #[serde(default)]
    description: String,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_field")]
    field: Spanned<u32>,
    vars: Spanned<usize>,
    #[serde(default)]
    group: Vec<Spanned<Vec<Vec<Spanned<toml::Value>>>>>,
    #[serde(default = "default_cap")]
    group_cap: usize,
    functor: Option<RawFunctor>,
    #[serde(default)]
    window: RawWindow,
    #[serde(default)]
    policy: CechPolicy,
    #[serde(default)]
    hsop: RawHsop,
    #[serde(default)]
    injection: RawInjection,
}

fn default_field() -> Spanned<u32> {
    Spanned::new(0..0, 1)
}

fn default_cap() -> usize {
    lclab_core::DEFAULT_GROUP_CAP
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctor {
    i: Spanned<usize>,
    ideal: Option<Spanned<String>>,
    generators: Option<Vec<Spanned<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawWindow {
    n_range: Spanned<[i64; 2]>,
    t_range: Spanned<[i64; 2]>,
    extension: i64,
    min_tail: usize,
}

impl Default for RawWindow {
    fn default() -> Self {
        RawWindow {
            n_range: Spanned::new(0..0, [-10, 3]),
            t_range: Spanned::new(0..0, [-6, 3]),
            extension: 20,
            min_tail: 3,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawHsop {
    max_degree: u64,
    max_attempts: u32,
    groebner_pairs: usize,
    groebner_degree: u32,
    /// "grevlex" (default) or "lex".
    order: OrderKind,
}

impl Default for RawHsop {
    fn default() -> Self {
        let d = HsopBudget::default();
        RawHsop {
            max_degree: d.max_degree,
            max_attempts: d.max_attempts,
            groebner_pairs: d.groebner.max_pairs,
            groebner_degree: d.groebner.max_degree,
            order: d.order,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawInjection {
    candidates: Vec<Spanned<String>>,
    random_candidates: usize,
    max_degree: u32,
}

impl Default for RawInjection {
    fn default() -> Self {
        RawInjection {
            candidates: Vec::new(),
            random_candidates: 2,
            max_degree: 2,
        }
    }
}

/// The ideal I ⊆ S of the functor H^i_I.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ideal {
    /// S_+, generated by the Noether generators.
    Augmentation,
    Unit,
    Zero,
    Generators(Vec<MultiPoly>),
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ideal::Augmentation => f.write_str("S+"),
            Ideal::Unit => f.write_str("unit"),
            Ideal::Zero => f.write_str("zero"),
            Ideal::Generators(g) => {
                let parts: Vec<String> = g.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub i: usize,
    pub ideal: Ideal,
}

#[derive(Clone, Debug)]
pub struct InjectionSpec {
    pub candidates: Vec<MultiPoly>,
    pub random_candidates: usize,
    pub max_degree: u32,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub origin: String,
    pub seed: u64,
    pub field: u32,
    pub vars: usize,
    pub group: Arc<MatrixGroup>,
    pub group_text: Vec<Vec<Vec<String>>>,
    pub functor: Option<Functor>,
    pub n_range: (i64, i64),
    pub t_range: (i64, i64),
    pub extension: i64,
    pub min_tail: usize,
    pub policy: CechPolicy,
    pub hsop: HsopBudget,
    pub injection: InjectionSpec,
}

/// Scenario summary embedded in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub origin: String,
    pub field: u32,
    pub vars: usize,
    pub group_order: usize,
    pub group: Vec<Vec<Vec<String>>>,
    pub functor: Option<String>,
    pub n_range: (i64, i64),
    pub t_range: (i64, i64),
    pub policy: CechPolicy,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Ctx<'a> {
    src: &'a str,
    origin: &'a str,
}

impl Ctx<'_> {
    fn err(&self, span: Range<usize>, message: impl Into<String>) -> ScenarioError {
        let (line, column) = line_col(self.src, span.start);
        ScenarioError {
            origin: self.origin.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    /// Polynomial text errors point inside the string literal.
    fn poly(
        &self,
        s: &Spanned<String>,
        vars: usize,
        field: u32,
    ) -> Result<MultiPoly, ScenarioError> {
        parse_poly(s.get_ref(), vars, field).map_err(|e| match e {
            CoreError::Parse { offset, message } => {
                self.err(s.span().start + 1 + offset..s.span().end, message)
            }
            other => self.err(s.span(), other.to_string()),
        })
    }
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        let path = path.as_ref();
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError {
            origin: origin.clone(),
            line: 0,
            column: 0,
            message: e.to_string(),
        })?;
        Scenario::parse(&text, &origin)
    }

    pub fn parse(src: &str, origin: &str) -> Result<Scenario, ScenarioError> {
        let cx = Ctx { src, origin };
        let raw: RawScenario = toml::from_str(src).map_err(|e| {
            let span = e.span().unwrap_or(0..0);
            cx.err(span, e.message().to_string())
        })?;
        let field = *raw.field.get_ref();
        if field == 0 {
            return Err(cx.err(raw.field.span(), "cyclotomic index must be at least 1"));
        }
        let vars = *raw.vars.get_ref();
        if vars == 0 {
            return Err(cx.err(raw.vars.span(), "at least one variable is required"));
        }
        let mut matrices = Vec::new();
        let mut group_text = Vec::new();
        for g in &raw.group {
            let rows = g.get_ref();
            if rows.len() != vars || rows.iter().any(|r| r.len() != vars) {
                return Err(cx.err(
                    g.span(),
                    format!("generator must be a {vars}×{vars} matrix"),
                ));
            }
            let mut entries = Vec::new();
            let mut text_rows = Vec::new();
            for row in rows {
                let mut parsed = Vec::new();
                let mut text = Vec::new();
                for e in row {
                    let s = match e.get_ref() {
                        toml::Value::Integer(v) => v.to_string(),
                        toml::Value::String(s) => s.clone(),
                        _ => return Err(cx.err(e.span(), "matrix entries are integers or strings")),
                    };
                    let v = parse_constant(&s, field)
                        .map_err(|err| cx.err(e.span(), err.to_string()))?;
                    parsed.push(v);
                    text.push(s);
                }
                entries.push(parsed);
                text_rows.push(text);
            }
            matrices.push(ExactMatrix::from_rows(entries).expect("checked shape"));
            group_text.push(text_rows);
        }
        let group = if matrices.is_empty() {
            MatrixGroup::trivial(vars)
        } else {
            close_group(&matrices, raw.group_cap).map_err(|e| {
                let span = match e {
                    CoreError::NonInvertibleGenerator { index } => raw.group[index].span(),
                    _ => raw.group[0].span(),
                };
                cx.err(span, e.to_string())
            })?
        };
        let functor = match raw.functor {
            None => None,
            Some(f) => {
                let ideal = match (&f.ideal, &f.generators) {
                    (Some(k), None) => match k.get_ref().as_str() {
                        "S+" | "S_+" | "augmentation" => Ideal::Augmentation,
                        "unit" => Ideal::Unit,
                        "zero" => Ideal::Zero,
                        other => {
                            return Err(cx.err(
                                k.span(),
                                format!("unknown ideal keyword {other:?} (S+, unit, zero)"),
                            ))
                        }
                    },
                    (None, Some(gens)) => {
                        let mut polys = Vec::new();
                        for g in gens {
                            let p = cx.poly(g, vars, field)?;
                            invariant_generators(std::slice::from_ref(&p), &group)
                                .map_err(|e| cx.err(g.span(), e.to_string()))?;
                            polys.push(p);
                        }
                        Ideal::Generators(polys)
                    }
                    _ => {
                        return Err(
                            cx.err(f.i.span(), "give exactly one of `ideal` and `generators`")
                        )
                    }
                };
                Some(Functor {
                    i: *f.i.get_ref(),
                    ideal,
                })
            }
        };
        let [n0, n1] = *raw.window.n_range.get_ref();
        if n0 > n1 {
            return Err(cx.err(raw.window.n_range.span(), "empty degree range"));
        }
        let [t0, t1] = *raw.window.t_range.get_ref();
        if t0 > t1 {
            return Err(cx.err(raw.window.t_range.span(), "empty coset range"));
        }
        let mut candidates = Vec::new();
        for c in &raw.injection.candidates {
            let p = cx.poly(c, vars, field)?;
            if !p.is_homogeneous() || p.is_zero() {
                return Err(cx.err(c.span(), "candidates must be nonzero homogeneous forms"));
            }
            candidates.push(p);
        }
        Ok(Scenario {
            name: raw.name,
            description: raw.description,
            origin: origin.to_string(),
            seed: raw.seed,
            field,
            vars,
            group: Arc::new(group),
            group_text,
            functor,
            n_range: (n0, n1),
            t_range: (t0, t1),
            extension: raw.window.extension.max(0),
            min_tail: raw.window.min_tail.max(1),
            policy: raw.policy,
            hsop: HsopBudget {
                max_degree: raw.hsop.max_degree,
                max_attempts: raw.hsop.max_attempts,
                groebner: GroebnerBudget {
                    max_pairs: raw.hsop.groebner_pairs,
                    max_degree: raw.hsop.groebner_degree,
                },
                order: raw.hsop.order,
            },
            injection: InjectionSpec {
                candidates,
                random_candidates: raw.injection.random_candidates,
                max_degree: raw.injection.max_degree,
            },
        })
    }

    pub fn echo(&self) -> ScenarioEcho {
        ScenarioEcho {
            name: self.name.clone(),
            origin: self.origin.clone(),
            field: self.field,
            vars: self.vars,
            group_order: self.group.order(),
            group: self.group_text.clone(),
            functor: self
                .functor
                .as_ref()
                .map(|f| format!("H^{}_{}", f.i, f.ideal)),
            n_range: self.n_range,
            t_range: self.t_range,
            policy: self.policy,
        }
    }
}

/// Work-budget overrides from the command line or the environment.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub t_start: Option<u32>,
    pub t_max: Option<u32>,
    pub confirmation_window: Option<u32>,
    pub stretch: Option<u32>,
    pub monomial_budget: Option<u128>,
    pub groebner_pairs: Option<usize>,
    pub extension: Option<i64>,
}

impl Overrides {
    pub fn apply(&self, s: &mut Scenario) {
        if let Some(v) = self.seed {
            s.seed = v;
        }
        if let Some(v) = self.t_start {
            s.policy.t_start = v;
        }
        if let Some(v) = self.t_max {
            s.policy.t_max = v;
        }
        if let Some(v) = self.confirmation_window {
            s.policy.confirmation_window = v;
        }
        if let Some(v) = self.stretch {
            s.policy.stretch = v;
        }
        if let Some(v) = self.monomial_budget {
            s.policy.monomial_budget = v;
        }
        if let Some(v) = self.groebner_pairs {
            s.hsop.groebner.max_pairs = v;
        }
        if let Some(v) = self.extension {
            s.extension = v.max(0);
        }
    }
}

//! Ready-made example structures and the JSON model-file format.
//!
//! | name | coordinates | charts | domain |
//! |------|-------------|--------|--------|
//! | `lotka_volterra` | `x1..xn` | `x` | `(0, inf)^n` |
//! | `toda` | `alpha1..alpha(N-1), beta1..betaN` | `alpha`, `1` | `(0, inf)`, real line |
//! | `relativistic_toda` | same as `toda` | `x` | `(0, inf)^(2N-1)` |
//! | `kermack_mckendric` | `x1, x2, x3` | `x, x, 1` | `(0, inf)^3` |
//! | `circle_map` | `x1, x2, x3` | `x^2` | `(0, inf)^3` |
//! | `two_by_two_game` | `x1, x2` | `x(1-x)` | `(0, 1)^2` |
//! | `constant` | `x1..xn` | `1` | real line |
//!
//! A model file is a JSON object:
//!
//! ```json
//! {
//!   "name": "cyclic",
//!   "dimension": 3,
//!   "matrix": [["0", "1", "-1"], ["-1", "0", "1"], ["1", "-1", "0"]],
//!   "charts": [{"family": "power", "k": 1}, {"family": "power", "k": 1}, {"family": "power", "k": 1}],
//!   "domain": [[0, "inf"], [0, "inf"], [0, "inf"]],
//!   "hamiltonian": "x1 + x2 + x3"
//! }
//! ```
//!
//! `matrix` may also be a flat row-major list of `n^2` entries. Instead of
//! `matrix` and `charts` a file may give an arbitrary candidate structure as
//! `"field": {"1,2": "x3", "1,3": "x2", "2,3": "x3"}`, the strict upper
//! triangle in 1-based indices; such a model can only be verified.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charts::{ChartDescriptor, ChartFunction, Interval};
use crate::expr;
use crate::linalg::{CoefficientMatrix, LinalgError, Rational, RationalMatrix};
use crate::structure::{DomainBox, ExprField, SeparableStructure};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown model {0:?} (try `models` for the list)")]
    UnknownModel(String),
    #[error("parameter {name}: {message}")]
    InvalidParam { name: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{context}: JSON error at line {line}, column {column}: {message}")]
    Json {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

impl ModelError {
    /// Usage, IO and syntax problems, as opposed to a model that parses but
    /// does not describe a valid structure.
    pub fn is_usage(&self) -> bool {
        !matches!(self, ModelError::Invalid { .. })
    }

    fn invalid(context: &str, message: impl fmt::Display) -> Self {
        ModelError::Invalid {
            context: context.to_string(),
            message: message.to_string(),
        }
    }
}

/// What a model defines.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Separable(SeparableStructure),
    /// A candidate matrix field given entry by entry, sampled in `domain`.
    Field {
        field: ExprField,
        domain: DomainBox,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub name: String,
    pub kind: ModelKind,
    /// Coordinate names, `x1..xn` unless the model uses its own.
    pub labels: Vec<String>,
    pub hamiltonian: Option<String>,
    /// Starting point used by `simulate` when none is given.
    pub initial_point: Option<Vec<f64>>,
    /// Modeling choices made where the source system leaves them open.
    pub notes: Vec<String>,
}

impl Model {
    pub fn dim(&self) -> usize {
        match &self.kind {
            ModelKind::Separable(s) => s.dim(),
            ModelKind::Field { field, .. } => crate::structure::MatrixField::dim(field),
        }
    }

    pub fn structure(&self) -> Option<&SeparableStructure> {
        match &self.kind {
            ModelKind::Separable(s) => Some(s),
            ModelKind::Field { .. } => None,
        }
    }

    pub fn domain(&self) -> &DomainBox {
        match &self.kind {
            ModelKind::Separable(s) => s.domain(),
            ModelKind::Field { domain, .. } => domain,
        }
    }

    /// The model-file form. Labels, starting point and notes are not part of it.
    pub fn to_file(&self) -> ModelFile {
        let mut file = ModelFile {
            name: Some(self.name.clone()),
            dimension: self.dim(),
            matrix: None,
            charts: None,
            domain: Some(self.domain().intervals().to_vec()),
            hamiltonian: self.hamiltonian.clone(),
            field: None,
        };
        match &self.kind {
            ModelKind::Separable(s) => {
                file.matrix = Some(MatrixRepr::Rows(s.coefficients().as_matrix().to_rows()));
                file.charts = Some(s.charts().iter().map(ChartDescriptor::from).collect());
            }
            ModelKind::Field { field, .. } => {
                file.field = Some(
                    field
                        .sources()
                        .into_iter()
                        .map(|((i, j), src)| (format!("{},{}", i + 1, j + 1), src))
                        .collect(),
                );
            }
        }
        file
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model files always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRepr {
    Rows(Vec<Vec<Rational>>),
    Flat(Vec<Rational>),
}

/// Serialized model, see the module docs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charts: Option<Vec<ChartDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<Interval>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<BTreeMap<String, String>>,
}

impl ModelFile {
    /// Validate and build. `context` prefixes error messages, usually the path.
    pub fn build(&self, context: &str) -> Result<Model, ModelError> {
        let n = self.dimension;
        if n == 0 {
            return Err(ModelError::invalid(context, "dimension must be at least 1"));
        }
        let domain = match &self.domain {
            Some(d) if d.len() != n => {
                return Err(ModelError::invalid(
                    context,
                    format!("domain has {} intervals, expected {n}", d.len()),
                ))
            }
            Some(d) => Some(DomainBox::new(d.clone())),
            None => None,
        };
        if let Some(h) = &self.hamiltonian {
            expr::parse(h, n)
                .map_err(|e| ModelError::invalid(context, format!("hamiltonian: {e}")))?;
        }
        let kind = match (&self.field, &self.matrix, &self.charts) {
            (Some(entries), None, None) => {
                let mut upper = BTreeMap::new();
                for (key, src) in entries {
                    upper.insert(
                        parse_entry_key(key).map_err(|m| ModelError::invalid(context, m))?,
                        src.clone(),
                    );
                }
                let field =
                    ExprField::new(n, &upper).map_err(|e| ModelError::invalid(context, e))?;
                let domain = domain.unwrap_or_else(|| DomainBox::new(vec![Interval::REAL_LINE; n]));
                ModelKind::Field { field, domain }
            }
            (Some(_), _, _) => {
                return Err(ModelError::invalid(
                    context,
                    "`field` cannot be combined with `matrix` or `charts`",
                ))
            }
            (None, Some(matrix), Some(charts)) => {
                let a =
                    coefficient_matrix(matrix, n).map_err(|e| ModelError::invalid(context, e))?;
                if charts.len() != n {
                    return Err(ModelError::invalid(
                        context,
                        format!("{} charts given, expected {n}", charts.len()),
                    ));
                }
                let charts = charts
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.build().map_err(|e| {
                            ModelError::invalid(context, format!("chart {}: {e}", i + 1))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let structure = match domain {
                    Some(d) => SeparableStructure::new(a, charts, d),
                    None => SeparableStructure::with_chart_domains(a, charts),
                }
                .map_err(|e| ModelError::invalid(context, e))?;
                ModelKind::Separable(structure)
            }
            (None, None, _) => {
                return Err(ModelError::invalid(
                    context,
                    "missing `matrix` (or `field`)",
                ))
            }
            (None, _, None) => return Err(ModelError::invalid(context, "missing `charts`")),
        };
        Ok(Model {
            name: self.name.clone().unwrap_or_else(|| context.to_string()),
            kind,
            labels: default_labels(n),
            hamiltonian: self.hamiltonian.clone(),
            initial_point: None,
            notes: Vec::new(),
        })
    }
}

fn parse_entry_key(key: &str) -> Result<(usize, usize), String> {
    let bad = || format!("field key {key:?} must look like \"i,j\" with 1 <= i < j");
    let (i, j) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i == 0 || j <= i {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

fn coefficient_matrix(repr: &MatrixRepr, n: usize) -> Result<CoefficientMatrix, String> {
    let rows = match repr {
        MatrixRepr::Rows(rows) => {
            if rows.len() != n {
                return Err(format!("matrix has {} rows, expected {n}", rows.len()));
            }
            rows.clone()
        }
        MatrixRepr::Flat(v) => {
            if v.len() != n * n {
                return Err(format!(
                    "flat matrix has {} entries, expected {}",
                    v.len(),
                    n * n
                ));
            }
            v.chunks(n).map(<[Rational]>::to_vec).collect()
        }
    };
    let m = RationalMatrix::from_rows(rows).map_err(|e| e.to_string())?;
    if m.ncols() != n {
        return Err(format!("matrix has {} columns, expected {n}", m.ncols()));
    }
    CoefficientMatrix::new(m).map_err(|e| e.to_string())
}

/// Parse model-file JSON text.
pub fn parse_model(text: &str, context: &str) -> Result<Model, ModelError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Json {
        context: context.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.build(context)
}

pub fn load_model_file(path: impl AsRef<Path>) -> Result<Model, ModelError> {
    let path = path.as_ref();
    let context = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: context.clone(),
        source,
    })?;
    parse_model(&text, &context)
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Zoo entry for `models` listings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZooEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
}

pub const ZOO: &[ZooEntry] = &[
    ZooEntry {
        name: "lotka_volterra",
        params: "matrix=<rows separated by ';'> (default cyclic 0,1,-1;-1,0,1;1,-1,0)",
        summary: "J^ij = a^ij x^i x^j on the positive orthant",
    },
    ZooEntry {
        name: "toda",
        params: "N=<int >= 2> (default 3)",
        summary: "Toda lattice in Flaschka variables (alpha, beta)",
    },
    ZooEntry {
        name: "relativistic_toda",
        params: "N=<int >= 2> (default 3)",
        summary: "relativistic Toda lattice, quadratic brackets",
    },
    ZooEntry {
        name: "kermack_mckendric",
        params: "r=<rational> a=<rational> (default 1, 1)",
        summary: "epidemic model, charts (x, x, 1)",
    },
    ZooEntry {
        name: "circle_map",
        params: "",
        summary: "charts x^2, A = [[0,0,-1],[0,0,-1],[1,1,0]]",
    },
    ZooEntry {
        name: "two_by_two_game",
        params: "",
        summary: "2x2 games on the open unit square, charts x(1-x)",
    },
    ZooEntry {
        name: "constant",
        params: "matrix=<rows separated by ';'> (default 0,1;-1,0)",
        summary: "constant structure matrix, charts 1",
    },
];

pub type Params = BTreeMap<String, String>;

struct ParamReader<'a> {
    params: &'a Params,
    used: Vec<&'a str>,
}

impl<'a> ParamReader<'a> {
    fn new(params: &'a Params) -> Self {
        ParamReader {
            params,
            used: Vec::new(),
        }
    }

    fn raw(&mut self, name: &'static str) -> Option<&'a str> {
        self.used.push(name);
        self.params.get(name).map(String::as_str)
    }

    fn rational(&mut self, name: &'static str, default: i64) -> Result<Rational, ModelError> {
        match self.raw(name) {
            None => Ok(Rational::from_integer(default)),
            Some(v) => v.parse().map_err(|e: LinalgError| invalid_param(name, e)),
        }
    }

    fn lattice_size(&mut self) -> Result<usize, ModelError> {
        match self.raw("N") {
            None => Ok(3),
            Some(v) => match v.trim().parse::<usize>() {
                Ok(n) if n >= 2 => Ok(n),
                _ => Err(invalid_param(
                    "N",
                    format!("expected an integer >= 2, got {v:?}"),
                )),
            },
        }
    }

    fn matrix(&mut self, default: &str) -> Result<CoefficientMatrix, ModelError> {
        let text = self.raw("matrix").unwrap_or(default);
        parse_matrix_param(text).map_err(|e| invalid_param("matrix", e))
    }

    fn finish(self) -> Result<(), ModelError> {
        match self
            .params
            .keys()
            .find(|k| !self.used.contains(&k.as_str()))
        {
            Some(k) => Err(invalid_param(k, "not a parameter of this model")),
            None => Ok(()),
        }
    }
}

fn invalid_param(name: &str, message: impl fmt::Display) -> ModelError {
    ModelError::InvalidParam {
        name: name.to_string(),
        message: message.to_string(),
    }
}

/// `"0,1,-1;-1,0,1;1,-1,0"` to a coefficient matrix.
pub fn parse_matrix_param(text: &str) -> Result<CoefficientMatrix, String> {
    let rows = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|v| v.trim().parse::<Rational>().map_err(|e| e.to_string()))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    let m = RationalMatrix::from_rows(rows).map_err(|e| e.to_string())?;
    CoefficientMatrix::new(m).map_err(|e| e.to_string())
}

fn structure(
    a: CoefficientMatrix,
    charts: Vec<ChartFunction>,
    domain: Vec<Interval>,
) -> SeparableStructure {
    SeparableStructure::new(a, charts, DomainBox::new(domain)).expect("zoo models are valid")
}

fn power1() -> ChartFunction {
    ChartFunction::power(1).expect("k = 1 is valid")
}

fn sum_of(labels: impl Iterator<Item = String>) -> String {
    labels.collect::<Vec<_>>().join(" + ")
}

/// Build a zoo model. Unknown parameters are rejected.
pub fn instantiate(name: &str, params: &Params) -> Result<Model, ModelError> {
    let mut p = ParamReader::new(params);
    let model = match name {
        "lotka_volterra" => {
            let a = p.matrix("0,1,-1;-1,0,1;1,-1,0")?;
            let n = a.dim();
            let mut x0: Vec<f64> = (1..=n).map(|i| i as f64).collect();
            if n == 3 {
                x0 = vec![1.0, 2.0, 3.0];
            }
            Model {
                name: name.into(),
                kind: ModelKind::Separable(structure(
                    a,
                    vec![power1(); n],
                    vec![Interval::POSITIVE; n],
                )),
                labels: default_labels(n),
                hamiltonian: Some(sum_of((1..=n).map(|i| format!("x{i}")))),
                initial_point: Some(x0),
                notes: Vec::new(),
            }
        }
        "toda" | "relativistic_toda" => {
            let big_n = p.lattice_size()?;
            let relativistic = name == "relativistic_toda";
            let (a, charts, domain) = if relativistic {
                relativistic_toda(big_n)
            } else {
                toda(big_n)
            };
            let n = 2 * big_n - 1;
            let alphas = (1..big_n).map(|i| format!("x{i}"));
            let betas = (big_n..=n).map(|i| format!("x{i}"));
            let hamiltonian = if relativistic {
                sum_of((1..=n).map(|i| format!("x{i}")))
            } else {
                format!(
                    "{} + {}",
                    sum_of(betas.map(|b| format!("{b}^2/2"))),
                    sum_of(alphas)
                )
            };
            let mut x0 = vec![1.0; big_n - 1];
            if relativistic {
                x0.extend((0..big_n).map(|j| 1.0 + 0.25 * j as f64));
            } else {
                x0.extend((0..big_n).map(|j| 0.5 - 0.25 * j as f64));
            }
            let mut labels: Vec<String> = (1..big_n).map(|i| format!("alpha{i}")).collect();
            labels.extend((1..=big_n).map(|j| format!("beta{j}")));
            let notes = if relativistic {
                vec!["domain (0, inf) for every alpha and beta: the bracket has the quadratic form x^i x^j".into()]
            } else {
                vec!["alpha domain (0, inf) since Flaschka alphas are exponentials; beta domain is the real line".into()]
            };
            Model {
                name: name.into(),
                kind: ModelKind::Separable(structure(a, charts, domain)),
                labels,
                hamiltonian: Some(hamiltonian),
                initial_point: Some(x0),
                notes,
            }
        }
        "kermack_mckendric" => {
            let r = p.rational("r", 1)?;
            let a = p.rational("a", 1)?;
            let z = Rational::zero;
            let upper = [-r, z(), -a];
            let a = CoefficientMatrix::from_upper(3, &upper).expect("3x3 upper triangle");
            let charts = vec![power1(), power1(), ChartFunction::unit()];
            Model {
                name: name.into(),
                kind: ModelKind::Separable(structure(a, charts, vec![Interval::POSITIVE; 3])),
                labels: default_labels(3),
                hamiltonian: Some("x1 + x2 + x3".into()),
                initial_point: Some(vec![0.9, 0.1, 0.5]),
                notes: vec!["domain (0, inf)^3 (populations are positive)".into()],
            }
        }
        "circle_map" => {
            let a = CoefficientMatrix::from_i64_rows(&[&[0, 0, -1], &[0, 0, -1], &[1, 1, 0]])
                .expect("skew");
            let charts = vec![ChartFunction::power(2).expect("k = 2 is valid"); 3];
            Model {
                name: name.into(),
                kind: ModelKind::Separable(structure(a, charts, vec![Interval::POSITIVE; 3])),
                labels: default_labels(3),
                hamiltonian: Some("(2 - 1/x1)^2 + (2 - 1/x3)^2".into()),
                initial_point: Some(vec![1.0, 1.0, 1.0]),
                notes: vec![
                    "domain (0, inf)^3, one of the components where x^2 has no zeros".into(),
                ],
            }
        }
        "two_by_two_game" => {
            let a = CoefficientMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]).expect("skew");
            Model {
                name: name.into(),
                kind: ModelKind::Separable(structure(
                    a,
                    vec![ChartFunction::logistic(); 2],
                    vec![Interval::UNIT; 2],
                )),
                labels: default_labels(2),
                hamiltonian: Some("-ln(x1) - ln(1 - x1) - ln(x2) - ln(1 - x2)".into()),
                initial_point: Some(vec![0.3, 0.6]),
                notes: Vec::new(),
            }
        }
        "constant" => {
            let a = p.matrix("0,1;-1,0")?;
            let n = a.dim();
            Model {
                name: name.into(),
                kind: ModelKind::Separable(structure(
                    a,
                    vec![ChartFunction::unit(); n],
                    vec![Interval::REAL_LINE; n],
                )),
                labels: default_labels(n),
                hamiltonian: Some(format!(
                    "({})/2",
                    sum_of((1..=n).map(|i| format!("x{i}^2")))
                )),
                initial_point: Some((0..n).map(|i| if i == 0 { 1.0 } else { 0.5 }).collect()),
                notes: Vec::new(),
            }
        }
        other => return Err(ModelError::UnknownModel(other.to_string())),
    };
    p.finish()?;
    Ok(model)
}

/// `(alpha1..alpha(N-1), beta1..betaN)` with `{alpha^i, beta^i} = -alpha^i`,
/// `{alpha^i, beta^(i+1)} = alpha^i`.
fn toda(big_n: usize) -> (CoefficientMatrix, Vec<ChartFunction>, Vec<Interval>) {
    let n = 2 * big_n - 1;
    let mut a = RationalMatrix::zeros(n, n);
    let beta = |j: usize| big_n - 1 + j;
    for i in 0..big_n - 1 {
        set_skew(&mut a, i, beta(i), -1);
        set_skew(&mut a, i, beta(i + 1), 1);
    }
    let mut charts = vec![power1(); big_n - 1];
    charts.extend(vec![ChartFunction::unit(); big_n]);
    let mut domain = vec![Interval::POSITIVE; big_n - 1];
    domain.extend(vec![Interval::REAL_LINE; big_n]);
    (
        CoefficientMatrix::new(a).expect("skew by construction"),
        charts,
        domain,
    )
}

/// Brackets `{alpha^i, alpha^(i+1)} = alpha^i alpha^(i+1)`,
/// `{alpha^i, beta^i} = -alpha^i beta^i`, `{alpha^i, beta^(i+1)} = alpha^i beta^(i+1)`.
fn relativistic_toda(big_n: usize) -> (CoefficientMatrix, Vec<ChartFunction>, Vec<Interval>) {
    let n = 2 * big_n - 1;
    let mut a = RationalMatrix::zeros(n, n);
    let beta = |j: usize| big_n - 1 + j;
    for i in 0..big_n - 1 {
        if i + 1 < big_n - 1 {
            set_skew(&mut a, i, i + 1, 1);
        }
        set_skew(&mut a, i, beta(i), -1);
        set_skew(&mut a, i, beta(i + 1), 1);
    }
    (
        CoefficientMatrix::new(a).expect("skew by construction"),
        vec![power1(); n],
        vec![Interval::POSITIVE; n],
    )
}

fn set_skew(a: &mut RationalMatrix, i: usize, j: usize, v: i64) {
    a[(i, j)] = Rational::from_integer(v);
    a[(j, i)] = Rational::from_integer(-v);
}

/// Every zoo model with default parameters, plus Toda chains of several sizes.
pub fn zoo_models() -> Vec<Model> {
    let none = Params::new();
    let mut out: Vec<Model> = ZOO
        .iter()
        .map(|e| instantiate(e.name, &none).expect("defaults are valid"))
        .collect();
    for big_n in [2, 4] {
        let params: Params = [("N".to_string(), big_n.to_string())].into_iter().collect();
        out.push(instantiate("toda", &params).expect("valid N"));
        out.push(instantiate("relativistic_toda", &params).expect("valid N"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casimir::CasimirSet;

    fn params(kv: &[(&str, &str)]) -> Params {
        kv.iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    fn sep(m: &Model) -> &SeparableStructure {
        m.structure().unwrap()
    }

    #[test]
    fn toda_three_block_form() {
        let m = instantiate("toda", &params(&[("N", "3")])).unwrap();
        let a = sep(&m).coefficients().as_matrix();
        assert_eq!(sep(&m).dim(), 5);
        let block: Vec<Vec<i64>> = (0..2)
            .map(|i| (2..5).map(|j| a[(i, j)].to_i64().unwrap()).collect())
            .collect();
        assert_eq!(block, vec![vec![-1, 1, 0], vec![0, -1, 1]]);
        assert_eq!(m.labels[0], "alpha1");
        assert_eq!(m.labels[4], "beta3");
    }

    #[test]
    fn toda_casimir_is_sum_of_betas() {
        for big_n in 2..=6 {
            let m = instantiate("toda", &params(&[("N", &big_n.to_string())])).unwrap();
            let set = CasimirSet::new(sep(&m));
            assert_eq!(set.len(), 1);
            let k: Vec<i64> = set.functions()[0]
                .coefficients()
                .iter()
                .map(|v| v.to_i64().unwrap())
                .collect();
            let mut expected = vec![0; big_n - 1];
            expected.extend(vec![1; big_n]);
            assert_eq!(k, expected);
        }
    }

    #[test]
    fn kermack_mckendric_entries() {
        let m = instantiate("kermack_mckendric", &params(&[("r", "1"), ("a", "1")])).unwrap();
        let j = sep(&m).matrix(&[2.0, 3.0, 5.0]).unwrap();
        assert_eq!(j[(0, 1)], -6.0);
        assert_eq!(j[(1, 2)], -3.0);
        let m = instantiate("kermack_mckendric", &params(&[("r", "2"), ("a", "1/2")])).unwrap();
        assert_eq!(sep(&m).matrix(&[1.0, 1.0, 1.0]).unwrap()[(1, 2)], -0.5);
    }

    #[test]
    fn game_entry() {
        let m = instantiate("two_by_two_game", &Params::new()).unwrap();
        let (x1, x2) = (0.2, 0.7);
        let j = sep(&m).matrix(&[x1, x2]).unwrap();
        assert!((j[(0, 1)] - x1 * (1.0 - x1) * x2 * (1.0 - x2)).abs() < 1e-16);
        assert!(CasimirSet::new(sep(&m)).is_empty());
    }

    #[test]
    fn relativistic_toda_has_log_casimirs() {
        let m = instantiate("relativistic_toda", &params(&[("N", "3")])).unwrap();
        let set = CasimirSet::new(sep(&m));
        assert_eq!(set.len(), 5 - sep(&m).rank());
        for c in set.iter() {
            let text = c.to_string();
            assert!(
                text.split(['+', '-'])
                    .filter(|t| !t.trim().is_empty())
                    .all(|t| t.contains("ln(x")),
                "{text}"
            );
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            instantiate("toda", &params(&[("N", "1")])),
            Err(ModelError::InvalidParam { .. })
        ));
        assert!(matches!(
            instantiate("toda", &params(&[("M", "3")])),
            Err(ModelError::InvalidParam { .. })
        ));
        assert!(matches!(
            instantiate("nope", &Params::new()),
            Err(ModelError::UnknownModel(_))
        ));
        let err = instantiate("lotka_volterra", &params(&[("matrix", "0,1;1,0")])).unwrap_err();
        assert!(err.to_string().contains("(1, 2)"), "{err}");
        let m = instantiate("lotka_volterra", &params(&[("matrix", "0,1/2;-1/2,0")])).unwrap();
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn zoo_round_trip() {
        for m in zoo_models() {
            let text = m.to_json();
            let back = parse_model(&text, "round-trip").unwrap();
            assert_eq!(back.kind, m.kind, "{}", m.name);
            assert_eq!(back.hamiltonian, m.hamiltonian);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn file_matches_builder() {
        let text = r#"{
            "dimension": 3,
            "matrix": ["0", "1", "-1", "-1", "0", "1", "1", "-1", "0"],
            "charts": [{"family": "power", "k": 1}, {"family": "power", "k": 1}, {"family": "power", "k": 1}],
            "domain": [[0, "inf"], [0, "inf"], [0, "inf"]]
        }"#;
        let file = parse_model(text, "lv.json").unwrap();
        let zoo = instantiate("lotka_volterra", &Params::new()).unwrap();
        assert_eq!(file.kind, zoo.kind);
    }

    #[test]
    fn file_errors() {
        let non_skew = r#"{"dimension": 2, "matrix": [["0", "1"], ["1", "0"]],
            "charts": [{"family": "constant", "c": 1}, {"family": "constant", "c": 1}]}"#;
        let err = parse_model(non_skew, "m.json").unwrap_err();
        assert!(!err.is_usage());
        assert!(err.to_string().starts_with("m.json: "), "{err}");
        assert!(err.to_string().contains("(1, 2)"), "{err}");

        let closed = r#"{"dimension": 1, "matrix": [["0"]], "charts": [{"family": "logistic"}], "domain": ["[0, 1]"]}"#;
        let err = parse_model(closed, "g.json").unwrap_err();
        assert!(err.to_string().contains("open"), "{err}");

        let outside = r#"{"dimension": 1, "matrix": [["0"]], "charts": [{"family": "logistic"}], "domain": [[0, 2]]}"#;
        assert!(!parse_model(outside, "g.json").unwrap_err().is_usage());

        let err = parse_model("{\"dimension\": 2,\n \"matrix\": [", "bad.json").unwrap_err();
        assert!(matches!(err, ModelError::Json { line: 2, .. }), "{err}");
        assert!(parse_model(r#"{"dimension": 2, "colour": 1}"#, "x")
            .unwrap_err()
            .is_usage());
    }

    #[test]
    fn field_models() {
        let text = r#"{"dimension": 3, "field": {"1,2": "x3", "1,3": "x2", "2,3": "x3"}}"#;
        let m = parse_model(text, "f.json").unwrap();
        assert!(m.structure().is_none());
        let back = parse_model(&m.to_json(), "f.json").unwrap();
        assert_eq!(back.kind, m.kind);
        assert!(parse_model(r#"{"dimension": 3, "field": {"2,1": "x3"}}"#, "f").is_err());
    }

    #[test]
    fn sample_points_are_inside() {
        for m in zoo_models() {
            let x0 = m.initial_point.as_ref().unwrap();
            assert!(m.domain().contains(x0), "{}", m.name);
            let h = expr::parse(m.hamiltonian.as_ref().unwrap(), m.dim()).unwrap();
            assert!(h.evaluate(x0).unwrap().is_finite());
        }
    }
}

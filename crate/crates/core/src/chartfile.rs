//! The chart file format.
//!
//! ```toml
//! [field]
//! kind = "Q"            # or "Fp" together with p = 7
//!
//! [chart]
//! coordinates = ["l"]
//! rank = 2              # optional consistency check
//! weight = 1            # optional consistency check
//! hodge_numbers = [1, 1]
//! basepoint = ["2"]     # optional
//!
//! [connection]          # c.i.j.l is the entry c_{ij,l}; absent entries are 0
//! c.1.2.1 = "1/(4*l^2-4*l)"
//!
//! [polarization]
//! matrix = [[0, 1], [-1, 0]]
//!
//! [[flat_tensor]]
//! a = 1
//! b = 1
//! coefficients = [1, 0, 0, -1]
//! set = "torus"         # optional grouping
//!
//! [conjugate]           # optional; leading columns span F_c^k
//! matrix = [[0, 1], [1, 0]]
//!
//! [[frobenius]]         # a single [frobenius] table is also accepted
//! label = "good"
//! p = 5
//! precision = 2
//! matrix = [[1, 0], [0, 5]]
//! hodge_numbers = [1, 1]  # defaults to the chart's
//! eigenvector = [0, 1]    # optional, checked at power w/2
//!
//! [criteria]
//! dim_s = 1
//! d = [1]
//! ax_schanuel = [[3, 2, 2]]
//! ```
//!
//! Scalars are integers or strings holding exact rationals; connection and
//! tensor entries are rational expressions in the coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use toml::{Table, Value};

use crate::algebra::{
    parse_rational, parse_rational_function, Matrix, RationalFunction, Rationals,
};
use crate::arithmetic::FrobeniusModule;
use crate::connection::{ConnectionChart, FlatTensor};
use crate::error::{Error, Result};
use crate::flags::TensorIndex;
use crate::jets::FlagShape;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

#[derive(Clone, Debug)]
pub struct FrobeniusSpec {
    pub label: String,
    pub module: FrobeniusModule,
    pub eigenvector: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, Default)]
pub struct CriteriaSpec {
    pub dim_s: Option<usize>,
    pub d: Vec<usize>,
    pub ax_schanuel: Vec<[usize; 3]>,
}

#[derive(Clone, Debug)]
pub struct ChartFile {
    pub field: FieldKind,
    pub chart: Option<ConnectionChart<Rationals>>,
    pub basepoint: Option<Vec<BigRational>>,
    pub conjugate: Option<Matrix<BigRational>>,
    pub frobenius: Vec<FrobeniusSpec>,
    pub criteria: CriteriaSpec,
}

impl ChartFile {
    pub fn require_chart(&self) -> Result<&ConnectionChart<Rationals>> {
        self.chart
            .as_ref()
            .ok_or_else(|| Error::Parse("line 1, field `chart`: missing section [chart]".into()))
    }
}

/// Finds source lines for diagnostics.
struct Locator<'a> {
    lines: Vec<&'a str>,
}

impl<'a> Locator<'a> {
    fn new(text: &'a str) -> Self {
        Locator {
            lines: text.lines().collect(),
        }
    }

    fn header(line: &str) -> Option<(&str, bool)> {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("[[") {
            return rest.split("]]").next().map(|s| (s.trim(), true));
        }
        if let Some(rest) = t.strip_prefix('[') {
            return rest.split(']').next().map(|s| (s.trim(), false));
        }
        None
    }

    /// 1-based line of `key` inside `section` (the `index`-th occurrence for
    /// arrays of tables), falling back to the section header.
    fn line(&self, section: &str, index: usize, key: Option<&str>) -> usize {
        let mut current: Option<&str> = None;
        let mut seen = 0usize;
        let mut header_line = None;
        for (k, line) in self.lines.iter().enumerate() {
            if let Some((name, _)) = Self::header(line) {
                current = Some(name);
                if name == section {
                    seen += 1;
                    if seen == index + 1 {
                        header_line = Some(k + 1);
                    }
                }
                continue;
            }
            if current == Some(section) && seen == index + 1 {
                if let Some(key) = key {
                    let t = line.trim_start();
                    let quoted = format!("\"{key}\"");
                    for candidate in [key, quoted.as_str()] {
                        if let Some(rest) = t.strip_prefix(candidate) {
                            if rest.trim_start().starts_with('=') {
                                return k + 1;
                            }
                        }
                    }
                }
            }
        }
        header_line.unwrap_or(1)
    }
}

struct Ctx<'a> {
    loc: Locator<'a>,
}

impl Ctx<'_> {
    fn err(
        &self,
        section: &str,
        index: usize,
        key: Option<&str>,
        msg: impl std::fmt::Display,
    ) -> Error {
        let line = self.loc.line(section, index, key);
        let field = match key {
            Some(k) => format!("{section}.{k}"),
            None => section.to_string(),
        };
        Error::Parse(format!("line {line}, field `{field}`: {msg}"))
    }
}

fn get<'t>(t: &'t Table, key: &str) -> Option<&'t Value> {
    t.get(key)
}

fn as_usize(v: &Value) -> Option<usize> {
    v.as_integer().and_then(|x| usize::try_from(x).ok())
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Integer(i) => Some(i.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Parses a TOML chart file, reporting the offending line and field on error.
pub fn parse_chart_file(text: &str) -> Result<ChartFile> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Parse(toml_message(text, &e)))?;
    let cx = Ctx {
        loc: Locator::new(text),
    };

    let field = match root.get("field") {
        None => FieldKind::Rationals,
        Some(Value::Table(t)) => {
            let kind = get(t, "kind").and_then(Value::as_str).unwrap_or("Q");
            match kind {
                "Q" | "QQ" | "rationals" => FieldKind::Rationals,
                "Fp" | "GF" | "prime" => {
                    let p = get(t, "p")
                        .and_then(Value::as_integer)
                        .and_then(|p| u64::try_from(p).ok())
                        .ok_or_else(|| cx.err("field", 0, Some("p"), "expected a prime"))?;
                    crate::algebra::PrimeField::new(p)
                        .map_err(|e| cx.err("field", 0, Some("p"), e))?;
                    FieldKind::Prime(p)
                }
                other => {
                    return Err(cx.err(
                        "field",
                        0,
                        Some("kind"),
                        format!("unknown field kind '{other}'"),
                    ))
                }
            }
        }
        Some(_) => return Err(cx.err("field", 0, None, "expected a table")),
    };

    let mut shape_from_chart = None;
    let mut chart = None;
    let mut basepoint = None;
    if let Some(v) = root.get("chart") {
        let t = v
            .as_table()
            .ok_or_else(|| cx.err("chart", 0, None, "expected a table"))?;
        let coords: Vec<String> = match get(t, "coordinates") {
            None => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_str().map(str::to_string))
                .collect::<Option<_>>()
                .ok_or_else(|| cx.err("chart", 0, Some("coordinates"), "expected strings"))?,
            Some(_) => return Err(cx.err("chart", 0, Some("coordinates"), "expected an array")),
        };
        let hodge: Vec<usize> = get(t, "hodge_numbers")
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(as_usize).collect::<Option<_>>())
            .ok_or_else(|| {
                cx.err(
                    "chart",
                    0,
                    Some("hodge_numbers"),
                    "expected non-negative integers",
                )
            })?;
        let shape =
            FlagShape::new(hodge).map_err(|e| cx.err("chart", 0, Some("hodge_numbers"), e))?;
        if let Some(r) = get(t, "rank") {
            if as_usize(r) != Some(shape.rank()) {
                return Err(cx.err(
                    "chart",
                    0,
                    Some("rank"),
                    format!(
                        "rank does not match the Hodge numbers (sum {})",
                        shape.rank()
                    ),
                ));
            }
        }
        if let Some(w) = get(t, "weight") {
            if as_usize(w) != Some(shape.weight() as usize) {
                return Err(cx.err(
                    "chart",
                    0,
                    Some("weight"),
                    format!(
                        "weight does not match the Hodge numbers ({} entries)",
                        shape.weight() + 1
                    ),
                ));
            }
        }
        if let Some(bp) = get(t, "basepoint") {
            let a = bp
                .as_array()
                .ok_or_else(|| cx.err("chart", 0, Some("basepoint"), "expected an array"))?;
            if a.len() != coords.len() {
                return Err(cx.err(
                    "chart",
                    0,
                    Some("basepoint"),
                    format!("{} values for {} coordinates", a.len(), coords.len()),
                ));
            }
            basepoint = Some(
                a.iter()
                    .map(|x| {
                        scalar_text(x)
                            .ok_or_else(|| Error::Parse("expected a number".into()))
                            .and_then(|s| parse_rational(&s))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| cx.err("chart", 0, Some("basepoint"), strip(e)))?,
            );
        }
        let n = coords.len();
        let m = shape.rank();
        let mut connection = vec![Matrix::filled(m, m, RationalFunction::zero(&Rationals, n)); n];
        if let Some(v) = root.get("connection") {
            let ct = v
                .as_table()
                .ok_or_else(|| cx.err("connection", 0, None, "expected a table"))?;
            let mut flat = Vec::new();
            flatten("", ct, &mut flat);
            for (key, value) in flat {
                let parts: Vec<&str> = key.split('.').collect();
                let idx: Option<Vec<usize>> = if parts.len() == 4 && parts[0] == "c" {
                    parts[1..].iter().map(|p| p.parse().ok()).collect()
                } else {
                    None
                };
                let idx = idx.ok_or_else(|| {
                    cx.err(
                        "connection",
                        0,
                        Some(&key),
                        "expected a key of the form c.i.j.l",
                    )
                })?;
                let (i, j, l) = (idx[0], idx[1], idx[2]);
                if i == 0 || j == 0 || l == 0 || i > m || j > m || l > n {
                    return Err(cx.err(
                        "connection",
                        0,
                        Some(&key),
                        format!("index out of range for rank {m} with {n} coordinates"),
                    ));
                }
                let text = scalar_text(value).ok_or_else(|| {
                    cx.err("connection", 0, Some(&key), "expected a string or integer")
                })?;
                let f = parse_rational_function(&text, &coords)
                    .map_err(|e| cx.err("connection", 0, Some(&key), strip(e)))?;
                connection[l - 1].set(i - 1, j - 1, f);
            }
        }
        let mut c = ConnectionChart::new(Rationals, coords.clone(), shape.clone(), connection)
            .map_err(|e| cx.err("chart", 0, None, e))?;
        if let Some(v) = root.get("polarization") {
            let q = matrix_field(&cx, v, "polarization", 0, m)?;
            c = c
                .with_polarization(q)
                .map_err(|e| cx.err("polarization", 0, None, e))?;
        }
        if let Some(v) = root.get("flat_tensor") {
            let tables = tables_of(v);
            for (k, t) in tables.iter().enumerate() {
                let a = get(t, "a").and_then(as_usize).unwrap_or(0);
                let b = get(t, "b").and_then(as_usize).unwrap_or(0);
                let index = TensorIndex::new(a, b);
                let coeffs = get(t, "coefficients")
                    .and_then(Value::as_array)
                    .ok_or_else(|| {
                        cx.err("flat_tensor", k, Some("coefficients"), "expected an array")
                    })?
                    .iter()
                    .map(|x| {
                        scalar_text(x)
                            .ok_or_else(|| Error::Parse("expected a string or integer".into()))
                            .and_then(|s| parse_rational_function(&s, &coords))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| cx.err("flat_tensor", k, Some("coefficients"), strip(e)))?;
                let set = get(t, "set").and_then(Value::as_str).map(str::to_string);
                c = c
                    .with_flat_tensor(FlatTensor { index, coeffs, set })
                    .map_err(|e| cx.err("flat_tensor", k, Some("coefficients"), e))?;
            }
        }
        shape_from_chart = Some(shape);
        chart = Some(c);
    }

    let conjugate = match root.get("conjugate") {
        Some(v) => {
            let m = shape_from_chart
                .as_ref()
                .map(FlagShape::rank)
                .ok_or_else(|| cx.err("conjugate", 0, None, "requires a [chart] section"))?;
            Some(matrix_field(&cx, v, "conjugate", 0, m)?)
        }
        None => None,
    };

    let mut frobenius = Vec::new();
    if let Some(v) = root.get("frobenius") {
        for (k, t) in tables_of(v).iter().enumerate() {
            let num = |key: &str| -> Result<u64> {
                get(t, key)
                    .and_then(Value::as_integer)
                    .and_then(|x| u64::try_from(x).ok())
                    .ok_or_else(|| {
                        cx.err("frobenius", k, Some(key), "expected a non-negative integer")
                    })
            };
            let p = num("p")?;
            let precision = u32::try_from(num("precision")?)
                .map_err(|_| cx.err("frobenius", k, Some("precision"), "too large"))?;
            let shape = match get(t, "hodge_numbers") {
                Some(h) => {
                    let h: Vec<usize> = h
                        .as_array()
                        .and_then(|a| a.iter().map(as_usize).collect::<Option<_>>())
                        .ok_or_else(|| {
                            cx.err(
                                "frobenius",
                                k,
                                Some("hodge_numbers"),
                                "expected non-negative integers",
                            )
                        })?;
                    FlagShape::new(h)
                        .map_err(|e| cx.err("frobenius", k, Some("hodge_numbers"), e))?
                }
                None => shape_from_chart.clone().ok_or_else(|| {
                    cx.err(
                        "frobenius",
                        k,
                        Some("hodge_numbers"),
                        "required without a [chart] section",
                    )
                })?,
            };
            let rows = integer_matrix(&cx, t, k, shape.rank())?;
            let module = FrobeniusModule::new(p, precision, rows, shape)
                .map_err(|e| cx.err("frobenius", k, Some("p"), e))?;
            let eigenvector = match get(t, "eigenvector") {
                None => None,
                Some(v) => Some(
                    v.as_array()
                        .and_then(|a| {
                            a.iter()
                                .map(|x| x.as_integer().map(BigInt::from))
                                .collect::<Option<Vec<_>>>()
                        })
                        .ok_or_else(|| {
                            cx.err("frobenius", k, Some("eigenvector"), "expected integers")
                        })?,
                ),
            };
            let label = get(t, "label")
                .and_then(Value::as_str)
                .map_or_else(|| (k + 1).to_string(), str::to_string);
            frobenius.push(FrobeniusSpec {
                label,
                module,
                eigenvector,
            });
        }
    }

    let mut criteria = CriteriaSpec::default();
    if let Some(v) = root.get("criteria") {
        let t = v
            .as_table()
            .ok_or_else(|| cx.err("criteria", 0, None, "expected a table"))?;
        if let Some(x) = get(t, "dim_s") {
            criteria.dim_s = Some(
                as_usize(x)
                    .ok_or_else(|| cx.err("criteria", 0, Some("dim_s"), "expected an integer"))?,
            );
        }
        if let Some(x) = get(t, "d") {
            criteria.d = x
                .as_array()
                .and_then(|a| a.iter().map(as_usize).collect::<Option<_>>())
                .ok_or_else(|| {
                    cx.err("criteria", 0, Some("d"), "expected non-negative integers")
                })?;
        }
        if let Some(x) = get(t, "ax_schanuel") {
            criteria.ax_schanuel = x
                .as_array()
                .and_then(|a| {
                    a.iter()
                        .map(|row| {
                            let r: Vec<usize> = row
                                .as_array()?
                                .iter()
                                .map(as_usize)
                                .collect::<Option<_>>()?;
                            <[usize; 3]>::try_from(r).ok()
                        })
                        .collect::<Option<_>>()
                })
                .ok_or_else(|| {
                    cx.err(
                        "criteria",
                        0,
                        Some("ax_schanuel"),
                        "expected triples of non-negative integers",
                    )
                })?;
        }
    }

    Ok(ChartFile {
        field,
        chart,
        basepoint,
        conjugate,
        frobenius,
        criteria,
    })
}

fn strip(e: Error) -> String {
    match e {
        Error::Parse(s) => s,
        other => other.to_string(),
    }
}

fn toml_message(text: &str, e: &toml::de::Error) -> String {
    let msg = e.message().trim().to_string();
    match e.span() {
        Some(span) => {
            let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
            format!("line {line}: {msg}")
        }
        None => msg,
    }
}

fn flatten<'t>(prefix: &str, t: &'t Table, out: &mut Vec<(String, &'t Value)>) {
    for (k, v) in t {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(inner) => flatten(&key, inner, out),
            other => out.push((key, other)),
        }
    }
}

fn tables_of(v: &Value) -> Vec<Table> {
    match v {
        Value::Table(t) => vec![t.clone()],
        Value::Array(a) => a.iter().filter_map(|x| x.as_table().cloned()).collect(),
        _ => Vec::new(),
    }
}

fn matrix_field(
    cx: &Ctx,
    v: &Value,
    section: &str,
    index: usize,
    m: usize,
) -> Result<Matrix<BigRational>> {
    let t = v
        .as_table()
        .ok_or_else(|| cx.err(section, index, None, "expected a table"))?;
    let rows = get(t, "matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| cx.err(section, index, Some("matrix"), "expected an array of rows"))?;
    let parsed: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("expected a row array".into()))?
                .iter()
                .map(|x| {
                    scalar_text(x)
                        .ok_or_else(|| Error::Parse("expected a number".into()))
                        .and_then(|s| parse_rational(&s))
                })
                .collect()
        })
        .collect::<Result<_>>()
        .map_err(|e| cx.err(section, index, Some("matrix"), strip(e)))?;
    if parsed.len() != m || parsed.iter().any(|r| r.len() != m) {
        return Err(cx.err(
            section,
            index,
            Some("matrix"),
            format!("expected a {m}x{m} matrix"),
        ));
    }
    Matrix::from_rows(parsed).map_err(|e| cx.err(section, index, Some("matrix"), e))
}

fn integer_matrix(cx: &Ctx, t: &Table, index: usize, m: usize) -> Result<Matrix<BigInt>> {
    let rows = get(t, "matrix").and_then(Value::as_array).ok_or_else(|| {
        cx.err(
            "frobenius",
            index,
            Some("matrix"),
            "expected an array of rows",
        )
    })?;
    let parsed: Option<Vec<Vec<BigInt>>> = rows
        .iter()
        .map(|row| {
            row.as_array()?
                .iter()
                .map(|x| match x {
                    Value::Integer(i) => Some(BigInt::from(*i)),
                    Value::String(s) => s.trim().parse().ok(),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let parsed = parsed.ok_or_else(|| {
        cx.err(
            "frobenius",
            index,
            Some("matrix"),
            "expected integer entries",
        )
    })?;
    if parsed.len() != m || parsed.iter().any(|r| r.len() != m) {
        return Err(cx.err(
            "frobenius",
            index,
            Some("matrix"),
            format!("expected a {m}x{m} matrix"),
        ));
    }
    Matrix::from_rows(parsed).map_err(|e| cx.err("frobenius", index, Some("matrix"), e))
}

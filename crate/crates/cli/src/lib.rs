//! The `perjet` command line.
//!
//! Exit codes: 0 on success, 1 when a check finds the hypothesis violated
//! (not flat, not ordinary, not exceptional), 2 on input errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use perjet_core::analysis::{eigvec_text, matrix_value, render, subspace_value, vector_value};
use perjet_core::{
    ax_schanuel_gap, curvature_is_flat, eval_eta, exceptionality_predicate, frobenius_eigvec_check,
    hypothesis_report, is_ordinary, jet_classify, mazur_filtrations, parse_chart_file,
    parse_rational, parse_rational_function, reduce_chart_mod_p, solve_limp, verify_flat_frame,
    ChartFile, ConnectionChart, Constancy, CriteriaInput, Curvature, Degeneracy, Error, Field,
    FieldKind, FrameAssignment, Jet, Matrix, PrimeField, Rationals, Report, Ring, TruncatedSeries,
    WeilAlgebra,
};
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(
    name = "perjet",
    version,
    about = "Exact jets of period maps and Hodge-theoretic checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Chart file (TOML).
    pub file: String,
    /// Reduce the chart modulo this prime first.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    /// Basepoint, e.g. `λ=2` or `1/2,3`.
    #[arg(long)]
    pub point: Option<String>,
    /// Initial frame: `identity` or rows such as `[[1,0],[0,1]]`.
    #[arg(long, default_value = "identity")]
    pub frame: String,
    /// Truncation order.
    #[arg(long)]
    pub order: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Test the connection for flatness.
    CheckFlat {
        #[command(flatten)]
        common: Common,
    },
    /// Taylor coefficients of the flat frame at a point.
    SolveLimp {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: PointArgs,
    },
    /// The flag jet of a jet, as a coefficient table.
    EvalJet {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: PointArgs,
        /// Jet coordinates as polynomials in t (or t1..td), comma separated.
        #[arg(long)]
        jet: String,
    },
    /// Flags, polarization, adjoint Hodge numbers and stabilizers at the basepoint.
    FlagAnalyze {
        #[command(flatten)]
        common: Common,
    },
    /// Hodge and conjugate filtrations of each Frobenius matrix.
    Mazur {
        #[command(flatten)]
        common: Common,
    },
    /// Ordinariness of each Frobenius matrix.
    Ordinary {
        #[command(flatten)]
        common: Common,
    },
    /// The exceptionality inequality, optionally with an Ax-Schanuel triple.
    Criteria {
        /// Period dimension of the ambient form.
        #[arg(long)]
        pbar: usize,
        /// Dimension of the positive part of the stabilizer grading.
        #[arg(long)]
        e: usize,
        /// Dimension of the base.
        #[arg(long = "dim-s")]
        dim_s: usize,
        /// Jet dimension.
        #[arg(long)]
        d: usize,
        /// `codim_U,codim_T,codim_graph`.
        #[arg(long)]
        codim: Option<String>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// The full hypothesis report.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

/// Failure of a command: a mathematical verdict (1) or an input error (2).
#[derive(Debug)]
pub enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(Report, i32), Failure>;

/// Runs the command line with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let json = match &cli.command {
        Command::Criteria { json, .. } => *json,
        Command::CheckFlat { common }
        | Command::SolveLimp { common, .. }
        | Command::EvalJet { common, .. }
        | Command::FlagAnalyze { common }
        | Command::Mazur { common }
        | Command::Ordinary { common }
        | Command::Report { common } => common.json,
    };
    match dispatch(&cli.command) {
        Ok((report, code)) => {
            let text = if json {
                let mut s = serde_json::to_string_pretty(&report.to_json()).unwrap();
                s.push('\n');
                s
            } else {
                report.to_text()
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::CheckFlat { common } => check_flat(common),
        Command::SolveLimp { common, point } => solve(common, point),
        Command::EvalJet { common, point, jet } => eval_jet(common, point, jet),
        Command::FlagAnalyze { common } => flag_analyze(common),
        Command::Mazur { common } => mazur(common),
        Command::Ordinary { common } => ordinary(common),
        Command::Criteria {
            pbar,
            e,
            dim_s,
            d,
            codim,
            ..
        } => criteria(*pbar, *e, *dim_s, *d, codim.as_deref()),
        Command::Report { common } => {
            let file = load(&common.file)?;
            Ok((hypothesis_report(&file, common.prime), 0))
        }
    }
}

fn load(path: &str) -> Result<ChartFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))?;
    parse_chart_file(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn effective_prime(file: &ChartFile, prime: Option<u64>) -> Option<u64> {
    prime.or(match file.field {
        FieldKind::Prime(p) => Some(p),
        FieldKind::Rationals => None,
    })
}

/// Runs `body` over `ℚ` or over `𝔽_p`, as requested.
macro_rules! with_field {
    ($file:expr, $prime:expr, |$chart:ident, $field:ident| $body:expr) => {{
        let chart_q = $file.require_chart()?;
        match effective_prime($file, $prime) {
            None => {
                let $chart = chart_q.clone();
                let $field = Rationals;
                $body
            }
            Some(p) => {
                let $chart = reduce_chart_mod_p(chart_q, p)?;
                let $field = PrimeField::new(p)?;
                $body
            }
        }
    }};
}

fn check_flat(common: &Common) -> Outcome {
    let file = load(&common.file)?;
    with_field!(&file, common.prime, |chart, _field| {
        let mut m = Map::new();
        let code = match curvature_is_flat(&chart) {
            Curvature::Flat => {
                m.insert("verdict".into(), json!("flat"));
                0
            }
            Curvature::Witness {
                l1,
                l2,
                row,
                col,
                value,
            } => {
                m.insert("verdict".into(), json!("not flat"));
                m.insert("coordinates".into(), json!([l1 + 1, l2 + 1]));
                m.insert("entry".into(), json!([row + 1, col + 1]));
                m.insert("value".into(), json!(value.format_with(chart.coords())));
                1
            }
        };
        let mut r = Report::default();
        r.push("flatness", m);
        Ok((r, code))
    })
}

fn scalars<F: Field>(field: &F, values: &[BigRational]) -> Result<Vec<F::Elem>, Failure> {
    values
        .iter()
        .map(|x| field.from_rational(x).map_err(Failure::from))
        .collect()
}

/// `λ=2,μ=1/3` or `2,1/3`, in chart-coordinate order.
fn parse_point(text: &str, coords: &[String]) -> Result<Vec<BigRational>, Failure> {
    let parts: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let mut out: Vec<Option<BigRational>> = vec![None; coords.len()];
    for (k, part) in parts.iter().enumerate() {
        let (slot, value) = match part.split_once('=') {
            Some((name, v)) => {
                let i = coords
                    .iter()
                    .position(|c| c == name.trim())
                    .ok_or_else(|| {
                        Failure::Input(format!("--point: unknown coordinate '{}'", name.trim()))
                    })?;
                (i, v.trim())
            }
            None => (k, *part),
        };
        if slot >= coords.len() {
            return Err(Failure::Input(format!(
                "--point: {} values for {} coordinates",
                parts.len(),
                coords.len()
            )));
        }
        out[slot] =
            Some(parse_rational(value).map_err(|e| Failure::Input(format!("--point: {e}")))?);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Failure::Input(format!("--point: no value for '{}'", coords[i])))
        })
        .collect()
}

fn basepoint(
    file: &ChartFile,
    text: Option<&str>,
    coords: &[String],
) -> Result<Vec<BigRational>, Failure> {
    match text {
        Some(s) => parse_point(s, coords),
        None => Ok(file
            .basepoint
            .clone()
            .unwrap_or_else(|| vec![BigRational::from_integer(0.into()); coords.len()])),
    }
}

fn parse_frame<F: Field>(field: &F, text: &str, m: usize) -> Result<Matrix<F::Elem>, Failure> {
    if text.trim() == "identity" {
        return Ok(Matrix::identity(field, m));
    }
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Failure::Input(format!("--frame: expected `identity` or [[..],..]: {e}")))?;
    let rows = v
        .as_array()
        .ok_or_else(|| Failure::Input("--frame: expected an array of rows".into()))?;
    let parsed: Vec<Vec<F::Elem>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Failure::Input("--frame: expected an array of rows".into()))?
                .iter()
                .map(|x| {
                    let text = match x {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(Failure::Input("--frame: entries must be numbers".into())),
                    };
                    let q = parse_rational(&text)
                        .map_err(|e| Failure::Input(format!("--frame: {e}")))?;
                    Ok(field.from_rational(&q)?)
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if parsed.len() != m || parsed.iter().any(|r| r.len() != m) {
        return Err(Failure::Input(format!(
            "--frame: expected a {m}x{m} matrix"
        )));
    }
    Ok(Matrix::from_rows(parsed)?)
}

fn series_entries<F: Field>(
    field: &F,
    name: &str,
    m: &Matrix<TruncatedSeries<F>>,
) -> Map<String, Value> {
    let mut out = Map::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for (q, c) in m.get(i, j).terms() {
                if !field.is_zero(c) {
                    out.insert(
                        format!("{name}[{},{}] {q}", i + 1, j + 1),
                        json!(field.format(c)),
                    );
                }
            }
        }
    }
    out
}

fn solve(common: &Common, point: &PointArgs) -> Outcome {
    let file = load(&common.file)?;
    with_field!(&file, common.prime, |chart, field| {
        let s = scalars(
            &field,
            &basepoint(&file, point.point.as_deref(), chart.coords())?,
        )?;
        let f0 = parse_frame(&field, &point.frame, chart.rank())?;
        let limp = solve_limp(&chart, &s, &f0, point.order)?;
        let check = verify_flat_frame(&limp)?;
        let mut head = Map::new();
        head.insert("basepoint".into(), vector_value(&field, &s));
        head.insert("order".into(), json!(point.order));
        head.insert("verify".into(), json!(check.to_string()));
        let mut r = Report::default();
        r.push("frame", head);
        r.push("coefficients", series_entries(&field, "f", &limp.frame));
        Ok((r, 0))
    })
}

/// Variable names used by jet expressions: `t` alone, or `t1..td`.
fn jet_variables(exprs: &[&str]) -> Vec<String> {
    let mut max = 0usize;
    let mut bare = false;
    for e in exprs {
        let chars: Vec<char> = e.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            if chars[k].is_alphabetic() || chars[k] == '_' {
                let start = k;
                while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                let ident: String = chars[start..k].iter().collect();
                if ident == "t" {
                    bare = true;
                } else if let Some(n) = ident
                    .strip_prefix('t')
                    .and_then(|d| d.parse::<usize>().ok())
                {
                    max = max.max(n);
                }
            } else {
                k += 1;
            }
        }
    }
    if bare && max == 0 {
        vec!["t".into()]
    } else {
        (1..=max.max(1)).map(|i| format!("t{i}")).collect()
    }
}

fn build_jet<F: Field>(
    field: &F,
    chart: &ConnectionChart<F>,
    jet: &str,
    point: Option<Vec<F::Elem>>,
    order: usize,
) -> Result<Jet<F>, Failure> {
    let exprs: Vec<&str> = jet.split(',').map(str::trim).collect();
    if exprs.len() != chart.n() {
        return Err(Failure::Input(format!(
            "--jet: {} coordinates for a chart with {}",
            exprs.len(),
            chart.n()
        )));
    }
    let names = jet_variables(&exprs);
    let alg = WeilAlgebra::new(field.clone(), names.len(), order)?;
    let zero = vec![Rationals.from_int(0); names.len()];
    let mut coords = Vec::new();
    for (k, e) in exprs.iter().enumerate() {
        let f = parse_rational_function(e, &names)
            .map_err(|err| Failure::Input(format!("--jet: {err}")))?;
        if !f.is_polynomial() {
            return Err(Failure::Input(format!("--jet: '{e}' is not a polynomial")));
        }
        let series = f
            .numer()
            .map_field(field, |c| field.from_rational(c))?
            .to_series(&alg, &vec![field.zero(); names.len()])?;
        let constant = f.eval(&zero)?;
        let series = match &point {
            Some(p) => {
                if constant != Rationals.from_int(0) {
                    return Err(Failure::Input(format!(
                        "--jet: '{e}' has a constant term but --point is given"
                    )));
                }
                series.try_add(&TruncatedSeries::constant(&alg, p[k].clone()))?
            }
            None => series,
        };
        coords.push(series);
    }
    Ok(Jet::new(&alg, coords)?)
}

fn eval_jet(common: &Common, point: &PointArgs, jet: &str) -> Outcome {
    let file = load(&common.file)?;
    with_field!(&file, common.prime, |chart, field| {
        let p = match &point.point {
            Some(text) => Some(scalars(&field, &parse_point(text, chart.coords())?)?),
            None => None,
        };
        let j = build_jet(&field, &chart, jet, p, point.order)?;
        let s = j.basepoint().to_vec();
        let f0 = parse_frame(&field, &point.frame, chart.rank())?;
        let frame = FrameAssignment::new(&field, s.clone(), f0)?;
        let fj = eval_eta(&chart, &j, &frame, point.order)?;
        let (constancy, degeneracy) = jet_classify(&j);
        let mut head = Map::new();
        head.insert("basepoint".into(), vector_value(&field, &s));
        head.insert("order".into(), json!(point.order));
        head.insert("shape".into(), json!(fj.shape().to_string()));
        head.insert(
            "jet".into(),
            json!(match (constancy, degeneracy) {
                (Constancy::Constant, _) => "constant",
                (_, Degeneracy::Nondegenerate) => "non-degenerate",
                _ => "degenerate",
            }),
        );
        head.insert("flag_jet_constant".into(), json!(fj.is_constant()));
        let mut r = Report::default();
        r.push("flag jet", head);
        r.push(
            "coefficients",
            series_entries(&field, "rep", fj.representative()),
        );
        Ok((r, 0))
    })
}

fn flag_analyze(common: &Common) -> Outcome {
    let file = load(&common.file)?;
    file.require_chart()?;
    let full = hypothesis_report(&file, common.prime);
    let mut r = Report::default();
    for (name, m) in full.sections {
        if name == "chart" || name == "flags" || name == "ambient" || name.starts_with("set ") {
            r.push(name, m);
        }
    }
    Ok((r, 0))
}

fn mazur(common: &Common) -> Outcome {
    let file = load(&common.file)?;
    let mut r = Report::default();
    let mut code = 0;
    for fro in &file.frobenius {
        let module = &fro.module;
        let k = module.residue_field();
        let mut m = Map::new();
        match mazur_filtrations(module) {
            Ok(filt) => {
                m.insert("smith_exponents".into(), json!(filt.exponents));
                m.insert("det_valuation".into(), json!(filt.det_valuation));
                for i in 0..=module.weight() as i64 {
                    m.insert(
                        format!("F^{i}"),
                        subspace_value(&k, filt.hodge.step(i).basis()),
                    );
                }
                for i in 0..=module.weight() as i64 {
                    m.insert(
                        format!("F_c^{i}"),
                        subspace_value(&k, filt.conjugate.step(i).basis()),
                    );
                }
                if let Some(v) = &fro.eigenvector {
                    let verdict = frobenius_eigvec_check(module, v, module.weight() / 2)?;
                    m.insert("eigenvector".into(), json!(eigvec_text(&verdict)));
                }
            }
            Err(e @ Error::ShapeMismatch(_)) => {
                m.insert("error".into(), json!(e.to_string()));
                code = 1;
            }
            Err(e) => return Err(e.into()),
        }
        r.push(format!("frobenius {}", fro.label), m);
    }
    if file.frobenius.is_empty() {
        return Err(Failure::Input(format!(
            "{}: no [frobenius] section",
            common.file
        )));
    }
    Ok((r, code))
}

fn ordinary(common: &Common) -> Outcome {
    let file = load(&common.file)?;
    if file.frobenius.is_empty() {
        return Err(Failure::Input(format!(
            "{}: no [frobenius] section",
            common.file
        )));
    }
    let mut r = Report::default();
    let mut code = 0;
    for fro in &file.frobenius {
        let mut m = Map::new();
        match mazur_filtrations(&fro.module) {
            Ok(filt) => {
                let ord = is_ordinary(&filt.hodge, &filt.conjugate)?;
                m.insert("ordinary".into(), json!(ord));
                if !ord {
                    code = 1;
                }
            }
            Err(e @ Error::ShapeMismatch(_)) => {
                m.insert("error".into(), json!(e.to_string()));
                code = 1;
            }
            Err(e) => return Err(e.into()),
        }
        r.push(format!("frobenius {}", fro.label), m);
    }
    Ok((r, code))
}

fn criteria(pbar: usize, e: usize, dim_s: usize, d: usize, codim: Option<&str>) -> Outcome {
    let exceptional = exceptionality_predicate(&CriteriaInput {
        period_dimension: pbar,
        e,
        dim_s,
        d,
    });
    let mut m = Map::new();
    m.insert("exceptional".into(), json!(exceptional));
    let mut code = if exceptional { 0 } else { 1 };
    if let Some(c) = codim {
        let v: Vec<usize> = c
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::Input("--codim: expected three non-negative integers".into()))?;
        let [u, t, g] = <[usize; 3]>::try_from(v)
            .map_err(|_| Failure::Input("--codim: expected three non-negative integers".into()))?;
        let gap = ax_schanuel_gap(u, t, g);
        m.insert("ax_schanuel".into(), json!(gap));
        if !gap {
            code = 1;
        }
    }
    let mut r = Report::default();
    r.push("criteria", m);
    Ok((r, code))
}

/// Renders a matrix over a field for messages.
pub fn format_matrix<F: Field>(field: &F, m: &Matrix<F::Elem>) -> String {
    render(&matrix_value(field, m))
}

//! Numeric criteria and the hypothesis report.

use serde_json::{json, Map, Value};

use crate::algebra::{Field, Matrix, PrimeField};
use crate::arithmetic::{frobenius_eigvec_check, is_ordinary, mazur_filtrations, EigvecVerdict};
use crate::chartfile::{ChartFile, FieldKind, FrobeniusSpec};
use crate::connection::{curvature_is_flat, ConnectionChart, Curvature};
use crate::error::{Error, Result};
use crate::flags::{
    adjoint_hodge_numbers, conjugate_decomposition, end_grading, flag_from_matrix, is_opposed,
    is_polarized, killing_nondegenerate, orbit_tangent_routes, proper_containment,
    stabilizer_algebra, ConjugatePair, Flag, LieAlgebra, Tensor,
};
use crate::period::{flat_tensors_at, reduce_chart_mod_p};

/// Inputs of the exceptional-intersection inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriteriaInput {
    /// `P̄`.
    pub period_dimension: usize,
    /// Dimension of the orbit.
    pub e: usize,
    pub dim_s: usize,
    /// Dimension of the jet or locus.
    pub d: usize,
}

/// `P̄ − e > dim S − d`.
pub fn exceptionality_predicate(c: &CriteriaInput) -> bool {
    c.period_dimension as i64 - c.e as i64 > c.dim_s as i64 - c.d as i64
}

/// `codim U < codim T + codim graph`.
pub fn ax_schanuel_gap(codim_u: usize, codim_t: usize, codim_graph: usize) -> bool {
    codim_u < codim_t + codim_graph
}

/// Ordered sections of key/value entries, rendered as text or JSON.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub sections: Vec<(String, Map<String, Value>)>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, entries: Map<String, Value>) {
        self.sections.push((name.into(), entries));
    }

    pub fn section(&self, name: &str) -> Option<&Map<String, Value>> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, (name, entries)) in self.sections.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{name}]\n"));
            for (key, value) in entries {
                out.push_str(&format!("{key}: {}\n", render(value)));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (name, entries) in &self.sections {
            m.insert(name.clone(), Value::Object(entries.clone()));
        }
        Value::Object(m)
    }
}

/// Text form of a value: strings bare, arrays as `(a,b,…)`.
pub fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("({})", a.iter().map(render).collect::<Vec<_>>().join(",")),
        Value::Null => "none".into(),
        Value::Object(o) => format!(
            "{{{}}}",
            o.iter()
                .map(|(k, v)| format!("{k}={}", render(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.to_string(),
    }
}

pub fn vector_value<F: Field>(field: &F, v: &[F::Elem]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(field.format(x))).collect())
}

pub fn matrix_value<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_value(field, r)).collect())
}

fn error_section(e: &Error) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("error".into(), Value::String(e.to_string()));
    m
}

/// Adjoint data of a stabilizer relative to a conjugate pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerSummary {
    pub dim: usize,
    pub hodge: Vec<usize>,
    pub level: i64,
    pub e: usize,
    pub symmetric: bool,
    pub killing_nondegenerate: bool,
}

pub fn summarize_stabilizer<F: Field>(
    g: &LieAlgebra<F>,
    pair: &ConjugatePair<F>,
) -> Result<StabilizerSummary> {
    let graded = adjoint_hodge_numbers(g, pair)?;
    let inv = graded.invariants();
    Ok(StabilizerSummary {
        dim: g.dim(),
        hodge: graded.hodge_numbers(),
        level: inv.level,
        e: inv.e,
        symmetric: inv.symmetric,
        killing_nondegenerate: killing_nondegenerate(g)?.nondegenerate,
    })
}

fn summary_entries(s: &StabilizerSummary, m: &mut Map<String, Value>) {
    m.insert("dimension".into(), json!(s.dim));
    m.insert("adjoint_hodge_numbers".into(), json!(s.hodge));
    m.insert("level".into(), json!(s.level));
    m.insert("e".into(), json!(s.e));
    m.insert("symmetric".into(), json!(s.symmetric));
    m.insert(
        "killing_nondegenerate".into(),
        json!(s.killing_nondegenerate),
    );
}

/// The flags at the basepoint: the coordinate flag and either the opposite
/// coordinate flag or the one given by `conjugate`.
pub fn basepoint_flags<F: Field>(
    chart: &ConnectionChart<F>,
    conjugate: Option<&Matrix<F::Elem>>,
) -> Result<(Flag<F>, Flag<F>)> {
    let field = chart.field();
    let f = Flag::standard(field, chart.shape());
    let fc = match conjugate {
        Some(m) => flag_from_matrix(field, m, &chart.shape().reversed())?,
        None => Flag::opposite_standard(field, chart.shape()),
    };
    Ok((f, fc))
}

/// Tensor sets in order of first appearance; untagged tensors form `flat`.
pub fn tensor_sets<F: Field>(
    chart: &ConnectionChart<F>,
    values: &[Tensor<F::Elem>],
) -> Vec<(String, Vec<Tensor<F::Elem>>)> {
    let mut sets: Vec<(String, Vec<Tensor<F::Elem>>)> = Vec::new();
    for (t, v) in chart.flat_tensors().iter().zip(values) {
        let name = t.set.clone().unwrap_or_else(|| "flat".into());
        match sets.iter_mut().find(|(n, _)| *n == name) {
            Some((_, list)) => list.push(v.clone()),
            None => sets.push((name, vec![v.clone()])),
        }
    }
    sets
}

struct SetResult {
    name: String,
    e: Option<usize>,
}

fn chart_report<F: Field>(
    report: &mut Report,
    chart: &ConnectionChart<F>,
    basepoint: &[F::Elem],
    conjugate: Option<&Matrix<F::Elem>>,
    file: &ChartFile,
) {
    let field = chart.field();
    let mut info = Map::new();
    info.insert(
        "field".into(),
        Value::String(match field.characteristic() {
            0 => "Q".into(),
            p => format!("F_{p}"),
        }),
    );
    info.insert("coordinates".into(), json!(chart.coords()));
    info.insert("rank".into(), json!(chart.rank()));
    info.insert("weight".into(), json!(chart.shape().weight()));
    info.insert("hodge_numbers".into(), json!(chart.shape().hodge_numbers()));
    info.insert("basepoint".into(), vector_value(field, basepoint));
    report.push("chart", info);

    let mut flat = Map::new();
    match curvature_is_flat(chart) {
        Curvature::Flat => {
            flat.insert("verdict".into(), json!("flat"));
        }
        Curvature::Witness {
            l1,
            l2,
            row,
            col,
            value,
        } => {
            flat.insert("verdict".into(), json!("not flat"));
            flat.insert("coordinates".into(), json!([l1 + 1, l2 + 1]));
            flat.insert("entry".into(), json!([row + 1, col + 1]));
            flat.insert("value".into(), json!(value.format_with(chart.coords())));
        }
    }
    report.push("flatness", flat);

    let pair = (|| -> Result<(ConjugatePair<F>, Map<String, Value>)> {
        let (f, fc) = basepoint_flags(chart, conjugate)?;
        let mut m = Map::new();
        m.insert(
            "conjugate".into(),
            json!(if conjugate.is_some() {
                "given"
            } else {
                "opposite coordinate flag"
            }),
        );
        m.insert("opposed".into(), json!(is_opposed(&f, &fc)?));
        if let Some(q) = chart.polarization() {
            m.insert("polarized".into(), json!(is_polarized(&f, q)?));
        }
        let pair = conjugate_decomposition(&f, &fc)?;
        m.insert("hodge_decomposition".into(), json!(pair.summand_dims()));
        m.insert("end_grading".into(), json!(end_grading(&pair).dims()));
        Ok((pair, m))
    })();
    let pair = match pair {
        Ok((pair, m)) => {
            report.push("flags", m);
            Some(pair)
        }
        Err(e) => {
            report.push("flags", error_section(&e));
            None
        }
    };

    let mut results: Vec<SetResult> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    let mut ambient_alg = None;
    let q_tensor = chart.polarization().map(Tensor::from_form);
    let ambient = (|| -> Result<(LieAlgebra<F>, StabilizerSummary)> {
        let pair = pair.as_ref().ok_or(Error::NotOpposed)?;
        let q = q_tensor
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated("no [polarization] given".into()))?;
        let g = stabilizer_algebra(field, chart.rank(), std::slice::from_ref(q))?;
        let s = summarize_stabilizer(&g, pair)?;
        Ok((g, s))
    })();
    let period_dim = match ambient {
        Ok((g, s)) => {
            let mut m = Map::new();
            m.insert("algebra".into(), json!("Aut(Q)"));
            summary_entries(&s, &mut m);
            m.insert("period_dimension".into(), json!(s.e));
            report.push("ambient", m);
            if s.level >= 3 {
                notes.push(format!("level >= 3 hypothesis holds (level {})", s.level));
            } else {
                notes.push(format!("level >= 3 hypothesis fails (level {})", s.level));
            }
            if !s.symmetric {
                notes.push("Aut(Q): adjoint Hodge numbers are not symmetric".into());
            }
            results.push(SetResult {
                name: "Q".into(),
                e: Some(s.e),
            });
            ambient_alg = Some(g);
            Some(s.e)
        }
        Err(e) => {
            report.push("ambient", error_section(&e));
            None
        }
    };

    let values = flat_tensors_at(chart, basepoint);
    match values {
        Err(e) => {
            if !chart.flat_tensors().is_empty() {
                report.push("tensors", error_section(&e));
            }
        }
        Ok(values) => {
            for (name, tensors) in tensor_sets(chart, &values) {
                let section = format!("set {name}");
                let out = (|| -> Result<(Map<String, Value>, usize)> {
                    let pair = pair.as_ref().ok_or(Error::NotOpposed)?;
                    let mut u: Vec<Tensor<F::Elem>> = q_tensor.iter().cloned().collect();
                    u.extend(tensors.iter().cloned());
                    let g = stabilizer_algebra(field, chart.rank(), &u)?;
                    let s = summarize_stabilizer(&g, pair)?;
                    let mut m = Map::new();
                    m.insert("tensors".into(), json!(tensors.len()));
                    summary_entries(&s, &mut m);
                    if let Some(a) = &ambient_alg {
                        let (proper, witness) = proper_containment(&g, a);
                        m.insert("properly_contained".into(), json!(proper));
                        if let Some(wit) = witness {
                            m.insert("certificate".into(), matrix_value(field, &wit));
                        }
                        if !proper {
                            notes
                                .push(format!("set {name}: stabilizer is not a proper subalgebra"));
                        }
                    }
                    match orbit_tangent_routes(pair, &u) {
                        Ok(t) => {
                            m.insert("tangent_routes_agree".into(), json!(t.agree()));
                        }
                        Err(e) => {
                            m.insert("tangent_routes".into(), json!(e.to_string()));
                        }
                    }
                    if !s.symmetric {
                        notes.push(format!(
                            "set {name}: adjoint Hodge numbers are not symmetric"
                        ));
                    }
                    Ok((m, s.e))
                })();
                match out {
                    Ok((m, e)) => {
                        report.push(section, m);
                        results.push(SetResult { name, e: Some(e) });
                    }
                    Err(err) => {
                        report.push(section, error_section(&err));
                        results.push(SetResult { name, e: None });
                    }
                }
            }
        }
    }

    let dim_s = file.criteria.dim_s.unwrap_or(chart.n());
    let ds: Vec<usize> = if file.criteria.d.is_empty() {
        (1..=dim_s.max(1)).collect()
    } else {
        file.criteria.d.clone()
    };
    let mut ex = Map::new();
    ex.insert("dim_s".into(), json!(dim_s));
    match period_dim {
        None => {
            ex.insert("error".into(), json!("period dimension unavailable"));
        }
        Some(pbar) => {
            for r in &results {
                let Some(e) = r.e else { continue };
                for &d in &ds {
                    let verdict = exceptionality_predicate(&CriteriaInput {
                        period_dimension: pbar,
                        e,
                        dim_s,
                        d,
                    });
                    ex.insert(format!("{} d={d}", r.name), json!(verdict));
                }
            }
        }
    }
    for [u, t, g] in &file.criteria.ax_schanuel {
        ex.insert(
            format!("ax_schanuel ({u},{t},{g})"),
            json!(ax_schanuel_gap(*u, *t, *g)),
        );
    }
    report.push("exceptionality", ex);
    if !notes.is_empty() {
        let mut m = Map::new();
        for (k, n) in notes.into_iter().enumerate() {
            m.insert(format!("{}", k + 1), Value::String(n));
        }
        report.push("notes", m);
    }
}

fn frobenius_section(fro: &FrobeniusSpec) -> Map<String, Value> {
    let module = &fro.module;
    let mut m = Map::new();
    m.insert("p".into(), json!(module.prime()));
    m.insert("precision".into(), json!(module.precision()));
    m.insert(
        "hodge_numbers".into(),
        json!(module.expected_shape().hodge_numbers()),
    );
    match mazur_filtrations(module) {
        Err(e) => {
            m.insert("error".into(), json!(e.to_string()));
        }
        Ok(filt) => {
            let k = module.residue_field();
            m.insert("smith_exponents".into(), json!(filt.exponents));
            m.insert("det_valuation".into(), json!(filt.det_valuation));
            m.insert(
                "expected_det_valuation".into(),
                json!(filt.expected_det_valuation),
            );
            for i in 1..=module.weight() as i64 {
                m.insert(
                    format!("F^{i}"),
                    subspace_value(&k, filt.hodge.step(i).basis()),
                );
            }
            for i in 1..=module.weight() as i64 {
                m.insert(
                    format!("F_c^{i}"),
                    subspace_value(&k, filt.conjugate.step(i).basis()),
                );
            }
            match is_ordinary(&filt.hodge, &filt.conjugate) {
                Ok(b) => m.insert("ordinary".into(), json!(b)),
                Err(e) => m.insert("ordinary".into(), json!(e.to_string())),
            };
        }
    }
    if let Some(v) = &fro.eigenvector {
        let power = module.weight() / 2;
        let verdict = match frobenius_eigvec_check(module, v, power) {
            Ok(v) => eigvec_text(&v).to_string(),
            Err(e) => e.to_string(),
        };
        m.insert("eigenvector".into(), json!(verdict));
    }
    m
}

pub fn eigvec_text(v: &EigvecVerdict) -> &'static str {
    match v {
        EigvecVerdict::Ok => "ok",
        EigvecVerdict::ZeroReduction => "zero reduction",
        EigvecVerdict::NotEigenvector => "not an eigenvector",
        EigvecVerdict::ContainmentFails { .. } => "containment fails",
    }
}

pub fn subspace_value(field: &PrimeField, basis: &[Vec<u64>]) -> Value {
    Value::Array(basis.iter().map(|v| vector_value(field, v)).collect())
}

/// Every section is computed independently; failures are recorded in place.
pub fn hypothesis_report(file: &ChartFile, prime: Option<u64>) -> Report {
    let mut report = Report::default();
    let p = prime.or(match file.field {
        FieldKind::Prime(p) => Some(p),
        FieldKind::Rationals => None,
    });
    if let Some(chart) = &file.chart {
        let s = file
            .basepoint
            .clone()
            .unwrap_or_else(|| vec![num_rational::BigRational::from_integer(0.into()); chart.n()]);
        match p {
            None => chart_report(&mut report, chart, &s, file.conjugate.as_ref(), file),
            Some(p) => {
                let reduced = (|| -> Result<_> {
                    let field = PrimeField::new(p)?;
                    let chart = reduce_chart_mod_p(chart, p)?;
                    let s = s
                        .iter()
                        .map(|x| field.from_rational(x))
                        .collect::<Result<Vec<_>>>()?;
                    let conj = file
                        .conjugate
                        .as_ref()
                        .map(|m| m.try_map(|x| field.from_rational(x)))
                        .transpose()?;
                    Ok((chart, s, conj))
                })();
                match reduced {
                    Ok((chart, s, conj)) => {
                        chart_report(&mut report, &chart, &s, conj.as_ref(), file)
                    }
                    Err(e) => report.push("chart", error_section(&e)),
                }
            }
        }
    }
    for fro in &file.frobenius {
        report.push(format!("frobenius {}", fro.label), frobenius_section(fro));
    }
    report
}

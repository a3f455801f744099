use std::fs;

use clifford_core::bounds::{general_bound, non_gg_bound, stratified_bound, unbalanced_bound, unbalanced_bound_with_mu_max};
use clifford_core::oracles::{
    model_bound_audit, parse_point_file, random_points, steiner_h0_random, AuditRecord, SheafModel,
};
use clifford_core::sharpness::{sharpness_search, SearchBox, CONDITION_LABELS};
use clifford_core::steiner::twisted_steiner_h0_formula;
use clifford_core::sweep::{run_sweep, SweepConfig};
use clifford_core::{beta, bn_locus_decision, BoundReport, ChernCharacter, Error, Rational, Result, TheoremTag};
use serde_json::{json, Map, Value};

use crate::{BoundKind, Cli, Command};

/// Rows rendered as CSV or aligned text instead of a key/value listing.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Outcome {
    pub command: &'static str,
    pub report: Map<String, Value>,
    pub table: Option<Table>,
    pub verified: bool,
}

impl Outcome {
    fn new(command: &'static str, report: Value) -> Self {
        let report = match report {
            Value::Object(map) => map,
            other => Map::from_iter([("value".to_owned(), other)]),
        };
        Outcome { command, report, table: None, verified: true }
    }
}

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Bound { kind, rank, c1, mu, j } => bound(*kind, *rank, *c1, *mu, *j),
        Command::Bn { rank, c1, chi, k } => {
            let ch = ChernCharacter::from_chi(*rank, *c1, *chi)?;
            let rep = bn_locus_decision(&ch, *k)?;
            Ok(Outcome::new("bn", to_value(&rep)))
        }
        Command::Steiner { k, l, r, m, n } => steiner(*k, *l, *r, *m, *n, cli.seed),
        Command::Ideal { points, random_points: count, twist } => {
            let pts = match (points, count) {
                (Some(path), _) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| domain(format!("cannot read {}: {e}", path.display())))?;
                    parse_point_file(&text)?
                }
                (None, Some(n)) => random_points(*n, cli.seed),
                (None, None) => return Err(domain("give --points FILE or --random-points N")),
            };
            let count = pts.len();
            let model = SheafModel::IdealSheafTwist { points: pts, twist: *twist };
            let rec = model_bound_audit(&model)?;
            let mut report = audit_report(&rec);
            report.insert("points".into(), json!(count));
            report.insert("twist".into(), to_value(twist));
            let verified = rec.passed();
            Ok(Outcome { verified, ..Outcome::new("ideal", Value::Object(report)) })
        }
        Command::Sweep { suite, max_degree, max_rank, inject_fault } => {
            let cfg = SweepConfig {
                max_degree: *max_degree,
                max_rank: *max_rank,
                seed: cli.seed,
                threads: None,
                inject_fault: *inject_fault,
            };
            let summary = run_sweep(*suite, &cfg)?;
            let rows = summary
                .rows
                .iter()
                .map(|r| {
                    vec![r.suite.clone(), r.params.clone(), r.expected.clone(), r.actual.clone(), r.pass.to_string(), r.note.clone()]
                })
                .collect();
            let verified = summary.all_passed();
            let mut report = to_value(&summary);
            report["passed"] = json!(verified);
            Ok(Outcome {
                table: Some(Table { headers: vec!["suite", "params", "expected", "actual", "pass", "note"], rows }),
                verified,
                ..Outcome::new("sweep", report)
            })
        }
        Command::SharpnessSearch { max_k, max_rank, max_c1, chi_threshold, min_chi, s_rank_parity } => {
            let bx = SearchBox {
                max_k: *max_k,
                max_rank: *max_rank,
                max_c1: *max_c1,
                min_chi: *min_chi,
                s_rank_parity: (*s_rank_parity).into(),
            };
            let found = sharpness_search(&bx, *chi_threshold)?;
            let witnesses: Vec<Value> = found
                .iter()
                .map(|w| {
                    let conditions: Map<String, Value> =
                        CONDITION_LABELS.iter().zip(w.report.conditions).map(|(l, c)| ((*l).to_owned(), json!(c))).collect();
                    json!({
                        "s": w.s,
                        "s_character": w.s_character,
                        "q": { "rank": w.q_rank, "c1": w.q_c1, "chi": w.q_chi },
                        "e_character": w.e_character,
                        "conditions": conditions,
                        "passed": w.report.passed,
                    })
                })
                .collect();
            let rows = found
                .iter()
                .map(|w| {
                    let mut row = vec![
                        w.s.k.to_string(),
                        w.s.r.to_string(),
                        w.s.m.to_string(),
                        w.s.n.to_string(),
                        w.q_rank.to_string(),
                        w.q_c1.to_string(),
                        w.q_chi.to_string(),
                        w.e_character.to_string(),
                    ];
                    row.extend(w.report.conditions.iter().map(|c| c.to_string()));
                    row
                })
                .collect();
            let report = json!({
                "box": bx,
                "chi_threshold": chi_threshold,
                "count": found.len(),
                "condition_labels": CONDITION_LABELS,
                "witnesses": witnesses,
            });
            let headers = vec![
                "k", "s_rank", "m", "n", "q_rank", "q_c1", "q_chi", "e_character", "cond1", "cond2", "cond3", "cond4",
                "cond5", "cond6", "cond7",
            ];
            Ok(Outcome { table: Some(Table { headers, rows }), ..Outcome::new("sharpness-search", report) })
        }
    }
}

fn bound(kind: BoundKind, rank: i64, c1: Option<clifford_core::BiDegree>, mu: Option<Rational>, j: Option<i64>) -> Result<Outcome> {
    let slope = |c1: clifford_core::BiDegree| Rational::new((c1.a + c1.b) as i128, 2 * rank as i128);
    let mu_max = match (mu, c1) {
        (Some(m), _) => Some(m),
        (None, Some(c)) if rank >= 1 => Some(slope(c)?),
        (None, Some(_)) => return Err(domain(format!("rank must be positive, got {rank}"))),
        (None, None) => None,
    };
    let need_mu = || mu_max.ok_or_else(|| domain("give --mu or --c1"));
    let report: BoundReport = match kind {
        BoundKind::General => general_bound(rank, need_mu()?)?,
        BoundKind::Stratified => stratified_bound(rank, need_mu()?)?,
        BoundKind::NonGg => non_gg_bound(rank, need_mu()?)?,
        BoundKind::Unbalanced => {
            let c = c1.ok_or_else(|| domain("unbalanced bound needs --c1"))?;
            let j = j.ok_or_else(|| domain("unbalanced bound needs the twist index --j"))?;
            match mu {
                Some(m) => unbalanced_bound_with_mu_max(rank, c.a, c.b, j, m)?,
                None => unbalanced_bound(rank, c.a, c.b, j)?,
            }
        }
    };
    Ok(Outcome::new("bound", to_value(&report)))
}

fn audit_report(rec: &AuditRecord) -> Map<String, Value> {
    let bounds: Vec<Value> = rec
        .checks
        .iter()
        .map(|c| {
            json!({
                "theorem": c.report.theorem,
                "bound": c.report.bound,
                "aux": c.report.aux,
                "holds": c.holds,
                "sharp": c.sharp,
            })
        })
        .collect();
    let sharp = rec.checks.iter().any(|c| c.report.theorem == TheoremTag::General && c.sharp);
    let mut out = Map::new();
    out.insert("model".into(), json!(rec.model));
    out.insert("character".into(), to_value(&rec.character));
    out.insert("chi".into(), json!(rec.cohomology.chi));
    out.insert("oracle_h0".into(), json!(rec.cohomology.h0));
    out.insert("cohomology".into(), to_value(&rec.cohomology));
    out.insert("mu".into(), to_value(&rec.mu));
    out.insert("deficiency".into(), to_value(&rec.deficiency));
    out.insert("bounds".into(), Value::Array(bounds));
    out.insert("sharp".into(), json!(sharp));
    out
}

fn steiner(k: i64, l: i64, r: i64, m: i64, n: i64, seed: u64) -> Result<Outcome> {
    let sample = steiner_h0_random(k, l, r, m, n, seed)?;
    let rec = model_bound_audit(&SheafModel::steiner(k, l, r, m, n, seed))?;
    let mut report = audit_report(&rec);
    report.insert("h1".into(), json!(sample.h1));
    if let Ok(f) = twisted_steiner_h0_formula(k, l, r, m, n) {
        report.insert("formula_h0".into(), json!(f));
    }
    let mu = rec.character.slope()?;
    if let Ok(b) = beta(r, mu) {
        report.insert("beta".into(), json!(b));
    }
    report.insert("genericity".into(), to_value(&sample.report));
    // a failing check here means the sampled sheaf is not semistable, not that a bound is wrong
    let verified = rec.mu.assumed || rec.passed();
    Ok(Outcome { verified, ..Outcome::new("steiner", Value::Object(report)) })
}

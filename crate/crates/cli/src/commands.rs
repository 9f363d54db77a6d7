use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use serde::Deserialize;
use serde_json::json;
use zxel::diagram::Diagram;
use zxel::equivalence::check_equivalent_with_cap;
use zxel::io::{
    export as export_diagram, parse_diagram, parse_matrix, serialize_diagram, ExportFormat,
};
use zxel::normalform::{compose_specs, decompose, nf_to_diagram, normalize_with_cap};
use zxel::rewrite::{default_budget, simplify as run_simplify};
use zxel::rules::{check_catalog, full_catalog, Origin, RewriteRule};
use zxel::semantics::{interpret_with, ContractionOrder, Matrix, DEFAULT_WIRE_CAP};

pub type CmdResult = Result<ExitCode, String>;

const CAP_VAR: &str = "ZXEL_WIRE_CAP";

pub fn wire_cap() -> Result<usize, String> {
    match std::env::var(CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{CAP_VAR}={v:?} is not a non-negative integer")),
        Err(_) => Ok(DEFAULT_WIRE_CAP),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Diagram, String> {
    parse_diagram(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes to stdout; a reader that went away (`| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(value: &impl serde::Serialize) {
    emit(&(serde_json::to_string_pretty(value).expect("output serialises") + "\n"));
}

fn matrix_json(m: &Matrix) -> serde_json::Value {
    let data: Vec<Vec<[f64; 2]>> = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| [m.get(r, c).re, m.get(r, c).im])
                .collect()
        })
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "data": data })
}

pub fn interpret(file: &Path, precision: usize, as_json: bool, cap: usize) -> CmdResult {
    let d = load(file)?;
    let m = interpret_with(&d, ContractionOrder::Greedy, cap).map_err(|e| e.to_string())?;
    if as_json {
        print_json(&matrix_json(&m));
    } else {
        emit(&format!("{m:.precision$}"));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn check_eq(first: &Path, second: &Path, tol: f64, cap: usize) -> CmdResult {
    let (a, b) = (load(first)?, load(second)?);
    let verdict = check_equivalent_with_cap(&a, &b, tol, cap).map_err(|e| e.to_string())?;
    print_json(&verdict);
    Ok(if verdict.equal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub fn normalize(file: &Path, out: Option<&Path>, cap: usize) -> CmdResult {
    let nf = normalize_with_cap(&load(file)?, cap).map_err(|e| e.to_string())?;
    if let Some(out) = out {
        write(out, &serialize_diagram(&nf_to_diagram(&nf)))?;
    }
    print_json(&nf);
    Ok(ExitCode::SUCCESS)
}

pub fn simplify(file: &Path, budget: Option<usize>, trace: bool, out: Option<&Path>) -> CmdResult {
    let d = load(file)?;
    let budget = budget.unwrap_or_else(|| default_budget(&d));
    let s = run_simplify(&d, budget);
    if trace {
        for (i, step) in s.steps.iter().enumerate() {
            eprintln!("{:>4} {} {:?}", i + 1, step.rule, step.nodes);
        }
    }
    eprintln!(
        "{} rewrite steps, {} -> {} nodes{}",
        s.steps.len(),
        d.node_count(),
        s.diagram.node_count(),
        if s.exhausted {
            " (budget exhausted)"
        } else {
            ""
        }
    );
    let text = serialize_diagram(&s.diagram);
    match out {
        Some(out) => write(out, &text)?,
        None => emit(&text),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    rules: Vec<RuleRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleRecord {
    name: String,
    lhs: serde_json::Value,
    rhs: serde_json::Value,
}

/// Reads parameter-free rules `{"rules": [{"name", "lhs", "rhs"}]}` whose
/// sides are diagram documents.
fn load_rules(path: &Path) -> Result<Vec<RewriteRule>, String> {
    let file: RuleFile = serde_json::from_str(&read(path)?).map_err(|e| {
        format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })?;
    file.rules
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let side = |v: &serde_json::Value, which: &str| {
                parse_diagram(&v.to_string())
                    .map_err(|e| format!("{}: rules[{i}].{which}: {e}", path.display()))
            };
            Ok(RewriteRule::constant(
                r.name.clone(),
                Origin::External,
                side(&r.lhs, "lhs")?,
                side(&r.rhs, "rhs")?,
            ))
        })
        .collect()
}

pub fn rules(
    samples: usize,
    tol: f64,
    as_json: bool,
    extra: Option<&Path>,
    corrupt: &[String],
) -> CmdResult {
    let mut catalog = full_catalog();
    for name in corrupt {
        let rule = catalog
            .iter_mut()
            .find(|r| &r.name == name)
            .ok_or_else(|| format!("no rule named {name:?}"))?;
        *rule = rule.corrupted();
    }
    if let Some(path) = extra {
        catalog.extend(load_rules(path)?);
    }
    let reports = check_catalog(&catalog, samples, tol);
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if as_json {
        print_json(&reports);
    } else {
        for r in &reports {
            emit(&format!("{r}\n"));
        }
    }
    eprintln!("{} rules checked, {failed} failed", reports.len());
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub fn elementary(matrix: &Path, out: Option<&Path>) -> CmdResult {
    let m = parse_matrix(&read(matrix)?).map_err(|e| format!("{}: {e}", matrix.display()))?;
    let specs = decompose(&m).map_err(|e| e.to_string())?;
    let wires = m.rows().trailing_zeros() as usize;
    let d = compose_specs(wires, &specs);
    let got = interpret_with(&d, ContractionOrder::Greedy, DEFAULT_WIRE_CAP)
        .map_err(|e| e.to_string())?;
    let dev = got.max_abs_diff(&m).unwrap_or(f64::INFINITY);
    if dev > 1e-7 {
        return Err(format!(
            "composed diagram deviates from the matrix by {dev:.3e}"
        ));
    }
    if let Some(out) = out {
        write(out, &serialize_diagram(&d))?;
    }
    print_json(&specs);
    Ok(ExitCode::SUCCESS)
}

pub fn export(file: &Path, format: ExportFormat) -> CmdResult {
    emit(&export_diagram(&load(file)?, format));
    Ok(ExitCode::SUCCESS)
}

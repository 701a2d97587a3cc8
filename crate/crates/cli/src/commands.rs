use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use beauville_core::catalog::{builtin_catalog, instantiate, verify_row, CatalogRow, RowReport};
use beauville_core::fujiki::{Family, FujikiQuery};
use beauville_core::ledger::{derive_b2_og10_with, LedgerScenario, Og10Scenario, RankLedger};
use beauville_core::monodromy::{closed_form_invariant_dimension, invariant_dimension};
use beauville_core::rational::format_rational;
use beauville_core::solver::{pattern_label, solve, SolverInput, OG10_INTERSECTIONS};
use beauville_core::{ExactMatrix, LatticeExpr, LedgerError, SolveError};
use serde::Serialize;

use crate::{Cli, CliError, Command, Format};

/// Name accepted by `solve` for the shipped input.
pub const BUILTIN_SOLVER_INPUT: &str = "og10_intersections";

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Table { verify, family, n } => table(*verify, family.as_deref(), *n, json),
        Command::Lattice { expr } => lattice(expr, json),
        Command::Solve { input } => solve_cmd(input, json),
        Command::Fujiki { input } => fujiki(input, json),
        Command::Monodromy {
            genus,
            degree,
            closed_form,
            ..
        } => monodromy(*genus, *degree, *closed_form, json),
        Command::DeriveB2 {
            ambient_b2,
            components,
            lower_bound,
        } => derive_b2(
            Og10Scenario {
                ambient_b2: *ambient_b2,
                components: *components,
                lower_bound: *lower_bound,
            },
            json,
        ),
        Command::Ledger { input } => ledger(input, json),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("views serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Rows of a matrix as right-aligned columns, one line per row.
fn matrix_lines(m: &ExactMatrix, indent: &str) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(format_rational).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for row in cells {
        let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{indent}{}", row.join(" "));
    }
    out
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(|c| c.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, c)| format!("{c:<w$}", w = widths[j]))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

// table

#[derive(Serialize)]
struct RowView {
    name: String,
    family: &'static str,
    n: u32,
    b2: usize,
    fujiki: String,
    lattice: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    discriminant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signature: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    status: Option<&'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
}

fn row_view(row: &CatalogRow, report: Option<&RowReport>) -> RowView {
    RowView {
        name: row.name.clone(),
        family: row.family.name(),
        n: row.n,
        b2: row.b2,
        fujiki: format_rational(&row.fujiki),
        lattice: row.lattice.to_string(),
        discriminant: report.map(|r| r.discriminant.to_string()),
        signature: report.map(|r| r.signature.to_string()),
        status: report.map(|r| if r.passed() { "PASS" } else { "FAIL" }),
        failures: report
            .map(|r| {
                r.checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.actual))
                    .collect()
            })
            .unwrap_or_default(),
    }
}

fn table(
    verify: bool,
    family: Option<&str>,
    n: Option<u32>,
    json: bool,
) -> Result<String, CliError> {
    let rows = match (family, n) {
        (Some(f), Some(n)) => {
            let family: Family = f.parse().map_err(CliError::Input)?;
            vec![instantiate(family, n).map_err(|e| CliError::Input(e.to_string()))?]
        }
        _ => builtin_catalog(),
    };
    let reports: Vec<Option<RowReport>> =
        rows.iter().map(|r| verify.then(|| verify_row(r))).collect();
    let views: Vec<RowView> = rows
        .iter()
        .zip(&reports)
        .map(|(row, rep)| row_view(row, rep.as_ref()))
        .collect();
    let all_pass = reports.iter().flatten().all(RowReport::passed);

    let out = if json {
        to_json(&views)
    } else {
        let mut cells = vec![vec!["name", "n", "b2", "fujiki", "lattice"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()];
        if verify {
            cells[0].extend(["discriminant", "signature", "status"].map(String::from));
        }
        for v in &views {
            let mut line = vec![
                v.name.clone(),
                v.n.to_string(),
                v.b2.to_string(),
                v.fujiki.clone(),
                v.lattice.clone(),
            ];
            if verify {
                line.extend([
                    v.discriminant.clone().unwrap_or_default(),
                    v.signature.clone().unwrap_or_default(),
                    v.status.unwrap_or_default().to_string(),
                ]);
            }
            cells.push(line);
        }
        let mut out = aligned(&cells);
        for v in &views {
            for f in &v.failures {
                let _ = writeln!(out, "{}: {f}", v.name);
            }
        }
        out
    };
    if all_pass {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

// lattice

#[derive(Serialize)]
struct LatticeView {
    expression: String,
    rank: usize,
    discriminant: String,
    signature: String,
    even: bool,
    unimodular: bool,
    discriminant_group: String,
}

fn lattice(text: &str, json: bool) -> Result<String, CliError> {
    let expr = LatticeExpr::parse(text).map_err(|e| CliError::Input(e.to_string()))?;
    let l = expr.realize();
    let group = l
        .discriminant_group()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let view = LatticeView {
        expression: expr.to_string(),
        rank: l.rank(),
        discriminant: l.discriminant().to_string(),
        signature: l.signature().to_string(),
        even: l.is_even(),
        unimodular: l.is_unimodular(),
        discriminant_group: group.to_string(),
    };
    if json {
        return Ok(to_json(&view));
    }
    Ok(format!(
        "expression: {}\nrank: {}\ndiscriminant: {}\nsignature: {}\neven: {}\nunimodular: {}\ndiscriminant group: {}\n",
        view.expression,
        view.rank,
        view.discriminant,
        view.signature,
        view.even,
        view.unimodular,
        view.discriminant_group
    ))
}

// solve

#[derive(Serialize)]
struct DatumView {
    pattern: String,
    value: String,
    unit_power: i64,
}

#[derive(Serialize)]
struct SolveView {
    n: u32,
    a: String,
    c: String,
    reference: String,
    reference_square: String,
    exceptional: Vec<String>,
    exceptional_gram: ExactMatrix,
    lattice: String,
    reference_lattice_unimodular: bool,
    checked: Vec<DatumView>,
}

fn solve_cmd(input: &str, json: bool) -> Result<String, CliError> {
    let text = if input == BUILTIN_SOLVER_INPUT {
        OG10_INTERSECTIONS.to_string()
    } else {
        read(Path::new(input))?
    };
    let parsed = SolverInput::from_json(&text).map_err(|e| CliError::Input(e.to_string()))?;
    let sol = solve(&parsed).map_err(|e| match e {
        SolveError::Input(_) | SolveError::Lattice(_) | SolveError::UnknownClass(_) => {
            CliError::Input(e.to_string())
        }
        other => CliError::Failed(format!("solver: {other}\n")),
    })?;
    let view = SolveView {
        n: sol.n,
        a: format_rational(&sol.a),
        c: format_rational(&sol.c),
        reference: sol.reference.clone(),
        reference_square: format_rational(&sol.reference_square),
        exceptional: sol.exceptional.clone(),
        exceptional_gram: sol.exceptional_gram.clone(),
        lattice: sol.assembled.to_string(),
        reference_lattice_unimodular: sol.donaldson_unimodular,
        checked: parsed
            .data
            .iter()
            .map(|d| DatumView {
                pattern: pattern_label(&d.pattern, &parsed.reference),
                value: format_rational(&d.value),
                unit_power: d.unit_power,
            })
            .collect(),
    };
    if json {
        return Ok(to_json(&view));
    }
    let mut out = String::new();
    let _ = writeln!(out, "n: {}", view.n);
    let _ = writeln!(out, "a: {}", view.a);
    let _ = writeln!(out, "c: {}", view.c);
    let _ = writeln!(
        out,
        "reference: {} (square {})",
        view.reference, view.reference_square
    );
    let _ = writeln!(out, "exceptional: {}", view.exceptional.join(", "));
    let _ = writeln!(out, "exceptional gram:");
    out.push_str(&matrix_lines(&view.exceptional_gram, "  "));
    let _ = writeln!(out, "lattice: {}", view.lattice);
    let _ = writeln!(
        out,
        "reference lattice unimodular: {}",
        view.reference_lattice_unimodular
    );
    let _ = writeln!(out, "checked:");
    for d in &view.checked {
        let _ = writeln!(out, "  {} = {} t^{}", d.pattern, d.value, d.unit_power);
    }
    Ok(out)
}

// fujiki

#[derive(Serialize)]
struct FujikiView {
    n: u32,
    c: String,
    integral: String,
}

fn fujiki(path: &Path, json: bool) -> Result<String, CliError> {
    let query = FujikiQuery::from_json(&read(path)?).map_err(|e| CliError::Input(e.to_string()))?;
    let value = query
        .evaluate()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let view = FujikiView {
        n: query.n,
        c: format_rational(&query.c),
        integral: format_rational(&value),
    };
    if json {
        return Ok(to_json(&view));
    }
    Ok(format!(
        "n: {}\nc: {}\nintegral: {}\n",
        view.n, view.c, view.integral
    ))
}

// monodromy

#[derive(Serialize)]
struct MonodromyView {
    genus: u32,
    degree: usize,
    method: &'static str,
    dimension: usize,
}

fn monodromy(genus: u32, degree: usize, closed_form: bool, json: bool) -> Result<String, CliError> {
    let (method, result) = if closed_form {
        (
            "closed-form",
            closed_form_invariant_dimension(genus, degree),
        )
    } else {
        ("brute-force", invariant_dimension(genus, degree))
    };
    let dimension = result.map_err(|e| CliError::Input(e.to_string()))?;
    let view = MonodromyView {
        genus,
        degree,
        method,
        dimension,
    };
    if json {
        return Ok(to_json(&view));
    }
    Ok(format!("{}\n", view.dimension))
}

// derive-b2 and ledger

#[derive(Serialize)]
struct DeriveView {
    ambient_b2: u64,
    components: u64,
    lower_bound: u64,
    b2: Option<u64>,
    bounds: String,
    trace: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn ledger_failure(err: LedgerError, json: bool, wrap: impl FnOnce(String) -> String) -> CliError {
    match err {
        LedgerError::Malformed(m) => CliError::Input(format!("malformed ledger: {m}")),
        e @ (LedgerError::Contradiction { .. } | LedgerError::Unbounded { .. }) => {
            let msg = e.to_string();
            CliError::Failed(if json { wrap(msg) } else { format!("{msg}\n") })
        }
    }
}

fn derive_b2(scenario: Og10Scenario, json: bool) -> Result<String, CliError> {
    let derivation = derive_b2_og10_with(scenario).map_err(|e| {
        ledger_failure(e, json, |msg| {
            to_json(&DeriveView {
                ambient_b2: scenario.ambient_b2,
                components: scenario.components,
                lower_bound: scenario.lower_bound,
                b2: None,
                bounds: "empty".into(),
                trace: Vec::new(),
                error: Some(msg),
            })
        })
    })?;
    let out = if json {
        to_json(&DeriveView {
            ambient_b2: scenario.ambient_b2,
            components: scenario.components,
            lower_bound: scenario.lower_bound,
            b2: derivation.value,
            bounds: derivation.bounds.to_string(),
            trace: derivation.trace.iter().map(ToString::to_string).collect(),
            error: None,
        })
    } else {
        format!("{}\n", derivation.render())
    };
    match derivation.value {
        Some(_) => Ok(out),
        None => Err(CliError::Failed(out)),
    }
}

#[derive(Serialize)]
struct LedgerView {
    terms: Vec<TermView>,
    trace: Vec<String>,
}

#[derive(Serialize)]
struct TermView {
    name: String,
    dim: String,
}

fn ledger_view(l: &RankLedger) -> LedgerView {
    LedgerView {
        terms: l
            .terms()
            .iter()
            .map(|t| TermView {
                name: t.name.clone(),
                dim: t.dim.to_string(),
            })
            .collect(),
        trace: l.trace().iter().map(ToString::to_string).collect(),
    }
}

fn ledger(path: &Path, json: bool) -> Result<String, CliError> {
    let scenario =
        LedgerScenario::from_json(&read(path)?).map_err(|e| CliError::Input(e.to_string()))?;
    let result = scenario.run().map_err(|e| {
        ledger_failure(e, json, |msg| to_json(&serde_json::json!({ "error": msg })))
    })?;
    let view = ledger_view(&result);
    if json {
        return Ok(to_json(&view));
    }
    let mut out = String::new();
    for t in &view.terms {
        let _ = writeln!(out, "{} = {}", t.name, t.dim);
    }
    let _ = writeln!(out, "trace:");
    for line in &view.trace {
        let _ = writeln!(out, "  {line}");
    }
    Ok(out)
}

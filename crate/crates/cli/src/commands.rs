use crowdfund::asymptotics::{limit_indices, theta_max};
use crowdfund::equilibrium::{solve, GameParams};
use crowdfund::indices::{evaluate, indices_for};
use crowdfund::oracle::{simulate, SimulationReport};
use crowdfund::sweep::{sweep, Metric, SweepReport};
use crowdfund::table::{compute_table, TableCell, TableSpec};
use crowdfund::validate::{run_validation, CheckStatus, ValidationGrid, ValidationReport};
use crowdfund::{EquilibriumProfile, GameIndices};
use serde::Serialize;

use crate::failure::Failure;
use crate::render::{fixed, render, Cell, Format, Sheet};

pub struct Style {
    pub format: Format,
    pub decimals: u32,
}

/// Flat result of `solve`. Field order is the JSON and CSV column order.
#[derive(Debug, Serialize)]
pub struct SolveOutput {
    pub n: u64,
    pub b: u64,
    pub p: f64,
    pub lambda: f64,
    pub psi: f64,
    #[serde(rename = "lambda_H")]
    pub lambda_high: f64,
    #[serde(rename = "lambda_L")]
    pub lambda_low: f64,
    pub residual: f64,
    pub theta: f64,
    pub penetration: f64,
    pub x: f64,
    pub y: f64,
    #[serde(rename = "supply_H")]
    pub supply_high: f64,
    #[serde(rename = "supply_L")]
    pub supply_low: f64,
    pub mean_xy: f64,
    pub mean_supply: f64,
}

pub const SOLVE_FIELDS: [&str; 16] = [
    "n", "b", "p", "lambda", "psi", "lambda_H", "lambda_L", "residual", "theta", "penetration",
    "x", "y", "supply_H", "supply_L", "mean_xy", "mean_supply",
];

impl SolveOutput {
    fn new(params: &GameParams, idx: &GameIndices) -> Self {
        Self {
            n: params.n,
            b: params.b,
            p: params.p,
            lambda: idx.profile.lambda,
            psi: idx.profile.psi,
            lambda_high: idx.profile.lambda_high,
            lambda_low: idx.profile.lambda_low,
            residual: idx.profile.residual,
            theta: idx.theta,
            penetration: idx.penetration,
            x: idx.supply.x,
            y: idx.supply.y,
            supply_high: idx.supply.supply_high,
            supply_low: idx.supply.supply_low,
            mean_xy: idx.mean_xy,
            mean_supply: idx.mean_supply,
        }
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.n.into(),
            self.b.into(),
            self.p.into(),
            self.lambda.into(),
            self.psi.into(),
            self.lambda_high.into(),
            self.lambda_low.into(),
            self.residual.into(),
            self.theta.into(),
            self.penetration.into(),
            self.x.into(),
            self.y.into(),
            self.supply_high.into(),
            self.supply_low.into(),
            self.mean_xy.into(),
            self.mean_supply.into(),
        ]
    }
}

fn key_value_sheet(title: String, fields: &[&str], cells: Vec<Cell>) -> Sheet {
    let mut sheet = Sheet::new(&["quantity", "value"]).titled(title);
    for (field, cell) in fields.iter().zip(cells) {
        sheet.push(vec![(*field).into(), cell]);
    }
    sheet
}

pub fn cmd_solve(params: GameParams, style: &Style) -> Result<String, Failure> {
    let out = SolveOutput::new(&params, &evaluate(&params)?);
    render(
        style.format,
        &out,
        || match style.format {
            Format::Csv => {
                let mut sheet = Sheet::new(&SOLVE_FIELDS);
                sheet.push(out.cells());
                sheet
            }
            _ => key_value_sheet(
                format!("Equilibrium for n = {}, B = {}, p = {}", params.n, params.b, params.p),
                &SOLVE_FIELDS[3..],
                out.cells().split_off(3),
            ),
        },
        style.decimals,
    )
}

#[derive(Debug, Serialize)]
struct TableRow<'a> {
    #[serde(flatten)]
    cell: &'a TableCell,
    display: Display,
}

/// Cell values rounded for display.
#[derive(Debug, Serialize)]
struct Display {
    lambda: f64,
    theta: f64,
    mean_supply: f64,
    penetration: f64,
}

#[derive(Debug, Serialize)]
struct TableOutput<'a> {
    decimals: u32,
    cells: Vec<TableRow<'a>>,
}

const TABLE_COLUMNS: [&str; 4] = ["lambda", "theta", "mean_supply", "penetration"];

fn table_csv(cells: &[TableCell], decimals: u32) -> Sheet {
    let mut columns = vec!["p", "n", "rule", "b"];
    columns.extend(TABLE_COLUMNS);
    let display: Vec<String> = TABLE_COLUMNS.iter().map(|c| format!("{c}_display")).collect();
    columns.extend(display.iter().map(String::as_str));
    let mut sheet = Sheet::new(&columns);
    for c in cells {
        let mut row: Vec<Cell> = vec![c.p.into(), c.n.to_string().into(), c.rule.to_string().into(), c.b.into()];
        row.extend(c.values().iter().map(|&v| Cell::from(v)));
        row.extend(c.values().iter().map(|&v| Cell::from(fixed(v, decimals))));
        sheet.push(row);
    }
    sheet
}

/// One row per `(p, n)` with a `(lambda, theta, (x+y)/2, R)` block per rule.
fn table_markdown(spec: &TableSpec, cells: &[TableCell]) -> Sheet {
    let mut columns = vec!["p".to_string(), "n".to_string()];
    for rule in &spec.b_rules {
        let label = rule.label().replace("ceil", "B = ⌈").replace('(', "").replace(')', "⌉");
        columns.push(format!("λ ({label})"));
        columns.extend(["θ", "(x+y)/2", "R"].map(String::from));
    }
    let refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut sheet = Sheet::new(&refs).titled(format!(
        "Equilibrium indices by signal accuracy p, population n and threshold rule (rounded to {} places)",
        spec.decimals
    ));
    for row in cells.chunks(spec.b_rules.len()) {
        let first = &row[0];
        let mut out: Vec<Cell> = vec![first.p.to_string().into(), first.n.to_string().into()];
        for c in row {
            out.extend(c.values().iter().map(|&v| Cell::from(v)));
        }
        sheet.push(out);
    }
    sheet
}

pub fn cmd_table(spec: &TableSpec, style: &Style) -> Result<String, Failure> {
    if spec.p_values.is_empty() || spec.n_values.is_empty() || spec.b_rules.is_empty() {
        return Err(Failure::Parameter("table needs at least one p, one n and one threshold rule".into()));
    }
    let cells = compute_table(spec)?;
    let d = spec.decimals;
    let output = TableOutput {
        decimals: d,
        cells: cells
            .iter()
            .map(|cell| {
                let [lambda, theta, mean_supply, penetration] =
                    cell.values().map(|v| crowdfund::table::round_display(v, d));
                TableRow {
                    cell,
                    display: Display { lambda, theta, mean_supply, penetration },
                }
            })
            .collect(),
    };
    render(
        style.format,
        &output,
        || match style.format {
            Format::Csv => table_csv(&cells, d),
            _ => table_markdown(spec, &cells),
        },
        d,
    )
}

pub fn cmd_sweep(n: u64, p: f64, metric: Metric, style: &Style) -> Result<String, Failure> {
    let report: SweepReport = sweep(n, p, metric)?;
    render(
        style.format,
        &report,
        || {
            let mut sheet = Sheet::new(&["n", "p", "metric", "b", "lambda", "value", "best"]);
            for pt in &report.curve {
                let best = if pt.b == report.best_b { "true" } else { "false" };
                sheet.push(vec![
                    n.into(),
                    p.into(),
                    metric.to_string().into(),
                    pt.b.into(),
                    pt.lambda.into(),
                    pt.value.into(),
                    best.into(),
                ]);
            }
            if style.format == Format::Markdown {
                sheet = sheet.titled(format!(
                    "Best threshold for {metric} at n = {n}, p = {p}: B = {} with value {}",
                    report.best_b,
                    fixed(report.best_value, style.decimals)
                ));
            }
            sheet
        },
        style.decimals,
    )
}

#[derive(Debug, Serialize)]
struct AsymptoteOutput {
    q: f64,
    p: f64,
    lambda_inf: f64,
    x_star: f64,
    y_star: f64,
    theta_inf: f64,
    theta_max: f64,
    r_bound: f64,
    penetration_limit: f64,
    table_penetration: f64,
}

pub fn cmd_asymptote(q: f64, p: f64, style: &Style) -> Result<String, Failure> {
    let l = limit_indices(q, p)?;
    let out = AsymptoteOutput {
        q: l.q,
        p: l.p,
        lambda_inf: l.lambda_inf,
        x_star: l.x_star,
        y_star: l.y_star,
        theta_inf: l.theta_inf,
        theta_max: theta_max(p)?,
        r_bound: l.r_bound,
        penetration_limit: l.penetration_limit,
        table_penetration: l.table_penetration,
    };
    let fields = [
        "q", "p", "lambda_inf", "x_star", "y_star", "theta_inf", "theta_max", "r_bound",
        "penetration_limit", "table_penetration",
    ];
    let cells: Vec<Cell> = [
        out.q, out.p, out.lambda_inf, out.x_star, out.y_star, out.theta_inf, out.theta_max,
        out.r_bound, out.penetration_limit, out.table_penetration,
    ]
    .into_iter()
    .map(Cell::from)
    .collect();
    render(
        style.format,
        &out,
        || match style.format {
            Format::Csv => {
                let mut sheet = Sheet::new(&fields);
                sheet.push(cells);
                sheet
            }
            _ => key_value_sheet(format!("Large-population limits for q = {q}, p = {p}"), &fields, cells),
        },
        style.decimals,
    )
}

#[derive(Debug, Serialize)]
struct SimulateOutput<'a> {
    #[serde(flatten)]
    report: &'a SimulationReport,
    analytic: Analytic,
}

#[derive(Debug, Serialize)]
struct Analytic {
    theta: f64,
    penetration: f64,
    #[serde(rename = "supply_H")]
    supply_high: f64,
    #[serde(rename = "supply_L")]
    supply_low: f64,
    x: f64,
    y: f64,
}

pub fn cmd_simulate(
    params: GameParams,
    lambda: Option<f64>,
    trials: u64,
    seed: u64,
    style: &Style,
) -> Result<String, Failure> {
    let profile = match lambda {
        Some(l) => EquilibriumProfile::from_lambda(&params, l)?,
        None => solve(&params)?,
    };
    let idx = indices_for(&params, &profile);
    let report = simulate(&params, profile.lambda, trials, seed)?;
    let out = SimulateOutput {
        report: &report,
        analytic: Analytic {
            theta: idx.theta,
            penetration: idx.penetration,
            supply_high: idx.supply.supply_high,
            supply_low: idx.supply.supply_low,
            x: idx.supply.x,
            y: idx.supply.y,
        },
    };
    render(
        style.format,
        &out,
        || {
            let e = &report.estimates;
            let s = &report.std_errors;
            let c = &report.samples;
            let rows: [(&str, f64, f64, Option<f64>, u64); 7] = [
                ("theta", e.theta, s.theta, Some(idx.theta), trials),
                ("penetration", e.penetration, s.penetration, Some(idx.penetration), trials),
                ("supply_H", e.supply_high, s.supply_high, Some(idx.supply.supply_high), c.state_high),
                ("supply_L", e.supply_low, s.supply_low, Some(idx.supply.supply_low), c.state_low),
                ("x", e.x, s.x, Some(idx.supply.x), c.first_commits_high),
                ("y", e.y, s.y, Some(idx.supply.y), c.first_commits_low),
                ("supply_given_all_low", e.supply_given_all_low, s.supply_given_all_low, None, c.all_low_signals),
            ];
            let mut sheet = Sheet::new(&["quantity", "estimate", "std_error", "analytic", "samples"]);
            for (name, est, se, analytic, samples) in rows {
                sheet.push(vec![name.into(), est.into(), se.into(), analytic.into(), samples.into()]);
            }
            if style.format == Format::Markdown {
                sheet = sheet.titled(format!(
                    "Simulation of n = {}, B = {}, p = {} at lambda = {}: {} trials, seed {} ({})",
                    params.n,
                    params.b,
                    params.p,
                    fixed(profile.lambda, style.decimals),
                    trials,
                    seed,
                    report.rng
                ));
            }
            sheet
        },
        style.decimals,
    )
}

/// Returns the rendered report and whether every check passed.
pub fn cmd_validate(
    grid: &ValidationGrid,
    trials: u64,
    seed: u64,
    style: &Style,
) -> Result<(String, ValidationReport), Failure> {
    let report = run_validation(grid, trials, seed)?;
    let text = render(
        style.format,
        &report,
        || {
            let mut sheet = Sheet::new(&[
                "check", "n", "b", "p", "lambda", "tolerance", "deviation", "worst_field", "status", "note",
            ]);
            for c in &report.checks {
                let status = match c.status {
                    CheckStatus::Pass => "pass",
                    CheckStatus::Fail => "fail",
                    CheckStatus::Skipped => "skipped",
                };
                sheet.push(vec![
                    c.check.as_str().into(),
                    c.n.into(),
                    c.b.into(),
                    c.p.into(),
                    c.lambda.into(),
                    c.tolerance.into(),
                    c.deviation.into(),
                    c.worst_field.clone().into(),
                    status.into(),
                    c.note.clone().into(),
                ]);
            }
            if style.format == Format::Markdown {
                sheet = sheet.titled(format!(
                    "Validation: {} passed, {} failed, {} skipped ({} trials, seed {})",
                    report.passed, report.failed, report.skipped, report.trials, report.seed
                ));
            }
            sheet
        },
        style.decimals,
    )?;
    Ok((text, report))
}

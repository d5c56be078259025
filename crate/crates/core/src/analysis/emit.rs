//! Rendering of analysis artifacts as text tables, CSV and SVG charts.
//!
//! Every CSV artifact starts with a `# costnav-<kind> v1` line followed by a
//! fixed header row. Floats are written in shortest round-trip form, so the
//! parse functions here recover the emitted values bit for bit.
//!
//! | kind        | columns |
//! |-------------|---------|
//! | report      | [`REPORT_COLUMNS`] |
//! | grid        | `axis_<name>` per axis, then [`REPORT_COLUMNS`] |
//! | curve       | `runs,cumulative_usd` |
//! | frontier    | one column per fixed axis, then `free_axis,status,value,profit,bep` |
//! | leaderboard | `rank` then [`LEADERBOARD_COLUMNS`] |

use std::fmt::Write as _;
use std::path::Path;

use super::curve::BepCurve;
use super::frontier::{FrontierPoint, FrontierSolution};
use super::leaderboard::Leaderboard;
use super::sweep::SweepGrid;
use super::AnalysisError;
use crate::econ::{fixed, group_thousands, whole_dollars, Bep, CostShares, EconReport, Settlement};

pub const CSV_VERSION: u32 = 1;

pub const REPORT_COLUMNS: [&str; 18] = [
    "hardware_cost",
    "training_cost",
    "pre_run_total",
    "energy_cost",
    "maintenance_cost",
    "rescue_cost",
    "run_cost_total",
    "sla_compliance",
    "collision_rate",
    "revenue",
    "profit",
    "bep",
    "bep_ratio",
    "share_energy",
    "share_maintenance",
    "share_rescue",
    "time_to_profitability_days",
    "settlement",
];

pub const CURVE_COLUMNS: [&str; 2] = ["runs", "cumulative_usd"];

pub const LEADERBOARD_COLUMNS: [&str; 11] = [
    "policy_id",
    "episodes",
    "success_rate",
    "collision_rate",
    "path_length_m",
    "run_cost",
    "energy_cost",
    "maintenance_cost",
    "revenue",
    "profit",
    "bep",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format `{other}` (expected table, csv or svg)")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Artifact<'a> {
    Report(&'a EconReport),
    Grid(&'a SweepGrid),
    Curve(&'a BepCurve),
    Frontier(&'a [FrontierPoint]),
    Leaderboard(&'a Leaderboard),
}

impl Artifact<'_> {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Report(_) => "report",
            Artifact::Grid(_) => "grid",
            Artifact::Curve(_) => "curve",
            Artifact::Frontier(_) => "frontier",
            Artifact::Leaderboard(_) => "leaderboard",
        }
    }

    fn validate(&self) -> Result<(), AnalysisError> {
        let empty = match self {
            Artifact::Report(_) => false,
            Artifact::Grid(g) => g.cells.is_empty(),
            Artifact::Curve(c) => c.points.is_empty(),
            Artifact::Frontier(f) => f.is_empty(),
            Artifact::Leaderboard(l) => l.rows.is_empty(),
        };
        if empty {
            return Err(AnalysisError::Invalid(format!("cannot emit an empty {}", self.kind())));
        }
        Ok(())
    }
}

pub fn render(artifact: Artifact<'_>, format: Format) -> Result<String, AnalysisError> {
    artifact.validate()?;
    match (format, artifact) {
        (Format::Table, Artifact::Report(r)) => Ok(report_table(r)),
        (Format::Table, Artifact::Grid(g)) => Ok(grid_table(g)),
        (Format::Table, Artifact::Curve(c)) => Ok(curve_table(c)),
        (Format::Table, Artifact::Frontier(f)) => Ok(frontier_table(f)),
        (Format::Table, Artifact::Leaderboard(l)) => Ok(leaderboard_table(l)),
        (Format::Csv, a) => csv_text(a),
        (Format::Svg, Artifact::Curve(c)) => Ok(curve_svg(c)),
        (Format::Svg, Artifact::Frontier(f)) => frontier_svg(f),
        (Format::Svg, a) => Err(AnalysisError::Unsupported(format!("no chart for a {}", a.kind()))),
    }
}

/// Render `artifact` and write it to `path`.
pub fn emit_report(artifact: Artifact<'_>, format: Format, path: impl AsRef<Path>) -> Result<(), AnalysisError> {
    let text = render(artifact, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

// ---- tables

fn pct(fraction: f64) -> String {
    fixed(fraction * 100.0, 1)
}

fn bep_grouped(bep: Bep) -> String {
    match bep {
        Bep::Runs(n) => group_thousands(n),
        Bep::NotViable => "None".into(),
    }
}

/// Pre-run items in whole dollars, run costs in cents, revenue and profit
/// in mills.
fn report_table(r: &EconReport) -> String {
    let mut out = String::new();
    let mut line = |label: &str, value: String| {
        if value.is_empty() {
            out.push_str(label);
        } else {
            let _ = write!(out, "{label} {value}");
        }
        out.push('\n');
    };
    line("Pre-Run Costs ($)", String::new());
    line("Hardware", whole_dollars(r.hardware_cost));
    line("Data Collection", whole_dollars(r.training_cost));
    line("Total Pre-Run Cost", whole_dollars(r.pre_run_total));
    line("Run Costs ($/run)", String::new());
    line("Energy", fixed(r.energy_cost, 2));
    line("Maintenance", fixed(r.maintenance_cost, 2));
    if r.rescue_cost != 0.0 {
        line("Rescue", fixed(r.rescue_cost, 2));
    }
    line("Total Run Cost", fixed(r.run_cost_total, 2));
    line("Revenue Metrics", String::new());
    line("SLA Compliance (%)", pct(r.sla_compliance));
    line("Revenue ($/run)", fixed(r.revenue, 3));
    line("Profitability Metrics", String::new());
    line("Profit ($/run)", fixed(r.profit, 3));
    line("BEP (runs)", bep_grouped(r.bep));
    if let Some(days) = r.time_to_profitability_days {
        line("Time to Profitability (days)", fixed(days, 1));
    }
    line("Cost Shares (%)", String::new());
    line("Energy Share", fixed(r.cost_shares.energy * 100.0, 2));
    line("Maintenance Share", fixed(r.cost_shares.maintenance * 100.0, 2));
    line("Rescue Share", fixed(r.cost_shares.rescue * 100.0, 2));
    out
}

/// Left-aligned first column, right-aligned rest.
fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (cell, &w))| if i == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn grid_table(g: &SweepGrid) -> String {
    let mut header: Vec<String> = g.axes.iter().map(|a| a.axis.to_string()).collect();
    header.extend(["run_cost", "revenue", "profit", "bep"].map(String::from));
    let rows: Vec<Vec<String>> = g
        .cells
        .iter()
        .map(|cell| {
            let mut row: Vec<String> = cell.coords.iter().map(|v| v.to_string()).collect();
            row.push(fixed(cell.report.run_cost_total, 2));
            row.push(fixed(cell.report.revenue, 3));
            row.push(fixed(cell.report.profit, 3));
            row.push(bep_grouped(cell.report.bep));
            row
        })
        .collect();
    aligned(&header, &rows)
}

fn curve_table(c: &BepCurve) -> String {
    let mut out = format!(
        "Pre-run total ${}, profit ${}/run, BEP (runs) {}, stride {}\n",
        whole_dollars(c.pre_run_total),
        fixed(c.profit_per_run, 3),
        bep_grouped(c.break_even),
        c.stride
    );
    let rows: Vec<Vec<String>> = c
        .points
        .iter()
        .map(|&(n, v)| vec![group_thousands(n), whole_dollars(v)])
        .collect();
    out.push_str(&aligned(&["runs".into(), "cumulative ($)".into()], &rows));
    out
}

fn frontier_table(points: &[FrontierPoint]) -> String {
    let mut header: Vec<String> = points[0].fixed.iter().map(|(a, _)| a.to_string()).collect();
    header.push(format!("{} at break-even", points[0].free_axis));
    header.push("bep".into());
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            let mut row: Vec<String> = p.fixed.iter().map(|(_, v)| v.to_string()).collect();
            match p.solution {
                FrontierSolution::Root { value, bep, .. } => {
                    row.push(format!("{value:.6}"));
                    row.push(bep_grouped(bep));
                }
                FrontierSolution::NoRoot { .. } => {
                    row.push("no root".into());
                    row.push("-".into());
                }
            }
            row
        })
        .collect();
    aligned(&header, &rows)
}

fn leaderboard_table(l: &Leaderboard) -> String {
    let header: Vec<String> = [
        "rank",
        "policy",
        "episodes",
        "success (%)",
        "collision (%)",
        "path (m)",
        "run cost ($)",
        "revenue ($)",
        "profit ($)",
        "BEP (runs)",
    ]
    .map(String::from)
    .to_vec();
    let rows: Vec<Vec<String>> = l
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                (i + 1).to_string(),
                r.policy_id.clone(),
                r.episodes.to_string(),
                pct(r.success_rate),
                pct(r.collision_rate),
                fixed(r.path_length_m, 1),
                fixed(r.run_cost, 2),
                fixed(r.revenue, 3),
                fixed(r.profit, 3),
                bep_grouped(r.bep),
            ]
        })
        .collect();
    let mut out = aligned(&header, &rows);
    for (policy, reason) in &l.skipped {
        let _ = writeln!(out, "skipped {policy}: {reason}");
    }
    out
}

// ---- CSV

fn bep_cell(bep: Bep) -> String {
    bep.to_string()
}

fn opt_cell(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn settlement_cell(s: Settlement) -> &'static str {
    match s {
        Settlement::Ledger => "ledger",
        Settlement::Exact => "exact",
    }
}

fn report_cells(r: &EconReport) -> Vec<String> {
    let mut cells: Vec<String> = [
        r.hardware_cost,
        r.training_cost,
        r.pre_run_total,
        r.energy_cost,
        r.maintenance_cost,
        r.rescue_cost,
        r.run_cost_total,
        r.sla_compliance,
        r.collision_rate,
        r.revenue,
        r.profit,
    ]
    .iter()
    .map(f64::to_string)
    .collect();
    cells.push(bep_cell(r.bep));
    cells.push(opt_cell(r.bep_ratio));
    cells.extend([r.cost_shares.energy, r.cost_shares.maintenance, r.cost_shares.rescue].map(|v| v.to_string()));
    cells.push(opt_cell(r.time_to_profitability_days));
    cells.push(settlement_cell(r.settlement).into());
    cells
}

fn csv_text(artifact: Artifact<'_>) -> Result<String, AnalysisError> {
    let mut header: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<String>> = Vec::new();
    match artifact {
        Artifact::Report(r) => {
            header.extend(REPORT_COLUMNS.map(String::from));
            rows.push(report_cells(r));
        }
        Artifact::Grid(g) => {
            header.extend(g.axes.iter().map(|a| format!("axis_{}", a.axis)));
            header.extend(REPORT_COLUMNS.map(String::from));
            for cell in &g.cells {
                let mut row: Vec<String> = cell.coords.iter().map(f64::to_string).collect();
                row.extend(report_cells(&cell.report));
                rows.push(row);
            }
        }
        Artifact::Curve(c) => {
            header.extend(CURVE_COLUMNS.map(String::from));
            rows.extend(c.points.iter().map(|(n, v)| vec![n.to_string(), v.to_string()]));
        }
        Artifact::Frontier(points) => {
            header.extend(points[0].fixed.iter().map(|(a, _)| a.to_string()));
            header.extend(["free_axis", "status", "value", "profit", "bep"].map(String::from));
            for p in points {
                let mut row: Vec<String> = p.fixed.iter().map(|(_, v)| v.to_string()).collect();
                row.push(p.free_axis.to_string());
                match p.solution {
                    FrontierSolution::Root { value, profit, bep } => {
                        row.extend(["root".into(), value.to_string(), profit.to_string(), bep_cell(bep)]);
                    }
                    FrontierSolution::NoRoot { .. } => {
                        row.extend(["no_root", "", "", ""].map(String::from));
                    }
                }
                rows.push(row);
            }
        }
        Artifact::Leaderboard(l) => {
            header.push("rank".into());
            header.extend(LEADERBOARD_COLUMNS.map(String::from));
            for (i, r) in l.rows.iter().enumerate() {
                let mut row = vec![(i + 1).to_string(), r.policy_id.clone(), r.episodes.to_string()];
                row.extend(
                    [
                        r.success_rate,
                        r.collision_rate,
                        r.path_length_m,
                        r.run_cost,
                        r.energy_cost,
                        r.maintenance_cost,
                        r.revenue,
                        r.profit,
                    ]
                    .map(|v| v.to_string()),
                );
                row.push(bep_cell(r.bep));
                rows.push(row);
            }
        }
    }

    let mut out = format!("# costnav-{} v{CSV_VERSION}\n", artifact.kind()).into_bytes();
    {
        let mut writer = csv::Writer::from_writer(&mut out);
        writer.write_record(&header)?;
        for row in &rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
    }
    Ok(String::from_utf8(out).expect("CSV output is UTF-8"))
}

/// Split off and check the version line, then read the header and rows.
fn read_csv(text: &str, kind: &str, expected: &[&str]) -> Result<Vec<csv::StringRecord>, AnalysisError> {
    let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
    let tag = format!("# costnav-{kind} v{CSV_VERSION}");
    if first.trim_end_matches('\r') != tag {
        return Err(AnalysisError::Parse(format!("expected `{tag}` as the first line, found `{first}`")));
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(rest.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(expected.iter().copied()) {
        return Err(AnalysisError::Parse(format!(
            "unexpected {kind} header `{}` (expected `{}`)",
            header.iter().collect::<Vec<_>>().join(","),
            expected.join(",")
        )));
    }
    reader
        .records()
        .map(|r| r.map_err(AnalysisError::from))
        .collect()
}

fn parse_num<T: std::str::FromStr>(cell: &str, column: &str, row: usize) -> Result<T, AnalysisError> {
    cell.parse()
        .map_err(|_| AnalysisError::Parse(format!("row {row}: column {column}: cannot parse `{cell}`")))
}

fn parse_opt(cell: &str, column: &str, row: usize) -> Result<Option<f64>, AnalysisError> {
    if cell.is_empty() {
        Ok(None)
    } else {
        parse_num(cell, column, row).map(Some)
    }
}

fn parse_bep(cell: &str, row: usize) -> Result<Bep, AnalysisError> {
    if cell == "None" {
        Ok(Bep::NotViable)
    } else {
        parse_num(cell, "bep", row).map(Bep::Runs)
    }
}

/// Inverse of the report CSV.
pub fn parse_report_csv(text: &str) -> Result<EconReport, AnalysisError> {
    let records = read_csv(text, "report", &REPORT_COLUMNS)?;
    let [record] = records.as_slice() else {
        return Err(AnalysisError::Parse(format!(
            "a report CSV has exactly one row, found {}",
            records.len()
        )));
    };
    let num = |i: usize| -> Result<f64, AnalysisError> { parse_num(&record[i], REPORT_COLUMNS[i], 1) };
    Ok(EconReport {
        hardware_cost: num(0)?,
        training_cost: num(1)?,
        pre_run_total: num(2)?,
        energy_cost: num(3)?,
        maintenance_cost: num(4)?,
        rescue_cost: num(5)?,
        run_cost_total: num(6)?,
        sla_compliance: num(7)?,
        collision_rate: num(8)?,
        revenue: num(9)?,
        profit: num(10)?,
        bep: parse_bep(&record[11], 1)?,
        bep_ratio: parse_opt(&record[12], REPORT_COLUMNS[12], 1)?,
        cost_shares: CostShares {
            energy: num(13)?,
            maintenance: num(14)?,
            rescue: num(15)?,
        },
        time_to_profitability_days: parse_opt(&record[16], REPORT_COLUMNS[16], 1)?,
        settlement: record[17].parse().map_err(AnalysisError::Parse)?,
    })
}

/// Inverse of the curve CSV: the `(runs, cumulative USD)` series.
pub fn parse_curve_csv(text: &str) -> Result<Vec<(u64, f64)>, AnalysisError> {
    read_csv(text, "curve", &CURVE_COLUMNS)?
        .iter()
        .enumerate()
        .map(|(i, r)| Ok((parse_num(&r[0], "runs", i + 1)?, parse_num(&r[1], "cumulative_usd", i + 1)?)))
        .collect()
}

// ---- SVG

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        (lo - pad, hi + pad)
    }
}

fn tick_label(value: f64, span: f64) -> String {
    if span >= 100.0 {
        whole_dollars(value)
    } else if span >= 1.0 {
        fixed(value, 2)
    } else {
        fixed(value, 4)
    }
}

struct Chart<'a> {
    title: String,
    x_label: &'a str,
    y_label: &'a str,
    points: Vec<(f64, f64)>,
    zero_line: bool,
    marker: Option<(f64, String)>,
}

impl Chart<'_> {
    fn render(&self) -> String {
        let (x_lo, x_hi) = padded_range(
            self.points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
            self.points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
        );
        let mut y_min = self.points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let mut y_max = self.points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        if self.zero_line {
            y_min = y_min.min(0.0);
            y_max = y_max.max(0.0);
        }
        let (y_lo, y_hi) = padded_range(y_min, y_max);
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
        let sy = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;
        let bottom = MARGIN_TOP + plot_h;
        let right = MARGIN_LEFT + plot_w;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<path d="M{MARGIN_LEFT:.2},{MARGIN_TOP:.2} V{bottom:.2} H{right:.2}" fill="none" stroke="black"/>"#
        );
        for i in 0..=4 {
            let fx = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
            let fy = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
            let (px, py) = (sx(fx), sy(fy));
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{bottom:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                bottom + 5.0,
                bottom + 19.0,
                tick_label(fx, x_hi - x_lo)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{MARGIN_LEFT:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 5.0,
                MARGIN_LEFT - 8.0,
                py + 4.0,
                tick_label(fy, y_hi - y_lo)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape(self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(self.y_label)
        );
        if self.zero_line {
            let y0 = sy(0.0);
            let _ = writeln!(
                s,
                r#"<line x1="{MARGIN_LEFT:.2}" y1="{y0:.2}" x2="{right:.2}" y2="{y0:.2}" stroke="gray" stroke-dasharray="4 3"/>"#
            );
        }
        let coords: Vec<String> = self.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
            coords.join(" ")
        );
        if self.points.len() == 1 {
            let (x, y) = self.points[0];
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, sx(x), sy(y));
        }
        if let Some((x, label)) = &self.marker {
            let px = sx(*x);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{MARGIN_TOP:.2}" x2="{px:.2}" y2="{bottom:.2}" stroke="firebrick" stroke-dasharray="2 2"/><text x="{:.2}" y="{:.2}" fill="firebrick">{}</text>"#,
                px + 4.0,
                MARGIN_TOP + 14.0,
                escape(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn curve_svg(c: &BepCurve) -> String {
    Chart {
        title: format!("Cumulative position (profit ${}/run)", fixed(c.profit_per_run, 3)),
        x_label: "runs",
        y_label: "cumulative position (USD)",
        points: c.points.iter().map(|&(n, v)| (n as f64, v)).collect(),
        zero_line: true,
        marker: c.crossing().map(|n| (n as f64, format!("break-even at {} runs", group_thousands(n)))),
    }
    .render()
}

fn frontier_svg(points: &[FrontierPoint]) -> Result<String, AnalysisError> {
    let free = points[0].free_axis;
    let y_label = format!("{free} at break-even");
    let (x_label, series): (String, Vec<(f64, f64)>) = match points[0].fixed.len() {
        0 => ("(single point)".into(), points.iter().filter_map(|p| p.root().map(|r| (0.0, r))).collect()),
        1 => (
            points[0].fixed[0].0.to_string(),
            points.iter().filter_map(|p| p.root().map(|r| (p.fixed[0].1, r))).collect(),
        ),
        n => {
            return Err(AnalysisError::Unsupported(format!(
                "a frontier chart needs at most one fixed axis, found {n}"
            )))
        }
    };
    if series.is_empty() {
        return Err(AnalysisError::Unsupported("the frontier has no root to plot".into()));
    }
    Ok(Chart {
        title: format!("Viability frontier for {free}"),
        x_label: &x_label,
        y_label: &y_label,
        points: series,
        zero_line: false,
        marker: None,
    }
    .render())
}

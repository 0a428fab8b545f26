//! Plain-text scenario table for band-matched sweep rows.

use std::fmt::Write;

use vaxprice::sweep::{PriceBand, SweepResultRow};

/// Profit counts as above target when it clears it by more than this ($M).
const ABOVE_TARGET: f64 = 0.05;

type Cell = fn(&SweepResultRow) -> String;

fn profit_cell(r: &SweepResultRow, i: usize) -> String {
    let mark = if r.profit[i] > r.target_profit[i] + ABOVE_TARGET {
        "*"
    } else {
        ""
    };
    format!("{:.1}{mark}", r.profit[i])
}

const LINES: [(&str, Cell); 15] = [
    ("Sweep Scenario Id", |r| r.scenario_id.to_string()),
    ("Total Demand, D (M)", |r| format!("{:.2}", r.total_demand)),
    ("Product Similarity, gamma", |r| format!("{:.2}", r.gamma)),
    ("Pfizer Target Profit, P_Pf ($M)", |r| {
        format!("{:.1}", r.target_profit[0])
    }),
    ("Pfizer Production Cost, d_Pf ($)", |r| {
        format!("{:.2}", r.unit_cost[0])
    }),
    ("Moderna Target Profit, P_Mod ($M)", |r| {
        format!("{:.1}", r.target_profit[1])
    }),
    ("Moderna Production Cost, d_Mod ($)", |r| {
        format!("{:.2}", r.unit_cost[1])
    }),
    ("Private Sector Equilibrium Price, p_priv ($)", |r| {
        format!("{:.2}", r.p_priv)
    }),
    ("Private Sector Equilibrium Quantity, q_priv (M)", |r| {
        format!("{:.1}", r.q_priv)
    }),
    ("Pfizer Public Sector Price, p_pub_Pf ($)", |r| {
        format!("{:.2}", r.p_pub[0])
    }),
    ("Pfizer Public Sector Quantity, q_pub_Pf (M)", |r| {
        format!("{:.1}", r.q_pub[0])
    }),
    ("Pfizer Profit Realized ($M)", |r| profit_cell(r, 0)),
    ("Moderna Public Sector Price, p_pub_Mod ($)", |r| {
        format!("{:.2}", r.p_pub[1])
    }),
    ("Moderna Public Sector Quantity, q_pub_Mod (M)", |r| {
        format!("{:.1}", r.q_pub[1])
    }),
    ("Moderna Profit Realized ($M)", |r| profit_cell(r, 1)),
];

pub fn render(rows: &[SweepResultRow], bands: [PriceBand; 2]) -> String {
    let mut out = String::new();
    if rows.is_empty() {
        let _ = writeln!(
            out,
            "no interior scenario with Pfizer price in {} and Moderna price in {}",
            bands[0], bands[1]
        );
        return out;
    }
    let label_w = LINES
        .iter()
        .map(|(l, _)| l.len())
        .max()
        .unwrap_or(0)
        .max("Scenario".len());
    let cells: Vec<Vec<String>> = LINES
        .iter()
        .map(|(_, f)| rows.iter().map(f).collect())
        .collect();
    let col_w = cells
        .iter()
        .flatten()
        .map(String::len)
        .max()
        .unwrap_or(0)
        .max(rows.len().to_string().len());

    let _ = write!(out, "{:<label_w$}", "Scenario");
    for i in 1..=rows.len() {
        let _ = write!(out, "  {i:>col_w$}");
    }
    out.push('\n');
    for ((label, _), line) in LINES.iter().zip(&cells) {
        let _ = write!(out, "{label:<label_w$}");
        for c in line {
            let _ = write!(out, "  {c:>col_w$}");
        }
        out.push('\n');
    }
    out.push_str("* realized profit above target\n");
    out
}

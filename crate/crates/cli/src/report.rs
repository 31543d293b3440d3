use std::fmt::Write as _;

use rolloutkit::multidim::SolveLedger;
use rolloutkit_oracle::{OracleBudget, DEFAULT_BUDGET};
use serde::Serialize;

pub const BUDGET_ENV: &str = "ROLLOUTKIT_BUDGET";

/// Oracle budget from the environment, or the default.
pub fn oracle_budget() -> anyhow::Result<OracleBudget> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => {
            let limit = v
                .trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("{BUDGET_ENV} must be a nonnegative integer, got {v:?}"))?;
            Ok(OracleBudget::new(limit))
        }
        Err(_) => Ok(OracleBudget::new(DEFAULT_BUDGET)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceDescriptor {
    pub kind: &'static str,
    /// Free-form dimensions, e.g. `n=5` or `layers=3 m=4`.
    pub size: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Counts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auction_2d_solves: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rollout_phase_solves: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<SolveLedger>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transport_solves: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic_calls: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auction_rounds: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub instance: InstanceDescriptor,
    pub solver: String,
    pub cost: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_cost: Option<f64>,
    /// Why the oracle did not run, when `--verify` was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_note: Option<String>,
    pub counts: Counts,
    /// Excluded from determinism comparisons.
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn table(&self) -> String {
        let mut rows: Vec<(&str, String)> = vec![
            ("instance", format!("{} ({})", self.instance.kind, self.instance.size)),
            ("solver", self.solver.clone()),
            ("cost", self.cost.to_string()),
        ];
        if let Some(b) = self.baseline_cost {
            rows.push(("baseline cost", b.to_string()));
        }
        if let Some(o) = self.oracle_cost {
            rows.push(("oracle cost", o.to_string()));
        }
        if let Some(n) = &self.oracle_note {
            rows.push(("oracle", n.clone()));
        }
        let c = &self.counts;
        let counts = [
            ("2D auction solves", c.auction_2d_solves),
            ("rollout-phase solves", c.rollout_phase_solves),
            ("transport solves", c.transport_solves),
            ("heuristic calls", c.heuristic_calls),
            ("auction rounds", c.auction_rounds),
        ];
        rows.extend(counts.iter().filter_map(|(k, v)| v.map(|v| (*k, v.to_string()))));
        if let Some(l) = c.ledger {
            rows.push((
                "ledger",
                format!("initial {} + sweep {} + final {}", l.initial, l.sweep, l.final_pass),
            ));
        }
        rows.push(("wall time", format!("{:.2} ms", self.wall_time_ms)));
        if let Some(s) = self.seed {
            rows.push(("seed", s.to_string()));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

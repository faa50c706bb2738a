use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::algebra::{fuzz_associativity, fuzz_commutativity, fuzz_idempotence, fuzz_negation};
use super::shadow::{check_shadow_grid, shadow_grid};
use super::soundness::fuzz_soundness;
use super::verdict::{Property, Status, Verdict};
use super::MetaError;
use crate::lang::FunRegistry;
use crate::semantics::Backend;

pub const TABLE2_SCHEMA_VERSION: u32 = 1;

/// Smallest accepted fuzzing budget.
pub const MIN_BUDGET: u64 = 1000;

/// The yes/no/undefined pattern of the property matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Pattern {
    pub schema_version: u32,
    pub columns: Vec<Property>,
    pub rows: Vec<PatternRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRow {
    pub logic: String,
    pub cells: Vec<Status>,
}

impl Table2Pattern {
    /// The published matrix, with DL2 negation reported as undefined and
    /// DL2/STL soundness meaning the negation-free fragment.
    pub fn expected() -> Self {
        use Status::{No as N, Undefined as U, Yes as Y};
        let rows = [
            ("godel", [Y, Y, Y, Y, Y, N]),
            ("lukasiewicz", [Y, N, Y, Y, N, N]),
            ("yager", [Y, N, Y, Y, N, N]),
            ("product", [Y, N, Y, Y, Y, Y]),
            ("dl2", [U, N, Y, Y, Y, Y]),
            ("stl", [Y, Y, Y, N, Y, Y]),
        ];
        Table2Pattern {
            schema_version: TABLE2_SCHEMA_VERSION,
            columns: Property::TABLE2.to_vec(),
            rows: rows.iter().map(|(l, c)| PatternRow { logic: l.to_string(), cells: c.to_vec() }).collect(),
        }
    }

    /// Cells where `self` (computed) and `golden` differ, matched by logic
    /// and property. Cells present on one side only are reported with
    /// `None` on the other.
    pub fn diff(&self, golden: &Table2Pattern) -> Vec<CellDiff> {
        let cells = |p: &Table2Pattern| -> Vec<(String, Property, Status)> {
            p.rows
                .iter()
                .flat_map(|r| p.columns.iter().zip(&r.cells).map(move |(c, s)| (r.logic.clone(), *c, *s)))
                .collect()
        };
        let (ours, theirs) = (cells(self), cells(golden));
        let find = |v: &[(String, Property, Status)], l: &str, p: Property| {
            v.iter().find(|(l2, p2, _)| l2 == l && *p2 == p).map(|c| c.2)
        };
        let mut out = Vec::new();
        for (l, p, s) in &ours {
            let g = find(&theirs, l, *p);
            if g != Some(*s) {
                out.push(CellDiff { logic: l.clone(), property: *p, computed: Some(*s), golden: g });
            }
        }
        for (l, p, s) in &theirs {
            if find(&ours, l, *p).is_none() {
                out.push(CellDiff { logic: l.clone(), property: *p, computed: None, golden: Some(*s) });
            }
        }
        out
    }
}

/// One disagreement between a computed and a golden pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellDiff {
    pub logic: String,
    pub property: Property,
    pub computed: Option<Status>,
    pub golden: Option<Status>,
}

/// The computed property matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2 {
    pub schema_version: u32,
    pub budget: u64,
    pub seed: u64,
    pub rows: Vec<Table2Row>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2Row {
    pub logic: String,
    pub backend: Backend,
    pub cells: Vec<Verdict>,
}

/// Check every property of [`Property::TABLE2`] for the six standard
/// backends. Fuzzed properties use `budget` trials each; the result is a
/// function of `(budget, seed)` only.
pub fn run_table2(budget: u64, seed: u64) -> Result<Table2, MetaError> {
    if budget < MIN_BUDGET {
        return Err(MetaError::InvalidParameter(format!("budget must be at least {MIN_BUDGET}")));
    }
    let reg = table2_registry();
    let mut rows = Vec::new();
    for b in Backend::standard_six() {
        let (ms, ps) = shadow_grid(b);
        let cells = vec![
            fuzz_negation(b, budget, seed)?,
            fuzz_idempotence(b, budget, seed)?,
            fuzz_commutativity(b, budget, seed)?,
            fuzz_associativity(b, budget, seed)?,
            fuzz_soundness(b, budget, seed, &reg)?,
            check_shadow_grid(b, &ms, &ps)?,
        ];
        rows.push(Table2Row { logic: b.family().to_string(), backend: b, cells });
    }
    Ok(Table2 { schema_version: TABLE2_SCHEMA_VERSION, budget, seed, rows })
}

/// The registry the soundness generator draws functions from; witnesses
/// replay against it.
pub fn table2_registry() -> FunRegistry {
    FunRegistry::standard(&[1, 2, 3])
}

fn row_label(b: Backend) -> String {
    match b {
        Backend::Godel => "Gödel".into(),
        Backend::Lukasiewicz => "Łukasiewicz".into(),
        Backend::Yager { p } => format!("Yager (p={p})"),
        Backend::Product => "product".into(),
        Backend::Dl2 { .. } => "DL2".into(),
        Backend::Stl { nu, .. } => format!("STL (ν={nu})"),
    }
}

impl Table2 {
    pub fn pattern(&self) -> Table2Pattern {
        Table2Pattern {
            schema_version: TABLE2_SCHEMA_VERSION,
            columns: Property::TABLE2.to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| PatternRow { logic: r.logic.clone(), cells: r.cells.iter().map(|v| v.status).collect() })
                .collect(),
        }
    }

    /// Replay the witness of every cell that has one, as
    /// `(logic, property, reproduces)`.
    pub fn replay_witnesses(&self) -> Result<Vec<(String, Property, bool)>, MetaError> {
        let reg = table2_registry();
        let mut out = Vec::new();
        for row in &self.rows {
            for cell in row.cells.iter().filter(|c| c.witness.is_some()) {
                out.push((row.logic.clone(), cell.property, cell.replay(&reg)?));
            }
        }
        Ok(out)
    }

    /// Plain-text matrix followed by the witness of every failing cell.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:<16}", "Properties:");
        for p in Property::TABLE2 {
            let _ = write!(out, "{:<16}", p.label());
        }
        out = out.trim_end().to_string();
        out.push('\n');
        for row in &self.rows {
            let label = row_label(row.backend);
            let pad = 16usize.saturating_sub(label.chars().count());
            let _ = write!(out, "{label}{}", " ".repeat(pad));
            let mut line = String::new();
            for cell in &row.cells {
                let mut s = cell.status.to_string();
                if cell.property == Property::Soundness && !row.backend.is_fuzzy() && cell.holds() {
                    s.push('†');
                }
                let pad = 16usize.saturating_sub(s.chars().count());
                let _ = write!(line, "{s}{}", " ".repeat(pad));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out.push_str("†: negation-free fragment\n");
        let mut witnesses = String::new();
        for row in &self.rows {
            for cell in &row.cells {
                if let Some(w) = &cell.witness {
                    let _ = writeln!(witnesses, "  {} / {}: {}", row_label(row.backend), cell.property, w.describe());
                }
            }
        }
        if !witnesses.is_empty() {
            out.push_str("\nwitnesses:\n");
            out.push_str(&witnesses);
        }
        out
    }
}

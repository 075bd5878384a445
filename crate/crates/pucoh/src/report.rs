//! Verification reports: one row per degree, two sides, a status.

use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub struct DegreeRow {
    pub degree: usize,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

impl DegreeRow {
    pub fn new(degree: usize, lhs: impl ToString, rhs: impl ToString, ok: bool) -> DegreeRow {
        DegreeRow {
            degree,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            ok,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub target: String,
    /// free-form context lines (parameters, sign conventions, seeds)
    pub notes: Vec<String>,
    pub rows: Vec<DegreeRow>,
}

impl VerifyReport {
    pub fn new(target: impl ToString) -> VerifyReport {
        VerifyReport {
            target: target.to_string(),
            notes: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl ToString) {
        self.notes.push(line.to_string());
    }

    pub fn push(&mut self, row: DegreeRow) {
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn failures(&self) -> Vec<&DegreeRow> {
        self.rows.iter().filter(|r| !r.ok).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        let _ = writeln!(out, "degree,lhs_dim_or_factors,rhs_dim_or_factors,status");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                row.degree,
                row.lhs,
                row.rhs,
                if row.ok { "OK" } else { "FAIL" }
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.target);
        for note in &self.notes {
            let _ = writeln!(out, "   {note}");
        }
        let w_lhs = self.rows.iter().map(|r| r.lhs.len()).max().unwrap_or(3).max(3);
        let w_rhs = self.rows.iter().map(|r| r.rhs.len()).max().unwrap_or(3).max(3);
        let _ = writeln!(out, "{:>6}  {:>w_lhs$}  {:>w_rhs$}  status", "deg", "lhs", "rhs");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:>6}  {:>w_lhs$}  {:>w_rhs$}  {}",
                row.degree,
                row.lhs,
                row.rhs,
                if row.ok { "OK" } else { "FAIL" }
            );
        }
        let _ = writeln!(
            out,
            "result: {}",
            if self.passed() { "all degrees OK" } else { "FALSIFIED" }
        );
        out
    }
}

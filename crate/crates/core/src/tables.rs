//! Golden copies of the published density tables, and a checker that
//! recomputes every cell and compares the certified rendering.

use crate::density::{greedy_density, lower_bound_mq, upper_bound_no, upper_bound_simple_report};
use crate::error::{Error, Result};
use crate::numeric::{describe, Interval};

/// One published cell. `expected` is stored as printed, e.g. `.648361`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldenCell {
    pub q: u64,
    pub column: Column,
    pub expected: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Greedy,
    LowerMq,
    UpperSimple,
    UpperNo,
}

impl Column {
    pub fn label(self) -> &'static str {
        match self {
            Column::Greedy => "greedy",
            Column::LowerMq => "lower",
            Column::UpperSimple => "upper-simple",
            Column::UpperNo => "upper-no",
        }
    }
}

impl GoldenCell {
    /// Decimal places printed in the cell.
    pub fn digits(&self) -> u32 {
        let frac = self.expected.split('.').nth(1).unwrap_or("");
        frac.len() as u32
    }

    /// `expected` with a leading `0` so it compares with rendered values.
    pub fn normalized(&self) -> String {
        if self.expected.starts_with('.') {
            format!("0{}", self.expected)
        } else {
            self.expected.to_string()
        }
    }
}

const fn cell(q: u64, column: Column, expected: &'static str) -> GoldenCell {
    GoldenCell { q, column, expected }
}

pub const TABLE1: [GoldenCell; 12] = [
    cell(2, Column::Greedy, ".648361"),
    cell(3, Column::Greedy, ".747027"),
    cell(4, Column::Greedy, ".799231"),
    cell(5, Column::Greedy, ".833069"),
    cell(7, Column::Greedy, ".874948"),
    cell(8, Column::Greedy, ".888862"),
    cell(9, Column::Greedy, ".899985"),
    cell(25, Column::Greedy, ".961538"),
    cell(27, Column::Greedy, ".964286"),
    cell(49, Column::Greedy, ".980000"),
    cell(125, Column::Greedy, ".992063"),
    cell(343, Column::Greedy, ".997093"),
];

pub const TABLE2: [GoldenCell; 12] = [
    cell(2, Column::LowerMq, ".845398"),
    cell(3, Column::LowerMq, ".921858"),
    cell(4, Column::LowerMq, ".952152"),
    cell(5, Column::LowerMq, ".96768"),
    cell(7, Column::LowerMq, ".982448"),
    cell(8, Column::LowerMq, ".986298"),
    cell(9, Column::LowerMq, ".989009"),
    cell(25, Column::LowerMq, ".998464"),
    cell(27, Column::LowerMq, ".998679"),
    cell(49, Column::LowerMq, ".999592"),
    cell(125, Column::LowerMq, ".999937"),
    cell(343, Column::LowerMq, ".999992"),
];

const TABLE3_ROWS: [(u64, &str, &str, &str); 14] = [
    (2, "0.857142857", "0.846375541", "0.845397956"),
    (3, "0.923076923", "0.921925273", "0.921857532"),
    (4, "0.952380952", "0.952160653", "0.952152070"),
    (5, "0.967741935", "0.967682134", "0.967680495"),
    (7, "0.982456140", "0.982447941", "0.982447814"),
    (8, "0.986301370", "0.986297660", "0.986297615"),
    (9, "0.989010989", "0.989009149", "0.989009131"),
    (11, "0.992481203", "0.992480647", "0.992480643"),
    (13, "0.994535519", "0.994535314", "0.994535313"),
    (16, "0.996336996", "0.996336937", "0.996336937"),
    (17, "0.996742671", "0.996742630", "0.996742630"),
    (19, "0.997375328", "0.997375307", "0.997375307"),
    (23, "0.998191682", "0.998191675", "0.998191675"),
    (25, "0.998463902", "0.998463898", "0.998463898"),
];

/// Table 3 flattened to cells, row by row: simple bound, progression bound,
/// lower bound.
pub fn table3() -> Vec<GoldenCell> {
    TABLE3_ROWS
        .iter()
        .flat_map(|&(q, simple, no, lower)| {
            [
                cell(q, Column::UpperSimple, simple),
                cell(q, Column::UpperNo, no),
                cell(q, Column::LowerMq, lower),
            ]
        })
        .collect()
}

pub fn golden(which: u8) -> Result<Vec<GoldenCell>> {
    match which {
        1 => Ok(TABLE1.to_vec()),
        2 => Ok(TABLE2.to_vec()),
        3 => Ok(table3()),
        _ => Err(Error::InvalidArgument(format!("no table {which}; expected 1, 2 or 3"))),
    }
}

/// Outcome for one cell.
#[derive(Debug, Clone)]
pub struct CellCheck {
    pub cell: GoldenCell,
    pub computed: String,
    pub interval: Interval,
    pub pass: bool,
}

impl CellCheck {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} q={} {}: expected {} computed {}",
            self.cell.q,
            self.cell.column.label(),
            self.cell.normalized(),
            self.computed
        );
        if !self.pass {
            s.push_str(&format!(" interval {}", describe(&self.interval, self.cell.digits() + 3)));
        }
        s
    }
}

/// Recomputes a single cell at the precision printed in it.
pub fn check_cell(c: &GoldenCell) -> Result<CellCheck> {
    let digits = c.digits();
    let report = match c.column {
        Column::Greedy => greedy_density(c.q, digits)?,
        Column::LowerMq => lower_bound_mq(c.q, digits)?,
        Column::UpperSimple => upper_bound_simple_report(c.q, digits)?,
        Column::UpperNo => upper_bound_no(c.q, digits)?,
    };
    Ok(CellCheck {
        cell: *c,
        pass: report.rendered == c.normalized(),
        computed: report.rendered,
        interval: report.value,
    })
}

/// Checks every cell of table `which` (1, 2 or 3).
pub fn verify_table(which: u8) -> Result<Vec<CellCheck>> {
    golden(which)?.iter().map(check_cell).collect()
}

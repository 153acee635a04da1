//! Built-in reference parameter tables.
//!
//! Each row carries the six coefficients in input order (third column
//! signed), the reference fixed-point value rounded to four significant
//! digits, and the forcing period. Table I rows produce period-T
//! solutions, Table II rows period-2T solutions.

#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub a1: f64,
    pub a2: f64,
    pub a3_signed: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub h_reference: f64,
    pub period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    I,
    II,
}

impl TableId {
    pub fn as_str(&self) -> &'static str {
        match self {
            TableId::I => "I",
            TableId::II => "II",
        }
    }
}

const fn row(
    a1: f64,
    a2: f64,
    a3_signed: f64,
    p1: f64,
    p2: f64,
    p3: f64,
    h_reference: f64,
    period: f64,
) -> TableRow {
    TableRow {
        a1,
        a2,
        a3_signed,
        p1,
        p2,
        p3,
        h_reference,
        period,
    }
}

pub const TABLE_I: [TableRow; 20] = [
    row(0.5, 0.1, -0.1, 3.0, 1.0, 0.5, 0.2812, 4.5),
    row(0.5, 0.1, -0.5, 3.0, 1.0, 0.5, 0.4062, 4.5),
    row(1.0, 0.1, -0.1, 3.0, 1.0, 1.0, 0.5556, 5.0),
    row(5.0, 0.1, -1.0, 3.0, 1.0, 1.0, 3.01, 5.0),
    row(5.0, 1.0, -2.0, 3.0, 1.0, 1.0, 3.75, 5.0),
    row(5.0, 3.0, -1.0, 3.0, 1.0, 1.0, 3.75, 5.0),
    row(10.0, 0.1, -0.5, 3.0, 1.0, 1.0, 5.253, 5.0),
    row(10.0, 0.5, -0.5, 3.0, 1.0, 1.0, 5.263, 5.0),
    row(3.0, 0.5, -0.1, 3.0, 1.0, 5.0, 1.8, 9.0),
    row(5.0, 3.0, -0.1, 3.0, 1.0, 5.0, 3.125, 9.0),
    row(10.0, 0.5, -0.1, 3.0, 1.0, 5.0, 5.263, 9.0),
    row(10.0, 3.0, -0.1, 3.0, 1.0, 5.0, 5.357, 9.0),
    row(3.0, 0.1, -1.0, 5.0, 0.5, 5.0, 7.009, 10.5),
    row(0.5, 0.1, -2.0, 5.0, 1.0, 0.5, 1.25, 6.5),
    row(1.0, 0.5, -2.0, 5.0, 1.0, 1.0, 2.5, 7.0),
    row(1.0, 0.1, -0.5, 5.0, 1.0, 5.0, 2.778, 11.0),
    row(0.5, 0.1, -1.0, 5.0, 3.0, 1.0, 1.125, 9.0),
    row(0.5, 0.1, -2.0, 5.0, 3.0, 0.5, 1.125, 8.5),
    row(3.0, 0.5, -1.0, 5.0, 1.0, 5.0, 6.9, 11.0),
    row(5.0, 1.0, -2.0, 5.0, 1.0, 5.0, 12.5, 11.0),
];

pub const TABLE_II: [TableRow; 20] = [
    row(0.5, 0.1, -0.1, 0.5, 1.0, 0.5, 0.1875, 2.0),
    row(0.5, 0.1, -0.1, 1.0, 3.0, 0.5, 0.1562, 4.5),
    row(0.5, 0.1, -1.0, 3.0, 1.0, 1.0, 1.25, 5.0),
    row(1.0, 0.1, -0.1, 1.0, 3.0, 0.5, 0.4167, 4.5),
    row(1.0, 0.5, -2.0, 3.0, 1.0, 1.0, 2.5, 5.0),
    row(1.0, 0.1, -0.1, 0.5, 5.0, 0.5, 0.0833, 6.0),
    row(1.0, 0.1, -0.5, 0.5, 3.0, 0.5, 0.3056, 4.0),
    row(3.0, 0.1, -0.1, 0.5, 3.0, 1.0, 0.7241, 4.5),
    row(3.0, 0.1, -1.0, 1.0, 1.0, 0.5, 1.759, 2.5),
    row(3.0, 0.1, -2.0, 0.5, 5.0, 0.5, 1.086, 6.0),
    row(5.0, 0.1, -0.1, 0.5, 1.0, 0.5, 1.301, 2.0),
    row(5.0, 1.0, -0.1, 0.5, 3.0, 0.5, 0.3438, 4.0),
    row(5.0, 1.0, -0.5, 0.5, 1.0, 1.0, 1.875, 2.5),
    row(5.0, 1.0, -2.0, 1.0, 1.0, 1.0, 3.75, 3.0),
    row(5.0, 1.0, -2.0, 1.0, 3.0, 1.0, 2.5, 5.0),
    row(5.0, 3.0, -2.0, 1.0, 1.0, 0.5, 3.75, 2.5),
    row(10.0, 0.1, -0.5, 0.5, 3.0, 1.0, 2.677, 4.5),
    row(10.0, 0.5, -2.0, 0.5, 1.0, 0.5, 3.158, 2.0),
    row(10.0, 3.0, -1.0, 1.0, 3.0, 1.0, 1.429, 5.0),
    row(10.0, 5.0, -2.0, 1.0, 1.0, 1.0, 7.0, 3.0),
];

pub fn rows(which: TableId) -> &'static [TableRow] {
    match which {
        TableId::I => &TABLE_I,
        TableId::II => &TABLE_II,
    }
}

use std::fmt::Display;

use serde_json::Value;

use cybundle::fga::{IntMatrix, Rational};

/// Machine-readable value plus the lines printed in text mode.
pub struct Report {
    pub json: Value,
    lines: Vec<String>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report { json, lines: Vec::new() }
    }

    pub fn line(&mut self, s: String) {
        self.lines.push(s);
    }

    pub fn text(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

fn tuple<T: Display>(xs: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_rationals(xs: &[Rational]) -> String {
    tuple(xs)
}

pub fn fmt_ints<T: Display>(xs: &[T]) -> String {
    tuple(xs)
}

pub fn fmt_matrix(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|i| fmt_ints(m.row(i))).collect();
    format!("[{}]", rows.join(", "))
}

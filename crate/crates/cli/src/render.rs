//! Text and JSON renderings of model cells.

use serde_json::{json, Value};

use pasting::bicategory::matrix::{MatrixCell, MatrixModel, Semiring};
use pasting::bicategory::span::{SpanCell, SpanModel};
use pasting::Bicategory;

pub(crate) trait Render: Bicategory {
    const NAME: &'static str;
    fn cell_text(&self, c: &Self::TwoCell) -> String;
    fn cell_json(&self, c: &Self::TwoCell) -> Value;
}

impl Render for SpanModel {
    const NAME: &'static str = "span";

    fn cell_text(&self, c: &SpanCell) -> String {
        c.table()
            .into_iter()
            .map(|(a, b)| format!("    {a} -> {b}\n"))
            .collect()
    }

    fn cell_json(&self, c: &SpanCell) -> Value {
        let table: Vec<Value> = c
            .table()
            .into_iter()
            .map(|(a, b)| json!([a.to_string(), b.to_string()]))
            .collect();
        json!({ "apex_size": c.dom().apex().len(), "table": table })
    }
}

impl<S: Semiring + std::fmt::Display> Render for MatrixModel<S> {
    const NAME: &'static str = "matrix";

    fn cell_text(&self, c: &MatrixCell<S>) -> String {
        let m = c.matrix();
        (0..m.rows())
            .map(|i| {
                let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
                format!("    [ {} ]\n", row.join(" "))
            })
            .collect()
    }

    fn cell_json(&self, c: &MatrixCell<S>) -> Value {
        let m = c.matrix();
        let rows: Vec<Vec<String>> = (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        json!({ "rows": m.rows(), "cols": m.cols(), "entries": rows })
    }
}

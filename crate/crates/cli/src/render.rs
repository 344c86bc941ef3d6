use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
    Text,
}

/// Rows with a header; the common shape behind CSV and default LaTeX output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        writeln!(out, "\\begin{{tabular}}{{{}}}", "l".repeat(self.headers.len())).unwrap();
        writeln!(out, "{} \\\\ \\hline", self.headers.iter().map(|h| latex_escape(h)).collect::<Vec<_>>().join(" & ")).unwrap();
        for row in &self.rows {
            writeln!(out, "{} \\\\", row.iter().map(|c| latex_escape(c)).collect::<Vec<_>>().join(" & ")).unwrap();
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

fn latex_escape(s: &str) -> String {
    s.replace('_', "\\_").replace('#', "\\#").replace('&', "\\&")
}

/// Everything a command can print; `render` picks the requested view.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub table: Table,
    pub latex: Option<String>,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.table.to_csv(),
            Format::Latex => self.latex.clone().unwrap_or_else(|| self.table.to_latex()),
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}

/// Large counts as JSON numbers when they fit in 64 bits, strings otherwise.
pub fn big(value: u128) -> Value {
    match u64::try_from(value) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(value.to_string()),
    }
}

/// `1 + 2t + 3t^2` as LaTeX, with braces around multi-digit exponents.
pub fn latex_poly(text: &str) -> String {
    let mut out = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '^' {
            let mut exp = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                exp.push(*d);
                chars.next();
            }
            write!(out, "^{{{exp}}}").unwrap();
        } else {
            out.push(c);
        }
    }
    format!("${out}$\n")
}

/// A grid with rows indexed by `q` and columns by `p`, as in the usual
/// tables of bigraded cohomology; empty cells are left blank.
pub fn latex_grid(cells: &[((usize, usize), String)]) -> String {
    let max_p = cells.iter().map(|((p, _), _)| *p).max().unwrap_or(0);
    let max_q = cells.iter().map(|((_, q), _)| *q).max().unwrap_or(0);
    let mut out = String::new();
    writeln!(out, "\\begin{{tabular}}{{c|{}}}", "c".repeat(max_p + 1)).unwrap();
    let header: Vec<String> = (0..=max_p).map(|p| p.to_string()).collect();
    writeln!(out, "$q \\backslash p$ & {} \\\\ \\hline", header.join(" & ")).unwrap();
    for q in (0..=max_q).rev() {
        let row: Vec<String> = (0..=max_p)
            .map(|p| {
                cells
                    .iter()
                    .find(|((a, b), _)| (*a, *b) == (p, q))
                    .map(|(_, s)| format!("${s}$"))
                    .unwrap_or_default()
            })
            .collect();
        writeln!(out, "{q} & {} \\\\", row.join(" & ")).unwrap();
    }
    out.push_str("\\end{tabular}\n");
    out
}

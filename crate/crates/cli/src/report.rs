//! Job results and their three renderings.

use hochschild::bvalgebra::{BVElement, Monomial, PresentedBVAlgebra};
use hochschild::{ModuleDescriptor, RingSpec};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// A cell carries a plain rendering and a LaTeX one.
#[derive(Clone, Debug)]
pub struct Cell {
    pub plain: String,
    pub tex: String,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        let plain = s.into();
        Cell {
            tex: escape_tex(&plain),
            plain,
        }
    }

    pub fn math(plain: impl Into<String>, tex: impl Into<String>) -> Cell {
        Cell {
            plain: plain.into(),
            tex: format!("${}$", tex.into()),
        }
    }

    pub fn module(d: &ModuleDescriptor) -> Cell {
        Cell::math(d.to_string(), module_tex(d))
    }

    pub fn element(e: &BVElement) -> Cell {
        Cell::math(e.to_string(), poly_tex(&e.to_string()))
    }

    pub fn int(k: impl ToString) -> Cell {
        let s = k.to_string();
        Cell::math(s.clone(), s)
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub caption: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug)]
pub struct Report {
    pub job: &'static str,
    pub ring: RingSpec,
    pub parameters: Value,
    pub results: Vec<Value>,
    pub extra: Map<String, Value>,
    pub preamble: Vec<Cell>,
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
    pub failed: bool,
}

impl Report {
    pub fn new(job: &'static str, ring: RingSpec, parameters: Value) -> Report {
        Report {
            job,
            ring,
            parameters,
            results: Vec::new(),
            extra: Map::new(),
            preamble: Vec::new(),
            tables: Vec::new(),
            summary: Vec::new(),
            failed: false,
        }
    }

    pub fn to_json(&self) -> String {
        let mut doc = self.extra.clone();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("job".into(), json!(self.job));
        doc.insert("ring".into(), json!(self.ring.to_string()));
        doc.insert("parameters".into(), self.parameters.clone());
        doc.insert("results".into(), Value::Array(self.results.clone()));
        let mut s =
            serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.preamble {
            out.push_str(&c.plain);
            out.push('\n');
        }
        for t in &self.tables {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&t.caption);
            out.push('\n');
            let mut width: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
            for r in &t.rows {
                for (w, c) in width.iter_mut().zip(r) {
                    *w = (*w).max(c.plain.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&width)
                    .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                    .collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(t.header.iter().map(String::as_str).collect()));
            out.push_str(&line(
                width
                    .iter()
                    .map(|w| "-".repeat(*w))
                    .collect::<Vec<_>>()
                    .iter()
                    .map(String::as_str)
                    .collect(),
            ));
            for r in &t.rows {
                out.push_str(&line(r.iter().map(|c| c.plain.as_str()).collect()));
            }
        }
        if !self.summary.is_empty() {
            out.push('\n');
            for s in &self.summary {
                out.push_str(s);
                out.push('\n');
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::from(
            "\\documentclass{article}\n\\usepackage{amsmath,amssymb}\n\\begin{document}\n",
        );
        for c in &self.preamble {
            out.push_str(&format!("\\noindent {}\n\n", c.tex));
        }
        for t in &self.tables {
            out.push_str("\\begin{table}[h]\n\\centering\n");
            out.push_str(&format!(
                "\\begin{{tabular}}{{{}}}\n\\hline\n",
                "l".repeat(t.header.len())
            ));
            let head: Vec<String> = t.header.iter().map(|h| escape_tex(h)).collect();
            out.push_str(&format!("{} \\\\\n\\hline\n", head.join(" & ")));
            for r in &t.rows {
                let cells: Vec<&str> = r.iter().map(|c| c.tex.as_str()).collect();
                out.push_str(&format!("{} \\\\\n", cells.join(" & ")));
            }
            out.push_str("\\hline\n\\end{tabular}\n");
            out.push_str(&format!(
                "\\caption{{{}}}\n\\end{{table}}\n",
                escape_tex(&t.caption)
            ));
        }
        for s in &self.summary {
            out.push_str(&format!("\n\\noindent {}\n", escape_tex(s)));
        }
        out.push_str("\\end{document}\n");
        out
    }
}

pub fn escape_tex(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\textbackslash{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            'Δ' => out.push_str("$\\Delta$"),
            'Φ' => out.push_str("$\\Phi$"),
            _ => out.push(ch),
        }
    }
    out
}

pub fn ring_tex(r: RingSpec) -> String {
    match r {
        RingSpec::Integers => "\\mathbb{Z}".into(),
        RingSpec::Rationals => "\\mathbb{Q}".into(),
        RingSpec::PrimeField(p) => format!("\\mathbb{{F}}_{{{p}}}"),
    }
}

pub fn module_tex(d: &ModuleDescriptor) -> String {
    let mut parts = Vec::new();
    match d.free_rank {
        0 => {}
        1 => parts.push(ring_tex(d.ring)),
        k => parts.push(format!("{}^{{{k}}}", ring_tex(d.ring))),
    }
    for t in &d.torsion {
        parts.push(format!("\\mathbb{{Z}}/{t}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" \\oplus ")
    }
}

/// `-5*t*u^2` to `-5 t u^{2}`.
pub fn poly_tex(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '*' => out.push(' '),
            '^' => {
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                out.push_str(&format!("^{{{digits}}}"));
            }
            _ => out.push(ch),
        }
    }
    out
}

pub fn module_json(d: &ModuleDescriptor) -> Value {
    json!({
        "free_rank": d.free_rank,
        "torsion": d.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    })
}

pub fn monomial_json(alg: &PresentedBVAlgebra, e: &Monomial) -> Value {
    let m: Map<String, Value> = alg
        .generators
        .iter()
        .zip(e)
        .map(|(g, k)| (g.name.clone(), json!(k)))
        .collect();
    Value::Object(m)
}

pub fn element_json(e: &BVElement) -> Value {
    Value::Array(
        e.terms()
            .iter()
            .map(|(m, c)| json!({"monomial": monomial_json(e.parent(), m), "coeff": c.to_string()}))
            .collect(),
    )
}

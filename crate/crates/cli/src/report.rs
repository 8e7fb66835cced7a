use std::fmt::Write;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

enum Entry {
    Pair(String, String),
    Table {
        name: String,
        columns: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

/// Key-value document with optional tables; rendered for people or as
/// `key=value` lines.
pub struct Report {
    command: String,
    entries: Vec<Entry>,
}

impl Report {
    pub fn new(command: &str, input: &str, convention: &str) -> Self {
        let mut r = Report {
            command: command.to_string(),
            entries: Vec::new(),
        };
        r.put("version", dehnvol_core::VERSION);
        r.put("command", command);
        r.put("input", input);
        r.put("convention", convention);
        r
    }

    pub fn put(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries
            .push(Entry::Pair(key.to_string(), value.to_string()));
        self
    }

    pub fn table(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.entries.push(Entry::Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human(),
            Format::Machine => self.machine(),
        }
    }

    fn human(&self) -> String {
        let width = self
            .entries
            .iter()
            .filter_map(|e| match e {
                Entry::Pair(k, _) => Some(k.len()),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let mut out = format!("dehnvol {}\n", self.command);
        for e in &self.entries {
            match e {
                Entry::Pair(k, v) if k != "command" => {
                    let _ = writeln!(out, "  {k:<width$}  {v}");
                }
                Entry::Pair(..) => {}
                Entry::Table {
                    name,
                    columns,
                    rows,
                } => {
                    let mut widths: Vec<usize> =
                        columns.iter().map(|c| c.chars().count()).collect();
                    for row in rows {
                        for (w, cell) in widths.iter_mut().zip(row) {
                            *w = (*w).max(cell.chars().count());
                        }
                    }
                    let line = |cells: &[String]| {
                        let padded: Vec<String> = cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:>w$}", w = *w))
                            .collect();
                        format!("    {}", padded.join("  ")).trim_end().to_string()
                    };
                    let _ = writeln!(out, "  {name}:");
                    let _ = writeln!(out, "{}", line(columns));
                    for row in rows {
                        let _ = writeln!(out, "{}", line(row));
                    }
                }
            }
        }
        out
    }

    fn machine(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match e {
                Entry::Pair(k, v) => {
                    let _ = writeln!(out, "{k}={}", ascii(v));
                }
                Entry::Table {
                    name,
                    columns,
                    rows,
                } => {
                    let _ = writeln!(out, "{name}.columns={}", columns.join(","));
                    let _ = writeln!(out, "{name}.rows={}", rows.len());
                    for (i, row) in rows.iter().enumerate() {
                        let cells: Vec<String> =
                            row.iter().map(|c| ascii(c).replace(',', ";")).collect();
                        let _ = writeln!(out, "{name}.{i}={}", cells.join(","));
                    }
                }
            }
        }
        out
    }
}

pub fn ascii(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '√' => {
                out.push_str("sqrt(");
                while let Some(d) = chars.next_if(|d| d.is_ascii_digit()) {
                    out.push(d);
                }
                out.push(')');
            }
            '·' => out.push('*'),
            'ε' => out.push_str("eps"),
            'λ' => out.push_str("lambda"),
            'θ' => out.push_str("theta"),
            '≤' => out.push_str("<="),
            '±' => out.push_str("+-"),
            c if c.is_ascii() => out.push(c),
            _ => out.push('?'),
        }
    }
    out
}

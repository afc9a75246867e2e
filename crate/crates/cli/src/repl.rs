//! Line-at-a-time TSQL loop. Results go to `out`; errors go to `err` with a
//! caret under the offending column, and the loop carries on.

use std::io::{BufRead, Write};

use medtriage_core::inference::{diagnosis_schema, DIAGNOSIS_TABLE};
use medtriage_core::temporal::Value;
use medtriage_core::tsql::{self, QueryOutput, TsqlError};
use medtriage_core::TemporalStore;
use medtriage_service::wire::TsqlView;

use crate::error::CliError;
use crate::table::write_table;

pub const PROMPT: &str = "tsql> ";

/// Makes sure the diagnosis table exists so a fresh data directory can be
/// queried and written straight away.
pub fn prepare(store: &mut TemporalStore) -> Result<(), CliError> {
    if !store.has_table(DIAGNOSIS_TABLE) {
        store.create_table(DIAGNOSIS_TABLE, diagnosis_schema())?;
    }
    Ok(())
}

pub struct Repl<'a> {
    pub store: &'a mut TemporalStore,
    pub json: bool,
    /// Print a prompt before each line.
    pub interactive: bool,
}

impl Repl<'_> {
    /// Runs until `.quit` or end of input. Only I/O on the streams fails.
    pub fn run(&mut self, input: impl BufRead, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<()> {
        let mut lines = input.lines();
        loop {
            if self.interactive {
                write!(out, "{PROMPT}")?;
                out.flush()?;
            }
            let Some(line) = lines.next().transpose()? else { break };
            let text = line.trim_end();
            let text = text.strip_suffix(';').unwrap_or(text);
            if text.trim().is_empty() {
                continue;
            }
            match text.trim() {
                ".quit" | ".exit" => break,
                ".tables" => {
                    for name in self.store.table_names() {
                        let t = self.store.table(name).expect("listed table exists");
                        writeln!(out, "{name}  ({} versions)", t.version_count())?;
                    }
                }
                ".help" => writeln!(out, "statements: SELECT, INSERT, UPDATE, DELETE\ncommands: .tables .help .quit")?,
                cmd if cmd.starts_with('.') => {
                    writeln!(err, "{}", CliError::domain("unknown_command", format!("`{cmd}` (try .help)")))?
                }
                _ => self.statement(text, out, err)?,
            }
        }
        Ok(())
    }

    fn statement(&mut self, text: &str, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<()> {
        match tsql::run(text, self.store) {
            Ok(output) => self.print(output, out),
            Err(e) => {
                if let TsqlError::Parse(p) = &e {
                    // echo the statement when the user's own line is not above it
                    let indent = if self.interactive { PROMPT.len() } else { 0 };
                    if !self.interactive {
                        writeln!(err, "{text}")?;
                    }
                    let source_line = text.lines().nth(p.line().saturating_sub(1)).unwrap_or("");
                    let col: usize = source_line.chars().take(p.column().saturating_sub(1)).count();
                    writeln!(err, "{}^", " ".repeat(indent + col))?;
                }
                writeln!(err, "{}", CliError::from(e))
            }
        }
    }

    fn print(&self, output: QueryOutput, out: &mut dyn Write) -> std::io::Result<()> {
        if self.json {
            let view = TsqlView::from(output);
            return writeln!(out, "{}", serde_json::to_string(&view).expect("views serialize"));
        }
        match output {
            QueryOutput::Affected(n) => writeln!(out, "{n} row{} affected", if n == 1 { "" } else { "s" }),
            QueryOutput::Rows(rs) => {
                let rows: Vec<Vec<String>> = rs.rows.iter().map(|r| r.values.iter().map(cell).collect()).collect();
                write_table(out, &rs.columns, &rows)?;
                writeln!(out, "({} row{})", rows.len(), if rows.len() == 1 { "" } else { "s" })
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Real(r) => format!("{r:.4}"),
        other => other.to_string(),
    }
}

//! Versioned CSV assembly. Rows are sorted by seed before rendering so
//! concurrent trial execution could never change the bytes written.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

pub struct Table {
    header: String,
    rows: Vec<(u64, String)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { header: columns.join(","), rows: Vec::new() }
    }

    pub fn push(&mut self, sort_key: u64, cells: String) {
        self.rows.push((sort_key, cells));
    }

    pub fn render(&self, comments: &[String]) -> String {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(k, _)| *k);
        let mut out = String::from("# schema=1\n");
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.header);
        out.push('\n');
        for (_, r) in &rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}

/// Print to stdout, or write under the output directory when one is set.
pub fn emit(table: &Table, comments: &[String], out_dir: Option<&Path>, name: &str) -> Result<()> {
    let text = table.render(comments);
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating output dir {}", dir.display()))?;
            let path = dir.join(format!("{name}.csv"));
            fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

//! Fixed-width text tables: columns left-aligned, two spaces apart, no
//! trailing whitespace.

use std::io::{self, Write};

pub fn write_table<W: Write + ?Sized>(out: &mut W, header: &[String], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    write_line(out, header, &widths)?;
    for row in rows {
        write_line(out, row, &widths)?;
    }
    Ok(())
}

fn write_line<W: Write + ?Sized>(out: &mut W, cells: &[String], widths: &[usize]) -> io::Result<()> {
    let mut line = String::new();
    for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
        if i > 0 {
            line.push_str("  ");
        }
        line.push_str(cell);
        line.extend(std::iter::repeat_n(' ', w.saturating_sub(cell.chars().count())));
    }
    writeln!(out, "{}", line.trim_end())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn pads_to_widest_cell() {
        let mut out = Vec::new();
        write_table(
            &mut out,
            &s(&["rank", "icd", "distance"]),
            &[s(&["1", "J00", "0.1901"]), s(&["2", "Z77.1", "0.3909"])],
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "rank  icd    distance\n1     J00    0.1901\n2     Z77.1  0.3909\n"
        );
    }
}

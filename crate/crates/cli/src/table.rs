/// A plain aligned text table: left-aligned first column, right-aligned
/// remaining columns, two spaces between columns.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: ToString>(header: &[S]) -> Table {
        Table { header: header.iter().map(ToString::to_string).collect(), rows: Vec::new() }
    }

    pub fn row<S: ToString>(&mut self, cells: &[S]) {
        self.rows.push(cells.iter().map(ToString::to_string).collect());
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let mut out = String::new();
            for (i, cell) in cells.iter().enumerate().take(cols) {
                let pad = widths[i] - cell.chars().count();
                if i > 0 {
                    out.push_str("  ");
                }
                if i == 0 {
                    out.push_str(cell);
                    out.push_str(&" ".repeat(pad));
                } else {
                    out.push_str(&" ".repeat(pad));
                    out.push_str(cell);
                }
            }
            out.trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        let total: usize = widths.iter().sum::<usize>() + 2 * cols.saturating_sub(1);
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

/// `[[1, 0], [0, -1]]` style, rows separated by `; `.
pub fn matrix_text(m: &[Vec<String>]) -> String {
    if m.is_empty() {
        return "[]".into();
    }
    let rows: Vec<String> = m.iter().map(|r| r.join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_line_up() {
        let mut t = Table::new(&["q", "dim", "map"]);
        t.row(&["0", "12", "[1]"]);
        t.row(&["1", "3", "[-1 2]"]);
        assert_eq!(t.render(), "q  dim     map\n--------------\n0   12     [1]\n1    3  [-1 2]\n");
    }

    #[test]
    fn matrices_print_row_by_row() {
        let m = vec![vec!["1".to_string(), "0".into()], vec!["0".into(), "-1".into()]];
        assert_eq!(matrix_text(&m), "[1 0; 0 -1]");
        assert_eq!(matrix_text(&[]), "[]");
    }
}

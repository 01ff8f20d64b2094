//! Reader for the LP subset of the MPS format (free or fixed columns,
//! whitespace separated, names without embedded spaces).

use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSense {
    /// `a⊤x = rhs`
    E,
    /// `a⊤x ≤ rhs`
    L,
    /// `a⊤x ≥ rhs`
    G,
    /// Free row; the first one is the objective.
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    Lo,
    Up,
    Fx,
    Fr,
    Mi,
    Pl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowDef {
    pub name: String,
    pub sense: RowSense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDef {
    pub name: String,
    /// `(row index, coefficient)`; duplicate rows within a column are summed.
    pub entries: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub kind: BoundKind,
    pub column: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpsModel {
    pub name: String,
    pub rows: Vec<RowDef>,
    pub objective_row: usize,
    pub columns: Vec<ColumnDef>,
    /// `(row index, value)` from the first RHS set.
    pub rhs: Vec<(usize, f64)>,
    /// `(row index, value)` from the first RANGES set.
    pub ranges: Vec<(usize, f64)>,
    pub bounds: Vec<BoundEntry>,
    pub sense: ObjectiveSense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    End,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number `{tok}`")))?;
    if !v.is_finite() {
        // Infinite bound values are legal in some writers.
        if tok.to_ascii_lowercase().contains("inf") {
            return Ok(v);
        }
        return Err(parse_err(line, format!("non-finite number `{tok}`")));
    }
    Ok(v)
}

struct Builder {
    name: String,
    rows: Vec<RowDef>,
    row_index: HashMap<String, usize>,
    objective_row: Option<usize>,
    columns: Vec<ColumnDef>,
    col_index: HashMap<String, usize>,
    col_entry_pos: HashMap<usize, usize>,
    rhs_set: Option<String>,
    rhs: Vec<(usize, f64)>,
    range_set: Option<String>,
    ranges: Vec<(usize, f64)>,
    bound_set: Option<String>,
    bounds: Vec<BoundEntry>,
    sense: ObjectiveSense,
}

impl Builder {
    fn row(&self, name: &str, line: usize) -> Result<usize> {
        self.row_index
            .get(name)
            .copied()
            .ok_or_else(|| parse_err(line, format!("undeclared row `{name}`")))
    }

    fn add_row(&mut self, sense: &str, name: &str, line: usize) -> Result<()> {
        let sense = match sense.to_ascii_uppercase().as_str() {
            "E" => RowSense::E,
            "L" => RowSense::L,
            "G" => RowSense::G,
            "N" => RowSense::N,
            other => return Err(parse_err(line, format!("unknown row sense `{other}`"))),
        };
        if self.row_index.contains_key(name) {
            return Err(parse_err(line, format!("duplicate row `{name}`")));
        }
        let idx = self.rows.len();
        if sense == RowSense::N && self.objective_row.is_none() {
            self.objective_row = Some(idx);
        }
        self.row_index.insert(name.to_string(), idx);
        self.rows.push(RowDef {
            name: name.to_string(),
            sense,
        });
        Ok(())
    }

    fn add_coefficient(&mut self, col: &str, row: &str, value: f64, line: usize) -> Result<()> {
        let r = self.row(row, line)?;
        let c = match self.col_index.get(col) {
            Some(&c) => {
                if c + 1 != self.columns.len() {
                    return Err(parse_err(
                        line,
                        format!("column `{col}` appears again after other columns"),
                    ));
                }
                c
            }
            None => {
                let c = self.columns.len();
                self.col_index.insert(col.to_string(), c);
                self.columns.push(ColumnDef {
                    name: col.to_string(),
                    entries: Vec::new(),
                });
                self.col_entry_pos.clear();
                c
            }
        };
        match self.col_entry_pos.get(&r) {
            Some(&pos) => self.columns[c].entries[pos].1 += value,
            None => {
                self.col_entry_pos.insert(r, self.columns[c].entries.len());
                self.columns[c].entries.push((r, value));
            }
        }
        Ok(())
    }

    /// Handles `[set] row value [row value]` lines for RHS and RANGES.
    fn pairs<'a>(
        toks: &[&'a str],
        set: &mut Option<String>,
        line: usize,
    ) -> Result<Option<Vec<(&'a str, &'a str)>>> {
        let rest = match toks.len() {
            2 | 4 => toks,
            3 | 5 => {
                let name = toks[0];
                match set {
                    Some(s) if s != name => return Ok(None),
                    Some(_) => {}
                    None => *set = Some(name.to_string()),
                }
                &toks[1..]
            }
            _ => return Err(parse_err(line, "expected name/value pairs")),
        };
        Ok(Some(rest.chunks(2).map(|p| (p[0], p[1])).collect()))
    }

    fn add_bound(&mut self, toks: &[&str], line: usize) -> Result<()> {
        let kind = match toks[0].to_ascii_uppercase().as_str() {
            "LO" => BoundKind::Lo,
            "UP" => BoundKind::Up,
            "FX" => BoundKind::Fx,
            "FR" => BoundKind::Fr,
            "MI" => BoundKind::Mi,
            "PL" => BoundKind::Pl,
            other => return Err(parse_err(line, format!("unknown bound type `{other}`"))),
        };
        let needs_value = matches!(kind, BoundKind::Lo | BoundKind::Up | BoundKind::Fx);
        let args = &toks[1..];
        let (set, col, val) = match (needs_value, args.len()) {
            (true, 3) => (Some(args[0]), args[1], Some(args[2])),
            (true, 2) => (None, args[0], Some(args[1])),
            (false, 2) => (Some(args[0]), args[1], None),
            (false, 1) => (None, args[0], None),
            // Some writers put a dummy value on FR/MI/PL lines.
            (false, 3) => (Some(args[0]), args[1], None),
            _ => return Err(parse_err(line, "malformed BOUNDS line")),
        };
        if let Some(s) = set {
            match &self.bound_set {
                Some(b) if b != s => return Ok(()),
                Some(_) => {}
                None => self.bound_set = Some(s.to_string()),
            }
        }
        let column = *self
            .col_index
            .get(col)
            .ok_or_else(|| parse_err(line, format!("undeclared column `{col}`")))?;
        let value = match val {
            Some(v) => parse_num(v, line)?,
            None => 0.0,
        };
        self.bounds.push(BoundEntry {
            kind,
            column,
            value,
        });
        Ok(())
    }
}

/// Parses an MPS model from a reader.
pub fn parse_mps<R: BufRead>(reader: R) -> Result<MpsModel> {
    let mut b = Builder {
        name: String::new(),
        rows: Vec::new(),
        row_index: HashMap::new(),
        objective_row: None,
        columns: Vec::new(),
        col_index: HashMap::new(),
        col_entry_pos: HashMap::new(),
        rhs_set: None,
        rhs: Vec::new(),
        range_set: None,
        ranges: Vec::new(),
        bound_set: None,
        bounds: Vec::new(),
        sense: ObjectiveSense::Minimize,
    };
    let mut section: Option<Section> = None;
    let mut seen_end = false;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| parse_err(lineno, e.to_string()))?;
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !line.starts_with(char::is_whitespace) {
            let next = match toks[0].to_ascii_uppercase().as_str() {
                "NAME" => Section::Name,
                "OBJSENSE" => Section::ObjSense,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other => {
                    return Err(parse_err(lineno, format!("unsupported section `{other}`")))
                }
            };
            if section.is_some_and(|s| next <= s) {
                return Err(parse_err(
                    lineno,
                    format!("section `{}` out of order", toks[0]),
                ));
            }
            if next > Section::Rows && section.is_none_or(|s| s < Section::Rows) {
                return Err(parse_err(lineno, "ROWS section missing"));
            }
            match next {
                Section::Name => b.name = toks.get(1).unwrap_or(&"").to_string(),
                Section::ObjSense => {
                    if let Some(s) = toks.get(1) {
                        b.sense = parse_sense(s, lineno)?;
                    }
                }
                Section::End => seen_end = true,
                _ => {}
            }
            section = Some(next);
            if seen_end {
                break;
            }
            continue;
        }
        match section {
            None | Some(Section::Name) | Some(Section::End) => {
                return Err(parse_err(lineno, "data line outside a section"))
            }
            Some(Section::ObjSense) => b.sense = parse_sense(toks[0], lineno)?,
            Some(Section::Rows) => {
                if toks.len() != 2 {
                    return Err(parse_err(lineno, "expected `sense name` in ROWS"));
                }
                b.add_row(toks[0], toks[1], lineno)?;
            }
            Some(Section::Columns) => {
                if toks.len() >= 2 && toks[1].contains("MARKER") {
                    // Integrality markers: the LP relaxation is used.
                    continue;
                }
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(parse_err(lineno, "expected `column row value [row value]`"));
                }
                for p in toks[1..].chunks(2) {
                    let v = parse_num(p[1], lineno)?;
                    b.add_coefficient(toks[0], p[0], v, lineno)?;
                }
            }
            Some(Section::Rhs) => {
                if let Some(pairs) = Builder::pairs(&toks, &mut b.rhs_set, lineno)? {
                    for (r, v) in pairs {
                        let idx = b.row(r, lineno)?;
                        let v = parse_num(v, lineno)?;
                        b.rhs.push((idx, v));
                    }
                }
            }
            Some(Section::Ranges) => {
                if let Some(pairs) = Builder::pairs(&toks, &mut b.range_set, lineno)? {
                    for (r, v) in pairs {
                        let idx = b.row(r, lineno)?;
                        let v = parse_num(v, lineno)?;
                        b.ranges.push((idx, v));
                    }
                }
            }
            Some(Section::Bounds) => {
                if toks.len() < 2 {
                    return Err(parse_err(lineno, "malformed BOUNDS line"));
                }
                b.add_bound(&toks, lineno)?;
            }
        }
    }
    if !seen_end {
        return Err(parse_err(0, "missing ENDATA"));
    }
    let objective_row = b
        .objective_row
        .ok_or_else(|| parse_err(0, "no objective (N) row declared"))?;
    Ok(MpsModel {
        name: b.name,
        rows: b.rows,
        objective_row,
        columns: b.columns,
        rhs: b.rhs,
        ranges: b.ranges,
        bounds: b.bounds,
        sense: b.sense,
    })
}

fn parse_sense(tok: &str, line: usize) -> Result<ObjectiveSense> {
    match tok.to_ascii_uppercase().as_str() {
        "MIN" | "MINIMIZE" => Ok(ObjectiveSense::Minimize),
        "MAX" | "MAXIMIZE" => Ok(ObjectiveSense::Maximize),
        other => Err(parse_err(line, format!("unknown objective sense `{other}`"))),
    }
}

/// Parses an MPS file from disk.
pub fn read_mps_file(path: &std::path::Path) -> Result<MpsModel> {
    let file = std::fs::File::open(path).map_err(|e| parse_err(0, format!("{}: {e}", path.display())))?;
    parse_mps(std::io::BufReader::new(file))
}

//! Column-weight-2 non-binary LDPC codes and their text layout.
//!
//! A code is stored row-major: for each check row, the `v` column positions
//! of its nonzero entries and, optionally, the exponents of those entries
//! (`k` stands for `alpha^k`, so `0` is the element one, never a zero entry).
//!
//! Text layout:
//!
//! ```text
//! # comments start with '#'
//! n 16
//! rows 8
//! rowweight 4
//! m 8
//! primpoly 0x11d
//! 0 4 8 12        <- `rows` lines of positions
//! ...
//! 182 8 173 0     <- optionally `rows` lines of exponents
//! ...
//! ```

use crate::error::{Error, Result};
use crate::galois::{Field, FieldSpec, Gf};
use std::fmt::Write as _;
use std::sync::Arc;

/// The two checks touching one column, with the slot each occupies in its row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnIncidence {
    pub rows: [usize; 2],
    pub slots: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct LdpcCode {
    n: usize,
    row_weight: usize,
    field: Arc<Field>,
    row_positions: Vec<Vec<usize>>,
    row_values: Option<Vec<Vec<u32>>>,
    columns: Vec<ColumnIncidence>,
}

impl PartialEq for LdpcCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.row_weight == other.row_weight
            && self.field.spec() == other.field.spec()
            && self.row_positions == other.row_positions
            && self.row_values == other.row_values
    }
}

impl Eq for LdpcCode {}

impl LdpcCode {
    /// Validates and builds a code. `row_values`, when present, holds exponents.
    pub fn new(
        n: usize,
        field: Arc<Field>,
        row_positions: Vec<Vec<usize>>,
        row_values: Option<Vec<Vec<u32>>>,
    ) -> Result<Self> {
        let row_weight = row_positions.first().map_or(0, Vec::len);
        if row_positions.is_empty() || row_weight == 0 {
            return Err(Error::Code("no rows".into()));
        }
        let mut hits: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (r, row) in row_positions.iter().enumerate() {
            if row.len() != row_weight {
                return Err(Error::Code(format!(
                    "row {r} has {} entries, expected {row_weight}",
                    row.len()
                )));
            }
            for (slot, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(Error::Code(format!("row {r}: column {c} out of range")));
                }
                if row[..slot].contains(&c) {
                    return Err(Error::Code(format!("row {r}: column {c} repeated")));
                }
                hits[c].push((r, slot));
            }
        }
        let mut columns = Vec::with_capacity(n);
        for (c, h) in hits.iter().enumerate() {
            if h.len() != 2 {
                return Err(Error::Code(format!(
                    "column {c} has weight {}, expected 2",
                    h.len()
                )));
            }
            columns.push(ColumnIncidence {
                rows: [h[0].0, h[1].0],
                slots: [h[0].1, h[1].1],
            });
        }
        if let Some(values) = &row_values {
            if values.len() != row_positions.len() {
                return Err(Error::Code(format!(
                    "{} value rows for {} position rows",
                    values.len(),
                    row_positions.len()
                )));
            }
            for (r, row) in values.iter().enumerate() {
                if row.len() != row_weight {
                    return Err(Error::Code(format!(
                        "value row {r} has {} entries, expected {row_weight}",
                        row.len()
                    )));
                }
                if let Some(&e) = row.iter().find(|&&e| e as usize >= field.order()) {
                    return Err(Error::Code(format!(
                        "value row {r}: exponent {e} not below {}",
                        field.order()
                    )));
                }
            }
        }
        Ok(LdpcCode {
            n,
            row_weight,
            field,
            row_positions,
            row_values,
            columns,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.row_positions.len()
    }

    pub fn row_weight(&self) -> usize {
        self.row_weight
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        Arc::clone(&self.field)
    }

    pub fn row_positions(&self) -> &[Vec<usize>] {
        &self.row_positions
    }

    pub fn row_values(&self) -> Option<&[Vec<u32>]> {
        self.row_values.as_deref()
    }

    pub fn values_assigned(&self) -> bool {
        self.row_values.is_some()
    }

    /// The two rows containing column `c`, ascending.
    pub fn column(&self, c: usize) -> ColumnIncidence {
        self.columns[c]
    }

    /// Per-column row pairs and entry exponents (`None` for structure-only codes).
    pub fn column_adjacency(&self) -> Vec<([usize; 2], Option<[u32; 2]>)> {
        self.columns
            .iter()
            .map(|ci| {
                let exps = self
                    .row_values
                    .as_ref()
                    .map(|v| [v[ci.rows[0]][ci.slots[0]], v[ci.rows[1]][ci.slots[1]]]);
                (ci.rows, exps)
            })
            .collect()
    }

    /// Entry of `H` at (`row`, `col`); zero when the column is not in the row
    /// or values are not assigned.
    pub fn entry(&self, row: usize, col: usize) -> Gf {
        let Some(values) = &self.row_values else {
            return Gf::ZERO;
        };
        let ci = self.columns[col];
        (0..2).find(|&k| ci.rows[k] == row).map_or(Gf::ZERO, |k| {
            self.field.exp(values[row][ci.slots[k]] as usize)
        })
    }

    /// Exponent of the entry for column `col` in its `k`-th row (k = 0 or 1).
    pub fn entry_exponent(&self, col: usize, k: usize) -> Option<u32> {
        let ci = self.columns[col];
        self.row_values.as_ref().map(|v| v[ci.rows[k]][ci.slots[k]])
    }

    /// Same structure, different (or no) values.
    pub fn with_values(&self, row_values: Option<Vec<Vec<u32>>>) -> Result<Self> {
        LdpcCode::new(
            self.n,
            Arc::clone(&self.field),
            self.row_positions.clone(),
            row_values,
        )
    }

    pub fn same_structure(&self, other: &LdpcCode) -> bool {
        self.n == other.n
            && self.field.spec() == other.field.spec()
            && self.row_positions == other.row_positions
    }

    /// Checks `H c = 0` over the whole code. Columns outside the support are zero.
    pub fn is_codeword(&self, word: &SymbolCodeword) -> bool {
        if !self.values_assigned() || word.support.iter().any(|&c| c >= self.n) {
            return false;
        }
        let mut syndrome = vec![Gf::ZERO; self.rows()];
        for (&c, &x) in word.support.iter().zip(&word.elements) {
            let ci = self.columns[c];
            for k in 0..2 {
                let h = self.entry(ci.rows[k], c);
                syndrome[ci.rows[k]] += self.field.mul(h, x);
            }
        }
        syndrome.iter().all(|s| s.is_zero())
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_code(text)
    }

    pub fn to_text(&self) -> String {
        serialize_code(self)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_int(tok: &str, line: usize) -> Result<u64> {
    let parsed = match tok.strip_prefix("0x").or_else(|| tok.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => tok.parse(),
    };
    parsed.map_err(|_| parse_err(line, format!("expected an integer, found {tok:?}")))
}

/// Parses the row-major text layout.
pub fn parse_code(text: &str) -> Result<LdpcCode> {
    let mut n = None;
    let mut rows = None;
    let mut weight = None;
    let mut m = None;
    let mut poly = None;
    let mut data: Vec<(usize, Vec<u64>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let first = toks.next().unwrap_or_default();
        if first.starts_with(|c: char| c.is_ascii_alphabetic()) {
            if !data.is_empty() {
                return Err(parse_err(lineno, "header key after matrix data"));
            }
            let value = toks
                .next()
                .ok_or_else(|| parse_err(lineno, format!("missing value for {first}")))?;
            if toks.next().is_some() {
                return Err(parse_err(lineno, "trailing tokens after header value"));
            }
            let v = parse_int(value, lineno)?;
            let slot = match first {
                "n" => &mut n,
                "rows" => &mut rows,
                "rowweight" => &mut weight,
                "m" => &mut m,
                "primpoly" => &mut poly,
                other => return Err(parse_err(lineno, format!("unknown header key {other:?}"))),
            };
            if slot.replace(v).is_some() {
                return Err(parse_err(lineno, format!("duplicate header key {first:?}")));
            }
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(|t| parse_int(t, lineno))
            .collect::<Result<Vec<_>>>()?;
        data.push((lineno, nums));
    }

    let missing = |k: &str| parse_err(0, format!("missing header key {k:?}"));
    let n = n.ok_or_else(|| missing("n"))? as usize;
    let rows = rows.ok_or_else(|| missing("rows"))? as usize;
    let weight = weight.ok_or_else(|| missing("rowweight"))? as usize;
    let spec = FieldSpec::new(
        m.map_or(8, |m| m as u32),
        poly.map_or(crate::galois::DEFAULT_PRIM_POLY as u64, |p| p) as u32,
    )?;
    let field = Arc::new(Field::new(spec)?);

    if data.len() != rows && data.len() != 2 * rows {
        let line = data.last().map_or(0, |d| d.0);
        return Err(parse_err(
            line,
            format!(
                "expected {rows} position lines and optionally {rows} value lines, found {} lines",
                data.len()
            ),
        ));
    }
    for (lineno, nums) in &data {
        if nums.len() != weight {
            return Err(parse_err(
                *lineno,
                format!("row has {} entries, expected {weight}", nums.len()),
            ));
        }
    }
    for (lineno, nums) in &data[..rows] {
        if let Some(c) = nums.iter().find(|&&c| c as usize >= n) {
            return Err(parse_err(
                *lineno,
                format!("column {c} out of range 0..{n}"),
            ));
        }
    }
    for (lineno, nums) in &data[rows..] {
        if let Some(e) = nums.iter().find(|&&e| e as usize >= field.order()) {
            return Err(parse_err(
                *lineno,
                format!("exponent {e} out of range 0..{}", field.order()),
            ));
        }
    }
    let positions: Vec<Vec<usize>> = data[..rows]
        .iter()
        .map(|(_, r)| r.iter().map(|&c| c as usize).collect())
        .collect();
    let values = (data.len() == 2 * rows).then(|| {
        data[rows..]
            .iter()
            .map(|(_, r)| r.iter().map(|&e| e as u32).collect())
            .collect()
    });
    LdpcCode::new(n, field, positions, values)
}

/// Inverse of [`parse_code`].
pub fn serialize_code(code: &LdpcCode) -> String {
    let spec = code.field.spec();
    let mut out = String::new();
    let _ = writeln!(out, "n {}", code.n);
    let _ = writeln!(out, "rows {}", code.rows());
    let _ = writeln!(out, "rowweight {}", code.row_weight);
    let _ = writeln!(out, "m {}", spec.m);
    let _ = writeln!(out, "primpoly {:#x}", spec.prim_poly);
    out.push_str("# positions\n");
    for row in &code.row_positions {
        out.push_str(&join(row));
        out.push('\n');
    }
    if let Some(values) = &code.row_values {
        out.push_str("# values\n");
        for row in values {
            out.push_str(&join(row));
            out.push('\n');
        }
    }
    out
}

pub(crate) fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    let mut s = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x}");
    }
    s
}

/// A codeword given by its nonzero coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolCodeword {
    pub support: Vec<usize>,
    pub elements: Vec<Gf>,
}

impl SymbolCodeword {
    /// Builds a codeword from (column, element) pairs, dropping zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, Gf)>) -> Self {
        pairs.retain(|p| !p.1.is_zero());
        pairs.sort_unstable();
        let (support, elements) = pairs.into_iter().unzip();
        SymbolCodeword { support, elements }
    }

    pub fn symbol_weight(&self) -> usize {
        self.support.len()
    }

    pub fn exponents(&self, field: &Field) -> Vec<usize> {
        self.elements
            .iter()
            .map(|&e| field.log(e).expect("codeword elements are nonzero"))
            .collect()
    }

    pub fn binary_image(&self, field: &Field) -> BinaryImage {
        let m = field.m() as usize;
        let bits = self
            .support
            .iter()
            .zip(&self.elements)
            .flat_map(|(&i, &x)| {
                field
                    .to_bits(x)
                    .into_iter()
                    .map(move |j| m * i + j as usize)
            })
            .collect();
        BinaryImage { bits }
    }

    pub fn bit_weight(&self) -> usize {
        self.elements.iter().map(|e| e.bit_weight() as usize).sum()
    }
}

/// Positions of the ones in the binary expansion of a codeword.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BinaryImage {
    pub bits: Vec<usize>,
}

impl BinaryImage {
    pub fn bit_weight(&self) -> usize {
        self.bits.len()
    }
}

/// One record per codeword: support line, exponent line, bit line.
pub fn format_codeword_records(words: &[SymbolCodeword], field: &Field) -> String {
    let mut out = String::new();
    for w in words {
        out.push_str(&join(&w.support));
        out.push('\n');
        out.push_str(&join(&w.exponents(field)));
        out.push('\n');
        out.push_str(&join(&w.binary_image(field).bits));
        out.push_str("\n\n");
    }
    out
}

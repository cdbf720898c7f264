//! Low-weight codewords induced by cycles and patterns, and the truncated
//! bit-weight spectrum of the binary image.
//!
//! Every codeword of small symbol weight has a support whose induced
//! subgraph has no degree-1 check. When that subgraph is connected it is a
//! cycle or a catalogued pattern; otherwise its components are. Counting the
//! full-support nullspace vectors of each such column set therefore counts
//! every codeword exactly once.

use crate::code::{LdpcCode, SymbolCodeword};
use crate::cyclegraph::{CheckMultigraph, CycleInstance};
use crate::error::{Error, Result};
use crate::galois::{Field, Gf};
use crate::ontology::{mine_patterns, MiningOptions, PatternCatalog, PatternInstance};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest nullspace dimension enumerated by default.
pub const DEFAULT_DIMENSION_CAP: usize = 4;

/// `H` restricted to a column set, with all-zero rows removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmatrixSystem {
    pub columns: Vec<usize>,
    pub rows: Vec<usize>,
    /// `rows.len()` x `columns.len()`.
    pub entries: Vec<Vec<Gf>>,
    /// Rows meeting only one of the columns. Such a row forces that column
    /// to zero, so the set cannot carry a full-support codeword.
    pub degree_one_rows: Vec<usize>,
}

pub fn extract_submatrix(columns: &[usize], code: &LdpcCode) -> Result<SubmatrixSystem> {
    if !code.values_assigned() {
        return Err(Error::ValuesRequired);
    }
    let mut columns = columns.to_vec();
    columns.sort_unstable();
    columns.dedup();
    if let Some(&c) = columns.iter().find(|&&c| c >= code.n()) {
        return Err(Error::Code(format!("column {c} out of range")));
    }
    let mut touched: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &columns {
        for r in code.column(c).rows {
            *touched.entry(r).or_default() += 1;
        }
    }
    let rows: Vec<usize> = touched.keys().copied().collect();
    let degree_one_rows = touched
        .iter()
        .filter(|(_, &n)| n == 1)
        .map(|(&r, _)| r)
        .collect();
    let entries = rows
        .iter()
        .map(|&r| columns.iter().map(|&c| code.entry(r, c)).collect())
        .collect();
    Ok(SubmatrixSystem {
        columns,
        rows,
        entries,
        degree_one_rows,
    })
}

/// Basis of `{x : A x = 0}` from the reduced row echelon form; one vector
/// per free column, with a 1 in that column.
pub fn nullspace(system: &SubmatrixSystem, field: &Field) -> Vec<Vec<Gf>> {
    let ncols = system.columns.len();
    let mut a = system.entries.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = field.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..ncols {
                    let t = field.mul(f, a[r][j]);
                    a[i][j] += t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Gf::ZERO; ncols];
            v[f] = Gf::ONE;
            // characteristic 2: x_p = sum of a[row p][f] * x_f
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = a[row][f];
            }
            v
        })
        .collect()
}

/// Calls `visit` with every nonzero vector of the span of `basis` whose
/// coordinates are all nonzero, along with its bit weight.
fn for_each_full_support(basis: &[Vec<Gf>], field: &Field, mut visit: impl FnMut(&[Gf], usize)) {
    let Some((last, outer)) = basis.split_last() else {
        return;
    };
    let len = last.len();
    let q = field.q();
    // products a * last[j] for every a, laid out per coordinate
    let table: Vec<Vec<Gf>> = last
        .iter()
        .map(|&b| (0..q).map(|a| field.mul(Gf(a as u16), b)).collect())
        .collect();
    let mut word = vec![Gf::ZERO; len];
    let mut inner = |partial: &[Gf]| {
        for a in 0..q {
            let mut weight = 0;
            let mut full = true;
            for j in 0..len {
                let x = partial[j] + table[j][a];
                if x.is_zero() {
                    full = false;
                    break;
                }
                weight += x.bit_weight() as usize;
                word[j] = x;
            }
            if full {
                visit(&word, weight);
            }
        }
    };
    fn outer_loop(
        level: usize,
        partial: &mut Vec<Gf>,
        outer: &[Vec<Gf>],
        field: &Field,
        inner: &mut dyn FnMut(&[Gf]),
    ) {
        if level == outer.len() {
            inner(partial);
            return;
        }
        let saved = partial.clone();
        for a in 0..field.q() {
            let a = Gf(a as u16);
            for (p, (&s, &b)) in partial.iter_mut().zip(saved.iter().zip(&outer[level])) {
                *p = s + field.mul(a, b);
            }
            outer_loop(level + 1, partial, outer, field, inner);
        }
        partial.copy_from_slice(&saved);
    }
    let mut partial = vec![Gf::ZERO; len];
    outer_loop(0, &mut partial, outer, field, &mut inner);
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

/// All full-support codewords on the system's columns.
pub fn enumerate_support_codewords(
    system: &SubmatrixSystem,
    field: &Field,
    cap: usize,
) -> Result<Vec<SymbolCodeword>> {
    let basis = nullspace(system, field);
    check_cap(basis.len(), cap)?;
    let mut out = Vec::new();
    if !system.degree_one_rows.is_empty() {
        return Ok(out);
    }
    for_each_full_support(&basis, field, |w, _| {
        out.push(SymbolCodeword {
            support: system.columns.clone(),
            elements: w.to_vec(),
        });
    });
    Ok(out)
}

/// Bit-weight histogram of one column set's full-support codewords, with
/// the codewords of smallest bit weight.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SupportSpectrum {
    pub columns: Vec<usize>,
    pub dimension: usize,
    pub histogram: BTreeMap<usize, u64>,
    pub min_words: Vec<SymbolCodeword>,
}

impl SupportSpectrum {
    pub fn total(&self) -> u64 {
        self.histogram.values().sum()
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.histogram.keys().next().copied()
    }
}

pub fn support_spectrum(columns: &[usize], code: &LdpcCode, cap: usize) -> Result<SupportSpectrum> {
    let system = extract_submatrix(columns, code)?;
    let field = code.field();
    let basis = nullspace(&system, field);
    check_cap(basis.len(), cap)?;
    let mut spec = SupportSpectrum {
        dimension: basis.len(),
        ..Default::default()
    };
    if system.degree_one_rows.is_empty() {
        let mut best = usize::MAX;
        let mut min_elems: Vec<Vec<Gf>> = Vec::new();
        for_each_full_support(&basis, field, |w, weight| {
            *spec.histogram.entry(weight).or_default() += 1;
            if weight < best {
                best = weight;
                min_elems.clear();
            }
            if weight == best {
                min_elems.push(w.to_vec());
            }
        });
        spec.min_words = min_elems
            .into_iter()
            .map(|elements| SymbolCodeword {
                support: system.columns.clone(),
                elements,
            })
            .collect();
    }
    spec.columns = system.columns;
    Ok(spec)
}

/// Where the spectrum's codewords came from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub cycles: usize,
    pub singular_cycles: usize,
    pub patterns: usize,
    pub contributing_patterns: usize,
    /// Disjoint unions of two or more contributing column sets.
    pub composites: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitSpectrum {
    pub histogram: BTreeMap<usize, u64>,
    pub symbol_weight_bound: usize,
    pub provenance: Provenance,
}

impl BitSpectrum {
    pub fn min_weight(&self) -> Option<usize> {
        self.histogram.keys().next().copied()
    }

    pub fn count(&self, bit_weight: usize) -> u64 {
        self.histogram.get(&bit_weight).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.histogram.values().sum()
    }
}

/// Spectrum plus every codeword of the minimum bit weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEstimate {
    pub spectrum: BitSpectrum,
    pub min_words: Vec<SymbolCodeword>,
}

impl SpectrumEstimate {
    /// The minimum-weight codewords, sorted by support then exponents.
    pub fn minimum_codewords(&self) -> &[SymbolCodeword] {
        &self.min_words
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumOptions {
    pub symbol_weight_bound: usize,
    pub dimension_cap: usize,
}

fn map_items<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sums full-support codeword counts over the cycles and pattern instances
/// (and their vertex-disjoint unions) of symbol weight within the bound.
pub fn estimate_spectrum(
    code: &LdpcCode,
    cycles: &[CycleInstance],
    instances: &[PatternInstance],
    options: SpectrumOptions,
) -> Result<SpectrumEstimate> {
    if !code.values_assigned() {
        return Err(Error::ValuesRequired);
    }
    let bound = options.symbol_weight_bound;
    let cycles: Vec<&CycleInstance> = cycles.iter().filter(|c| c.len() <= bound).collect();
    let instances: Vec<&PatternInstance> =
        instances.iter().filter(|p| p.weight() <= bound).collect();

    let cycle_specs = map_items(&cycles, |c| {
        support_spectrum(&c.column_set(), code, options.dimension_cap)
    });
    let pattern_specs = map_items(&instances, |p| {
        support_spectrum(&p.columns, code, options.dimension_cap)
    });
    let mut provenance = Provenance {
        cycles: cycles.len(),
        patterns: instances.len(),
        ..Default::default()
    };
    let mut parts: Vec<SupportSpectrum> = Vec::new();
    for s in cycle_specs {
        let s = s?;
        if s.total() > 0 {
            provenance.singular_cycles += 1;
            parts.push(s);
        }
    }
    for s in pattern_specs {
        let s = s?;
        if s.total() > 0 {
            provenance.contributing_patterns += 1;
            parts.push(s);
        }
    }

    let composites = disjoint_unions(&parts, code, bound);
    provenance.composites = composites.len();

    let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
    for p in parts.iter().chain(&composites) {
        for (&w, &n) in &p.histogram {
            *histogram.entry(w).or_default() += n;
        }
    }
    let min = histogram.keys().next().copied();
    let mut min_words: Vec<SymbolCodeword> = parts
        .iter()
        .chain(&composites)
        .filter(|p| p.min_weight().is_some() && p.min_weight() == min)
        .flat_map(|p| p.min_words.iter().cloned())
        .collect();
    min_words.sort();
    Ok(SpectrumEstimate {
        spectrum: BitSpectrum {
            histogram,
            symbol_weight_bound: bound,
            provenance,
        },
        min_words,
    })
}

/// Girth, catalog, cycles and patterns of `code`, then its spectrum.
pub fn analyze_spectrum(code: &LdpcCode, dimension_cap: usize) -> Result<SpectrumEstimate> {
    let graph = CheckMultigraph::from_code(code)?;
    let catalog = PatternCatalog::build(graph.girth()?)?;
    let bound = catalog.max_weight();
    let cycles = graph.enumerate_cycles(bound);
    let mined = mine_patterns(&graph, &catalog, MiningOptions::default())?;
    estimate_spectrum(
        code,
        &cycles,
        &mined.instances,
        SpectrumOptions {
            symbol_weight_bound: bound,
            dimension_cap,
        },
    )
}

// Unions of two or more parts whose check sets are pairwise disjoint and
// whose total column count is within `bound`. Their codewords are exactly
// the products of the parts' codewords.
fn disjoint_unions(
    parts: &[SupportSpectrum],
    code: &LdpcCode,
    bound: usize,
) -> Vec<SupportSpectrum> {
    let Some(smallest) = parts.iter().map(|p| p.columns.len()).min() else {
        return Vec::new();
    };
    let checks: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| {
            let mut rows: Vec<usize> = p
                .columns
                .iter()
                .flat_map(|&c| code.column(c).rows)
                .collect();
            rows.sort_unstable();
            rows.dedup();
            rows
        })
        .collect();
    let candidates: Vec<usize> = (0..parts.len())
        .filter(|&i| parts[i].columns.len() + smallest <= bound)
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = vec![false; code.rows()];
    fn search(
        start: usize,
        size: usize,
        candidates: &[usize],
        parts: &[SupportSpectrum],
        checks: &[Vec<usize>],
        bound: usize,
        chosen: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<SupportSpectrum>,
    ) {
        for k in start..candidates.len() {
            let i = candidates[k];
            let w = parts[i].columns.len();
            if size + w > bound || checks[i].iter().any(|&r| used[r]) {
                continue;
            }
            chosen.push(i);
            for &r in &checks[i] {
                used[r] = true;
            }
            if chosen.len() >= 2 {
                out.push(combine(chosen.iter().map(|&j| &parts[j])));
            }
            search(
                k + 1,
                size + w,
                candidates,
                parts,
                checks,
                bound,
                chosen,
                used,
                out,
            );
            for &r in &checks[i] {
                used[r] = false;
            }
            chosen.pop();
        }
    }
    search(
        0,
        0,
        &candidates,
        parts,
        &checks,
        bound,
        &mut chosen,
        &mut used,
        &mut out,
    );
    out
}

fn combine<'a>(parts: impl Iterator<Item = &'a SupportSpectrum>) -> SupportSpectrum {
    let mut acc = SupportSpectrum {
        histogram: BTreeMap::from([(0, 1)]),
        min_words: vec![SymbolCodeword {
            support: Vec::new(),
            elements: Vec::new(),
        }],
        ..Default::default()
    };
    for p in parts {
        let mut hist = BTreeMap::new();
        for (&wa, &na) in &acc.histogram {
            for (&wb, &nb) in &p.histogram {
                *hist.entry(wa + wb).or_default() += na * nb;
            }
        }
        acc.histogram = hist;
        acc.columns.extend(&p.columns);
        acc.dimension += p.dimension;
        acc.min_words = acc
            .min_words
            .iter()
            .flat_map(|a| {
                p.min_words.iter().map(move |b| {
                    let pairs = a
                        .support
                        .iter()
                        .zip(&a.elements)
                        .chain(b.support.iter().zip(&b.elements))
                        .map(|(&c, &x)| (c, x))
                        .collect();
                    SymbolCodeword::from_pairs(pairs)
                })
            })
            .collect();
    }
    acc.columns.sort_unstable();
    acc
}

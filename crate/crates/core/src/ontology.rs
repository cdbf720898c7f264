//! Inter-connected cycle patterns.
//!
//! A pattern is a connected subgraph of the check multigraph with no
//! degree-1 check and cyclomatic number at least 2. Suppressing its
//! degree-2 vertices leaves a small skeleton; each skeleton edge is a path
//! ("segment") whose length is the number of columns on it. Seven skeletons
//! are recognised:
//!
//! | class | skeleton                                           | segments |
//! |-------|----------------------------------------------------|----------|
//! | A     | two vertices, three parallel paths (theta)         | 3        |
//! | B     | one vertex, two loops (figure eight)               | 2        |
//! | C     | complete graph on four vertices                    | 6        |
//! | D     | two vertices, four parallel paths                  | 4        |
//! | E     | two loops joined by a path (dumbbell)              | 3        |
//! | F     | u=v double, v=w double, u-w single                 | 5        |
//! | G     | complete bipartite graph on 3+3 vertices           | 9        |
//!
//! Segment tuples are positional. C is ordered `(ab, bc, cd, da, ac, bd)`,
//! F as `(uv, vw, vw, uv, uw)`, E as `(loop, path, loop)` and G row-major
//! over the 3x3 biadjacency. Two tuples name the same pattern iff they are
//! related by a skeleton automorphism; the canonical form is the
//! lexicographically smallest member of that orbit.

use crate::cyclegraph::{CheckMultigraph, CycleInstance};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternClass {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl PatternClass {
    pub const ALL: [PatternClass; 7] = [
        PatternClass::A,
        PatternClass::B,
        PatternClass::C,
        PatternClass::D,
        PatternClass::E,
        PatternClass::F,
        PatternClass::G,
    ];

    pub fn arity(self) -> usize {
        self.skeleton().1.len()
    }

    pub fn cyclomatic(self) -> usize {
        let (v, e) = self.skeleton();
        e.len() - v + 1
    }

    /// Vertex count and positional edge list of the skeleton.
    pub fn skeleton(self) -> (usize, &'static [(usize, usize)]) {
        use PatternClass::*;
        match self {
            A => (2, &[(0, 1), (0, 1), (0, 1)]),
            B => (1, &[(0, 0), (0, 0)]),
            C => (4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]),
            D => (2, &[(0, 1), (0, 1), (0, 1), (0, 1)]),
            E => (2, &[(0, 0), (0, 1), (1, 1)]),
            F => (3, &[(0, 1), (1, 2), (1, 2), (0, 1), (0, 2)]),
            G => (
                6,
                &[
                    (0, 3),
                    (0, 4),
                    (0, 5),
                    (1, 3),
                    (1, 4),
                    (1, 5),
                    (2, 3),
                    (2, 4),
                    (2, 5),
                ],
            ),
        }
    }

    fn letter(self) -> char {
        (b'A' + self as u8) as char
    }

    fn from_letter(c: char) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.letter() == c)
    }

    /// Position permutations realising the skeleton automorphisms.
    fn symmetries(self) -> &'static [Vec<usize>] {
        static GROUPS: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
        let groups = GROUPS.get_or_init(|| {
            PatternClass::ALL
                .iter()
                .map(|k| closure(&k.generators(), k.arity()))
                .collect()
        });
        &groups[self as usize]
    }

    fn generators(self) -> Vec<Vec<usize>> {
        use PatternClass::*;
        match self {
            A => vec![vec![1, 0, 2], vec![1, 2, 0]],
            B => vec![vec![1, 0]],
            D => vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]],
            E => vec![vec![2, 1, 0]],
            F => vec![
                vec![3, 1, 2, 0, 4],
                vec![0, 2, 1, 3, 4],
                vec![1, 0, 3, 2, 4],
            ],
            C | G => {
                let (nv, edges) = self.skeleton();
                let vertex_gens: Vec<Vec<usize>> = if self == C {
                    vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]]
                } else {
                    vec![
                        vec![1, 0, 2, 3, 4, 5],
                        vec![1, 2, 0, 3, 4, 5],
                        vec![0, 1, 2, 4, 3, 5],
                        vec![0, 1, 2, 4, 5, 3],
                        vec![3, 4, 5, 0, 1, 2],
                    ]
                };
                debug_assert!(vertex_gens.iter().all(|g| g.len() == nv));
                vertex_gens
                    .iter()
                    .map(|sigma| {
                        edges
                            .iter()
                            .map(|&(x, y)| {
                                let (a, b) = (sigma[x], sigma[y]);
                                edges
                                    .iter()
                                    .position(|&(p, q)| (p, q) == (a, b) || (p, q) == (b, a))
                                    .expect("automorphism maps edges to edges")
                            })
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

fn closure(gens: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut group = vec![id.clone()];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id]);
    let mut i = 0;
    while i < group.len() {
        for g in gens {
            let composed: Vec<usize> = (0..n).map(|k| group[i][g[k]]).collect();
            if seen.insert(composed.clone()) {
                group.push(composed);
            }
        }
        i += 1;
    }
    group
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Smallest tuple in the automorphism orbit of `tuple`.
pub fn canonical_tuple(class: PatternClass, tuple: &[usize]) -> Vec<usize> {
    class
        .symmetries()
        .iter()
        .map(|p| p.iter().map(|&i| tuple[i]).collect::<Vec<_>>())
        .min()
        .expect("group contains the identity")
}

/// Type-I: every cycle has Tanner length divisible by 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CycleType {
    I,
    II,
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CycleType::I => "I",
            CycleType::II => "II",
        })
    }
}

/// A class together with a canonical segment tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternShape {
    pub class: PatternClass,
    pub tuple: Vec<usize>,
}

impl PatternShape {
    pub fn new(class: PatternClass, tuple: &[usize]) -> Result<Self> {
        if tuple.len() != class.arity() {
            return Err(Error::Config(format!(
                "{class} takes {} segments, got {}",
                class.arity(),
                tuple.len()
            )));
        }
        if tuple.contains(&0) {
            return Err(Error::Config("segment lengths must be positive".into()));
        }
        let (_, edges) = class.skeleton();
        if edges.iter().zip(tuple).any(|(&(a, b), &n)| a == b && n < 2) {
            return Err(Error::Config(
                "a loop segment needs at least two columns".into(),
            ));
        }
        Ok(PatternShape {
            class,
            tuple: canonical_tuple(class, tuple),
        })
    }

    /// Parses `A-(2,2,2)` style names.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("malformed pattern name {s:?}"));
        let s = s.trim();
        let mut chars = s.chars();
        let class = chars
            .next()
            .and_then(PatternClass::from_letter)
            .ok_or_else(bad)?;
        let rest = chars.as_str().trim_start();
        let rest = rest.strip_prefix('-').ok_or_else(bad)?.trim();
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let tuple = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(class, &tuple)
    }

    /// Number of columns.
    pub fn weight(&self) -> usize {
        self.tuple.iter().sum()
    }

    /// Number of checks.
    pub fn checks(&self) -> usize {
        self.weight() + 1 - self.class.cyclomatic()
    }

    /// Builds the subdivided skeleton as a standalone multigraph.
    pub fn realize(&self) -> CheckMultigraph {
        let (nv, skel) = self.class.skeleton();
        let mut next = nv;
        let mut edges = Vec::new();
        for (&(a, b), &len) in skel.iter().zip(&self.tuple) {
            let mut prev = a;
            for _ in 0..len - 1 {
                edges.push([prev, next]);
                prev = next;
                next += 1;
            }
            edges.push([prev, b]);
        }
        CheckMultigraph::from_edges(next, edges).expect("realisation has no self-loops")
    }

    /// Lengths (in columns) of every simple cycle of the pattern.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let g = self.realize();
        g.enumerate_cycles(g.edge_count())
            .iter()
            .map(CycleInstance::len)
            .collect()
    }

    pub fn cycle_type(&self) -> CycleType {
        if self.cycle_lengths().iter().all(|l| l % 2 == 0) {
            CycleType::I
        } else {
            CycleType::II
        }
    }
}

impl fmt::Display for PatternShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-({})",
            self.class,
            crate::code::join(&self.tuple).replace(' ', ",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    /// Name as tabulated, e.g. `C-(1,1,2,2,2,1)`.
    pub label: String,
    pub shape: PatternShape,
    /// Type as tabulated.
    pub listed_type: CycleType,
}

impl CatalogEntry {
    pub fn weight(&self) -> usize {
        self.shape.weight()
    }
}

/// Admissible inter-connected cycle configurations for one girth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCatalog {
    pub girth: usize,
    pub entries: Vec<CatalogEntry>,
}

// girth, w, Type-I entries, Type-II entries
const TABLE: &[(usize, usize, &str, &str)] = &[
    (8, 6, "A-(2,2,2)", ""),
    (8, 7, "A-(1,3,3)", "A-(2,2,3)"),
    (
        8,
        8,
        "A-(2,2,4); B-(4,4); C-(1,1,1,1,2,2); D-(2,2,2,2)",
        "A-(1,3,4); A-(2,3,3)",
    ),
    (
        8,
        9,
        "A-(1,3,5); A-(3,3,3); C-(1,1,2,2,2,1); E-(4,1,4); F-(2,3,1,2,1); G-(1,1,1,1,1,1,1,1,1)",
        "A-(1,4,4); A-(2,2,5); A-(2,3,4); B-(4,5); C-(1,1,1,1,2,3); C-(1,2,1,2,1,2); \
         D-(2,2,2,3); F-(2,2,2,2,1)",
    ),
    (10, 8, "", "A-(2,3,3)"),
    (10, 9, "A-(3,3,3)", "A-(1,4,4); A-(2,3,4)"),
    (
        10,
        10,
        "A-(2,4,4)",
        "A-(1,4,5); A-(2,3,5); A-(3,3,4); B-(5,5); C-(2,2,2,2,1,1)",
    ),
    (
        10,
        11,
        "A-(1,5,5); A-(3,3,5)",
        "A-(1,4,6); A-(2,3,6); A-(2,4,5); A-(3,4,4); B-(5,6); C-(2,2,2,2,1,2); \
         C-(3,2,2,2,1,1); C-(1,3,2,2,1,2); D-(2,3,3,3); E-(5,1,5); F-(2,3,2,3,1)",
    ),
    (12, 9, "A-(3,3,3)", ""),
    (12, 10, "A-(2,4,4)", "A-(3,3,4)"),
    (12, 11, "A-(1,5,5); A-(3,3,5)", "A-(2,4,5); A-(3,4,4)"),
    (
        12,
        12,
        "A-(2,4,6); A-(4,4,4); B-(6,6); C-(2,2,2,2,2,2); C-(1,2,1,2,3,3); D-(3,3,3,3)",
        "A-(1,5,6); A-(2,5,5); A-(3,3,6); A-(3,4,5)",
    ),
    (14, 11, "", "A-(3,4,4)"),
    (14, 12, "A-(4,4,4)", "A-(2,5,5); A-(3,4,5)"),
    (
        14,
        13,
        "A-(3,5,5)",
        "A-(1,6,6); A-(2,5,6); A-(3,4,6); A-(4,4,5)",
    ),
    (
        14,
        14,
        "A-(2,6,6); A-(4,4,6)",
        "A-(2,5,7); A-(3,4,7); A-(3,5,6); A-(1,6,7); A-(4,5,5); B-(7,7); C-(2,2,2,2,3,3); \
         C-(3,3,3,3,1,1)",
    ),
    (16, 12, "A-(4,4,4)", ""),
    (16, 13, "A-(3,5,5)", "A-(4,4,5)"),
    (16, 14, "A-(2,6,6); A-(4,4,6)", "A-(3,5,6); A-(4,5,5)"),
    (
        16,
        15,
        "A-(1,7,7); A-(3,5,7); A-(3,6,6); A-(5,5,5)",
        "A-(2,6,7); A-(4,4,7); A-(4,5,6)",
    ),
];

/// `ceil(3 g / 4)`, the smallest pattern weight at Tanner girth `g`.
pub fn min_pattern_weight(girth: usize) -> usize {
    (3 * girth).div_ceil(4)
}

/// Largest codeword symbol weight covered by the catalog.
pub fn symbol_weight_bound(girth: usize) -> usize {
    min_pattern_weight(girth) + 3
}

impl PatternCatalog {
    pub fn build(girth: usize) -> Result<Self> {
        if girth < 8 || girth % 2 != 0 {
            return Err(Error::Girth(girth));
        }
        let mut entries = Vec::new();
        if girth <= 16 {
            for &(g, _, type1, type2) in TABLE.iter().filter(|r| r.0 == girth) {
                debug_assert_eq!(g, girth);
                for (list, ty) in [(type1, CycleType::I), (type2, CycleType::II)] {
                    for label in list.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                        entries.push(CatalogEntry {
                            label: label.to_string(),
                            shape: PatternShape::parse(label)?,
                            listed_type: ty,
                        });
                    }
                }
            }
            // keep the tabulated order within a weight, Type-I before Type-II
            entries.sort_by_key(|e| (e.weight(), e.listed_type));
        } else {
            let half = girth / 2;
            let bound = symbol_weight_bound(girth);
            for a in 1..=bound {
                for b in a..=bound {
                    for c in b..=bound {
                        if a + b + c > bound || a + b < half {
                            continue;
                        }
                        let shape = PatternShape::new(PatternClass::A, &[a, b, c])?;
                        let listed_type = shape.cycle_type();
                        entries.push(CatalogEntry {
                            label: shape.to_string(),
                            shape,
                            listed_type,
                        });
                    }
                }
            }
            entries.sort_by(|x, y| {
                (x.weight(), x.listed_type, &x.shape).cmp(&(y.weight(), y.listed_type, &y.shape))
            });
        }
        Ok(PatternCatalog { girth, entries })
    }

    pub fn max_weight(&self) -> usize {
        symbol_weight_bound(self.girth)
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.entries.iter().map(CatalogEntry::weight).min()
    }

    pub fn find(&self, shape: &PatternShape) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| &e.shape == shape)
    }

    /// Instance counts per catalog entry, in catalog order, skipping zeros.
    pub fn group_counts<'a>(
        &'a self,
        instances: &[PatternInstance],
    ) -> Vec<(&'a CatalogEntry, usize)> {
        let mut counts: HashMap<&PatternShape, usize> = HashMap::new();
        for inst in instances {
            *counts.entry(&inst.shape).or_default() += 1;
        }
        self.entries
            .iter()
            .filter_map(|e| counts.get(&e.shape).map(|&n| (e, n)))
            .collect()
    }
}

/// A pattern found in a specific graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternInstance {
    pub shape: PatternShape,
    /// Sorted column (edge) ids.
    pub columns: Vec<usize>,
    /// Sorted check (vertex) ids.
    pub checks: Vec<usize>,
    pub cycle_type: CycleType,
}

impl PatternInstance {
    pub fn weight(&self) -> usize {
        self.columns.len()
    }
}

/// Identifies the pattern formed by `columns`, or `None` when the induced
/// subgraph is disconnected, has a degree-1 check, has cyclomatic number
/// below 2, or has a skeleton outside the seven classes.
pub fn classify_subgraph(columns: &[usize], graph: &CheckMultigraph) -> Option<PatternInstance> {
    let mut cols = columns.to_vec();
    cols.sort_unstable();
    cols.dedup();
    if cols.iter().any(|&c| c >= graph.edge_count()) {
        return None;
    }
    // local adjacency
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &c in &cols {
        let [a, b] = graph.endpoints(c);
        incident.entry(a).or_default().push(c);
        incident.entry(b).or_default().push(c);
    }
    if incident.values().any(|es| es.len() < 2) {
        return None;
    }
    let checks: Vec<usize> = incident.keys().copied().collect();
    let cyclomatic = cols.len() + 1;
    if cyclomatic < checks.len() + 2 {
        return None;
    }
    // connectivity and bipartiteness by one traversal
    let mut color: HashMap<usize, bool> = HashMap::new();
    let mut bipartite = true;
    let mut stack = vec![checks[0]];
    color.insert(checks[0], false);
    while let Some(v) = stack.pop() {
        let cv = color[&v];
        for &e in &incident[&v] {
            let w = graph.other(e, v);
            match color.get(&w) {
                None => {
                    color.insert(w, !cv);
                    stack.push(w);
                }
                Some(&cw) => bipartite &= cw != cv,
            }
        }
    }
    if color.len() != checks.len() {
        return None;
    }

    // segments between branch vertices
    let branch: Vec<usize> = checks
        .iter()
        .copied()
        .filter(|v| incident[v].len() >= 3)
        .collect();
    let bidx: HashMap<usize, usize> = branch.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut used: HashSet<usize> = HashSet::new();
    let mut segments: Vec<(usize, usize, usize)> = Vec::new();
    for &start in &branch {
        for &e0 in &incident[&start] {
            if used.contains(&e0) {
                continue;
            }
            used.insert(e0);
            let (mut at, mut e, mut len) = (graph.other(e0, start), e0, 1);
            while !bidx.contains_key(&at) {
                let next = incident[&at]
                    .iter()
                    .copied()
                    .find(|&f| f != e)
                    .expect("degree-2 vertex has a second edge");
                used.insert(next);
                e = next;
                at = graph.other(e, at);
                len += 1;
            }
            segments.push((bidx[&start], bidx[&at], len));
        }
    }
    let degrees: Vec<usize> = branch.iter().map(|v| incident[v].len()).collect();
    let (class, tuple) = match_skeleton(&degrees, &segments)?;
    let shape = PatternShape {
        class,
        tuple: canonical_tuple(class, &tuple),
    };
    Some(PatternInstance {
        shape,
        columns: cols,
        checks,
        cycle_type: if bipartite {
            CycleType::I
        } else {
            CycleType::II
        },
    })
}

// Maps a skeleton (branch degrees, segments as (u, v, length)) to a class and
// a positional tuple.
fn match_skeleton(
    degrees: &[usize],
    segments: &[(usize, usize, usize)],
) -> Option<(PatternClass, Vec<usize>)> {
    use PatternClass::*;
    let nv = degrees.len();
    let ne = segments.len();
    let is_loop = |s: &(usize, usize, usize)| s.0 == s.1;
    let between = |a: usize, b: usize| -> Vec<usize> {
        segments
            .iter()
            .filter(|s| (s.0 == a && s.1 == b) || (s.0 == b && s.1 == a))
            .map(|s| s.2)
            .collect()
    };
    let loops = segments.iter().filter(|s| is_loop(s)).count();
    match (nv, ne, loops) {
        (1, 2, 2) => Some((B, segments.iter().map(|s| s.2).collect())),
        (2, 3, 0) => Some((A, segments.iter().map(|s| s.2).collect())),
        (2, 4, 0) => Some((D, segments.iter().map(|s| s.2).collect())),
        (2, 3, 2) => {
            let l0 = segments.iter().find(|s| is_loop(s) && s.0 == 0)?.2;
            let l1 = segments.iter().find(|s| is_loop(s) && s.0 == 1)?.2;
            let path = segments.iter().find(|s| !is_loop(s))?.2;
            Some((E, vec![l0, path, l1]))
        }
        (3, 5, 0) => {
            let v = degrees.iter().position(|&d| d == 4)?;
            let others: Vec<usize> = (0..3).filter(|&x| x != v).collect();
            let (u, w) = (others[0], others[1]);
            let uv = between(u, v);
            let vw = between(v, w);
            let uw = between(u, w);
            (uv.len() == 2 && vw.len() == 2 && uw.len() == 1)
                .then(|| (F, vec![uv[0], vw[0], vw[1], uv[1], uw[0]]))
        }
        (4, 6, 0) => {
            let mut t = Vec::with_capacity(6);
            for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)] {
                let s = between(a, b);
                if s.len() != 1 {
                    return None;
                }
                t.push(s[0]);
            }
            Some((C, t))
        }
        (6, 9, 0) => {
            // bipartition of the skeleton
            let mut side = [None; 6];
            side[0] = Some(false);
            let mut changed = true;
            while changed {
                changed = false;
                for s in segments {
                    match (side[s.0], side[s.1]) {
                        (Some(x), None) => {
                            side[s.1] = Some(!x);
                            changed = true;
                        }
                        (None, Some(y)) => {
                            side[s.0] = Some(!y);
                            changed = true;
                        }
                        (Some(x), Some(y)) if x == y => return None,
                        _ => {}
                    }
                }
            }
            let left: Vec<usize> = (0..6).filter(|&i| side[i] == Some(false)).collect();
            let right: Vec<usize> = (0..6).filter(|&i| side[i] == Some(true)).collect();
            if left.len() != 3 || right.len() != 3 {
                return None;
            }
            let mut t = Vec::with_capacity(9);
            for &a in &left {
                for &b in &right {
                    let s = between(a, b);
                    if s.len() != 1 {
                        return None;
                    }
                    t.push(s[0]);
                }
            }
            Some((G, t))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MiningOptions {
    /// Skip Type-II catalog entries (graphs whose cycles all have Tanner
    /// length divisible by 4).
    pub type_one_only: bool,
}

/// Mined patterns plus the connected subgraphs within the weight budget that
/// matched no catalog entry, keyed by shape name (or `other`).
#[derive(Debug, Clone, Default)]
pub struct MiningResult {
    pub instances: Vec<PatternInstance>,
    pub uncatalogued: BTreeMap<String, usize>,
}

/// Finds every catalog pattern in `graph`, deduplicated by column set and
/// sorted by (catalog order, columns).
pub fn mine_patterns(
    graph: &CheckMultigraph,
    catalog: &PatternCatalog,
    options: MiningOptions,
) -> Result<MiningResult> {
    let girth = graph.girth()?;
    if girth != catalog.girth {
        return Err(Error::GirthMismatch {
            catalog: catalog.girth,
            graph: girth,
        });
    }
    let max_cyclomatic = catalog
        .entries
        .iter()
        .map(|e| e.shape.class.cyclomatic())
        .max()
        .unwrap_or(2);
    let subgraphs = two_cores(graph, catalog.max_weight(), max_cyclomatic);
    let order: HashMap<&PatternShape, usize> = catalog
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| !options.type_one_only || e.shape.cycle_type() == CycleType::I)
        .map(|(i, e)| (&e.shape, i))
        .collect();
    let mut result = MiningResult::default();
    let mut keyed = Vec::new();
    for cols in subgraphs {
        match classify_subgraph(&cols, graph) {
            Some(inst) => match order.get(&inst.shape) {
                Some(&i) => keyed.push((i, inst)),
                None => {
                    *result
                        .uncatalogued
                        .entry(inst.shape.to_string())
                        .or_default() += 1
                }
            },
            None => *result.uncatalogued.entry("other".into()).or_default() += 1,
        }
    }
    keyed.sort_by(|a, b| (a.0, &a.1.columns).cmp(&(b.0, &b.1.columns)));
    result.instances = keyed.into_iter().map(|(_, inst)| inst).collect();
    Ok(result)
}

/// Column sets of all connected subgraphs with minimum degree 2, cyclomatic
/// number in `2..=max_cyclomatic` and at most `max_weight` edges.
///
/// Every such subgraph is grown from one of its shortest cycles by adding
/// ears: paths between two of its vertices, cycles through one of them, or
/// a path to a fresh cycle. A theta's shortest cycle has at most `2w/3`
/// edges and higher cyclomatic numbers only shrink it, so seed cycles are
/// limited to that length.
pub fn two_cores(
    graph: &CheckMultigraph,
    max_weight: usize,
    max_cyclomatic: usize,
) -> Vec<Vec<usize>> {
    let Ok(girth) = graph.girth() else {
        return Vec::new();
    };
    let min_cycle = girth / 2;
    let seed_len = 2 * max_weight / 3;
    if seed_len < min_cycle {
        return Vec::new();
    }
    let seeds = graph.enumerate_cycles(seed_len);
    let grow_from = |seed: &CycleInstance, seen: &mut HashSet<Vec<usize>>| {
        let mut miner = Miner {
            graph,
            max_weight,
            max_cyclomatic,
            min_cycle,
            in_v: vec![false; graph.vertex_count()],
            in_e: vec![false; graph.edge_count()],
            verts: Vec::new(),
            edges: Vec::new(),
            seen,
        };
        miner.add(seed.edges(), seed.vertices());
        miner.grow();
    };

    #[cfg(feature = "parallel")]
    let seen: HashSet<Vec<usize>> = {
        use rayon::prelude::*;
        seeds
            .par_iter()
            .fold(HashSet::new, |mut seen, seed| {
                grow_from(seed, &mut seen);
                seen
            })
            .reduce(HashSet::new, |mut a, b| {
                if a.len() < b.len() {
                    return b.into_iter().chain(a).collect();
                }
                a.extend(b);
                a
            })
    };
    #[cfg(not(feature = "parallel"))]
    let seen: HashSet<Vec<usize>> = {
        let mut seen = HashSet::new();
        for seed in &seeds {
            grow_from(seed, &mut seen);
        }
        seen
    };
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

struct Miner<'a> {
    graph: &'a CheckMultigraph,
    max_weight: usize,
    max_cyclomatic: usize,
    min_cycle: usize,
    in_v: Vec<bool>,
    in_e: Vec<bool>,
    verts: Vec<usize>,
    edges: Vec<usize>,
    seen: &'a mut HashSet<Vec<usize>>,
}

// An ear: new edges and the new vertices they bring in.
type Ear = (Vec<usize>, Vec<usize>);

impl Miner<'_> {
    fn add(&mut self, edges: &[usize], verts: &[usize]) {
        for &e in edges {
            self.in_e[e] = true;
            self.edges.push(e);
        }
        for &v in verts {
            if !self.in_v[v] {
                self.in_v[v] = true;
                self.verts.push(v);
            }
        }
    }

    fn remove(&mut self, n_edges: usize, n_verts: usize) {
        for _ in 0..n_edges {
            let e = self.edges.pop().expect("balanced add/remove");
            self.in_e[e] = false;
        }
        for _ in 0..n_verts {
            let v = self.verts.pop().expect("balanced add/remove");
            self.in_v[v] = false;
        }
    }

    fn cyclomatic(&self) -> usize {
        self.edges.len() + 1 - self.verts.len()
    }

    fn grow(&mut self) {
        let cyc = self.cyclomatic();
        if cyc >= 2 {
            let mut key = self.edges.clone();
            key.sort_unstable();
            if !self.seen.insert(key) {
                return;
            }
        }
        if cyc >= self.max_cyclomatic || self.edges.len() >= self.max_weight {
            return;
        }
        let budget = self.max_weight - self.edges.len();
        let mut ears = Vec::new();
        for i in 0..self.verts.len() {
            let x = self.verts[i];
            let mut path_e = Vec::new();
            let mut path_v = Vec::new();
            let mut on_path = vec![false; self.graph.vertex_count()];
            self.ears_from(
                x,
                x,
                budget,
                &mut path_e,
                &mut path_v,
                &mut on_path,
                &mut ears,
            );
        }
        for (e, v) in ears {
            let before = self.verts.len();
            self.add(&e, &v);
            let added_v = self.verts.len() - before;
            self.grow();
            self.remove(e.len(), added_v);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn ears_from(
        &self,
        origin: usize,
        here: usize,
        budget: usize,
        path_e: &mut Vec<usize>,
        path_v: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Ear>,
    ) {
        for &(w, e) in self.graph.neighbours(here) {
            if self.in_e[e] || path_e.contains(&e) {
                continue;
            }
            if self.in_v[w] {
                // closes an ear back into the subgraph
                let closed = w == origin;
                let keep = if closed {
                    // a cycle through `origin`, once per direction: keep one
                    !path_e.is_empty() && path_e[0] < e
                } else {
                    origin < w
                };
                if keep {
                    let mut edges = path_e.clone();
                    edges.push(e);
                    out.push((edges, path_v.clone()));
                }
                continue;
            }
            if on_path[w] || path_e.len() + 2 > budget {
                continue;
            }
            on_path[w] = true;
            path_e.push(e);
            path_v.push(w);
            // lollipop: a fresh cycle hanging from `w`
            let left = budget - path_e.len();
            if left >= self.min_cycle {
                let mut blocked = self.in_v.clone();
                for &p in path_v.iter() {
                    blocked[p] = true;
                }
                let mut used = self.in_e.clone();
                for &p in path_e.iter() {
                    used[p] = true;
                }
                for (cyc_e, cyc_v) in self.graph.simple_paths(w, w, left, &blocked, &used) {
                    if cyc_e.len() < 2 || cyc_e[0] > cyc_e[cyc_e.len() - 1] {
                        continue;
                    }
                    let mut edges = path_e.clone();
                    edges.extend(&cyc_e);
                    let mut verts = path_v.clone();
                    verts.extend(&cyc_v);
                    out.push((edges, verts));
                }
            }
            self.ears_from(origin, w, budget, path_e, path_v, on_path, out);
            path_v.pop();
            path_e.pop();
            on_path[w] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ex1() -> CheckMultigraph {
        CheckMultigraph::from_code(&fixtures::load("ex1-c1").unwrap()).unwrap()
    }

    fn shape(s: &str) -> PatternShape {
        PatternShape::parse(s).unwrap()
    }

    #[test]
    fn class_invariants() {
        use PatternClass::*;
        let expected = [
            (A, 3, 2),
            (B, 2, 2),
            (C, 6, 3),
            (D, 4, 3),
            (E, 3, 2),
            (F, 5, 3),
            (G, 9, 4),
        ];
        for (k, arity, cyc) in expected {
            assert_eq!((k.arity(), k.cyclomatic()), (arity, cyc), "{k}");
        }
        assert_eq!(C.symmetries().len(), 24);
        assert_eq!(F.symmetries().len(), 8);
        assert_eq!(G.symmetries().len(), 72);
        assert_eq!(E.symmetries().len(), 2);
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(shape("A-(3,1,2)").tuple, vec![1, 2, 3]);
        assert_eq!(shape("E-(5,1,4)").tuple, vec![4, 1, 5]);
        assert_eq!(shape("F-(2,3,1,2,1)"), shape("F-(1,2,2,3,1)"));
        assert_eq!(shape("C-(1,1,2,2,2,1)"), shape("C-(2,1,1,2,1,2)"));
        assert_ne!(shape("C-(1,1,1,1,2,2)"), shape("C-(1,1,2,2,1,1)"));
        assert!(PatternShape::parse("A-(1,2)").is_err());
        assert!(PatternShape::parse("B-(1,4)").is_err());
        assert!(PatternShape::parse("H-(1,2)").is_err());
        assert_eq!(shape("G -(1,1,1,1,1,1,1,1,1)").weight(), 9);
    }

    #[test]
    fn realize_and_classify_round_trip() {
        for g in [8, 10, 12, 14, 16, 18, 20] {
            for entry in PatternCatalog::build(g).unwrap().entries {
                let graph = entry.shape.realize();
                let all: Vec<usize> = (0..graph.edge_count()).collect();
                let inst = classify_subgraph(&all, &graph).expect("realisation classifies");
                assert_eq!(inst.shape, entry.shape, "{}", entry.label);
                assert_eq!(inst.checks.len(), entry.shape.checks());
                assert_eq!(inst.cycle_type, entry.shape.cycle_type());
            }
        }
    }

    #[test]
    fn table_entries_are_admissible() {
        for g in [8, 10, 12, 14, 16] {
            let cat = PatternCatalog::build(g).unwrap();
            assert_eq!(cat.min_weight(), Some(min_pattern_weight(g)), "girth {g}");
            for e in &cat.entries {
                let lens = e.shape.cycle_lengths();
                assert!(lens.iter().all(|&l| 2 * l >= g), "{} at girth {g}", e.label);
                assert!(e.weight() <= symbol_weight_bound(g));
                // one tabulated entry carries the wrong type: A-(3,6,6) has 9-column cycles
                if g == 16 && e.label == "A-(3,6,6)" {
                    assert_eq!(e.shape.cycle_type(), CycleType::II);
                    assert_eq!(e.listed_type, CycleType::I);
                } else {
                    assert_eq!(e.shape.cycle_type(), e.listed_type, "{}", e.label);
                }
            }
        }
    }

    #[test]
    fn catalog_examples() {
        let c8 = PatternCatalog::build(8).unwrap();
        let a222 = c8.find(&shape("A-(2,2,2)")).unwrap();
        assert_eq!((a222.weight(), a222.listed_type), (6, CycleType::I));
        let g = c8.find(&shape("G-(1,1,1,1,1,1,1,1,1)")).unwrap();
        assert_eq!((g.weight(), g.listed_type), (9, CycleType::I));
        let b45 = c8.find(&shape("B-(4,5)")).unwrap();
        assert_eq!((b45.weight(), b45.listed_type), (9, CycleType::II));

        let c12 = PatternCatalog::build(12).unwrap();
        let nine: Vec<_> = c12.entries.iter().filter(|e| e.weight() == 9).collect();
        assert_eq!(nine.len(), 1);
        assert_eq!(nine[0].shape, shape("A-(3,3,3)"));
        assert_eq!(nine[0].listed_type, CycleType::I);

        let c20 = PatternCatalog::build(20).unwrap();
        assert!(c20.entries.iter().all(|e| e.shape.class == PatternClass::A));
        assert_eq!(c20.entries[0].shape, shape("A-(5,5,5)"));
        assert_eq!(c20.min_weight(), Some(15));

        assert_eq!(PatternCatalog::build(9), Err(Error::Girth(9)));
        assert_eq!(PatternCatalog::build(6), Err(Error::Girth(6)));
    }

    // For girths beyond the table every theta with pairwise sums >= g/2 is listed.
    #[test]
    fn generated_catalog_minimum_weight() {
        for g in (18..=40).step_by(2) {
            let cat = PatternCatalog::build(g).unwrap();
            let brute = (1..=g)
                .flat_map(|a| (a..=g).flat_map(move |b| (b..=g).map(move |c| (a, b, c))))
                .filter(|&(a, b, c)| a + b >= g / 2 && a + c >= g / 2 && b + c >= g / 2)
                .map(|(a, b, c)| a + b + c)
                .min()
                .unwrap();
            assert_eq!(cat.min_weight(), Some(brute));
            assert_eq!(brute, min_pattern_weight(g));
        }
    }

    #[test]
    fn cycle_types() {
        assert_eq!(shape("A-(2,2,2)").cycle_type(), CycleType::I);
        assert_eq!(shape("A-(2,2,3)").cycle_type(), CycleType::II);
        assert_eq!(shape("B-(5,5)").cycle_type(), CycleType::II);
        let mut lens = shape("A-(2,2,3)").cycle_lengths();
        lens.sort_unstable();
        assert_eq!(lens, vec![4, 5, 5]);
    }

    #[test]
    fn classifies_appendix_rows() {
        let g = ex1();
        let a = classify_subgraph(&[0, 3, 4, 5, 9, 15], &g).unwrap();
        assert_eq!(a.shape, shape("A-(2,2,2)"));
        assert_eq!(a.checks.len(), 5);
        let d = classify_subgraph(&[0, 3, 4, 5, 9, 10, 14, 15], &g).unwrap();
        assert_eq!(d.shape, shape("D-(2,2,2,2)"));
        let gi = classify_subgraph(&[0, 3, 4, 5, 7, 8, 9, 13, 15], &g).unwrap();
        assert_eq!(gi.shape.class, PatternClass::G);
        assert_eq!(
            gi.checks,
            (0..8).filter(|r| ![2, 5].contains(r)).collect::<Vec<_>>()
        );
        // a bare cycle and a cycle with a pendant column are not patterns
        assert!(classify_subgraph(&[0, 3, 4, 15], &g).is_none());
        assert!(classify_subgraph(&[0, 3, 4, 15, 1], &g).is_none());
    }

    #[test]
    fn mines_example_one() {
        let g = ex1();
        let cat = PatternCatalog::build(8).unwrap();
        let res = mine_patterns(&g, &cat, MiningOptions::default()).unwrap();
        let counts: Vec<(String, usize)> = cat
            .group_counts(&res.instances)
            .into_iter()
            .map(|(e, n)| (e.label.clone(), n))
            .collect();
        let expected = [
            ("A-(2,2,2)", 48),
            ("A-(1,3,3)", 288),
            ("A-(2,2,4)", 288),
            ("B-(4,4)", 144),
            ("C-(1,1,1,1,2,2)", 144),
            ("D-(2,2,2,2)", 12),
            // the tabulated 432 misses every theta whose single-column path has a
            // smaller index than the 3-column path; all 16 columns are symmetric
            ("A-(1,3,5)", 576),
            ("A-(3,3,3)", 96),
            ("C-(1,1,2,2,2,1)", 192),
            ("E-(4,1,4)", 144),
            ("F-(2,3,1,2,1)", 576),
            ("G-(1,1,1,1,1,1,1,1,1)", 16),
        ];
        let expected: Vec<(String, usize)> =
            expected.iter().map(|(s, n)| (s.to_string(), *n)).collect();
        assert_eq!(counts, expected);
        assert!(res.uncatalogued.is_empty(), "{:?}", res.uncatalogued);
        for inst in &res.instances {
            assert_eq!(
                inst.checks.len(),
                inst.weight() + 1 - inst.shape.class.cyclomatic()
            );
            assert_eq!(classify_subgraph(&inst.columns, &g).as_ref(), Some(inst));
        }
    }

    #[test]
    fn girth_mismatch_is_an_error() {
        let cat = PatternCatalog::build(10).unwrap();
        assert!(matches!(
            mine_patterns(&ex1(), &cat, MiningOptions::default()),
            Err(Error::GirthMismatch {
                catalog: 10,
                graph: 8
            })
        ));
    }

    // Exhaustive check on a graph small enough to scan every edge subset.
    #[test]
    fn two_cores_match_subset_scan() {
        let g = ex1();
        let mut brute = Vec::new();
        for mask in 0u32..(1 << 16) {
            if mask.count_ones() > 9 {
                continue;
            }
            let cols: Vec<usize> = (0..16).filter(|i| mask >> i & 1 == 1).collect();
            if classify_connected_core(&cols, &g) {
                brute.push(cols);
            }
        }
        brute.sort();
        assert_eq!(two_cores(&g, 9, 4), brute);
    }

    fn classify_connected_core(cols: &[usize], g: &CheckMultigraph) -> bool {
        let mut deg = vec![0; g.vertex_count()];
        for &c in cols {
            for v in g.endpoints(c) {
                deg[v] += 1;
            }
        }
        if deg.iter().any(|&d| d == 1) {
            return false;
        }
        let nv = deg.iter().filter(|&&d| d > 0).count();
        if nv == 0 || cols.len() + 1 < nv + 2 || cols.len() + 1 - nv > 4 {
            return false;
        }
        // connectivity
        let mut reach = vec![false; g.vertex_count()];
        let start = g.endpoints(cols[0])[0];
        reach[start] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &c in cols {
                let [a, b] = g.endpoints(c);
                if reach[a] != reach[b] {
                    reach[a] = true;
                    reach[b] = true;
                    changed = true;
                }
            }
        }
        reach.iter().filter(|&&r| r).count() == nv
    }
}

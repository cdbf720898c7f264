//! Test-side oracles shared by the integration targets.
#![allow(dead_code)]

use nbldpc::cyclegraph::CheckMultigraph;
use nbldpc::ontology::{PatternInstance, PatternShape};

// Minimum column of each theta segment, ordered by segment length.
pub fn segment_minima(columns: &[usize], g: &CheckMultigraph) -> Vec<(usize, usize)> {
    let mut deg = std::collections::HashMap::new();
    for &c in columns {
        for v in g.endpoints(c) {
            *deg.entry(v).or_insert(0) += 1;
        }
    }
    let ends: Vec<usize> = deg.iter().filter(|x| *x.1 == 3).map(|x| *x.0).collect();
    let mut segs = Vec::new();
    for &(w, e) in g.neighbours(ends[0]) {
        if !columns.contains(&e) {
            continue;
        }
        let (mut at, mut prev, mut lo, mut len) = (w, e, e, 1);
        while at != ends[1] {
            let &(x, f) = g
                .neighbours(at)
                .iter()
                .find(|(_, f)| *f != prev && columns.contains(f))
                .unwrap();
            lo = lo.min(f);
            len += 1;
            prev = f;
            at = x;
        }
        segs.push((len, lo));
    }
    segs.sort_unstable();
    segs
}

// The published counts for thetas with three distinct segment lengths keep
// only those whose shortest segment has a larger minimum column than the
// middle one. The rule depends on column numbering, so it is reproduced
// here to pin the published figures rather than used for mining.
pub fn tabulated(segs: &[(usize, usize)]) -> bool {
    segs[0].1 > segs[1].1
}

/// Distinct-length thetas left out of the published tables.
pub fn untabulated(inst: &PatternInstance, g: &CheckMultigraph) -> bool {
    let t = &inst.shape.tuple;
    inst.shape.class == nbldpc::ontology::PatternClass::A
        && t[0] < t[1]
        && t[1] < t[2]
        && !tabulated(&segment_minima(&inst.columns, g))
}

pub fn shape(s: &str) -> PatternShape {
    PatternShape::parse(s).unwrap()
}

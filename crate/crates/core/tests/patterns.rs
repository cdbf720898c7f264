use nbldpc::cyclegraph::CheckMultigraph;
use nbldpc::fixtures;
use nbldpc::ontology::{
    classify_subgraph, mine_patterns, CycleType, MiningOptions, PatternCatalog, PatternShape,
};
use std::collections::BTreeSet;

mod common;
use common::{segment_minima, tabulated};

fn graph(name: &str) -> CheckMultigraph {
    CheckMultigraph::from_code(&fixtures::load(name).unwrap()).unwrap()
}

fn counts(name: &str, girth: usize, opts: MiningOptions) -> Vec<(String, usize)> {
    let g = graph(name);
    let cat = PatternCatalog::build(girth).unwrap();
    let res = mine_patterns(&g, &cat, opts).unwrap();
    cat.group_counts(&res.instances)
        .into_iter()
        .map(|(e, n)| (e.label.clone(), n))
        .collect()
}

fn owned(rows: &[(&str, usize)]) -> Vec<(String, usize)> {
    rows.iter().map(|(s, n)| (s.to_string(), *n)).collect()
}

#[test]
fn example_two_counts() {
    let expected = owned(&[
        ("A-(3,3,3)", 468),
        ("A-(2,4,4)", 2808),
        ("A-(1,5,5)", 8424),
        ("A-(3,3,5)", 2808),
        ("A-(2,4,6)", 22464),
        ("A-(4,4,4)", 936),
        ("B-(6,6)", 5616),
        ("C-(2,2,2,2,2,2)", 468),
        ("C-(1,2,1,2,3,3)", 2808),
        ("D-(3,3,3,3)", 117),
    ]);
    assert_eq!(counts("ex2", 12, MiningOptions::default()), expected);
    assert_eq!(tabulated_count("ex2", 12, "A-(2,4,6)"), 14976);
    // every cycle has even length, so restricting to Type-I changes nothing
    let t1 = counts(
        "ex2",
        12,
        MiningOptions {
            type_one_only: true,
        },
    );
    assert_eq!(t1, expected);
}

#[test]
fn example_three_counts() {
    let got = counts("ex3", 16, MiningOptions::default());
    for (label, n) in [
        ("A-(4,4,4)", 4320),
        ("A-(3,5,5)", 25920),
        ("A-(2,6,6)", 77760),
        ("A-(4,4,6)", 25920),
    ] {
        let found = got.iter().find(|(l, _)| l == label).map(|x| x.1);
        assert_eq!(found, Some(n), "{label}");
    }
    // weight-15 thetas are within the catalog bound but not tabulated
    for (label, _) in &got {
        let w = PatternShape::parse(label).unwrap().weight();
        assert!(w <= 15);
    }
}

// Appendix listings: each `[pattern NAME COUNT]` section must be a subset of
// the mined set, and equal to it except where noted.
#[test]
fn appendix_column_sets() {
    let text = include_str!("data/appendix_ex1.txt");
    let g = graph("ex1-c1");
    let cat = PatternCatalog::build(8).unwrap();
    let res = mine_patterns(&g, &cat, MiningOptions::default()).unwrap();
    let mut sections: Vec<(String, Vec<Vec<usize>>)> = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(h) = line.strip_prefix("[pattern ") {
            let name = h.trim_end_matches(']').rsplit_once(' ').unwrap().0;
            sections.push((name.to_string(), Vec::new()));
        } else if line.starts_with('[') {
            sections.push((String::new(), Vec::new()));
        } else if let Some((name, rows)) = sections.last_mut() {
            if !name.is_empty() {
                let mut r: Vec<usize> = line
                    .split_whitespace()
                    .map(|t| t.parse().unwrap())
                    .collect();
                r.sort_unstable();
                rows.push(r);
            }
        }
    }
    let sections: Vec<_> = sections.into_iter().filter(|s| !s.0.is_empty()).collect();
    assert_eq!(sections.len(), 12);
    for (name, rows) in sections {
        // the G listing prints eight segment lengths for nine
        let shape = if name.starts_with("G-") {
            PatternShape::parse("G-(1,1,1,1,1,1,1,1,1)").unwrap()
        } else {
            PatternShape::parse(&name).unwrap()
        };
        let listed: BTreeSet<Vec<usize>> = rows.iter().cloned().collect();
        assert_eq!(listed.len(), rows.len(), "{name}: duplicate rows");
        for r in &listed {
            let inst = classify_subgraph(r, &g).unwrap_or_else(|| panic!("{name}: {r:?}"));
            assert_eq!(inst.shape, shape, "{name}: {r:?}");
        }
        let mined: BTreeSet<Vec<usize>> = res
            .instances
            .iter()
            .filter(|i| i.shape == shape)
            .map(|i| i.columns.clone())
            .collect();
        assert!(listed.is_subset(&mined), "{name}");
        if name == "A-(1,3,5)" {
            assert_eq!((listed.len(), mined.len()), (432, 576));
            let kept: BTreeSet<Vec<usize>> = mined
                .iter()
                .filter(|c| tabulated(&segment_minima(c, &g)))
                .cloned()
                .collect();
            assert_eq!(kept, listed);
        } else {
            assert_eq!(listed, mined, "{name}");
        }
    }
}

#[test]
fn type_filter_on_example_one() {
    let g = graph("ex1-c1");
    let cat = PatternCatalog::build(8).unwrap();
    let all = mine_patterns(&g, &cat, MiningOptions::default()).unwrap();
    let t1 = mine_patterns(
        &g,
        &cat,
        MiningOptions {
            type_one_only: true,
        },
    )
    .unwrap();
    assert_eq!(all.instances, t1.instances);
    assert!(all.instances.iter().all(|i| i.cycle_type == CycleType::I));
}

fn tabulated_count(name: &str, girth: usize, label: &str) -> usize {
    let g = graph(name);
    let cat = PatternCatalog::build(girth).unwrap();
    let shape = PatternShape::parse(label).unwrap();
    mine_patterns(&g, &cat, MiningOptions::default())
        .unwrap()
        .instances
        .iter()
        .filter(|i| i.shape == shape && tabulated(&segment_minima(&i.columns, &g)))
        .count()
}

#[test]
fn example_one_tabulated_theta() {
    assert_eq!(tabulated_count("ex1-c1", 8, "A-(1,3,5)"), 432);
}

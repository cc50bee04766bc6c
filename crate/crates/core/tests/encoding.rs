use entrofy::encode::{encode_joint, encode_ordinal};
use entrofy::{build_matrix, AttributeSpec, CandidateTable};
use proptest::prelude::*;

fn table(rows: &[(&str, &str, &str)]) -> CandidateTable {
    let mut csv = String::from("id,colour,score\n");
    for (id, c, s) in rows {
        csv.push_str(&format!("{id},{c},{s}\n"));
    }
    CandidateTable::from_csv(csv.as_bytes(), None).unwrap()
}

/// Independent bin lookup: scan the intervals in order.
fn oracle_bin(edges: &[f64], v: f64) -> Option<usize> {
    let m = edges.len() - 1;
    (0..m).find(|&j| {
        let last = j == m - 1;
        v >= edges[j] && (v < edges[j + 1] || (last && v == edges[j + 1]))
    })
}

fn colour_strategy() -> impl Strategy<Value = Vec<(Option<usize>, Option<i32>)>> {
    prop::collection::vec(
        (prop::option::weighted(0.9, 0usize..3), prop::option::weighted(0.9, -50i32..50)),
        1..40,
    )
}

const COLOURS: [&str; 3] = ["red", "green", "blue"];

fn build_table(rows: &[(Option<usize>, Option<i32>)]) -> CandidateTable {
    let owned: Vec<(String, String, String)> = rows
        .iter()
        .enumerate()
        .map(|(i, (c, s))| {
            (
                format!("c{i}"),
                c.map(|c| COLOURS[c].to_string()).unwrap_or_default(),
                s.map(|s| s.to_string()).unwrap_or_default(),
            )
        })
        .collect();
    let refs: Vec<(&str, &str, &str)> = owned
        .iter()
        .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
        .collect();
    table(&refs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn columns_of_an_attribute_are_exclusive(rows in colour_strategy(), bins in 1usize..5) {
        let t = build_table(&rows);
        let specs = vec![
            AttributeSpec::categorical("colour", COLOURS),
            AttributeSpec::ordinal("score", bins),
        ];
        let Ok(m) = build_matrix(&t, &specs) else {
            // Only constant or absent scores can fail here.
            let scores: Vec<i32> = rows.iter().filter_map(|r| r.1).collect();
            prop_assert!(scores.is_empty() || scores.iter().all(|&s| s == scores[0]));
            return Ok(());
        };
        for (_, cols) in m.attribute_groups() {
            for x in 0..m.pool_size() {
                let set = cols.iter().filter(|&&c| m.columns()[c].indicator[x]).count();
                prop_assert!(set <= 1);
            }
        }
        // Missing values produce all-zero rows.
        for (x, (c, s)) in rows.iter().enumerate() {
            let colour_set = (0..3).filter(|&j| m.columns()[j].indicator[x]).count();
            prop_assert_eq!(colour_set, usize::from(c.is_some()));
            let score_set = (3..m.column_count()).filter(|&j| m.columns()[j].indicator[x]).count();
            prop_assert_eq!(score_set, usize::from(s.is_some()));
        }
        prop_assert_eq!(build_matrix(&t, &specs).unwrap(), m);
    }

    #[test]
    fn explicit_edges_match_interval_scan(rows in colour_strategy()) {
        let t = build_table(&rows);
        let edges = vec![-50.0, -10.0, 0.0, 7.5, 49.0];
        let spec = AttributeSpec::ordinal_with_edges("score", edges.clone());
        let cols = encode_ordinal(&t, &spec).unwrap();
        prop_assert_eq!(cols.len(), 4);
        for (x, (_, s)) in rows.iter().enumerate() {
            let expected = s.and_then(|s| oracle_bin(&edges, s as f64));
            let got = (0..4).find(|&j| cols[j].indicator[x]);
            prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn joint_columns_sum_to_component_columns(rows in colour_strategy()) {
        let t = build_table(&rows);
        let colour = AttributeSpec::categorical("colour", COLOURS);
        let score = AttributeSpec::ordinal_with_edges("score", vec![-50.0, 0.0, 50.0]);
        let joint = AttributeSpec::joint("cs", "colour", "score");
        let jc = encode_joint(&t, &joint, [&colour, &score]).unwrap();
        prop_assert_eq!(jc.len(), 6);
        for (a, name) in COLOURS.iter().enumerate() {
            prop_assert_eq!(&jc[a * 2].value_label, &format!("{name}×[-50, 0)"));
            for (x, row) in rows.iter().enumerate() {
                let both = row.0 == Some(a) && row.1.is_some();
                let marginal = jc[a * 2].indicator[x] || jc[a * 2 + 1].indicator[x];
                prop_assert_eq!(marginal, both);
            }
        }
    }
}

#[test]
fn component_only_specs_feed_joints_without_columns() {
    let t = table(&[("a", "red", "1"), ("b", "blue", "9"), ("c", "red", "5")]);
    let specs = vec![
        AttributeSpec::categorical("colour", ["red", "blue"]).component_only(),
        AttributeSpec::ordinal("score", 2).component_only(),
        AttributeSpec::joint("cs", "colour", "score").with_target("red×[1, 5)", 0.5),
    ];
    let m = build_matrix(&t, &specs).unwrap();
    assert_eq!(m.column_count(), 4);
    assert!(m.columns().iter().all(|c| c.source_attribute == "cs"));
    let red_low = &m.columns()[0];
    assert_eq!(red_low.value_label, "red×[1, 5)");
    assert_eq!(red_low.target, 0.5);
    assert_eq!(red_low.indicator, vec![true, false, false]);
    assert_eq!(m.columns()[1].indicator, vec![false, false, true]);
}

#[test]
fn every_schema_problem_is_reported() {
    let t = table(&[("a", "red", "1"), ("b", "pink", "x")]);
    let specs = vec![
        AttributeSpec::categorical("colour", ["red"]).with_target("red", 1.5),
        AttributeSpec::ordinal("score", 2),
        AttributeSpec::categorical("height", ["tall"]),
    ];
    let errs = entrofy::encode::validate_schema(&t, &specs);
    let text: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
    assert!(errs.len() >= 3, "{text:?}");
    assert!(text.iter().any(|m| m.contains("height")));
    assert!(text.iter().any(|m| m.contains("score")));
    assert!(text.iter().any(|m| m.contains("colour")));
}

use lolab_web::{antichain_json, bound_curve_json, distribution_json};
use serde_json::Value;

fn parse(text: Result<String, String>) -> Value {
    serde_json::from_str(&text.unwrap()).unwrap()
}

#[test]
fn curve_matches_known_values() {
    let v = parse(bound_curve_json("1", 4));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["bound"], "1/4");
    assert_eq!(rows[2]["bound"], "3/8");
    for r in rows {
        assert!(r["bound_f64"].as_f64().unwrap() <= r["hoeffding"].as_f64().unwrap());
        assert!(r["bound_f64"].as_f64().unwrap() <= r["uniform_f64"].as_f64().unwrap());
    }
}

#[test]
fn distribution_lists_atoms_with_bounds() {
    let v = parse(distribution_json("1,1", 0));
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 3);
    assert_eq!(atoms[1]["x"], serde_json::json!(["0"]));
    assert_eq!(atoms[1]["p"], "1/2");
    assert!(atoms[1]["bound"].is_null());
    assert_eq!(atoms[2]["bound"], "1/4");
    assert_eq!(v["max"], "1/2");

    let v = parse(distribution_json("(1,0),(0,1)", 0));
    assert_eq!(v["dim"], 2);
    assert_eq!(v["atoms"].as_array().unwrap().len(), 4);

    let v = parse(distribution_json("1/2", 3));
    assert_eq!(v["atoms"].as_array().unwrap().len(), 3);
}

#[test]
fn antichain_example() {
    let v = parse(antichain_json("1,1,1", "1"));
    assert_eq!(v["size"], 3);
    assert_eq!(v["sets"], serde_json::json!([[1, 2], [1, 3], [2, 3]]));
    assert_eq!(v["antichain"], true);
    assert_eq!(v["k_intersecting"], true);
    assert_eq!(v["milner"], true);
    assert_eq!(v["probability"], "3/8");
}

#[test]
fn bad_input_is_an_error_not_a_panic() {
    assert!(bound_curve_json("x", 4).is_err());
    assert!(bound_curve_json("1", 0).is_err());
    assert!(distribution_json("2", 0).is_err());
    assert!(distribution_json(&vec!["1"; 20].join(","), 0).is_err());
    assert!(antichain_json("(1,0)", "1").is_err());
    assert!(antichain_json("1,-1", "0").is_err());
}

use zeckauto::interspersion::{first_column, generate, ArraySpec};

fn check(name: &str, expected: &str) {
    let table = generate(&ArraySpec::builtin(name).unwrap(), 10, 10);
    assert_eq!(table.to_tsv(), expected, "{name}");
}

#[test]
fn wythoff_table() {
    check("wythoff", include_str!("../../../data/tables/wythoff.tsv"));
}

#[test]
fn stolarsky_table() {
    check("stolarsky", include_str!("../../../data/tables/stolarsky.tsv"));
}

#[test]
fn dual_table() {
    check("dual", include_str!("../../../data/tables/dual.tsv"));
}

#[test]
fn efc_table() {
    check("efc", include_str!("../../../data/tables/efc.tsv"));
}

#[test]
fn k100_first_column() {
    let col = first_column(&ArraySpec::builtin("k100").unwrap(), 19);
    assert_eq!(col, [1, 4, 7, 9, 12, 14, 17, 20, 23, 25, 27, 30, 33, 35, 38, 40, 44, 46, 49]);
}

#[test]
fn esc_second_column_is_even() {
    let spec = ArraySpec::builtin("esc").unwrap();
    let t = generate(&spec, 300, 2);
    for i in 1..=300 {
        assert_eq!(t.get(i, 2).unwrap() % 2u32, 0u32.into(), "row {i}");
    }
}

use dehnvol_wasm::{classify_lines, field_lines, volume_lines};

fn get<'a>(lines: &'a [(&str, String)], key: &str) -> &'a str {
    &lines
        .iter()
        .find(|(k, _)| *k == key)
        .unwrap_or_else(|| panic!("no {key}"))
        .1
}

#[test]
fn volume_of_the_golden_surgery() {
    let l = volume_lines("1", "1", 6).unwrap();
    assert_eq!(get(&l, "d"), "5");
    assert_eq!(get(&l, "volume (sqrt D)"), "0.215204");
    let dashed = volume_lines("1-2", "1", 6).unwrap();
    assert_eq!(dashed, volume_lines("1 2", "1", 6).unwrap());
    assert!(volume_lines("1 x", "1", 6).is_err());
    assert!(volume_lines("1", "c", 6).is_err());
    assert!(volume_lines("0", "1", 6).is_err());
}

#[test]
fn field_invariants() {
    let l = field_lines(10, 6).unwrap();
    assert_eq!(get(&l, "D"), "40");
    assert_eq!(get(&l, "h"), "2");
    assert_eq!(get(&l, "N(epsilon)"), "-1");
    assert!(field_lines(4, 6).is_err());
}

#[test]
fn classification() {
    let l = classify_lines("1 1 1 0", 6).unwrap();
    assert_eq!(get(&l, "d"), "5");
    assert_eq!(get(&l, "principal"), "true");
    let r3 = classify_lines("1,1,0, 0,0,1, 1,0,0", 6).unwrap();
    assert_eq!(get(&r3, "rank"), "3");
    assert!(classify_lines("1 0 0 1", 6).is_err());
    assert!(classify_lines("1 1 1", 6).is_err());
}

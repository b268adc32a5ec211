//! The canonical printer and the parser are mutually inverse on the webs
//! the generator can produce.

use webgpa::parser::parse;
use webgpa::testutil::random_web;

#[test]
fn print_then_parse_is_the_identity_on_random_webs() {
    for n in 2..=5usize {
        for seed in 0..100u64 {
            let w = random_web(seed.wrapping_mul(31).wrapping_add(n as u64), n, 4);
            let text = w.to_string();
            let back = parse(&text).unwrap_or_else(|e| {
                panic!("printed form failed to reparse: {e}\n{text}")
            });
            assert_eq!(w, back, "roundtrip mismatch for\n{text}");
            // Printing again is stable, so the text form is canonical.
            assert_eq!(text, back.to_string());
        }
    }
}

#[test]
fn parsing_tolerates_layout_but_printing_normalizes_it() {
    let messy = "web   n=3\n  dom=[ 1 , 2 ]  {\n    [ merge(1,2) ]\n # comment\n [ ncap ]\n}\n";
    let w = parse(messy).unwrap();
    assert_eq!(w.to_string(), "web n=3 dom=[1,2] { [merge(1,2)] [ncap] }");
    let again = parse(&w.to_string()).unwrap();
    assert_eq!(w, again);
}

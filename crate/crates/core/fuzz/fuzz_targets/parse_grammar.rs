#![no_main]

use libfuzzer_sys::fuzz_target;
use suffix_earley::tau2::is_two_normal_form;
use suffix_earley::{parse_grammar, serialize_grammar, tau2_transform};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = parse_grammar(text) else {
        return;
    };
    let canonical = serialize_grammar(&g);
    let back = parse_grammar(&canonical).expect("canonical text parses");
    assert_eq!(serialize_grammar(&back), canonical);
    assert!(g.is_isomorphic(&back));

    let cover = tau2_transform(&g);
    assert!(is_two_normal_form(&cover));
    let cover_text = serialize_grammar(&cover);
    let cover_back = parse_grammar(&cover_text).expect("cover text parses");
    assert_eq!(serialize_grammar(&cover_back), cover_text);
});

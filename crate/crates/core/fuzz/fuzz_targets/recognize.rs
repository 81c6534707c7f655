#![no_main]

use libfuzzer_sys::fuzz_target;
use suffix_earley::bench::check_run_invariants;
use suffix_earley::{parse_grammar, recognize_earley, recognize_variant, tau2_transform};

// Input: grammar text, a NUL byte, then the sentence.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((grammar, sentence)) = text.split_once('\0') else {
        return;
    };
    if grammar.len() > 512 || sentence.len() > 64 {
        return;
    }
    let Ok(g) = parse_grammar(grammar) else {
        return;
    };
    let Ok(w) = g.tokenize(sentence) else {
        return;
    };
    let e = recognize_earley(&g, &w).unwrap();
    let v = recognize_variant(&g, &w).unwrap();
    let t = recognize_earley(&tau2_transform(&g), &w).unwrap();
    assert_eq!(e.stats.accepted, v.stats.accepted);
    assert_eq!(e.stats.accepted, t.stats.accepted);
    assert!(check_run_invariants(w.len(), &e.stats, &v.stats).is_empty());
});

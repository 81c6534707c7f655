#![no_main]

use libfuzzer_sys::fuzz_target;
use suffix_earley::parse_grammar;
use suffix_earley::text::{parse_sentence_file, render_sentences};

const GRAMMAR: &str = "S -> a S b | c\n";

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let lines = parse_sentence_file(text);
    assert!(lines
        .iter()
        .flatten()
        .all(|w| !w.is_empty() && !w.contains(char::is_whitespace)));

    let g = parse_grammar(GRAMMAR).unwrap();
    let Ok(sentences) = lines
        .into_iter()
        .map(|words| g.tokenize_words(words))
        .collect::<Result<Vec<_>, _>>()
    else {
        return;
    };
    let rendered = render_sentences(&g, &sentences);
    let again = parse_sentence_file(&rendered)
        .into_iter()
        .map(|words| g.tokenize_words(words).unwrap())
        .collect::<Vec<_>>();
    assert_eq!(again, sentences);
});

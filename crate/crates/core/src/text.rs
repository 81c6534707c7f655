//! Grammar and sentence file formats.
//!
//! A grammar file holds one production per line:
//!
//! ```text
//! # comment
//! %start S
//! S -> a S b |
//! ```
//!
//! Symbols are whitespace-separated. `|` separates alternatives, an empty
//! alternative is an ε-production, and `#` starts a comment. Nonterminals are
//! exactly the names occurring on a left-hand side; everything else is a
//! terminal. Without `%start`, the first left-hand side is the start symbol.

use crate::grammar::{Grammar, GrammarBuilder, GrammarError};

fn syntax(line: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses grammar text. Accepts LF or CRLF line endings.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut builder = GrammarBuilder::new();
    let mut start: Option<String> = None;

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens = line.split_whitespace().collect::<Vec<_>>();
        let Some(&first) = tokens.first() else {
            continue;
        };

        if let Some(directive) = first.strip_prefix('%') {
            if directive != "start" {
                return Err(syntax(line_no, format!("unknown directive `{first}`")));
            }
            if tokens.len() != 2 {
                return Err(syntax(line_no, "`%start` takes exactly one symbol"));
            }
            if start.is_some() {
                return Err(syntax(line_no, "duplicate `%start` directive"));
            }
            if !crate::grammar::is_valid_name(tokens[1]) {
                return Err(syntax(
                    line_no,
                    format!("invalid symbol name `{}`", tokens[1]),
                ));
            }
            start = Some(tokens[1].to_string());
            continue;
        }

        if first == "->" || first == "|" {
            return Err(syntax(line_no, "missing left-hand side"));
        }
        if tokens.get(1) != Some(&"->") {
            return Err(syntax(line_no, format!("expected `->` after `{first}`")));
        }
        for alternative in tokens[2..].split(|t| *t == "|") {
            if let Some(bad) = alternative.iter().find(|t| **t == "->") {
                return Err(syntax(line_no, format!("unexpected `{bad}`")));
            }
            builder
                .production(first, alternative)
                .map_err(|e| match e {
                    GrammarError::InvalidName(name) => {
                        syntax(line_no, format!("invalid symbol name `{name}`"))
                    }
                    other => other,
                })?;
        }
    }

    if let Some(name) = &start {
        builder.start(name);
    }
    builder.build()
}

/// Writes the canonical text form: a `%start` line followed by one line per
/// production in production order, LF-terminated.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = format!("%start {}\n", g.name(g.start()));
    for p in g.productions() {
        out.push_str(g.name(p.lhs));
        out.push_str(" ->");
        for &s in &p.rhs {
            out.push(' ');
            out.push_str(g.name(s));
        }
        out.push('\n');
    }
    out
}

/// Splits a sentence file into sentences of raw tokens.
///
/// One sentence per line; a blank line is the empty sentence. A final line
/// terminator does not start an extra sentence.
pub fn parse_sentence_file(text: &str) -> Vec<Vec<&str>> {
    text.lines()
        .map(|line| line.split_whitespace().collect())
        .collect()
}

/// Renders sentences in the sentence-file format.
pub fn render_sentences<S: AsRef<[crate::SymbolId]>>(g: &Grammar, sentences: &[S]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&g.display_symbols(s.as_ref()));
        out.push('\n');
    }
    out
}

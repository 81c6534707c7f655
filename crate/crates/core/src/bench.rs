//! Side-by-side runs of Earley, the variant, and Earley over the τ2 cover,
//! aggregated into one comparison row per grammar.

use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::earley::{recognize_earley, EarleyStats, RecognizeError};
use crate::grammar::{Grammar, SymbolId};
use crate::tau2::tau2_transform;
use crate::variant::{recognize_variant, VariantStats};

/// An exact mean, rendered with one decimal.
pub type Mean = Ratio<u128>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompareError {
    #[error("no sentences to compare")]
    NoSentences,
    #[error("sentence `{sentence}`: {source}")]
    Recognize {
        sentence: String,
        source: RecognizeError,
    },
    #[error("engines disagree on `{sentence}`: earley={earley} variant={variant} tau2={tau2}")]
    Disagreement {
        sentence: String,
        earley: bool,
        variant: bool,
        tau2: bool,
    },
    #[error("invariant violated on `{sentence}`: {detail}")]
    Invariant { sentence: String, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub grammar: String,
    pub sentences: usize,
    pub mean_len: Mean,
    pub earley_steps: Mean,
    pub earley_items: Mean,
    pub variant_steps: Mean,
    pub u_items: Mean,
    pub t_items: Mean,
    pub ut_items: Mean,
    pub tau2_steps: Mean,
    pub tau2_items: Mean,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub sentence: Vec<SymbolId>,
    pub earley: EarleyStats,
    pub variant: VariantStats,
    pub tau2: EarleyStats,
}

/// The table-size and step-count relations both recognizers must satisfy
/// on an input of length `n`. Returns one message per violated relation.
pub fn check_run_invariants(n: usize, e: &EarleyStats, v: &VariantStats) -> Vec<String> {
    let n = n as u128;
    let mut out = Vec::new();
    let mut require = |ok: bool, what: String| {
        if !ok {
            out.push(what);
        }
    };
    require(
        v.u_count <= e.item_count,
        format!("|U| = {} > |E| = {}", v.u_count, e.item_count),
    );
    if n >= 1 {
        require(
            v.t_count as u128 <= n * e.item_count as u128,
            format!("|T| = {} > n|E| = {}", v.t_count, n * e.item_count as u128),
        );
    }
    for (k, ve, ee) in [
        (1, v.steps1, e.steps1),
        (2, v.steps2, e.steps2),
        (3, v.steps3, e.steps3),
    ] {
        require(ve <= ee, format!("V{k} = {ve} > E{k} = {ee}"));
    }
    require(
        v.total as u128 <= (n + 2) * e.total as u128,
        format!("V = {} > (n+2)E = {}", v.total, (n + 2) * e.total as u128),
    );
    out
}

/// Runs all three engines on every sentence and aggregates exact means.
///
/// Sentences are processed in parallel; results keep input order, and the
/// first failing sentence in input order determines the error.
pub fn compare(
    g: &Grammar,
    name: &str,
    sentences: &[Vec<SymbolId>],
) -> Result<(ComparisonRow, Vec<RunRecord>), CompareError> {
    if sentences.is_empty() {
        return Err(CompareError::NoSentences);
    }
    let cover = tau2_transform(g);
    let records = sentences
        .par_iter()
        .map(|w| run_one(g, &cover, w))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok((aggregate(name, &records), records))
}

fn run_one(g: &Grammar, cover: &Grammar, w: &[SymbolId]) -> Result<RunRecord, CompareError> {
    let shown = || g.display_symbols(w);
    let wrap = |source| CompareError::Recognize {
        sentence: shown(),
        source,
    };
    let earley = recognize_earley(g, w).map_err(wrap)?.stats;
    let variant = recognize_variant(g, w).map_err(wrap)?.stats;
    let tau2 = recognize_earley(cover, w).map_err(wrap)?.stats;
    if earley.accepted != variant.accepted || earley.accepted != tau2.accepted {
        return Err(CompareError::Disagreement {
            sentence: shown(),
            earley: earley.accepted,
            variant: variant.accepted,
            tau2: tau2.accepted,
        });
    }
    let broken = check_run_invariants(w.len(), &earley, &variant);
    if !broken.is_empty() {
        return Err(CompareError::Invariant {
            sentence: shown(),
            detail: broken.join("; "),
        });
    }
    Ok(RunRecord {
        sentence: w.to_vec(),
        earley,
        variant,
        tau2,
    })
}

fn aggregate(name: &str, records: &[RunRecord]) -> ComparisonRow {
    let count = records.len() as u128;
    let mean = |f: &dyn Fn(&RunRecord) -> u64| -> Mean {
        Ratio::new(records.iter().map(|r| f(r) as u128).sum(), count)
    };
    let u_items = mean(&|r| r.variant.u_count);
    let t_items = mean(&|r| r.variant.t_count);
    ComparisonRow {
        grammar: name.to_string(),
        sentences: records.len(),
        mean_len: mean(&|r| r.sentence.len() as u64),
        earley_steps: mean(&|r| r.earley.total),
        earley_items: mean(&|r| r.earley.item_count),
        variant_steps: mean(&|r| r.variant.total),
        u_items,
        t_items,
        ut_items: u_items + t_items,
        tau2_steps: mean(&|r| r.tau2.total),
        tau2_items: mean(&|r| r.tau2.item_count),
    }
}

/// Rounds half up to one decimal place.
pub fn render_mean(m: &Mean) -> String {
    let tenths = (m.numer() * 20 + m.denom()) / (m.denom() * 2);
    format!("{}.{}", tenths / 10, tenths % 10)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

pub const CSV_HEADER: &str =
    "grammar,sentences,mean_len,earley_steps,earley_items,variant_steps,u_items,t_items,ut_items,tau2_steps,tau2_items";

const MARKDOWN_HEADER: [&str; 11] = [
    "Grammar",
    "Sentences",
    "Mean length",
    "Earley steps",
    "Earley items",
    "Variant steps",
    "U items",
    "T items",
    "U+T items",
    "tau2 steps",
    "tau2 items",
];

impl ComparisonRow {
    fn means(&self) -> [&Mean; 9] {
        [
            &self.mean_len,
            &self.earley_steps,
            &self.earley_items,
            &self.variant_steps,
            &self.u_items,
            &self.t_items,
            &self.ut_items,
            &self.tau2_steps,
            &self.tau2_items,
        ]
    }
}

#[derive(Serialize)]
struct JsonRow<'a> {
    grammar: &'a str,
    sentences: usize,
    mean_len: serde_json::Number,
    earley_steps: serde_json::Number,
    earley_items: serde_json::Number,
    variant_steps: serde_json::Number,
    u_items: serde_json::Number,
    t_items: serde_json::Number,
    ut_items: serde_json::Number,
    tau2_steps: serde_json::Number,
    tau2_items: serde_json::Number,
}

fn json_number(m: &Mean) -> serde_json::Number {
    let text = render_mean(m);
    let value: f64 = text.parse().expect("rendered decimal");
    serde_json::Number::from_f64(value).expect("finite")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders rows deterministically in the requested format.
pub fn render_report(rows: &[ComparisonRow], format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for row in rows {
                let mut fields = vec![csv_field(&row.grammar), row.sentences.to_string()];
                fields.extend(row.means().iter().map(|m| render_mean(m)));
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
        ReportFormat::Json => {
            let json = rows
                .iter()
                .map(|r| JsonRow {
                    grammar: &r.grammar,
                    sentences: r.sentences,
                    mean_len: json_number(&r.mean_len),
                    earley_steps: json_number(&r.earley_steps),
                    earley_items: json_number(&r.earley_items),
                    variant_steps: json_number(&r.variant_steps),
                    u_items: json_number(&r.u_items),
                    t_items: json_number(&r.t_items),
                    ut_items: json_number(&r.ut_items),
                    tau2_steps: json_number(&r.tau2_steps),
                    tau2_items: json_number(&r.tau2_items),
                })
                .collect::<Vec<_>>();
            out = serde_json::to_string_pretty(&json).expect("plain rows");
            out.push('\n');
        }
        ReportFormat::Markdown => {
            let _ = writeln!(out, "| {} |", MARKDOWN_HEADER.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(MARKDOWN_HEADER.len()));
            for row in rows {
                let mut cells = vec![row.grammar.replace('|', "\\|"), row.sentences.to_string()];
                cells.extend(row.means().iter().map(|m| render_mean(m)));
                let _ = writeln!(out, "| {} |", cells.join(" | "));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_grammar;

    const EXAMPLE: &str = "S -> A B\nA -> C\nB -> C\nC -> a C\nC ->";

    fn row_for(grammar: &str, sentences: &[&str]) -> (ComparisonRow, Vec<RunRecord>) {
        let g = parse_grammar(grammar).unwrap();
        let ws = sentences
            .iter()
            .map(|s| g.tokenize(s).unwrap())
            .collect::<Vec<_>>();
        compare(&g, "g", &ws).unwrap()
    }

    #[test]
    fn epsilon_sentence_counts() {
        let (row, _) = row_for("S ->", &[""]);
        assert_eq!(row.earley_steps, Ratio::from_integer(1));
        assert_eq!(row.variant_steps, Ratio::from_integer(2));
        assert_eq!(row.ut_items, Ratio::from_integer(2));
    }

    #[test]
    fn example_grammar_row() {
        let (row, records) = row_for(EXAMPLE, &["a", "a a", "a a a"]);
        assert_eq!(row.sentences, 3);
        assert_eq!(row.mean_len, Ratio::from_integer(2));
        assert_eq!(row.ut_items, row.u_items + row.t_items);
        // T grows quadratically with n: the [B] items alone fill a triangle.
        let t = records
            .iter()
            .map(|r| r.variant.t_count)
            .collect::<Vec<_>>();
        assert!(t[2] - t[1] > t[1] - t[0]);
    }

    #[test]
    fn empty_sentence_set() {
        let g = parse_grammar("S -> a").unwrap();
        assert_eq!(
            compare(&g, "g", &[]).unwrap_err(),
            CompareError::NoSentences
        );
    }

    #[test]
    fn rounding() {
        assert_eq!(render_mean(&Ratio::new(1, 4)), "0.3");
        assert_eq!(render_mean(&Ratio::new(1, 3)), "0.3");
        assert_eq!(render_mean(&Ratio::new(2062, 1)), "2062.0");
        assert_eq!(render_mean(&Ratio::new(137, 10)), "13.7");
        assert_eq!(render_mean(&Ratio::new(2, 3)), "0.7");
    }

    #[test]
    fn csv_header_only() {
        assert_eq!(
            render_report(&[], ReportFormat::Csv),
            format!("{CSV_HEADER}\n")
        );
    }

    #[test]
    fn json_keys() {
        let (row, _) = row_for("S -> a", &["a"]);
        let text = render_report(&[row], ReportFormat::Json);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let rows = value.as_array().unwrap();
        assert_eq!(rows.len(), 1);
        let keys = rows[0]
            .as_object()
            .unwrap()
            .keys()
            .cloned()
            .collect::<Vec<_>>();
        let mut expected = CSV_HEADER
            .split(',')
            .map(str::to_string)
            .collect::<Vec<_>>();
        let mut sorted = keys.clone();
        sorted.sort();
        expected.sort();
        assert_eq!(sorted, expected);
        assert_eq!(rows[0]["earley_steps"], serde_json::json!(2.0));
    }

    #[test]
    fn markdown_columns() {
        let (row, _) = row_for("S -> a", &["a"]);
        let text = render_report(&[row], ReportFormat::Markdown);
        for line in text.lines() {
            assert_eq!(line.matches('|').count(), 12, "{line}");
        }
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn invariant_messages() {
        let e = EarleyStats {
            item_count: 1,
            total: 1,
            ..EarleyStats::default()
        };
        let v = VariantStats {
            u_count: 2,
            total: 9,
            steps1: 1,
            ..VariantStats::default()
        };
        let broken = check_run_invariants(1, &e, &v);
        assert_eq!(broken.len(), 3, "{broken:?}");
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;

use common::{all_inputs, corpus, enumerate_acyclic_trees, words};
use suffix_earley::bench::{compare, render_mean};
use suffix_earley::oracle::{
    check_prop_earley, check_prop_variant, count_acyclic_parses, derives, enumerate_language,
};
use suffix_earley::sentgen::{generate_sentences, GenConfig};
use suffix_earley::tau2::is_two_normal_form;
use suffix_earley::{
    parse_grammar, recognize_earley, recognize_earley_with, recognize_variant,
    recognize_variant_with, tau2_transform, AgendaOrder, DottedItem, Grammar, RecognizeOptions,
    SymbolId,
};

const EXAMPLE: &str = include_str!("../grammars/example.cfg");
const SHARED_SEGMENT: &str = include_str!("../grammars/shared_segment.cfg");
const SUFFIX_FAMILY: &str = include_str!("../grammars/suffix_family.cfg");
const AMBIGUOUS: &str = include_str!("../grammars/ambiguous.cfg");

const CORPUS_SIZE: u64 = 200;
const MAX_INPUT: usize = 4;
const GENERATED_PER_GRAMMAR: usize = 20;
const TREE_LIMIT: usize = 50;
const TREE_BUDGET: usize = 50_000;

type Outcome = Result<String, String>;

/// Number, title, time limit, body.
type Check<'a> = (u32, &'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn sym(g: &Grammar, name: &str) -> SymbolId {
    g.lookup(name).unwrap_or_else(|| panic!("no symbol {name}"))
}

fn profiled(agenda: AgendaOrder) -> RecognizeOptions {
    RecognizeOptions {
        agenda,
        profile: true,
    }
}

fn generation(seed: u64) -> GenConfig {
    GenConfig {
        seed,
        count: GENERATED_PER_GRAMMAR,
        max_len: 10,
        max_attempts: 500,
        ..GenConfig::default()
    }
}

fn example_items() -> Outcome {
    let g = parse_grammar(EXAMPLE).unwrap();
    let s_prod = g.productions_of(g.start()).next().unwrap().id;
    let (middle, done) = (DottedItem::new(s_prod, 1), DottedItem::new(s_prod, 2));
    let b_suffix = g.suffix_id(&[sym(&g, "B")]).unwrap();
    let mut b_counts = Vec::new();
    for n in [1usize, 2, 5, 10] {
        let w = vec![sym(&g, "a"); n];
        let e = recognize_earley(&g, &w).map_err(|e| e.to_string())?;
        ensure(e.stats.accepted, || format!("a^{n} rejected"))?;
        for item in [middle, done] {
            let spans = e
                .chart
                .iter()
                .filter(|&(_, _, it)| it == item)
                .collect::<Vec<_>>();
            ensure(spans.len() == n + 1, || {
                format!("n={n}: {} copies of {}", spans.len(), g.display_item(item))
            })?;
            ensure(spans.iter().all(|&(i, _, _)| i == 0), || {
                format!("n={n}: origin other than 0")
            })?;
        }
        let v = recognize_variant(&g, &w).map_err(|e| e.to_string())?;
        let b = v.backward.iter().filter(|&(_, _, s)| s == b_suffix).count();
        ensure(b == (n + 1) * (n + 2) / 2, || {
            format!("n={n}: {b} copies of [B] in T")
        })?;
        b_counts.push(b);
    }
    Ok(format!(
        "[B] in T for n=1,2,5,10: {b_counts:?} = (n+1)(n+2)/2"
    ))
}

fn shared_segment() -> Outcome {
    let g = parse_grammar(SHARED_SEGMENT).unwrap();
    let w = words(&g, "a a a b c");
    let a = sym(&g, "A");
    let long = g.productions_of(a).next().unwrap().id;
    let e =
        recognize_earley_with(&g, &w, profiled(AgendaOrder::Fifo)).map_err(|e| e.to_string())?;
    let v =
        recognize_variant_with(&g, &w, profiled(AgendaOrder::Fifo)).map_err(|e| e.to_string())?;
    let ep = e.profile.unwrap();
    let vp = v.profile.unwrap();
    let earley: u64 = [1, 2]
        .iter()
        .map(|&d| {
            ep.step3_by_item
                .get(&DottedItem::new(long, d))
                .copied()
                .unwrap_or(0)
        })
        .sum();
    let segment = [
        g.suffix_id(&[sym(&g, "A2"), sym(&g, "A3"), sym(&g, "A4")])
            .unwrap(),
        g.suffix_id(&[sym(&g, "A3"), sym(&g, "A4")]).unwrap(),
    ];
    let forward: u64 = segment
        .iter()
        .map(|s| vp.step3_by_suffix.get(s).copied().unwrap_or(0))
        .sum();
    let backward: u64 = segment
        .iter()
        .map(|s| vp.step6_by_suffix.get(s).copied().unwrap_or(0))
        .sum();
    ensure((earley, forward, backward) == (6, 2, 0), || {
        format!(
            "earley completions {earley}, forward {forward}, backward {backward}; expected 6, 2, 0"
        )
    })?;
    Ok("3 origins, 4 constituents: earley 6, variant forward 2, backward 0".into())
}

fn characterization_audit(grammars: &[Grammar]) -> Outcome {
    let mut runs = 0usize;
    for (seed, g) in grammars.iter().enumerate() {
        for w in all_inputs(g, MAX_INPUT) {
            let e = recognize_earley(g, &w).map_err(|e| e.to_string())?;
            let v = recognize_variant(g, &w).map_err(|e| e.to_string())?;
            let mut bad = check_prop_earley(g, &w, &e.chart).map_err(|e| e.to_string())?;
            bad.extend(
                check_prop_variant(g, &w, &e.chart, &v.forward, &v.backward)
                    .map_err(|e| e.to_string())?,
            );
            ensure(bad.is_empty(), || {
                format!(
                    "grammar {seed} on `{}`: {}",
                    g.display_symbols(&w),
                    bad[0].describe(g)
                )
            })?;
            let member = derives(g, &[g.start()], &w).map_err(|e| e.to_string())?;
            ensure(member == e.stats.accepted, || {
                format!(
                    "grammar {seed} on `{}`: acceptance differs from derivability",
                    g.display_symbols(&w)
                )
            })?;
            runs += 1;
        }
    }
    Ok(format!(
        "{} grammars, {runs} runs, 0 violations",
        grammars.len()
    ))
}

fn runtime_invariants(grammars: &[Grammar]) -> Outcome {
    let (mut runs, mut generated, mut barren) = (0usize, 0usize, 0usize);
    for (seed, g) in grammars.iter().enumerate() {
        let mut sentences = all_inputs(g, MAX_INPUT);
        match generate_sentences(g, &generation(seed as u64)) {
            Ok(more) => {
                generated += more.len();
                sentences.extend(more);
            }
            Err(_) => barren += 1,
        }
        let (_, records) = compare(g, &format!("g{seed}"), &sentences)
            .map_err(|e| format!("grammar {seed}: {e}"))?;
        runs += records.len();
    }
    Ok(format!(
        "{runs} runs ({generated} generated; {barren} grammars without generable sentences), 0 violations"
    ))
}

fn cover_correctness(grammars: &[Grammar]) -> Outcome {
    for (seed, g) in grammars.iter().enumerate() {
        let cover = tau2_transform(g);
        ensure(is_two_normal_form(&cover), || {
            format!("grammar {seed}: cover has a long rhs")
        })?;
        let original = enumerate_language(g, 6).map_err(|e| e.to_string())?;
        let covered = enumerate_language(&cover, 6).map_err(|e| e.to_string())?;
        ensure(original == covered, || {
            format!("grammar {seed}: languages differ up to length 6")
        })?;
    }
    Ok(format!(
        "{} grammars binary and equivalent up to length 6",
        grammars.len()
    ))
}

fn shares_suffixes(g: &Grammar) -> usize {
    let long = g
        .productions()
        .iter()
        .filter(|p| p.rhs.len() >= 2)
        .collect::<Vec<_>>();
    // Largest group of productions that pairwise share a suffix of length 2.
    let mut best = 0;
    for p in &long {
        let tail = &p.rhs[p.rhs.len() - 2..];
        best = best.max(long.iter().filter(|q| q.rhs.ends_with(tail)).count());
    }
    best
}

fn suffix_sharing_family() -> Outcome {
    let g = parse_grammar(SUFFIX_FAMILY).unwrap();
    let family = shares_suffixes(&g);
    ensure(family >= 10, || {
        format!("only {family} productions share a suffix")
    })?;
    let sentences = generate_sentences(
        &g,
        &GenConfig {
            seed: 1,
            max_len: 30,
            ..generation(1)
        },
    )
    .map_err(|e| e.to_string())?;
    let (row, _) = compare(&g, "suffix_family", &sentences).map_err(|e| e.to_string())?;
    let shown = |m: &Ratio<u128>| render_mean(m);
    ensure(row.variant_steps < row.earley_steps, || {
        format!(
            "variant steps {} >= earley steps {}",
            shown(&row.variant_steps),
            shown(&row.earley_steps)
        )
    })?;
    ensure(row.ut_items < row.earley_items, || {
        format!(
            "U+T items {} >= earley items {}",
            shown(&row.ut_items),
            shown(&row.earley_items)
        )
    })?;
    ensure(row.tau2_items >= row.earley_items, || {
        format!(
            "tau2 items {} < earley items {}",
            shown(&row.tau2_items),
            shown(&row.earley_items)
        )
    })?;
    Ok(format!(
        "{family} productions share a suffix; means over {}: steps {} vs {}, items {} vs {}, tau2 items {}",
        row.sentences,
        shown(&row.variant_steps),
        shown(&row.earley_steps),
        shown(&row.ut_items),
        shown(&row.earley_items),
        shown(&row.tau2_items),
    ))
}

fn order_independence(grammars: &[Grammar]) -> Outcome {
    let mut pairs = 0;
    for (seed, g) in grammars.iter().enumerate() {
        if pairs == 20 {
            break;
        }
        let Ok(mut ws) = generate_sentences(
            g,
            &GenConfig {
                count: 1,
                ..generation(seed as u64)
            },
        ) else {
            continue;
        };
        let w = ws.pop().unwrap();
        let run = |order| -> Result<_, String> {
            let e = recognize_earley_with(g, &w, profiled(order)).map_err(|e| e.to_string())?;
            let v = recognize_variant_with(g, &w, profiled(order)).map_err(|e| e.to_string())?;
            Ok((
                e.chart, e.stats, e.profile, v.forward, v.backward, v.stats, v.profile,
            ))
        };
        let (fifo, lifo) = (run(AgendaOrder::Fifo)?, run(AgendaOrder::Lifo)?);
        ensure(fifo == lifo, || {
            format!("grammar {seed}: FIFO and LIFO results differ")
        })?;
        pairs += 1;
    }
    ensure(pairs == 20, || {
        format!("only {pairs} grammar/sentence pairs available")
    })?;
    Ok("20 pairs identical under FIFO and LIFO".into())
}

fn catalan(n: u32) -> BigUint {
    // C(n) = (2n)! / (n! (n+1)!)
    let mut c = BigUint::from(1u32);
    for k in 0..n {
        c = c * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    c
}

fn parse_counting(grammars: &[Grammar]) -> Outcome {
    let (mut checked, mut large) = (0usize, 0usize);
    for (seed, g) in grammars.iter().enumerate() {
        for w in all_inputs(g, MAX_INPUT) {
            let counted = count_acyclic_parses(g, &w).map_err(|e| e.to_string())?;
            match enumerate_acyclic_trees(g, &w, TREE_BUDGET) {
                Some(trees) if trees.len() <= TREE_LIMIT => {
                    ensure(counted == BigUint::from(trees.len()), || {
                        format!(
                            "grammar {seed} on `{}`: counted {counted}, enumerated {}",
                            g.display_symbols(&w),
                            trees.len()
                        )
                    })?;
                    checked += 1;
                }
                Some(_) => large += 1,
                None => {
                    ensure(counted > BigUint::from(TREE_LIMIT), || {
                        format!(
                            "grammar {seed} on `{}`: enumeration budget exhausted with only {counted} trees",
                            g.display_symbols(&w)
                        )
                    })?;
                    large += 1;
                }
            }
        }
    }
    let g = parse_grammar(AMBIGUOUS).unwrap();
    let a = sym(&g, "a");
    let thirty = count_acyclic_parses(&g, &[a; 30]).map_err(|e| e.to_string())?;
    ensure(thirty == catalan(29), || format!("a^30 gave {thirty}"))?;
    let forty = count_acyclic_parses(&g, &[a; 40]).map_err(|e| e.to_string())?;
    ensure(forty == catalan(39), || format!("a^40 gave {forty}"))?;
    ensure(forty >= BigUint::from(10u32).pow(20), || {
        format!("a^40 gave only {forty}")
    })?;
    Ok(format!(
        "{checked} instances match enumeration ({large} with more than {TREE_LIMIT} trees); a^30 -> {thirty}, a^40 -> {forty}"
    ))
}

fn main() -> ExitCode {
    let grammars = corpus(CORPUS_SIZE);
    let checks: Vec<Check<'_>> = vec![
        (
            1,
            "example grammar item counts",
            Duration::from_secs(1),
            Box::new(example_items),
        ),
        (
            2,
            "shared segment step counts",
            Duration::from_secs(1),
            Box::new(shared_segment),
        ),
        (
            3,
            "table characterizations",
            Duration::from_secs(600),
            Box::new(|| characterization_audit(&grammars)),
        ),
        (
            4,
            "runtime invariants",
            Duration::from_secs(600),
            Box::new(|| runtime_invariants(&grammars)),
        ),
        (
            5,
            "two-normal-form cover",
            Duration::from_secs(600),
            Box::new(|| cover_correctness(&grammars)),
        ),
        (
            6,
            "suffix-sharing family",
            Duration::from_secs(60),
            Box::new(suffix_sharing_family),
        ),
        (
            7,
            "agenda order independence",
            Duration::from_secs(600),
            Box::new(|| order_independence(&grammars)),
        ),
        (
            8,
            "acyclic parse counting",
            Duration::from_secs(600),
            Box::new(|| parse_counting(&grammars)),
        ),
    ];
    let mut failed = 0;
    for (n, title, limit, check) in checks {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({title}): {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n} ({title}): {detail} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

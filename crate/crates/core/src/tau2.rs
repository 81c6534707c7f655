//! The τ2 cover transformation into two normal form.
//!
//! Every proper suffix `β` of a right-hand side with `|β| ≥ 2` becomes a
//! fresh nonterminal named `[X.Y.Z]` after its member symbols. Suffix items
//! that only ever occur as a complete right-hand side are never referenced
//! by the transformed grammar and get no nonterminal. Primes are appended
//! until a name is unused, so fresh names never clash with each other or
//! with the original symbols.

use std::collections::{BTreeSet, HashMap};

use crate::grammar::{suffix_items, DottedItem, Grammar, SuffixId};

/// Applies τ2:
///
/// * `A → X [α]` for `A → Xα` with `|α| > 1`
/// * `A → α` for `A → α` with `|α| ≤ 2`
/// * `[Xα] → X [α]` for suffix nonterminals `[Xα]` with `|α| > 1`
/// * `[XY] → X Y` for suffix nonterminals `[XY]`
///
/// Symbols of `g` keep their ids in the result, so sentences tokenized
/// against `g` can be fed to the transformed grammar directly.
pub fn tau2_transform(g: &Grammar) -> Grammar {
    let mut builder = g.builder_with_symbols();
    let mut fresh: HashMap<SuffixId, String> = HashMap::new();

    let referenced = g
        .productions()
        .iter()
        .flat_map(|p| {
            (1..p.rhs.len().saturating_sub(1))
                .map(move |d| g.suffix_after_dot(DottedItem::new(p.id, d)))
        })
        .collect::<BTreeSet<_>>();

    for item in suffix_items(g) {
        if !referenced.contains(&item.id) {
            continue;
        }
        let mut name = format!(
            "[{}]",
            item.symbols
                .iter()
                .map(|&s| g.name(s))
                .collect::<Vec<_>>()
                .join(".")
        );
        while builder.contains(&name) {
            name.push('\'');
        }
        builder.symbol(&name).expect("bracketed names are valid");
        fresh.insert(item.id, name);
    }

    let tail_name = |s: SuffixId| fresh[&s].as_str();

    for p in g.productions() {
        let lhs = g.name(p.lhs);
        if p.rhs.len() > 2 {
            let tail = g.suffix_tail(g.rhs_suffix(p.id)).expect("nonempty rhs");
            let rhs = [g.name(p.rhs[0]), tail_name(tail)];
            builder.production(lhs, &rhs).expect("valid names");
        } else {
            let rhs = p.rhs.iter().map(|&s| g.name(s)).collect::<Vec<_>>();
            builder.production(lhs, &rhs).expect("valid names");
        }
    }
    for item in suffix_items(g) {
        let lhs = match fresh.get(&item.id) {
            Some(name) => name.as_str(),
            None => continue,
        };
        let head = g.name(item.symbols[0]);
        if item.symbols.len() > 2 {
            let tail = g.suffix_tail(item.id).expect("nonempty suffix");
            builder
                .production(lhs, &[head, tail_name(tail)])
                .expect("valid names");
        } else {
            builder
                .production(lhs, &[head, g.name(item.symbols[1])])
                .expect("valid names");
        }
    }

    builder.start(g.name(g.start()));
    builder
        .build()
        .expect("τ2 preserves start and nonemptiness")
}

/// True if every right-hand side has length at most 2.
pub fn is_two_normal_form(g: &Grammar) -> bool {
    g.productions().iter().all(|p| p.rhs.len() <= 2)
}

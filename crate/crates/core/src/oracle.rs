//! Brute-force ground truth, kept independent of both recognizers.
//!
//! Nothing here uses items, agendas or step rules. Derivability is a plain
//! span fixpoint over nonterminals, left contexts follow the spine of a
//! derivation tree, and languages are enumerated string by string. Every
//! procedure is capped and terminates on cyclic and nullable grammars.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::earley::EarleyChart;
use crate::grammar::{dotted_items, DottedItem, Grammar, SuffixId, SymbolId};
use crate::variant::{BackwardTable, ForwardArray};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("input length {len} exceeds oracle cap {cap}")]
    InputTooLong { len: usize, cap: usize },
    #[error("grammar size {size} exceeds oracle cap {cap}")]
    GrammarTooLarge { size: usize, cap: usize },
    #[error("enumeration length {len} exceeds oracle cap {cap}")]
    EnumerationTooLong { len: usize, cap: usize },
    #[error("`{0}` is not a terminal of the grammar")]
    NotATerminal(String),
}

/// Size limits for the brute-force procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_input: usize,
    pub max_grammar_size: usize,
    pub max_enumeration_len: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_input: 12,
            max_grammar_size: 4096,
            max_enumeration_len: 8,
        }
    }
}

impl OracleCaps {
    fn check(&self, g: &Grammar, input_len: usize) -> Result<(), OracleError> {
        if g.size() > self.max_grammar_size {
            return Err(OracleError::GrammarTooLarge {
                size: g.size(),
                cap: self.max_grammar_size,
            });
        }
        if input_len > self.max_input {
            return Err(OracleError::InputTooLong {
                len: input_len,
                cap: self.max_input,
            });
        }
        Ok(())
    }
}

fn check_terminals(g: &Grammar, w: &[SymbolId]) -> Result<(), OracleError> {
    for &s in w {
        if s.index() >= g.symbols().len() || !g.is_terminal(s) {
            return Err(OracleError::NotATerminal(format!("#{}", s.index())));
        }
    }
    Ok(())
}

/// Which nonterminals derive which substrings of a fixed input.
#[derive(Debug, Clone)]
pub struct Derivability<'a> {
    g: &'a Grammar,
    w: &'a [SymbolId],
    /// `spans[A][i][j]`
    spans: Vec<Vec<Vec<bool>>>,
}

impl<'a> Derivability<'a> {
    /// Least fixpoint of `A ⇒* w[i..j]` over all nonterminals and spans.
    pub fn compute(g: &'a Grammar, w: &'a [SymbolId]) -> Self {
        let n = w.len();
        let mut d = Derivability {
            g,
            w,
            spans: vec![vec![vec![false; n + 1]; n + 1]; g.symbols().len()],
        };
        let mut changed = true;
        while changed {
            changed = false;
            for p in g.productions() {
                for i in 0..=n {
                    for j in i..=n {
                        if !d.spans[p.lhs.index()][i][j] && d.sequence(&p.rhs, i, j) {
                            d.spans[p.lhs.index()][i][j] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        d
    }

    pub fn input(&self) -> &[SymbolId] {
        self.w
    }

    /// `X ⇒* w[i..j]`
    pub fn symbol(&self, x: SymbolId, i: usize, j: usize) -> bool {
        if self.g.is_terminal(x) {
            j == i + 1 && self.w[i] == x
        } else {
            self.spans[x.index()][i][j]
        }
    }

    /// `α ⇒* w[i..j]`
    pub fn sequence(&self, alpha: &[SymbolId], i: usize, j: usize) -> bool {
        if i > j || j > self.w.len() {
            return false;
        }
        let mut reach = vec![false; self.w.len() + 1];
        reach[i] = true;
        for &x in alpha {
            let mut next = vec![false; self.w.len() + 1];
            for p in i..=j {
                if reach[p] {
                    for q in p..=j {
                        if self.symbol(x, p, q) {
                            next[q] = true;
                        }
                    }
                }
            }
            reach = next;
        }
        reach[j]
    }
}

/// `origin ⇒* target`.
pub fn derives(g: &Grammar, origin: &[SymbolId], target: &[SymbolId]) -> Result<bool, OracleError> {
    derives_capped(g, origin, target, OracleCaps::default())
}

pub fn derives_capped(
    g: &Grammar,
    origin: &[SymbolId],
    target: &[SymbolId],
    caps: OracleCaps,
) -> Result<bool, OracleError> {
    caps.check(g, target.len())?;
    check_terminals(g, target)?;
    Ok(Derivability::compute(g, target).sequence(origin, 0, target.len()))
}

/// Left contexts: `S ⇒* a_1 … a_i A γ` for some `γ`.
#[derive(Debug, Clone)]
pub struct LeftContext {
    /// `open[A][i]`
    open: Vec<Vec<bool>>,
}

impl LeftContext {
    /// Follows derivation-tree spines: `S` is open at 0, and if `B` is open
    /// at `k`, `B → α A δ` and `α ⇒* a_{k+1} … a_i`, then `A` is open at `i`.
    pub fn compute(g: &Grammar, d: &Derivability<'_>) -> Self {
        let n = d.input().len();
        let mut open = vec![vec![false; n + 1]; g.symbols().len()];
        open[g.start().index()][0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for p in g.productions() {
                for k in 0..=n {
                    if !open[p.lhs.index()][k] {
                        continue;
                    }
                    for (t, &a) in p.rhs.iter().enumerate() {
                        if !g.is_nonterminal(a) {
                            continue;
                        }
                        for i in k..=n {
                            if !open[a.index()][i] && d.sequence(&p.rhs[..t], k, i) {
                                open[a.index()][i] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        LeftContext { open }
    }

    pub fn holds(&self, a: SymbolId, i: usize) -> bool {
        self.open[a.index()][i]
    }
}

/// `{ w | S ⇒* w, |w| ≤ max_len }`.
pub fn enumerate_language(
    g: &Grammar,
    max_len: usize,
) -> Result<BTreeSet<Vec<SymbolId>>, OracleError> {
    enumerate_language_capped(g, max_len, OracleCaps::default())
}

pub fn enumerate_language_capped(
    g: &Grammar,
    max_len: usize,
    caps: OracleCaps,
) -> Result<BTreeSet<Vec<SymbolId>>, OracleError> {
    if max_len > caps.max_enumeration_len {
        return Err(OracleError::EnumerationTooLong {
            len: max_len,
            cap: caps.max_enumeration_len,
        });
    }
    caps.check(g, 0)?;
    let mut lang: Vec<BTreeSet<Vec<SymbolId>>> = vec![BTreeSet::new(); g.symbols().len()];
    for t in g.terminals() {
        if max_len >= 1 {
            lang[t.index()].insert(vec![t]);
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            let mut partial: BTreeSet<Vec<SymbolId>> = BTreeSet::from([Vec::new()]);
            for &x in &p.rhs {
                let mut next = BTreeSet::new();
                for prefix in &partial {
                    for word in &lang[x.index()] {
                        if prefix.len() + word.len() <= max_len {
                            let mut joined = prefix.clone();
                            joined.extend_from_slice(word);
                            next.insert(joined);
                        }
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for word in partial {
                if lang[p.lhs.index()].insert(word) {
                    changed = true;
                }
            }
        }
    }
    Ok(std::mem::take(&mut lang[g.start().index()]))
}

/// Number of derivation trees for `S ⇒* w` with no node `A` over `(i, j)`
/// that has a proper descendant `A` over the same `(i, j)`.
pub fn count_acyclic_parses(g: &Grammar, w: &[SymbolId]) -> Result<BigUint, OracleError> {
    count_acyclic_parses_capped(
        g,
        w,
        OracleCaps {
            max_input: 64,
            ..OracleCaps::default()
        },
    )
}

pub fn count_acyclic_parses_capped(
    g: &Grammar,
    w: &[SymbolId],
    caps: OracleCaps,
) -> Result<BigUint, OracleError> {
    caps.check(g, w.len())?;
    check_terminals(g, w)?;
    let d = Derivability::compute(g, w);
    let mut counter = ParseCounter {
        g,
        d: &d,
        memo: HashMap::new(),
    };
    Ok(counter.nonterminal(g.start(), 0, w.len(), &BTreeSet::new()))
}

struct ParseCounter<'a, 'b> {
    g: &'a Grammar,
    d: &'b Derivability<'a>,
    memo: HashMap<(SymbolId, usize, usize, Vec<SymbolId>), BigUint>,
}

impl ParseCounter<'_, '_> {
    /// Trees for `A` over `(i, j)` whose same-span ancestors are `chain`.
    fn nonterminal(
        &mut self,
        a: SymbolId,
        i: usize,
        j: usize,
        chain: &BTreeSet<SymbolId>,
    ) -> BigUint {
        if chain.contains(&a) || !self.d.symbol(a, i, j) {
            return BigUint::zero();
        }
        let key = (a, i, j, chain.iter().copied().collect::<Vec<_>>());
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let mut inner = chain.clone();
        inner.insert(a);
        let mut total = BigUint::zero();
        for p in self.g.productions_of(a) {
            total += self.sequence(&p.rhs, i, j, (i, j), &inner);
        }
        self.memo.insert(key, total.clone());
        total
    }

    fn sequence(
        &mut self,
        rhs: &[SymbolId],
        from: usize,
        to: usize,
        span: (usize, usize),
        chain: &BTreeSet<SymbolId>,
    ) -> BigUint {
        let Some((&x, rest)) = rhs.split_first() else {
            return if from == to {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        };
        let mut total = BigUint::zero();
        for mid in from..=to {
            if !self.d.symbol(x, from, mid) || !self.d.sequence(rest, mid, to) {
                continue;
            }
            let head = if self.g.is_terminal(x) {
                BigUint::one()
            } else if (from, mid) == span {
                self.nonterminal(x, from, mid, chain)
            } else {
                self.nonterminal(x, from, mid, &BTreeSet::new())
            };
            if head.is_zero() {
                continue;
            }
            total += head * self.sequence(rest, mid, to, span, chain);
        }
        total
    }
}

/// True if some nonterminal admits `A ⇒+ A`.
pub fn has_cycles(g: &Grammar) -> bool {
    let nullable = g.nullable();
    let n = g.symbols().len();
    // unit[A][B]: A ⇒+ B using one production whose other symbols vanish
    let mut reach = vec![vec![false; n]; n];
    for p in g.productions() {
        for (t, &b) in p.rhs.iter().enumerate() {
            let others_vanish = p
                .rhs
                .iter()
                .enumerate()
                .all(|(u, s)| u == t || nullable[s.index()]);
            if g.is_nonterminal(b) && others_vanish {
                reach[p.lhs.index()][b.index()] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n).any(|a| reach[a][a])
}

/// A mismatch between a recognizer table and its characterization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A dotted item satisfies the characterization but is not in `E_{i,j}`.
    MissingItem {
        item: DottedItem,
        i: usize,
        j: usize,
    },
    /// A dotted item is in `E_{i,j}` but violates the characterization.
    UnexpectedItem {
        item: DottedItem,
        i: usize,
        j: usize,
    },
    MissingForward {
        j: usize,
        suffix: SuffixId,
    },
    UnexpectedForward {
        j: usize,
        suffix: SuffixId,
    },
    MissingBackward {
        i: usize,
        j: usize,
        suffix: SuffixId,
    },
    UnexpectedBackward {
        i: usize,
        j: usize,
        suffix: SuffixId,
    },
}

impl Violation {
    pub fn describe(&self, g: &Grammar) -> String {
        match *self {
            Violation::MissingItem { item, i, j } => {
                format!("missing {i} {j} {}", g.display_item(item))
            }
            Violation::UnexpectedItem { item, i, j } => {
                format!("unexpected {i} {j} {}", g.display_item(item))
            }
            Violation::MissingForward { j, suffix } => {
                format!("missing U {j} {}", g.display_suffix(suffix))
            }
            Violation::UnexpectedForward { j, suffix } => {
                format!("unexpected U {j} {}", g.display_suffix(suffix))
            }
            Violation::MissingBackward { i, j, suffix } => {
                format!("missing T {i} {j} {}", g.display_suffix(suffix))
            }
            Violation::UnexpectedBackward { i, j, suffix } => {
                format!("unexpected T {i} {j} {}", g.display_suffix(suffix))
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Expected Earley table: `[A → α•β] ∈ E_{i,j}` iff `S ⇒* a_1…a_i A γ`
/// and `α ⇒* a_{i+1}…a_j`.
pub fn expected_earley_chart(g: &Grammar, w: &[SymbolId]) -> Result<EarleyChart, OracleError> {
    OracleCaps::default().check(g, w.len())?;
    check_terminals(g, w)?;
    let d = Derivability::compute(g, w);
    let ctx = LeftContext::compute(g, &d);
    let n = w.len();
    let mut chart = EarleyChart::new(n);
    for item in dotted_items(g) {
        let p = g.production(item.production);
        for i in 0..=n {
            if !ctx.holds(p.lhs, i) {
                continue;
            }
            for j in i..=n {
                if d.sequence(&p.rhs[..item.dot()], i, j) {
                    chart.insert(item, i, j);
                }
            }
        }
    }
    Ok(chart)
}

/// Compares an Earley table against [`expected_earley_chart`].
pub fn check_prop_earley(
    g: &Grammar,
    w: &[SymbolId],
    chart: &EarleyChart,
) -> Result<Vec<Violation>, OracleError> {
    let expected = expected_earley_chart(g, w)?;
    let mut out = Vec::new();
    for (i, j, item) in expected.iter() {
        if !chart.contains(item, i, j) {
            out.push(Violation::MissingItem { item, i, j });
        }
    }
    for (i, j, item) in chart.iter() {
        if !expected.contains(item, i, j) {
            out.push(Violation::UnexpectedItem { item, i, j });
        }
    }
    Ok(out)
}

/// Expected `U` and `T` derived directly from left contexts and
/// derivability: `[β] ∈ U_j` iff some `A → αβ` has `A` open at `i` and
/// `α ⇒* a_{i+1}…a_j`; `[β] ∈ T_{j,k}` iff additionally `β ⇒* a_{j+1}…a_k`.
pub fn expected_variant_tables(
    g: &Grammar,
    w: &[SymbolId],
) -> Result<(ForwardArray, BackwardTable), OracleError> {
    OracleCaps::default().check(g, w.len())?;
    check_terminals(g, w)?;
    let d = Derivability::compute(g, w);
    let ctx = LeftContext::compute(g, &d);
    let n = w.len();
    let mut u = ForwardArray::new(n);
    for item in dotted_items(g) {
        let p = g.production(item.production);
        for i in (0..=n).filter(|&i| ctx.holds(p.lhs, i)) {
            for j in i..=n {
                if d.sequence(&p.rhs[..item.dot()], i, j) {
                    u.insert(j, g.suffix_after_dot(item));
                }
            }
        }
    }
    let t = backward_from_forward(g, &d, &u);
    Ok((u, t))
}

fn backward_from_forward(g: &Grammar, d: &Derivability<'_>, u: &ForwardArray) -> BackwardTable {
    let n = u.input_len();
    let mut t = BackwardTable::new(n);
    for (j, s) in u.iter() {
        for k in j..=n {
            if d.sequence(g.suffix(s), j, k) {
                t.insert(j, k, s);
            }
        }
    }
    t
}

/// Checks `U` and `T` against an Earley table: `[β] ∈ U_j` iff some
/// `[A → α•β] ∈ E_{i,j}`, and `[β] ∈ T_{j,k}` iff that holds and
/// `β ⇒* a_{j+1}…a_k`.
pub fn check_prop_variant(
    g: &Grammar,
    w: &[SymbolId],
    chart: &EarleyChart,
    u: &ForwardArray,
    t: &BackwardTable,
) -> Result<Vec<Violation>, OracleError> {
    OracleCaps::default().check(g, w.len())?;
    check_terminals(g, w)?;
    let n = w.len();
    let mut expected_u = ForwardArray::new(n);
    for (_, j, item) in chart.iter() {
        expected_u.insert(j, g.suffix_after_dot(item));
    }
    let d = Derivability::compute(g, w);
    let expected_t = backward_from_forward(g, &d, &expected_u);

    let mut out = Vec::new();
    for (j, suffix) in expected_u.iter() {
        if !u.contains(j, suffix) {
            out.push(Violation::MissingForward { j, suffix });
        }
    }
    for (j, suffix) in u.iter() {
        if !expected_u.contains(j, suffix) {
            out.push(Violation::UnexpectedForward { j, suffix });
        }
    }
    for (i, j, suffix) in expected_t.iter() {
        if !t.contains(i, j, suffix) {
            out.push(Violation::MissingBackward { i, j, suffix });
        }
    }
    for (i, j, suffix) in t.iter() {
        if !expected_t.contains(i, j, suffix) {
            out.push(Violation::UnexpectedBackward { i, j, suffix });
        }
    }
    Ok(out)
}

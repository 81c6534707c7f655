//! Grammar data model: interned symbols, productions, and the shared
//! suffix-item table used by the variant recognizer.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn from_index(index: usize) -> Self {
        SymbolId(u32::try_from(index).expect("symbol table exceeds u32"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Terminal,
    Nonterminal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub id: SymbolId,
    pub kind: SymbolKind,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProdId(u32);

impl ProdId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub id: ProdId,
    pub lhs: SymbolId,
    pub rhs: Vec<SymbolId>,
}

/// Identifier of an interned suffix item `[β]`.
///
/// Two suffixes with the same symbol content share one id no matter which
/// productions they were cut from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuffixId(u32);

impl SuffixId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuffixItem<'g> {
    pub id: SuffixId,
    pub symbols: &'g [SymbolId],
}

/// A production with a dot position, `[A → α•β]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DottedItem {
    pub production: ProdId,
    pub dot: u32,
}

impl DottedItem {
    pub fn new(production: ProdId, dot: usize) -> Self {
        DottedItem {
            production,
            dot: dot as u32,
        }
    }

    pub fn dot(self) -> usize {
        self.dot as usize
    }

    pub fn advance(self) -> Self {
        DottedItem {
            production: self.production,
            dot: self.dot + 1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("start symbol `{0}` never appears on a left-hand side")]
    UnknownStart(String),
    #[error("grammar has no productions")]
    NoProductions,
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
}

/// Returns true if `name` can be written as a single token of the grammar
/// text format.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "->"
        && name != "|"
        && !name.starts_with('%')
        && !name.contains('#')
        && !name.chars().any(char::is_whitespace)
}

/// Incrementally assembles a [`Grammar`].
///
/// Symbols receive dense ids in order of first mention. Whether a symbol is
/// a nonterminal is decided at [`build`](GrammarBuilder::build) time: exactly
/// the names that occur on some left-hand side.
#[derive(Debug, Default, Clone)]
pub struct GrammarBuilder {
    names: Vec<String>,
    by_name: HashMap<String, SymbolId>,
    productions: Vec<(SymbolId, Vec<SymbolId>)>,
    seen: HashSet<(SymbolId, Vec<SymbolId>)>,
    start: Option<String>,
}

impl GrammarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns `name`, returning its id.
    pub fn symbol(&mut self, name: &str) -> Result<SymbolId, GrammarError> {
        if let Some(&id) = self.by_name.get(name) {
            return Ok(id);
        }
        if !is_valid_name(name) {
            return Err(GrammarError::InvalidName(name.to_string()));
        }
        let id = SymbolId::from_index(self.names.len());
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    /// Adds `lhs -> rhs`. Returns false if the production was already present.
    pub fn production<S: AsRef<str>>(
        &mut self,
        lhs: &str,
        rhs: &[S],
    ) -> Result<bool, GrammarError> {
        let lhs = self.symbol(lhs)?;
        let rhs = rhs
            .iter()
            .map(|s| self.symbol(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        if !self.seen.insert((lhs, rhs.clone())) {
            return Ok(false);
        }
        self.productions.push((lhs, rhs));
        Ok(true)
    }

    pub fn start(&mut self, name: &str) -> &mut Self {
        self.start = Some(name.to_string());
        self
    }

    pub fn build(self) -> Result<Grammar, GrammarError> {
        if self.productions.is_empty() {
            return Err(GrammarError::NoProductions);
        }
        let mut is_lhs = vec![false; self.names.len()];
        for (lhs, _) in &self.productions {
            is_lhs[lhs.index()] = true;
        }
        let start = match &self.start {
            Some(name) => match self.by_name.get(name) {
                Some(&id) if is_lhs[id.index()] => id,
                _ => return Err(GrammarError::UnknownStart(name.clone())),
            },
            None => self.productions[0].0,
        };
        let symbols = self
            .names
            .into_iter()
            .enumerate()
            .map(|(i, name)| Symbol {
                id: SymbolId::from_index(i),
                kind: if is_lhs[i] {
                    SymbolKind::Nonterminal
                } else {
                    SymbolKind::Terminal
                },
                name,
            })
            .collect::<Vec<_>>();
        let productions = self
            .productions
            .into_iter()
            .enumerate()
            .map(|(i, (lhs, rhs))| Production {
                id: ProdId(u32::try_from(i).expect("too many productions")),
                lhs,
                rhs,
            })
            .collect::<Vec<_>>();
        Ok(Grammar::assemble(symbols, self.by_name, productions, start))
    }
}

/// Interned suffixes of all right-hand sides, with the links the variant
/// recognizer needs to move between them in constant time.
#[derive(Debug, Clone)]
struct SuffixTable {
    items: Vec<Vec<SymbolId>>,
    index: HashMap<Vec<SymbolId>, SuffixId>,
    /// `[Xβ] ↦ [β]`; `None` for `[ε]`.
    tail: Vec<Option<SuffixId>>,
    /// `(X, [β]) ↦ [Xβ]` whenever `[Xβ]` is a suffix item.
    cons: HashMap<(SymbolId, SuffixId), SuffixId>,
    /// Productions whose complete right-hand side is this suffix.
    completes: Vec<Vec<ProdId>>,
    /// `dotted[p][d]` is the suffix after the dot in `[p, d]`.
    dotted: Vec<Vec<SuffixId>>,
    empty: SuffixId,
}

impl SuffixTable {
    fn build(productions: &[Production]) -> Self {
        let mut table = SuffixTable {
            items: Vec::new(),
            index: HashMap::new(),
            tail: Vec::new(),
            cons: HashMap::new(),
            completes: Vec::new(),
            dotted: Vec::with_capacity(productions.len()),
            empty: SuffixId(0),
        };
        for p in productions {
            let ids = (0..=p.rhs.len())
                .map(|d| table.intern(&p.rhs[d..]))
                .collect::<Vec<_>>();
            for d in 0..p.rhs.len() {
                table.tail[ids[d].index()] = Some(ids[d + 1]);
                table.cons.insert((p.rhs[d], ids[d + 1]), ids[d]);
            }
            table.completes[ids[0].index()].push(p.id);
            table.dotted.push(ids);
        }
        table.empty = table.index[&Vec::new()];
        table
    }

    fn intern(&mut self, symbols: &[SymbolId]) -> SuffixId {
        if let Some(&id) = self.index.get(symbols) {
            return id;
        }
        let id = SuffixId(u32::try_from(self.items.len()).expect("too many suffixes"));
        self.items.push(symbols.to_vec());
        self.index.insert(symbols.to_vec(), id);
        self.tail.push(None);
        self.completes.push(Vec::new());
        id
    }
}

/// A context-free grammar `(V_T, V_N, P, S)`.
///
/// Immutable after construction. Productions form a set: duplicates are
/// collapsed by the builder.
#[derive(Debug, Clone)]
pub struct Grammar {
    symbols: Vec<Symbol>,
    by_name: HashMap<String, SymbolId>,
    productions: Vec<Production>,
    start: SymbolId,
    size: usize,
    by_lhs: Vec<Vec<ProdId>>,
    suffixes: SuffixTable,
}

impl Grammar {
    fn assemble(
        symbols: Vec<Symbol>,
        by_name: HashMap<String, SymbolId>,
        productions: Vec<Production>,
        start: SymbolId,
    ) -> Self {
        let mut by_lhs = vec![Vec::new(); symbols.len()];
        for p in &productions {
            by_lhs[p.lhs.index()].push(p.id);
        }
        let size = productions.iter().map(|p| 1 + p.rhs.len()).sum();
        let suffixes = SuffixTable::build(&productions);
        Grammar {
            symbols,
            by_name,
            productions,
            start,
            size,
            by_lhs,
            suffixes,
        }
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    /// `|G|`, the sum over productions of `1 + |rhs|`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.index()]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.index()].name
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn is_nonterminal(&self, id: SymbolId) -> bool {
        self.symbols[id.index()].kind == SymbolKind::Nonterminal
    }

    pub fn is_terminal(&self, id: SymbolId) -> bool {
        self.symbols[id.index()].kind == SymbolKind::Terminal
    }

    pub fn terminals(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols
            .iter()
            .filter(|s| s.kind == SymbolKind::Terminal)
            .map(|s| s.id)
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols
            .iter()
            .filter(|s| s.kind == SymbolKind::Nonterminal)
            .map(|s| s.id)
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production(&self, id: ProdId) -> &Production {
        &self.productions[id.index()]
    }

    /// Productions with left-hand side `lhs` (empty for terminals).
    pub fn productions_of(&self, lhs: SymbolId) -> impl Iterator<Item = &Production> + '_ {
        self.by_lhs[lhs.index()]
            .iter()
            .map(move |&p| &self.productions[p.index()])
    }

    pub(crate) fn production_ids_of(&self, lhs: SymbolId) -> &[ProdId] {
        &self.by_lhs[lhs.index()]
    }

    /// Number of distinct right-hand sides of start productions.
    pub fn start_production_count(&self) -> usize {
        self.by_lhs[self.start.index()].len()
    }

    pub fn suffix(&self, id: SuffixId) -> &[SymbolId] {
        &self.suffixes.items[id.index()]
    }

    pub fn suffix_count(&self) -> usize {
        self.suffixes.items.len()
    }

    pub fn suffix_id(&self, symbols: &[SymbolId]) -> Option<SuffixId> {
        self.suffixes.index.get(symbols).copied()
    }

    pub fn empty_suffix(&self) -> SuffixId {
        self.suffixes.empty
    }

    /// `[Xβ] ↦ [β]`.
    pub fn suffix_tail(&self, id: SuffixId) -> Option<SuffixId> {
        self.suffixes.tail[id.index()]
    }

    pub fn suffix_head(&self, id: SuffixId) -> Option<SymbolId> {
        self.suffixes.items[id.index()].first().copied()
    }

    /// `(X, [β]) ↦ [Xβ]`, if that string is a suffix item of the grammar.
    pub fn suffix_cons(&self, head: SymbolId, tail: SuffixId) -> Option<SuffixId> {
        self.suffixes.cons.get(&(head, tail)).copied()
    }

    /// Productions `B → γ` with `[γ]` equal to `id`.
    pub fn completed_by(&self, id: SuffixId) -> &[ProdId] {
        &self.suffixes.completes[id.index()]
    }

    /// The suffix item of the full right-hand side of `p`.
    pub fn rhs_suffix(&self, p: ProdId) -> SuffixId {
        self.suffixes.dotted[p.index()][0]
    }

    /// The suffix after the dot of `item`.
    pub fn suffix_after_dot(&self, item: DottedItem) -> SuffixId {
        self.suffixes.dotted[item.production.index()][item.dot()]
    }

    /// Symbol immediately after the dot, if any.
    pub fn next_symbol(&self, item: DottedItem) -> Option<SymbolId> {
        self.productions[item.production.index()]
            .rhs
            .get(item.dot())
            .copied()
    }

    pub fn is_complete(&self, item: DottedItem) -> bool {
        item.dot() == self.productions[item.production.index()].rhs.len()
    }

    pub fn display_symbols(&self, symbols: &[SymbolId]) -> String {
        symbols
            .iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Renders `A -> alpha . beta`.
    pub fn display_item(&self, item: DottedItem) -> String {
        let p = self.production(item.production);
        let mut out = format!("{} ->", self.name(p.lhs));
        for (k, &s) in p.rhs.iter().enumerate() {
            if k == item.dot() {
                out.push_str(" .");
            }
            out.push(' ');
            out.push_str(self.name(s));
        }
        if item.dot() == p.rhs.len() {
            out.push_str(" .");
        }
        out
    }

    /// Renders `. beta`.
    pub fn display_suffix(&self, id: SuffixId) -> String {
        let mut out = String::from(".");
        for &s in self.suffix(id) {
            out.push(' ');
            out.push_str(self.name(s));
        }
        out
    }

    /// Starts a builder pre-seeded with this grammar's symbols in id order,
    /// so that ids of existing symbols carry over to the derived grammar.
    pub(crate) fn builder_with_symbols(&self) -> GrammarBuilder {
        let mut b = GrammarBuilder::new();
        for s in &self.symbols {
            b.symbol(&s.name).expect("existing names are valid");
        }
        b
    }

    /// True if `other` has the same start name and the same production set,
    /// compared by symbol names.
    pub fn is_isomorphic(&self, other: &Grammar) -> bool {
        fn named(g: &Grammar) -> HashSet<(String, Vec<String>)> {
            g.productions
                .iter()
                .map(|p| {
                    (
                        g.name(p.lhs).to_string(),
                        p.rhs.iter().map(|&s| g.name(s).to_string()).collect(),
                    )
                })
                .collect()
        }
        self.name(self.start) == other.name(other.start) && named(self) == named(other)
    }

    /// Nonterminals that derive the empty string.
    pub fn nullable(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.symbols.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                if !nullable[p.lhs.index()] && p.rhs.iter().all(|s| nullable[s.index()]) {
                    nullable[p.lhs.index()] = true;
                    changed = true;
                }
            }
        }
        nullable
    }

    /// Symbols that derive at least one terminal string.
    pub fn productive(&self) -> Vec<bool> {
        let mut productive = self
            .symbols
            .iter()
            .map(|s| s.kind == SymbolKind::Terminal)
            .collect::<Vec<_>>();
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                if !productive[p.lhs.index()] && p.rhs.iter().all(|s| productive[s.index()]) {
                    productive[p.lhs.index()] = true;
                    changed = true;
                }
            }
        }
        productive
    }

    /// Maps whitespace-separated terminal names to ids.
    pub fn tokenize(&self, sentence: &str) -> Result<Vec<SymbolId>, InputError> {
        self.tokenize_words(sentence.split_whitespace())
    }

    pub fn tokenize_words<'a, I>(&self, words: I) -> Result<Vec<SymbolId>, InputError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        words
            .into_iter()
            .map(|w| match self.lookup(w) {
                Some(id) if self.is_terminal(id) => Ok(id),
                Some(_) => Err(InputError::NotATerminal(w.to_string())),
                None => Err(InputError::UnknownTerminal(w.to_string())),
            })
            .collect()
    }

    /// Checks that every symbol of `input` is a terminal of this grammar.
    pub fn check_input(&self, input: &[SymbolId]) -> Result<(), InputError> {
        for &s in input {
            match self.symbols.get(s.index()) {
                Some(sym) if sym.kind == SymbolKind::Terminal => {}
                Some(sym) => return Err(InputError::NotATerminal(sym.name.clone())),
                None => return Err(InputError::UnknownTerminal(format!("#{}", s.index()))),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("unknown terminal `{0}`")]
    UnknownTerminal(String),
    #[error("`{0}` is a nonterminal, not a terminal")]
    NotATerminal(String),
}

/// All dotted items `[A → α•β]` of the grammar, in production order.
pub fn dotted_items(g: &Grammar) -> Vec<DottedItem> {
    g.productions
        .iter()
        .flat_map(|p| (0..=p.rhs.len()).map(move |d| DottedItem::new(p.id, d)))
        .collect()
}

/// All suffix items `[β]` of the grammar, each exactly once.
pub fn suffix_items(g: &Grammar) -> Vec<SuffixItem<'_>> {
    g.suffixes
        .items
        .iter()
        .enumerate()
        .map(|(i, symbols)| SuffixItem {
            id: SuffixId(i as u32),
            symbols,
        })
        .collect()
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::serialize_grammar(self))
    }
}

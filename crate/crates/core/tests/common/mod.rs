#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use suffix_earley::sentgen::SentenceRng;
use suffix_earley::{Grammar, GrammarBuilder, SymbolId};

const NONTERMINALS: [&str; 6] = ["S", "A", "B", "C", "D", "E"];
const TERMINALS: [&str; 3] = ["a", "b", "c"];

/// A small random grammar: up to 6 nonterminals, each with at least one
/// production, at most 12 productions, right-hand sides of length at most 4
/// over 2 or 3 terminals. Empty rules and cycles occur freely.
pub fn random_grammar(seed: u64) -> Grammar {
    let mut rng = SentenceRng::new(seed);
    let nts = &NONTERMINALS[..1 + rng.below(NONTERMINALS.len())];
    let ts = &TERMINALS[..2 + rng.below(2)];
    let total = nts.len() + rng.below(12 - nts.len() + 1);
    let mut b = GrammarBuilder::new();
    for k in 0..total {
        let lhs = if k < nts.len() {
            nts[k]
        } else {
            nts[rng.below(nts.len())]
        };
        let len = rng.below(5);
        let rhs = (0..len)
            .map(|_| {
                if rng.below(2) == 0 {
                    nts[rng.below(nts.len())]
                } else {
                    ts[rng.below(ts.len())]
                }
            })
            .collect::<Vec<_>>();
        b.production(lhs, &rhs).expect("valid names");
    }
    b.start("S");
    b.build().expect("every nonterminal has a production")
}

/// Grammars for seeds `0..count`.
pub fn corpus(count: u64) -> Vec<Grammar> {
    (0..count).map(random_grammar).collect()
}

/// Every string over the grammar's terminals of length at most `max_len`.
pub fn all_inputs(g: &Grammar, max_len: usize) -> Vec<Vec<SymbolId>> {
    let alphabet = g.terminals().collect::<Vec<_>>();
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        if alphabet.is_empty() {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|w: &Vec<SymbolId>| {
                alphabet.iter().map(move |&a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn words(g: &Grammar, text: &str) -> Vec<SymbolId> {
    g.tokenize(text).expect("terminals of the grammar")
}

/// A derivation tree node with its span.
#[derive(Debug, Clone)]
pub struct Tree {
    pub symbol: SymbolId,
    pub span: (usize, usize),
    pub children: Vec<Tree>,
}

impl Tree {
    /// No node has a proper descendant with the same symbol and span.
    pub fn is_acyclic(&self) -> bool {
        self.children
            .iter()
            .all(|c| !c.contains(self.symbol, self.span) && c.is_acyclic())
    }

    fn contains(&self, symbol: SymbolId, span: (usize, usize)) -> bool {
        (self.symbol == symbol && self.span == span)
            || self.children.iter().any(|c| c.contains(symbol, span))
    }
}

/// Explicitly builds the derivation trees for `w`, then keeps the ones
/// that pass [`Tree::is_acyclic`]. While building, a node is not expanded
/// under a same-span ancestor with its own symbol; only same-span ancestors
/// can coincide with a descendant, so subtrees are shared per
/// `(symbol, span, same-span ancestors)`. Gives up (`None`) once more than
/// `budget` subtrees have been built.
pub fn enumerate_acyclic_trees(g: &Grammar, w: &[SymbolId], budget: usize) -> Option<Vec<Tree>> {
    let spans = Spans::compute(g, w);
    let mut e = TreeEnum {
        g,
        w,
        budget,
        spans,
        memo: HashMap::new(),
    };
    let trees = e.symbol(g.start(), (0, w.len()), &BTreeSet::new())?;
    Some(trees.iter().filter(|t| t.is_acyclic()).cloned().collect())
}

type Chain = BTreeSet<SymbolId>;
type MemoKey = (SymbolId, (usize, usize), Vec<SymbolId>);

/// `x ⇒* w[i..j]` for every symbol and span, by plain fixpoint iteration.
struct Spans<'a> {
    g: &'a Grammar,
    w: &'a [SymbolId],
    table: HashSet<(SymbolId, usize, usize)>,
}

impl<'a> Spans<'a> {
    fn compute(g: &'a Grammar, w: &'a [SymbolId]) -> Self {
        let mut s = Spans {
            g,
            w,
            table: HashSet::new(),
        };
        loop {
            let mut grew = false;
            for p in g.productions() {
                for i in 0..=w.len() {
                    for j in i..=w.len() {
                        if !s.table.contains(&(p.lhs, i, j)) && s.sequence(&p.rhs, i, j) {
                            s.table.insert((p.lhs, i, j));
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                return s;
            }
        }
    }

    fn symbol(&self, x: SymbolId, i: usize, j: usize) -> bool {
        if self.g.is_terminal(x) {
            j == i + 1 && self.w[i] == x
        } else {
            self.table.contains(&(x, i, j))
        }
    }

    fn sequence(&self, rhs: &[SymbolId], i: usize, j: usize) -> bool {
        match rhs.split_first() {
            None => i == j,
            Some((&x, rest)) => (i..=j).any(|m| self.symbol(x, i, m) && self.sequence(rest, m, j)),
        }
    }
}

struct TreeEnum<'a> {
    g: &'a Grammar,
    w: &'a [SymbolId],
    budget: usize,
    spans: Spans<'a>,
    memo: HashMap<MemoKey, Rc<Vec<Tree>>>,
}

impl TreeEnum<'_> {
    fn spend(&mut self, k: usize) -> Option<()> {
        self.budget = self.budget.checked_sub(k)?;
        Some(())
    }

    fn symbol(
        &mut self,
        x: SymbolId,
        span: (usize, usize),
        chain: &Chain,
    ) -> Option<Rc<Vec<Tree>>> {
        let (i, j) = span;
        if self.g.is_terminal(x) {
            let hit = j == i + 1 && self.w[i] == x;
            let leaf = Tree {
                symbol: x,
                span,
                children: vec![],
            };
            return Some(Rc::new(if hit { vec![leaf] } else { vec![] }));
        }
        if chain.contains(&x) {
            return Some(Rc::new(vec![]));
        }
        let key = (x, span, chain.iter().copied().collect::<Vec<_>>());
        if let Some(found) = self.memo.get(&key) {
            return Some(found.clone());
        }
        let mut inner = chain.clone();
        inner.insert(x);
        let mut out = Vec::new();
        let rhss = self
            .g
            .productions_of(x)
            .map(|p| p.rhs.clone())
            .collect::<Vec<_>>();
        for rhs in rhss {
            for children in self.sequence(&rhs, i, j, span, &inner)? {
                out.push(Tree {
                    symbol: x,
                    span,
                    children,
                });
            }
        }
        self.spend(out.len())?;
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        Some(out)
    }

    /// Child lists for `rhs` over `(i, j)` under a parent spanning `parent`
    /// whose same-span ancestors, itself included, are `chain`.
    fn sequence(
        &mut self,
        rhs: &[SymbolId],
        i: usize,
        j: usize,
        parent: (usize, usize),
        chain: &Chain,
    ) -> Option<Vec<Vec<Tree>>> {
        let Some((&x, rest)) = rhs.split_first() else {
            return Some(if i == j { vec![vec![]] } else { vec![] });
        };
        let mut out = Vec::new();
        for mid in i..=j {
            if !self.spans.symbol(x, i, mid) || !self.spans.sequence(rest, mid, j) {
                continue;
            }
            let tails = self.sequence(rest, mid, j, parent, chain)?;
            if tails.is_empty() {
                continue;
            }
            let context = if (i, mid) == parent {
                chain.clone()
            } else {
                Chain::new()
            };
            let heads = self.symbol(x, (i, mid), &context)?;
            self.spend(heads.len() * tails.len())?;
            for h in heads.iter() {
                for t in &tails {
                    let mut v = Vec::with_capacity(t.len() + 1);
                    v.push(h.clone());
                    v.extend(t.iter().cloned());
                    out.push(v);
                }
            }
        }
        Some(out)
    }
}

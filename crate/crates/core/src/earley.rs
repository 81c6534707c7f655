//! The classic Earley recognizer over dotted items.
//!
//! The table `E` is computed as a least fixpoint with a semi-naive agenda:
//! an item is combined only with items that were taken off the agenda
//! before it, so every distinct tuple of antecedents fires its rule exactly
//! once. The step counters therefore count elementary steps directly.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::agenda::{Agenda, RecognizeOptions};
use crate::grammar::{DottedItem, Grammar, InputError, ProdId, SymbolId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognizeError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("step counter overflow")]
    CounterOverflow,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("position ({i}, {j}) outside 0 <= i <= j <= {n}")]
pub struct PositionError {
    pub i: usize,
    pub j: usize,
    pub n: usize,
}

pub(crate) fn bump(counter: &mut u64) -> Result<(), RecognizeError> {
    *counter = counter
        .checked_add(1)
        .ok_or(RecognizeError::CounterOverflow)?;
    Ok(())
}

static EMPTY_ITEMS: BTreeSet<DottedItem> = BTreeSet::new();

/// The table `E`: entry `(i, j)` holds the dotted items spanning
/// `a_{i+1} … a_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EarleyChart {
    n: usize,
    /// `rows[i][j]`
    rows: Vec<BTreeMap<usize, BTreeSet<DottedItem>>>,
}

impl EarleyChart {
    pub fn new(n: usize) -> Self {
        EarleyChart {
            n,
            rows: vec![BTreeMap::new(); n + 1],
        }
    }

    /// Input length.
    pub fn input_len(&self) -> usize {
        self.n
    }

    /// Entry `E_{i,j}`; empty if nothing was inserted there.
    pub fn get(&self, i: usize, j: usize) -> Result<&BTreeSet<DottedItem>, PositionError> {
        if i > j || j > self.n {
            return Err(PositionError { i, j, n: self.n });
        }
        Ok(self.rows[i].get(&j).unwrap_or(&EMPTY_ITEMS))
    }

    pub fn contains(&self, item: DottedItem, i: usize, j: usize) -> bool {
        self.rows
            .get(i)
            .and_then(|r| r.get(&j))
            .is_some_and(|s| s.contains(&item))
    }

    /// Inserts an item; returns false if it was already present.
    ///
    /// Panics if `(i, j)` is out of range.
    pub fn insert(&mut self, item: DottedItem, i: usize, j: usize) -> bool {
        assert!(i <= j && j <= self.n, "position out of range");
        self.rows[i].entry(j).or_default().insert(item)
    }

    pub fn remove(&mut self, item: DottedItem, i: usize, j: usize) -> bool {
        self.rows
            .get_mut(i)
            .and_then(|r| r.get_mut(&j))
            .is_some_and(|s| s.remove(&item))
    }

    /// All `(i, j, item)` triples in `(i, j, item)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, DottedItem)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .flat_map(move |(&j, set)| set.iter().map(move |&item| (i, j, item)))
        })
    }

    /// `|E|`
    pub fn len(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.values())
            .map(BTreeSet::len)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One `i j A -> alpha . beta` line per item, sorted by `(i, j)` and
    /// then by item text.
    pub fn dump(&self, g: &Grammar) -> String {
        let mut lines = self
            .iter()
            .map(|(i, j, item)| (i, j, g.display_item(item)))
            .collect::<Vec<_>>();
        lines.sort();
        let mut out = String::new();
        for (i, j, text) in lines {
            out.push_str(&format!("{i} {j} {text}\n"));
        }
        out
    }
}

/// `chart_query`: the entry `E_{i,j}`.
pub fn chart_query(
    chart: &EarleyChart,
    i: usize,
    j: usize,
) -> Result<&BTreeSet<DottedItem>, PositionError> {
    chart.get(i, j)
}

/// Step counts for one run. `total` is `ℰ = ℰ₁ + ℰ₂ + ℰ₃ + seed`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EarleyStats {
    pub steps1: u64,
    pub steps2: u64,
    pub steps3: u64,
    pub seed: u64,
    pub total: u64,
    #[serde(rename = "items")]
    pub item_count: u64,
    pub accepted: bool,
}

impl EarleyStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct")
    }
}

/// Step-3 applications broken down by the active antecedent `[A → α•Bβ]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EarleyProfile {
    pub step3_by_item: BTreeMap<DottedItem, u64>,
}

#[derive(Debug, Clone)]
pub struct EarleyOutcome {
    pub chart: EarleyChart,
    pub stats: EarleyStats,
    pub profile: Option<EarleyProfile>,
}

/// Recognizes `w` with default options.
pub fn recognize_earley(g: &Grammar, input: &[SymbolId]) -> Result<EarleyOutcome, RecognizeError> {
    recognize_earley_with(g, input, RecognizeOptions::default())
}

pub fn recognize_earley_with(
    g: &Grammar,
    input: &[SymbolId],
    options: RecognizeOptions,
) -> Result<EarleyOutcome, RecognizeError> {
    g.check_input(input)?;
    let mut run = Run::new(g, input, options);
    run.seed();
    while let Some((item, i, j)) = run.agenda.pop() {
        run.process(item, i, j)?;
    }
    run.finish()
}

struct Run<'a> {
    g: &'a Grammar,
    input: &'a [SymbolId],
    chart: EarleyChart,
    agenda: Agenda<(DottedItem, usize, usize)>,
    /// `waiting[k][B]`: processed `[A → α•Bβ] ∈ E_{i,k}` as `(item, i)`.
    waiting: Vec<Vec<Vec<(DottedItem, usize)>>>,
    /// `finished[k][B]`: processed `[B → γ•] ∈ E_{k,j}` as `j`, one entry
    /// per item.
    finished: Vec<Vec<Vec<usize>>>,
    stats: EarleyStats,
    profile: Option<EarleyProfile>,
}

impl<'a> Run<'a> {
    fn new(g: &'a Grammar, input: &'a [SymbolId], options: RecognizeOptions) -> Self {
        let n = input.len();
        let symbols = g.symbols().len();
        Run {
            g,
            input,
            chart: EarleyChart::new(n),
            agenda: Agenda::new(options.agenda),
            waiting: vec![vec![Vec::new(); symbols]; n + 1],
            finished: vec![vec![Vec::new(); symbols]; n + 1],
            stats: EarleyStats::default(),
            profile: options.profile.then(EarleyProfile::default),
        }
    }

    fn add(&mut self, item: DottedItem, i: usize, j: usize) {
        if self.chart.insert(item, i, j) {
            self.agenda.push((item, i, j));
        }
    }

    fn seed(&mut self) {
        let start = self.g.start();
        for &p in self.g.production_ids_of(start) {
            self.stats.seed += 1;
            self.add(DottedItem::new(p, 0), 0, 0);
        }
    }

    fn count_step3(&mut self, active: DottedItem) -> Result<(), RecognizeError> {
        bump(&mut self.stats.steps3)?;
        if let Some(profile) = &mut self.profile {
            *profile.step3_by_item.entry(active).or_default() += 1;
        }
        Ok(())
    }

    fn process(&mut self, item: DottedItem, i: usize, j: usize) -> Result<(), RecognizeError> {
        let g = self.g;
        match g.next_symbol(item) {
            Some(next) if g.is_nonterminal(next) => {
                self.waiting[j][next.index()].push((item, i));
                // predict
                for &q in g.production_ids_of(next) {
                    bump(&mut self.stats.steps1)?;
                    self.add(DottedItem::new(q, 0), j, j);
                }
                // complete, this item as the active antecedent
                let ends = self.finished[j][next.index()].clone();
                for end in ends {
                    self.count_step3(item)?;
                    self.add(item.advance(), i, end);
                }
            }
            Some(next) => {
                // scan
                if self.input.get(j) == Some(&next) {
                    bump(&mut self.stats.steps2)?;
                    self.add(item.advance(), i, j + 1);
                }
            }
            None => {
                let lhs = g.production(item.production).lhs;
                self.finished[i][lhs.index()].push(j);
                // complete, this item as the complete antecedent
                let actives = self.waiting[i][lhs.index()].clone();
                for (active, origin) in actives {
                    self.count_step3(active)?;
                    self.add(active.advance(), origin, j);
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<EarleyOutcome, RecognizeError> {
        let n = self.input.len();
        let g = self.g;
        let accepted = g.production_ids_of(g.start()).iter().any(|&p: &ProdId| {
            let len = g.production(p).rhs.len();
            self.chart.contains(DottedItem::new(p, len), 0, n)
        });
        let mut stats = self.stats;
        stats.total = [stats.steps2, stats.steps3, stats.seed]
            .into_iter()
            .try_fold(stats.steps1, u64::checked_add)
            .ok_or(RecognizeError::CounterOverflow)?;
        stats.item_count = self.chart.len() as u64;
        stats.accepted = accepted;
        Ok(EarleyOutcome {
            chart: self.chart,
            stats,
            profile: self.profile,
        })
    }
}

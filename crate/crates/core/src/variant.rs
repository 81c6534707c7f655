//! The suffix-item variant of Earley's algorithm.
//!
//! Forward recognition stores only the suffixes `[β]` still to be found in
//! the array `U`, without left positions. Once a right-hand side has been
//! recognized completely, the backward steps rebuild its left positions in
//! the table `T`, from the rightmost constituent leftwards. Both directions
//! run in one semi-naive agenda because forward completion (step 3) reads
//! `T`.
//!
//! Steps, as inference rules over `U` and `T`:
//!
//! | step | consequent       | antecedents                                         |
//! |------|------------------|-----------------------------------------------------|
//! | 1    | `[γ] ∈ U_j`      | `[Aβ] ∈ U_j`, `A → γ`                               |
//! | 2    | `[β] ∈ U_j`      | `[a_j β] ∈ U_{j-1}`                                 |
//! | 3    | `[β] ∈ U_j`      | `[Bβ] ∈ U_k`, `B → γ`, `[γ] ∈ T_{k,j}`              |
//! | 4    | `[ε] ∈ T_{m,m}`  | `[ε] ∈ U_m`                                         |
//! | 5    | `[a_j β] ∈ T_{j-1,m}` | `[a_j β] ∈ U_{j-1}`, `[β] ∈ T_{j,m}`           |
//! | 6    | `[Bβ] ∈ T_{k,m}` | `[Bβ] ∈ U_k`, `B → γ`, `[γ] ∈ T_{k,j}`, `[β] ∈ T_{j,m}` |

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::agenda::{Agenda, RecognizeOptions};
use crate::earley::{bump, PositionError, RecognizeError};
use crate::grammar::{Grammar, SuffixId, SymbolId};

static EMPTY_SUFFIXES: BTreeSet<SuffixId> = BTreeSet::new();

/// The array `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardArray {
    entries: Vec<BTreeSet<SuffixId>>,
}

impl ForwardArray {
    pub fn new(n: usize) -> Self {
        ForwardArray {
            entries: vec![BTreeSet::new(); n + 1],
        }
    }

    pub fn input_len(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, j: usize) -> Result<&BTreeSet<SuffixId>, PositionError> {
        self.entries.get(j).ok_or(PositionError {
            i: j,
            j,
            n: self.input_len(),
        })
    }

    pub fn contains(&self, j: usize, s: SuffixId) -> bool {
        self.entries.get(j).is_some_and(|e| e.contains(&s))
    }

    /// Panics if `j` is out of range.
    pub fn insert(&mut self, j: usize, s: SuffixId) -> bool {
        self.entries[j].insert(s)
    }

    pub fn remove(&mut self, j: usize, s: SuffixId) -> bool {
        self.entries.get_mut(j).is_some_and(|e| e.remove(&s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, SuffixId)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(j, e)| e.iter().map(move |&s| (j, s)))
    }

    /// `|U|`
    pub fn len(&self) -> usize {
        self.entries.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One `j . beta` line per item, sorted.
    pub fn dump(&self, g: &Grammar) -> String {
        let mut lines = self
            .iter()
            .map(|(j, s)| (j, g.display_suffix(s)))
            .collect::<Vec<_>>();
        lines.sort();
        lines
            .into_iter()
            .map(|(j, text)| format!("{j} {text}\n"))
            .collect()
    }
}

/// The table `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackwardTable {
    n: usize,
    /// `rows[i][j]`
    rows: Vec<BTreeMap<usize, BTreeSet<SuffixId>>>,
}

impl BackwardTable {
    pub fn new(n: usize) -> Self {
        BackwardTable {
            n,
            rows: vec![BTreeMap::new(); n + 1],
        }
    }

    pub fn input_len(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&BTreeSet<SuffixId>, PositionError> {
        if i > j || j > self.n {
            return Err(PositionError { i, j, n: self.n });
        }
        Ok(self.rows[i].get(&j).unwrap_or(&EMPTY_SUFFIXES))
    }

    pub fn contains(&self, i: usize, j: usize, s: SuffixId) -> bool {
        self.rows
            .get(i)
            .and_then(|r| r.get(&j))
            .is_some_and(|e| e.contains(&s))
    }

    /// Panics if `(i, j)` is out of range.
    pub fn insert(&mut self, i: usize, j: usize, s: SuffixId) -> bool {
        assert!(i <= j && j <= self.n, "position out of range");
        self.rows[i].entry(j).or_default().insert(s)
    }

    pub fn remove(&mut self, i: usize, j: usize, s: SuffixId) -> bool {
        self.rows
            .get_mut(i)
            .and_then(|r| r.get_mut(&j))
            .is_some_and(|e| e.remove(&s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, SuffixId)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .flat_map(move |(&j, e)| e.iter().map(move |&s| (i, j, s)))
        })
    }

    /// `|T|`
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

    /// One `i j . beta` line per item, sorted.
    pub fn dump(&self, g: &Grammar) -> String {
        let mut lines = self
            .iter()
            .map(|(i, j, s)| (i, j, g.display_suffix(s)))
            .collect::<Vec<_>>();
        lines.sort();
        lines
            .into_iter()
            .map(|(i, j, text)| format!("{i} {j} {text}\n"))
            .collect()
    }
}

/// `forward_query`: the entry `U_j`.
pub fn forward_query(u: &ForwardArray, j: usize) -> Result<&BTreeSet<SuffixId>, PositionError> {
    u.get(j)
}

/// `backward_query`: the entry `T_{i,j}`.
pub fn backward_query(
    t: &BackwardTable,
    i: usize,
    j: usize,
) -> Result<&BTreeSet<SuffixId>, PositionError> {
    t.get(i, j)
}

/// Step counts for one run. `total` is `𝒱 = 𝒱₁ + … + 𝒱₆ + seed`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VariantStats {
    pub steps1: u64,
    pub steps2: u64,
    pub steps3: u64,
    pub steps4: u64,
    pub steps5: u64,
    pub steps6: u64,
    pub seed: u64,
    pub total: u64,
    #[serde(rename = "uItems")]
    pub u_count: u64,
    #[serde(rename = "tItems")]
    pub t_count: u64,
    pub accepted: bool,
}

impl VariantStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct")
    }
}

/// Step-3 and step-6 applications broken down by the `[Bβ] ∈ U_k`
/// antecedent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariantProfile {
    pub step3_by_suffix: BTreeMap<SuffixId, u64>,
    pub step6_by_suffix: BTreeMap<SuffixId, u64>,
}

#[derive(Debug, Clone)]
pub struct VariantOutcome {
    pub forward: ForwardArray,
    pub backward: BackwardTable,
    pub stats: VariantStats,
    pub profile: Option<VariantProfile>,
}

/// Recognizes `w` with default options.
pub fn recognize_variant(
    g: &Grammar,
    input: &[SymbolId],
) -> Result<VariantOutcome, RecognizeError> {
    recognize_variant_with(g, input, RecognizeOptions::default())
}

pub fn recognize_variant_with(
    g: &Grammar,
    input: &[SymbolId],
    options: RecognizeOptions,
) -> Result<VariantOutcome, RecognizeError> {
    g.check_input(input)?;
    let mut run = Run::new(g, input, options);
    run.seed();
    while let Some(item) = run.agenda.pop() {
        match item {
            Pending::Forward { j, s } => run.process_forward(j, s)?,
            Pending::Backward { i, j, s } => run.process_backward(i, j, s)?,
        }
    }
    run.finish()
}

#[derive(Debug, Clone, Copy)]
enum Pending {
    Forward { j: usize, s: SuffixId },
    Backward { i: usize, j: usize, s: SuffixId },
}

struct Run<'a> {
    g: &'a Grammar,
    input: &'a [SymbolId],
    forward: ForwardArray,
    backward: BackwardTable,
    agenda: Agenda<Pending>,
    /// Processed `U_k` entries.
    u_done: Vec<HashSet<SuffixId>>,
    /// Processed `[Bβ] ∈ U_k` grouped by head `B`.
    u_by_head: Vec<HashMap<SymbolId, Vec<SuffixId>>>,
    /// Processed `[β] ∈ T_{j,m}`: `t_from[j][β]` lists `m`.
    t_from: Vec<HashMap<SuffixId, Vec<usize>>>,
    /// Processed `[γ] ∈ T_{k,j}`: `t_to[j]` lists `(k, γ)`.
    t_to: Vec<Vec<(usize, SuffixId)>>,
    stats: VariantStats,
    profile: Option<VariantProfile>,
}

impl<'a> Run<'a> {
    fn new(g: &'a Grammar, input: &'a [SymbolId], options: RecognizeOptions) -> Self {
        let n = input.len();
        Run {
            g,
            input,
            forward: ForwardArray::new(n),
            backward: BackwardTable::new(n),
            agenda: Agenda::new(options.agenda),
            u_done: vec![HashSet::new(); n + 1],
            u_by_head: vec![HashMap::new(); n + 1],
            t_from: vec![HashMap::new(); n + 1],
            t_to: vec![Vec::new(); n + 1],
            stats: VariantStats::default(),
            profile: options.profile.then(VariantProfile::default),
        }
    }

    fn add_forward(&mut self, j: usize, s: SuffixId) {
        if self.forward.insert(j, s) {
            self.agenda.push(Pending::Forward { j, s });
        }
    }

    fn add_backward(&mut self, i: usize, j: usize, s: SuffixId) {
        if self.backward.insert(i, j, s) {
            self.agenda.push(Pending::Backward { i, j, s });
        }
    }

    fn seed(&mut self) {
        let g = self.g;
        for &p in g.production_ids_of(g.start()) {
            self.stats.seed += 1;
            self.add_forward(0, g.rhs_suffix(p));
        }
    }

    fn count_step3(&mut self, u: SuffixId) -> Result<(), RecognizeError> {
        bump(&mut self.stats.steps3)?;
        if let Some(profile) = &mut self.profile {
            *profile.step3_by_suffix.entry(u).or_default() += 1;
        }
        Ok(())
    }

    fn count_step6(&mut self, u: SuffixId) -> Result<(), RecognizeError> {
        bump(&mut self.stats.steps6)?;
        if let Some(profile) = &mut self.profile {
            *profile.step6_by_suffix.entry(u).or_default() += 1;
        }
        Ok(())
    }

    fn rights(&self, j: usize, s: SuffixId) -> Vec<usize> {
        self.t_from[j].get(&s).cloned().unwrap_or_default()
    }

    /// `[s] ∈ U_k` taken off the agenda.
    fn process_forward(&mut self, k: usize, s: SuffixId) -> Result<(), RecognizeError> {
        let g = self.g;
        self.u_done[k].insert(s);
        let (Some(head), Some(tail)) = (g.suffix_head(s), g.suffix_tail(s)) else {
            // empty suffix, steps4
            bump(&mut self.stats.steps4)?;
            self.add_backward(k, k, s);
            return Ok(());
        };
        self.u_by_head[k].entry(head).or_default().push(s);

        if g.is_nonterminal(head) {
            for &p in g.production_ids_of(head) {
                let gamma = g.rhs_suffix(p);
                // predict, steps1
                bump(&mut self.stats.steps1)?;
                self.add_forward(k, gamma);
                for j in self.rights(k, gamma) {
                    // forward completion, steps3
                    self.count_step3(s)?;
                    self.add_forward(j, tail);
                    for m in self.rights(j, tail) {
                        // backward completion, steps6
                        self.count_step6(s)?;
                        self.add_backward(k, m, s);
                    }
                }
            }
        } else if self.input.get(k) == Some(&head) {
            // scan, steps2
            bump(&mut self.stats.steps2)?;
            self.add_forward(k + 1, tail);
            for m in self.rights(k + 1, tail) {
                // backward scan, steps5
                bump(&mut self.stats.steps5)?;
                self.add_backward(k, m, s);
            }
        }
        Ok(())
    }

    /// `[s] ∈ T_{j,m}` taken off the agenda.
    fn process_backward(&mut self, j: usize, m: usize, s: SuffixId) -> Result<(), RecognizeError> {
        let g = self.g;
        self.t_from[j].entry(s).or_default().push(m);
        self.t_to[m].push((j, s));

        // As [γ] ∈ T_{k,j} with k = j, j = m: steps 3 and 6. The [β]
        // partner of step 6 may be this very item.
        for &p in g.completed_by(s) {
            let lhs = g.production(p).lhs;
            let waiting = self.u_by_head[j].get(&lhs).cloned().unwrap_or_default();
            for u in waiting {
                let beta = g.suffix_tail(u).expect("nonempty suffix");
                self.count_step3(u)?;
                self.add_forward(m, beta);
                for end in self.rights(m, beta) {
                    self.count_step6(u)?;
                    self.add_backward(j, end, u);
                }
            }
        }

        // As [β] ∈ T_{j,m} in step 5.
        if j >= 1 {
            if let Some(u) = g.suffix_cons(self.input[j - 1], s) {
                if self.u_done[j - 1].contains(&u) {
                    bump(&mut self.stats.steps5)?;
                    self.add_backward(j - 1, m, u);
                }
            }
        }

        // As [β] ∈ T_{j,m} in step 6, with a [γ] partner other than this
        // item (that combination was counted above).
        for idx in 0..self.t_to[j].len() {
            let (k, gamma) = self.t_to[j][idx];
            if (k, gamma) == (j, s) && j == m {
                continue;
            }
            for &p in g.completed_by(gamma) {
                let lhs = g.production(p).lhs;
                if let Some(u) = g.suffix_cons(lhs, s) {
                    if self.u_done[k].contains(&u) {
                        self.count_step6(u)?;
                        self.add_backward(k, m, u);
                    }
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<VariantOutcome, RecognizeError> {
        let g = self.g;
        let n = self.input.len();
        let accepted = g
            .production_ids_of(g.start())
            .iter()
            .any(|&p| self.backward.contains(0, n, g.rhs_suffix(p)));
        let mut stats = self.stats;
        stats.total = [
            stats.steps2,
            stats.steps3,
            stats.steps4,
            stats.steps5,
            stats.steps6,
            stats.seed,
        ]
        .into_iter()
        .try_fold(stats.steps1, u64::checked_add)
        .ok_or(RecognizeError::CounterOverflow)?;
        stats.u_count = self.forward.len() as u64;
        stats.t_count = self.backward.len() as u64;
        stats.accepted = accepted;
        Ok(VariantOutcome {
            forward: self.forward,
            backward: self.backward,
            stats,
            profile: self.profile,
        })
    }
}

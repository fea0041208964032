//! Deterministic automata and the Regular constraint.

use std::sync::Arc;

use crate::domain::DomainSet;
use crate::error::{Error, Result};
use crate::model::{Constraint, FilterResult, Store, Strength, VarId, Wipeout};

/// A DFA over a finite integer alphabet with a dense transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    n_states: usize,
    alphabet: Vec<i32>,
    table: Vec<Option<usize>>,
    initial: usize,
    accepting: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA from explicit transitions `(from, symbol, to)`.
    pub fn new(
        n_states: usize,
        alphabet: impl IntoIterator<Item = i32>,
        transitions: impl IntoIterator<Item = (usize, i32, usize)>,
        initial: usize,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut alphabet: Vec<i32> = alphabet.into_iter().collect();
        alphabet.sort_unstable();
        alphabet.dedup();
        if initial >= n_states {
            return Err(Error::invalid(format!("initial state {initial} out of {n_states} states")));
        }
        let mut table = vec![None; n_states * alphabet.len()];
        for (from, sym, to) in transitions {
            if from >= n_states || to >= n_states {
                return Err(Error::invalid(format!("transition {from} -{sym}-> {to} leaves the {n_states} states")));
            }
            let k = alphabet
                .binary_search(&sym)
                .map_err(|_| Error::invalid(format!("transition on symbol {sym} outside the alphabet")))?;
            let slot = &mut table[from * alphabet.len() + k];
            if slot.is_some_and(|t| t != to) {
                return Err(Error::invalid(format!("state {from} has two transitions on {sym}")));
            }
            *slot = Some(to);
        }
        let mut acc = vec![false; n_states];
        for q in accepting {
            *acc.get_mut(q).ok_or_else(|| Error::invalid(format!("accepting state {q} out of range")))? = true;
        }
        Ok(Dfa { n_states, alphabet, table, initial, accepting: acc })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn alphabet(&self) -> &[i32] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn step(&self, q: usize, sym: i32) -> Option<usize> {
        let k = self.alphabet.binary_search(&sym).ok()?;
        self.table[q * self.alphabet.len() + k]
    }

    pub fn accepts(&self, word: &[i32]) -> bool {
        word.iter().try_fold(self.initial, |q, &s| self.step(q, s)).is_some_and(|q| self.accepting[q])
    }
}

/// Keeps the values of `domains` that lie on an accepted word of length
/// `domains.len()`. Returns the filtered domains and whether one emptied.
pub fn dfa_filter(domains: &[DomainSet], dfa: &Dfa) -> (Vec<DomainSet>, bool) {
    let n = domains.len();
    let q = dfa.n_states();
    // forward[k][s]: state s reachable after reading k symbols
    let mut forward = vec![vec![false; q]; n + 1];
    forward[0][dfa.initial()] = true;
    for k in 0..n {
        for s in 0..q {
            if forward[k][s] {
                for v in domains[k].iter() {
                    if let Some(t) = dfa.step(s, v) {
                        forward[k + 1][t] = true;
                    }
                }
            }
        }
    }
    let mut backward = vec![vec![false; q]; n + 1];
    for s in 0..q {
        backward[n][s] = forward[n][s] && dfa.is_accepting(s);
    }
    let mut keep: Vec<Vec<i32>> = vec![Vec::new(); n];
    for k in (0..n).rev() {
        for s in 0..q {
            if !forward[k][s] {
                continue;
            }
            for v in domains[k].iter() {
                if dfa.step(s, v).is_some_and(|t| backward[k + 1][t]) {
                    backward[k][s] = true;
                    keep[k].push(v);
                }
            }
        }
    }
    let out: Vec<DomainSet> = keep
        .into_iter()
        .zip(domains)
        .map(|(vals, d)| {
            let mut kept = *d;
            kept.retain(|v| vals.contains(&v));
            kept
        })
        .collect();
    let failed = out.iter().any(DomainSet::is_empty);
    (out, failed)
}

/// The word spelled by `vars` is accepted by a DFA. Domain consistent.
#[derive(Debug, Clone)]
pub struct Regular {
    vars: Vec<VarId>,
    scope: Vec<VarId>,
    dfa: Arc<Dfa>,
    label: &'static str,
}

impl Regular {
    /// Panics if a variable occurs twice: repeated variables would make the
    /// layered filter unsound.
    pub fn new(vars: Vec<VarId>, dfa: Arc<Dfa>, label: &'static str) -> Self {
        let mut scope = vars.clone();
        scope.sort_unstable();
        scope.dedup();
        assert_eq!(scope.len(), vars.len(), "regular constraint over repeated variables");
        Regular { vars, scope, dfa, label }
    }
}

impl Constraint for Regular {
    fn name(&self) -> &str {
        self.label
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn check(&self, a: &[i32]) -> bool {
        let word: Vec<i32> = self.vars.iter().map(|x| a[x.0]).collect();
        self.dfa.accepts(&word)
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let doms: Vec<DomainSet> = self.vars.iter().map(|&x| *s.dom(x)).collect();
        let (kept, failed) = dfa_filter(&doms, &self.dfa);
        if failed {
            return Err(Wipeout);
        }
        let mut changed = false;
        for (&x, d) in self.vars.iter().zip(kept) {
            changed |= s.restrict(x, d)?;
        }
        Ok(changed)
    }

    fn strength(&self) -> Strength {
        Strength::DomainConsistent
    }
}

/// Delimiter symbol between a row and its position variable.
pub fn row_delimiter(m_cols: usize) -> i32 {
    m_cols.max(1) as i32 + 1
}

/// Accepts `x_1 .. x_m # p` where the `x` part is a 0/1 string with a
/// single 1, found at (1-based) position `p`. `#` is [`row_delimiter`].
///
/// States: `(d, p)` after reading `d` row symbols with the 1 at `p` (0 when
/// not seen yet), then one state per `p` after the delimiter, then the
/// final state.
pub fn build_row_function_dfa(m_cols: usize) -> Result<Dfa> {
    if m_cols == 0 {
        return Err(Error::invalid("row automaton needs at least one column"));
    }
    let m = m_cols;
    let id = |d: usize, p: usize| d * (m + 1) + p;
    let after_delim = |p: usize| (m + 1) * (m + 1) + p - 1;
    let fin = (m + 1) * (m + 1) + m;
    let delim = row_delimiter(m);
    let mut tr = Vec::new();
    for d in 0..m {
        for p in 0..=d {
            tr.push((id(d, p), 0, id(d + 1, p)));
            if p == 0 {
                tr.push((id(d, 0), 1, id(d + 1, d + 1)));
            }
        }
    }
    for p in 1..=m {
        tr.push((id(m, p), delim, after_delim(p)));
        tr.push((after_delim(p), p as i32, fin));
    }
    let alphabet = (0..=m as i32).chain([delim]);
    Dfa::new(fin + 1, alphabet, tr, id(0, 0), [fin])
}

/// Accepts `y_1 .. y_n` over `1..=m` that is non-increasing and whose runs
/// of equal values have non-increasing lengths.
///
/// States `(v, s, r)`: last value, length of its run, length of the
/// previous run (`n` before the first change).
pub fn build_col_sum_dfa(n_rows: usize, m_cols: usize) -> Result<Dfa> {
    col_sum_dfa(n_rows, m_cols, false)
}

/// [`build_col_sum_dfa`] restricted to sequences starting at `m` whose
/// consecutive values differ by at most one, so that the used columns are
/// the last ones.
pub fn build_packed_col_sum_dfa(n_rows: usize, m_cols: usize) -> Result<Dfa> {
    col_sum_dfa(n_rows, m_cols, true)
}

fn col_sum_dfa(n: usize, m: usize, packed: bool) -> Result<Dfa> {
    if n == 0 || m == 0 {
        return Err(Error::invalid(format!("column-sum automaton needs positive sizes, got {n}x{m}")));
    }
    // s, r in 1..=n
    let id = |v: usize, s: usize, r: usize| 1 + ((v - 1) * n + (s - 1)) * n + (r - 1);
    let n_states = 1 + m * n * n;
    let mut tr = Vec::new();
    for v in 1..=m {
        if !packed || v == m {
            tr.push((0, v as i32, id(v, 1, n)));
        }
    }
    for v in 1..=m {
        for s in 1..=n {
            for r in s..=n {
                if s < r {
                    tr.push((id(v, s, r), v as i32, id(v, s + 1, r)));
                }
                let lowest = if packed { v.saturating_sub(1).max(1) } else { 1 };
                for w in lowest..v {
                    tr.push((id(v, s, r), w as i32, id(w, 1, s)));
                }
            }
        }
    }
    Dfa::new(n_states, 1..=m as i32, tr, 0, 0..n_states)
}

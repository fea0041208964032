//! General-purpose constraints shared by the symmetry-breaking and problem
//! modules.

use std::fmt;
use std::sync::Arc;

use crate::model::{Constraint, FilterResult, Store, Strength, VarId, Wipeout};

/// `x < y`.
#[derive(Debug, Clone)]
pub struct Less {
    vars: [VarId; 2],
}

impl Less {
    pub fn new(x: VarId, y: VarId) -> Self {
        Less { vars: [x, y] }
    }
}

impl Constraint for Less {
    fn name(&self) -> &str {
        "less"
    }

    fn scope(&self) -> &[VarId] {
        &self.vars
    }

    fn check(&self, a: &[i32]) -> bool {
        a[self.vars[0].0] < a[self.vars[1].0]
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let [x, y] = self.vars;
        if x == y {
            return Err(Wipeout);
        }
        let a = s.remove_above(x, s.max(y).saturating_sub(1))?;
        let b = s.remove_below(y, s.min(x).saturating_add(1))?;
        Ok(a | b)
    }

    fn strength(&self) -> Strength {
        Strength::DomainConsistent
    }
}

/// Pairwise distinct values, filtered by removing fixed values from the
/// other variables, a pigeonhole test on the union of the domains and
/// Hall-interval bounds reasoning.
#[derive(Debug, Clone)]
pub struct AllDifferent {
    vars: Vec<VarId>,
}

impl AllDifferent {
    pub fn new(vars: Vec<VarId>) -> Self {
        AllDifferent { vars }
    }
}

impl AllDifferent {
    /// One pass of bounds reasoning: an interval holding as many values as
    /// there are variables confined to it is closed to all other variables.
    fn hall_intervals(&self, s: &mut Store) -> FilterResult {
        let mut ends: Vec<i32> = self.vars.iter().flat_map(|&x| [s.min(x), s.max(x)]).collect();
        ends.sort_unstable();
        ends.dedup();
        let mut changed = false;
        for (k, &a) in ends.iter().enumerate() {
            for &b in &ends[k..] {
                let inside = self.vars.iter().filter(|&&x| a <= s.min(x) && s.max(x) <= b).count();
                let width = (b - a + 1) as usize;
                if inside > width {
                    return Err(Wipeout);
                }
                if inside < width {
                    continue;
                }
                for &x in &self.vars {
                    if a <= s.min(x) && s.max(x) <= b {
                        continue;
                    }
                    if (a..=b).contains(&s.min(x)) {
                        changed |= s.remove_below(x, b + 1)?;
                    }
                    if (a..=b).contains(&s.max(x)) {
                        changed |= s.remove_above(x, a - 1)?;
                    }
                }
            }
        }
        Ok(changed)
    }
}

impl Constraint for AllDifferent {
    fn name(&self) -> &str {
        "all_different"
    }

    fn scope(&self) -> &[VarId] {
        &self.vars
    }

    fn check(&self, a: &[i32]) -> bool {
        let mut vals: Vec<i32> = self.vars.iter().map(|x| a[x.0]).collect();
        vals.sort_unstable();
        vals.windows(2).all(|w| w[0] != w[1])
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let mut changed = false;
        let mut done = vec![false; self.vars.len()];
        loop {
            let mut progress = false;
            for (k, &x) in self.vars.iter().enumerate() {
                if done[k] {
                    continue;
                }
                if let Some(v) = s.value(x) {
                    done[k] = true;
                    progress = true;
                    for &y in &self.vars {
                        if y != x {
                            changed |= s.remove(y, v)?;
                        }
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let mut union: Vec<i32> = self.vars.iter().flat_map(|&x| s.dom(x).iter()).collect();
        union.sort_unstable();
        union.dedup();
        if union.len() < self.vars.len() {
            return Err(Wipeout);
        }
        while self.hall_intervals(s)? {
            changed = true;
        }
        Ok(changed)
    }

    fn strength(&self) -> Strength {
        Strength::ForwardChecking
    }
}

/// Between `lo` and `hi` (inclusive) of `vars` take `value`.
#[derive(Debug, Clone)]
pub struct Count {
    vars: Vec<VarId>,
    value: i32,
    lo: usize,
    hi: usize,
}

impl Count {
    pub fn exactly(vars: Vec<VarId>, value: i32, count: usize) -> Self {
        Count { vars, value, lo: count, hi: count }
    }

    pub fn between(vars: Vec<VarId>, value: i32, lo: usize, hi: usize) -> Self {
        Count { vars, value, lo, hi }
    }
}

impl Constraint for Count {
    fn name(&self) -> &str {
        "count"
    }

    fn scope(&self) -> &[VarId] {
        &self.vars
    }

    fn check(&self, a: &[i32]) -> bool {
        let n = self.vars.iter().filter(|x| a[x.0] == self.value).count();
        (self.lo..=self.hi).contains(&n)
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let v = self.value;
        let fixed = self.vars.iter().filter(|&&x| s.value(x) == Some(v)).count();
        let possible = self.vars.iter().filter(|&&x| s.contains(x, v)).count();
        if fixed > self.hi || possible < self.lo || self.lo > self.hi {
            return Err(Wipeout);
        }
        let mut changed = false;
        if fixed == self.hi && possible > fixed {
            for &x in &self.vars {
                if s.value(x) != Some(v) {
                    changed |= s.remove(x, v)?;
                }
            }
        } else if possible == self.lo && possible > fixed {
            for &x in &self.vars {
                if s.contains(x, v) {
                    changed |= s.assign(x, v)?;
                }
            }
        }
        Ok(changed)
    }

    fn strength(&self) -> Strength {
        Strength::DomainConsistent
    }
}

/// `x <=_lex y` over two equal-length variable lists.
///
/// The filter computes, for every position, whether the pair can still be
/// made equal and whether `x` can still be made smaller; a suffix table then
/// tells whether a tail can be completed. Positions after the first place
/// where the comparison can be decided keep all their values; earlier ones
/// keep the values with a support. When the two lists share no variable this
/// is domain consistent.
#[derive(Debug, Clone)]
pub struct LexLeq {
    x: Vec<VarId>,
    y: Vec<VarId>,
    scope: Vec<VarId>,
    disjoint: bool,
    label: &'static str,
}

impl LexLeq {
    pub fn new(x: Vec<VarId>, y: Vec<VarId>) -> Self {
        Self::labelled(x, y, "lex_leq")
    }

    pub fn labelled(x: Vec<VarId>, y: Vec<VarId>, label: &'static str) -> Self {
        assert_eq!(x.len(), y.len(), "lex constraint over lists of different lengths");
        let mut scope: Vec<VarId> = x.iter().chain(&y).copied().collect();
        scope.sort_unstable();
        scope.dedup();
        let disjoint = scope.len() == 2 * x.len();
        LexLeq { x, y, scope, disjoint, label }
    }

    fn prune_once(&self, s: &mut Store, suffix: &mut [bool]) -> FilterResult {
        let n = self.x.len();
        let (x, y) = (&self.x, &self.y);
        let can_eq = |s: &Store, i: usize| s.dom(x[i]).intersects(s.dom(y[i]));
        let can_lt = |s: &Store, i: usize| s.min(x[i]) < s.max(y[i]);

        let first_forced_diff = (0..n).find(|&i| !can_eq(s, i)).unwrap_or(n);
        suffix[n] = true;
        for i in (0..n).rev() {
            suffix[i] = can_lt(s, i) || (can_eq(s, i) && suffix[i + 1]);
        }
        if !suffix[0] {
            return Err(Wipeout);
        }
        let decide_at = (0..n.min(first_forced_diff + 1)).find(|&i| can_lt(s, i));
        let last = decide_at.unwrap_or(n.saturating_sub(1)).min(first_forced_diff);

        let mut changed = false;
        for i in 0..n.min(last + 1) {
            let tail_ok = suffix[i + 1];
            let ymax = s.max(y[i]);
            let ydom = *s.dom(y[i]);
            changed |= s.retain(x[i], |a| a < ymax || (tail_ok && ydom.contains(a)))?;
            let xmin = s.min(x[i]);
            let xdom = *s.dom(x[i]);
            changed |= s.retain(y[i], |b| b > xmin || (tail_ok && xdom.contains(b)))?;
        }
        Ok(changed)
    }
}

impl Constraint for LexLeq {
    fn name(&self) -> &str {
        self.label
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn check(&self, a: &[i32]) -> bool {
        let xs = self.x.iter().map(|v| a[v.0]);
        let ys = self.y.iter().map(|v| a[v.0]);
        xs.cmp(ys) != std::cmp::Ordering::Greater
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let mut suffix = vec![false; self.x.len() + 1];
        let mut changed = false;
        while self.prune_once(s, &mut suffix)? {
            changed = true;
        }
        Ok(changed)
    }

    fn strength(&self) -> Strength {
        if self.disjoint {
            Strength::DomainConsistent
        } else {
            Strength::ForwardChecking
        }
    }
}

type Predicate = dyn Fn(&[i32]) -> bool + Send + Sync;

/// A predicate evaluated once its whole scope is fixed.
#[derive(Clone)]
pub struct CheckOnly {
    name: String,
    vars: Vec<VarId>,
    pred: Arc<Predicate>,
}

impl CheckOnly {
    /// `pred` receives the scope's values in scope order.
    pub fn new(name: impl Into<String>, vars: Vec<VarId>, pred: impl Fn(&[i32]) -> bool + Send + Sync + 'static) -> Self {
        CheckOnly { name: name.into(), vars, pred: Arc::new(pred) }
    }
}

impl fmt::Debug for CheckOnly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CheckOnly").field("name", &self.name).field("arity", &self.vars.len()).finish()
    }
}

impl Constraint for CheckOnly {
    fn name(&self) -> &str {
        &self.name
    }

    fn scope(&self) -> &[VarId] {
        &self.vars
    }

    fn check(&self, a: &[i32]) -> bool {
        let vals: Vec<i32> = self.vars.iter().map(|x| a[x.0]).collect();
        (self.pred)(&vals)
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let vals: Option<Vec<i32>> = self.vars.iter().map(|&x| s.value(x)).collect();
        match vals {
            Some(v) if !(self.pred)(&v) => Err(Wipeout),
            _ => Ok(false),
        }
    }

    fn strength(&self) -> Strength {
        Strength::CheckOnly
    }
}

//! Depth-first search with propagation to fixpoint.
//!
//! Branching follows a static variable order (grid cells in the order given
//! by [`VarOrder`], then auxiliary variables) and tries values in ascending
//! order. There are no restarts and no learning, so solution sequences are
//! reproducible.

use std::collections::VecDeque;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::Error;
use crate::matrix::Matrix;
use crate::model::{Constraint, Model, Store, VarId, Wipeout};

/// Static order in which grid cells are branched on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VarOrder {
    #[default]
    RowWise,
    ColWise,
    /// Row 0 left to right, row 1 right to left, ...
    SnakeRowWise,
    /// Column 0 top to bottom, column 1 bottom to top, ...
    SnakeColWise,
}

impl VarOrder {
    /// Grid coordinates in visiting order.
    pub fn cells(self, n_rows: usize, n_cols: usize) -> Vec<(usize, usize)> {
        match self {
            VarOrder::RowWise => (0..n_rows).flat_map(|i| (0..n_cols).map(move |j| (i, j))).collect(),
            VarOrder::ColWise => (0..n_cols).flat_map(|j| (0..n_rows).map(move |i| (i, j))).collect(),
            VarOrder::SnakeRowWise => (0..n_rows)
                .flat_map(|i| {
                    let cols: Vec<usize> = if i % 2 == 0 { (0..n_cols).collect() } else { (0..n_cols).rev().collect() };
                    cols.into_iter().map(move |j| (i, j))
                })
                .collect(),
            VarOrder::SnakeColWise => (0..n_cols)
                .flat_map(|j| {
                    let rows: Vec<usize> = if j % 2 == 0 { (0..n_rows).collect() } else { (0..n_rows).rev().collect() };
                    rows.into_iter().map(move |i| (i, j))
                })
                .collect(),
        }
    }
}

impl FromStr for VarOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "rowwise" | "row" => Ok(VarOrder::RowWise),
            "colwise" | "col" => Ok(VarOrder::ColWise),
            "snakerowwise" | "snake_r" | "snakerow" => Ok(VarOrder::SnakeRowWise),
            "snakecolwise" | "snake_c" | "snakecol" => Ok(VarOrder::SnakeColWise),
            other => Err(Error::parse(format!("unknown variable order {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_solutions: Option<u64>,
    pub time_budget: Option<Duration>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchConfig {
    pub var_order: VarOrder,
    pub limits: Limits,
}

impl SearchConfig {
    pub fn new(var_order: VarOrder) -> Self {
        SearchConfig { var_order, limits: Limits::default() }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub n_solutions: u64,
    /// Dead ends: propagation wipeouts after a branching decision.
    pub n_failures: u64,
    pub n_nodes: u64,
    pub elapsed: Duration,
    /// The whole search space was explored.
    pub complete: bool,
}

/// Constraint queue with per-variable watch lists.
pub struct Propagator {
    constraints: Vec<Arc<dyn Constraint>>,
    watchers: Vec<Vec<u32>>,
}

impl Propagator {
    pub fn new(constraints: &[Arc<dyn Constraint>], n_vars: usize) -> Self {
        let mut watchers = vec![Vec::new(); n_vars];
        for (k, c) in constraints.iter().enumerate() {
            for x in c.scope() {
                let w: &mut Vec<u32> = &mut watchers[x.0];
                if w.last() != Some(&(k as u32)) {
                    w.push(k as u32);
                }
            }
        }
        Propagator { constraints: constraints.to_vec(), watchers }
    }

    /// Runs filters until no domain changes. With `changed = None` every
    /// constraint is scheduled, otherwise only those watching `changed`.
    pub fn run(&self, store: &mut Store, changed: Option<&[VarId]>) -> Result<(), Wipeout> {
        let mut queue: VecDeque<u32> = VecDeque::new();
        let mut queued = vec![false; self.constraints.len()];
        match changed {
            None => {
                queue.extend(0..self.constraints.len() as u32);
                queued.iter_mut().for_each(|q| *q = true);
            }
            Some(vars) => {
                for x in vars {
                    for &k in &self.watchers[x.0] {
                        if !std::mem::replace(&mut queued[k as usize], true) {
                            queue.push_back(k);
                        }
                    }
                }
            }
        }
        store.clear_touched();
        while let Some(k) = queue.pop_front() {
            queued[k as usize] = false;
            let result = self.constraints[k as usize].filter(store);
            let touched: Vec<VarId> = store.drain_touched().collect();
            result?;
            for x in touched {
                for &w in &self.watchers[x.0] {
                    if !std::mem::replace(&mut queued[w as usize], true) {
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Propagates `constraints` over `store` to a common fixpoint.
pub fn propagate(store: &mut Store, constraints: &[Arc<dyn Constraint>]) -> Result<(), Wipeout> {
    Propagator::new(constraints, store.len()).run(store, None)
}

/// Enumerates every solution of `model`, calling `on_solution` with the grid
/// part of each.
pub fn solve_all(model: &Model, config: &SearchConfig, mut on_solution: impl FnMut(&Matrix)) -> SearchStats {
    let start = Instant::now();
    let mut search = Dfs {
        model,
        propagator: Propagator::new(model.constraints(), model.n_vars()),
        order: branching_order(model, config.var_order),
        limits: config.limits,
        start,
        stats: SearchStats::default(),
        stopped: false,
        on_solution: &mut on_solution,
    };
    let mut store = model.initial_store();
    search.stats.n_nodes = 1;
    if search.propagator.run(&mut store, None).is_ok() {
        search.descend(store, 0);
    }
    let mut stats = search.stats;
    stats.complete = !search.stopped;
    stats.elapsed = start.elapsed();
    stats
}

fn branching_order(model: &Model, order: VarOrder) -> Vec<VarId> {
    let mut vars: Vec<VarId> = order.cells(model.n_rows(), model.n_cols()).into_iter().map(|(i, j)| model.cell(i, j)).collect();
    vars.extend((model.n_rows() * model.n_cols()..model.n_vars()).map(VarId));
    vars
}

struct Dfs<'a, F: FnMut(&Matrix)> {
    model: &'a Model,
    propagator: Propagator,
    order: Vec<VarId>,
    limits: crate::search::Limits,
    start: Instant,
    stats: SearchStats,
    stopped: bool,
    on_solution: &'a mut F,
}

impl<F: FnMut(&Matrix)> Dfs<'_, F> {
    fn out_of_time(&mut self) -> bool {
        if let Some(budget) = self.limits.time_budget {
            if self.stats.n_nodes % 1024 == 0 && self.start.elapsed() > budget {
                self.stopped = true;
            }
        }
        self.stopped
    }

    fn descend(&mut self, store: Store, from: usize) {
        let Some(pos) = (from..self.order.len()).find(|&p| !store.is_fixed(self.order[p])) else {
            self.leaf(&store);
            return;
        };
        let x = self.order[pos];
        for v in store.dom(x).iter() {
            if self.stopped || self.out_of_time() {
                return;
            }
            self.stats.n_nodes += 1;
            let mut child = store.clone();
            if child.assign(x, v).is_err() || self.propagator.run(&mut child, Some(&[x])).is_err() {
                self.stats.n_failures += 1;
                continue;
            }
            self.descend(child, pos + 1);
        }
    }

    fn leaf(&mut self, store: &Store) {
        let assignment = store.assignment().expect("all variables fixed");
        if !self.model.constraints().iter().all(|c| c.check(&assignment)) {
            self.stats.n_failures += 1;
            return;
        }
        let cells = assignment[..self.model.n_rows() * self.model.n_cols()].to_vec();
        let m = Matrix::new(self.model.n_rows(), self.model.n_cols(), cells).expect("grid shape");
        self.stats.n_solutions += 1;
        (self.on_solution)(&m);
        if self.limits.max_solutions.is_some_and(|cap| self.stats.n_solutions >= cap) {
            self.stopped = true;
        }
    }
}

/// Collects all solutions into a vector.
pub fn all_solutions(model: &Model, config: &SearchConfig) -> (Vec<Matrix>, SearchStats) {
    let mut out = Vec::new();
    let stats = solve_all(model, config, |m| out.push(m.clone()));
    (out, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSet;
    use crate::model::VarGrid;
    use crate::propagators::{AllDifferent, LexLeq, Less};

    fn grid_model(n: usize, m: usize, lo: i32, hi: i32) -> Model {
        Model::new(VarGrid::new(n, m, DomainSet::range(lo, hi).unwrap()).unwrap())
    }

    #[test]
    fn orders_visit_every_cell_once() {
        for order in [VarOrder::RowWise, VarOrder::ColWise, VarOrder::SnakeRowWise, VarOrder::SnakeColWise] {
            let mut cells = order.cells(3, 4);
            assert_eq!(cells.len(), 12);
            cells.sort();
            cells.dedup();
            assert_eq!(cells.len(), 12);
        }
        assert_eq!(VarOrder::SnakeRowWise.cells(2, 2), vec![(0, 0), (0, 1), (1, 1), (1, 0)]);
        assert_eq!(VarOrder::SnakeColWise.cells(2, 2), vec![(0, 0), (1, 0), (1, 1), (0, 1)]);
    }

    #[test]
    fn unconstrained_counts() {
        let m = grid_model(3, 3, 0, 1);
        let stats = solve_all(&m, &SearchConfig::default(), |_| {});
        assert_eq!(stats.n_solutions, 512);
        assert!(stats.complete);
        assert_eq!(stats.n_failures, 0);
    }

    #[test]
    fn no_constraints_leaves_store_unchanged() {
        let m = grid_model(2, 2, 0, 3);
        let mut s = m.initial_store();
        propagate(&mut s, m.constraints()).unwrap();
        assert_eq!(s.domains(), m.initial_store().domains());
    }

    #[test]
    fn singleton_violation_fails() {
        let mut m = Model::new(VarGrid::from_matrix(&Matrix::from_rows(&[[2, 1]])));
        m.post(Less::new(m.cell(0, 0), m.cell(0, 1))).unwrap();
        let mut s = m.initial_store();
        assert!(propagate(&mut s, m.constraints()).is_err());
        assert_eq!(solve_all(&m, &SearchConfig::default(), |_| {}).n_solutions, 0);
    }

    #[test]
    fn limits_mark_incomplete() {
        let m = grid_model(3, 3, 0, 1);
        let cfg = SearchConfig::default().with_limits(Limits { max_solutions: Some(10), time_budget: None });
        let stats = solve_all(&m, &cfg, |_| {});
        assert_eq!(stats.n_solutions, 10);
        assert!(!stats.complete);
        let cfg = SearchConfig::default().with_limits(Limits { max_solutions: None, time_budget: Some(Duration::ZERO) });
        let stats = solve_all(&grid_model(4, 4, 0, 3), &cfg, |_| {});
        assert!(!stats.complete);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let mut m = grid_model(2, 3, 0, 2);
        m.post(LexLeq::new(m.row_vars(0), m.row_vars(1))).unwrap();
        m.post(AllDifferent::new(m.col_vars(1))).unwrap();
        m.post(Less::new(m.cell(0, 0), m.cell(1, 2))).unwrap();
        let (found, stats) = all_solutions(&m, &SearchConfig::default());
        assert!(stats.complete);
        let mut brute = Vec::new();
        for code in 0..3usize.pow(6) {
            let mut c = code;
            let cells: Vec<i32> = (0..6).map(|_| { let v = (c % 3) as i32; c /= 3; v }).collect();
            let mat = Matrix::new(2, 3, cells).unwrap();
            if m.constraints().iter().all(|k| k.check(mat.cells())) {
                brute.push(mat);
            }
        }
        let mut found_sorted = found.clone();
        found_sorted.sort();
        brute.sort();
        assert_eq!(found_sorted, brute);
        // ascending value order with row-wise branching yields sorted output
        assert_eq!(found, found_sorted);
    }

    #[test]
    fn fixpoint_independent_of_queue_order() {
        use rand::rngs::StdRng;
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let mut m = grid_model(3, 3, 0, 2);
            for i in 0..2 {
                m.post(LexLeq::new(m.row_vars(i), m.row_vars(i + 1))).unwrap();
                m.post(LexLeq::new(m.col_vars(i), m.col_vars(i + 1))).unwrap();
            }
            m.post(AllDifferent::new(vec![m.cell(0, 0), m.cell(1, 1), m.cell(2, 2)])).unwrap();
            let mut store = m.initial_store();
            for x in 0..9 {
                if rng.random_bool(0.4) {
                    let v = rng.random_range(0..3);
                    store.remove(VarId(x), v).ok();
                }
            }
            let mut a = store.clone();
            let ra = propagate(&mut a, m.constraints());
            let mut shuffled = m.constraints().to_vec();
            shuffled.shuffle(&mut rng);
            let mut b = store.clone();
            let rb = propagate(&mut b, &shuffled);
            assert_eq!(ra.is_ok(), rb.is_ok());
            if ra.is_ok() {
                assert_eq!(a.domains(), b.domains());
            }
        }
    }
}

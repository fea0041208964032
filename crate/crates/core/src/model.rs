//! Variables, the propagation contract, and models.
//!
//! Grid cell `(i, j)` of an `n x m` model is variable `i * m + j`; auxiliary
//! variables are numbered after the grid.

use std::fmt;
use std::sync::Arc;

use crate::domain::DomainSet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Raised by a filter when some domain becomes empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Wipeout;

pub type FilterResult = std::result::Result<bool, Wipeout>;

/// How much pruning a filter guarantees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Strength {
    /// Only evaluated on complete assignments of the scope.
    CheckOnly,
    /// Prunes, but without a support guarantee.
    ForwardChecking,
    /// At fixpoint every remaining value has a support.
    DomainConsistent,
}

/// Current domains of every variable of a model, plus a log of the variables
/// modified since the last drain.
#[derive(Clone, Debug)]
pub struct Store {
    domains: Vec<DomainSet>,
    touched: Vec<VarId>,
}

impl Store {
    pub fn new(domains: Vec<DomainSet>) -> Self {
        Store { domains, touched: Vec::new() }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.domains.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    #[inline]
    pub fn dom(&self, x: VarId) -> &DomainSet {
        &self.domains[x.0]
    }

    pub fn domains(&self) -> &[DomainSet] {
        &self.domains
    }

    #[inline]
    pub fn is_fixed(&self, x: VarId) -> bool {
        self.domains[x.0].is_singleton()
    }

    #[inline]
    pub fn value(&self, x: VarId) -> Option<i32> {
        self.domains[x.0].value()
    }

    #[inline]
    pub fn min(&self, x: VarId) -> i32 {
        self.domains[x.0].min().expect("min of empty domain")
    }

    #[inline]
    pub fn max(&self, x: VarId) -> i32 {
        self.domains[x.0].max().expect("max of empty domain")
    }

    #[inline]
    pub fn contains(&self, x: VarId, v: i32) -> bool {
        self.domains[x.0].contains(v)
    }

    #[inline]
    fn finish(&mut self, x: VarId, changed: bool) -> FilterResult {
        if changed {
            self.touched.push(x);
            if self.domains[x.0].is_empty() {
                return Err(Wipeout);
            }
        }
        Ok(changed)
    }

    pub fn remove(&mut self, x: VarId, v: i32) -> FilterResult {
        let c = self.domains[x.0].remove(v);
        self.finish(x, c)
    }

    pub fn assign(&mut self, x: VarId, v: i32) -> FilterResult {
        let c = self.domains[x.0].assign(v);
        self.finish(x, c)
    }

    pub fn remove_below(&mut self, x: VarId, lo: i32) -> FilterResult {
        let c = self.domains[x.0].remove_below(lo);
        self.finish(x, c)
    }

    pub fn remove_above(&mut self, x: VarId, hi: i32) -> FilterResult {
        let c = self.domains[x.0].remove_above(hi);
        self.finish(x, c)
    }

    pub fn intersect(&mut self, x: VarId, other: &DomainSet) -> FilterResult {
        let c = self.domains[x.0].intersect(other);
        self.finish(x, c)
    }

    pub fn retain(&mut self, x: VarId, keep: impl FnMut(i32) -> bool) -> FilterResult {
        let c = self.domains[x.0].retain(keep);
        self.finish(x, c)
    }

    /// Replaces a domain by a subset of itself.
    pub fn restrict(&mut self, x: VarId, to: DomainSet) -> FilterResult {
        let c = self.domains[x.0].intersect(&to);
        self.finish(x, c)
    }

    /// Takes the list of variables modified since the previous call.
    pub fn drain_touched(&mut self) -> std::vec::Drain<'_, VarId> {
        self.touched.drain(..)
    }

    pub fn clear_touched(&mut self) {
        self.touched.clear();
    }

    pub fn all_fixed(&self) -> bool {
        self.domains.iter().all(DomainSet::is_singleton)
    }

    /// Values of a fully fixed store.
    pub fn assignment(&self) -> Option<Vec<i32>> {
        self.domains.iter().map(DomainSet::value).collect()
    }
}

/// A constraint over a subset of a model's variables.
///
/// `filter` must be contracting and sound: it may only remove values that
/// take part in no complete assignment of the scope satisfying `check`.
pub trait Constraint: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;

    fn scope(&self) -> &[VarId];

    /// Evaluates the constraint on a complete assignment indexed by variable.
    fn check(&self, assignment: &[i32]) -> bool;

    /// Prunes the domains of the scope. Returns whether anything changed.
    fn filter(&self, store: &mut Store) -> FilterResult;

    fn strength(&self) -> Strength;
}

/// A grid of domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarGrid {
    n_rows: usize,
    n_cols: usize,
    domains: Vec<DomainSet>,
}

impl VarGrid {
    pub fn new(n_rows: usize, n_cols: usize, domain: DomainSet) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::invalid(format!("grid dimensions must be positive, got {n_rows}x{n_cols}")));
        }
        Ok(VarGrid { n_rows, n_cols, domains: vec![domain; n_rows * n_cols] })
    }

    pub fn from_domains(n_rows: usize, n_cols: usize, domains: Vec<DomainSet>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 || domains.len() != n_rows * n_cols {
            return Err(Error::invalid(format!("{} domains do not form a {n_rows}x{n_cols} grid", domains.len())));
        }
        Ok(VarGrid { n_rows, n_cols, domains })
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        VarGrid {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
            domains: m.cells().iter().map(|&v| DomainSet::singleton(v)).collect(),
        }
    }

    /// The assignment of an all-singleton grid.
    pub fn to_matrix(&self) -> Option<Matrix> {
        let cells = self.domains.iter().map(DomainSet::value).collect::<Option<Vec<_>>>()?;
        Matrix::new(self.n_rows, self.n_cols, cells).ok()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn dom(&self, i: usize, j: usize) -> &DomainSet {
        assert!(i < self.n_rows && j < self.n_cols);
        &self.domains[i * self.n_cols + j]
    }

    pub fn dom_mut(&mut self, i: usize, j: usize) -> &mut DomainSet {
        assert!(i < self.n_rows && j < self.n_cols);
        &mut self.domains[i * self.n_cols + j]
    }

    pub fn domains(&self) -> &[DomainSet] {
        &self.domains
    }
}

/// Problem name, parameter string and the structural properties that some
/// symmetry-breaking constraints require.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    pub name: String,
    pub params: String,
    /// Every cell takes a different value.
    pub all_different: bool,
    /// Every value of the grid's value set occurs in each solution.
    pub surjective: bool,
    /// Sets of values that can be permuted among themselves.
    pub value_groups: Vec<Vec<i32>>,
}

/// A matrix of decision variables, auxiliary variables and constraints.
#[derive(Clone, Debug)]
pub struct Model {
    grid: VarGrid,
    aux: Vec<DomainSet>,
    constraints: Vec<Arc<dyn Constraint>>,
    pub meta: Metadata,
}

impl Model {
    pub fn new(grid: VarGrid) -> Self {
        Model { grid, aux: Vec::new(), constraints: Vec::new(), meta: Metadata::default() }
    }

    pub fn with_meta(mut self, meta: Metadata) -> Self {
        self.meta = meta;
        self
    }

    pub fn grid(&self) -> &VarGrid {
        &self.grid
    }

    pub fn n_rows(&self) -> usize {
        self.grid.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.grid.n_cols
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> VarId {
        assert!(i < self.grid.n_rows && j < self.grid.n_cols, "cell ({i},{j}) outside grid");
        VarId(i * self.grid.n_cols + j)
    }

    pub fn row_vars(&self, i: usize) -> Vec<VarId> {
        (0..self.n_cols()).map(|j| self.cell(i, j)).collect()
    }

    pub fn col_vars(&self, j: usize) -> Vec<VarId> {
        (0..self.n_rows()).map(|i| self.cell(i, j)).collect()
    }

    pub fn grid_vars(&self) -> Vec<VarId> {
        (0..self.grid.domains.len()).map(VarId).collect()
    }

    pub fn n_vars(&self) -> usize {
        self.grid.domains.len() + self.aux.len()
    }

    pub fn is_grid_var(&self, x: VarId) -> bool {
        x.0 < self.grid.domains.len()
    }

    pub fn add_aux(&mut self, domain: DomainSet) -> VarId {
        self.aux.push(domain);
        VarId(self.grid.domains.len() + self.aux.len() - 1)
    }

    pub fn aux_domains(&self) -> &[DomainSet] {
        &self.aux
    }

    /// Union of the grid's domains.
    pub fn grid_values(&self) -> Vec<i32> {
        let mut vals: Vec<i32> = self.grid.domains.iter().flat_map(|d| d.iter()).collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    pub fn post(&mut self, c: impl Constraint + 'static) -> Result<()> {
        self.post_arc(Arc::new(c))
    }

    pub fn post_arc(&mut self, c: Arc<dyn Constraint>) -> Result<()> {
        let n = self.n_vars();
        if let Some(x) = c.scope().iter().find(|x| x.0 >= n) {
            return Err(Error::invalid(format!("constraint {} refers to unknown variable {}", c.name(), x.0)));
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn constraints(&self) -> &[Arc<dyn Constraint>] {
        &self.constraints
    }

    /// Initial domains of all variables, grid first.
    pub fn initial_store(&self) -> Store {
        let mut doms = self.grid.domains.clone();
        doms.extend_from_slice(&self.aux);
        Store::new(doms)
    }

    /// True when every grid domain is a subset of `{0, 1}`.
    pub fn is_boolean(&self) -> bool {
        self.grid.domains.iter().all(|d| d.iter().all(|v| v == 0 || v == 1))
    }

    /// Checks a grid assignment against every constraint whose scope lies
    /// inside the grid. Constraints touching auxiliary variables are skipped.
    pub fn satisfies_grid_constraints(&self, m: &Matrix) -> bool {
        if m.n_rows() != self.n_rows() || m.n_cols() != self.n_cols() {
            return false;
        }
        let n = self.grid.domains.len();
        let in_domain = m.cells().iter().zip(&self.grid.domains).all(|(&v, d)| d.contains(v));
        in_domain
            && self
                .constraints
                .iter()
                .filter(|c| c.scope().iter().all(|x| x.0 < n))
                .all(|c| c.check(m.cells()))
    }
}

//! Benchmark matrix models with row and column symmetry.
//!
//! Each family has a parameter record that parses from strings such as
//! `efpa:q=3,lam=3,d=2,v=3` and builds a [`Model`] holding the problem
//! constraints only.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::domain::DomainSet;
use crate::error::{Error, Result};
use crate::model::{Constraint, FilterResult, Metadata, Model, Store, Strength, VarGrid, VarId, Wipeout};
use crate::propagators::Count;

/// Largest grid the builders will create.
pub const MAX_CELLS: usize = 4096;

/// Number of rows and columns differing in exactly `d` positions.
#[derive(Debug, Clone)]
pub struct Hamming {
    x: Vec<VarId>,
    y: Vec<VarId>,
    d: usize,
    scope: Vec<VarId>,
}

impl Hamming {
    pub fn new(x: Vec<VarId>, y: Vec<VarId>, d: usize) -> Self {
        assert_eq!(x.len(), y.len(), "distance between lists of different lengths");
        let mut scope: Vec<VarId> = x.iter().chain(&y).copied().collect();
        scope.sort_unstable();
        scope.dedup();
        Hamming { x, y, d, scope }
    }
}

impl Constraint for Hamming {
    fn name(&self) -> &str {
        "hamming"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn check(&self, a: &[i32]) -> bool {
        self.x.iter().zip(&self.y).filter(|(p, q)| a[p.0] != a[q.0]).count() == self.d
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let pairs: Vec<(VarId, VarId)> = self.x.iter().copied().zip(self.y.iter().copied()).collect();
        let differ = pairs.iter().filter(|&&(p, q)| !s.dom(p).intersects(s.dom(q))).count();
        let open: Vec<(VarId, VarId)> = pairs
            .into_iter()
            .filter(|&(p, q)| s.dom(p).intersects(s.dom(q)) && !(s.is_fixed(p) && s.is_fixed(q)))
            .collect();
        if differ > self.d || differ + open.len() < self.d {
            return Err(Wipeout);
        }
        let mut changed = false;
        if differ == self.d {
            for (p, q) in open {
                let (dp, dq) = (*s.dom(p), *s.dom(q));
                changed |= s.intersect(p, &dq)? | s.intersect(q, &dp)?;
            }
        } else if differ + open.len() == self.d {
            for (p, q) in open {
                if let Some(v) = s.value(p) {
                    changed |= s.remove(q, v)?;
                }
                if let Some(v) = s.value(q) {
                    changed |= s.remove(p, v)?;
                }
            }
        }
        Ok(changed)
    }

    fn strength(&self) -> Strength {
        Strength::ForwardChecking
    }
}

/// Number of positions where both 0/1 lists hold 1 equals `lam`.
#[derive(Debug, Clone)]
pub struct ScalarProduct {
    x: Vec<VarId>,
    y: Vec<VarId>,
    lam: usize,
    scope: Vec<VarId>,
}

impl ScalarProduct {
    pub fn new(x: Vec<VarId>, y: Vec<VarId>, lam: usize) -> Self {
        assert_eq!(x.len(), y.len(), "product of lists of different lengths");
        let mut scope: Vec<VarId> = x.iter().chain(&y).copied().collect();
        scope.sort_unstable();
        scope.dedup();
        ScalarProduct { x, y, lam, scope }
    }
}

impl Constraint for ScalarProduct {
    fn name(&self) -> &str {
        "scalar_product"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn check(&self, a: &[i32]) -> bool {
        self.x.iter().zip(&self.y).filter(|(p, q)| a[p.0] == 1 && a[q.0] == 1).count() == self.lam
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let pairs: Vec<(VarId, VarId)> = self.x.iter().copied().zip(self.y.iter().copied()).collect();
        let both = |s: &Store, p: VarId, q: VarId| s.value(p) == Some(1) && s.value(q) == Some(1);
        let maybe = |s: &Store, p: VarId, q: VarId| s.contains(p, 1) && s.contains(q, 1);
        let forced = pairs.iter().filter(|&&(p, q)| both(s, p, q)).count();
        let possible = pairs.iter().filter(|&&(p, q)| maybe(s, p, q)).count();
        if forced > self.lam || possible < self.lam {
            return Err(Wipeout);
        }
        let mut changed = false;
        if forced == self.lam && possible > forced {
            for &(p, q) in &pairs {
                if maybe(s, p, q) && !both(s, p, q) {
                    if s.value(p) == Some(1) {
                        changed |= s.remove(q, 1)?;
                    } else if s.value(q) == Some(1) {
                        changed |= s.remove(p, 1)?;
                    }
                }
            }
        } else if possible == self.lam && possible > forced {
            for &(p, q) in &pairs {
                if maybe(s, p, q) {
                    changed |= s.assign(p, 1)? | s.assign(q, 1)?;
                }
            }
        }
        Ok(changed)
    }

    fn strength(&self) -> Strength {
        Strength::ForwardChecking
    }
}

/// At least one of `rows` spells `tuple`.
#[derive(Debug, Clone)]
pub struct Coverage {
    rows: Vec<Vec<VarId>>,
    tuple: Vec<i32>,
    scope: Vec<VarId>,
}

impl Coverage {
    pub fn new(rows: Vec<Vec<VarId>>, tuple: Vec<i32>) -> Self {
        assert!(rows.iter().all(|r| r.len() == tuple.len()), "row and tuple lengths differ");
        let mut scope: Vec<VarId> = rows.iter().flatten().copied().collect();
        scope.sort_unstable();
        scope.dedup();
        Coverage { rows, tuple, scope }
    }

    fn can_spell(&self, s: &Store, row: &[VarId]) -> bool {
        row.iter().zip(&self.tuple).all(|(&x, &v)| s.contains(x, v))
    }
}

impl Constraint for Coverage {
    fn name(&self) -> &str {
        "coverage"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn check(&self, a: &[i32]) -> bool {
        self.rows.iter().any(|r| r.iter().zip(&self.tuple).all(|(x, &v)| a[x.0] == v))
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let mut candidates = self.rows.iter().filter(|r| self.can_spell(s, r));
        match (candidates.next(), candidates.next()) {
            (None, _) => Err(Wipeout),
            (Some(row), None) => {
                let mut changed = false;
                for (&x, &v) in row.iter().zip(&self.tuple) {
                    changed |= s.assign(x, v)?;
                }
                Ok(changed)
            }
            _ => Ok(false),
        }
    }

    fn strength(&self) -> Strength {
        Strength::DomainConsistent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnconstrainedParams {
    pub r: usize,
    pub c: usize,
    pub d: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EfpaParams {
    pub q: usize,
    pub lam: usize,
    pub d: usize,
    pub v: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BibdParams {
    pub v: usize,
    pub k: usize,
    pub lam: usize,
}

impl BibdParams {
    /// `(b, r)`: number of blocks and replication, when both are integral.
    pub fn derived(&self) -> Result<(usize, usize)> {
        let (v, k, lam) = (self.v, self.k, self.lam);
        if k < 2 || v < 2 {
            return Err(Error::invalid(format!("block design needs v >= 2 and k >= 2, got v={v}, k={k}")));
        }
        let b_num = lam * v * (v - 1);
        let b_den = k * (k - 1);
        let r_num = lam * (v - 1);
        let r_den = k - 1;
        if b_num % b_den != 0 || r_num % r_den != 0 {
            return Err(Error::invalid(format!(
                "block design (v={v}, k={k}, lam={lam}) has b = {}/{} = {:.3} and r = {}/{} = {:.3}; both must be integers",
                b_num,
                b_den,
                b_num as f64 / b_den as f64,
                r_num,
                r_den,
                r_num as f64 / r_den as f64
            )));
        }
        Ok((b_num / b_den, r_num / r_den))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaParams {
    pub t: usize,
    pub k: usize,
    pub g: usize,
    pub b: usize,
    /// Vectors are the columns of a `k x b` grid instead of the rows of a
    /// `b x k` one. Parsed from `layout=cols`.
    pub vectors_as_cols: bool,
}

/// A benchmark instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemSpec {
    Unconstrained(UnconstrainedParams),
    Efpa(EfpaParams),
    Bibd(BibdParams),
    Ca(CaParams),
}

impl ProblemSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::Unconstrained(_) => "unconstrained",
            ProblemSpec::Efpa(_) => "efpa",
            ProblemSpec::Bibd(_) => "bibd",
            ProblemSpec::Ca(_) => "ca",
        }
    }

    /// Parameters as `key=value` pairs in canonical order.
    pub fn params(&self) -> String {
        match *self {
            ProblemSpec::Unconstrained(p) => format!("r={},c={},d={}", p.r, p.c, p.d),
            ProblemSpec::Efpa(p) => format!("q={},lam={},d={},v={}", p.q, p.lam, p.d, p.v),
            ProblemSpec::Bibd(p) => format!("v={},k={},lam={}", p.v, p.k, p.lam),
            ProblemSpec::Ca(p) => {
                let layout = if p.vectors_as_cols { ",layout=cols" } else { "" };
                format!("t={},k={},g={},b={}{layout}", p.t, p.k, p.g, p.b)
            }
        }
    }

    pub fn build(&self) -> Result<Model> {
        match *self {
            ProblemSpec::Unconstrained(p) => build_unconstrained(p),
            ProblemSpec::Efpa(p) => build_efpa(p),
            ProblemSpec::Bibd(p) => build_bibd(p),
            ProblemSpec::Ca(p) => build_ca(p),
        }
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name(), self.params())
    }
}

fn parse_params(body: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let mut found: BTreeMap<&str, usize> = BTreeMap::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::parse(format!("expected key=value, got {item:?}")))?;
        let k = k.trim();
        let key = *keys.iter().find(|&&name| name == k).ok_or_else(|| {
            Error::parse(format!("unknown parameter {k:?}; expected {}", keys.join(",")))
        })?;
        let v: usize = v.trim().parse().map_err(|_| Error::parse(format!("parameter {k} must be a non-negative integer, got {v:?}")))?;
        if found.insert(key, v).is_some() {
            return Err(Error::parse(format!("parameter {k} given twice")));
        }
    }
    keys.iter()
        .map(|k| found.get(k).copied().ok_or_else(|| Error::parse(format!("missing parameter {k}"))))
        .collect()
}

impl FromStr for ProblemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, body) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        match name.to_ascii_lowercase().as_str() {
            "unconstrained" => {
                let p = parse_params(body, &["r", "c", "d"])?;
                Ok(ProblemSpec::Unconstrained(UnconstrainedParams { r: p[0], c: p[1], d: p[2] }))
            }
            "efpa" => {
                let p = parse_params(body, &["q", "lam", "d", "v"])?;
                Ok(ProblemSpec::Efpa(EfpaParams { q: p[0], lam: p[1], d: p[2], v: p[3] }))
            }
            "bibd" => {
                let p = parse_params(body, &["v", "k", "lam"])?;
                Ok(ProblemSpec::Bibd(BibdParams { v: p[0], k: p[1], lam: p[2] }))
            }
            "ca" => {
                let mut vectors_as_cols = false;
                let mut rest = Vec::new();
                for item in body.split(',') {
                    match item.split_once('=').map(|(k, v)| (k.trim(), v.trim())) {
                        Some(("layout", "rows")) => {}
                        Some(("layout", "cols")) => vectors_as_cols = true,
                        Some(("layout", other)) => return Err(Error::parse(format!("layout must be rows or cols, got {other:?}"))),
                        _ => rest.push(item),
                    }
                }
                let p = parse_params(&rest.join(","), &["t", "k", "g", "b"])?;
                Ok(ProblemSpec::Ca(CaParams { t: p[0], k: p[1], g: p[2], b: p[3], vectors_as_cols }))
            }
            other => Err(Error::parse(format!("unknown problem {other:?}; expected unconstrained, efpa, bibd or ca"))),
        }
    }
}

fn checked_grid(rows: usize, cols: usize, values: usize) -> Result<VarGrid> {
    if rows == 0 || cols == 0 || values == 0 {
        return Err(Error::invalid(format!("{rows}x{cols} grid over {values} values is empty")));
    }
    if rows.saturating_mul(cols) > MAX_CELLS {
        return Err(Error::ResourceLimit(format!("{rows}x{cols} grid exceeds {MAX_CELLS} cells")));
    }
    let hi = i32::try_from(values - 1).unwrap_or(i32::MAX);
    VarGrid::new(rows, cols, DomainSet::range(0, hi)?)
}

fn meta(spec: ProblemSpec, surjective: bool, values: usize) -> Metadata {
    Metadata {
        name: spec.name().into(),
        params: spec.params(),
        all_different: false,
        surjective,
        value_groups: if values > 1 { vec![(0..values as i32).collect()] } else { Vec::new() },
    }
}

/// `r x c` grid over `0..d` without constraints.
pub fn build_unconstrained(p: UnconstrainedParams) -> Result<Model> {
    let grid = checked_grid(p.r, p.c, p.d)?;
    Ok(Model::new(grid).with_meta(meta(ProblemSpec::Unconstrained(p), p.d == 1, p.d)))
}

/// `v` code words of length `q * lam` over `0..q`, each holding every symbol
/// `lam` times, pairwise at Hamming distance `d`.
pub fn build_efpa(p: EfpaParams) -> Result<Model> {
    if p.lam == 0 {
        return Err(Error::invalid("code words need lam >= 1"));
    }
    let grid = checked_grid(p.v, p.q.saturating_mul(p.lam), p.q)?;
    let mut model = Model::new(grid).with_meta(meta(ProblemSpec::Efpa(p), true, p.q));
    for i in 0..p.v {
        for s in 0..p.q {
            model.post(Count::exactly(model.row_vars(i), s as i32, p.lam))?;
        }
    }
    for i in 0..p.v {
        for j in i + 1..p.v {
            model.post(Hamming::new(model.row_vars(i), model.row_vars(j), p.d))?;
        }
    }
    Ok(model)
}

/// `v x b` incidence matrix with row sums `r`, column sums `k` and row
/// scalar products `lam`.
pub fn build_bibd(p: BibdParams) -> Result<Model> {
    let (b, r) = p.derived()?;
    let grid = checked_grid(p.v, b, 2)?;
    let mut model = Model::new(grid).with_meta(Metadata {
        name: "bibd".into(),
        params: ProblemSpec::Bibd(p).params(),
        ..Metadata::default()
    });
    for i in 0..p.v {
        model.post(Count::exactly(model.row_vars(i), 1, r))?;
    }
    for j in 0..b {
        model.post(Count::exactly(model.col_vars(j), 1, p.k))?;
    }
    for i in 0..p.v {
        for j in i + 1..p.v {
            model.post(ScalarProduct::new(model.row_vars(i), model.row_vars(j), p.lam))?;
        }
    }
    Ok(model)
}

/// `b x k` array over `0..g` in which every `t` columns show every tuple
/// (or its `k x b` transpose).
pub fn build_ca(p: CaParams) -> Result<Model> {
    if p.t == 0 || p.t > p.k {
        return Err(Error::invalid(format!("covering strength t={} must be in 1..={}", p.t, p.k)));
    }
    let (n_rows, n_cols) = if p.vectors_as_cols { (p.k, p.b) } else { (p.b, p.k) };
    let grid = checked_grid(n_rows, n_cols, p.g)?;
    let n_tuples = (p.g as u64).checked_pow(p.t as u32).filter(|&n| n <= MAX_CELLS as u64);
    let Some(n_tuples) = n_tuples else {
        return Err(Error::ResourceLimit(format!("{}^{} tuples per column set is too many", p.g, p.t)));
    };
    let mut model = Model::new(grid).with_meta(meta(ProblemSpec::Ca(p), true, p.g));
    for cols in subsets(p.k, p.t) {
        let cell = |vector: usize, pos: usize| if p.vectors_as_cols { model.cell(pos, vector) } else { model.cell(vector, pos) };
        let rows: Vec<Vec<VarId>> = (0..p.b).map(|i| cols.iter().map(|&j| cell(i, j)).collect()).collect();
        for code in 0..n_tuples {
            let mut c = code;
            let mut tuple = vec![0; p.t];
            for v in tuple.iter_mut().rev() {
                *v = (c % p.g as u64) as i32;
                c /= p.g as u64;
            }
            model.post(Coverage::new(rows.clone(), tuple))?;
        }
    }
    Ok(model)
}

/// All `t`-subsets of `0..k` in lex order.
fn subsets(k: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..t).collect();
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..t).rev().find(|&i| cur[i] < k - t + i) else {
            return out;
        };
        cur[pos] += 1;
        for i in pos + 1..t {
            cur[i] = cur[i - 1] + 1;
        }
    }
}

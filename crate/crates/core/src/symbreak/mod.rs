//! Static symmetry-breaking constraints for matrix models.
//!
//! Each method has a checker on complete matrices and a `post_*` function
//! that adds filtering constraints to a [`Model`]. [`SymBreakConfig`] names
//! a combination of one row/column method and an optional value method.

mod dfa;
mod families;
mod value;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use dfa::{
    build_col_sum_dfa, build_packed_col_sum_dfa, build_row_function_dfa, dfa_filter, row_delimiter, Dfa, Regular,
};
pub use families::{doublelex_witnesses, puget_conflict_instance, snakelex_witnesses};
pub use value::{
    check_value_precedence, first_occurrences, post_puget, post_value_precedence, puget_channel, FirstOccurrence,
    Precedence,
};

use crate::canonical::{is_lex_leader, DEFAULT_ROW_LIMIT};
use crate::domain::DomainSet;
use crate::error::{Error, Result};
use crate::lex::{entwined_lex_leq, lex_leq, rev_lex_leq};
use crate::matrix::Matrix;
use crate::model::{Model, VarId};
use crate::propagators::{CheckOnly, LexLeq, Less};
use crate::search::VarOrder;

fn sorted_pairs<T>(lines: &[T], leq: impl Fn(&T, &T) -> bool) -> bool {
    lines.windows(2).all(|w| leq(&w[0], &w[1]))
}

/// Rows and columns lexicographically non-decreasing.
pub fn check_double_lex(m: &Matrix) -> bool {
    let cols: Vec<Vec<i32>> = (0..m.n_cols()).map(|j| m.col(j)).collect();
    sorted_pairs(&m.rows().collect::<Vec<_>>(), |a, b| a <= b) && sorted_pairs(&cols, |a, b| a <= b)
}

/// Pairs `(j, k)` of snake-ordered lines: each line is compared with the
/// next two, forwards from even (0-based) lines and backwards from odd ones.
fn snake_pairs(n_lines: usize) -> impl Iterator<Item = (usize, usize, bool)> {
    (0..n_lines).flat_map(move |j| (j + 1..(j + 3).min(n_lines)).map(move |k| (j, k, j % 2 == 0)))
}

/// Column-wise snake ordering: alternating-direction comparisons of each
/// column with its next two, and entwined comparisons of adjacent rows.
pub fn check_snakelex_c(m: &Matrix) -> bool {
    let cols: Vec<Vec<i32>> = (0..m.n_cols()).map(|j| m.col(j)).collect();
    let cols_ok = snake_pairs(cols.len()).all(|(j, k, forward)| {
        if forward {
            lex_leq(&cols[j], &cols[k]).expect("equal lengths")
        } else {
            rev_lex_leq(&cols[j], &cols[k]).expect("equal lengths")
        }
    });
    let rows: Vec<&[i32]> = m.rows().collect();
    cols_ok && sorted_pairs(&rows, |a, b| entwined_lex_leq(a, b).expect("equal lengths"))
}

/// Row-wise snake ordering: [`check_snakelex_c`] of the transpose.
pub fn check_snakelex_r(m: &Matrix) -> bool {
    check_snakelex_c(&m.transpose())
}

/// Smallest value top-left, first row and first column strictly increasing
/// and the top-left value below every other one.
pub fn check_order_1st_row_col(m: &Matrix) -> bool {
    let first = m.get(0, 0);
    let row0 = m.row(0);
    let col0 = m.col(0);
    let rest = (1..m.n_rows()).flat_map(|i| (1..m.n_cols()).map(move |j| (i, j)));
    row0.windows(2).all(|w| w[0] < w[1]) && col0.windows(2).all(|w| w[0] < w[1]) && rest.into_iter().all(|(i, j)| first < m.get(i, j))
}

/// 0/1 matrix with one 1 per row, rows and columns lex ordered and column
/// sums non-increasing along the used columns.
pub fn check_double_lex_col_sum(m: &Matrix) -> bool {
    let ys: Option<Vec<i32>> = m
        .rows()
        .map(|r| {
            let ones: Vec<usize> = (0..r.len()).filter(|&j| r[j] == 1).collect();
            (ones.len() == 1 && r.iter().all(|&v| v == 0 || v == 1)).then(|| ones[0] as i32 + 1)
        })
        .collect();
    let Some(ys) = ys else { return false };
    build_packed_col_sum_dfa(m.n_rows(), m.n_cols()).expect("positive size").accepts(&ys)
}

/// Adjacent rows and adjacent columns ordered by pairwise lex constraints.
pub fn post_double_lex(model: &mut Model) -> Result<()> {
    for i in 1..model.n_rows() {
        model.post(LexLeq::labelled(model.row_vars(i - 1), model.row_vars(i), "lex_rows"))?;
    }
    for j in 1..model.n_cols() {
        model.post(LexLeq::labelled(model.col_vars(j - 1), model.col_vars(j), "lex_cols"))?;
    }
    Ok(())
}

fn post_snake(model: &mut Model, lines: Vec<Vec<VarId>>, cross: Vec<Vec<VarId>>) -> Result<()> {
    for (j, k, forward) in snake_pairs(lines.len()) {
        let (mut a, mut b) = (lines[j].clone(), lines[k].clone());
        if !forward {
            a.reverse();
            b.reverse();
        }
        model.post(LexLeq::labelled(a, b, "snake_lines"))?;
    }
    for w in cross.windows(2) {
        let (u, v) = (&w[0], &w[1]);
        let a = (0..u.len()).map(|k| if k % 2 == 0 { u[k] } else { v[k] }).collect();
        let b = (0..u.len()).map(|k| if k % 2 == 0 { v[k] } else { u[k] }).collect();
        model.post(LexLeq::labelled(a, b, "entwined"))?;
    }
    Ok(())
}

pub fn post_snakelex_c(model: &mut Model) -> Result<()> {
    let cols = (0..model.n_cols()).map(|j| model.col_vars(j)).collect();
    let rows = (0..model.n_rows()).map(|i| model.row_vars(i)).collect();
    post_snake(model, cols, rows)
}

pub fn post_snakelex_r(model: &mut Model) -> Result<()> {
    let cols = (0..model.n_cols()).map(|j| model.col_vars(j)).collect();
    let rows = (0..model.n_rows()).map(|i| model.row_vars(i)).collect();
    post_snake(model, rows, cols)
}

/// Complete row-wise lex-leader test on full assignments, plus the implied
/// DoubleLex constraints for pruning.
pub fn post_row_wise_lex(model: &mut Model) -> Result<()> {
    if model.n_rows() > DEFAULT_ROW_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "lex-leader checks on {} rows exceed the limit of {DEFAULT_ROW_LIMIT}; transpose the model",
            model.n_rows()
        )));
    }
    let (n, m) = (model.n_rows(), model.n_cols());
    let leader = CheckOnly::new("lex_leader", model.grid_vars(), move |cells| {
        is_lex_leader(&Matrix::new(n, m, cells.to_vec()).expect("grid shape")).expect("row limit checked")
    });
    model.post(leader)?;
    post_double_lex(model)
}

/// `X11 < X21 < ... < Xn1`, `X11 < X12 < ... < X1m` and `X11 < Xij` for
/// the remaining cells.
pub fn post_order_1st_row_col(model: &mut Model) -> Result<()> {
    if !model.meta.all_different {
        return Err(Error::invalid(format!(
            "first row/column ordering is only complete on all-different models; {:?} is not one",
            model.meta.name
        )));
    }
    let (n, m) = (model.n_rows(), model.n_cols());
    for i in 1..n {
        model.post(Less::new(model.cell(i - 1, 0), model.cell(i, 0)))?;
    }
    for j in 1..m {
        model.post(Less::new(model.cell(0, j - 1), model.cell(0, j)))?;
    }
    for i in 1..n {
        for j in 1..m {
            model.post(Less::new(model.cell(0, 0), model.cell(i, j)))?;
        }
    }
    Ok(())
}

/// One row automaton per row, channeling the row into a position variable
/// `Y_i`, and one automaton over `Y_1 .. Y_n`.
pub fn post_double_lex_col_sum(model: &mut Model) -> Result<()> {
    if !model.is_boolean() {
        return Err(Error::invalid(format!("column-sum ordering needs a 0/1 model; {:?} is not one", model.meta.name)));
    }
    let (n, m) = (model.n_rows(), model.n_cols());
    let row_dfa = Arc::new(build_row_function_dfa(m)?);
    let col_dfa = Arc::new(build_packed_col_sum_dfa(n, m)?);
    let positions = DomainSet::range(1, m as i32)?;
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let delim = model.add_aux(DomainSet::singleton(row_delimiter(m)));
        let y = model.add_aux(positions);
        let mut word = model.row_vars(i);
        word.push(delim);
        word.push(y);
        model.post(Regular::new(word, row_dfa.clone(), "row_position"))?;
        ys.push(y);
    }
    model.post(Regular::new(ys, col_dfa, "col_sums"))
}

/// Row and column symmetry-breaking method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SbKind {
    #[default]
    NoSb,
    RowWiseLex,
    DoubleLex,
    SnakeLexR,
    SnakeLexC,
    Order1stRowCol,
    DoubleLexColSum,
}

impl SbKind {
    pub const ALL: [SbKind; 7] = [
        SbKind::NoSb,
        SbKind::RowWiseLex,
        SbKind::DoubleLex,
        SbKind::SnakeLexR,
        SbKind::SnakeLexC,
        SbKind::Order1stRowCol,
        SbKind::DoubleLexColSum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SbKind::NoSb => "nosb",
            SbKind::RowWiseLex => "rowwiselex",
            SbKind::DoubleLex => "doublelex",
            SbKind::SnakeLexR => "snakelex_r",
            SbKind::SnakeLexC => "snakelex_c",
            SbKind::Order1stRowCol => "order1strowcol",
            SbKind::DoubleLexColSum => "dlexcolsum",
        }
    }

    /// Branching order following the method's linearization.
    pub fn var_order(self) -> VarOrder {
        match self {
            SbKind::SnakeLexR => VarOrder::SnakeRowWise,
            SbKind::SnakeLexC => VarOrder::SnakeColWise,
            _ => VarOrder::RowWise,
        }
    }

    /// Evaluates the method's checker on a complete matrix.
    pub fn check(self, m: &Matrix) -> Result<bool> {
        Ok(match self {
            SbKind::NoSb => true,
            SbKind::RowWiseLex => is_lex_leader(m)?,
            SbKind::DoubleLex => check_double_lex(m),
            SbKind::SnakeLexR => check_snakelex_r(m),
            SbKind::SnakeLexC => check_snakelex_c(m),
            SbKind::Order1stRowCol => check_order_1st_row_col(m),
            SbKind::DoubleLexColSum => check_double_lex_col_sum(m),
        })
    }

    pub fn post(self, model: &mut Model) -> Result<()> {
        match self {
            SbKind::NoSb => Ok(()),
            SbKind::RowWiseLex => post_row_wise_lex(model),
            SbKind::DoubleLex => post_double_lex(model),
            SbKind::SnakeLexR => post_snakelex_r(model),
            SbKind::SnakeLexC => post_snakelex_c(model),
            SbKind::Order1stRowCol => post_order_1st_row_col(model),
            SbKind::DoubleLexColSum => post_double_lex_col_sum(model),
        }
    }
}

impl fmt::Display for SbKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SbKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        SbKind::ALL.into_iter().find(|k| k.as_str() == key).ok_or_else(|| {
            let names: Vec<&str> = SbKind::ALL.iter().map(|k| k.as_str()).collect();
            Error::parse(format!("unknown symmetry breaking {s:?}; expected one of {}", names.join("|")))
        })
    }
}

/// Value symmetry-breaking method and the variable order it follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueSb {
    Precedence(VarOrder),
    Puget(VarOrder),
}

impl ValueSb {
    pub fn post(self, model: &mut Model) -> Result<()> {
        match self {
            ValueSb::Precedence(order) => post_value_precedence(model, order),
            ValueSb::Puget(order) => post_puget(model, order),
        }
    }
}

fn order_name(o: VarOrder) -> &'static str {
    match o {
        VarOrder::RowWise => "rowwise",
        VarOrder::ColWise => "colwise",
        VarOrder::SnakeRowWise => "snakerowwise",
        VarOrder::SnakeColWise => "snakecolwise",
    }
}

impl fmt::Display for ValueSb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSb::Precedence(o) => write!(f, "precedence:{}", order_name(*o)),
            ValueSb::Puget(o) => write!(f, "puget:{}", order_name(*o)),
        }
    }
}

impl FromStr for ValueSb {
    type Err = Error;

    /// `precedence:<order>` or `puget:<order>`; the order defaults to
    /// row-wise.
    fn from_str(s: &str) -> Result<Self> {
        let (method, order) = s.trim().split_once(':').unwrap_or((s.trim(), "rowwise"));
        let order: VarOrder = order.parse()?;
        match method.to_ascii_lowercase().as_str() {
            "precedence" => Ok(ValueSb::Precedence(order)),
            "puget" => Ok(ValueSb::Puget(order)),
            other => Err(Error::parse(format!("unknown value symmetry breaking {other:?}; expected precedence or puget"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SymBreakConfig {
    pub kind: SbKind,
    pub value: Option<ValueSb>,
}

impl SymBreakConfig {
    pub fn new(kind: SbKind) -> Self {
        SymBreakConfig { kind, value: None }
    }

    pub fn with_value(mut self, value: ValueSb) -> Self {
        self.value = Some(value);
        self
    }

    /// Posts the configured constraints on `model`.
    pub fn apply(&self, model: &mut Model) -> Result<()> {
        self.kind.post(model)?;
        if let Some(v) = self.value {
            v.post(model)?;
        }
        Ok(())
    }

    pub fn var_order(&self) -> VarOrder {
        self.kind.var_order()
    }
}

impl fmt::Display for SymBreakConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            None => write!(f, "{}", self.kind),
            Some(v) => write!(f, "{}+{}", self.kind, v),
        }
    }
}

impl FromStr for SymBreakConfig {
    type Err = Error;

    /// `<kind>` or `<kind>+<value method>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('+') {
            None => Ok(SymBreakConfig::new(s.parse()?)),
            Some((k, v)) => Ok(SymBreakConfig::new(k.parse()?).with_value(v.parse()?)),
        }
    }
}

#[cfg(test)]
mod tests;

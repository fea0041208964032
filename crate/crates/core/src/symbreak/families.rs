//! Explicit families of symmetric solutions that survive incomplete
//! symmetry breaking, and a small instance where variable and value
//! symmetry breaking conflict.

use crate::domain::DomainSet;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Permutation};
use crate::model::{Metadata, Model, VarGrid};
use crate::propagators::{AllDifferent, CheckOnly, Count};

const MAX_WITNESS_ORDER: usize = 8;

/// The `2n x 2n` 0/1 model with `3n` ones and one or two ones per row and
/// column, together with its `n!` solutions `[[0, J], [J, P]]` (`J` the
/// anti-diagonal identity, `P` any permutation matrix), all lex ordered in
/// both dimensions and all in one symmetry class.
pub fn doublelex_witnesses(n: usize) -> Result<(Model, Vec<Matrix>)> {
    if n < 2 {
        return Err(Error::invalid(format!("witness family needs n >= 2, got {n}")));
    }
    if n > MAX_WITNESS_ORDER {
        return Err(Error::ResourceLimit(format!("{n}! witnesses exceed the limit of order {MAX_WITNESS_ORDER}")));
    }
    let size = 2 * n;
    let mut model = Model::new(VarGrid::new(size, size, DomainSet::range(0, 1)?)?).with_meta(Metadata {
        name: "doublelex_witness".into(),
        params: format!("n={n}"),
        ..Metadata::default()
    });
    model.post(Count::exactly(model.grid_vars(), 1, 3 * n))?;
    for k in 0..size {
        model.post(Count::between(model.row_vars(k), 1, 1, 2))?;
        model.post(Count::between(model.col_vars(k), 1, 1, 2))?;
    }
    let witnesses = Permutation::all(n)
        .iter()
        .map(|p| {
            let mut m = Matrix::filled(size, size, 0).expect("positive size");
            for i in 0..n {
                m.set(i, size - 1 - i, 1);
                m.set(n + i, n - 1 - i, 1);
                m.set(n + i, n + p.apply(i), 1);
            }
            m
        })
        .collect();
    Ok((model, witnesses))
}

/// The `2n x 2n` snake permutation matrix extended by each of the
/// `(2n choose n)` columns with exactly `n` ones, in lex order of the
/// extra column read top to bottom.
pub fn snakelex_witnesses(n: usize) -> Result<Vec<Matrix>> {
    if n < 2 {
        return Err(Error::invalid(format!("witness family needs n >= 2, got {n}")));
    }
    if n > MAX_WITNESS_ORDER {
        return Err(Error::ResourceLimit(format!("order {n} exceeds the limit of {MAX_WITNESS_ORDER}")));
    }
    let size = 2 * n;
    let mut base = Matrix::filled(size, size + 1, 0)?;
    for r in 0..n {
        base.set(r, 2 * r + 1, 1);
        base.set(n + r, 2 * (n - 1 - r), 1);
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << size {
        if mask.count_ones() as usize != n {
            continue;
        }
        let mut m = base.clone();
        for i in 0..size {
            m.set(i, size, (mask >> (size - 1 - i) & 1) as i32);
        }
        out.push(m);
    }
    Ok(out)
}

/// Four variables over `1..=4`, all different, whose absolute neighbouring
/// differences are either all equal or not an arithmetic sequence.
/// Reversal and value inversion `v -> 5 - v` are symmetries.
pub fn puget_conflict_instance() -> Model {
    let mut model = Model::new(VarGrid::new(1, 4, DomainSet::range(1, 4).expect("small range")).expect("1x4"))
        .with_meta(Metadata {
            name: "reflect_invert".into(),
            params: String::new(),
            all_different: true,
            surjective: true,
            value_groups: Vec::new(),
        });
    let vars = model.grid_vars();
    model.post(AllDifferent::new(vars.clone())).expect("grid vars");
    model
        .post(CheckOnly::new("differences", vars, |x| {
            let d: Vec<i32> = x.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            let all_equal = d.windows(2).all(|w| w[0] == w[1]);
            let arithmetic = d.windows(3).all(|w| w[1] - w[0] == w[2] - w[1]);
            all_equal || !arithmetic
        }))
        .expect("grid vars");
    model
}

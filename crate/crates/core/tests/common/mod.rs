//! Brute-force helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use symbreak::{Constraint, DomainSet, Matrix, Permutation, Store};

/// Every `n x m` matrix over `0..d`, in lex order of the cells.
pub fn all_matrices(n: usize, m: usize, d: i32) -> impl Iterator<Item = Matrix> {
    let cells = n * m;
    (0..(d as usize).pow(cells as u32)).map(move |mut code| {
        let mut v = vec![0; cells];
        for c in v.iter_mut().rev() {
            *c = (code % d as usize) as i32;
            code /= d as usize;
        }
        Matrix::new(n, m, v).unwrap()
    })
}

/// Every `n x m` 0/1 matrix with exactly one 1 per row.
pub fn function_matrices(n: usize, m: usize) -> Vec<Matrix> {
    (0..m.pow(n as u32))
        .map(|mut code| {
            let mut cells = vec![0; n * m];
            for i in 0..n {
                cells[i * m + code % m] = 1;
                code /= m;
            }
            Matrix::new(n, m, cells).unwrap()
        })
        .collect()
}

/// Smallest image of `m` over all explicit row and column permutations.
pub fn orbit_min(m: &Matrix) -> Matrix {
    let rows = Permutation::all(m.n_rows());
    let cols = Permutation::all(m.n_cols());
    rows.iter()
        .flat_map(|r| cols.iter().map(move |c| m.permute(r, c).unwrap()))
        .min()
        .unwrap()
}

/// The whole orbit of `m`.
pub fn orbit(m: &Matrix) -> BTreeSet<Matrix> {
    let rows = Permutation::all(m.n_rows());
    let cols = Permutation::all(m.n_cols());
    rows.iter().flat_map(|r| cols.iter().map(move |c| m.permute(r, c).unwrap())).collect()
}

/// For each scope position, the values that extend to a full assignment of
/// the scope accepted by `check`. `None` if there is no such assignment.
pub fn supports(c: &dyn Constraint, store: &Store) -> Option<Vec<DomainSet>> {
    let scope = c.scope().to_vec();
    let doms: Vec<Vec<i32>> = scope.iter().map(|&x| store.dom(x).to_vec()).collect();
    if doms.iter().any(Vec::is_empty) {
        return None;
    }
    let mut assignment = vec![0; store.len()];
    let mut seen: Vec<BTreeSet<i32>> = vec![BTreeSet::new(); scope.len()];
    let mut idx = vec![0usize; scope.len()];
    let mut any = false;
    'outer: loop {
        for (k, &x) in scope.iter().enumerate() {
            assignment[x.index()] = doms[k][idx[k]];
        }
        if c.check(&assignment) {
            any = true;
            for k in 0..scope.len() {
                seen[k].insert(doms[k][idx[k]]);
            }
        }
        for k in 0..scope.len() {
            idx[k] += 1;
            if idx[k] < doms[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    any.then(|| seen.into_iter().map(|s| DomainSet::from_values(s).unwrap()).collect())
}

/// Runs `c`'s filter to its own fixpoint; false on wipeout.
pub fn fixpoint(c: &dyn Constraint, store: &mut Store) -> bool {
    loop {
        match c.filter(store) {
            Err(_) => return false,
            Ok(false) => return true,
            Ok(true) => {}
        }
    }
}

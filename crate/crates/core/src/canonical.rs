//! Exact row and column symmetry handling.
//!
//! The canonical form of a matrix is the member of its row x column orbit
//! with the smallest row-wise linearization. For a fixed row permutation the
//! best column permutation is obtained by sorting the columns, so only the
//! `n!` row permutations need to be explored. They are enumerated in
//! lexicographic order as a branch-and-bound: after each placed row the
//! columns are refined by the new row's values, which fixes that row of the
//! candidate, and a branch is abandoned as soon as its prefix exceeds the
//! best image found so far.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Row count above which canonicalization refuses to run by default.
pub const DEFAULT_ROW_LIMIT: usize = 8;

/// Sorts the columns of `m` into lex non-decreasing order (stable).
pub fn min_col_permutation(m: &Matrix) -> Matrix {
    let mut cols: Vec<Vec<i32>> = (0..m.n_cols()).map(|j| m.col(j)).collect();
    cols.sort();
    let cells = (0..m.n_rows()).flat_map(|i| cols.iter().map(move |c| c[i])).collect();
    Matrix::new(m.n_rows(), m.n_cols(), cells).expect("same shape")
}

fn check_limit(m: &Matrix, limit: usize) -> Result<()> {
    if m.n_rows() > limit {
        Err(Error::ResourceLimit(format!(
            "canonicalizing a {}x{} matrix enumerates {}! row permutations, above the limit of {limit} rows; \
             canonicalize the transpose instead",
            m.n_rows(),
            m.n_cols(),
            m.n_rows()
        )))
    } else {
        Ok(())
    }
}

/// Lex-least member of the row x column orbit of `m`.
pub fn canonical_form(m: &Matrix) -> Result<Matrix> {
    canonical_form_with_limit(m, DEFAULT_ROW_LIMIT)
}

pub fn canonical_form_with_limit(m: &Matrix, row_limit: usize) -> Result<Matrix> {
    check_limit(m, row_limit)?;
    let start = min_col_permutation(m);
    let mut bb = BranchAndBound::new(m, start.cells().to_vec(), Goal::Minimize);
    bb.run();
    Matrix::new(m.n_rows(), m.n_cols(), bb.best)
}

/// True iff `m` is its own canonical form. Stops at the first row
/// permutation whose column-sorted image is strictly smaller.
pub fn is_lex_leader(m: &Matrix) -> Result<bool> {
    is_lex_leader_with_limit(m, DEFAULT_ROW_LIMIT)
}

pub fn is_lex_leader_with_limit(m: &Matrix, row_limit: usize) -> Result<bool> {
    check_limit(m, row_limit)?;
    let mut bb = BranchAndBound::new(m, m.cells().to_vec(), Goal::FindSmaller);
    bb.run();
    Ok(!bb.found_smaller)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Minimize,
    FindSmaller,
}

struct BranchAndBound<'a> {
    m: &'a Matrix,
    goal: Goal,
    best: Vec<i32>,
    cand: Vec<i32>,
    used: Vec<bool>,
    found_smaller: bool,
}

impl<'a> BranchAndBound<'a> {
    fn new(m: &'a Matrix, best: Vec<i32>, goal: Goal) -> Self {
        BranchAndBound {
            m,
            goal,
            best,
            cand: vec![0; m.n_rows() * m.n_cols()],
            used: vec![false; m.n_rows()],
            found_smaller: false,
        }
    }

    fn run(&mut self) {
        let k = self.m.n_cols();
        let order: Vec<usize> = (0..k).collect();
        let mut starts = vec![false; k];
        starts[0] = true;
        self.place(0, &order, &starts);
    }

    /// `order` lists the columns in candidate order; `starts[p]` marks the
    /// first position of each block of columns that agree on all placed rows.
    fn place(&mut self, depth: usize, order: &[usize], starts: &[bool]) -> bool {
        let n = self.m.n_rows();
        let k = self.m.n_cols();
        if depth == n {
            if self.goal == Goal::Minimize && self.cand < self.best {
                self.best.copy_from_slice(&self.cand);
            }
            return false;
        }
        let mut tried: Vec<&[i32]> = Vec::new();
        let mut next_order = order.to_vec();
        let mut next_starts = vec![false; k];
        for r in 0..n {
            if self.used[r] {
                continue;
            }
            let row = self.m.row(r);
            if tried.contains(&row) {
                continue;
            }
            tried.push(row);

            next_order.copy_from_slice(order);
            let mut s = 0;
            while s < k {
                let mut e = s + 1;
                while e < k && !starts[e] {
                    e += 1;
                }
                next_order[s..e].sort_by_key(|&c| row[c]);
                next_starts[s] = true;
                for p in s + 1..e {
                    next_starts[p] = row[next_order[p]] != row[next_order[p - 1]];
                }
                s = e;
            }
            let base = depth * k;
            for (p, &c) in next_order.iter().enumerate() {
                self.cand[base + p] = row[c];
            }

            let prefix = base + k;
            match self.cand[..prefix].cmp(&self.best[..prefix]) {
                Ordering::Greater => continue,
                Ordering::Less if self.goal == Goal::FindSmaller => {
                    self.found_smaller = true;
                    return true;
                }
                _ => {}
            }

            self.used[r] = true;
            let stop = self.place(depth + 1, &next_order.clone(), &next_starts.clone());
            self.used[r] = false;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Which linearization the class keys are taken under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CanonAxis {
    /// Canonical form of the matrix itself (row permutations enumerated).
    #[default]
    Rows,
    /// Canonical form of the transpose, transposed back. Enumerates column
    /// permutations instead; gives the same partition into classes.
    Cols,
    /// `Cols` when the matrices have more rows than columns, else `Rows`.
    Auto,
}

/// Class key of `m` under `axis`.
pub fn class_key(m: &Matrix, axis: CanonAxis, row_limit: usize) -> Result<Matrix> {
    let use_cols = match axis {
        CanonAxis::Rows => false,
        CanonAxis::Cols => true,
        CanonAxis::Auto => m.n_rows() > m.n_cols(),
    };
    if use_cols {
        Ok(canonical_form_with_limit(&m.transpose(), row_limit)?.transpose())
    } else {
        canonical_form_with_limit(m, row_limit)
    }
}

/// Solutions grouped by row x column symmetry class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassReport {
    pub classes: BTreeMap<Matrix, Vec<Matrix>>,
    pub n_solutions: usize,
    pub n_classes: usize,
}

/// Groups `solutions` by canonical form.
pub fn classify(solutions: &[Matrix]) -> Result<ClassReport> {
    classify_with(solutions, CanonAxis::Rows, DEFAULT_ROW_LIMIT)
}

pub fn classify_with(solutions: &[Matrix], axis: CanonAxis, row_limit: usize) -> Result<ClassReport> {
    if let Some(first) = solutions.first() {
        if let Some(bad) = solutions.iter().find(|s| s.n_rows() != first.n_rows() || s.n_cols() != first.n_cols()) {
            return Err(Error::invalid(format!(
                "cannot classify a {}x{} matrix together with {}x{} ones",
                bad.n_rows(),
                bad.n_cols(),
                first.n_rows(),
                first.n_cols()
            )));
        }
    }
    let keys: Vec<Matrix> = solutions.par_iter().map(|s| class_key(s, axis, row_limit)).collect::<Result<_>>()?;
    let mut classes: BTreeMap<Matrix, Vec<Matrix>> = BTreeMap::new();
    for (key, s) in keys.into_iter().zip(solutions) {
        classes.entry(key).or_default().push(s.clone());
    }
    Ok(ClassReport { n_solutions: solutions.len(), n_classes: classes.len(), classes })
}

/// Streaming counterpart of [`classify_with`] that keeps only the keys.
#[derive(Clone, Debug)]
pub struct ClassCounter {
    axis: CanonAxis,
    row_limit: usize,
    keys: std::collections::HashSet<Matrix>,
    pending: Vec<Matrix>,
    n_solutions: usize,
}

impl ClassCounter {
    const BATCH: usize = 4096;

    pub fn new(axis: CanonAxis, row_limit: usize) -> Self {
        ClassCounter { axis, row_limit, keys: Default::default(), pending: Vec::new(), n_solutions: 0 }
    }

    pub fn push(&mut self, m: Matrix) -> Result<()> {
        self.pending.push(m);
        self.n_solutions += 1;
        if self.pending.len() >= Self::BATCH {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let (axis, limit) = (self.axis, self.row_limit);
        let keys: Vec<Matrix> = self.pending.par_iter().map(|s| class_key(s, axis, limit)).collect::<Result<_>>()?;
        self.keys.extend(keys);
        self.pending.clear();
        Ok(())
    }

    /// `(n_solutions, n_classes)`.
    pub fn finish(mut self) -> Result<(usize, usize)> {
        self.flush()?;
        Ok((self.n_solutions, self.keys.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Permutation;
    use proptest::prelude::*;

    /// Minimum over every explicit (row, column) permutation pair.
    fn brute_force_min(m: &Matrix) -> Matrix {
        let rows = Permutation::all(m.n_rows());
        let cols = Permutation::all(m.n_cols());
        rows.iter()
            .flat_map(|s| cols.iter().map(move |p| m.permute(s, p).unwrap()))
            .min_by(|a, b| a.cells().cmp(b.cells()))
            .unwrap()
    }

    fn all_matrices(n: usize, k: usize, d: i32) -> impl Iterator<Item = Matrix> {
        let cells = n * k;
        let total = (d as usize).pow(cells as u32);
        (0..total).map(move |mut code| {
            let mut v = vec![0; cells];
            for c in v.iter_mut().rev() {
                *c = (code % d as usize) as i32;
                code /= d as usize;
            }
            Matrix::new(n, k, v).unwrap()
        })
    }

    fn efpa() -> [Matrix; 3] {
        let a = Matrix::from_rows(&[
            [0, 2, 1, 2, 0, 1],
            [0, 2, 2, 1, 1, 0],
            [0, 1, 0, 2, 1, 2],
            [0, 0, 1, 1, 2, 2],
        ]);
        let b = Matrix::from_rows(&[
            [0, 0, 1, 1, 2, 2],
            [0, 1, 0, 2, 1, 2],
            [0, 2, 1, 2, 0, 1],
            [0, 2, 2, 1, 1, 0],
        ]);
        let c = Matrix::from_rows(&[
            [0, 0, 1, 1, 2, 2],
            [0, 1, 0, 2, 1, 2],
            [0, 1, 2, 0, 2, 1],
            [0, 2, 2, 1, 1, 0],
        ]);
        [a, b, c]
    }

    #[test]
    fn column_sort_examples() {
        let sorted = Matrix::from_rows(&[[0, 1, 1], [2, 0, 1]]);
        assert_eq!(min_col_permutation(&sorted), sorted);
        let [a, _, c] = efpa();
        assert_eq!(min_col_permutation(&a), c);
        assert_eq!(min_col_permutation(&Matrix::from_rows(&[[1, 0], [0, 1]])), Matrix::from_rows(&[[0, 1], [1, 0]]));
    }

    #[test]
    fn efpa_solutions_share_a_class() {
        let [a, b, c] = efpa();
        let ka = canonical_form(&a).unwrap();
        assert_eq!(ka, canonical_form(&b).unwrap());
        assert_eq!(ka, canonical_form(&c).unwrap());
        assert!(!is_lex_leader(&a).unwrap());
        assert!(!is_lex_leader(&b).unwrap());
        assert_eq!(ka, brute_force_min(&a));
    }

    #[test]
    fn leader_examples() {
        assert!(is_lex_leader(&Matrix::filled(3, 4, 7).unwrap()).unwrap());
        assert!(is_lex_leader(&Matrix::from_rows(&[[0, 2, 3], [4, 8, 5], [7, 6, 1]])).unwrap());
        assert!(is_lex_leader(&Matrix::from_rows(&[[0, 2, 3], [4, 1, 5], [7, 6, 8]])).unwrap());
    }

    #[test]
    fn row_limit_is_explicit() {
        let tall = Matrix::filled(9, 2, 0).unwrap();
        assert!(matches!(canonical_form(&tall), Err(Error::ResourceLimit(_))));
        assert!(matches!(is_lex_leader(&tall), Err(Error::ResourceLimit(_))));
        assert!(class_key(&tall, CanonAxis::Auto, DEFAULT_ROW_LIMIT).is_ok());
        assert!(canonical_form_with_limit(&tall, 9).is_ok());
    }

    #[test]
    fn classify_examples() {
        let empty = classify(&[]).unwrap();
        assert_eq!((empty.n_solutions, empty.n_classes), (0, 0));

        let all: Vec<Matrix> = all_matrices(3, 3, 2).collect();
        let report = classify(&all).unwrap();
        assert_eq!(report.n_solutions, 512);
        assert_eq!(report.n_classes, 36);
        assert_eq!(report.classes.values().map(Vec::len).sum::<usize>(), 512);
        for (key, members) in &report.classes {
            assert!(members.iter().all(|m| &canonical_form(m).unwrap() == key));
            assert_eq!(members.iter().filter(|m| is_lex_leader(m).unwrap()).count(), 1);
        }

        let bad = [Matrix::filled(2, 2, 0).unwrap(), Matrix::filled(2, 3, 0).unwrap()];
        assert!(matches!(classify(&bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn transposed_keys_give_the_same_partition() {
        let all: Vec<Matrix> = all_matrices(2, 3, 2).collect();
        let by_rows = classify_with(&all, CanonAxis::Rows, 8).unwrap();
        let by_cols = classify_with(&all, CanonAxis::Cols, 8).unwrap();
        assert_eq!(by_rows.n_classes, by_cols.n_classes);
        let mut a: Vec<Vec<Matrix>> = by_rows.classes.into_values().map(|mut v| { v.sort(); v }).collect();
        let mut b: Vec<Vec<Matrix>> = by_cols.classes.into_values().map(|mut v| { v.sort(); v }).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn counter_matches_classify() {
        let all: Vec<Matrix> = all_matrices(3, 3, 2).collect();
        let mut counter = ClassCounter::new(CanonAxis::Rows, 8);
        for m in &all {
            counter.push(m.clone()).unwrap();
        }
        assert_eq!(counter.finish().unwrap(), (512, 36));
    }

    #[test]
    fn oracle_on_small_ternary_matrices() {
        for m in all_matrices(2, 3, 3) {
            assert_eq!(canonical_form(&m).unwrap(), brute_force_min(&m), "{m:?}");
        }
    }

    /// Orbit under row and column permutations composed with the value maps in `thetas`.
    fn orbit(m: &Matrix, thetas: &[BTreeMap<i32, i32>]) -> std::collections::BTreeSet<Matrix> {
        let rows = Permutation::all(m.n_rows());
        let cols = Permutation::all(m.n_cols());
        let mut out = std::collections::BTreeSet::new();
        for t in thetas {
            let mt = m.map_values(t).unwrap();
            for s in &rows {
                for p in &cols {
                    out.insert(mt.permute(s, p).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn averages_pair_orbit_membership() {
        // Two leaders of the 3x3 "distinct non-zero averages" problem whose
        // value symmetry is i -> 9 - i for i > 0.
        let first = Matrix::from_rows(&[[0, 2, 3], [4, 8, 5], [7, 6, 1]]);
        let second = Matrix::from_rows(&[[0, 2, 3], [4, 1, 5], [7, 6, 8]]);
        let identity: BTreeMap<i32, i32> = (0..9).map(|v| (v, v)).collect();
        let inversion: BTreeMap<i32, i32> = (0..9).map(|v| (v, if v == 0 { 0 } else { 9 - v })).collect();
        let class = orbit(&first, &[identity, inversion]);
        let same_class = class.contains(&second);
        println!("averages fixture: second matrix in the first one's row/column/value orbit: {same_class}");
        // Brute force over all 72 group elements: the two matrices do not
        // share an orbit (their multisets of row contents already differ).
        assert!(!same_class);
        assert_eq!(class.len(), 72);
    }

    proptest! {
        #[test]
        fn idempotent(cells in proptest::collection::vec(0..3i32, 12)) {
            let m = Matrix::new(3, 4, cells).unwrap();
            let c = canonical_form(&m).unwrap();
            prop_assert_eq!(canonical_form(&c).unwrap(), c.clone());
            prop_assert!(is_lex_leader(&c).unwrap());
            prop_assert_eq!(is_lex_leader(&m).unwrap(), c == m);
        }

        #[test]
        fn matches_brute_force_binary(cells in proptest::collection::vec(0..2i32, 9)) {
            let m = Matrix::new(3, 3, cells).unwrap();
            prop_assert_eq!(canonical_form(&m).unwrap(), brute_force_min(&m));
        }

        #[test]
        fn invariant_under_permutation(
            cells in proptest::collection::vec(0..3i32, 12),
            s in Just(vec![0usize, 1, 2]).prop_shuffle(),
            p in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        ) {
            let m = Matrix::new(3, 4, cells).unwrap();
            let moved = m.permute(&Permutation::new(s).unwrap(), &Permutation::new(p).unwrap()).unwrap();
            prop_assert_eq!(canonical_form(&moved).unwrap(), canonical_form(&m).unwrap());
        }
    }
}

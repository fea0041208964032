//! Brute-force support computation used by the unit tests.

use crate::domain::DomainSet;
use crate::model::{Constraint, Store};

/// Domains restricted to values that appear in some satisfying assignment
/// of `c`'s scope, found by enumerating every assignment. `None` when no
/// assignment satisfies the constraint.
pub fn supported(c: &dyn Constraint, store: &Store) -> Option<Vec<DomainSet>> {
    let scope = c.scope();
    let doms: Vec<Vec<i32>> = scope.iter().map(|&x| store.dom(x).to_vec()).collect();
    let mut assignment: Vec<i32> = store.domains().iter().map(|d| d.min().unwrap_or(0)).collect();
    let mut keep: Vec<Vec<i32>> = vec![Vec::new(); scope.len()];
    let mut idx = vec![0usize; scope.len()];
    if doms.iter().any(Vec::is_empty) {
        return None;
    }
    let mut any = false;
    loop {
        for (k, &x) in scope.iter().enumerate() {
            assignment[x.0] = doms[k][idx[k]];
        }
        // a variable repeated in the scope must be read consistently
        let consistent = scope.iter().enumerate().all(|(k, &x)| assignment[x.0] == doms[k][idx[k]]);
        if consistent && c.check(&assignment) {
            any = true;
            for (k, _) in scope.iter().enumerate() {
                keep[k].push(doms[k][idx[k]]);
            }
        }
        let mut k = 0;
        loop {
            if k == scope.len() {
                return any.then(|| {
                    let mut out: Vec<DomainSet> = store.domains().to_vec();
                    for (k, &x) in scope.iter().enumerate() {
                        out[x.0] = DomainSet::from_values(keep[k].iter().copied()).unwrap();
                    }
                    out
                });
            }
            idx[k] += 1;
            if idx[k] < doms[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Runs `c`'s filter to its own fixpoint.
pub fn filter_fixpoint(c: &dyn Constraint, store: &mut Store) -> bool {
    loop {
        match c.filter(store) {
            Err(_) => return false,
            Ok(false) => return true,
            Ok(true) => {}
        }
    }
}

/// Asserts soundness, and completeness for domain-consistent filters.
pub fn assert_filter_against_oracle(c: &dyn Constraint, store: &Store) {
    let expected = supported(c, store);
    let mut filtered = store.clone();
    let ok = filter_fixpoint(c, &mut filtered);
    match expected {
        None => {
            if ok {
                assert!(
                    c.strength() < crate::model::Strength::DomainConsistent,
                    "{} is declared DC but did not fail on an unsatisfiable store {:?}",
                    c.name(),
                    store.domains()
                );
            }
        }
        Some(exp) => {
            assert!(ok, "{} failed although supports exist: {:?}", c.name(), store.domains());
            for &x in c.scope() {
                let got = filtered.dom(x);
                let want = &exp[x.0];
                assert!(
                    want.iter().all(|v| got.contains(v)),
                    "{} removed a supported value of var {}: had {:?}, kept {:?}, supported {:?}",
                    c.name(),
                    x.0,
                    store.dom(x),
                    got,
                    want
                );
                if c.strength() == crate::model::Strength::DomainConsistent {
                    assert_eq!(got, want, "{} is declared DC but kept unsupported values of var {} from {:?}", c.name(), x.0, store.domains());
                }
            }
        }
    }
}

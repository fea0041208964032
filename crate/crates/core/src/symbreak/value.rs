//! Value symmetry breaking: precedence and first-occurrence channeling.

use crate::domain::DomainSet;
use crate::error::{Error, Result};
use crate::model::{Constraint, FilterResult, Model, Store, Strength, VarId, Wipeout};
use crate::propagators::Less;
use crate::search::VarOrder;

/// True iff `j` does not occur in `seq` before the first occurrence of `i`.
pub fn check_value_precedence(seq: &[i32], i: i32, j: i32) -> bool {
    match (seq.iter().position(|&v| v == i), seq.iter().position(|&v| v == j)) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a < b,
    }
}

/// Value `i` precedes value `j` along `vars`.
#[derive(Debug, Clone)]
pub struct Precedence {
    vars: Vec<VarId>,
    i: i32,
    j: i32,
}

impl Precedence {
    pub fn new(vars: Vec<VarId>, i: i32, j: i32) -> Self {
        Precedence { vars, i, j }
    }
}

impl Constraint for Precedence {
    fn name(&self) -> &str {
        "precedence"
    }

    fn scope(&self) -> &[VarId] {
        &self.vars
    }

    fn check(&self, a: &[i32]) -> bool {
        let seq: Vec<i32> = self.vars.iter().map(|x| a[x.0]).collect();
        check_value_precedence(&seq, self.i, self.j)
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let (i, j) = (self.i, self.j);
        let first_i = self.vars.iter().position(|&x| s.contains(x, i)).unwrap_or(self.vars.len());
        let mut changed = false;
        for &x in &self.vars[..(first_i + 1).min(self.vars.len())] {
            changed |= s.remove(x, j)?;
        }
        if let Some(f) = self.vars.iter().position(|&x| s.value(x) == Some(j)) {
            let mut candidates = self.vars[..f].iter().filter(|&&x| s.contains(x, i));
            match (candidates.next(), candidates.next()) {
                (None, _) => return Err(Wipeout),
                (Some(&x), None) => changed |= s.assign(x, i)?,
                _ => {}
            }
        }
        Ok(changed)
    }

    fn strength(&self) -> Strength {
        Strength::ForwardChecking
    }
}

/// `z` is the 1-based position of the first occurrence of `value` in `vars`.
#[derive(Debug, Clone)]
pub struct FirstOccurrence {
    vars: Vec<VarId>,
    value: i32,
    z: VarId,
    scope: Vec<VarId>,
}

impl FirstOccurrence {
    pub fn new(vars: Vec<VarId>, value: i32, z: VarId) -> Self {
        let mut scope = vars.clone();
        scope.push(z);
        scope.sort_unstable();
        scope.dedup();
        FirstOccurrence { vars, value, z, scope }
    }
}

impl Constraint for FirstOccurrence {
    fn name(&self) -> &str {
        "first_occurrence"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn check(&self, a: &[i32]) -> bool {
        self.vars.iter().position(|x| a[x.0] == self.value).is_some_and(|p| a[self.z.0] == p as i32 + 1)
    }

    fn filter(&self, s: &mut Store) -> FilterResult {
        let (v, z) = (self.value, self.z);
        let n = self.vars.len() as i32;
        let mut changed = s.remove_below(z, 1)? | s.remove_above(z, n)?;
        let allowed: Vec<i32> = s.dom(z).iter().filter(|&p| s.contains(self.vars[(p - 1) as usize], v)).collect();
        changed |= s.restrict(z, DomainSet::from_values(allowed).expect("subset of a domain"))?;
        let lo = s.min(z);
        for &x in &self.vars[..(lo - 1) as usize] {
            changed |= s.remove(x, v)?;
        }
        if let Some(f) = self.vars.iter().position(|&x| s.value(x) == Some(v)) {
            changed |= s.remove_above(z, f as i32 + 1)?;
        }
        if let Some(p) = s.value(z) {
            changed |= s.assign(self.vars[(p - 1) as usize], v)?;
        }
        Ok(changed)
    }

    fn strength(&self) -> Strength {
        Strength::ForwardChecking
    }
}

fn ordered_vars(model: &Model, order: VarOrder) -> Vec<VarId> {
    order.cells(model.n_rows(), model.n_cols()).into_iter().map(|(i, j)| model.cell(i, j)).collect()
}

fn value_groups(model: &Model) -> Result<Vec<Vec<i32>>> {
    let groups: Vec<Vec<i32>> = model
        .meta
        .value_groups
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.sort_unstable();
            g.dedup();
            g
        })
        .filter(|g| g.len() > 1)
        .collect();
    if groups.is_empty() {
        return Err(Error::invalid(format!("model {:?} declares no interchangeable values", model.meta.name)));
    }
    Ok(groups)
}

/// Posts precedence between consecutive values of every interchangeable
/// group, along the grid visited in `order`.
pub fn post_value_precedence(model: &mut Model, order: VarOrder) -> Result<()> {
    let vars = ordered_vars(model, order);
    for g in value_groups(model)? {
        for w in g.windows(2) {
            model.post(Precedence::new(vars.clone(), w[0], w[1]))?;
        }
    }
    Ok(())
}

/// Adds one first-occurrence variable per value of `values`, over the
/// sequence `order`. Only valid on models where every value occurs.
pub fn puget_channel(model: &mut Model, values: &[i32], order: &[VarId]) -> Result<Vec<VarId>> {
    if !model.meta.surjective {
        return Err(Error::invalid(format!(
            "first-occurrence channeling needs every value to occur, which model {:?} does not declare",
            model.meta.name
        )));
    }
    let positions = DomainSet::range(1, order.len() as i32).map_err(|_| {
        Error::ResourceLimit(format!("first-occurrence variables over {} positions exceed the domain width", order.len()))
    })?;
    let mut zs = Vec::with_capacity(values.len());
    for &v in values {
        let z = model.add_aux(positions);
        model.post(FirstOccurrence::new(order.to_vec(), v, z))?;
        zs.push(z);
    }
    Ok(zs)
}

/// Channels every interchangeable group and orders the first occurrences.
pub fn post_puget(model: &mut Model, order: VarOrder) -> Result<()> {
    let vars = ordered_vars(model, order);
    for g in value_groups(model)? {
        let zs = puget_channel(model, &g, &vars)?;
        for w in zs.windows(2) {
            model.post(Less::new(w[0], w[1]))?;
        }
    }
    Ok(())
}

/// 1-based first-occurrence positions of `values` in `seq` (0 if absent).
pub fn first_occurrences(seq: &[i32], values: &[i32]) -> Vec<usize> {
    values.iter().map(|v| seq.iter().position(|x| x == v).map_or(0, |p| p + 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::assert_filter_against_oracle;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn precedence_examples() {
        assert!(check_value_precedence(&[0, 1, 2, 1], 1, 2));
        assert!(!check_value_precedence(&[0, 2, 1], 1, 2));
        assert!(!check_value_precedence(&[2, 2], 1, 2));
        assert!(check_value_precedence(&[0, 0], 1, 2));
        assert!(check_value_precedence(&[0, 0, 1, 1, 2, 2], 1, 2));
    }

    #[test]
    fn first_occurrence_examples() {
        assert_eq!(first_occurrences(&[2, 4, 1, 3], &[1, 2, 3, 4]), vec![3, 1, 4, 2]);
        assert_eq!(first_occurrences(&[1, 1, 2], &[1, 2]), vec![1, 3]);
    }

    fn random_store(rng: &mut StdRng, n: usize, lo: i32, hi: i32) -> Store {
        Store::new(
            (0..n)
                .map(|_| loop {
                    let d = DomainSet::from_values((lo..=hi).filter(|_| rng.random_bool(0.6))).unwrap();
                    if !d.is_empty() {
                        break d;
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn precedence_against_oracle() {
        let mut rng = StdRng::seed_from_u64(31);
        let vars: Vec<VarId> = (0..5).map(VarId).collect();
        for _ in 0..2000 {
            let s = random_store(&mut rng, 5, 0, 2);
            assert_filter_against_oracle(&Precedence::new(vars.clone(), 1, 2), &s);
        }
    }

    #[test]
    fn first_occurrence_against_oracle() {
        let mut rng = StdRng::seed_from_u64(32);
        let vars: Vec<VarId> = (0..4).map(VarId).collect();
        for _ in 0..2000 {
            let mut doms = random_store(&mut rng, 4, 0, 2).domains().to_vec();
            doms.extend_from_slice(random_store(&mut rng, 1, 0, 5).domains());
            assert_filter_against_oracle(&FirstOccurrence::new(vars.clone(), 1, VarId(4)), &Store::new(doms));
        }
    }
}

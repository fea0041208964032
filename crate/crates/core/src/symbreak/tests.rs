use super::*;
use crate::canonical::canonical_form;
use crate::search::{all_solutions, propagate, solve_all, SearchConfig};

fn grid(n: usize, m: usize, lo: i32, hi: i32) -> Model {
    Model::new(crate::model::VarGrid::new(n, m, DomainSet::range(lo, hi).unwrap()).unwrap())
}

fn count(kind: SbKind, n: usize, m: usize, d: i32) -> u64 {
    let mut model = grid(n, m, 0, d - 1);
    kind.post(&mut model).unwrap();
    solve_all(&model, &SearchConfig::new(kind.var_order()), |_| {}).n_solutions
}

fn all_matrices(n: usize, m: usize, d: i32) -> impl Iterator<Item = Matrix> {
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

fn efpa_b() -> Matrix {
    Matrix::from_rows(&[[0, 0, 1, 1, 2, 2], [0, 1, 0, 2, 1, 2], [0, 1, 2, 0, 2, 1], [0, 2, 1, 2, 0, 1]])
}

#[test]
fn double_lex_examples() {
    let a = Matrix::from_rows(&[[0, 0, 1, 1, 2, 2], [0, 1, 0, 2, 1, 2], [0, 2, 2, 1, 1, 0], [0, 1, 2, 0, 2, 1]]);
    let c = Matrix::from_rows(&[[0, 0, 1, 1, 2, 2], [0, 1, 0, 2, 1, 2], [0, 1, 2, 0, 2, 1], [0, 2, 2, 1, 1, 0]]);
    assert!(!check_double_lex(&a));
    assert!(check_double_lex(&efpa_b()));
    assert!(check_double_lex(&c));
    assert!(check_double_lex(&Matrix::filled(3, 2, 7).unwrap()));
}

#[test]
fn snake_checks() {
    let p = Matrix::from_rows(&[[0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [1, 0, 0, 0]]);
    assert!(check_snakelex_c(&p));
    assert!(check_snakelex_r(&p.transpose()));
    let constant = Matrix::filled(3, 4, 1).unwrap();
    assert!(check_snakelex_c(&constant) && check_snakelex_r(&constant));
    let pairs: Vec<(usize, usize, bool)> = snake_pairs(4).collect();
    assert_eq!(pairs, vec![(0, 1, true), (0, 2, true), (1, 2, false), (1, 3, false), (2, 3, true)]);
}

#[test]
fn small_unconstrained_counts() {
    assert_eq!(count(SbKind::NoSb, 3, 3, 2), 512);
    assert_eq!(count(SbKind::DoubleLex, 3, 3, 2), 45);
    assert_eq!(count(SbKind::SnakeLexC, 3, 3, 2), 44);
    assert_eq!(count(SbKind::SnakeLexR, 3, 3, 2), 44);
    assert_eq!(count(SbKind::RowWiseLex, 3, 3, 2), 36);
}

#[test]
fn posted_constraints_match_checkers() {
    for kind in [SbKind::DoubleLex, SbKind::SnakeLexC, SbKind::SnakeLexR, SbKind::RowWiseLex] {
        let mut model = grid(2, 3, 0, 2);
        kind.post(&mut model).unwrap();
        let (mut found, _) = all_solutions(&model, &SearchConfig::new(kind.var_order()));
        found.sort();
        let expected: Vec<Matrix> = all_matrices(2, 3, 3).filter(|m| kind.check(m).unwrap()).collect();
        assert_eq!(found, expected, "{kind}");
    }
}

#[test]
fn leaders_satisfy_double_lex() {
    for m in all_matrices(3, 3, 3) {
        if is_lex_leader(&m).unwrap() {
            assert!(check_double_lex(&m), "{m}");
        }
    }
}

#[test]
fn every_class_keeps_a_member() {
    let mut kept: std::collections::BTreeMap<Matrix, [bool; 3]> = Default::default();
    for m in all_matrices(3, 3, 2).chain(all_matrices(2, 4, 2)) {
        let key = canonical_form(&m).unwrap();
        let e = kept.entry(key).or_default();
        e[0] |= check_double_lex(&m);
        e[1] |= check_snakelex_c(&m);
        e[2] |= check_snakelex_r(&m);
    }
    assert!(kept.values().all(|k| k.iter().all(|&b| b)));
}

#[test]
fn decomposition_gap() {
    let ds = |v: &[i32]| DomainSet::from_values(v.iter().copied()).unwrap();
    let doms = vec![ds(&[0, 1]), ds(&[0, 1]), ds(&[1]), ds(&[0, 1]), ds(&[0]), ds(&[1]), ds(&[1]), ds(&[1]), ds(&[1])];
    let mut model = Model::new(crate::model::VarGrid::from_domains(3, 3, doms).unwrap());
    post_double_lex(&mut model).unwrap();
    let mut store = model.initial_store();
    propagate(&mut store, model.constraints()).unwrap();
    assert!(store.contains(model.cell(0, 0), 1));
    let (sols, stats) = all_solutions(&model, &SearchConfig::default());
    assert!(stats.complete && !sols.is_empty());
    assert!(sols.iter().all(|s| s.get(0, 0) == 0));
}

#[test]
fn order_1st_row_col() {
    let mut model = grid(2, 2, 1, 4);
    model.post(crate::propagators::AllDifferent::new(model.grid_vars())).unwrap();
    assert!(post_order_1st_row_col(&mut model).is_err());
    model.meta.all_different = true;
    post_order_1st_row_col(&mut model).unwrap();
    let (sols, _) = all_solutions(&model, &SearchConfig::default());
    assert!(!sols.is_empty());
    for s in &sols {
        assert_eq!(s.get(0, 0), 1);
        assert!(s.get(0, 0) < s.get(0, 1) && s.get(0, 0) < s.get(1, 0));
    }
    let mut model = grid(3, 3, 1, 9);
    model.post(crate::propagators::AllDifferent::new(model.grid_vars())).unwrap();
    model.meta.all_different = true;
    post_order_1st_row_col(&mut model).unwrap();
    let mut store = model.initial_store();
    propagate(&mut store, model.constraints()).unwrap();
    assert_eq!(store.value(model.cell(0, 0)), Some(1));
}

#[test]
fn col_sum_checker_examples() {
    let anti = Matrix::from_rows(&[[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
    assert!(check_double_lex_col_sum(&anti));
    let bad = Matrix::from_rows(&[[0, 1, 0], [0, 1, 0], [0, 0, 1]]);
    assert!(!check_double_lex_col_sum(&bad));
    assert!(post_double_lex_col_sum(&mut grid(2, 2, 0, 2)).is_err());
}

#[test]
fn function_matrices_leaders() {
    for n in 1..=3usize {
        for m in 1..=3usize {
            let mut model = grid(n, m, 0, 1);
            post_double_lex_col_sum(&mut model).unwrap();
            let (mut found, _) = all_solutions(&model, &SearchConfig::default());
            found.sort();
            let expected: Vec<Matrix> = all_matrices(n, m, 2)
                .filter(|x| x.rows().all(|r| r.iter().sum::<i32>() == 1) && is_lex_leader(x).unwrap())
                .collect();
            assert_eq!(found, expected, "{n}x{m}");
        }
    }
}

#[test]
fn doublelex_witness_family() {
    let (model, ws) = doublelex_witnesses(2).unwrap();
    assert_eq!(
        ws,
        vec![
            Matrix::from_rows(&[[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 1, 0], [1, 0, 0, 1]]),
            Matrix::from_rows(&[[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]]),
        ]
    );
    for n in 2..=3 {
        let (model, ws) = doublelex_witnesses(n).unwrap();
        assert_eq!(ws.len(), if n == 2 { 2 } else { 6 });
        let key = canonical_form(&ws[0]).unwrap();
        for w in &ws {
            assert!(model.satisfies_grid_constraints(w) && check_double_lex(w));
            assert_eq!(canonical_form(w).unwrap(), key);
        }
    }
    assert!(model.satisfies_grid_constraints(&ws[0]));
    assert!(doublelex_witnesses(1).is_err());
    assert!(matches!(doublelex_witnesses(20), Err(Error::ResourceLimit(_))));
}

#[test]
fn snakelex_witness_family() {
    let ws = snakelex_witnesses(2).unwrap();
    assert_eq!(ws.len(), 6);
    let listed = [[1, 1, 0, 0], [1, 0, 1, 0], [0, 1, 1, 0], [0, 0, 1, 1]];
    let key = canonical_form(&ws[0]).unwrap();
    for w in &ws {
        let extra = w.col(4);
        if listed.iter().any(|c| c[..] == extra[..]) {
            assert!(check_snakelex_c(w), "{w}");
        }
        assert_eq!(canonical_form(w).unwrap(), key);
    }
    assert_eq!(snakelex_witnesses(3).unwrap().len(), 20);
}

#[test]
fn puget_conflict() {
    let base = puget_conflict_instance();
    let sols = |m: &Model| all_solutions(m, &SearchConfig::default()).0;
    let all = sols(&base);
    let a = Matrix::from_rows(&[[2, 4, 1, 3]]);
    let b = Matrix::from_rows(&[[3, 1, 4, 2]]);
    assert!(all.contains(&a) && all.contains(&b));
    assert!(!all.contains(&Matrix::from_rows(&[[3, 2, 4, 1]])));
    assert!(all.contains(&Matrix::from_rows(&[[1, 2, 3, 4]])));

    let mut lex = base.clone();
    let xs = lex.grid_vars();
    lex.post(LexLeq::new(xs.clone(), xs.iter().rev().copied().collect())).unwrap();
    let kept = sols(&lex);
    assert_eq!([&a, &b].iter().filter(|m| kept.contains(m)).count(), 1);

    let zs = puget_channel(&mut lex, &[1, 4], &xs).unwrap();
    lex.post(Less::new(zs[0], zs[1])).unwrap();
    let kept = sols(&lex);
    assert!(!kept.contains(&a) && !kept.contains(&b));

    let mut open = grid(1, 3, 1, 2);
    assert!(puget_channel(&mut open, &[1, 2], &xs[..3]).is_err());
}

#[test]
fn config_round_trip() {
    for kind in SbKind::ALL {
        assert_eq!(kind.as_str().parse::<SbKind>().unwrap(), kind);
        let cfg = SymBreakConfig::new(kind).with_value(ValueSb::Puget(VarOrder::ColWise));
        assert_eq!(cfg.to_string().parse::<SymBreakConfig>().unwrap(), cfg);
    }
    assert_eq!("precedence".parse::<ValueSb>().unwrap(), ValueSb::Precedence(VarOrder::RowWise));
    assert!("lexish".parse::<SbKind>().is_err());
    assert!("precedence:diagonal".parse::<ValueSb>().is_err());
    assert!("doublelex+".parse::<SymBreakConfig>().is_err());
}

#[test]
fn value_precedence_is_safe_with_leaders() {
    // 0 fixed, 1 and 2 interchangeable
    let swap = |m: &Matrix| {
        let cells = m.cells().iter().map(|&v| match v { 1 => 2, 2 => 1, v => v }).collect();
        Matrix::new(m.n_rows(), m.n_cols(), cells).unwrap()
    };
    let mut survivors: std::collections::BTreeMap<Matrix, bool> = Default::default();
    for m in all_matrices(3, 3, 3) {
        let key = std::cmp::min(canonical_form(&m).unwrap(), canonical_form(&swap(&m)).unwrap());
        let ok = is_lex_leader(&m).unwrap() && check_value_precedence(m.cells(), 1, 2);
        *survivors.entry(key).or_default() |= ok;
    }
    assert!(survivors.values().all(|&b| b));
}

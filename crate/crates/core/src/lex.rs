//! Lexicographic comparisons of integer vectors.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

fn same_len(u: &[i32], v: &[i32]) -> Result<()> {
    if u.len() == v.len() {
        Ok(())
    } else {
        Err(Error::invalid(format!("comparing vectors of length {} and {}", u.len(), v.len())))
    }
}

/// `u <=_lex v`.
pub fn lex_leq(u: &[i32], v: &[i32]) -> Result<bool> {
    same_len(u, v)?;
    Ok(u.cmp(v) != Ordering::Greater)
}

/// `u <_lex v`.
pub fn lex_lt(u: &[i32], v: &[i32]) -> Result<bool> {
    same_len(u, v)?;
    Ok(u.cmp(v) == Ordering::Less)
}

/// `reverse(u) <=_lex reverse(v)`, without building the reversed vectors.
pub fn rev_lex_leq(u: &[i32], v: &[i32]) -> Result<bool> {
    same_len(u, v)?;
    Ok(u.iter().rev().cmp(v.iter().rev()) != Ordering::Greater)
}

/// Entwined ordering `<u0, v1, u2, v3, ...> <=_lex <v0, u1, v2, u3, ...>`.
pub fn entwined_lex_leq(u: &[i32], v: &[i32]) -> Result<bool> {
    same_len(u, v)?;
    for k in 0..u.len() {
        let (a, b) = if k % 2 == 0 { (u[k], v[k]) } else { (v[k], u[k]) };
        match a.cmp(&b) {
            Ordering::Less => return Ok(true),
            Ordering::Greater => return Ok(false),
            Ordering::Equal => {}
        }
    }
    Ok(true)
}

/// Rows appended in order.
pub fn linearize_row_wise(m: &Matrix) -> Vec<i32> {
    m.cells().to_vec()
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `t₁ | t₂ | … | tₙ` of a nondegenerate alternating form on `Z²ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryDivisors {
    pub t: Vec<u64>,
}

/// Diagonal of the Smith normal form of an integer matrix.
pub fn smith_diagonal(m: &[Vec<i64>]) -> Result<Vec<i128>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged integer matrix".into()));
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let k_max = rows.min(cols);
    let mut diag = Vec::with_capacity(k_max);
    for k in 0..k_max {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let pivot = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                diag.extend(std::iter::repeat_n(0, k_max - k));
                return Ok(diag);
            };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let p = a[k][k];
            let mut clean = true;
            for i in k + 1..rows {
                let q = a[i][k] / p;
                if q != 0 {
                    for j in k..cols {
                        a[i][j] -= q * a[k][j];
                    }
                }
                clean &= a[i][k] == 0;
            }
            for j in k + 1..cols {
                let q = a[k][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(k) {
                        row[j] -= q * row[k];
                    }
                }
                clean &= a[k][j] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            if let Some(i) = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| a[i][j] % p != 0)) {
                for j in k..cols {
                    let v = a[i][j];
                    a[k][j] += v;
                }
                continue;
            }
            diag.push(p.abs());
            break;
        }
    }
    Ok(diag)
}

pub fn elementary_divisors(e: &[Vec<i64>]) -> Result<ElementaryDivisors> {
    let m = e.len();
    if m == 0 || !m.is_multiple_of(2) || e.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput(
            "alternating form must be 2n × 2n".into(),
        ));
    }
    for i in 0..m {
        for j in 0..m {
            if e[i][j] != -e[j][i] {
                return Err(Error::InvalidInput("form is not alternating".into()));
            }
        }
    }
    let d = smith_diagonal(e)?;
    if d.contains(&0) {
        return Err(Error::DegenerateForm);
    }
    let t: Vec<u64> = d.chunks(2).map(|p| p[0] as u64).collect();
    Ok(ElementaryDivisors { t })
}

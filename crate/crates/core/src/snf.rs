//! Smith normal form over the integers.

/// Result of reducing an integer matrix `m` to `u * m * v = diag(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    /// Diagonal entries, each dividing the next; zeros (if any) come last.
    pub diagonal: Vec<i64>,
    /// Left unimodular transform.
    pub u: Vec<Vec<i64>>,
    /// Right unimodular transform.
    pub v: Vec<Vec<i64>>,
}

fn ident(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn add_row(a: &mut [Vec<i64>], src: usize, dst: usize, k: i64) {
    for j in 0..a[dst].len() {
        a[dst][j] -= k * a[src][j];
    }
}

fn add_col(a: &mut [Vec<i64>], src: usize, dst: usize, k: i64) {
    for row in a.iter_mut() {
        row[dst] -= k * row[src];
    }
}

fn swap_cols(a: &mut [Vec<i64>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

pub fn smith_normal_form(m: &[Vec<i64>]) -> Smith {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.to_vec();
    let mut u = ident(rows);
    let mut v = ident(cols);

    for t in 0..rows.min(cols) {
        loop {
            // Bring the smallest nonzero entry of the trailing block to (t, t).
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                add_row(&mut a, t, i, q);
                add_row(&mut u, t, i, q);
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                add_col(&mut a, t, j, q);
                add_col(&mut v, t, j, q);
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the rest of the block by the pivot.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    add_row(&mut a, i, t, -1);
                    add_row(&mut u, i, t, -1);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }

    let diagonal = (0..rows.min(cols)).map(|i| a[i][i]).collect();
    Smith { diagonal, u, v }
}

//! Linear algebra over Z_n.
//!
//! For prime `n` this is ordinary elimination over a field. For composite `n`
//! the ring Z/nZ is a principal ideal ring, so a matrix can still be
//! diagonalized by invertible row and column operations built from extended
//! gcd steps; the diagonal entries then determine the size of the row span.

pub fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Returns `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, s, _) = ext_gcd((a % m) as i64, m as i64);
    (g == 1).then(|| s.rem_euclid(m as i64) as u64)
}

/// Rank over the field Z_p.
pub fn rank_mod_prime(rows: &[Vec<u32>], p: u32) -> usize {
    assert!(is_prime(p), "rank over a field needs prime modulus");
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| (v % p) as u64).collect())
        .collect();
    let p = p as u64;
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p).expect("nonzero in a field");
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v + p * p - f * pv) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Bézout coefficients for eliminating `b` against the pivot `a`; plain
/// elimination when `a` divides `b`, so the pivot row stays put.
fn bezout(a: i64, b: i64) -> (i64, i64, i64) {
    if b % a == 0 {
        (a, 1, 0)
    } else {
        ext_gcd(a, b)
    }
}

/// `u · a · v = diag(d)` over Z_n, with `u` and `v` invertible mod n.
#[derive(Debug, Clone)]
pub struct DiagonalForm {
    pub n: u32,
    pub rows: usize,
    pub cols: usize,
    /// Diagonal entries, length `min(rows, cols)`; zero when absent.
    pub diag: Vec<u32>,
    pub u: Vec<Vec<u32>>,
    pub v: Vec<Vec<u32>>,
}

impl DiagonalForm {
    /// Diagonalizes `a` (rows of equal length) over Z_n.
    pub fn new(a: &[Vec<u32>], n: u32) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let nn = n as i64;
        let red = |x: i64| x.rem_euclid(nn);
        let mut m: Vec<Vec<i64>> = a
            .iter()
            .map(|r| r.iter().map(|&x| red(x as i64)).collect())
            .collect();
        let mut u: Vec<Vec<i64>> = (0..rows)
            .map(|i| (0..rows).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut v: Vec<Vec<i64>> = (0..cols)
            .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
            .collect();

        // Row op on rows (i, j): [ri; rj] <- [[s, t], [p, q]] [ri; rj].
        let row_op =
            |mat: &mut Vec<Vec<i64>>, i: usize, j: usize, s: i64, t: i64, p: i64, q: i64| {
                for k in 0..mat[i].len() {
                    let (a, b) = (mat[i][k], mat[j][k]);
                    mat[i][k] = red(s * a + t * b);
                    mat[j][k] = red(p * a + q * b);
                }
            };
        // Column op on columns (i, j) of a row-major matrix.
        let col_op =
            |mat: &mut Vec<Vec<i64>>, i: usize, j: usize, s: i64, t: i64, p: i64, q: i64| {
                for row in mat.iter_mut() {
                    let (a, b) = (row[i], row[j]);
                    row[i] = red(s * a + t * b);
                    row[j] = red(p * a + q * b);
                }
            };

        let steps = rows.min(cols);
        let mut diag = vec![0u32; steps];
        for t in 0..steps {
            // Bring a nonzero entry with the smallest representative to (t, t).
            let mut best: Option<(i64, usize, usize)> = None;
            for (r, row) in m.iter().enumerate().skip(t) {
                for (c, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                        best = Some((x, r, c));
                    }
                }
            }
            let Some((_, pr, pc)) = best else { break };
            m.swap(t, pr);
            u.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
            for row in v.iter_mut() {
                row.swap(t, pc);
            }
            loop {
                let mut changed = false;
                for r in t + 1..rows {
                    if m[r][t] == 0 {
                        continue;
                    }
                    let (a, b) = (m[t][t], m[r][t]);
                    let (g, s, q) = bezout(a, b);
                    row_op(&mut m, t, r, s, q, -b / g, a / g);
                    row_op(&mut u, t, r, s, q, -b / g, a / g);
                    changed = true;
                }
                for c in t + 1..cols {
                    if m[t][c] == 0 {
                        continue;
                    }
                    let (a, b) = (m[t][t], m[t][c]);
                    let (g, s, q) = bezout(a, b);
                    col_op(&mut m, t, c, s, q, -b / g, a / g);
                    col_op(&mut v, t, c, s, q, -b / g, a / g);
                    changed = true;
                }
                // A pass either leaves the pivot's row and column untouched or
                // strictly lowers the pivot, so the sweep terminates.
                if !changed {
                    break;
                }
            }
            diag[t] = m[t][t] as u32;
        }
        let to_u32 = |mat: Vec<Vec<i64>>| -> Vec<Vec<u32>> {
            mat.into_iter()
                .map(|r| r.into_iter().map(|x| x as u32).collect())
                .collect()
        };
        DiagonalForm {
            n,
            rows,
            cols,
            diag,
            u: to_u32(u),
            v: to_u32(v),
        }
    }

    /// Size of the row span as a product of factors `n / gcd(d_i, n)`.
    pub fn span_factors(&self) -> Vec<u64> {
        let n = self.n as u64;
        self.diag
            .iter()
            .map(|&d| n / gcd(d as u64, n))
            .filter(|&f| f > 1)
            .collect()
    }

    /// Number of diagonal entries that are nonzero mod n.
    pub fn nonzero_count(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count()
    }

    /// Generators of the left kernel `{r : r·a ≡ 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<u32>> {
        let n = self.n as u64;
        let mut out = Vec::new();
        for i in 0..self.rows {
            let d = self.diag.get(i).copied().unwrap_or(0) as u64;
            let c = n / gcd(d, n);
            if c == n {
                continue;
            }
            let r: Vec<u32> = self.u[i]
                .iter()
                .map(|&x| (x as u64 * c % n) as u32)
                .collect();
            if r.iter().any(|&x| x != 0) {
                out.push(r);
            }
        }
        out
    }

    /// Some `r` with `r·a ≡ b`, if one exists.
    pub fn solve_left(&self, b: &[u32]) -> Option<Vec<u32>> {
        let n = self.n as u64;
        // r·a = b  ⇔  y·D = b·v with y = r·u⁻¹.
        let bv: Vec<u64> = (0..self.cols)
            .map(|j| {
                (0..self.cols)
                    .map(|k| b[k] as u64 * self.v[k][j] as u64 % n)
                    .sum::<u64>()
                    % n
            })
            .collect();
        let mut y = vec![0u64; self.rows];
        for (j, &target) in bv.iter().enumerate() {
            let d = self.diag.get(j).copied().unwrap_or(0) as u64;
            if d == 0 || j >= self.rows {
                if target != 0 {
                    return None;
                }
                continue;
            }
            let g = gcd(d, n);
            if target % g != 0 {
                return None;
            }
            let modulus = n / g;
            let inv = if modulus == 1 {
                0
            } else {
                inv_mod(d / g, modulus).expect("coprime after dividing out the gcd")
            };
            y[j] = (target / g) % modulus * inv % modulus;
        }
        let r: Vec<u32> = (0..self.rows)
            .map(|k| {
                ((0..self.rows)
                    .map(|i| y[i] * self.u[i][k] as u64 % n)
                    .sum::<u64>()
                    % n) as u32
            })
            .collect();
        Some(r)
    }
}

/// Row-reduced echelon basis over Z_p; returns the nonzero rows and pivots.
pub fn rref_mod_prime(rows: &[Vec<u32>], p: u32) -> (Vec<Vec<u32>>, Vec<usize>) {
    let p64 = p as u64;
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| (v % p) as u64).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p64).expect("nonzero in a field");
        for v in m[rank].iter_mut() {
            *v = *v * inv % p64;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v + p64 * p64 - f * pv) % p64;
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    let out = m
        .into_iter()
        .map(|r| r.into_iter().map(|v| v as u32).collect())
        .collect();
    (out, pivots)
}

/// Basis of the right null space `{x : a·x ≡ 0}` over Z_p.
pub fn null_space_mod_prime(rows: &[Vec<u32>], cols: usize, p: u32) -> Vec<Vec<u32>> {
    let (r, pivots) = rref_mod_prime(rows, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u32; cols];
            x[f] = 1;
            for (row, &pc) in r.iter().zip(&pivots) {
                x[pc] = (p - row[f] % p) % p;
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul_left(r: &[u32], a: &[Vec<u32>], n: u32) -> Vec<u32> {
        let cols = a[0].len();
        (0..cols)
            .map(|j| {
                (r.iter()
                    .zip(a)
                    .map(|(&x, row)| x as u64 * row[j] as u64)
                    .sum::<u64>()
                    % n as u64) as u32
            })
            .collect()
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(9));
    }

    #[test]
    fn diagonal_form_counts_span() {
        // Rows 2 and 1 generate Z_4, rows 2 and 2 generate {0, 2}.
        let full = DiagonalForm::new(&[vec![2], vec![1]], 4);
        assert_eq!(full.span_factors().iter().product::<u64>(), 4);
        let half = DiagonalForm::new(&[vec![2], vec![2]], 4);
        assert_eq!(half.span_factors().iter().product::<u64>(), 2);
        assert_eq!(half.left_kernel().len(), 2);
    }

    #[test]
    fn kernel_and_solve() {
        let a = vec![vec![1, 2, 3], vec![2, 0, 2], vec![3, 2, 1], vec![0, 0, 2]];
        for n in [2u32, 3, 4, 6] {
            let f = DiagonalForm::new(&a, n);
            for r in f.left_kernel() {
                assert!(mul_left(&r, &a, n).iter().all(|&x| x == 0));
            }
            let r = [1, 3, 2, 5];
            let b = mul_left(&r.iter().map(|&x| x % n).collect::<Vec<_>>(), &a, n);
            let sol = f.solve_left(&b).expect("b is in the span");
            assert_eq!(mul_left(&sol, &a, n), b);
        }
    }

    #[test]
    fn rank_agrees_with_diagonal_form_for_primes() {
        let a = vec![
            vec![1, 1, 0, 2],
            vec![0, 1, 1, 1],
            vec![1, 2, 1, 0],
            vec![2, 2, 0, 1],
        ];
        for p in [2u32, 3, 5] {
            let f = DiagonalForm::new(&a, p);
            assert_eq!(rank_mod_prime(&a, p), f.nonzero_count(), "p = {p}");
        }
    }

    #[test]
    fn null_space_is_annihilated() {
        let a = vec![vec![1, 1, 0, 1], vec![0, 1, 1, 1]];
        let ns = null_space_mod_prime(&a, 4, 2);
        assert_eq!(ns.len(), 2);
        for x in ns {
            for row in &a {
                let dot: u32 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert_eq!(dot % 2, 0);
            }
        }
    }
}

//! Dense linear algebra over `F_p` for word-sized primes.

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p is prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

/// Reduced row echelon form; returns the reduced rows and pivot columns.
pub(crate) fn row_reduce(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x %= p;
        }
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(sel) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, sel);
        let inv = inv_mod(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Basis of the right kernel `{v : A v = 0}`.
pub(crate) fn kernel(rows: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let (rref, pivots) = row_reduce(rows, cols, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rref[r][f] % p) % p;
            }
            v
        })
        .collect()
}

pub(crate) fn rank(rows: Vec<Vec<u64>>, cols: usize, p: u64) -> usize {
    row_reduce(rows, cols, p).1.len()
}

/// Solves `x * A = b` for a row vector `x`, where `A` is given by rows.
pub(crate) fn solve_left(rows: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let n = rows.len();
    let cols = b.len();
    // columns of the augmented system: A^T x = b
    let mut sys: Vec<Vec<u64>> = (0..cols)
        .map(|c| {
            let mut r: Vec<u64> = rows.iter().map(|row| row[c] % p).collect();
            r.push(b[c] % p);
            r
        })
        .collect();
    let (rref, pivots) = row_reduce(std::mem::take(&mut sys), n + 1, p);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![0u64; n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = rref[r][n];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_rank() {
        assert_eq!(mul_mod(inv_mod(3, 7), 3, 7), 1);
        assert_eq!(rank(vec![vec![1, 2], vec![2, 4]], 2, 5), 1);
        assert_eq!(rank(vec![vec![1, 2], vec![2, 4]], 2, 3), 1);
        assert_eq!(rank(vec![vec![1, 0], vec![0, 3]], 2, 3), 1);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = vec![vec![1, 2, 3, 4], vec![0, 1, 1, 0]];
        let k = kernel(a.clone(), 4, 5);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                let s: u64 = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert_eq!(s % 5, 0);
            }
        }
    }

    #[test]
    fn left_solve() {
        let a = vec![vec![1, 0, 1], vec![0, 1, 1]];
        assert_eq!(solve_left(&a, &[1, 1, 2], 3), Some(vec![1, 1]));
        assert_eq!(solve_left(&a, &[1, 1, 0], 3), None);
    }
}

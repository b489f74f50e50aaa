#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wittlift::comodules::Comodule;
use wittlift::{Cochain, Polynomial, Ring, VarSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_terms` terms, exponents in `0..=max_exp` (`-1..=max_exp` on
/// Laurent variables), coefficients in `-5..=5`.
pub fn random_poly(rng: &mut ChaCha8Rng, vars: &Arc<VarSet>, ring: Ring, max_terms: usize, max_exp: i32) -> Polynomial {
    let n = rng.gen_range(0..=max_terms);
    let terms: Vec<(Vec<i32>, BigInt)> = (0..n)
        .map(|_| {
            let e = vars
                .vars()
                .iter()
                .map(|v| {
                    let lo = if v.laurent { -1 } else { 0 };
                    rng.gen_range(lo..=max_exp)
                })
                .collect();
            (e, BigInt::from(rng.gen_range(-5i64..=5)))
        })
        .collect();
    Polynomial::from_terms(vars, ring, terms).unwrap()
}

/// A sparse random cochain: at most `nonzero` nonzero components.
pub fn random_cochain(rng: &mut ChaCha8Rng, coeffs: &Comodule, degree: usize, nonzero: usize, max_terms: usize) -> Cochain {
    let vars = coeffs.group().copies(degree);
    let mut comps = vec![Polynomial::zero(&vars, coeffs.ring()); coeffs.rank()];
    for _ in 0..nonzero {
        let i = rng.gen_range(0..coeffs.rank());
        comps[i] = random_poly(rng, &vars, coeffs.ring(), max_terms, 2);
    }
    Cochain::new(coeffs, degree, &VarSet::empty(), comps).unwrap()
}

pub fn random_rows(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

/// Textbook Hermite normal form: Euclid on each column by repeated
/// min-pivot reduction, then reduction above the pivot. Zero rows dropped.
pub fn naive_hnf(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let m = a.len();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, piv);
            let mut clean = true;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pr = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pr = a[r].clone();
        for i in 0..r {
            let q = a[i][c].div_floor(&pr[c]);
            for (x, y) in a[i].iter_mut().zip(&pr) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

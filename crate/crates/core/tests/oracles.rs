mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use wittlift::comodules::{
    div_power, gamma_composition_map, gl2_conjugation, restrict, tensor, twist_projection, Comodule, ComoduleMap,
};
use wittlift::exactalg::lattice_preimage_mod;
use wittlift::groupschemes::{borel_hom, root_hom};
use wittlift::pairlat::PairingSetup;
use wittlift::{make_group, GroupName, IntegerLattice, IntegerMatrix, Pairing, Polynomial, Ring, VarSet};

use common::{naive_hnf, random_cochain, random_rows, rng};

fn standard_rep() -> Comodule {
    let g = make_group(GroupName::SL2);
    let v = |i| Polynomial::var(g.coords(), Ring::Integers, i);
    Comodule::from_matrix(
        &g,
        Ring::Integers,
        "std",
        vec!["v1".into(), "v2".into()],
        vec![vec![v(0), v(1)], vec![v(2), v(3)]],
    )
    .unwrap()
}

fn det(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<i64>> = a[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
            .collect();
        let term = BigInt::from(a[0][j]) * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

#[test]
fn hnf_of_fixed_example() {
    let rows = vec![
        vec![2, 4, 4, -6, 6, 12],
        vec![-6, -4, -2, 14, -10, 2],
        vec![4, 10, 12, -8, 8, 1],
        vec![0, 3, 5, 2, -3, 7],
        vec![8, 8, 0, 0, 4, -4],
        vec![1, 1, 1, 1, 1, 1],
    ];
    let h = IntegerMatrix::from_rows(&rows).hnf();
    let got: Vec<Vec<BigInt>> = (0..h.rows()).map(|i| h.row_vec(i)).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    assert_eq!(got, naive_hnf(&rows, 6));
    let a = IntegerLattice::from_generators(&IntegerMatrix::from_rows(&rows));
    let b = IntegerLattice::from_generators(&h);
    assert!(a.is_sublattice_of(&b) && b.is_sublattice_of(&a));
}

#[test]
fn smith_invariants_multiply_to_determinant() {
    let mut rng = rng(11);
    for _ in 0..60 {
        let n = rng.gen_range(1..=5);
        let a = random_rows(&mut rng, n, n, 6);
        let d = det(&a).abs();
        let inv = IntegerMatrix::from_rows(&a).smith_invariants();
        if d.is_zero() {
            assert!(inv.len() < n || inv.iter().any(|x| x.is_zero()));
        } else {
            assert_eq!(inv.iter().product::<BigInt>(), d);
            for w in inv.windows(2) {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
}

#[test]
fn preimage_mod_matches_membership() {
    let mut rng = rng(12);
    for _ in 0..30 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=5);
        let k = rng.gen_range(1..=4);
        let a = random_rows(&mut rng, n, k, 7);
        let am = IntegerMatrix::from_rows(&a);
        let lat = lattice_preimage_mod(&am, p).unwrap();
        assert_eq!(lat.index(), Some(BigInt::from(p).pow(am.rank_mod_p(p) as u32)));
        for _ in 0..20 {
            let v: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect();
            let in_kernel = (0..n).all(|i| {
                let s: BigInt = (0..k).map(|j| &v[j] * a[i][j]).sum();
                (s % BigInt::from(p)).is_zero()
            });
            assert_eq!(lat.contains(&v), in_kernel);
        }
    }
}

/// `ρ` on `Γ^m V` read off from `V^{⊗m}`: the orbit sum of `λ` is
/// invariant, so the coefficient of `e^[ν]` is that of any tensor in the
/// orbit of `ν`.
fn check_against_tensor_power(v: &Comodule, m: u32) {
    let n = v.rank();
    let mut t = v.clone();
    for _ in 1..m {
        t = tensor(&t, v).unwrap();
    }
    let gamma = div_power(v, m);
    let (_, basis, _) = gamma.power_structure().unwrap();
    let word_of = |mut idx: usize| {
        let mut w = vec![0usize; m as usize];
        for slot in w.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        w
    };
    let counts = |w: &[usize]| {
        let mut c = vec![0u32; n];
        for &i in w {
            c[i] += 1;
        }
        c
    };
    let mut representative = vec![usize::MAX; basis.len()];
    let mut orbit_of = vec![0usize; t.rank()];
    for idx in 0..t.rank() {
        let b = basis.index_of(&counts(&word_of(idx))).unwrap();
        orbit_of[idx] = b;
        if representative[b] == usize::MAX {
            representative[b] = idx;
        }
    }
    for lam in 0..basis.len() {
        let sum: Vec<BigInt> = orbit_of.iter().map(|&b| if b == lam { BigInt::one() } else { BigInt::zero() }).collect();
        let image = t.coact(&sum).unwrap();
        for nu in 0..basis.len() {
            assert_eq!(
                gamma.entry(nu, lam).unwrap(),
                image[representative[nu]],
                "{} m={m}: entry ({nu}, {lam})",
                v.key()
            );
        }
    }
}

#[test]
fn divided_powers_match_symmetric_tensors() {
    let gl2 = gl2_conjugation();
    check_against_tensor_power(&gl2, 2);
    check_against_tensor_power(&gl2, 3);
    check_against_tensor_power(&standard_rep(), 4);
    check_against_tensor_power(&restrict(&gl2, &borel_hom()).unwrap(), 2);
}

#[test]
fn gamma_composition_is_dual_to_multiplication() {
    for v in [standard_rep(), gl2_conjugation()] {
        let (m, n) = (2u32, 2u32);
        let map = gamma_composition_map(&v, m, n).unwrap();
        map.verify_equivariance().unwrap();
        let x = VarSet::new((1..=v.rank()).map(|i| wittlift::Var::poly(format!("x{i}"))).collect());
        let mono = |e: &[u32]| {
            Polynomial::monomial(&x, Ring::Integers, e.iter().map(|&k| k as i32).collect(), BigInt::one())
        };
        let inner = div_power(&v, n);
        let (_, ibasis, _) = inner.power_structure().unwrap();
        let outer = div_power(&inner, m);
        let (_, tbasis, _) = outer.power_structure().unwrap();
        let source = div_power(&v, m * n);
        let (_, sbasis, _) = source.power_structure().unwrap();
        let a = map.matrix();
        for (t, nu) in tbasis.iter().enumerate() {
            let mut prod = Polynomial::one(&x, Ring::Integers);
            for (b, &k) in nu.iter().enumerate() {
                prod = prod.try_mul(&mono(ibasis.get(b)).pow(k)).unwrap();
            }
            for (s, lam) in sbasis.iter().enumerate() {
                let want = prod.coeff(&lam.iter().map(|&k| k as i32).collect::<Vec<_>>());
                assert_eq!(a.get(t, s), &want, "{} ({t}, {s})", v.key());
            }
        }
    }
}

#[test]
fn restriction_commutes_with_divided_powers() {
    let gl2 = gl2_conjugation();
    for hom in [root_hom(), borel_hom()] {
        for m in 1..=3 {
            let a = restrict(&div_power(&gl2, m), &hom).unwrap();
            let b = div_power(&restrict(&gl2, &hom).unwrap(), m);
            assert_eq!(a.rank(), b.rank());
            for i in 0..a.rank() {
                for j in 0..a.rank() {
                    assert_eq!(a.entry(i, j).unwrap(), b.entry(i, j).unwrap(), "{} m={m}", hom.name());
                }
            }
        }
    }
}

#[test]
fn pairings_are_equivariant() {
    let gl2 = gl2_conjugation();
    Pairing::evaluation(&gl2).unwrap().verify().unwrap();
    Pairing::evaluation(&div_power(&gl2, 2)).unwrap().verify().unwrap();
    Pairing::scalar(&gl2).verify().unwrap();
}

#[test]
fn y_is_the_full_annihilator_of_k_mod_p() {
    let mut rng = rng(13);
    for p in [2u64, 3] {
        let s = PairingSetup::standard(p, 1).unwrap();
        let kb = s.k().basis();
        let n = s.y().ambient_dim();
        let mut hits = 0;
        let yb = s.y().basis();
        for t in 0..400 {
            // Half the samples are built from the basis of Y and perturbed.
            let mut f: Vec<BigInt> = (0..n).map(|_| BigInt::from(p * rng.gen_range(0..3))).collect();
            if t % 2 == 0 {
                for r in 0..yb.rows() {
                    let c = BigInt::from(rng.gen_range(-2i64..=2));
                    for (x, y) in f.iter_mut().zip(yb.row(r)) {
                        *x += &c * y;
                    }
                }
            }
            if t % 4 == 0 {
                f[rng.gen_range(0..n)] += 1;
            }
            let pairs_into_p = (0..kb.rows()).all(|r| {
                let s: BigInt = kb.row(r).iter().zip(&f).map(|(a, b)| a * b).sum();
                (s % BigInt::from(p)).is_zero()
            });
            assert_eq!(s.y().contains(&f), pairs_into_p);
            hits += pairs_into_p as usize;
        }
        assert!(hits > 0);
    }
}

#[test]
fn k_is_the_kernel_of_the_twist_projection() {
    for p in [2u64, 3] {
        let s = PairingSetup::standard(p, 1).unwrap();
        let a = s.projection_matrix();
        let kb = s.k().basis();
        for r in 0..kb.rows() {
            for c in 0..a.rows() {
                let v: BigInt = kb.row(r).iter().zip(a.row(c)).map(|(x, y)| x * y).sum();
                assert!((v % BigInt::from(p)).is_zero());
            }
        }
        assert_eq!(s.k().index(), Some(BigInt::from(p).pow(4)));
        let direct = twist_projection(&wittlift::comodules::reduce_mod(&gl2_conjugation(), p).unwrap(), 1).unwrap();
        assert_eq!(direct.target().rank(), s.target_rank());
    }
}

#[test]
fn coefficient_maps_commute_with_d() {
    let v = standard_rep();
    let map: ComoduleMap = gamma_composition_map(&v, 2, 2).unwrap();
    let mut rng = rng(14);
    for _ in 0..10 {
        let degree = rng.gen_range(0..=1);
        let f = random_cochain(&mut rng, map.source(), degree, 2, 2);
        let lhs = f.differential().unwrap().apply_coefficient_map(&map).unwrap();
        let rhs = f.apply_coefficient_map(&map).unwrap().differential().unwrap();
        assert_eq!(lhs, rhs);
    }
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    let vars = VarSet::polynomial(&["x", "y", "z"]);
    prop::collection::vec(((0i32..3, 0i32..3, 0i32..3), -20i64..20), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(
            &vars,
            Ring::Integers,
            terms.into_iter().map(|((a, b, c), k)| (vec![a, b, c], BigInt::from(k))),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn ring_axioms(f in small_poly(), g in small_poly(), h in small_poly()) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn reduction_is_a_ring_map(f in small_poly(), g in small_poly(), m in prop::sample::select(vec![2u64, 3, 4, 9, 25])) {
        let r = |p: &Polynomial| p.reduce_mod(m).unwrap();
        prop_assert_eq!(r(&(&f * &g)), r(&f).try_mul(&r(&g)).unwrap());
        prop_assert_eq!(r(&(&f + &g)), r(&f).try_add(&r(&g)).unwrap());
    }

    #[test]
    fn exact_division_inverts_scaling(f in small_poly(), n in 1i64..50) {
        let n = BigInt::from(n);
        prop_assert_eq!(f.scale(&n).exact_div_scalar(&n).unwrap(), f.clone());
        if n > BigInt::one() && f.terms().any(|(_, c)| !(c % &n).is_zero()) {
            prop_assert!(f.exact_div_scalar(&n).is_err());
        }
    }
}

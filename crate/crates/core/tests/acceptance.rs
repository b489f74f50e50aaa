mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use rand::Rng;

use wittlift::classes::{
    check_coboundary_identity, check_congruence_p, check_congruence_p2, check_universal_class, cup_power_tensor,
    nontriviality_certificate, phi_cup_power_tensor, universal_grid, witt_cocycle,
};
use wittlift::comodules::{basis_vector, div_power, dual, generated_subcomodule, gl2_conjugation, restrict, Comodule, E_ALPHA};
use wittlift::groupschemes::{borel_hom, borel_xu_hom, root_hom, torus_hom, GroupHom};
use wittlift::hochschild::ClassStatus;
use wittlift::pairlat::PairingSetup;
use wittlift::{cup, GroupScheme, IntegerMatrix, Pairing, Ring};

use common::{naive_hnf, random_cochain, random_rows, rng};

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn witt_grid() -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        for r in 1..=3u32 {
            if p.pow(r) <= 125 {
                out.push((p, r));
            }
        }
    }
    out
}

fn witt_suite() -> Outcome {
    let grid = witt_grid();
    for &(p, r) in &grid {
        let c = witt_cocycle(p, r).map_err(e)?;
        // Coefficients are binomial(p^r, k) / p.
        let q = p.pow(r);
        let f = c.component(0);
        for k in 0..=q {
            let want = if k == 0 || k == q {
                BigInt::zero()
            } else {
                binomial(BigInt::from(q), BigInt::from(k)) / BigInt::from(p)
            };
            let got = f.coeff(&[k as i32, (q - k) as i32]);
            ensure(got == want, || format!("p={p} r={r}: coefficient of X^{k} is {got}, want {want}"))?;
        }
        ensure(f.num_terms() as u64 == q - 1, || format!("p={p} r={r}: stray terms"))?;
        ensure(c.is_cocycle().map_err(e)?.holds, || format!("p={p} r={r}: d(c) != 0"))?;
        ensure(check_coboundary_identity(p, r).map_err(e)?, || format!("p={p} r={r}: p*c != d(-X^q)"))?;
        ensure(check_congruence_p(p, r).map_err(e)?, || format!("p={p} r={r}: c mod p != Phi"))?;
        let c2 = check_congruence_p2(p, r).map_err(e)?;
        ensure(c2.holds, || format!("p={p} r={r}: mod p^2 congruence fails, difference {}", c2.difference))?;
    }
    Ok(format!("{} (p, r) pairs", grid.len()))
}

fn cup_suite() -> Outcome {
    let mut powers = 0;
    let mut expanded = 0;
    for (p, r) in witt_grid() {
        for m in 1..=4u32 {
            let t = cup_power_tensor(p, r, m).map_err(e)?;
            ensure(t.degree() == Some(2 * m as usize), || format!("p={p} r={r} m={m}: wrong degree"))?;
            ensure(t.differential().map_err(e)?.is_zero(), || format!("p={p} r={r} m={m}: not a cocycle"))?;
            let reduced = t.reduce_mod(p).map_err(e)?;
            let phi = phi_cup_power_tensor(p, r - 1, m).map_err(e)?;
            ensure(reduced.canonical() == phi.canonical(), || {
                format!("p={p} r={r} m={m}: reduction differs from Phi power")
            })?;
            if t.expanded_size() <= BigInt::from(20_000) {
                let full = t.expand(20_000).map_err(e)?;
                ensure(full.is_cocycle().map_err(e)?.holds, || format!("p={p} r={r} m={m}: expanded not a cocycle"))?;
                let full_phi = phi.expand(20_000).map_err(e)?;
                ensure(full.reduce_mod(p).map_err(e)? == full_phi, || {
                    format!("p={p} r={r} m={m}: expanded reduction differs")
                })?;
                expanded += 1;
            }
            powers += 1;
        }
    }

    let mut rng = rng(0x5eed_0002);
    let ga = GroupScheme::all().into_iter().find(|g| g.label() == "Ga").unwrap();
    let k = Comodule::trivial(&ga, Ring::Integers, 1);
    let k_pairing = Pairing::trivial(&ga, Ring::Integers);
    let gl2 = gl2_conjugation();
    let gl2_dual = dual(&gl2).map_err(e)?;
    let eval = Pairing::evaluation(&gl2).map_err(e)?;
    let mut pairs = 0;
    for n in 0..100 {
        let (f, g, pairing) = if n < 60 {
            let i = rng.gen_range(0..=2);
            let j = rng.gen_range(0..=2);
            (
                random_cochain(&mut rng, &k, i, 1, 3),
                random_cochain(&mut rng, &k, j, 1, 3),
                &k_pairing,
            )
        } else {
            let i = rng.gen_range(0..=1);
            let j = rng.gen_range(0..=1);
            (
                random_cochain(&mut rng, &gl2, i, 2, 2),
                random_cochain(&mut rng, &gl2_dual, j, 2, 2),
                &eval,
            )
        };
        let lhs = cup(&f, &g, pairing).and_then(|h| h.differential()).map_err(e)?;
        let a = cup(&f.differential().map_err(e)?, &g, pairing).map_err(e)?;
        let b = cup(&f, &g.differential().map_err(e)?, pairing).map_err(e)?;
        let rhs = if f.degree() % 2 == 0 { a.try_add(&b) } else { a.try_sub(&b) }.map_err(e)?;
        ensure(lhs == rhs, || format!("Leibniz fails on pair {n} (degrees {}, {})", f.degree(), g.degree()))?;
        pairs += 1;
    }
    Ok(format!("{powers} cup powers ({expanded} also expanded), {pairs} Leibniz pairs"))
}

fn universal_suite() -> Outcome {
    let grid = universal_grid(&[2, 3], 9);
    ensure(!grid.is_empty(), || "empty grid".into())?;
    for spec in &grid {
        let check = check_universal_class(spec).map_err(e)?;
        ensure(check.all_pass(), || format!("{spec}: {check:?}"))?;
    }
    Ok(format!("{} specs", grid.len()))
}

fn pairing_suite() -> Outcome {
    let mut diagrams = 0;
    for p in [2u64, 3] {
        let setup = PairingSetup::standard(p, 1).map_err(e)?;
        let want = BigInt::from(p.pow(4));
        let snf: BigInt = setup.k().basis().smith_invariants().iter().product();
        ensure(snf == want, || format!("p={p}: SNF index of K is {snf}"))?;
        ensure(setup.k().index() == Some(want.clone()), || format!("p={p}: lattice index disagrees with SNF"))?;
        ensure(setup.right_surjective(), || format!("p={p}: Y is not onto the twist"))?;
        for m in 1..=2u32 {
            for base in [Ring::Integers, Ring::Mod(p * p)] {
                let d = setup.diagram_commutes(m, base).map_err(e)?;
                ensure(d.holds && d.left_surjective && d.pairs_checked > 0, || {
                    format!("p={p} m={m} over {base:?}: {d}")
                })?;
                diagrams += 1;
            }
        }
    }
    Ok(format!("{diagrams} diagrams"))
}

fn lemma_suite() -> Outcome {
    let gl2 = gl2_conjugation();
    let root = generated_subcomodule(&gl2, &basis_vector(&gl2, E_ALPHA)).map_err(e)?;
    ensure(root.lattice.rank() == 3, || format!("<e_alpha> has rank {}", root.lattice.rank()))?;
    // Every coaction coefficient of a lattice vector stays in the lattice.
    for w in 0..root.lattice.rank() {
        let image = gl2.coact(&root.lattice.basis().row_vec(w)).map_err(e)?;
        let mut monos: Vec<Vec<i32>> = image.iter().flat_map(|f| f.terms().map(|(x, _)| x.clone())).collect();
        monos.sort();
        monos.dedup();
        for mono in monos {
            let v: Vec<BigInt> = image.iter().map(|f| f.coeff(&mono)).collect();
            ensure(root.lattice.contains(&v), || format!("coaction leaves <e_alpha> at {mono:?}"))?;
        }
    }
    root.comodule.verify().map_err(e)?;
    let mut id = vec![BigInt::zero(); 4];
    id[0] = BigInt::one();
    id[3] = BigInt::one();
    let scalars = generated_subcomodule(&gl2, &id).map_err(e)?;
    ensure(scalars.lattice.rank() == 1, || format!("<id> has rank {}", scalars.lattice.rank()))?;
    Ok("ranks 3 and 1".into())
}

fn nontriviality_suite() -> Outcome {
    for p in [2u64, 3] {
        let c1 = witt_cocycle(p, 1).map_err(e)?.reduce_mod(p).map_err(e)?;
        ensure(c1.is_cocycle().map_err(e)?.holds, || format!("p={p}: c_1 mod p is not a cocycle"))?;
        let status = nontriviality_certificate(p).map_err(e)?;
        ensure(status == ClassStatus::NonzeroClass, || format!("p={p}: {status:?}"))?;
    }
    Ok("p = 2, 3".into())
}

fn coefficient_modules(g: &GroupScheme) -> std::result::Result<Vec<Comodule>, String> {
    let gl2 = gl2_conjugation();
    let mut out = vec![Comodule::trivial(g, Ring::Integers, 1)];
    if g.label() == "SL2" {
        out.push(gl2.clone());
        out.push(dual(&gl2).map_err(e)?);
        out.push(div_power(&gl2, 2));
        out.push(wittlift::comodules::reduce_mod(&gl2, 3).map_err(e)?);
        return Ok(out);
    }
    let homs: [GroupHom; 4] = [root_hom(), torus_hom(), borel_hom(), borel_xu_hom()];
    let hom = homs.iter().find(|h| h.source() == g).ok_or_else(|| format!("no hom from {}", g.label()))?;
    let res = restrict(&gl2, hom).map_err(e)?;
    out.push(res.clone());
    out.push(div_power(&res, 2));
    Ok(out)
}

fn infrastructure_suite() -> Outcome {
    let mut rng = rng(0x5eed_0007);
    let groups = GroupScheme::all();
    for g in &groups {
        g.verify_hopf_axioms().map_err(|err| format!("{}: {err}", g.label()))?;
        let mods = coefficient_modules(g)?;
        for n in 0..100 {
            let m = &mods[rng.gen_range(0..mods.len())];
            let degree = rng.gen_range(0..=2);
            let f = random_cochain(&mut rng, m, degree, 2, 3);
            let dd = f.differential().and_then(|h| h.differential()).map_err(e)?;
            ensure(dd.is_zero(), || format!("{}: d(d f) != 0 on sample {n} in {m}", g.label()))?;
        }
    }
    for n in 0..100 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let a = random_rows(&mut rng, rows, cols, 9);
        let h = IntegerMatrix::from_rows(&a).hnf();
        let got: Vec<Vec<BigInt>> = (0..h.rows()).map(|i| h.row_vec(i)).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        ensure(got == naive_hnf(&a, cols), || format!("HNF differs from oracle on matrix {n}: {a:?}"))?;
    }
    Ok(format!("{} groups, 100 HNF samples", groups.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("witt cocycles", witt_suite),
        ("cup powers", cup_suite),
        ("universal classes", universal_suite),
        ("pairing lattices", pairing_suite),
        ("generated subcomodules", lemma_suite),
        ("nontriviality", nontriviality_suite),
        ("infrastructure", infrastructure_suite),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}, {secs:.2}s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}, {secs:.2}s)", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

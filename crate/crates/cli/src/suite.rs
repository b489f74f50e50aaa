use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wittlift::classes::{
    check_coboundary_identity, check_congruence_p, check_congruence_p2, check_universal_class, cup_power_tensor,
    nontriviality_certificate, phi_cup_power_tensor, witt_cocycle,
};
use wittlift::comodules::{
    basis_vector, div_power, dual, gamma_composition_map, generated_subcomodule, gl2_conjugation, restrict, sym_power,
    Comodule, E_ALPHA,
};
use wittlift::groupschemes::{borel_hom, borel_xu_hom, root_hom, torus_hom};
use wittlift::hochschild::ClassStatus;
use wittlift::{
    AlgebraError, Cochain, GroupScheme, IntegerLattice, IntegerMatrix, Pairing, PairingSetup, Polynomial, Ring,
    UniversalClassSpec, VarSet,
};

use crate::grid::{ConfigError, Grid, MAX_MATRIX_DIM};
use crate::report::{CheckRecord, RunMeta, Status, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Exactalg,
    Hopf,
    Comodules,
    Witt,
    Universal,
    Pairing,
    Lemma,
}

impl Suite {
    /// Execution order.
    pub const ALL: [Suite; 7] = [
        Suite::Exactalg,
        Suite::Hopf,
        Suite::Comodules,
        Suite::Witt,
        Suite::Universal,
        Suite::Pairing,
        Suite::Lemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exactalg => "exactalg",
            Suite::Hopf => "hopf",
            Suite::Comodules => "comodules",
            Suite::Witt => "witt",
            Suite::Universal => "universal",
            Suite::Pairing => "pairing",
            Suite::Lemma => "lemma",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Comma-separated suite names.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, ConfigError> {
        let mut out: Vec<Suite> = s
            .split(',')
            .map(|x| Suite::parse(x.trim()).ok_or_else(|| ConfigError(format!("unknown suite {x:?}"))))
            .collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub grid: Grid,
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Random samples per randomized check.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            grid: Grid::default(),
            suites: Suite::ALL.to_vec(),
            seed: 0x5eed,
            samples: 50,
        }
    }
}

/// `Ok(None)` passes, `Ok(Some(w))` fails with witness `w`.
type Check = wittlift::Result<Option<String>>;

fn verdict(ok: bool, witness: impl FnOnce() -> String) -> Check {
    Ok(if ok { None } else { Some(witness()) })
}

struct Recorder {
    suite: &'static str,
    checks: Vec<CheckRecord>,
}

impl Recorder {
    fn push(&mut self, name: &str, params: &[(&str, String)], status: Status, witness: Option<String>, micros: u64) {
        self.checks.push(CheckRecord {
            suite: self.suite.to_string(),
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            status,
            witness,
            wall_micros: micros,
        });
    }

    fn settle(&mut self, name: &str, params: &[(&str, String)], outcome: Check, micros: u64) {
        let (status, witness) = match outcome {
            Ok(None) => (Status::Pass, None),
            Ok(Some(w)) => (Status::Fail, Some(w)),
            Err(AlgebraError::CapExceeded(why)) => (Status::Skipped, Some(format!("cap exceeded: {why}"))),
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        self.push(name, params, status, witness, micros);
    }

    fn run(&mut self, name: &str, params: &[(&str, String)], f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let outcome = f();
        self.settle(name, params, outcome, start.elapsed().as_micros() as u64);
    }

    fn skip(&mut self, name: &str, params: &[(&str, String)], reason: String) {
        self.push(name, params, Status::Skipped, Some(reason), 0);
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_rows(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect()
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &std::sync::Arc<VarSet>, ring: Ring, max_terms: usize) -> Polynomial {
    let n = rng.gen_range(0..=max_terms);
    let terms: Vec<(Vec<i32>, BigInt)> = (0..n)
        .map(|_| {
            let e = vars
                .vars()
                .iter()
                .map(|v| rng.gen_range(if v.laurent { -1 } else { 0 }..=2))
                .collect();
            (e, BigInt::from(rng.gen_range(-5i64..=5)))
        })
        .collect();
    Polynomial::from_terms(vars, ring, terms).expect("exponents in range")
}

fn random_cochain(rng: &mut ChaCha8Rng, coeffs: &Comodule, degree: usize) -> wittlift::Result<Cochain> {
    let vars = coeffs.group().copies(degree);
    let mut comps = vec![Polynomial::zero(&vars, coeffs.ring()); coeffs.rank()];
    for _ in 0..2 {
        let i = rng.gen_range(0..coeffs.rank());
        comps[i] = random_poly(rng, &vars, coeffs.ring(), 3);
    }
    Cochain::new(coeffs, degree, &VarSet::empty(), comps)
}

fn is_hermite(h: &IntegerMatrix) -> bool {
    let mut last: Option<usize> = None;
    for i in 0..h.rows() {
        let Some(c) = h.row(i).iter().position(|x| !x.is_zero()) else {
            return (i..h.rows()).all(|k| h.row(k).iter().all(|x| x.is_zero()));
        };
        if last.is_some_and(|l| c <= l) || !h.get(i, c).is_positive() {
            return false;
        }
        if (0..i).any(|k| h.get(k, c).is_negative() || h.get(k, c) >= h.get(i, c)) {
            return false;
        }
        last = Some(c);
    }
    true
}

fn exactalg_suite(rec: &mut Recorder, config: &SuiteConfig) {
    let n = config.samples;
    let samples = [("samples", n.to_string())];
    rec.run("hnf_echelon", &samples, || {
        let mut rng = rng_for(config.seed, 1);
        for _ in 0..n {
            let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
            let a = IntegerMatrix::from_rows(&random_rows(&mut rng, r, c));
            let h = a.hnf();
            let same_span = {
                let la = IntegerLattice::from_generators(&a);
                let lh = IntegerLattice::from_generators(&h);
                la.is_sublattice_of(&lh) && lh.is_sublattice_of(&la)
            };
            if !is_hermite(&h) || h.hnf() != h || !same_span {
                return Ok(Some(a.to_string()));
            }
        }
        Ok(None)
    });
    rec.run("snf_index", &samples, || {
        let mut rng = rng_for(config.seed, 2);
        for _ in 0..n {
            let k = rng.gen_range(1..=6);
            let a = IntegerMatrix::from_rows(&random_rows(&mut rng, k, k));
            if a.rank() < k {
                continue;
            }
            let inv = a.smith_invariants();
            let chain = inv.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
            let product: BigInt = inv.iter().product();
            if !chain || Some(product) != IntegerLattice::from_generators(&a).index() {
                return Ok(Some(a.to_string()));
            }
        }
        Ok(None)
    });
    for &p in &config.grid.p {
        rec.run("preimage_mod", &[("p", p.to_string())], || {
            let mut rng = rng_for(config.seed, 3 + p);
            for _ in 0..n {
                let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=6));
                let a = IntegerMatrix::from_rows(&random_rows(&mut rng, r, c));
                let lat = IntegerLattice::preimage_mod(&a, p)?;
                let ok_index = lat.index() == Some(BigInt::from(p).pow(a.rank_mod_p(p) as u32));
                let ok_rows = (0..lat.rank()).all(|i| {
                    a.mul_vec(&lat.basis().row_vec(i)).iter().all(|x| (x % BigInt::from(p)).is_zero())
                });
                if !ok_index || !ok_rows {
                    return Ok(Some(a.to_string()));
                }
            }
            Ok(None)
        });
    }
    rec.run("ring_axioms", &samples, || {
        let mut rng = rng_for(config.seed, 20);
        let vars = VarSet::polynomial(&["x", "y", "z"]);
        for _ in 0..n {
            let [f, g, h] = [0; 3].map(|_| random_poly(&mut rng, &vars, Ring::Integers, 5));
            let ok = &(&f * &g) * &h == &f * &(&g * &h)
                && &f * &g == &g * &f
                && &f * &(&g + &h) == &(&f * &g) + &(&f * &h);
            if !ok {
                return Ok(Some(format!("f = {f}; g = {g}; h = {h}")));
            }
        }
        Ok(None)
    });
    for &p in &config.grid.p {
        for q in [p, p * p] {
            rec.run("reduce_mod", &[("modulus", q.to_string())], || {
                let mut rng = rng_for(config.seed, 30 + q);
                let vars = VarSet::polynomial(&["x", "y"]);
                for _ in 0..n {
                    let f = random_poly(&mut rng, &vars, Ring::Integers, 5);
                    let g = random_poly(&mut rng, &vars, Ring::Integers, 5);
                    if (&f * &g).reduce_mod(q)? != f.reduce_mod(q)?.try_mul(&g.reduce_mod(q)?)? {
                        return Ok(Some(format!("f = {f}; g = {g}")));
                    }
                }
                Ok(None)
            });
        }
    }
}

fn coefficient_modules(g: &GroupScheme) -> wittlift::Result<Vec<Comodule>> {
    let gl2 = gl2_conjugation();
    let mut out = vec![Comodule::trivial(g, Ring::Integers, 1)];
    if let Some(hom) = [root_hom(), torus_hom(), borel_hom(), borel_xu_hom()]
        .into_iter()
        .find(|h| h.source() == g)
    {
        out.push(restrict(&gl2, &hom)?);
    } else {
        out.push(gl2.clone());
        out.push(div_power(&gl2, 2));
    }
    Ok(out)
}

fn hopf_suite(rec: &mut Recorder, config: &SuiteConfig) {
    for (k, g) in GroupScheme::all().into_iter().enumerate() {
        let params = [("group", g.label())];
        rec.run("axioms", &params, || {
            Ok(g.verify_hopf_axioms().err().map(|e| e.to_string()))
        });
        rec.run("d_squared", &[("group", g.label()), ("samples", config.samples.to_string())], || {
            let mut rng = rng_for(config.seed, 100 + k as u64);
            let mods = coefficient_modules(&g)?;
            for _ in 0..config.samples {
                let m = &mods[rng.gen_range(0..mods.len())];
                let degree = rng.gen_range(0..=2);
                let f = random_cochain(&mut rng, m, degree)?;
                let dd = f.differential()?.differential()?;
                if !dd.is_zero() {
                    return Ok(Some(format!("f = {f}; d(d f) = {dd}")));
                }
            }
            Ok(None)
        });
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn cap_dim(dim: usize) -> wittlift::Result<()> {
    if dim > MAX_MATRIX_DIM {
        Err(AlgebraError::CapExceeded(format!("dimension {dim} exceeds {MAX_MATRIX_DIM}")))
    } else {
        Ok(())
    }
}

fn comodules_suite(rec: &mut Recorder, config: &SuiteConfig) {
    let gl2 = gl2_conjugation();
    for &m in &config.grid.m {
        let params = [("m", m.to_string())];
        let gamma = div_power(&gl2, m);
        rec.run("gamma_axioms", &params, || Ok(gamma.verify().err().map(|e| e.to_string())));
        rec.run("sym_axioms", &params, || Ok(sym_power(&gl2, m).verify().err().map(|e| e.to_string())));
        rec.run("dual_axioms", &params, || Ok(dual(&gamma)?.verify().err().map(|e| e.to_string())));
        rec.run("restriction", &params, || {
            for hom in [root_hom(), borel_hom()] {
                let a = restrict(&gamma, &hom)?;
                let b = div_power(&restrict(&gl2, &hom)?, m);
                for i in 0..a.rank() {
                    for j in 0..a.rank() {
                        if a.entry(i, j)? != b.entry(i, j)? {
                            return Ok(Some(format!("{} entry ({i}, {j})", hom.name())));
                        }
                    }
                }
            }
            Ok(None)
        });
        rec.run("evaluation_pairing", &params, || {
            Ok(Pairing::evaluation(&gamma)?.verify().err().map(|e| e.to_string()))
        });
        rec.run("gamma_composition", &params, || {
            cap_dim(binomial(binomial(5, 2) + m as usize - 1, m as usize))?;
            Ok(gamma_composition_map(&gl2, m, 2)?.verify_equivariance().err().map(|e| e.to_string()))
        });
    }
}

fn witt_suite(rec: &mut Recorder, config: &SuiteConfig) {
    let grid = &config.grid;
    for &p in &grid.p {
        rec.run("nontrivial", &[("p", p.to_string())], || {
            let status = nontriviality_certificate(p)?;
            verdict(status == ClassStatus::NonzeroClass, || format!("{status:?}"))
        });
        for &r in &grid.r {
            let params = [("p", p.to_string()), ("r", r.to_string())];
            rec.run("cocycle", &params, || {
                let check = witt_cocycle(p, r)?.is_cocycle()?;
                verdict(check.holds, || check.differential.to_string())
            });
            rec.run("coboundary_identity", &params, || verdict(check_coboundary_identity(p, r)?, String::new));
            rec.run("congruence_p", &params, || verdict(check_congruence_p(p, r)?, String::new));
            rec.run("congruence_p2", &params, || {
                let check = check_congruence_p2(p, r)?;
                verdict(check.holds, || check.difference.to_string())
            });
            for &m in &grid.m {
                let params = [("p", p.to_string()), ("r", r.to_string()), ("m", m.to_string())];
                rec.run("cup_cocycle", &params, || {
                    let d = cup_power_tensor(p, r, m)?.differential()?;
                    verdict(d.is_zero(), || d.to_string())
                });
                rec.run("cup_reduction", &params, || {
                    let lhs = cup_power_tensor(p, r, m)?.reduce_mod(p)?;
                    let rhs = phi_cup_power_tensor(p, r - 1, m)?;
                    verdict(lhs.canonical() == rhs.canonical(), || format!("{lhs} vs {rhs}"))
                });
            }
        }
    }
}

const UNIVERSAL_CHECKS: [&str; 6] = [
    "cocycle",
    "t_invariant",
    "borel_cocycle",
    "projection",
    "projection_cocycle",
    "reduction_commutes",
];

fn universal_suite(rec: &mut Recorder, config: &SuiteConfig) {
    let grid = &config.grid;
    for &p in &grid.p {
        for &r in &grid.r {
            for &j in &grid.j {
                for &m in &grid.m {
                    let params = [
                        ("p", p.to_string()),
                        ("r", r.to_string()),
                        ("j", j.to_string()),
                        ("m", m.to_string()),
                    ];
                    let start = Instant::now();
                    let outcome = UniversalClassSpec::new(p, r, j, m).and_then(|spec| check_universal_class(&spec));
                    let micros = start.elapsed().as_micros() as u64;
                    match outcome {
                        Ok(c) => {
                            let results = [
                                c.cocycle,
                                c.t_invariant,
                                c.borel_cocycle,
                                c.projection.holds,
                                c.projection_is_cocycle,
                                c.reduction_commutes,
                            ];
                            for (name, ok) in UNIVERSAL_CHECKS.iter().zip(results) {
                                let witness = match (*name, &c.projection.witness) {
                                    ("projection", Some((label, got, want))) => {
                                        format!("component {label}: {got} vs expected {want}")
                                    }
                                    _ => String::new(),
                                };
                                rec.settle(name, &params, verdict(ok, || witness), micros);
                            }
                        }
                        Err(e) => {
                            let skipped = matches!(e, AlgebraError::CapExceeded(_));
                            for name in UNIVERSAL_CHECKS {
                                if skipped {
                                    rec.skip(name, &params, e.to_string());
                                } else {
                                    rec.settle(name, &params, Err(e.clone()), micros);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

fn pairing_suite(rec: &mut Recorder, config: &SuiteConfig) {
    let grid = &config.grid;
    for &p in &grid.p {
        for &r in &grid.r {
            let params = [("p", p.to_string()), ("r", r.to_string())];
            let setup = match PairingSetup::standard(p, r) {
                Ok(s) => s,
                Err(e) => {
                    let names = ["k_index", "right_surjective"];
                    for name in names {
                        rec.settle(name, &params, Err(e.clone()), 0);
                    }
                    for &m in &grid.m {
                        let params = [("p", p.to_string()), ("r", r.to_string()), ("m", m.to_string())];
                        for name in ["diagram_z", "diagram_p2"] {
                            rec.settle(name, &params, Err(e.clone()), 0);
                        }
                    }
                    continue;
                }
            };
            rec.run("k_index", &params, || {
                let snf: BigInt = setup.k().basis().smith_invariants().iter().product();
                let want = BigInt::from(p).pow(4);
                verdict(snf == want, || setup.k().to_string())
            });
            rec.run("right_surjective", &params, || verdict(setup.right_surjective(), || setup.y().to_string()));
            for &m in &grid.m {
                let params = [("p", p.to_string()), ("r", r.to_string()), ("m", m.to_string())];
                let dim = binomial(setup.x().rank() + m as usize - 1, m as usize);
                for (name, base) in [("diagram_z", Ring::Integers), ("diagram_p2", Ring::Mod(p * p))] {
                    rec.run(name, &params, || {
                        cap_dim(dim)?;
                        let d = setup.diagram_commutes(m, base)?;
                        verdict(d.holds, || d.to_string())
                    });
                }
            }
        }
    }
}

fn lemma_suite(rec: &mut Recorder) {
    let gl2 = gl2_conjugation();
    rec.run("root_vector_rank", &[], || {
        let sub = generated_subcomodule(&gl2, &basis_vector(&gl2, E_ALPHA))?;
        verdict(sub.lattice.rank() == 3, || sub.lattice.to_string())
    });
    rec.run("root_vector_stable", &[], || {
        let sub = generated_subcomodule(&gl2, &basis_vector(&gl2, E_ALPHA))?;
        Ok(sub.comodule.verify().err().map(|e| e.to_string()))
    });
    rec.run("identity_rank", &[], || {
        let mut id = vec![BigInt::zero(); 4];
        id[0] = BigInt::one();
        id[3] = BigInt::one();
        let sub = generated_subcomodule(&gl2, &id)?;
        verdict(sub.lattice.rank() == 1, || sub.lattice.to_string())
    });
}

/// Runs the enabled suites in their fixed order.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport, ConfigError> {
    config.grid.validate()?;
    if config.suites.is_empty() {
        return Err(ConfigError("no suites selected".into()));
    }
    let mut checks = Vec::new();
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    for suite in &suites {
        let mut rec = Recorder {
            suite: suite.name(),
            checks: Vec::new(),
        };
        match suite {
            Suite::Exactalg => exactalg_suite(&mut rec, config),
            Suite::Hopf => hopf_suite(&mut rec, config),
            Suite::Comodules => comodules_suite(&mut rec, config),
            Suite::Witt => witt_suite(&mut rec, config),
            Suite::Universal => universal_suite(&mut rec, config),
            Suite::Pairing => pairing_suite(&mut rec, config),
            Suite::Lemma => lemma_suite(&mut rec),
        }
        checks.extend(rec.checks);
    }
    let mut versions = BTreeMap::new();
    versions.insert("wittlift-cli".to_string(), env!("CARGO_PKG_VERSION").to_string());
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Ok(VerificationReport {
        meta: RunMeta {
            timestamp,
            grid: config.grid.clone(),
            suites: suites.iter().map(|s| s.name().to_string()).collect(),
            seed: config.seed,
            versions,
        },
        checks,
    })
}

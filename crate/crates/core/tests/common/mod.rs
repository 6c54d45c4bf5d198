//! Independent oracles and seeded property suites shared by the test targets.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use commutant::fedder::{fpure_check_gens, truncated_omega_power, FedderConfig};
use commutant::groebner::{buchberger, is_zero_dimensional, normal_form, TermOrder};
use commutant::lemmas::ExponentSolution;
use commutant::matrices::GenericMatrixPair;
use commutant::polycore::{Monomial, Poly, Ring, Scalar, VarId};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

pub fn seed_from_env() -> u64 {
    std::env::var("COMMUTANT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn runner(seed: u64, cases: u32) -> TestRunner {
    let mut bytes = [0u8; 32];
    for (i, b) in bytes.iter_mut().enumerate() {
        *b = (seed >> (8 * (i % 8))) as u8 ^ i as u8;
    }
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

// ---------------------------------------------------------------------------
// Oracles

/// Value of `f` at `point` modulo `q`.
pub fn eval(f: &Poly, point: &BTreeMap<VarId, u64>, q: u64) -> u64 {
    let qb = BigInt::from(q);
    let mut acc = 0u64;
    for (m, c) in f.terms() {
        let c = ((c.to_bigint() % &qb + &qb) % &qb).to_u64().unwrap();
        let mut t = c;
        for (v, e) in m.iter() {
            for _ in 0..e {
                t = t * point[&v] % q;
            }
        }
        acc = (acc + t) % q;
    }
    acc
}

/// `XY − YX` evaluated numerically, entry by entry.
pub fn numeric_commutator(n: usize, point: &BTreeMap<VarId, u64>, q: u64) -> Vec<Vec<u64>> {
    let x = |i: usize, j: usize| point[&VarId::x(i as u8, j as u8)];
    let y = |i: usize, j: usize| point[&VarId::y(i as u8, j as u8)];
    let mut c = vec![vec![0u64; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let mut s = 0u64;
            for k in 1..=n {
                s = (s + x(i, k) * y(k, j) % q + q - y(i, k) * x(k, j) % q) % q;
            }
            c[i - 1][j - 1] = s;
        }
    }
    c
}

pub fn random_point(n: u8, q: u64, rng: &mut ChaCha8Rng) -> BTreeMap<VarId, u64> {
    VarId::all(n).map(|v| (v, rng.gen_range(0..q))).collect()
}

/// Checks the symbolic commutator against the numeric one at `trials`
/// random points over `F_101`.
pub fn commutator_matches_numeric(n: u8, trials: usize, seed: u64) -> bool {
    const Q: u64 = 101;
    let pair = GenericMatrixPair::new(Ring::new(n, 0).unwrap()).unwrap();
    let c = pair.commutator().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).all(|_| {
        let pt = random_point(n, Q, &mut rng);
        let num = numeric_commutator(n as usize, &pt, Q);
        (1..=n as usize).all(|i| (1..=n as usize).all(|j| eval(c.get(i, j), &pt, Q) == num[i - 1][j - 1]))
    })
}

/// Every nonnegative solution of the `n = 4` system at `p`: one composition
/// of `p − 1` per factor, filtered by the `A_ij`, `B_ij` equations.
pub fn brute_force_n4(p: u32) -> Vec<ExponentSolution> {
    let q = p as u64 - 1;
    fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
        if parts == 1 {
            return vec![vec![total]];
        }
        let mut out = Vec::new();
        for first in 0..=total {
            for mut rest in compositions(total - first, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let (f4a, f3) = (compositions(q, 4), compositions(q, 3));
    let f2 = compositions(q, 2);
    let mut out = Vec::new();
    for c1 in &f4a {
        for c2 in &f3 {
            for c3 in &f3 {
                for c4 in &f4a {
                    for c5 in &f2 {
                        for c6 in &f2 {
                            for c7 in &f2 {
                                let s = ExponentSolution {
                                    alpha: [c1[0], c2[0], c3[0], c4[0], c5[0], c6[0], c7[0]],
                                    beta: [c1[1], c2[1], c3[1], c4[1], c5[1], c6[1], c7[1]],
                                    gamma: [c1[2], c2[2], c3[2], c4[2]],
                                    delta1: c1[3],
                                    delta4: c4[3],
                                };
                                if s.satisfies(p) {
                                    out.push(s);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// `ω^{p−1}` expanded in full over `F_p`, then stripped of every term with
/// an exponent `≥ p`.
pub fn untruncated_fedder(gens: &[Poly], p: u32) -> Poly {
    let gens: Vec<Poly> = gens.iter().map(|g| g.to_char(p).unwrap()).collect();
    let mut w = Poly::one(gens[0].ring());
    for g in &gens {
        w = w.mul(g).unwrap();
    }
    let full = w.pow(p - 1).unwrap();
    let kept = full
        .terms()
        .filter(|(m, _)| m.iter().all(|(_, e)| e < p))
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect::<Vec<_>>();
    Poly::from_terms(full.ring(), kept).unwrap()
}

// ---------------------------------------------------------------------------
// Strategies

const SMALL_RING_N: u8 = 2;

/// A polynomial over `ring` in the first `nvars` variables.
pub fn poly_strategy(ring: Ring, nvars: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Poly> + Clone {
    let vars: Vec<VarId> = VarId::all(ring.n).take(nvars).collect();
    prop::collection::vec((-6i64..=6, prop::collection::vec(0..=max_exp, nvars)), 0..=max_terms).prop_map(
        move |terms| {
            let terms = terms.into_iter().map(|(c, exps)| {
                let m = Monomial::from_pairs(vars.iter().copied().zip(exps).filter(|(_, e)| *e > 0)).unwrap();
                (c, m)
            });
            Poly::from_int_terms(ring, terms).unwrap()
        },
    )
}

fn homogeneous_strategy(ring: Ring, nvars: usize, degree: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let vars: Vec<VarId> = VarId::all(ring.n).take(nvars).collect();
    prop::collection::vec((1i64..=6, prop::collection::vec(0..nvars, degree as usize)), 1..=max_terms).prop_map(
        move |terms| {
            let terms = terms.into_iter().map(|(c, idx)| (c, Monomial::product_of(idx.into_iter().map(|i| vars[i])).unwrap()));
            Poly::from_int_terms(ring, terms).unwrap()
        },
    )
}

fn check(ok: bool, what: &str) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn run_suite<S: Strategy>(
    seed: u64,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(seed, cases).run(&strategy, test).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Suites

/// Commutative ring axioms over `Z` and `F_5`, the Frobenius identity
/// `(f + g)^p = f^p + g^p` in characteristic `p`, and JSON round trips.
pub fn suite_ring_axioms(seed: u64, cases: u32) -> Result<(), String> {
    let zr = Ring::new(SMALL_RING_N, 0).unwrap();
    let fr = Ring::new(SMALL_RING_N, 5).unwrap();
    let z = poly_strategy(zr, 4, 4, 2);
    let f = poly_strategy(fr, 4, 3, 2);
    let strat = (z.clone(), z.clone(), z, f.clone(), f);
    run_suite(seed, cases, strat, |(a, b, c, f, g)| {
        check(a.add(&b).unwrap() == b.add(&a).unwrap(), "add commutes")?;
        check(a.mul(&b).unwrap() == b.mul(&a).unwrap(), "mul commutes")?;
        check(a.mul(&b).unwrap().mul(&c).unwrap() == a.mul(&b.mul(&c).unwrap()).unwrap(), "mul associates")?;
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        check(lhs == rhs, "distributes")?;
        check(a.sub(&a).unwrap().is_zero(), "additive inverse")?;
        check(a.mul(&Poly::one(zr)).unwrap() == a, "unit")?;
        let fg5 = f.add(&g).unwrap().pow(5).unwrap();
        check(fg5 == f.pow(5).unwrap().add(&g.pow(5).unwrap()).unwrap(), "frobenius")?;
        check(Poly::from_json(&a.to_json()).unwrap() == a, "json round trip")?;
        check(Poly::from_json(&f.to_json()).unwrap() == f, "json round trip mod p")?;
        Ok(())
    })
}

/// The fold's p-truncation of `ω^{p−1}` equals the untruncated expansion
/// filtered afterwards, on at most six variables.
pub fn suite_truncation_oracle(seed: u64, cases: u32) -> Result<(), String> {
    let ring = Ring::new(SMALL_RING_N, 0).unwrap();
    let gens = prop::collection::vec(homogeneous_strategy(ring, 6, 2, 3), 1..=3);
    let strat = (gens, prop::sample::select(vec![2u32, 3]));
    let cfg = FedderConfig { term_ceiling: 1_000_000, parallel: false };
    run_suite(seed, cases, strat, move |(gens, p)| {
        let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.to_char(p).unwrap().is_zero()).collect();
        if gens.is_empty() {
            return Ok(());
        }
        let fast = truncated_omega_power(&gens, p, &cfg).unwrap();
        let slow = untruncated_fedder(&gens, p);
        check(fast == slow, "truncated power matches oracle")?;
        let rep = fpure_check_gens(&gens, p, &cfg).unwrap();
        check(rep.is_fpure_witnessed == !slow.is_zero(), "verdict matches oracle")?;
        check(rep.survivor_count == slow.len(), "survivor count")?;
        if let Some(w) = rep.witness_monomial() {
            check(w.iter().all(|(_, e)| e < p), "witness below p")?;
            check(Some(w) == slow.terms().map(|(m, _)| m).next(), "witness is least survivor")?;
        }
        Ok(())
    })
}

/// Reduced bases do not depend on generator order; on monomial ideals the
/// basis is the minimal generating set; normal form is additive.
pub fn suite_groebner(seed: u64, cases: u32) -> Result<(), String> {
    let ring = Ring::new(SMALL_RING_N, 7).unwrap();
    let vars: Vec<VarId> = VarId::all(SMALL_RING_N).take(3).collect();
    let order = TermOrder::degrevlex(vars.iter().copied());
    let gens = prop::collection::vec(poly_strategy(ring, 3, 3, 2), 1..=3);
    let monos = prop::collection::vec(prop::collection::vec(0u32..=3, 3), 1..=5);
    let strat = (gens, any::<prop::sample::Index>(), monos, poly_strategy(ring, 3, 3, 3), poly_strategy(ring, 3, 3, 3));
    run_suite(seed, cases, strat, move |(gens, idx, monos, f, h)| {
        let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        if !gens.is_empty() {
            let gb = buchberger(&gens, &order, 20_000).unwrap();
            let mut perm = gens.clone();
            perm.rotate_left(idx.index(gens.len()));
            perm.reverse();
            check(buchberger(&perm, &order, 20_000).unwrap().polys == gb.polys, "permutation invariance")?;
            for g in &gens {
                check(normal_form(g, &gb).unwrap().is_zero(), "generator reduces to 0")?;
            }
            let fh = normal_form(&f.add(&h).unwrap(), &gb).unwrap();
            let sep = normal_form(&normal_form(&f, &gb).unwrap().add(&normal_form(&h, &gb).unwrap()).unwrap(), &gb).unwrap();
            check(fh == sep, "normal form additive")?;
        }

        let monos: Vec<Monomial> = monos
            .into_iter()
            .map(|e| Monomial::from_pairs(vars.iter().copied().zip(e).filter(|(_, e)| *e > 0)).unwrap())
            .filter(|m| !m.is_one())
            .collect();
        if monos.is_empty() {
            return Ok(());
        }
        let polys: Vec<Poly> = monos.iter().map(|m| Poly::from_int_terms(ring, [(1, m.clone())]).unwrap()).collect();
        let gb = buchberger(&polys, &order, 20_000).unwrap();
        let mut minimal: Vec<Monomial> = monos
            .iter()
            .filter(|m| !monos.iter().any(|o| o != *m && o.divides(m)))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        minimal.sort();
        check(gb.leading_monomials() == minimal, "monomial ideal basis")?;
        check(gb.polys.iter().all(|g| g.len() == 1), "monomial basis elements")?;
        let var_set: BTreeSet<VarId> = vars.iter().copied().collect();
        let direct = vars.iter().all(|v| minimal.iter().any(|m| m.pure_power_var() == Some(*v)));
        check(is_zero_dimensional(&gb, &var_set) == direct, "zero-dimensionality scan")?;
        Ok(())
    })
}

/// Permuting `ω`'s factors changes neither the survivors nor the witness.
pub fn suite_factor_order(seed: u64, cases: u32) -> Result<(), String> {
    let ring = Ring::new(SMALL_RING_N, 0).unwrap();
    let gens = prop::collection::vec(homogeneous_strategy(ring, 6, 2, 3), 2..=4);
    let strat = (gens, any::<prop::sample::Index>(), prop::sample::select(vec![2u32, 3, 5]));
    let cfg = FedderConfig { term_ceiling: 1_000_000, parallel: false };
    run_suite(seed, cases, strat, move |(gens, idx, p)| {
        let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.to_char(p).unwrap().is_zero()).collect();
        if gens.is_empty() {
            return Ok(());
        }
        let a = fpure_check_gens(&gens, p, &cfg).unwrap();
        let mut perm = gens.clone();
        perm.rotate_left(idx.index(gens.len()));
        perm.reverse();
        let b = fpure_check_gens(&perm, p, &cfg).unwrap();
        check(a.survivors == b.survivors, "survivors invariant")?;
        check(a.witness == b.witness, "witness invariant")?;
        let par = fpure_check_gens(&gens, p, &FedderConfig { parallel: true, ..cfg }).unwrap();
        check(par.survivors == a.survivors, "parallel fold identical")?;
        Ok(())
    })
}

pub fn scalar_value(s: &Scalar) -> BigInt {
    s.to_bigint()
}

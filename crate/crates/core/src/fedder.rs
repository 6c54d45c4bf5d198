//! Fedder's criterion for complete intersections.
//!
//! For `S/(f_1,…,f_h)` a complete intersection over `F_p`, F-purity is
//! equivalent to `ω^{p−1} ∉ m^[p]` with `ω = f_1⋯f_h`. Since `m^[p]` is
//! the monomial ideal of terms with some exponent `≥ p`, it suffices to
//! expand `ω^{p−1}` in the p-truncated ring and ask whether anything
//! survives.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrices::{build_ideal, commutator, IdealSpec};
use crate::polycore::{Monomial, Poly, Ring, Scalar, VarId};
use crate::sop::{sop, spec_map, specialized_pair, SopVariant, SpecMap};

pub const DEFAULT_TERM_CEILING: usize = 10_000_000;

/// Exponents are stored in a byte, so `p − 1` must fit.
pub const MAX_FOLD_PRIME: u32 = 256;

#[derive(Clone, Copy, Debug)]
pub struct FedderConfig {
    /// Largest live term set allowed during the fold.
    pub term_ceiling: usize,
    pub parallel: bool,
}

impl Default for FedderConfig {
    fn default() -> Self {
        FedderConfig { term_ceiling: DEFAULT_TERM_CEILING, parallel: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessTerm {
    pub monomial: String,
    pub exponents: BTreeMap<String, u32>,
    pub coefficient: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FedderReport {
    pub n: u8,
    pub p: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<SopVariant>,
    pub is_fpure_witnessed: bool,
    pub witness: Option<WitnessTerm>,
    pub survivor_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique_squarefree: Option<bool>,
    pub factors: usize,
    pub omega_vars: usize,
    pub peak_live_terms: usize,
    /// Surviving terms of the truncated `ω^{p−1}`, ascending.
    #[serde(skip)]
    pub survivors: Vec<(Monomial, u32)>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl FedderReport {
    pub fn coefficient_at(&self, m: &Monomial) -> u32 {
        self.survivors
            .binary_search_by(|(s, _)| s.cmp(m))
            .map(|i| self.survivors[i].1)
            .unwrap_or(0)
    }

    pub fn witness_monomial(&self) -> Option<&Monomial> {
        self.survivors.first().map(|(m, _)| m)
    }
}

/// The exact product of the generators, in the given order.
pub fn omega(gens: &[Poly]) -> Result<Poly> {
    let first = gens.first().ok_or_else(|| Error::Unsupported("empty generator list".into()))?;
    gens[1..].iter().try_fold(first.clone(), |acc, g| acc.mul(g))
}

/// Specialized generators, failing if one vanishes.
pub fn specialized_generators(ideal: &IdealSpec, map: &SpecMap) -> Result<Vec<Poly>> {
    let gens = ideal.substitute(map)?;
    if let Some(index) = gens.iter().position(|g| g.is_zero()) {
        return Err(Error::GeneratorVanishes { index });
    }
    Ok(gens)
}

pub fn omega_of(ideal: &IdealSpec, map: &SpecMap) -> Result<Poly> {
    omega(&specialized_generators(ideal, map)?)
}

type Exps = Box<[u8]>;
type Live = FxHashMap<Exps, u32>;

struct Factor {
    terms: Vec<(Exps, u32)>,
    max_exp: Vec<u8>,
    min_deg: u32,
}

struct Truncated {
    vars: Vec<VarId>,
    terms: Vec<(Exps, u32)>,
    factors: usize,
    peak: usize,
}

fn to_dense(g: &Poly, vars: &[VarId], p: u32) -> Result<Factor> {
    let k = vars.len();
    let mut terms = Vec::with_capacity(g.len());
    let mut max_exp = vec![0u8; k];
    let mut min_deg = u32::MAX;
    for (m, c) in g.terms() {
        let c = match c {
            Scalar::Mod(c) => *c,
            Scalar::Int(_) => return Err(Error::NotPrimeField(0)),
        };
        min_deg = min_deg.min(m.degree());
        if m.iter().any(|(_, e)| e >= p) {
            continue;
        }
        let mut d = vec![0u8; k];
        for (v, e) in m.iter() {
            let i = vars.binary_search(&v).expect("variable collected");
            d[i] = e as u8;
            max_exp[i] = max_exp[i].max(e as u8);
        }
        terms.push((d.into_boxed_slice(), c));
    }
    Ok(Factor { terms, max_exp, min_deg })
}

fn multiply_chunk(chunk: &[(Exps, u32)], factor: &Factor, reach: &[u8], need: u32, top: u8, p: u64) -> Live {
    let mut out = Live::default();
    let mut buf = vec![0u8; reach.len()];
    for (a, ca) in chunk {
        'terms: for (b, cb) in &factor.terms {
            for i in 0..buf.len() {
                let e = a[i] as u16 + b[i] as u16;
                if e > top as u16 {
                    continue 'terms;
                }
                buf[i] = e as u8;
            }
            // Later factors add at most `reach[v]` to each v and at least
            // `need` in total; drop terms that can no longer fit under p.
            let room: u32 = buf.iter().zip(reach).map(|(&e, &r)| (top - e).min(r) as u32).sum();
            if room < need {
                continue;
            }
            let c = (*ca as u64 * *cb as u64) % p;
            let slot = out.entry(buf.clone().into_boxed_slice()).or_insert(0);
            *slot = ((*slot as u64 + c) % p) as u32;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn merge(mut a: Live, b: Live, p: u64) -> Live {
    let (mut a, b) = if a.len() >= b.len() { (a, b) } else { (b, std::mem::take(&mut a)) };
    for (k, c) in b {
        let slot = a.entry(k).or_insert(0);
        *slot = ((*slot as u64 + c as u64) % p) as u32;
    }
    a.retain(|_, c| *c != 0);
    a
}

const PAR_CHUNK: usize = 4096;

/// `ω^{p−1}` modulo `(v^p)`, folding one factor at a time.
fn truncated_power(gens: &[Poly], p: u32, cfg: &FedderConfig) -> Result<Truncated> {
    if p > MAX_FOLD_PRIME {
        return Err(Error::ScaleExceeded(format!("p = {p} exceeds the fold limit {MAX_FOLD_PRIME}")));
    }
    let ring = gens.first().ok_or_else(|| Error::Unsupported("empty generator list".into()))?.ring();
    let gens: Vec<Poly> = gens.iter().map(|g| g.to_char(p)).collect::<Result<_>>()?;
    if let Some(g) = gens.iter().find(|g| g.ring().n != ring.n) {
        return Err(Error::RingMismatch(ring, g.ring()));
    }
    let vars: Vec<VarId> = {
        let set: std::collections::BTreeSet<VarId> = gens.iter().flat_map(|g| g.vars()).collect();
        set.into_iter().collect()
    };
    let k = vars.len();
    let top = (p - 1) as u8;
    let pm = p as u64;

    let mut factors: Vec<Factor> = Vec::new();
    for g in &gens {
        let f = to_dense(g, &vars, p)?;
        for _ in 0..p - 1 {
            factors.push(Factor { terms: f.terms.clone(), max_exp: f.max_exp.clone(), min_deg: f.min_deg });
        }
    }
    factors.sort_by_key(|f| f.terms.len());

    // suffix[t]: reach and degree still to come after factor t.
    let mut reach = vec![vec![0u8; k]; factors.len() + 1];
    let mut need = vec![0u32; factors.len() + 1];
    for t in (0..factors.len()).rev() {
        let (head, tail) = reach.split_at_mut(t + 1);
        for ((r, next), m) in head[t].iter_mut().zip(&tail[0]).zip(&factors[t].max_exp) {
            *r = next.saturating_add(*m);
        }
        need[t] = need[t + 1] + if factors[t].terms.is_empty() { 0 } else { factors[t].min_deg };
    }

    let mut live: Vec<(Exps, u32)> = vec![(vec![0u8; k].into_boxed_slice(), 1)];
    let mut peak = 1;
    for (t, factor) in factors.iter().enumerate() {
        let (r, d) = (&reach[t + 1], need[t + 1]);
        let next = if cfg.parallel && live.len() > PAR_CHUNK {
            live.par_chunks(PAR_CHUNK)
                .map(|c| Ok(multiply_chunk(c, factor, r, d, top, pm)))
                .try_reduce(Live::default, |a, b| {
                    let m = merge(a, b, pm);
                    if m.len() > cfg.term_ceiling {
                        Err(())
                    } else {
                        Ok(m)
                    }
                })
                .map_err(|_| ceiling(cfg))?
        } else {
            multiply_chunk(&live, factor, r, d, top, pm)
        };
        if next.len() > cfg.term_ceiling {
            return Err(ceiling(cfg));
        }
        peak = peak.max(next.len());
        live = next.into_iter().collect();
        if live.is_empty() {
            break;
        }
    }

    live.sort_unstable();
    Ok(Truncated { vars, terms: live, factors: factors.len(), peak })
}

fn ceiling(cfg: &FedderConfig) -> Error {
    Error::ScaleExceeded(format!("live term count exceeded the ceiling {}", cfg.term_ceiling))
}

fn to_monomial(vars: &[VarId], e: &[u8]) -> Monomial {
    Monomial::from_pairs(vars.iter().zip(e).filter(|(_, &e)| e > 0).map(|(v, &e)| (*v, e as u32)))
        .expect("exponents below p")
}

/// The p-truncation of `ω^{p−1}` as a polynomial over `F_p`.
pub fn truncated_omega_power(gens: &[Poly], p: u32, cfg: &FedderConfig) -> Result<Poly> {
    let t = truncated_power(gens, p, cfg)?;
    let ring = gens[0].ring().with_char(p)?;
    Poly::from_terms(ring, t.terms.iter().map(|(e, c)| (to_monomial(&t.vars, e), Scalar::Mod(*c))))
}

/// Fedder's criterion on an explicit list of complete-intersection
/// generators.
pub fn fpure_check_gens(gens: &[Poly], p: u32, cfg: &FedderConfig) -> Result<FedderReport> {
    let start = Instant::now();
    if !crate::polycore::is_prime(p as u64) {
        return Err(Error::NotPrimeField(p));
    }
    let t = truncated_power(gens, p, cfg)?;
    let mut survivors: Vec<(Monomial, u32)> = t.terms.iter().map(|(e, c)| (to_monomial(&t.vars, e), *c)).collect();
    survivors.sort_by(|a, b| a.0.cmp(&b.0));
    let witness = survivors.first().map(|(m, c)| WitnessTerm {
        monomial: m.to_string(),
        exponents: m.iter().map(|(v, e)| (v.to_string(), e)).collect(),
        coefficient: c.to_string(),
    });
    Ok(FedderReport {
        n: gens[0].ring().n,
        p,
        variant: None,
        is_fpure_witnessed: !survivors.is_empty(),
        witness,
        survivor_count: survivors.len(),
        unique_squarefree: (p == 2).then_some(survivors.len() == 1),
        factors: t.factors,
        omega_vars: t.vars.len(),
        peak_live_terms: t.peak,
        survivors,
        elapsed: start.elapsed(),
    })
}

pub fn fpure_check_ci(ideal: &IdealSpec, map: &SpecMap, p: u32, cfg: &FedderConfig) -> Result<FedderReport> {
    fpure_check_gens(&specialized_generators(ideal, map)?, p, cfg)
}

/// The zero-set specialization of `variant` (identifications dropped), as
/// used in the F-purity arguments.
pub fn fedder_setup(n: u8, p: u32, variant: SopVariant) -> Result<(IdealSpec, SpecMap)> {
    let ideal = build_ideal(n, p, variant.ideal())?;
    let map = spec_map(&sop(n, p, variant, true)?)?;
    Ok((ideal, map))
}

pub fn fpure_check(n: u8, p: u32, variant: SopVariant, cfg: &FedderConfig) -> Result<FedderReport> {
    let (ideal, map) = fedder_setup(n, p, variant)?;
    let mut rep = fpure_check_ci(&ideal, &map, p, cfg)?;
    rep.variant = Some(variant);
    Ok(rep)
}

/// Monomials of the 2-truncated `ω` with every exponent at most one.
pub fn squarefree_witnesses(gens: &[Poly], cfg: &FedderConfig) -> Result<Vec<Monomial>> {
    Ok(fpure_check_gens(gens, 2, cfg)?.survivors.into_iter().map(|(m, _)| m).collect())
}

/// Product of every variable occurring in `gens`, raised to `p − 1`.
pub fn full_power_monomial(gens: &[Poly], p: u32) -> Result<Monomial> {
    let vars: std::collections::BTreeSet<VarId> = gens.iter().flat_map(|g| g.vars()).collect();
    Monomial::from_pairs(vars.into_iter().map(|v| (v, p - 1)))
}

/// Coefficient of `∏ v^{p−1}` (all 14 surviving variables) in `ω^{p−1}`
/// for the `n = 4`, characteristic `p ≠ 2` system.
pub fn target_coefficient(p: u32, cfg: &FedderConfig) -> Result<u32> {
    if p == 2 {
        return Err(Error::Unsupported("target coefficient needs odd p".into()));
    }
    let (ideal, map) = fedder_setup(4, p, SopVariant::FullEven)?;
    let gens = specialized_generators(&ideal, &map)?;
    let target = full_power_monomial(&gens, p)?;
    Ok(fpure_check_gens(&gens, p, cfg)?.coefficient_at(&target))
}

#[derive(Clone, Debug, Serialize)]
pub struct InductionReport {
    pub n: u8,
    pub p: u32,
    pub variant: SopVariant,
    pub fedder: FedderReport,
    /// Surviving variables in the first or last row or column.
    pub border_vars: Vec<String>,
    /// Every entry of `Z = C̄|inner − C̄⁰` lies in the ideal of `border_vars`.
    pub premise_a: bool,
    pub z_terms_checked: usize,
    /// The witness restricted to inner variables, shifted down, is a
    /// surviving term for the `(n−2)` system.
    pub premise_b: bool,
    pub inner_witness: Option<String>,
    pub inner_coefficient: u32,
    pub passed: bool,
    pub notes: Vec<String>,
}

/// One induction step of the F-purity argument, checked directly at size
/// `n`.
pub fn induction_witness_check(n: u8, p: u32, cfg: &FedderConfig) -> Result<InductionReport> {
    if n < 5 {
        return Err(Error::Unsupported(format!("induction step needs n >= 5, got {n}")));
    }
    let variant = SopVariant::full_for(n, p);
    let fedder = fpure_check(n, p, variant, cfg)?;
    let ring = Ring::new(n, p)?;
    let nu = n;

    let on_border = |v: &VarId| v.row == 1 || v.row == nu || v.col == 1 || v.col == nu;
    let (_, map) = fedder_setup(n, p, variant)?;
    let border: Vec<VarId> = map.surviving(n).into_iter().filter(|v| on_border(v)).collect();

    let (xb, yb) = specialized_pair(n, p, variant, true)?;
    let c = commutator(&xb, &yb)?;
    let c0 = commutator(&xb.inner(), &yb.inner())?;
    let inner = c.inner();
    let z = inner.sub(&c0)?;
    let mut z_terms = 0;
    let mut premise_a = true;
    for row in z.rows() {
        for e in row {
            for (m, _) in e.terms() {
                z_terms += 1;
                premise_a &= m.vars().any(|v| border.contains(&v));
            }
        }
    }
    debug_assert_eq!(ring.n, n);

    let mut notes = Vec::new();
    let (premise_b, inner_witness, inner_coefficient) = match fedder.witness_monomial() {
        None => {
            notes.push("no witness at size n".into());
            (false, None, 0)
        }
        Some(w) => {
            let inside = w.restrict(|v| !on_border(&v));
            let shifted = Monomial::from_pairs(inside.iter().map(|(v, e)| (v.shifted(-1).expect("inner"), e)))?;
            let small = fpure_check(n - 2, p, SopVariant::full_for(n - 2, p), cfg)?;
            let coeff = small.coefficient_at(&shifted);
            if small.witness_monomial() != Some(&shifted) {
                notes.push(format!(
                    "restricted witness {shifted} differs from the (n-2) canonical witness {}",
                    small.witness_monomial().map_or("none".into(), |m| m.to_string())
                ));
            }
            (coeff != 0, Some(shifted.to_string()), coeff)
        }
    };

    let passed = fedder.is_fpure_witnessed && premise_a && premise_b;
    Ok(InductionReport {
        n,
        p,
        variant,
        fedder,
        border_vars: border.iter().map(|v| v.to_string()).collect(),
        premise_a,
        z_terms_checked: z_terms,
        premise_b,
        inner_witness,
        inner_coefficient,
        passed,
        notes,
    })
}

/// Generators of `variant`'s ideal under its zero set, by name.
pub fn fedder_generators(n: u8, p: u32, variant: SopVariant) -> Result<Vec<Poly>> {
    let (ideal, map) = fedder_setup(n, p, variant)?;
    specialized_generators(&ideal, &map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> FedderConfig {
        FedderConfig::default()
    }

    fn mono(s: &[&str]) -> Monomial {
        Monomial::product_of(s.iter().map(|v| v.parse::<VarId>().unwrap())).unwrap()
    }

    #[test]
    fn n3_generators_and_witness() {
        let gens = fedder_generators(3, 0, SopVariant::FullOdd).unwrap();
        let shown: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(
            shown,
            [
                "-x_2_1*y_1_2 - x_3_1*y_1_3",
                "x_2_1*y_1_2 - x_3_2*y_2_3 + x_2_3*y_3_2",
                "-x_2_3*y_1_2",
                "-x_2_1*y_3_2"
            ]
        );
        let rep = fpure_check(3, 2, SopVariant::FullOdd, &cfg()).unwrap();
        assert!(rep.is_fpure_witnessed);
        let w = mono(&["x_2_1", "x_2_3", "x_3_1", "x_3_2", "y_1_2", "y_1_3", "y_2_3", "y_3_2"]);
        assert_eq!(rep.coefficient_at(&w), 1);
        assert_eq!(rep.survivor_count, 1);
    }

    #[test]
    fn synthetic_ideals() {
        let r = Ring::new(1, 0).unwrap();
        let x = Poly::var(r, VarId::x(1, 1)).unwrap();
        let y = Poly::var(r, VarId::y(1, 1)).unwrap();
        let rep = fpure_check_gens(&[x.pow(2).unwrap()], 2, &cfg()).unwrap();
        assert!(!rep.is_fpure_witnessed);
        assert!(squarefree_witnesses(&[x.pow(2).unwrap()], &cfg()).unwrap().is_empty());
        let rep = fpure_check_gens(&[x.mul(&y).unwrap()], 3, &cfg()).unwrap();
        assert!(rep.is_fpure_witnessed);
        let w = rep.witness.unwrap();
        assert_eq!(w.monomial, "x_1_1^2*y_1_1^2");
        assert_eq!(w.coefficient, "1");
        assert_eq!(omega(std::slice::from_ref(&x)).unwrap(), x);
    }

    #[test]
    fn ceiling_trips() {
        let small = FedderConfig { term_ceiling: 0, parallel: false };
        let err = fpure_check(3, 3, SopVariant::FullOdd, &small).unwrap_err();
        assert!(err.is_scale_exceeded());
        assert!(fpure_check(3, 257, SopVariant::FullOdd, &cfg()).unwrap_err().is_scale_exceeded());
    }

    #[test]
    fn n4_char2_unique() {
        let rep = fpure_check(4, 2, SopVariant::FullEvenChar2, &cfg()).unwrap();
        assert_eq!(rep.unique_squarefree, Some(true));
        assert_eq!(
            rep.witness.unwrap().monomial,
            mono(&[
                "x_2_4", "x_3_1", "x_3_2", "x_3_4", "x_4_1", "x_4_2", "x_4_3", "y_1_3", "y_1_4", "y_2_3", "y_2_4",
                "y_3_4", "y_4_2", "y_4_3"
            ])
            .to_string()
        );
    }

    #[test]
    fn n4_target_p3() {
        assert_eq!(target_coefficient(3, &cfg()).unwrap(), 1);
    }
}

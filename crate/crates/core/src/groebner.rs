//! Buchberger's algorithm over `F_p` in degrevlex, with the coprime and
//! chain criteria and the normal selection strategy.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrices::build_ideal;
use crate::polycore::{Monomial, Poly, Ring, Scalar, VarId};
use crate::sop::{sop, spec_map, SopVariant};

/// Prime used for characteristic-0 claims.
pub const CHAR0_PROXY: u32 = 32003;

pub const DEFAULT_MAX_PAIRS: usize = 200_000;

/// Degrevlex on a subset of the variables, ordered as [`VarId`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermOrder {
    pub vars: BTreeSet<VarId>,
}

impl TermOrder {
    pub fn degrevlex<I: IntoIterator<Item = VarId>>(vars: I) -> TermOrder {
        TermOrder { vars: vars.into_iter().collect() }
    }

    /// All variables occurring in `polys`.
    pub fn covering(polys: &[Poly]) -> TermOrder {
        TermOrder { vars: polys.iter().flat_map(|p| p.vars()).collect() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GbStats {
    pub pairs_total: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub skipped_coprime: usize,
    pub skipped_chain: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub order: TermOrder,
    ring: Ring,
    /// Monic, sorted by ascending leading monomial.
    pub polys: Vec<Poly>,
    pub stats: GbStats,
}

impl GroebnerBasis {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().filter_map(|g| g.leading_monomial().cloned()).collect()
    }

    /// Least `k` with `v^k` a leading monomial, per variable.
    pub fn pure_power_witnesses(&self, vars: &BTreeSet<VarId>) -> BTreeMap<VarId, u32> {
        let mut out = BTreeMap::new();
        for m in self.leading_monomials() {
            if let Some(v) = m.pure_power_var() {
                if vars.contains(&v) {
                    let e = m.degree();
                    out.entry(v).and_modify(|k: &mut u32| *k = (*k).min(e)).or_insert(e);
                }
            }
        }
        out
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(normal_form(f, self)?.is_zero())
    }
}

/// Dense-coefficient polynomial, terms in descending order.
#[derive(Clone, Debug)]
struct Sparse {
    terms: Vec<(Monomial, u32)>,
}

impl Sparse {
    fn from_poly(f: &Poly) -> Sparse {
        let terms = f
            .terms()
            .rev()
            .map(|(m, c)| match c {
                Scalar::Mod(c) => (m.clone(), *c),
                Scalar::Int(_) => unreachable!("prime field checked by caller"),
            })
            .collect();
        Sparse { terms }
    }

    fn to_poly(&self, ring: Ring) -> Result<Poly> {
        Poly::from_terms(ring, self.terms.iter().map(|(m, c)| (m.clone(), Scalar::Mod(*c))))
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn monic(mut self, p: u64) -> Sparse {
        if let Some(&(_, c)) = self.terms.first() {
            if c != 1 {
                let inv = inv_mod(c as u64, p);
                for t in &mut self.terms {
                    t.1 = (t.1 as u64 * inv % p) as u32;
                }
            }
        }
        self
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::polycore::mod_pow(a, p - 2, p)
}

fn add_into(acc: &mut BTreeMap<Monomial, u32>, m: Monomial, c: u64, p: u64) {
    if c == 0 {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c as u32);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = (*e.get() as u64 + c) % p;
            if s == 0 {
                e.remove();
            } else {
                *e.get_mut() = s as u32;
            }
        }
    }
}

/// Full reduction of `f` by the monic `basis`.
fn reduce(f: &Sparse, basis: &[Sparse], p: u64) -> Result<Sparse> {
    let mut acc: BTreeMap<Monomial, u32> = f.terms.iter().cloned().collect();
    let mut rem = Vec::new();
    while let Some((m, c)) = acc.pop_last() {
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m).expect("divides");
                let neg = p - c as u64;
                for (gm, gc) in &g.terms[1..] {
                    add_into(&mut acc, gm.mul(&q)?, neg * *gc as u64 % p, p);
                }
            }
            None => rem.push((m, c)),
        }
    }
    Ok(Sparse { terms: rem })
}

fn s_poly(f: &Sparse, g: &Sparse, p: u64) -> Result<Sparse> {
    let l = f.lm().lcm(g.lm());
    let qf = f.lm().quotient_of(&l).expect("lcm");
    let qg = g.lm().quotient_of(&l).expect("lcm");
    let mut acc = BTreeMap::new();
    for (m, c) in &f.terms[1..] {
        add_into(&mut acc, m.mul(&qf)?, *c as u64, p);
    }
    for (m, c) in &g.terms[1..] {
        add_into(&mut acc, m.mul(&qg)?, (p - *c as u64) % p, p);
    }
    Ok(Sparse { terms: acc.into_iter().rev().collect() })
}

fn prime_ring(polys: &[Poly]) -> Result<Ring> {
    let ring = polys
        .first()
        .map(|f| f.ring())
        .ok_or_else(|| Error::Unsupported("empty generator list".into()))?;
    if let Some(f) = polys.iter().find(|f| f.ring() != ring) {
        return Err(Error::RingMismatch(ring, f.ring()));
    }
    ring.prime()?;
    Ok(ring)
}

/// Remainder of `f` under division by `gb`; zero iff `f` is in the ideal.
pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Result<Poly> {
    if f.ring() != gb.ring {
        return Err(Error::RingMismatch(gb.ring, f.ring()));
    }
    let p = gb.ring.prime()? as u64;
    let basis: Vec<Sparse> = gb.polys.iter().map(Sparse::from_poly).collect();
    reduce(&Sparse::from_poly(f), &basis, p)?.to_poly(gb.ring)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Fails with [`Error::ScaleExceeded`] once more than `max_pairs` critical
/// pairs have been considered.
pub fn buchberger(gens: &[Poly], order: &TermOrder, max_pairs: usize) -> Result<GroebnerBasis> {
    let ring = prime_ring(gens)?;
    let p = ring.prime()? as u64;
    for g in gens {
        if let Some(v) = g.vars().into_iter().find(|v| !order.vars.contains(v)) {
            return Err(Error::Unsupported(format!("{v} is outside the term order")));
        }
    }

    let mut basis: Vec<Sparse> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let s = Sparse::from_poly(g).monic(p);
        if !basis.iter().any(|b| b.terms == s.terms) {
            basis.push(s);
        }
    }

    let mut stats = GbStats::default();
    let mut queue: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            queue.insert((basis[i].lm().lcm(basis[j].lm()), i, j));
            pending.insert((i, j));
        }
    }

    while let Some((lcm, i, j)) = queue.pop_first() {
        pending.remove(&(i, j));
        stats.pairs_total += 1;
        if stats.pairs_total > max_pairs {
            return Err(Error::ScaleExceeded(format!(
                "Buchberger exceeded {max_pairs} critical pairs"
            )));
        }
        if basis[i].lm().is_coprime(basis[j].lm()) {
            stats.skipped_coprime += 1;
            continue;
        }
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lcm)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            stats.skipped_chain += 1;
            continue;
        }
        stats.pairs_reduced += 1;
        let r = reduce(&s_poly(&basis[i], &basis[j], p)?, &basis, p)?;
        if r.is_zero() {
            stats.zero_reductions += 1;
            continue;
        }
        let r = r.monic(p);
        let new = basis.len();
        for (t, b) in basis.iter().enumerate() {
            queue.insert((b.lm().lcm(r.lm()), t, new));
            pending.insert((t, new));
        }
        basis.push(r);
    }

    // Minimalize, then inter-reduce tails.
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&i| {
            !(0..basis.len()).any(|j| {
                j != i && basis[j].lm().divides(basis[i].lm()) && (basis[j].lm() != basis[i].lm() || j < i)
            })
        })
        .collect();
    let minimal: Vec<Sparse> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for g in &minimal {
        let tail = Sparse { terms: g.terms[1..].to_vec() };
        let mut t = reduce(&tail, &minimal, p)?;
        t.terms.insert(0, g.terms[0].clone());
        reduced.push(t);
    }
    reduced.sort_by(|a, b| a.lm().cmp(b.lm()));

    Ok(GroebnerBasis {
        order: order.clone(),
        ring,
        polys: reduced.iter().map(|s| s.to_poly(ring)).collect::<Result<_>>()?,
        stats,
    })
}

/// Every variable in `vars` has a pure power among the leading monomials.
pub fn is_zero_dimensional(gb: &GroebnerBasis, vars: &BTreeSet<VarId>) -> bool {
    gb.pure_power_witnesses(vars).len() == vars.len()
}

#[derive(Clone, Debug, Serialize)]
pub struct SopCounts {
    pub sop_elements: usize,
    pub ideal_generators: usize,
    pub ambient_vars: usize,
    pub complete: bool,
}

/// Reduced bases of the ideal's image under the zero set only and under the
/// full map, against the expected monomial ideals.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormCheck {
    pub partial_image_gb: Vec<String>,
    pub expected_partial: Vec<String>,
    pub image: Vec<String>,
    pub expected_image: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SopReport {
    pub n: u8,
    #[serde(rename = "char")]
    pub characteristic: u32,
    pub variant: SopVariant,
    pub verdict: bool,
    pub surviving_vars: Vec<String>,
    pub gb_size: usize,
    pub pure_power_witnesses: BTreeMap<String, u32>,
    pub counts: SopCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormCheck>,
    pub stats: GbStats,
    pub notes: Vec<String>,
}

fn sorted_strings(polys: &[Poly]) -> Vec<String> {
    let mut v: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
    v.sort();
    v
}

fn closed_form(n: u8, ring: Ring, variant: SopVariant, max_pairs: usize) -> Result<ClosedFormCheck> {
    let ideal = build_ideal(n, ring.characteristic, variant.ideal())?;
    let partial = spec_map(&sop(n, ring.characteristic, variant, true)?)?;
    let full = spec_map(&sop(n, ring.characteristic, variant, false)?)?;

    let x1 = |j: u8| VarId::x(1, j);
    let (partial_monos, image_monos): (Vec<Monomial>, Vec<Monomial>) = match variant {
        SopVariant::DiagI => (2..=n)
            .map(|j| {
                Ok((
                    Monomial::product_of([x1(j), VarId::y(j, 1)])?,
                    Monomial::from_pairs([(x1(j), 2)])?,
                ))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip(),
        _ => (1..=n)
            .map(|i| {
                Ok((
                    Monomial::product_of([VarId::y(i, 1), x1(n + 1 - i)])?,
                    Monomial::from_pairs([(x1(n + 1 - i), 2)])?,
                ))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip(),
    };
    let as_polys = |ms: Vec<Monomial>| -> Result<Vec<Poly>> {
        ms.into_iter().map(|m| Poly::from_int_terms(ring, [(1, m)])).collect()
    };
    let expected_partial = as_polys(partial_monos)?;
    let expected_image = as_polys(image_monos)?;

    let partial_gens = ideal.substitute(&partial)?;
    let pg = buchberger(&partial_gens, &TermOrder::covering(&partial_gens), max_pairs)?;
    let image_gens: Vec<Poly> = ideal.substitute(&full)?.into_iter().filter(|g| !g.is_zero()).collect();
    let ig = buchberger(&image_gens, &TermOrder::covering(&image_gens), max_pairs)?;

    let partial_gb = sorted_strings(&pg.polys);
    let expected_partial = sorted_strings(&expected_partial);
    let image = sorted_strings(&ig.polys);
    let expected_image = sorted_strings(&expected_image);
    let ok = partial_gb == expected_partial && image == expected_image;
    Ok(ClosedFormCheck {
        partial_image_gb: partial_gb,
        expected_partial,
        image,
        expected_image,
        ok,
    })
}

/// Checks that `variant`'s system of parameters, sent to zero, leaves a
/// zero-dimensional quotient: specializes the ideal, computes a Gröbner
/// basis over the surviving variables and looks for pure powers.
///
/// `characteristic = 0` is checked over [`CHAR0_PROXY`].
pub fn verify_sop(n: u8, characteristic: u32, variant: SopVariant, max_pairs: usize) -> Result<SopReport> {
    let mut notes = Vec::new();
    let p = if characteristic == 0 {
        notes.push(format!(
            "characteristic 0 checked over F_{CHAR0_PROXY} as a positive-characteristic surrogate"
        ));
        CHAR0_PROXY
    } else {
        characteristic
    };
    let ring = Ring::new(n, p)?;
    ring.prime()?;
    if variant.is_full() && n > 4 {
        return Err(Error::ScaleExceeded(format!(
            "{variant} at n={n} is outside the Gröbner path (n <= 4); use the recursion identities"
        )));
    }

    let list = sop(n, p, variant, false)?;
    let map = spec_map(&list)?;
    let ideal = build_ideal(n, p, variant.ideal())?;
    let counts = SopCounts {
        sop_elements: list.elements.len(),
        ideal_generators: ideal.generators.len(),
        ambient_vars: 2 * (n as usize) * (n as usize),
        complete: list.elements.len() + ideal.generators.len() == 2 * (n as usize) * (n as usize),
    };

    let closed = if variant.is_full() {
        None
    } else {
        Some(closed_form(n, ring, variant, max_pairs)?)
    };

    let surviving: BTreeSet<VarId> = map.surviving(n).into_iter().collect();
    let gens: Vec<Poly> = ideal.substitute(&map)?.into_iter().filter(|g| !g.is_zero()).collect();
    let (gb_size, witnesses, stats, zero_dim) = if gens.is_empty() {
        notes.push("every generator vanishes under the specialization".into());
        (0, BTreeMap::new(), GbStats::default(), surviving.is_empty())
    } else {
        let gb = buchberger(&gens, &TermOrder::degrevlex(surviving.iter().copied()), max_pairs)?;
        let w = gb.pure_power_witnesses(&surviving);
        let z = is_zero_dimensional(&gb, &surviving);
        (gb.len(), w, gb.stats.clone(), z)
    };

    let verdict = zero_dim && counts.complete && closed.as_ref().is_none_or(|c| c.ok);
    Ok(SopReport {
        n,
        characteristic: p,
        variant,
        verdict,
        surviving_vars: surviving.iter().map(|v| v.to_string()).collect(),
        gb_size,
        pure_power_witnesses: witnesses.into_iter().map(|(v, e)| (v.to_string(), e)).collect(),
        counts,
        closed_form: closed,
        stats,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: u32) -> Ring {
        Ring::new(3, p).unwrap()
    }

    fn v(ring: Ring, id: VarId) -> Poly {
        Poly::var(ring, id).unwrap()
    }

    #[test]
    fn trivial_bases() {
        let ring = r(5);
        let (x, y) = (v(ring, VarId::x(1, 1)), v(ring, VarId::x(1, 2)));
        let gens = vec![x.pow(2).unwrap(), x.mul(&y).unwrap(), y.pow(2).unwrap()];
        let gb = buchberger(&gens, &TermOrder::covering(&gens), 100).unwrap();
        assert_eq!(gb.len(), 3);
        let gens = vec![x.sub(&y).unwrap(), y.clone()];
        let gb = buchberger(&gens, &TermOrder::covering(&gens), 100).unwrap();
        let mut want = vec![x.clone(), y.clone()];
        want.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
        assert_eq!(gb.polys, want);
        assert!(normal_form(&Poly::one(ring), &gb).unwrap() == Poly::one(ring));
    }

    #[test]
    fn zero_dimensionality() {
        let ring = r(3);
        let (x, y) = (v(ring, VarId::x(1, 1)), v(ring, VarId::x(1, 2)));
        let vars: BTreeSet<_> = [VarId::x(1, 1), VarId::x(1, 2)].into();
        let gens = vec![x.pow(2).unwrap(), y.pow(2).unwrap()];
        assert!(is_zero_dimensional(&buchberger(&gens, &TermOrder::covering(&gens), 10).unwrap(), &vars));
        let gens = vec![x.mul(&y).unwrap()];
        let order = TermOrder::degrevlex(vars.iter().copied());
        assert!(!is_zero_dimensional(&buchberger(&gens, &order, 10).unwrap(), &vars));
    }

    #[test]
    fn rejects_integers_and_guard() {
        let ring = Ring::new(3, 0).unwrap();
        let x = v(ring, VarId::x(1, 1));
        assert!(buchberger(&[x], &TermOrder::degrevlex([VarId::x(1, 1)]), 10).is_err());
        let err = verify_sop(3, 5, SopVariant::FullOdd, 0).unwrap_err();
        assert!(err.is_scale_exceeded());
    }

    #[test]
    fn n3_full_odd() {
        for p in [2, 3, 5] {
            let rep = verify_sop(3, p, SopVariant::FullOdd, DEFAULT_MAX_PAIRS).unwrap();
            assert!(rep.verdict, "p={p}: {rep:?}");
            assert_eq!(rep.surviving_vars, ["x_2_1", "x_2_3", "x_3_1", "x_3_2"]);
        }
    }

    #[test]
    fn n4_full_even_relation() {
        let rep = verify_sop(4, 5, SopVariant::FullEven, DEFAULT_MAX_PAIRS).unwrap();
        assert!(rep.verdict);
        let ring = Ring::new(4, 5).unwrap();
        let map = spec_map(&sop(4, 5, SopVariant::FullEven, false).unwrap()).unwrap();
        let gens: Vec<Poly> = build_ideal(4, 5, crate::matrices::IdealName::Full)
            .unwrap()
            .substitute(&map)
            .unwrap();
        let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let gb = buchberger(&gens, &TermOrder::covering(&gens), DEFAULT_MAX_PAIRS).unwrap();
        let x31 = v(ring, VarId::x(3, 1));
        let x34 = v(ring, VarId::x(3, 4));
        let f = x31.pow(4).unwrap().sub(&x31.pow(2).unwrap().mul(&x34.pow(2).unwrap()).unwrap()).unwrap();
        assert!(normal_form(&f, &gb).unwrap().is_zero());
        for g in &gb.polys {
            assert!(normal_form(g, &gb).unwrap().is_zero());
        }
    }

    #[test]
    fn diag_and_anti_closed_forms() {
        let rep = verify_sop(5, 3, SopVariant::DiagI, DEFAULT_MAX_PAIRS).unwrap();
        assert!(rep.verdict, "{rep:?}");
        assert_eq!(rep.closed_form.unwrap().expected_partial.len(), 4);
        let rep = verify_sop(4, 3, SopVariant::AntiJ, DEFAULT_MAX_PAIRS).unwrap();
        assert!(rep.verdict, "{rep:?}");
        assert_eq!(
            rep.closed_form.unwrap().image,
            ["x_1_1^2", "x_1_2^2", "x_1_3^2", "x_1_4^2"]
        );
    }
}

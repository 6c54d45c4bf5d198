use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::monomial::Monomial;
use super::scalar::{Ring, Scalar};
use super::var::VarId;
use crate::error::{Error, Result};
use crate::sop::SpecMap;

/// A sparse polynomial in canonical form: zero coefficients are never
/// stored, so two equal polynomials have identical term maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(ring: Ring) -> Poly {
        Poly { ring, terms: BTreeMap::new() }
    }

    pub fn one(ring: Ring) -> Poly {
        Poly::constant(ring, 1)
    }

    pub fn constant(ring: Ring, c: i64) -> Poly {
        Poly::from_terms(ring, [(Monomial::one(), ring.from_i64(c))]).expect("constant is valid")
    }

    pub fn var(ring: Ring, v: VarId) -> Result<Poly> {
        Poly::from_terms(ring, [(Monomial::var(v), ring.one())])
    }

    /// Sums the given terms, dropping zeros. Coefficients are coerced into
    /// the ring, and every variable must fit the ring's `n`.
    pub fn from_terms<I>(ring: Ring, terms: I) -> Result<Poly>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Poly::zero(ring);
        for (m, c) in terms {
            if let Some(v) = m.vars().find(|v| !v.fits(ring.n)) {
                return Err(Error::InvalidRing(format!("variable {v} outside ring {ring}")));
            }
            p.add_term(m, ring.coerce(&c));
        }
        Ok(p)
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms<I>(ring: Ring, terms: I) -> Result<Poly>
    where
        I: IntoIterator<Item = (i64, Monomial)>,
    {
        Poly::from_terms(ring, terms.into_iter().map(|(c, m)| (m, ring.from_i64(c))))
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.ring.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.last_key_value()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.last_key_value().map(|(m, _)| m)
    }

    pub fn coeff_of(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.ring.neg(c))).collect();
        Poly { ring: self.ring, terms }
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero(self.ring);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(c, d));
        }
        out
    }

    /// `c · m · self`.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Result<Poly> {
        let mut terms = BTreeMap::new();
        for (n, d) in &self.terms {
            let prod = self.ring.mul(c, d);
            if !prod.is_zero() {
                // Multiplying by a fixed monomial preserves the order, so
                // no collisions can occur here.
                terms.insert(n.mul(m)?, prod);
            }
        }
        Ok(Poly { ring: self.ring, terms })
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        self.mul_filtered(other, |_| true)
    }

    fn mul_filtered<F: Fn(&Monomial) -> bool>(&self, other: &Poly, keep: F) -> Result<Poly> {
        let mut out = Poly::zero(self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2)?;
                if keep(&m) {
                    out.add_term(m, self.ring.mul(c1, c2));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Poly> {
        let mut acc = Poly::one(self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Image in the quotient by `(v^p : every variable v)`: drops every term
    /// with an exponent `≥ p`. Requires a prime-field ring.
    pub fn truncate(&self) -> Result<Poly> {
        let p = self.ring.prime()?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.max_exponent() < p)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(Poly { ring: self.ring, terms })
    }

    /// Product followed by p-truncation, without materializing the
    /// truncated terms.
    pub fn truncated_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let p = self.ring.prime()?;
        self.mul_filtered(other, |m| m.max_exponent() < p)
    }

    /// `self^e` in the p-truncated ring, truncating after every product.
    pub fn truncated_pow(&self, e: u32) -> Result<Poly> {
        let base = self.truncate()?;
        let mut acc = Poly::one(self.ring).truncate()?;
        for _ in 0..e {
            acc = acc.truncated_mul(&base)?;
        }
        Ok(acc)
    }

    /// Applies a specialization: zeroed variables go to 0, identified
    /// variables to their (resolved) target.
    pub fn substitute(&self, map: &SpecMap) -> Result<Poly> {
        let mut out = Poly::zero(self.ring);
        'terms: for (m, c) in &self.terms {
            let mut pairs = Vec::new();
            for (v, e) in m.iter() {
                match map.image(v) {
                    None => continue 'terms,
                    Some(w) => pairs.push((w, e)),
                }
            }
            out.add_term(Monomial::from_pairs(pairs)?, c.clone());
        }
        Ok(out)
    }

    /// Renames variables through `f` into `ring` (which may have a
    /// different size or characteristic).
    pub fn map_vars<F>(&self, ring: Ring, f: F) -> Result<Poly>
    where
        F: Fn(VarId) -> Option<VarId>,
    {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut pairs = Vec::new();
            for (v, e) in m.iter() {
                let w = f(v).ok_or_else(|| Error::InvalidSubstitution(format!("no image for {v}")))?;
                pairs.push((w, e));
            }
            out.push((Monomial::from_pairs(pairs)?, c.clone()));
        }
        Poly::from_terms(ring, out)
    }

    /// The same polynomial with coefficients reduced into characteristic `p`.
    pub fn to_char(&self, p: u32) -> Result<Poly> {
        let ring = self.ring.with_char(p)?;
        Poly::from_terms(ring, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Multiplies by the inverse of the leading coefficient (prime fields).
    pub fn monic(&self) -> Result<Poly> {
        match self.leading_term() {
            None => Ok(self.clone()),
            Some((_, c)) => Ok(self.scale(&self.ring.inv(c)?)),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32) -> Ring {
        Ring::new(3, p).unwrap()
    }

    fn v(r: Ring, var: VarId) -> Poly {
        Poly::var(r, var).unwrap()
    }

    const X12: VarId = VarId::x(1, 2);
    const X13: VarId = VarId::x(1, 3);
    const Y21: VarId = VarId::y(2, 1);

    #[test]
    fn add_examples() {
        let r = ring(0);
        let f = v(r, X12).add(&v(r, Y21)).unwrap();
        assert_eq!(f.add(&v(r, Y21).neg()).unwrap(), v(r, X12));
        assert_eq!(f.add(&Poly::zero(r)).unwrap(), f);
        let r2 = ring(2);
        assert!(v(r2, X12).add(&v(r2, X12)).unwrap().is_zero());
        assert!(matches!(v(r, X12).add(&v(r2, X12)), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn mul_examples() {
        let r = ring(0);
        let a = v(r, X12).add(&v(r, Y21)).unwrap();
        let b = v(r, X12).sub(&v(r, Y21)).unwrap();
        let expect = v(r, X12).pow(2).unwrap().sub(&v(r, Y21).pow(2).unwrap()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expect);
        assert_eq!(a.mul(&Poly::one(r)).unwrap(), a);
        let r3 = ring(3);
        let s = v(r3, X12).add(&v(r3, X13)).unwrap();
        let cube = v(r3, X12).pow(3).unwrap().add(&v(r3, X13).pow(3).unwrap()).unwrap();
        assert_eq!(s.pow(3).unwrap(), cube);
    }

    #[test]
    fn truncated_examples() {
        let r2 = ring(2);
        let s = v(r2, X12).add(&v(r2, Y21)).unwrap();
        assert!(s.truncated_mul(&s).unwrap().is_zero());
        assert!(v(r2, X12).truncated_mul(&v(r2, X12)).unwrap().is_zero());

        let r3 = ring(3);
        let f = v(r3, X12).mul(&v(r3, Y21)).unwrap().add(&v(r3, X13)).unwrap();
        let sq = f.truncated_mul(&f).unwrap();
        assert_eq!(sq, f.mul(&f).unwrap());
        assert_eq!(sq.len(), 3);

        let g = v(r3, X12).add(&v(r3, X13)).unwrap();
        assert_eq!(g.truncated_pow(0).unwrap(), Poly::one(r3));
        assert_eq!(g.truncated_pow(1).unwrap(), g);
        let m = |pairs: &[(VarId, u32)]| Monomial::from_pairs(pairs.iter().copied()).unwrap();
        let g2 = g.truncated_pow(2).unwrap();
        assert_eq!(g2.coeff_of(&m(&[(X12, 2)])), Scalar::Mod(1));
        assert_eq!(g2.coeff_of(&m(&[(X12, 1), (X13, 1)])), Scalar::Mod(2));
        assert_eq!(g2.coeff_of(&m(&[(X13, 2)])), Scalar::Mod(1));
        assert!(matches!(g.to_char(0).unwrap().truncate(), Err(Error::NotPrimeField(_))));
    }

    #[test]
    fn coeff_of_examples() {
        let r = ring(0);
        let f = v(r, X12).add(&v(r, Y21).scale(&r.from_i64(2))).unwrap();
        assert_eq!(f.coeff_of(&Monomial::var(Y21)), r.from_i64(2));
        assert_eq!(Poly::zero(r).coeff_of(&Monomial::var(Y21)), r.from_i64(0));
    }

    #[test]
    fn display_leads_with_largest_term() {
        let r = ring(0);
        let f = v(r, X12).sub(&v(r, Y21).pow(2).unwrap()).unwrap();
        assert_eq!(f.to_string(), "-y_2_1^2 + x_1_2");
    }
}

use std::cmp::Ordering;
use std::fmt;

use super::var::VarId;
use crate::error::{Error, Result};

/// A monomial stored sparsely: `(variable, exponent)` pairs sorted by
/// [`VarId`], exponents never zero.
///
/// `Ord` is degree-reverse-lexicographic with `x_11 > x_12 > … > y_nn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)], degree: 1 }
    }

    /// Builds a monomial from arbitrary pairs; repeated variables are merged
    /// and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Result<Self> {
        let mut exps: Vec<(VarId, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        exps.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match merged.last_mut() {
                Some((w, f)) if *w == v => *f = f.checked_add(e).ok_or(Error::Overflow)?,
                _ => merged.push((v, e)),
            }
        }
        let degree = merged
            .iter()
            .try_fold(0u32, |acc, &(_, e)| acc.checked_add(e))
            .ok_or(Error::Overflow)?;
        Ok(Monomial { exps: merged, degree })
    }

    /// Product of the given variables, each to the first power.
    pub fn product_of<I: IntoIterator<Item = VarId>>(vars: I) -> Result<Self> {
        Monomial::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn max_exponent(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, ea) = self.exps[i];
            let (b, eb) = other.exps[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    exps.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a, ea.checked_add(eb).ok_or(Error::Overflow)?));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        let degree = self.degree.checked_add(other.degree).ok_or(Error::Overflow)?;
        Ok(Monomial { exps, degree })
    }

    pub fn pow(&self, e: u32) -> Result<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        if e == 0 {
            return Ok(Monomial::one());
        }
        for &(v, x) in &self.exps {
            exps.push((v, x.checked_mul(e).ok_or(Error::Overflow)?));
        }
        let degree = self.degree.checked_mul(e).ok_or(Error::Overflow)?;
        Ok(Monomial { exps, degree })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.degree > other.degree {
            return false;
        }
        self.exps.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: Vec<_> = other
            .exps
            .iter()
            .filter_map(|&(v, e)| {
                let d = e - self.exponent(v);
                (d > 0).then_some((v, d))
            })
            .collect();
        Some(Monomial { exps, degree: other.degree - self.degree })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let pairs = self.exps.iter().chain(other.exps.iter()).copied();
        let mut best: Vec<(VarId, u32)> = Vec::new();
        let mut all: Vec<_> = pairs.collect();
        all.sort_by_key(|&(v, _)| v);
        for (v, e) in all {
            match best.last_mut() {
                Some((w, f)) if *w == v => *f = (*f).max(e),
                _ => best.push((v, e)),
            }
        }
        let degree = best.iter().map(|&(_, e)| e).sum();
        Monomial { exps: best, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|&(v, _)| other.exponent(v) == 0)
    }

    /// `Some(v)` when the monomial is a pure power `v^k`, `k ≥ 1`.
    pub fn pure_power_var(&self) -> Option<VarId> {
        match self.exps.as_slice() {
            [(v, _)] => Some(*v),
            _ => None,
        }
    }

    pub fn restrict<F: Fn(VarId) -> bool>(&self, keep: F) -> Monomial {
        let exps: Vec<_> = self.exps.iter().copied().filter(|&(v, _)| keep(v)).collect();
        let degree = exps.iter().map(|&(_, e)| e).sum();
        Monomial { exps, degree }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Walk from the last variable; a larger exponent there makes the
        // monomial smaller.
        let (mut i, mut j) = (self.exps.len(), other.exps.len());
        while i > 0 && j > 0 {
            let (a, ea) = self.exps[i - 1];
            let (b, eb) = other.exps[j - 1];
            match a.cmp(&b) {
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i -= 1;
                    j -= 1;
                }
                // `self` has a positive exponent at a later variable `a`
                // where `other` has zero.
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
            }
        }
        // Equal degree and one list exhausted means both are.
        debug_assert!(i == 0 && j == 0);
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

//! Homogeneous systems of parameters for `R/(I+J)`, `R/I` and `R/J`, and
//! the specialization maps they induce.
//!
//! Every system consists of single variables (sent to zero) and differences
//! `x_ab − y_cd` (the `y` is replaced by the `x`). A *partial* system keeps
//! only the single variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{commutator, GenericMatrixPair, PolyMatrix};
use crate::polycore::{Poly, Ring, VarId};

/// A quotient by linear forms, realized as a substitution.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SpecMap {
    zeroed: BTreeSet<VarId>,
    identified: Vec<(VarId, VarId)>,
    targets: BTreeMap<VarId, VarId>,
}

impl SpecMap {
    /// `identified` holds `(replaced, replacement)` pairs.
    pub fn new<Z>(zeroed: Z, identified: Vec<(VarId, VarId)>) -> Result<SpecMap>
    where
        Z: IntoIterator<Item = VarId>,
    {
        let zeroed: BTreeSet<VarId> = zeroed.into_iter().collect();
        let mut targets = BTreeMap::new();
        for &(from, to) in &identified {
            if from == to {
                return Err(Error::InvalidSubstitution(format!("{from} identified with itself")));
            }
            if zeroed.contains(&from) {
                return Err(Error::InvalidSubstitution(format!("{from} is both zeroed and replaced")));
            }
            if targets.insert(from, to).is_some() {
                return Err(Error::InvalidSubstitution(format!("{from} replaced twice")));
            }
        }
        if let Some((from, to)) = identified.iter().find(|(_, to)| targets.contains_key(to)) {
            return Err(Error::InvalidSubstitution(format!(
                "replacement {to} of {from} is itself replaced"
            )));
        }
        Ok(SpecMap { zeroed, identified, targets })
    }

    pub fn zeroed(&self) -> &BTreeSet<VarId> {
        &self.zeroed
    }

    pub fn identified(&self) -> &[(VarId, VarId)] {
        &self.identified
    }

    /// Where `v` goes: `None` means zero. A replaced variable whose target
    /// is zeroed is zero as well.
    pub fn image(&self, v: VarId) -> Option<VarId> {
        if self.zeroed.contains(&v) {
            return None;
        }
        match self.targets.get(&v) {
            Some(t) if self.zeroed.contains(t) => None,
            Some(t) => Some(*t),
            None => Some(v),
        }
    }

    /// Variables of the size-`n` ring that survive unchanged.
    pub fn surviving(&self, n: u8) -> Vec<VarId> {
        VarId::all(n).filter(|v| self.image(*v) == Some(*v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SopVariant {
    FullOdd,
    FullEven,
    FullEvenChar2,
    DiagI,
    AntiJ,
}

impl fmt::Display for SopVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SopVariant::FullOdd => "FULL_ODD",
            SopVariant::FullEven => "FULL_EVEN",
            SopVariant::FullEvenChar2 => "FULL_EVEN_CHAR2",
            SopVariant::DiagI => "DIAG_I",
            SopVariant::AntiJ => "ANTI_J",
        })
    }
}

impl SopVariant {
    /// The variant for the full ideal `I + J` at this size and characteristic.
    pub fn full_for(n: u8, characteristic: u32) -> SopVariant {
        match (n % 2, characteristic) {
            (1, _) => SopVariant::FullOdd,
            (_, 2) => SopVariant::FullEvenChar2,
            _ => SopVariant::FullEven,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, SopVariant::FullOdd | SopVariant::FullEven | SopVariant::FullEvenChar2)
    }

    pub fn ideal(&self) -> crate::matrices::IdealName {
        use crate::matrices::IdealName;
        match self {
            SopVariant::DiagI => IdealName::I,
            SopVariant::AntiJ => IdealName::J,
            _ => IdealName::Full,
        }
    }

    /// Length of the full system: the Krull dimension of the quotient.
    pub fn expected_len(&self, n: usize) -> usize {
        let sq = 2 * n * n;
        match self {
            SopVariant::FullOdd => sq - 2 * n + 2,
            SopVariant::FullEven | SopVariant::FullEvenChar2 => sq - 2 * n + 1,
            SopVariant::DiagI => sq - n + 1,
            SopVariant::AntiJ => sq - n,
        }
    }

    fn check(&self, n: u8, characteristic: u32) -> Result<()> {
        let bad = |why: &str| Err(Error::Unsupported(format!("{self} with n={n}, char={characteristic}: {why}")));
        if n < 3 {
            return bad("needs n >= 3");
        }
        match self {
            SopVariant::FullOdd if n.is_multiple_of(2) => bad("needs odd n"),
            SopVariant::FullEven if n % 2 == 1 => bad("needs even n"),
            SopVariant::FullEven if characteristic == 2 => bad("needs characteristic != 2"),
            SopVariant::FullEvenChar2 if n % 2 == 1 => bad("needs even n"),
            SopVariant::FullEvenChar2 if characteristic != 2 => bad("needs characteristic 2"),
            _ => Ok(()),
        }
    }
}

/// One element of a system of parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SopElement {
    Var(VarId),
    /// `x − y`; the `y` is the one replaced.
    Diff(VarId, VarId),
}

impl SopElement {
    pub fn to_poly(&self, ring: Ring) -> Result<Poly> {
        match *self {
            SopElement::Var(v) => Poly::var(ring, v),
            SopElement::Diff(a, b) => Poly::var(ring, a)?.sub(&Poly::var(ring, b)?),
        }
    }
}

impl fmt::Display for SopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SopElement::Var(v) => write!(f, "{v}"),
            SopElement::Diff(a, b) => write!(f, "{a} - {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SopList {
    pub variant: SopVariant,
    pub n: u8,
    pub characteristic: u32,
    pub partial: bool,
    pub elements: Vec<SopElement>,
}

impl SopList {
    pub fn polys(&self) -> Result<Vec<Poly>> {
        let ring = Ring::new(self.n, self.characteristic)?;
        self.elements.iter().map(|e| e.to_poly(ring)).collect()
    }
}

/// Ordered, de-duplicated index set.
#[derive(Default)]
struct IndexSet {
    order: Vec<(u8, u8)>,
    seen: BTreeSet<(u8, u8)>,
}

impl IndexSet {
    fn push(&mut self, i: u8, j: u8) {
        if self.seen.insert((i, j)) {
            self.order.push((i, j));
        }
    }

    fn block(&mut self, rows: std::ops::RangeInclusive<u8>, cols: std::ops::RangeInclusive<u8>) {
        for i in rows {
            for j in cols.clone() {
                self.push(i, j);
            }
        }
    }
}

fn odd_system(n: u8) -> (IndexSet, Vec<(VarId, VarId)>) {
    let k = (n - 1) / 2;
    let mut s = IndexSet::default();
    s.block(1..=k, 1..=n);
    s.push(k + 1, k + 1);
    s.block(k + 2..=n, k + 2..=n);
    s.block(k + 3..=n, 1..=k);

    let mut ids = Vec::new();
    for t in 1..=n {
        ids.push((VarId::x(k + 1, t), VarId::y(2 * k + 2 - t, k + 1)));
    }
    for t in k + 2..=n {
        ids.push((VarId::x(t, k + 1), VarId::y(k + 1, t)));
    }
    for t in 1..=k {
        ids.push((VarId::x(k + 2, t), VarId::y(t, k + 2)));
    }
    (s, ids)
}

fn even_system(n: u8) -> (IndexSet, Vec<(VarId, VarId)>) {
    let k = n / 2;
    let mut s = IndexSet::default();
    s.block(1..=k - 1, 1..=n);
    s.push(k, k);
    s.push(k, k + 1);
    s.push(k + 1, k + 1);
    s.block(k + 1..=k + 1, k + 3..=n);
    s.block(k + 3..=n, k + 1..=k + 1);
    s.block(k + 2..=n, 1..=k - 1);
    s.block(k + 2..=n, k + 2..=n);

    let mut ids = Vec::new();
    for t in 1..=n {
        ids.push((VarId::x(k, t), VarId::y(2 * k + 1 - t, k)));
    }
    for t in 1..=k + 2 {
        ids.push((VarId::x(k + 1, t), VarId::y(t, k + 1)));
    }
    ids.push((VarId::x(k + 2, k), VarId::y(k + 1, k + 2)));
    ids.push((VarId::x(k + 2, k + 1), VarId::y(k, k + 2)));
    for t in k + 3..=n {
        ids.push((VarId::x(t, k), VarId::y(k, t)));
    }
    (s, ids)
}

fn even_char2_system(n: u8) -> (IndexSet, Vec<(VarId, VarId)>) {
    let k = n / 2;
    let mut s = IndexSet::default();
    s.block(1..=k - 1, 1..=n);
    s.block(k..=k, k - 1..=k + 1);
    s.push(k + 1, k + 1);
    s.push(k + 2, k + 2);
    s.block(k + 1..=k + 1, k + 3..=n);
    s.block(k + 2..=k + 2, 1..=k.saturating_sub(2));
    s.block(k + 2..=k + 2, k + 2..=n);
    s.block(k + 3..=n, 1..=k - 1);
    s.block(k + 3..=n, k + 1..=n);

    let mut ids = Vec::new();
    for t in (1..=k.saturating_sub(2)).chain(k + 3..=n) {
        ids.push((VarId::x(k, t), VarId::y(2 * k + 1 - t, k)));
    }
    for t in 1..=k.saturating_sub(2) {
        ids.push((VarId::x(k + 1, t), VarId::y(t, k + 1)));
    }
    for t in k + 3..=n {
        ids.push((VarId::x(t, k), VarId::y(k, t)));
    }
    ids.extend([
        (VarId::x(k, k + 2), VarId::y(k + 2, k)),
        (VarId::x(k + 1, k - 1), VarId::y(k + 2, k + 1)),
        (VarId::x(k + 1, k), VarId::y(k, k + 1)),
        (VarId::x(k + 1, k + 2), VarId::y(k - 1, k + 1)),
        (VarId::x(k + 2, k - 1), VarId::y(k - 1, k + 2)),
        (VarId::x(k + 2, k), VarId::y(k + 1, k + 2)),
        (VarId::x(k + 2, k + 1), VarId::y(k, k + 2)),
    ]);
    (s, ids)
}

/// The system of parameters for `variant` in canonical order: zeroed `x`s,
/// zeroed `y`s, then identifications.
pub fn sop(n: u8, characteristic: u32, variant: SopVariant, partial: bool) -> Result<SopList> {
    variant.check(n, characteristic)?;
    let mut elements = Vec::new();

    match variant {
        SopVariant::FullOdd | SopVariant::FullEven | SopVariant::FullEvenChar2 => {
            let (set, ids) = match variant {
                SopVariant::FullOdd => odd_system(n),
                SopVariant::FullEven => even_system(n),
                _ => even_char2_system(n),
            };
            // x_ij and y_ji for (i, j) in the index set.
            elements.extend(set.order.iter().map(|&(i, j)| SopElement::Var(VarId::x(i, j))));
            elements.extend(set.order.iter().map(|&(i, j)| SopElement::Var(VarId::y(j, i))));
            if !partial {
                let zero_x = |v: VarId| set.seen.contains(&(v.row, v.col));
                let zero_y = |v: VarId| set.seen.contains(&(v.col, v.row));
                for (a, b) in ids {
                    if zero_x(a) && zero_y(b) {
                        continue;
                    }
                    elements.push(SopElement::Diff(a, b));
                }
            }
        }
        SopVariant::DiagI | SopVariant::AntiJ => {
            if variant == SopVariant::DiagI {
                elements.push(SopElement::Var(VarId::x(1, 1)));
            }
            for i in 2..=n {
                for j in 1..=n {
                    elements.push(SopElement::Var(VarId::x(i, j)));
                }
            }
            for i in 1..=n {
                for j in 2..=n {
                    elements.push(SopElement::Var(VarId::y(i, j)));
                }
            }
            if !partial {
                for j in 1..=n {
                    let y = match variant {
                        SopVariant::DiagI => VarId::y(j, 1),
                        _ => VarId::y(n + 1 - j, 1),
                    };
                    elements.push(SopElement::Diff(VarId::x(1, j), y));
                }
            }
        }
    }

    let list = SopList { variant, n, characteristic, partial, elements };
    if !partial && list.elements.len() != variant.expected_len(n as usize) {
        return Err(Error::Inconsistent(format!(
            "{variant} n={n}: {} elements, expected {}",
            list.elements.len(),
            variant.expected_len(n as usize)
        )));
    }
    Ok(list)
}

pub fn spec_map(list: &SopList) -> Result<SpecMap> {
    let mut zeroed = Vec::new();
    let mut ids = Vec::new();
    for e in &list.elements {
        match *e {
            SopElement::Var(v) => zeroed.push(v),
            SopElement::Diff(x, y) => ids.push((y, x)),
        }
    }
    SpecMap::new(zeroed, ids)
}

/// `(X̄, Ȳ)`: the generic pair with the system's map applied entrywise.
pub fn specialized_pair(
    n: u8,
    characteristic: u32,
    variant: SopVariant,
    partial: bool,
) -> Result<(PolyMatrix, PolyMatrix)> {
    let map = spec_map(&sop(n, characteristic, variant, partial)?)?;
    GenericMatrixPair::new(Ring::new(n, characteristic)?)?.substitute(&map)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub n: u8,
    #[serde(rename = "char")]
    pub characteristic: u32,
    pub variant: SopVariant,
    pub passed: bool,
    pub identities: Vec<IdentityCheck>,
}

/// Checks the induction-step identities relating the specialized commutator
/// `C̄` of size `n` to `C̄⁰`, the commutator of its inner `(n−2)` block, and
/// that the inner block is the shifted `(n−2)` specialization.
pub fn verify_recursions(n: u8, characteristic: u32) -> Result<RecursionReport> {
    if n < 5 {
        return Err(Error::Unsupported(format!("recursions need n >= 5, got {n}")));
    }
    let ring = Ring::new(n, characteristic)?;
    let variant = SopVariant::full_for(n, characteristic);
    let (xb, yb) = specialized_pair(n, characteristic, variant, false)?;
    let c = commutator(&xb, &yb)?;
    let c0 = commutator(&xb.inner(), &yb.inner())?;

    let x = |i: u8, j: u8| Poly::var(ring, VarId::x(i, j)).expect("index in range");
    let int = |v: i64| Poly::constant(ring, v);
    let cb = |i: u8, j: u8| c.get(i as usize, j as usize).clone();
    let cz = |i: u8, j: u8| c0.get(i as usize, j as usize).clone();

    let mut out = Vec::new();
    let mut eq = |name: String, lhs: Poly, rhs: Result<Poly>| -> Result<()> {
        let rhs = rhs?;
        out.push(IdentityCheck { name, ok: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() });
        Ok(())
    };

    if n % 2 == 1 {
        let k = (n - 1) / 2;
        let top = x(k + 1, 1).mul(&x(k + 1, n))?;
        eq("c11".into(), cb(1, 1), top.neg().sub(&x(k + 2, 1).pow(2)?))?;
        eq(format!("c1,{n}"), cb(1, n), Ok(x(k + 1, n).pow(2)?.neg()))?;
        eq(format!("c{n},1"), cb(n, 1), Ok(x(k + 1, 1).pow(2)?.neg()))?;
        eq(format!("c{n},{n}"), cb(n, n), x(n, k + 1).pow(2)?.sub(&top))?;
        for i in 2..=k {
            eq(format!("c{i},{i} = c0_{},{}", i - 1, i - 1), cb(i, i), Ok(cz(i - 1, i - 1)))?;
            let explicit = x(k + 1, i).mul(&x(k + 1, 2 * k + 2 - i))?.neg().sub(&x(k + 2, i).pow(2)?);
            eq(format!("c{i},{i} explicit"), cb(i, i), explicit)?;
        }
        let rhs = cz(k, k).add(&int(2).mul(&top)?)?.sub(&x(n, k + 1).pow(2)?);
        eq(format!("c{0},{0}", k + 1), cb(k + 1, k + 1), rhs)?;
        eq(format!("c{0},{0}", k + 2), cb(k + 2, k + 2), cz(k + 1, k + 1).add(&x(k + 2, 1).pow(2)?))?;
        for i in k + 3..=2 * k {
            eq(format!("c{i},{i} = c0_{},{}", i - 1, i - 1), cb(i, i), Ok(cz(i - 1, i - 1)))?;
        }
        for i in (2..=2 * k).filter(|&i| i != k + 1) {
            eq(format!("c{},{} anti", i, 2 * k + 2 - i), cb(i, 2 * k + 2 - i), Ok(cz(i - 1, 2 * k + 1 - i)))?;
        }
    } else {
        let k = n / 2;
        let top = x(k, 1).mul(&x(k, n))?;
        eq("c11".into(), cb(1, 1), top.neg().sub(&x(k + 1, 1).pow(2)?))?;
        eq(format!("c1,{n}"), cb(1, n), Ok(x(k, n).pow(2)?.neg()))?;
        eq(format!("c{n},1"), cb(n, 1), Ok(x(k, 1).pow(2)?.neg()))?;
        eq(format!("c{n},{n}"), cb(n, n), x(n, k).pow(2)?.sub(&top))?;
        for i in 2..k {
            eq(format!("c{i},{i} = c0_{},{}", i - 1, i - 1), cb(i, i), Ok(cz(i - 1, i - 1)))?;
        }
        let rhs = int(2).mul(&top)?.sub(&x(n, k).pow(2)?)?.add(&cz(k - 1, k - 1));
        eq(format!("c{k},{k}"), cb(k, k), rhs)?;
        eq(format!("c{0},{0}", k + 1), cb(k + 1, k + 1), x(k + 1, 1).pow(2)?.add(&cz(k, k)))?;
        for i in k + 2..n {
            eq(format!("c{i},{i} = c0_{},{}", i - 1, i - 1), cb(i, i), Ok(cz(i - 1, i - 1)))?;
        }
        for i in (2..k).chain(k + 2..n) {
            eq(format!("c{},{} anti", i, 2 * k + 1 - i), cb(i, 2 * k + 1 - i), Ok(cz(i - 1, 2 * k - i)))?;
        }
        eq(format!("c{},{}", k, k + 1), cb(k, k + 1), x(k, 1).mul(&x(k + 1, 1))?.add(&cz(k - 1, k)))?;
        eq(format!("c{},{}", k + 1, k), cb(k + 1, k), x(k + 1, 1).mul(&x(k, n))?.add(&cz(k, k - 1)))?;
    }

    // The inner block is the (n−2) system, indices shifted by one.
    let (xs, ys) = specialized_pair(n - 2, characteristic, SopVariant::full_for(n - 2, characteristic), false)?;
    let shift = |m: &PolyMatrix| m.map(|p| p.map_vars(ring, |v| v.shifted(1)));
    let (xi, yi) = (xb.inner(), yb.inner());
    let (xs, ys) = (shift(&xs)?, shift(&ys)?);
    out.push(IdentityCheck {
        name: "inner X block = shifted (n-2) X".into(),
        lhs: xi.to_string(),
        rhs: xs.to_string(),
        ok: xi == xs,
    });
    out.push(IdentityCheck {
        name: "inner Y block = shifted (n-2) Y".into(),
        lhs: yi.to_string(),
        rhs: ys.to_string(),
        ok: yi == ys,
    });

    Ok(RecursionReport {
        n,
        characteristic,
        variant,
        passed: out.iter().all(|c| c.ok),
        identities: out,
    })
}

/// Specialized matrices in the layout of the checked-in appendix fixtures.
#[derive(Clone, Debug, Serialize)]
pub struct AppendixFixture {
    pub n: u8,
    #[serde(rename = "char")]
    pub characteristic: u32,
    pub variant: SopVariant,
    #[serde(rename = "X")]
    pub x: PolyMatrix,
    #[serde(rename = "Y")]
    pub y: PolyMatrix,
}

impl AppendixFixture {
    pub fn generate(n: u8, characteristic: u32) -> Result<AppendixFixture> {
        let variant = SopVariant::full_for(n, characteristic);
        let (x, y) = specialized_pair(n, characteristic, variant, false)?;
        Ok(AppendixFixture { n, characteristic, variant, x, y })
    }

    /// One matrix row per line so that golden diffs stay readable.
    pub fn to_json(&self) -> String {
        let grid = |m: &PolyMatrix| {
            let rows: Vec<String> = m
                .rows()
                .map(|r| format!("    {}", serde_json::to_string(r).expect("row serializes")))
                .collect();
            format!("[\n{}\n  ]", rows.join(",\n"))
        };
        format!(
            "{{\n  \"n\": {},\n  \"char\": {},\n  \"variant\": \"{}\",\n  \"X\": {},\n  \"Y\": {}\n}}\n",
            self.n,
            self.characteristic,
            self.variant,
            grid(&self.x),
            grid(&self.y)
        )
    }
}

/// The checked-in appendix fixtures: `(file name, n, characteristic, contents)`.
pub const APPENDIX_GOLDENS: [(&str, u8, u32, &str); 3] = [
    ("appendix_n7.json", 7, 0, include_str!("../fixtures/appendix_n7.json")),
    ("appendix_n8_odd_char.json", 8, 0, include_str!("../fixtures/appendix_n8_odd_char.json")),
    ("appendix_n8_char2.json", 8, 2, include_str!("../fixtures/appendix_n8_char2.json")),
];

//! Generic matrices `X = (x_ij)`, `Y = (y_ij)`, their commutator
//! `C = XY − YX`, and the generator lists of the diagonal ideal `I`, the
//! anti-diagonal ideal `J` and their sum.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polycore::{Poly, Ring, VarId};
use crate::sop::SpecMap;

/// A square grid of polynomials, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    size: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_fn<F>(size: usize, mut f: F) -> Result<PolyMatrix>
    where
        F: FnMut(usize, usize) -> Result<Poly>,
    {
        let mut entries = Vec::with_capacity(size * size);
        for i in 1..=size {
            for j in 1..=size {
                entries.push(f(i, j)?);
            }
        }
        Ok(PolyMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        assert!((1..=self.size).contains(&i) && (1..=self.size).contains(&j));
        &self.entries[(i - 1) * self.size + (j - 1)]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Poly]> {
        self.entries.chunks(self.size)
    }

    pub fn map<F: FnMut(&Poly) -> Result<Poly>>(&self, f: F) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { size: self.size, entries })
    }

    /// Drops the first and last rows and columns.
    pub fn inner(&self) -> PolyMatrix {
        let m = self.size.saturating_sub(2);
        let mut entries = Vec::with_capacity(m * m);
        for i in 2..self.size {
            for j in 2..self.size {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix { size: m, entries }
    }

    pub fn substitute(&self, map: &SpecMap) -> Result<PolyMatrix> {
        self.map(|p| p.substitute(map))
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        let n = self.size;
        PolyMatrix::from_fn(n, |i, j| {
            let mut acc: Option<Poly> = None;
            for k in 1..=n {
                let t = self.get(i, k).mul(other.get(k, j))?;
                acc = Some(match acc {
                    None => t,
                    Some(a) => a.add(&t)?,
                });
            }
            Ok(acc.expect("non-empty matrix"))
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { size: self.size, entries })
    }

    pub fn trace(&self) -> Result<Poly> {
        let mut acc = self.get(1, 1).clone();
        for i in 2..=self.size {
            acc = acc.add(self.get(i, i))?;
        }
        Ok(acc)
    }

    /// Variables appearing anywhere in the matrix.
    pub fn vars(&self) -> std::collections::BTreeSet<VarId> {
        self.entries.iter().flat_map(|p| p.vars()).collect()
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.rows())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `X` and `Y` with indeterminate entries.
#[derive(Clone, Debug)]
pub struct GenericMatrixPair {
    ring: Ring,
    pub x: PolyMatrix,
    pub y: PolyMatrix,
}

impl GenericMatrixPair {
    pub fn new(ring: Ring) -> Result<GenericMatrixPair> {
        if ring.n < 2 {
            return Err(Error::Unsupported(format!("matrix size {} < 2", ring.n)));
        }
        let n = ring.n as usize;
        let x = PolyMatrix::from_fn(n, |i, j| Poly::var(ring, VarId::x(i as u8, j as u8)))?;
        let y = PolyMatrix::from_fn(n, |i, j| Poly::var(ring, VarId::y(i as u8, j as u8)))?;
        Ok(GenericMatrixPair { ring, x, y })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.ring.n as usize
    }

    pub fn commutator(&self) -> Result<PolyMatrix> {
        commutator(&self.x, &self.y)
    }

    pub fn substitute(&self, map: &SpecMap) -> Result<(PolyMatrix, PolyMatrix)> {
        Ok((self.x.substitute(map)?, self.y.substitute(map)?))
    }
}

/// `XY − YX`, entry `(i,j) = Σ_k (x_ik·y_kj − y_ik·x_kj)`.
pub fn commutator(x: &PolyMatrix, y: &PolyMatrix) -> Result<PolyMatrix> {
    x.mul(y)?.sub(&y.mul(x)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdealName {
    I,
    J,
    #[serde(rename = "FULL")]
    Full,
}

impl fmt::Display for IdealName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealName::I => "I",
            IdealName::J => "J",
            IdealName::Full => "FULL",
        })
    }
}

/// Which commutator entries generate `name`, in generator order.
///
/// `I` uses the first `n−1` diagonal entries; `J` the anti-diagonal from the
/// top-right corner down; `FULL` is `I` followed by `J` with the centre of
/// the anti-diagonal (a diagonal entry when `n` is odd) dropped.
pub fn generator_positions(n: usize, name: IdealName) -> Vec<(usize, usize)> {
    let diag: Vec<_> = (1..n).map(|i| (i, i)).collect();
    let anti: Vec<_> = (1..=n).map(|i| (i, n + 1 - i)).collect();
    match name {
        IdealName::I => diag,
        IdealName::J => anti,
        IdealName::Full => {
            let mut out = diag.clone();
            out.extend(anti.into_iter().filter(|p| !diag.contains(p)));
            out
        }
    }
}

/// Named generator list of `I`, `J` or `I + J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec {
    pub name: IdealName,
    pub n: usize,
    pub characteristic: u32,
    pub generators: Vec<Poly>,
    /// Commutator position of each generator.
    pub positions: Vec<(usize, usize)>,
}

impl Serialize for IdealSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IdealSpec", 4)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("char", &self.characteristic)?;
        st.serialize_field("generators", &self.generators)?;
        st.end()
    }
}

impl IdealSpec {
    /// Reads generators off an already computed commutator, which may be
    /// specialized.
    pub fn from_commutator(c: &PolyMatrix, name: IdealName) -> IdealSpec {
        let n = c.size();
        let positions = generator_positions(n, name);
        let generators = positions.iter().map(|&(i, j)| c.get(i, j).clone()).collect();
        let characteristic = c.get(1, 1).ring().characteristic;
        IdealSpec { name, n, characteristic, generators, positions }
    }

    pub fn substitute(&self, map: &SpecMap) -> Result<Vec<Poly>> {
        self.generators.iter().map(|g| g.substitute(map)).collect()
    }

    pub fn ring(&self) -> Ring {
        self.generators[0].ring()
    }
}

pub fn ideal_spec(pair: &GenericMatrixPair, name: IdealName) -> Result<IdealSpec> {
    Ok(IdealSpec::from_commutator(&pair.commutator()?, name))
}

/// Convenience: generic pair of size `n` over characteristic `char`, then
/// the named ideal.
pub fn build_ideal(n: u8, characteristic: u32, name: IdealName) -> Result<IdealSpec> {
    let pair = GenericMatrixPair::new(Ring::new(n, characteristic)?)?;
    ideal_spec(&pair, name)
}

#[derive(Clone, Debug, Serialize)]
pub struct DetBlockCheck {
    pub entry: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetBlockReport {
    pub n: usize,
    pub passed: bool,
    pub checks: Vec<DetBlockCheck>,
    /// Whether the map as literally worded (zero `X` below row 1 and `Y`
    /// right of column 1) also yields `c_ii = ±det Z_i`. It does not: it
    /// leaves the single term `−x_1i·y_i1`.
    pub literal_map_gives_det: bool,
    pub note: String,
}

/// Checks that, after zeroing `x_11`, `y_11` and every `x_ij`, `y_ij` with
/// `i, j ≥ 2`, each diagonal commutator entry `c_ii` (`i ≥ 2`) is
/// `det Z_i = x_i1·y_1i − x_1i·y_i1` and `c_11 = −Σ det Z_i`.
pub fn detblock_reduction_check(n: u8) -> Result<DetBlockReport> {
    if n < 3 {
        return Err(Error::Unsupported(format!("detblock check needs n >= 3, got {n}")));
    }
    let ring = Ring::new(n, 0)?;
    let c = GenericMatrixPair::new(ring)?.commutator()?;
    let nn = n as usize;

    let mut zeroed = vec![VarId::x(1, 1), VarId::y(1, 1)];
    for i in 2..=n {
        for j in 2..=n {
            zeroed.push(VarId::x(i, j));
            zeroed.push(VarId::y(i, j));
        }
    }
    let map = SpecMap::new(zeroed, vec![])?;

    let det = |i: u8| -> Result<Poly> {
        let a = Poly::var(ring, VarId::x(i, 1))?.mul(&Poly::var(ring, VarId::y(1, i))?)?;
        let b = Poly::var(ring, VarId::x(1, i))?.mul(&Poly::var(ring, VarId::y(i, 1))?)?;
        a.sub(&b)
    };

    let mut checks = Vec::new();
    let mut sum = Poly::zero(ring);
    for i in 2..=n {
        let d = det(i)?;
        sum = sum.add(&d)?;
        let actual = c.get(i as usize, i as usize).substitute(&map)?;
        let ok = actual == d || actual == d.neg();
        checks.push(DetBlockCheck {
            entry: format!("c_{i}_{i}"),
            expected: format!("±({d})"),
            actual: actual.to_string(),
            ok,
        });
    }
    let c11 = c.get(1, 1).substitute(&map)?;
    let expected11 = sum.neg();
    checks.push(DetBlockCheck {
        entry: "c_1_1".into(),
        expected: expected11.to_string(),
        actual: c11.to_string(),
        ok: c11 == expected11,
    });

    let mut literal = vec![VarId::x(1, 1), VarId::y(1, 1)];
    for i in 1..=n {
        for j in 1..=n {
            if i >= 2 {
                literal.push(VarId::x(i, j));
            }
            if j >= 2 {
                literal.push(VarId::y(i, j));
            }
        }
    }
    literal.sort();
    literal.dedup();
    let literal_map = SpecMap::new(literal, vec![])?;
    let mut literal_det = true;
    for i in 2..=n {
        let d = det(i)?;
        let v = c.get(i as usize, i as usize).substitute(&literal_map)?;
        literal_det &= v == d || v == d.neg();
    }

    Ok(DetBlockReport {
        n: nn,
        passed: checks.iter().all(|c| c.ok),
        checks,
        literal_map_gives_det: literal_det,
        note: "map keeps row 1 and column 1 of both X and Y (minus x_1_1, y_1_1); \
               the literal wording would also zero x_i_1 and y_1_i"
            .into(),
    })
}

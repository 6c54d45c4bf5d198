use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which generic matrix a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatrixKind {
    X,
    Y,
}

/// The indeterminate `x_ij` or `y_ij`.
///
/// Ordering is kind-major (every `x` before every `y`), then row, then
/// column. This is the variable order used by the monomial order and by
/// every serialized form, so it must never change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub kind: MatrixKind,
    pub row: u8,
    pub col: u8,
}

impl VarId {
    pub const fn x(row: u8, col: u8) -> Self {
        VarId { kind: MatrixKind::X, row, col }
    }

    pub const fn y(row: u8, col: u8) -> Self {
        VarId { kind: MatrixKind::Y, row, col }
    }

    /// Position in the fixed order of the `2n²` variables of a size-`n` ring.
    pub fn index(&self, n: u8) -> usize {
        let n = n as usize;
        let base = match self.kind {
            MatrixKind::X => 0,
            MatrixKind::Y => n * n,
        };
        base + (self.row as usize - 1) * n + (self.col as usize - 1)
    }

    pub fn fits(&self, n: u8) -> bool {
        (1..=n).contains(&self.row) && (1..=n).contains(&self.col)
    }

    /// Same kind, indices moved by `delta` (used to compare inner blocks
    /// with the smaller system).
    pub fn shifted(&self, delta: i16) -> Option<VarId> {
        let row = self.row as i16 + delta;
        let col = self.col as i16 + delta;
        if row < 1 || col < 1 || row > u8::MAX as i16 || col > u8::MAX as i16 {
            return None;
        }
        Some(VarId { kind: self.kind, row: row as u8, col: col as u8 })
    }

    /// All `2n²` variables in order.
    pub fn all(n: u8) -> impl Iterator<Item = VarId> {
        [MatrixKind::X, MatrixKind::Y].into_iter().flat_map(move |kind| {
            (1..=n).flat_map(move |row| (1..=n).map(move |col| VarId { kind, row, col }))
        })
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            MatrixKind::X => 'x',
            MatrixKind::Y => 'y',
        };
        write!(f, "{}_{}_{}", k, self.row, self.col)
    }
}

impl serde::Serialize for VarId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad variable name `{s}`"));
        let mut parts = s.split('_');
        let kind = match parts.next() {
            Some("x") => MatrixKind::X,
            Some("y") => MatrixKind::Y,
            _ => return Err(bad()),
        };
        let row: u8 = parts.next().and_then(|r| r.parse().ok()).ok_or_else(bad)?;
        let col: u8 = parts.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() || row == 0 || col == 0 {
            return Err(bad());
        }
        Ok(VarId { kind, row, col })
    }
}

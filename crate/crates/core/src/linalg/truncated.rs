use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{IntMatrix, LinalgError};

/// A p-adic integer known modulo `p^precision`, or known to be exactly zero.
///
/// `Approx` carries the exact valuation (which is below the precision) and the
/// unit part modulo `p^(precision - valuation)`. `Unknown` is a value that is
/// zero modulo `p^precision` but not known to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TruncatedEntry {
    Zero,
    Approx { valuation: u32, unit: BigInt, precision: u32 },
    Unknown { precision: u32 },
}

impl TruncatedEntry {
    pub fn is_exact_zero(&self) -> bool {
        matches!(self, TruncatedEntry::Zero)
    }

    /// `None` for exact zero.
    pub fn valuation(&self) -> Result<Option<u32>, LinalgError> {
        match self {
            TruncatedEntry::Zero => Ok(None),
            TruncatedEntry::Approx { valuation, .. } => Ok(Some(*valuation)),
            TruncatedEntry::Unknown { precision } => {
                Err(LinalgError::PrecisionExhausted { precision: *precision })
            }
        }
    }
}

/// Arithmetic on [`TruncatedEntry`] at a fixed prime and absolute precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicContext {
    p: u64,
    precision: u32,
    modulus: BigInt,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32) -> Self {
        PadicContext { p, precision, modulus: BigInt::from(p).pow(precision) }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// An entry known only through its residue: a zero residue is `Unknown`.
    pub fn from_residue(&self, r: &BigInt) -> TruncatedEntry {
        let r = r.mod_floor(&self.modulus);
        if r.is_zero() {
            return TruncatedEntry::Unknown { precision: self.precision };
        }
        let p = BigInt::from(self.p);
        let (mut unit, mut valuation) = (r, 0u32);
        while (&unit % &p).is_zero() {
            unit /= &p;
            valuation += 1;
        }
        let unit_modulus = p.pow(self.precision - valuation);
        TruncatedEntry::Approx {
            valuation,
            unit: unit.mod_floor(&unit_modulus),
            precision: self.precision,
        }
    }

    /// An exactly known p-adic integer.
    pub fn exact(&self, value: &BigInt) -> TruncatedEntry {
        if value.is_zero() {
            TruncatedEntry::Zero
        } else {
            self.from_residue(value)
        }
    }

    pub fn exact_i64(&self, value: i64) -> TruncatedEntry {
        self.exact(&BigInt::from(value))
    }

    pub fn residue(&self, e: &TruncatedEntry) -> BigInt {
        match e {
            TruncatedEntry::Zero | TruncatedEntry::Unknown { .. } => BigInt::zero(),
            TruncatedEntry::Approx { valuation, unit, .. } => {
                (BigInt::from(self.p).pow(*valuation) * unit).mod_floor(&self.modulus)
            }
        }
    }

    pub fn add(&self, a: &TruncatedEntry, b: &TruncatedEntry) -> TruncatedEntry {
        match (a, b) {
            (TruncatedEntry::Zero, x) | (x, TruncatedEntry::Zero) => x.clone(),
            _ => self.from_residue(&(self.residue(a) + self.residue(b))),
        }
    }

    pub fn neg(&self, a: &TruncatedEntry) -> TruncatedEntry {
        match a {
            TruncatedEntry::Zero => TruncatedEntry::Zero,
            _ => self.from_residue(&-self.residue(a)),
        }
    }

    pub fn sub(&self, a: &TruncatedEntry, b: &TruncatedEntry) -> TruncatedEntry {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &TruncatedEntry, b: &TruncatedEntry) -> TruncatedEntry {
        if a.is_exact_zero() || b.is_exact_zero() {
            return TruncatedEntry::Zero;
        }
        self.from_residue(&(self.residue(a) * self.residue(b)))
    }

    pub fn one(&self) -> TruncatedEntry {
        self.exact(&BigInt::one())
    }
}

/// Matrix over `Zp` with every entry known to absolute precision `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMatrix {
    ctx: PadicContext,
    rows: usize,
    cols: usize,
    entries: Vec<TruncatedEntry>,
}

impl TruncatedMatrix {
    pub fn new(
        ctx: PadicContext,
        rows: usize,
        cols: usize,
        entries: Vec<TruncatedEntry>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(TruncatedMatrix { ctx, rows, cols, entries })
    }

    pub fn zeros(ctx: PadicContext, rows: usize, cols: usize) -> Self {
        TruncatedMatrix { ctx, rows, cols, entries: vec![TruncatedEntry::Zero; rows * cols] }
    }

    /// Integer entries are exact p-adic integers.
    pub fn from_int(ctx: PadicContext, m: &IntMatrix) -> Self {
        let entries = m.entries().iter().map(|x| ctx.exact(x)).collect();
        TruncatedMatrix { ctx, rows: m.rows(), cols: m.cols(), entries }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedEntry {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: TruncatedEntry) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn entries(&self) -> &[TruncatedEntry] {
        &self.entries
    }

    pub fn mul(&self, other: &TruncatedMatrix) -> Result<TruncatedMatrix, LinalgError> {
        if self.cols != other.rows || self.ctx != other.ctx {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.ctx.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TruncatedEntry::Zero;
                for k in 0..self.cols {
                    let t = self.ctx.mul(self.get(i, k), other.get(k, j));
                    acc = self.ctx.add(&acc, &t);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// True when no entry is known to be nonzero.
    pub fn is_zero_to_precision(&self) -> bool {
        self.entries.iter().all(|e| !matches!(e, TruncatedEntry::Approx { .. }))
    }

    /// Residues in `[0, p^precision)`.
    pub fn residues(&self) -> IntMatrix {
        let entries = self.entries.iter().map(|e| self.ctx.residue(e)).collect();
        IntMatrix::new(self.rows, self.cols, entries).expect("shape is consistent")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_classification() {
        let ctx = PadicContext::new(2, 8);
        assert_eq!(
            ctx.from_residue(&BigInt::from(624)),
            TruncatedEntry::Approx { valuation: 4, unit: BigInt::from(39 % 16), precision: 8 }
        );
        assert_eq!(ctx.from_residue(&BigInt::from(256)), TruncatedEntry::Unknown { precision: 8 });
        assert_eq!(ctx.exact(&BigInt::from(0)), TruncatedEntry::Zero);
        assert!(ctx.from_residue(&BigInt::from(0)).valuation().is_err());
    }

    #[test]
    fn exact_zero_survives_products() {
        let ctx = PadicContext::new(3, 4);
        let u = ctx.from_residue(&BigInt::from(81));
        assert_eq!(ctx.mul(&u, &TruncatedEntry::Zero), TruncatedEntry::Zero);
        assert_eq!(ctx.add(&u, &TruncatedEntry::Zero), u);
        let a = ctx.exact_i64(2);
        assert_eq!(ctx.sub(&a, &a), TruncatedEntry::Unknown { precision: 4 });
    }
}

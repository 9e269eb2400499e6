use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::modular::{quotient_structure, Echelon, KernelBuilder, Zpn};
use super::snf::{snf, snf_truncated, valuation};
use super::{Base, IntMatrix, LinalgError, PadicContext, TruncatedMatrix};
use crate::module::{Atom, ModuleExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Differentials {
    Exact(Vec<IntMatrix>),
    Truncated(Vec<TruncatedMatrix>),
}

/// Free modules `C^k`, `start <= k < start + ranks.len()`, with differentials
/// `d^k : C^k -> C^(k+1)` given as `rank(k+1) x rank(k)` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    base: Base,
    prime: u64,
    start: i64,
    ranks: Vec<usize>,
    diffs: Differentials,
}

impl CochainComplex {
    /// A complex over `Z/p^N` or over `Zp` with exact integer differentials.
    pub fn new(
        base: Base,
        start: i64,
        ranks: Vec<usize>,
        diffs: Vec<IntMatrix>,
    ) -> Result<Self, LinalgError> {
        let prime = base.prime().ok_or_else(|| {
            LinalgError::InvalidBase("integral complexes need a localization prime".into())
        })?;
        Self::build(base, prime, start, ranks, Differentials::Exact(diffs))
    }

    /// A complex over `Z`; cohomology is reported localized at `p`.
    pub fn integral(
        p: u64,
        start: i64,
        ranks: Vec<usize>,
        diffs: Vec<IntMatrix>,
    ) -> Result<Self, LinalgError> {
        Self::build(Base::Integers, p, start, ranks, Differentials::Exact(diffs))
    }

    /// A complex over `Zp` whose differentials are known to precision `p^N`.
    pub fn truncated(
        ctx: PadicContext,
        start: i64,
        ranks: Vec<usize>,
        diffs: Vec<TruncatedMatrix>,
    ) -> Result<Self, LinalgError> {
        let base = Base::Padic { p: ctx.prime(), precision: ctx.precision() };
        Self::build(base, ctx.prime(), start, ranks, Differentials::Truncated(diffs))
    }

    fn build(
        base: Base,
        prime: u64,
        start: i64,
        ranks: Vec<usize>,
        diffs: Differentials,
    ) -> Result<Self, LinalgError> {
        let shapes: Vec<(usize, usize)> = match &diffs {
            Differentials::Exact(d) => d.iter().map(|m| (m.rows(), m.cols())).collect(),
            Differentials::Truncated(d) => d.iter().map(|m| (m.rows(), m.cols())).collect(),
        };
        if shapes.len() + 1 != ranks.len().max(1) {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} differentials for {} modules",
                shapes.len(),
                ranks.len()
            )));
        }
        for (k, &(r, c)) in shapes.iter().enumerate() {
            if (r, c) != (ranks[k + 1], ranks[k]) {
                return Err(LinalgError::DimensionMismatch(format!(
                    "d^{} is {r}x{c}, expected {}x{}",
                    start + k as i64,
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        let c = CochainComplex { base, prime, start, ranks, diffs };
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<(), LinalgError> {
        match &self.diffs {
            Differentials::Exact(d) => {
                for (k, pair) in d.windows(2).enumerate() {
                    let mut comp = pair[1].mul(&pair[0])?;
                    if let Base::Modular { p, n } = self.base {
                        comp = comp.reduce_mod(&BigInt::from(p).pow(n));
                    }
                    if !comp.is_zero() {
                        return Err(LinalgError::NonzeroComposite { degree: self.start + k as i64 });
                    }
                }
            }
            Differentials::Truncated(d) => {
                for (k, pair) in d.windows(2).enumerate() {
                    if !pair[1].mul(&pair[0])?.is_zero_to_precision() {
                        return Err(LinalgError::NonzeroComposite { degree: self.start + k as i64 });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.start..self.start + self.ranks.len() as i64
    }

    pub fn rank(&self, degree: i64) -> usize {
        if self.degrees().contains(&degree) {
            self.ranks[(degree - self.start) as usize]
        } else {
            0
        }
    }
}

/// Map data needed for cohomology over a discrete valuation ring.
struct MapInvariants {
    rank: usize,
    valuations: Vec<u32>,
}

impl CochainComplex {
    fn differential_invariants(&self, degree: i64) -> Result<MapInvariants, LinalgError> {
        let k = degree - self.start;
        let count = self.ranks.len() as i64 - 1;
        if k < 0 || k >= count {
            return Ok(MapInvariants { rank: 0, valuations: Vec::new() });
        }
        let k = k as usize;
        let s = match (&self.diffs, self.base) {
            (Differentials::Exact(d), base) => snf(&d[k], base)?,
            (Differentials::Truncated(d), _) => snf_truncated(&d[k])?,
        };
        let pb = BigInt::from(self.prime);
        Ok(MapInvariants {
            rank: s.rank(),
            valuations: s.invariant_factors().iter().map(|f| valuation(f, &pb)).collect(),
        })
    }
}

/// `ker d^degree / im d^(degree-1)`.
pub fn complex_cohomology(c: &CochainComplex, degree: i64) -> Result<ModuleExpr, LinalgError> {
    if !c.degrees().contains(&degree) {
        return Err(LinalgError::DegreeOutOfRange(degree));
    }
    match c.base {
        Base::Integers | Base::Padic { .. } => {
            let out = c.differential_invariants(degree)?;
            let inc = c.differential_invariants(degree - 1)?;
            let free_atom =
                if c.base == Base::Integers { Atom::LocalFree } else { Atom::Padic };
            let free = c.rank(degree) - out.rank - inc.rank;
            let torsion = inc.valuations.into_iter().filter(|&v| v > 0).map(Atom::Cyclic);
            Ok(ModuleExpr::from_atoms(
                c.prime,
                std::iter::repeat(free_atom).take(free).chain(torsion),
            ))
        }
        Base::Modular { p, n } => modular_cohomology(c, degree, p, n),
    }
}

fn to_words(m: &IntMatrix, ring: &Zpn) -> Vec<Vec<u64>> {
    let q = BigInt::from(ring.modulus());
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.get(i, j).mod_floor(&q).to_u64().expect("reduced below modulus"))
                .collect()
        })
        .collect()
}

fn modular_cohomology(
    c: &CochainComplex,
    degree: i64,
    p: u64,
    n: u32,
) -> Result<ModuleExpr, LinalgError> {
    let ring = Zpn::new(p, n)?;
    let Differentials::Exact(diffs) = &c.diffs else {
        unreachable!("truncated complexes live over Zp")
    };
    let len = c.rank(degree);
    let k = (degree - c.start) as usize;
    let mut kernel = KernelBuilder::new(ring, len);
    if k < diffs.len() {
        for row in to_words(&diffs[k], &ring) {
            let form: Vec<(usize, u64)> =
                row.into_iter().enumerate().filter(|&(_, a)| a != 0).collect();
            kernel.constrain(&form);
        }
    }
    let mut image = Echelon::new(ring, len);
    if k > 0 {
        let incoming = to_words(&diffs[k - 1].transpose(), &ring);
        for col in incoming {
            image.insert(col);
        }
    }
    let exps = quotient_structure(&image, &kernel.finish());
    Ok(ModuleExpr::torsion(p, &exps))
}

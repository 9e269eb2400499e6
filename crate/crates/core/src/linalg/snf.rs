use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Base, IntMatrix, LinalgError, PadicContext, TruncatedEntry, TruncatedMatrix};
use crate::module::{Atom, ModuleExpr};

/// `U * A * V = D` with `D` diagonal and each diagonal entry dividing the next.
///
/// Over `Z/p^N` and truncated `Zp` the nonzero diagonal entries are powers of
/// `p` and `U`, `V` are reduced modulo `p^N`; the identity then holds modulo
/// `p^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub base: Base,
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    rank: usize,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Exponents of the nonzero diagonal entries over a local base.
    pub fn valuations(&self) -> Option<Vec<u32>> {
        let p = BigInt::from(self.base.prime()?);
        Some(self.invariant_factors().iter().map(|f| valuation(f, &p)).collect())
    }

    /// The diagonal as p-adic entries; only meaningful over [`Base::Padic`].
    pub fn diagonal_entries(&self) -> Vec<TruncatedEntry> {
        let (p, n) = match self.base {
            Base::Padic { p, precision } | Base::Modular { p, n: precision } => (p, precision),
            Base::Integers => return Vec::new(),
        };
        let ctx = PadicContext::new(p, n);
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| {
                if i < self.rank {
                    ctx.exact(self.d.get(i, i))
                } else {
                    TruncatedEntry::Zero
                }
            })
            .collect()
    }

    /// Recomputes `U * A * V` and compares it with `D` over the base.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let Ok(uav) = self.u.mul(a).and_then(|x| x.mul(&self.v)) else {
            return false;
        };
        match self.base {
            Base::Integers => uav == self.d,
            Base::Modular { p, n } | Base::Padic { p, precision: n } => {
                let q = BigInt::from(p).pow(n);
                uav.reduce_mod(&q) == self.d.reduce_mod(&q)
            }
        }
    }
}

pub(crate) fn valuation(x: &BigInt, p: &BigInt) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    let mut x = x.clone();
    let mut v = 0;
    while (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

pub fn snf(a: &IntMatrix, base: Base) -> Result<SnfResult, LinalgError> {
    match base {
        Base::Integers => Ok(integer_snf(a)),
        Base::Modular { p, n } => {
            let q = BigInt::from(p).pow(n);
            let entries = a
                .entries()
                .iter()
                .map(|x| {
                    let r = x.mod_floor(&q);
                    let exact = r.is_zero();
                    (r, exact)
                })
                .collect();
            local_snf(a.rows(), a.cols(), entries, p, n, base, true)
        }
        Base::Padic { p, precision } => padic_snf_of_integers(a, p, precision),
    }
}

/// Smith form of a p-adic matrix known to absolute precision `p^N`.
///
/// Fails with `PrecisionExhausted` when, after all certifiable pivots are
/// used, an entry remains that is zero mod `p^N` without being known to vanish.
pub fn snf_truncated(a: &TruncatedMatrix) -> Result<SnfResult, LinalgError> {
    let ctx = a.context();
    let entries = a
        .entries()
        .iter()
        .map(|e| (ctx.residue(e), e.is_exact_zero()))
        .collect();
    let base = Base::Padic { p: ctx.prime(), precision: ctx.precision() };
    local_snf(a.rows(), a.cols(), entries, ctx.prime(), ctx.precision(), base, false)
}

/// Elimination over `Z/p^N` by minimal-valuation pivoting. Entries carry an
/// exactness flag: a zero residue with the flag unset is an unknown value.
/// Over `Z/p^N` (`modular`) every zero residue is exact.
fn local_snf(
    rows: usize,
    cols: usize,
    entries: Vec<(BigInt, bool)>,
    p: u64,
    n: u32,
    base: Base,
    modular: bool,
) -> Result<SnfResult, LinalgError> {
    let exact_zero = |e: &(BigInt, bool)| e.0.is_zero() && (modular || e.1);
    let q = BigInt::from(p).pow(n);
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<(BigInt, bool)>> = {
        let mut it = entries.into_iter();
        (0..rows).map(|_| it.by_ref().take(cols).collect()).collect()
    };
    let mut u = IntMatrix::identity(rows).to_rows();
    let mut v = IntMatrix::identity(cols).to_rows();
    let mut rank = 0;
    let mut pivot_vals = Vec::new();
    let size = rows.min(cols);
    while rank < size {
        let t = rank;
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, (r, _)) in row.iter().enumerate().skip(t) {
                if !r.is_zero() {
                    let val = valuation(r, &pb);
                    if best.map_or(true, |(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let pv = pb.pow(val);
        let unit = &m[t][t].0 / &pv;
        let inv = unit
            .extended_gcd(&q)
            .x
            .mod_floor(&q);
        for x in m[t].iter_mut() {
            x.0 = (&x.0 * &inv).mod_floor(&q);
        }
        for x in u[t].iter_mut() {
            *x = (&*x * &inv).mod_floor(&q);
        }
        m[t][t] = (pv.clone(), true);
        for i in t + 1..rows {
            if exact_zero(&m[i][t]) {
                continue;
            }
            let a_it = m[i][t].0.clone();
            let f = &a_it / &pv;
            if !f.is_zero() {
                for j in t + 1..cols {
                    if exact_zero(&m[t][j]) {
                        continue;
                    }
                    let nx = (&m[i][j].0 - &f * &m[t][j].0).mod_floor(&q);
                    m[i][j] = (nx, false);
                }
                for j in 0..rows {
                    let d = &f * &u[t][j];
                    u[i][j] = (&u[i][j] - d).mod_floor(&q);
                }
            } else {
                // an unknown multiple of p^N: residues stay, exact zeros do not
                for j in t + 1..cols {
                    if !exact_zero(&m[t][j]) {
                        m[i][j].1 = false;
                    }
                }
            }
            m[i][t] = (BigInt::zero(), true);
        }
        for j in t + 1..cols {
            if exact_zero(&m[t][j]) {
                continue;
            }
            let g = &m[t][j].0 / &pv;
            if !g.is_zero() {
                for row in v.iter_mut() {
                    let d = &g * &row[t];
                    row[j] = (&row[j] - d).mod_floor(&q);
                }
            }
            m[t][j] = (BigInt::zero(), true);
        }
        pivot_vals.push(val);
        rank += 1;
    }
    let unknown = m
        .iter()
        .skip(rank)
        .any(|row| row.iter().skip(rank).any(|e| e.0.is_zero() && !exact_zero(e)));
    if unknown {
        return Err(LinalgError::PrecisionExhausted { precision: n });
    }
    let diag: Vec<BigInt> = pivot_vals.iter().map(|&k| pb.pow(k)).collect();
    Ok(SnfResult {
        base,
        d: IntMatrix::diagonal(rows, cols, &diag),
        u: IntMatrix::from_nested(rows, rows, u),
        v: IntMatrix::from_nested(cols, cols, v),
        rank,
    })
}

/// Exact integer entries: the integer Smith form localized at `p`, with the
/// prime-to-p part of each invariant factor moved into `U`.
fn padic_snf_of_integers(a: &IntMatrix, p: u64, n: u32) -> Result<SnfResult, LinalgError> {
    let s = integer_snf(a);
    let q = BigInt::from(p).pow(n);
    let pb = BigInt::from(p);
    let mut u = s.u.to_rows();
    let mut diag = Vec::with_capacity(s.rank);
    for (i, f) in s.invariant_factors().iter().enumerate() {
        let v = valuation(f, &pb);
        if v >= n {
            return Err(LinalgError::PrecisionExhausted { precision: n });
        }
        let pv = pb.pow(v);
        let inv = (f / &pv).extended_gcd(&q).x.mod_floor(&q);
        for x in u[i].iter_mut() {
            *x = (&*x * &inv).mod_floor(&q);
        }
        diag.push(pv);
    }
    Ok(SnfResult {
        base: Base::Padic { p, precision: n },
        d: IntMatrix::diagonal(a.rows(), a.cols(), &diag),
        u: IntMatrix::from_nested(a.rows(), a.rows(), u),
        v: s.v.reduce_mod(&q),
        rank: s.rank,
    })
}

fn integer_snf(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.to_rows();
    let mut u = IntMatrix::identity(rows).to_rows();
    let mut v = IntMatrix::identity(cols).to_rows();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&m, t, t) else { break };
        swap_pivot(&mut m, &mut u, &mut v, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let f = m[i][t].div_floor(&m[t][t]);
                row_axpy(&mut m, i, t, &f);
                row_axpy(&mut u, i, t, &f);
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let f = m[t][j].div_floor(&m[t][t]);
                col_axpy(&mut m, j, t, &f);
                col_axpy(&mut v, j, t, &f);
                clean &= m[t][j].is_zero();
            }
            if !clean {
                let (pi, pj) = min_abs_cross(&m, t);
                swap_pivot(&mut m, &mut u, &mut v, t, pi, pj);
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[t][t]))
            });
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut m, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let rank = t;
    SnfResult {
        base: Base::Integers,
        d: IntMatrix::from_nested(rows, cols, m),
        u: IntMatrix::from_nested(rows, rows, u),
        v: IntMatrix::from_nested(cols, cols, v),
        rank,
    }
}

fn min_abs_entry(m: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(r0) {
        for (j, x) in row.iter().enumerate().skip(c0) {
            if !x.is_zero() && best.as_ref().map_or(true, |(b, _, _)| x.abs() < *b) {
                best = Some((x.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smallest nonzero entry in row `t` or column `t`.
fn min_abs_cross(m: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (m[t][t].abs(), t, t);
    for (i, row) in m.iter().enumerate().skip(t + 1) {
        if !row[t].is_zero() && row[t].abs() < best.0 {
            best = (row[t].abs(), i, t);
        }
    }
    for (j, x) in m[t].iter().enumerate().skip(t + 1) {
        if !x.is_zero() && x.abs() < best.0 {
            best = (x.abs(), t, j);
        }
    }
    (best.1, best.2)
}

fn swap_pivot(
    m: &mut [Vec<BigInt>],
    u: &mut [Vec<BigInt>],
    v: &mut [Vec<BigInt>],
    t: usize,
    i: usize,
    j: usize,
) {
    m.swap(t, i);
    u.swap(t, i);
    for row in m.iter_mut() {
        row.swap(t, j);
    }
    for row in v.iter_mut() {
        row.swap(t, j);
    }
}

/// `row[dst] -= f * row[src]`
fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= f * y;
        }
    }
}

/// `col[dst] -= f * col[src]`
fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let d = f * &row[src];
            row[dst] -= d;
        }
    }
}

/// The p-localized cokernel of `A : Z^cols -> Z^rows`.
pub fn cokernel_structure(a: &IntMatrix, p: u64) -> ModuleExpr {
    let s = integer_snf(a);
    let pb = BigInt::from(p);
    let free = a.rows() - s.rank();
    let torsion = s
        .invariant_factors()
        .into_iter()
        .map(|f| valuation(&f, &pb))
        .filter(|&k| k > 0)
        .map(Atom::Cyclic);
    ModuleExpr::from_atoms(
        p,
        std::iter::repeat(Atom::LocalFree).take(free).chain(torsion),
    )
}

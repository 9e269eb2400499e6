//! Machine-word arithmetic over `Z/p^N` and submodules of `(Z/p^N)^len`.
//!
//! Submodules are kept in Howell form: an echelon basis closed under
//! multiplication by `p`, so that the module size is the product of the
//! additive orders of the basis rows.

use super::LinalgError;

/// The ring `Z/p^n` with `p^n < 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zpn {
    p: u64,
    n: u32,
    q: u64,
    reducer: Reducer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reducer {
    Mask(u64),
    Barrett(u64),
    Wide,
}

impl Zpn {
    pub fn new(p: u64, n: u32) -> Result<Self, LinalgError> {
        let q = p
            .checked_pow(n)
            .filter(|&q| q < (1u64 << 62) && n >= 1 && p >= 2)
            .ok_or(LinalgError::ModulusTooLarge { p, n })?;
        let reducer = if p == 2 {
            Reducer::Mask(q - 1)
        } else if q < (1u64 << 32) {
            Reducer::Barrett(u64::MAX / q)
        } else {
            Reducer::Wide
        };
        Ok(Zpn { p, n, q, reducer })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.reducer {
            Reducer::Mask(m) => a.wrapping_mul(b) & m,
            Reducer::Barrett(m) => {
                let x = a * b;
                let est = ((x as u128 * m as u128) >> 64) as u64;
                let mut r = x - est * self.q;
                while r >= self.q {
                    r -= self.q;
                }
                r
            }
            Reducer::Wide => ((a as u128 * b as u128) % self.q as u128) as u64,
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    /// `n` for zero.
    pub fn val(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.n;
        }
        if self.p == 2 {
            return x.trailing_zeros();
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// `p^k`, zero once `k >= n`.
    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.n {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// Inverse of an element prime to `p`.
    pub fn inv(&self, u: u64) -> u64 {
        let (mut r0, mut r1) = (self.q as i128, (u % self.q) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let f = r0 / r1;
            (r0, r1) = (r1, r0 - f * r1);
            (s0, s1) = (s1, s0 - f * s1);
        }
        assert_eq!(r0, 1, "{u} is not a unit mod {}", self.q);
        s0.rem_euclid(self.q as i128) as u64
    }

    pub fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.q;
        let mut b = base % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// `x <- x - c * y`
    #[inline]
    pub fn sub_mul_assign(&self, x: &mut [u64], c: u64, y: &[u64]) {
        if c == 0 {
            return;
        }
        for (a, &b) in x.iter_mut().zip(y) {
            if b != 0 {
                *a = self.sub(*a, self.mul(c, b));
            }
        }
    }

    pub fn scale(&self, x: &mut [u64], c: u64) {
        for a in x.iter_mut() {
            *a = self.mul(*a, c);
        }
    }
}

/// Submodule of `(Z/p^N)^len` in Howell form.
#[derive(Clone, Debug)]
pub struct Echelon {
    ring: Zpn,
    len: usize,
    slot: Vec<Option<usize>>,
    rows: Vec<Vec<u64>>,
    vals: Vec<u32>,
    log_size: u64,
}

impl Echelon {
    pub fn new(ring: Zpn, len: usize) -> Self {
        Echelon { ring, len, slot: vec![None; len], rows: Vec::new(), vals: Vec::new(), log_size: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// `log_p` of the number of elements.
    pub fn log_size(&self) -> u64 {
        self.log_size
    }

    pub fn basis_len(&self) -> usize {
        self.rows.len()
    }

    /// Stored dense entries.
    pub fn footprint(&self) -> usize {
        self.rows.len() * self.len
    }

    /// Adds `x` to the module; returns whether the module grew.
    pub fn insert(&mut self, x: Vec<u64>) -> bool {
        debug_assert_eq!(x.len(), self.len);
        let before = self.log_size;
        let mut pending = vec![(x, 0usize)];
        while let Some((mut x, start)) = pending.pop() {
            let mut c = start;
            loop {
                while c < self.len && x[c] == 0 {
                    c += 1;
                }
                if c == self.len {
                    break;
                }
                let vx = self.ring.val(x[c]);
                match self.slot[c] {
                    None => {
                        self.normalize(&mut x, c, vx);
                        if vx > 0 {
                            let mut sat = x.clone();
                            self.ring.scale(&mut sat, self.ring.p_pow(self.ring.n - vx));
                            pending.push((sat, c + 1));
                        }
                        self.slot[c] = Some(self.rows.len());
                        self.rows.push(x);
                        self.vals.push(vx);
                        self.log_size += (self.ring.n - vx) as u64;
                        break;
                    }
                    Some(idx) => {
                        let vb = self.vals[idx];
                        if vx >= vb {
                            let f = x[c] / self.ring.p.pow(vb);
                            self.ring.sub_mul_assign(&mut x[c..], f, &self.rows[idx][c..]);
                            debug_assert_eq!(x[c], 0);
                        } else {
                            self.normalize(&mut x, c, vx);
                            let mut sat = x.clone();
                            self.ring.scale(&mut sat, self.ring.p_pow(self.ring.n - vx));
                            pending.push((sat, c + 1));
                            let old = std::mem::replace(&mut self.rows[idx], x);
                            self.vals[idx] = vx;
                            self.log_size += (vb - vx) as u64;
                            x = old;
                        }
                    }
                }
            }
        }
        self.log_size > before
    }

    fn normalize(&self, x: &mut [u64], c: usize, v: u32) {
        let unit = x[c] / self.ring.p.pow(v);
        let inv = self.ring.inv(unit);
        self.ring.scale(&mut x[c..], inv);
    }

    /// Whether `x` lies in the module.
    pub fn contains(&self, x: &[u64]) -> bool {
        let mut x = x.to_vec();
        for c in 0..self.len {
            if x[c] == 0 {
                continue;
            }
            let Some(idx) = self.slot[c] else { return false };
            let vb = self.vals[idx];
            if self.ring.val(x[c]) < vb {
                return false;
            }
            let f = x[c] / self.ring.p.pow(vb);
            self.ring.sub_mul_assign(&mut x[c..], f, &self.rows[idx][c..]);
        }
        true
    }
}

/// Generators of `{x : l(x) = 0 for every constraint l}` inside `(Z/p^N)^len`,
/// fed one sparse linear form at a time. Generators are stored by coordinate.
#[derive(Clone, Debug)]
pub struct KernelBuilder {
    ring: Zpn,
    len: usize,
    count: usize,
    coords: Vec<Vec<u64>>,
}

impl KernelBuilder {
    pub fn new(ring: Zpn, len: usize) -> Self {
        let coords = (0..len)
            .map(|c| {
                let mut col = vec![0; len];
                col[c] = 1;
                col
            })
            .collect();
        KernelBuilder { ring, len, count: len, coords }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn generator_count(&self) -> usize {
        self.count
    }

    /// Restricts to the kernel of `x -> sum coeff * x[index]`.
    pub fn constrain(&mut self, form: &[(usize, u64)]) {
        let r = self.ring;
        let mut values = vec![0u64; self.count];
        for &(idx, a) in form {
            let a = a % r.q;
            if a == 0 {
                continue;
            }
            for (v, &x) in values.iter_mut().zip(&self.coords[idx]) {
                if x != 0 {
                    *v = r.add(*v, r.mul(a, x));
                }
            }
        }
        let Some(j) = (0..self.count)
            .filter(|&i| values[i] != 0)
            .min_by_key(|&i| r.val(values[i]))
        else {
            return;
        };
        let v = r.val(values[j]);
        let pv = r.p.pow(v);
        let inv = r.inv(values[j] / pv);
        let factors: Vec<(usize, u64)> = (0..self.count)
            .filter(|&i| i != j && values[i] != 0)
            .map(|i| (i, r.mul(values[i] / pv, inv)))
            .collect();
        let scale = r.p_pow(r.n - v);
        for col in self.coords.iter_mut() {
            let pj = col[j];
            if pj == 0 {
                continue;
            }
            for &(i, f) in &factors {
                col[i] = r.sub(col[i], r.mul(f, pj));
            }
            col[j] = r.mul(pj, scale);
        }
        if scale == 0 {
            for col in self.coords.iter_mut() {
                col.swap_remove(j);
            }
            self.count -= 1;
        }
    }

    pub fn finish(self) -> Vec<Vec<u64>> {
        (0..self.count)
            .map(|i| self.coords.iter().map(|col| col[i]).collect::<Vec<u64>>())
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect()
    }
}

/// Exponents, descending, of `(span(gens) + span(sub)) / span(sub)`.
pub fn quotient_structure(sub: &Echelon, gens: &[Vec<u64>]) -> Vec<u32> {
    let ring = sub.ring;
    let n = ring.n;
    let mut e = sub.clone();
    // sizes[j] = log |p^j F + B|
    let mut sizes = vec![0u64; n as usize + 1];
    sizes[n as usize] = e.log_size();
    for j in (0..n).rev() {
        let pj = ring.p_pow(j);
        for g in gens {
            let mut x = g.clone();
            ring.scale(&mut x, pj);
            e.insert(x);
        }
        sizes[j as usize] = e.log_size();
    }
    // at_least[k] = number of summands of order >= p^(k+1)
    let at_least: Vec<u64> = (0..n as usize).map(|j| sizes[j] - sizes[j + 1]).collect();
    let mut out = Vec::new();
    for k in (0..n as usize).rev() {
        let above = if k + 1 < n as usize { at_least[k + 1] } else { 0 };
        for _ in 0..at_least[k].saturating_sub(above) {
            out.push(k as u32 + 1);
        }
    }
    out
}

/// A subset of `gens` generating the same module modulo `sub`.
pub fn minimal_generators(sub: &Echelon, gens: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut e = sub.clone();
    gens.into_iter().filter(|g| e.insert(g.clone())).collect()
}

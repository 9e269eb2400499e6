use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::CohomologyError;
use crate::linalg::Base;
use crate::module::is_prime;

/// `Zp(w)` truncated to `Z/p^N`, or `Zp(w)` at precision `N`: a unit `g`
/// acts by `g^w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightModule {
    pub p: u64,
    pub w: i64,
    pub base: Base,
}

impl WeightModule {
    pub fn new(p: u64, w: i64, base: Base) -> Result<Self, CohomologyError> {
        if !is_prime(p) {
            return Err(CohomologyError::Precondition(format!("{p} is not prime")));
        }
        if base.prime() != Some(p) {
            return Err(CohomologyError::Precondition(format!(
                "weight module over {base:?} at p = {p}"
            )));
        }
        Ok(WeightModule { p, w, base })
    }

    /// The module in internal degree `t`; `None` for odd `t`.
    pub fn for_degree(p: u64, t: i64, base: Base) -> Result<Option<Self>, CohomologyError> {
        if t.rem_euclid(2) == 1 {
            return Ok(None);
        }
        Self::new(p, t / 2, base).map(Some)
    }

    pub fn precision(&self) -> u32 {
        self.base.precision().expect("weight modules live over local bases")
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.precision())
    }

    /// `g^w mod p^N` for a unit residue `g`.
    pub fn action(&self, g: &BigInt) -> BigInt {
        unit_power(g, self.w, &self.modulus())
    }
}

/// `g^e mod m` for `g` prime to `m`, negative `e` through the inverse.
pub(crate) fn unit_power(g: &BigInt, e: i64, m: &BigInt) -> BigInt {
    let base = g.mod_floor(m);
    let pos = base.modpow(&BigInt::from(e.unsigned_abs()), m);
    if e >= 0 {
        pos
    } else {
        let inv = pos.extended_gcd(m);
        assert!(inv.gcd.is_one(), "not a unit");
        inv.x.mod_floor(m)
    }
}

/// Topological generator of the procyclic factor: 5 at p = 2, 1 + p otherwise.
pub fn procyclic_generator(p: u64) -> u64 {
    if p == 2 {
        5
    } else {
        1 + p
    }
}

fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&f| BigInt::from(g).modpow(&BigInt::from(phi / f), &BigInt::from(p)) != BigInt::one())
        })
        .unwrap_or(1)
}

/// Generator of the torsion factor modulo `p^n`, with its order: `-1` of
/// order 2 at p = 2, and at odd p the root of unity of order `p - 1` lifting
/// the least primitive root.
pub fn torsion_generator(p: u64, n: u32) -> (BigInt, u64) {
    let m = BigInt::from(p).pow(n);
    if p == 2 {
        return ((m.clone() - 1u32).mod_floor(&m), 2);
    }
    let g = BigInt::from(primitive_root(p));
    let lift = g.modpow(&BigInt::from(p).pow(n), &m);
    debug_assert!(lift.modpow(&BigInt::from(p - 1), &m).is_one() || m.is_zero());
    (lift, p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_lift_has_exact_order() {
        for (p, n) in [(3u64, 6u32), (5, 4), (7, 3), (13, 2)] {
            let m = BigInt::from(p).pow(n);
            let (w, order) = torsion_generator(p, n);
            assert!(w.modpow(&BigInt::from(order), &m).is_one());
            for d in 1..order {
                if order % d == 0 {
                    assert!(!w.modpow(&BigInt::from(d), &m).is_one());
                }
            }
        }
        assert_eq!(torsion_generator(2, 5).0, BigInt::from(31));
    }

    #[test]
    fn negative_weights_invert() {
        let m = WeightModule::new(2, -1, Base::Modular { p: 2, n: 4 }).unwrap();
        assert_eq!(m.action(&BigInt::from(5)), BigInt::from(13));
        let m = WeightModule::new(3, 2, Base::Padic { p: 3, precision: 3 }).unwrap();
        assert_eq!(m.action(&BigInt::from(4)), BigInt::from(16));
    }

    #[test]
    fn odd_degrees_have_no_module() {
        assert!(WeightModule::for_degree(2, 3, Base::Modular { p: 2, n: 2 }).unwrap().is_none());
        assert_eq!(
            WeightModule::for_degree(2, -8, Base::Modular { p: 2, n: 2 }).unwrap().unwrap().w,
            -4
        );
    }
}

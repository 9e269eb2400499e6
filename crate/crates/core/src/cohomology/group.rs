use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::weight::{unit_power, WeightModule};
use super::CohomologyError;
use crate::linalg::modular::Zpn;

/// A finite group given by its multiplication table, acting on `Z/p^N`
/// through a homomorphism to the units.
#[derive(Clone, Debug)]
pub struct FiniteGroupData {
    labels: Vec<u64>,
    table: Vec<u32>,
    identity: usize,
    action: Vec<u64>,
    ring: Zpn,
}

impl FiniteGroupData {
    /// Checks identity, inverses, associativity (Light's test on a generating
    /// set) and that the action is a homomorphism into the units.
    pub fn new(
        labels: Vec<u64>,
        table: Vec<u32>,
        action: Vec<u64>,
        ring: Zpn,
    ) -> Result<Self, CohomologyError> {
        let n = labels.len();
        if n == 0 || table.len() != n * n || action.len() != n {
            return Err(CohomologyError::InvalidGroup("inconsistent sizes".into()));
        }
        if table.iter().any(|&x| x as usize >= n) {
            return Err(CohomologyError::InvalidGroup("product out of range".into()));
        }
        let mul = |a: usize, b: usize| table[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| CohomologyError::InvalidGroup("no identity".into()))?;
        for g in 0..n {
            if !(0..n).any(|h| mul(g, h) == identity && mul(h, g) == identity) {
                return Err(CohomologyError::InvalidGroup(format!("{} has no inverse", labels[g])));
            }
        }
        let gens = generating_set(n, identity, &mul);
        for &s in &gens {
            for a in 0..n {
                for b in 0..n {
                    if mul(mul(a, b), s) != mul(a, mul(b, s)) {
                        return Err(CohomologyError::InvalidGroup(format!(
                            "({}*{})*{} differs from {}*({}*{})",
                            labels[a], labels[b], labels[s], labels[a], labels[b], labels[s]
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            if action[a] % ring.prime() == 0 {
                return Err(CohomologyError::InvalidAction(format!(
                    "{} acts by a non-unit",
                    labels[a]
                )));
            }
            for b in 0..n {
                if action[mul(a, b)] != ring.mul(action[a], action[b]) {
                    return Err(CohomologyError::InvalidAction(format!(
                        "at ({}, {})",
                        labels[a], labels[b]
                    )));
                }
            }
        }
        Ok(FiniteGroupData { labels, table, identity, action, ring })
    }

    /// `(Z/p^r)^x` acting on `Z/p^N(w)`; elements are labelled by their
    /// residues in `[1, p^r)`.
    pub fn units_mod(p: u64, r: u32, w: i64, ring: Zpn) -> Result<Self, CohomologyError> {
        let q = p.checked_pow(r).filter(|&q| q < (1 << 32)).ok_or_else(|| {
            CohomologyError::Precondition(format!("quotient level {r} too large"))
        })?;
        let labels: Vec<u64> = (1..q).filter(|x| x % p != 0).collect();
        let mut index = vec![u32::MAX; q as usize];
        for (i, &x) in labels.iter().enumerate() {
            index[x as usize] = i as u32;
        }
        let n = labels.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &labels {
            for &b in &labels {
                table.push(index[(a * b % q) as usize]);
            }
        }
        let m = BigInt::from(ring.modulus());
        let action = labels
            .iter()
            .map(|&g| unit_power(&BigInt::from(g), w, &m).to_u64().expect("reduced"))
            .collect();
        Self::new(labels, table, action, ring)
    }

    pub fn units_for(module: &WeightModule, r: u32) -> Result<Self, CohomologyError> {
        let ring = Zpn::new(module.p, module.precision())?;
        Self::units_mod(module.p, r, module.w, ring)
    }

    /// `Z/m` generated by an element acting by `a`.
    pub fn cyclic(m: usize, a: u64, ring: Zpn) -> Result<Self, CohomologyError> {
        let labels = (0..m as u64).collect();
        let table = (0..m).flat_map(|i| (0..m).map(move |j| ((i + j) % m) as u32)).collect();
        let action = (0..m as u64).map(|i| ring.pow(a, i)).collect();
        Self::new(labels, table, action, ring)
    }

    pub fn trivial(ring: Zpn) -> Self {
        Self::new(vec![0], vec![0], vec![1], ring).expect("the trivial group")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.labels.len() + b] as usize
    }

    #[inline]
    pub fn action(&self, g: usize) -> u64 {
        self.action[g]
    }

    pub fn ring(&self) -> Zpn {
        self.ring
    }
}

fn generating_set(n: usize, identity: usize, mul: &impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut inside = vec![false; n];
    inside[identity] = true;
    let mut members = vec![identity];
    let mut gens = Vec::new();
    while let Some(g) = (0..n).find(|&g| !inside[g]) {
        gens.push(g);
        // close under right multiplication by the generators
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_mod_8() {
        let ring = Zpn::new(2, 1).unwrap();
        let g = FiniteGroupData::units_mod(2, 3, 0, ring).unwrap();
        assert_eq!(g.labels(), &[1, 3, 5, 7]);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.mul(1, 2), 3);
    }

    #[test]
    fn action_must_be_a_homomorphism() {
        // 2 * 2 = 1 mod 3, but 2 * 2 = 4 mod 9
        let ring = Zpn::new(3, 2).unwrap();
        assert!(matches!(
            FiniteGroupData::units_mod(3, 1, 1, ring),
            Err(CohomologyError::InvalidAction(_))
        ));
        let ring = Zpn::new(2, 3).unwrap();
        assert!(FiniteGroupData::units_mod(2, 3, 1, ring).is_ok());
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let ring = Zpn::new(2, 1).unwrap();
        // a loop of order 5 with identity 0 that is not a group
        let t: Vec<u32> = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        let r = FiniteGroupData::new((0..5).collect(), t, vec![1; 5], ring);
        assert!(matches!(r, Err(CohomologyError::InvalidGroup(_))));
    }
}

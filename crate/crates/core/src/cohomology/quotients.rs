use std::collections::HashMap;

use super::bar::BarComplex;
use super::group::FiniteGroupData;
use super::{Certificate, CohomologyError, CohomologyResult, Route};
use crate::linalg::modular::{minimal_generators, quotient_structure, Echelon, Zpn};
use crate::module::{is_prime, Atom, ModuleExpr};

/// Search limits for the finite-quotient route. `budget` caps the dense
/// entries held by any single bar-complex computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteConfig {
    pub budget: usize,
    pub max_level: u32,
    pub max_precision: u32,
}

impl Default for BruteConfig {
    fn default() -> Self {
        BruteConfig { budget: 1_000_000, max_level: 12, max_precision: 7 }
    }
}

/// `H^s_c(Zp^x, Zp(w))` for `s <= s_max` from bar complexes of the quotients
/// `(Z/p^r)^x` with coefficients `Z/p^N(w)`.
///
/// For fixed `s` and `N` the continuous group with finite coefficients is the
/// union of the inflation images `I(r, R) = im(H^s(G_r) -> H^s(G_R))`; it is
/// read off once `I(r, R) = I(r, R + 1) = I(r + 1, R + 1)`. The integral
/// groups `H^s = Zp^f + T_s` then come from the universal coefficient sequence
/// `H^s(Z/p^N) = (Z/p^N)^f + T_s + T_(s+1)[p^N]`, valid for `N > exp(T_s)`:
/// if no summand has order `p^N` then `f = 0` and the rest is `T_(s+1)`;
/// otherwise free summands are read from lockstep growth over the last three
/// reachable `N`.
pub fn continuous_via_quotients(
    p: u64,
    w: i64,
    s_max: u32,
    config: BruteConfig,
) -> Result<CohomologyResult, CohomologyError> {
    let (result, err) = continuous_via_quotients_partial(p, w, s_max, config);
    match err {
        Some(e) => Err(e),
        None => Ok(result),
    }
}

/// Like [`continuous_via_quotients`], but returns the degrees certified before
/// the first failure together with that failure.
pub fn continuous_via_quotients_partial(
    p: u64,
    w: i64,
    s_max: u32,
    config: BruteConfig,
) -> (CohomologyResult, Option<CohomologyError>) {
    let mut result =
        CohomologyResult { p, route: Route::Brute, degrees: Vec::new(), certificates: Vec::new() };
    if !is_prime(p) {
        return (result, Some(CohomologyError::Precondition(format!("{p} is not prime"))));
    }
    let mut torsion: Vec<u32> = Vec::new();
    for s in 0..=s_max {
        match peel_degree(p, w, s, &torsion, config) {
            Ok(step) => {
                let mut atoms = vec![Atom::Padic; step.free];
                atoms.extend(torsion.iter().map(|&k| Atom::Cyclic(k)));
                result.degrees.push(ModuleExpr::from_atoms(p, atoms));
                result.certificates.push(step.certificate);
                torsion = step.next_torsion;
            }
            Err(e) => return (result, Some(e)),
        }
    }
    (result, None)
}

struct Peeled {
    free: usize,
    next_torsion: Vec<u32>,
    certificate: Certificate,
}

fn peel_degree(
    p: u64,
    w: i64,
    s: u32,
    torsion: &[u32],
    config: BruteConfig,
) -> Result<Peeled, CohomologyError> {
    let lo = torsion.iter().max().map_or(1, |&k| k + 1);
    let mut history: Vec<(u32, Vec<u32>, Certificate)> = Vec::new();
    let mut last_failure = None;
    for n in lo..=config.max_precision {
        let (exps, cert) = match finite_coefficients(p, w, s, n, config) {
            Ok(x) => x,
            Err(e) => {
                last_failure = Some(e);
                break;
            }
        };
        log::debug!("p={p} w={w} s={s} N={n}: {exps:?} at {cert}");
        if !exps.contains(&n) {
            let next = multiset_minus(&exps, torsion).ok_or_else(|| inconsistent(s, torsion, &exps))?;
            return Ok(Peeled { free: 0, next_torsion: next, certificate: cert });
        }
        history.push((n, exps, cert));
    }
    if history.len() >= 3 {
        let tail = &history[history.len() - 3..];
        let split: Vec<(usize, Vec<u32>)> = tail
            .iter()
            .map(|(n, exps, _)| {
                let top = exps.iter().filter(|&&k| k == *n).count();
                (top, exps.iter().copied().filter(|&k| k != *n).collect())
            })
            .collect();
        if split.iter().all(|x| *x == split[0]) {
            let (free, rest) = split[0].clone();
            let next = multiset_minus(&rest, torsion).ok_or_else(|| inconsistent(s, torsion, &rest))?;
            return Ok(Peeled { free, next_torsion: next, certificate: tail[2].2 });
        }
    }
    let reached = history.last().map_or(lo.saturating_sub(1), |h| h.0);
    let why = match last_failure {
        Some(e) => format!("failed at N = {}: {e}", reached + 1),
        None => format!("no exponent gap or lockstep up to N = {reached}"),
    };
    Err(CohomologyError::NoStabilization { degree: s as usize, detail: why })
}

fn inconsistent(s: u32, torsion: &[u32], exps: &[u32]) -> CohomologyError {
    CohomologyError::NoStabilization {
        degree: s as usize,
        detail: format!("torsion {torsion:?} is not a summand of {exps:?}"),
    }
}

/// `a - b` as multisets, `None` unless `b` is contained in `a`.
fn multiset_minus(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    let mut rest = a.to_vec();
    for k in b {
        let i = rest.iter().position(|x| x == k)?;
        rest.remove(i);
    }
    rest.sort_unstable_by(|x, y| y.cmp(x));
    Some(rest)
}

/// Smallest level through which `g -> g^w mod p^N` factors.
fn min_level(p: u64, w: i64, n: u32) -> u32 {
    let floor = if p == 2 { 2 } else { 1 };
    if w == 0 {
        return floor;
    }
    let mut v = 0;
    let mut x = w.unsigned_abs();
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    n.saturating_sub(v).max(floor)
}

/// Exponents of `H^s_c(Zp^x, Z/p^N(w))`, with the levels that certified them.
fn finite_coefficients(
    p: u64,
    w: i64,
    s: u32,
    n: u32,
    config: BruteConfig,
) -> Result<(Vec<u32>, Certificate), CohomologyError> {
    let mut search = LevelSearch::new(p, w, s, n, config)?;
    let r0 = min_level(p, w, n);
    for big in r0..config.max_level {
        if !search.fits_target(big + 1) {
            break;
        }
        for r in r0..=big {
            let (Some(a), Some(b), Some(c)) =
                (search.image(r, big)?, search.image(r, big + 1)?, search.image(r + 1, big + 1)?)
            else {
                continue;
            };
            if a == b && b == c {
                let cert = Certificate { precision: n, level: Some(r), target_level: Some(big) };
                return Ok((a, cert));
            }
        }
    }
    Err(CohomologyError::NoStabilization {
        degree: s as usize,
        detail: format!("inflation images with Z/{p}^{n} coefficients did not settle within the level and budget limits"),
    })
}

struct LevelSearch {
    p: u64,
    w: i64,
    s: u32,
    ring: Zpn,
    budget: usize,
    groups: HashMap<u32, Option<FiniteGroupData>>,
    cocycles: HashMap<u32, Option<Vec<Vec<u64>>>>,
    boundaries: HashMap<u32, Option<Echelon>>,
    images: HashMap<(u32, u32), Option<Vec<u32>>>,
}

impl LevelSearch {
    fn new(p: u64, w: i64, s: u32, n: u32, config: BruteConfig) -> Result<Self, CohomologyError> {
        Ok(LevelSearch {
            p,
            w,
            s,
            ring: Zpn::new(p, n)?,
            budget: config.budget,
            groups: HashMap::new(),
            cocycles: HashMap::new(),
            boundaries: HashMap::new(),
            images: HashMap::new(),
        })
    }

    fn unit_count(&self, r: u32) -> Option<usize> {
        let q = self.p.checked_pow(r)?;
        usize::try_from(q - q / self.p).ok()
    }

    fn cochains(&self, r: u32, k: u32) -> usize {
        self.unit_count(r)
            .and_then(|n| (n - 1).checked_pow(k))
            .unwrap_or(usize::MAX)
    }

    /// The multiplication table is held densely as well.
    fn table_fits(&self, r: u32) -> bool {
        self.unit_count(r).and_then(|n| n.checked_mul(n)).is_some_and(|t| t <= self.budget)
    }

    fn fits_target(&self, big: u32) -> bool {
        if !self.table_fits(big) {
            return false;
        }
        let b = if self.s == 0 {
            0
        } else {
            self.cochains(big, self.s - 1).saturating_mul(self.cochains(big, self.s))
        };
        b <= self.budget && self.cochains(big, self.s) <= self.budget
    }

    fn fits_source(&self, r: u32) -> bool {
        if !self.table_fits(r) {
            return false;
        }
        let z = self.cochains(r, self.s).saturating_mul(self.cochains(r, self.s));
        z <= self.budget && self.cochains(r, self.s + 1) <= self.budget
    }

    fn group(&mut self, r: u32) -> Result<Option<&FiniteGroupData>, CohomologyError> {
        if !self.groups.contains_key(&r) {
            let g = match FiniteGroupData::units_mod(self.p, r, self.w, self.ring) {
                Ok(g) => Some(g),
                Err(CohomologyError::Precondition(_)) => None,
                Err(e) => return Err(e),
            };
            self.groups.insert(r, g);
        }
        Ok(self.groups[&r].as_ref())
    }

    fn boundaries(&mut self, big: u32) -> Result<Option<&Echelon>, CohomologyError> {
        if !self.boundaries.contains_key(&big) {
            let b = if self.fits_target(big) {
                let s = self.s;
                self.group(big)?.map(|g| BarComplex::new(g).coboundaries(s))
            } else {
                None
            };
            self.boundaries.insert(big, b);
        }
        Ok(self.boundaries[&big].as_ref())
    }

    /// Cocycle generators at level `r`, reduced modulo coboundaries.
    fn cocycles(&mut self, r: u32) -> Result<Option<&Vec<Vec<u64>>>, CohomologyError> {
        if !self.cocycles.contains_key(&r) {
            let z = if self.fits_source(r) {
                let s = self.s;
                self.group(r)?.map(|g| {
                    let bar = BarComplex::new(g);
                    minimal_generators(&bar.coboundaries(s), bar.cocycles(s))
                })
            } else {
                None
            };
            self.cocycles.insert(r, z);
        }
        Ok(self.cocycles[&r].as_ref())
    }

    /// Exponents of `I(r, R)`, `None` when out of reach.
    fn image(&mut self, r: u32, big: u32) -> Result<Option<Vec<u32>>, CohomologyError> {
        if let Some(x) = self.images.get(&(r, big)) {
            return Ok(x.clone());
        }
        let out = self.compute_image(r, big)?;
        self.images.insert((r, big), out.clone());
        Ok(out)
    }

    fn compute_image(&mut self, r: u32, big: u32) -> Result<Option<Vec<u32>>, CohomologyError> {
        if self.cocycles(r)?.is_none() || self.boundaries(big)?.is_none() {
            return Ok(None);
        }
        let gens = self.cocycles[&r].as_ref().expect("present");
        let dim = self.cochains(big, self.s);
        if gens.len().saturating_mul(dim) > self.budget {
            return Ok(None);
        }
        let (Some(small), Some(large)) = (self.groups[&r].as_ref(), self.groups[&big].as_ref())
        else {
            return Ok(None);
        };
        let coords = inflation_coordinates(small, large, self.s, self.p.pow(r));
        let inflated: Vec<Vec<u64>> = gens
            .iter()
            .map(|z| coords.iter().map(|c| c.map_or(0, |i| z[i])).collect())
            .collect();
        let b = self.boundaries[&big].as_ref().expect("present");
        Ok(Some(quotient_structure(b, &inflated)))
    }
}

/// For each normalized `s`-cochain coordinate of the large group, the
/// coordinate of its image tuple in the small group (`None` if some entry maps
/// to the identity).
fn inflation_coordinates(
    small: &FiniteGroupData,
    large: &FiniteGroupData,
    s: u32,
    modulus: u64,
) -> Vec<Option<usize>> {
    let proj: Vec<usize> = large
        .labels()
        .iter()
        .map(|&x| small.labels().binary_search(&(x % modulus)).expect("unit maps to unit"))
        .collect();
    let bs = BarComplex::new(small);
    let bl = BarComplex::new(large);
    let mut tuple = Vec::new();
    let mut image = Vec::with_capacity(s as usize);
    (0..bl.dim(s))
        .map(|i| {
            bl.decode(s, i, &mut tuple);
            image.clear();
            image.extend(tuple.iter().map(|&g| proj[g]));
            bs.encode(&image)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(p: u64, w: i64, s_max: u32) -> Vec<String> {
        continuous_via_quotients(p, w, s_max, BruteConfig::default())
            .unwrap()
            .degrees
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn multiset_difference() {
        assert_eq!(multiset_minus(&[3, 1, 1], &[1]), Some(vec![3, 1]));
        assert_eq!(multiset_minus(&[3], &[1]), None);
    }

    #[test]
    fn weight_one_at_two() {
        assert_eq!(h(2, 1, 1), ["0", "Z/2"]);
    }

    #[test]
    fn weight_four_at_two() {
        assert_eq!(h(2, 4, 1), ["0", "Z/2^4"]);
    }

    #[test]
    fn weight_zero_at_two() {
        assert_eq!(h(2, 0, 2), ["Zp", "Zp", "Z/2"]);
    }

    #[test]
    fn odd_prime() {
        assert_eq!(h(3, 2, 1), ["0", "Z/3"]);
        assert_eq!(h(3, 1, 1), ["0", "0"]);
    }
}

use super::group::FiniteGroupData;
use super::{Certificate, CohomologyError, CohomologyResult, Route};
use crate::linalg::modular::{quotient_structure, Echelon, KernelBuilder, Zpn};
use crate::module::ModuleExpr;

/// Normalized bar cochains `C^k(G, Z/p^N)`: functions on `(G - 1)^k`, with
/// `(df)(g1..g(k+1)) = g1 f(g2..) + sum (-1)^j f(.., gj g(j+1), ..) + (-1)^(k+1) f(g1..gk)`.
pub struct BarComplex<'a> {
    group: &'a FiniteGroupData,
    nonid: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl<'a> BarComplex<'a> {
    pub fn new(group: &'a FiniteGroupData) -> Self {
        let nonid: Vec<usize> = (0..group.order()).filter(|&g| g != group.identity()).collect();
        let mut pos = vec![None; group.order()];
        for (i, &g) in nonid.iter().enumerate() {
            pos[g] = Some(i);
        }
        BarComplex { group, nonid, pos }
    }

    pub fn group(&self) -> &FiniteGroupData {
        self.group
    }

    pub fn ring(&self) -> Zpn {
        self.group.ring()
    }

    /// Saturates at `usize::MAX`.
    pub fn dim(&self, k: u32) -> usize {
        self.nonid.len().checked_pow(k).unwrap_or(usize::MAX)
    }

    /// Group element indices of the tuple with the given cochain index.
    pub fn decode(&self, k: u32, mut index: usize, out: &mut Vec<usize>) {
        let m = self.nonid.len();
        out.clear();
        out.resize(k as usize, 0);
        for slot in out.iter_mut().rev() {
            *slot = self.nonid[index % m];
            index /= m;
        }
    }

    /// Cochain index of a tuple, `None` if some entry is the identity.
    pub fn encode(&self, tuple: &[usize]) -> Option<usize> {
        let m = self.nonid.len();
        tuple.iter().try_fold(0usize, |acc, &g| Some(acc * m + self.pos[g]?))
    }

    /// Calls `f(row, form)` for each coordinate of `d^k`, where `form` lists
    /// `(column, coefficient)` pairs on `C^k`.
    pub fn for_each_row(&self, k: u32, mut f: impl FnMut(usize, &[(usize, u64)])) {
        let ring = self.ring();
        let rows = self.dim(k + 1);
        let mut tuple = Vec::new();
        let mut face = Vec::with_capacity(k as usize);
        let mut form: Vec<(usize, u64)> = Vec::with_capacity(k as usize + 2);
        let sign = |j: u32| if j % 2 == 0 { 1 } else { ring.neg(1) };
        for row in 0..rows {
            self.decode(k + 1, row, &mut tuple);
            form.clear();
            let mut push = |col: Option<usize>, c: u64| {
                if let Some(col) = col {
                    match form.iter_mut().find(|(x, _)| *x == col) {
                        Some(e) => e.1 = ring.add(e.1, c),
                        None => form.push((col, c)),
                    }
                }
            };
            push(self.encode(&tuple[1..]), self.group.action(tuple[0]));
            for j in 1..=k as usize {
                face.clear();
                face.extend_from_slice(&tuple[..j - 1]);
                face.push(self.group.mul(tuple[j - 1], tuple[j]));
                face.extend_from_slice(&tuple[j + 1..]);
                push(self.encode(&face), sign(j as u32));
            }
            push(self.encode(&tuple[..k as usize]), sign(k + 1));
            form.retain(|&(_, c)| c != 0);
            f(row, &form);
        }
    }

    /// Generators of `Z^k`.
    pub fn cocycles(&self, k: u32) -> Vec<Vec<u64>> {
        let mut kernel = KernelBuilder::new(self.ring(), self.dim(k));
        self.for_each_row(k, |_, form| kernel.constrain(form));
        kernel.finish()
    }

    /// `B^k` as a Howell basis; `B^0 = 0`.
    pub fn coboundaries(&self, k: u32) -> Echelon {
        let len = self.dim(k);
        let mut e = Echelon::new(self.ring(), len);
        if k == 0 {
            return e;
        }
        let mut images = vec![vec![0u64; len]; self.dim(k - 1)];
        let ring = self.ring();
        self.for_each_row(k - 1, |row, form| {
            for &(col, c) in form {
                images[col][row] = ring.add(images[col][row], c);
            }
        });
        for v in images {
            e.insert(v);
        }
        e
    }

    /// Dense entries held while computing `H^k`.
    pub fn footprint(&self, k: u32) -> usize {
        let z = self.dim(k).saturating_mul(self.dim(k));
        let b = if k == 0 { 0 } else { self.dim(k - 1).saturating_mul(self.dim(k)) };
        z.saturating_add(b).max(self.dim(k + 1))
    }

    pub fn cohomology(&self, k: u32) -> ModuleExpr {
        let z = self.cocycles(k);
        let b = self.coboundaries(k);
        ModuleExpr::torsion(self.ring().prime(), &quotient_structure(&b, &z))
    }
}

/// `H^s(G, Z/p^N)` for `s <= s_max` from the normalized bar complex.
pub fn bar_cohomology_finite(
    group: &FiniteGroupData,
    s_max: u32,
    budget: usize,
) -> Result<CohomologyResult, CohomologyError> {
    let bar = BarComplex::new(group);
    let ring = group.ring();
    let mut degrees = Vec::new();
    for k in 0..=s_max {
        let needed = bar.footprint(k);
        if needed > budget {
            return Err(CohomologyError::BudgetExceeded { needed, budget });
        }
        degrees.push(bar.cohomology(k));
    }
    Ok(CohomologyResult {
        p: ring.prime(),
        route: Route::Bar,
        certificates: vec![Certificate::precision(ring.exponent()); degrees.len()],
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> Zpn {
        Zpn::new(p, n).unwrap()
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroupData::trivial(ring(3, 2));
        let h = bar_cohomology_finite(&g, 3, 1000).unwrap();
        assert_eq!(h.degrees[0], ModuleExpr::cyclic(3, 2));
        assert!(h.degrees[1..].iter().all(ModuleExpr::is_zero));
    }

    #[test]
    fn sign_action_of_c2_on_z4() {
        let r = ring(2, 2);
        let g = FiniteGroupData::cyclic(2, r.neg(1), r).unwrap();
        let h = bar_cohomology_finite(&g, 2, 1000).unwrap();
        assert_eq!(h.degrees, vec![ModuleExpr::cyclic(2, 1); 3]);
    }

    #[test]
    fn homomorphisms_from_units_mod_8() {
        let g = FiniteGroupData::units_mod(2, 3, 0, ring(2, 1)).unwrap();
        let h = bar_cohomology_finite(&g, 1, 1000).unwrap();
        assert_eq!(h.degrees[1], ModuleExpr::torsion(2, &[1, 1]));
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroupData::units_mod(2, 5, 0, ring(2, 1)).unwrap();
        assert!(matches!(
            bar_cohomology_finite(&g, 3, 10_000),
            Err(CohomologyError::BudgetExceeded { .. })
        ));
    }
}

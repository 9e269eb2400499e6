//! Derived p-completion functors on [`ModuleExpr`], with tensor, completed
//! tensor and Hom over `Z(p)`.
//!
//! Over `Z(p)` only `L_0` and `L_1` can be nonzero. On atoms:
//!
//! | atom     | `L_0`    | `L_1` |
//! |----------|----------|-------|
//! | `Z(p)`   | `Zp`     | 0     |
//! | `Zp`     | `Zp`     | 0     |
//! | `Z/p^k`  | `Z/p^k`  | 0     |
//! | `Q/Z(p)` | 0        | `Zp`  |

use thiserror::Error;

use crate::module::{Atom, ModuleExpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("{op}({left}, {right}) leaves the atom class")]
    OutsideAtomClass {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("Hom source {0} is not projective")]
    NotProjective(String),
    #[error("modules over different primes: {0} and {1}")]
    PrimeMismatch(u64, u64),
}

fn common_prime(m: &ModuleExpr, n: &ModuleExpr) -> Result<u64, FunctorError> {
    match (m.is_zero(), n.is_zero()) {
        (true, false) => Ok(n.prime()),
        (false, true) | (true, true) => Ok(m.prime()),
        (false, false) if m.prime() == n.prime() => Ok(m.prime()),
        _ => Err(FunctorError::PrimeMismatch(m.prime(), n.prime())),
    }
}

fn l0_atom(a: Atom) -> Option<Atom> {
    match a {
        Atom::LocalFree | Atom::Padic => Some(Atom::Padic),
        Atom::Cyclic(k) => Some(Atom::Cyclic(k)),
        Atom::PruferQuotient => None,
    }
}

pub fn l0(m: &ModuleExpr) -> ModuleExpr {
    ModuleExpr::from_atoms(m.prime(), m.atoms().iter().filter_map(|&a| l0_atom(a)))
}

pub fn l1(m: &ModuleExpr) -> ModuleExpr {
    ModuleExpr::repeated(m.prime(), Atom::Padic, m.count(Atom::PruferQuotient))
}

/// `L_s` for any `s >= 0`; zero from `s = 2` on.
pub fn ls(m: &ModuleExpr, s: u32) -> ModuleExpr {
    match s {
        0 => l0(m),
        1 => l1(m),
        _ => ModuleExpr::zero(m.prime()),
    }
}

pub fn is_tame(m: &ModuleExpr) -> bool {
    l1(m).is_zero()
}

/// `a ⊗ b` when at least one side is finitely generated.
fn tensor_atoms(a: Atom, b: Atom) -> Option<Atom> {
    use Atom::*;
    match (a, b) {
        (LocalFree, x) | (x, LocalFree) => Some(x),
        (Cyclic(i), Cyclic(j)) => Some(Cyclic(i.min(j))),
        (Padic, Cyclic(k)) | (Cyclic(k), Padic) => Some(Cyclic(k)),
        (PruferQuotient, Cyclic(_)) | (Cyclic(_), PruferQuotient) => None,
        _ => unreachable!("tensor of two non-finitely-generated atoms"),
    }
}

pub fn tensor(m: &ModuleExpr, n: &ModuleExpr) -> Result<ModuleExpr, FunctorError> {
    let p = common_prime(m, n)?;
    if !m.is_finitely_generated() && !n.is_finitely_generated() {
        return Err(FunctorError::OutsideAtomClass {
            op: "tensor",
            left: m.to_string(),
            right: n.to_string(),
        });
    }
    let atoms = m
        .atoms()
        .iter()
        .flat_map(|&a| n.atoms().iter().filter_map(move |&b| tensor_atoms(a, b)));
    Ok(ModuleExpr::from_atoms(p, atoms))
}

/// Completed tensor product `L_0(M ⊗ N)`.
pub fn boxtimes(m: &ModuleExpr, n: &ModuleExpr) -> Result<ModuleExpr, FunctorError> {
    use Atom::*;
    let p = common_prime(m, n)?;
    let atoms = m.atoms().iter().flat_map(|&a| {
        n.atoms().iter().filter_map(move |&b| match (a, b) {
            (Padic, Padic) => Some(Padic),
            (Padic, PruferQuotient) | (PruferQuotient, Padic) => None,
            (PruferQuotient, PruferQuotient) => None,
            _ => tensor_atoms(a, b).and_then(l0_atom),
        })
    });
    Ok(ModuleExpr::from_atoms(p, atoms))
}

/// `Hom(M, N)` for `M` a sum of `Z(p)` and `Zp` atoms.
pub fn hom(m: &ModuleExpr, n: &ModuleExpr) -> Result<ModuleExpr, FunctorError> {
    use Atom::*;
    let p = common_prime(m, n)?;
    if m.atoms().iter().any(|a| !matches!(a, LocalFree | Padic)) {
        return Err(FunctorError::NotProjective(m.to_string()));
    }
    let mut atoms = Vec::new();
    for &a in m.atoms() {
        for &b in n.atoms() {
            match (a, b) {
                (LocalFree, x) => atoms.push(x),
                (Padic, Padic) => atoms.push(Padic),
                (Padic, Cyclic(k)) => atoms.push(Cyclic(k)),
                (Padic, LocalFree) | (Padic, PruferQuotient) => {
                    return Err(FunctorError::OutsideAtomClass {
                        op: "hom",
                        left: m.to_string(),
                        right: n.to_string(),
                    })
                }
                _ => unreachable!(),
            }
        }
    }
    Ok(ModuleExpr::from_atoms(p, atoms))
}

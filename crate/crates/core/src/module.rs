//! Isomorphism classes of finite direct sums of the four atoms
//! `Z(p)`, `Zp`, `Z/p^k` and `Q/Z(p)`, with their text grammar.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One indecomposable summand. The prime lives on the enclosing [`ModuleExpr`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// The local ring `Z(p)`.
    LocalFree,
    /// The p-adic integers `Zp`.
    Padic,
    /// `Z/p^k`, `k >= 1`.
    Cyclic(u32),
    /// The Prüfer quotient `Q/Z(p)`.
    PruferQuotient,
}

impl Atom {
    fn rank(&self) -> (u8, std::cmp::Reverse<u32>) {
        match *self {
            Atom::LocalFree => (0, std::cmp::Reverse(0)),
            Atom::Padic => (1, std::cmp::Reverse(0)),
            Atom::Cyclic(k) => (2, std::cmp::Reverse(k)),
            Atom::PruferQuotient => (3, std::cmp::Reverse(0)),
        }
    }

    /// Finitely generated over `Z(p)`.
    pub fn is_finitely_generated(&self) -> bool {
        matches!(self, Atom::LocalFree | Atom::Cyclic(_))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: free atoms, then `Zp`, then cyclic by descending exponent,
/// then `Q/Z(p)`.
impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

/// A finite direct sum of atoms over a fixed prime, kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleExpr {
    p: u64,
    atoms: Vec<Atom>,
}

impl ModuleExpr {
    pub fn zero(p: u64) -> Self {
        ModuleExpr { p, atoms: Vec::new() }
    }

    pub fn atom(p: u64, atom: Atom) -> Self {
        Self::from_atoms(p, vec![atom])
    }

    /// Builds a module from atoms in any order. `Cyclic(0)` atoms are dropped.
    pub fn from_atoms(p: u64, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms
            .into_iter()
            .filter(|a| *a != Atom::Cyclic(0))
            .collect();
        atoms.sort();
        ModuleExpr { p, atoms }
    }

    pub fn cyclic(p: u64, k: u32) -> Self {
        Self::from_atoms(p, [Atom::Cyclic(k)])
    }

    /// `Z/p^k1 + Z/p^k2 + ...` from a list of exponents.
    pub fn torsion(p: u64, exponents: &[u32]) -> Self {
        Self::from_atoms(p, exponents.iter().map(|&k| Atom::Cyclic(k)))
    }

    pub fn repeated(p: u64, atom: Atom, count: usize) -> Self {
        Self::from_atoms(p, std::iter::repeat(atom).take(count))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn count(&self, atom: Atom) -> usize {
        self.atoms.iter().filter(|a| **a == atom).count()
    }

    /// Exponents of the cyclic summands, descending.
    pub fn cyclic_exponents(&self) -> Vec<u32> {
        self.atoms
            .iter()
            .filter_map(|a| match a {
                Atom::Cyclic(k) => Some(*k),
                _ => None,
            })
            .collect()
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.atoms.iter().all(Atom::is_finitely_generated)
    }

    /// Composition length, defined for modules of finite length only.
    pub fn length(&self) -> Option<u64> {
        self.atoms
            .iter()
            .map(|a| match a {
                Atom::Cyclic(k) => Some(*k as u64),
                _ => None,
            })
            .sum()
    }

    /// Direct sum. Panics on mismatched primes; use [`ModuleExpr::try_sum`]
    /// where the primes are not known to agree.
    pub fn sum(&self, other: &ModuleExpr) -> ModuleExpr {
        self.try_sum(other).expect("direct sum of modules over different primes")
    }

    pub fn try_sum(&self, other: &ModuleExpr) -> Result<ModuleExpr, PrimeMismatch> {
        if self.is_zero() && other.p != self.p {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.p != other.p {
            return Err(PrimeMismatch(self.p, other.p));
        }
        Ok(Self::from_atoms(
            self.p,
            self.atoms.iter().chain(other.atoms.iter()).copied(),
        ))
    }

    /// Removes the atoms of `sub` from `self`, if `sub` is a sub-multiset.
    pub fn remove(&self, sub: &ModuleExpr) -> Option<ModuleExpr> {
        let mut rest = self.atoms.clone();
        for a in &sub.atoms {
            let i = rest.iter().position(|b| b == a)?;
            rest.remove(i);
        }
        Some(ModuleExpr { p: self.p, atoms: rest })
    }

    /// Parses the text grammar. The prime is read off `Z(p)`, `Q/Z(p)` or
    /// `Z/n`; `default_p` is used when no atom names it.
    pub fn parse(text: &str, default_p: Option<u64>) -> Result<ModuleExpr, ParseError> {
        Parser::new(text).parse(default_p)
    }
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("0");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match a {
                Atom::LocalFree => write!(f, "Z({})", self.p)?,
                Atom::Padic => f.write_str("Zp")?,
                Atom::Cyclic(1) => write!(f, "Z/{}", self.p)?,
                Atom::Cyclic(k) => write!(f, "Z/{}^{}", self.p, k)?,
                Atom::PruferQuotient => write!(f, "Q/Z({})", self.p)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("modules over different primes: {0} and {1}")]
pub struct PrimeMismatch(pub u64, pub u64);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `n = p^k` with `p` prime, if possible.
pub(crate) fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let (mut m, mut k) = (n, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let chars = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Parser { chars, pos: 0, _text: text }
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or_else(|| self._text.len())
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.offset(), message: message.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn eat(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        let matches = s
            .chars()
            .enumerate()
            .all(|(i, c)| self.chars.get(self.pos + i).map(|x| x.1) == Some(c));
        if matches {
            self.pos += n;
        }
        matches
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(c as u64 - '0' as u64))
                .ok_or(ParseError { position: self.offset(), message: "number too large".into() })?;
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        Ok(value)
    }

    fn prime_in_parens(&mut self) -> Result<u64, ParseError> {
        self.expect("(")?;
        let at = self.pos;
        let p = self.number()?;
        if !is_prime(p) {
            self.pos = at;
            return self.err(format!("{p} is not prime"));
        }
        self.expect(")")?;
        Ok(p)
    }

    fn parse(mut self, default_p: Option<u64>) -> Result<ModuleExpr, ParseError> {
        let mut atoms = Vec::new();
        let mut prime: Option<(u64, usize)> = None;
        let mut note = |p: u64, at: usize| -> Result<(), ParseError> {
            match prime {
                Some((q, _)) if q != p => Err(ParseError {
                    position: at,
                    message: format!("prime {p} conflicts with prime {q} used earlier"),
                }),
                _ => {
                    prime = Some((p, at));
                    Ok(())
                }
            }
        };
        if self.chars.is_empty() {
            return self.err("empty module expression");
        }
        loop {
            let at = self.offset();
            if self.eat("0") {
                // zero summand
            } else if self.eat("Q/Z") {
                let p = self.prime_in_parens()?;
                note(p, at)?;
                atoms.push(Atom::PruferQuotient);
            } else if self.eat("Zp") {
                atoms.push(Atom::Padic);
            } else if self.eat("Z/") {
                let base_at = self.offset();
                let n = self.number()?;
                let (p, k) = if self.eat("^") {
                    if !is_prime(n) {
                        return Err(ParseError { position: base_at, message: format!("{n} is not prime") });
                    }
                    let k = self.number()?;
                    if k == 0 || k > u32::MAX as u64 {
                        return self.err("exponent must be at least 1");
                    }
                    (n, k as u32)
                } else {
                    prime_power(n).ok_or(ParseError {
                        position: base_at,
                        message: format!("{n} is not a prime power"),
                    })?
                };
                note(p, at)?;
                atoms.push(Atom::Cyclic(k));
            } else if self.eat("Z") {
                let p = self.prime_in_parens()?;
                note(p, at)?;
                atoms.push(Atom::LocalFree);
            } else {
                return self.err("expected one of `0`, `Z(p)`, `Zp`, `Z/p^k`, `Q/Z(p)`");
            }
            if self.peek().is_none() {
                break;
            }
            self.expect("+")?;
        }
        let p = match (prime, default_p) {
            (Some((p, _)), _) => p,
            (None, Some(p)) => p,
            (None, None) if atoms.is_empty() => 2,
            (None, None) => {
                return Err(ParseError { position: 0, message: "cannot determine the prime".into() })
            }
        };
        Ok(ModuleExpr::from_atoms(p, atoms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_display() {
        let m = ModuleExpr::from_atoms(
            2,
            [Atom::PruferQuotient, Atom::Cyclic(1), Atom::Padic, Atom::Cyclic(4), Atom::LocalFree],
        );
        assert_eq!(m.to_string(), "Z(2) + Zp + Z/2^4 + Z/2 + Q/Z(2)");
        assert_eq!(ModuleExpr::zero(3).to_string(), "0");
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        let a = ModuleExpr::parse("Zp + Z/2^4 + Q/Z(2)", None).unwrap();
        let b = ModuleExpr::parse("  Q / Z ( 2 )+Zp+  Z/16 ", None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Zp + Z/2^4 + Q/Z(2)");
    }

    #[test]
    fn parse_infers_prime() {
        assert_eq!(ModuleExpr::parse("Z/9", None).unwrap().prime(), 3);
        assert_eq!(ModuleExpr::parse("Zp", Some(5)).unwrap().prime(), 5);
        assert_eq!(ModuleExpr::parse("0", None).unwrap(), ModuleExpr::zero(2));
        assert!(ModuleExpr::parse("Zp", None).is_err());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = ModuleExpr::parse("Zp + Z/6", None).unwrap_err();
        assert_eq!(e.position, 7);
        let e = ModuleExpr::parse("Z(2) + Z/3", None).unwrap_err();
        assert_eq!(e.position, 7);
        let e = ModuleExpr::parse("Zp +", Some(2)).unwrap_err();
        assert_eq!(e.position, 4);
        let e = ModuleExpr::parse("Z(4)", None).unwrap_err();
        assert_eq!(e.position, 2);
    }

    #[test]
    fn remove_sub_multiset() {
        let m = ModuleExpr::torsion(2, &[1, 1, 3]);
        assert_eq!(m.remove(&ModuleExpr::cyclic(2, 1)), Some(ModuleExpr::torsion(2, &[3, 1])));
        assert_eq!(m.remove(&ModuleExpr::cyclic(2, 2)), None);
    }
}

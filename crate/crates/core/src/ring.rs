//! Graded coefficient ring `F2[a1..an, e, t] / (ai^2 - e*ai, t^2, e*t)`.
//!
//! Here `e` stands for the symbol `{-1}` and `t` for `{2}`. Over a totally
//! real base field this ring embeds in mod-2 Milnor K-theory of
//! `k(a1, .., an)`, so every identity proved here is an identity of symbols
//! there; over other base fields the equalities are only statements about
//! this model ring.
//!
//! Elements are sets of reduced monomials (coefficients live in F2, so a
//! monomial is either present or not). Reduction is applied eagerly inside
//! multiplication.
//!
//! # Text form
//!
//! Terms are printed in canonical order joined by `" + "`. A monomial prints
//! as `e^k t a1 a3 ...` with exponent 1 suppressed; the empty monomial is
//! `1` and the zero element is `0`.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use crate::error::{Error, Result};

/// Largest supported number of variables `a1..an`.
pub const MAX_VARS: usize = 63;

/// A subset of `{1, .., 63}` stored as a bitset, bit `i - 1` for index `i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(u64);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VarSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{1, .., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables");
        if n == 0 {
            VarSet(0)
        } else {
            VarSet(u64::MAX >> (64 - n))
        }
    }

    pub fn singleton(i: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&i), "variable index {i} out of range");
        VarSet(1 << (i - 1))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(VarSet::EMPTY, |acc, i| acc.union(VarSet::singleton(i)))
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_VARS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VarSet(self.0 & other.0)
    }

    pub fn symmetric_difference(self, other: Self) -> Self {
        VarSet(self.0 ^ other.0)
    }

    pub fn without(self, i: usize) -> Self {
        VarSet(self.0 & !VarSet::singleton(i).0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest index present, 0 for the empty set.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i + 1)
            }
        })
    }

    /// All subsets of `self`, in increasing bit order.
    pub fn subsets(self) -> impl Iterator<Item = VarSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(VarSet(cur))
        })
    }

    /// Key under which sorted index lists compare lexicographically: sets
    /// containing a smaller first index come first.
    fn lex_key(self) -> Reverse<u64> {
        Reverse(self.0.reverse_bits())
    }
}

impl serde::Serialize for VarSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> serde::Deserialize<'de> for VarSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > MAX_VARS) {
            return Err(serde::de::Error::custom(format!("variable index {bad} out of range")));
        }
        Ok(VarSet::from_indices(indices))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A reduced monomial `e^eps t^tau prod_{i in vars} ai`.
///
/// Invariant: `tau` implies `eps == 0`, since `e*t = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: VarSet,
    eps: u32,
    tau: bool,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        vars: VarSet::EMPTY,
        eps: 0,
        tau: false,
    };

    /// Builds a monomial, returning `None` when it reduces to zero.
    pub fn new(vars: VarSet, eps: u32, tau: bool) -> Option<Self> {
        if tau && eps > 0 {
            None
        } else {
            Some(Monomial { vars, eps, tau })
        }
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn eps_pow(&self) -> u32 {
        self.eps
    }

    pub fn tau_pow(&self) -> u32 {
        self.tau as u32
    }

    pub fn has_tau(&self) -> bool {
        self.tau
    }

    pub fn degree(&self) -> usize {
        self.vars.len() + self.eps as usize + self.tau as usize
    }

    /// Product with reduction; `None` when the product vanishes.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        if self.tau && other.tau {
            return None;
        }
        let overlap = self.vars.intersection(other.vars).len() as u32;
        Monomial::new(
            self.vars.union(other.vars),
            self.eps + other.eps + overlap,
            self.tau || other.tau,
        )
    }

    fn sort_key(&self) -> (usize, u32, bool, Reverse<u64>) {
        (self.degree(), self.eps, self.tau, self.vars.lex_key())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.eps {
            0 => {}
            1 => parts.push("e".to_string()),
            k => parts.push(format!("e^{k}")),
        }
        if self.tau {
            parts.push("t".to_string());
        }
        parts.extend(self.vars.iter().map(|i| format!("a{i}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of the coefficient ring over `ambient` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ambient: usize,
    terms: BTreeSet<Monomial>,
}

impl RingElement {
    pub fn zero(ambient: usize) -> Self {
        assert!(ambient <= MAX_VARS, "at most {MAX_VARS} variables");
        RingElement {
            ambient,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(ambient: usize) -> Self {
        Self::monomial(ambient, Monomial::ONE)
    }

    /// The symbol `{-1}`.
    pub fn eps(ambient: usize) -> Self {
        Self::monomial(ambient, Monomial::new(VarSet::EMPTY, 1, false).unwrap())
    }

    /// `e^k`.
    pub fn eps_pow(ambient: usize, k: u32) -> Self {
        Self::monomial(ambient, Monomial::new(VarSet::EMPTY, k, false).unwrap())
    }

    /// The symbol `{2}`.
    pub fn tau(ambient: usize) -> Self {
        Self::monomial(ambient, Monomial::new(VarSet::EMPTY, 0, true).unwrap())
    }

    /// The generator `ai`. Panics when `i` is not in `1..=ambient`.
    pub fn var(ambient: usize, i: usize) -> Self {
        Self::try_var(ambient, i).expect("variable index out of range")
    }

    pub fn try_var(ambient: usize, i: usize) -> Result<Self> {
        if i == 0 || i > ambient {
            return Err(Error::VariableOutOfRange { index: i, ambient });
        }
        Ok(Self::monomial(ambient, Monomial::new(VarSet::singleton(i), 0, false).unwrap()))
    }

    /// `prod_{i in vars} ai`.
    pub fn product_of_vars(ambient: usize, vars: VarSet) -> Self {
        assert!(vars.max_index() <= ambient, "variable index out of range");
        Self::monomial(ambient, Monomial::new(vars, 0, false).unwrap())
    }

    pub fn monomial(ambient: usize, m: Monomial) -> Self {
        let mut x = Self::zero(ambient);
        assert!(m.vars.max_index() <= ambient, "variable index out of range");
        x.terms.insert(m);
        x
    }

    /// Sum of the given monomials (repeated monomials cancel in pairs).
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(ambient: usize, monomials: I) -> Self {
        let mut x = Self::zero(ambient);
        for m in monomials {
            assert!(m.vars.max_index() <= ambient, "variable index out of range");
            x.toggle(m);
        }
        x
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains(&Monomial::ONE)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Highest degree of a term, `None` for zero.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.iter().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.iter().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.insert(m) {
            self.terms.remove(&m);
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(RingElement {
            ambient: self.ambient,
            terms: self.terms.symmetric_difference(&other.terms).copied().collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_bounded(other, usize::MAX))
    }

    /// Product with every term of degree above `max_degree` dropped.
    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_bounded(other, max_degree))
    }

    fn mul_bounded(&self, other: &Self, max_degree: usize) -> Self {
        let mut out = Self::zero(self.ambient);
        for x in &self.terms {
            let dx = x.degree();
            if dx > max_degree {
                // terms are sorted by degree
                break;
            }
            for y in &other.terms {
                if dx + y.degree() > max_degree {
                    break;
                }
                if let Some(p) = x.mul(y) {
                    out.toggle(p);
                }
            }
        }
        out
    }

    /// Square; cross terms cancel in characteristic 2.
    pub fn square(&self) -> Self {
        Self::from_monomials(self.ambient, self.terms.iter().filter_map(|m| m.mul(m)))
    }

    /// `self^k` truncated at `max_degree`.
    pub fn pow_truncated(&self, mut k: u64, max_degree: usize) -> Self {
        let mut base = self.truncate(max_degree);
        let mut acc = Self::one(self.ambient).truncate(max_degree);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_bounded(&base, max_degree);
            }
            k >>= 1;
            if k > 0 {
                base = base.square().truncate(max_degree);
            }
        }
        acc
    }

    pub fn pow(&self, k: u64) -> Self {
        self.pow_truncated(k, usize::MAX)
    }

    /// Terms of degree at most `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        RingElement {
            ambient: self.ambient,
            terms: self
                .terms
                .iter()
                .filter(|m| m.degree() <= max_degree)
                .copied()
                .collect(),
        }
    }

    /// Homogeneous component of degree `d`.
    pub fn degree_part(&self, d: usize) -> Self {
        RingElement {
            ambient: self.ambient,
            terms: self.terms.iter().filter(|m| m.degree() == d).copied().collect(),
        }
    }

    /// Components of degree `0..=max_degree` as a list.
    pub fn graded_parts(&self, max_degree: usize) -> Vec<Self> {
        (0..=max_degree).map(|d| self.degree_part(d)).collect()
    }

    /// Minimal `e`-exponent among degree-`d` terms, together with the sum of
    /// the degree-`d` terms attaining it.
    pub fn min_eps_part(&self, d: usize) -> Result<(u32, Self)> {
        let part = self.degree_part(d);
        let min = part
            .terms
            .iter()
            .map(Monomial::eps_pow)
            .min()
            .ok_or(Error::EmptyDegreePart { degree: d })?;
        let terms = part.terms.into_iter().filter(|m| m.eps == min).collect();
        Ok((
            min,
            RingElement {
                ambient: self.ambient,
                terms,
            },
        ))
    }

    /// Specialization `{2} -> 0` (drops every term containing `t`).
    pub fn without_tau(&self) -> Self {
        RingElement {
            ambient: self.ambient,
            terms: self.terms.iter().filter(|m| !m.tau).copied().collect(),
        }
    }

    pub fn is_tau_free(&self) -> bool {
        self.terms.iter().all(|m| !m.tau)
    }

    /// Same element viewed in a ring with `ambient` variables.
    pub fn with_ambient(&self, ambient: usize) -> Result<Self> {
        if ambient > MAX_VARS {
            return Err(Error::TooManyVariables(ambient));
        }
        if let Some(m) = self.terms.iter().find(|m| m.vars.max_index() > ambient) {
            return Err(Error::VariableOutOfRange {
                index: m.vars.max_index(),
                ambient,
            });
        }
        Ok(RingElement {
            ambient,
            terms: self.terms.clone(),
        })
    }

    /// Parses the canonical text form. Repeated factors inside a term are
    /// multiplied out, so `a1 a1` parses to `e a1`.
    pub fn parse(ambient: usize, s: &str) -> Result<Self> {
        if ambient > MAX_VARS {
            return Err(Error::TooManyVariables(ambient));
        }
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(ambient));
        }
        let mut out = Self::zero(ambient);
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let mut acc = Self::one(ambient);
            for tok in term.split_whitespace() {
                let factor = match tok {
                    "1" => Self::one(ambient),
                    "e" => Self::eps(ambient),
                    "t" => Self::tau(ambient),
                    _ if tok.starts_with("e^") => {
                        let k: u32 = tok[2..]
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                        Self::eps_pow(ambient, k)
                    }
                    _ if tok.starts_with('a') => {
                        let i: usize = tok[1..]
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad variable {tok:?}")))?;
                        Self::try_var(ambient, i)?
                    }
                    _ => return Err(Error::Parse(format!("unknown token {tok:?}"))),
                };
                acc = acc.mul_bounded(&factor, usize::MAX);
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}[{}]", self.ambient, self)
    }
}

// Operator forms panic on mismatched ambients; use `try_add` / `try_mul`
// where the ambients are not known to agree.

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.try_add(rhs).expect("ring elements over different ambients")
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(self, rhs: RingElement) -> RingElement {
        &self + &rhs
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        self.check_same(rhs).expect("ring elements over different ambients");
        for m in &rhs.terms {
            self.toggle(*m);
        }
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.try_mul(rhs).expect("ring elements over different ambients")
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: usize) -> RingElement {
        RingElement::var(3, i)
    }

    fn eps() -> RingElement {
        RingElement::eps(3)
    }

    fn p(s: &str) -> RingElement {
        RingElement::parse(3, s).unwrap()
    }

    #[test]
    fn addition_is_symmetric_difference() {
        assert!((&a(1) + &a(1)).is_zero());
        let x = &(&eps() * &a(1)) + &(&a(1) * &a(2));
        assert_eq!(x.to_string(), "a1 a2 + e a1");
    }

    #[test]
    fn defining_relations() {
        assert_eq!(&a(1) * &a(1), &eps() * &a(1));
        let tau = RingElement::tau(3);
        assert!((&tau * &tau).is_zero());
        assert!((&tau * &eps()).is_zero());
        assert!(!(&tau * &a(2)).is_zero());
    }

    #[test]
    fn mismatched_ambients_are_rejected() {
        let x = RingElement::var(2, 1);
        let y = RingElement::var(3, 1);
        assert_eq!(
            x.try_add(&y),
            Err(Error::AmbientMismatch { left: 2, right: 3 })
        );
        assert!(x.try_mul(&y).is_err());
    }

    #[test]
    fn degree_parts() {
        let x = p("1 + e a1 + a1 a2");
        assert_eq!(x.degree_part(2), p("e a1 + a1 a2"));
        assert!(x.degree_part(5).is_zero());
        assert_eq!(x.degree_part(0), RingElement::one(3));
    }

    #[test]
    fn min_eps_part_picks_lowest_eps() {
        let x = p("e^3 a1 + e^2 a1 a2");
        let (k, part) = x.min_eps_part(4).unwrap();
        assert_eq!(k, 2);
        assert_eq!(part, p("e^2 a1 a2"));
        assert_eq!(
            x.min_eps_part(3),
            Err(Error::EmptyDegreePart { degree: 3 })
        );
    }

    #[test]
    fn canonical_rendering() {
        let x = p("a2 a3 + e a3 + a1 a2 + e a1 + a1 a3 + e a2");
        assert_eq!(x.to_string(), "a1 a2 + a1 a3 + a2 a3 + e a1 + e a2 + e a3");
        assert_eq!(RingElement::zero(3).to_string(), "0");
        assert_eq!(RingElement::one(3).to_string(), "1");
        assert_eq!(p("t a1 + e^2 a3 + e^4").to_string(), "t a1 + e^2 a3 + e^4");
    }

    #[test]
    fn parse_reduces_and_rejects_garbage() {
        assert_eq!(p("a1 a1"), p("e a1"));
        assert_eq!(p("e t"), RingElement::zero(3));
        assert!(RingElement::parse(3, "a4").is_err());
        assert!(RingElement::parse(3, "b1").is_err());
        assert!(RingElement::parse(3, "a1 + ").is_err());
    }

    #[test]
    fn truncated_power_matches_full_power() {
        let x = p("1 + a1 + e a2 + t a3");
        for k in 0..9 {
            assert_eq!(x.pow_truncated(k, 4), x.pow(k).truncate(4), "k = {k}");
        }
        // (1 + x)^4 = 1 + x^4 in characteristic 2
        let y = p("a1 + a2");
        assert_eq!((&RingElement::one(3) + &y).pow(4), &RingElement::one(3) + &y.pow(4));
    }

    #[test]
    fn varset_subsets_enumerates_everything() {
        let s = VarSet::from_indices([1, 3, 4]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(VarSet::EMPTY.subsets().count(), 1);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(VarSet::full(3), VarSet::from_indices([1, 2, 3]));
    }
}

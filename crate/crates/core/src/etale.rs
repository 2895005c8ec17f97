//! Etale algebras that split as products of multiquadratic extensions, and
//! their total Galois-Stiefel-Whitney classes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quadform::{field_gsw, GswConvention, MultiquadraticField};
use crate::ring::RingElement;

/// A finite multiset of multiquadratic fields over `k(a1..an)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleAlgebra {
    ambient: usize,
    factors: BTreeMap<MultiquadraticField, u64>,
}

impl EtaleAlgebra {
    /// The zero algebra (empty product).
    pub fn empty(ambient: usize) -> Self {
        EtaleAlgebra {
            ambient,
            factors: BTreeMap::new(),
        }
    }

    /// `F^m`, the split algebra of degree `m`.
    pub fn split(ambient: usize, m: u64) -> Self {
        let mut a = Self::empty(ambient);
        a.push(MultiquadraticField::base(ambient), m)
            .expect("base field lives in the same ring");
        a
    }

    pub fn from_factors<I>(ambient: usize, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiquadraticField, u64)>,
    {
        let mut a = Self::empty(ambient);
        for (field, m) in factors {
            a.push(field, m)?;
        }
        Ok(a)
    }

    /// Adds `m` more copies of `field`; `m = 0` is a no-op.
    pub fn push(&mut self, field: MultiquadraticField, m: u64) -> Result<()> {
        if field.ambient() != self.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: field.ambient(),
            });
        }
        if m > 0 {
            *self.factors.entry(field).or_insert(0) += m;
        }
        Ok(())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn factors(&self) -> impl Iterator<Item = (&MultiquadraticField, u64)> {
        self.factors.iter().map(|(f, &m)| (f, m))
    }

    pub fn multiplicity(&self, field: &MultiquadraticField) -> u64 {
        self.factors.get(field).copied().unwrap_or(0)
    }

    /// Dimension over the base field.
    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(f, m)| m * f.degree()).sum()
    }

    /// Disjoint union of spectra, i.e. the product algebra.
    pub fn product(&self, other: &EtaleAlgebra) -> Result<EtaleAlgebra> {
        let mut out = self.clone();
        for (f, m) in other.factors() {
            out.push(f.clone(), m)?;
        }
        Ok(out)
    }

    /// `[a0, .., a_d]` with `d = max_degree`, defaulting to `degree / 2`.
    pub fn alpha_total(&self, max_degree: Option<usize>, convention: GswConvention) -> Vec<RingElement> {
        let d = max_degree.unwrap_or((self.degree() / 2) as usize);
        let mut total = RingElement::one(self.ambient);
        for (field, m) in self.factors() {
            let classes = field_gsw(field, d, convention);
            let alpha = classes
                .iter()
                .fold(RingElement::zero(self.ambient), |acc, c| &acc + c);
            let power = alpha.pow_truncated(m, d);
            total = total
                .mul_truncated(&power, d)
                .expect("factors share the ambient ring");
        }
        total.graded_parts(d)
    }

    /// The single class `a_i`.
    pub fn alpha(&self, i: usize, convention: GswConvention) -> RingElement {
        self.alpha_total(Some(i), convention).swap_remove(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::VarSet;
    use crate::symbols::SquareClass;

    fn p(n: usize, s: &str) -> RingElement {
        RingElement::parse(n, s).unwrap()
    }

    fn e(n: usize, a: &[usize]) -> MultiquadraticField {
        MultiquadraticField::untwisted(n, VarSet::from_indices(a.iter().copied())).unwrap()
    }

    fn w_c() -> EtaleAlgebra {
        EtaleAlgebra::from_factors(
            3,
            [(e(3, &[1]), 1), (e(3, &[2]), 1), (e(3, &[3]), 1), (e(3, &[]), 2)],
        )
        .unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(w_c().degree(), 8);
        assert_eq!(EtaleAlgebra::split(2, 4).degree(), 4);
        assert_eq!(EtaleAlgebra::empty(2).degree(), 0);
        let a = w_c();
        assert_eq!(a.product(&EtaleAlgebra::empty(3)).unwrap(), a);
    }

    #[test]
    fn w_c_classes() {
        let alpha = w_c().alpha_total(Some(2), GswConvention::EvenTwisted);
        assert!(alpha[0].is_one());
        assert_eq!(alpha[1], p(3, "a1 + a2 + a3"));
        assert_eq!(alpha[2], p(3, "a1 a2 + a1 a3 + a2 a3"));
    }

    #[test]
    fn second_test_curve() {
        let f_prime = MultiquadraticField::new(2, vec![SquareClass::var(2).negated()]).unwrap();
        let s = EtaleAlgebra::from_factors(2, [(e(2, &[]), 4), (f_prime.clone(), 12)]).unwrap();
        let alpha = s.alpha_total(Some(2), GswConvention::EvenTwisted);
        assert!(alpha[1].is_zero());
        assert!(alpha[2].is_zero());

        let single = EtaleAlgebra::from_factors(2, [(f_prime, 1)]).unwrap();
        let a = single.alpha_total(Some(1), GswConvention::EvenTwisted);
        assert_eq!(a[1], p(2, "e + a2"));
    }

    #[test]
    fn mismatched_ambient() {
        let mut a = EtaleAlgebra::empty(2);
        assert!(a.push(e(3, &[1]), 1).is_err());
    }
}

//! Square classes, Milnor symbols and residue maps.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Monomial, RingElement, VarSet};

/// The square class of `(-1)^sign * 2^two * prod_{i in vars} ai`.
///
/// Even powers of 2 and of each `ai` are squares, so only parities are kept.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SquareClass {
    pub sign: bool,
    pub two: bool,
    pub vars: VarSet,
}

impl SquareClass {
    pub const ONE: SquareClass = SquareClass {
        sign: false,
        two: false,
        vars: VarSet::EMPTY,
    };
    pub const MINUS_ONE: SquareClass = SquareClass {
        sign: true,
        two: false,
        vars: VarSet::EMPTY,
    };
    pub const TWO: SquareClass = SquareClass {
        sign: false,
        two: true,
        vars: VarSet::EMPTY,
    };

    pub fn new(sign: bool, two: bool, vars: VarSet) -> Self {
        SquareClass { sign, two, vars }
    }

    /// The class of `ai`.
    pub fn var(i: usize) -> Self {
        Self::vars(VarSet::singleton(i))
    }

    /// The class of `prod_{i in vars} ai`.
    pub fn vars(vars: VarSet) -> Self {
        SquareClass {
            sign: false,
            two: false,
            vars,
        }
    }

    /// The class of `2^k`.
    pub fn power_of_two(k: u32) -> Self {
        SquareClass {
            two: k % 2 == 1,
            ..Self::ONE
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::ONE
    }

    pub fn negated(self) -> Self {
        self * Self::MINUS_ONE
    }
}

impl Mul for SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: SquareClass) -> SquareClass {
        SquareClass {
            sign: self.sign ^ rhs.sign,
            two: self.two ^ rhs.two,
            vars: self.vars.symmetric_difference(rhs.vars),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if self.sign {
            s.push('-');
        }
        let mut factors: Vec<String> = Vec::new();
        if self.two {
            factors.push("2".into());
        }
        factors.extend(self.vars.iter().map(|i| format!("a{i}")));
        if factors.is_empty() {
            s.push('1');
        } else {
            s.push_str(&factors.join("*"));
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The degree-one symbol `{c}`: `sign*e + two*t + sum_{i in vars} ai`.
pub fn class_symbol(c: SquareClass, ambient: usize) -> RingElement {
    let mut monomials = Vec::new();
    if c.sign {
        monomials.push(Monomial::new(VarSet::EMPTY, 1, false).unwrap());
    }
    if c.two {
        monomials.push(Monomial::new(VarSet::EMPTY, 0, true).unwrap());
    }
    monomials.extend(
        c.vars
            .iter()
            .map(|i| Monomial::new(VarSet::singleton(i), 0, false).unwrap()),
    );
    RingElement::from_monomials(ambient, monomials)
}

/// The symbol `{c1, .., cr}`; the empty symbol is 1.
pub fn symbol(classes: &[SquareClass], ambient: usize) -> RingElement {
    classes
        .iter()
        .fold(RingElement::one(ambient), |acc, &c| &acc * &class_symbol(c, ambient))
}

/// Residue at `ai = 0`: keeps the terms divisible by `ai` and strips that
/// factor; `e` and `t` are units in the residue field and pass through.
///
/// The ambient ring and the numbering of the other variables are unchanged.
pub fn residue(x: &RingElement, i: usize) -> Result<RingElement> {
    if i == 0 || i > x.ambient() {
        return Err(Error::VariableOutOfRange {
            index: i,
            ambient: x.ambient(),
        });
    }
    Ok(RingElement::from_monomials(
        x.ambient(),
        x.terms().filter(|m| m.vars().contains(i)).map(|m| {
            Monomial::new(m.vars().without(i), m.eps_pow(), m.has_tau())
                .expect("stripping a variable keeps a monomial reduced")
        }),
    ))
}

/// An ordered list of distinct variables along which residues are taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueChain {
    indices: Vec<usize>,
}

impl ResidueChain {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let mut seen = VarSet::EMPTY;
        for &i in &indices {
            if i == 0 || i > crate::ring::MAX_VARS {
                return Err(Error::VariableOutOfRange {
                    index: i,
                    ambient: crate::ring::MAX_VARS,
                });
            }
            if seen.contains(i) {
                return Err(Error::InvalidAction(format!(
                    "residue chain repeats a{i}"
                )));
            }
            seen = seen.union(VarSet::singleton(i));
        }
        Ok(ResidueChain { indices })
    }

    /// The chain `a1, a2, .., an`.
    pub fn first(n: usize) -> Self {
        ResidueChain {
            indices: (1..=n).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// Applies the residues of `chain` in the listed order.
pub fn residue_chain(x: &RingElement, chain: &ResidueChain) -> Result<RingElement> {
    chain
        .indices
        .iter()
        .try_fold(x.clone(), |acc, &i| residue(&acc, i))
}

/// A ring map `ai -> {c_i}`, `e -> e`, `t -> t` into a ring with
/// `target_ambient` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    target_ambient: usize,
    images: BTreeMap<usize, SquareClass>,
}

impl Substitution {
    pub fn new(target_ambient: usize) -> Self {
        Substitution {
            target_ambient,
            images: BTreeMap::new(),
        }
    }

    /// `ai -> ai` for `i = 1..=n`.
    pub fn identity(n: usize) -> Self {
        let mut s = Self::new(n);
        for i in 1..=n {
            s.images.insert(i, SquareClass::var(i));
        }
        s
    }

    pub fn with(mut self, i: usize, image: SquareClass) -> Self {
        self.images.insert(i, image);
        self
    }

    pub fn set(&mut self, i: usize, image: SquareClass) {
        self.images.insert(i, image);
    }

    pub fn target_ambient(&self) -> usize {
        self.target_ambient
    }

    pub fn image(&self, i: usize) -> Option<SquareClass> {
        self.images.get(&i).copied()
    }
}

/// Applies a substitution as a ring homomorphism.
pub fn substitute(x: &RingElement, sub: &Substitution) -> Result<RingElement> {
    let n = sub.target_ambient;
    let mut images = BTreeMap::new();
    for (&i, &c) in &sub.images {
        if c.vars.max_index() > n {
            return Err(Error::VariableOutOfRange {
                index: c.vars.max_index(),
                ambient: n,
            });
        }
        images.insert(i, class_symbol(c, n));
    }
    let mut out = RingElement::zero(n);
    for m in x.terms() {
        let mut term = RingElement::monomial(
            n,
            Monomial::new(VarSet::EMPTY, m.eps_pow(), m.has_tau()).unwrap(),
        );
        for i in m.vars().iter() {
            let img = images.get(&i).ok_or(Error::MissingAssignment(i))?;
            term = &term * img;
            if term.is_zero() {
                break;
            }
        }
        out += &term;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> RingElement {
        RingElement::parse(n, s).unwrap()
    }

    #[test]
    fn class_symbols() {
        assert_eq!(class_symbol(SquareClass::MINUS_ONE, 2), RingElement::eps(2));
        assert!(class_symbol(SquareClass::ONE, 2).is_zero());
        let c = SquareClass::new(true, true, VarSet::from_indices([1, 2]));
        assert_eq!(class_symbol(c, 2), p(2, "e + t + a1 + a2"));
        assert_eq!(c.to_string(), "-2*a1*a2");
    }

    #[test]
    fn square_classes_fold_even_powers() {
        assert_eq!(SquareClass::power_of_two(3), SquareClass::TWO);
        assert_eq!(SquareClass::power_of_two(2), SquareClass::ONE);
        let a1 = SquareClass::var(1);
        assert_eq!(a1 * a1, SquareClass::ONE);
        assert_eq!(SquareClass::MINUS_ONE * SquareClass::MINUS_ONE, SquareClass::ONE);
    }

    #[test]
    fn symbols() {
        let a1 = SquareClass::var(1);
        assert_eq!(symbol(&[a1, a1], 3), p(3, "e a1"));
        assert!(symbol(&[SquareClass::MINUS_ONE, SquareClass::TWO], 3).is_zero());
        assert!(symbol(&[SquareClass::TWO, SquareClass::TWO], 3).is_zero());
        let abc = [1, 2, 3].map(SquareClass::var);
        assert_eq!(symbol(&abc, 3), p(3, "a1 a2 a3"));
        assert!(symbol(&[], 3).is_one());
    }

    #[test]
    fn residues() {
        assert_eq!(residue(&p(2, "a1 a2"), 1).unwrap(), p(2, "a2"));
        assert!(residue(&p(2, "e a2 + e^2"), 1).unwrap().is_zero());
        assert_eq!(residue(&p(2, "t a1"), 1).unwrap(), RingElement::tau(2));
        assert!(residue(&p(2, "a1"), 3).is_err());
        // x_C with x0 = 0, x1 = e, x2 = 1, at g = 3
        let x = p(3, "a1 a2 + a1 a3 + a2 a3 + e a1 + e a2 + e a3");
        assert_eq!(residue(&x, 1).unwrap(), p(3, "e + a2 + a3"));
        assert!(residue(&residue(&x, 1).unwrap(), 2).unwrap().is_one());
    }

    #[test]
    fn residue_chains() {
        let x = p(3, "e^1 a1 a2 a3");
        assert_eq!(residue_chain(&x, &ResidueChain::first(3)).unwrap(), RingElement::eps(3));
        let y = p(3, "a1 a2 + e a3");
        assert!(residue_chain(&y, &ResidueChain::first(3)).unwrap().is_zero());
        assert_eq!(residue_chain(&y, &ResidueChain::new(vec![]).unwrap()).unwrap(), y);
        assert!(ResidueChain::new(vec![1, 1]).is_err());
        assert!(ResidueChain::new(vec![0]).is_err());
    }

    #[test]
    fn substitutions() {
        // {a1,a2} + {-1,a1a2} + {-1,-1} with a2 -> -1
        let x = p(2, "a1 a2 + e a1 + e a2 + e^2");
        let sub = Substitution::identity(2).with(2, SquareClass::MINUS_ONE);
        assert!(substitute(&x, &sub).unwrap().is_zero());

        assert_eq!(substitute(&x, &Substitution::identity(2)).unwrap(), x);

        let y = p(1, "e a1");
        let sub = Substitution::new(1).with(1, SquareClass::MINUS_ONE);
        assert_eq!(substitute(&y, &sub).unwrap(), RingElement::eps_pow(1, 2));

        let missing = Substitution::new(2).with(1, SquareClass::var(1));
        assert_eq!(substitute(&x, &missing), Err(Error::MissingAssignment(2)));
    }
}

//! Diagonal quadratic forms, their Stiefel-Whitney classes, trace forms of
//! multiquadratic extensions and the passage to Galois-Stiefel-Whitney
//! classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{RingElement, VarSet, MAX_VARS};
use crate::symbols::{class_symbol, SquareClass};

/// A diagonalized nondegenerate form `<d1, .., dr>` over `k(a1..an)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalForm {
    ambient: usize,
    coeffs: Vec<SquareClass>,
}

impl DiagonalForm {
    pub fn new(ambient: usize, coeffs: Vec<SquareClass>) -> Result<Self> {
        if ambient > MAX_VARS {
            return Err(Error::TooManyVariables(ambient));
        }
        if coeffs.is_empty() {
            return Err(Error::EmptyForm);
        }
        check_classes(ambient, &coeffs)?;
        Ok(DiagonalForm { ambient, coeffs })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[SquareClass] {
        &self.coeffs
    }

    /// Orthogonal sum.
    pub fn orthogonal_sum(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.extend_from_slice(&other.coeffs);
        Ok(DiagonalForm {
            ambient: self.ambient,
            coeffs,
        })
    }

    /// `<c*d1, .., c*dr>`.
    pub fn scaled(&self, c: SquareClass) -> DiagonalForm {
        DiagonalForm {
            ambient: self.ambient,
            coeffs: self.coeffs.iter().map(|&d| d * c).collect(),
        }
    }
}

fn check_classes(ambient: usize, classes: &[SquareClass]) -> Result<()> {
    match classes.iter().map(|c| c.vars.max_index()).max() {
        Some(m) if m > ambient => Err(Error::VariableOutOfRange { index: m, ambient }),
        _ => Ok(()),
    }
}

/// `F(sqrt d1, .., sqrt dk)` for square classes independent modulo squares.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiquadraticField {
    ambient: usize,
    generators: Vec<SquareClass>,
}

impl MultiquadraticField {
    pub fn new(ambient: usize, generators: Vec<SquareClass>) -> Result<Self> {
        if ambient > MAX_VARS {
            return Err(Error::TooManyVariables(ambient));
        }
        check_classes(ambient, &generators)?;
        // every nonempty sub-product must be a non-square
        let k = generators.len();
        if k >= 32 {
            return Err(Error::DependentGenerators);
        }
        for mask in 1u64..(1 << k) {
            let prod = (0..k)
                .filter(|j| mask >> j & 1 == 1)
                .fold(SquareClass::ONE, |acc, j| acc * generators[j]);
            if prod.is_trivial() {
                return Err(Error::DependentGenerators);
            }
        }
        Ok(MultiquadraticField { ambient, generators })
    }

    /// The base field itself.
    pub fn base(ambient: usize) -> Self {
        MultiquadraticField {
            ambient,
            generators: Vec::new(),
        }
    }

    /// `E_A = F(sqrt aj : j in A)`.
    pub fn untwisted(ambient: usize, a: VarSet) -> Result<Self> {
        Self::new(ambient, a.iter().map(SquareClass::var).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[SquareClass] {
        &self.generators
    }

    /// Number of generators `k`; the field has degree `2^k`.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn degree(&self) -> u64 {
        1 << self.generators.len()
    }
}

impl fmt::Debug for MultiquadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "sqrt({g})")?;
        }
        write!(f, ")")
    }
}

/// Trace form of `F(sqrt d1, .., sqrt dk)/F` in the basis of square roots of
/// sub-products: `2^k * <prod_{j in S} dj : S subset of 1..k>`.
pub fn trace_form(e: &MultiquadraticField) -> DiagonalForm {
    let k = e.generators.len();
    let scale = SquareClass::power_of_two(k as u32);
    let coeffs = (0u64..1 << k)
        .map(|mask| {
            (0..k)
                .filter(|j| mask >> j & 1 == 1)
                .fold(scale, |acc, j| acc * e.generators[j])
        })
        .collect();
    DiagonalForm {
        ambient: e.ambient,
        coeffs,
    }
}

/// `[w0, .., w_max_i]` where `wi` is the i-th elementary symmetric function
/// of the coefficient symbols, read off the truncated generating product
/// `prod_j (1 + {dj} s)`.
pub fn sw_classes(q: &DiagonalForm, max_i: usize) -> Result<Vec<RingElement>> {
    if max_i > q.rank() {
        return Err(Error::ClassIndexTooLarge {
            requested: max_i,
            rank: q.rank(),
        });
    }
    let n = q.ambient;
    let mut acc = vec![RingElement::zero(n); max_i + 1];
    acc[0] = RingElement::one(n);
    for &d in &q.coeffs {
        let s = class_symbol(d, n);
        if s.is_zero() {
            continue;
        }
        for i in (1..=max_i).rev() {
            if !acc[i - 1].is_zero() {
                let step = &acc[i - 1] * &s;
                acc[i] += &step;
            }
        }
    }
    Ok(acc)
}

/// Which indices receive the `{2}` correction when passing from
/// Stiefel-Whitney to Galois-Stiefel-Whitney classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GswConvention {
    /// `a_i = w_i + {2} w_{i-1}` for even `i`.
    #[default]
    EvenTwisted,
    /// `a_i = w_i + {2} w_{i-1}` for odd `i`.
    OddTwisted,
}

impl GswConvention {
    fn twists(self, i: usize) -> bool {
        match self {
            GswConvention::EvenTwisted => i.is_multiple_of(2),
            GswConvention::OddTwisted => i % 2 == 1,
        }
    }
}

/// Galois-Stiefel-Whitney classes from Stiefel-Whitney classes.
pub fn gsw_from_sw(sw: &[RingElement], convention: GswConvention) -> Result<Vec<RingElement>> {
    let first = sw.first().ok_or(Error::MissingUnit)?;
    if !first.is_one() {
        return Err(Error::MissingUnit);
    }
    let n = first.ambient();
    let tau = RingElement::tau(n);
    let mut out = Vec::with_capacity(sw.len());
    out.push(first.clone());
    for i in 1..sw.len() {
        let mut a = sw[i].clone();
        if convention.twists(i) {
            a += &(&tau * &sw[i - 1]);
        }
        out.push(a);
    }
    Ok(out)
}

/// Galois-Stiefel-Whitney classes `[a0, .., a_max_i]` of the multiquadratic
/// field, computed from its trace form. Classes past the rank of the trace
/// form use `w_i = 0`.
pub fn field_gsw(e: &MultiquadraticField, max_i: usize, convention: GswConvention) -> Vec<RingElement> {
    let q = trace_form(e);
    let mut sw = sw_classes(&q, max_i.min(q.rank())).expect("index capped at rank");
    sw.resize(max_i + 1, RingElement::zero(e.ambient));
    gsw_from_sw(&sw, convention).expect("w0 = 1")
}

/// `w2` of the conic of a rank-3 form, normalized so that the split conic
/// `-x^2 - y^2 + z^2` has `w2 = 0`: `w2(q) + {-1,-1}`.
pub fn w2_conic(q: &DiagonalForm) -> Result<RingElement> {
    if q.rank() != 3 {
        return Err(Error::WrongRank {
            expected: 3,
            actual: q.rank(),
        });
    }
    let sw = sw_classes(q, 2)?;
    Ok(&sw[2] + &RingElement::eps_pow(q.ambient, 2))
}

//! Exact computations in mod-2 Milnor K-theory of rational function fields
//! `k(a1, .., an)`: symbols, Stiefel-Whitney classes of quadratic and etale
//! algebras, theta characteristics of hyperelliptic curves and the integer
//! polynomials that control the classes of multiquadratic extensions.

pub mod error;
pub mod etale;
pub mod polyrec;
pub mod quadform;
pub mod ring;
pub mod symbols;
pub mod theta;

pub use error::{Error, Result};
pub use etale::EtaleAlgebra;
pub use polyrec::{IntPolynomial, Mod2Polynomial};
pub use quadform::{DiagonalForm, GswConvention, MultiquadraticField};
pub use ring::{Monomial, RingElement, VarSet};
pub use symbols::{ResidueChain, SquareClass, Substitution};
pub use theta::{AlphaClass, GaloisAction, Parity, ParityFilter, ThetaChar};

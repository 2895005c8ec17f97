//! Benchmark inputs shared by the criterion targets.

use theta_sw_core::theta::decompose;
use theta_sw_core::{DiagonalForm, EtaleAlgebra, GaloisAction, ParityFilter, SquareClass, VarSet};

/// The form `<a1, ..., an>` over `k(a1..an)`.
pub fn generic_form(n: usize) -> DiagonalForm {
    let coeffs = (1..=n)
        .map(|i| SquareClass::new(false, false, VarSet::singleton(i)))
        .collect();
    DiagonalForm::new(n, coeffs).expect("variables are in range")
}

/// Theta algebra of the standard genus `g` test curve.
pub fn theta_algebra(g: usize, filter: ParityFilter) -> EtaleAlgebra {
    let act = GaloisAction::standard(g).expect("supported genus");
    decompose(g, filter, &act).expect("supported genus")
}

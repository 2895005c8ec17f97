//! Library side of the `theta-sw` verifier: verification suites, reports and
//! stable renderings of decompositions and classes.

pub mod render;
pub mod report;
pub mod suites;

use std::ops::RangeInclusive;

use theta_sw_core::theta::{self, decompose};
use theta_sw_core::{GaloisAction, GswConvention, ParityFilter, RingElement};

pub use render::{AlphaOutput, Decomposition};
pub use report::{Check, Status, VerificationReport};
pub use suites::Suite;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<theta_sw_core::Error> for CliError {
    fn from(e: theta_sw_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses `A..B`, `A..=B` (both inclusive) or a single `A`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("expected a range like 3..6, got {s:?}"))
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Ok(a..=b)
        }
        None => {
            let a = num(s)?;
            Ok(a..=a)
        }
    }
}

fn check_genus(g: usize) -> Result<(), CliError> {
    if (theta::MIN_GENUS..=theta::MAX_GENUS).contains(&g) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "genus {g} is outside {}..{}",
            theta::MIN_GENUS,
            theta::MAX_GENUS
        )))
    }
}

/// Theta algebra of the standard genus `g` test curve.
pub fn decomposition(g: usize, parity: ParityFilter) -> Result<Decomposition, CliError> {
    check_genus(g)?;
    let act = GaloisAction::standard(g)?;
    let algebra = decompose(g, parity, &act)?;
    Decomposition::from_algebra(g, parity, &algebra)
}

/// The class `a_degree` of the theta algebra.
pub fn alpha(g: usize, parity: ParityFilter, degree: usize) -> Result<RingElement, CliError> {
    check_genus(g)?;
    let act = GaloisAction::standard(g)?;
    let algebra = decompose(g, parity, &act)?;
    let bound = (algebra.degree() / 2) as usize;
    if degree > bound {
        return Err(CliError::Usage(format!(
            "degree {degree} exceeds half the algebra degree ({bound})"
        )));
    }
    Ok(algebra.alpha(degree, GswConvention::default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..6"), Ok(3..=6));
        assert_eq!(parse_range("3..=6"), Ok(3..=6));
        assert_eq!(parse_range("4"), Ok(4..=4));
        assert!(parse_range("6..3").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(
            alpha(3, ParityFilter::Odd, 2).unwrap().to_string(),
            "a1 a2 + a1 a3 + a2 a3 + e a1 + e a2 + e a3"
        );
        assert!(alpha(3, ParityFilter::Odd, 1).unwrap().is_zero());
        let a4 = alpha(3, ParityFilter::All, 4).unwrap();
        let (min, part) = a4.min_eps_part(4).unwrap();
        assert_eq!((min, part.to_string()), (1, "e a1 a2 a3".to_string()));
        assert!(alpha(3, ParityFilter::Odd, 15).is_err());
        assert!(alpha(9, ParityFilter::Odd, 1).is_err());
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(decomposition(2, ParityFilter::All).unwrap().degree, 16);
        let even4 = decomposition(4, ParityFilter::Even).unwrap();
        let mut by_size = [0u64; 5];
        for f in &even4.factors {
            assert!(by_size[f.a.len()] == 0 || by_size[f.a.len()] == f.multiplicity);
            by_size[f.a.len()] = f.multiplicity;
        }
        assert_eq!(by_size, [8, 4, 2, 1, 1]);
    }
}

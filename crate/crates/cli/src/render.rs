//! Stable text and JSON forms of decompositions and classes.

use serde::{Deserialize, Serialize};
use theta_sw_core::{EtaleAlgebra, MultiquadraticField, ParityFilter, SquareClass, VarSet};

use crate::CliError;

/// A generator that is not a plain `a_j`: `(-1)^sign 2^two a_var`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twist {
    pub var: usize,
    pub sign: bool,
    pub two: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    pub twists: Vec<Twist>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub g: usize,
    pub parity: ParityFilter,
    pub factors: Vec<Factor>,
    pub degree: u64,
}

impl Decomposition {
    /// Factors sorted by `|A|`, then lexicographically by `A`.
    pub fn from_algebra(g: usize, parity: ParityFilter, algebra: &EtaleAlgebra) -> Result<Self, CliError> {
        let mut factors = Vec::new();
        for (field, m) in algebra.factors() {
            let mut a = Vec::new();
            let mut twists = Vec::new();
            for gen in field.generators() {
                let vars: Vec<usize> = gen.vars.iter().collect();
                let &[var] = vars.as_slice() else {
                    return Err(CliError::Usage(format!(
                        "generator {gen} is not a single variable up to sign and 2"
                    )));
                };
                a.push(var);
                if gen.sign || gen.two {
                    twists.push(Twist {
                        var,
                        sign: gen.sign,
                        two: gen.two,
                    });
                }
            }
            factors.push(Factor {
                a,
                twists,
                multiplicity: m,
            });
        }
        factors.sort_by(|x, y| (x.a.len(), &x.a, &x.twists.len()).cmp(&(y.a.len(), &y.a, &y.twists.len())));
        Ok(Decomposition {
            g,
            parity,
            factors,
            degree: algebra.degree(),
        })
    }

    /// Rebuilds the algebra over `k(a1..ag)`.
    pub fn to_algebra(&self) -> Result<EtaleAlgebra, CliError> {
        let mut algebra = EtaleAlgebra::empty(self.g);
        for f in &self.factors {
            let gens = f
                .a
                .iter()
                .map(|&var| {
                    let t = f.twists.iter().find(|t| t.var == var);
                    SquareClass::new(
                        t.is_some_and(|t| t.sign),
                        t.is_some_and(|t| t.two),
                        VarSet::singleton(var),
                    )
                })
                .collect();
            let field = MultiquadraticField::new(self.g, gens)?;
            algebra.push(field, f.multiplicity)?;
        }
        Ok(algebra)
    }

    /// `F^4 x E1^2 x ... x E23`.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| {
                let mut s = if f.a.is_empty() {
                    "F".to_string()
                } else {
                    let name: String = f
                        .a
                        .iter()
                        .map(|&v| {
                            let t = f.twists.iter().find(|t| t.var == v);
                            match t {
                                Some(t) => format!(
                                    "({}{}{v})",
                                    if t.sign { "-" } else { "" },
                                    if t.two { "2" } else { "" }
                                ),
                                None => v.to_string(),
                            }
                        })
                        .collect();
                    format!("E{name}")
                };
                if f.multiplicity > 1 {
                    s.push_str(&format!("^{}", f.multiplicity));
                }
                s
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" x ")
        }
    }
}

/// JSON form of a single class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaOutput {
    pub g: usize,
    pub parity: ParityFilter,
    pub degree: usize,
    pub class: String,
}

//! Verification suites. Each check recomputes a claim from scratch and
//! compares it with the expected closed form.

use std::ops::RangeInclusive;

use theta_sw_core::polyrec::{self, IntPolynomial};
use theta_sw_core::quadform::{sw_classes, w2_conic};
use theta_sw_core::symbols::{residue_chain, substitute};
use theta_sw_core::theta::{self, decompose, multiplicity_table};
use theta_sw_core::{
    DiagonalForm, EtaleAlgebra, GaloisAction, GswConvention, Monomial, MultiquadraticField,
    ParityFilter, ResidueChain, RingElement, SquareClass, Substitution, VarSet,
};

use crate::render::Decomposition;
use crate::report::VerificationReport;
use crate::CliError;

const CONVENTIONS: [GswConvention; 2] = [GswConvention::EvenTwisted, GswConvention::OddTwisted];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Genus3,
    Counts,
    Sigmastate,
    Independence,
    Polyrec,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Genus3 => "genus3",
            Suite::Counts => "counts",
            Suite::Sigmastate => "sigmastate",
            Suite::Independence => "independence",
            Suite::Polyrec => "polyrec",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [
            Suite::All,
            Suite::Genus3,
            Suite::Counts,
            Suite::Sigmastate,
            Suite::Independence,
            Suite::Polyrec,
        ]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

pub const COUNTS_G: RangeInclusive<usize> = 2..=7;
pub const INDEPENDENCE_G: RangeInclusive<usize> = 3..=5;
pub const INDEPENDENCE_G_MAX: usize = 7;
pub const SIGMASTATE_N: RangeInclusive<usize> = 1..=5;
pub const POLYREC_N: RangeInclusive<usize> = 0..=5;

fn within(
    what: &str,
    r: &RangeInclusive<usize>,
    bounds: RangeInclusive<usize>,
) -> Result<(), CliError> {
    if r.is_empty() || !bounds.contains(r.start()) || !bounds.contains(r.end()) {
        Err(CliError::Usage(format!(
            "{what} range {}..{} must lie within {}..{}",
            r.start(),
            r.end(),
            bounds.start(),
            bounds.end()
        )))
    } else {
        Ok(())
    }
}

/// Runs `suite`. `g` and `n` override the default ranges of the suites that
/// use them.
pub fn run(
    suite: Suite,
    g: Option<RangeInclusive<usize>>,
    n: Option<RangeInclusive<usize>>,
) -> Result<VerificationReport, CliError> {
    let mut report = VerificationReport::new(suite.name());
    let counts_g = g.clone().unwrap_or(COUNTS_G);
    let indep_g = g.unwrap_or(INDEPENDENCE_G);
    let sigma_n = n.clone().unwrap_or(SIGMASTATE_N);
    let poly_n = n.unwrap_or(POLYREC_N);
    let wants = |s: Suite| suite == Suite::All || suite == s;
    if wants(Suite::Counts) {
        within("genus", &counts_g, theta::MIN_GENUS..=theta::MAX_GENUS)?;
    }
    if wants(Suite::Independence) {
        within("genus", &indep_g, 3..=INDEPENDENCE_G_MAX)?;
    }
    if wants(Suite::Sigmastate) {
        within("n", &sigma_n, 1..=polyrec::MAX_IDENTITY_N)?;
    }
    if wants(Suite::Polyrec) {
        within("n", &poly_n, 0..=polyrec::MAX_IDENTITY_N)?;
    }

    if wants(Suite::Genus3) {
        genus3_decompositions(&mut report);
        genus3_classes(&mut report);
    }
    if wants(Suite::Counts) {
        counts(&mut report, counts_g);
    }
    if wants(Suite::Polyrec) {
        polynomial_table(&mut report);
        polynomial_recursion(&mut report, poly_n.clone());
        polynomial_identities(&mut report, poly_n);
    }
    if wants(Suite::Sigmastate) {
        sigmastate(&mut report, sigma_n);
    }
    if wants(Suite::Independence) {
        independence(&mut report, indep_g);
    }
    Ok(report)
}

fn field(n: usize, a: &[usize]) -> MultiquadraticField {
    MultiquadraticField::untwisted(n, VarSet::from_indices(a.iter().copied()))
        .expect("distinct variables are independent")
}

fn ring(n: usize, s: &str) -> RingElement {
    RingElement::parse(n, s).expect("well-formed constant")
}

/// The odd and even theta algebras of the genus 3 test curve.
pub fn genus3_decompositions(report: &mut VerificationReport) {
    let cases = [
        (
            ParityFilter::Odd,
            "F^4 x E1^2 x E2^2 x E3^2 x E12 x E13 x E23",
            28,
        ),
        (
            ParityFilter::Even,
            "F^4 x E1^2 x E2^2 x E3^2 x E12 x E13 x E23 x E123",
            36,
        ),
    ];
    for (parity, expected, degree) in cases {
        report.run(
            format!("genus3.{parity}-decomposition"),
            format!("{parity} theta algebra of the genus 3 test curve"),
            || {
                let act = GaloisAction::standard(3)?;
                let algebra = decompose(3, parity, &act)?;
                let text = Decomposition::from_algebra(3, parity, &algebra)
                    .map(|d| d.to_text())
                    .unwrap_or_default();
                Ok((
                    text == expected && algebra.degree() == degree,
                    format!("{text} (degree {})", algebra.degree()),
                ))
            },
        );
    }
}

/// Weierstrass algebra classes, the genus 3 identity for odd theta
/// characteristics, and the second test curve.
pub fn genus3_classes(report: &mut VerificationReport) {
    let w_c = || {
        EtaleAlgebra::from_factors(
            3,
            [
                (field(3, &[1]), 1),
                (field(3, &[2]), 1),
                (field(3, &[3]), 1),
                (field(3, &[]), 2),
            ],
        )
    };
    report.run(
        "genus3.weierstrass-classes",
        "a1(W) = {a1a2a3}, a2(W) = sum {ai,aj}",
        || {
            let mut ok = true;
            let mut detail = String::new();
            let (a1, a2) = (ring(3, "a1 + a2 + a3"), ring(3, "a1 a2 + a1 a3 + a2 a3"));
            for conv in CONVENTIONS {
                let alpha = w_c()?.alpha_total(Some(2), conv);
                ok &= alpha[1].without_tau() == a1 && alpha[2].without_tau() == a2;
                if conv == GswConvention::EvenTwisted {
                    ok &= alpha[1] == a1 && alpha[2] == a2;
                    detail = format!("a1 = {}, a2 = {}", alpha[1], alpha[2]);
                }
            }
            Ok((ok, detail))
        },
    );
    report.run(
        "genus3.odd-class-identity",
        "a2(S-) = a2(W) + {-1} a1(W), so r = {-1} and s = 1",
        || {
            let act = GaloisAction::standard(3)?;
            let s_minus = decompose(3, ParityFilter::Odd, &act)?;
            let mut ok = true;
            let mut detail = String::new();
            for conv in CONVENTIONS {
                let w = w_c()?.alpha_total(Some(2), conv);
                let s = s_minus.alpha_total(Some(2), conv);
                let expected = &w[2] + &(&RingElement::eps(3) * &w[1]);
                ok &= s[2].without_tau() == expected.without_tau();
                if conv == GswConvention::EvenTwisted {
                    ok &= s[2] == expected;
                    detail = format!("a2(S-) = {}", s[2]);
                }
            }
            Ok((ok, detail))
        },
    );
    report.run(
        "genus3.second-curve-theta",
        "a2(F^4 x F'^12) = 0 for F' = F(sqrt(-a2))",
        || {
            let f_prime = MultiquadraticField::new(2, vec![SquareClass::var(2).negated()])?;
            let s = EtaleAlgebra::from_factors(2, [(field(2, &[]), 4), (f_prime, 12)])?;
            let mut ok = s.degree() == 28;
            let mut detail = String::new();
            for conv in CONVENTIONS {
                let alpha = s.alpha_total(Some(2), conv);
                ok &= alpha[2].without_tau().is_zero();
                if conv == GswConvention::EvenTwisted {
                    ok &= alpha[2].is_zero();
                    detail = format!("a1 = {}, a2 = {}", alpha[1], alpha[2]);
                }
            }
            Ok((ok, detail))
        },
    );
    report.run(
        "genus3.second-curve-conic",
        "w2 of the conic <a1, a2, a1a2> vanishes over F(sqrt(-a2))",
        || {
            let q = DiagonalForm::new(
                2,
                vec![
                    SquareClass::var(1),
                    SquareClass::var(2),
                    SquareClass::var(1) * SquareClass::var(2),
                ],
            )?;
            let w2 = w2_conic(&q)?;
            let nontrivial = w2 == ring(2, "a1 a2 + e a1 + e a2 + e^2");
            // over F', -a2 is a square, so a2 becomes -1
            let sub = Substitution::identity(2).with(2, SquareClass::MINUS_ONE);
            let split = substitute(&w2, &sub)?;
            Ok((nontrivial && split.is_zero(), format!("w2 = {w2}, over F': {split}")))
        },
    );
}

/// Multiplicities of the fields `E_A` in the odd and even theta algebras.
pub fn counts(report: &mut VerificationReport, gs: RangeInclusive<usize>) {
    for g in gs {
        report.run(
            format!("counts.g{g}"),
            "n-_A = n+_A = 2^(g-1-|A|) for |A| < g, n-_full = 0, n+_full = 1",
            || {
                let table = multiplicity_table(g)?;
                let full = VarSet::full(g);
                let mut bad = Vec::new();
                let (mut odd_deg, mut even_deg) = (0u64, 0u64);
                for (a, m) in &table {
                    let expected = if *a == full {
                        (0, 1)
                    } else {
                        let v = 1u64 << (g - 1 - a.len());
                        (v, v)
                    };
                    if (m.n_minus, m.n_plus) != expected {
                        bad.push(format!("{a:?}: {}/{}", m.n_minus, m.n_plus));
                    }
                    odd_deg += m.n_minus << a.len();
                    even_deg += m.n_plus << a.len();
                }
                let odd_total = (1u64 << (g - 1)) * ((1 << g) - 1);
                let even_total = (1u64 << (g - 1)) * ((1 << g) + 1);
                let ok = bad.is_empty() && odd_deg == odd_total && even_deg == even_total;
                Ok((
                    ok,
                    format!(
                        "degrees {odd_deg} + {even_deg}, mismatches {}",
                        if bad.is_empty() { "none".to_string() } else { bad.join(", ") }
                    ),
                ))
            },
        );
    }
}

type Terms = &'static [(i64, &'static [u8])];

const TABLE: [(&str, usize, Terms); 6] = [
    ("p0", 0, &[(1, &[])]),
    ("q0", 1, &[(1, &[0]), (1, &[1])]),
    ("p1", 1, &[(1, &[0]), (1, &[1])]),
    ("q1", 2, &[(1, &[0, 0]), (1, &[1, 0]), (2, &[0, 1]), (1, &[1, 1]), (1, &[0, 2])]),
    (
        "p2",
        2,
        &[
            (1, &[0, 0]),
            (2, &[1, 0]),
            (2, &[0, 1]),
            (1, &[2, 0]),
            (3, &[1, 1]),
            (1, &[0, 2]),
            (1, &[2, 1]),
            (1, &[1, 2]),
        ],
    ),
    (
        "q2",
        3,
        &[
            (1, &[0, 0, 0]),
            (2, &[0, 1, 0]),
            (2, &[1, 0, 0]),
            (4, &[0, 0, 1]),
            (1, &[2, 0, 0]),
            (3, &[1, 1, 0]),
            (1, &[0, 2, 0]),
            (6, &[0, 0, 2]),
            (6, &[1, 0, 1]),
            (6, &[0, 1, 1]),
            (1, &[2, 1, 0]),
            (1, &[1, 2, 0]),
            (6, &[1, 1, 1]),
            (1, &[2, 1, 1]),
            (2, &[0, 2, 1]),
            (1, &[1, 2, 1]),
            (2, &[2, 0, 1]),
            (6, &[0, 1, 2]),
            (3, &[1, 1, 2]),
            (6, &[1, 0, 2]),
            (1, &[0, 2, 2]),
            (1, &[2, 0, 2]),
            (4, &[0, 0, 3]),
            (2, &[0, 1, 3]),
            (2, &[1, 0, 3]),
            (1, &[0, 0, 4]),
        ],
    ),
];

/// Coefficient-exact small values of `p_n` and `q_n`.
pub fn polynomial_table(report: &mut VerificationReport) {
    for (name, nvars, terms) in TABLE {
        report.run(format!("polyrec.table.{name}"), format!("expansion of {name}"), || {
            let expected =
                IntPolynomial::from_terms(nvars, terms.iter().map(|&(c, e)| (c, e.to_vec())))?;
            let k: usize = name[1..].parse().expect("table names end in a digit");
            let actual = if name.starts_with('p') {
                polyrec::build_p(k)?
            } else {
                polyrec::build_q(k)?
            };
            Ok((actual == expected, actual.to_string()))
        });
    }
}

/// `p_n = p_{n-1} q_{n-1}` over the integers and `deg p_n = 2^n - 1`.
pub fn polynomial_recursion(report: &mut VerificationReport, ns: RangeInclusive<usize>) {
    for n in ns {
        report.run(
            format!("polyrec.recursion.n{n}"),
            "p_n = p_(n-1) q_(n-1) exactly, deg p_n = 2^n - 1",
            || {
                let p = polyrec::build_p(n)?;
                let deg_ok = p.degree() == Some((1 << n) - 1);
                if n == 0 {
                    return Ok((deg_ok && p == IntPolynomial::one(0)?, "p0 = 1".into()));
                }
                let rec = polyrec::build_p(n - 1)?
                    .with_nvars(n)?
                    .mul(&polyrec::build_q(n - 1)?)?;
                Ok((
                    deg_ok && rec == p,
                    format!("{} terms, degree {:?}", p.len(), p.degree()),
                ))
            },
        );
    }
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

/// Every mod-2 identity behind the middle coefficient of `p_n`.
pub fn polynomial_identities(report: &mut VerificationReport, ns: RangeInclusive<usize>) {
    for n in ns {
        match polyrec::verify_identities(n) {
            Ok(r) => {
                for c in r.checks {
                    let passed = c.passed;
                    let detail = c.detail;
                    report.run(
                        format!("polyrec.n{n}.{}", slug(&c.name)),
                        c.name,
                        move || Ok((passed, detail)),
                    );
                }
            }
            Err(e) => report.run(format!("polyrec.n{n}"), "identities", || Err(e)),
        }
    }
}

fn nontrivial_classes(n: usize) -> DiagonalForm {
    let classes = VarSet::full(n)
        .subsets()
        .filter(|s| !s.is_empty())
        .map(SquareClass::vars)
        .collect();
    DiagonalForm::new(n, classes).expect("at least one class for n >= 1")
}

/// Elementary symmetric functions of all nontrivial classes `prod_{j in S} aj`,
/// by the generating product, against the polynomial route.
pub fn sigmastate(report: &mut VerificationReport, ns: RangeInclusive<usize>) {
    for n in ns {
        report.run(
            format!("sigmastate.n{n}"),
            "sigma_i = 0 for 0 < i < 2^(n-1), sigma_(2^(n-1)) = sum e^(2^(n-1)-i) s_i",
            || {
                let half = 1usize << (n - 1);
                let q = nontrivial_classes(n);
                let sigma = sw_classes(&q, q.rank())?;
                let low_ok = sigma[1..half].iter().all(RingElement::is_zero);
                let high_ok = sigma[half + 1..].iter().all(RingElement::is_zero);
                let formula_ok = sigma[half] == polyrec::middle_class_formula(n);
                let (min, part) = sigma[half].min_eps_part(half)?;
                let min_ok = min as usize == half - n
                    && part
                        == RingElement::monomial(
                            n,
                            Monomial::new(VarSet::full(n), min, false).expect("no t"),
                        );
                let images = polyrec::sigma_images(n)?;
                let routes_ok = images.len() == sigma.len() && images == sigma;
                let e3_ok = n != 3
                    || sigma[4]
                        == ring(
                            3,
                            "e a1 a2 a3 + e^2 a1 a2 + e^2 a1 a3 + e^2 a2 a3 + e^3 a1 + e^3 a2 + e^3 a3",
                        );
                let ok = low_ok && high_ok && formula_ok && min_ok && routes_ok && e3_ok;
                Ok((
                    ok,
                    format!(
                        "sigma_{half} = {}; low {low_ok}, high {high_ok}, formula {formula_ok}, \
                         min-e {min_ok}, routes agree {routes_ok}",
                        sigma[half]
                    ),
                ))
            },
        );
    }
}

/// Residues of the theta classes along `a1, .., ag` and their vanishing in
/// low degrees.
pub fn independence(report: &mut VerificationReport, gs: RangeInclusive<usize>) {
    for g in gs {
        let half = 1usize << (g - 1);
        let quarter = half / 2;
        let computed = (|| {
            let act = GaloisAction::standard(g)?;
            let s = decompose(g, ParityFilter::All, &act)?;
            let s_minus = decompose(g, ParityFilter::Odd, &act)?;
            let mut out = Vec::new();
            for conv in CONVENTIONS {
                out.push((
                    s.alpha_total(Some(half), conv),
                    s_minus.alpha_total(Some(quarter), conv),
                ));
            }
            Ok::<_, theta_sw_core::Error>(out)
        })();
        let classes = match computed {
            Ok(c) => c,
            Err(e) => {
                report.run(format!("independence.g{g}"), "theta classes", || Err(e));
                continue;
            }
        };
        let real: Vec<(Vec<RingElement>, Vec<RingElement>)> = classes
            .iter()
            .map(|(a, b)| {
                (
                    a.iter().map(RingElement::without_tau).collect(),
                    b.iter().map(RingElement::without_tau).collect(),
                )
            })
            .collect();
        let (s, s_minus) = real[0].clone();
        let chain = ResidueChain::first(g);

        report.run(
            format!("independence.g{g}.conventions"),
            "both twist conventions agree once {2} = 0",
            || Ok((real[0] == real[1], String::new())),
        );
        report.run(
            format!("independence.g{g}.vanishing"),
            "a_i(S-) = 0 for 0 < i < 2^(g-2), a_i(S) = 0 for 0 < i < 2^(g-1)",
            || {
                let bad_minus: Vec<usize> = (1..quarter).filter(|&i| !s_minus[i].is_zero()).collect();
                let bad_all: Vec<usize> = (1..half).filter(|&i| !s[i].is_zero()).collect();
                Ok((
                    bad_minus.is_empty() && bad_all.is_empty(),
                    format!("nonzero: S- {bad_minus:?}, S {bad_all:?}"),
                ))
            },
        );
        report.run(
            format!("independence.g{g}.residue-all"),
            "residues of a_(2^(g-1))(S) along a1..ag give e^(2^(g-1)-g)",
            || {
                let r = residue_chain(&s[half], &chain)?;
                let expected = RingElement::eps_pow(g, (half - g) as u32);
                Ok((r == expected, format!("{r}")))
            },
        );
        report.run(
            format!("independence.g{g}.residue-odd"),
            "residues of a_(2^(g-2))(S-) along a1..ag vanish",
            || {
                let r = residue_chain(&s_minus[quarter], &chain)?;
                Ok((r.is_zero(), format!("{r}")))
            },
        );
        report.run(
            format!("independence.g{g}.leading-terms"),
            "lowest e-parts of a_(2^(g-1))(S) and a_(2^(g-2))(S-)",
            || {
                let (m_all, p_all) = s[half].min_eps_part(half)?;
                let (m_odd, p_odd) = s_minus[quarter].min_eps_part(quarter)?;
                let full = VarSet::full(g);
                let expect_all =
                    RingElement::monomial(g, Monomial::new(full, (half - g) as u32, false).expect("no t"));
                let odd_eps = (quarter + 1 - g) as u32;
                let expect_odd = RingElement::from_monomials(
                    g,
                    full.iter()
                        .map(|i| Monomial::new(full.without(i), odd_eps, false).expect("no t")),
                );
                Ok((
                    m_all as usize == half - g
                        && p_all == expect_all
                        && m_odd == odd_eps
                        && p_odd == expect_odd,
                    format!("S: {p_all}; S-: {p_odd}"),
                ))
            },
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("p_n = p_{n-1} q_{n-1}"), "p-n-p-n-1-q-n-1");
        assert_eq!(slug("Frobenius twist in the ring"), "frobenius-twist-in-the-ring");
    }

    #[test]
    fn suite_names_round_trip() {
        for s in ["all", "genus3", "counts", "sigmastate", "independence", "polyrec"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn ranges_are_checked() {
        assert!(run(Suite::Counts, Some(1..=3), None).is_err());
        assert!(run(Suite::Independence, Some(3..=9), None).is_err());
        assert!(run(Suite::Polyrec, None, Some(0..=6)).is_err());
    }

    #[test]
    fn genus3_suite_passes() {
        let r = run(Suite::Genus3, None, None).unwrap();
        assert!(r.passed(), "{}", r.render_text(false));
    }
}

//! Theta characteristics of a hyperelliptic curve `y^2 = f(x)` with
//! `2g + 2` Weierstrass points, encoded by subsets of `I = {1, .., 2g+2}`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etale::EtaleAlgebra;
use crate::quadform::MultiquadraticField;
use crate::ring::VarSet;

pub const MIN_GENUS: usize = 2;
pub const MAX_GENUS: usize = 7;

fn check_genus(g: usize) -> Result<()> {
    if (MIN_GENUS..=MAX_GENUS).contains(&g) {
        Ok(())
    } else {
        Err(Error::GenusOutOfRange {
            g,
            min: MIN_GENUS,
            max: MAX_GENUS,
        })
    }
}

fn full_mask(len: usize) -> u32 {
    (1u32 << len) - 1
}

fn bit(i: usize) -> u32 {
    1 << (i - 1)
}

fn mask_from_indices(indices: &[usize], max: usize) -> Result<u32> {
    let mut m = 0;
    for &i in indices {
        if i == 0 || i > max {
            return Err(Error::SubsetOutOfRange { index: i, max });
        }
        m |= bit(i);
    }
    Ok(m)
}

fn mask_indices(m: u32) -> Vec<usize> {
    (1..=32).filter(|&i| m & bit(i) != 0).collect()
}

/// Sorted-list lexicographic comparison for subsets.
fn lex_cmp(a: u32, b: u32) -> Ordering {
    mask_indices(a).cmp(&mask_indices(b))
}

/// `odd`, `even` or `all` theta characteristics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityFilter {
    Odd,
    Even,
    All,
}

impl ParityFilter {
    pub fn accepts(self, p: Parity) -> bool {
        match self {
            ParityFilter::All => true,
            ParityFilter::Odd => p == Parity::Odd,
            ParityFilter::Even => p == Parity::Even,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ParityFilter::Odd => "odd",
            ParityFilter::Even => "even",
            ParityFilter::All => "all",
        }
    }
}

impl fmt::Display for ParityFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParityFilter {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "odd" => Ok(ParityFilter::Odd),
            "even" => Ok(ParityFilter::Even),
            "all" => Ok(ParityFilter::All),
            _ => Err(format!("expected odd, even or all, got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A theta characteristic `theta_T`, stored by its canonical subset.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaChar {
    g: usize,
    mask: u32,
}

impl ThetaChar {
    /// Canonical representative of `theta_T` for arbitrary `T` in `I`.
    pub fn new(g: usize, t: &[usize]) -> Result<Self> {
        check_genus(g)?;
        Ok(canonicalize_mask(g, mask_from_indices(t, 2 * g + 2)?))
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn indices(&self) -> Vec<usize> {
        mask_indices(self.mask)
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        (1..=2 * self.g + 2).contains(&i) && self.mask & bit(i) != 0
    }

    pub fn parity(&self) -> Parity {
        if self.len() % 4 == (self.g + 1) % 4 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `theta_T + alpha_S = theta_{T xor S}`.
    pub fn translate(&self, alpha: &AlphaClass) -> Result<ThetaChar> {
        if alpha.g != self.g {
            return Err(Error::InvalidAction(format!(
                "genus {} class acting on genus {} characteristic",
                alpha.g, self.g
            )));
        }
        Ok(canonicalize_mask(self.g, self.mask ^ alpha.mask))
    }
}

impl Ord for ThetaChar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.g
            .cmp(&other.g)
            .then(self.len().cmp(&other.len()))
            .then_with(|| lex_cmp(self.mask, other.mask))
    }
}

impl PartialOrd for ThetaChar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ThetaChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for ThetaChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta[g={}]{}", self.g, self)
    }
}

fn canonicalize_mask(g: usize, mut m: u32) -> ThetaChar {
    let n = 2 * g + 2;
    let all = full_mask(n);
    m &= all;
    if m.count_ones() as usize % 2 != (g + 1) % 2 {
        m ^= bit(n);
    }
    let len = m.count_ones() as usize;
    if len > g + 1 || (len == g + 1 && m & 1 == 0) {
        // for |T| = g + 1 the lexicographically smaller of T and its
        // complement is the one containing 1
        m ^= all;
    }
    ThetaChar { g, mask: m }
}

/// Canonical representative of the theta characteristic named by `t`.
pub fn canonicalize(g: usize, t: &[usize]) -> Result<ThetaChar> {
    ThetaChar::new(g, t)
}

pub fn parity(t: &ThetaChar) -> Parity {
    t.parity()
}

/// All canonical theta characteristics of genus `g` passing `filter`.
pub fn enumerate(g: usize, filter: ParityFilter) -> Result<BTreeSet<ThetaChar>> {
    check_genus(g)?;
    let n = 2 * g + 2;
    Ok((0..=full_mask(n))
        .filter(|&m| canonicalize_mask(g, m).mask == m)
        .map(|mask| ThetaChar { g, mask })
        .filter(|t| filter.accepts(t.parity()))
        .collect())
}

/// A two-torsion point `alpha_S = sum_{i in S} (c_i - c_{2g+2})` of the
/// Jacobian, with `S` in `{1, .., 2g+1}` and `|S| <= g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlphaClass {
    g: usize,
    mask: u32,
}

impl AlphaClass {
    pub fn new(g: usize, s: &[usize]) -> Result<Self> {
        check_genus(g)?;
        let n = 2 * g + 2;
        let m = mask_from_indices(s, n)? & !bit(n);
        let m = if m.count_ones() as usize > g {
            m ^ full_mask(n - 1)
        } else {
            m
        };
        Ok(AlphaClass { g, mask: m })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn indices(&self) -> Vec<usize> {
        mask_indices(self.mask)
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    /// All `2^{2g}` classes.
    pub fn all(g: usize) -> Result<Vec<AlphaClass>> {
        check_genus(g)?;
        let n = 2 * g + 2;
        Ok((0..=full_mask(n - 1))
            .filter(|m| m.count_ones() as usize <= g)
            .map(|mask| AlphaClass { g, mask })
            .collect())
    }
}

impl fmt::Debug for AlphaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha[g={}]{:?}", self.g, self.indices())
    }
}

/// `(Z/2)^g` acting on the branch points, generator `j` swapping one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisAction {
    g: usize,
    pairs: Vec<(usize, usize)>,
}

impl GaloisAction {
    /// `sigma_j` swaps `2j - 1` and `2j`; `2g+1` and `2g+2` are rational.
    pub fn standard(g: usize) -> Result<Self> {
        check_genus(g)?;
        Ok(GaloisAction {
            g,
            pairs: (1..=g).map(|j| (2 * j - 1, 2 * j)).collect(),
        })
    }

    /// An arbitrary pairing of `{1, .., 2g}`.
    pub fn new(g: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        check_genus(g)?;
        if pairs.len() != g {
            return Err(Error::InvalidAction(format!(
                "expected {g} pairs, got {}",
                pairs.len()
            )));
        }
        let mut seen = 0u32;
        for &(x, y) in &pairs {
            for i in [x, y] {
                if i == 0 || i > 2 * g {
                    return Err(Error::InvalidAction(format!(
                        "point {i} is not one of 1..={}",
                        2 * g
                    )));
                }
                if seen & bit(i) != 0 {
                    return Err(Error::InvalidAction(format!("point {i} appears twice")));
                }
                seen |= bit(i);
            }
        }
        Ok(GaloisAction { g, pairs })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn check(&self, t: &ThetaChar) -> Result<()> {
        if t.g == self.g {
            Ok(())
        } else {
            Err(Error::InvalidAction(format!(
                "genus {} action on genus {} characteristic",
                self.g, t.g
            )))
        }
    }

    /// Image of `t` under `prod_{j in s} sigma_j`.
    pub fn apply(&self, s: VarSet, t: &ThetaChar) -> Result<ThetaChar> {
        self.check(t)?;
        let mut m = t.mask;
        for j in s.iter() {
            let &(x, y) = self.pairs.get(j - 1).ok_or(Error::InvalidAction(format!(
                "no generator sigma_{j} in genus {}",
                self.g
            )))?;
            if (m & bit(x) != 0) != (m & bit(y) != 0) {
                m ^= bit(x) | bit(y);
            }
        }
        Ok(canonicalize_mask(self.g, m))
    }
}

/// The set `A` of generators `j` such that exactly one point of pair `j`
/// lies in `T`; `theta_T` is defined over `E_A` and no smaller field.
pub fn field_of_definition(t: &ThetaChar, act: &GaloisAction) -> Result<VarSet> {
    act.check(t)?;
    Ok(VarSet::from_indices(
        act.pairs
            .iter()
            .enumerate()
            .filter(|(_, &(x, y))| t.contains(x) != t.contains(y))
            .map(|(j, _)| j + 1),
    ))
}

/// Galois orbit of `t`, computed by applying every group element.
pub fn orbit(t: &ThetaChar, act: &GaloisAction) -> Result<BTreeSet<ThetaChar>> {
    VarSet::full(act.g)
        .subsets()
        .map(|s| act.apply(s, t))
        .collect()
}

/// Orbits of the characteristics passing `filter`, each with its field of
/// definition, in order of their smallest element.
pub fn orbits(
    g: usize,
    filter: ParityFilter,
    act: &GaloisAction,
) -> Result<Vec<(VarSet, BTreeSet<ThetaChar>)>> {
    if act.g != g {
        return Err(Error::InvalidAction(format!(
            "genus {} action used for genus {g}",
            act.g
        )));
    }
    let mut remaining = enumerate(g, filter)?;
    let mut out = Vec::new();
    while let Some(t) = remaining.pop_first() {
        let o = orbit(&t, act)?;
        for u in &o {
            remaining.remove(u);
        }
        out.push((field_of_definition(&t, act)?, o));
    }
    Ok(out)
}

/// The etale algebra of theta characteristics passing `filter`, one factor
/// `E_A` per Galois orbit.
pub fn decompose(g: usize, filter: ParityFilter, act: &GaloisAction) -> Result<EtaleAlgebra> {
    let mut algebra = EtaleAlgebra::empty(g);
    for (a, _) in orbits(g, filter, act)? {
        algebra.push(MultiquadraticField::untwisted(g, a)?, 1)?;
    }
    Ok(algebra)
}

/// Multiplicities of `E_A` in the odd and even theta algebras.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicities {
    pub n_minus: u64,
    pub n_plus: u64,
}

/// `A -> (n-_A, n+_A)` for every `A` in `{1..g}`, for the standard action.
pub fn multiplicity_table(g: usize) -> Result<BTreeMap<VarSet, Multiplicities>> {
    let act = GaloisAction::standard(g)?;
    let mut table: BTreeMap<VarSet, Multiplicities> =
        VarSet::full(g).subsets().map(|a| (a, Multiplicities::default())).collect();
    for (filter, odd) in [(ParityFilter::Odd, true), (ParityFilter::Even, false)] {
        for (a, _) in orbits(g, filter, &act)? {
            let entry = table.get_mut(&a).expect("A is a subset of 1..g");
            if odd {
                entry.n_minus += 1;
            } else {
                entry.n_plus += 1;
            }
        }
    }
    Ok(table)
}

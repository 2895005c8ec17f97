//! The integer polynomials `Phi_n(x0; x1..xn) = prod_I (x0 + sum_{i in I} xi)`,
//! `p_n = Phi_n(1)` and `q_n = Phi_n(1 + x_{n+1})`, their mod-2 identities and
//! their images in the coefficient ring.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{Monomial, RingElement, VarSet};

/// Variables per polynomial; each exponent is packed into one byte.
pub const MAX_POLY_VARS: usize = 8;
/// Largest `n` for which `Phi_n` is built.
pub const MAX_PHI_N: usize = 6;
/// Largest `n` covered by [`verify_identities`].
pub const MAX_IDENTITY_N: usize = 5;

const DENSE_CELLS: usize = 1 << 22;

/// Exponent vector packed 8 bits per variable, slot 0 lowest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents(u64);

impl Exponents {
    pub const ZERO: Exponents = Exponents(0);

    pub fn from_slice(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_POLY_VARS);
        Exponents(
            exps.iter()
                .enumerate()
                .fold(0, |acc, (s, &e)| acc | (e as u64) << (8 * s)),
        )
    }

    pub fn single(slot: usize, e: u8) -> Self {
        assert!(slot < MAX_POLY_VARS);
        Exponents((e as u64) << (8 * slot))
    }

    pub fn get(self, slot: usize) -> u8 {
        (self.0 >> (8 * slot)) as u8
    }

    pub fn degree(self) -> usize {
        (0..MAX_POLY_VARS).map(|s| self.get(s) as usize).sum()
    }

    /// Slot-wise sum; exponents must stay below 256.
    fn add(self, other: Exponents) -> Exponents {
        debug_assert!((0..MAX_POLY_VARS).all(|s| self.get(s) as u16 + other.get(s) as u16 <= 255));
        Exponents(self.0 + other.0)
    }

    fn scaled(self, k: u8) -> Exponents {
        Exponents::from_slice(&(0..MAX_POLY_VARS).map(|s| self.get(s) * k).collect::<Vec<_>>())
    }

    fn highest_slot(self) -> Option<usize> {
        (0..MAX_POLY_VARS).rev().find(|&s| self.get(s) > 0)
    }
}

fn check_nvars(nvars: usize) -> Result<()> {
    if nvars > MAX_POLY_VARS {
        Err(Error::PolyTooManyVariables {
            nvars,
            max: MAX_POLY_VARS,
        })
    } else {
        Ok(())
    }
}

fn term_order(e: &Exponents) -> (usize, Vec<std::cmp::Reverse<u8>>) {
    (
        e.degree(),
        (0..MAX_POLY_VARS).map(|s| std::cmp::Reverse(e.get(s))).collect(),
    )
}

fn render_term(f: &mut fmt::Formatter<'_>, e: Exponents, nvars: usize) -> fmt::Result {
    let mut first = true;
    for s in 0..nvars {
        match e.get(s) {
            0 => continue,
            k => {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", s + 1)?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
    }
    Ok(())
}

/// A polynomial in `x1..x_nvars` with integer coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    nvars: usize,
    terms: HashMap<Exponents, BigInt>,
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Result<Self> {
        check_nvars(nvars)?;
        Ok(IntPolynomial {
            nvars,
            terms: HashMap::new(),
        })
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Result<Self> {
        let mut p = Self::zero(nvars)?;
        p.add_term(Exponents::ZERO, c.into());
        Ok(p)
    }

    pub fn one(nvars: usize) -> Result<Self> {
        Self::constant(nvars, 1)
    }

    /// The variable `x_i`, `1 <= i <= nvars`.
    pub fn var(nvars: usize, i: usize) -> Result<Self> {
        check_nvars(nvars)?;
        if i == 0 || i > nvars {
            return Err(Error::VariableOutOfRange {
                index: i,
                ambient: nvars,
            });
        }
        let mut p = Self::zero(nvars)?;
        p.add_term(Exponents::single(i - 1, 1), BigInt::one());
        Ok(p)
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs.
    pub fn from_terms<I, C>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, Vec<u8>)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(nvars)?;
        for (c, e) in terms {
            if e.len() > nvars {
                return Err(Error::PolyTooManyVariables {
                    nvars: e.len(),
                    max: nvars,
                });
            }
            p.add_term(Exponents::from_slice(&e), c.into());
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u8]) -> BigInt {
        self.terms
            .get(&Exponents::from_slice(exps))
            .cloned()
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// Same polynomial over `nvars` variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        check_nvars(nvars)?;
        if let Some(s) = self.terms.keys().filter_map(|e| e.highest_slot()).max() {
            if s >= nvars {
                return Err(Error::VariableOutOfRange {
                    index: s + 1,
                    ambient: nvars,
                });
            }
        }
        Ok(IntPolynomial {
            nvars,
            terms: self.terms.clone(),
        })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::AmbientMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, -c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        // every output coefficient is bounded by the product of the l1 norms
        if (big.l1_norm() * small.l1_norm()).bits() < 127 {
            return Ok(big.mul_small(small));
        }
        let mut acc: HashMap<Exponents, BigInt> = HashMap::with_capacity(big.len() * 2);
        for (&es, cs) in &small.terms {
            let unit = cs.is_one();
            for (&eb, cb) in &big.terms {
                let slot = acc.entry(eb.add(es)).or_default();
                if unit {
                    *slot += cb;
                } else {
                    *slot += cb * cs;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(IntPolynomial {
            nvars: self.nvars,
            terms: acc,
        })
    }

    fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| BigInt::from(c.magnitude().clone())).sum()
    }

    /// Product accumulated in `i128`; the caller guarantees no overflow.
    fn mul_small(&self, other: &Self) -> Self {
        let narrow = |p: &Self| -> Vec<(Exponents, i128)> {
            p.terms
                .iter()
                .map(|(&e, c)| (e, i128::try_from(c).expect("bounded by the l1 norm")))
                .collect()
        };
        let (a, b) = (narrow(self), narrow(other));
        let max_exp = |v: &[(Exponents, i128)], s: usize| v.iter().map(|(e, _)| e.get(s) as usize).max().unwrap_or(0);
        let dims: Vec<usize> = (0..MAX_POLY_VARS)
            .map(|s| max_exp(&a, s) + max_exp(&b, s) + 1)
            .collect();
        let cells = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if let Some(cells) = cells.filter(|&c| c <= DENSE_CELLS) {
            return self.mul_dense(&a, &b, &dims, cells);
        }
        let mut acc: HashMap<Exponents, i128> = HashMap::with_capacity(a.len() * 2);
        for &(eb, cb) in &b {
            for &(ea, ca) in &a {
                *acc.entry(ea.add(eb)).or_default() += ca * cb;
            }
        }
        IntPolynomial {
            nvars: self.nvars,
            terms: acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(e, c)| (e, BigInt::from(c)))
                .collect(),
        }
    }

    /// Product over a dense mixed-radix array of exponent vectors.
    fn mul_dense(
        &self,
        a: &[(Exponents, i128)],
        b: &[(Exponents, i128)],
        dims: &[usize],
        cells: usize,
    ) -> Self {
        let mut strides = [1usize; MAX_POLY_VARS];
        for s in 1..MAX_POLY_VARS {
            strides[s] = strides[s - 1] * dims[s - 1];
        }
        let index = |e: Exponents| -> usize { (0..MAX_POLY_VARS).map(|s| e.get(s) as usize * strides[s]).sum() };
        let a: Vec<(usize, i128)> = a.iter().map(|&(e, c)| (index(e), c)).collect();
        let b: Vec<(usize, i128)> = b.iter().map(|&(e, c)| (index(e), c)).collect();
        let mut acc = vec![0i128; cells];
        for &(ib, cb) in &b {
            for &(ia, ca) in &a {
                acc[ia + ib] += ca * cb;
            }
        }
        let terms = acc
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(mut k, &c)| {
                let mut exps = [0u8; MAX_POLY_VARS];
                for s in 0..MAX_POLY_VARS {
                    exps[s] = (k % dims[s]) as u8;
                    k /= dims[s];
                }
                (Exponents::from_slice(&exps), BigInt::from(c))
            })
            .collect();
        IntPolynomial {
            nvars: self.nvars,
            terms,
        }
    }

    /// Homogeneous component of total degree `i`.
    pub fn pol_part(&self, i: usize) -> Self {
        IntPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == i)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    /// Reduction modulo 2.
    pub fn mod2(&self) -> Mod2Polynomial {
        Mod2Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.bit(0))
                .map(|(&e, _)| e)
                .collect(),
        }
    }

    fn sorted_terms(&self) -> Vec<(Exponents, &BigInt)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|(e, _)| term_order(e));
        v
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.sign() == num_bigint::Sign::Minus;
            let abs = c.magnitude();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e == Exponents::ZERO {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                render_term(f, e, self.nvars)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial in `x1..x_nvars` over `F2`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mod2Polynomial {
    nvars: usize,
    terms: HashSet<Exponents>,
}

impl Mod2Polynomial {
    pub fn zero(nvars: usize) -> Result<Self> {
        check_nvars(nvars)?;
        Ok(Mod2Polynomial {
            nvars,
            terms: HashSet::new(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, exps: &[u8]) -> bool {
        self.terms.contains(&Exponents::from_slice(exps))
    }

    pub fn terms(&self) -> impl Iterator<Item = Exponents> + '_ {
        self.terms.iter().copied()
    }

    fn toggle(&mut self, e: Exponents) {
        if !self.terms.insert(e) {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::AmbientMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut out = self.clone();
        for &e in &other.terms {
            out.toggle(e);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::AmbientMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut out = Mod2Polynomial::zero(self.nvars)?;
        for &a in &self.terms {
            for &b in &other.terms {
                out.toggle(a.add(b));
            }
        }
        Ok(out)
    }

    /// `f^(2^k)`, computed as `f(x^(2^k))`.
    pub fn frobenius(&self, k: u32) -> Self {
        let factor = 1u8 << k;
        Mod2Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|e| e.scaled(factor)).collect(),
        }
    }

    pub fn pol_part(&self, i: usize) -> Self {
        Mod2Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|e| e.degree() == i).copied().collect(),
        }
    }
}

impl fmt::Display for Mod2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(term_order);
        for (k, e) in v.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if e == Exponents::ZERO {
                write!(f, "1")?;
            } else {
                render_term(f, e, self.nvars)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Mod2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_phi_n(n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::PolyIndexOutOfRange { n, max })
    } else {
        Ok(())
    }
}

/// `Phi_n(x0; x1, .., xn)` with `x0` a polynomial in at least `n` variables.
pub fn phi(n: usize, x0: &IntPolynomial) -> Result<IntPolynomial> {
    check_phi_n(n, MAX_PHI_N)?;
    let nv = x0.nvars();
    if n > nv {
        return Err(Error::PolyTooManyVariables { nvars: n, max: nv });
    }
    let vars: Vec<IntPolynomial> = (1..=n)
        .map(|i| IntPolynomial::var(nv, i))
        .collect::<Result<_>>()?;
    let mut acc = IntPolynomial::one(nv)?;
    for set in VarSet::full(n).subsets() {
        let factor = set
            .iter()
            .try_fold(x0.clone(), |f, i| f.add(&vars[i - 1]))?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// `p_n(x1..xn) = Phi_n(1; x1..xn)`.
pub fn build_p(n: usize) -> Result<IntPolynomial> {
    check_phi_n(n, MAX_PHI_N)?;
    phi(n, &IntPolynomial::one(n)?)
}

/// `q_n(x1..xn; x_{n+1}) = Phi_n(1 + x_{n+1}; x1..xn)`.
pub fn build_q(n: usize) -> Result<IntPolynomial> {
    check_phi_n(n, MAX_PHI_N)?;
    let x0 = IntPolynomial::one(n + 1)?.add(&IntPolynomial::var(n + 1, n + 1)?)?;
    phi(n, &x0)
}

/// Homogeneous degree-`i` part.
pub fn pol_part(f: &IntPolynomial, i: usize) -> IntPolynomial {
    f.pol_part(i)
}

/// `xi -> ai` into the ring with `ambient` variables; `xi^e` maps to
/// `e^(e-1) ai`.
pub fn ring_image(f: &Mod2Polynomial, ambient: usize) -> Result<RingElement> {
    let mut monomials = Vec::with_capacity(f.len());
    for e in f.terms() {
        let mut vars = VarSet::EMPTY;
        let mut eps = 0u32;
        for s in 0..MAX_POLY_VARS {
            let k = e.get(s);
            if k == 0 {
                continue;
            }
            if s >= ambient {
                return Err(Error::StrayVariable { slot: s + 1, ambient });
            }
            vars = vars.union(VarSet::singleton(s + 1));
            eps += k as u32 - 1;
        }
        monomials.push(Monomial::new(vars, eps, false).expect("no tau"));
    }
    Ok(RingElement::from_monomials(ambient, monomials))
}

/// Images of `pol_i(p_n)` in the ring with `n` variables, `i = 0..2^n - 1`.
pub fn sigma_images(n: usize) -> Result<Vec<RingElement>> {
    let p = build_p(n)?.mod2();
    (0..1usize << n)
        .map(|i| ring_image(&p.pol_part(i), n))
        .collect()
}

/// `sum_{i=1..n} e^(2^(n-1) - i) s_i(a1..an)`.
pub fn middle_class_formula(n: usize) -> RingElement {
    let mut out = RingElement::zero(n);
    if n == 0 {
        return out;
    }
    let half = 1u32 << (n - 1);
    for set in VarSet::full(n).subsets().filter(|s| !s.is_empty()) {
        let i = set.len() as u32;
        out += &RingElement::monomial(n, Monomial::new(set, half - i, false).expect("no tau"));
    }
    out
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub n: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(IdentityCheck {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

fn linear_mod2(nvars: usize, slots: impl IntoIterator<Item = usize>) -> Result<Mod2Polynomial> {
    let mut f = Mod2Polynomial::zero(nvars)?;
    for s in slots {
        f.toggle(Exponents::single(s - 1, 1));
    }
    Ok(f)
}

fn ring_linear(ambient: usize, vars: VarSet) -> RingElement {
    RingElement::from_monomials(
        ambient,
        vars.iter()
            .map(|i| Monomial::new(VarSet::singleton(i), 0, false).unwrap()),
    )
}

/// Image of `Phi_k(x_{k+1}; x1..xk)` in the ring with `ambient` variables,
/// computed factor by factor in the ring.
fn phi_shift_in_ring(k: usize, ambient: usize) -> RingElement {
    VarSet::full(k).subsets().fold(RingElement::one(ambient), |acc, set| {
        &acc * &ring_linear(ambient, set.union(VarSet::singleton(k + 1)))
    })
}

/// Checks every polynomial identity behind the middle-degree formula for
/// `p_n`, each by exact expansion. Identities whose polynomials grow too
/// large are checked only for `n <= 4`.
pub fn verify_identities(n: usize) -> Result<IdentityReport> {
    check_phi_n(n, MAX_IDENTITY_N)?;
    let mut report = IdentityReport { n, checks: Vec::new() };
    let p = build_p(n)?;
    let p2 = p.mod2();
    let half = if n == 0 { 0 } else { 1usize << (n - 1) };

    // Phi_n(y + z) = Phi_n(y) + Phi_n(z) over F2
    if n <= 4 {
        let nv = n + 2;
        let y = IntPolynomial::var(nv, n + 1)?;
        let z = IntPolynomial::var(nv, n + 2)?;
        let lhs = phi(n, &y.add(&z)?)?.mod2();
        let rhs = phi(n, &y)?.mod2().add(&phi(n, &z)?.mod2())?;
        let diff = lhs.add(&rhs)?;
        report.record(
            "additivity in x0 mod 2",
            diff.is_zero(),
            format!("{} differing terms", diff.len()),
        );
    }

    let q = if n <= 4 { Some(build_q(n)?) } else { None };

    // pol_i(p_n) = pol_i(q_n) mod 2 for i < 2^n
    if let Some(q) = &q {
        let q2 = q.mod2();
        let p2w = p2.clone();
        let p2w = Mod2Polynomial {
            nvars: n + 1,
            terms: p2w.terms,
        };
        let bad: Vec<usize> = (0..1usize << n)
            .filter(|&i| p2w.pol_part(i) != q2.pol_part(i))
            .collect();
        report.record(
            "p and q agree below degree 2^n mod 2",
            bad.is_empty(),
            format!("mismatched degrees {bad:?}"),
        );

        // pol_{2^n}(q_n) = Phi_n(x_{n+1}) over the integers
        let top = q.pol_part(1 << n);
        let shifted = phi(n, &IntPolynomial::var(n + 1, n + 1)?)?;
        report.record(
            "top part of q is Phi(x_{n+1})",
            top == shifted,
            format!("{} vs {} terms", top.len(), shifted.len()),
        );
    }

    // exact recursion p_n = p_{n-1} q_{n-1}
    if n >= 1 {
        let rec = build_p(n - 1)?.with_nvars(n)?.mul(&build_q(n - 1)?)?;
        report.record(
            "p_n = p_{n-1} q_{n-1}",
            rec == p,
            format!("{} vs {} terms", rec.len(), p.len()),
        );
    }
    let deg = p.degree();
    report.record(
        "deg p_n = 2^n - 1",
        deg == Some((1 << n) - 1),
        format!("degree {deg:?}"),
    );

    // low degrees vanish mod 2
    let nonzero: Vec<usize> = (1..half).filter(|&i| !p2.pol_part(i).is_zero()).collect();
    report.record(
        "pol_i(p_n) = 0 mod 2 for 0 < i < 2^(n-1)",
        nonzero.is_empty(),
        format!("nonzero degrees {nonzero:?}"),
    );

    if n >= 2 {
        // pol_{2^(n-1)}(p_n) = pol_{2^(n-2)}(p_{n-1})^2 + pol_{2^(n-1)}(q_{n-1}) mod 2
        let prev = build_p(n - 1)?.with_nvars(n)?.mod2().pol_part(half / 2);
        let qprev = build_q(n - 1)?.mod2().pol_part(half);
        let rhs = prev.frobenius(1).add(&qprev)?;
        let diff = p2.pol_part(half).add(&rhs)?;
        report.record(
            "middle part recursion mod 2",
            diff.is_zero(),
            format!("{} differing terms", diff.len()),
        );
    }

    if n >= 1 {
        // pol_{2^(n-1)}(p_n) = sum_i Phi_i(x_{i+1})^(2^(n-1-i)) mod 2
        let mut sum = Mod2Polynomial::zero(n)?;
        for i in 0..n {
            let phi_i = phi(i, &IntPolynomial::var(n, i + 1)?)?.mod2();
            sum = sum.add(&phi_i.frobenius((n - 1 - i) as u32))?;
        }
        let diff = p2.pol_part(half).add(&sum)?;
        report.record(
            "middle part as sum of Frobenius twists",
            diff.is_zero(),
            format!("{} differing terms", diff.len()),
        );

        // image of Phi_i(x_{i+1})^(2^(n-1-i)) is e^(2^(n-1) - 2^i) Phi_i(x_{i+1})
        let mut bad = Vec::new();
        for i in 0..n {
            let phi_i = phi(i, &IntPolynomial::var(n, i + 1)?)?.mod2();
            let lhs = ring_image(&phi_i.frobenius((n - 1 - i) as u32), n)?;
            let rhs = &RingElement::eps_pow(n, (half - (1 << i)) as u32) * &ring_image(&phi_i, n)?;
            if lhs != rhs {
                bad.push(i);
            }
        }
        report.record(
            "Frobenius twist in the ring",
            bad.is_empty(),
            format!("failing i {bad:?}"),
        );

        // (xn + x_{n+1} + S)(x_{n+1} + S) = (an + e)(a_{n+1} + S) in the ring
        let m = n + 1;
        let mut bad = Vec::new();
        for set in VarSet::full(n - 1).subsets() {
            let with_new = set.union(VarSet::singleton(m));
            let lhs_poly = linear_mod2(m, with_new.union(VarSet::singleton(n)).iter())?
                .mul(&linear_mod2(m, with_new.iter())?)?;
            let lhs = ring_image(&lhs_poly, m)?;
            let rhs = &(&RingElement::var(m, n) + &RingElement::eps(m)) * &ring_linear(m, with_new);
            if lhs != rhs {
                bad.push(set);
            }
        }
        report.record(
            "two-factor product in the ring",
            bad.is_empty(),
            format!("failing subsets {bad:?}"),
        );

        // Phi_n(x_{n+1}) = prod_i (ai + e)^(2^(i-1)) a_{n+1} in the ring
        let lhs = phi_shift_in_ring(n, m);
        let rhs = (1..=n).fold(RingElement::var(m, m), |acc, i| {
            &acc * &(&RingElement::var(m, i) + &RingElement::eps(m)).pow(1 << (i - 1))
        });
        report.record(
            "Phi(x_{n+1}) as product of shifted variables",
            lhs == rhs,
            format!("lhs {} terms, rhs {} terms", lhs.len(), rhs.len()),
        );

        // prod_i (ai + e)^(2^(i-1)) = e^(2^n - 1 - n) prod_i (ai + e)
        let lhs = (1..=n).fold(RingElement::one(n), |acc, i| {
            &acc * &(&RingElement::var(n, i) + &RingElement::eps(n)).pow(1 << (i - 1))
        });
        let rhs = (1..=n).fold(RingElement::eps_pow(n, ((1 << n) - 1 - n) as u32), |acc, i| {
            &acc * &(&RingElement::var(n, i) + &RingElement::eps(n))
        });
        report.record(
            "powers of shifted variables",
            lhs == rhs,
            format!("lhs {lhs}, rhs {rhs}"),
        );

        // final ring equality
        let image = ring_image(&p2.pol_part(half), n)?;
        let expected = middle_class_formula(n);
        report.record(
            "image of the middle part of p_n",
            image == expected,
            format!("image {image}"),
        );
    }
    Ok(report)
}

use proptest::prelude::*;
use theta_sw_core::etale::EtaleAlgebra;
use theta_sw_core::polyrec::{self, IntPolynomial};
use theta_sw_core::quadform::{self, field_gsw, sw_classes, trace_form};
use theta_sw_core::symbols::{self, class_symbol, residue, substitute};
use theta_sw_core::theta::{self, field_of_definition, orbit};
use theta_sw_core::{
    AlphaClass, DiagonalForm, GaloisAction, GswConvention, Monomial, MultiquadraticField,
    ParityFilter, RingElement, SquareClass, Substitution, ThetaChar, VarSet,
};

const N: usize = 4;

fn arb_monomial(n: usize) -> impl Strategy<Value = Option<Monomial>> {
    (0u64..1 << n, 0u32..4, prop::bool::weighted(0.2))
        .prop_map(|(bits, eps, tau)| Monomial::new(VarSet::from_bits(bits), eps, tau))
}

fn arb_element(n: usize) -> impl Strategy<Value = RingElement> {
    prop::collection::vec(arb_monomial(n), 0..8)
        .prop_map(move |ms| RingElement::from_monomials(n, ms.into_iter().flatten()))
}

fn arb_tau_free(n: usize) -> impl Strategy<Value = RingElement> {
    arb_element(n).prop_map(|x| x.without_tau())
}

fn arb_class(n: usize) -> impl Strategy<Value = SquareClass> {
    (any::<bool>(), any::<bool>(), 0u64..1 << n)
        .prop_map(|(sign, two, bits)| SquareClass::new(sign, two, VarSet::from_bits(bits)))
}

fn arb_form(n: usize, max_rank: usize) -> impl Strategy<Value = DiagonalForm> {
    prop::collection::vec(arb_class(n), 1..=max_rank)
        .prop_map(move |cs| DiagonalForm::new(n, cs).unwrap())
}

fn arb_theta() -> impl Strategy<Value = ThetaChar> {
    (2usize..=6).prop_flat_map(|g| {
        (Just(g), 0u32..1 << (2 * g + 2)).prop_map(|(g, m)| {
            let t: Vec<usize> = (1..=2 * g + 2).filter(|i| m >> (i - 1) & 1 == 1).collect();
            ThetaChar::new(g, &t).unwrap()
        })
    })
}

/// Independent oracle: `sigma_i` as an explicit sum over i-subsets.
fn sigma_oracle(q: &DiagonalForm, i: usize) -> RingElement {
    let n = q.ambient();
    let r = q.rank();
    let mut out = RingElement::zero(n);
    for mask in 0u32..1 << r {
        if mask.count_ones() as usize != i {
            continue;
        }
        let term = (0..r)
            .filter(|j| mask >> j & 1 == 1)
            .fold(RingElement::one(n), |acc, j| &acc * &class_symbol(q.coeffs()[j], n));
        out += &term;
    }
    out
}

fn convolve(a: &[RingElement], b: &[RingElement], max_i: usize) -> Vec<RingElement> {
    let n = a[0].ambient();
    (0..=max_i)
        .map(|i| {
            (0..=i).fold(RingElement::zero(n), |acc, j| {
                match (a.get(j), b.get(i - j)) {
                    (Some(x), Some(y)) => &acc + &(x * y),
                    _ => acc,
                }
            })
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(x in arb_element(N), y in arb_element(N), z in arb_element(N)) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &RingElement::one(N), x.clone());
        prop_assert!((&x + &x).is_zero());
        prop_assert_eq!(x.square(), &x * &x);
    }

    #[test]
    fn reduction_is_order_independent(
        factors in prop::collection::vec(0usize..=N + 2, 0..7),
        rotate in 0usize..7,
    ) {
        // 0 -> e, N+1 -> t, N+2 -> a1 again, others -> a_i
        let name = |f: usize| match f {
            0 => "e".to_string(),
            f if f == N + 1 => "t".to_string(),
            f if f == N + 2 => "a1".to_string(),
            f => format!("a{f}"),
        };
        let elem = |f: usize| RingElement::parse(N, &name(f)).unwrap();
        let mut order = factors.clone();
        if !order.is_empty() {
            let k = rotate % order.len();
            order.rotate_left(k);
        }
        let left = factors.iter().fold(RingElement::one(N), |acc, &f| &acc * &elem(f));
        let right = order.iter().rev().fold(RingElement::one(N), |acc, &f| &elem(f) * &acc);
        prop_assert_eq!(&left, &right);
        let text: Vec<String> = order.iter().map(|&f| name(f)).collect();
        let parsed = if text.is_empty() { RingElement::one(N) } else { RingElement::parse(N, &text.join(" ")).unwrap() };
        prop_assert_eq!(&parsed, &left);
        prop_assert_eq!(RingElement::parse(N, &left.to_string()).unwrap(), left);
    }

    #[test]
    fn eps_is_injective_on_tau_free_part(x in arb_tau_free(N), y in arb_tau_free(N)) {
        let e = RingElement::eps(N);
        prop_assert_eq!((&e * &x) == (&e * &y), x == y);
    }

    #[test]
    fn residues_commute(x in arb_element(N), i in 1usize..=N, j in 1usize..=N) {
        let a = residue(&residue(&x, i).unwrap(), j).unwrap();
        let b = residue(&residue(&x, j).unwrap(), i).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn substitution_is_a_ring_map(
        x in arb_element(N),
        y in arb_element(N),
        images in prop::collection::vec(arb_class(3), N),
    ) {
        let mut sub = Substitution::new(3);
        for (i, &c) in images.iter().enumerate() {
            sub.set(i + 1, c);
        }
        let f = |v: &RingElement| substitute(v, &sub).unwrap();
        prop_assert_eq!(f(&(&x * &y)), &f(&x) * &f(&y));
        prop_assert_eq!(f(&(&x + &y)), &f(&x) + &f(&y));
        prop_assert!(f(&RingElement::one(N)).is_one());
    }

    #[test]
    fn symbols_are_multiplicative_in_each_slot(c in arb_class(N), d in arb_class(N)) {
        prop_assert_eq!(class_symbol(c * d, N), &class_symbol(c, N) + &class_symbol(d, N));
        // {c, -c} = 0
        prop_assert!(symbols::symbol(&[c, c.negated()], N).is_zero());
    }

    #[test]
    fn sw_matches_subset_oracle(q in arb_form(3, 10), max_i in 0usize..=5) {
        let max_i = max_i.min(q.rank());
        let sw = sw_classes(&q, max_i).unwrap();
        for (i, w) in sw.iter().enumerate() {
            prop_assert_eq!(w, &sigma_oracle(&q, i));
        }
    }

    #[test]
    fn trivial_classes_do_not_change_sw(q in arb_form(3, 6), pad in 1usize..4) {
        let padded = q.orthogonal_sum(&DiagonalForm::new(3, vec![SquareClass::ONE; pad]).unwrap()).unwrap();
        let r = q.rank();
        let mut a = sw_classes(&padded, r + pad).unwrap();
        let b = sw_classes(&q, r).unwrap();
        prop_assert!(a[r + 1..].iter().all(RingElement::is_zero));
        a.truncate(r + 1);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn whitney_sum_formula(q in arb_form(3, 5), r in arb_form(3, 5)) {
        let s = q.orthogonal_sum(&r).unwrap();
        let max_i = s.rank();
        let lhs = sw_classes(&s, max_i).unwrap();
        let rhs = convolve(&sw_classes(&q, q.rank()).unwrap(), &sw_classes(&r, r.rank()).unwrap(), max_i);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conventions_agree_without_two(
        bits in prop::collection::vec(0u64..1 << N, 1..8),
    ) {
        let q = DiagonalForm::new(N, bits.into_iter().map(|b| SquareClass::vars(VarSet::from_bits(b))).collect()).unwrap();
        let sw = sw_classes(&q, q.rank()).unwrap();
        let even = quadform::gsw_from_sw(&sw, GswConvention::EvenTwisted).unwrap();
        let odd = quadform::gsw_from_sw(&sw, GswConvention::OddTwisted).unwrap();
        for (a, b) in even.iter().zip(&odd) {
            prop_assert_eq!(a.without_tau(), b.without_tau());
        }
    }

    #[test]
    fn etale_classes_are_multiplicative(
        fields in prop::collection::vec((0u64..1 << 3, 1u64..3), 1..4),
    ) {
        // factorwise product against the single concatenated trace form
        let n = 3;
        let mut algebra = EtaleAlgebra::empty(n);
        let mut coeffs = Vec::new();
        for &(bits, m) in &fields {
            let f = MultiquadraticField::untwisted(n, VarSet::from_bits(bits)).unwrap();
            for _ in 0..m {
                coeffs.extend_from_slice(trace_form(&f).coeffs());
            }
            algebra.push(f, m).unwrap();
        }
        prop_assume!(algebra.degree() <= 16);
        let d = algebra.degree() as usize;
        let total = DiagonalForm::new(n, coeffs).unwrap();
        let direct = quadform::gsw_from_sw(&sw_classes(&total, d).unwrap(), GswConvention::EvenTwisted).unwrap();
        let factorwise = algebra.alpha_total(Some(d), GswConvention::EvenTwisted);
        prop_assert_eq!(factorwise, direct);
    }

    #[test]
    fn canonical_forms_are_stable(t in arb_theta()) {
        let g = t.genus();
        prop_assert_eq!(ThetaChar::new(g, &t.indices()).unwrap(), t);
        prop_assert!(t.len() <= g + 1);
        prop_assert_eq!(t.len() % 2, (g + 1) % 2);
        let all: Vec<usize> = (1..=2 * g + 2).collect();
        let comp: Vec<usize> = all.iter().copied().filter(|&i| !t.contains(i)).collect();
        prop_assert_eq!(ThetaChar::new(g, &comp).unwrap(), t);
    }

    #[test]
    fn field_of_definition_is_constant_on_orbits(t in arb_theta()) {
        let act = GaloisAction::standard(t.genus()).unwrap();
        let a = field_of_definition(&t, &act).unwrap();
        let o = orbit(&t, &act).unwrap();
        prop_assert_eq!(o.len(), 1 << a.len());
        for u in &o {
            prop_assert_eq!(field_of_definition(u, &act).unwrap(), a);
        }
    }

    #[test]
    fn translation_permutes_theta_characteristics(g in 2usize..=5, seed in any::<u32>()) {
        let alphas = AlphaClass::all(g).unwrap();
        let alpha = alphas[seed as usize % alphas.len()];
        let all = theta::enumerate(g, ParityFilter::All).unwrap();
        let image: std::collections::BTreeSet<ThetaChar> =
            all.iter().map(|t| t.translate(&alpha).unwrap()).collect();
        prop_assert_eq!(image, all);
    }

    #[test]
    fn phi_is_additive_mod_two(
        n in 0usize..=3,
        cy in prop::collection::vec(-3i64..4, 5),
        cz in prop::collection::vec(-3i64..4, 5),
    ) {
        let nv = n + 1;
        let lin = |c: &[i64]| {
            IntPolynomial::from_terms(
                nv,
                (0..=nv).map(|s| {
                    let mut e = vec![0u8; nv];
                    if s > 0 { e[s - 1] = 1; }
                    (c[s], e)
                }),
            ).unwrap()
        };
        let (y, z) = (lin(&cy), lin(&cz));
        let lhs = polyrec::phi(n, &y.add(&z).unwrap()).unwrap().mod2();
        let rhs = polyrec::phi(n, &y).unwrap().mod2().add(&polyrec::phi(n, &z).unwrap().mod2()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ring_image_is_multiplicative(
        a in prop::collection::vec((1i64..3, prop::collection::vec(0u8..4, 3)), 0..5),
        b in prop::collection::vec((1i64..3, prop::collection::vec(0u8..4, 3)), 0..5),
    ) {
        let f = IntPolynomial::from_terms(3, a).unwrap();
        let g = IntPolynomial::from_terms(3, b).unwrap();
        let img = |p: &IntPolynomial| polyrec::ring_image(&p.mod2(), 3).unwrap();
        prop_assert_eq!(img(&f.mul(&g).unwrap()), &img(&f) * &img(&g));
    }
}

#[test]
fn sw_of_multiquadratic_trace_forms_follow_the_parity_table() {
    // SW of E_n: sigma_i + t sigma_{i-1} when n is odd and i even
    for n in 1..=4 {
        let e = MultiquadraticField::untwisted(n, VarSet::full(n)).unwrap();
        let q = trace_form(&e);
        let sw = sw_classes(&q, q.rank()).unwrap();
        let classes: Vec<SquareClass> = VarSet::full(n)
            .subsets()
            .filter(|s| !s.is_empty())
            .map(SquareClass::vars)
            .collect();
        let plain = DiagonalForm::new(n, classes).unwrap();
        let sigma: Vec<RingElement> = (0..=q.rank())
            .map(|i| if i <= plain.rank() { sigma_oracle(&plain, i) } else { RingElement::zero(n) })
            .collect();
        for i in 0..=q.rank() {
            let mut expected = sigma[i].clone();
            if n % 2 == 1 && i % 2 == 0 && i > 0 {
                expected += &(&RingElement::tau(n) * &sigma[i - 1]);
            }
            assert_eq!(sw[i], expected, "n = {n}, i = {i}");
        }
    }
}

#[test]
fn multiquadratic_classes_vanish_below_half_degree() {
    for k in 1..=5 {
        let a = VarSet::full(k);
        let e = MultiquadraticField::untwisted(k, a).unwrap();
        let half = 1usize << (k - 1);
        let alpha = field_gsw(&e, half, GswConvention::EvenTwisted);
        assert!(alpha[0].is_one());
        assert!(alpha[1..half].iter().all(RingElement::is_zero), "k = {k}");
        let (min, part) = alpha[half].min_eps_part(half).unwrap();
        assert_eq!(min as usize, half - k);
        assert_eq!(part, RingElement::monomial(k, Monomial::new(a, min, false).unwrap()));
    }
}

#[test]
fn theta_counts_match_direct_enumeration() {
    // oracle: alpha classes S in {1..2g+1}, |S| <= g, lifted to T by parity
    for g in 2..=7 {
        let n = 2 * g + 2;
        let (mut odd, mut even) = (0usize, 0usize);
        for s in 0u32..1 << (n - 1) {
            let len = s.count_ones() as usize;
            if len > g {
                continue;
            }
            let m = if len % 2 == (g + 1) % 2 { len } else { len + 1 };
            if m % 4 == (g + 1) % 4 {
                even += 1;
            } else {
                odd += 1;
            }
        }
        assert_eq!(theta::enumerate(g, ParityFilter::Odd).unwrap().len(), odd);
        assert_eq!(theta::enumerate(g, ParityFilter::Even).unwrap().len(), even);
        assert_eq!(odd, (1 << (g - 1)) * ((1 << g) - 1));
        assert_eq!(even, (1 << (g - 1)) * ((1 << g) + 1));
    }
}

#[test]
fn both_representatives_give_the_same_field() {
    for g in 2..=5 {
        let act = GaloisAction::standard(g).unwrap();
        for t in theta::enumerate(g, ParityFilter::All).unwrap() {
            if t.len() != g + 1 {
                continue;
            }
            let comp: Vec<usize> = (1..=2 * g + 2).filter(|&i| !t.contains(i)).collect();
            let a = field_of_definition(&t, &act).unwrap();
            let b = VarSet::from_indices(
                act.pairs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &(x, y))| comp.contains(&x) != comp.contains(&y))
                    .map(|(j, _)| j + 1),
            );
            assert_eq!(a, b);
        }
    }
}

#[test]
fn theta_algebras_have_full_degree() {
    for g in 2..=4 {
        let act = GaloisAction::standard(g).unwrap();
        let odd = theta::decompose(g, ParityFilter::Odd, &act).unwrap();
        let even = theta::decompose(g, ParityFilter::Even, &act).unwrap();
        let all = theta::decompose(g, ParityFilter::All, &act).unwrap();
        assert_eq!(odd.product(&even).unwrap(), all);
        assert_eq!(all.degree(), 1 << (2 * g));
        if (3..=4).contains(&g) {
            let d = 1 << (g - 1);
            let lhs = all.alpha_total(Some(d), GswConvention::EvenTwisted);
            let a = odd.alpha_total(Some(d), GswConvention::EvenTwisted);
            let b = even.alpha_total(Some(d), GswConvention::EvenTwisted);
            let total = |v: &[RingElement]| v.iter().fold(RingElement::zero(g), |acc, x| &acc + x);
            assert_eq!(total(&lhs), (&total(&a) * &total(&b)).truncate(d));
        }
    }
}

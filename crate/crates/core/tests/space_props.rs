use diffeolin::hom::diffeological_dual;
use diffeolin::parse::parse_components;
use diffeolin::sample;
use diffeolin::space::{combine, MembershipConfig};
use diffeolin::{rat, DiffSpace, FunctionExpr, Membership, Plot};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn plot(text: &str) -> Plot {
    Plot::new(parse_components(text).unwrap())
}

fn generated(seed: u64, n: usize, k: usize) -> (ChaCha8Rng, Vec<Plot>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = (0..k).map(|_| sample::kink_generator(&mut rng, n)).collect();
    (rng, gens)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn span_invariant_under_generator_edits(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=3, c in 1i64..=9) {
        let (mut rng, mut gens) = generated(seed, n, k);
        let base = DiffSpace::generated(n, gens.clone()).unwrap().singular_span().unwrap();

        let scaled: Vec<Plot> = gens.iter().map(|g| g.scale_by(&FunctionExpr::constant(rat(-c)))).collect();
        prop_assert_eq!(&DiffSpace::generated(n, scaled).unwrap().singular_span().unwrap(), &base);

        let s = sample::smooth_plot(&mut rng, n, 3);
        let mut shifted = gens.clone();
        shifted[0] = shifted[0].add(&s).unwrap();
        prop_assert_eq!(&DiffSpace::generated(n, shifted).unwrap().singular_span().unwrap(), &base);

        gens.reverse();
        prop_assert_eq!(&DiffSpace::generated(n, gens).unwrap().singular_span().unwrap(), &base);
    }

    #[test]
    fn generators_and_their_combinations_are_plots(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=3) {
        let (mut rng, gens) = generated(seed, n, k);
        let v = DiffSpace::generated(n, gens.clone()).unwrap();
        for g in &gens {
            prop_assert_eq!(v.is_plot(g).unwrap(), Membership::Plot);
            let lambda = sample::polynomial(&mut rng, 3);
            let c = sample::coefficient(&mut rng);
            let s = sample::smooth_plot(&mut rng, n, 4);
            let p = combine(g, &lambda, &c, &s).unwrap();
            prop_assert_eq!(v.is_plot(&p).unwrap(), Membership::Plot, "{}", p);
        }
        let sum = gens.iter().skip(1).fold(gens[0].clone(), |acc, g| acc.add(g).unwrap());
        prop_assert_eq!(v.is_plot(&sum).unwrap(), Membership::Plot);
    }

    #[test]
    fn monotone_in_generators(seed in any::<u64>(), n in 1usize..=4) {
        let (_, gens) = generated(seed, n, 3);
        let v1 = DiffSpace::generated(n, gens[..1].to_vec()).unwrap();
        let v2 = DiffSpace::generated(n, gens).unwrap();
        prop_assert!(v1.singular_span().unwrap().is_subspace_of(&v2.singular_span().unwrap()));
    }

    #[test]
    fn sum_span_dimension_adds(a in any::<u64>(), b in any::<u64>()) {
        let v = sample::space(&mut ChaCha8Rng::seed_from_u64(a), 3);
        let w = sample::space(&mut ChaCha8Rng::seed_from_u64(b), 3);
        let s = v.direct_sum(&w).unwrap();
        prop_assert_eq!(
            s.singular_span().unwrap().dim(),
            v.singular_span().unwrap().dim() + w.singular_span().unwrap().dim()
        );
    }

    #[test]
    fn dual_dimension_formula(seed in any::<u64>()) {
        let v = sample::space(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let s = v.singular_span().unwrap().dim();
        prop_assert!(s <= v.dim());
        prop_assert_eq!(diffeological_dual(&v).unwrap().dim(), v.dim() - s);
    }

    #[test]
    fn not_plot_certificates_separate(seed in any::<u64>(), n in 2usize..=4) {
        let (mut rng, gens) = generated(seed, n, 1);
        let v = DiffSpace::generated(n, gens).unwrap();
        let c = sample::any_plot(&mut rng, n);
        if let Membership::NotPlot(cert) = v.is_plot(&c).unwrap() {
            // The certificate kills every available direction at its degree
            // but not the residue of the candidate there.
            let level = v.singular_level(cert.degree).unwrap();
            for b in level.basis_vectors() {
                prop_assert_eq!(diffeolin::linalg::dot(&cert.functional, &b), rat(0));
            }
            let row = c.residue_rows().into_iter().find(|(d, _)| *d == cert.degree).unwrap().1;
            prop_assert_ne!(diffeolin::linalg::dot(&cert.functional, &row), rat(0));
        }
    }
}

#[test]
fn constructor_examples() {
    let v = DiffSpace::generated(3, vec![plot("abs(x), 0, 0")]).unwrap();
    assert_eq!(v.singular_span().unwrap().dim(), 1);
    assert_eq!(DiffSpace::fine(4).unwrap().singular_span().unwrap().dim(), 0);
    assert_eq!(DiffSpace::coarse(2).unwrap().singular_span().unwrap().dim(), 2);
    assert!(DiffSpace::generated(2, vec![plot("abs(x)")]).is_err());
    assert!(DiffSpace::fine(0).is_err());
    let smooth_only = DiffSpace::generated(2, vec![plot("x, x^2")]).unwrap();
    assert_eq!(smooth_only.singular_span().unwrap().dim(), 0);
}

#[test]
fn singular_span_examples() {
    let v = DiffSpace::generated(4, vec![plot("abs(x), 0, 0, 0"), plot("0, abs(x), 0, 0")]).unwrap();
    let s = v.singular_span().unwrap();
    assert_eq!(s.dim(), 2);
    assert!(s.contains(&[rat(1), rat(0), rat(0), rat(0)]) && s.contains(&[rat(0), rat(1), rat(0), rat(0)]));

    let v = DiffSpace::generated(2, vec![plot("abs(x) + x^2, abs(x)")]).unwrap();
    assert_eq!(v.singular_span().unwrap().basis_vectors(), vec![vec![rat(1), rat(1)]]);

    let v = DiffSpace::coarse(1).unwrap().direct_sum(&DiffSpace::fine(1).unwrap()).unwrap();
    assert_eq!(v.singular_span().unwrap().basis_vectors(), vec![vec![rat(1), rat(0)]]);
}

#[test]
fn membership_examples() {
    let c = DiffSpace::coarse(2).unwrap();
    assert_eq!(c.is_plot(&plot("abs(x)*x^3 - 7, abs(x)")).unwrap(), Membership::Plot);

    let g = DiffSpace::generated(2, vec![plot("abs(x), 0")]).unwrap();
    let candidate = plot("x*abs(x), 0");
    assert_eq!(g.is_plot(&candidate).unwrap(), Membership::Plot);
    // Multiplier λ(x) = x leaves a smooth remainder.
    let rest = candidate
        .add(&plot("abs(x), 0").scale_by(&FunctionExpr::x_pow(1)).scale_by(&FunctionExpr::constant(rat(-1))))
        .unwrap();
    assert!(rest.is_smooth());

    assert!(matches!(DiffSpace::fine(2).unwrap().is_plot(&plot("abs(x), x")).unwrap(), Membership::NotPlot(_)));
    assert!(DiffSpace::fine(2).unwrap().is_plot(&plot("abs(x)")).is_err());
}

#[test]
fn direct_sum_examples() {
    let f = |n| DiffSpace::fine(n).unwrap();
    assert_eq!(f(2).direct_sum(&f(3)).unwrap().singular_span().unwrap().dim(), 0);
    let g = DiffSpace::generated(2, vec![plot("abs(x), 0")]).unwrap();
    let s = g.direct_sum(&g).unwrap().singular_span().unwrap();
    assert_eq!(s.basis_vectors(), vec![vec![rat(1), rat(0), rat(0), rat(0)], vec![rat(0), rat(0), rat(1), rat(0)]]);
}

#[test]
fn slack_bound_from_environment_and_fixed() {
    let g = DiffSpace::generated(1, vec![plot("abs(x)")]).unwrap();
    let far = plot("abs(x)*x^20");
    assert_eq!(g.is_plot(&far).unwrap(), Membership::Plot);
    assert!(matches!(g.is_plot_with(&far, &MembershipConfig::fixed(4)).unwrap(), Membership::Unknown { .. }));
    // Unknown is only ever produced where the default would answer.
    assert_eq!(g.is_plot_with(&plot("abs(x)*x^3"), &MembershipConfig::fixed(4)).unwrap(), Membership::Plot);
}

use diffeolin::hom::{
    diffeological_dual, dual_map, is_smooth_linear, self_duality, smooth_hom_basis, unflatten, Witness,
};
use diffeolin::parse::parse_components;
use diffeolin::sample;
use diffeolin::{DiffSpace, LinearMap, Matrix, Membership, Plot, Verdict};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plot(text: &str) -> Plot {
    Plot::new(parse_components(text).unwrap())
}

fn fine_or_coarse(rng: &mut ChaCha8Rng) -> DiffSpace {
    let n = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) { DiffSpace::fine(n) } else { DiffSpace::coarse(n) }.unwrap()
}

fn map(v: &DiffSpace, w: &DiffSpace, rows: &[&[i64]]) -> LinearMap {
    LinearMap::new(v.clone(), w.clone(), Matrix::from_ints(rows)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_of_identity_is_identity(seed in any::<u64>()) {
        let v = sample::space(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let d = dual_map(&LinearMap::identity(&v)).unwrap();
        prop_assert_eq!(d.matrix(), &Matrix::identity(diffeological_dual(&v).unwrap().dim()));
    }

    #[test]
    fn dual_is_contravariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample::space(&mut rng, 3);
        let v = sample::space(&mut rng, 3);
        let w = sample::space(&mut rng, 3);
        let f = sample::smooth_map(&mut rng, &u, &v).unwrap();
        let g = sample::smooth_map(&mut rng, &v, &w).unwrap();
        let gf = g.compose(&f).unwrap();
        prop_assert_eq!(is_smooth_linear(&gf).unwrap().verdict, Verdict::Smooth);
        let lhs = dual_map(&gf).unwrap();
        let rhs = dual_map(&f).unwrap().compose(&dual_map(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn dual_maps_are_smooth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::space(&mut rng, 3);
        let w = sample::space(&mut rng, 3);
        let f = sample::smooth_map(&mut rng, &v, &w).unwrap();
        prop_assert_eq!(is_smooth_linear(&dual_map(&f).unwrap()).unwrap().verdict, Verdict::Smooth);
    }

    #[test]
    fn hom_basis_elements_are_smooth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::space(&mut rng, 3);
        let w = fine_or_coarse(&mut rng);
        let basis = smooth_hom_basis(&v, &w).unwrap();
        prop_assert_eq!(basis.ambient_dim(), v.dim() * w.dim());
        for b in basis.basis_vectors() {
            let f = LinearMap::new(v.clone(), w.clone(), unflatten(w.dim(), v.dim(), &b).unwrap()).unwrap();
            prop_assert_eq!(is_smooth_linear(&f).unwrap().verdict, Verdict::Smooth);
        }
    }

    #[test]
    fn decision_agrees_with_hom_basis(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::space(&mut rng, 3);
        let w = fine_or_coarse(&mut rng);
        let m = sample::matrix(&mut rng, w.dim(), v.dim());
        let f = LinearMap::new(v.clone(), w.clone(), m.clone()).unwrap();
        let smooth = is_smooth_linear(&f).unwrap().verdict == Verdict::Smooth;
        prop_assert_eq!(smooth, smooth_hom_basis(&v, &w).unwrap().contains(&diffeolin::hom::flatten(&m)));
    }

    #[test]
    fn not_smooth_witnesses_check_out(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::space(&mut rng, 3);
        let w = sample::space(&mut rng, 3);
        let f = LinearMap::new(v.clone(), w.clone(), sample::matrix(&mut rng, w.dim(), v.dim())).unwrap();
        let d = is_smooth_linear(&f).unwrap();
        if d.verdict == Verdict::NotSmooth {
            match d.witness {
                Some(Witness::Plot { plot, image }) => {
                    prop_assert_eq!(v.is_plot(&plot).unwrap(), Membership::Plot);
                    prop_assert_eq!(&plot.apply(f.matrix()).unwrap(), &image);
                    prop_assert!(matches!(w.is_plot(&image).unwrap(), Membership::NotPlot(_)));
                }
                other => prop_assert!(false, "unexpected witness {:?}", other),
            }
        }
    }
}

#[test]
fn maps_into_coarse_and_from_duals_are_smooth() {
    let k = DiffSpace::generated(2, vec![plot("abs(x), 0")]).unwrap();
    let coarse = DiffSpace::coarse(1).unwrap();
    assert_eq!(is_smooth_linear(&map(&k, &coarse, &[&[5, -3]])).unwrap().verdict, Verdict::Smooth);
    let kd = diffeological_dual(&k).unwrap();
    let fine = DiffSpace::fine(3).unwrap();
    let any = LinearMap::new(kd.space().clone(), fine.clone(), Matrix::from_ints(&[&[1], &[2], &[3]])).unwrap();
    assert_eq!(is_smooth_linear(&any).unwrap().verdict, Verdict::Smooth);
    assert_eq!(smooth_hom_basis(kd.space(), &fine).unwrap().dim(), 3);
}

#[test]
fn functional_examples() {
    let k = DiffSpace::generated(2, vec![plot("abs(x), 0")]).unwrap();
    let r = DiffSpace::fine(1).unwrap();
    assert_eq!(is_smooth_linear(&map(&k, &r, &[&[0, 1]])).unwrap().verdict, Verdict::Smooth);
    assert_eq!(is_smooth_linear(&map(&k, &r, &[&[1, 0]])).unwrap().verdict, Verdict::NotSmooth);

    let mixed = DiffSpace::generated(2, vec![plot("abs(x) + x^2, abs(x)")]).unwrap();
    assert_eq!(is_smooth_linear(&map(&mixed, &r, &[&[1, -1]])).unwrap().verdict, Verdict::Smooth);
    assert_eq!(is_smooth_linear(&map(&mixed, &r, &[&[1, 0]])).unwrap().verdict, Verdict::NotSmooth);

    let coarse = DiffSpace::coarse(3).unwrap();
    assert_eq!(diffeological_dual(&coarse).unwrap().dim(), 0);
    assert_eq!(is_smooth_linear(&map(&coarse, &r, &[&[1, 0, 0]])).unwrap().verdict, Verdict::NotSmooth);
    assert_eq!(is_smooth_linear(&map(&coarse, &r, &[&[0, 0, 0]])).unwrap().verdict, Verdict::Smooth);
}

#[test]
fn fine_to_coarse_and_back() {
    let fine = DiffSpace::fine(2).unwrap();
    let coarse = DiffSpace::coarse(2).unwrap();
    let f = map(&fine, &coarse, &[&[1, 2], &[0, 1]]);
    assert_eq!(is_smooth_linear(&f).unwrap().verdict, Verdict::Smooth);
    assert_eq!(is_smooth_linear(&f.inverse().unwrap()).unwrap().verdict, Verdict::NotSmooth);
}

#[test]
fn fine_spaces_are_self_dual() {
    for n in 1..=4 {
        let s = self_duality(&DiffSpace::fine(n).unwrap()).unwrap();
        assert!(s.bijective);
        assert_eq!(s.forward_verdict, Verdict::Smooth);
        assert_eq!(s.backward_verdict, Verdict::Smooth);
    }
    assert!(self_duality(&DiffSpace::coarse(2).unwrap()).is_err());
}

#[test]
fn dual_of_a_dual_is_rejected() {
    let v = DiffSpace::fine(2).unwrap();
    let vd = diffeological_dual(&v).unwrap();
    assert!(diffeological_dual(vd.space()).is_err());
}

#[test]
fn dual_map_requires_smoothness() {
    let coarse = DiffSpace::coarse(1).unwrap();
    let fine = DiffSpace::fine(1).unwrap();
    assert!(dual_map(&map(&coarse, &fine, &[&[1]])).is_err());
    let d = dual_map(&map(&fine, &coarse, &[&[1]])).unwrap();
    assert_eq!((d.matrix().rows(), d.matrix().cols()), (1, 0));
}

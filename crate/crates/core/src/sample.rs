//! Seeded random instances for sweeps and randomized checks.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Atom, FunctionExpr, Polynomial};
use crate::bilinear::BilinearForm;
use crate::error::Result;
use crate::hom::{diffeological_dual, is_smooth_linear, LinearMap, Verdict};
use crate::linalg::{unit_vector, Matrix};
use crate::space::{combine, DiffSpace, Plot};
use crate::{rat, ratio, Rational};

/// A non-zero rational in `[-10, 10]`; integers half of the time.
pub fn coefficient<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let q = if rng.gen_bool(0.5) { 1 } else { rng.gen_range(2..=7) };
        let p = rng.gen_range(-10 * q..=10 * q);
        if p != 0 {
            return ratio(p, q);
        }
    }
}

fn small_int<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-3..=3))
}

/// Up to `max_terms` random atoms of degree at most `max_degree`.
pub fn expr<R: Rng>(rng: &mut R, max_degree: u32, max_terms: usize) -> FunctionExpr {
    let terms = rng.gen_range(1..=max_terms);
    FunctionExpr::from_terms((0..terms).map(|_| {
        let d = rng.gen_range(0..=max_degree);
        let atom = if rng.gen_bool(0.5) { Atom::mono(d) } else { Atom::abs_mono(d) };
        (atom, coefficient(rng))
    }))
}

pub fn polynomial<R: Rng>(rng: &mut R, max_degree: u32) -> Polynomial {
    let mut terms = Vec::new();
    for d in 0..=max_degree {
        if rng.gen_bool(0.6) {
            terms.push((d, small_int(rng)));
        }
    }
    Polynomial::from_coeffs(terms)
}

pub fn smooth_plot<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> Plot {
    Plot::new((0..n).map(|_| polynomial(rng, max_degree).to_expr()).collect())
}

/// A non-zero integer vector with entries in `[-3, 3]`.
pub fn vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| small_int(rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// `|x|·x^k·v` plus a smooth plot, `k ≤ 1`.
pub fn kink_generator<R: Rng>(rng: &mut R, n: usize) -> Plot {
    let v = vector(rng, n);
    let k = rng.gen_range(0..=1);
    let s = if rng.gen_bool(0.5) { smooth_plot(rng, n, 2) } else { Plot::zero(n) };
    Plot::kink(&v, k).add(&s).expect("same dimension")
}

/// `R^n` generated by basis kinks `|x|·e_i` for the listed indices.
pub fn basis_kink_space(n: usize, kinks: &[usize]) -> Result<DiffSpace> {
    DiffSpace::generated(n, kinks.iter().map(|&i| Plot::kink(&unit_vector(n, i), 0)).collect())
}

/// Fine, coarse, or generated by one or two random kink generators, in a
/// random dimension between 1 and `max_dim`.
pub fn space<R: Rng>(rng: &mut R, max_dim: usize) -> DiffSpace {
    let n = rng.gen_range(1..=max_dim);
    match rng.gen_range(0..4) {
        0 => DiffSpace::fine(n),
        1 => DiffSpace::coarse(n),
        _ => {
            let k = rng.gen_range(1..=2);
            DiffSpace::generated(n, (0..k).map(|_| kink_generator(rng, n)).collect())
        }
    }
    .expect("positive dimension")
}

/// A generated space of dimension exactly `n`.
pub fn generated_space<R: Rng>(rng: &mut R, n: usize) -> DiffSpace {
    let k = rng.gen_range(1..=2);
    DiffSpace::generated(n, (0..k).map(|_| kink_generator(rng, n)).collect()).expect("positive dimension")
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| small_int(rng)).collect();
    Matrix::from_vec(rows, cols, data).expect("shape")
}

pub fn invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = matrix(rng, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A smooth linear map `v → w`: either a random matrix that happens to be
/// smooth, or a random map killing the singular span of `v`.
pub fn smooth_map<R: Rng>(rng: &mut R, v: &DiffSpace, w: &DiffSpace) -> Result<LinearMap> {
    for _ in 0..4 {
        let f = LinearMap::new(v.clone(), w.clone(), matrix(rng, w.dim(), v.dim()))?;
        if is_smooth_linear(&f)?.verdict == Verdict::Smooth {
            return Ok(f);
        }
    }
    let ann = diffeological_dual(v)?.annihilator().basis().clone();
    let m =
        if ann.rows() == 0 { Matrix::zeros(w.dim(), v.dim()) } else { matrix(rng, w.dim(), ann.rows()).mul(&ann)? };
    LinearMap::new(v.clone(), w.clone(), m)
}

/// `λ(x)·p(c·x) + s(x)` with random non-zero `λ` and `c`.
pub fn combination<R: Rng>(rng: &mut R, p: &Plot, s: &Plot) -> Result<Plot> {
    let lambda = loop {
        let l = polynomial(rng, 2);
        if !l.is_zero() {
            break l;
        }
    };
    let c = coefficient(rng);
    combine(p, &lambda, &c, s)
}

/// A plot of `v` (dual spaces excluded): a random combination of one of
/// its kink plots, or a smooth plot when there are none.
pub fn plot_of<R: Rng>(rng: &mut R, v: &DiffSpace) -> Result<Plot> {
    let s = smooth_plot(rng, v.dim(), 3);
    let dirs = v.kink_directions()?;
    match dirs.choose(rng) {
        Some(d) => combination(rng, &d.plot(), &s),
        None => Ok(s),
    }
}

/// A plot of `R^n` with random kinked and smooth coordinates.
pub fn any_plot<R: Rng>(rng: &mut R, n: usize) -> Plot {
    Plot::new((0..n).map(|_| if rng.gen_bool(0.5) { expr(rng, 2, 3) } else { FunctionExpr::zero() }).collect())
}

pub fn bilinear_form<R: Rng>(
    rng: &mut R,
    left: &DiffSpace,
    right: &DiffSpace,
    codomain: &DiffSpace,
) -> Result<BilinearForm> {
    let q = codomain.dim();
    let coeffs = (0..left.dim() * right.dim())
        .map(|_| (0..q).map(|_| if rng.gen_bool(0.5) { small_int(rng) } else { Rational::zero() }).collect())
        .collect();
    BilinearForm::new(left.clone(), right.clone(), codomain.clone(), coeffs)
}

/// A form vanishing whenever either argument lies in a singular span,
/// built from products of smooth functionals.
pub fn smooth_bilinear_form<R: Rng>(
    rng: &mut R,
    left: &DiffSpace,
    right: &DiffSpace,
    codomain: &DiffSpace,
) -> Result<BilinearForm> {
    let lf = diffeological_dual(left)?.annihilator().basis_vectors();
    let rf = diffeological_dual(right)?.annihilator().basis_vectors();
    let q = codomain.dim();
    let mut coeffs = vec![vec![Rational::zero(); q]; left.dim() * right.dim()];
    for a in &lf {
        for b in &rf {
            let w: Vec<Rational> = (0..q).map(|_| small_int(rng)).collect();
            for (i, ai) in a.iter().enumerate() {
                for (j, bj) in b.iter().enumerate() {
                    let s = ai * bj;
                    for (c, wk) in coeffs[i * right.dim() + j].iter_mut().zip(&w) {
                        *c += &s * wk;
                    }
                }
            }
        }
    }
    BilinearForm::new(left.clone(), right.clone(), codomain.clone(), coeffs)
}

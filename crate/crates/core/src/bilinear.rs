//! Bilinear maps `V × W → Y` and the curry/uncurry correspondence with
//! linear maps `V → L(W, Y)`.
//!
//! Plots of a product are pairs of plots. The non-smooth part of `b(p, q)`
//! comes from a kink of one side against the smooth part of the other (two
//! kinks multiply to a smooth `|x|² = x²`), so it is enough to test pairs
//! (kink, constant) and (constant, kink).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hom::{self, Decision, LinearMap, Verdict, Witness};
use crate::linalg::{unit_vector, Matrix, Subspace};
use crate::space::{DiffSpace, Diffeology, Membership, MembershipConfig, Plot};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    left: DiffSpace,
    right: DiffSpace,
    codomain: DiffSpace,
    /// `b(e_i, e_j)` at index `i·m + j`, each of length `q`.
    coeffs: Vec<Vec<Rational>>,
}

impl BilinearForm {
    pub fn new(left: DiffSpace, right: DiffSpace, codomain: DiffSpace, coeffs: Vec<Vec<Rational>>) -> Result<Self> {
        let (n, m, q) = (left.dim(), right.dim(), codomain.dim());
        if coeffs.len() != n * m {
            return Err(Error::DimensionMismatch { expected: n * m, found: coeffs.len() });
        }
        if let Some(c) = coeffs.iter().find(|c| c.len() != q) {
            return Err(Error::DimensionMismatch { expected: q, found: c.len() });
        }
        Ok(BilinearForm { left, right, codomain, coeffs })
    }

    pub fn zero(left: DiffSpace, right: DiffSpace, codomain: DiffSpace) -> Self {
        let coeffs = vec![vec![Rational::zero(); codomain.dim()]; left.dim() * right.dim()];
        BilinearForm { left, right, codomain, coeffs }
    }

    /// From the flat coordinate vector, entry `(i·m + j)·q + k`.
    pub fn from_flat(left: DiffSpace, right: DiffSpace, codomain: DiffSpace, flat: &[Rational]) -> Result<Self> {
        let q = codomain.dim();
        let expected = left.dim() * right.dim() * q;
        if flat.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: flat.len() });
        }
        let coeffs =
            if q == 0 { vec![vec![]; left.dim() * right.dim()] } else { flat.chunks(q).map(<[_]>::to_vec).collect() };
        BilinearForm::new(left, right, codomain, coeffs)
    }

    pub fn left(&self) -> &DiffSpace {
        &self.left
    }

    pub fn right(&self) -> &DiffSpace {
        &self.right
    }

    pub fn codomain(&self) -> &DiffSpace {
        &self.codomain
    }

    pub fn coeff(&self, i: usize, j: usize) -> &[Rational] {
        &self.coeffs[i * self.right.dim() + j]
    }

    pub fn flat(&self) -> Vec<Rational> {
        self.coeffs.concat()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(Zero::is_zero)
    }

    pub fn eval(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.codomain.dim()];
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let w = ui * vj;
                for (o, c) in out.iter_mut().zip(self.coeff(i, j)) {
                    *o += &w * c;
                }
            }
        }
        out
    }

    /// `x ↦ b(p(x), q(x))`.
    pub fn apply_plots(&self, p: &Plot, q: &Plot) -> Result<Plot> {
        if p.target_dim() != self.left.dim() {
            return Err(Error::DimensionMismatch { expected: self.left.dim(), found: p.target_dim() });
        }
        if q.target_dim() != self.right.dim() {
            return Err(Error::DimensionMismatch { expected: self.right.dim(), found: q.target_dim() });
        }
        let mut out = vec![crate::FunctionExpr::zero(); self.codomain.dim()];
        for (i, pi) in p.components().iter().enumerate().filter(|(_, f)| !f.is_zero()) {
            for (j, qj) in q.components().iter().enumerate().filter(|(_, f)| !f.is_zero()) {
                let prod = pi * qj;
                for (o, c) in out.iter_mut().zip(self.coeff(i, j)) {
                    if !c.is_zero() {
                        *o = &*o + &prod.scale(c);
                    }
                }
            }
        }
        Ok(Plot::new(out))
    }

    /// `(w, v) ↦ b(v, w)`.
    pub fn transpose(&self) -> BilinearForm {
        let (n, m) = (self.left.dim(), self.right.dim());
        let mut coeffs = Vec::with_capacity(n * m);
        for j in 0..m {
            for i in 0..n {
                coeffs.push(self.coeff(i, j).to_vec());
            }
        }
        BilinearForm { left: self.right.clone(), right: self.left.clone(), codomain: self.codomain.clone(), coeffs }
    }
}

pub fn is_smooth_bilinear(b: &BilinearForm) -> Result<Decision> {
    is_smooth_bilinear_with(b, &MembershipConfig::default())
}

pub fn is_smooth_bilinear_with(b: &BilinearForm, cfg: &MembershipConfig) -> Result<Decision> {
    if b.codomain.is_dual() {
        return Err(Error::Unsupported("bilinear maps into a dual space".into()));
    }
    if b.codomain.is_coarse() || b.is_zero() {
        return Ok(Decision::smooth());
    }
    let mut verdict = Verdict::Smooth;
    let mut witness = None;
    let sides = [(&b.left, &b.right, false), (&b.right, &b.left, true)];
    for (kinked, other, swapped) in sides {
        if kinked.is_dual() {
            continue;
        }
        for dir in kinked.kink_directions()? {
            for j in 0..other.dim() {
                let kink = dir.plot();
                let constant = Plot::constant(&unit_vector(other.dim(), j));
                let (left, right) = if swapped { (constant, kink) } else { (kink, constant) };
                let image = b.apply_plots(&left, &right)?;
                let v = match b.codomain.is_plot_with(&image, cfg)? {
                    Membership::Plot => Verdict::Smooth,
                    Membership::NotPlot(_) => Verdict::NotSmooth,
                    Membership::Unknown { .. } => Verdict::Unknown,
                };
                if v != Verdict::Smooth && (witness.is_none() || v == Verdict::NotSmooth) {
                    witness = Some(Witness::Pair { left, right, image });
                }
                verdict = Verdict::combine([verdict, v]);
                if verdict == Verdict::NotSmooth {
                    return Ok(Decision { verdict, witness });
                }
            }
        }
    }
    Ok(Decision { verdict, witness })
}

/// Smooth forms `left × right → codomain` as a subspace of the flat
/// coordinates.
pub fn smooth_bilinear_subspace(left: &DiffSpace, right: &DiffSpace, codomain: &DiffSpace) -> Result<Subspace> {
    let (n, m, q) = (left.dim(), right.dim(), codomain.dim());
    let total = n * m * q;
    match codomain.diffeology() {
        Diffeology::Coarse => Ok(Subspace::full(total)),
        Diffeology::Fine => {
            let idx = |i: usize, j: usize, k: usize| (i * m + j) * q + k;
            let mut rows = Vec::new();
            for s in hom::domain_obstruction(left)?.basis_vectors() {
                for j in 0..m {
                    for k in 0..q {
                        let mut row = vec![Rational::zero(); total];
                        for (i, si) in s.iter().enumerate() {
                            row[idx(i, j, k)] = si.clone();
                        }
                        rows.push(row);
                    }
                }
            }
            for s in hom::domain_obstruction(right)?.basis_vectors() {
                for i in 0..n {
                    for k in 0..q {
                        let mut row = vec![Rational::zero(); total];
                        for (j, sj) in s.iter().enumerate() {
                            row[idx(i, j, k)] = sj.clone();
                        }
                        rows.push(row);
                    }
                }
            }
            Subspace::span(total, Matrix::from_rows(total, &rows)?.nullspace())
        }
        other => Err(Error::Unsupported(format!(
            "smooth bilinear basis into a {} codomain; only per-form verdicts are available",
            other.kind()
        ))),
    }
}

/// `B^∞(V, W)`: smooth bilinear maps `V × V → W`.
pub fn smooth_bilinear_basis(v: &DiffSpace, w: &DiffSpace) -> Result<Subspace> {
    smooth_bilinear_subspace(v, v, w)
}

/// A linear map `V → L(W, Y)`, stored as the images `F(e_i)`, each a
/// `q × m` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurriedMap {
    left: DiffSpace,
    right: DiffSpace,
    codomain: DiffSpace,
    images: Vec<Matrix>,
}

impl CurriedMap {
    pub fn new(left: DiffSpace, right: DiffSpace, codomain: DiffSpace, images: Vec<Matrix>) -> Result<Self> {
        if images.len() != left.dim() {
            return Err(Error::DimensionMismatch { expected: left.dim(), found: images.len() });
        }
        for m in &images {
            if m.rows() != codomain.dim() || m.cols() != right.dim() {
                return Err(Error::ShapeMismatch {
                    expected_rows: codomain.dim(),
                    expected_cols: right.dim(),
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        Ok(CurriedMap { left, right, codomain, images })
    }

    pub fn left(&self) -> &DiffSpace {
        &self.left
    }

    pub fn right(&self) -> &DiffSpace {
        &self.right
    }

    pub fn codomain(&self) -> &DiffSpace {
        &self.codomain
    }

    pub fn images(&self) -> &[Matrix] {
        &self.images
    }

    /// `F(v) = Σ v_i·F(e_i)`.
    pub fn at(&self, v: &[Rational]) -> Matrix {
        let mut out = Matrix::zeros(self.codomain.dim(), self.right.dim());
        for (vi, m) in v.iter().zip(&self.images) {
            if !vi.is_zero() {
                out = out.add(&m.scale(vi)).expect("same shape");
            }
        }
        out
    }

    /// Flat coordinates `i·(q·m) + k·m + j` for entry `(k, j)` of `F(e_i)`.
    pub fn flat(&self) -> Vec<Rational> {
        self.images.iter().flat_map(hom::flatten).collect()
    }

    pub fn from_flat(left: DiffSpace, right: DiffSpace, codomain: DiffSpace, flat: &[Rational]) -> Result<Self> {
        let (n, m, q) = (left.dim(), right.dim(), codomain.dim());
        if flat.len() != n * m * q {
            return Err(Error::DimensionMismatch { expected: n * m * q, found: flat.len() });
        }
        let images =
            (0..n).map(|i| hom::unflatten(q, m, &flat[i * q * m..(i + 1) * q * m])).collect::<Result<Vec<_>>>()?;
        CurriedMap::new(left, right, codomain, images)
    }
}

/// `F(v)(w) = b(v, w)`; refuses forms that are not smooth.
pub fn curry(b: &BilinearForm) -> Result<CurriedMap> {
    let d = is_smooth_bilinear(b)?;
    if d.verdict != Verdict::Smooth {
        return Err(Error::NotSmooth(format!("bilinear form is {}", d.verdict)));
    }
    Ok(curry_unchecked(b))
}

pub fn curry_unchecked(b: &BilinearForm) -> CurriedMap {
    let (n, m, q) = (b.left.dim(), b.right.dim(), b.codomain.dim());
    let images = (0..n)
        .map(|i| {
            let mut f = Matrix::zeros(q, m);
            for j in 0..m {
                for (k, c) in b.coeff(i, j).iter().enumerate() {
                    f[(k, j)] = c.clone();
                }
            }
            f
        })
        .collect();
    CurriedMap { left: b.left.clone(), right: b.right.clone(), codomain: b.codomain.clone(), images }
}

/// `g(v, w) = G(v)(w)`.
pub fn uncurry(g: &CurriedMap) -> BilinearForm {
    let (n, m) = (g.left.dim(), g.right.dim());
    let mut coeffs = Vec::with_capacity(n * m);
    for img in &g.images {
        for j in 0..m {
            coeffs.push(img.column(j));
        }
    }
    BilinearForm { left: g.left.clone(), right: g.right.clone(), codomain: g.codomain.clone(), coeffs }
}

/// Smoothness of `G: V → L^∞(W, Y)` decided on the curried side: every
/// `G(e_i)` must be a smooth linear map, and for each kink plot
/// `|x|x^k·s` of `V` the family `x ↦ |x|x^k·G(s)` must evaluate to plots
/// of `Y` at every constant `w`.
pub fn is_smooth_curried(g: &CurriedMap) -> Result<Decision> {
    if g.codomain.is_dual() {
        return Err(Error::Unsupported("curried maps into spaces of maps to a dual".into()));
    }
    let mut verdicts = Vec::new();
    let mut witness = None;
    for img in &g.images {
        let d = hom::is_smooth_linear(&LinearMap::new(g.right.clone(), g.codomain.clone(), img.clone())?)?;
        if d.verdict != Verdict::Smooth && witness.is_none() {
            witness = d.witness;
        }
        verdicts.push(d.verdict);
    }
    if !g.left.is_dual() && !g.codomain.is_coarse() {
        for dir in g.left.kink_directions()? {
            let gs = g.at(&dir.vector);
            for j in 0..g.right.dim() {
                let image = Plot::kink(&gs.column(j), dir.degree);
                let m = g.codomain.is_plot(&image)?;
                let v = match m {
                    Membership::Plot => Verdict::Smooth,
                    Membership::NotPlot(_) => Verdict::NotSmooth,
                    Membership::Unknown { .. } => Verdict::Unknown,
                };
                if v != Verdict::Smooth && witness.is_none() {
                    witness = Some(Witness::Pair {
                        left: dir.plot(),
                        right: Plot::constant(&unit_vector(g.right.dim(), j)),
                        image,
                    });
                }
                verdicts.push(v);
            }
        }
    }
    let verdict = Verdict::combine(verdicts);
    Ok(Decision { verdict, witness: if verdict == Verdict::Smooth { None } else { witness } })
}

/// Linear maps `G: V → L(V, W)` landing in `L^∞(V, W)` and vanishing on
/// the singular span of `V`, in [`CurriedMap::flat`] coordinates.
pub fn smooth_curried_basis(v: &DiffSpace, w: &DiffSpace) -> Result<Subspace> {
    let (n, q) = (v.dim(), w.dim());
    let block = q * n;
    let total = n * block;
    let hom_constraints = hom::smooth_hom_basis(v, w)?.annihilator();
    let mut rows = Vec::new();
    for i in 0..n {
        for c in hom_constraints.basis_vectors() {
            let mut row = vec![Rational::zero(); total];
            row[i * block..(i + 1) * block].clone_from_slice(&c);
            rows.push(row);
        }
    }
    if !w.is_coarse() {
        for s in hom::domain_obstruction(v)?.basis_vectors() {
            for e in 0..block {
                let mut row = vec![Rational::zero(); total];
                for (i, si) in s.iter().enumerate() {
                    row[i * block + e] = si.clone();
                }
                rows.push(row);
            }
        }
    }
    Subspace::span(total, Matrix::from_rows(total, &rows)?.nullspace())
}

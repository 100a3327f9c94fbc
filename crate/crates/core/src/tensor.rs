//! Tensor products of spaces and maps, distributivity over direct sums,
//! and the comparison maps between tensor products and duals.
//!
//! The basis of `V ⊗ W` is `e_i ⊗ e_j` at index `i·m + j`. Its singular
//! span is `S_V ⊗ R^m + R^n ⊗ S_W`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hom::{self, diffeological_dual, is_smooth_linear, LinearMap, Verdict};
use crate::linalg::{unit_vector, Matrix};
use crate::space::{kron_vec, DiffSpace, Diffeology, Membership, Plot};
use crate::Rational;

/// Plots standing in for the diffeology of a factor: its generators, or
/// one kink plot per kink direction.
fn representative_plots(v: &DiffSpace) -> Result<Vec<Plot>> {
    Ok(match v.diffeology() {
        Diffeology::Generated(gens) => gens.clone(),
        _ => v.kink_directions()?.iter().map(|k| k.plot()).collect(),
    })
}

/// `V ⊗ W` with the tensor product diffeology.
///
/// Products of representative plots, and of a representative plot with a
/// constant on the other side, are checked to be plots of the result.
pub fn tensor_product(v: &DiffSpace, w: &DiffSpace) -> Result<DiffSpace> {
    if v.is_dual() || w.is_dual() {
        return Err(Error::Unsupported("tensor products with a dual factor".into()));
    }
    let t = DiffSpace::tensor_unchecked(v, w);
    let (n, m) = (v.dim(), w.dim());
    let ps = representative_plots(v)?;
    let qs = representative_plots(w)?;
    let mut products = Vec::new();
    for p in &ps {
        products.extend(qs.iter().map(|q| p.tensor(q)));
        products.extend((0..m).map(|j| p.tensor(&Plot::constant(&unit_vector(m, j)))));
    }
    for q in &qs {
        products.extend((0..n).map(|i| Plot::constant(&unit_vector(n, i)).tensor(q)));
    }
    for c in products {
        if let Membership::NotPlot(cert) = t.is_plot(&c)? {
            return Err(Error::Assertion(format!(
                "product plot {c} leaves the tensor singular span at degree {}",
                cert.degree
            )));
        }
    }
    Ok(t)
}

/// `f ⊗ g` between the tensor products of domains and codomains.
pub fn tensor_of_maps(f: &LinearMap, g: &LinearMap) -> Result<LinearMap> {
    for (name, h) in [("left", f), ("right", g)] {
        let d = is_smooth_linear(h)?;
        if d.verdict != Verdict::Smooth {
            return Err(Error::NotSmooth(format!("{name} factor is {}", d.verdict)));
        }
    }
    LinearMap::new(
        tensor_product(f.domain(), g.domain())?,
        tensor_product(f.codomain(), g.codomain())?,
        f.matrix().kronecker(g.matrix()),
    )
}

/// `V1 ⊗ (V2 ⊕ V3) → (V1 ⊗ V2) ⊕ (V1 ⊗ V3)`.
pub fn distribute(v1: &DiffSpace, v2: &DiffSpace, v3: &DiffSpace) -> Result<LinearMap> {
    let (n1, n2, n3) = (v1.dim(), v2.dim(), v3.dim());
    let domain = tensor_product(v1, &v2.direct_sum(v3)?)?;
    let codomain = tensor_product(v1, v2)?.direct_sum(&tensor_product(v1, v3)?)?;
    let mut t = Matrix::zeros(codomain.dim(), domain.dim());
    for i in 0..n1 {
        for j in 0..n2 + n3 {
            let target = if j < n2 { i * n2 + j } else { n1 * n2 + i * n3 + (j - n2) };
            t[(target, i * (n2 + n3) + j)] = Rational::from_integer(1.into());
        }
    }
    LinearMap::new(domain, codomain, t)
}

/// `F: V* ⊗ W* → (V ⊗ W)*`, `F(f ⊗ g)(v ⊗ w) = f(v)·g(w)`, in annihilator
/// coordinates on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorDualIso {
    pub matrix: Matrix,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl TensorDualIso {
    pub fn is_iso(&self) -> bool {
        self.rank == self.source_dim && self.source_dim == self.target_dim
    }
}

pub fn tensor_dual_iso(v: &DiffSpace, w: &DiffSpace) -> Result<TensorDualIso> {
    let t = tensor_product(v, w)?;
    let (vd, wd, td) = (diffeological_dual(v)?, diffeological_dual(w)?, diffeological_dual(&t)?);
    let (p, r) = (vd.dim(), wd.dim());
    let mut matrix = Matrix::zeros(td.dim(), p * r);
    for (a, f) in vd.annihilator().basis_vectors().iter().enumerate() {
        for (b, g) in wd.annihilator().basis_vectors().iter().enumerate() {
            let fg = kron_vec(f, g);
            let coords = td
                .coordinates(&fg)
                .ok_or_else(|| Error::Assertion(format!("f{a} ⊗ g{b} does not vanish on the tensor singular span")))?;
            for (k, c) in coords.into_iter().enumerate() {
                matrix[(k, a * r + b)] = c;
            }
        }
    }
    let rank = matrix.rank();
    if rank != p * r {
        return Err(Error::Assertion(format!("F has rank {rank} on a {}-dimensional source", p * r)));
    }
    if td.dim() != p * r {
        return Err(Error::Assertion(format!("dim (V⊗W)* = {} but dim V*·dim W* = {}", td.dim(), p * r)));
    }
    Ok(TensorDualIso { matrix, source_dim: p * r, target_dim: td.dim(), rank })
}

/// Matrix of `V ⊗ W → L(X*, Y)` together with dimension comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatMap {
    /// Columns indexed by the tensor basis; rows by the row-major
    /// flattening of `dim Y × dim X*` matrices.
    pub matrix: Matrix,
    pub domain_dim: usize,
    /// `dim L(X*, Y)`.
    pub target_dim: usize,
    /// `dim L^∞(X*, Y)`.
    pub smooth_target_dim: usize,
    pub rank: usize,
    /// Whether every image lies in `L^∞(X*, Y)`.
    pub values_smooth: bool,
}

impl HatMap {
    pub fn is_iso_onto_smooth_maps(&self) -> bool {
        self.values_smooth && self.rank == self.domain_dim && self.domain_dim == self.smooth_target_dim
    }
}

fn check_hat_factors(v: &DiffSpace, w: &DiffSpace) -> Result<()> {
    for s in [v, w] {
        if !matches!(s.diffeology(), Diffeology::Fine | Diffeology::Coarse | Diffeology::Generated(_)) {
            return Err(Error::Unsupported(format!("{} factor in the comparison maps", s.diffeology().kind())));
        }
    }
    Ok(())
}

fn hat_map(x: &DiffSpace, y: &DiffSpace, dual_first: bool) -> Result<HatMap> {
    let xd = diffeological_dual(x)?;
    let p = xd.dim();
    let funcs = xd.annihilator().basis_vectors();
    let (nx, ny) = (x.dim(), y.dim());
    let mut matrix = Matrix::zeros(ny * p, nx * ny);
    // Tensor basis order is (first factor, second factor); the dualized
    // factor is the first one for F^ and the second one for G^.
    for (a, f) in funcs.iter().enumerate() {
        for (i, fi) in f.iter().enumerate() {
            for j in 0..ny {
                let col = if dual_first { i * ny + j } else { j * nx + i };
                matrix[(j * p + a, col)] = fi.clone();
            }
        }
    }
    let smooth = hom::smooth_hom_basis(xd.space(), y)?;
    let values_smooth = (0..matrix.cols()).all(|c| smooth.contains(&matrix.column(c)));
    Ok(HatMap {
        rank: matrix.rank(),
        domain_dim: nx * ny,
        target_dim: ny * p,
        smooth_target_dim: smooth.dim(),
        values_smooth,
        matrix,
    })
}

/// `F^: V ⊗ W → L(V*, W)`, `v ⊗ w ↦ (f ↦ f(v)·w)`.
pub fn hat_f(v: &DiffSpace, w: &DiffSpace) -> Result<HatMap> {
    check_hat_factors(v, w)?;
    hat_map(v, w, true)
}

/// `G^: V ⊗ W → L(W*, V)`, `v ⊗ w ↦ (g ↦ g(w)·v)`.
pub fn hat_g(v: &DiffSpace, w: &DiffSpace) -> Result<HatMap> {
    check_hat_factors(v, w)?;
    hat_map(w, v, false)
}

/// `dim V*·dim V` against `dim L^∞(V, V)` (the latter only when the
/// smooth hom space is computable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoComparison {
    pub dual_tensor_dim: usize,
    pub smooth_endo_dim: Option<usize>,
}

impl EndoComparison {
    pub fn equal(&self) -> Option<bool> {
        self.smooth_endo_dim.map(|d| d == self.dual_tensor_dim)
    }
}

pub fn endo_remark_check(v: &DiffSpace) -> Result<EndoComparison> {
    check_hat_factors(v, v)?;
    let dual_tensor_dim = diffeological_dual(v)?.dim() * v.dim();
    let smooth_endo_dim = match hom::smooth_hom_basis(v, v) {
        Ok(s) => Some(s.dim()),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(EndoComparison { dual_tensor_dim, smooth_endo_dim })
}

/// Singular span dimension of `V ⊗ W` from the factor spans alone.
pub fn block_singular_dim(v: &DiffSpace, w: &DiffSpace) -> Result<usize> {
    let (n, m) = (v.dim(), w.dim());
    let (s, t) = (v.singular_span()?.dim(), w.singular_span()?.dim());
    Ok(s * m + n * t - s * t)
}

/// Is `ℓ` (a functional on `V ⊗ W`) zero on every elementary tensor
/// `e_i ⊗ s` and `s ⊗ e_j` with `s` in a singular span?
pub fn kills_block_span(v: &DiffSpace, w: &DiffSpace, functional: &[Rational]) -> Result<bool> {
    let (n, m) = (v.dim(), w.dim());
    let dot = |x: &[Rational]| -> bool { crate::linalg::dot(functional, x).is_zero() };
    for s in v.singular_span()?.basis_vectors() {
        if !(0..m).all(|j| dot(&kron_vec(&s, &unit_vector(m, j)))) {
            return Ok(false);
        }
    }
    for t in w.singular_span()?.basis_vectors() {
        if !(0..n).all(|i| dot(&kron_vec(&unit_vector(n, i), &t))) {
            return Ok(false);
        }
    }
    Ok(true)
}

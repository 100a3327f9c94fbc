//! Smooth linear maps, diffeological duals and dual maps.
//!
//! A linear map `f: V → W` is smooth iff it sends every kink plot
//! `|x|·x^k·v` of `V` to a plot of `W`: the plots of `V` are, up to smooth
//! curves, sums of polynomial multiples of these. Maps into a dual `Z*` are
//! decided through the uncurried bilinear map `V × Z → R`. Maps out of a
//! dual are always smooth: each coordinate of a point of `Z*` is evaluation
//! at a fixed vector, which is smooth along every plot of the functional
//! diffeology, and every vector-space diffeology contains the curves with
//! smooth coordinates.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::bilinear::{self, BilinearForm};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::space::{DiffSpace, Diffeology, Membership, MembershipConfig, Plot};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Smooth,
    NotSmooth,
    Unknown,
}

impl Verdict {
    /// Any `NotSmooth` wins; otherwise any `Unknown`; otherwise `Smooth`.
    pub fn combine<I: IntoIterator<Item = Verdict>>(verdicts: I) -> Verdict {
        let mut out = Verdict::Smooth;
        for v in verdicts {
            match v {
                Verdict::NotSmooth => return Verdict::NotSmooth,
                Verdict::Unknown => out = Verdict::Unknown,
                Verdict::Smooth => {}
            }
        }
        out
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Smooth => "Smooth",
            Verdict::NotSmooth => "NotSmooth",
            Verdict::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Evidence attached to a `NotSmooth` (or `Unknown`) verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A plot of the domain whose image is not (known to be) a plot.
    Plot { plot: Plot, image: Plot },
    /// A plot `(left, right)` of a product whose image under a bilinear map
    /// is not smooth.
    Pair { left: Plot, right: Plot, image: Plot },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl Decision {
    pub fn smooth() -> Self {
        Decision { verdict: Verdict::Smooth, witness: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    domain: DiffSpace,
    codomain: DiffSpace,
    matrix: Matrix,
}

impl LinearMap {
    /// `matrix` is `codomain.dim × domain.dim`, acting on column vectors.
    pub fn new(domain: DiffSpace, codomain: DiffSpace, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != codomain.dim() || matrix.cols() != domain.dim() {
            return Err(Error::ShapeMismatch {
                expected_rows: codomain.dim(),
                expected_cols: domain.dim(),
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(LinearMap { domain, codomain, matrix })
    }

    pub fn identity(space: &DiffSpace) -> Self {
        LinearMap { domain: space.clone(), codomain: space.clone(), matrix: Matrix::identity(space.dim()) }
    }

    pub fn domain(&self) -> &DiffSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &DiffSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.codomain != self.domain {
            return Err(Error::Unsupported("composition of maps with mismatched spaces".into()));
        }
        LinearMap::new(inner.domain.clone(), self.codomain.clone(), self.matrix.mul(&inner.matrix)?)
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        LinearMap::new(self.codomain.clone(), self.domain.clone(), self.matrix.inverse()?)
    }
}

pub fn is_smooth_linear(f: &LinearMap) -> Result<Decision> {
    is_smooth_linear_with(f, &MembershipConfig::default())
}

pub fn is_smooth_linear_with(f: &LinearMap, cfg: &MembershipConfig) -> Result<Decision> {
    let (dom, cod, m) = (&f.domain, &f.codomain, &f.matrix);
    if cod.is_coarse() || dom.is_dual() || m.is_zero() {
        return Ok(Decision::smooth());
    }
    match cod.diffeology() {
        Diffeology::DualOf(z) => {
            let b = uncurry_into_dual(dom, z, m)?;
            bilinear::is_smooth_bilinear(&b)
        }
        Diffeology::Pushforward(base, iso) => {
            let inner = LinearMap::new(dom.clone(), (**base).clone(), iso.inverse()?.mul(m)?)?;
            let mut d = is_smooth_linear_with(&inner, cfg)?;
            if let Some(Witness::Plot { plot, .. }) = &d.witness {
                let image = plot.apply(m)?;
                d.witness = Some(Witness::Plot { plot: plot.clone(), image });
            }
            Ok(d)
        }
        _ => {
            let mut verdict = Verdict::Smooth;
            let mut witness = None;
            for dir in dom.kink_directions()? {
                let plot = dir.plot();
                let image = plot.apply(m)?;
                let v = match cod.is_plot_with(&image, cfg)? {
                    Membership::Plot => Verdict::Smooth,
                    Membership::NotPlot(_) => Verdict::NotSmooth,
                    Membership::Unknown { .. } => Verdict::Unknown,
                };
                if v != Verdict::Smooth
                    && (witness.is_none() || v == Verdict::NotSmooth && verdict != Verdict::NotSmooth)
                {
                    witness = Some(Witness::Plot { plot, image });
                }
                verdict = Verdict::combine([verdict, v]);
                if verdict == Verdict::NotSmooth {
                    break;
                }
            }
            Ok(Decision { verdict, witness })
        }
    }
}

/// `(v, z) ↦ f(v)(z)` for `f: V → Z*` given in annihilator coordinates.
fn uncurry_into_dual(v: &DiffSpace, z: &DiffSpace, m: &Matrix) -> Result<BilinearForm> {
    let zdual = diffeological_dual(z)?;
    let basis = zdual.annihilator.basis();
    // Row i of `m^T · basis` is the functional f(e_i) on Z.
    let funcs = m.transpose().mul(basis)?;
    let (n, p) = (v.dim(), z.dim());
    let mut coeffs = Vec::with_capacity(n * p);
    for i in 0..n {
        for j in 0..p {
            coeffs.push(vec![funcs[(i, j)].clone()]);
        }
    }
    BilinearForm::new(v.clone(), z.clone(), DiffSpace::fine(1)?, coeffs)
}

/// The diffeological dual `V*`: functionals annihilating the singular span,
/// with coordinates taken in the RREF basis of that annihilator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSpace {
    base: DiffSpace,
    annihilator: Subspace,
    space: DiffSpace,
}

impl DualSpace {
    pub fn base(&self) -> &DiffSpace {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.annihilator.dim()
    }

    /// Basis functionals, one row vector per dual coordinate.
    pub fn annihilator(&self) -> &Subspace {
        &self.annihilator
    }

    /// `V*` as a space (descriptor `DualOf`).
    pub fn space(&self) -> &DiffSpace {
        &self.space
    }

    /// Dual coordinates of a functional, or `None` if it is not smooth.
    pub fn coordinates(&self, functional: &[Rational]) -> Option<Vec<Rational>> {
        self.annihilator.coordinates(functional)
    }
}

pub fn diffeological_dual(v: &DiffSpace) -> Result<DualSpace> {
    if v.is_dual() {
        return Err(Error::Unsupported("duals of dual spaces".into()));
    }
    let annihilator = v.singular_span()?.annihilator();
    Ok(DualSpace { base: v.clone(), annihilator, space: DiffSpace::dual_of(v)? })
}

/// Obstruction span of a domain: the singular span, or zero for a dual.
pub(crate) fn domain_obstruction(v: &DiffSpace) -> Result<Subspace> {
    if v.is_dual() {
        Ok(Subspace::zero(v.dim()))
    } else {
        v.singular_span()
    }
}

/// Basis of `L^∞(V, W)` inside `L(V, W) ≅ Q^{m·n}`, flattened row-major
/// (entry `(r, c)` at index `r·n + c`).
pub fn smooth_hom_basis(v: &DiffSpace, w: &DiffSpace) -> Result<Subspace> {
    let (n, m) = (v.dim(), w.dim());
    if v.is_dual() {
        return Ok(Subspace::full(m * n));
    }
    match w.diffeology() {
        Diffeology::Coarse => Ok(Subspace::full(m * n)),
        Diffeology::Fine => {
            let s = domain_obstruction(v)?;
            let mut rows = Vec::new();
            for sv in s.basis_vectors() {
                for r in 0..m {
                    let mut row = vec![Rational::zero(); m * n];
                    row[r * n..(r + 1) * n].clone_from_slice(&sv);
                    rows.push(row);
                }
            }
            let constraints = Matrix::from_rows(m * n, &rows)?;
            Subspace::span(m * n, constraints.nullspace())
        }
        other => Err(Error::Unsupported(format!(
            "smooth hom basis into a {} codomain; only per-map verdicts are available",
            other.kind()
        ))),
    }
}

/// Row-major flattening of a matrix, matching [`smooth_hom_basis`].
pub fn flatten(m: &Matrix) -> Vec<Rational> {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

pub fn unflatten(rows: usize, cols: usize, v: &[Rational]) -> Result<Matrix> {
    Matrix::from_vec(rows, cols, v.to_vec())
}

/// `f*: W* → V*`, `g ↦ g ∘ f`, in annihilator coordinates.
pub fn dual_map(f: &LinearMap) -> Result<LinearMap> {
    let d = is_smooth_linear(f)?;
    if d.verdict != Verdict::Smooth {
        return Err(Error::NotSmooth(format!("{} (dual map needs a smooth map)", d.verdict)));
    }
    let vd = diffeological_dual(&f.domain)?;
    let wd = diffeological_dual(&f.codomain)?;
    let pulled = wd.annihilator.basis().mul(&f.matrix)?;
    let mut m = Matrix::zeros(vd.dim(), wd.dim());
    for j in 0..wd.dim() {
        let coords = vd.coordinates(pulled.row(j)).ok_or_else(|| {
            Error::Assertion(format!("pullback of dual basis functional {j} is not smooth on the domain"))
        })?;
        for (i, c) in coords.into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    LinearMap::new(wd.space.clone(), vd.space.clone(), m)
}

/// The full linear dual carrying the pushforward of the diffeology of `V`
/// along `iso: V → V^`.
pub fn hat_dual(v: &DiffSpace, iso: &Matrix) -> Result<DiffSpace> {
    v.pushforward(iso)
}

/// Transpose of `f: V → W` as a map `Ŵ* → V̂*` between hat duals.
pub fn hat_dual_map(f: &LinearMap, iso_v: &Matrix, iso_w: &Matrix) -> Result<LinearMap> {
    let hv = hat_dual(&f.domain, iso_v)?;
    let hw = hat_dual(&f.codomain, iso_w)?;
    LinearMap::new(hw, hv, f.matrix.transpose())
}

#[derive(Clone, Debug)]
pub struct SampleCheck {
    pub sample: Plot,
    pub under_first: Membership,
    pub under_second: Membership,
    /// Verdict under the second iso for the sample moved by `iso2 ∘ iso1⁻¹`.
    pub transported: Membership,
}

impl SampleCheck {
    pub fn agrees(&self) -> bool {
        self.under_first.same_verdict(&self.under_second)
    }
}

#[derive(Clone, Debug)]
pub struct WellposednessReport {
    pub checks: Vec<SampleCheck>,
}

impl WellposednessReport {
    /// Samples whose verdicts differ between the two hat duals.
    pub fn violations(&self) -> Vec<&SampleCheck> {
        self.checks.iter().filter(|c| !c.agrees()).collect()
    }

    /// The two hat duals are always diffeomorphic through `iso2 ∘ iso1⁻¹`.
    pub fn transport_agrees(&self) -> bool {
        self.checks.iter().all(|c| c.under_first.same_verdict(&c.transported))
    }
}

/// Compares plot membership of each sample under the pushforwards of `V`
/// along two isomorphisms.
pub fn hat_dual_wellposed(
    v: &DiffSpace,
    iso1: &Matrix,
    iso2: &Matrix,
    samples: &[Plot],
) -> Result<WellposednessReport> {
    let h1 = hat_dual(v, iso1)?;
    let h2 = hat_dual(v, iso2)?;
    let transport = iso2.mul(&iso1.inverse()?)?;
    let checks = samples
        .iter()
        .map(|s| {
            Ok(SampleCheck {
                sample: s.clone(),
                under_first: h1.is_plot(s)?,
                under_second: h2.is_plot(s)?,
                transported: h2.is_plot(&s.apply(&transport)?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WellposednessReport { checks })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDuality {
    pub forward: LinearMap,
    pub backward: LinearMap,
    pub forward_verdict: Verdict,
    pub backward_verdict: Verdict,
    pub bijective: bool,
}

/// For `V` on which every linear functional is smooth, the map
/// `v ↦ Σ v_i*(v)·v_i*` onto `V*` and its inverse, with their verdicts.
pub fn self_duality(v: &DiffSpace) -> Result<SelfDuality> {
    let vd = diffeological_dual(v)?;
    if vd.dim() != v.dim() {
        return Err(Error::Unsupported(format!("only {} of {} coordinate functionals are smooth", vd.dim(), v.dim())));
    }
    // Column i: coordinates of v_i* in the annihilator basis.
    let n = v.dim();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let coords = vd.coordinates(&crate::linalg::unit_vector(n, i)).expect("full dual");
        for (r, c) in coords.into_iter().enumerate() {
            m[(r, i)] = c;
        }
    }
    let forward = LinearMap::new(v.clone(), vd.space.clone(), m)?;
    let backward = forward.inverse()?;
    let bijective = forward.matrix.is_invertible();
    Ok(SelfDuality {
        forward_verdict: is_smooth_linear(&forward)?.verdict,
        backward_verdict: is_smooth_linear(&backward)?.verdict,
        forward,
        backward,
        bijective,
    })
}

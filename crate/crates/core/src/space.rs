//! Diffeological vector spaces `R^n` with representable diffeologies.
//!
//! Every supported diffeology is summarized by its *kink directions*: pairs
//! `(k, v)` saying that `x ↦ |x|·x^k·v` is a plot. A curve in the function
//! algebra with residue `R(x) = Σ r_d x^d` (a vector of polynomials) is a
//! plot iff every `r_d` lies in the span of the directions of degree `≤ d`.
//! Higher-degree coefficients are reached through polynomial multipliers,
//! and homogeneous pieces of a generator are separated by rescaling its
//! argument, so the span test is both necessary and sufficient within the
//! algebra. The singular span is the union of all levels.

use std::env;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{FunctionExpr, Polynomial};
use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, unit_vector, Matrix, Subspace};
use crate::Rational;

/// Environment variable that pins the multiplier-degree bound of the
/// membership search.
pub const SLACK_ENV: &str = "DIFFEOLIN_SLACK_DEGREE";

/// A one-variable curve `R → R^n`, one function-algebra element per
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plot {
    components: Vec<FunctionExpr>,
}

impl Plot {
    pub fn new(components: Vec<FunctionExpr>) -> Self {
        Plot { components }
    }

    pub fn zero(n: usize) -> Self {
        Plot { components: vec![FunctionExpr::zero(); n] }
    }

    /// The constant curve at `v`.
    pub fn constant(v: &[Rational]) -> Self {
        Plot::new(v.iter().map(|c| FunctionExpr::constant(c.clone())).collect())
    }

    /// `x ↦ |x|·x^degree·v`.
    pub fn kink(v: &[Rational], degree: u32) -> Self {
        let atom = FunctionExpr::abs_x_pow(degree);
        Plot::new(v.iter().map(|c| atom.scale(c)).collect())
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[FunctionExpr] {
        &self.components
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.components.iter().filter_map(FunctionExpr::max_degree).max()
    }

    pub fn is_smooth(&self) -> bool {
        self.components.iter().all(FunctionExpr::is_smooth)
    }

    /// Highest degree carrying a non-zero residue coefficient.
    pub fn max_residue_degree(&self) -> Option<u32> {
        self.components.iter().filter_map(|c| c.singular_residue().degree()).max()
    }

    /// Residue coefficients: row `d` holds the `|x|·x^d` coefficient of
    /// every coordinate. Rows run from degree 0 to the top residue degree.
    pub fn residue_matrix(&self) -> Matrix {
        let n = self.target_dim();
        let Some(top) = self.max_residue_degree() else {
            return Matrix::zeros(0, n);
        };
        let residues: Vec<Polynomial> = self.components.iter().map(FunctionExpr::singular_residue).collect();
        let rows: Vec<Vec<Rational>> = (0..=top).map(|d| residues.iter().map(|r| r.coeff(d)).collect()).collect();
        Matrix::from_rows(n, &rows).expect("uniform rows")
    }

    /// Non-zero residue rows with their degrees, ascending.
    pub fn residue_rows(&self) -> Vec<(u32, Vec<Rational>)> {
        let m = self.residue_matrix();
        (0..m.rows()).filter(|&d| !is_zero_vec(m.row(d))).map(|d| (d as u32, m.row(d).to_vec())).collect()
    }

    /// `x ↦ A·p(x)`.
    pub fn apply(&self, a: &Matrix) -> Result<Plot> {
        if a.cols() != self.target_dim() {
            return Err(Error::DimensionMismatch { expected: a.cols(), found: self.target_dim() });
        }
        let comps = (0..a.rows())
            .map(|i| {
                a.row(i)
                    .iter()
                    .zip(&self.components)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(FunctionExpr::zero(), |acc, (c, e)| &acc + &e.scale(c))
            })
            .collect();
        Ok(Plot::new(comps))
    }

    pub fn add(&self, other: &Plot) -> Result<Plot> {
        if self.target_dim() != other.target_dim() {
            return Err(Error::DimensionMismatch { expected: self.target_dim(), found: other.target_dim() });
        }
        Ok(Plot::new(self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect()))
    }

    /// `x ↦ λ(x)·p(x)` for a scalar function `λ`.
    pub fn scale_by(&self, lambda: &FunctionExpr) -> Plot {
        Plot::new(self.components.iter().map(|c| c * lambda).collect())
    }

    /// `x ↦ p(c·x)`.
    pub fn compose_scale(&self, c: &Rational) -> Plot {
        Plot::new(self.components.iter().map(|e| e.compose_scale(c)).collect())
    }

    /// Coordinates of `x ↦ p(x) ⊗ q(x)` in the row-major basis.
    pub fn tensor(&self, other: &Plot) -> Plot {
        let mut comps = Vec::with_capacity(self.target_dim() * other.target_dim());
        for a in &self.components {
            for b in &other.components {
                comps.push(a * b);
            }
        }
        Plot::new(comps)
    }

    /// Concatenation `(p, q)`: a plot of a direct sum.
    pub fn concat(&self, other: &Plot) -> Plot {
        Plot::new(self.components.iter().chain(&other.components).cloned().collect())
    }

    pub fn eval(&self, x: &Rational) -> Vec<Rational> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }
}

impl fmt::Display for Plot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Diffeology {
    Fine,
    Coarse,
    Generated(Vec<Plot>),
    DualOf(Box<DiffSpace>),
    TensorOf(Box<DiffSpace>, Box<DiffSpace>),
    SumOf(Box<DiffSpace>, Box<DiffSpace>),
    /// Pushforward along an invertible square matrix.
    Pushforward(Box<DiffSpace>, Matrix),
}

impl Diffeology {
    pub fn kind(&self) -> &'static str {
        match self {
            Diffeology::Fine => "fine",
            Diffeology::Coarse => "coarse",
            Diffeology::Generated(_) => "generated",
            Diffeology::DualOf(_) => "dual",
            Diffeology::TensorOf(..) => "tensor",
            Diffeology::SumOf(..) => "sum",
            Diffeology::Pushforward(..) => "pushforward",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffSpace {
    dim: usize,
    diffeology: Diffeology,
}

/// `x ↦ |x|·x^degree·vector` is a plot. `unconstrained` directions (from
/// coarse factors) need no multiplier to reach any degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KinkDirection {
    pub degree: u32,
    pub vector: Vec<Rational>,
    pub unconstrained: bool,
}

impl KinkDirection {
    pub fn plot(&self) -> Plot {
        Plot::kink(&self.vector, self.degree)
    }

    fn reaches(&self, d: u32) -> bool {
        self.unconstrained || self.degree <= d
    }
}

impl DiffSpace {
    pub fn fine(n: usize) -> Result<Self> {
        positive(n)?;
        Ok(DiffSpace { dim: n, diffeology: Diffeology::Fine })
    }

    pub fn coarse(n: usize) -> Result<Self> {
        positive(n)?;
        Ok(DiffSpace { dim: n, diffeology: Diffeology::Coarse })
    }

    /// The vector-space diffeology generated by all smooth curves plus
    /// `generators`.
    pub fn generated(n: usize, generators: Vec<Plot>) -> Result<Self> {
        positive(n)?;
        for p in &generators {
            if p.target_dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.target_dim() });
            }
        }
        Ok(DiffSpace { dim: n, diffeology: Diffeology::Generated(generators) })
    }

    /// Direct sum with the product diffeology; coordinates of `self` first.
    pub fn direct_sum(&self, other: &DiffSpace) -> Result<Self> {
        if matches!(self.diffeology, Diffeology::DualOf(_)) || matches!(other.diffeology, Diffeology::DualOf(_)) {
            return Err(Error::Unsupported("direct sums with a dual summand".into()));
        }
        Ok(DiffSpace {
            dim: self.dim + other.dim,
            diffeology: Diffeology::SumOf(Box::new(self.clone()), Box::new(other.clone())),
        })
    }

    /// Pushforward of the diffeology of `self` along the isomorphism `iso`.
    pub fn pushforward(&self, iso: &Matrix) -> Result<Self> {
        if iso.rows() != self.dim || iso.cols() != self.dim {
            return Err(Error::ShapeMismatch {
                expected_rows: self.dim,
                expected_cols: self.dim,
                rows: iso.rows(),
                cols: iso.cols(),
            });
        }
        if !iso.is_invertible() {
            return Err(Error::Singular);
        }
        if matches!(self.diffeology, Diffeology::DualOf(_)) {
            return Err(Error::Unsupported("pushforward of a dual space".into()));
        }
        Ok(DiffSpace { dim: self.dim, diffeology: Diffeology::Pushforward(Box::new(self.clone()), iso.clone()) })
    }

    /// The diffeological dual as a space in its own right; its dimension
    /// is `n - dim S`. Duals of duals are refused.
    pub fn dual_of(base: &DiffSpace) -> Result<Self> {
        let s = base.singular_span()?;
        Ok(DiffSpace { dim: base.dim - s.dim(), diffeology: Diffeology::DualOf(Box::new(base.clone())) })
    }

    pub(crate) fn tensor_unchecked(v: &DiffSpace, w: &DiffSpace) -> Self {
        DiffSpace { dim: v.dim * w.dim, diffeology: Diffeology::TensorOf(Box::new(v.clone()), Box::new(w.clone())) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diffeology(&self) -> &Diffeology {
        &self.diffeology
    }

    pub fn is_fine(&self) -> bool {
        matches!(self.diffeology, Diffeology::Fine)
    }

    pub fn is_coarse(&self) -> bool {
        matches!(self.diffeology, Diffeology::Coarse)
    }

    pub fn is_dual(&self) -> bool {
        matches!(self.diffeology, Diffeology::DualOf(_))
    }

    /// Kink directions of the diffeology (see the module docs).
    pub fn kink_directions(&self) -> Result<Vec<KinkDirection>> {
        let n = self.dim;
        Ok(match &self.diffeology {
            Diffeology::Fine => vec![],
            Diffeology::Coarse => {
                (0..n).map(|i| KinkDirection { degree: 0, vector: unit_vector(n, i), unconstrained: true }).collect()
            }
            Diffeology::Generated(gens) => gens
                .iter()
                .flat_map(|g| g.residue_rows())
                .map(|(degree, vector)| KinkDirection { degree, vector, unconstrained: false })
                .collect(),
            Diffeology::SumOf(a, b) => {
                let (na, nb) = (a.dim, b.dim);
                let left = a.kink_directions()?.into_iter().map(|mut k| {
                    k.vector.extend(std::iter::repeat_n(Rational::zero(), nb));
                    k
                });
                let right = b.kink_directions()?.into_iter().map(|mut k| {
                    let mut v = vec![Rational::zero(); na];
                    v.append(&mut k.vector);
                    k.vector = v;
                    k
                });
                left.chain(right).collect()
            }
            Diffeology::TensorOf(a, b) => {
                let (na, nb) = (a.dim, b.dim);
                let mut out = Vec::new();
                for k in a.kink_directions()? {
                    for j in 0..nb {
                        out.push(KinkDirection {
                            degree: k.degree,
                            vector: kron_vec(&k.vector, &unit_vector(nb, j)),
                            unconstrained: k.unconstrained,
                        });
                    }
                }
                for k in b.kink_directions()? {
                    for i in 0..na {
                        out.push(KinkDirection {
                            degree: k.degree,
                            vector: kron_vec(&unit_vector(na, i), &k.vector),
                            unconstrained: k.unconstrained,
                        });
                    }
                }
                out
            }
            Diffeology::Pushforward(base, iso) => base
                .kink_directions()?
                .into_iter()
                .map(|k| {
                    let vector = iso.mul_vec(&k.vector).expect("iso is square of base dim");
                    KinkDirection { vector, ..k }
                })
                .collect(),
            Diffeology::DualOf(_) => {
                return Err(Error::Unsupported(
                    "the diffeology of a dual space is not expanded into kink directions".into(),
                ))
            }
        })
    }

    /// The span of all non-smooth residue directions; its annihilator is
    /// the diffeological dual.
    pub fn singular_span(&self) -> Result<Subspace> {
        match &self.diffeology {
            Diffeology::Fine => Ok(Subspace::zero(self.dim)),
            Diffeology::Coarse => Ok(Subspace::full(self.dim)),
            Diffeology::SumOf(a, b) => Ok(a.singular_span()?.direct_sum(&b.singular_span()?)),
            Diffeology::Pushforward(base, iso) => base.singular_span()?.image(iso),
            _ => {
                let dirs = self.kink_directions()?;
                Subspace::span(self.dim, dirs.iter().map(|k| &k.vector))
            }
        }
    }

    /// The span of directions available at residue degree `d`.
    pub fn singular_level(&self, d: u32) -> Result<Subspace> {
        let dirs = self.kink_directions()?;
        Subspace::span(self.dim, dirs.iter().filter(|k| k.reaches(d)).map(|k| &k.vector))
    }

    pub fn is_plot(&self, c: &Plot) -> Result<Membership> {
        self.is_plot_with(c, &MembershipConfig::default())
    }

    pub fn is_plot_with(&self, c: &Plot, cfg: &MembershipConfig) -> Result<Membership> {
        if c.target_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: c.target_dim() });
        }
        match &self.diffeology {
            Diffeology::Coarse => Ok(Membership::Plot),
            Diffeology::Fine => Ok(match c.residue_rows().into_iter().next() {
                None => Membership::Plot,
                Some((degree, row)) => {
                    let i = row.iter().position(|v| !v.is_zero()).expect("non-zero row");
                    Membership::NotPlot(Certificate { degree, functional: unit_vector(self.dim, i) })
                }
            }),
            Diffeology::Pushforward(base, iso) => {
                let inv = iso.inverse()?;
                Ok(match base.is_plot_with(&c.apply(&inv)?, cfg)? {
                    Membership::NotPlot(cert) => {
                        // ℓ on base coordinates becomes ℓ·iso⁻¹ here.
                        let row = Matrix::from_rows(self.dim, &[cert.functional])?.mul(&inv)?;
                        Membership::NotPlot(Certificate { degree: cert.degree, functional: row.row(0).to_vec() })
                    }
                    other => other,
                })
            }
            Diffeology::DualOf(_) => Err(Error::Unsupported("plot membership in a dual space".into())),
            _ => {
                let dirs = self.kink_directions()?;
                Ok(filtration_membership(self.dim, &dirs, c, cfg))
            }
        }
    }
}

fn positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroDimension)
    } else {
        Ok(())
    }
}

pub(crate) fn kron_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

fn filtration_membership(n: usize, dirs: &[KinkDirection], c: &Plot, cfg: &MembershipConfig) -> Membership {
    let rows = c.residue_rows();
    let top_input = rows
        .iter()
        .map(|(d, _)| *d)
        .chain(dirs.iter().filter(|k| !k.unconstrained).map(|k| k.degree))
        .max()
        .unwrap_or(0);
    let bound = cfg.bound(top_input);
    let mut unknown = None;
    for (d, r) in &rows {
        let full =
            Subspace::span(n, dirs.iter().filter(|k| k.reaches(*d)).map(|k| &k.vector)).expect("direction length");
        if !full.contains(r) {
            let functional = full
                .annihilator()
                .basis_vectors()
                .into_iter()
                .find(|l| !dot(l, r).is_zero())
                .expect("a vector outside a subspace is detected by its annihilator");
            return Membership::NotPlot(Certificate { degree: *d, functional });
        }
        let within = Subspace::span(
            n,
            dirs.iter().filter(|k| k.unconstrained || (k.degree <= *d && d - k.degree <= bound)).map(|k| &k.vector),
        )
        .expect("direction length");
        if unknown.is_none() && !within.contains(r) {
            unknown = Some(*d);
        }
    }
    match unknown {
        Some(degree) => Membership::Unknown { degree, bound },
        None => Membership::Plot,
    }
}

/// Outcome of a plot-membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Plot,
    NotPlot(Certificate),
    /// Membership needs polynomial multipliers above the configured bound.
    Unknown {
        degree: u32,
        bound: u32,
    },
}

impl Membership {
    pub fn is_plot(&self) -> bool {
        matches!(self, Membership::Plot)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Membership::Plot => "Plot",
            Membership::NotPlot(_) => "NotPlot",
            Membership::Unknown { .. } => "UNKNOWN",
        }
    }

    /// Equality of the three-valued outcome, ignoring certificates.
    pub fn same_verdict(&self, other: &Membership) -> bool {
        self.label() == other.label()
    }
}

/// A functional vanishing on every kink direction of degree `≤ degree` but
/// not on the candidate's residue coefficient at `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub degree: u32,
    pub functional: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlackBound {
    /// Highest residue degree among the inputs plus `extra`.
    Auto {
        extra: u32,
    },
    Fixed(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MembershipConfig {
    pub slack: SlackBound,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        MembershipConfig { slack: SlackBound::Auto { extra: 8 } }
    }
}

impl MembershipConfig {
    pub fn fixed(bound: u32) -> Self {
        MembershipConfig { slack: SlackBound::Fixed(bound) }
    }

    /// Reads [`SLACK_ENV`]; falls back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match env::var(SLACK_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u32>()
                .map(Self::fixed)
                .map_err(|_| Error::Unsupported(format!("{SLACK_ENV}={v:?} is not a non-negative integer"))),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn bound(&self, top_input_degree: u32) -> u32 {
        match self.slack {
            SlackBound::Auto { extra } => top_input_degree + extra,
            SlackBound::Fixed(b) => b,
        }
    }
}

/// Convenience: `x ↦ λ(x)·p(c·x) + s(x)`.
pub fn combine(p: &Plot, lambda: &Polynomial, c: &Rational, s: &Plot) -> Result<Plot> {
    p.compose_scale(c).scale_by(&lambda.to_expr()).add(s)
}

/// True iff both spaces have the same available kink span at every degree.
pub fn same_levels(a: &DiffSpace, b: &DiffSpace) -> Result<bool> {
    if a.dim != b.dim {
        return Ok(false);
    }
    let top = a.kink_directions()?.iter().chain(b.kink_directions()?.iter()).map(|k| k.degree).max().unwrap_or(0);
    for d in 0..=top {
        if a.singular_level(d)? != b.singular_level(d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for DiffSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.diffeology {
            Diffeology::Fine => write!(f, "fine R^{}", self.dim),
            Diffeology::Coarse => write!(f, "coarse R^{}", self.dim),
            Diffeology::Generated(g) => {
                write!(f, "R^{} generated by {{", self.dim)?;
                for (i, p) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
            Diffeology::DualOf(b) => write!(f, "({b})*"),
            Diffeology::TensorOf(a, b) => write!(f, "({a}) ⊗ ({b})"),
            Diffeology::SumOf(a, b) => write!(f, "({a}) ⊕ ({b})"),
            Diffeology::Pushforward(b, m) => write!(f, "pushforward of ({b}) by {m}"),
        }
    }
}

/// Scalar multiple of the identity, handy for isomorphisms.
pub fn scalar_iso(n: usize, c: Rational) -> Matrix {
    Matrix::identity(n).scale(&c)
}

/// Kink plot along the `i`-th basis vector of `R^n`.
pub fn basis_kink(n: usize, i: usize) -> Plot {
    Plot::kink(&unit_vector(n, i), 0)
}

//! Floating-point smoothness classifier for one-variable functions.
//!
//! For each order `k` the central divided difference
//! `D_k(h) = Σ (-1)^i C(k,i) f((k/2 - i)·h) / h^k` is evaluated in
//! double-double arithmetic on the scales `h = 2^-s`. A value counts only
//! while it stands clear of the estimated rounding noise. If a function is
//! `C^k` near 0, `D_k(h)` stays bounded as `h → 0`; a run of admissible
//! values that keeps growing marks order `k` as divergent.

pub mod dd;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AtomKind, FunctionExpr};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hom::{is_smooth_linear, LinearMap, Verdict};
use crate::linalg::Matrix;
use crate::sample;
use crate::space::{DiffSpace, Diffeology, Plot};
use crate::Rational;

pub use dd::Dd;

/// A function that can be sampled in double-double precision.
pub trait Sampled: Sync {
    /// The value at `x` and a bound on the sum of magnitudes of the terms
    /// that produced it (used to estimate rounding noise).
    fn sample(&self, x: Dd) -> (Dd, f64);

    /// Largest power of `x` involved; rounding grows with it.
    fn degree_hint(&self) -> u32;

    fn describe(&self) -> String;
}

impl Sampled for FunctionExpr {
    fn sample(&self, x: Dd) -> (Dd, f64) {
        let mut sum = Dd::ZERO;
        let mut mag = 0.0;
        for (atom, c) in self.terms() {
            let mut t = Dd::from_rational(c) * x.powi(atom.degree);
            if atom.kind == AtomKind::AbsMono {
                t = t * x.abs();
            }
            mag += t.to_f64().abs();
            sum = sum + t;
        }
        (sum, mag)
    }

    fn degree_hint(&self) -> u32 {
        self.max_degree().unwrap_or(0) + 1
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

/// `x ↦ ℓ(p(x))`, evaluated coordinate by coordinate.
pub struct Composite<'a> {
    functional: Vec<Dd>,
    plot: &'a Plot,
}

impl<'a> Composite<'a> {
    pub fn new(functional: &[Rational], plot: &'a Plot) -> Result<Self> {
        if functional.len() != plot.target_dim() {
            return Err(Error::DimensionMismatch { expected: plot.target_dim(), found: functional.len() });
        }
        Ok(Composite { functional: functional.iter().map(Dd::from_rational).collect(), plot })
    }
}

impl Sampled for Composite<'_> {
    fn sample(&self, x: Dd) -> (Dd, f64) {
        let mut sum = Dd::ZERO;
        let mut mag = 0.0;
        for (l, p) in self.functional.iter().zip(self.plot.components()) {
            if l.hi == 0.0 {
                continue;
            }
            let (v, m) = p.sample(x);
            sum = sum + *l * v;
            mag += l.hi.abs() * m;
        }
        (sum, mag)
    }

    fn degree_hint(&self) -> u32 {
        self.plot.max_degree().unwrap_or(0) + 1
    }

    fn describe(&self) -> String {
        let l: Vec<String> = self.functional.iter().map(|d| d.to_f64().to_string()).collect();
        format!("[{}] . {}", l.join(", "), self.plot)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Highest order of divided difference examined.
    pub max_order: u32,
    /// Scales run over `h = 2^-s` for `s` in this inclusive range.
    pub scale_exponents: (u32, u32),
    /// Minimum total growth across the admissible run for divergence.
    pub growth_threshold: f64,
    /// Number of consecutive growing steps required.
    pub agreement_policy: usize,
    /// A step counts as growing when `|D(h/2)| ≥ step_ratio·|D(h)|`.
    pub step_ratio: f64,
    /// A value is admissible when it exceeds the noise estimate by this
    /// factor.
    pub noise_margin: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_order: 8,
            scale_exponents: (2, 20),
            growth_threshold: 10.0,
            agreement_policy: 3,
            step_ratio: 1.5,
            noise_margin: 1e3,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.scale_exponents;
        if self.max_order < 2
            || lo > hi
            || self.growth_threshold <= 0.0
            || self.agreement_policy == 0
            || self.step_ratio <= 1.0
            || self.noise_margin <= 0.0
        {
            return Err(Error::Assertion(format!("invalid oracle configuration {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "order")]
pub enum Classification {
    /// Orders up to the given one looked bounded; the next one grew but
    /// not conclusively.
    SmoothUpTo(u32),
    CInfinityLikely,
    /// Smallest order whose divided differences diverge.
    NonSmoothAt0(u32),
}

impl Classification {
    pub fn is_c_infinity(self) -> bool {
        self == Classification::CInfinityLikely
    }

    /// Does this classification confirm the given symbolic smoothness?
    pub fn agrees_with(self, smooth: bool) -> bool {
        match self {
            Classification::CInfinityLikely => smooth,
            Classification::NonSmoothAt0(_) => !smooth,
            Classification::SmoothUpTo(_) => false,
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::SmoothUpTo(k) => write!(f, "SmoothUpTo({k})"),
            Classification::CInfinityLikely => write!(f, "CInfinityLikely"),
            Classification::NonSmoothAt0(k) => write!(f, "NonSmoothAt0(order {k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub expression: String,
    pub order: u32,
    pub scale: f64,
    pub value: f64,
    pub verdict: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum OrderStatus {
    Bounded,
    Suspicious,
    Divergent,
    Overflow,
}

fn binomials(k: u32) -> Vec<f64> {
    let mut row = vec![1.0];
    for i in 1..=k as usize {
        let prev = row[i - 1] * (k as f64 - i as f64 + 1.0) / i as f64;
        row.push(prev);
    }
    row
}

struct OrderScan {
    status: OrderStatus,
    values: Vec<(f64, f64, bool)>,
}

fn scan_order(f: &dyn Sampled, k: u32, cfg: &OracleConfig) -> OrderScan {
    let binom = binomials(k);
    let u = dd::EPS * 8.0 * (f.degree_hint() + k + 1) as f64;
    let (lo, hi) = cfg.scale_exponents;
    let mut values = Vec::new();
    for s in lo..=hi {
        let mut d = Dd::ZERO;
        let mut noise = 0.0;
        for (i, c) in binom.iter().enumerate() {
            // (k/2 - i)·2^-s = (k - 2i)·2^-(s+1), exact in binary.
            let x = Dd::from_f64(k as f64 - 2.0 * i as f64).scale_pow2(-(s as i32) - 1);
            let (v, mag) = f.sample(x);
            let term = Dd::from_f64(*c) * v;
            d = if i % 2 == 0 { d + term } else { d - term };
            noise += c * mag;
        }
        let shift = (s * k) as i32;
        let value = d.scale_pow2(shift).to_f64();
        let noise = u * noise * 2f64.powi(shift);
        if !value.is_finite() {
            values.push((2f64.powi(-(s as i32)), value, false));
            return OrderScan { status: OrderStatus::Overflow, values };
        }
        let admissible = value != 0.0 && value.abs() > cfg.noise_margin * noise;
        values.push((2f64.powi(-(s as i32)), value, admissible));
    }
    OrderScan { status: judge(&values, cfg), values }
}

fn judge(values: &[(f64, f64, bool)], cfg: &OracleConfig) -> OrderStatus {
    // Last run of consecutive admissible scales.
    let Some(end) = values.iter().rposition(|v| v.2) else { return OrderStatus::Bounded };
    let start = values[..=end].iter().rposition(|v| !v.2).map_or(0, |p| p + 1);
    let run: Vec<f64> = values[start..=end].iter().map(|v| v.1.abs()).collect();
    if run.len() < 2 {
        return OrderStatus::Bounded;
    }
    let ratios: Vec<f64> = run.windows(2).map(|w| w[1] / w[0]).collect();
    let tail = &ratios[ratios.len().saturating_sub(cfg.agreement_policy)..];
    if !tail.iter().all(|r| *r >= cfg.step_ratio) {
        return OrderStatus::Bounded;
    }
    let growth = run[run.len() - 1] / run[0];
    if tail.len() == cfg.agreement_policy && growth >= cfg.growth_threshold {
        OrderStatus::Divergent
    } else {
        OrderStatus::Suspicious
    }
}

pub fn classify(f: &dyn Sampled, cfg: &OracleConfig) -> Classification {
    classify_inner(f, cfg, None)
}

/// Like [`classify`], also returning one record per (order, scale).
pub fn classify_traced(f: &dyn Sampled, cfg: &OracleConfig) -> (Classification, Vec<TraceRecord>) {
    let mut records = Vec::new();
    let c = classify_inner(f, cfg, Some(&mut records));
    (c, records)
}

fn classify_inner(f: &dyn Sampled, cfg: &OracleConfig, mut trace: Option<&mut Vec<TraceRecord>>) -> Classification {
    let mut suspicious = None;
    for k in 1..=cfg.max_order {
        let scan = scan_order(f, k, cfg);
        if let Some(records) = trace.as_deref_mut() {
            let label = match scan.status {
                OrderStatus::Bounded => "bounded",
                OrderStatus::Suspicious => "inconclusive",
                OrderStatus::Divergent => "divergent",
                OrderStatus::Overflow => "overflow",
            };
            let expression = f.describe();
            records.extend(scan.values.iter().map(|&(scale, value, admissible)| TraceRecord {
                expression: expression.clone(),
                order: k,
                scale,
                value,
                verdict: if admissible || scan.status == OrderStatus::Overflow { label } else { "noise" },
            }));
        }
        match scan.status {
            OrderStatus::Divergent | OrderStatus::Overflow => return Classification::NonSmoothAt0(k),
            OrderStatus::Suspicious if suspicious.is_none() => suspicious = Some(k),
            _ => {}
        }
    }
    match suspicious {
        Some(k) => Classification::SmoothUpTo(k - 1),
        None => Classification::CInfinityLikely,
    }
}

pub fn classify_batch(exprs: &[FunctionExpr], cfg: &OracleConfig, exec: Exec) -> Vec<Classification> {
    exec.map(exprs, |e| classify(e, cfg))
}

#[derive(Clone, Debug)]
pub struct Trial {
    pub plot: Plot,
    /// Symbolic smoothness of the composite.
    pub expected_smooth: bool,
    pub classification: Classification,
}

impl Trial {
    pub fn agrees(&self) -> bool {
        self.classification.agrees_with(self.expected_smooth)
    }
}

#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub verdict: Verdict,
    /// Set for coarse spaces, which have no sampled representation.
    pub skipped: bool,
    pub trials: Vec<Trial>,
}

impl CrossValidation {
    pub fn agreement_rate(&self) -> f64 {
        if self.trials.is_empty() {
            return 1.0;
        }
        self.trials.iter().filter(|t| t.agrees()).count() as f64 / self.trials.len() as f64
    }

    /// Smooth verdicts need every trial smooth; non-smooth verdicts need at
    /// least one trial caught by the oracle.
    pub fn consistent(&self) -> bool {
        match self.verdict {
            _ if self.skipped => true,
            Verdict::Smooth => self.trials.iter().all(|t| t.classification.is_c_infinity()),
            Verdict::NotSmooth => {
                self.trials.iter().any(|t| matches!(t.classification, Classification::NonSmoothAt0(_)))
            }
            Verdict::Unknown => true,
        }
    }
}

/// Samples plots of `space`, composes them with `functional` and compares
/// the oracle with the symbolic verdict. The bare generators come first.
pub fn cross_validate(
    space: &DiffSpace,
    functional: &[Rational],
    trials: usize,
    seed: u64,
    cfg: &OracleConfig,
) -> Result<CrossValidation> {
    let f =
        LinearMap::new(space.clone(), DiffSpace::fine(1)?, Matrix::from_rows(space.dim(), &[functional.to_vec()])?)?;
    let verdict = is_smooth_linear(&f)?.verdict;
    if space.is_coarse() {
        return Ok(CrossValidation { verdict, skipped: true, trials: vec![] });
    }
    let gens: Vec<Plot> = match space.diffeology() {
        Diffeology::Generated(g) => g.clone(),
        _ => space.kink_directions()?.iter().map(|k| k.plot()).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plots: Vec<Plot> = gens.iter().take(trials).cloned().collect();
    while plots.len() < trials {
        let smooth = sample::smooth_plot(&mut rng, space.dim(), 4);
        plots.push(if gens.is_empty() {
            smooth
        } else {
            let g = &gens[plots.len() % gens.len()];
            sample::combination(&mut rng, g, &smooth)?
        });
    }
    let trials = plots
        .into_iter()
        .map(|plot| {
            let symbolic =
                plot.components().iter().zip(functional).fold(FunctionExpr::zero(), |acc, (p, l)| &acc + &p.scale(l));
            let classification = classify(&Composite::new(functional, &plot)?, cfg);
            Ok(Trial { expected_smooth: symbolic.is_smooth(), classification, plot })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossValidation { verdict, skipped: false, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use crate::rat;
    use crate::space::basis_kink;

    fn class(text: &str) -> Classification {
        classify(&parse_expr(text).unwrap(), &OracleConfig::default())
    }

    #[test]
    fn atoms_classify_with_pinned_orders() {
        for d in 0..=6u32 {
            assert_eq!(class(&format!("x^{d}")), Classification::CInfinityLikely, "x^{d}");
            assert_eq!(class(&format!("abs(x)*x^{d}")), Classification::NonSmoothAt0(d + 2), "|x|x^{d}");
        }
    }

    #[test]
    fn worked_examples() {
        assert_eq!(class("x^3"), Classification::CInfinityLikely);
        assert_eq!(class("abs(x)"), Classification::NonSmoothAt0(2));
        assert_eq!(class("abs(x)*x"), Classification::NonSmoothAt0(3));
        assert_eq!(class("0"), Classification::CInfinityLikely);
    }

    #[test]
    fn mixed_expressions() {
        assert_eq!(class("10 - 7*x^6 + 1/9*abs(x)*x^4"), Classification::NonSmoothAt0(6));
        assert_eq!(class("-10*x + 3*x^5 - 2/7"), Classification::CInfinityLikely);
    }

    #[test]
    fn traced_records_cover_the_grid() {
        let cfg = OracleConfig::default();
        let (c, records) = classify_traced(&parse_expr("abs(x)").unwrap(), &cfg);
        assert_eq!(c, Classification::NonSmoothAt0(2));
        assert_eq!(records.len(), 2 * 19);
        assert!(records.iter().any(|r| r.order == 2 && r.verdict == "divergent"));
    }

    #[test]
    fn deterministic() {
        let e = parse_expr("3*abs(x)*x^2 - x^4").unwrap();
        let cfg = OracleConfig::default();
        let a = classify_batch(&[e.clone(), e.clone()], &cfg, Exec::Parallel);
        assert_eq!(a[0], a[1]);
        assert_eq!(a[0], classify(&e, &cfg));
    }

    #[test]
    fn cross_validation_examples() {
        let cfg = OracleConfig::default();
        let v = DiffSpace::generated(3, vec![basis_kink(3, 0)]).unwrap();
        let r = cross_validate(&v, &[rat(0), rat(1), rat(1)], 12, 1, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Smooth);
        assert!(r.trials.iter().all(|t| t.classification.is_c_infinity()));

        let r = cross_validate(&v, &[rat(1), rat(1), rat(1)], 12, 1, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::NotSmooth);
        assert!(matches!(r.trials[0].classification, Classification::NonSmoothAt0(_)));
        assert!(r.consistent());

        let r = cross_validate(&DiffSpace::fine(2).unwrap(), &[rat(3), rat(-1)], 8, 2, &cfg).unwrap();
        assert!(r.trials.iter().all(|t| t.classification.is_c_infinity()));
        assert!(cross_validate(&DiffSpace::coarse(2).unwrap(), &[rat(1), rat(0)], 8, 2, &cfg).unwrap().skipped);
    }
}

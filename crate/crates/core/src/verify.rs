//! The verification suite: numbered criteria over generated sweeps plus
//! named checks on the spaces of a [`SpaceFile`].

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bilinear::{
    curry_unchecked, is_smooth_bilinear, is_smooth_curried, smooth_bilinear_basis, smooth_curried_basis, uncurry,
    CurriedMap,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hom::{
    diffeological_dual, dual_map, hat_dual_map, hat_dual_wellposed, is_smooth_linear, self_duality, LinearMap, Verdict,
    Witness,
};
use crate::linalg::{unit_vector, Matrix};
use crate::oracle::{classify, classify_batch, Classification, OracleConfig};
use crate::sample;
use crate::space::{DiffSpace, Plot};
use crate::spacefile::SpaceFile;
use crate::tensor::{distribute, endo_remark_check, hat_f, hat_g, tensor_dual_iso, tensor_of_maps, tensor_product};
use crate::{Atom, FunctionExpr};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: f64,
    pub limit_millis: Option<f64>,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let limit = self.limit_millis.map(|l| format!(" (limit {l:.0} ms)")).unwrap_or_default();
        format!("{status} {:<34} {:>9.1} ms{limit}  {}", self.name, self.millis, self.detail)
    }
}

fn with_failures(head: String, bad: &[String]) -> String {
    if bad.is_empty() {
        format!("{head}, 0 failures")
    } else {
        format!("{head}, {} failures: {}", bad.len(), bad.join("; "))
    }
}

fn timed(name: &str, limit_millis: Option<f64>, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let outcome = f();
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let (mut passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(limit) = limit_millis {
        if millis >= limit {
            passed = false;
            detail = format!("{detail}; over time limit");
        }
    }
    CheckResult { name: name.to_string(), passed, detail, millis, limit_millis }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Duals of coarse, fine and basis-kink spaces in dimensions up to 5.
pub fn criterion_1(_exec: Exec) -> CheckResult {
    timed("c01-dual-dimensions", Some(1e3), || {
        let mut bad = Vec::new();
        for n in 1..=5 {
            let c = diffeological_dual(&DiffSpace::coarse(n)?)?.dim();
            let f = diffeological_dual(&DiffSpace::fine(n)?)?.dim();
            if c != 0 || f != n {
                bad.push(format!("n={n}: coarse {c}, fine {f}"));
            }
            for k in 1..n {
                let kinks: Vec<usize> = (0..k).collect();
                let d = diffeological_dual(&sample::basis_kink_space(n, &kinks)?)?.dim();
                if d != n - k {
                    bad.push(format!("n={n}, k={k}: {d}"));
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "all 5 + 5 + 10 cases exact".into() } else { bad.join("; ") }))
    })
}

/// No non-zero smooth bilinear forms on coarse spaces into the line.
pub fn criterion_2(_exec: Exec) -> CheckResult {
    timed("c02-bilinear-vanishing", Some(1e3), || {
        let dims = (2..=4)
            .map(|n| Ok(smooth_bilinear_basis(&DiffSpace::coarse(n)?, &DiffSpace::fine(1)?)?.dim()))
            .collect::<Result<Vec<_>>>()?;
        Ok((dims.iter().all(|d| *d == 0), format!("dims for n = 2, 3, 4: {dims:?}")))
    })
}

/// Generated spaces of dimension at most 3 with at most two generators
/// drawn from a fixed candidate list.
pub fn small_generated_spaces() -> Vec<DiffSpace> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let mut cands: Vec<Plot> = (0..n).map(|i| Plot::kink(&unit_vector(n, i), 0)).collect();
        if n > 1 {
            cands.push(Plot::kink(&vec![crate::rat(1); n], 0));
        }
        cands.push(Plot::kink(&unit_vector(n, 0), 1));
        out.push(DiffSpace::generated(n, vec![]).expect("n > 0"));
        for i in 0..cands.len() {
            out.push(DiffSpace::generated(n, vec![cands[i].clone()]).expect("n > 0"));
            for j in i + 1..cands.len() {
                out.push(DiffSpace::generated(n, vec![cands[i].clone(), cands[j].clone()]).expect("n > 0"));
            }
        }
    }
    out
}

#[derive(Default)]
struct CurryTally {
    forms: usize,
    round_trip: usize,
    verdict: usize,
    dimension: usize,
}

fn curry_sweep(v: &DiffSpace, seed: u64) -> Result<CurryTally> {
    let mut rng = rng(seed);
    let mut t = CurryTally::default();
    let line = DiffSpace::fine(1)?;
    for w in [line.clone(), DiffSpace::fine(2)?, DiffSpace::coarse(1)?] {
        let a = smooth_bilinear_basis(v, &w)?;
        let c = smooth_curried_basis(v, &w)?;
        let images_smooth = c.basis_vectors().iter().all(|g| {
            CurriedMap::from_flat(v.clone(), v.clone(), w.clone(), g).is_ok_and(|g| a.contains(&uncurry(&g).flat()))
        });
        if a.dim() != c.dim() || !images_smooth {
            t.dimension += 1;
        }
    }
    for i in 0..100 {
        let b = if i % 2 == 0 {
            sample::bilinear_form(&mut rng, v, v, &line)?
        } else {
            sample::smooth_bilinear_form(&mut rng, v, v, &line)?
        };
        t.forms += 1;
        let g = curry_unchecked(&b);
        if uncurry(&g) != b || curry_unchecked(&uncurry(&g)) != g {
            t.round_trip += 1;
        }
        let vb = is_smooth_bilinear(&b)?.verdict;
        let vg = is_smooth_curried(&g)?.verdict;
        let vb2 = is_smooth_bilinear(&uncurry(&g))?.verdict;
        if vb != vg || vb2 != vg {
            t.verdict += 1;
        }
    }
    Ok(t)
}

/// Curry/uncurry round trips and verdict preservation.
pub fn criterion_3(exec: Exec) -> CheckResult {
    timed("c03-curry-correspondence", Some(10e3), || {
        let spaces = small_generated_spaces();
        let tallies = exec.map_range(spaces.len(), |i| curry_sweep(&spaces[i], 300 + i as u64));
        let mut total = CurryTally::default();
        for t in tallies {
            let t = t?;
            total.forms += t.forms;
            total.round_trip += t.round_trip;
            total.verdict += t.verdict;
            total.dimension += t.dimension;
        }
        let ok = total.round_trip == 0 && total.verdict == 0 && total.dimension == 0;
        Ok((
            ok,
            format!(
                "{} spaces, {} forms: {} round-trip, {} verdict, {} dimension mismatches",
                spaces.len(),
                total.forms,
                total.round_trip,
                total.verdict,
                total.dimension
            ),
        ))
    })
}

fn dual_map_trial(seed: u64) -> Result<Option<String>> {
    let mut rng = rng(seed);
    let v = sample::space(&mut rng, 4);
    let w = sample::space(&mut rng, 4);
    let f = sample::smooth_map(&mut rng, &v, &w)?;
    let fs = match dual_map(&f) {
        Ok(m) => m,
        Err(e) => return Ok(Some(format!("seed {seed}: {e}"))),
    };
    let d = is_smooth_linear(&fs)?;
    Ok((d.verdict != Verdict::Smooth).then(|| format!("seed {seed}: dual map is {}", d.verdict)))
}

/// The transposed map between hat duals of fine and coarse `R^n`.
pub fn hat_dual_counterexample(n: usize, matrix: &Matrix) -> Result<(bool, String)> {
    let f = LinearMap::new(DiffSpace::fine(n)?, DiffSpace::coarse(n)?, matrix.clone())?;
    let t = hat_dual_map(&f, &Matrix::identity(n), &Matrix::identity(n))?;
    let d = is_smooth_linear(&t)?;
    match (d.verdict, d.witness) {
        (Verdict::NotSmooth, Some(Witness::Plot { plot, image })) => {
            let ok = t.domain().is_plot(&plot)?.is_plot() && !t.codomain().is_plot(&image)?.is_plot();
            Ok((ok, format!("n={n}: NotSmooth, witness {plot} ↦ {image}")))
        }
        (v, _) => Ok((false, format!("n={n}: {v} without a plot witness"))),
    }
}

/// Dual maps of random smooth maps, and the hat-dual counterexample.
pub fn criterion_4(exec: Exec) -> CheckResult {
    timed("c04-dual-map-smoothness", Some(5e3), || {
        let failures: Vec<String> = exec
            .map_range(200, |i| dual_map_trial(400 + i as u64))
            .into_iter()
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut rng = rng(44);
        let mut notes = Vec::new();
        let mut counter_ok = true;
        for n in [2, 3] {
            let m = loop {
                let m = sample::matrix(&mut rng, n, n);
                if !m.is_zero() {
                    break m;
                }
            };
            let (ok, note) = hat_dual_counterexample(n, &m)?;
            counter_ok &= ok;
            notes.push(note);
        }
        let ok = failures.is_empty() && counter_ok;
        let mut detail = format!("200 dual maps, {} failures", failures.len());
        if let Some(f) = failures.first() {
            detail.push_str(&format!(" (first: {f})"));
        }
        detail.push_str(&format!("; {}", notes.join("; ")));
        Ok((ok, detail))
    })
}

/// Fine, coarse, one-kink and two-kink spaces of dimension up to 3.
pub fn tensor_grid() -> Vec<DiffSpace> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(DiffSpace::fine(n).expect("n > 0"));
        out.push(DiffSpace::coarse(n).expect("n > 0"));
        out.push(sample::basis_kink_space(n, &[0]).expect("n > 0"));
        if n >= 2 {
            out.push(sample::basis_kink_space(n, &[0, 1]).expect("n > 0"));
        }
    }
    out
}

/// `dim (V⊗W)* = dim V*·dim W*` and the comparison map is an isomorphism.
pub fn criterion_5(exec: Exec) -> CheckResult {
    timed("c05-tensor-dual-multiplicativity", Some(5e3), || {
        let grid = tensor_grid();
        let cells: Vec<(usize, usize)> = (0..grid.len()).flat_map(|i| (0..grid.len()).map(move |j| (i, j))).collect();
        let results = exec.map(&cells, |&(i, j)| -> Result<Option<String>> {
            let (v, w) = (&grid[i], &grid[j]);
            let t = tensor_product(v, w)?;
            let lhs = diffeological_dual(&t)?.dim();
            let rhs = diffeological_dual(v)?.dim() * diffeological_dual(w)?.dim();
            let iso = tensor_dual_iso(v, w);
            Ok(match iso {
                Ok(f) if lhs == rhs && f.is_iso() => None,
                Ok(_) => Some(format!("{v} ⊗ {w}: {lhs} vs {rhs}")),
                Err(e) => Some(format!("{v} ⊗ {w}: {e}")),
            })
        });
        let bad: Vec<String> = results.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
        Ok((bad.is_empty(), with_failures(format!("{} cells", cells.len()), &bad)))
    })
}

/// Tensor products that differ from the corresponding smooth hom spaces.
pub fn criterion_6(_exec: Exec) -> CheckResult {
    timed("c06-non-isomorphism", Some(1e3), || {
        let (v, w) = (DiffSpace::coarse(2)?, DiffSpace::fine(1)?);
        let h = hat_f(&v, &w)?;
        let g = hat_g(&v, &w)?;
        let e = endo_remark_check(&v)?;
        let ok = (h.domain_dim, h.smooth_target_dim) == (2, 0)
            && !h.is_iso_onto_smooth_maps()
            && g.smooth_target_dim == 2
            && (e.dual_tensor_dim, e.smooth_endo_dim) == (0, Some(4));
        Ok((
            ok,
            format!(
                "V⊗W {} vs L∞(V*,W) {}; L∞(W*,V) {}; V*⊗V {} vs L∞(V,V) {:?}",
                h.domain_dim, h.smooth_target_dim, g.smooth_target_dim, e.dual_tensor_dim, e.smooth_endo_dim
            ),
        ))
    })
}

fn distribute_trial(seed: u64) -> Result<Option<String>> {
    let mut rng = rng(seed);
    let (a, b, c) = (sample::space(&mut rng, 3), sample::space(&mut rng, 3), sample::space(&mut rng, 3));
    let t = distribute(&a, &b, &c)?;
    let fwd = is_smooth_linear(&t)?.verdict;
    let inv = is_smooth_linear(&t.inverse()?)?.verdict;
    let (l, r) = (t.domain().singular_span()?.dim(), t.codomain().singular_span()?.dim());
    Ok((fwd != Verdict::Smooth || inv != Verdict::Smooth || l != r)
        .then(|| format!("seed {seed}: forward {fwd}, inverse {inv}, spans {l} vs {r}")))
}

/// Distributivity over direct sums on random triples.
pub fn criterion_7(exec: Exec) -> CheckResult {
    timed("c07-distributivity", Some(5e3), || {
        let bad: Vec<String> = exec
            .map_range(50, |i| distribute_trial(700 + i as u64))
            .into_iter()
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok((bad.is_empty(), with_failures("50 triples".into(), &bad)))
    })
}

/// Random expressions used for the oracle comparison.
pub fn oracle_corpus(count: usize, seed: u64) -> Vec<FunctionExpr> {
    let mut rng = rng(seed);
    (0..count).map(|_| sample::expr(&mut rng, 6, 4)).collect()
}

pub fn atom_basis() -> Vec<FunctionExpr> {
    (0..=6)
        .flat_map(|d| {
            [FunctionExpr::term(Atom::mono(d), crate::rat(1)), FunctionExpr::term(Atom::abs_mono(d), crate::rat(1))]
        })
        .collect()
}

/// Symbolic smoothness against the numeric oracle.
pub fn criterion_8(exec: Exec) -> CheckResult {
    timed("c08-oracle-agreement", Some(30e3), || {
        let cfg = OracleConfig::default();
        let corpus = oracle_corpus(1000, 8);
        let classes = classify_batch(&corpus, &cfg, exec);
        let disagreements: Vec<String> = corpus
            .iter()
            .zip(&classes)
            .filter(|(e, c)| !c.agrees_with(e.is_smooth()))
            .map(|(e, c)| format!("{e}: {c}"))
            .collect();
        let rate = 1.0 - disagreements.len() as f64 / corpus.len() as f64;
        let atoms_ok = atom_basis().iter().all(|a| {
            let expected = match a.terms().next() {
                Some((atom, _)) if !atom.is_smooth() => Classification::NonSmoothAt0(atom.degree + 2),
                _ => Classification::CInfinityLikely,
            };
            classify(a, &cfg) == expected
        });
        let mut detail = format!(
            "agreement {:.1}% on {} expressions, atom basis {}",
            rate * 100.0,
            corpus.len(),
            if atoms_ok { "exact" } else { "WRONG" }
        );
        if !disagreements.is_empty() {
            detail.push_str(&format!("; disagreements: {}", disagreements.join("; ")));
        }
        Ok((rate >= 0.99 && atoms_ok, detail))
    })
}

/// One random well-posedness tuple: a space, two isomorphisms and a
/// sample plot (half of the samples are plots of the first hat dual).
pub fn wellposedness_tuple(seed: u64) -> Result<(DiffSpace, Matrix, Matrix, Plot)> {
    let mut rng = rng(seed);
    let v = sample::space(&mut rng, 3);
    let n = v.dim();
    let (i1, i2) = (sample::invertible(&mut rng, n), sample::invertible(&mut rng, n));
    let p = if rng.gen_bool(0.5) { sample::plot_of(&mut rng, &v)?.apply(&i1)? } else { sample::any_plot(&mut rng, n) };
    Ok((v, i1, i2, p))
}

/// Plot membership under pushforwards of one space along two isos.
pub fn criterion_9(exec: Exec) -> CheckResult {
    timed("c09-hat-dual-wellposed", Some(2e3), || {
        let reports = exec.map_range(20, |i| -> Result<_> {
            let (v, i1, i2, p) = wellposedness_tuple(900 + i as u64)?;
            let r = hat_dual_wellposed(&v, &i1, &i2, std::slice::from_ref(&p))?;
            Ok((v, r))
        });
        let mut mismatches = Vec::new();
        let mut transported_ok = true;
        for r in reports {
            let (v, r) = r?;
            transported_ok &= r.transport_agrees();
            for c in r.violations() {
                mismatches.push(format!(
                    "{v}, sample {}: {} vs {}",
                    c.sample,
                    c.under_first.label(),
                    c.under_second.label()
                ));
            }
        }
        let mut detail = format!(
            "20 tuples, {} mismatches; transported samples {}",
            mismatches.len(),
            if transported_ok { "all agree" } else { "DISAGREE" }
        );
        if !mismatches.is_empty() {
            detail.push_str(": ");
            detail.push_str(&mismatches.join("; "));
        }
        Ok((mismatches.is_empty(), detail))
    })
}

pub type Criterion = fn(Exec) -> CheckResult;

pub const CRITERIA: [Criterion; 9] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
];

fn check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    timed(name, None, f)
}

fn verdict_of(f: &LinearMap) -> Result<Verdict> {
    Ok(is_smooth_linear(f)?.verdict)
}

pub type FileCheck<'a> = Box<dyn FnOnce() -> CheckResult + Send + 'a>;

/// Named checks reading their spaces and maps from `file` (see the
/// bundled example document for the expected names).
pub fn file_checks(file: &SpaceFile) -> Vec<FileCheck<'_>> {
    let s = |name: &str| file.space(name).cloned();
    let m = |name: &str| file.map(name).cloned();
    vec![
        Box::new(move || {
            check("example-coarse-dual", || {
                let d = diffeological_dual(&s("coarse_R3")?)?.dim();
                let v = verdict_of(&m("coarse_functional")?)?;
                Ok((d == 0 && v == Verdict::NotSmooth, format!("dim V* = {d}; non-zero functional {v}")))
            })
        }),
        Box::new(move || {
            check("example-generated-dual", || {
                let d4 = diffeological_dual(&s("kinks_R4")?)?.dim();
                let d3 = diffeological_dual(&s("kink_R3")?)?.dim();
                let v = verdict_of(&m("kink_R3_functional")?)?;
                Ok((
                    d4 == 2 && d3 == 2 && v == Verdict::Smooth,
                    format!("R^4, 2 kinks: {d4}; R^3, 1 kink: {d3}; (0,1,1) {v}"),
                ))
            })
        }),
        Box::new(move || {
            check("bilinear-coarse-vanishing", || {
                let d = smooth_bilinear_basis(&s("coarse_R2")?, &s("fine_R1")?)?.dim();
                Ok((d == 0, format!("dim B∞ = {d}")))
            })
        }),
        Box::new(move || {
            check("bilinear-curry-dimensions", || {
                let mut parts = Vec::new();
                let mut ok = true;
                for name in ["kink_R2", "kink_R3", "fine_R2", "coarse_R2"] {
                    let v = s(name)?;
                    let w = s("fine_R1")?;
                    let (a, c) = (smooth_bilinear_basis(&v, &w)?.dim(), smooth_curried_basis(&v, &w)?.dim());
                    ok &= a == c;
                    parts.push(format!("{name}: {a}/{c}"));
                }
                Ok((ok, parts.join(", ")))
            })
        }),
        Box::new(move || {
            check("fine-self-duality", || {
                let r = self_duality(&s("fine_R3")?)?;
                let ok = r.bijective && r.forward_verdict == Verdict::Smooth && r.backward_verdict == Verdict::Smooth;
                Ok((ok, format!("bijective {}, {} / {}", r.bijective, r.forward_verdict, r.backward_verdict)))
            })
        }),
        Box::new(move || {
            check("hat-dual-iso-independence", || {
                let swap = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
                let shear = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
                let mut bad = Vec::new();
                for name in ["fine_R2", "coarse_R2", "kink_R2"] {
                    let v = s(name)?;
                    let samples: Vec<Plot> = (0..2).map(|i| Plot::kink(&unit_vector(2, i), 0)).collect();
                    for iso in [&swap, &shear] {
                        let r = hat_dual_wellposed(&v, &Matrix::identity(2), iso, &samples)?;
                        for c in r.violations() {
                            bad.push(format!(
                                "{name}, iso {iso}, sample {}: {} vs {}",
                                c.sample,
                                c.under_first.label(),
                                c.under_second.label()
                            ));
                        }
                    }
                }
                Ok((bad.is_empty(), if bad.is_empty() { "verdicts agree".into() } else { bad.join("; ") }))
            })
        }),
        Box::new(move || {
            check("dual-map-smooth", || {
                let f = m("kink_functional")?;
                let fs = dual_map(&f)?;
                let v = verdict_of(&fs)?;
                Ok((
                    v == Verdict::Smooth && fs.matrix() == &Matrix::from_ints(&[&[1]]),
                    format!("f* = {}, {v}", fs.matrix()),
                ))
            })
        }),
        Box::new(move || {
            check("hat-dual-map-counterexample", || {
                let f = m("fine_to_coarse")?;
                hat_dual_counterexample(f.domain().dim(), f.matrix())
            })
        }),
        Box::new(move || {
            check("tensor-of-maps-smooth", || {
                let f = m("kink_functional")?;
                let g = LinearMap::identity(&s("fine_R1")?);
                let fg = tensor_of_maps(&f, &g)?;
                let v = verdict_of(&fg)?;
                Ok((v == Verdict::Smooth, format!("f ⊗ id = {}, {v}", fg.matrix())))
            })
        }),
        Box::new(move || {
            check("distributivity", || {
                let t = distribute(&s("kink_R2")?, &s("fine_R1")?, &s("fine_R1")?)?;
                let (a, b) = (verdict_of(&t)?, verdict_of(&t.inverse()?)?);
                let (l, r) = (t.domain().singular_span()?.dim(), t.codomain().singular_span()?.dim());
                Ok((a == Verdict::Smooth && b == Verdict::Smooth && l == r, format!("{a} / {b}, spans {l} and {r}")))
            })
        }),
        Box::new(move || {
            check("tensor-not-smooth-hom", || {
                let h = hat_f(&s("coarse_R2")?, &s("fine_R1")?)?;
                let g = hat_g(&s("coarse_R2")?, &s("fine_R1")?)?;
                let ok = h.domain_dim == 2 && h.smooth_target_dim == 0 && g.smooth_target_dim == 2;
                Ok((ok, format!("{} vs {}; L∞(W*,V) {}", h.domain_dim, h.smooth_target_dim, g.smooth_target_dim)))
            })
        }),
        Box::new(move || {
            check("endomorphism-remark", || {
                let e = endo_remark_check(&s("coarse_R2")?)?;
                Ok((e.equal() == Some(false), format!("{} vs {:?}", e.dual_tensor_dim, e.smooth_endo_dim)))
            })
        }),
        Box::new(move || {
            check("tensor-dual-iso", || {
                let a = tensor_dual_iso(&s("kink_R2")?, &s("kink_R2")?)?;
                let b = tensor_dual_iso(&s("coarse_R2")?, &s("fine_R1")?)?;
                let t = diffeological_dual(&s("coarse_R2_x_fine_R1")?)?.dim();
                let ok = a.is_iso() && (a.source_dim, b.source_dim, b.target_dim, t) == (1, 0, 0, 0);
                Ok((ok, format!("{}→{}; {}→{}", a.source_dim, a.target_dim, b.source_dim, b.target_dim)))
            })
        }),
        Box::new(move || {
            check("mixed-generator-span", || {
                let v = s("mixed_R2")?;
                let span = v.singular_span()?;
                let ok = span.dim() == 1 && span.contains(&[crate::rat(1), crate::rat(1)]);
                let f = LinearMap::new(v.clone(), s("fine_R1")?, Matrix::from_ints(&[&[1, -1]]))?;
                let g = LinearMap::new(v, s("fine_R1")?, Matrix::from_ints(&[&[1, 0]]))?;
                let (a, b) = (verdict_of(&f)?, verdict_of(&g)?);
                Ok((
                    ok && a == Verdict::Smooth && b == Verdict::NotSmooth,
                    format!("S = {span}; (1,-1) {a}, (1,0) {b}"),
                ))
            })
        }),
    ]
}

/// All criteria and file checks, merged by name.
pub fn run_all(file: &SpaceFile, exec: Exec) -> Vec<CheckResult> {
    let mut out = exec.map(&CRITERIA, |c| c(exec));
    let checks = file_checks(file);
    let slots: Vec<std::sync::Mutex<Option<FileCheck<'_>>>> =
        checks.into_iter().map(|c| std::sync::Mutex::new(Some(c))).collect();
    out.extend(exec.map(&slots, |slot| {
        let f = slot.lock().expect("unpoisoned").take().expect("run once");
        f()
    }));
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// Looks up a criterion by number (1 to 9).
pub fn criterion(number: usize) -> Result<Criterion> {
    CRITERIA
        .get(number.wrapping_sub(1))
        .copied()
        .ok_or_else(|| Error::UnknownName { kind: "criterion", name: number.to_string() })
}

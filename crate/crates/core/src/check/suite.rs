//! The property suite. Every case draws from its own ChaCha stream keyed by
//! `(seed, criterion, case)`, so results do not depend on scheduling and the
//! report is identical for parallel and sequential runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{gen, oracle};
use crate::adhm::{
    check_commuting, ideal_normal_form, is_stable, joint_spectrum, marked_automorphisms_trivial, rees_family,
    rees_limit, sequiv_normal_form, triangularize, tuple_cmp, CommutingTuple,
};
use crate::dalgebra::{cohomology_dim, fm_dual, gl_act, jacobi_check, orbit_invariants, UtaiTriple};
use crate::io::SCHEMA;
use crate::linalg::{Field, GaussRat, Matrix, Mode, ToleranceFrame, C64};
use crate::moduli::{
    betti_marked, diagram_check, hodge_deform, hodge_rescale, hodge_undeform, rh_to_betti, rh_to_derham, HilbPoint,
};
use crate::torus::{exp_rh, log_rh, AbelianVarietyModel, BettiPoint, FiberPoint, NaturalPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Parallel,
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub mode: Mode,
    pub seed: u64,
    /// Multiplies every case count; 1 is the acceptance scale.
    pub scale: f64,
    pub n_max: usize,
    pub d_max: usize,
    /// Scheduling only; never changes the report.
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Exact,
            seed: 20_240_601,
            scale: 1.0,
            n_max: 6,
            d_max: 2,
            execution: Execution::Parallel,
        }
    }
}

impl SuiteConfig {
    fn count(&self, base: usize) -> usize {
        ((base as f64 * self.scale).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest relative residual over passing cases; 0 for exact comparisons.
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub config: SuiteConfig,
    pub criteria: Vec<CriterionReport>,
    pub passed: bool,
}

pub const CRITERIA: [(u32, &str); 8] = [
    (1, "triangularization completeness"),
    (2, "stability equivalence"),
    (3, "ideal normal form is an orbit invariant"),
    (4, "Rees degeneration to the S-equivalence form"),
    (5, "marked diagram commutes"),
    (6, "Riemann-Hilbert round trip"),
    (7, "Hodge deformation round trip and composition"),
    (8, "D-algebra calculus"),
];

/// `Ok(residual)` or `Err(reason)`.
type Case = Result<f64, String>;

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let criteria: Vec<CriterionReport> = CRITERIA.iter().map(|(id, _)| run_criterion(*id, config)).collect();
    SuiteReport {
        schema: SCHEMA,
        config: *config,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

/// Runs one criterion by its number (1 to 8).
pub fn run_criterion(id: u32, config: &SuiteConfig) -> CriterionReport {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or_else(|| panic!("no criterion {id}"));
    let (count, tolerance) = match id {
        1 => (config.count(1000), 1e-8),
        2 => (config.count(500), 0.0),
        3 => (config.count(300), 0.0),
        4 => (config.count(300), 1e-8),
        5 => (config.count(500), 1e-8),
        6 => (config.count(200), 1e-10),
        7 => (config.count(100), 1e-10),
        _ => (config.count(200), 0.0),
    };
    let case = |i: usize| -> Case {
        let mut rng = case_rng(config.seed, id, i);
        match config.mode {
            Mode::Exact => dispatch::<GaussRat>(id, &mut rng, config),
            Mode::Float => dispatch::<C64>(id, &mut rng, config),
        }
    };
    let outcomes = map_cases(config.execution, count, case);
    let failures: Vec<(usize, &String)> = outcomes
        .iter()
        .enumerate()
        .filter_map(|(i, o)| o.as_ref().err().map(|e| (i, e)))
        .collect();
    let max_error = outcomes.iter().filter_map(|o| o.as_ref().ok()).fold(0.0, |a: f64, b| a.max(*b));
    CriterionReport {
        id,
        name,
        cases: count,
        failures: failures.len(),
        max_error,
        tolerance,
        passed: failures.is_empty(),
        first_failure: failures.first().map(|(i, e)| format!("case {i}: {e}")),
    }
}

fn dispatch<F: Field>(id: u32, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Case {
    match id {
        1 => triangularization_case(rng, config),
        2 => stability_case::<F>(rng, config),
        3 => orbit_case::<F>(rng, config),
        4 => rees_case::<F>(rng, config),
        5 => diagram_case::<F>(rng, config),
        6 => rh_case::<F>(rng, config),
        7 => hodge_case::<F>(rng, config),
        _ => dalgebra_case::<F>(rng),
    }
}

fn case_rng(seed: u64, criterion: u32, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(criterion) << 32) | case as u64);
    rng
}

fn map_cases<T: Send>(execution: Execution, count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    if execution == Execution::Parallel {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = execution;
    (0..count).map(f).collect()
}

fn tol() -> ToleranceFrame {
    ToleranceFrame::default()
}

fn frame(eps_eq: f64) -> ToleranceFrame {
    ToleranceFrame {
        eps_eq,
        ..ToleranceFrame::default()
    }
}

fn err<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{what}: {e}")
}

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Float tuples always; residuals relative to `S = max(1, max |B_j|_F)`.
fn triangularization_case(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Case {
    let n = rng.gen_range(1..=config.n_max.min(6));
    let m = rng.gen_range(1..=4);
    let t = gen::float_tuple(rng, m, n);
    let tri = triangularize(&t, &tol()).map_err(err("triangularize"))?;
    let s = t.scale();
    let mut worst: f64 = tri.g.mul(&tri.g_inv).sub(&Matrix::identity(n)).frobenius();
    for (b, u) in t.mats().iter().zip(tri.upper.mats()) {
        let raw = tri.g_inv.mul(b).mul(&tri.g);
        worst = worst.max(raw.strict_lower_max() / s);
        worst = worst.max(raw.sub(u).frobenius() / s);
    }
    for a in tri.upper.mats() {
        for b in tri.upper.mats() {
            worst = worst.max(a.commutator(b).frobenius() / (s * s));
        }
    }
    require(worst <= 1e-8, || format!("residual {worst:e} (n = {n}, m = {m})"))?;
    Ok(worst)
}

/// Half the cases are built unstable. Instances with `n <= 4` also go to the
/// local-criterion oracle.
fn stability_case<F: Field>(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Case {
    let n = rng.gen_range(1..=config.n_max.min(6));
    let m = rng.gen_range(1..=3);
    let built_unstable = n >= 2 && rng.gen_bool(0.5);
    let mt = if built_unstable {
        gen::unstable::<F>(rng, m, n)
    } else {
        gen::likely_stable::<F>(rng, m, n)
    };
    let stable = is_stable(&mt, &tol());
    require(!(built_unstable && stable), || format!("constructed unstable instance reported stable (n = {n})"))?;
    let trivial = marked_automorphisms_trivial(&mt, &tol());
    require(stable == trivial, || {
        format!("is_stable = {stable} but trivial automorphisms = {trivial} (n = {n}, m = {m})")
    })?;
    if n <= 4 {
        let by_oracle = oracle::stable_by_local_criterion(&mt, &tol()).map_err(err("oracle"))?;
        require(by_oracle == stable, || format!("is_stable = {stable}, oracle = {by_oracle} (n = {n}, m = {m})"))?;
    }
    Ok(0.0)
}

fn stable_instance<F: Field>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> crate::adhm::MarkedTuple<F> {
    loop {
        let mt = gen::likely_stable::<F>(rng, m, n);
        if is_stable(&mt, &tol()) {
            return mt;
        }
    }
}

fn division_closed(staircase: &[Vec<u32>]) -> bool {
    staircase.iter().all(|e| {
        (0..e.len()).filter(|&k| e[k] > 0).all(|k| {
            let mut f = e.clone();
            f[k] -= 1;
            staircase.contains(&f)
        })
    })
}

/// One stable tuple against 50 conjugates.
fn orbit_case<F: Field>(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Case {
    let n = rng.gen_range(1..=config.n_max.min(4));
    let m = rng.gen_range(1..=3);
    let mt = stable_instance::<F>(rng, m, n);
    let base = ideal_normal_form(&mt, &tol()).map_err(err("ideal_normal_form"))?;
    require(base.staircase.len() == n, || format!("staircase has {} monomials, n = {n}", base.staircase.len()))?;
    require(base.staircase[0].iter().all(|&x| x == 0), || "staircase does not start at 1".into())?;
    require(division_closed(&base.staircase), || format!("staircase {:?} not division closed", base.staircase))?;
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let (g, g_inv) = gen::unimodular::<F>(rng, n);
        let other = ideal_normal_form(&mt.conjugate(&g, &g_inv), &tol()).map_err(err("ideal_normal_form"))?;
        if F::MODE.is_exact() {
            require(other == base, || format!("normal form changed under conjugation {k}"))?;
        } else {
            require(other.staircase == base.staircase, || format!("staircase changed under conjugation {k}"))?;
            let s = base.mult_matrices.iter().map(Matrix::frobenius).fold(1.0, f64::max);
            for (a, b) in base.mult_matrices.iter().zip(&other.mult_matrices) {
                worst = worst.max(a.sub(b).frobenius() / s);
            }
            require(worst <= 1e-8, || format!("multiplication matrices moved by {worst:e}"))?;
        }
    }
    Ok(worst)
}

fn diagonal_tuples<F: Field>(t: &CommutingTuple<F>) -> Vec<Vec<F>> {
    let mut d: Vec<Vec<F>> = (0..t.n()).map(|k| t.mats().iter().map(|b| b[(k, k)].clone()).collect()).collect();
    d.sort_by(|a, b| tuple_cmp(a, b));
    d
}

/// Largest coordinate distance between two sorted spectra, relative to `s`.
fn spectrum_drift<F: Field>(a: &[Vec<F>], b: &[Vec<F>], s: f64) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p.to_c64() - q.to_c64()).norm() / s))
        .fold(0.0, f64::max)
}

fn nonzero_param<F: Field>(rng: &mut ChaCha8Rng) -> F {
    let choices = [(2, 1), (-1, 1), (1, 2), (-1, 3), (3, 2)];
    let (p, q) = choices[rng.gen_range(0..choices.len())];
    let x = F::from_ratio(p, q);
    if rng.gen_bool(0.3) {
        x * F::gaussian(0, 1)
    } else {
        x
    }
}

/// Strictly decreasing weights along the flag from `triangularize`.
fn rees_case<F: Field>(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Case {
    let n = rng.gen_range(1..=config.n_max.min(5));
    let m = rng.gen_range(1..=3);
    let t = gen::commuting_tuple::<F>(rng, m, n);
    let tri = triangularize(&t, &tol()).map_err(err("triangularize"))?;
    let mut weights = vec![0i64; n];
    for k in (0..n.saturating_sub(1)).rev() {
        weights[k] = weights[k + 1] + rng.gen_range(1..=2);
    }
    let s = t.scale();
    let spectrum = joint_spectrum(&t, &tol()).map_err(err("joint_spectrum"))?;
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let param: F = nonzero_param(rng);
        let r = rees_family(&t, &tri.flag, &weights, &param, &tol()).map_err(err("rees_family"))?;
        let comm = check_commuting(r.mats().to_vec(), &frame(1e-8));
        require(comm.is_ok(), || format!("family at t = {} does not commute", param.to_c64()))?;
        let moved = joint_spectrum(&r, &tol()).map_err(err("joint_spectrum"))?;
        let drift = if F::MODE.is_exact() {
            if moved == spectrum { 0.0 } else { f64::INFINITY }
        } else {
            spectrum_drift(&moved, &spectrum, s)
        };
        worst = worst.max(drift);
        require(drift <= 1e-8, || format!("spectrum drift {drift:e} at t = {}", param.to_c64()))?;
    }
    let limit = rees_limit(&t, &tri.flag, &weights, &tol()).map_err(err("rees_limit"))?;
    let off = limit
        .mats()
        .iter()
        .map(|b| b.sub(&Matrix::from_diagonal(&b.diagonal())).max_abs())
        .fold(0.0, f64::max);
    require(off == 0.0, || format!("limit has off-diagonal entries of size {off:e}"))?;
    let target = sequiv_normal_form(&t, &tol()).map_err(err("sequiv_normal_form"))?;
    let (a, b) = (diagonal_tuples(&limit), diagonal_tuples(&target));
    let gap = if F::MODE.is_exact() {
        if a == b { 0.0 } else { f64::INFINITY }
    } else {
        spectrum_drift(&a, &b, s)
    };
    worst = worst.max(gap);
    require(gap <= 1e-8, || format!("limit differs from the S-equivalence form by {gap:e}"))?;
    Ok(worst)
}

fn diagram_case<F: Field>(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Case {
    let d = rng.gen_range(1..=config.d_max.min(2));
    let n = rng.gen_range(1..=config.n_max.min(5));
    let mt = gen::betti_instance::<F>(rng, d, n);
    let model = gen::model(rng, d);
    let ok = diagram_check(&mt, &model, &frame(1e-8)).map_err(err("diagram_check"))?;
    require(ok, || format!("diagram does not commute (d = {d}, n = {n})"))?;
    Ok(0.0)
}

/// A Betti Hilbert scheme point with its natural counterpart.
fn hilb_pair<F: Field>(
    rng: &mut ChaCha8Rng,
    config: &SuiteConfig,
) -> Result<(HilbPoint<F>, HilbPoint<F>, AbelianVarietyModel), String> {
    let d = rng.gen_range(1..=config.d_max.min(2));
    let n = rng.gen_range(1..=config.n_max.min(5));
    let mt = gen::betti_instance::<F>(rng, d, n);
    let model = gen::model(rng, d);
    let betti = betti_marked(&mt, &tol()).map_err(err("betti_marked"))?;
    let natural = rh_to_derham(&betti, &model, &tol()).map_err(err("rh_to_derham"))?;
    Ok((betti, natural, model))
}

/// Nilpotent parts equal (float: within `eps` relative) at matched points.
fn same_nilpotents<F: Field>(a: &HilbPoint<F>, b: &HilbPoint<F>, fr: &ToleranceFrame) -> Result<f64, String> {
    let idx = a.matching(b, fr).ok_or("supports differ")?;
    let mut worst: f64 = 0.0;
    for (p, i) in a.pieces().iter().zip(idx) {
        let q = &b.pieces()[i];
        require(p.punctual.marking() == q.punctual.marking(), || "markings differ".into())?;
        let (x, y) = (p.punctual.nilpotent(), q.punctual.nilpotent());
        if F::MODE.is_exact() {
            require(x == y, || "nilpotent parts differ".into())?;
        } else {
            let s = x.scale().max(y.scale());
            for (u, v) in x.mats().iter().zip(y.mats()) {
                worst = worst.max(u.sub(v).frobenius() / s);
            }
        }
    }
    require(worst <= fr.eps_eq, || format!("nilpotent parts differ by {worst:e}"))?;
    Ok(worst)
}

fn rh_case<F: Field>(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Case {
    let (betti, natural, _) = hilb_pair::<F>(rng, config)?;
    let back = rh_to_betti(&natural, &tol()).map_err(err("rh_to_betti"))?;
    let worst = same_nilpotents(&back, &betti, &frame(1e-10))?;
    for piece in betti.pieces() {
        if piece.punctual.len() != 1 {
            continue;
        }
        let FiberPoint::Betti { z } = &piece.point else { unreachable!() };
        let a = log_rh(&BettiPoint { z: z.clone() }, &tol()).map_err(err("log_rh"))?.a;
        let target = FiberPoint::Natural { a: a.clone() };
        let found = natural.pieces().iter().any(|dr| dr.point == target);
        require(found, || "rank-one base differs from log_rh".into())?;
        let z2 = exp_rh(&NaturalPoint { a }).z;
        let round = back.pieces().iter().any(|p| p.point == FiberPoint::Betti { z: z2.clone() });
        require(round, || "rank-one base differs from exp_rh".into())?;
    }
    Ok(worst)
}

fn hodge_case<F: Field>(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Case {
    let (_, natural, _) = hilb_pair::<F>(rng, config)?;
    let taus = [F::one(), F::from_i64(2), F::from_ratio(1, 2), F::gaussian(0, 1)];
    let fr = frame(1e-10);
    let mut worst: f64 = 0.0;
    for tau in &taus {
        let hodge = hodge_deform(&natural, tau, &tol()).map_err(err("hodge_deform"))?;
        let back = hodge_undeform(&hodge, &tol()).map_err(err("hodge_undeform"))?;
        worst = worst.max(same_nilpotents(&back, &natural, &fr)?);
        for s in &taus {
            let composed = hodge_rescale(&hodge, s, &tol()).map_err(err("hodge_rescale"))?;
            let direct = hodge_deform(&natural, &(tau.clone() * s.clone()), &tol()).map_err(err("hodge_deform"))?;
            require(composed.space() == direct.space(), || "rescaled fibre differs".into())?;
            worst = worst.max(same_nilpotents(&composed, &direct, &fr)?);
        }
    }
    Ok(worst)
}

/// Binomial coefficients by Pascal's rule, independent of the library's.
fn pascal(n: usize, k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

fn dalgebra_case<F: Field>(rng: &mut ChaCha8Rng) -> Case {
    let d = rng.gen_range(1..=4);
    let v = rng.gen_range(1..=4);
    let t: UtaiTriple<F> = gen::triple(rng, d, v);
    let minus = gl_act(&Matrix::scalar(v, -F::one()), &t, &tol()).map_err(err("gl_act"))?;
    require(fm_dual(&fm_dual(&t)) == minus, || "fm_dual twice is not the action of -Id".into())?;
    let inv = orbit_invariants(&t, &tol());
    for k in 0..50 {
        let (g, _) = gen::unimodular::<F>(rng, v);
        let moved = gl_act(&g, &t, &tol()).map_err(err("gl_act"))?;
        require(orbit_invariants(&moved, &tol()) == inv, || format!("invariants changed under element {k}"))?;
    }
    let samples: Vec<[_; 3]> = (0..100)
        .map(|_| [gen::section(rng, d, v), gen::section(rng, d, v), gen::section(rng, d, v)])
        .collect();
    require(jacobi_check(&t, &samples, &tol()), || "Jacobi identity fails".into())?;
    for dd in 0..=6 {
        for vv in 0..=6 {
            for k in 0..=dd + vv + 1 {
                let got = cohomology_dim(dd, vv, k);
                let want = pascal(dd + vv, k);
                require(got == want, || format!("cohomology_dim({dd}, {vv}, {k}) = {got}, expected {want}"))?;
            }
        }
    }
    Ok(0.0)
}

//! The acceptance suite: ten criteria, each run against the library and
//! re-checked with the predicates in [`crate::check`].
//!
//! The freeness predicate used for re-checking is pluggable so that the suite
//! can be run against a deliberately broken one; every criterion that relies
//! on it first calibrates it against a direct pair scan.

use std::time::{Duration, Instant};

use kottsep_core::freeset::{
    chain_difference_free, find_difference_free, grid_max_properties, max_free_subset, witness_difference, witness_sum,
    KottmanValue, Method, Relation,
};
use kottsep_core::gaussian_bridge::{find_gaussian_difference_free, random_gaussian_admissible};
use kottsep_core::normed::{
    auerbach_basis, complex_separated_points, parse_rational, plus_separated_points, separated_points, verify_auerbach,
    verify_separation, AuerbachBasis, Norm, NormKind, NormSpec, PValue, Scalar, SeparatedFamily, Q,
};
use kottsep_core::ternary::{random_admissible, AdmissibleSets};
use kottsep_core::{Budgets, FreeMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::check::{calibrate, max_free_size, raw_is_free, raw_is_gaussian_free, FreeCheck};
use crate::cli::StrategyArg;
use crate::commands::value;

pub const TITLES: [&str; 10] = [
    "K(l) exact values by enumeration",
    "K(l) tightness witnesses",
    "difference-free sets of size n+1",
    "S(l) exact values and sum witnesses",
    "K_C(l) values",
    "Gaussian difference-free sets of size 2n+2",
    "coherent extension chains",
    "grid lemma",
    "separation pipelines",
    "Auerbach verification",
];

/// Random difference-free trials per dimension 4..=10 (7 dimensions, 10^4 in total).
pub const RANDOM_SETS_PER_DIM: usize = 1429;
/// Random Gaussian trials per dimension 1..=4.
pub const GAUSSIAN_SETS_PER_DIM: usize = 250;
/// Random chains per dimension 2..=9.
pub const CHAINS_PER_DIM: usize = 125;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimRow {
    pub quantity: String,
    pub claimed: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub rows: Vec<ClaimRow>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}  {} ({:.2} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Checked = Result<(String, Vec<ClaimRow>), String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn row(quantity: String, claimed: usize, computed: usize) -> ClaimRow {
    ClaimRow { quantity, claimed: claimed.to_string(), computed: computed.to_string(), ok: claimed == computed }
}

fn rng_for(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ stream.rotate_left(40) ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub budgets: Budgets,
    pub seed: u64,
    pub free_check: FreeCheck,
}

impl Default for Suite {
    fn default() -> Self {
        Self { budgets: Budgets::default(), seed: 0, free_check: raw_is_free }
    }
}

impl Suite {
    pub fn run_all(&self) -> Vec<Outcome> {
        (1..=10).map(|id| self.run(id)).collect()
    }

    pub fn run(&self, id: u8) -> Outcome {
        let start = Instant::now();
        let (result, limit) = match id {
            1 => (self.exact_kottman(), Some(10)),
            2 => (self.kottman_witnesses(), Some(60)),
            3 => (self.difference_free_sizes(), None),
            4 => (self.sumfree_values(), None),
            5 => (self.gaussian_values(), Some(60)),
            6 => (self.gaussian_sizes(), None),
            7 => (self.chains(), None),
            8 => (self.grid(), Some(30)),
            9 => (self.separation(), None),
            10 => (self.auerbach(), None),
            _ => (fail(format!("no criterion {id}")), None),
        };
        let elapsed = start.elapsed();
        let title = TITLES.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or("unknown");
        let (mut passed, mut detail, rows) = match result {
            Ok((detail, rows)) => (rows.iter().all(|r| r.ok), detail, rows),
            Err(e) => (false, e, Vec::new()),
        };
        if let Some(secs) = limit {
            if elapsed > Duration::from_secs(secs) {
                passed = false;
                detail = format!("{detail}; over the {secs} s limit");
            }
        }
        Outcome { id, title, passed, detail, elapsed, rows }
    }

    fn calibrated(&self) -> Result<(), String> {
        calibrate(self.free_check)
    }

    fn checked_value(&self, relation: Relation, l: usize) -> Result<KottmanValue, String> {
        let v = value(relation, l, StrategyArg::Exhaustive, &self.budgets, self.seed).map_err(|e| e.to_string())?;
        v.upper.verify(&self.budgets).map_err(|e| e.to_string())?;
        if let Some(low) = &v.lower {
            low.verify(&self.budgets).map_err(|e| e.to_string())?;
        }
        ensure(v.upper.method == Method::Exhaustive, || format!("upper bound for l = {l} is not exhaustive"))?;
        Ok(v)
    }

    fn exact_kottman(&self) -> Checked {
        let mut rows = Vec::new();
        let mut counts = Vec::new();
        for (l, expected) in [(2usize, 2u64), (3, 8), (4, 2048)] {
            let v = self.checked_value(Relation::RealDifference, l)?;
            let examined = v.upper.sets_examined.unwrap_or(0);
            ensure(examined == expected, || format!("K({l}): examined {examined} sets, expected {expected}"))?;
            counts.push(examined.to_string());
            rows.push(row(format!("K({l})"), l - 1, v.value));
        }
        Ok((format!("exhaustive over {} admissible sets", counts.join(", ")), rows))
    }

    fn kottman_witnesses(&self) -> Checked {
        self.calibrated()?;
        let mut rows = Vec::new();
        for l in 3..=8 {
            let a = witness_difference(l).map_err(|e| e.to_string())?;
            let m = max_free_subset(&a, FreeMode::Difference, &self.budgets).map_err(|e| e.to_string())?;
            ensure((self.free_check)(&m.witness, &a, FreeMode::Difference), || format!("l = {l}: witness not free"))?;
            let again = max_free_size(&a, FreeMode::Difference, self.budgets.mis_max_vertices)?;
            ensure(again == m.size, || format!("l = {l}: oracles disagree ({} vs {again})", m.size))?;
            rows.push(row(format!("max difference-free in witness({l})"), l - 1, m.size));
        }
        Ok(("witness sets for l = 3..8 have maximum l - 1".into(), rows))
    }

    fn difference_free_sizes(&self) -> Checked {
        self.calibrated()?;
        let check = self.free_check;
        let b = &self.budgets;
        let one = |a: &kottsep_core::SymmetricCubeSet| -> Result<(), String> {
            let c = find_difference_free(a, b).map_err(|e| e.to_string())?;
            ensure(c.size() == a.dim() + 1 && check(&c.witness, a, FreeMode::Difference), || {
                format!("{a:?}: witness of size {} does not check", c.size())
            })
        };
        let all3 = AdmissibleSets::new(3, true, b.enumeration_max_sets).map_err(|e| e.to_string())?;
        (0..all3.count()).into_par_iter().try_for_each(|i| one(&all3.set_at(i)))?;
        let trials: Vec<(usize, u64)> =
            (4..=10).flat_map(|n| (0..RANDOM_SETS_PER_DIM as u64).map(move |t| (n, t))).collect();
        trials.par_iter().try_for_each(|&(n, t)| {
            let a = random_admissible(n, &mut rng_for(self.seed, 3 << 8 | n as u64, t)).map_err(|e| e.to_string())?;
            one(&a)
        })?;
        Ok((format!("all {} sets in C_3 and {} random sets in C_4..C_10", all3.count(), trials.len()), Vec::new()))
    }

    fn sumfree_values(&self) -> Checked {
        self.calibrated()?;
        let mut rows = Vec::new();
        for l in 1..=3 {
            let v = self.checked_value(Relation::RealSum, l)?;
            rows.push(row(format!("S({l})"), l, v.value));
        }
        for l in 2..=8 {
            let a = witness_sum(l).map_err(|e| e.to_string())?;
            let m = max_free_subset(&a, FreeMode::Sum, &self.budgets).map_err(|e| e.to_string())?;
            ensure((self.free_check)(&m.witness, &a, FreeMode::Sum), || format!("l = {l}: witness not sum-free"))?;
            let again = max_free_size(&a, FreeMode::Sum, self.budgets.mis_max_vertices)?;
            ensure(again == m.size, || format!("l = {l}: oracles disagree ({} vs {again})", m.size))?;
            rows.push(row(format!("max sum-free in witness({l})"), l - 1, m.size));
        }
        Ok(("S(1..3) exhaustive; sum witnesses for l = 2..8 tight".into(), rows))
    }

    fn gaussian_values(&self) -> Checked {
        let mut rows = Vec::new();
        for l in 1..=6 {
            let v = self.checked_value(Relation::ComplexDifference, l)?;
            let claimed = if l <= 4 { 1 } else { 2 };
            let expected_sets = if claimed == 1 { 2 } else { 32 };
            let examined = v.upper.sets_examined.unwrap_or(0);
            ensure(examined == expected_sets, || format!("K_C({l}): examined {examined} sets"))?;
            rows.push(row(format!("K_C({l})"), claimed, v.value));
        }
        Ok(("exhaustive upper bounds over 2 and 32 sets, doubled-witness lower bounds".into(), rows))
    }

    fn gaussian_sizes(&self) -> Checked {
        let trials: Vec<(usize, u64)> =
            (1..=4).flat_map(|n| (0..GAUSSIAN_SETS_PER_DIM as u64).map(move |t| (n, t))).collect();
        trials.par_iter().try_for_each(|&(n, t)| {
            let a = random_gaussian_admissible(n, &mut rng_for(self.seed, 6 << 8 | n as u64, t))
                .map_err(|e| e.to_string())?;
            ensure(a.is_i_closed() && a.is_admissible(), || format!("sampler produced {:?}", a.to_strings()))?;
            let c = find_gaussian_difference_free(&a, &self.budgets).map_err(|e| e.to_string())?;
            c.verify().map_err(|e| e.to_string())?;
            ensure(c.size() == 2 * n + 2 && raw_is_gaussian_free(&c.witness, &a), || {
                format!("n = {n}: witness of size {} in {:?}", c.size(), a.to_strings())
            })
        })?;
        Ok((format!("{} random i-closed sets in V_1..V_4", trials.len()), Vec::new()))
    }

    fn chains(&self) -> Checked {
        self.calibrated()?;
        let check = self.free_check;
        let trials: Vec<(usize, u64)> = (2..=9).flat_map(|n| (0..CHAINS_PER_DIM as u64).map(move |t| (n, t))).collect();
        trials.par_iter().try_for_each(|&(n, t)| {
            let a = random_admissible(n, &mut rng_for(self.seed, 7 << 8 | n as u64, t)).map_err(|e| e.to_string())?;
            let chain = chain_difference_free(&a).map_err(|e| e.to_string())?;
            ensure(chain.len() == n, || format!("chain of length {} in dimension {n}", chain.len()))?;
            for (k, stage) in chain.iter().enumerate() {
                let g = a.project(k + 1).map_err(|e| e.to_string())?;
                ensure(stage.ground_set == g, || format!("stage {k} is not over the projection"))?;
                ensure(stage.size() == k + 2 && check(&stage.witness, &g, FreeMode::Difference), || {
                    format!("stage {k} of {a:?} does not check")
                })?;
                if k > 0 {
                    let down: Vec<_> = stage
                        .witness
                        .iter()
                        .map(|x| x.project(k))
                        .collect::<Result<_, _>>()
                        .map_err(|e| e.to_string())?;
                    ensure(chain[k - 1].witness.iter().all(|x| down.contains(x)), || {
                        format!("stage {k} does not extend stage {}", k - 1)
                    })?;
                }
            }
            Ok::<(), String>(())
        })?;
        Ok((format!("{} random chains in C_2..C_9", trials.len()), Vec::new()))
    }

    fn grid(&self) -> Checked {
        let mut rows = Vec::new();
        for n in 1..=5 {
            let r = grid_max_properties(n, self.budgets.grid_max_n).map_err(|e| e.to_string())?;
            ensure(r.max_size_at_most_n && r.maximum_sets_cover_twice, || format!("n = {n}: {r:?}"))?;
            ensure(crate::check::grid_set_ok(&r.example, n), || format!("n = {n}: example fails the condition"))?;
            if n >= 2 {
                rows.push(row(format!("grid maximum, n = {n}"), n, r.max_size));
            }
        }
        Ok(("every crossed-support set on n <= 5 has at most n points".into(), rows))
    }

    fn separation(&self) -> Checked {
        let b = &self.budgets;
        let mut cases: Vec<(NormSpec, Job)> = Vec::new();
        for n in 2..=8 {
            for spec in exact_specs(n) {
                cases.push((spec.clone(), Job::Difference));
                cases.push((spec, Job::Sum));
            }
            cases.push((NormSpec::l2(n).expect("spec"), Job::Difference));
            cases.push((NormSpec::l2(n).expect("spec"), Job::Sum));
        }
        for n in 1..=3 {
            cases.push((NormSpec::complex_lp(n, PValue::Infinity).expect("spec"), Job::Complex));
        }
        cases.push((NormSpec::realified_lp(4, PValue::Infinity).expect("spec"), Job::Difference));
        let sizes: Vec<usize> = cases
            .par_iter()
            .map(|(spec, job)| {
                run_case(spec, *job, b).map_err(|e| format!("{} {} n = {}: {e}", job.label(), spec.label(), spec.dim()))
            })
            .collect::<Result<_, String>>()?;
        let size_of = |spec: NormSpec| cases.iter().position(|(s, _)| *s == spec).map_or(0, |i| sizes[i]);
        let complex = size_of(NormSpec::complex_lp(2, PValue::Infinity).expect("spec"));
        let real = size_of(NormSpec::realified_lp(4, PValue::Infinity).expect("spec"));
        let rows = vec![
            row("complex family in complex l_inf^2".into(), 6, complex),
            row("real family in the underlying real space".into(), 5, real),
        ];
        Ok((format!("{} pipeline runs verified", sizes.len()), rows))
    }

    fn auerbach(&self) -> Checked {
        let b = &self.budgets;
        let mut specs = Vec::new();
        for n in 2..=8 {
            specs.extend(exact_specs(n));
            specs.push(NormSpec::l2(n).expect("spec"));
        }
        let three_halves = PValue::Finite(parse_rational("3/2").expect("rational"));
        let three = PValue::Finite(parse_rational("3").expect("rational"));
        for n in 1..=4 {
            specs.push(NormSpec::lp(n, three_halves.clone()).expect("spec"));
            specs.push(NormSpec::lp(n, three.clone()).expect("spec"));
            specs.push(NormSpec::complex_lp(n, PValue::Infinity).expect("spec"));
            specs.push(NormSpec::complex_lp(n, PValue::Finite(Q::from_integer(2.into()))).expect("spec"));
            specs.push(NormSpec::complex_lp(n, PValue::Finite(Q::from_integer(1.into()))).expect("spec"));
        }
        specs.push(NormSpec::realified_lp(4, PValue::Infinity).expect("spec"));
        specs.push(NormSpec::realified_lp(6, three).expect("spec"));
        let identities = std::sync::atomic::AtomicUsize::new(0);
        specs.par_iter().try_for_each(|spec| {
            let label = format!("{} n = {}", spec.label(), spec.dim());
            let norm = Norm::new(spec.clone(), b).map_err(|e| format!("{label}: {e}"))?;
            let basis = auerbach_basis(&norm, b).map_err(|e| format!("{label}: {e}"))?;
            residuals_ok(&basis, &norm, b.tau).map_err(|e| format!("{label}: {e}"))?;
            if matches!(spec.kind(), NormKind::Lp(_) | NormKind::RealifiedLp(_)) {
                let id = AuerbachBasis::identity(&norm).map_err(|e| format!("{label}: {e}"))?;
                residuals_ok(&id, &norm, b.tau).map_err(|e| format!("{label} identity: {e}"))?;
                identities.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            }
            Ok::<(), String>(())
        })?;
        Ok((
            format!("{} bases verified, identity fallback on {} l_p specs", specs.len(), identities.into_inner()),
            Vec::new(),
        ))
    }
}

#[derive(Clone, Copy, Debug)]
enum Job {
    Difference,
    Sum,
    Complex,
}

impl Job {
    fn label(self) -> &'static str {
        match self {
            Job::Difference => "difference",
            Job::Sum => "sum",
            Job::Complex => "complex",
        }
    }
}

/// `l1`, `linf`, the cube cut by `|sum x| <= 3/2`, and the cross-polytope
/// with the extra vertices `±(2/3)(1, ..., 1)`.
pub fn exact_specs(n: usize) -> Vec<NormSpec> {
    let two_thirds = parse_rational("2/3").expect("rational");
    let mut facets: Vec<Vec<Q>> = (0..n).map(|i| unit_row(n, i)).collect();
    facets.push(vec![two_thirds.clone(); n]);
    let mut points: Vec<Vec<Q>> = (0..n).map(|i| unit_row(n, i)).collect();
    points.push(vec![two_thirds; n]);
    vec![
        NormSpec::l1(n).expect("spec"),
        NormSpec::linf(n).expect("spec"),
        NormSpec::facets(n, facets).expect("spec"),
        NormSpec::vertices(n, points).expect("spec"),
    ]
}

fn unit_row(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| Q::from_integer(i64::from(i == j).into())).collect()
}

fn run_case(spec: &NormSpec, job: Job, b: &Budgets) -> Result<usize, String> {
    let norm = Norm::new(spec.clone(), b).map_err(|e| e.to_string())?;
    let family: SeparatedFamily = match job {
        Job::Difference => separated_points(&norm, b),
        Job::Sum => plus_separated_points(&norm, b),
        Job::Complex => complex_separated_points(&norm, b),
    }
    .map_err(|e| e.to_string())?;
    let r = verify_separation(&family, &norm, b).map_err(|e| e.to_string())?;
    ensure(r.passed && r.size == r.expected_size, || format!("{r:?}"))?;
    ensure(r.exact == spec.is_exact(), || "exactness flag differs from the spec".into())?;
    let margin = r.margin.clone().ok_or("family too small to have a margin")?;
    if spec.is_exact() {
        ensure(matches!(&margin, Scalar::Exact(q) if *q > Q::from_integer(0.into())), || {
            format!("margin {margin:?} is not exactly positive")
        })?;
        let unit_margin = spec.label() == "l1" || spec.label() == "linf";
        if unit_margin && matches!(job, Job::Difference) {
            ensure(margin.is_one(), || format!("margin {margin:?}, expected 1"))?;
        }
    } else {
        ensure(margin.approx() >= b.mu_min, || format!("margin {} below {}", margin.approx(), b.mu_min))?;
    }
    Ok(r.size)
}

fn residuals_ok(basis: &AuerbachBasis, norm: &Norm, tau: f64) -> Result<(), String> {
    let r = verify_auerbach(basis, norm).map_err(|e| e.to_string())?;
    let all = [&r.biorthogonality, &r.vector_norms, &r.functional_norms];
    let ok = if r.exact {
        all.iter().all(|s| matches!(s, Scalar::Exact(q) if *q == Q::from_integer(0.into())))
    } else {
        all.iter().all(|s| s.approx() <= tau)
    };
    ensure(r.passed && ok, || format!("residuals {r:?}"))
}

/// Claimed against computed values, one row per line.
pub fn claims_table(outcomes: &[Outcome]) -> String {
    let rows: Vec<&ClaimRow> = outcomes.iter().flat_map(|o| &o.rows).collect();
    let width = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(8).max(8);
    let mut out = format!("{:<width$}  {:>7}  {:>8}  ok\n", "quantity", "claimed", "computed");
    for r in rows {
        out += &format!(
            "{:<width$}  {:>7}  {:>8}  {}\n",
            r.quantity,
            r.claimed,
            r.computed,
            if r.ok { "yes" } else { "NO" }
        );
    }
    out
}

//! Independent re-checking of emitted certificates.
//!
//! The digest is checked first. Each payload is then re-checked from its raw
//! data with the predicates in [`crate::check`]: membership and pairwise
//! conditions are recomputed, exhaustive verdicts are recounted with a
//! separately built conflict graph, and separated families are rebuilt from
//! their coefficients and re-normed.

use kottsep_core::freeset::{
    arrow_holds, grid_max_properties, witness_difference, witness_sum, ArrowCertificate, Counterexample, GridReport,
    KottmanValue, Method, Relation,
};
use kottsep_core::gaussian_bridge::GaussianAdmissibleSets;
use kottsep_core::normed::{verify_auerbach, verify_separation, Norm, SeparationMode, Vector};
use kottsep_core::ternary::AdmissibleSets;
use kottsep_core::{
    Budgets, FreeMode, FreeSetCertificate, GaussianSet, GaussianVector, SymmetricCubeSet, TernaryVector,
};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::check::{grid_set_ok, max_free_size, max_gaussian_free_size, raw_is_free, raw_is_gaussian_free};
use crate::commands::{relation_of, AuerbachPayload, ExtendPayload, SeparatePayload, WitnessPayload};
use crate::envelope::{Envelope, Kind};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub kind: Kind,
    pub digest: String,
    pub verified: bool,
    pub checks: Vec<String>,
}

fn falsified<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Falsified(msg.into()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        falsified(msg())
    }
}

fn payload<T: DeserializeOwned>(e: &Envelope) -> CliResult<T> {
    serde_json::from_value(e.payload.clone()).map_err(|err| CliError::Falsified(format!("malformed payload: {err}")))
}

/// Re-checks `e`. Errors with [`CliError::Falsified`] when anything fails.
pub fn verify_envelope(e: &Envelope) -> CliResult<VerifyReport> {
    ensure(e.digest_matches(), || format!("digest mismatch: recorded {}, computed {}", e.digest, e.compute_digest()))?;
    let budgets = &e.manifest.budgets;
    let mut checks = vec!["digest".to_string()];
    match e.kind {
        Kind::Kottman | Kind::Sumfree | Kind::Gaussian => {
            let relation = relation_of(e.kind).expect("value kind");
            verify_value(relation, &payload(e)?, budgets, &mut checks)?
        }
        Kind::Witness => verify_witness(&payload(e)?, budgets, &mut checks)?,
        Kind::Free => verify_free(&payload(e)?, &mut checks)?,
        Kind::Extend => verify_extend(&payload(e)?, &mut checks)?,
        Kind::Grid => verify_grid(&payload(e)?, budgets, &mut checks)?,
        Kind::Auerbach => verify_auerbach_payload(&payload(e)?, budgets, &mut checks)?,
        Kind::Separate => verify_separate(&payload(e)?, budgets, &mut checks)?,
    }
    Ok(VerifyReport { kind: e.kind, digest: e.digest.clone(), verified: true, checks })
}

fn mode_of(relation: Relation) -> FreeMode {
    if relation == Relation::RealSum {
        FreeMode::Sum
    } else {
        FreeMode::Difference
    }
}

fn verify_value(relation: Relation, v: &KottmanValue, budgets: &Budgets, checks: &mut Vec<String>) -> CliResult<()> {
    ensure(v.relation == relation, || format!("payload relation {:?} does not match the kind", v.relation))?;
    let up = &v.upper;
    ensure(up.relation == relation && up.l == v.l && up.n == v.value && up.holds, || {
        format!(
            "upper certificate (N = {}, l = {}, holds = {}) does not support value {}",
            up.n, up.l, up.holds, v.value
        )
    })?;
    up.verify(budgets)?;
    match up.method {
        Method::Exhaustive => {
            recount(up, budgets)?;
            checks.push(format!("upper bound: recounted {} sets", up.sets_examined.unwrap_or(0)));
        }
        Method::TheoremBacked => {
            // random evidence is reproducible from the recorded seed
            if let Some(seed) = up.seed {
                let again = arrow_holds(relation, up.n, up.l, Method::TheoremBacked, budgets, seed)?;
                ensure(again == *up, || "random evidence does not reproduce from its seed".into())?;
            }
            checks.push("upper bound: closed form".into());
        }
        Method::Witness => return falsified("a witness certificate cannot give an upper bound"),
    }
    match (&v.lower, v.value) {
        (None, 1) => checks.push("lower bound: value is minimal".into()),
        (None, _) => return falsified(format!("value {} has no lower-bound certificate", v.value)),
        (Some(low), value) => {
            ensure(low.relation == relation && low.n + 1 == value && low.l == v.l && !low.holds, || {
                format!("lower certificate (N = {}, holds = {}) does not refute N = {}", low.n, low.holds, value - 1)
            })?;
            low.verify(budgets)?;
            let c = low.counterexample.as_ref().expect("verified witness certificates carry a set");
            recheck_counterexample(relation, c, v.l, budgets)?;
            checks.push(format!("lower bound: counterexample with maximum free size {}", c.max_free));
        }
    }
    Ok(())
}

fn recount(cert: &ArrowCertificate, budgets: &Budgets) -> CliResult<()> {
    let (n, l) = (cert.n, cert.l);
    let cap = budgets.mis_max_vertices;
    let verdicts: Vec<Result<bool, String>> = if cert.relation == Relation::ComplexDifference {
        let sets = GaussianAdmissibleSets::new(n, budgets.enumeration_max_sets)?;
        ensure(Some(sets.count()) == cert.sets_examined, || "examined count differs from the enumeration".into())?;
        (0..sets.count()).into_par_iter().map(|i| Ok(max_gaussian_free_size(&sets.set_at(i), cap)? >= l)).collect()
    } else {
        let sets = AdmissibleSets::new(n, true, budgets.enumeration_max_sets)?;
        ensure(Some(sets.count()) == cert.sets_examined, || "examined count differs from the enumeration".into())?;
        let mode = mode_of(cert.relation);
        (0..sets.count()).into_par_iter().map(|i| Ok(max_free_size(&sets.set_at(i), mode, cap)? >= l)).collect()
    };
    let mut all = true;
    for v in verdicts {
        all &= v.map_err(CliError::Falsified)?;
    }
    ensure(all == cert.holds, || format!("recount gives holds = {all}, certificate says {}", cert.holds))
}

fn recheck_counterexample(relation: Relation, c: &Counterexample, l: usize, budgets: &Budgets) -> CliResult<()> {
    let cap = budgets.mis_max_vertices;
    let (max, witness_ok) = if relation == Relation::ComplexDifference {
        let parsed = c.members.iter().map(|s| s.parse()).collect::<kottsep_core::Result<Vec<GaussianVector>>>()?;
        let a = GaussianSet::new(c.dim, parsed)?;
        ensure(a.is_admissible(), || "counterexample is not admissible".into())?;
        let w = c.max_free_witness.iter().map(|s| s.parse()).collect::<kottsep_core::Result<Vec<GaussianVector>>>()?;
        (max_gaussian_free_size(&a, cap).map_err(CliError::Falsified)?, raw_is_gaussian_free(&w, &a))
    } else {
        let parsed = c.members.iter().map(|s| s.parse()).collect::<kottsep_core::Result<Vec<TernaryVector>>>()?;
        let a = SymmetricCubeSet::new(c.dim, parsed)?;
        ensure(a.is_admissible(), || "counterexample is not admissible".into())?;
        let w = c.max_free_witness.iter().map(|s| s.parse()).collect::<kottsep_core::Result<Vec<TernaryVector>>>()?;
        let mode = mode_of(relation);
        (max_free_size(&a, mode, cap).map_err(CliError::Falsified)?, raw_is_free(&w, &a, mode))
    };
    ensure(max == c.max_free && max < l, || format!("recomputed maximum free size {max}, recorded {}", c.max_free))?;
    ensure(witness_ok && c.max_free_witness.len() == max, || "recorded maximum free subset does not check".into())
}

fn verify_witness(w: &WitnessPayload, budgets: &Budgets, checks: &mut Vec<String>) -> CliResult<()> {
    let expected = match w.mode {
        FreeMode::Difference => witness_difference(w.l)?,
        FreeMode::Sum => witness_sum(w.l)?,
    };
    ensure(w.set == expected, || "set differs from the witness construction".into())?;
    ensure(raw_is_free(&w.max_free_witness, &w.set, w.mode), || "recorded subset is not free".into())?;
    let max = max_free_size(&w.set, w.mode, budgets.mis_max_vertices).map_err(CliError::Falsified)?;
    ensure(max == w.max_free && w.max_free_witness.len() == max && max + 1 == w.l, || {
        format!("recomputed maximum {max}, recorded {} for l = {}", w.max_free, w.l)
    })?;
    checks.push(format!("maximum {}-free size {max} recomputed", w.mode.label()));
    Ok(())
}

fn target_size(mode: FreeMode, n: usize) -> usize {
    match mode {
        FreeMode::Difference => n + 1,
        FreeMode::Sum => n,
    }
}

fn check_free_cert(c: &FreeSetCertificate) -> CliResult<()> {
    let a = &c.ground_set;
    ensure(a.is_admissible(), || "ground set is not admissible".into())?;
    ensure(raw_is_free(&c.witness, a, c.mode), || format!("witness is not {}-free", c.mode.label()))?;
    ensure(c.claimed_size == c.witness.len(), || "claimed size differs from the witness".into())
}

fn verify_free(c: &FreeSetCertificate, checks: &mut Vec<String>) -> CliResult<()> {
    check_free_cert(c)?;
    let target = target_size(c.mode, c.ground_set.dim());
    ensure(c.size() == target, || format!("witness has {} elements, expected {target}", c.size()))?;
    checks.push(format!("{}-free subset of size {target} rechecked", c.mode.label()));
    Ok(())
}

fn verify_extend(p: &ExtendPayload, checks: &mut Vec<String>) -> CliResult<()> {
    let r = &p.result;
    ensure(r.ground_set == p.ground_set, || "result uses a different ground set".into())?;
    check_free_cert(r)?;
    let n = p.ground_set.dim();
    ensure(n >= 2, || "extension needs dimension at least 2".into())?;
    let below = p.ground_set.project(n - 1)?;
    ensure(raw_is_free(&p.base, &below, r.mode), || "base is not free in the projection".into())?;
    ensure(r.size() == p.base.len() + 1, || format!("result has {} elements, base {}", r.size(), p.base.len()))?;
    let projected: Vec<TernaryVector> =
        r.witness.iter().map(|x| x.project(n - 1)).collect::<kottsep_core::Result<_>>()?;
    ensure(p.base.iter().all(|b| projected.contains(b)), || "result does not extend the base".into())?;
    checks.push(format!("extension to {} elements rechecked", r.size()));
    Ok(())
}

fn verify_grid(g: &GridReport, budgets: &Budgets, checks: &mut Vec<String>) -> CliResult<()> {
    ensure(grid_set_ok(&g.example, g.n), || "example violates the crossed-support condition".into())?;
    ensure(g.example.len() == g.max_size && g.max_size <= g.n, || format!("max size {} for n = {}", g.max_size, g.n))?;
    ensure(g.max_size_at_most_n && g.maximum_sets_cover_twice, || "report records a failed property".into())?;
    let again = grid_max_properties(g.n, budgets.grid_max_n)?;
    ensure(again == *g, || "enumeration does not reproduce the report".into())?;
    checks.push(format!("grid n = {} re-enumerated", g.n));
    Ok(())
}

fn verify_auerbach_payload(p: &AuerbachPayload, budgets: &Budgets, checks: &mut Vec<String>) -> CliResult<()> {
    let norm = Norm::new(p.spec.clone(), budgets)?;
    let r = verify_auerbach(&p.basis, &norm)?;
    ensure(r.passed, || format!("Auerbach residuals: {r:?}"))?;
    checks.push(format!("Auerbach residuals rechecked ({})", if r.exact { "exact" } else { "float" }));
    Ok(())
}

fn verify_separate(p: &SeparatePayload, budgets: &Budgets, checks: &mut Vec<String>) -> CliResult<()> {
    let f = &p.family;
    let norm = Norm::new(f.spec.clone(), budgets)?;
    let basis_report = verify_auerbach(&f.basis, &norm)?;
    ensure(basis_report.passed, || "basis is not Auerbach".into())?;
    ensure(f.coefficients.len() == f.points.len(), || "coefficient and point counts differ".into())?;
    for (c, z) in f.coefficients.iter().zip(&f.points) {
        let rebuilt: Vector = if f.mode == SeparationMode::Complex {
            f.basis.combine_complex(&c.parse::<GaussianVector>()?.parts())
        } else {
            f.basis.combine_real(&c.parse::<TernaryVector>()?.coords())
        };
        ensure(rebuilt == *z, || format!("point for coefficients {c} does not match the basis combination"))?;
    }
    let r = verify_separation(f, &norm, budgets)?;
    ensure(r.passed, || format!("separation does not hold: {r:?}"))?;
    ensure(r.size == r.expected_size, || format!("{} points, expected {}", r.size, r.expected_size))?;
    checks.push(format!("{} points re-normed, margin {:?}", r.size, r.margin.map(|m| m.approx())));
    Ok(())
}

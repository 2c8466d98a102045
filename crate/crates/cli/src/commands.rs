//! Subcommands that produce certificates.

use std::path::Path;

use kottsep_core::freeset::{
    arrow_holds, extend_free, find_free, grid_max_properties, kottman_value, max_free_subset, sumfree_value,
    witness_difference, witness_sum, KottmanValue, Method, Relation, ValueStrategy,
};
use kottsep_core::gaussian_bridge::gaussian_kottman_value;
use kottsep_core::normed::{
    auerbach_basis_seeded, complex_separated_points, plus_separated_points, separated_points, verify_auerbach,
    verify_separation, AuerbachBasis, AuerbachReport, Norm, NormSpec, SeparatedFamily, SeparationMode,
    SeparationReport,
};
use kottsep_core::{Budgets, Error, FreeMode, FreeSetCertificate, SymmetricCubeSet, TernaryVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cli::StrategyArg;
use crate::envelope::Kind;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessPayload {
    pub mode: FreeMode,
    pub l: usize,
    pub set: SymmetricCubeSet,
    pub max_free: usize,
    pub max_free_witness: Vec<TernaryVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendPayload {
    pub ground_set: SymmetricCubeSet,
    pub base: Vec<TernaryVector>,
    pub result: FreeSetCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuerbachPayload {
    pub spec: NormSpec,
    pub basis: AuerbachBasis,
    pub report: AuerbachReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatePayload {
    pub family: SeparatedFamily,
    pub report: SeparationReport,
}

pub fn relation_of(kind: Kind) -> Option<Relation> {
    match kind {
        Kind::Kottman => Some(Relation::RealDifference),
        Kind::Sumfree => Some(Relation::RealSum),
        Kind::Gaussian => Some(Relation::ComplexDifference),
        _ => None,
    }
}

/// The value of `relation` at `l` with evidence gathered per `strategy`.
pub fn value(
    relation: Relation,
    l: usize,
    strategy: StrategyArg,
    budgets: &Budgets,
    seed: u64,
) -> kottsep_core::Result<KottmanValue> {
    let by_library = |s: ValueStrategy| match relation {
        Relation::RealDifference => kottman_value(l, s, budgets, seed),
        Relation::RealSum => sumfree_value(l, s, budgets, seed),
        Relation::ComplexDifference => gaussian_kottman_value(l, s, budgets, seed),
    };
    match strategy {
        StrategyArg::Auto => by_library(ValueStrategy::Auto),
        StrategyArg::TheoremBacked => by_library(ValueStrategy::TheoremBacked),
        StrategyArg::Exhaustive => {
            let n = relation.threshold(l);
            let upper = arrow_holds(relation, n, l, Method::Exhaustive, budgets, seed)?;
            let lower =
                if n > 1 { Some(arrow_holds(relation, n - 1, l, Method::Witness, budgets, seed)?) } else { None };
            if !upper.holds || lower.as_ref().is_some_and(|c| c.holds) {
                return Err(Error::Defect(format!("evidence contradicts {} at l = {l}", relation.citation())));
            }
            Ok(KottmanValue { relation, l, value: n, lower, upper })
        }
    }
}

pub fn witness(mode: FreeMode, l: usize, budgets: &Budgets) -> CliResult<WitnessPayload> {
    let set = match mode {
        FreeMode::Difference => witness_difference(l)?,
        FreeMode::Sum => witness_sum(l)?,
    };
    let m = max_free_subset(&set, mode, budgets)?;
    Ok(WitnessPayload { mode, l, set, max_free: m.size, max_free_witness: m.witness })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_set(path: &Path) -> CliResult<SymmetricCubeSet> {
    let a: SymmetricCubeSet = read_json(path)?;
    a.require_admissible()?;
    Ok(a)
}

pub fn free(mode: FreeMode, set: &Path, budgets: &Budgets) -> CliResult<FreeSetCertificate> {
    Ok(find_free(&read_set(set)?, mode, budgets)?)
}

pub fn extend(set: &Path, base: &Path, mode: FreeMode) -> CliResult<ExtendPayload> {
    let ground_set = read_set(set)?;
    let base: Vec<TernaryVector> = read_json(base)?;
    let result = extend_free(&ground_set, &base, mode)?;
    Ok(ExtendPayload { ground_set, base, result })
}

pub fn grid(n: usize, budgets: &Budgets) -> CliResult<kottsep_core::freeset::GridReport> {
    Ok(grid_max_properties(n, budgets.grid_max_n)?)
}

fn read_norm(path: &Path, budgets: &Budgets) -> CliResult<Norm> {
    let spec: NormSpec = read_json(path)?;
    Ok(Norm::new(spec, budgets)?)
}

pub fn auerbach(path: &Path, budgets: &Budgets, seed: u64) -> CliResult<AuerbachPayload> {
    let norm = read_norm(path, budgets)?;
    let basis = auerbach_basis_seeded(&norm, budgets, seed)?;
    let report = verify_auerbach(&basis, &norm)?;
    if !report.passed {
        return Err(Error::VerificationFailed(format!("Auerbach residuals too large: {report:?}")).into());
    }
    Ok(AuerbachPayload { spec: norm.spec().clone(), basis, report })
}

pub fn separate(mode: SeparationMode, path: &Path, budgets: &Budgets) -> CliResult<SeparatePayload> {
    let norm = read_norm(path, budgets)?;
    let family = match mode {
        SeparationMode::Difference => separated_points(&norm, budgets)?,
        SeparationMode::Sum => plus_separated_points(&norm, budgets)?,
        SeparationMode::Complex => complex_separated_points(&norm, budgets)?,
    };
    let report = verify_separation(&family, &norm, budgets)?;
    if !report.passed || report.size != report.expected_size {
        return Err(CliError::Falsified(format!(
            "{} family has {} points (expected {}), passed = {}",
            mode.label(),
            report.size,
            report.expected_size,
            report.passed
        )));
    }
    Ok(SeparatePayload { family, report })
}

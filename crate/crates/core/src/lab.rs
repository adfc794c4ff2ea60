//! Generic-change predictions, seeded perturbation experiments and the
//! closed-form determinant checks for the ⊤-alternating witnesses.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{block_multiplicities, build_block, build_pencil, jordan_at_lambda, pair, BlockKind, BlockSpec, CanonError, SpectralSpec};
use crate::exactnum::{GaussianRational as C, Rational};
use crate::paramz::{named_perturbation, phi_structured, sample_params, ParamError, ParamVector, PerturbationRecipe};
use crate::pencil::{Pencil, StructureTag};
use crate::poly::Poly;
use crate::smith::{
    det_poly, dominates, new_eigenvalue_profile_with, partial_multiplicities_with, CharData, EigenvalueRef,
    MultiplicityList, NewEigenProfile, SmithError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("eigenvalue class {class} is not meaningful for {tag}")]
    InadmissibleClass { tag: StructureTag, class: EigClass },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("skew-symmetric perturbations have even rank, got {0}")]
    OddSkewRank(usize),
    #[error("unperturbed pencil is singular")]
    SingularBase,
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Smith(#[from] SmithError),
}

/// Position of an eigenvalue relative to the structure's special points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigClass {
    Zero,
    Infinity,
    #[serde(alias = "plus_one")]
    PlusOne,
    #[serde(alias = "minus_one")]
    MinusOne,
    Other,
}

impl std::fmt::Display for EigClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EigClass::Zero => "zero",
            EigClass::Infinity => "infinity",
            EigClass::PlusOne => "plus-one",
            EigClass::MinusOne => "minus-one",
            EigClass::Other => "other",
        })
    }
}

impl EigClass {
    pub fn parse(s: &str) -> Option<EigClass> {
        match s {
            "zero" | "0" => Some(EigClass::Zero),
            "infinity" | "inf" => Some(EigClass::Infinity),
            "plus-one" | "plus_one" | "+1" | "1" => Some(EigClass::PlusOne),
            "minus-one" | "minus_one" | "-1" => Some(EigClass::MinusOne),
            "other" => Some(EigClass::Other),
            _ => None,
        }
    }

    /// The class an eigenvalue takes under `tag`.
    pub fn classify(tag: StructureTag, eig: &EigenvalueRef) -> EigClass {
        use StructureTag::*;
        match (tag, eig) {
            (TEven | TOdd, EigenvalueRef::Infinity) => EigClass::Infinity,
            (TEven | TOdd, EigenvalueRef::Finite(z)) if z.is_zero() => EigClass::Zero,
            (TPalindromic | TAntiPalindromic, EigenvalueRef::Finite(z)) if z.is_one() => EigClass::PlusOne,
            (TPalindromic | TAntiPalindromic, EigenvalueRef::Finite(z)) if (-z).is_one() => EigClass::MinusOne,
            _ => EigClass::Other,
        }
    }
}

/// n_r = n_{r+1} = … = n_{r+d} > n_{r+d+1} with d odd (1-based positions).
pub fn property_p(list: &MultiplicityList, r: usize) -> bool {
    if r == 0 || list.len() <= r {
        return false;
    }
    let nr = list.get(r);
    let run = list.as_slice()[r - 1..].iter().take_while(|&&x| x == nr).count();
    let d = run - 1;
    d % 2 == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub expected: MultiplicityList,
    pub new_eigenvalue_mult: usize,
    pub rule: String,
}

#[derive(Clone, Copy)]
enum Rows {
    Zero,
    Infinity,
}

fn bumped(list: &MultiplicityList, r: usize) -> Vec<usize> {
    let mut v = list.drop_largest(r).as_slice().to_vec();
    v[0] += 1;
    v
}

fn apply_rows(rows: Rows, list: &MultiplicityList, r: usize) -> (Vec<usize>, String) {
    let next = list.get(r + 1);
    let p = property_p(list, r);
    match rows {
        Rows::Zero => {
            if next % 2 == 1 && p {
                (bumped(list, r), "zero rows: n_{r+1} odd and (P) holds".into())
            } else {
                (list.drop_largest(r).as_slice().to_vec(), "zero rows: otherwise".into())
            }
        }
        Rows::Infinity => {
            let bump = next > 0 && next.is_multiple_of(2) && p;
            let mut v = if bump { bumped(list, r) } else { list.drop_largest(r).as_slice().to_vec() };
            let parity = if r.is_multiple_of(2) { "r even" } else { "r odd" };
            let cond = if bump { "n_{r+1} even and (P) holds" } else { "otherwise" };
            if r % 2 == 1 && list.len() >= r {
                v.push(1);
            }
            (v, format!("infinity rows: {parity}, {cond}"))
        }
    }
}

/// Generic partial multiplicities after a rank-r structured perturbation.
///
/// For skew-symmetric pencils `list` holds each paired size once and the
/// result is in the same form.
pub fn predict(tag: StructureTag, class: EigClass, list: &MultiplicityList, r: usize) -> Result<Prediction, LabError> {
    use StructureTag::*;
    if r == 0 {
        return Err(LabError::ZeroRank);
    }
    let inadmissible = Err(LabError::InadmissibleClass { tag, class });
    let truncation = |rule: &str, mu: usize, drop: usize| Prediction {
        expected: list.drop_largest(drop),
        new_eigenvalue_mult: mu,
        rule: rule.to_string(),
    };
    if tag == SkewSymmetric {
        if r % 2 == 1 {
            return Err(LabError::OddSkewRank(r));
        }
        return Ok(truncation("skew-symmetric truncation, new eigenvalues double", 2, r / 2));
    }
    let rows = match (tag, class) {
        (TEven | TOdd, EigClass::PlusOne | EigClass::MinusOne) => return inadmissible,
        (TPalindromic | TAntiPalindromic, EigClass::Zero | EigClass::Infinity) => return inadmissible,
        (TEven, EigClass::Zero) | (TOdd, EigClass::Infinity) => Rows::Zero,
        (TEven, EigClass::Infinity) | (TOdd, EigClass::Zero) => Rows::Infinity,
        (TPalindromic, EigClass::PlusOne) | (TAntiPalindromic, EigClass::MinusOne) => Rows::Zero,
        (TPalindromic, EigClass::MinusOne) | (TAntiPalindromic, EigClass::PlusOne) => Rows::Infinity,
        _ => return Ok(truncation("truncation", 1, r)),
    };
    let (v, rule) = apply_rows(rows, list, r);
    Ok(Prediction { expected: MultiplicityList::new(v), new_eigenvalue_mult: 1, rule })
}

/// Every other entry of a sorted list whose entries come in equal pairs.
pub fn pair_list(full: &MultiplicityList) -> MultiplicityList {
    MultiplicityList::new(full.as_slice().iter().step_by(2).copied().collect())
}

fn doubled(pairs: &MultiplicityList) -> MultiplicityList {
    MultiplicityList::new(pairs.as_slice().iter().flat_map(|&k| [k, k]).collect())
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_BOUND: u32 = 10;
pub const DEFAULT_TRIALS: usize = 200;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_bound() -> u32 {
    DEFAULT_BOUND
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub spec: SpectralSpec,
    pub rank: usize,
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_bound")]
    pub bound: u32,
}

impl Scenario {
    pub fn new(spec: SpectralSpec, rank: usize, s: Option<usize>) -> Self {
        Scenario { spec, rank, s, trials: DEFAULT_TRIALS, seed: DEFAULT_SEED, bound: DEFAULT_BOUND }
    }
}

/// Per-eigenvalue data fixed before the trials run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigTarget {
    pub eigenvalue: EigenvalueRef,
    pub class: EigClass,
    pub initial: MultiplicityList,
    pub predicted: MultiplicityList,
    pub rule: String,
}

/// A scenario with its base pencil built and its predictions computed.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub structure: StructureTag,
    pub n: usize,
    pub rank: usize,
    pub s: usize,
    pub base: Pencil,
    pub base_char: CharData,
    pub targets: Vec<EigTarget>,
    pub mu: usize,
}

pub fn prepare(spec: &SpectralSpec, rank: usize, s: Option<usize>) -> Result<PreparedScenario, LabError> {
    let tag = spec.structure;
    if rank == 0 {
        return Err(LabError::ZeroRank);
    }
    let s = if tag.forces_half_rank() { s.unwrap_or(rank / 2) } else { s.unwrap_or(0) };
    crate::paramz::dims(tag, spec.dimension(), rank, s)?;
    let base = build_pencil(spec)?;
    let base_char = det_poly(&base)?;
    if !base_char.is_regular() {
        return Err(LabError::SingularBase);
    }
    let mut targets = Vec::new();
    let mut mu = 1;
    for (eig, initial) in block_multiplicities(spec)? {
        let class = EigClass::classify(tag, &eig);
        let (predicted, rule) = if tag == StructureTag::SkewSymmetric {
            let p = predict(tag, class, &pair_list(&initial), rank)?;
            mu = p.new_eigenvalue_mult;
            (doubled(&p.expected), p.rule)
        } else {
            let p = predict(tag, class, &initial, rank)?;
            mu = p.new_eigenvalue_mult;
            (p.expected, p.rule)
        };
        targets.push(EigTarget { eigenvalue: eig, class, initial, predicted, rule });
    }
    Ok(PreparedScenario { structure: tag, n: base.n(), rank, s, base, base_char, targets, mu })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub eigenvalue: EigenvalueRef,
    pub observed: MultiplicityList,
    pub matched: bool,
    pub dominates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub regular: bool,
    pub observations: Vec<Observation>,
    pub new_eig_profile: Option<NewEigenProfile>,
}

impl TrialRecord {
    pub fn all_match(&self) -> bool {
        self.regular && self.observations.iter().all(|o| o.matched)
    }

    pub fn all_dominate(&self) -> bool {
        self.observations.iter().all(|o| o.dominates)
    }

    pub fn new_eig_pass(&self) -> bool {
        self.new_eig_profile.as_ref().is_some_and(|p| p.pass)
    }
}

impl PreparedScenario {
    /// Draws the parameters of one trial from its own stream.
    pub fn trial_params(&self, seed: u64, trial: usize, bound: u32) -> Result<ParamVector, LabError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        Ok(sample_params(self.structure, self.n, self.rank, self.s, &mut rng, bound)?)
    }

    pub fn perturbation(&self, x: &ParamVector) -> Result<Pencil, LabError> {
        Ok(phi_structured(self.structure, self.n, self.rank, self.s, x)?)
    }

    /// Observations for L + E against the prepared predictions.
    pub fn observe(&self, trial: usize, e: &Pencil) -> Result<TrialRecord, LabError> {
        let p = &self.base + e;
        let cd = det_poly(&p)?;
        if !cd.is_regular() {
            return Ok(TrialRecord { trial, regular: false, observations: Vec::new(), new_eig_profile: None });
        }
        let mut observations = Vec::with_capacity(self.targets.len());
        for t in &self.targets {
            let observed = partial_multiplicities_with(&p, &cd, &t.eigenvalue)?;
            let dominates = dominates(&observed, &t.initial.drop_largest(self.rank));
            observations.push(Observation {
                eigenvalue: t.eigenvalue.clone(),
                matched: observed == t.predicted,
                observed,
                dominates,
            });
        }
        let profile = new_eigenvalue_profile_with(&self.base_char, &cd, self.mu)?;
        Ok(TrialRecord { trial, regular: true, observations, new_eig_profile: Some(profile) })
    }

    pub fn run_trial(&self, trial: usize, x: &ParamVector) -> Result<TrialRecord, LabError> {
        self.observe(trial, &self.perturbation(x)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigSummary {
    pub eigenvalue: EigenvalueRef,
    pub class: EigClass,
    pub initial: MultiplicityList,
    pub predicted: MultiplicityList,
    pub rule: String,
    pub matches: usize,
    pub mismatches: usize,
    pub dominance_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exemplar {
    pub trial: usize,
    pub reason: String,
    pub params: ParamVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub structure: StructureTag,
    pub n: usize,
    pub rank: usize,
    pub s: usize,
    pub trials: usize,
    pub seed: u64,
    pub bound: u32,
    pub new_eigenvalue_mult: usize,
    pub regular_trials: usize,
    pub singular_trials: usize,
    pub full_matches: usize,
    pub dominance_failures: usize,
    pub new_eig_failures: usize,
    pub per_eigenvalue: Vec<EigSummary>,
    pub exemplars: Vec<Exemplar>,
    pub records: Vec<TrialRecord>,
}

pub const CSV_HEADER: [&str; 7] = ["trial", "eigenvalue", "observed", "predicted", "match", "new_eig_profile", "regular"];

impl ExperimentReport {
    /// Every trial matched at every eigenvalue, dominance held and the new eigenvalues behaved.
    pub fn clean(&self) -> bool {
        self.singular_trials == 0
            && self.full_matches == self.trials
            && self.dominance_failures == 0
            && self.new_eig_failures == 0
    }

    pub fn summary_for(&self, eig: &EigenvalueRef) -> Option<&EigSummary> {
        self.per_eigenvalue.iter().find(|s| s.eigenvalue == *eig)
    }

    /// One row per trial and eigenvalue, in [`CSV_HEADER`] order.
    pub fn csv_rows(&self) -> Vec<[String; 7]> {
        let mut rows = Vec::new();
        for rec in &self.records {
            let profile = match &rec.new_eig_profile {
                Some(p) if p.pass => "pass",
                Some(_) => "fail",
                None => "n/a",
            };
            if rec.observations.is_empty() {
                rows.push([
                    rec.trial.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "false".into(),
                    profile.into(),
                    rec.regular.to_string(),
                ]);
            }
            for (o, s) in rec.observations.iter().zip(&self.per_eigenvalue) {
                rows.push([
                    rec.trial.to_string(),
                    o.eigenvalue.to_string(),
                    o.observed.to_string(),
                    s.predicted.to_string(),
                    o.matched.to_string(),
                    profile.into(),
                    rec.regular.to_string(),
                ]);
            }
        }
        rows
    }
}

/// Runs the trials sequentially; trial t uses stream t of the seeded generator.
pub fn run_experiment(sc: &Scenario) -> Result<ExperimentReport, LabError> {
    let prep = prepare(&sc.spec, sc.rank, sc.s)?;
    let mut per_eigenvalue: Vec<EigSummary> = prep
        .targets
        .iter()
        .map(|t| EigSummary {
            eigenvalue: t.eigenvalue.clone(),
            class: t.class,
            initial: t.initial.clone(),
            predicted: t.predicted.clone(),
            rule: t.rule.clone(),
            matches: 0,
            mismatches: 0,
            dominance_failures: 0,
        })
        .collect();
    let mut report = ExperimentReport {
        structure: prep.structure,
        n: prep.n,
        rank: prep.rank,
        s: prep.s,
        trials: sc.trials,
        seed: sc.seed,
        bound: sc.bound,
        new_eigenvalue_mult: prep.mu,
        regular_trials: 0,
        singular_trials: 0,
        full_matches: 0,
        dominance_failures: 0,
        new_eig_failures: 0,
        per_eigenvalue: Vec::new(),
        exemplars: Vec::new(),
        records: Vec::with_capacity(sc.trials),
    };
    for trial in 0..sc.trials {
        let x = prep.trial_params(sc.seed, trial, sc.bound)?;
        let rec = prep.run_trial(trial, &x)?;
        let mut reasons = Vec::new();
        if rec.regular {
            report.regular_trials += 1;
        } else {
            report.singular_trials += 1;
            reasons.push("perturbed pencil is singular".to_string());
        }
        for (o, summary) in rec.observations.iter().zip(per_eigenvalue.iter_mut()) {
            if o.matched {
                summary.matches += 1;
            } else {
                summary.mismatches += 1;
                reasons.push(format!("at {} observed {} predicted {}", o.eigenvalue, o.observed, summary.predicted));
            }
            if !o.dominates {
                summary.dominance_failures += 1;
                report.dominance_failures += 1;
                reasons.push(format!("dominance fails at {}", o.eigenvalue));
            }
        }
        if rec.regular && !rec.new_eig_pass() {
            report.new_eig_failures += 1;
            reasons.push(format!("new eigenvalues are not of multiplicity {}", prep.mu));
        }
        if rec.all_match() {
            report.full_matches += 1;
        }
        if !reasons.is_empty() {
            report.exemplars.push(Exemplar { trial, reason: reasons.join("; "), params: x });
        }
        report.records.push(rec);
    }
    report.per_eigenvalue = per_eigenvalue;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixCase {
    pub case: String,
    pub k: usize,
    pub gamma: C,
    pub expected: Poly,
    pub observed: Poly,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub cases: Vec<AppendixCase>,
    pub all_pass: bool,
}

fn monomial(k: usize) -> Poly {
    Poly::x().pow(k)
}

/// Checks the determinant identities of the ⊤-alternating witnesses:
/// odd pairs plus γ(e₁+e_{nr+2})(·)ᵀ, even pairs plus λγ(·)(·)ᵀ, and nr = 1.
pub fn verify_appendix(k_max: usize, gammas: &[Rational]) -> Result<AppendixReport, LabError> {
    let mut cases = Vec::new();
    for gamma_q in gammas {
        let gamma = C::real(gamma_q.clone());
        let two_gamma = &gamma * &C::from_int(2);
        let mut push = |case: &str, k: usize, l: &Pencil, e: &Pencil, expected: Poly| -> Result<(), LabError> {
            let observed = det_poly(&(l + e))?.det_poly;
            let pass = observed == expected;
            cases.push(AppendixCase { case: case.into(), k, gamma: gamma.clone(), expected, observed, pass });
            Ok(())
        };
        for k in 1..=k_max {
            let nr = 2 * k + 1;
            let l = build_block(StructureTag::TEven, &BlockSpec::plain(BlockKind::TEvenZeroOddPair, nr))?;
            let e = named_perturbation(&PerturbationRecipe::GammaPair { nr, gamma: gamma.clone() }, 2 * nr, 0)?;
            let expected = &monomial(2 * k + 2) * &(&monomial(2 * k) - &Poly::constant(two_gamma.clone()));
            push("odd", k, &l, &e, expected)?;

            let q = 2 * k;
            let l = pair(&-&jordan_at_lambda(q, true), &jordan_at_lambda(q, false));
            let e = named_perturbation(&PerturbationRecipe::GammaPairLambda { nr: q, gamma: gamma.clone() }, 2 * q, 0)?;
            let expected = &monomial(2 * k + 2) * &(&monomial(2 * k - 2) + &Poly::constant(two_gamma.clone()));
            push("even", k, &l, &e, expected)?;
        }
        let l = build_block(StructureTag::TEven, &BlockSpec::plain(BlockKind::TEvenZeroOddPair, 1))?;
        let e = named_perturbation(&PerturbationRecipe::GammaPair { nr: 1, gamma: gamma.clone() }, 2, 0)?;
        push("nr=1", 0, &l, &e, monomial(2))?;
    }
    let all_pass = cases.iter().all(|c| c.pass);
    Ok(AppendixReport { cases, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: &[usize]) -> MultiplicityList {
        MultiplicityList::new(v.to_vec())
    }

    #[test]
    fn property_p_examples() {
        assert!(property_p(&l(&[3, 3]), 1));
        assert!(!property_p(&l(&[3, 2]), 1));
        assert!(!property_p(&l(&[3, 3, 3]), 1));
        assert!(property_p(&l(&[5, 3, 3, 3, 3, 1]), 2));
        assert!(!property_p(&l(&[3]), 1));
    }

    #[test]
    fn prediction_rows() {
        use StructureTag::*;
        let p = |t, c, v: &[usize], r| predict(t, c, &l(v), r).unwrap().expected;
        assert_eq!(p(TEven, EigClass::Zero, &[3, 3], 1), l(&[4]));
        assert_eq!(p(TEven, EigClass::Infinity, &[2, 1], 1), l(&[1, 1]));
        assert_eq!(p(Hermitian, EigClass::Other, &[4, 2, 1], 2), l(&[1]));
        assert_eq!(p(TOdd, EigClass::Zero, &[2, 2], 1), l(&[3, 1]));
        let skew = predict(SkewSymmetric, EigClass::Other, &l(&[4, 2]), 2).unwrap();
        assert_eq!((skew.expected, skew.new_eigenvalue_mult), (l(&[2]), 2));
        assert_eq!(p(TPalindromic, EigClass::PlusOne, &[3, 3], 1), l(&[4]));
        assert_eq!(p(TAntiPalindromic, EigClass::MinusOne, &[3, 3], 1), l(&[4]));
        assert!(predict(TEven, EigClass::PlusOne, &l(&[1]), 1).is_err());
        assert!(predict(TPalindromic, EigClass::Zero, &l(&[1]), 1).is_err());
    }

    #[test]
    fn appendix_small() {
        let report = verify_appendix(2, &[Rational::new(1.into(), 3.into())]).unwrap();
        for c in &report.cases {
            assert!(c.pass, "{} k={}: {} vs {}", c.case, c.k, c.observed, c.expected);
        }
    }

    #[test]
    fn small_experiment_is_deterministic() {
        let spec = SpectralSpec::new(
            StructureTag::Hermitian,
            vec![BlockSpec::real(EigenvalueRef::int(1), 2, 1), BlockSpec::real(EigenvalueRef::int(1), 1, -1)],
        );
        let sc = Scenario { spec, rank: 1, s: None, trials: 5, seed: 3, bound: 5 };
        let a = run_experiment(&sc).unwrap();
        let b = run_experiment(&sc).unwrap();
        assert_eq!(a, b);
        assert!(a.clean(), "{:?}", a.exemplars);
    }
}

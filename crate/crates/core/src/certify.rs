//! Certification from an observed score: genuine multipartite entanglement of
//! the state, a lower bound on the number of entangled measurement
//! operators, GHZ-fraction estimates, and a PPT ground-truth oracle.

use rayon::prelude::*;

use crate::catalog::ghz_state;
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, partial_transpose_subsystems, trace_re, CMat, DensityMatrix, STRUCT_TOL};
use crate::local::{Families, LocalObjective, Term};
use crate::random::{haar_unitary, random_isometry, substream};
use crate::scenario::{Channel, GameParams, Povm};

/// Largest score any biseparable state can reach: `1/d`, for every `n`.
pub fn biseparable_bound(params: GameParams) -> f64 {
    1.0 / params.d() as f64
}

/// Largest score reachable when at least `k` of the `d^n` measurement
/// operators are fully separable: `(d^n − k + k/d) / d^n`.
pub fn separable_measurement_bound(params: GameParams, k: usize) -> Result<f64> {
    let outcomes = params.num_outcomes();
    if k > outcomes {
        return Err(Error::OutOfRange(format!(
            "k = {k} exceeds the number of outcomes {outcomes}"
        )));
    }
    let dn = outcomes as f64;
    let kf = k as f64;
    Ok((dn - kf + kf / params.d() as f64) / dn)
}

/// Visibility above which the clock/shift strategy on a noisy GHZ state beats
/// the biseparable bound: `(d^{n−1} − 1)/(d^n − 1)`.
pub fn ghz_visibility_threshold(params: GameParams) -> f64 {
    let d = params.d() as f64;
    let n = params.n() as i32;
    (d.powi(n - 1) - 1.0) / (d.powi(n) - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub score: f64,
    pub params: GameParams,
    pub margin: f64,
    pub gme_certified: bool,
    /// At least this many measurement operators are entangled.
    pub certified_entangled_ops: usize,
    /// `(k, bound_k)` for `k = 1..=d^n`.
    pub thresholds: Vec<(usize, f64)>,
}

/// Applies both bounds to an observed score.
///
/// Violations must be strict: `score > bound + margin`. Use `margin = 0` for
/// exact scores and a statistical error bar for experimental estimates.
pub fn certify(score: f64, params: GameParams, margin: f64) -> Result<CertificationReport> {
    if !(-STRUCT_TOL..=1.0 + STRUCT_TOL).contains(&score) || !score.is_finite() {
        return Err(Error::OutOfRange(format!("score {score} not in [0, 1]")));
    }
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(Error::OutOfRange(format!("margin {margin} must be nonnegative")));
    }
    let outcomes = params.num_outcomes();
    let thresholds: Vec<(usize, f64)> = (1..=outcomes)
        .map(|k| Ok((k, separable_measurement_bound(params, k)?)))
        .collect::<Result<_>>()?;
    let certified_entangled_ops = thresholds
        .iter()
        .find(|&&(_, bound)| score > bound + margin)
        .map_or(0, |&(k, _)| outcomes - k + 1);
    Ok(CertificationReport {
        score,
        params,
        margin,
        gme_certified: score > biseparable_bound(params) + margin,
        certified_entangled_ops,
        thresholds,
    })
}

/// Settings for the GHZ-fraction estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionConfig {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    /// Kraus rank for the extractable fraction; `None` means `d`.
    pub kraus_rank: Option<usize>,
}

impl Default for FractionConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iter: 500,
            tol: 1e-10,
            seed: 0,
            kraus_rank: None,
        }
    }
}

/// A lower bound on a GHZ fraction together with the local maps reaching it.
#[derive(Debug, Clone)]
pub struct FractionEstimate {
    pub value: f64,
    /// False when the best restart stopped on `max_iter`.
    pub converged: bool,
    pub best_restart: usize,
    /// One channel per party.
    pub maps: Vec<Channel>,
}

struct AscentRun {
    value: f64,
    converged: bool,
    fams: Families,
}

fn run_ascent(obj: &LocalObjective<'_>, mut fams: Families, max_iter: usize, tol: f64) -> AscentRun {
    let mut value = obj.value(&fams);
    for _ in 0..max_iter {
        let before = value;
        for k in 0..obj.parties() {
            let next = obj.ascend_party(&mut fams, k, value);
            assert!(next >= value - 1e-12, "ascent decreased: {value} -> {next}");
            value = next;
        }
        if value - before < tol {
            return AscentRun {
                value,
                converged: true,
                fams,
            };
        }
    }
    AscentRun {
        value,
        converged: false,
        fams,
    }
}

fn pick_best(runs: Vec<AscentRun>) -> FractionEstimate {
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value > runs[best].value {
            best = i;
        }
    }
    let run = runs.into_iter().nth(best).expect("at least one restart");
    FractionEstimate {
        value: run.value,
        converged: run.converged,
        best_restart: best,
        maps: run.fams.into_iter().map(|mut f| f.remove(0)).collect(),
    }
}

fn check_state(state: &DensityMatrix, params: GameParams) -> Result<()> {
    params.check_size()?;
    if state.dim() != params.num_outcomes() {
        return Err(Error::DimensionMismatch(format!(
            "state has dimension {}, expected d^n = {}",
            state.dim(),
            params.num_outcomes()
        )));
    }
    Ok(())
}

fn check_config(config: &FractionConfig) -> Result<()> {
    if config.restarts == 0 || config.max_iter == 0 || config.tol.is_nan() || config.tol <= 0.0 {
        return Err(Error::InvalidParams(
            "restarts and max_iter must be positive and tol > 0".into(),
        ));
    }
    if config.kraus_rank == Some(0) {
        return Err(Error::InvalidParams("Kraus rank must be at least 1".into()));
    }
    Ok(())
}

fn overlap_objective(state: &DensityMatrix, params: GameParams) -> Result<LocalObjective<'_>> {
    let ghz = ghz_state(params.n(), params.d())?.projector();
    let terms = vec![Term {
        labels: vec![0; params.n()],
        target: 0,
        weight: 1.0,
    }];
    Ok(LocalObjective::new(
        state.matrix(),
        vec![params.d(); params.n()],
        terms,
        vec![ghz],
    ))
}

/// GHZ fraction `max_{V_k} ⟨GHZ|(⊗V_k) ρ (⊗V_k)†|GHZ⟩`, estimated by
/// alternating Procrustes updates of the local unitaries. Restart 0 starts
/// from identities, the rest from Haar-random unitaries. The result is a
/// lower bound on the true fraction.
pub fn ghz_fraction(
    state: &DensityMatrix,
    params: GameParams,
    config: &FractionConfig,
) -> Result<FractionEstimate> {
    check_state(state, params)?;
    check_config(config)?;
    let obj = overlap_objective(state, params)?;
    let (n, d) = (params.n(), params.d());
    let runs: Vec<AscentRun> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let fams: Families = if r == 0 {
                (0..n).map(|_| vec![Channel::identity(d)]).collect()
            } else {
                let mut rng = substream(config.seed, r as u64);
                (0..n)
                    .map(|_| vec![Channel::from_kraus_unchecked(vec![haar_unitary(d, &mut rng)])])
                    .collect()
            };
            run_ascent(&obj, fams, config.max_iter, config.tol)
        })
        .collect();
    Ok(pick_best(runs))
}

/// Extractable GHZ fraction: the same overlap maximised over local channels
/// of fixed Kraus rank. Restart 0 starts from the best GHZ-fraction
/// unitaries, so the estimate never falls below [`ghz_fraction`] with the
/// same configuration. Heuristic lower bound.
pub fn extractable_ghz_fraction(
    state: &DensityMatrix,
    params: GameParams,
    config: &FractionConfig,
) -> Result<FractionEstimate> {
    let gf = ghz_fraction(state, params, config)?;
    let obj = overlap_objective(state, params)?;
    let (n, d) = (params.n(), params.d());
    let rank = config.kraus_rank.unwrap_or(d);
    let runs: Vec<AscentRun> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let fams: Families = if r == 0 {
                gf.maps
                    .iter()
                    .map(|u| {
                        let mut kraus = u.kraus().to_vec();
                        kraus.resize(rank, CMat::zeros(d, d));
                        vec![Channel::from_kraus_unchecked(kraus)]
                    })
                    .collect()
            } else {
                let mut rng = substream(config.seed ^ 0xE6F, r as u64);
                (0..n)
                    .map(|_| {
                        let v = random_isometry(rank * d, d, &mut rng);
                        vec![Channel::from_isometry_unchecked(&v, d)]
                    })
                    .collect()
            };
            run_ascent(&obj, fams, config.max_iter, config.tol)
        })
        .collect();
    Ok(pick_best(runs))
}

/// Per-element outcome of the PPT test.
#[derive(Debug, Clone, PartialEq)]
pub struct NptReport {
    /// Number of elements that are NPT across at least one bipartition.
    pub count: usize,
    /// Bipartitions tested, each given as the set of transposed parties.
    pub bipartitions: Vec<Vec<usize>>,
    /// `flags[element][bipartition]`: true when NPT.
    pub flags: Vec<Vec<bool>>,
    /// Elements with zero trace, not tested.
    pub inconclusive: Vec<usize>,
    /// True when PPT is equivalent to separability (2⊗2 and 2⊗3).
    pub exact: bool,
}

/// Counts POVM elements that are provably entangled by the PPT criterion.
///
/// Exact for two-party 2⊗2 and 2⊗3 elements, a lower bound otherwise.
pub fn count_npt_operators(povm: &Povm, dims: &[usize]) -> Result<NptReport> {
    if dims.iter().product::<usize>() != povm.dim() || dims.len() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "party dimensions {dims:?} do not factor POVM dimension {}",
            povm.dim()
        )));
    }
    let n = dims.len();
    // every bipartition once: transpose a nonempty subset of parties 1..n
    let bipartitions: Vec<Vec<usize>> = (1..(1usize << (n - 1)))
        .map(|mask| (1..n).filter(|&j| mask >> (j - 1) & 1 == 1).collect())
        .collect();
    let mut flags = Vec::with_capacity(povm.len());
    let mut inconclusive = Vec::new();
    for (i, e) in povm.elements().iter().enumerate() {
        let tr = trace_re(e);
        if tr.abs() < 1e-12 {
            inconclusive.push(i);
            flags.push(vec![false; bipartitions.len()]);
            continue;
        }
        let normalized = e.unscale(tr);
        let row = bipartitions
            .iter()
            .map(|s| {
                let pt = partial_transpose_subsystems(&normalized, dims, s)?;
                Ok(min_eigenvalue(&pt) < -STRUCT_TOL)
            })
            .collect::<Result<Vec<bool>>>()?;
        flags.push(row);
    }
    let count = flags.iter().filter(|row| row.iter().any(|&f| f)).count();
    let mut sorted = dims.to_vec();
    sorted.sort_unstable();
    let exact = n == 2 && (sorted == [2, 2] || sorted == [2, 3]);
    Ok(NptReport {
        count,
        bipartitions,
        flags,
        inconclusive,
        exact,
    })
}

/// `Tr[(⊗Λ_k)[ρ] |GHZ⟩⟨GHZ|]` for explicit local channels.
pub fn ghz_overlap(state: &DensityMatrix, params: GameParams, maps: &[Channel]) -> Result<f64> {
    check_state(state, params)?;
    if maps.len() != params.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} local maps for n = {}",
            maps.len(),
            params.n()
        )));
    }
    let refs: Vec<&Channel> = maps.iter().collect();
    let out = crate::scenario::transform_state(state.matrix(), &vec![params.d(); params.n()], &refs);
    let ghz = ghz_state(params.n(), params.d())?;
    Ok(crate::linalg::trace_product_re(&out, &ghz.projector()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{appendix_d_measurement, coloured_noise_bsm, noisy_bsm, noisy_ghz};

    fn p(n: usize, d: usize) -> GameParams {
        GameParams::new(n, d).unwrap()
    }

    #[test]
    fn biseparable_bound_values() {
        assert_eq!(biseparable_bound(p(2, 2)), 0.5);
        assert!((biseparable_bound(p(2, 3)) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(biseparable_bound(p(5, 2)), biseparable_bound(p(2, 2)));
    }

    #[test]
    fn separable_measurement_bound_values() {
        let q = p(2, 2);
        assert_eq!(separable_measurement_bound(q, 4).unwrap(), 0.5);
        assert_eq!(separable_measurement_bound(q, 1).unwrap(), 7.0 / 8.0);
        assert_eq!(separable_measurement_bound(q, 2).unwrap(), 0.75);
        assert_eq!(separable_measurement_bound(q, 0).unwrap(), 1.0);
        assert!(separable_measurement_bound(q, 5).is_err());
    }

    #[test]
    fn separable_bound_is_strictly_decreasing() {
        for (n, d) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let q = p(n, d);
            let dn = q.num_outcomes();
            for k in 0..dn {
                assert!(
                    separable_measurement_bound(q, k + 1).unwrap()
                        < separable_measurement_bound(q, k).unwrap()
                );
            }
            assert!(
                (separable_measurement_bound(q, dn).unwrap() - biseparable_bound(q)).abs() < 1e-15
            );
            let k1 = 1.0 - (d as f64 - 1.0) / (d as f64).powi(n as i32 + 1);
            assert!((separable_measurement_bound(q, 1).unwrap() - k1).abs() < 1e-15);
        }
    }

    #[test]
    fn certify_coloured_noise_steps() {
        let q = p(2, 2);
        let ops = |v: f64| certify((1.0 + v) / 2.0, q, 0.0).unwrap().certified_entangled_ops;
        assert_eq!(ops(0.8), 4);
        assert_eq!(ops(0.6), 3);
        assert_eq!(ops(0.3), 2);
        assert_eq!(ops(0.1), 1);
        assert_eq!(ops(0.0), 0);
    }

    #[test]
    fn certify_at_exact_bound_is_not_a_violation() {
        let r = certify(0.5, p(2, 2), 0.0).unwrap();
        assert!(!r.gme_certified);
        assert_eq!(r.certified_entangled_ops, 0);
        assert_eq!(r.thresholds.len(), 4);
    }

    #[test]
    fn certify_margin_and_range() {
        let r = certify(0.55, p(2, 2), 0.1).unwrap();
        assert!(!r.gme_certified);
        assert!(certify(1.5, p(2, 2), 0.0).is_err());
        assert!(certify(0.5, p(2, 2), -1.0).is_err());
    }

    #[test]
    fn ghz_thresholds() {
        for d in 2..6 {
            assert!((ghz_visibility_threshold(p(2, d)) - 1.0 / (d as f64 + 1.0)).abs() < 1e-15);
        }
        assert!((ghz_visibility_threshold(p(3, 2)) - 3.0 / 7.0).abs() < 1e-15);
        assert!((ghz_visibility_threshold(p(3, 3)) - 4.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn npt_counts_for_catalog_measurements() {
        assert_eq!(count_npt_operators(&coloured_noise_bsm(0.5).unwrap(), &[2, 2]).unwrap().count, 4);
        assert_eq!(count_npt_operators(&coloured_noise_bsm(0.2).unwrap(), &[2, 2]).unwrap().count, 2);
        let at_zero = count_npt_operators(&coloured_noise_bsm(0.0).unwrap(), &[2, 2]).unwrap();
        assert_eq!(at_zero.count, 1);
        assert!(at_zero.flags[3][0]);
        assert!(at_zero.exact);
        let r = count_npt_operators(&appendix_d_measurement(3, 2).unwrap(), &[3, 3]).unwrap();
        assert_eq!(r.count, 3);
        assert!(!r.exact);
        assert_eq!(count_npt_operators(&noisy_bsm(2, 0.2).unwrap(), &[2, 2]).unwrap().count, 0);
    }

    #[test]
    fn npt_count_uses_every_bipartition() {
        let povm = crate::catalog::ghz_basis_measurement(3, 2).unwrap();
        let r = count_npt_operators(&povm, &[2, 2, 2]).unwrap();
        assert_eq!(r.bipartitions.len(), 3);
        assert_eq!(r.count, 8);
        assert!(count_npt_operators(&povm, &[2, 4]).is_ok());
        assert!(count_npt_operators(&povm, &[2, 2]).is_err());
    }

    #[test]
    fn ghz_fraction_of_pure_ghz_is_one() {
        let rho = DensityMatrix::from_ket(&ghz_state(3, 2).unwrap()).unwrap();
        let est = ghz_fraction(&rho, p(3, 2), &FractionConfig { restarts: 2, ..Default::default() }).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        assert!(est.converged);
    }

    #[test]
    fn ghz_fraction_of_noisy_ghz_matches_closed_form() {
        for (n, d, v) in [(2, 2, 0.3), (2, 3, 0.6), (3, 2, 0.5)] {
            let rho = noisy_ghz(n, d, v).unwrap();
            let est = ghz_fraction(&rho, p(n, d), &FractionConfig { restarts: 4, ..Default::default() }).unwrap();
            let expected = v + (1.0 - v) / (d as f64).powi(n as i32);
            assert!((est.value - expected).abs() < 1e-6, "({n},{d},{v}): {}", est.value);
        }
    }

    #[test]
    fn ghz_fraction_of_white_noise() {
        let rho = DensityMatrix::maximally_mixed(9).unwrap();
        let est = ghz_fraction(&rho, p(2, 3), &FractionConfig { restarts: 3, ..Default::default() }).unwrap();
        assert!((est.value - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn egf_of_pure_ghz_is_one() {
        let rho = DensityMatrix::from_ket(&ghz_state(2, 2).unwrap()).unwrap();
        let est = extractable_ghz_fraction(&rho, p(2, 2), &FractionConfig { restarts: 3, ..Default::default() }).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
        for m in &est.maps {
            assert!(m.trace_preservation_error() < 1e-9);
        }
    }
}

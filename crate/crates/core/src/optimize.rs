//! Strategy search: seesaw over local maps and the joint measurement, plus
//! exhaustive classical oracles for the compression sub-task.

use rayon::prelude::*;

use crate::certify::{extractable_ghz_fraction, FractionConfig};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, identity, max_eigenvalue, pinv_sqrt, trace_product_re, CMat, DensityMatrix};
use crate::local::{Families, LocalObjective, Term};
use crate::random::{haar_unitary, random_basis_projectors, random_isometry, random_ket, random_povm, substream};
use crate::scenario::{
    effective_operators, objective, win_target_unchecked, Channel, ChannelFamily, GameParams, Povm,
    Strategy,
};

/// Which local maps the seesaw may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeesawMode {
    UnitaryOnly,
    GeneralChannel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub max_iter: usize,
    /// Stop once one full sweep improves the score by less than this.
    pub tol: f64,
    /// Kraus rank in general-channel mode; `None` means `d`.
    pub kraus_rank: Option<usize>,
    pub seed: u64,
    pub mode: SeesawMode,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            max_iter: 500,
            tol: 1e-8,
            kraus_rank: None,
            seed: 0,
            mode: SeesawMode::UnitaryOnly,
        }
    }
}

impl SeesawConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iter == 0 {
            return Err(Error::InvalidParams("restarts and max_iter must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParams(format!("tol {} must be positive", self.tol)));
        }
        if self.kraus_rank == Some(0) {
            return Err(Error::InvalidParams("Kraus rank must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub best_score: f64,
    pub best_strategy: Strategy,
    /// Score after each sweep of the best restart.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub best_restart: usize,
}

/// Outcome of the weighted-discrimination fixed point.
#[derive(Debug, Clone)]
pub struct PovmStep {
    pub elements: Vec<CMat>,
    pub value: f64,
    /// Certified upper bound on the optimum, from the dual.
    pub upper_bound: f64,
    pub iterations: usize,
    /// True when `upper_bound − value` fell below the requested gap.
    pub converged: bool,
    /// Set when an iterate was rejected or `R` could not be inverted, so the
    /// previous iterate was kept.
    pub fallback: bool,
}

const WARM_MIX: f64 = 0.05;
const GAP_CHECK_EVERY: usize = 10;

/// Maximises `Σ_b Tr[W_b M_b]` over POVMs by the fixed point
/// `M_b ← R⁺ W_b M_b W_b R⁺ + P_ker/N`, `R = (Σ_b W_b M_b W_b)^{1/2}`.
///
/// Stops once the duality gap is below `gap_tol`, the iterates stall, or
/// `max_iter` is reached. The iteration preserves the rank of each element,
/// so a warm start is first mixed with `I/N`. Iterates that lower the
/// objective are rejected, and the warm start itself is returned when
/// nothing beats it.
pub fn optimal_discrimination(
    weights: &[CMat],
    warm: Option<&[CMat]>,
    max_iter: usize,
    gap_tol: f64,
) -> Result<PovmStep> {
    let outcomes = weights.len();
    if outcomes == 0 {
        return Err(Error::Empty("weight operators"));
    }
    let dim = weights[0].nrows();
    if weights.iter().any(|w| w.nrows() != dim || w.ncols() != dim) {
        return Err(Error::DimensionMismatch("weight operators differ in shape".into()));
    }
    let uniform = identity(dim).unscale(outcomes as f64);
    let mut m: Vec<CMat> = match warm {
        Some(w) => {
            if w.len() != outcomes || w.iter().any(|e| e.nrows() != dim || e.ncols() != dim) {
                return Err(Error::DimensionMismatch("warm start does not match weights".into()));
            }
            w.iter()
                .map(|e| e.scale(1.0 - WARM_MIX) + uniform.scale(WARM_MIX))
                .collect()
        }
        None => vec![uniform.clone(); outcomes],
    };
    let mut value = objective(weights, &m);
    let mut upper_bound = f64::INFINITY;
    let mut fallback = false;
    let mut iterations = 0;
    while iterations < max_iter {
        if iterations % GAP_CHECK_EVERY == 0 {
            upper_bound = upper_bound.min(discrimination_upper_bound(weights, &m));
            if upper_bound - value < gap_tol {
                break;
            }
        }
        iterations += 1;
        let wm: Vec<CMat> = weights.iter().zip(&m).map(|(w, e)| w * e * w).collect();
        let s = hermitian_part(&wm.iter().fold(CMat::zeros(dim, dim), |acc, x| acc + x));
        let (r_inv, kernel) = pinv_sqrt(&s, 1e-13);
        if r_inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            fallback = true;
            break;
        }
        let free = kernel.unscale(outcomes as f64);
        let next: Vec<CMat> = wm
            .iter()
            .map(|x| hermitian_part(&(&r_inv * x * &r_inv)) + &free)
            .collect();
        let next_value = objective(weights, &next);
        if next_value <= value {
            // a linear objective cannot be rescued by damping
            fallback = next_value < value - 1e-14;
            break;
        }
        m = next;
        value = next_value;
    }
    upper_bound = upper_bound.min(discrimination_upper_bound(weights, &m));
    if let Some(w) = warm {
        let warm_value = objective(weights, w);
        if warm_value > value {
            return Ok(PovmStep {
                elements: w.to_vec(),
                value: warm_value,
                upper_bound: upper_bound.max(warm_value),
                iterations,
                converged: upper_bound - warm_value < gap_tol,
                fallback: true,
            });
        }
    }
    Ok(PovmStep {
        elements: m,
        value,
        upper_bound,
        iterations,
        converged: upper_bound - value < gap_tol,
        fallback,
    })
}

/// Upper bound on the optimum from a feasible dual point: `Y = herm(Σ W_b M_b)`
/// shifted by `max_b λ_max(W_b − Y)` so that `Y ≥ W_b` for every `b`.
pub fn discrimination_upper_bound(weights: &[CMat], povm: &[CMat]) -> f64 {
    let dim = weights[0].nrows();
    let y = hermitian_part(
        &weights
            .iter()
            .zip(povm)
            .fold(CMat::zeros(dim, dim), |acc, (w, m)| acc + w * m),
    );
    let shift = weights
        .iter()
        .map(|w| max_eigenvalue(&hermitian_part(&(w - &y))))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    crate::linalg::trace_re(&y) + shift * dim as f64
}

const POVM_STEP_MAX_ITER: usize = 1000;
const POVM_STEP_GAP: f64 = 1e-9;

/// Best joint measurement for a fixed state and fixed channels, to within a
/// certified gap of `1e-9` unless the iteration budget runs out first.
pub fn optimal_povm_step(
    state: &DensityMatrix,
    channels: &[ChannelFamily],
    params: GameParams,
) -> Result<Povm> {
    params.check_size()?;
    let in_dim: usize = channels.iter().map(ChannelFamily::dim_in).product();
    if channels.len() != params.n() || in_dim != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} channel families with joint input dimension {in_dim} for a state of dimension {}",
            channels.len(),
            state.dim()
        )));
    }
    let weights = effective_operators(state.matrix(), channels, params);
    let step = optimal_discrimination(&weights, None, POVM_STEP_MAX_ITER, POVM_STEP_GAP)?;
    let povm = Povm::from_elements_unchecked(step.elements);
    let deviation = povm.completeness_error();
    if deviation > 1e-8 {
        return Err(Error::IncompletePovm { deviation });
    }
    Ok(povm)
}

fn game_terms(params: GameParams) -> Vec<Term> {
    let weight = 1.0 / params.num_inputs() as f64;
    (0..params.num_inputs())
        .map(|t| {
            let (x, y) = params.input_tuple(t);
            Term {
                labels: (0..params.n()).map(|k| params.party_label(&x, &y, k)).collect(),
                target: params.outcome_index(&win_target_unchecked(&x, &y, params.d())),
                weight,
            }
        })
        .collect()
}

struct Run {
    value: f64,
    trace: Vec<f64>,
    converged: bool,
    fams: Families,
    povm: Vec<CMat>,
}

fn random_start(params: GameParams, in_dims: &[usize], config: &SeesawConfig, r: usize) -> (Families, Vec<CMat>) {
    let d = params.d();
    let rank = config.kraus_rank.unwrap_or(d);
    let mut rng = substream(config.seed, r as u64);
    let fams = in_dims
        .iter()
        .map(|&din| {
            (0..d * d)
                .map(|_| match config.mode {
                    SeesawMode::UnitaryOnly if din == d => {
                        Channel::from_kraus_unchecked(vec![haar_unitary(d, &mut rng)])
                    }
                    SeesawMode::UnitaryOnly => {
                        Channel::from_isometry_unchecked(&random_isometry(d, din, &mut rng), d)
                    }
                    SeesawMode::GeneralChannel => {
                        Channel::from_isometry_unchecked(&random_isometry(rank * d, din, &mut rng), d)
                    }
                })
                .collect()
        })
        .collect();
    let povm = random_basis_projectors(params.num_outcomes(), &mut rng);
    (fams, povm)
}

fn assert_valid_iterate(fams: &Families, povm: &[CMat]) {
    for fam in fams {
        for ch in fam {
            let dev = ch.trace_preservation_error();
            assert!(dev < 1e-8, "seesaw iterate left the channel set: {dev}");
        }
    }
    let dim = povm[0].nrows();
    let total = povm.iter().fold(CMat::zeros(dim, dim), |acc, e| acc + e);
    let dev = crate::linalg::max_abs_diff(&total, &identity(dim));
    assert!(dev < 1e-8, "seesaw iterate left the POVM set: {dev}");
}

fn run_seesaw(
    state: &DensityMatrix,
    in_dims: &[usize],
    terms: &[Term],
    config: &SeesawConfig,
    mut fams: Families,
    mut povm: Vec<CMat>,
) -> Run {
    let mut obj = LocalObjective::new(state.matrix(), in_dims.to_vec(), terms.to_vec(), povm.clone());
    let mut value = obj.value(&fams);
    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..config.max_iter {
        let before = value;
        let weights = obj.target_weights(&fams);
        let step = optimal_discrimination(&weights, Some(&povm), 200, 1e-11)
            .expect("weights match the POVM");
        if step.value >= value {
            povm = step.elements;
            value = step.value;
            obj.set_targets(povm.clone());
        }
        for k in 0..obj.parties() {
            let next = obj.ascend_party(&mut fams, k, value);
            assert!(next >= value - 1e-12, "seesaw decreased: {value} -> {next}");
            value = next;
        }
        assert_valid_iterate(&fams, &povm);
        if let Some(&last) = trace.last() {
            assert!(value >= last - 1e-12, "seesaw trace decreased: {last} -> {value}");
        }
        trace.push(value);
        if value - before < config.tol {
            converged = true;
            break;
        }
    }
    Run {
        value,
        trace,
        converged,
        fams,
        povm,
    }
}

/// Multi-restart seesaw maximising the score for a fixed state.
///
/// Each sweep solves for the measurement with the maps fixed, then updates
/// every party's maps by a Procrustes block step. Both steps are monotone,
/// so the recorded trace never decreases. Restart 0 starts from `initial`
/// when given; every other restart draws Haar-random maps and a random
/// orthonormal-basis measurement. The best restart wins, ties going to the
/// smaller index. The result is a lower bound on the true maximum.
pub fn seesaw(
    state: &DensityMatrix,
    params: GameParams,
    config: &SeesawConfig,
    initial: Option<&Strategy>,
) -> Result<SeesawResult> {
    config.validate()?;
    params.check_size()?;
    let in_dims = match initial {
        Some(s) => {
            if s.params() != params || s.state().dim() != state.dim() {
                return Err(Error::DimensionMismatch(
                    "initial strategy does not match the state and parameters".into(),
                ));
            }
            s.input_dims()
        }
        None => {
            if state.dim() != params.num_outcomes() {
                return Err(Error::DimensionMismatch(format!(
                    "state has dimension {}, expected d^n = {} without an initial strategy",
                    state.dim(),
                    params.num_outcomes()
                )));
            }
            vec![params.d(); params.n()]
        }
    };
    let terms = game_terms(params);
    let runs: Vec<Run> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let (fams, povm) = match (r, initial) {
                (0, Some(s)) => (
                    s.channels().iter().map(|f| f.maps().to_vec()).collect(),
                    s.povm().elements().to_vec(),
                ),
                _ => random_start(params, &in_dims, config, r),
            };
            run_seesaw(state, &in_dims, &terms, config, fams, povm)
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = i;
        }
    }
    let run = runs.into_iter().nth(best).expect("at least one restart");
    let channels = run
        .fams
        .into_iter()
        .enumerate()
        .map(|(k, maps)| ChannelFamily::from_maps_unchecked(k, params.d(), maps))
        .collect();
    let best_strategy = Strategy::from_parts_unchecked(
        params,
        state.clone(),
        channels,
        Povm::from_elements_unchecked(run.povm),
    );
    Ok(SeesawResult {
        best_score: run.value,
        best_strategy,
        trace: run.trace,
        converged: run.converged,
        best_restart: best,
    })
}

/// Largest search space the compression oracle will enumerate.
pub const MAX_COMPRESSION_SEARCH: u64 = 10_000_000;

/// Optimal classical success probability for sending one of `messages`
/// equiprobable messages through a `d`-level system, by exhaustive search
/// over deterministic encodings and decodings.
///
/// Encodings are enumerated up to relabelling of the `d` symbols (restricted
/// growth strings); every decoding `{0..d-1} → {0..messages-1}` is tried.
pub fn compression_oracle(messages: usize, d: usize) -> Result<f64> {
    if messages == 0 || d == 0 {
        return Err(Error::InvalidParams("need at least one message and one symbol".into()));
    }
    let encodings = (d as u64).checked_pow(messages as u32);
    let decodings = (messages as u64).checked_pow(d as u32);
    match (encodings, decodings) {
        (Some(e), Some(dec)) if e <= MAX_COMPRESSION_SEARCH && dec <= MAX_COMPRESSION_SEARCH => {}
        _ => {
            return Err(Error::SizeGuard(format!(
                "compression search with N = {messages}, d = {d} exceeds {MAX_COMPRESSION_SEARCH} per side"
            )))
        }
    }
    let mut best = 0usize;
    let mut enc = vec![0usize; messages];
    loop {
        best = best.max(best_decoding_hits(&enc, messages, d));
        if best == messages || !next_growth_string(&mut enc, d) {
            break;
        }
    }
    Ok(best as f64 / messages as f64)
}

fn best_decoding_hits(enc: &[usize], messages: usize, d: usize) -> usize {
    let mut dec = vec![0usize; d];
    let mut best = 0;
    loop {
        let hits = enc
            .iter()
            .enumerate()
            .filter(|&(x, &s)| dec[s] == x)
            .count();
        best = best.max(hits);
        // odometer over decodings
        let mut i = 0;
        while i < d {
            dec[i] += 1;
            if dec[i] < messages {
                break;
            }
            dec[i] = 0;
            i += 1;
        }
        if i == d {
            return best;
        }
    }
}

/// Advances a restricted growth string over at most `d` symbols.
fn next_growth_string(s: &mut [usize], d: usize) -> bool {
    let len = s.len();
    for i in (1..len).rev() {
        let max_prefix = s[..i].iter().copied().max().unwrap_or(0);
        if s[i] <= max_prefix && s[i] + 1 < d {
            s[i] += 1;
            for v in &mut s[i + 1..] {
                *v = 0;
            }
            return true;
        }
    }
    false
}

/// Largest success probability seen over random quantum strategies for the
/// compression task: Haar-random pure encodings in dimension `d` decoded by
/// a random POVM and by the best POVM for those encodings.
pub fn quantum_compression_sample(messages: usize, d: usize, samples: usize, seed: u64) -> Result<f64> {
    if messages == 0 || d == 0 {
        return Err(Error::InvalidParams("need at least one message and one symbol".into()));
    }
    let best: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i as u64);
            let states: Vec<CMat> = (0..messages).map(|_| random_ket(d, &mut rng).projector()).collect();
            let povm = random_povm(d, messages, &mut rng);
            let random = success(&states, &povm);
            let weights: Vec<CMat> = states.iter().map(|s| s.unscale(messages as f64)).collect();
            let tuned = optimal_discrimination(&weights, None, 2000, 1e-12)
                .map(|s| s.value)
                .unwrap_or(0.0);
            random.max(tuned)
        })
        .collect();
    Ok(best.into_iter().fold(0.0, f64::max))
}

fn success(states: &[CMat], povm: &[CMat]) -> f64 {
    let total: f64 = states.iter().zip(povm).map(|(s, m)| trace_product_re(s, m)).sum();
    total / states.len() as f64
}

/// Side-by-side numbers for the conjectured equality of the optimal score
/// and the extractable GHZ fraction. Neither value is a certified optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureProbe {
    pub seesaw_best: f64,
    pub egf_estimate: f64,
    pub gap: f64,
}

/// Runs the general-channel seesaw and the extractable-GHZ-fraction search on
/// the same state. Only the cases `(2,2)`, `(2,3)` and `(3,2)` are accepted.
pub fn conjecture_probe(
    state: &DensityMatrix,
    params: GameParams,
    config: &SeesawConfig,
) -> Result<ConjectureProbe> {
    if !matches!((params.n(), params.d()), (2, 2) | (2, 3) | (3, 2)) {
        return Err(Error::Unsupported(format!(
            "conjecture probe covers (n,d) in {{(2,2),(2,3),(3,2)}}, got ({},{})",
            params.n(),
            params.d()
        )));
    }
    let seesaw_config = SeesawConfig {
        mode: SeesawMode::GeneralChannel,
        ..config.clone()
    };
    let seesaw_best = seesaw(state, params, &seesaw_config, None)?.best_score;
    let fraction_config = FractionConfig {
        restarts: config.restarts,
        seed: config.seed,
        kraus_rank: config.kraus_rank,
        ..FractionConfig::default()
    };
    let egf_estimate = extractable_ghz_fraction(state, params, &fraction_config)?.value;
    Ok(ConjectureProbe {
        seesaw_best,
        egf_estimate,
        gap: seesaw_best - egf_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{clock_shift_channels, ghz_state, noisy_ghz};
    use crate::linalg::{eigh, Ket};
    use crate::scenario::score;

    fn p(n: usize, d: usize) -> GameParams {
        GameParams::new(n, d).unwrap()
    }

    #[test]
    fn povm_step_recovers_ghz_basis() {
        for (n, d) in [(2, 2), (2, 3), (3, 2)] {
            let rho = DensityMatrix::from_ket(&ghz_state(n, d).unwrap()).unwrap();
            let channels = clock_shift_channels(n, d).unwrap();
            let povm = optimal_povm_step(&rho, &channels, p(n, d)).unwrap();
            let s = Strategy::new(p(n, d), rho, channels, povm).unwrap();
            assert!((score(&s).unwrap().score - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn povm_step_on_white_noise() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        let channels = clock_shift_channels(2, 2).unwrap();
        let povm = optimal_povm_step(&rho, &channels, p(2, 2)).unwrap();
        assert!(povm.completeness_error() < 1e-8);
        let s = Strategy::new(p(2, 2), rho, channels, povm).unwrap();
        assert!((score(&s).unwrap().score - 0.25).abs() < 1e-12);
    }

    #[test]
    fn discrimination_matches_helstrom() {
        let zero = Ket::basis(2, 0).unwrap().projector();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let w0 = zero.scale(0.6);
        let w1 = Ket::from_real(&[h, h]).unwrap().projector().scale(0.4);
        // Helstrom: project onto the positive part of W0 − W1
        let diff = eigh(&(&w0 - &w1));
        let helstrom = trace_product_re(&w1, &identity(2))
            + diff.values.iter().filter(|&&v| v > 0.0).sum::<f64>();
        let step = optimal_discrimination(&[w0, w1], None, 5000, 1e-12).unwrap();
        assert!((step.value - helstrom).abs() < 1e-8, "{} vs {helstrom}", step.value);
        assert!(step.converged && step.upper_bound >= helstrom - 1e-12);
    }

    #[test]
    fn discrimination_never_loses_to_warm_start() {
        let mut rng = crate::random::rng_from_seed(9);
        for _ in 0..10 {
            let weights: Vec<CMat> = (0..4)
                .map(|_| crate::random::random_density(4, 2, &mut rng).into_inner().scale(0.25))
                .collect();
            let warm = random_basis_projectors(4, &mut rng);
            let before = objective(&weights, &warm);
            let step = optimal_discrimination(&weights, Some(&warm), 50, 1e-12).unwrap();
            assert!(step.value >= before - 1e-15);
        }
    }

    #[test]
    fn discrimination_rejects_mismatched_warm_start() {
        let w = vec![identity(2).scale(0.5); 2];
        assert!(optimal_discrimination(&w, Some(&[identity(2)]), 10, 1e-9).is_err());
        assert!(optimal_discrimination(&[], None, 10, 1e-9).is_err());
    }

    #[test]
    fn compression_oracle_small_cases() {
        assert_eq!(compression_oracle(4, 2).unwrap(), 0.5);
        assert_eq!(compression_oracle(2, 2).unwrap(), 1.0);
        assert_eq!(compression_oracle(1, 3).unwrap(), 1.0);
        assert!(compression_oracle(30, 3).is_err());
    }

    #[test]
    fn growth_strings_are_counted_by_stirling_sums() {
        // Σ_{k≤d} S(n,k): S(4,1..2) = 1 + 7
        let mut s = vec![0; 4];
        let mut count = 1;
        while next_growth_string(&mut s, 2) {
            count += 1;
        }
        assert_eq!(count, 8);
        let mut s = vec![0; 5];
        let mut count = 1;
        while next_growth_string(&mut s, 3) {
            count += 1;
        }
        // S(5,1) + S(5,2) + S(5,3) = 1 + 15 + 25
        assert_eq!(count, 41);
    }

    #[test]
    fn seesaw_finds_ideal_score_on_ghz() {
        let rho = DensityMatrix::from_ket(&ghz_state(2, 2).unwrap()).unwrap();
        let config = SeesawConfig {
            restarts: 4,
            seed: 1,
            ..Default::default()
        };
        let r = seesaw(&rho, p(2, 2), &config, None).unwrap();
        assert!((r.best_score - 1.0).abs() < 1e-6, "{}", r.best_score);
        assert_eq!(*r.trace.last().unwrap(), r.best_score);
        for w in r.trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        let rescored = score(&r.best_strategy).unwrap().score;
        assert!((rescored - r.best_score).abs() < 1e-10);
    }

    #[test]
    fn seesaw_on_noisy_ghz_reaches_closed_form() {
        let v = 0.5;
        let rho = noisy_ghz(2, 2, v).unwrap();
        let config = SeesawConfig {
            restarts: 4,
            seed: 2,
            ..Default::default()
        };
        let r = seesaw(&rho, p(2, 2), &config, None).unwrap();
        assert!((r.best_score - (v + (1.0 - v) / 4.0)).abs() < 1e-5, "{}", r.best_score);
    }

    #[test]
    fn seesaw_rejects_bad_config() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        let bad = SeesawConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(seesaw(&rho, p(2, 2), &bad, None).is_err());
        let rho9 = DensityMatrix::maximally_mixed(9).unwrap();
        assert!(seesaw(&rho9, p(2, 2), &SeesawConfig::default(), None).is_err());
    }

    #[test]
    fn conjecture_probe_rejects_untested_cases() {
        let rho = noisy_ghz(3, 3, 0.5).unwrap();
        assert!(matches!(
            conjecture_probe(&rho, p(3, 3), &SeesawConfig::default()),
            Err(Error::Unsupported(_))
        ));
    }
}

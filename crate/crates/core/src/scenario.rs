//! The certification game: inputs, win condition, strategies and the score.
//!
//! Each of `n` parties receives uniformly random `x_k, y_k ∈ {0..d-1}`,
//! applies a channel into a `d`-dimensional system, and a referee measures
//! all systems jointly to produce `b ∈ {0..d-1}^n`. The round is won when
//! `b_1 = Σ x_i` and `b_k = y_k − y_1` (mod `d`) for `k ≥ 2`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    self, apply_local_kraus, identity, max_abs_diff, trace_product_re, CMat, DensityMatrix,
    STRUCT_TOL,
};

/// Largest joint output dimension accepted by any entry point.
pub const MAX_JOINT_DIM: usize = 81;
/// Largest number of input tuples accepted by any entry point.
pub const MAX_INPUT_TUPLES: usize = 729 * 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameParams {
    n: usize,
    d: usize,
}

impl GameParams {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least 2 sending parties, got n = {n}"
            )));
        }
        if d < 2 {
            return Err(Error::InvalidParams(format!(
                "local dimension must be at least 2, got d = {d}"
            )));
        }
        let outcomes = d.checked_pow(n as u32);
        let tuples = outcomes.and_then(|o| o.checked_mul(o));
        if outcomes.is_none() || tuples.is_none() {
            return Err(Error::SizeGuard(format!("d^n overflows for n = {n}, d = {d}")));
        }
        Ok(Self { n, d })
    }

    /// Like [`GameParams::new`] but also enforces the desk-scale size guard
    /// `d^n ≤ 81`, `d^{2n} ≤ 6561`.
    pub fn guarded(n: usize, d: usize) -> Result<Self> {
        let p = Self::new(n, d)?;
        p.check_size()?;
        Ok(p)
    }

    pub fn check_size(&self) -> Result<()> {
        if self.num_outcomes() > MAX_JOINT_DIM || self.num_inputs() > MAX_INPUT_TUPLES {
            return Err(Error::SizeGuard(format!(
                "(n, d) = ({}, {}) gives d^n = {} and d^2n = {}; limits are {} and {}",
                self.n,
                self.d,
                self.num_outcomes(),
                self.num_inputs(),
                MAX_JOINT_DIM,
                MAX_INPUT_TUPLES
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `d^n`: number of outcome strings, also the joint output dimension.
    pub fn num_outcomes(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    /// `d^{2n}`: number of input tuples `(x, y)`.
    pub fn num_inputs(&self) -> usize {
        self.num_outcomes() * self.num_outcomes()
    }

    pub fn outcome_index(&self, b: &[usize]) -> usize {
        linalg::flat_index(b, &vec![self.d; self.n])
    }

    pub fn outcome_string(&self, index: usize) -> Vec<usize> {
        linalg::digits(index, &vec![self.d; self.n])
    }

    /// Input tuple `t` in lexicographic order over `(x_1..x_n, y_1..y_n)`.
    pub fn input_tuple(&self, t: usize) -> (Vec<usize>, Vec<usize>) {
        let all = linalg::digits(t, &vec![self.d; 2 * self.n]);
        let (x, y) = all.split_at(self.n);
        (x.to_vec(), y.to_vec())
    }

    pub fn input_index(&self, x: &[usize], y: &[usize]) -> usize {
        let all: Vec<usize> = x.iter().chain(y).copied().collect();
        linalg::flat_index(&all, &vec![self.d; 2 * self.n])
    }

    /// Channel label `x_k·d + y_k` for party `k` of input tuple `t`.
    pub fn party_label(&self, x: &[usize], y: &[usize], k: usize) -> usize {
        x[k] * self.d + y[k]
    }
}

/// Winning outcome string `C(x, y)`.
pub fn win_target(x: &[usize], y: &[usize], params: GameParams) -> Result<Vec<usize>> {
    let (n, d) = (params.n, params.d);
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "inputs have lengths {} and {}, expected {n}",
            x.len(),
            y.len()
        )));
    }
    if let Some(&bad) = x.iter().chain(y).find(|&&v| v >= d) {
        return Err(Error::OutOfRange(format!("input value {bad} not in 0..{d}")));
    }
    Ok(win_target_unchecked(x, y, d))
}

pub(crate) fn win_target_unchecked(x: &[usize], y: &[usize], d: usize) -> Vec<usize> {
    let mut b = Vec::with_capacity(x.len());
    b.push(x.iter().sum::<usize>() % d);
    for k in 1..x.len() {
        b.push((y[k] + d - y[0]) % d);
    }
    b
}

/// A CPTP map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    kraus: Vec<CMat>,
}

impl Channel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::Empty("Kraus operators"))?;
        let (dout, din) = first.shape();
        if din == 0 || dout == 0 {
            return Err(Error::Empty("Kraus operator dimensions"));
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (dout, din)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators of shapes {:?} and {:?}",
                (dout, din),
                k.shape()
            )));
        }
        let ch = Self { kraus };
        let deviation = ch.trace_preservation_error();
        if deviation > STRUCT_TOL {
            return Err(Error::NotTracePreserving {
                context: "Kraus list".into(),
                deviation,
            });
        }
        Ok(ch)
    }

    pub fn unitary(u: CMat) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![identity(dim)],
        }
    }

    /// Splits a stacked isometry `[K_1; K_2; …]` into Kraus blocks of `dout` rows.
    pub(crate) fn from_isometry_unchecked(v: &CMat, dout: usize) -> Self {
        let rank = v.nrows() / dout;
        let kraus = (0..rank)
            .map(|i| v.rows(i * dout, dout).into_owned())
            .collect();
        Self { kraus }
    }

    pub(crate) fn from_kraus_unchecked(kraus: Vec<CMat>) -> Self {
        Self { kraus }
    }

    pub(crate) fn stacked(&self) -> CMat {
        let dout = self.dim_out();
        let mut v = CMat::zeros(dout * self.kraus.len(), self.dim_in());
        for (i, k) in self.kraus.iter().enumerate() {
            v.rows_mut(i * dout, dout).copy_from(k);
        }
        v
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.kraus[0].nrows()
    }

    pub fn rank(&self) -> usize {
        self.kraus.len()
    }

    pub fn trace_preservation_error(&self) -> f64 {
        let sum = self
            .kraus
            .iter()
            .fold(CMat::zeros(self.dim_in(), self.dim_in()), |acc, k| {
                acc + k.adjoint() * k
            });
        max_abs_diff(&sum, &identity(self.dim_in()))
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        apply_local_kraus(rho, &[rho.nrows()], 0, &self.kraus)
    }
}

/// Channels `T_{x,y}` of one party, stored at index `x·d + y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFamily {
    party: usize,
    d: usize,
    maps: Vec<Channel>,
}

impl ChannelFamily {
    pub fn new(party: usize, d: usize, maps: Vec<Channel>) -> Result<Self> {
        if maps.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "party {party}: expected {} channels, got {}",
                d * d,
                maps.len()
            )));
        }
        let dim_in = maps[0].dim_in();
        for (i, m) in maps.iter().enumerate() {
            if m.dim_out() != d {
                return Err(Error::DimensionMismatch(format!(
                    "party {party}, input ({}, {}): output dimension {} exceeds the bound d = {d}",
                    i / d,
                    i % d,
                    m.dim_out()
                )));
            }
            if m.dim_in() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "party {party}: channels disagree on input dimension ({} vs {dim_in})",
                    m.dim_in()
                )));
            }
            let deviation = m.trace_preservation_error();
            if deviation > STRUCT_TOL {
                return Err(Error::NotTracePreserving {
                    context: format!("party {party}, input ({}, {})", i / d, i % d),
                    deviation,
                });
            }
        }
        Ok(Self { party, d, maps })
    }

    pub fn from_fn(party: usize, d: usize, f: impl Fn(usize, usize) -> Result<Channel>) -> Result<Self> {
        let mut maps = Vec::with_capacity(d * d);
        for x in 0..d {
            for y in 0..d {
                maps.push(f(x, y)?);
            }
        }
        Self::new(party, d, maps)
    }

    pub(crate) fn from_maps_unchecked(party: usize, d: usize, maps: Vec<Channel>) -> Self {
        Self { party, d, maps }
    }

    pub fn party(&self) -> usize {
        self.party
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim_in(&self) -> usize {
        self.maps[0].dim_in()
    }

    pub fn get(&self, x: usize, y: usize) -> &Channel {
        &self.maps[x * self.d + y]
    }

    pub fn maps(&self) -> &[Channel] {
        &self.maps
    }

    pub fn max_trace_preservation_error(&self) -> f64 {
        self.maps
            .iter()
            .map(Channel::trace_preservation_error)
            .fold(0.0, f64::max)
    }
}

/// A POVM on the joint output space, elements indexed by outcome string.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<CMat>,
}

impl Povm {
    pub fn new(elements: Vec<CMat>) -> Result<Self> {
        let first = elements.first().ok_or(Error::Empty("POVM elements"))?;
        let dim = first.nrows();
        for e in &elements {
            if e.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch(format!(
                    "POVM element of shape {:?}, expected {dim}x{dim}",
                    e.shape()
                )));
            }
            let h = linalg::Hermitian::new(e.clone())?;
            let min_eigenvalue = h.min_eigenvalue();
            if min_eigenvalue < -STRUCT_TOL {
                return Err(Error::NotPositive { min_eigenvalue });
            }
        }
        let povm = Self { elements };
        let deviation = povm.completeness_error();
        if deviation > STRUCT_TOL {
            return Err(Error::IncompletePovm { deviation });
        }
        Ok(povm)
    }

    pub fn projective(kets: &[linalg::Ket]) -> Result<Self> {
        Self::new(kets.iter().map(linalg::Ket::projector).collect())
    }

    pub(crate) fn from_elements_unchecked(elements: Vec<CMat>) -> Self {
        Self { elements }
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn completeness_error(&self) -> f64 {
        let dim = self.dim();
        let sum = self
            .elements
            .iter()
            .fold(CMat::zeros(dim, dim), |acc, e| acc + e);
        max_abs_diff(&sum, &identity(dim))
    }

    /// Relabels outcomes: element `g(b)` of the result is element `b` here.
    pub fn relabel(&self, g: impl Fn(usize) -> usize) -> Result<Self> {
        let mut out = vec![None; self.len()];
        for (b, e) in self.elements.iter().enumerate() {
            let slot = out
                .get_mut(g(b))
                .ok_or_else(|| Error::OutOfRange("relabelling target".into()))?;
            if slot.replace(e.clone()).is_some() {
                return Err(Error::InvalidParams("relabelling is not a bijection".into()));
            }
        }
        Ok(Self {
            elements: out.into_iter().map(Option::unwrap).collect(),
        })
    }
}

/// Everything needed to evaluate the score.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    params: GameParams,
    state: DensityMatrix,
    channels: Vec<ChannelFamily>,
    povm: Povm,
}

impl Strategy {
    pub fn new(
        params: GameParams,
        state: DensityMatrix,
        channels: Vec<ChannelFamily>,
        povm: Povm,
    ) -> Result<Self> {
        if channels.len() != params.n {
            return Err(Error::DimensionMismatch(format!(
                "{} channel families for n = {}",
                channels.len(),
                params.n
            )));
        }
        for (k, fam) in channels.iter().enumerate() {
            if fam.d != params.d {
                return Err(Error::DimensionMismatch(format!(
                    "party {k}: channel family built for d = {}, game has d = {}",
                    fam.d, params.d
                )));
            }
        }
        let in_dim: usize = channels.iter().map(ChannelFamily::dim_in).product();
        if in_dim != state.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has dimension {}, channel inputs multiply to {in_dim}",
                state.dim()
            )));
        }
        if povm.len() != params.num_outcomes() || povm.dim() != params.num_outcomes() {
            return Err(Error::DimensionMismatch(format!(
                "POVM has {} elements of dimension {}, expected {} of dimension {}",
                povm.len(),
                povm.dim(),
                params.num_outcomes(),
                params.num_outcomes()
            )));
        }
        Ok(Self {
            params,
            state,
            channels,
            povm,
        })
    }

    pub(crate) fn from_parts_unchecked(
        params: GameParams,
        state: DensityMatrix,
        channels: Vec<ChannelFamily>,
        povm: Povm,
    ) -> Self {
        Self {
            params,
            state,
            channels,
            povm,
        }
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn channels(&self) -> &[ChannelFamily] {
        &self.channels
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn input_dims(&self) -> Vec<usize> {
        self.channels.iter().map(ChannelFamily::dim_in).collect()
    }

    pub fn with_state(&self, state: DensityMatrix) -> Result<Self> {
        Self::new(self.params, state, self.channels.clone(), self.povm.clone())
    }

    pub fn with_povm(&self, povm: Povm) -> Result<Self> {
        Self::new(self.params, self.state.clone(), self.channels.clone(), povm)
    }

    pub fn with_channels(&self, channels: Vec<ChannelFamily>) -> Result<Self> {
        Self::new(self.params, self.state.clone(), channels, self.povm.clone())
    }
}

/// Applies `maps[k]` to subsystem `k` for every party.
pub fn transform_state(state: &CMat, input_dims: &[usize], maps: &[&Channel]) -> CMat {
    let mut dims = input_dims.to_vec();
    let mut op = state.clone();
    for (k, ch) in maps.iter().enumerate() {
        op = apply_local_kraus(&op, &dims, k, ch.kraus());
        dims[k] = ch.dim_out();
    }
    op
}

/// Output state `(⊗_k T^{(k)}_{x_k y_k})[ρ]` for input tuple `t`.
pub(crate) fn transformed_for_tuple(
    state: &CMat,
    input_dims: &[usize],
    channels: &[ChannelFamily],
    params: GameParams,
    t: usize,
) -> CMat {
    let (x, y) = params.input_tuple(t);
    let maps: Vec<&Channel> = channels
        .iter()
        .enumerate()
        .map(|(k, f)| &f.maps[params.party_label(&x, &y, k)])
        .collect();
    transform_state(state, input_dims, &maps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputWin {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub score: f64,
    /// Win probability per input tuple, lexicographic over `(x, y)`.
    pub per_input_win: Vec<InputWin>,
    pub params: GameParams,
}

impl ScoreReport {
    fn from_wins(params: GameParams, wins: Vec<f64>) -> Self {
        // fixed-order reduction keeps the result independent of thread count
        let total: f64 = wins.iter().sum();
        let score = total / wins.len() as f64;
        let per_input_win = wins
            .into_iter()
            .enumerate()
            .map(|(t, p)| {
                let (x, y) = params.input_tuple(t);
                InputWin { x, y, p }
            })
            .collect();
        Self {
            score,
            per_input_win,
            params,
        }
    }
}

/// Exact score: average win probability over all `d^{2n}` input tuples.
pub fn score(strategy: &Strategy) -> Result<ScoreReport> {
    let params = strategy.params;
    params.check_size()?;
    let completeness = strategy.povm.completeness_error();
    if completeness > STRUCT_TOL {
        return Err(Error::IncompletePovm {
            deviation: completeness,
        });
    }
    for fam in &strategy.channels {
        let deviation = fam.max_trace_preservation_error();
        if deviation > STRUCT_TOL {
            return Err(Error::NotTracePreserving {
                context: format!("party {}", fam.party),
                deviation,
            });
        }
    }
    let input_dims = strategy.input_dims();
    let rho = strategy.state.matrix();
    let wins: Vec<f64> = (0..params.num_inputs())
        .into_par_iter()
        .map(|t| {
            let out = transformed_for_tuple(rho, &input_dims, &strategy.channels, params, t);
            let (x, y) = params.input_tuple(t);
            let b = params.outcome_index(&win_target_unchecked(&x, &y, params.d));
            trace_product_re(&out, &strategy.povm.elements[b])
        })
        .collect();
    Ok(ScoreReport::from_wins(params, wins))
}

/// Effective operators `W_b = d^{-2n} Σ_{(x,y): C(x,y) = b} (⊗T)[ρ]`, so that
/// the score equals `Σ_b Tr[W_b M_b]`.
pub fn effective_operators(
    state: &CMat,
    channels: &[ChannelFamily],
    params: GameParams,
) -> Vec<CMat> {
    let input_dims: Vec<usize> = channels.iter().map(ChannelFamily::dim_in).collect();
    let d = params.d;
    let n = params.n;
    let scale = 1.0 / params.num_inputs() as f64;
    (0..params.num_outcomes())
        .into_par_iter()
        .map(|b_idx| {
            let b = params.outcome_string(b_idx);
            let dim = params.num_outcomes();
            let mut acc = CMat::zeros(dim, dim);
            // enumerate (x_1..x_{n-1}, y_1); the rest is fixed by b
            for free in 0..d.pow(n as u32) {
                let digits = linalg::digits(free, &vec![d; n]);
                let mut x = digits[..n - 1].to_vec();
                let partial: usize = x.iter().sum();
                x.push((b[0] + d * n - partial % d) % d);
                let y1 = digits[n - 1];
                let mut y = vec![y1];
                for &bk in &b[1..] {
                    y.push((y1 + bk) % d);
                }
                let t = params.input_index(&x, &y);
                acc += transformed_for_tuple(state, &input_dims, channels, params, t);
            }
            acc.scale(scale)
        })
        .collect()
}

/// `Σ_b Tr[W_b M_b]`.
pub fn objective(weights: &[CMat], povm: &[CMat]) -> f64 {
    weights
        .iter()
        .zip(povm)
        .map(|(w, m)| trace_product_re(w, m))
        .sum()
}

/// Conditional distribution `P(b | x, y)`, stored as `table[t·d^n + b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlations {
    params: GameParams,
    table: Vec<f64>,
}

impl Correlations {
    pub fn zeros(params: GameParams) -> Self {
        Self {
            params,
            table: vec![0.0; params.num_inputs() * params.num_outcomes()],
        }
    }

    pub fn from_fn(params: GameParams, f: impl Fn(&[usize], &[usize], &[usize]) -> f64) -> Self {
        let mut c = Self::zeros(params);
        for t in 0..params.num_inputs() {
            let (x, y) = params.input_tuple(t);
            for b_idx in 0..params.num_outcomes() {
                let b = params.outcome_string(b_idx);
                c.table[t * params.num_outcomes() + b_idx] = f(&x, &y, &b);
            }
        }
        c
    }

    /// Adds probability mass to one entry.
    pub fn add(&mut self, x: &[usize], y: &[usize], b: &[usize], p: f64) -> Result<()> {
        let (n, d) = (self.params.n, self.params.d);
        if x.len() != n || y.len() != n || b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "row has lengths ({}, {}, {}), expected {n}",
                x.len(),
                y.len(),
                b.len()
            )));
        }
        if let Some(&bad) = x.iter().chain(y).chain(b).find(|&&v| v >= d) {
            return Err(Error::OutOfRange(format!("value {bad} not in 0..{d}")));
        }
        let idx = self.params.input_index(x, y) * self.params.num_outcomes()
            + self.params.outcome_index(b);
        self.table[idx] += p;
        Ok(())
    }

    pub fn get(&self, x: &[usize], y: &[usize], b: &[usize]) -> f64 {
        self.table[self.params.input_index(x, y) * self.params.num_outcomes()
            + self.params.outcome_index(b)]
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    /// Correlations produced by a quantum strategy.
    pub fn from_strategy(strategy: &Strategy) -> Result<Self> {
        let params = strategy.params;
        params.check_size()?;
        let input_dims = strategy.input_dims();
        let rho = strategy.state.matrix();
        let rows: Vec<Vec<f64>> = (0..params.num_inputs())
            .into_par_iter()
            .map(|t| {
                let out = transformed_for_tuple(rho, &input_dims, &strategy.channels, params, t);
                strategy
                    .povm
                    .elements
                    .iter()
                    .map(|m| trace_product_re(&out, m))
                    .collect()
            })
            .collect();
        Ok(Self {
            params,
            table: rows.into_iter().flatten().collect(),
        })
    }
}

/// Score of externally supplied correlations. Rejects negative entries and
/// conditionals that do not sum to one (no renormalisation).
pub fn score_from_distribution(dist: &Correlations) -> Result<ScoreReport> {
    let params = dist.params;
    let outcomes = params.num_outcomes();
    let mut wins = Vec::with_capacity(params.num_inputs());
    for t in 0..params.num_inputs() {
        let row = &dist.table[t * outcomes..(t + 1) * outcomes];
        let (x, y) = params.input_tuple(t);
        if let Some(&neg) = row.iter().find(|&&p| p < -STRUCT_TOL) {
            return Err(Error::BadDistribution {
                input: format!("x={x:?}, y={y:?}"),
                total: neg,
            });
        }
        let total: f64 = row.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::BadDistribution {
                input: format!("x={x:?}, y={y:?}"),
                total,
            });
        }
        let b = params.outcome_index(&win_target_unchecked(&x, &y, params.d));
        wins.push(row[b]);
    }
    Ok(ScoreReport::from_wins(params, wins))
}

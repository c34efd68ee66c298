//! Named states, channel families and measurements used by the game.

use crate::error::{Error, Result};
use crate::linalg::{
    c, identity, shift_power, tensor, tensor_kets, weyl, CMat, CVec, DensityMatrix, Ket,
};
use crate::scenario::{Channel, ChannelFamily, GameParams, Povm};

/// Mixing weight of a target state or measurement against noise.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Visibility(f64);

impl Visibility {
    pub fn new(v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange(format!("visibility {v} not in [0, 1]")));
        }
        Ok(Self(v))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `(1/√d) Σ_i |i⟩^{⊗n}`.
pub fn ghz_state(n: usize, d: usize) -> Result<Ket> {
    let params = GameParams::new(n, d)?;
    let dim = params.num_outcomes();
    let mut v = CVec::zeros(dim);
    let amp = c(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[params.outcome_index(&vec![i; n])] = amp;
    }
    Ket::new(v)
}

/// Two-party maximally entangled state `|φ_max⟩` of local dimension `d`.
pub fn max_entangled(d: usize) -> Result<Ket> {
    ghz_state(2, d)
}

/// Mixture `v |ψ⟩⟨ψ| + (1 − v) I / dim`.
pub fn with_white_noise(ket: &Ket, v: f64) -> Result<DensityMatrix> {
    let v = Visibility::new(v)?.value();
    let dim = ket.dim();
    DensityMatrix::new(ket.projector().scale(v) + identity(dim).scale((1.0 - v) / dim as f64))
}

pub fn noisy_ghz(n: usize, d: usize, v: f64) -> Result<DensityMatrix> {
    Visibility::new(v)?;
    with_white_noise(&ghz_state(n, d)?, v)
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn w_state() -> Ket {
    let mut v = CVec::zeros(8);
    let amp = c(1.0 / 3f64.sqrt(), 0.0);
    for idx in [0b001, 0b010, 0b100] {
        v[idx] = amp;
    }
    Ket::new(v).expect("W state is normalised")
}

/// Four-qubit Dicke state with two excitations: the equal superposition of
/// the six weight-2 strings `0011, 0101, 0110, 1001, 1010, 1100`.
///
/// The last term is sometimes misprinted as `|110⟩`; the `1/√6`
/// normalisation only works with all six weight-2 strings.
pub fn dicke_state() -> Ket {
    let mut v = CVec::zeros(16);
    let amp = c(1.0 / 6f64.sqrt(), 0.0);
    for idx in (0usize..16).filter(|i| i.count_ones() == 2) {
        v[idx] = amp;
    }
    Ket::new(v).expect("Dicke state is normalised")
}

pub fn noisy_w(v: f64) -> Result<DensityMatrix> {
    with_white_noise(&w_state(), v)
}

pub fn noisy_dicke(v: f64) -> Result<DensityMatrix> {
    with_white_noise(&dicke_state(), v)
}

fn unitary_family(party: usize, d: usize, f: impl Fn(usize, usize) -> CMat) -> Result<ChannelFamily> {
    ChannelFamily::from_fn(party, d, |x, y| Channel::unitary(f(x, y)))
}

/// Every party applies `Z^{x_k} X^{y_k}`.
pub fn clock_shift_channels(n: usize, d: usize) -> Result<Vec<ChannelFamily>> {
    GameParams::new(n, d)?;
    (0..n)
        .map(|k| unitary_family(k, d, |x, y| weyl(d, x, y)))
        .collect()
}

/// `|M_b⟩ = Z^{b_1} ⊗ X^{b_2} ⊗ … ⊗ X^{b_n} |GHZ_{n,d}⟩` for every outcome string.
pub fn ghz_basis_kets(n: usize, d: usize) -> Result<Vec<Ket>> {
    let params = GameParams::new(n, d)?;
    let ghz = ghz_state(n, d)?;
    (0..params.num_outcomes())
        .map(|idx| {
            let b = params.outcome_string(idx);
            let mut factors = vec![weyl(d, b[0], 0)];
            factors.extend(b[1..].iter().map(|&bk| shift_power(d, bk)));
            ghz.transform(&tensor(&factors)?)
        })
        .collect()
}

/// Projective measurement in the generalised GHZ basis.
pub fn ghz_basis_measurement(n: usize, d: usize) -> Result<Povm> {
    Povm::projective(&ghz_basis_kets(n, d)?)
}

/// Generalised Bell measurement mixed with white noise:
/// `M_b(v) = v |M_b⟩⟨M_b| + (1 − v) I / d²`.
pub fn noisy_bsm(d: usize, v: f64) -> Result<Povm> {
    let v = Visibility::new(v)?.value();
    let dim = d * d;
    let noise = identity(dim).scale((1.0 - v) / dim as f64);
    Povm::new(
        ghz_basis_kets(2, d)?
            .iter()
            .map(|k| k.projector().scale(v) + &noise)
            .collect(),
    )
}

/// The four Bell states `(φ⁺, ψ⁺, φ⁻, ψ⁻)`.
pub fn bell_states() -> [Ket; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let ket = |a: [f64; 4]| Ket::from_real(&a).expect("Bell state is normalised");
    [
        ket([s, 0.0, 0.0, s]),
        ket([0.0, s, s, 0.0]),
        ket([s, 0.0, 0.0, -s]),
        ket([0.0, s, -s, 0.0]),
    ]
}

/// Two-qubit Bell measurement under coloured noise, elements ordered
/// `E_00, E_01, E_10, E_11`.
pub fn coloured_noise_bsm(v: f64) -> Result<Povm> {
    let v = Visibility::new(v)?.value();
    let [phi_p, psi_p, phi_m, psi_m] = bell_states().map(|k| k.projector());
    let w = (1.0 - v) / 4.0;
    let e00 = phi_p.scale(v) + (&phi_p + phi_m.scale(2.0) + &psi_p).scale(w);
    let e01 = psi_p.scale(v) + (&phi_p + &phi_m + psi_p.scale(2.0)).scale(w);
    let e10 = phi_m.scale(v) + (phi_p.scale(2.0) + &phi_m + &psi_p).scale(w);
    let e11 = psi_m;
    Povm::new(vec![e00, e01, e10, e11])
}

/// Basis with `m·d` product elements `|b_1, b_2⟩` (for `b_2 − b_1 mod d < m`)
/// and `(d − m)·d` maximally entangled elements `Z^{b_1} ⊗ X^{b_2−b_1} |φ_max⟩`.
pub fn appendix_d_kets(d: usize, m: usize) -> Result<Vec<Ket>> {
    if m > d {
        return Err(Error::OutOfRange(format!("m = {m} exceeds d = {d}")));
    }
    let params = GameParams::new(2, d)?;
    let phi = max_entangled(d)?;
    (0..d * d)
        .map(|idx| {
            let b = params.outcome_string(idx);
            let diff = (b[1] + d - b[0]) % d;
            if diff < m {
                tensor_kets(&[Ket::basis(d, b[0])?, Ket::basis(d, b[1])?])
            } else {
                phi.transform(&tensor(&[weyl(d, b[0], 0), shift_power(d, diff)])?)
            }
        })
        .collect()
}

pub fn appendix_d_measurement(d: usize, m: usize) -> Result<Povm> {
    Povm::projective(&appendix_d_kets(d, m)?)
}

/// `U¹_{xy} = Z^x X^{y+x}` and `U²_{xy} = Z^x X^{y−x}`.
pub fn appendix_d_channels(d: usize) -> Result<Vec<ChannelFamily>> {
    GameParams::new(2, d)?;
    Ok(vec![
        unitary_family(0, d, |x, y| weyl(d, x, (y + x) % d))?,
        unitary_family(1, d, |x, y| weyl(d, x, (y + d - x) % d))?,
    ])
}

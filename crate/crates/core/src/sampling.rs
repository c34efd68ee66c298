//! Random strategies from restricted classes, for empirical checks of the
//! score bounds.

use rand::Rng;

use crate::error::Result;
use crate::linalg::{kron, permute_subsystems, tensor, CMat, DensityMatrix};
use crate::optimize::optimal_povm_step;
use crate::random::{haar_unitary, random_density, random_isometry, SimRng};
use crate::scenario::{Channel, ChannelFamily, GameParams, Povm, Strategy};

/// Channels `d → d` with Kraus rank drawn uniformly from `1..=d`.
pub fn random_channel_families(params: GameParams, rng: &mut SimRng) -> Result<Vec<ChannelFamily>> {
    let d = params.d();
    (0..params.n())
        .map(|k| {
            let maps = (0..d * d)
                .map(|_| {
                    let rank = rng.random_range(1..=d);
                    let v = random_isometry(rank * d, d, rng);
                    Channel::new((0..rank).map(|i| v.rows(i * d, d).into_owned()).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            ChannelFamily::new(k, d, maps)
        })
        .collect()
}

/// A state that is a product across a random bipartition `S | S̄`.
/// Returns the state and the parties in `S`.
pub fn random_biseparable_state(params: GameParams, rng: &mut SimRng) -> Result<(DensityMatrix, Vec<usize>)> {
    let (n, d) = (params.n(), params.d());
    let mask = rng.random_range(1..(1usize << n) - 1);
    let side: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
    let rest: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 0).collect();
    let dim_s = d.pow(side.len() as u32);
    let dim_r = d.pow(rest.len() as u32);
    let rho_s = random_density(dim_s, rng.random_range(1..=dim_s), rng);
    let rho_r = random_density(dim_r, rng.random_range(1..=dim_r), rng);
    let joint = kron(rho_s.matrix(), rho_r.matrix());
    // factor j of `joint` belongs to party order[j]
    let order: Vec<usize> = side.iter().chain(&rest).copied().collect();
    let perm: Vec<usize> = (0..n)
        .map(|k| order.iter().position(|&p| p == k).expect("every party placed"))
        .collect();
    let rho = permute_subsystems(&joint, &vec![d; n], &perm)?;
    Ok((DensityMatrix::new(crate::linalg::hermitian_part(&rho))?, side))
}

/// Biseparable state, random channels, and the best measurement for them.
pub fn random_biseparable_strategy(params: GameParams, rng: &mut SimRng) -> Result<Strategy> {
    let (state, _) = random_biseparable_state(params, rng)?;
    let channels = random_channel_families(params, rng)?;
    let povm = optimal_povm_step(&state, &channels, params)?;
    Strategy::new(params, state, channels, povm)
}

/// Projective measurement onto a product of random local bases.
pub fn random_product_basis_povm(params: GameParams, rng: &mut SimRng) -> Result<Povm> {
    let d = params.d();
    let bases: Vec<CMat> = (0..params.n()).map(|_| haar_unitary(d, rng)).collect();
    let elements = (0..params.num_outcomes())
        .map(|b| {
            let digits = params.outcome_string(b);
            let factors: Vec<CMat> = digits
                .iter()
                .zip(&bases)
                .map(|(&j, u)| {
                    let col = u.column(j);
                    col * col.adjoint()
                })
                .collect();
            tensor(&factors)
        })
        .collect::<Result<Vec<_>>>()?;
    Povm::new(elements)
}

/// Arbitrary random state and channels measured in a random product basis,
/// so every measurement operator is fully separable.
pub fn random_separable_measurement_strategy(params: GameParams, rng: &mut SimRng) -> Result<Strategy> {
    let dim = params.num_outcomes();
    let state = random_density(dim, rng.random_range(1..=dim), rng);
    let channels = random_channel_families(params, rng)?;
    let povm = random_product_basis_povm(params, rng)?;
    Strategy::new(params, state, channels, povm)
}

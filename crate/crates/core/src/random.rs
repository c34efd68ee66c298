//! Seeded random sampling of unitaries, isometries, states and POVMs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, identity, CMat, CVec, DensityMatrix, Ket};

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a sub-task (restart, sample index).
pub fn substream(seed: u64, index: u64) -> SimRng {
    // splitmix64 finaliser
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let qr = ginibre(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// First `cols` columns of a Haar unitary on `rows` dimensions.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    assert!(cols <= rows, "isometry needs rows >= cols");
    haar_unitary(rows, rng).columns(0, cols).into_owned()
}

pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Ket {
    let v = CVec::from_fn(dim, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    Ket::normalized(v).expect("Gaussian vector is nonzero")
}

/// Random mixed state `G G† / Tr` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = crate::linalg::hermitian_part(&m.unscale(tr));
    DensityMatrix::new(m).expect("Wishart sample is a valid state")
}

/// Rank-one projectors onto the columns of a Haar unitary.
pub fn random_basis_projectors<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<CMat> {
    let u = haar_unitary(dim, rng);
    (0..dim)
        .map(|j| {
            let col = u.column(j);
            col * col.adjoint()
        })
        .collect()
}

/// Random POVM with `outcomes` elements: `S^{-1/2} A_b S^{-1/2}` with
/// Wishart-distributed `A_b` and `S = Σ A_b`.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Vec<CMat> {
    let parts: Vec<CMat> = (0..outcomes)
        .map(|_| {
            let g = ginibre(dim, dim, rng);
            &g * g.adjoint()
        })
        .collect();
    let total = parts.iter().fold(CMat::zeros(dim, dim), |acc, p| acc + p);
    let (inv, _) = crate::linalg::pinv_sqrt(&total, 1e-14);
    let elements: Vec<CMat> = parts
        .iter()
        .map(|p| crate::linalg::hermitian_part(&(&inv * p * &inv)))
        .collect();
    debug_assert!(
        crate::linalg::max_abs_diff(
            &elements.iter().fold(CMat::zeros(dim, dim), |acc, e| acc + e),
            &identity(dim)
        ) < 1e-9
    );
    elements
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, Unitary};

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rng_from_seed(3);
        for dim in 1..6 {
            assert!(Unitary::new(haar_unitary(dim, &mut rng)).is_ok());
        }
    }

    #[test]
    fn isometry_columns_are_orthonormal() {
        let mut rng = rng_from_seed(4);
        let v = random_isometry(6, 2, &mut rng);
        assert!(max_abs_diff(&(v.adjoint() * &v), &identity(2)) < 1e-12);
    }

    #[test]
    fn streams_are_reproducible() {
        let a = haar_unitary(3, &mut substream(7, 2));
        let b = haar_unitary(3, &mut substream(7, 2));
        let other = haar_unitary(3, &mut substream(7, 3));
        assert_eq!(a, b);
        assert!(max_abs_diff(&a, &other) > 1e-6);
    }

    #[test]
    fn random_povm_is_complete() {
        let mut rng = rng_from_seed(5);
        let povm = random_povm(3, 7, &mut rng);
        let total = povm.iter().fold(CMat::zeros(3, 3), |acc, e| acc + e);
        assert!(max_abs_diff(&total, &identity(3)) < 1e-10);
        assert!(povm.iter().all(|e| crate::linalg::min_eigenvalue(e) > -1e-12));
    }
}

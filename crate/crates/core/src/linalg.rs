//! Dense complex linear algebra for small multipartite systems.
//!
//! Every composite space uses the lexicographic computational basis with
//! party 1 as the most significant index, so `tensor(&[a, b])` has entries
//! `a[i, j] * b[k, l]` at row `i * dim(b) + k`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Tolerance for structural invariants (Hermiticity, normalisation, completeness).
pub const STRUCT_TOL: f64 = 1e-9;
/// Tolerance for eigendecomposition reconstruction.
pub const EIG_TOL: f64 = 1e-8;
/// Tolerance for comparing scores.
pub const SCORE_TOL: f64 = 1e-7;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// Largest absolute entrywise difference.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_deviation(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(m, &m.adjoint())
}

/// `(M + M†) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace_re(m: &CMat) -> f64 {
    m.trace().re
}

/// `Re Tr[A B]` without forming the product.
pub fn trace_product_re(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let n = a.nrows();
    let m = a.ncols();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..m {
            let x = a[(i, j)];
            let y = b[(j, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// A state vector. Constructed normalised unless explicitly flagged otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: CVec,
    normalized: bool,
}

impl Ket {
    pub fn new(amplitudes: CVec) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty("ket amplitudes"));
        }
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > STRUCT_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    pub fn unnormalized(amplitudes: CVec) -> Self {
        Self {
            amplitudes,
            normalized: false,
        }
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amplitudes: CVec) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        Self::new(amplitudes.unscale(norm))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(CVec::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&a| c(a, 0.0)),
        ))
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::OutOfRange(format!(
                "basis index {index} for dimension {dim}"
            )));
        }
        let mut v = CVec::zeros(dim);
        v[index] = ONE;
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> CMat {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// Applies a matrix and returns the (possibly unnormalised) result.
    pub fn transform(&self, op: &CMat) -> Result<Ket> {
        if op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator has {} columns, ket has dimension {}",
                op.ncols(),
                self.dim()
            )));
        }
        let amps = op * &self.amplitudes;
        let norm_sqr = amps.norm_squared();
        if self.normalized && (norm_sqr - 1.0).abs() <= STRUCT_TOL {
            Ket::new(amps)
        } else {
            Ok(Ket::unnormalized(amps))
        }
    }
}

/// A Hermitian matrix (observable, POVM element or unnormalised state).
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian(CMat);

impl Hermitian {
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::Empty("Hermitian operator"));
        }
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let deviation = hermiticity_deviation(&m);
        if deviation > STRUCT_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_inner(self) -> CMat {
        self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.0)
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -STRUCT_TOL
    }
}

/// Positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMat);

impl DensityMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        let h = Hermitian::new(m)?;
        let trace = trace_re(h.matrix());
        if (trace - 1.0).abs() > STRUCT_TOL {
            return Err(Error::BadTrace {
                trace,
                expected: 1.0,
            });
        }
        let min_eigenvalue = h.min_eigenvalue();
        if min_eigenvalue < -STRUCT_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self(h.into_inner()))
    }

    pub fn from_ket(ket: &Ket) -> Result<Self> {
        Self::new(ket.projector())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("density matrix"));
        }
        Self::new(identity(dim).unscale(dim as f64))
    }

    /// `p·a + (1−p)·b`.
    pub fn mix(a: &DensityMatrix, b: &DensityMatrix, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("mixing weight {p}")));
        }
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(format!(
                "mixing states of dimension {} and {}",
                a.dim(),
                b.dim()
            )));
        }
        Self::new(a.0.scale(p) + b.0.scale(1.0 - p))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_inner(self) -> CMat {
        self.0
    }
}

/// A square unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(CMat);

impl Unitary {
    pub fn new(m: CMat) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let deviation = max_abs_diff(&(&m * m.adjoint()), &identity(m.nrows()));
        if deviation > STRUCT_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_inner(self) -> CMat {
        self.0
    }

    pub fn pow(&self, k: usize) -> Unitary {
        let mut out = identity(self.dim());
        for _ in 0..k {
            out = &out * &self.0;
        }
        Unitary(out)
    }
}

// ---------------------------------------------------------------------------
// Tensor products and subsystem operations
// ---------------------------------------------------------------------------

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of a list of matrices, leftmost factor most significant.
pub fn tensor(ops: &[CMat]) -> Result<CMat> {
    let (first, rest) = ops.split_first().ok_or(Error::Empty("tensor factors"))?;
    Ok(rest.iter().fold(first.clone(), |acc, m| acc.kronecker(m)))
}

pub fn tensor_kets(kets: &[Ket]) -> Result<Ket> {
    let (first, rest) = kets.split_first().ok_or(Error::Empty("tensor factors"))?;
    let amps = rest
        .iter()
        .fold(first.amplitudes.clone(), |acc, k| acc.kronecker(&k.amplitudes));
    if kets.iter().all(Ket::is_normalized) {
        Ket::new(amps)
    } else {
        Ok(Ket::unnormalized(amps))
    }
}

fn check_dims(dim: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "invalid subsystem dimensions {dims:?}"
        )));
    }
    if product(dims) != dim {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} do not multiply to {dim}"
        )));
    }
    Ok(())
}

/// Decomposes a flat index into per-subsystem digits.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

pub fn flat_index(digits: &[usize], dims: &[usize]) -> usize {
    digits
        .iter()
        .zip(dims)
        .fold(0, |acc, (&digit, &d)| acc * d + digit)
}

/// Traces out every subsystem not listed in `keep`. The kept subsystems stay
/// in their original order.
pub fn partial_trace(op: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    if !op.is_square() {
        return Err(Error::DimensionMismatch("partial trace of non-square matrix".into()));
    }
    partial_trace_rect(op, dims, dims, keep)
}

/// Partial trace of a possibly rectangular operator whose rows and columns
/// carry different dimensions on the kept subsystems. Traced subsystems must
/// agree between row and column factorisations.
pub fn partial_trace_rect(
    op: &CMat,
    row_dims: &[usize],
    col_dims: &[usize],
    keep: &[usize],
) -> Result<CMat> {
    check_dims(op.nrows(), row_dims)?;
    check_dims(op.ncols(), col_dims)?;
    if row_dims.len() != col_dims.len() {
        return Err(Error::DimensionMismatch(
            "row and column factorisations have different lengths".into(),
        ));
    }
    if keep.is_empty() {
        return Err(Error::Empty("kept subsystems"));
    }
    let n = row_dims.len();
    let mut kept = vec![false; n];
    for &k in keep {
        if k >= n || kept[k] {
            return Err(Error::OutOfRange(format!(
                "kept subsystem {k} for {n} subsystems"
            )));
        }
        kept[k] = true;
    }
    for j in 0..n {
        if !kept[j] && row_dims[j] != col_dims[j] {
            return Err(Error::DimensionMismatch(format!(
                "traced subsystem {j} has row dimension {} and column dimension {}",
                row_dims[j], col_dims[j]
            )));
        }
    }
    let keep_sorted: Vec<usize> = (0..n).filter(|&j| kept[j]).collect();
    let traced: Vec<usize> = (0..n).filter(|&j| !kept[j]).collect();
    let kr_dims: Vec<usize> = keep_sorted.iter().map(|&j| row_dims[j]).collect();
    let kc_dims: Vec<usize> = keep_sorted.iter().map(|&j| col_dims[j]).collect();
    let t_dims: Vec<usize> = traced.iter().map(|&j| row_dims[j]).collect();

    let row_strides = strides(row_dims);
    let col_strides = strides(col_dims);
    let out_rows = product(&kr_dims);
    let out_cols = product(&kc_dims);
    let t_total = product(&t_dims);

    // Offsets contributed by the traced indices, shared by rows and columns.
    let t_offsets: Vec<(usize, usize)> = (0..t_total)
        .map(|t| {
            let td = digits(t, &t_dims);
            traced.iter().zip(&td).fold((0, 0), |(r, c), (&j, &digit)| {
                (r + digit * row_strides[j], c + digit * col_strides[j])
            })
        })
        .collect();
    let row_base: Vec<usize> = (0..out_rows)
        .map(|i| {
            let kd = digits(i, &kr_dims);
            keep_sorted
                .iter()
                .zip(&kd)
                .map(|(&j, &digit)| digit * row_strides[j])
                .sum()
        })
        .collect();
    let col_base: Vec<usize> = (0..out_cols)
        .map(|i| {
            let kd = digits(i, &kc_dims);
            keep_sorted
                .iter()
                .zip(&kd)
                .map(|(&j, &digit)| digit * col_strides[j])
                .sum()
        })
        .collect();

    let mut out = CMat::zeros(out_rows, out_cols);
    for (oc, &cb) in col_base.iter().enumerate() {
        for (or, &rb) in row_base.iter().enumerate() {
            let mut acc = ZERO;
            for &(tr, tc) in &t_offsets {
                acc += op[(rb + tr, cb + tc)];
            }
            out[(or, oc)] = acc;
        }
    }
    Ok(out)
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * dims[j + 1];
    }
    s
}

/// Transposes the listed subsystems.
pub fn partial_transpose_subsystems(op: &CMat, dims: &[usize], subsystems: &[usize]) -> Result<CMat> {
    if !op.is_square() {
        return Err(Error::DimensionMismatch("partial transpose of non-square matrix".into()));
    }
    check_dims(op.nrows(), dims)?;
    let n = dims.len();
    let mut flip = vec![false; n];
    for &s in subsystems {
        if s >= n {
            return Err(Error::OutOfRange(format!("subsystem {s} for {n} subsystems")));
        }
        flip[s] = true;
    }
    let dim = op.nrows();
    let st = strides(dims);
    let mut out = CMat::zeros(dim, dim);
    for i in 0..dim {
        let di = digits(i, dims);
        for j in 0..dim {
            let dj = digits(j, dims);
            let (mut ni, mut nj) = (0, 0);
            for s in 0..n {
                let (a, b) = if flip[s] { (dj[s], di[s]) } else { (di[s], dj[s]) };
                ni += a * st[s];
                nj += b * st[s];
            }
            out[(ni, nj)] = op[(i, j)];
        }
    }
    Ok(out)
}

/// Bipartite partial transpose on the second factor.
pub fn partial_transpose(op: &CMat, dims: [usize; 2]) -> Result<CMat> {
    partial_transpose_subsystems(op, &dims, &[1])
}

/// Reorders tensor factors: output factor `j` is input factor `perm[j]`.
pub fn permute_subsystems(op: &CMat, dims: &[usize], perm: &[usize]) -> Result<CMat> {
    if !op.is_square() {
        return Err(Error::DimensionMismatch("permuting a non-square matrix".into()));
    }
    check_dims(op.nrows(), dims)?;
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidParams(format!("{perm:?} is not a permutation of 0..{n}")));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let dim = op.nrows();
    let map: Vec<usize> = (0..dim)
        .map(|i| {
            let d = digits(i, dims);
            let nd: Vec<usize> = perm.iter().map(|&p| d[p]).collect();
            flat_index(&nd, &new_dims)
        })
        .collect();
    let mut out = CMat::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            out[(map[i], map[j])] = op[(i, j)];
        }
    }
    Ok(out)
}

/// Applies `a` (shape `dout × dims[k]`) to subsystem `k` of the row space of
/// `op`, i.e. returns `(I ⊗ a ⊗ I) · op`. Column count is unchanged.
pub fn apply_local_left(op: &CMat, row_dims: &[usize], k: usize, a: &CMat) -> CMat {
    let din = row_dims[k];
    assert_eq!(a.ncols(), din, "local operator input dimension mismatch");
    debug_assert_eq!(product(row_dims), op.nrows());
    let dout = a.nrows();
    let left: usize = row_dims[..k].iter().product();
    let right: usize = row_dims[k + 1..].iter().product();
    let cols = op.ncols();
    let mut out = CMat::zeros(left * dout * right, cols);
    for col in 0..cols {
        let src = op.column(col);
        let mut dst = out.column_mut(col);
        for l in 0..left {
            for o in 0..dout {
                let row_out = (l * dout + o) * right;
                for i in 0..din {
                    let coef = a[(o, i)];
                    if coef == ZERO {
                        continue;
                    }
                    let row_in = (l * din + i) * right;
                    for r in 0..right {
                        dst[row_out + r] += coef * src[row_in + r];
                    }
                }
            }
        }
    }
    out
}

/// `Σ_i L_i · op · L_i†` with `L_i = I ⊗ K_i ⊗ I` acting on subsystem `k`.
pub fn apply_local_kraus(op: &CMat, dims: &[usize], k: usize, kraus: &[CMat]) -> CMat {
    let dout = kraus[0].nrows();
    let mut out_dims = dims.to_vec();
    out_dims[k] = dout;
    let out_dim = product(&out_dims);
    let mut acc = CMat::zeros(out_dim, out_dim);
    for kr in kraus {
        // L op L† = (L (L op)†)†
        let half = apply_local_left(op, dims, k, kr).adjoint();
        acc += apply_local_left(&half, dims, k, kr).adjoint();
    }
    acc
}

// ---------------------------------------------------------------------------
// Spectral routines
// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMat {
        let dim = self.vectors.nrows();
        let mut diag = CMat::zeros(dim, dim);
        for (i, &v) in self.values.iter().enumerate() {
            diag[(i, i)] = c(v, 0.0);
        }
        &self.vectors * diag * self.vectors.adjoint()
    }

    /// Rebuilds `Σ f(λ_i) |v_i⟩⟨v_i|`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMat {
        let dim = self.vectors.nrows();
        let mut scaled = self.vectors.clone();
        for (i, &v) in self.values.iter().enumerate() {
            let s = f(v);
            for r in 0..dim {
                scaled[(r, i)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Checked Hermitian eigendecomposition.
pub fn eig_hermitian(op: &CMat) -> Result<HermitianEigen> {
    Hermitian::new(op.clone())?;
    Ok(eigh(op))
}

/// Eigendecomposition of the Hermitian part of `op`; no validation.
pub fn eigh(op: &CMat) -> HermitianEigen {
    let eig = SymmetricEigen::new(hermitian_part(op));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    HermitianEigen { values, vectors }
}

pub fn min_eigenvalue(op: &CMat) -> f64 {
    eigh(op).values.last().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(op: &CMat) -> f64 {
    eigh(op).values.first().copied().unwrap_or(0.0)
}

/// Square root of a PSD matrix; negative round-off eigenvalues are clipped.
pub fn psd_sqrt(op: &CMat) -> CMat {
    eigh(op).map_values(|v| v.max(0.0).sqrt())
}

/// Pseudo-inverse square root restricted to eigenvalues above
/// `rel_tol · λ_max`, together with the projector onto the discarded kernel.
pub fn pinv_sqrt(op: &CMat, rel_tol: f64) -> (CMat, CMat) {
    let eig = eigh(op);
    let cutoff = rel_tol * eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let inv = eig.map_values(|v| if v > cutoff && v > 0.0 { 1.0 / v.sqrt() } else { 0.0 });
    let kernel = eig.map_values(|v| if v > cutoff && v > 0.0 { 0.0 } else { 1.0 });
    (inv, kernel)
}

/// Isometry `V` (shape `b.ncols() × b.nrows()`) maximising `Re Tr[V · b]`.
///
/// With `b = W Σ Z†`, the maximiser is `Z W†` and the optimum is `Tr Σ`.
/// Requires `b.nrows() ≤ b.ncols()`.
pub fn procrustes(b: &CMat) -> CMat {
    assert!(
        b.nrows() <= b.ncols(),
        "procrustes target must be wide: got {}x{}",
        b.nrows(),
        b.ncols()
    );
    let svd = SVD::new(b.clone(), true, true);
    let u = svd.u.expect("SVD requested U");
    let v_t = svd.v_t.expect("SVD requested V^T");
    v_t.adjoint() * u.adjoint()
}

/// Closest isometry to a tall matrix in Frobenius norm (polar factor).
pub fn nearest_isometry(a: &CMat) -> CMat {
    let svd = SVD::new(a.clone(), true, true);
    let u = svd.u.expect("SVD requested U");
    let v_t = svd.v_t.expect("SVD requested V^T");
    u * v_t
}

// ---------------------------------------------------------------------------
// Weyl-Heisenberg operators
// ---------------------------------------------------------------------------

fn check_local_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParams(format!("local dimension {d} < 2")));
    }
    Ok(())
}

/// `Z = Σ_j e^{2πij/d} |j⟩⟨j|`.
pub fn clock(d: usize) -> Result<Unitary> {
    check_local_dim(d)?;
    Ok(Unitary(clock_power(d, 1)))
}

/// `X = Σ_j |j+1 mod d⟩⟨j|`.
pub fn shift(d: usize) -> Result<Unitary> {
    check_local_dim(d)?;
    Ok(Unitary(shift_power(d, 1)))
}

pub fn clock_power(d: usize, a: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    for j in 0..d {
        m[(j, j)] = root_of_unity((a * j) % d, d);
    }
    m
}

/// `e^{2πik/d}`, exact at quarter turns.
fn root_of_unity(k: usize, d: usize) -> C64 {
    let k = k % d;
    if (4 * k).is_multiple_of(d) {
        return match 4 * k / d {
            0 => ONE,
            1 => c(0.0, 1.0),
            2 => -ONE,
            _ => c(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64)
}

pub fn shift_power(d: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    for j in 0..d {
        m[((j + b) % d, j)] = ONE;
    }
    m
}

/// `Z^a X^b`.
pub fn weyl(d: usize, a: usize, b: usize) -> CMat {
    clock_power(d, a) * shift_power(d, b)
}

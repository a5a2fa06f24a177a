//! Dense complex linear algebra for the small Hilbert spaces used here
//! (dimension at most 16): state vectors, orthogonal projectors and the
//! handful of products the measurement engine needs.

use std::fmt;

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Residual allowed when validating hermiticity, idempotence and complementarity.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Relative residual below which a spanning vector counts as dependent.
pub const RANK_TOL: f64 = 1e-9;
/// Tolerance for exact algebraic identities (Pythagoras, idempotence of `apply`).
pub const IDENTITY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A finite complex amplitude vector. Not necessarily normalized; the zero
/// vector is a legal value (it is what projecting onto an impossible
/// outcome produces).
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(i) = amps
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { amps })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            amps: vec![ZERO; dim],
        }
    }

    /// Standard basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut v = Self::zeros(dim);
        v.amps[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(inner_raw(&self.amps, &other.amps))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Kronecker product `self ⊗ other`; the right factor varies fastest.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.amps.iter()).finish()
    }
}

/// Squared Euclidean norm `Σ|a_i|²`.
pub fn norm_sq(v: &StateVector) -> f64 {
    v.norm_sq()
}

/// Orthogonal projector stored as a dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Projector {
    dim: usize,
    m: Vec<Complex64>,
}

impl Projector {
    /// Validates a row-major matrix as a Hermitian idempotent.
    pub fn from_matrix(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        check_dim(dim * dim, entries.len())?;
        if let Some(i) = entries
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        let p = Self { dim, m: entries };
        let (hermitian, idempotent) = p.residuals();
        if hermitian > VALIDATION_TOL || idempotent > VALIDATION_TOL {
            return Err(Error::NotProjector {
                hermitian,
                idempotent,
            });
        }
        Ok(p)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = vec![ZERO; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = ONE;
        }
        Self { dim, m }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            m: vec![ZERO; dim * dim],
        }
    }

    /// Diagonal projector onto the standard basis vectors whose index satisfies `keep`.
    pub fn diagonal(dim: usize, keep: impl Fn(usize) -> bool) -> Self {
        let mut m = vec![ZERO; dim * dim];
        for i in (0..dim).filter(|&i| keep(i)) {
            m[i * dim + i] = ONE;
        }
        Self { dim, m }
    }

    /// Orthogonal projector onto `span(vectors)`, via modified Gram–Schmidt
    /// with one re-orthogonalization pass.
    pub fn from_span(vectors: &[StateVector]) -> Result<Self> {
        let basis = orthonormalize(vectors)?;
        Ok(Self::from_orthonormal(vectors[0].dim(), &basis))
    }

    /// `Σ q q†` over an orthonormal frame; the caller guarantees orthonormality.
    pub(crate) fn from_orthonormal(dim: usize, frame: &[Vec<Complex64>]) -> Self {
        let mut m = vec![ZERO; dim * dim];
        for q in frame {
            for i in 0..dim {
                let qi = q[i];
                if qi == ZERO {
                    continue;
                }
                let row = &mut m[i * dim..(i + 1) * dim];
                for (j, e) in row.iter_mut().enumerate() {
                    *e += qi * q[j].conj();
                }
            }
        }
        Self { dim, m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.m[i * self.dim + i].re).sum()
    }

    /// Rank, read off the trace.
    pub fn rank(&self) -> usize {
        self.trace().round() as usize
    }

    /// `I − P`.
    pub fn complement(&self) -> Self {
        let n = self.dim;
        let m = self
            .m
            .iter()
            .enumerate()
            .map(|(k, &e)| if k / n == k % n { ONE - e } else { -e })
            .collect();
        Self { dim: n, m }
    }

    /// Max-entry residuals `(‖P − P†‖, ‖P² − P‖)`.
    pub fn residuals(&self) -> (f64, f64) {
        let n = self.dim;
        let mut herm: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                herm = herm.max((self.m[i * n + j] - self.m[j * n + i].conj()).norm());
            }
        }
        let sq = matmul(n, &self.m, &self.m);
        let idem = sq
            .iter()
            .zip(&self.m)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        (herm, idem)
    }

    /// Max-entry distance to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .m
            .iter()
            .zip(&other.m)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max-entry distance of `self + other` from the identity.
    pub fn complementarity_residual(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        Ok(self
            .m
            .iter()
            .zip(&other.m)
            .enumerate()
            .map(|(k, (a, b))| {
                let target = if k / n == k % n { ONE } else { ZERO };
                (a + b - target).norm()
            })
            .fold(0.0, f64::max))
    }

    /// Orthonormal basis of the range, picked from the columns with
    /// largest-residual pivoting.
    pub fn range_basis(&self) -> Vec<StateVector> {
        let n = self.dim;
        let rank = self.rank();
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| (0..n).map(|i| self.m[i * n + j]).collect())
            .collect();
        let mut basis: Vec<StateVector> = Vec::with_capacity(rank);
        while basis.len() < rank {
            let (pivot, norm) = cols
                .iter()
                .map(|c| c.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt())
                .enumerate()
                .fold(
                    (0, -1.0),
                    |acc, (j, v)| if v > acc.1 { (j, v) } else { acc },
                );
            if norm <= RANK_TOL {
                break;
            }
            let q: Vec<Complex64> = cols[pivot].iter().map(|a| a / norm).collect();
            for c in cols.iter_mut() {
                for _ in 0..2 {
                    let k = inner_raw(&q, c);
                    for (ci, qi) in c.iter_mut().zip(&q) {
                        *ci -= k * qi;
                    }
                }
            }
            basis.push(StateVector { amps: q });
        }
        basis
    }

    pub(crate) fn apply_raw(&self, v: &[Complex64], out: &mut [Complex64]) {
        let n = self.dim;
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.m[i * n..(i + 1) * n];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }
}

impl fmt::Debug for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.m.chunks(self.dim).collect();
        f.debug_struct("Projector")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

/// `P·v`.
pub fn apply(p: &Projector, v: &StateVector) -> Result<StateVector> {
    check_dim(p.dim(), v.dim())?;
    let mut out = vec![ZERO; v.dim()];
    p.apply_raw(v.amps(), &mut out);
    Ok(StateVector { amps: out })
}

/// Largest entry magnitude of `PQ − QP`.
pub fn commutator_norm(p: &Projector, q: &Projector) -> Result<f64> {
    check_dim(p.dim(), q.dim())?;
    let n = p.dim();
    let pq = matmul(n, &p.m, &q.m);
    let qp = matmul(n, &q.m, &p.m);
    Ok(pq
        .iter()
        .zip(&qp)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// Orthonormal basis for `span(vectors)`; fails if any vector is dependent on
/// its predecessors beyond `RANK_TOL` (relative to its own norm).
pub fn orthonormalize(vectors: &[StateVector]) -> Result<Vec<Vec<Complex64>>> {
    let first = vectors.first().ok_or(Error::EmptySpan)?;
    let dim = first.dim();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        check_dim(dim, v.dim())?;
        let original = v.norm();
        let mut w = v.amps().to_vec();
        for _ in 0..2 {
            for q in &basis {
                let c = inner_raw(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let n = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if original == 0.0 || n <= RANK_TOL * original {
            return Err(Error::RankDeficient { index });
        }
        let inv = 1.0 / n;
        w.iter_mut().for_each(|a| *a *= inv);
        basis.push(w);
    }
    Ok(basis)
}

fn inner_raw(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn matmul(n: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == ZERO {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

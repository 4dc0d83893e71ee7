//! Dense complex linear algebra for one- and two-qubit density-matrix
//! simulation.
//!
//! Conventions used throughout the crate:
//!
//! - Qubit 0 is the **leftmost** tensor factor: basis index
//!   `i = i_0 * 2^(n-1) + ... + i_{n-1}` for an `n`-qubit register.
//! - Global phase carries no information: kets are compared through
//!   `|<a|b>|`, never componentwise.
//! - Matrices are row-major over `Complex64` and sized for 2x2 / 4x4 work;
//!   the code is dimension-generic but makes no attempt to scale further.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Shorthand for a real scalar lifted into the complex field.
pub(crate) fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, re(1.0));
        }
        m
    }

    /// Build from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch(
                "matrix rows must be non-empty and uniform".into(),
            ));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from real-valued rows (imaginary parts zero).
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| re(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Elementwise sum.
    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o += b;
        }
        Ok(out)
    }

    /// Elementwise difference `self - other`.
    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.add(&other.scale(re(-1.0)))
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Trace (square matrices only).
    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product; `self` is the leftmost (most significant) factor.
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for ra in 0..self.rows {
            for ca in 0..self.cols {
                let a = self.get(ra, ca);
                for rb in 0..other.rows {
                    for cb in 0..other.cols {
                        out.set(
                            ra * other.rows + rb,
                            ca * other.cols + cb,
                            a * other.get(rb, cb),
                        );
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} to a length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect())
    }

    /// Largest componentwise absolute difference from `other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot compare {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Componentwise equality within `tolerance`.
    pub fn approx_eq(&self, other: &ComplexMatrix, tolerance: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tolerance)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Deviation of `self† self` from the identity.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "unitarity check requires a square matrix".into(),
            ));
        }
        self.dagger()
            .mul(self)?
            .max_abs_diff(&ComplexMatrix::identity(self.rows))
    }

    /// `self† self = I` within `tolerance`?
    pub fn is_unitary(&self, tolerance: f64) -> bool {
        matches!(self.unitarity_deviation(), Ok(d) if d <= tolerance)
    }

    /// `self = self†` within `tolerance`?
    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.is_square() && self.approx_eq(&self.dagger(), tolerance)
    }
}

/// Kronecker product of two operators; `a` is the leftmost factor.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.tensor(b)
}

/// Lift a single-qubit operator onto qubit `target` of an `n_qubits`
/// register (identity on every other factor).
pub fn embed(op: &ComplexMatrix, target: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "embed expects a 2x2 operator, got {}x{}",
            op.rows(),
            op.cols()
        )));
    }
    if target >= n_qubits {
        return Err(Error::QubitOutOfRange {
            index: target,
            n_qubits,
        });
    }
    let mut out = if target == 0 {
        op.clone()
    } else {
        ComplexMatrix::identity(2)
    };
    for q in 1..n_qubits {
        let factor = if q == target {
            op.clone()
        } else {
            ComplexMatrix::identity(2)
        };
        out = out.tensor(&factor);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Standard single-qubit operators
// ---------------------------------------------------------------------------

/// Standard single-qubit operators used as encodings and channel building
/// blocks. `sigma_iy` is the real matrix `iY` (the phase folded in), so the
/// set {I, X, iY, Z} is closed under products up to sign.
pub mod ops {
    use num_complex::Complex64;

    use super::ComplexMatrix;

    pub fn identity2() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    /// Bit flip `X`.
    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    /// Combined bit-phase flip `iY = [[0, 1], [-1, 0]]`.
    pub fn sigma_iy() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap()
    }

    /// Phase flip `Z`.
    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    pub fn hadamard() -> ComplexMatrix {
        let s = 1.0 / 2.0_f64.sqrt();
        ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]]).unwrap()
    }

    /// Phase gate `diag(1, e^{i phi})`.
    pub fn phase(phi: f64) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(2);
        m.set(1, 1, Complex64::from_polar(1.0, phi));
        m
    }
}

// ---------------------------------------------------------------------------
// Ket
// ---------------------------------------------------------------------------

/// Normalized pure state vector.
#[derive(Clone, Debug)]
pub struct Ket {
    amps: Vec<Complex64>,
}

impl Ket {
    /// Normalize `amps` into a ket; rejects (numerically) zero vectors.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq.sqrt() < tol::CONSTRUCTION {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm_sq.sqrt();
        Ok(Self {
            amps: amps.into_iter().map(|a| a * inv).collect(),
        })
    }

    /// Computational basis state `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = re(1.0);
        Ok(Self { amps })
    }

    pub fn zero() -> Self {
        Self::basis(2, 0).unwrap()
    }

    pub fn one() -> Self {
        Self::basis(2, 1).unwrap()
    }

    /// `(|0> + |1>)/sqrt(2)`.
    pub fn plus() -> Self {
        Self::new(vec![re(1.0), re(1.0)]).unwrap()
    }

    /// `(|0> - |1>)/sqrt(2)`.
    pub fn minus() -> Self {
        Self::new(vec![re(1.0), re(-1.0)]).unwrap()
    }

    /// `(|00> + |11>)/sqrt(2)`.
    pub fn bell_psi_plus() -> Self {
        Self::new(vec![re(1.0), re(0.0), re(0.0), re(1.0)]).unwrap()
    }

    /// Singlet-type Bell state `(|01> - |10>)/sqrt(2)`.
    pub fn singlet() -> Self {
        Self::new(vec![re(0.0), re(1.0), re(-1.0), re(0.0)]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Tensor product; `self` is the leftmost factor.
    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ket { amps }
    }

    /// Inner product `<self|other>`.
    pub fn overlap(&self, other: &Ket) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "overlap of dimension {} with {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Equality up to global phase: `| |<self|other>| - 1 | <= tolerance`.
    pub fn approx_eq_up_to_phase(&self, other: &Ket, tolerance: f64) -> bool {
        matches!(self.overlap(other), Ok(o) if (o.norm() - 1.0).abs() <= tolerance)
    }

    /// Apply a unitary; rejects non-unitary operators so the result stays
    /// normalized by construction.
    pub fn apply_unitary(&self, u: &ComplexMatrix) -> Result<Ket> {
        let dev = u.unitarity_deviation()?;
        if dev > tol::CHANNEL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Ket {
            amps: u.mul_vec(&self.amps)?,
        })
    }

    /// Projector `|self><self|`.
    pub fn outer(&self) -> DensityMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, self.amps[r] * self.amps[c].conj());
            }
        }
        DensityMatrix { m }
    }
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

/// Hermitian, unit-trace state matrix. Positivity is checked on demand via
/// [`DensityMatrix::check_positive`] rather than at every construction.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate Hermiticity and unit trace (both within the channel tier).
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidDensity(format!(
                "matrix is {}x{}, not square",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_hermitian(tol::CHANNEL) {
            return Err(Error::InvalidDensity("not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr - re(1.0)).norm() > tol::CHANNEL {
            return Err(Error::InvalidDensity(format!(
                "trace {} differs from 1",
                tr
            )));
        }
        Ok(Self { m })
    }

    /// `|psi><psi|` (always valid).
    pub fn from_pure(psi: &Ket) -> Self {
        psi.outer()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Real eigenvalues in ascending order (cyclic Jacobi; the invariants
    /// guarantee a Hermitian input).
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// All eigenvalues `>= -margin`?
    pub fn check_positive(&self, margin: f64) -> Result<()> {
        let eigs = self.eigenvalues();
        match eigs.first() {
            Some(&min) if min < -margin => Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:.3e}"
            ))),
            _ => Ok(()),
        }
    }

    /// `rho -> sum_i E_i rho E_i†`. The caller supplies a completeness-
    /// satisfying operator set; the result is re-validated (Hermiticity,
    /// unit trace) so drift cannot propagate silently.
    pub fn apply_kraus(&self, operators: &[ComplexMatrix]) -> Result<DensityMatrix> {
        if operators.is_empty() {
            return Err(Error::DimensionMismatch("empty Kraus operator set".into()));
        }
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for op in operators {
            if op.rows() != n || op.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, state is {}x{}",
                    op.rows(),
                    op.cols(),
                    n,
                    n
                )));
            }
            out = out.add(&op.mul(&self.m)?.mul(&op.dagger())?)?;
        }
        DensityMatrix::new(out)
    }

    /// `rho -> U rho U†`; rejects non-unitary `U` (channel tier).
    pub fn apply_unitary(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {}x{}, state is {}x{}",
                u.rows(),
                u.cols(),
                self.dim(),
                self.dim()
            )));
        }
        let dev = u.unitarity_deviation()?;
        if dev > tol::CHANNEL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        DensityMatrix::new(u.mul(&self.m)?.mul(&u.dagger())?)
    }
}

/// `rho -> sum_i E_i rho E_i†` (free-function form).
pub fn apply_kraus(rho: &DensityMatrix, operators: &[ComplexMatrix]) -> Result<DensityMatrix> {
    rho.apply_kraus(operators)
}

/// `rho -> U rho U†` (free-function form).
pub fn apply_unitary(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    rho.apply_unitary(u)
}

/// Fidelity of `rho` against the pure target `psi`: `<psi|rho|psi>`.
///
/// The value is real for any Hermitian `rho`; it is clamped into [0, 1]
/// only when outside by less than [`tol::FIDELITY_CLAMP`]; a larger
/// excursion means `rho` is not a state and is reported as an error.
pub fn fidelity_pure(psi: &Ket, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "ket dimension {} vs state dimension {}",
            psi.dim(),
            rho.dim()
        )));
    }
    let v = rho.matrix().mul_vec(psi.amps())?;
    let f: Complex64 = psi
        .amps()
        .iter()
        .zip(&v)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let val = f.re;
    if !(-tol::FIDELITY_CLAMP..=1.0 + tol::FIDELITY_CLAMP).contains(&val) {
        return Err(Error::FidelityRange { value: val });
    }
    Ok(val.clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// Hermitian eigenvalues (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi with complex
/// rotations; converges in a handful of sweeps at these dimensions.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    debug_assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    for _ in 0..60 {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a.get(p, q).norm_sqr();
                }
            }
            s
        };
        if off < 1e-30 {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.norm() < 1e-18 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let phi = apq.arg();
                let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // U restricted to {p, q}: [[e^{i phi} c, -e^{i phi} s], [s, c]].
                let e = Complex64::from_polar(1.0, phi);
                let upp = e * c;
                let upq = -e * s;
                let uqp = re(s);
                let uqq = re(c);
                // Column update A <- A U, then row update A <- U† A.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * upp + akq * uqp);
                    a.set(k, q, akp * upq + akq * uqq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, upp.conj() * apk + uqp.conj() * aqk);
                    a.set(q, k, upq.conj() * apk + uqq.conj() * aqk);
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    eigs
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn c(reval: f64, im: f64) -> Complex64 {
        Complex64::new(reval, im)
    }

    #[test]
    fn tensor_places_qubit_zero_leftmost() {
        // (X ⊗ I)(|00> + |11>)/sqrt(2) = (|10> + |01>)/sqrt(2)
        let x_on_0 = tensor(&ops::sigma_x(), &ops::identity2());
        let bell = Ket::bell_psi_plus();
        let moved = bell.apply_unitary(&x_on_0).unwrap();
        let expected = Ket::new(vec![re(0.0), re(1.0), re(1.0), re(0.0)]).unwrap();
        assert!(moved.approx_eq_up_to_phase(&expected, tol::CONSTRUCTION));
    }

    #[test]
    fn tensor_of_kets_matches_basis_indexing() {
        // |1> ⊗ |0> = |10> = basis index 2 of 4
        let k = Ket::one().tensor(&Ket::zero());
        assert_eq!(k.dim(), 4);
        assert!((k.amp(2) - re(1.0)).norm() < tol::CONSTRUCTION);
    }

    #[test]
    fn embed_acts_on_the_addressed_factor_only() {
        let z_on_1 = embed(&ops::sigma_z(), 1, 2).unwrap();
        let k01 = Ket::zero().tensor(&Ket::one());
        let out = z_on_1.mul_vec(k01.amps()).unwrap();
        // Z on qubit 1 flips the sign of |01>.
        assert!((out[1] - re(-1.0)).norm() < tol::CONSTRUCTION);

        let h_on_0 = embed(&ops::hadamard(), 0, 2).unwrap();
        let k00 = Ket::zero().tensor(&Ket::zero());
        let out = h_on_0.mul_vec(k00.amps()).unwrap();
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((out[0] - re(s)).norm() < tol::CONSTRUCTION);
        assert!((out[2] - re(s)).norm() < tol::CONSTRUCTION);
    }

    #[test]
    fn embed_matches_explicit_tensor_products() {
        let u = ops::hadamard();
        let left = embed(&u, 0, 2).unwrap();
        let right = embed(&u, 1, 2).unwrap();
        assert!(left.approx_eq(&u.tensor(&ops::identity2()), 0.0));
        assert!(right.approx_eq(&ops::identity2().tensor(&u), 0.0));
    }

    #[test]
    fn embed_rejects_out_of_range_target() {
        let err = embed(&ops::sigma_x(), 2, 2).unwrap_err();
        assert!(matches!(err, Error::QubitOutOfRange { index: 2, n_qubits: 2 }));
    }

    #[test]
    fn embed_rejects_non_single_qubit_operator() {
        let err = embed(&ComplexMatrix::identity(4), 0, 2).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn ket_construction_normalizes_and_rejects_zero() {
        let k = Ket::new(vec![re(3.0), re(4.0)]).unwrap();
        let norm_sq: f64 = k.amps().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm_sq - 1.0).abs() < tol::CONSTRUCTION);
        assert!(matches!(
            Ket::new(vec![re(0.0), re(0.0)]),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn global_phase_is_ignored_in_ket_comparison() {
        let a = Ket::plus();
        let b = Ket::new(vec![c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!(a.approx_eq_up_to_phase(&b, tol::CONSTRUCTION));
    }

    #[test]
    fn density_matrix_validation() {
        // Valid: maximally mixed.
        let mixed = ComplexMatrix::identity(2).scale(re(0.5));
        assert!(DensityMatrix::new(mixed).is_ok());
        // Invalid trace.
        let err = DensityMatrix::new(ComplexMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::InvalidDensity(_)));
        // Non-Hermitian.
        let mut m = ComplexMatrix::identity(2).scale(re(0.5));
        m.set(0, 1, c(0.3, 0.1));
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn apply_unitary_rejects_non_unitary() {
        let rho = DensityMatrix::from_pure(&Ket::zero());
        let not_u = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.5]]).unwrap();
        assert!(matches!(
            rho.apply_unitary(&not_u),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn unitary_application_preserves_trace_and_eigenvalues() {
        let rho = DensityMatrix::new(
            ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.25]]).unwrap(),
        )
        .unwrap();
        let before = rho.eigenvalues();
        let u = ops::hadamard();
        let after_rho = rho.apply_unitary(&u).unwrap();
        let after = after_rho.eigenvalues();
        assert!((after_rho.trace() - re(1.0)).norm() < tol::CHANNEL);
        for (b, a) in before.iter().zip(&after) {
            assert!((b - a).abs() < 1e-12);
        }
    }

    #[test]
    fn fidelity_of_state_with_itself_is_one() {
        for k in [Ket::zero(), Ket::plus(), Ket::bell_psi_plus(), Ket::singlet()] {
            let f = fidelity_pure(&k, &DensityMatrix::from_pure(&k)).unwrap();
            assert!((f - 1.0).abs() < tol::CONSTRUCTION);
        }
    }

    #[test]
    fn fidelity_of_orthogonal_states_is_zero() {
        let f = fidelity_pure(&Ket::one(), &DensityMatrix::from_pure(&Ket::zero())).unwrap();
        assert!(f.abs() < tol::CONSTRUCTION);
    }

    #[test]
    fn fidelity_dimension_mismatch_is_reported() {
        let err =
            fidelity_pure(&Ket::zero(), &DensityMatrix::from_pure(&Ket::bell_psi_plus()))
                .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn jacobi_recovers_known_spectra() {
        // Pure state: {0, 1}.
        let eigs = DensityMatrix::from_pure(&Ket::plus()).eigenvalues();
        assert!(eigs[0].abs() < 1e-12 && (eigs[1] - 1.0).abs() < 1e-12);

        // Bell projector: {0, 0, 0, 1}.
        let eigs = DensityMatrix::from_pure(&Ket::singlet()).eigenvalues();
        assert!((eigs[3] - 1.0).abs() < 1e-12);
        assert!(eigs[..3].iter().all(|e| e.abs() < 1e-12));

        // Complex Hermitian with known spectrum {1, 3}:
        // [[2, i], [-i, 2]] has eigenvalues 2 ± 1.
        let m = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let eigs = hermitian_eigenvalues(&m);
        assert!((eigs[0] - 1.0).abs() < 1e-12 && (eigs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn positivity_check_flags_non_positive_hermitian_matrix() {
        // Hermitian, trace one, but indefinite: diag(1.5, -0.5).
        let m = ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]).unwrap();
        let rho = DensityMatrix::new(m).unwrap();
        assert!(rho.check_positive(tol::POSITIVITY).is_err());
        let ok = DensityMatrix::from_pure(&Ket::plus());
        assert!(ok.check_positive(tol::POSITIVITY).is_ok());
    }

    #[test]
    fn mul_and_dagger_shapes_are_enforced() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(a.mul(&b).is_err());
        assert!(a.mul(&b.dagger()).is_ok());
    }
}

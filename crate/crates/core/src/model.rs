//! Full Hamiltonian of the two-level system with permanent dipoles coupled to
//! a single oscillator mode, in units with ħ = 1:
//!
//! ```text
//! H = ω(a†a + 1/2) + (ω₀/2)σ_z + (-λ_g σ_↓ + λ_e σ_↑ + λ_eg σ_x)(a† + a)
//!   = H_↑ ⊗ σ_↑ + H_↓ ⊗ σ_↓ + λ_eg σ_x (a† + a)
//! ```
//!
//! Matrices are dense but only couple photon numbers that differ by one.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Spin};

/// Whether same-sign dipole configurations are accepted.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignPolicy {
    /// Require `λ_g >= 0` and `λ_e >= 0`.
    #[default]
    NonNegative,
    /// Accept any finite sign for the diagonal couplings.
    Signed,
}

/// Frequencies and couplings of the model, all angular frequencies.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub omega0: f64,
    pub lambda_g: f64,
    pub lambda_e: f64,
    pub lambda_eg: f64,
}

impl ModelParams {
    /// Builds and validates parameters under [`SignPolicy::NonNegative`].
    pub fn new(omega: f64, omega0: f64, lambda_g: f64, lambda_e: f64, lambda_eg: f64) -> Result<Self> {
        let p = Self { omega, omega0, lambda_g, lambda_e, lambda_eg };
        p.validate(SignPolicy::NonNegative)?;
        Ok(p)
    }

    /// Every violated constraint, not just the first.
    pub fn violations(&self, policy: SignPolicy) -> Vec<String> {
        let mut out = Vec::new();
        let named = [
            ("omega", self.omega),
            ("omega0", self.omega0),
            ("lambda_g", self.lambda_g),
            ("lambda_e", self.lambda_e),
            ("lambda_eg", self.lambda_eg),
        ];
        for (name, v) in named {
            if !v.is_finite() {
                out.push(format!("{name} must be finite, got {v}"));
            }
        }
        if !(self.omega > 0.0) {
            out.push(format!("omega must be positive, got {}", self.omega));
        }
        if policy == SignPolicy::NonNegative {
            if self.lambda_g < 0.0 {
                out.push(format!("lambda_g must be >= 0, got {}", self.lambda_g));
            }
            if self.lambda_e < 0.0 {
                out.push(format!("lambda_e must be >= 0, got {}", self.lambda_e));
            }
        }
        out
    }

    pub fn validate(&self, policy: SignPolicy) -> Result<()> {
        let v = self.violations(policy);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    /// Displacement `λ_g/ω` of the spin-down oscillator.
    pub fn beta_g(&self) -> f64 {
        self.lambda_g / self.omega
    }

    /// Displacement `λ_e/ω` of the spin-up oscillator (applied with a minus
    /// sign, see [`crate::rwa`]).
    pub fn beta_e(&self) -> f64 {
        self.lambda_e / self.omega
    }

    /// Oscillator period `2π/ω`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }
}

/// Dense Hermitian matrix on the product space (or a single spin block).
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianMatrix {
    matrix: DMatrix<C64>,
    space: FockSpace,
}

impl HamiltonianMatrix {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |H - H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|i - j|` over nonzero entries within each spin block and
    /// between blocks, measured in photon number.
    pub fn photon_bandwidth(&self) -> usize {
        let n = self.space.n_max();
        let photon = |i: usize| if i >= n && self.dim() == 2 * n { i - n } else { i };
        let mut band = 0;
        for j in 0..self.matrix.ncols() {
            for i in 0..self.matrix.nrows() {
                if self.matrix[(i, j)] != C64::from(0.0) {
                    band = band.max(photon(i).abs_diff(photon(j)));
                }
            }
        }
        band
    }

    /// Ascending eigenvalues from dense diagonalization of the real part.
    ///
    /// The model is real symmetric, so the imaginary part is identically zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let real = self.matrix.map(|z| z.re);
        let mut ev: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Ascending eigenpairs; eigenvectors are the columns of the returned
    /// matrix, in the same order as the values.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<f64>) {
        let real = self.matrix.map(|z| z.re);
        let eig = real.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(self.dim(), order.len(), |i, c| eig.eigenvectors[(i, order[c])]);
        (values, vectors)
    }

    /// `<ψ|H|ψ>`.
    pub fn expectation(&self, psi: &DVector<C64>) -> f64 {
        psi.dotc(&(&self.matrix * psi)).re
    }

    /// Nonzero pattern as a compressed-row operator for time stepping.
    pub fn to_sparse(&self) -> SparseOperator {
        SparseOperator::from_dense(&self.matrix)
    }
}

/// Compressed-row complex matrix.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseOperator {
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let mut row_start = Vec::with_capacity(m.nrows() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if z != C64::from(0.0) {
                    cols.push(j);
                    vals.push(z);
                }
            }
            row_start.push(cols.len());
        }
        Self { row_start, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.row_start.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `out = (A - shift·I) x`.
    pub fn apply_shifted(&self, x: &[C64], shift: f64, out: &mut [C64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = -shift * x[i];
            for k in self.row_start[i]..self.row_start[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *o = acc;
        }
    }

    /// `<x|A|x>` (real part).
    pub fn expectation(&self, x: &[C64]) -> f64 {
        let mut acc = C64::from(0.0);
        for i in 0..self.dim() {
            let mut row = C64::from(0.0);
            for k in self.row_start[i]..self.row_start[i + 1] {
                row += self.vals[k] * x[self.cols[k]];
            }
            acc += x[i].conj() * row;
        }
        acc.re
    }

    /// Gershgorin bound on the spectral radius of `A - shift·I`.
    pub fn spectral_radius_bound(&self, shift: f64) -> f64 {
        (0..self.dim())
            .map(|i| {
                (self.row_start[i]..self.row_start[i + 1])
                    .map(|k| {
                        let v = if self.cols[k] == i { self.vals[k] - shift } else { self.vals[k] };
                        v.norm()
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// `a† + a` on `n_max` levels.
fn position_quadrature(n_max: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n_max, n_max);
    for n in 0..n_max - 1 {
        let s = ((n + 1) as f64).sqrt();
        x[(n, n + 1)] = s;
        x[(n + 1, n)] = s;
    }
    x
}

fn branch_block(params: &ModelParams, branch: Spin, n_max: usize) -> DMatrix<f64> {
    let (offset, coupling) = match branch {
        Spin::Up => (0.5 * params.omega0, params.lambda_e),
        Spin::Down => (-0.5 * params.omega0, -params.lambda_g),
    };
    let mut h = position_quadrature(n_max) * coupling;
    for n in 0..n_max {
        h[(n, n)] = params.omega * (n as f64 + 0.5) + offset;
    }
    h
}

fn complexify(m: DMatrix<f64>) -> DMatrix<C64> {
    m.map(C64::from)
}

/// Full Hamiltonian on `{↓, ↑} ⊗ Fock`.
pub fn build_full(params: &ModelParams, space: FockSpace) -> HamiltonianMatrix {
    let n = space.n_max();
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&branch_block(params, Spin::Down, n));
    h.view_mut((n, n), (n, n)).copy_from(&branch_block(params, Spin::Up, n));
    let x = position_quadrature(n) * params.lambda_eg;
    h.view_mut((0, n), (n, n)).copy_from(&x);
    h.view_mut((n, 0), (n, n)).copy_from(&x);
    HamiltonianMatrix { matrix: complexify(h), space }
}

/// Displaced-oscillator block `H_↑` or `H_↓` on `n_max` levels.
pub fn build_displaced_branch(params: &ModelParams, branch: Spin, space: FockSpace) -> HamiltonianMatrix {
    HamiltonianMatrix { matrix: complexify(branch_block(params, branch, space.n_max())), space }
}

/// Interaction `λ_eg σ_x (a† + a)` on the product space.
pub fn build_coupling(params: &ModelParams, space: FockSpace) -> HamiltonianMatrix {
    let n = space.n_max();
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let x = position_quadrature(n) * params.lambda_eg;
    h.view_mut((0, n), (n, n)).copy_from(&x);
    h.view_mut((n, 0), (n, n)).copy_from(&x);
    HamiltonianMatrix { matrix: complexify(h), space }
}

/// Embeds a single-branch block as `H_s ⊗ σ_s` on the product space.
pub fn embed_branch(block: &HamiltonianMatrix, branch: Spin) -> HamiltonianMatrix {
    let space = block.space;
    let n = space.n_max();
    let mut h = DMatrix::<C64>::zeros(2 * n, 2 * n);
    let at = space.index(branch, 0);
    h.view_mut((at, at), (n, n)).copy_from(&block.matrix);
    HamiltonianMatrix { matrix: h, space }
}

/// Closed-form eigenenergy of the `n`-th level of a displaced branch:
/// `±ω₀/2 + ω(n + 1/2) - λ²/ω`.
pub fn displaced_energy(params: &ModelParams, branch: Spin, n: usize) -> f64 {
    let ladder = params.omega * (n as f64 + 0.5);
    match branch {
        Spin::Up => 0.5 * params.omega0 + ladder - params.lambda_e.powi(2) / params.omega,
        Spin::Down => -0.5 * params.omega0 + ladder - params.lambda_g.powi(2) / params.omega,
    }
}

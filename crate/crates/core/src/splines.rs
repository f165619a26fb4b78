//! Variational average splines.
//!
//! Given targets `v_j`, the spline of order `k` is the unique signal `u`
//! minimising `‖𝓛^{k/2}u‖` among all signals with `⟨u, ξ_j⟩ = v_j`. It is
//! computed in eigen-coordinates `u = U c`, where the objective becomes
//! `Σ_i λ_i^k c_i²` and the constraints read `(Ξ U) c = v`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphSignal;
use crate::partition::{self, ClusterPartition};
use crate::spectral::SpectralDecomposition;

/// Condition estimates above this are refused.
pub const MAX_CONDITION: f64 = 1e14;

/// Relative singular-value cutoff for the constraint rank checks.
const RANK_TOL: f64 = 1e-10;

const EQUILIBRATION_PASSES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SplineProblem {
    pub k: u32,
    pub targets: Vec<f64>,
}

impl SplineProblem {
    pub fn new(k: u32, targets: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "spline order must be at least 1".into(),
            ));
        }
        if let Some(i) = targets.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { k, targets })
    }

    /// Whether the order is a power of two, the case covered by the error
    /// bound `‖f − S_k(f)‖ ≤ 2γᵏ‖f‖`.
    pub fn order_is_power_of_two(&self) -> bool {
        self.k.is_power_of_two()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplineSolution {
    pub k: u32,
    pub u: GraphSignal,
    /// `‖𝓛^{k/2}u‖`.
    pub seminorm: f64,
    /// `⟨u, ξ_j⟩` for every cluster.
    pub achieved: Vec<f64>,
    /// Normwise backward error of the saddle-point solve.
    pub kkt_residual: f64,
    /// Condition estimate of the equilibrated saddle-point matrix.
    pub condition: f64,
}

/// `λ_i^k` with kernel eigenvalues mapped to exactly zero.
fn objective_weights(decomp: &SpectralDecomposition, k: u32) -> Vec<f64> {
    let zero_tol = decomp.default_zero_tol();
    decomp
        .eigenvalues()
        .iter()
        .map(|&l| if l <= zero_tol { 0.0 } else { l.powi(k as i32) })
        .collect()
}

/// Symmetric Ruiz scaling: returns `d` such that `diag(d) K diag(d)` has
/// rows of unit max-norm (approximately).
fn ruiz_scaling(k: &DMatrix<f64>) -> DVector<f64> {
    let n = k.nrows();
    let mut d = DVector::from_element(n, 1.0);
    let mut scaled = k.clone();
    for _ in 0..EQUILIBRATION_PASSES {
        let r = DVector::from_fn(n, |i, _| {
            let m = scaled.row(i).amax();
            if m > 0.0 {
                1.0 / m.sqrt()
            } else {
                1.0
            }
        });
        if r.iter().all(|x| (x - 1.0).abs() < 1e-3) {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= r[i] * r[j];
            }
        }
        d.component_mul_assign(&r);
    }
    d
}

/// Solves for the variational spline with the given targets.
///
/// Requires a full disjoint cover of a connected graph; both the row rank of
/// the constraints and the absence of kernel signals with zero averages are
/// checked numerically.
pub fn solve_spline(
    decomp: &SpectralDecomposition,
    partition: &ClusterPartition,
    problem: &SplineProblem,
) -> Result<SplineSolution> {
    let n = decomp.n();
    let j = partition.len();
    if partition.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: partition.n(),
        });
    }
    if problem.targets.len() != j {
        return Err(Error::SampleCountMismatch {
            expected: j,
            got: problem.targets.len(),
        });
    }
    let constraints = partition.analysis_matrix() * decomp.eigenvectors();
    check_rank(&constraints, j)?;

    let weights = objective_weights(decomp, problem.k);
    let kernel: Vec<usize> = (0..n).filter(|&i| weights[i] == 0.0).collect();
    if !kernel.is_empty() {
        let kernel_block = constraints.select_columns(&kernel);
        check_rank(&kernel_block, kernel.len())?;
    }

    let size = n + j;
    let mut kkt = DMatrix::zeros(size, size);
    for i in 0..n {
        kkt[(i, i)] = weights[i];
    }
    kkt.view_mut((n, 0), (j, n)).copy_from(&constraints);
    kkt.view_mut((0, n), (n, j))
        .copy_from(&constraints.transpose());
    let mut rhs = DVector::zeros(size);
    rhs.rows_mut(n, j).copy_from_slice(&problem.targets);

    let d = ruiz_scaling(&kkt);
    let scaled = DMatrix::from_fn(size, size, |r, c| d[r] * kkt[(r, c)] * d[c]);
    let sv = scaled.singular_values();
    let condition = sv.max() / sv.min();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let y = scaled
        .lu()
        .solve(&rhs.component_mul(&d))
        .ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
        })?;
    let x = y.component_mul(&d);

    let backward =
        (&kkt * &x - &rhs).amax() / (kkt.amax() * x.amax() + rhs.amax()).max(f64::MIN_POSITIVE);
    // Where λᵏ ≥ 1, take c from stationarity `λᵏc = −Mᵀy`: roundoff in c is
    // then divided by λᵏ instead of multiplied by it in 𝓛ᵏu.
    let y = x.rows(n, j);
    let stationary = constraints.tr_mul(&y);
    let mut c = x.rows(0, n).into_owned();
    for i in 0..n {
        if weights[i] >= 1.0 {
            c[i] = -stationary[i] / weights[i];
        }
    }
    let u = decomp.synthesize(&c);
    let seminorm = c
        .iter()
        .zip(&weights)
        .map(|(ci, w)| w * ci * ci)
        .sum::<f64>()
        .sqrt();
    let achieved = partition.analyze(&u)?;
    Ok(SplineSolution {
        k: problem.k,
        u,
        seminorm,
        achieved,
        kkt_residual: backward,
        condition,
    })
}

/// Numerical rank of `m` must reach `expected`.
fn check_rank(m: &DMatrix<f64>, expected: usize) -> Result<()> {
    let sv = m.singular_values();
    let max = sv.max();
    let rank = sv.iter().filter(|&&s| s > RANK_TOL * max).count();
    if rank < expected {
        return Err(Error::RankDeficient { rank, expected });
    }
    Ok(())
}

/// The interpolating spline `S_k(f)`: same cluster averages as `f`.
pub fn interpolate(
    decomp: &SpectralDecomposition,
    partition: &ClusterPartition,
    f: &GraphSignal,
    k: u32,
) -> Result<SplineSolution> {
    let problem = SplineProblem::new(k, partition.analyze(f)?)?;
    solve_spline(decomp, partition, &problem)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityCheck {
    /// `max_i |⟨𝓛^{k/2}u, 𝓛^{k/2}h_i⟩|` over an orthonormal basis `{h_i}`
    /// of `Z₀`.
    pub defect: f64,
    /// `max(1, ‖𝓛^{k/2}u‖ · max_i ‖𝓛^{k/2}h_i‖)`.
    pub scale: f64,
    pub is_spline: bool,
}

/// A signal is a spline of order `k` iff `𝓛^{k/2}u ⟂ 𝓛^{k/2}Z₀`.
pub fn orthogonality_check(
    decomp: &SpectralDecomposition,
    partition: &ClusterPartition,
    u: &GraphSignal,
    k: u32,
) -> Result<OrthogonalityCheck> {
    let weights = DVector::from_vec(objective_weights(decomp, k));
    let vectors = decomp.eigenvectors();
    let c = decomp.coefficients(u)?;
    let lk_u = vectors * c.component_mul(&weights);
    let h = partition.zero_average_basis();
    let inner = h.tr_mul(&lk_u);
    let defect = inner.amax();

    let energy_u = c.component_mul(&c).dot(&weights).sqrt();
    let h_coeffs = vectors.tr_mul(&h);
    let max_energy_h = (0..h_coeffs.ncols())
        .map(|i| {
            let col = h_coeffs.column(i);
            col.component_mul(&col).dot(&weights).sqrt()
        })
        .fold(0.0, f64::max);
    let scale = (energy_u * max_energy_h).max(1.0);
    Ok(OrthogonalityCheck {
        defect,
        scale,
        is_spline: defect <= 1e-8 * scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplineRow {
    pub k: u32,
    pub rel_error: f64,
    /// `2γᵏ`, absent when `γ ≥ 1`.
    pub bound: Option<f64>,
    /// `rel_error ≤ bound + 1e-8`.
    pub within_bound: Option<bool>,
    /// The bound is proven only for `k` a power of two.
    pub proven: bool,
}

/// `‖f − S_k(f)‖/‖f‖` for every order, with the bound `2γᵏ` when `γ < 1`.
pub fn spline_error_table(
    decomp: &SpectralDecomposition,
    partition: &ClusterPartition,
    gamma: f64,
    f: &GraphSignal,
    orders: &[u32],
) -> Result<Vec<SplineRow>> {
    let norm = f.norm();
    orders
        .iter()
        .map(|&k| {
            let s = interpolate(decomp, partition, f, k)?;
            let err = s.u.distance(f);
            let rel_error = if norm > 0.0 { err / norm } else { err };
            let bound = (gamma < 1.0).then(|| 2.0 * gamma.powi(k as i32));
            Ok(SplineRow {
                k,
                rel_error,
                bound,
                within_bound: bound.map(|b| rel_error <= b + 1e-8),
                proven: k.is_power_of_two(),
            })
        })
        .collect()
}

/// Convergence table of `S_k(f) → f` for `f ∈ PW_ω`. Refuses `γ ≥ 1`.
pub fn spline_convergence_experiment(
    decomp: &SpectralDecomposition,
    partition: &ClusterPartition,
    omega: f64,
    alpha: f64,
    f: &GraphSignal,
    orders: &[u32],
) -> Result<Vec<SplineRow>> {
    partition::check_alpha(alpha)?;
    let gamma = partition::gamma(omega, alpha, partition.lambda_xi());
    if !(gamma < 1.0) {
        return Err(Error::GammaTooLarge { gamma });
    }
    let projected = decomp.pw_project(omega, f)?;
    if projected.distance(f) > 1e-8 * f.norm().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "signal is not in PW_{omega} (out-of-band norm {:e})",
            projected.distance(f)
        )));
    }
    spline_error_table(decomp, partition, gamma, f, orders)
}

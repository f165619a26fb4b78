//! Frame bounds of the average functionals restricted to `PW_ω`.
//!
//! The analysis operator `f ↦ {⟨f, ξ_j⟩}` is represented in the
//! orthonormal eigenbasis of `PW_ω` as the `J × m` matrix `A = Ξ B`. Its
//! extreme squared singular values are the optimal frame bounds.

use nalgebra::{DMatrix, DVector, SVD};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphSignal;
use crate::partition::{self, ClusterPartition};
use crate::spectral::{PwSpace, SpectralDecomposition};

/// Singular values below this fraction of the largest one are treated as zero.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct FrameSystem {
    pub omega: f64,
    pub alpha: f64,
    pub lambda_xi: f64,
    pub gamma: f64,
    /// Optimal lower frame bound `σ_min(A)²` (zero when `A` has a kernel).
    pub a: f64,
    /// Optimal upper frame bound `σ_max(A)²`.
    pub b: f64,
    pub pw: PwSpace,
    analysis: DMatrix<f64>,
    svd: SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
    rank: usize,
}

impl FrameSystem {
    pub fn new(
        decomp: &SpectralDecomposition,
        partition: &ClusterPartition,
        omega: f64,
        alpha: f64,
    ) -> Result<Self> {
        partition::check_alpha(alpha)?;
        if partition.n() != decomp.n() {
            return Err(Error::LengthMismatch {
                expected: decomp.n(),
                got: partition.n(),
            });
        }
        let pw = decomp.pw_space(omega)?;
        let m = pw.dimension();
        if m == 0 {
            return Err(Error::EmptyBand { omega });
        }
        let analysis = partition.analysis_matrix() * &pw.basis;
        let svd = SVD::new(analysis.clone(), true, true);
        let sigma = &svd.singular_values;
        let sigma_max = sigma.max();
        let rank = sigma.iter().filter(|&&s| s > RANK_TOL * sigma_max).count();
        let a = if rank == m { sigma.min().powi(2) } else { 0.0 };
        let lambda_xi = partition.lambda_xi();
        Ok(Self {
            omega,
            alpha,
            lambda_xi,
            gamma: partition::gamma(omega, alpha, lambda_xi),
            a,
            b: sigma_max * sigma_max,
            pw,
            analysis,
            svd,
            rank,
        })
    }

    /// Number of clusters `J`.
    pub fn cluster_count(&self) -> usize {
        self.analysis.nrows()
    }

    /// Dimension `m` of `PW_ω`.
    pub fn dimension(&self) -> usize {
        self.analysis.ncols()
    }

    pub fn analysis_matrix(&self) -> &DMatrix<f64> {
        &self.analysis
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_frame(&self) -> bool {
        self.a > 0.0
    }

    /// True when `γ < 1`, i.e. the proven lower bound applies.
    pub fn guarantee_active(&self) -> bool {
        self.gamma < 1.0
    }

    /// The proven lower bound `(1 − γ)/(1 + α)`, when `γ < 1`.
    pub fn guaranteed_lower_bound(&self) -> Option<f64> {
        self.guarantee_active()
            .then(|| (1.0 - self.gamma) / (1.0 + self.alpha))
    }

    /// Samples `A c` of the band-limited signal with coordinates `c`.
    pub fn sample_coordinates(&self, coordinates: &DVector<f64>) -> DVector<f64> {
        &self.analysis * coordinates
    }

    /// Minimum-norm least-squares coordinates `A⁺ s`.
    pub fn pseudo_inverse_apply(&self, samples: &DVector<f64>) -> DVector<f64> {
        let sigma = &self.svd.singular_values;
        let cutoff = RANK_TOL * sigma.max();
        let u = self.svd.u.as_ref().expect("left singular vectors computed");
        let v_t = self
            .svd
            .v_t
            .as_ref()
            .expect("right singular vectors computed");
        let mut projected = u.tr_mul(samples);
        for (p, &s) in projected.iter_mut().zip(sigma.iter()) {
            *p = if s > cutoff { *p / s } else { 0.0 };
        }
        v_t.tr_mul(&projected)
    }

    pub fn summary(&self) -> FrameCheck {
        FrameCheck {
            omega: self.omega,
            alpha: self.alpha,
            gamma: self.gamma,
            lambda_xi: self.lambda_xi,
            a: self.a,
            b: self.b,
            guarantee_active: self.guarantee_active(),
        }
    }

    /// Coordinates of `f` on the `PW_ω` basis, after checking its length.
    pub fn coordinates(&self, f: &GraphSignal) -> Result<DVector<f64>> {
        self.pw.coordinates(f)
    }
}

/// Machine-readable frame summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameCheck {
    pub omega: f64,
    pub alpha: f64,
    pub gamma: f64,
    #[serde(rename = "lambda_Xi")]
    pub lambda_xi: f64,
    pub a: f64,
    pub b: f64,
    pub guarantee_active: bool,
}

/// The guaranteed lower frame bound `(1 − γ(α))/(1 + α)` as a function of α.
pub fn guaranteed_lower_bound(omega: f64, alpha: f64, lambda_xi: f64) -> f64 {
    (1.0 - partition::gamma(omega, alpha, lambda_xi)) / (1.0 + alpha)
}

/// The α maximising the guaranteed lower bound, found by golden-section
/// search on `ln α` over `(ω/(Λ_Ξ − ω), 10⁶)`. `None` when `ω ≥ Λ_Ξ`.
pub fn best_alpha(omega: f64, lambda_xi: f64) -> Option<f64> {
    if !(omega < lambda_xi) || omega <= 0.0 {
        return None;
    }
    let objective = |t: f64| guaranteed_lower_bound(omega, t.exp(), lambda_xi);
    let mut lo = (omega / (lambda_xi - omega)).ln();
    let mut hi = 1e6f64.ln();
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Some((0.5 * (lo + hi)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::partition::pairs;
    use crate::spectral;

    fn path_setup(n: usize) -> (SpectralDecomposition, ClusterPartition) {
        let g = WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap();
        let d = spectral::decompose(&g).unwrap();
        let p = ClusterPartition::new(&g, pairs(n)).unwrap();
        (d, p)
    }

    #[test]
    fn full_band_on_path4_is_not_a_frame() {
        let (d, p) = path_setup(4);
        let fs = FrameSystem::new(&d, &p, 10.0, 1.0).unwrap();
        assert_eq!(fs.dimension(), 4);
        assert_eq!(fs.a, 0.0);
        assert!(!fs.is_frame());
        assert!((fs.b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constants_only_band_is_tight() {
        let (d, p) = path_setup(4);
        let fs = FrameSystem::new(&d, &p, 0.5, 1.0).unwrap();
        assert_eq!(fs.dimension(), 1);
        assert!((fs.a - 1.0).abs() < 1e-14);
        assert!((fs.b - 1.0).abs() < 1e-14);
    }

    #[test]
    fn path64_bounds_respect_guarantee() {
        let (d, p) = path_setup(64);
        let fs = FrameSystem::new(&d, &p, 0.5, 1.0).unwrap();
        assert!((fs.gamma - 0.5).abs() < 1e-12);
        assert!(fs.guarantee_active());
        assert!(fs.a >= 0.25);
        assert!(fs.b <= 1.0 + 1e-9);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let (d, p) = path_setup(4);
        assert!(FrameSystem::new(&d, &p, -1.0, 1.0).is_err());
        assert!(FrameSystem::new(&d, &p, 0.5, 0.0).is_err());
    }

    #[test]
    fn pseudo_inverse_recovers_band_coordinates() {
        let (d, p) = path_setup(16);
        let fs = FrameSystem::new(&d, &p, 0.8, 1.0).unwrap();
        let c = DVector::from_fn(fs.dimension(), |i, _| (i as f64 + 1.0).sin());
        let recovered = fs.pseudo_inverse_apply(&fs.sample_coordinates(&c));
        assert!((recovered - c).norm() < 1e-12);
    }

    #[test]
    fn best_alpha_matches_stationary_point() {
        // d/dα [1/(1+α) − r/α] = 0  ⇒  α = √r/(1 − √r) with r = ω/Λ
        let (omega, lambda) = (0.5, 2.0);
        let r: f64 = omega / lambda;
        let expected = r.sqrt() / (1.0 - r.sqrt());
        let got = best_alpha(omega, lambda).unwrap();
        assert!((got - expected).abs() < 1e-6, "{got} vs {expected}");
        assert!(best_alpha(2.5, 2.0).is_none());
    }
}

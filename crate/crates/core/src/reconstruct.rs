//! Recovery of a band-limited signal from its cluster samples, either by the
//! relaxed frame iteration or by the canonical dual frame.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::FrameSystem;
use crate::graph::GraphSignal;
use crate::partition::ClusterPartition;
use crate::spectral::SpectralDecomposition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameIterationConfig {
    /// Relaxation parameter; `None` selects `2/(a + b)`.
    pub mu: Option<f64>,
    pub max_iter: usize,
    /// Stop once `‖Aᵀ(s − Ac)‖ ≤ tol · ‖Aᵀs‖`.
    pub tol: f64,
}

impl Default for FrameIterationConfig {
    fn default() -> Self {
        Self {
            mu: None,
            max_iter: 10_000,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FrameIter,
    Dual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub method: Method,
    pub signal: GraphSignal,
    /// Coordinates of `signal` on the `PW_ω` basis.
    pub coordinates: DVector<f64>,
    pub iterations: usize,
    /// Normal-equation residual (frame iteration) or sample residual
    /// `‖Ac − s‖` (dual frame).
    pub residual: f64,
    pub converged: bool,
    /// Contraction factor `max(|1 − μa|, |1 − μb|)` of the frame iteration.
    pub eta: Option<f64>,
    pub mu: Option<f64>,
    /// `‖f − f_n‖` after each iteration, when the true signal was supplied.
    pub error_log: Vec<f64>,
}

fn check_samples(frame: &FrameSystem, samples: &[f64]) -> Result<DVector<f64>> {
    if samples.len() != frame.cluster_count() {
        return Err(Error::SampleCountMismatch {
            expected: frame.cluster_count(),
            got: samples.len(),
        });
    }
    if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(DVector::from_column_slice(samples))
}

/// Relaxed frame iteration `c_n = c_{n−1} + μ Aᵀ(s − A c_{n−1})` in `PW_ω`
/// coordinates, starting from `c_0 = 0`.
///
/// When `truth` is given (a signal in `PW_ω`) the distance to it is logged
/// after every step.
pub fn frame_algorithm(
    frame: &FrameSystem,
    samples: &[f64],
    cfg: &FrameIterationConfig,
    truth: Option<&GraphSignal>,
) -> Result<ReconstructionResult> {
    let s = check_samples(frame, samples)?;
    if !frame.is_frame() {
        return Err(Error::NotAFrame);
    }
    let upper = 2.0 / frame.b;
    let mu = cfg.mu.unwrap_or(2.0 / (frame.a + frame.b));
    if !(mu > 0.0 && mu < upper) {
        return Err(Error::InvalidRelaxation { mu, upper });
    }
    let eta = (1.0 - mu * frame.a).abs().max((1.0 - mu * frame.b).abs());
    let target = truth.map(|f| frame.coordinates(f)).transpose()?;

    let a = frame.analysis_matrix();
    let gram = a.tr_mul(a);
    let rhs = a.tr_mul(&s);
    let rhs_norm = rhs.norm();
    let mut c = DVector::zeros(frame.dimension());
    let mut error_log = Vec::new();
    let mut iterations = 0;
    let mut residual = rhs_norm;
    let mut converged = rhs_norm == 0.0;

    while !converged && iterations < cfg.max_iter {
        let r = &rhs - &gram * &c;
        c.axpy(mu, &r, 1.0);
        iterations += 1;
        if let Some(t) = &target {
            error_log.push((&c - t).norm());
        }
        residual = (&rhs - &gram * &c).norm();
        converged = residual <= cfg.tol * rhs_norm;
    }

    Ok(ReconstructionResult {
        method: Method::FrameIter,
        signal: frame.pw.synthesize(&c),
        coordinates: c,
        iterations,
        residual,
        converged,
        eta: Some(eta),
        mu: Some(mu),
        error_log,
    })
}

/// Canonical dual-frame reconstruction `c = A⁺ s`. For samples of a signal in
/// `PW_ω` and `a > 0` this is exact; otherwise it is the least-squares
/// solution of minimum norm.
pub fn dual_frame_reconstruct(
    frame: &FrameSystem,
    samples: &[f64],
) -> Result<ReconstructionResult> {
    let s = check_samples(frame, samples)?;
    let c = frame.pseudo_inverse_apply(&s);
    let residual = (frame.sample_coordinates(&c) - &s).norm();
    Ok(ReconstructionResult {
        method: Method::Dual,
        signal: frame.pw.synthesize(&c),
        coordinates: c,
        iterations: 0,
        residual,
        converged: true,
        eta: None,
        mu: None,
        error_log: Vec::new(),
    })
}

/// What the roundtrip samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Sample `P_ω f`, so that the reconstruction hypotheses hold.
    Bandlimited,
    /// Sample the raw `f`; the reconstruction is then biased by
    /// out-of-band content.
    Aliasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodOutcome {
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub eta: Option<f64>,
    /// `‖P_ω f − recovered‖ / ‖P_ω f‖` (absolute when `P_ω f = 0`).
    pub rel_error: f64,
}

impl MethodOutcome {
    fn new(result: &ReconstructionResult, truth: &GraphSignal) -> Self {
        let scale = truth.norm();
        let err = result.signal.distance(truth);
        Self {
            method: result.method,
            iterations: result.iterations,
            residual: result.residual,
            converged: result.converged,
            eta: result.eta,
            rel_error: if scale > 0.0 { err / scale } else { err },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub mode: SamplingMode,
    pub dimension: usize,
    pub clusters: usize,
    pub a: f64,
    pub b: f64,
    pub eta: Option<f64>,
    /// Norm of the out-of-band part `f − P_ω f`.
    pub out_of_band_norm: f64,
    pub frame_iter: Option<MethodOutcome>,
    pub dual: MethodOutcome,
    /// Set when the averages do not form a frame on `PW_ω`.
    pub failure: Option<String>,
}

/// Projects `f` to `PW_ω`, samples (either the projection or the raw
/// signal), reconstructs with both methods and reports the errors against
/// `P_ω f`.
pub fn sample_and_reconstruct_roundtrip(
    decomp: &SpectralDecomposition,
    partition: &ClusterPartition,
    omega: f64,
    alpha: f64,
    f: &GraphSignal,
    mode: SamplingMode,
    cfg: &FrameIterationConfig,
) -> Result<RoundtripReport> {
    let frame = FrameSystem::new(decomp, partition, omega, alpha)?;
    let projected = frame.pw.project(f)?;
    let sampled = match mode {
        SamplingMode::Bandlimited => &projected,
        SamplingMode::Aliasing => f,
    };
    let samples = partition.analyze(sampled)?;

    let dual = dual_frame_reconstruct(&frame, &samples)?;
    let (frame_iter, failure) = match frame_algorithm(&frame, &samples, cfg, None) {
        Ok(r) => (Some(MethodOutcome::new(&r, &projected)), None),
        Err(Error::NotAFrame) => (
            None,
            Some(format!(
                "not a frame: PW_{omega} has dimension {} but the analysis map has rank {} \
                 ({} clusters, gamma = {})",
                frame.dimension(),
                frame.rank(),
                frame.cluster_count(),
                frame.gamma
            )),
        ),
        Err(e) => return Err(e),
    };
    let eta = frame
        .is_frame()
        .then(|| (frame.b - frame.a) / (frame.a + frame.b));

    Ok(RoundtripReport {
        mode,
        dimension: frame.dimension(),
        clusters: frame.cluster_count(),
        a: frame.a,
        b: frame.b,
        eta,
        out_of_band_norm: f.distance(&projected),
        frame_iter,
        dual: MethodOutcome::new(&dual, &projected),
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::partition::pairs;
    use crate::spectral;

    fn setup(n: usize, omega: f64) -> (SpectralDecomposition, ClusterPartition, FrameSystem) {
        let g = WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap();
        let d = spectral::decompose(&g).unwrap();
        let p = ClusterPartition::new(&g, pairs(n)).unwrap();
        let fs = FrameSystem::new(&d, &p, omega, 1.0).unwrap();
        (d, p, fs)
    }

    #[test]
    fn zero_samples_give_zero_signal() {
        let (_, p, fs) = setup(16, 0.5);
        let zeros = vec![0.0; p.len()];
        let r = frame_algorithm(&fs, &zeros, &FrameIterationConfig::default(), None).unwrap();
        assert!(r.iterations <= 1);
        assert_eq!(r.signal.norm(), 0.0);
        let r = dual_frame_reconstruct(&fs, &zeros).unwrap();
        assert_eq!(r.signal.norm(), 0.0);
    }

    #[test]
    fn tight_frame_is_exact_in_one_step() {
        let (d, p, fs) = setup(4, 0.5);
        assert!((fs.a - fs.b).abs() < 1e-14);
        let f = d.eigenvector(0).scale(3.0);
        let cfg = FrameIterationConfig {
            mu: Some(1.0 / fs.a),
            ..Default::default()
        };
        let r = frame_algorithm(&fs, &p.analyze(&f).unwrap(), &cfg, Some(&f)).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(r.eta.unwrap() < 1e-14);
        assert!(r.signal.distance(&f) < 1e-13);
    }

    #[test]
    fn relaxation_out_of_range_is_rejected() {
        let (_, p, fs) = setup(16, 0.5);
        let s = vec![1.0; p.len()];
        for mu in [0.0, -1.0, 2.0 / fs.b] {
            let cfg = FrameIterationConfig {
                mu: Some(mu),
                ..Default::default()
            };
            assert!(matches!(
                frame_algorithm(&fs, &s, &cfg, None),
                Err(Error::InvalidRelaxation { .. })
            ));
        }
    }

    #[test]
    fn non_frame_is_rejected_by_iteration() {
        let (_, p, fs) = setup(4, 10.0);
        let s = vec![1.0; p.len()];
        assert_eq!(
            frame_algorithm(&fs, &s, &FrameIterationConfig::default(), None),
            Err(Error::NotAFrame)
        );
    }

    #[test]
    fn bad_samples_are_rejected() {
        let (_, _, fs) = setup(8, 0.5);
        assert!(matches!(
            dual_frame_reconstruct(&fs, &[1.0]),
            Err(Error::SampleCountMismatch { .. })
        ));
        assert_eq!(
            dual_frame_reconstruct(&fs, &[1.0, f64::INFINITY, 0.0, 0.0]),
            Err(Error::NonFinite(1))
        );
    }

    #[test]
    fn roundtrip_recovers_projection_not_raw_signal() {
        let (d, p, _) = setup(16, 0.5);
        let f = GraphSignal::new((0..16).map(|i| ((i * 7) % 5) as f64 - 2.0).collect()).unwrap();
        let report = sample_and_reconstruct_roundtrip(
            &d,
            &p,
            0.5,
            1.0,
            &f,
            SamplingMode::Bandlimited,
            &FrameIterationConfig::default(),
        )
        .unwrap();
        assert!(report.out_of_band_norm > 0.1);
        assert!(report.dual.rel_error < 1e-8);
        assert!(report.frame_iter.unwrap().rel_error < 1e-8);
        assert!(report.failure.is_none());

        let aliased = sample_and_reconstruct_roundtrip(
            &d,
            &p,
            0.5,
            1.0,
            &f,
            SamplingMode::Aliasing,
            &FrameIterationConfig::default(),
        )
        .unwrap();
        assert!(aliased.dual.rel_error > 1e-3);
    }

    #[test]
    fn roundtrip_reports_rank_deficiency() {
        let (d, p, _) = setup(8, 3.0);
        let f = d.eigenvector(1);
        let report = sample_and_reconstruct_roundtrip(
            &d,
            &p,
            3.0,
            1.0,
            &f,
            SamplingMode::Bandlimited,
            &FrameIterationConfig::default(),
        )
        .unwrap();
        assert_eq!(report.a, 0.0);
        assert!(report.frame_iter.is_none());
        assert!(report.failure.unwrap().starts_with("not a frame"));
    }
}

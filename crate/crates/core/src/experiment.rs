//! End-to-end experiments producing versioned, reproducible JSON reports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{self, FrameCheck, FrameSystem};
use crate::generate::{self, GraphKind, RNG_NAME};
use crate::partition::{self, ClusterPartition};
use crate::reconstruct::{self, FrameIterationConfig, RoundtripReport, SamplingMode};
use crate::spectral::{self, SpectralDecomposition};
use crate::splines::{self, SplineRow};

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance used for every bound-satisfaction flag in a report.
pub const FLAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoSpec {
    pub graph: GraphKind,
    pub partition: String,
    pub omega: f64,
    pub alpha: f64,
    pub seed: u64,
    pub trials: usize,
    pub orders: Vec<u32>,
    pub tol: f64,
    pub max_iter: usize,
}

impl DemoSpec {
    /// The path-graph experiment with consecutive-pair clusters.
    pub fn path(n: usize, omega: f64, alpha: f64, seed: u64) -> Self {
        Self {
            graph: GraphKind::Path { n },
            partition: "pairs".into(),
            omega,
            alpha,
            seed,
            trials: 1,
            orders: vec![1, 2, 4, 8],
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSection {
    pub eigenvalues: Vec<f64>,
    /// `max_k |λ_k − (2 − 2cos(kπ/N))|`.
    pub formula_max_abs_error: f64,
    pub within_0_4: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSection {
    pub clusters: usize,
    pub cluster_lambda1: Vec<f64>,
    #[serde(rename = "lambda_Xi")]
    pub lambda_xi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameSection {
    #[serde(flatten)]
    pub check: FrameCheck,
    pub dimension: usize,
    pub rank: usize,
    /// `(1 − γ)/(1 + α)` when `γ < 1`.
    pub guaranteed_lower_bound: Option<f64>,
    /// `a ≥ (1 − γ)/(1 + α) − tol` and `b ≤ 1 + tol`, when `γ < 1`.
    pub bounds_hold: Option<bool>,
    pub best_alpha: Option<f64>,
    pub best_lower_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub roundtrip: RoundtripReport,
    pub splines: Vec<SplineRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub max_rel_error_frame_iter: Option<f64>,
    pub mean_rel_error_frame_iter: Option<f64>,
    pub max_rel_error_dual: f64,
    pub mean_rel_error_dual: f64,
    /// Largest spline error per order, in the order of `spec.orders`.
    pub max_spline_rel_error: Vec<f64>,
    /// `None` when `γ ≥ 1` (no bound to check).
    pub splines_within_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub schema: u32,
    pub rng: &'static str,
    pub command: &'static str,
    pub spec: DemoSpec,
    pub spectrum: SpectrumSection,
    pub partition: PartitionSection,
    pub frame: FrameSection,
    pub empirical_only: bool,
    pub trials: Vec<TrialRecord>,
    pub aggregate: Aggregate,
}

/// Path graph `ℤ_N`, pair clusters, bandwidth `ω`: spectrum, frame bounds,
/// both reconstructions and a spline sweep for every trial.
pub fn demo_path(spec: &DemoSpec) -> Result<DemoReport> {
    let n = match spec.graph {
        GraphKind::Path { n } if n >= 2 && n % 2 == 0 => n,
        _ => {
            return Err(Error::InvalidParameter(
                "demo-path needs a path graph with an even vertex count".into(),
            ))
        }
    };
    let graph = generate::generate_graph(spec.graph, spec.seed)?;
    let decomp = spectral::decompose(&graph)?;
    let partition = ClusterPartition::new(&graph, partition::pairs(n))?;

    let eigenvalues = decomp.eigenvalues().to_vec();
    let formula_max_abs_error = eigenvalues
        .iter()
        .enumerate()
        .map(|(k, l)| (l - path_eigenvalue(n, k)).abs())
        .fold(0.0, f64::max);
    let spectrum = SpectrumSection {
        within_0_4: eigenvalues
            .iter()
            .all(|&l| (-FLAG_TOL..=4.0 + FLAG_TOL).contains(&l)),
        eigenvalues,
        formula_max_abs_error,
    };

    let frame_section = frame_section(&decomp, &partition, spec.omega, spec.alpha)?;
    let gamma = frame_section.check.gamma;
    let cfg = FrameIterationConfig {
        mu: None,
        max_iter: spec.max_iter,
        tol: spec.tol,
    };

    let mut trials = Vec::with_capacity(spec.trials);
    for trial in 0..spec.trials {
        let seed = spec.seed.wrapping_add(trial as u64);
        let f = generate::generate_pw_signal(&decomp, spec.omega, seed)?;
        let roundtrip = reconstruct::sample_and_reconstruct_roundtrip(
            &decomp,
            &partition,
            spec.omega,
            spec.alpha,
            &f,
            SamplingMode::Bandlimited,
            &cfg,
        )?;
        let splines = splines::spline_error_table(&decomp, &partition, gamma, &f, &spec.orders)?;
        trials.push(TrialRecord {
            trial,
            seed,
            roundtrip,
            splines,
        });
    }

    let aggregate = aggregate(&trials, spec.orders.len());
    Ok(DemoReport {
        schema: SCHEMA_VERSION,
        rng: RNG_NAME,
        command: "demo-path",
        spec: spec.clone(),
        spectrum,
        partition: PartitionSection {
            clusters: partition.len(),
            cluster_lambda1: partition.cluster_lambda1().to_vec(),
            lambda_xi: partition.lambda_xi(),
        },
        empirical_only: !(gamma < 1.0),
        frame: frame_section,
        trials,
        aggregate,
    })
}

/// `2 − 2cos(kπ/N)`.
pub fn path_eigenvalue(n: usize, k: usize) -> f64 {
    2.0 - 2.0 * (k as f64 * std::f64::consts::PI / n as f64).cos()
}

pub fn frame_section(
    decomp: &SpectralDecomposition,
    partition: &ClusterPartition,
    omega: f64,
    alpha: f64,
) -> Result<FrameSection> {
    let fs = FrameSystem::new(decomp, partition, omega, alpha)?;
    let lower = fs.guaranteed_lower_bound();
    let best_alpha = frame::best_alpha(omega, fs.lambda_xi);
    Ok(FrameSection {
        check: fs.summary(),
        dimension: fs.dimension(),
        rank: fs.rank(),
        guaranteed_lower_bound: lower,
        bounds_hold: lower.map(|l| fs.a >= l - FLAG_TOL && fs.b <= 1.0 + FLAG_TOL),
        best_lower_bound: best_alpha.map(|a| frame::guaranteed_lower_bound(omega, a, fs.lambda_xi)),
        best_alpha,
    })
}

fn aggregate(trials: &[TrialRecord], orders: usize) -> Aggregate {
    let stats = |xs: &[f64]| -> (f64, f64) {
        let max = xs.iter().copied().fold(0.0, f64::max);
        (max, xs.iter().sum::<f64>() / xs.len().max(1) as f64)
    };
    let frame_errors: Option<Vec<f64>> = trials
        .iter()
        .map(|t| t.roundtrip.frame_iter.as_ref().map(|o| o.rel_error))
        .collect();
    let dual_errors: Vec<f64> = trials.iter().map(|t| t.roundtrip.dual.rel_error).collect();
    let (frame_max, frame_mean) = match &frame_errors {
        Some(e) if !e.is_empty() => {
            let (a, b) = stats(e);
            (Some(a), Some(b))
        }
        _ => (None, None),
    };
    let (dual_max, dual_mean) = stats(&dual_errors);
    let max_spline_rel_error = (0..orders)
        .map(|i| {
            trials
                .iter()
                .map(|t| t.splines[i].rel_error)
                .fold(0.0, f64::max)
        })
        .collect();
    let flags: Option<Vec<bool>> = trials
        .iter()
        .flat_map(|t| {
            t.splines
                .iter()
                .filter(|r| r.proven)
                .map(|r| r.within_bound)
        })
        .collect();
    Aggregate {
        max_rel_error_frame_iter: frame_max,
        mean_rel_error_frame_iter: frame_mean,
        max_rel_error_dual: dual_max,
        mean_rel_error_dual: dual_mean,
        max_spline_rel_error,
        splines_within_bound: flags.map(|f| f.iter().all(|&x| x)),
    }
}

/// Serialises a report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report types serialise");
    s.push('\n');
    s
}

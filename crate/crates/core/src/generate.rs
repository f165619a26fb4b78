//! Seeded graph and signal generators.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with `seed_from_u64`, so
//! identical parameters and seeds give bit-identical output on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphSignal, WeightedGraph};
use crate::spectral::SpectralDecomposition;

/// Name of the random number generator, embedded in reports.
pub const RNG_NAME: &str = "ChaCha8Rng(seed_from_u64)+StandardNormal(ziggurat)";

/// Redraws allowed before a random generator gives up on connectivity.
pub const MAX_ATTEMPTS: usize = 100;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphKind {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Grid2d {
        rows: usize,
        cols: usize,
    },
    /// Points uniform in the unit square, joined when closer than `radius`,
    /// with Gaussian weights `exp(−d²/(2 radius²))`.
    RandomGeometric {
        n: usize,
        radius: f64,
    },
    /// Each pair is an edge with probability `p`, weight uniform in `[0.5, 1.5)`.
    ErdosRenyiWeighted {
        n: usize,
        p: f64,
    },
}

impl GraphKind {
    pub fn name(&self) -> &'static str {
        match self {
            GraphKind::Path { .. } => "path",
            GraphKind::Cycle { .. } => "cycle",
            GraphKind::Grid2d { .. } => "grid2d",
            GraphKind::RandomGeometric { .. } => "random-geometric",
            GraphKind::ErdosRenyiWeighted { .. } => "erdos-renyi-weighted",
        }
    }
}

/// Builds a connected graph of the given kind. Random kinds redraw from the
/// same stream until connected, up to [`MAX_ATTEMPTS`] times.
pub fn generate_graph(kind: GraphKind, seed: u64) -> Result<WeightedGraph> {
    let invalid = |msg: &str| Err(Error::InvalidParameter(format!("{}: {msg}", kind.name())));
    match kind {
        GraphKind::Path { n } => {
            if n < 1 {
                return invalid("need at least one vertex");
            }
            WeightedGraph::from_edges(n, (1..n).map(|i| (i - 1, i, 1.0)))
        }
        GraphKind::Cycle { n } => {
            if n < 3 {
                return invalid("need at least three vertices");
            }
            WeightedGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)))
        }
        GraphKind::Grid2d { rows, cols } => {
            if rows == 0 || cols == 0 {
                return invalid("rows and cols must be positive");
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1), 1.0));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c), 1.0));
                    }
                }
            }
            WeightedGraph::from_edges(rows * cols, edges)
        }
        GraphKind::RandomGeometric { n, radius } => {
            if n < 1 || !(radius > 0.0) {
                return invalid("need n >= 1 and radius > 0");
            }
            let mut rng = rng(seed);
            retry(|| {
                let points: Vec<(f64, f64)> = (0..n)
                    .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
                    .collect();
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        let d2 = (points[u].0 - points[v].0).powi(2)
                            + (points[u].1 - points[v].1).powi(2);
                        if d2 < radius * radius {
                            edges.push((u, v, (-d2 / (2.0 * radius * radius)).exp()));
                        }
                    }
                }
                WeightedGraph::from_edges(n, edges)
            })
        }
        GraphKind::ErdosRenyiWeighted { n, p } => {
            if n < 1 || !(0.0..=1.0).contains(&p) {
                return invalid("need n >= 1 and 0 <= p <= 1");
            }
            let mut rng = rng(seed);
            retry(|| {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.random::<f64>() < p {
                            edges.push((u, v, rng.random_range(0.5..1.5)));
                        }
                    }
                }
                WeightedGraph::from_edges(n, edges)
            })
        }
    }
}

fn retry(mut draw: impl FnMut() -> Result<WeightedGraph>) -> Result<WeightedGraph> {
    for _ in 0..MAX_ATTEMPTS {
        let g = draw()?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GeneratorDisconnected {
        attempts: MAX_ATTEMPTS,
    })
}

/// A signal with independent standard-normal entries.
pub fn random_signal(n: usize, seed: u64) -> GraphSignal {
    let mut rng = rng(seed);
    GraphSignal::from_vec_unchecked((0..n).map(|_| rng.sample(StandardNormal)).collect())
}

/// A unit-norm signal in `PW_ω` with independent standard-normal
/// coefficients on the band's eigenbasis.
pub fn generate_pw_signal(
    decomp: &SpectralDecomposition,
    omega: f64,
    seed: u64,
) -> Result<GraphSignal> {
    let pw = decomp.pw_space(omega)?;
    let m = pw.dimension();
    if m == 0 {
        return Err(Error::EmptyBand { omega });
    }
    let mut rng = rng(seed);
    let mut coeffs = nalgebra::DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let norm = coeffs.norm();
    if norm == 0.0 {
        coeffs[0] = 1.0;
    } else {
        coeffs /= norm;
    }
    Ok(pw.synthesize(&coeffs))
}

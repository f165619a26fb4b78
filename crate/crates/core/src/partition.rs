//! Disjoint cluster covers of the vertex set and the average functionals
//! they define.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphSignal, WeightedGraph};
use crate::spectral::{self, SpectralDecomposition};

/// A disjoint cover `Ξ = {Ω_j}` of `V(G)` by clusters that induce connected
/// subgraphs, with the first nonzero Laplacian eigenvalue `λ₁,ⱼ` of every
/// induced cluster and `Λ_Ξ = min_j λ₁,ⱼ`.
///
/// Singleton clusters have no nonzero eigenvalue; they are assigned
/// `λ₁,ⱼ = +∞` and therefore never determine `Λ_Ξ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterPartition {
    n: usize,
    clusters: Vec<Vec<usize>>,
    cluster_lambda1: Vec<f64>,
    lambda_xi: f64,
}

impl ClusterPartition {
    /// Checks that `clusters` is a disjoint cover of `graph` by connected
    /// induced subgraphs and computes the per-cluster constants.
    pub fn new(graph: &WeightedGraph, clusters: Vec<Vec<usize>>) -> Result<Self> {
        graph.validate().into_result()?;
        let n = graph.n();
        let mut owner = vec![usize::MAX; n];
        for (j, cluster) in clusters.iter().enumerate() {
            if cluster.is_empty() {
                return Err(Error::EmptyCluster);
            }
            for &v in cluster {
                if v >= n {
                    return Err(Error::VertexOutOfRange { index: v, n });
                }
                if owner[v] != usize::MAX {
                    return Err(Error::ClusterOverlap {
                        vertex: v,
                        first: owner[v],
                        second: j,
                    });
                }
                owner[v] = j;
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::UncoveredVertex(v));
        }

        let mut cluster_lambda1 = Vec::with_capacity(clusters.len());
        for (j, cluster) in clusters.iter().enumerate() {
            let sub = graph.induced_subgraph(cluster)?;
            if !sub.is_connected() {
                return Err(Error::DisconnectedCluster(j));
            }
            let lambda1 = if cluster.len() == 1 {
                f64::INFINITY
            } else {
                let d = spectral::decompose(&sub)?;
                d.lambda1(d.default_zero_tol())?
            };
            cluster_lambda1.push(lambda1);
        }
        let lambda_xi = cluster_lambda1
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);

        Ok(Self {
            n,
            clusters,
            cluster_lambda1,
            lambda_xi,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of clusters `J`.
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster_lambda1(&self) -> &[f64] {
        &self.cluster_lambda1
    }

    /// `Λ_Ξ = min_j λ₁,ⱼ` (infinite when every cluster is a singleton).
    pub fn lambda_xi(&self) -> f64 {
        self.lambda_xi
    }

    fn check(&self, f: &GraphSignal) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: f.len(),
            });
        }
        Ok(())
    }

    /// The samples `⟨f, ξ_j⟩ = |Ω_j|^{-1/2} Σ_{v∈Ω_j} f(v)`.
    pub fn analyze(&self, f: &GraphSignal) -> Result<Vec<f64>> {
        self.check(f)?;
        Ok(self
            .clusters
            .iter()
            .map(|c| c.iter().map(|&v| f[v]).sum::<f64>() / (c.len() as f64).sqrt())
            .collect())
    }

    /// Cluster means `⟨f, ζ_j⟩`.
    pub fn averages(&self, f: &GraphSignal) -> Result<Vec<f64>> {
        self.check(f)?;
        Ok(self
            .clusters
            .iter()
            .map(|c| c.iter().map(|&v| f[v]).sum::<f64>() / c.len() as f64)
            .collect())
    }

    pub fn functionals(&self) -> AverageFunctionals {
        let indicator = |scale: fn(usize) -> f64| -> Vec<GraphSignal> {
            self.clusters
                .iter()
                .map(|c| {
                    let mut x = vec![0.0; self.n];
                    let value = scale(c.len());
                    for &v in c {
                        x[v] = value;
                    }
                    GraphSignal::from_vec_unchecked(x)
                })
                .collect()
        };
        AverageFunctionals {
            xi: indicator(|size| 1.0 / (size as f64).sqrt()),
            zeta: indicator(|size| 1.0 / size as f64),
        }
    }

    /// `J × n` matrix whose rows are the `ξ_j`.
    pub fn analysis_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.len(), self.n);
        for (j, c) in self.clusters.iter().enumerate() {
            let value = 1.0 / (c.len() as f64).sqrt();
            for &v in c {
                m[(j, v)] = value;
            }
        }
        m
    }

    /// Orthonormal basis (columns) of `Z₀`, the signals whose cluster
    /// averages all vanish. Built from Helmert contrasts inside each
    /// cluster, so it has `n − J` columns.
    pub fn zero_average_basis(&self) -> DMatrix<f64> {
        let mut basis = DMatrix::zeros(self.n, self.n - self.len());
        let mut col = 0;
        for c in &self.clusters {
            for i in 1..c.len() {
                let norm = ((i * (i + 1)) as f64).sqrt();
                for &v in &c[..i] {
                    basis[(v, col)] = 1.0 / norm;
                }
                basis[(c[i], col)] = -(i as f64) / norm;
                col += 1;
            }
        }
        basis
    }

    /// Per-cluster slack of the local Poincaré inequality
    /// `Σ_{u∈Ω_j} |f(u) − f_{Ω_j}|² ≤ (1/λ₁,ⱼ) ‖∇_{Ω_j} f‖²`.
    pub fn local_poincare_slacks(
        &self,
        graph: &WeightedGraph,
        f: &GraphSignal,
    ) -> Result<Vec<f64>> {
        self.check(f)?;
        self.clusters
            .iter()
            .zip(&self.cluster_lambda1)
            .map(|(c, &lambda1)| {
                let local = GraphSignal::from_vec_unchecked(c.iter().map(|&v| f[v]).collect());
                let mean = local.mean();
                let spread: f64 = local.as_slice().iter().map(|x| (x - mean).powi(2)).sum();
                if lambda1.is_infinite() {
                    return Ok(-spread);
                }
                let energy = graph.induced_subgraph(c)?.gradient_norm_sq(&local)?;
                Ok(energy / lambda1 - spread)
            })
            .collect()
    }

    /// Evaluates both sides of the global Poincaré inequality
    /// `‖f‖² ≤ ((1+α)/α)(1/Λ_Ξ)‖𝓛^{1/2}f‖² + (1+α) Σ_j |⟨f, ξ_j⟩|²`.
    pub fn global_poincare_check(
        &self,
        decomp: &SpectralDecomposition,
        f: &GraphSignal,
        alpha: f64,
    ) -> Result<PoincareCheck> {
        check_alpha(alpha)?;
        let samples = self.analyze(f)?;
        let energy = decomp.apply_power(1.0, f)?.norm().powi(2);
        let sample_energy: f64 = samples.iter().map(|s| s * s).sum();
        let gradient_term = if self.lambda_xi.is_infinite() {
            0.0
        } else {
            (1.0 + alpha) / alpha / self.lambda_xi * energy
        };
        let lhs = f.norm().powi(2);
        let rhs = gradient_term + (1.0 + alpha) * sample_energy;
        Ok(PoincareCheck {
            lhs,
            rhs,
            slack: rhs - lhs,
        })
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    Ok(())
}

/// `γ = ((1+α)/α)(ω/Λ_Ξ)`.
pub fn gamma(omega: f64, alpha: f64, lambda_xi: f64) -> f64 {
    (1.0 + alpha) / alpha * (omega / lambda_xi)
}

/// Both sides of the global Poincaré inequality and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl PoincareCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

/// The normalised indicators `ξ_j = χ_j/√|Ω_j|` and `ζ_j = χ_j/|Ω_j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageFunctionals {
    pub xi: Vec<GraphSignal>,
    pub zeta: Vec<GraphSignal>,
}

/// Consecutive blocks `{0..m}, {m..2m}, …`; the last block may be shorter.
pub fn blocks(n: usize, size: usize) -> Result<Vec<Vec<usize>>> {
    if size == 0 {
        return Err(Error::InvalidParameter(
            "block size must be positive".into(),
        ));
    }
    Ok((0..n)
        .step_by(size)
        .map(|start| (start..(start + size).min(n)).collect())
        .collect())
}

/// Consecutive pairs `{2j, 2j+1}`.
pub fn pairs(n: usize) -> Vec<Vec<usize>> {
    blocks(n, 2).expect("block size 2 is positive")
}

/// Greedy BFS balls: repeatedly take the smallest unassigned vertex and
/// grow a ball of hop radius `radius` through unassigned vertices only.
/// Every ball induces a connected subgraph.
pub fn bfs_balls(graph: &WeightedGraph, radius: usize) -> Vec<Vec<usize>> {
    let n = graph.n();
    let mut assigned = vec![false; n];
    let mut clusters = Vec::new();
    for seed in 0..n {
        if assigned[seed] {
            continue;
        }
        let mut cluster = vec![seed];
        assigned[seed] = true;
        let mut queue = VecDeque::from([(seed, 0)]);
        while let Some((v, depth)) = queue.pop_front() {
            if depth == radius {
                continue;
            }
            for (u, _) in graph.neighbors(v) {
                if !assigned[u] {
                    assigned[u] = true;
                    cluster.push(u);
                    queue.push_back((u, depth + 1));
                }
            }
        }
        cluster.sort_unstable();
        clusters.push(cluster);
    }
    clusters
}

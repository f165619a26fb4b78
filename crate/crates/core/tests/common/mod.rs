#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use pwgraph::generate::{self, GraphKind};
use pwgraph::partition::{self, ClusterPartition};
use pwgraph::spectral::{self, SpectralDecomposition};
use pwgraph::{GraphSignal, WeightedGraph};

pub struct Case {
    pub name: String,
    pub graph: WeightedGraph,
    pub decomp: SpectralDecomposition,
    pub partition: ClusterPartition,
}

impl Case {
    pub fn new(name: impl Into<String>, graph: WeightedGraph, clusters: Vec<Vec<usize>>) -> Self {
        let decomp = spectral::decompose(&graph).unwrap();
        let partition = ClusterPartition::new(&graph, clusters).unwrap();
        Self {
            name: name.into(),
            graph,
            decomp,
            partition,
        }
    }

    pub fn with_pairs(kind: GraphKind, seed: u64) -> Self {
        let graph = generate::generate_graph(kind, seed).unwrap();
        let clusters = partition::pairs(graph.n());
        Self::new(format!("{}/pairs", kind.name()), graph, clusters)
    }

    pub fn with_bfs(kind: GraphKind, seed: u64, radius: usize) -> Self {
        let graph = generate::generate_graph(kind, seed).unwrap();
        let clusters = partition::bfs_balls(&graph, radius);
        Self::new(
            format!("{}#{seed}/bfs{radius}", kind.name()),
            graph,
            clusters,
        )
    }

    /// A bandwidth with `γ = 1/2` at `α = 1`.
    pub fn half_gamma_omega(&self) -> f64 {
        self.partition.lambda_xi() / 4.0
    }
}

pub fn path_pairs(n: usize) -> Case {
    Case::with_pairs(GraphKind::Path { n }, 0)
}

/// Graphs of every generator kind, each with a partition into connected
/// clusters.
pub fn suite() -> Vec<Case> {
    vec![
        path_pairs(16),
        path_pairs(64),
        Case::with_pairs(GraphKind::Cycle { n: 20 }, 0),
        Case::with_bfs(GraphKind::Grid2d { rows: 5, cols: 6 }, 0, 1),
        Case::with_bfs(GraphKind::RandomGeometric { n: 40, radius: 0.3 }, 11, 1),
        Case::with_bfs(GraphKind::ErdosRenyiWeighted { n: 30, p: 0.15 }, 12, 1),
    ]
}

/// Graphs with at most 12 vertices, small enough for dense brute-force
/// oracles.
pub fn small_suite() -> Vec<Case> {
    vec![
        path_pairs(8),
        Case::with_pairs(GraphKind::Cycle { n: 10 }, 0),
        Case::with_bfs(GraphKind::Grid2d { rows: 3, cols: 4 }, 0, 1),
        Case::with_bfs(GraphKind::RandomGeometric { n: 12, radius: 0.5 }, 5, 1),
        Case::with_bfs(GraphKind::ErdosRenyiWeighted { n: 12, p: 0.3 }, 6, 1),
    ]
}

/// Seeded random connected graphs with at most 64 vertices.
pub fn random_graphs(count: usize, base_seed: u64) -> Vec<WeightedGraph> {
    (0..count as u64)
        .map(|i| {
            let seed = base_seed + i;
            let n = 8 + (seed as usize * 13) % 57;
            let kind = if i % 2 == 0 {
                GraphKind::ErdosRenyiWeighted { n, p: 0.25 }
            } else {
                GraphKind::RandomGeometric { n, radius: 0.4 }
            };
            generate::generate_graph(kind, seed).unwrap()
        })
        .collect()
}

/// Dense Laplacian `D − W` assembled straight from the edge list.
pub fn raw_laplacian(graph: &WeightedGraph) -> DMatrix<f64> {
    let n = graph.n();
    let mut l = DMatrix::zeros(n, n);
    for (u, v, w) in graph.edges() {
        l[(u, v)] -= w;
        l[(v, u)] -= w;
        l[(u, u)] += w;
        l[(v, v)] += w;
    }
    l
}

/// Moore-Penrose pseudo-inverse via SVD with a relative cutoff.
pub fn pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max();
    svd.pseudo_inverse(cutoff).unwrap()
}

pub fn dvec(f: &GraphSignal) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_column_slice(f.as_slice())
}

pub fn signal(v: &nalgebra::DVector<f64>) -> GraphSignal {
    GraphSignal::new(v.iter().copied().collect()).unwrap()
}

/// Rows `χ_j/√|Ω_j|` straight from the cluster lists.
pub fn raw_analysis(case: &Case) -> DMatrix<f64> {
    let clusters = case.partition.clusters();
    let mut m = DMatrix::zeros(clusters.len(), case.graph.n());
    for (j, c) in clusters.iter().enumerate() {
        for &v in c {
            m[(j, v)] = 1.0 / (c.len() as f64).sqrt();
        }
    }
    m
}

/// Orthonormal basis of `PW_ω` from nalgebra's symmetric eigensolver.
pub fn raw_band_basis(case: &Case, omega: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(raw_laplacian(&case.graph));
    let cols: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] <= omega + 1e-12)
        .collect();
    eig.eigenvectors.select_columns(&cols)
}

/// `argmin uᵀ𝓛ᵏu` subject to `Ξu = t`, by the null-space method on the raw
/// matrices: `u = Ξ⁺t + N z` with `NᵀLᵏN z = −NᵀLᵏ Ξ⁺t`.
pub fn brute_force_spline(case: &Case, k: u32, targets: &[f64]) -> DVector<f64> {
    let xi = raw_analysis(case);
    let n = case.graph.n();
    let j = xi.nrows();
    let lk = raw_laplacian(&case.graph).pow(k);
    let particular = pinv(&xi) * DVector::from_column_slice(targets);
    let v_t = xi.svd(false, true).v_t.unwrap();
    let full = {
        // Complete the row space to an orthonormal basis of ℝⁿ.
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (j, n)).copy_from(&v_t);
        for i in j..n {
            m[(i, i - j)] = 1.0;
        }
        m.transpose().qr().q()
    };
    let null = full.columns(j, n - j).into_owned();
    let reduced = null.transpose() * &lk * &null;
    let rhs = -(null.transpose() * &lk * &particular);
    let z = reduced
        .cholesky()
        .expect("positive definite on Z₀")
        .solve(&rhs);
    particular + null * z
}

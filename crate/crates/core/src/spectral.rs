//! Graph Laplacian, its eigendecomposition, and functions of the Laplacian
//! evaluated through the eigenbasis: Paley-Wiener projection and fractional
//! powers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{GraphSignal, WeightedGraph};
use crate::jacobi;

/// Slack added to the bandwidth when deciding band membership, so that
/// eigenvalues analytically equal to `ω` are not lost to roundoff.
pub const BAND_SLACK: f64 = 1e-12;

/// The weighted Laplacian `(𝓛f)(v) = Σ_u (f(v) − f(u)) w(v, u)` as a dense
/// symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    matrix: DMatrix<f64>,
}

impl Laplacian {
    /// Assembles the Laplacian of a graph that passes validation.
    pub fn new(graph: &WeightedGraph) -> Result<Self> {
        graph.validate().into_result()?;
        let n = graph.n();
        let mut matrix = DMatrix::zeros(n, n);
        for v in 0..n {
            let mut degree = 0.0;
            for (u, w) in graph.neighbors(v) {
                matrix[(v, u)] = -w;
                degree += w;
            }
            matrix[(v, v)] = degree;
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, f: &GraphSignal) -> Result<GraphSignal> {
        check_len(self.n(), f)?;
        let x = &self.matrix * DVector::from_column_slice(f.as_slice());
        Ok(GraphSignal::from_vec_unchecked(x.as_slice().to_vec()))
    }

    /// `fᵀ𝓛f`.
    pub fn quadratic_form(&self, f: &GraphSignal) -> Result<f64> {
        Ok(self.apply(f)?.dot(f))
    }

    /// Ascending eigenvalues and orthonormal eigenvectors.
    pub fn eigendecompose(&self) -> Result<SpectralDecomposition> {
        let (eigenvalues, eigenvectors) = jacobi::symmetric_eigen(&self.matrix)?;
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }
}

/// Convenience wrapper: validates, assembles and decomposes in one step.
pub fn decompose(graph: &WeightedGraph) -> Result<SpectralDecomposition> {
    Laplacian::new(graph)?.eigendecompose()
}

fn check_len(n: usize, f: &GraphSignal) -> Result<()> {
    if f.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: f.len(),
        });
    }
    Ok(())
}

/// Eigenpairs of a Laplacian: `eigenvalues[i]` pairs with column `i` of
/// `eigenvectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Eigenvector `i` as a signal.
    pub fn eigenvector(&self, i: usize) -> GraphSignal {
        GraphSignal::from_vec_unchecked(self.eigenvectors.column(i).iter().copied().collect())
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Scale-aware kernel threshold `1e-9 · max(1, λ_max)`.
    pub fn default_zero_tol(&self) -> f64 {
        1e-9 * self.lambda_max().max(1.0)
    }

    /// Number of eigenvalues at or below `zero_tol`.
    pub fn kernel_dimension(&self, zero_tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .take_while(|&&l| l <= zero_tol)
            .count()
    }

    /// First nonzero eigenvalue λ₁ of a connected graph.
    pub fn lambda1(&self, zero_tol: f64) -> Result<f64> {
        let zeros = self.kernel_dimension(zero_tol);
        if zeros == self.n() {
            if zeros >= 2 {
                return Err(Error::Disconnected { zero_count: zeros });
            }
            return Err(Error::NoNonzeroEigenvalue);
        }
        if zeros >= 2 {
            return Err(Error::Disconnected { zero_count: zeros });
        }
        Ok(self.eigenvalues[zeros])
    }

    /// Coordinates of `f` in the eigenbasis, `Uᵀf`.
    pub fn coefficients(&self, f: &GraphSignal) -> Result<DVector<f64>> {
        check_len(self.n(), f)?;
        Ok(self
            .eigenvectors
            .tr_mul(&DVector::from_column_slice(f.as_slice())))
    }

    /// The signal `U c` with eigen-coordinates `c` (length `n`).
    pub fn synthesize(&self, coefficients: &DVector<f64>) -> GraphSignal {
        let x = &self.eigenvectors * coefficients;
        GraphSignal::from_vec_unchecked(x.as_slice().to_vec())
    }

    /// Dimension `m` of `PW_ω`: the number of eigenvalues `λ ≤ ω`.
    pub fn band_dimension(&self, omega: f64) -> usize {
        self.eigenvalues
            .iter()
            .take_while(|&&l| l <= omega + BAND_SLACK)
            .count()
    }

    /// The Paley-Wiener space `PW_ω = span{u_i : λ_i ≤ ω}`.
    pub fn pw_space(&self, omega: f64) -> Result<PwSpace> {
        if !(omega >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be nonnegative, got {omega}"
            )));
        }
        let m = self.band_dimension(omega);
        Ok(PwSpace {
            omega,
            eigenvalues: self.eigenvalues[..m].to_vec(),
            basis: self.eigenvectors.columns(0, m).into_owned(),
        })
    }

    /// Orthogonal projection of `f` onto `PW_ω`.
    pub fn pw_project(&self, omega: f64, f: &GraphSignal) -> Result<GraphSignal> {
        self.pw_space(omega)?.project(f)
    }

    /// `𝓛^{s/2} f`. Kernel eigenvalues (at or below the default zero
    /// tolerance) contribute the factor `0` for `s > 0` and `1` for `s = 0`.
    pub fn apply_power(&self, s: f64, f: &GraphSignal) -> Result<GraphSignal> {
        if !(s >= 0.0) {
            return Err(Error::NegativePower(s));
        }
        let mut c = self.coefficients(f)?;
        let zero_tol = self.default_zero_tol();
        for (ci, &lambda) in c.iter_mut().zip(&self.eigenvalues) {
            *ci *= self.power_factor(lambda, s, zero_tol);
        }
        Ok(self.synthesize(&c))
    }

    fn power_factor(&self, lambda: f64, s: f64, zero_tol: f64) -> f64 {
        if s == 0.0 {
            1.0
        } else if lambda <= zero_tol {
            0.0
        } else {
            lambda.powf(s / 2.0)
        }
    }

    /// Slack of the finite-graph Poincaré inequality
    /// `‖f − f_G·1‖² ≤ (1/λ₁)‖𝓛^{1/2}f‖²`, i.e. right side minus left side.
    pub fn poincare_slack(&self, f: &GraphSignal) -> Result<f64> {
        let lambda1 = self.lambda1(self.default_zero_tol())?;
        let centred = f.sub(&GraphSignal::constant(f.len(), f.mean()));
        let energy = self.apply_power(1.0, f)?.norm().powi(2);
        Ok(energy / lambda1 - centred.norm().powi(2))
    }
}

/// An orthonormal basis of `PW_ω` taken from the Laplacian eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PwSpace {
    pub omega: f64,
    /// Eigenvalues paired with the basis columns, ascending.
    pub eigenvalues: Vec<f64>,
    /// `n × m` matrix with orthonormal columns.
    pub basis: DMatrix<f64>,
}

impl PwSpace {
    pub fn dimension(&self) -> usize {
        self.basis.ncols()
    }

    pub fn n(&self) -> usize {
        self.basis.nrows()
    }

    /// Coordinates `Bᵀf` of `f` against the basis.
    pub fn coordinates(&self, f: &GraphSignal) -> Result<DVector<f64>> {
        check_len(self.n(), f)?;
        Ok(self.basis.tr_mul(&DVector::from_column_slice(f.as_slice())))
    }

    /// The signal `B c` for band coordinates `c` (length `m`).
    pub fn synthesize(&self, coordinates: &DVector<f64>) -> GraphSignal {
        let x = &self.basis * coordinates;
        GraphSignal::from_vec_unchecked(x.as_slice().to_vec())
    }

    pub fn project(&self, f: &GraphSignal) -> Result<GraphSignal> {
        Ok(self.synthesize(&self.coordinates(f)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    fn k3() -> WeightedGraph {
        WeightedGraph::from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn single_edge_laplacian() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 2.5)]).unwrap();
        let l = Laplacian::new(&g).unwrap();
        assert_eq!(
            l.matrix(),
            &DMatrix::from_row_slice(2, 2, &[2.5, -2.5, -2.5, 2.5])
        );
    }

    #[test]
    fn single_edge_spectrum_is_zero_and_two() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let d = decompose(&g).unwrap();
        assert!(d.eigenvalues()[0].abs() < 1e-15);
        assert!((d.eigenvalues()[1] - 2.0).abs() < 1e-15);
        assert!((d.lambda1(d.default_zero_tol()).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn edgeless_graph_has_zero_laplacian() {
        let l = Laplacian::new(&WeightedGraph::empty(2)).unwrap();
        assert_eq!(l.matrix(), &DMatrix::zeros(2, 2));
    }

    #[test]
    fn invalid_graph_is_rejected() {
        let g = WeightedGraph::from_directed_entries(2, [(0, 1, 1.0)]).unwrap();
        assert!(matches!(Laplacian::new(&g), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn path4_spectrum() {
        let d = decompose(&path(4)).unwrap();
        let s2 = 2f64.sqrt();
        let expected = [0.0, 2.0 - s2, 2.0, 2.0 + s2];
        for (got, want) in d.eigenvalues().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!((d.lambda1(d.default_zero_tol()).unwrap() - 0.585_786_437_626_905).abs() < 1e-12);
    }

    #[test]
    fn path_spectrum_matches_cosine_formula() {
        let n = 16;
        let d = decompose(&path(n)).unwrap();
        for (k, got) in d.eigenvalues().iter().enumerate() {
            let want = 2.0 - 2.0 * (k as f64 * PI / n as f64).cos();
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn disjoint_edges_spectrum() {
        let g = WeightedGraph::from_edges(6, [(0, 1, 1.0), (2, 3, 1.0), (4, 5, 1.0)]).unwrap();
        let d = decompose(&g).unwrap();
        for (i, l) in d.eigenvalues().iter().enumerate() {
            let want = if i < 3 { 0.0 } else { 2.0 };
            assert!((l - want).abs() < 1e-14);
        }
        assert_eq!(
            d.lambda1(d.default_zero_tol()),
            Err(Error::Disconnected { zero_count: 3 })
        );
    }

    #[test]
    fn k3_lambda1_is_three() {
        let d = decompose(&k3()).unwrap();
        assert!((d.lambda1(d.default_zero_tol()).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn single_vertex_has_no_lambda1() {
        let d = decompose(&WeightedGraph::empty(1)).unwrap();
        assert_eq!(d.lambda1(1e-9), Err(Error::NoNonzeroEigenvalue));
    }

    #[test]
    fn projection_keeps_in_band_and_kills_out_of_band() {
        let d = decompose(&path(8)).unwrap();
        let omega = d.eigenvalues()[3];
        let inside = d.eigenvector(2);
        let outside = d.eigenvector(5);
        assert!(d.pw_project(omega, &inside).unwrap().distance(&inside) < 1e-13);
        assert!(d.pw_project(omega, &outside).unwrap().norm() < 1e-13);
        // band membership includes the boundary eigenvalue itself
        assert_eq!(d.band_dimension(omega), 4);
    }

    #[test]
    fn full_band_projection_is_identity() {
        let d = decompose(&path(5)).unwrap();
        let f = GraphSignal::new(vec![1.0, -2.0, 0.5, 3.0, 0.25]).unwrap();
        let p = d.pw_project(d.lambda_max() + 1.0, &f).unwrap();
        assert!(p.distance(&f) < 1e-13);
    }

    #[test]
    fn negative_bandwidth_rejected() {
        let d = decompose(&path(3)).unwrap();
        assert!(d.pw_space(-0.1).is_err());
    }

    #[test]
    fn power_zero_is_identity() {
        let d = decompose(&path(5)).unwrap();
        let f = GraphSignal::new(vec![1.0, -2.0, 0.5, 3.0, 0.25]).unwrap();
        assert!(d.apply_power(0.0, &f).unwrap().distance(&f) < 1e-13);
    }

    #[test]
    fn power_two_scales_eigenvector() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let d = decompose(&g).unwrap();
        let u = d.eigenvector(1);
        assert!(d.apply_power(2.0, &u).unwrap().distance(&u.scale(2.0)) < 1e-14);
    }

    #[test]
    fn power_one_norm_matches_gradient() {
        let g = path(6);
        let d = decompose(&g).unwrap();
        let f = GraphSignal::new(vec![0.3, -1.0, 2.0, 0.0, 1.5, -0.7]).unwrap();
        let lhs = d.apply_power(1.0, &f).unwrap().norm().powi(2);
        let rhs = g.gradient_norm_sq(&f).unwrap();
        assert!((lhs - rhs).abs() < 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn negative_power_rejected() {
        let d = decompose(&path(3)).unwrap();
        assert_eq!(
            d.apply_power(-1.0, &GraphSignal::zeros(3)),
            Err(Error::NegativePower(-1.0))
        );
    }

    #[test]
    fn poincare_is_tight_on_fiedler_vector() {
        let d = decompose(&path(7)).unwrap();
        let u1 = d.eigenvector(1);
        assert!(d.poincare_slack(&u1).unwrap().abs() < 1e-12);
    }
}

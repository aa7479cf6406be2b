#pragma once

#include <Eigen/Dense>

namespace beamlab {

// Uniform interior grid for the 1-D Dirichlet Laplacian on (0, L), together
// with its exact sine eigen-decomposition. The 3-point stencil has the
// closed-form eigenbasis S[j,k] = sqrt(2/(n+1)) sin(jk pi/(n+1)), which makes
// fractional matrix powers exact at the discrete level.
struct Discretization {
    int n = 0;                 // interior points, even and >= 2
    double L = 0.0;            // interval length, > 0
    double h = 0.0;            // mesh width L/(n+1)
    Eigen::VectorXd eigvals;   // Laplacian eigenvalues, strictly increasing
    Eigen::MatrixXd eigbasis;  // orthonormal sine modes, column k <-> eigvals[k]
};

// Throws std::invalid_argument for odd n, n < 2, or L <= 0. Odd n is rejected
// because the skew-symmetric first-derivative stencil is singular in odd
// dimension, which would leak into the energy Gram matrix.
Discretization build_grid(int n, double L);

// Tridiagonal (2, -1)/h^2 stencil; symmetric positive definite.
Eigen::MatrixXd laplacian_matrix(const Discretization& grid);

// S diag(eigvals^nu) S^T for any real nu; symmetric positive definite.
Eigen::MatrixXd frac_power_matrix(const Discretization& grid, double nu);

// Fast path: transform, scale, transform back. Equals the dense product.
Eigen::VectorXd frac_power_apply(const Discretization& grid, double nu,
                                 const Eigen::VectorXd& x);
Eigen::VectorXcd frac_power_apply(const Discretization& grid, double nu,
                                  const Eigen::VectorXcd& x);

// Skew-symmetric centered first derivative: +-1/(2h) off-diagonals.
// Exactly satisfies <D0 x, y> = -<x, D0 y>, the discrete integration by
// parts every dissipativity identity rests on. Nonsingular for even n.
Eigen::MatrixXd centered_difference(const Discretization& grid);

// Shear strain D0*phi + psi.
Eigen::VectorXd shear_map(const Discretization& grid, const Eigen::VectorXd& phi,
                          const Eigen::VectorXd& psi);

}  // namespace beamlab

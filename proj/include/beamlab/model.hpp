#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "beamlab/grid.hpp"

namespace beamlab {

enum class SystemId { System1 = 1, System2 = 2 };

// Physical constants of the two coupled beam models plus the three damping
// exponents. rho*, kappa, b, delta enter stiffness/energy weights and must be
// strictly positive; the damping/coupling strengths mu, mu1, mu2, bigK and
// the couplings beta, gamma may be zero (conservative limits switch them
// off). System 1 additionally needs beta, gamma > 0 for its energy weights,
// enforced in derive_weights.
struct ModelParams {
    double rho1 = 1.0, rho2 = 1.0, rho3 = 1.0;
    double kappa = 1.0, b = 1.0, delta = 1.0;
    double beta = 1.0, gamma = 1.0, mu = 1.0;
    double mu1 = 1.0, mu2 = 1.0, bigK = 1.0;
    double tau = 1.0, sigma = 1.0, xi = 1.0;

    void validate() const;  // throws std::invalid_argument
};

// Coefficients of ||Phi||^2, ||Psi||^2, ||D0 phi + psi||^2, ||A^{1/2} psi||^2,
// ||A^{1/2} theta||^2, ||Theta||^2 in the energy norm.
struct WeightSet {
    double wPhi = 1.0;
    double wPsi = 1.0;
    double wShear = 1.0;
    double wBend = 1.0;
    double wTheta_grad = 1.0;
    double wTheta_vel = 1.0;
};

// Stacked complex state (phi, Phi, psi, Psi, theta, Theta), each block of
// length n. Real initial data is stored with zero imaginary parts.
class StateVector {
public:
    StateVector() = default;
    StateVector(int n, Eigen::VectorXcd stacked);
    static StateVector zero(int n);

    int n() const { return n_; }
    const Eigen::VectorXcd& stacked() const { return stacked_; }
    Eigen::VectorXcd& stacked() { return stacked_; }

    auto phi() const { return stacked_.segment(0 * n_, n_); }
    auto Phi() const { return stacked_.segment(1 * n_, n_); }
    auto psi() const { return stacked_.segment(2 * n_, n_); }
    auto Psi() const { return stacked_.segment(3 * n_, n_); }
    auto theta() const { return stacked_.segment(4 * n_, n_); }
    auto Theta() const { return stacked_.segment(5 * n_, n_); }

private:
    int n_ = 0;
    Eigen::VectorXcd stacked_;
};

// Block generator with its energy geometry. B is real; complex arithmetic
// enters only through resolvent solves and complex test states. chol is the
// upper Cholesky factor, chol^T * chol = G.
struct Generator {
    Discretization grid;
    ModelParams params;
    SystemId system = SystemId::System1;
    WeightSet weights;
    Eigen::MatrixXd B;
    Eigen::MatrixXd G;
    Eigen::MatrixXd chol;

    int dim() const { return 6 * grid.n; }
};

// Energy weights that make the generator exactly dissipative in its own
// norm, for every admissible parameter set. System 2's weights are the
// literal energy coefficients; System 1's solve the cross-term cancellation
// constraints, normalized to the leading coefficient rho1*beta*gamma.
WeightSet derive_weights(const ModelParams& params, SystemId system);

// G = L^T W L with L: (phi,Phi,psi,Psi,theta,Theta) ->
// (Phi, Psi, D0 phi + psi, A^{1/2} psi, A^{1/2} theta, Theta).
// Returns {G, upper Cholesky factor}; throws std::runtime_error if the
// factorization fails (non-SPD Gram matrix).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_matrix(const Discretization& grid,
                                                        const WeightSet& weights);

Generator assemble_generator(const ModelParams& params, const Discretization& grid,
                             SystemId system);

// Weighted energy inner product and norm of stacked states.
std::complex<double> g_inner(const Generator& gen, const Eigen::VectorXcd& u,
                             const Eigen::VectorXcd& v);
double g_norm(const Generator& gen, const Eigen::VectorXcd& u);

// Quadratic dissipation form: wPhi (mu1/rho1) ||A^{tau/2} Phi||^2 +
// wPsi (mu2/rho2) ||A^{sigma/2} Psi||^2 + wTheta_vel (c/rho3) ||A^{xi/2} Theta||^2
// with c = bigK (System 1) or gamma (System 2). Equals -Re<BU, U>_G.
double dissipation_form(const StateVector& U, const Generator& gen);

// Half the squared energy norm, 0.5 <U, U>_G.
double energy(const StateVector& U, const Generator& gen);

// Blockwise weighted norm with arbitrary coefficients (used by the lemma
// probes, which evaluate their inequalities in literal coefficient sets).
double weighted_norm2(const Generator& gen, const WeightSet& w, const StateVector& U);

// Reproducible complex state of unit G-norm.
StateVector random_state(const Generator& gen, std::uint64_t seed);

}  // namespace beamlab

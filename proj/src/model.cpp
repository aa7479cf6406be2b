#include "beamlab/model.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>
#include <string>

#include "beamlab/rng.hpp"

namespace beamlab {

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("ModelParams: ") + name +
                                        " must be positive and finite");
    };
    auto nonnegative = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("ModelParams: ") + name +
                                        " must be nonnegative and finite");
    };
    positive(rho1, "rho1");
    positive(rho2, "rho2");
    positive(rho3, "rho3");
    positive(kappa, "kappa");
    positive(b, "b");
    positive(delta, "delta");
    nonnegative(beta, "beta");
    nonnegative(gamma, "gamma");
    nonnegative(mu, "mu");
    nonnegative(mu1, "mu1");
    nonnegative(mu2, "mu2");
    nonnegative(bigK, "bigK");
    for (auto [v, name] : {std::pair{tau, "tau"}, {sigma, "sigma"}, {xi, "xi"}})
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string("ModelParams: ") + name +
                                        " must lie in [0, 1]");
}

StateVector::StateVector(int n, Eigen::VectorXcd stacked)
    : n_(n), stacked_(std::move(stacked)) {
    if (n_ < 1 || stacked_.size() != 6 * static_cast<Eigen::Index>(n_))
        throw std::invalid_argument("StateVector: stacked length must be 6*n");
}

StateVector StateVector::zero(int n) {
    return StateVector(n, Eigen::VectorXcd::Zero(6 * n));
}

WeightSet derive_weights(const ModelParams& p, SystemId system) {
    p.validate();
    if (system == SystemId::System2)
        return {p.rho1, p.rho2, p.kappa, p.b, p.delta, p.rho3};

    if (!(p.beta > 0.0) || !(p.gamma > 0.0))
        throw std::invalid_argument(
            "derive_weights: System1 requires beta > 0 and gamma > 0");
    // Cancellation constraints: wShear = wPhi*kappa/rho1 = wPsi*kappa/rho2,
    // wBend = wPsi*b/rho2, wPsi*beta/rho2 = wTheta_vel*gamma/rho3,
    // wTheta_grad = wTheta_vel*delta/rho3, normalized by wPhi = rho1*beta*gamma.
    WeightSet w;
    w.wPhi = p.rho1 * p.beta * p.gamma;
    w.wPsi = p.rho2 * p.beta * p.gamma;
    w.wShear = p.beta * p.kappa * p.gamma;
    w.wBend = p.b * p.beta * p.gamma;
    w.wTheta_grad = p.beta * p.beta * p.delta;
    w.wTheta_vel = p.beta * p.beta * p.rho3;
    return w;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_matrix(const Discretization& grid,
                                                        const WeightSet& w) {
    const int n = grid.n;
    const Eigen::MatrixXd A = laplacian_matrix(grid);
    const Eigen::MatrixXd D = centered_difference(grid);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(6 * n, 6 * n);
    auto block = [&](int r, int c) { return G.block(r * n, c * n, n, n); };

    block(0, 0) = w.wShear * D.transpose() * D;
    block(0, 2) = w.wShear * D.transpose();
    block(2, 0) = w.wShear * D;
    block(2, 2) = w.wShear * I + w.wBend * A;
    block(1, 1) = w.wPhi * I;
    block(3, 3) = w.wPsi * I;
    block(4, 4) = w.wTheta_grad * A;
    block(5, 5) = w.wTheta_vel * I;

    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("gram_matrix: Cholesky failed, Gram matrix not SPD");
    return {std::move(G), Eigen::MatrixXd(llt.matrixU())};
}

Generator assemble_generator(const ModelParams& p, const Discretization& grid,
                             SystemId system) {
    p.validate();
    const int n = grid.n;
    const Eigen::MatrixXd A = laplacian_matrix(grid);
    const Eigen::MatrixXd D = centered_difference(grid);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    Generator gen;
    gen.grid = grid;
    gen.params = p;
    gen.system = system;
    gen.weights = derive_weights(p, system);

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(6 * n, 6 * n);
    auto block = [&](int r, int c) { return B.block(r * n, c * n, n, n); };

    // Common rows: phi' = Phi, psi' = Psi, theta' = Theta.
    block(0, 1) = I;
    block(2, 3) = I;
    block(4, 5) = I;

    // Phi' = (kappa/rho1) D0 (D0 phi + psi) - (mu1/rho1) A^tau Phi  [+ coupling]
    block(1, 0) = (p.kappa / p.rho1) * D * D;
    block(1, 2) = (p.kappa / p.rho1) * D;
    block(1, 1) = -(p.mu1 / p.rho1) * frac_power_matrix(grid, p.tau);

    // Psi' = -(b/rho2) A psi - (kappa/rho2)(D0 phi + psi) - (mu2/rho2) A^sigma Psi
    block(3, 0) = -(p.kappa / p.rho2) * D;
    block(3, 2) = -(p.b / p.rho2) * A - (p.kappa / p.rho2) * I;
    block(3, 3) = -(p.mu2 / p.rho2) * frac_power_matrix(grid, p.sigma);

    block(5, 4) = -(p.delta / p.rho3) * A;

    if (system == SystemId::System1) {
        block(1, 5).setZero();
        block(3, 5) = -(p.beta / p.rho2) * D;
        block(5, 3) = -(p.gamma / p.rho3) * D;
        block(5, 5) = -(p.bigK / p.rho3) * frac_power_matrix(grid, p.xi);
    } else {
        block(1, 5) = -(p.mu / p.rho1) * D;
        block(3, 5) = (p.mu / p.rho2) * I;
        block(5, 1) = -(p.mu / p.rho3) * D;
        block(5, 3) = -(p.mu / p.rho3) * I;
        block(5, 5) = -(p.gamma / p.rho3) * frac_power_matrix(grid, p.xi);
    }

    gen.B = std::move(B);
    auto [G, chol] = gram_matrix(grid, gen.weights);
    gen.G = std::move(G);
    gen.chol = std::move(chol);
    return gen;
}

std::complex<double> g_inner(const Generator& gen, const Eigen::VectorXcd& u,
                             const Eigen::VectorXcd& v) {
    return u.dot(gen.G * v);  // Eigen's dot conjugates the left argument
}

double g_norm(const Generator& gen, const Eigen::VectorXcd& u) {
    return std::sqrt(std::max(0.0, g_inner(gen, u, u).real()));
}

double dissipation_form(const StateVector& U, const Generator& gen) {
    if (U.n() != gen.grid.n)
        throw std::invalid_argument("dissipation_form: state/grid size mismatch");
    const ModelParams& p = gen.params;
    const WeightSet& w = gen.weights;
    auto half_power_norm2 = [&](const Eigen::VectorXcd& x, double exponent) {
        return frac_power_apply(gen.grid, exponent / 2.0, x).squaredNorm();
    };
    double thermal_coeff = (gen.system == SystemId::System1) ? p.bigK : p.gamma;
    return w.wPhi * (p.mu1 / p.rho1) * half_power_norm2(U.Phi(), p.tau) +
           w.wPsi * (p.mu2 / p.rho2) * half_power_norm2(U.Psi(), p.sigma) +
           w.wTheta_vel * (thermal_coeff / p.rho3) * half_power_norm2(U.Theta(), p.xi);
}

double energy(const StateVector& U, const Generator& gen) {
    return 0.5 * g_inner(gen, U.stacked(), U.stacked()).real();
}

double weighted_norm2(const Generator& gen, const WeightSet& w, const StateVector& U) {
    const Eigen::MatrixXd D = centered_difference(gen.grid);
    Eigen::VectorXcd shear = D * U.phi() + U.psi();
    auto half_norm2 = [&](const Eigen::VectorXcd& x) {
        return frac_power_apply(gen.grid, 0.5, x).squaredNorm();
    };
    return w.wPhi * U.Phi().squaredNorm() + w.wPsi * U.Psi().squaredNorm() +
           w.wShear * shear.squaredNorm() + w.wBend * half_norm2(U.psi()) +
           w.wTheta_grad * half_norm2(U.theta()) + w.wTheta_vel * U.Theta().squaredNorm();
}

StateVector random_state(const Generator& gen, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd raw(gen.dim());
    for (Eigen::Index i = 0; i < raw.size(); ++i) raw(i) = rng.next_complex();
    double norm = g_norm(gen, raw);
    if (!(norm > 0.0))
        throw std::runtime_error("random_state: degenerate draw");  // unreachable
    return StateVector(gen.grid.n, raw / norm);
}

}  // namespace beamlab

#include "beamlab/evolve.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace beamlab {

namespace {

using Complex = std::complex<double>;

Trajectory propagate_midpoint(const Generator& gen, const StateVector& U0,
                              double t_end, int steps) {
    const int dim = gen.dim();
    const double dt = t_end / steps;

    Eigen::MatrixXcd minus =
        (Eigen::MatrixXd::Identity(dim, dim) - (dt / 2.0) * gen.B).cast<Complex>();
    Eigen::MatrixXcd plus =
        (Eigen::MatrixXd::Identity(dim, dim) + (dt / 2.0) * gen.B).cast<Complex>();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(minus);

    Trajectory traj;
    traj.times.resize(steps + 1);
    traj.energies.resize(steps + 1);
    traj.states.reserve(steps + 1);

    Eigen::VectorXcd U = U0.stacked();
    for (int k = 0; k <= steps; ++k) {
        traj.times(k) = (k == steps) ? t_end : dt * k;
        StateVector state(gen.grid.n, U);
        traj.energies(k) = energy(state, gen);
        traj.states.push_back(std::move(state));
        if (k < steps) U = lu.solve(plus * U);
    }
    return traj;
}

Trajectory propagate_eigen(const Generator& gen, const StateVector& U0, double t_end,
                           int steps, bool* fell_back) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(gen.B, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) {
        *fell_back = true;
        return propagate_midpoint(gen, U0, t_end, steps);
    }
    Eigen::MatrixXcd V = es.eigenvectors();
    Eigen::VectorXcd d = es.eigenvalues();

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
    Eigen::VectorXcd c0 = lu.solve(U0.stacked());
    double defect = (V * c0 - U0.stacked()).norm();
    if (!(defect <= 1e-8 * std::max(U0.stacked().norm(), 1e-300))) {
        // Near-defective eigenbasis: the expansion of U0 is unreliable.
        *fell_back = true;
        return propagate_midpoint(gen, U0, t_end, steps);
    }

    const double dt = t_end / steps;
    Trajectory traj;
    traj.times.resize(steps + 1);
    traj.energies.resize(steps + 1);
    traj.states.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        double t = (k == steps) ? t_end : dt * k;
        traj.times(k) = t;
        Eigen::VectorXcd coeffs = (d.array() * t).exp() * c0.array();
        StateVector state(gen.grid.n, V * coeffs);
        traj.energies(k) = energy(state, gen);
        traj.states.push_back(std::move(state));
    }
    return traj;
}

}  // namespace

Trajectory propagate(const Generator& gen, const StateVector& U0, double t_end,
                     int steps, PropagationMethod method) {
    if (!(t_end > 0.0)) throw std::invalid_argument("propagate: t_end must be > 0");
    if (steps < 1) throw std::invalid_argument("propagate: steps must be >= 1");
    if (U0.n() != gen.grid.n)
        throw std::invalid_argument("propagate: state/grid size mismatch");

    if (method == PropagationMethod::implicit_midpoint)
        return propagate_midpoint(gen, U0, t_end, steps);

    bool fell_back = false;
    Trajectory traj = propagate_eigen(gen, U0, t_end, steps, &fell_back);
    traj.fell_back_to_midpoint = fell_back;
    return traj;
}

double fit_decay_rate(const Trajectory& traj, double tail_fraction) {
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw std::invalid_argument("fit_decay_rate: tail_fraction must lie in (0, 1]");
    const Eigen::Index total = traj.times.size();
    if (traj.energies.size() != total)
        throw std::invalid_argument("fit_decay_rate: time/energy length mismatch");

    Eigen::Index start =
        total - static_cast<Eigen::Index>(std::ceil(tail_fraction * total));
    if (start < 0) start = 0;

    // Underflowed energies carry no slope information; stop the window at the
    // first one rather than taking log of (sub)normal garbage.
    Eigen::Index stop = total;
    for (Eigen::Index i = start; i < total; ++i) {
        if (traj.energies(i) < 1e-300) {
            stop = i;
            break;
        }
    }

    Eigen::Index m = stop - start;
    if (m < 10)
        throw std::invalid_argument("fit_decay_rate: tail window needs >= 10 samples");

    double mean_t = 0.0, mean_e = 0.0;
    for (Eigen::Index i = start; i < stop; ++i) {
        mean_t += traj.times(i);
        mean_e += std::log(traj.energies(i));
    }
    mean_t /= m;
    mean_e /= m;
    double stt = 0.0, ste = 0.0;
    for (Eigen::Index i = start; i < stop; ++i) {
        double dt = traj.times(i) - mean_t;
        stt += dt * dt;
        ste += dt * (std::log(traj.energies(i)) - mean_e);
    }
    if (!(stt > 0.0))
        throw std::invalid_argument("fit_decay_rate: degenerate time window");
    return 0.5 * ste / stt;
}

Eigen::VectorXd smoothing_indicator(const Generator& gen, const Trajectory& traj) {
    const WeightSet& w = gen.weights;
    Eigen::VectorXd share(static_cast<Eigen::Index>(traj.states.size()));
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const StateVector& U = traj.states[k];
        double stiff =
            w.wBend * frac_power_apply(gen.grid, 0.5, Eigen::VectorXcd(U.psi()))
                          .squaredNorm() +
            w.wTheta_grad *
                frac_power_apply(gen.grid, 0.5, Eigen::VectorXcd(U.theta()))
                    .squaredNorm();
        double total = std::real(g_inner(gen, U.stacked(), U.stacked()));
        share(static_cast<Eigen::Index>(k)) = total > 0.0 ? stiff / total : 0.0;
    }
    return share;
}

}  // namespace beamlab

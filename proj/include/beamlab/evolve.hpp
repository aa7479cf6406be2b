#pragma once

#include <Eigen/Dense>
#include <vector>

#include "beamlab/model.hpp"

namespace beamlab {

enum class PropagationMethod { eigen_exact, implicit_midpoint };

// Sampled solution of U' = BU with its energy history. times start at 0 and
// end at t_end; states/energies carry one entry per time.
struct Trajectory {
    Eigen::VectorXd times;
    std::vector<StateVector> states;
    Eigen::VectorXd energies;
    // Set when an eigen-exact run detected a (near-)defective eigenbasis and
    // silently switched to the midpoint scheme.
    bool fell_back_to_midpoint = false;
};

// Integrates U' = BU from U0 over [0, t_end] with `steps` uniform steps.
// eigen_exact evaluates the matrix exponential through the eigenbasis (exact
// up to conditioning); implicit_midpoint applies the Cayley step
// (I - dt/2 B)^{-1} (I + dt/2 B), which is unconditionally dissipative in the
// energy norm. Throws std::invalid_argument on t_end <= 0, steps < 1, or a
// state/grid size mismatch.
Trajectory propagate(const Generator& gen, const StateVector& U0, double t_end,
                     int steps,
                     PropagationMethod method = PropagationMethod::implicit_midpoint);

// Least-squares slope of log energy over the trailing `tail_fraction` of the
// trajectory, halved (energy is quadratic in the state). Entries whose energy
// has underflowed below 1e-300 are dropped from the window; the remaining
// window must hold at least 10 strictly positive samples.
double fit_decay_rate(const Trajectory& traj, double tail_fraction);

// Qualitative smoothing monitor: the share of the energy carried by the
// stiffness (A^{1/2}) blocks at each sample, in [0, 1]. High-frequency data
// should shed this share as the flow regularizes; no quantitative claim is
// attached.
Eigen::VectorXd smoothing_indicator(const Generator& gen, const Trajectory& traj);

}  // namespace beamlab

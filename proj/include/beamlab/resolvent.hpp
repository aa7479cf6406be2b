#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "beamlab/model.hpp"

namespace beamlab {

// Frequency-domain side of the laboratory: solves (i*lambda*I - B) U = F,
// measures energy-weighted resolvent norms along the imaginary axis, fits
// the decay exponent of ||R(i*lambda)|| ~ lambda^{-eta}, and evaluates the
// bounded-ratio probes behind the stability/regularity estimates.

enum class ProbeId { L3, L4i, L4ii, L10i, L10ii, L10iii, L12, L13i, L13ii, L15i, L15ii };

const char* probe_name(ProbeId probe);
ProbeId probe_from_name(const std::string& name);  // throws on unknown tag

enum class NormMethod { automatic, svd, inverse_iteration };

struct FitResult {
    double eta = 0.0;       // minus the log-log slope
    double residual = 0.0;  // RMS deviation of the fit
    double window_min = 0.0;
    double window_max = 0.0;
    int points = 0;
};

struct ScanReport {
    Eigen::VectorXd lambdas;  // log-spaced, ascending
    Eigen::VectorXd norms;    // ||(i*lambda - B)^{-1}||_G per lambda
    FitResult eta_fit;
    double eta_predicted = 0.0;
    double lambda_max_resolved = 0.0;
    bool beyond_resolved = false;  // requested band exceeded the resolved one
};

// Largest trustworthy scan frequency, 0.5 * max |Im(eigenvalue)|: beyond the
// spectrum's imaginary extent every finite-dimensional resolvent decays like
// 1/lambda regardless of the damping exponents, which would fake analyticity.
double lambda_max_resolved(const Generator& gen);

// Complex linear solve; residual contract ||(i*lambda - B)U - F|| <= 1e-10 ||F||.
StateVector resolve(const Generator& gen, double lambda, const StateVector& F);

// Operator norm of the resolvent in the energy geometry:
// 1/sigma_min(chol (i*lambda - B) chol^{-1}). Dense SVD for 6n <= 1500,
// inverse iteration above (or per the explicit method override). Returns
// +infinity when i*lambda is an eigenvalue to working precision.
double resolvent_norm(const Generator& gen, double lambda,
                      NormMethod method = NormMethod::automatic);

// Log-spaced grid helper (count >= 2, 0 < lo < hi).
Eigen::VectorXd log_grid(double lo, double hi, int count);

// Norms over a log-spaced band plus the default exponent fit (top 1.5
// decades of the scanned band, >= 12 points when available). Passing
// lambda_min = lambda_max = 0 selects the resolved band spanning 3 decades.
// A lambda_max beyond the resolved band is recorded, not an error.
ScanReport scan(const Generator& gen, double lambda_min, double lambda_max, int count);

// Least-squares slope of log(norm) vs log(lambda) restricted to
// [window_min, window_max]; eta is minus the slope. Requires >= 6 points.
FitResult fit_eta(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& norms,
                  double window_min, double window_max);

// 2 r / (r + 1) with r = min{tau, sigma, xi}; 0 when the minimum vanishes.
double predicted_eta(double tau, double sigma, double xi);

// For each lambda: draw `samples` random unit-energy right-hand sides, solve,
// evaluate the probe's ratio, keep the max. Norms inside the ratio use the
// literal coefficient sets of the underlying estimates (not the derived
// energy weights). Throws on probe/system mismatch or exponent-range
// violations (e.g. L15i requires tau == xi in [1/2, 1]).
Eigen::VectorXd lemma_probe(const Generator& gen, ProbeId probe,
                            const Eigen::VectorXd& lambda_grid, int samples,
                            std::uint64_t seed);

// Probes belonging to one system, in declaration order.
std::vector<ProbeId> probes_for(SystemId system);

// True when the probe's system matches and the exponents satisfy its range
// preconditions; the non-throwing twin of lemma_probe's validation.
bool probe_applicable(ProbeId probe, const ModelParams& params, SystemId system);

// Boundedness heuristic shared by the region sweep and the verification
// suite: the max ratio over the top decade of the grid stays below twice the
// median ratio over the whole grid. A probe that never fires (all-zero
// deficit ratios) counts as bounded.
bool probe_bounded(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& ratios);

// Max amplification ||U||_G / ||F||_G of the stationary solve -BU = F over
// random unit-norm F; finite because 0 is in the resolvent set.
double stationary_check(const Generator& gen, int samples, std::uint64_t seed);

}  // namespace beamlab

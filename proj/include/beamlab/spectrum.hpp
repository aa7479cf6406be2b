#pragma once

#include <Eigen/Dense>

#include "beamlab/model.hpp"

namespace beamlab {

// Similarity transform chol * B * chol^{-1}: the generator expressed in the
// geometry where the energy norm is Euclidean. Eigenvalues are invariant;
// left-half-plane structure and resolvent norms are judged in this frame.
Eigen::MatrixXd energy_similarity(const Generator& gen);

struct SpectrumReport {
    Eigen::VectorXcd eigenvalues;  // all 6n, sorted by (Re, Im) ascending
    double abscissa = 0.0;         // max Re
    double axis_gap = 0.0;         // min |Re|
};

// Dense nonsymmetric eigensolve of the energy-similar generator.
// Requires 6n <= 3000; throws std::invalid_argument beyond that and
// std::runtime_error on solver failure.
SpectrumReport compute_spectrum(const Generator& gen);

Eigen::VectorXcd eigenvalues(const Generator& gen);
double spectral_abscissa(const Generator& gen);
double axis_gap(const Generator& gen);

}  // namespace beamlab

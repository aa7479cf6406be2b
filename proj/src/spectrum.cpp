#include "beamlab/spectrum.hpp"

#include <algorithm>
#include <stdexcept>

namespace beamlab {

Eigen::MatrixXd energy_similarity(const Generator& gen) {
    // chol * B, then right-divide by the upper-triangular factor:
    // X = (chol B) chol^{-1}  <=>  X^T = chol^{-T} (chol B)^T.
    Eigen::MatrixXd left = gen.chol * gen.B;
    Eigen::MatrixXd xt = gen.chol.transpose().triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd(left.transpose()));
    return xt.transpose();
}

SpectrumReport compute_spectrum(const Generator& gen) {
    if (gen.dim() > 3000)
        throw std::invalid_argument("compute_spectrum: dense eigensolve capped at 6n <= 3000");

    Eigen::EigenSolver<Eigen::MatrixXd> solver(energy_similarity(gen),
                                               /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("compute_spectrum: eigensolver did not converge");

    SpectrumReport report;
    report.eigenvalues = solver.eigenvalues();
    std::sort(report.eigenvalues.data(), report.eigenvalues.data() + report.eigenvalues.size(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });
    report.abscissa = report.eigenvalues.real().maxCoeff();
    report.axis_gap = report.eigenvalues.real().cwiseAbs().minCoeff();
    return report;
}

Eigen::VectorXcd eigenvalues(const Generator& gen) { return compute_spectrum(gen).eigenvalues; }

double spectral_abscissa(const Generator& gen) { return compute_spectrum(gen).abscissa; }

double axis_gap(const Generator& gen) { return compute_spectrum(gen).axis_gap; }

}  // namespace beamlab

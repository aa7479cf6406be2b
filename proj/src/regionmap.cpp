#include "beamlab/regionmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beamlab/resolvent.hpp"
#include "beamlab/rng.hpp"
#include "beamlab/spectrum.hpp"

namespace beamlab {

const char* region_label_name(RegionLabel label) {
    switch (label) {
        case RegionLabel::analytic: return "analytic";
        case RegionLabel::gevrey: return "gevrey";
        case RegionLabel::stable_only: return "stable-only";
    }
    throw std::logic_error("region_label_name: unreachable");
}

Classification classify(double tau, double sigma, double xi, SystemId system) {
    for (double v : {tau, sigma, xi})
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("classify: exponents must lie in [0, 1]");

    double r = std::min({tau, sigma, xi});
    bool analytic =
        r >= 0.5 && (system == SystemId::System1 || std::abs(tau - xi) <= 1e-12);
    if (analytic) return {RegionLabel::analytic, 1.0};
    if (r > 0.0) return {RegionLabel::gevrey, 2.0 * r / (r + 1.0)};
    return {RegionLabel::stable_only, 0.0};
}

std::vector<std::array<double, 3>> cube_lattice(const std::vector<double>& values) {
    std::vector<std::array<double, 3>> lattice;
    lattice.reserve(values.size() * values.size() * values.size());
    for (double t : values)
        for (double s : values)
            for (double x : values) lattice.push_back({t, s, x});
    return lattice;
}

RegionReport sweep(const ModelParams& base, const Discretization& grid,
                   SystemId system, const std::vector<std::array<double, 3>>& lattice,
                   const RegionChecks& checks, std::uint64_t seed) {
    if (lattice.empty()) throw std::invalid_argument("sweep: empty lattice");

    RegionReport report;
    report.system = system;
    report.base = base;
    report.n = grid.n;
    report.L = grid.L;
    report.checks = checks;
    report.seed = seed;
    report.points.reserve(lattice.size());

    for (std::size_t i = 0; i < lattice.size(); ++i) {
        RegionPoint point;
        point.tau = lattice[i][0];
        point.sigma = lattice[i][1];
        point.xi = lattice[i][2];

        // Out-of-range exponents are a caller bug, not a per-point numeric
        // failure; classify's throw propagates.
        Classification cls = classify(point.tau, point.sigma, point.xi, system);
        point.predicted = cls.label;
        point.eta_pred = cls.eta_pred;

        if (checks.scan || checks.abscissa || checks.probes) {
            try {
                ModelParams params = base;
                params.tau = point.tau;
                params.sigma = point.sigma;
                params.xi = point.xi;
                Generator gen = assemble_generator(params, grid, system);

                if (checks.abscissa) point.abscissa = spectral_abscissa(gen);
                if (checks.scan) point.eta_fit = scan(gen, 0.0, 0.0, 30).eta_fit.eta;
                if (checks.probes) {
                    Eigen::VectorXd grid_lambda =
                        log_grid(1.0, lambda_max_resolved(gen), 24);
                    bool all_bounded = true;
                    std::vector<ProbeId> probes = probes_for(system);
                    for (std::size_t k = 0; k < probes.size(); ++k) {
                        if (!probe_applicable(probes[k], params, system)) continue;
                        Eigen::VectorXd ratios =
                            lemma_probe(gen, probes[k], grid_lambda, 16,
                                        Rng::derive(seed, i, k));
                        all_bounded = all_bounded && probe_bounded(grid_lambda, ratios);
                    }
                    point.probes_passed = all_bounded;
                }
            } catch (const std::exception& e) {
                point.error = e.what();
            }
        }
        report.points.push_back(std::move(point));
    }
    return report;
}

}  // namespace beamlab

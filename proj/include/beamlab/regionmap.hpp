#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "beamlab/model.hpp"

namespace beamlab {

// Predicted regularity class of the semigroup read off the damping exponents.
// The differentiable-regularity (gevrey) region is the open cube; the
// analyticity regions are closed on [1/2, 1], so a vanishing minimum exponent
// is stable-only even though damping persists there.
enum class RegionLabel { analytic, gevrey, stable_only };

const char* region_label_name(RegionLabel label);  // "analytic" / "gevrey" / ...

struct Classification {
    RegionLabel label;
    double eta_pred;  // 1 for analytic, 2r/(r+1) for gevrey, 0 otherwise
};

// System 1 is analytic iff min{tau, sigma, xi} >= 1/2; System 2 additionally
// needs tau == xi (tolerance 1e-12; lattice values are exact binary
// fractions). Throws std::invalid_argument outside [0, 1]^3.
Classification classify(double tau, double sigma, double xi, SystemId system);

struct RegionChecks {
    bool scan = false;      // resolvent scan + exponent fit -> eta_fit
    bool abscissa = false;  // eigensolve -> spectral abscissa
    bool probes = false;    // every applicable ratio probe bounded?
};

struct RegionPoint {
    double tau = 0.0, sigma = 0.0, xi = 0.0;
    RegionLabel predicted = RegionLabel::stable_only;
    double eta_pred = 0.0;
    double eta_fit = std::numeric_limits<double>::quiet_NaN();
    double abscissa = std::numeric_limits<double>::quiet_NaN();
    bool probes_passed = false;
    std::string error;  // nonempty when a check failed at this point
};

struct RegionReport {
    std::vector<RegionPoint> points;
    SystemId system = SystemId::System1;
    ModelParams base;
    int n = 0;
    double L = 0.0;
    RegionChecks checks;
    std::uint64_t seed = 0;
};

// All |values|^3 exponent triples in lexicographic order.
std::vector<std::array<double, 3>> cube_lattice(const std::vector<double>& values);

// Classifies every lattice point and runs the requested measured checks on it
// (base params with the exponents swapped in). A failing check records its
// message in the row and the sweep continues; results are deterministic for a
// fixed seed. Throws std::invalid_argument on an empty lattice or exponents
// outside [0, 1]^3.
RegionReport sweep(const ModelParams& base, const Discretization& grid,
                   SystemId system, const std::vector<std::array<double, 3>>& lattice,
                   const RegionChecks& checks, std::uint64_t seed);

}  // namespace beamlab

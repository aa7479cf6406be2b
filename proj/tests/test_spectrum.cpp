#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "beamlab/model.hpp"
#include "beamlab/rng.hpp"
#include "beamlab/spectrum.hpp"

using namespace beamlab;

TEST_CASE("energy_similarity reproduces chol*B*chol^{-1} against a dense inverse") {
    auto grid = build_grid(6, 2.0);
    ModelParams p;
    p.beta = 2.0;
    p.gamma = 0.5;
    Generator gen = assemble_generator(p, grid, SystemId::System1);

    Eigen::MatrixXd dense = gen.chol * gen.B * gen.chol.inverse();
    Eigen::MatrixXd fast = energy_similarity(gen);
    CHECK((dense - fast).cwiseAbs().maxCoeff() < 1e-10 * dense.cwiseAbs().maxCoeff());
}

TEST_CASE("conservative limit: purely imaginary spectrum, zero abscissa and gap") {
    auto grid = build_grid(10, 3.0);

    ModelParams c1;
    c1.mu1 = c1.mu2 = c1.bigK = 0.0;
    Generator gen1 = assemble_generator(c1, grid, SystemId::System1);

    ModelParams c2;
    c2.mu1 = c2.mu2 = c2.gamma = 0.0;
    Generator gen2 = assemble_generator(c2, grid, SystemId::System2);

    for (const Generator& gen : {gen1, gen2}) {
        SpectrumReport rep = compute_spectrum(gen);
        CHECK(rep.eigenvalues.real().cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(rep.abscissa) < 1e-8);
        CHECK(rep.axis_gap < 1e-8);
    }
}

TEST_CASE("damped spectra close under conjugation") {
    auto grid = build_grid(12, 3.141592653589793);
    ModelParams p;
    p.tau = 0.5;
    p.sigma = 0.5;
    p.xi = 0.5;
    for (SystemId system : {SystemId::System1, SystemId::System2}) {
        Eigen::VectorXcd eigs = eigenvalues(assemble_generator(p, grid, system));
        for (Eigen::Index i = 0; i < eigs.size(); ++i) {
            double best = 1e300;
            for (Eigen::Index j = 0; j < eigs.size(); ++j)
                best = std::min(best, std::abs(eigs(j) - std::conj(eigs(i))));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("stability at the exponent lattice corners, n = 32") {
    // Desk-scale stability check on a sub-lattice; the acceptance suite runs
    // the full 27-point lattice for both systems.
    auto grid = build_grid(32, 3.141592653589793);
    ModelParams p;
    for (SystemId system : {SystemId::System1, SystemId::System2}) {
        for (auto [tau, sigma, xi] :
             {std::tuple{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 0.5, 1.0}}) {
            p.tau = tau;
            p.sigma = sigma;
            p.xi = xi;
            SpectrumReport rep = compute_spectrum(assemble_generator(p, grid, system));
            CAPTURE(static_cast<int>(system));
            CAPTURE(tau);
            CAPTURE(sigma);
            CAPTURE(xi);
            CHECK(rep.abscissa < -1e-6);
            CHECK(rep.axis_gap > 1e-6);
        }
    }
}

TEST_CASE("System2 (1,1,1) n=32 abscissa regression baseline") {
    auto grid = build_grid(32, 3.141592653589793);
    Generator gen = assemble_generator(ModelParams{}, grid, SystemId::System2);
    double abscissa = spectral_abscissa(gen);
    CHECK(abscissa < 0.0);
    // Regression pin: measured once with this exact discretization, recorded
    // so silent changes to the assembly or similarity transform surface here.
    CHECK(abscissa == doctest::Approx(-0.00042279402).epsilon(5e-4));
}

TEST_CASE("axis_gap equals |abscissa| when the rightmost eigenvalue is nearest the axis") {
    auto grid = build_grid(16, 3.141592653589793);
    ModelParams p;
    p.tau = 0.5;
    p.sigma = 0.5;
    p.xi = 0.5;
    Generator gen = assemble_generator(p, grid, SystemId::System1);
    SpectrumReport rep = compute_spectrum(gen);
    CHECK(rep.axis_gap > 0.0);
    CHECK(rep.axis_gap <= std::abs(rep.abscissa) + 1e-12);
    // For these configurations the slowest mode is also the closest to iR.
    CHECK(rep.axis_gap == doctest::Approx(std::abs(rep.abscissa)).epsilon(1e-9));
}

TEST_CASE("numerical range bounds the abscissa from above") {
    auto grid = build_grid(12, 2.0);
    ModelParams p;
    p.tau = 0.5;
    p.sigma = 1.0;
    p.xi = 0.25;
    for (SystemId system : {SystemId::System1, SystemId::System2}) {
        Generator gen = assemble_generator(p, grid, system);
        double abscissa = spectral_abscissa(gen);

        // Sharp form of the numerical-range bound: the spectrum lies inside
        // the field of values, whose rightmost extent is the top eigenvalue
        // of the symmetric part in the energy frame. Random sampling alone
        // cannot certify this (it undershoots the boundary).
        Eigen::MatrixXd similar = energy_similarity(gen);
        Eigen::MatrixXd sym = 0.5 * (similar + similar.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
        REQUIRE(es.info() == Eigen::Success);
        CHECK(abscissa <= es.eigenvalues().maxCoeff() + 1e-8);

        for (int trial = 0; trial < 50; ++trial) {
            StateVector U = random_state(gen, 500 + trial);
            CHECK(g_inner(gen, U.stacked(), gen.B * U.stacked()).real() <= 1e-10);
        }
    }
}

TEST_CASE("dimension cap") {
    // 6n > 3000 is rejected before any factorization work.
    auto grid = build_grid(502, 1.0);
    Generator gen = assemble_generator(ModelParams{}, grid, SystemId::System2);
    CHECK_THROWS_AS(compute_spectrum(gen), std::invalid_argument);
}

#pragma once

#include <complex>
#include <cstdint>

namespace beamlab {

// Deterministic splitmix64 stream. Standard-library distributions are
// implementation-defined, which would break byte-identical report
// reproducibility across toolchains; this generator is bit-exact everywhere
// and supports cheap derived seeds for per-(point, sample) streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [-1, 1): 53-bit mantissa, exactly reproducible.
    double next_symmetric() {
        return 2.0 * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53) - 1.0;
    }

    std::complex<double> next_complex() {
        double re = next_symmetric();
        double im = next_symmetric();
        return {re, im};
    }

    // Stable seed derivation for independent sub-streams (scan/probe workers).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        Rng mix(seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xc2b2ae3d27d4eb4full));
        mix.next_u64();
        return mix.next_u64();
    }

private:
    std::uint64_t state_;
};

}  // namespace beamlab

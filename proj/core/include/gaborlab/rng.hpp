#pragma once

#include <cstdint>

#include "gaborlab/gabor.hpp"

namespace gaborlab {

/// Deterministic counter-based Gaussian stream: value i is SplitMix64 applied
/// to seed + (i+1)*phi64, uniforms paired through Box-Muller. Same seed, same
/// stream, independent of call sites.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64();
    double next_uniform();  // in (0,1)
    double next_normal();
    cplx next_complex_normal();

    /// Derive a decorrelated sub-stream seed (per pattern, per trial, ...).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0;
};

/// Seeded complex-Gaussian window (both components standard normal).
Window random_window(const FiniteAbelianGroup& group, std::uint64_t seed);

/// Window with Gaussian-integer entries a+bi, a,b uniform in [-amplitude,
/// amplitude]; resampled if identically zero. Suitable for exact mode.
Window random_gaussian_integer_window(const FiniteAbelianGroup& group, std::uint64_t seed,
                                      int amplitude = 9);

}  // namespace gaborlab

#include "gaborlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace gaborlab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t GaussianStream::next_u64() { return splitmix64(seed_ + (++counter_) * kGolden); }

double GaussianStream::next_uniform() {
    // 53-bit mantissa, shifted to (0,1).
    return ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_uniform(), u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

cplx GaussianStream::next_complex_normal() {
    double re = next_normal();
    double im = next_normal();
    return {re, im};
}

std::uint64_t GaussianStream::derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ (stream * 0xD1342543DE82EF95ULL));
}

Window random_window(const FiniteAbelianGroup& group, std::uint64_t seed) {
    GaussianStream gs(seed);
    std::vector<cplx> v(group.order());
    for (auto& z : v) z = gs.next_complex_normal();
    return Window(group, std::move(v));
}

Window random_gaussian_integer_window(const FiniteAbelianGroup& group, std::uint64_t seed,
                                      int amplitude) {
    GaussianStream gs(seed);
    const int span = 2 * amplitude + 1;
    std::vector<cplx> v(group.order());
    bool nonzero = false;
    do {
        for (auto& z : v) {
            int re = (int)(gs.next_u64() % span) - amplitude;
            int im = (int)(gs.next_u64() % span) - amplitude;
            z = cplx(re, im);
            nonzero |= (re != 0 || im != 0);
        }
    } while (!nonzero);
    return Window(group, std::move(v));
}

}  // namespace gaborlab

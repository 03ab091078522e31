#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "gaborlab/gabor.hpp"

namespace gaborlab {

/// (||f||_0, ||fhat||_0)
struct SupportPair {
    int k = 0, l = 0;
    auto operator<=>(const SupportPair&) const = default;
};

SupportPair support_pair(const Window& f, double tol = 1e-9);

struct SupportIdentityReport {
    long long lhs = 0;  // ||V_phi f||_0
    long long rhs = 0;  // sum_x ||(T_x phi . f)^||_0
    bool equal = false;
    bool indeterminate = false;  // borderline entries, verdict withheld
};

/// Checks ||V_phi f||_0 = sum over shifts of the transform support of
/// T_x(phi) * f, both sides thresholded against the same absolute cutoff.
/// The identity is usually stated over cyclic groups; the derivation is
/// translation-structural, so non-cyclic groups are accepted as an extension
/// (the shift sum then runs over all group elements).
SupportIdentityReport verify_support_identity(const Window& phi, const Window& f,
                                              double tol = 1e-9);

struct FWitness {
    SupportPair pair;
    std::vector<cplx> values;
};

/// Observed support-pair set with one witness per pair. Membership of a
/// recorded pair is certain; absence of a pair is not a proof.
struct FSet {
    int n = 0;
    std::vector<FWitness> entries;  // sorted by pair, unique
    bool contains(SupportPair p) const;
    std::vector<SupportPair> pairs() const;
};

enum class FStrategy { exhaustive_support_patterns, sampled };

/// Observes attainable (||f||_0, ||fhat||_0) pairs over Z/nZ: per support
/// pattern (up to affine symmetry in the exhaustive strategy), seeded random
/// draws plus targeted draws from spectral kernels for the thin pairs.
FSet enumerate_F(int n, FStrategy strategy, int draws_per_pattern, std::uint64_t seed,
                 double tol = 1e-9);

struct InclusionCheck {
    SupportPair pair;
    long long expected = 0;  // n^2 - n + l
    long long observed = 0;  // ||V_phi (f/phi)||_0
    bool pass = false;
};

struct InclusionReport {
    bool all_pass = true;
    std::vector<InclusionCheck> checks;
};

/// For every recorded pair (k,l) with witness f: g = f / phi pointwise must
/// satisfy ||V_phi g||_0 = n^2 - n + l. Throws std::invalid_argument when phi
/// has a zero coordinate.
InclusionReport verify_inclusion_f_in_fphi(const Window& phi, const FSet& fset,
                                           double tol = 1e-9);

/// Pair (||f||_0, ||V_phi f||_0 - n^2 + n); the second entry is stored as
/// observed, nothing is assumed about its range.
using StftPair = SupportPair;

/// Observed STFT pairs over seeded draws across support patterns; sorted
/// unique.
std::vector<StftPair> sample_f_phi(const Window& phi, int trials, std::uint64_t seed,
                                   double tol = 1e-9);

}  // namespace gaborlab

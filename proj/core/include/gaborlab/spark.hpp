#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gaborlab/gabor.hpp"

namespace gaborlab {

// --- subset combinatorics (colexicographic order) ---------------------------

/// C(n,k), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);
/// Colexicographic rank of an ascending k-combination.
std::uint64_t colex_rank(const int* comb, int k);
/// Inverse of colex_rank; comb receives an ascending k-combination.
void colex_unrank(std::uint64_t rank, int k, int* comb);
/// Advance to the colex successor within {0,...,n-1}; returns the lowest
/// changed position, or -1 when the enumeration is exhausted.
int colex_next(int* comb, int k, int n);

// --- spark computation -------------------------------------------------------

struct SparkOptions {
    double det_rel_tol = 1e-9;    // |det| vs product of column norms
    double rank_ratio_tol = 1e-8; // sigma_min / sigma_max
    std::uint64_t budget = 100'000'000;  // per-k subset budget
    int workers = 0;              // 0 = default
    bool exact = false;           // exact cyclotomic determinants
};

/// Result of a spark computation. spark_lower and spark_upper are proven
/// bounds (spark >= lower, spark <= upper when a witness exists); decided
/// means the exact value is known. full_spark corresponds to spark = N+1.
struct SparkReport {
    int n = 0;
    std::uint64_t num_points = 0;  // N^2
    int spark_lower = 2;
    int spark_upper = 0;  // 0 = no upper bound proven
    bool decided = false;
    bool full_spark = false;
    std::optional<std::vector<int>> witness;  // tf point indices (shift-major)
    std::uint64_t subsets_checked = 0;
    double elapsed_seconds = 0;
    bool exact = false;
    bool budget_exhausted = false;

    int spark() const;  // throws unless decided
};

/// det of the N x N matrix of shifted windows (|points| must equal N).
cplx p_lambda(const Window& f, std::span<const TimeFrequencyPoint> points);
/// |det| normalized by the product of column norms (Hadamard bound <= 1).
double p_lambda_hadamard_ratio(const Window& f, std::span<const TimeFrequencyPoint> points);

/// Scans every N-subset of G x G^ in colex order. Full spark iff all pass the
/// normalized determinant test; otherwise the first failing subset is the
/// witness. Verdict and witness are independent of the worker count.
/// Throws std::length_error when C(N^2, N) exceeds the budget.
SparkReport is_full_spark(const Window& f, const SparkOptions& opt = {});

/// Smallest dependent subset size, by an ascending exhaustive ladder with
/// early exit. When a ladder level exceeds the budget the report carries the
/// proven lower bound plus, when a dependent N-subset is found within budget,
/// the upper bound spark <= N.
SparkReport spark(const Window& f, const SparkOptions& opt = {});

enum class SearchStrategy { exhaustive, orbit_guided, randomized };

struct SubsetSearchOptions {
    double det_rel_tol = 1e-9;
    double rank_ratio_tol = 1e-8;
    std::uint64_t budget = 100'000'000;
    int workers = 0;
    std::uint64_t seed = 0;  // randomized strategy
    int trials = 20000;      // randomized strategy
    std::vector<std::vector<int>> orbits;  // orbit_guided strategy
};

struct SubsetSearchResult {
    std::optional<std::vector<int>> witness;  // ascending column indices
    std::uint64_t subsets_checked = 0;
    bool exhausted = false;  // search space fully covered (absence is a proof)
};

/// Finds k columns of m with numerical rank < k, or nothing. For
/// non-exhaustive strategies absence of a witness is not a proof.
SubsetSearchResult rank_deficient_subset_search(const CMat& m, int k, SearchStrategy strategy,
                                                const SubsetSearchOptions& opt = {});

}  // namespace gaborlab

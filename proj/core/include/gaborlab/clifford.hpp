#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaborlab/linalg.hpp"
#include "gaborlab/spark.hpp"

namespace gaborlab {

/// Element of SL(2, Z/nZ), n odd; entries canonical in [0, n),
/// a*d - b*c = 1 (mod n).
struct SL2ModN {
    long long n = 0, a = 0, b = 0, c = 0, d = 0;
    bool operator==(const SL2ModN&) const = default;
    long long trace() const { return (a + d) % n; }
};

/// Throws std::domain_error for even n, std::invalid_argument when the
/// determinant is not 1 mod n.
SL2ModN sl2_make(long long n, long long a, long long b, long long c, long long d);
SL2ModN sl2_identity(long long n);
SL2ModN sl2_mul(const SL2ModN& x, const SL2ModN& y);
SL2ModN sl2_pow(const SL2ModN& x, long long e);  // e >= 0
/// Matrix order in SL(2, Z/nZ).
long long sl2_order(const SL2ModN& f);
/// The order-3 matrix (0, -1; 1, -1) mod n.
SL2ModN zauner_matrix(long long n);
/// All of SL(2, Z/nZ) in lexicographic (a,b,c,d) order.
std::vector<SL2ModN> sl2_enumerate(long long n);
/// |SL(2, Z/nZ)| = n^3 * prod_{p | n} (1 - p^-2).
long long sl2_group_order(long long n);
/// Rejection-sampled uniform element, deterministic in the seed.
SL2ModN random_sl2(long long n, std::uint64_t seed);

/// Number of points x in (Z/nZ)^2 whose orbit x, Fx, ..., F^{ord-1}x has full
/// length ord(F).
long long count_f_full(const SL2ModN& f);

/// A unitary representing F by conjugation on displacement operators:
/// U D_lambda U* = (phase) D_{F lambda}. Phase convention theta = 0 in every
/// constructor.
struct CliffordUnitary {
    SL2ModN source;
    CMat u;
    std::string route;  // "prime" | "product" | "crt"
};

/// Closed form for gcd(b, n) = 1:
/// U[r][s] = tau^{b^{-1}(a s^2 - 2 r s + d r^2)} / sqrt(n), tau = -e^{i pi/n}.
CliffordUnitary u_prime(const SL2ModN& f);
/// Product of two prime-form factors; requires gcd(b,n) > 1 and gcd(d,n) = 1.
CliffordUnitary u_nonprime(const SL2ModN& f);
/// Chinese-remainder route for arbitrary odd n: per prime-power component the
/// matrix is conjugated by diag(1, u_i), u_i = (n/n_i)^{-1} mod n_i, so the
/// Kronecker product intertwines the standard displacements after the CRT
/// index permutation.
CliffordUnitary u_general(const SL2ModN& f);
/// Dispatch: prime form, then product form, then CRT.
CliffordUnitary clifford_unitary(const SL2ModN& f);

/// ||U D_lambda U* - s D_{F lambda}||_F minimized over unimodular s.
double covariance_residual(const CliffordUnitary& cu, long long l1, long long l2);
double max_covariance_residual(const CliffordUnitary& cu);  // over all lambda

/// A quadratic form q: G -> Q/Z on a finite abelian group, stored as exact
/// rationals with a common denominator. b^q(x,y) = q(x+y) - q(x) - q(y) must
/// be bilinear; this is verified exactly at construction.
class QuadraticForm {
  public:
    QuadraticForm(std::vector<int> moduli, std::vector<long long> numerators,
                  long long denominator);

    const std::vector<int>& moduli() const { return moduli_; }
    long long order() const { return order_; }
    long long denominator() const { return den_; }
    /// Numerator of q at the lexicographic element index, in [0, den).
    long long numerator(long long index) const { return num_[index]; }

    /// (1/sqrt|G|) sum_x e^{2 pi i q(x)}.
    cplx gauss_sum() const;

    struct RadicalPrediction {
        long long radical_size = 0;  // |B|, B = radical of b^q
        bool q_vanishes_on_radical = false;
        double predicted_abs = 0;  // 0 or sqrt(|B|)
    };
    /// Exact integer computation of the kernel of the adjoint homomorphism
    /// and of q's restriction to it.
    RadicalPrediction radical_prediction() const;

  private:
    std::vector<int> moduli_;
    std::vector<long long> num_;
    long long den_, order_;
    std::vector<int> strides_;
    long long add_index(long long i, long long j) const;
};

/// Trace form of the prime route on Z/nZ: q(r) = b^{-1}(t-2)(n+1)/(2n) r^2.
QuadraticForm trace_form_prime(const SL2ModN& f);
/// Trace form of the product route on (Z/nZ)^2.
QuadraticForm trace_form_product(const SL2ModN& f);
/// |Tr U_F| predicted from the radical sizes, multiplicative over CRT
/// components.
double predicted_abs_trace(const SL2ModN& f);

struct TraceScanReport {
    long long n = 0;
    long long matrices = 0;          // group order
    long long matrices_scanned = 0;  // may be smaller under the budget
    double coverage = 1.0;
    double min_abs_trace = 0;
    double max_prediction_mismatch = 0;  // | |Tr| - predicted |
    double elapsed_seconds = 0;
};
/// Builds U_F for every F in SL(2, Z/nZ), recording min |Tr U_F| and the
/// worst deviation from the radical prediction. When the group order exceeds
/// max_matrices the scan covers a deterministic prefix and reports the
/// coverage fraction.
TraceScanReport trace_abs_scan(long long n, int workers = 0,
                               long long max_matrices = 1'000'000);

struct Eigenspace {
    cplx eigenvalue;
    CMat basis;  // orthonormal columns
};

struct EigenDecomposition {
    int projective_order = 0;  // smallest m with U^m scalar
    cplx scalar;               // U^m = scalar * I
    std::vector<Eigenspace> spaces;
    double max_residual = 0;  // max ||U v - lambda v||
};

/// Spectral decomposition through eigenprojectors (1/m) sum mu^{-k} Utilde^k
/// of the normalized power Utilde = U / scalar^{1/m}.
EigenDecomposition eigenvectors_by_projector(const CliffordUnitary& cu);

/// Orbit partition of the lambda index space (Z/nZ)^2 under lambda -> F lambda
/// (index = l1 * n + l2).
std::vector<std::vector<int>> sl2_orbits_on_phase_space(const SL2ModN& f);

struct EigenVectorFinding {
    int space_index = 0, vector_index = 0;
    cplx eigenvalue;
    std::optional<std::vector<int>> dependent_subset;  // lambda indices
    std::uint64_t subsets_checked = 0;
};

struct EigenDeficiencyReport {
    SL2ModN f;
    SL2ModN f_reduced;      // F^{ord/d}, d = gcd(ord, n)
    long long ord_f = 0;
    long long d = 0;
    SearchStrategy strategy;
    std::vector<EigenVectorFinding> findings;
    bool all_found = false;
    double elapsed_seconds = 0;
};

struct EigenDeficiencyOptions {
    SearchStrategy strategy = SearchStrategy::exhaustive;
    double rank_ratio_tol = 1e-8;
    double det_rel_tol = 1e-9;
    std::uint64_t budget = 100'000'000;
    int workers = 0;
    std::uint64_t seed = 0;
    int randomized_trials = 200000;
};

/// For each eigenvector v of U_{F'} (F' = F^{ord/d}), searches for a dependent
/// n-subset of the displacement orbit {D_lambda v}. A finding without a
/// witness means the strategy was inconclusive, not a refutation.
/// Requires gcd(ord(F), n) > 1.
EigenDeficiencyReport eigen_deficiency_check(const SL2ModN& f,
                                             const EigenDeficiencyOptions& opt = {});

}  // namespace gaborlab

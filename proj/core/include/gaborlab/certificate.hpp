#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaborlab/gabor.hpp"
#include "gaborlab/group.hpp"

namespace gaborlab {

enum class CertKind { klein, prime_square, hereditary, generic };
std::string cert_kind_name(CertKind k);
CertKind cert_kind_from_name(const std::string& name);

struct CertClaims {
    int lambda_size = 0;
    int rank_bound = 0;  // rank of {pi(lambda) f} is at most this
    std::optional<long long> stft_bound;  // upper bound on an STFT support, when claimed
};

struct CertSubgroupInfo {
    std::vector<int> moduli;
    std::vector<std::vector<int>> generator_images;
};

struct CertProvenance {
    std::optional<std::uint64_t> seed;
    std::optional<CertSubgroupInfo> subgroup;
    std::optional<std::string> parent;  // kind of the lifted certificate
    std::optional<std::vector<cplx>> window;  // construction window, when bound to one
    bool exact = false;
};

/// A machine-checkable spark-deficiency certificate: a point set Lambda,
/// optionally a witness vector orthogonal to every pi(lambda) f, plus claimed
/// counts. Certificates without a stored witness are universal: verification
/// derives a fresh witness for every test window.
struct SparkCertificate {
    SparkCertificate(FiniteAbelianGroup g, CertKind k) : group(std::move(g)), kind(k) {}

    int schema_version = 1;
    FiniteAbelianGroup group;
    CertKind kind;
    std::vector<TimeFrequencyPoint> points;
    std::optional<std::vector<cplx>> witness;
    CertClaims claims;
    CertProvenance provenance;

    bool universal() const { return !window_bound(); }
    bool window_bound() const { return provenance.window.has_value(); }
};

/// Klein orthogonality set over a group with an embedded Klein subgroup K:
/// Lambda = {(a, xi) : xi nontrivial on K, a in K, xi(a) = -1}, |Lambda| =
/// 3N/2, with every <pi(lambda) f, conj(f)> = 0. Window-bound form.
SparkCertificate klein_certificate(const FiniteAbelianGroup& g, const Window& f);
/// Same point set, no bound window (holds for every window).
SparkCertificate universal_klein_certificate(const FiniteAbelianGroup& g);

/// Adjugate construction over Z/pZ x Z/pZ, p odd prime: the window is
/// arranged as the p x p matrix Z with columns indexed by the second
/// coordinate, the witness has matrix (adj Z)^*, and Lambda is the
/// 2p^2-2 point family orthogonal to the witness.
/// Throws std::invalid_argument when the adjugate witness vanishes.
SparkCertificate prime_square_certificate(int p, const Window& z);
SparkCertificate universal_prime_square_certificate(int p);

/// Universal truncation to the first `size` points (construction order);
/// requires a universal-capable kind and size <= |Lambda|.
SparkCertificate universal_truncation(const SparkCertificate& cert, int size);

/// Lifts a universal |H|-point certificate over a subgroup into the host:
/// each character extends in |G/H| ways, giving |G| points whose shifted
/// windows are dependent for every window over G.
SparkCertificate hereditary_lift(const SparkCertificate& cert_h, const SubgroupEmbedding& emb);

/// Dispatcher: Klein path for p = 2, prime-square family (truncated and
/// lifted when the subgroup is proper) for odd p. The returned certificate is
/// verified against `trials` seeded random windows before being returned.
/// Throws std::domain_error for cyclic groups.
SparkCertificate certify_noncyclic(const FiniteAbelianGroup& g, int trials, std::uint64_t seed);

struct CertificateVerifyOptions {
    double ortho_rel_tol = 1e-11;
    double rank_ratio_tol = 1e-8;
    double support_rel_tol = 1e-9;
    bool exact = false;  // exact relations for Gaussian-integer windows
    int workers = 0;
};

struct VerifyReport {
    bool pass = true;
    int relations_checked = 0;
    double max_ortho_residual = 0;  // relative to ||w|| * ||witness||
    double max_rank_ratio = 0;      // worst sigma_{bound+1}/sigma_1 observed
    int windows_tested = 0;
    bool exact_used = false;
    std::string first_violation;    // empty when pass
};

/// Re-checks every declared relation from scratch: orthogonality of each
/// pi(lambda) f against the witness, the claimed rank bound, the claimed STFT
/// support bound, and for prime-square certificates the adjugate identity
/// <Z_a, X_b> = delta_ab det Z. Universal certificates are checked against
/// each supplied test window.
VerifyReport verify_certificate(const SparkCertificate& cert,
                                const std::vector<Window>& test_windows,
                                const CertificateVerifyOptions& opt = {});

struct StftSupportProbe {
    long long bound = 0;         // N^2 - 3N/2
    long long min_observed = 0;
    long long max_observed = 0;
    int trials = 0;
    bool all_within_bound = true;
};

/// Samples seeded windows f over a group with a Klein subgroup and records
/// the support of the table <pi(lambda) f, conj(f)>; every sample must stay
/// within N^2 - 3N/2.
StftSupportProbe min_stft_support_probe(const FiniteAbelianGroup& g, int trials,
                                        std::uint64_t seed);

// --- serialization -----------------------------------------------------------

std::string certificate_to_json(const SparkCertificate& cert, int indent = 2);
SparkCertificate certificate_from_json(const std::string& json_text);
void save_certificate(const SparkCertificate& cert, const std::string& path);
SparkCertificate load_certificate(const std::string& path);

}  // namespace gaborlab

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gaborlab {

using cplx = std::complex<double>;

/// Element of a finite abelian group, as a tuple of canonical coordinates
/// (0 <= coords[i] < moduli[i]).
struct GroupElement {
    std::vector<int> coords;
    bool operator==(const GroupElement&) const = default;
};

/// Character of a finite abelian group, identified with an element tuple via
/// the fixed pairing  xi_y(x) = exp(2*pi*i * sum_i x_i y_i / n_i).
struct Character {
    std::vector<int> coords;
    bool operator==(const Character&) const = default;
};

/// A finite abelian group given as Z/n1 x ... x Z/nk.
///
/// Immutable after construction and cheap to copy (shared internal state).
/// Elements are enumerated lexicographically in the component order, so
/// index_of/element_at are inverse bijections with {0,...,order-1}.
class FiniteAbelianGroup {
  public:
    /// Throws std::invalid_argument if any modulus is < 2 or the list is empty.
    explicit FiniteAbelianGroup(std::vector<int> moduli);

    const std::vector<int>& moduli() const;
    int order() const;
    int rank() const;
    /// lcm of the moduli; equals order() exactly for cyclic groups.
    int exponent() const;
    bool is_cyclic() const;

    GroupElement element_at(int index) const;
    Character character_at(int index) const;
    int index_of(const GroupElement& x) const;
    int index_of(const Character& xi) const;

    GroupElement zero() const;
    Character trivial_character() const;
    GroupElement add(const GroupElement& a, const GroupElement& b) const;
    GroupElement sub(const GroupElement& a, const GroupElement& b) const;
    GroupElement negate(const GroupElement& a) const;
    GroupElement scale(long long k, const GroupElement& a) const;
    /// Canonicalize arbitrary integer coordinates.
    GroupElement reduce(const std::vector<long long>& raw) const;

    /// Exact phase of the pairing as a multiple of 1/exponent(): returns t in
    /// [0, exponent) with <xi, x> = exp(2*pi*i*t/exponent).
    int phase_index(const Character& xi, const GroupElement& x) const;
    cplx pairing(const Character& xi, const GroupElement& x) const;

    // Index-level variants backed by precomputed tables; these carry the hot
    // loops of frame construction and the STFT.
    int add_index(int g, int h) const;
    int sub_index(int g, int h) const;
    int negate_index(int g) const;
    int phase_index_at(int chi, int g) const;
    cplx pairing_at(int chi, int g) const;
    /// exp(2*pi*i*t/exponent) for t in [0, exponent).
    cplx root_of_unity(int t) const;

    bool operator==(const FiniteAbelianGroup& other) const;
    /// Literal form "n1xn2x...xnk", e.g. "3x3".
    std::string to_string() const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

FiniteAbelianGroup make_group(const std::vector<int>& moduli);
/// Parses the literal syntax "n1xn2x...xnk" accepted by all CLI commands.
FiniteAbelianGroup parse_group(const std::string& literal);

/// An injective homomorphism from a subgroup H into a host group G, given by
/// the images of H's component generators. Injectivity and well-definedness
/// are verified by enumeration at construction.
class SubgroupEmbedding {
  public:
    SubgroupEmbedding(FiniteAbelianGroup host, FiniteAbelianGroup sub,
                      std::vector<GroupElement> generator_images);

    const FiniteAbelianGroup& host() const { return host_; }
    const FiniteAbelianGroup& sub() const { return sub_; }
    const std::vector<GroupElement>& generator_images() const { return images_; }

    GroupElement map(const GroupElement& h) const;
    int map_index(int sub_index) const { return image_index_[sub_index]; }
    bool is_identity() const;

  private:
    FiniteAbelianGroup host_, sub_;
    std::vector<GroupElement> images_;
    std::vector<int> image_index_;
};

/// All characters xi of the host with xi∘emb = xi_sub on the subgroup.
/// Exactly |G|/|H| of them exist; this is verified before returning.
std::vector<Character> character_extensions(const Character& xi_sub,
                                            const SubgroupEmbedding& emb);

/// Chinese-remainder bijection between Z/nZ and the product of the
/// prime-power components of n (odd n only).
struct CrtBijection {
    long long n = 0;
    std::vector<long long> components;  // prime powers, primes ascending
    std::vector<long long> to_components(long long x) const;
    long long from_components(const std::vector<long long>& parts) const;
    /// Position of x's component tuple in lexicographic (component-major)
    /// order; this is the index permutation that realizes Kronecker-product
    /// unitaries in the standard basis.
    int mixed_radix_index(long long x) const;
};
/// Throws std::domain_error for even n, std::invalid_argument for n < 3.
CrtBijection crt_index_bijection(long long n);

struct PSquareSubgroup {
    int p;
    SubgroupEmbedding embedding;  // Z/pZ x Z/pZ -> G
};

/// Finds a prime p and an embedded copy of Z/pZ x Z/pZ inside G, when G is
/// non-cyclic (smallest such p, generators (n_i/p)*e_i); empty when cyclic.
std::optional<PSquareSubgroup> find_p_square_subgroup(const FiniteAbelianGroup& g);

long long gcd_ll(long long a, long long b);
long long lcm_ll(long long a, long long b);
long long mod_inverse(long long a, long long m);  // throws if gcd(a,m) != 1
long long euler_phi(long long n);
std::vector<std::pair<long long, int>> factorize(long long n);

}  // namespace gaborlab

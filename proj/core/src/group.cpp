#include "gaborlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gaborlab {

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }
long long lcm_ll(long long a, long long b) { return std::lcm(a, b); }

long long mod_inverse(long long a, long long m) {
    long long r0 = m, r1 = ((a % m) + m) % m;
    long long t0 = 0, t1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        t0 -= q * t1;
        std::swap(t0, t1);
    }
    if (r0 != 1) throw std::invalid_argument("mod_inverse: argument not invertible");
    return ((t0 % m) + m) % m;
}

std::vector<std::pair<long long, int>> factorize(long long n) {
    std::vector<std::pair<long long, int>> out;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

long long euler_phi(long long n) {
    long long result = n;
    for (auto [p, e] : factorize(n)) result = result / p * (p - 1);
    return result;
}

struct FiniteAbelianGroup::Impl {
    std::vector<int> moduli;
    std::vector<int> strides;     // strides[i] = prod of moduli[j], j > i
    std::vector<int> pair_scale;  // exponent / moduli[i]
    int order = 1;
    int exponent = 1;
    std::vector<cplx> roots;  // exp(2*pi*i*t/exponent)
    // Index tables, built when the order is small enough to afford them.
    std::vector<int> add_table, neg_table, phase_table;
    bool has_tables = false;
};

namespace {
constexpr int kTableOrderLimit = 4096;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<int> moduli) {
    if (moduli.empty()) throw std::invalid_argument("group: empty modulus list");
    auto impl = std::make_shared<Impl>();
    impl->moduli = std::move(moduli);
    long long order = 1, exponent = 1;
    for (int m : impl->moduli) {
        if (m < 2) throw std::invalid_argument("group: every modulus must be >= 2");
        order *= m;
        exponent = std::lcm(exponent, (long long)m);
        if (order > (1LL << 30)) throw std::invalid_argument("group: order too large");
    }
    impl->order = (int)order;
    impl->exponent = (int)exponent;
    const int k = (int)impl->moduli.size();
    impl->strides.assign(k, 1);
    for (int i = k - 2; i >= 0; --i)
        impl->strides[i] = impl->strides[i + 1] * impl->moduli[i + 1];
    impl->pair_scale.resize(k);
    for (int i = 0; i < k; ++i) impl->pair_scale[i] = impl->exponent / impl->moduli[i];
    impl->roots.resize(impl->exponent);
    for (int t = 0; t < impl->exponent; ++t) {
        double a = 2.0 * std::numbers::pi * t / impl->exponent;
        impl->roots[t] = cplx(std::cos(a), std::sin(a));
    }
    if (impl->order <= kTableOrderLimit) {
        const int n = impl->order;
        impl->add_table.resize((size_t)n * n);
        impl->neg_table.resize(n);
        impl->phase_table.resize((size_t)n * n);
        std::vector<int> ca(k), cb(k);
        for (int g = 0; g < n; ++g) {
            int r = g;
            for (int i = 0; i < k; ++i) {
                ca[i] = r / impl->strides[i];
                r %= impl->strides[i];
            }
            int neg = 0;
            for (int i = 0; i < k; ++i)
                neg += ((impl->moduli[i] - ca[i]) % impl->moduli[i]) * impl->strides[i];
            impl->neg_table[g] = neg;
            for (int h = 0; h < n; ++h) {
                int rh = h;
                int sum = 0;
                long long phase = 0;
                for (int i = 0; i < k; ++i) {
                    cb[i] = rh / impl->strides[i];
                    rh %= impl->strides[i];
                    sum += ((ca[i] + cb[i]) % impl->moduli[i]) * impl->strides[i];
                    phase += (long long)ca[i] * cb[i] % impl->moduli[i] * impl->pair_scale[i];
                }
                impl->add_table[(size_t)g * n + h] = sum;
                impl->phase_table[(size_t)g * n + h] = (int)(phase % impl->exponent);
            }
        }
        impl->has_tables = true;
    }
    impl_ = std::move(impl);
}

const std::vector<int>& FiniteAbelianGroup::moduli() const { return impl_->moduli; }
int FiniteAbelianGroup::order() const { return impl_->order; }
int FiniteAbelianGroup::rank() const { return (int)impl_->moduli.size(); }
int FiniteAbelianGroup::exponent() const { return impl_->exponent; }
bool FiniteAbelianGroup::is_cyclic() const { return impl_->exponent == impl_->order; }

GroupElement FiniteAbelianGroup::element_at(int index) const {
    if (index < 0 || index >= impl_->order) throw std::out_of_range("element_at");
    GroupElement x;
    x.coords.resize(rank());
    for (int i = 0; i < rank(); ++i) {
        x.coords[i] = index / impl_->strides[i];
        index %= impl_->strides[i];
    }
    return x;
}

Character FiniteAbelianGroup::character_at(int index) const {
    return Character{element_at(index).coords};
}

int FiniteAbelianGroup::index_of(const GroupElement& x) const {
    if ((int)x.coords.size() != rank()) throw std::invalid_argument("index_of: shape mismatch");
    int idx = 0;
    for (int i = 0; i < rank(); ++i) {
        if (x.coords[i] < 0 || x.coords[i] >= impl_->moduli[i])
            throw std::invalid_argument("index_of: coordinate out of range");
        idx += x.coords[i] * impl_->strides[i];
    }
    return idx;
}

int FiniteAbelianGroup::index_of(const Character& xi) const {
    return index_of(GroupElement{xi.coords});
}

GroupElement FiniteAbelianGroup::zero() const {
    return GroupElement{std::vector<int>(rank(), 0)};
}

Character FiniteAbelianGroup::trivial_character() const {
    return Character{std::vector<int>(rank(), 0)};
}

GroupElement FiniteAbelianGroup::add(const GroupElement& a, const GroupElement& b) const {
    GroupElement out;
    out.coords.resize(rank());
    for (int i = 0; i < rank(); ++i)
        out.coords[i] = (a.coords[i] + b.coords[i]) % impl_->moduli[i];
    return out;
}

GroupElement FiniteAbelianGroup::sub(const GroupElement& a, const GroupElement& b) const {
    GroupElement out;
    out.coords.resize(rank());
    for (int i = 0; i < rank(); ++i) {
        int m = impl_->moduli[i];
        out.coords[i] = (a.coords[i] - b.coords[i] % m + m) % m;
    }
    return out;
}

GroupElement FiniteAbelianGroup::negate(const GroupElement& a) const {
    GroupElement out;
    out.coords.resize(rank());
    for (int i = 0; i < rank(); ++i)
        out.coords[i] = (impl_->moduli[i] - a.coords[i]) % impl_->moduli[i];
    return out;
}

GroupElement FiniteAbelianGroup::scale(long long s, const GroupElement& a) const {
    GroupElement out;
    out.coords.resize(rank());
    for (int i = 0; i < rank(); ++i) {
        int m = impl_->moduli[i];
        out.coords[i] = (int)((((s % m) * a.coords[i]) % m + m) % m);
    }
    return out;
}

GroupElement FiniteAbelianGroup::reduce(const std::vector<long long>& raw) const {
    if ((int)raw.size() != rank()) throw std::invalid_argument("reduce: shape mismatch");
    GroupElement out;
    out.coords.resize(rank());
    for (int i = 0; i < rank(); ++i) {
        int m = impl_->moduli[i];
        out.coords[i] = (int)((raw[i] % m + m) % m);
    }
    return out;
}

int FiniteAbelianGroup::phase_index(const Character& xi, const GroupElement& x) const {
    if ((int)xi.coords.size() != rank() || (int)x.coords.size() != rank())
        throw std::invalid_argument("pairing: shape mismatch");
    long long t = 0;
    for (int i = 0; i < rank(); ++i) {
        int m = impl_->moduli[i];
        t += (long long)(xi.coords[i] % m) * (x.coords[i] % m) % m * impl_->pair_scale[i];
    }
    return (int)(t % impl_->exponent);
}

cplx FiniteAbelianGroup::pairing(const Character& xi, const GroupElement& x) const {
    return impl_->roots[phase_index(xi, x)];
}

int FiniteAbelianGroup::add_index(int g, int h) const {
    if (impl_->has_tables) return impl_->add_table[(size_t)g * impl_->order + h];
    return index_of(add(element_at(g), element_at(h)));
}

int FiniteAbelianGroup::negate_index(int g) const {
    if (impl_->has_tables) return impl_->neg_table[g];
    return index_of(negate(element_at(g)));
}

int FiniteAbelianGroup::sub_index(int g, int h) const {
    return add_index(g, negate_index(h));
}

int FiniteAbelianGroup::phase_index_at(int chi, int g) const {
    if (impl_->has_tables) return impl_->phase_table[(size_t)chi * impl_->order + g];
    return phase_index(character_at(chi), element_at(g));
}

cplx FiniteAbelianGroup::pairing_at(int chi, int g) const {
    return impl_->roots[phase_index_at(chi, g)];
}

cplx FiniteAbelianGroup::root_of_unity(int t) const {
    return impl_->roots[((t % impl_->exponent) + impl_->exponent) % impl_->exponent];
}

bool FiniteAbelianGroup::operator==(const FiniteAbelianGroup& other) const {
    return impl_ == other.impl_ || impl_->moduli == other.impl_->moduli;
}

std::string FiniteAbelianGroup::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < impl_->moduli.size(); ++i) {
        if (i) os << 'x';
        os << impl_->moduli[i];
    }
    return os.str();
}

FiniteAbelianGroup make_group(const std::vector<int>& moduli) {
    return FiniteAbelianGroup(moduli);
}

FiniteAbelianGroup parse_group(const std::string& literal) {
    auto bad = [&] { return std::invalid_argument("parse_group: bad literal '" + literal + "'"); };
    std::vector<int> moduli;
    std::string token;
    for (size_t i = 0; i <= literal.size(); ++i) {
        if (i == literal.size() || literal[i] == 'x') {
            if (token.empty()) throw bad();
            size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(token, &pos);
            } catch (...) {
                throw bad();
            }
            if (pos != token.size()) throw bad();
            moduli.push_back(v);
            token.clear();
        } else {
            token.push_back(literal[i]);
        }
    }
    return FiniteAbelianGroup(moduli);
}

SubgroupEmbedding::SubgroupEmbedding(FiniteAbelianGroup host, FiniteAbelianGroup sub,
                                     std::vector<GroupElement> generator_images)
    : host_(std::move(host)), sub_(std::move(sub)), images_(std::move(generator_images)) {
    if ((int)images_.size() != sub_.rank())
        throw std::invalid_argument("embedding: one generator image per subgroup component required");
    // Well-defined homomorphism: the image of e_i must have order dividing the
    // i-th modulus of the subgroup.
    for (int i = 0; i < sub_.rank(); ++i) {
        GroupElement scaled = host_.scale(sub_.moduli()[i], images_[i]);
        if (!(scaled == host_.zero()))
            throw std::invalid_argument("embedding: generator image order does not divide subgroup modulus");
    }
    image_index_.resize(sub_.order());
    std::vector<char> seen(host_.order(), 0);
    for (int h = 0; h < sub_.order(); ++h) {
        GroupElement hs = sub_.element_at(h);
        GroupElement img = host_.zero();
        for (int i = 0; i < sub_.rank(); ++i)
            img = host_.add(img, host_.scale(hs.coords[i], images_[i]));
        int idx = host_.index_of(img);
        if (seen[idx]) throw std::invalid_argument("embedding: map is not injective");
        seen[idx] = 1;
        image_index_[h] = idx;
    }
}

GroupElement SubgroupEmbedding::map(const GroupElement& h) const {
    return host_.element_at(image_index_[sub_.index_of(h)]);
}

bool SubgroupEmbedding::is_identity() const {
    if (!(host_ == sub_)) return false;
    for (int h = 0; h < sub_.order(); ++h)
        if (image_index_[h] != h) return false;
    return true;
}

std::vector<Character> character_extensions(const Character& xi_sub,
                                            const SubgroupEmbedding& emb) {
    const auto& G = emb.host();
    const auto& H = emb.sub();
    if ((int)xi_sub.coords.size() != H.rank())
        throw std::invalid_argument("character_extensions: character shape mismatch");
    // xi extends xi_sub iff the phases agree on every subgroup generator.
    // Phases are exact rationals t/exponent; compare as fractions mod 1.
    std::vector<Character> out;
    const long long eg = G.exponent(), eh = H.exponent();
    for (int c = 0; c < G.order(); ++c) {
        Character xi = G.character_at(c);
        bool match = true;
        for (int i = 0; i < H.rank() && match; ++i) {
            GroupElement gen{std::vector<int>(H.rank(), 0)};
            gen.coords[i] = 1;
            long long th = H.phase_index(xi_sub, gen);
            long long tg = G.phase_index(xi, emb.generator_images()[i]);
            match = (tg * eh - th * eg) % (eg * eh) == 0;
        }
        if (match) out.push_back(std::move(xi));
    }
    if ((int)out.size() != G.order() / H.order())
        throw std::runtime_error("character_extensions: extension count mismatch");
    return out;
}

std::vector<long long> CrtBijection::to_components(long long x) const {
    std::vector<long long> parts(components.size());
    for (size_t i = 0; i < components.size(); ++i)
        parts[i] = ((x % components[i]) + components[i]) % components[i];
    return parts;
}

long long CrtBijection::from_components(const std::vector<long long>& parts) const {
    if (parts.size() != components.size())
        throw std::invalid_argument("crt: component count mismatch");
    long long x = 0;
    for (size_t i = 0; i < components.size(); ++i) {
        long long m = n / components[i];
        long long inv = mod_inverse(m % components[i], components[i]);
        x = (x + parts[i] % components[i] * m % n * inv) % n;
    }
    return ((x % n) + n) % n;
}

int CrtBijection::mixed_radix_index(long long x) const {
    long long idx = 0;
    for (size_t i = 0; i < components.size(); ++i)
        idx = idx * components[i] + ((x % components[i]) + components[i]) % components[i];
    return (int)idx;
}

CrtBijection crt_index_bijection(long long n) {
    if (n < 3) throw std::invalid_argument("crt_index_bijection: n must be >= 3");
    if (n % 2 == 0) throw std::domain_error("crt_index_bijection: even n unsupported");
    CrtBijection b;
    b.n = n;
    for (auto [p, e] : factorize(n)) {
        long long q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        b.components.push_back(q);
    }
    return b;
}

std::optional<PSquareSubgroup> find_p_square_subgroup(const FiniteAbelianGroup& g) {
    if (g.is_cyclic()) return std::nullopt;
    // Non-cyclic means some prime divides two distinct moduli; the smallest
    // such prime with the first such index pair gives the embedding, with
    // generators (n_i/p) * e_i.
    const auto& m = g.moduli();
    int best_p = 0, bi = -1, bj = -1;
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = i + 1; j < m.size(); ++j) {
            long long d = std::gcd((long long)m[i], (long long)m[j]);
            if (d == 1) continue;
            int p = (int)factorize(d).front().first;  // smallest prime factor
            if (best_p == 0 || p < best_p) {
                best_p = p;
                bi = (int)i;
                bj = (int)j;
            }
        }
    if (best_p == 0) return std::nullopt;  // cannot happen for non-cyclic
    GroupElement g1{std::vector<int>(g.rank(), 0)}, g2{std::vector<int>(g.rank(), 0)};
    g1.coords[bi] = m[bi] / best_p;
    g2.coords[bj] = m[bj] / best_p;
    FiniteAbelianGroup sub({best_p, best_p});
    return PSquareSubgroup{best_p, SubgroupEmbedding(g, sub, {g1, g2})};
}

}  // namespace gaborlab

#include "gaborlab/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "gaborlab/linalg.hpp"
#include "gaborlab/rng.hpp"

namespace gaborlab {

SupportPair support_pair(const Window& f, double tol) {
    int k = support_count(f, tol);
    if (k == 0) throw std::invalid_argument("support_pair: zero window");
    return {k, support_count(fourier(f), tol)};
}

SupportIdentityReport verify_support_identity(const Window& phi, const Window& f, double tol) {
    const auto& g = phi.group;
    if (!(g == f.group))
        throw std::invalid_argument("verify_support_identity: group mismatch");
    const int n = g.order();
    std::vector<cplx> table = stft(phi, f);
    SupportIdentityReport rep;
    rep.indeterminate = has_borderline_entries(table);
    double mx = 0;
    for (const cplx& z : table) mx = std::max(mx, std::abs(z));
    if (mx == 0) {
        rep.lhs = rep.rhs = 0;
        rep.equal = true;
        return rep;
    }
    const double cutoff = tol * mx;
    for (const cplx& z : table)
        if (std::abs(z) > cutoff) ++rep.lhs;
    // Right side recomputed from scratch per shift, same absolute cutoff.
    for (int x = 0; x < n; ++x) {
        std::vector<cplx> prod(n);
        for (int i = 0; i < n; ++i) prod[i] = phi.values[g.sub_index(i, x)] * f.values[i];
        Window w(g, std::move(prod));
        Window what = fourier(w);
        for (const cplx& z : what.values)
            if (std::abs(z) > cutoff) ++rep.rhs;
    }
    rep.equal = rep.lhs == rep.rhs;
    return rep;
}

bool FSet::contains(SupportPair p) const {
    for (const auto& e : entries)
        if (e.pair == p) return true;
    return false;
}

std::vector<SupportPair> FSet::pairs() const {
    std::vector<SupportPair> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.pair);
    return out;
}

namespace {

/// Canonical representative of a support mask under x -> u*x + t, u a unit.
unsigned canonical_mask(unsigned mask, int n) {
    unsigned best = ~0u;
    for (int u = 1; u < n; ++u) {
        if (std::gcd(u, n) != 1) continue;
        for (int t = 0; t < n; ++t) {
            unsigned m = 0;
            for (int x = 0; x < n; ++x)
                if (mask & (1u << x)) m |= 1u << ((u * x + t) % n);
            best = std::min(best, m);
        }
    }
    return best;
}

void record_pair(std::map<SupportPair, std::vector<cplx>>& found, const Window& f, double tol) {
    int k = support_count(f, tol);
    if (k == 0) return;
    SupportPair p{k, support_count(fourier(f), tol)};
    auto it = found.find(p);
    if (it == found.end()) found.emplace(p, f.values);
}

/// Random window supported exactly on the mask positions.
Window mask_window(const FiniteAbelianGroup& g, unsigned mask, GaussianStream& gs) {
    std::vector<cplx> v(g.order(), cplx{});
    for (int x = 0; x < g.order(); ++x)
        if (mask & (1u << x)) v[x] = gs.next_complex_normal();
    return Window(g, std::move(v));
}

}  // namespace

FSet enumerate_F(int n, FStrategy strategy, int draws_per_pattern, std::uint64_t seed,
                 double tol) {
    if (n < 2 || n > 20) throw std::invalid_argument("enumerate_F: 2 <= n <= 20 required");
    FiniteAbelianGroup g({n});
    std::map<SupportPair, std::vector<cplx>> found;
    const unsigned full = (1u << n) - 1;

    std::vector<unsigned> patterns;
    if (strategy == FStrategy::exhaustive_support_patterns) {
        for (unsigned mask = 1; mask <= full; ++mask)
            if (canonical_mask(mask, n) == mask) patterns.push_back(mask);
    } else {
        GaussianStream gs(GaussianStream::derive(seed, 0xABCD));
        for (int t = 0; t < 4 * n; ++t) patterns.push_back(1u + (unsigned)(gs.next_u64() % full));
    }

    // Character matrix for the kernel-targeted draws.
    CMat w(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) w(r, c) = g.pairing_at(r, c);

    std::uint64_t stream = 1;
    for (unsigned mask : patterns) {
        GaussianStream gs(GaussianStream::derive(seed, stream++));
        std::vector<int> support;
        for (int x = 0; x < n; ++x)
            if (mask & (1u << x)) support.push_back(x);
        const int k = (int)support.size();
        for (int t = 0; t < draws_per_pattern; ++t) record_pair(found, mask_window(g, mask, gs), tol);
        // Targeted draws: force n-l spectral zeros through the null space of
        // the corresponding character submatrix (nontrivial only when
        // n - l < k).
        for (int l = 1; l < n; ++l) {
            int zeros = n - l;
            if (zeros >= k) continue;
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<int> zero_rows(n);
                for (int i = 0; i < n; ++i) zero_rows[i] = i;
                for (int i = 0; i < zeros; ++i) {
                    int j = i + (int)(gs.next_u64() % (std::uint64_t)(n - i));
                    std::swap(zero_rows[i], zero_rows[j]);
                }
                zero_rows.resize(zeros);
                CMat sub(zeros, k);
                for (int c = 0; c < k; ++c)
                    for (int r = 0; r < zeros; ++r) sub(r, c) = w(zero_rows[r], support[c]);
                // random element of the (approximate) null space
                SvdResult svd = svd_jacobi(sub, false, true);
                if (svd.sigma.front() == 0) continue;
                std::vector<cplx> coeff(k, cplx{});
                bool has_null = false;
                for (int c = 0; c < k; ++c) {
                    if (svd.sigma[c] > 1e-10 * svd.sigma.front()) continue;
                    has_null = true;
                    cplx r = gs.next_complex_normal();
                    for (int i = 0; i < k; ++i) coeff[i] += r * svd.v(i, c);
                }
                if (!has_null) continue;
                std::vector<cplx> v(n, cplx{});
                for (int i = 0; i < k; ++i) v[support[i]] = coeff[i];
                record_pair(found, Window(g, std::move(v)), tol);
            }
        }
    }

    FSet out;
    out.n = n;
    for (auto& [pair, values] : found) out.entries.push_back({pair, std::move(values)});
    return out;
}

InclusionReport verify_inclusion_f_in_fphi(const Window& phi, const FSet& fset, double tol) {
    const auto& g = phi.group;
    const long long n = g.order();
    if (fset.n != n) throw std::invalid_argument("verify_inclusion: dimension mismatch");
    for (const cplx& z : phi.values)
        if (std::abs(z) == 0.0)
            throw std::invalid_argument("verify_inclusion: phi has a zero coordinate");
    InclusionReport rep;
    for (const auto& e : fset.entries) {
        std::vector<cplx> quotient(n);
        for (long long i = 0; i < n; ++i) quotient[i] = e.values[i] / phi.values[i];
        Window quo(g, std::move(quotient));
        InclusionCheck chk;
        chk.pair = e.pair;
        chk.expected = n * n - n + e.pair.l;
        chk.observed = support_count(stft(phi, quo), tol);
        chk.pass = chk.observed == chk.expected;
        if (!chk.pass) rep.all_pass = false;
        rep.checks.push_back(chk);
    }
    return rep;
}

std::vector<StftPair> sample_f_phi(const Window& phi, int trials, std::uint64_t seed,
                                   double tol) {
    const auto& g = phi.group;
    const long long n = g.order();
    std::vector<SupportPair> out;
    const unsigned full = (n >= 31) ? 0x7FFFFFFFu : ((1u << n) - 1);
    for (int t = 0; t < trials; ++t) {
        GaussianStream gs(GaussianStream::derive(seed, t));
        unsigned mask = 1u + (unsigned)(gs.next_u64() % full);
        Window f = mask_window(g, mask, gs);
        int k = support_count(f, tol);
        if (k == 0) continue;
        long long s = support_count(stft(phi, f), tol);
        out.push_back({k, (int)(s - n * n + n)});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace gaborlab

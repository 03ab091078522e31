#include "gaborlab/clifford.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "gaborlab/gabor.hpp"
#include "gaborlab/group.hpp"
#include "gaborlab/parallel.hpp"
#include "gaborlab/rng.hpp"

namespace gaborlab {

namespace {
long long mod_pos(long long x, long long m) { return ((x % m) + m) % m; }
}  // namespace

SL2ModN sl2_make(long long n, long long a, long long b, long long c, long long d) {
    if (n < 3 || n % 2 == 0) throw std::domain_error("sl2: odd modulus >= 3 required");
    SL2ModN f{n, mod_pos(a, n), mod_pos(b, n), mod_pos(c, n), mod_pos(d, n)};
    if (mod_pos(f.a * f.d - f.b * f.c, n) != 1)
        throw std::invalid_argument("sl2: determinant must be 1 mod n");
    return f;
}

SL2ModN sl2_identity(long long n) { return sl2_make(n, 1, 0, 0, 1); }

SL2ModN sl2_mul(const SL2ModN& x, const SL2ModN& y) {
    if (x.n != y.n) throw std::invalid_argument("sl2_mul: modulus mismatch");
    const long long n = x.n;
    return SL2ModN{n, mod_pos(x.a * y.a + x.b * y.c, n), mod_pos(x.a * y.b + x.b * y.d, n),
                   mod_pos(x.c * y.a + x.d * y.c, n), mod_pos(x.c * y.b + x.d * y.d, n)};
}

SL2ModN sl2_pow(const SL2ModN& x, long long e) {
    if (e < 0) throw std::invalid_argument("sl2_pow: nonnegative exponent required");
    SL2ModN r = sl2_identity(x.n), base = x;
    while (e > 0) {
        if (e & 1) r = sl2_mul(r, base);
        base = sl2_mul(base, base);
        e >>= 1;
    }
    return r;
}

long long sl2_order(const SL2ModN& f) {
    const SL2ModN id = sl2_identity(f.n);
    SL2ModN p = f;
    long long ord = 1;
    const long long cap = sl2_group_order(f.n) + 1;
    while (!(p == id)) {
        p = sl2_mul(p, f);
        ++ord;
        if (ord > cap) throw std::logic_error("sl2_order: order search exceeded group order");
    }
    return ord;
}

SL2ModN zauner_matrix(long long n) { return sl2_make(n, 0, -1, 1, -1); }

std::vector<SL2ModN> sl2_enumerate(long long n) {
    std::vector<SL2ModN> out;
    out.reserve((size_t)sl2_group_order(n));
    for (long long a = 0; a < n; ++a)
        for (long long b = 0; b < n; ++b)
            for (long long c = 0; c < n; ++c)
                for (long long d = 0; d < n; ++d)
                    if (mod_pos(a * d - b * c, n) == 1) out.push_back(SL2ModN{n, a, b, c, d});
    return out;
}

long long sl2_group_order(long long n) {
    long long r = n * n * n;
    for (auto [p, e] : factorize(n)) r = r / (p * p) * (p * p - 1);
    return r;
}

SL2ModN random_sl2(long long n, std::uint64_t seed) {
    GaussianStream gs(seed);
    while (true) {
        long long a = (long long)(gs.next_u64() % (std::uint64_t)n);
        long long b = (long long)(gs.next_u64() % (std::uint64_t)n);
        long long c = (long long)(gs.next_u64() % (std::uint64_t)n);
        long long d = (long long)(gs.next_u64() % (std::uint64_t)n);
        if (mod_pos(a * d - b * c, n) == 1) return SL2ModN{n, a, b, c, d};
    }
}

long long count_f_full(const SL2ModN& f) {
    const long long n = f.n;
    const long long ord = sl2_order(f);
    // x is F-full iff its orbit has full length ord, iff no F^{ord/p} fixes x
    // for a prime p | ord.
    std::vector<SL2ModN> critical;
    for (auto [p, e] : factorize(ord)) critical.push_back(sl2_pow(f, ord / p));
    long long count = 0;
    for (long long x = 0; x < n; ++x)
        for (long long y = 0; y < n; ++y) {
            bool full = true;
            for (const auto& g : critical) {
                long long fx = mod_pos(g.a * x + g.b * y, n);
                long long fy = mod_pos(g.c * x + g.d * y, n);
                if (fx == x && fy == y) {
                    full = false;
                    break;
                }
            }
            if (full) ++count;
        }
    return count;
}

namespace {

/// Powers of tau = -e^{i pi / n} (a primitive 2n-th root for odd n).
std::vector<cplx> tau_table(long long n) {
    const long long m = 2 * n;
    std::vector<cplx> t(m);
    for (long long k = 0; k < m; ++k) {
        double a = std::numbers::pi * (double)((n + 1) * k % m) / (double)n;
        t[k] = cplx(std::cos(a), std::sin(a));
    }
    return t;
}

CMat u_prime_matrix(const SL2ModN& f) {
    const long long n = f.n;
    const long long binv = mod_inverse(f.b, n);
    const long long m = 2 * n;
    auto tau = tau_table(n);
    CMat u((int)n, (int)n);
    const double scale = 1.0 / std::sqrt((double)n);
    for (long long s = 0; s < n; ++s) {
        const long long as2 = f.a * s % m * s % m;
        for (long long r = 0; r < n; ++r) {
            long long e = (as2 + m - 2 * r % m * s % m % m + f.d * r % m * r % m) % m;
            e = e * binv % m;
            u((int)r, (int)s) = tau[e] * scale;
        }
    }
    return u;
}

}  // namespace

CliffordUnitary u_prime(const SL2ModN& f) {
    if (std::gcd(f.b, f.n) != 1)
        throw std::invalid_argument("u_prime: upper-right entry must be invertible mod n");
    return CliffordUnitary{f, u_prime_matrix(f), "prime"};
}

CliffordUnitary u_nonprime(const SL2ModN& f) {
    const long long n = f.n;
    if (std::gcd(f.b, n) == 1)
        throw std::invalid_argument("u_nonprime: matrix is prime, use u_prime");
    if (std::gcd(f.d, n) != 1)
        throw std::invalid_argument("u_nonprime: lower-right entry must be invertible mod n");
    // F = F1 F2 with F1 = (0,-1;1,0) and F2 = (c,d;-a,-b); both are prime.
    SL2ModN f1 = sl2_make(n, 0, -1, 1, 0);
    SL2ModN f2 = sl2_make(n, f.c, f.d, -f.a, -f.b);
    CMat u = matmul(u_prime_matrix(f1), u_prime_matrix(f2));
    return CliffordUnitary{f, std::move(u), "product"};
}

namespace {

CliffordUnitary u_prime_power(const SL2ModN& f) {
    if (std::gcd(f.b, f.n) == 1) return u_prime(f);
    return u_nonprime(f);
}

}  // namespace

CliffordUnitary u_general(const SL2ModN& f) {
    const long long n = f.n;
    auto factors = factorize(n);
    if (factors.size() == 1) {
        CliffordUnitary cu = u_prime_power(f);
        cu.route = "crt";
        return cu;
    }
    CrtBijection crt = crt_index_bijection(n);
    // Component matrices conjugated by diag(1, u_i), u_i = (n/n_i)^{-1} mod
    // n_i: under the CRT bijection the modulation M over Z/nZ reduces to
    // M_i^{u_i}, so the plain entrywise reduction does not intertwine the
    // standard displacements but this twist does.
    CMat w(1, 1);
    w(0, 0) = 1.0;
    for (long long ni : crt.components) {
        long long ui = mod_inverse((n / ni) % ni, ni);
        long long uinv = mod_inverse(ui, ni);
        SL2ModN gi = sl2_make(ni, f.a % ni, f.b % ni * uinv % ni, f.c % ni * ui % ni, f.d % ni);
        w = kron(w, u_prime_power(gi).u);
    }
    // Back to the standard basis through the CRT index permutation.
    CMat u((int)n, (int)n);
    std::vector<int> perm((size_t)n);
    for (long long g = 0; g < n; ++g) perm[(size_t)g] = crt.mixed_radix_index(g);
    for (long long col = 0; col < n; ++col)
        for (long long row = 0; row < n; ++row)
            u((int)row, (int)col) = w(perm[(size_t)row], perm[(size_t)col]);
    return CliffordUnitary{f, std::move(u), "crt"};
}

CliffordUnitary clifford_unitary(const SL2ModN& f) {
    if (std::gcd(f.b, f.n) == 1) return u_prime(f);
    if (std::gcd(f.d, f.n) == 1) return u_nonprime(f);
    return u_general(f);
}

double covariance_residual(const CliffordUnitary& cu, long long l1, long long l2) {
    const long long n = cu.source.n;
    CMat d = displacement(n, l1, l2);
    CMat lhs = matmul(matmul(cu.u, d), adjoint(cu.u));
    const auto& f = cu.source;
    CMat rhs = displacement(n, f.a * l1 + f.b * l2, f.c * l1 + f.d * l2);
    return projective_distance(lhs, rhs);
}

double max_covariance_residual(const CliffordUnitary& cu) {
    const long long n = cu.source.n;
    double worst = 0;
    for (long long l1 = 0; l1 < n; ++l1)
        for (long long l2 = 0; l2 < n; ++l2)
            worst = std::max(worst, covariance_residual(cu, l1, l2));
    return worst;
}

// --- quadratic forms and Gauss sums ------------------------------------------

QuadraticForm::QuadraticForm(std::vector<int> moduli, std::vector<long long> numerators,
                             long long denominator)
    : moduli_(std::move(moduli)), num_(std::move(numerators)), den_(denominator) {
    if (den_ < 1) throw std::invalid_argument("quadratic form: positive denominator required");
    order_ = 1;
    for (int m : moduli_) {
        if (m < 2) throw std::invalid_argument("quadratic form: bad modulus");
        order_ *= m;
    }
    if ((long long)num_.size() != order_)
        throw std::invalid_argument("quadratic form: one numerator per group element required");
    for (auto& v : num_) v = mod_pos(v, den_);
    strides_.assign(moduli_.size(), 1);
    for (int i = (int)moduli_.size() - 2; i >= 0; --i)
        strides_[i] = strides_[i + 1] * moduli_[i + 1];

    // b(x,y) = q(x+y) - q(x) - q(y) must equal its bilinear extension from
    // the generator values: verified exactly over all pairs.
    auto b = [&](long long i, long long j) {
        return mod_pos(num_[add_index(i, j)] - num_[i] - num_[j], den_);
    };
    const int k = (int)moduli_.size();
    std::vector<long long> gen(k);
    for (int i = 0; i < k; ++i) gen[i] = strides_[i];  // index of e_i
    if (order_ * order_ <= 4'000'000) {
        for (long long x = 0; x < order_; ++x) {
            // decompose x and build the bilinear prediction per y generator
            for (long long y = 0; y < order_; ++y) {
                // bilinearity in the second argument through generators
                long long pred = 0;
                long long yy = y;
                for (int i = 0; i < k; ++i) {
                    long long yi = yy / strides_[i];
                    yy %= strides_[i];
                    pred = mod_pos(pred + yi * b(x, gen[i]), den_);
                }
                if (pred != b(x, y))
                    throw std::invalid_argument("quadratic form: b^q is not bilinear");
            }
        }
    } else {
        // spot verification on a deterministic sample
        for (long long x = 0; x < order_; x += 7)
            for (long long y = 0; y < order_; y += 11) {
                long long pred = 0;
                long long yy = y;
                for (int i = 0; i < k; ++i) {
                    long long yi = yy / strides_[i];
                    yy %= strides_[i];
                    pred = mod_pos(pred + yi * b(x, gen[i]), den_);
                }
                if (pred != b(x, y))
                    throw std::invalid_argument("quadratic form: b^q is not bilinear");
            }
    }
}

long long QuadraticForm::add_index(long long i, long long j) const {
    long long out = 0;
    for (size_t t = 0; t < moduli_.size(); ++t) {
        long long xi = i / strides_[t] % moduli_[t];
        long long yj = j / strides_[t] % moduli_[t];
        out += (xi + yj) % moduli_[t] * strides_[t];
    }
    return out;
}

cplx QuadraticForm::gauss_sum() const {
    cplx s = 0;
    for (long long x = 0; x < order_; ++x) {
        double a = 2.0 * std::numbers::pi * (double)num_[x] / (double)den_;
        s += cplx(std::cos(a), std::sin(a));
    }
    return s / std::sqrt((double)order_);
}

QuadraticForm::RadicalPrediction QuadraticForm::radical_prediction() const {
    auto b = [&](long long i, long long j) {
        return mod_pos(num_[add_index(i, j)] - num_[i] - num_[j], den_);
    };
    const int k = (int)moduli_.size();
    RadicalPrediction out;
    // B = {x : b(x, e_i) = 0 for all generators}; bilinearity makes the
    // generator condition sufficient.
    std::vector<long long> radical;
    for (long long x = 0; x < order_; ++x) {
        bool in_radical = true;
        for (int i = 0; i < k && in_radical; ++i)
            if (b(x, strides_[i]) != 0) in_radical = false;
        if (in_radical) radical.push_back(x);
    }
    out.radical_size = (long long)radical.size();
    out.q_vanishes_on_radical = true;
    for (long long x : radical)
        if (num_[x] != 0) out.q_vanishes_on_radical = false;
    out.predicted_abs = out.q_vanishes_on_radical ? std::sqrt((double)out.radical_size) : 0.0;
    return out;
}

QuadraticForm trace_form_prime(const SL2ModN& f) {
    const long long n = f.n;
    if (std::gcd(f.b, n) != 1) throw std::invalid_argument("trace_form_prime: b not invertible");
    const long long m = 2 * n;
    const long long binv = mod_inverse(f.b, n);
    const long long coeff = mod_pos(binv * mod_pos(f.a + f.d - 2, m) % m * (n + 1), m);
    std::vector<long long> num(n);
    for (long long r = 0; r < n; ++r) num[r] = coeff * (r * r % m) % m;
    return QuadraticForm({(int)n}, std::move(num), m);
}

QuadraticForm trace_form_product(const SL2ModN& f) {
    const long long n = f.n;
    if (std::gcd(f.d, n) != 1)
        throw std::invalid_argument("trace_form_product: d not invertible");
    const long long m = 2 * n;
    const long long dinv = mod_inverse(f.d, n);
    // q(u,v) = (n+1)/(2n) * (c d^-1 u^2 + 2(1 - d^-1) u v - b d^-1 v^2);
    // numerator over denominator 2n is (n+1) * quad, well-defined because
    // n+1 is even.
    std::vector<long long> num(n * n);
    const long long cu = mod_pos(f.c * dinv, n);
    const long long cv = mod_pos(-f.b * dinv, n);
    const long long cuv = mod_pos(1 - dinv, n);
    for (long long u = 0; u < n; ++u)
        for (long long v = 0; v < n; ++v) {
            long long quad = mod_pos(cu * (u * u % m) + cv * (v * v % m) + 2 * cuv * (u * v % m), m);
            num[u * n + v] = quad * (n + 1) % m;
        }
    return QuadraticForm({(int)n, (int)n}, std::move(num), m);
}

double predicted_abs_trace(const SL2ModN& f) {
    const long long n = f.n;
    if (std::gcd(f.b, n) == 1) return trace_form_prime(f).radical_prediction().predicted_abs;
    if (std::gcd(f.d, n) == 1) return trace_form_product(f).radical_prediction().predicted_abs;
    // CRT: |Tr U_F| is the product of the component values, computed on the
    // same twisted components the construction uses.
    CrtBijection crt = crt_index_bijection(n);
    double prod = 1;
    for (long long ni : crt.components) {
        long long ui = mod_inverse((n / ni) % ni, ni);
        long long uinv = mod_inverse(ui, ni);
        SL2ModN gi = sl2_make(ni, f.a % ni, f.b % ni * uinv % ni, f.c % ni * ui % ni, f.d % ni);
        prod *= predicted_abs_trace(gi);
    }
    return prod;
}

TraceScanReport trace_abs_scan(long long n, int workers, long long max_matrices) {
    const auto t0 = std::chrono::steady_clock::now();
    auto all = sl2_enumerate(n);
    TraceScanReport rep;
    rep.n = n;
    rep.matrices = (long long)all.size();
    rep.matrices_scanned = rep.matrices;
    if (max_matrices > 0 && rep.matrices > max_matrices) {
        rep.matrices_scanned = max_matrices;
        all.resize((size_t)max_matrices);
    }
    rep.coverage = (double)rep.matrices_scanned / (double)rep.matrices;
    const int w = resolve_workers(workers);
    std::vector<double> min_tr((size_t)w, 1e300), max_mis((size_t)w, 0.0);
    run_chunked(all.size(), w, [&](int wid, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i) {
            CliffordUnitary cu = clifford_unitary(all[i]);
            double tr = std::abs(trace(cu.u));
            double pred = predicted_abs_trace(all[i]);
            min_tr[wid] = std::min(min_tr[wid], tr);
            max_mis[wid] = std::max(max_mis[wid], std::abs(tr - pred));
        }
    });
    rep.min_abs_trace = *std::min_element(min_tr.begin(), min_tr.end());
    rep.max_prediction_mismatch = *std::max_element(max_mis.begin(), max_mis.end());
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// --- eigendecomposition -------------------------------------------------------

EigenDecomposition eigenvectors_by_projector(const CliffordUnitary& cu) {
    const int n = (int)cu.source.n;
    const CMat& u = cu.u;
    // Projective order: smallest m >= 1 with U^m a scalar.
    const long long budget = 4LL * n * n;
    CMat p = u;
    int m = 0;
    cplx scalar = 0;
    for (long long k = 1; k <= budget; ++k) {
        cplx diag = p(0, 0);
        CMat scaled = CMat::identity(n);
        for (auto& z : scaled.a) z *= diag;
        double dist = 0;
        for (size_t i = 0; i < p.a.size(); ++i) dist += std::norm(p.a[i] - scaled.a[i]);
        if (std::sqrt(dist) < 1e-9 * std::sqrt((double)n) && std::abs(std::abs(diag) - 1.0) < 1e-9) {
            m = (int)k;
            scalar = diag;
            break;
        }
        p = matmul(p, u);
    }
    if (m == 0)
        throw std::runtime_error("eigenvectors_by_projector: projective order not found in budget");

    EigenDecomposition out;
    out.projective_order = m;
    out.scalar = scalar;
    // Normalize so Utilde^m = I, then project onto each m-th root of unity.
    cplx zeta = std::polar(1.0, std::arg(scalar) / m);
    CMat ut = u;
    for (auto& z : ut.a) z /= zeta;
    std::vector<CMat> powers;
    powers.push_back(CMat::identity(n));
    for (int k = 1; k < m; ++k) powers.push_back(matmul(powers.back(), ut));
    int total_rank = 0;
    for (int j = 0; j < m; ++j) {
        cplx mu = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
        CMat proj(n, n);
        for (int k = 0; k < m; ++k) {
            cplx w = std::polar(1.0, -2.0 * std::numbers::pi * j * k / m);
            for (size_t i = 0; i < proj.a.size(); ++i) proj.a[i] += w * powers[k].a[i];
        }
        for (auto& z : proj.a) z /= (double)m;
        // Orthonormal basis of the projector range via SVD.
        SvdResult svd = svd_jacobi(proj, true, false);
        int rank = 0;
        for (double s : svd.sigma)
            if (s > 0.5) ++rank;
        if (rank == 0) continue;
        Eigenspace space;
        space.eigenvalue = mu * zeta;
        space.basis = CMat(n, rank);
        for (int c = 0; c < rank; ++c) std::copy_n(svd.u.col(c), n, space.basis.col(c));
        total_rank += rank;
        // Residual check ||U v - lambda v||.
        for (int c = 0; c < rank; ++c) {
            std::vector<cplx> uv(n, cplx{});
            for (int cc = 0; cc < n; ++cc) {
                const cplx vc = space.basis(cc, c);
                const cplx* ucol = u.col(cc);
                for (int r = 0; r < n; ++r) uv[r] += ucol[r] * vc;
            }
            double res = 0;
            for (int r = 0; r < n; ++r) res += std::norm(uv[r] - space.eigenvalue * space.basis(r, c));
            out.max_residual = std::max(out.max_residual, std::sqrt(res));
        }
        out.spaces.push_back(std::move(space));
    }
    if (total_rank != n)
        throw std::runtime_error("eigenvectors_by_projector: eigenspace ranks do not sum to n");
    return out;
}

std::vector<std::vector<int>> sl2_orbits_on_phase_space(const SL2ModN& f) {
    const long long n = f.n;
    std::vector<int> seen((size_t)n * n, 0);
    std::vector<std::vector<int>> orbits;
    for (long long l1 = 0; l1 < n; ++l1)
        for (long long l2 = 0; l2 < n; ++l2) {
            int start = (int)(l1 * n + l2);
            if (seen[start]) continue;
            std::vector<int> orbit;
            long long x = l1, y = l2;
            do {
                orbit.push_back((int)(x * n + y));
                seen[(size_t)(x * n + y)] = 1;
                long long nx = mod_pos(f.a * x + f.b * y, n);
                long long ny = mod_pos(f.c * x + f.d * y, n);
                x = nx;
                y = ny;
            } while (x * n + y != start);
            std::sort(orbit.begin(), orbit.end());
            orbits.push_back(std::move(orbit));
        }
    std::sort(orbits.begin(), orbits.end());
    return orbits;
}

EigenDeficiencyReport eigen_deficiency_check(const SL2ModN& f, const EigenDeficiencyOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const long long n = f.n;
    EigenDeficiencyReport rep;
    rep.f = f;
    rep.strategy = opt.strategy;
    rep.ord_f = sl2_order(f);
    rep.d = std::gcd(rep.ord_f, n);
    if (rep.d <= 1)
        throw std::domain_error("eigen_deficiency_check: gcd(ord(F), n) must exceed 1");
    rep.f_reduced = sl2_pow(f, rep.ord_f / rep.d);
    CliffordUnitary cu = clifford_unitary(rep.f_reduced);
    EigenDecomposition eig = eigenvectors_by_projector(cu);

    std::vector<std::vector<int>> orbits;
    if (opt.strategy == SearchStrategy::orbit_guided)
        orbits = sl2_orbits_on_phase_space(rep.f_reduced);

    rep.all_found = true;
    for (size_t si = 0; si < eig.spaces.size(); ++si) {
        const Eigenspace& space = eig.spaces[si];
        for (int vi = 0; vi < space.basis.cols; ++vi) {
            // Columns D_lambda v over all lambda (index l1 * n + l2).
            CMat cols((int)n, (int)(n * n));
            std::vector<cplx> v((size_t)n);
            for (int r = 0; r < n; ++r) v[(size_t)r] = space.basis(r, vi);
            for (long long l1 = 0; l1 < n; ++l1)
                for (long long l2 = 0; l2 < n; ++l2) {
                    CMat d = displacement(n, l1, l2);
                    cplx* dst = cols.col((int)(l1 * n + l2));
                    for (int r = 0; r < n; ++r) {
                        cplx acc = 0;
                        for (int c = 0; c < n; ++c) acc += d(r, c) * v[(size_t)c];
                        dst[r] = acc;
                    }
                }
            SubsetSearchOptions sopt;
            sopt.rank_ratio_tol = opt.rank_ratio_tol;
            sopt.det_rel_tol = opt.det_rel_tol;
            sopt.budget = opt.budget;
            sopt.workers = opt.workers;
            sopt.seed = GaussianStream::derive(opt.seed, (si << 8) | (unsigned)vi);
            sopt.trials = opt.randomized_trials;
            sopt.orbits = orbits;
            SubsetSearchResult res =
                rank_deficient_subset_search(cols, (int)n, opt.strategy, sopt);
            EigenVectorFinding finding;
            finding.space_index = (int)si;
            finding.vector_index = vi;
            finding.eigenvalue = space.eigenvalue;
            finding.dependent_subset = res.witness;
            finding.subsets_checked = res.subsets_checked;
            if (!res.witness) rep.all_found = false;
            rep.findings.push_back(std::move(finding));
        }
    }
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace gaborlab

#include "gaborlab/exact.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gaborlab::exact {

namespace {

using poly = std::vector<long long>;

void poly_trim(poly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

/// Exact division of integer polynomials; remainder must vanish.
poly poly_div_exact(poly num, const poly& den) {
    poly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 1, 0);
    const long long lead = den.back();
    for (int i = (int)num.size() - 1; i >= (int)den.size() - 1; --i) {
        long long c = num[i];
        if (c == 0) continue;
        if (c % lead != 0) throw std::logic_error("cyclotomic division not exact");
        long long f = c / lead;
        q[i - den.size() + 1] = f;
        for (size_t j = 0; j < den.size(); ++j) num[i - den.size() + 1 + j] -= f * den[j];
    }
    for (long long c : num)
        if (c != 0) throw std::logic_error("cyclotomic division left a remainder");
    poly_trim(q);
    return q;
}

constexpr long long kCoeffLimit = (1LL << 62);

long long narrow(__int128 v) {
    if (v > kCoeffLimit || v < -kCoeffLimit)
        throw std::overflow_error("exact arithmetic overflow: coefficients exceed int64 range");
    return (long long)v;
}

}  // namespace

std::vector<long long> cyclotomic_polynomial(int m) {
    if (m < 1) throw std::invalid_argument("cyclotomic_polynomial: order must be >= 1");
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d
    poly num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (int d = 1; d < m; ++d)
        if (m % d == 0) num = poly_div_exact(std::move(num), cyclotomic_polynomial(d));
    return num;
}

CycRing::CycRing(int order) : order_(order) {
    if (order < 1) throw std::invalid_argument("CycRing: order must be >= 1");
    phi_ = cyclotomic_polynomial(order);
    degree_ = (int)phi_.size() - 1;
    const int want = order_ + 2 * degree_ + 1;
    xpow_.resize(want);
    xpow_[0] = poly(degree_, 0);
    if (degree_ > 0) xpow_[0][0] = 1;
    for (int e = 1; e < want; ++e) {
        poly prev = xpow_[e - 1];
        poly cur(degree_, 0);
        // multiply by x, then reduce the degree-d overflow term
        long long top = degree_ > 0 ? prev[degree_ - 1] : 0;
        for (int i = degree_ - 1; i >= 1; --i) cur[i] = prev[i - 1];
        if (degree_ > 0) cur[0] = 0;
        if (top != 0)
            for (int i = 0; i < degree_; ++i) cur[i] -= top * phi_[i];
        xpow_[e] = std::move(cur);
    }
}

std::shared_ptr<const CycRing> CycRing::create(int order) {
    return std::shared_ptr<const CycRing>(new CycRing(order));
}

CycInt::CycInt(std::shared_ptr<const CycRing> ring, std::vector<long long> c)
    : ring_(std::move(ring)), c_(std::move(c)) {}

CycInt CycRing::zero() const {
    return CycInt(shared_from_this(), std::vector<long long>(degree_, 0));
}

CycInt CycRing::one() const { return from_int(1); }

CycInt CycRing::from_int(long long v) const {
    std::vector<long long> c(degree_, 0);
    c[0] = v;
    return CycInt(shared_from_this(), std::move(c));
}

CycInt CycRing::root_power(long long k) const {
    k = ((k % order_) + order_) % order_;
    return CycInt(shared_from_this(), xpow_[(size_t)k]);
}

CycInt CycRing::gaussian(long long re, long long im) const {
    if (order_ % 4 != 0)
        throw std::domain_error("CycRing::gaussian: ring order must be divisible by 4");
    CycInt out = from_int(re);
    out += root_power(order_ / 4).scaled(im);
    return out;
}

bool CycInt::is_zero() const {
    for (long long v : c_)
        if (v != 0) return false;
    return true;
}

bool CycInt::operator==(const CycInt& o) const { return c_ == o.c_; }

CycInt CycInt::operator+(const CycInt& o) const {
    CycInt r = *this;
    r += o;
    return r;
}

CycInt& CycInt::operator+=(const CycInt& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] = narrow((__int128)c_[i] + o.c_[i]);
    return *this;
}

CycInt CycInt::operator-(const CycInt& o) const {
    CycInt r = *this;
    r -= o;
    return r;
}

CycInt& CycInt::operator-=(const CycInt& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] = narrow((__int128)c_[i] - o.c_[i]);
    return *this;
}

CycInt CycInt::operator-() const {
    CycInt r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

CycInt CycInt::operator*(const CycInt& o) const {
    const int d = (int)c_.size();
    std::vector<__int128> conv(2 * d - 1, 0);
    for (int i = 0; i < d; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < d; ++j) conv[i + j] += (__int128)c_[i] * o.c_[j];
    }
    std::vector<__int128> red(d, 0);
    for (int i = 0; i < d; ++i) red[i] = conv[i];
    const auto& xp = ring_->xpow_;
    for (int e = d; e < 2 * d - 1; ++e) {
        if (conv[e] == 0) continue;
        const auto& basis = xp[e];
        for (int i = 0; i < d; ++i) red[i] += conv[e] * basis[i];
    }
    std::vector<long long> out(d);
    for (int i = 0; i < d; ++i) out[i] = narrow(red[i]);
    return CycInt(ring_, std::move(out));
}

CycInt CycInt::conj() const {
    const int d = (int)c_.size();
    const int m = ring_->order_;
    std::vector<__int128> red(d, 0);
    for (int k = 0; k < d; ++k) {
        if (c_[k] == 0) continue;
        const auto& basis = ring_->xpow_[(m - k) % m];
        for (int i = 0; i < d; ++i) red[i] += (__int128)c_[k] * basis[i];
    }
    std::vector<long long> out(d);
    for (int i = 0; i < d; ++i) out[i] = narrow(red[i]);
    return CycInt(ring_, std::move(out));
}

CycInt CycInt::scaled(long long k) const {
    CycInt r = *this;
    for (auto& v : r.c_) v = narrow((__int128)v * k);
    return r;
}

std::string CycInt::to_string() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ",";
        os << c_[i];
    }
    os << "]";
    return os.str();
}

namespace {
CycInt det_rec(const std::vector<CycInt>& m, int n, int col, unsigned row_mask) {
    if (col == n) return m.front().ring()->one();
    bool first = true;
    CycInt acc;
    int sign = 1;
    for (int r = 0; r < n; ++r) {
        if (!(row_mask & (1u << r))) continue;
        const CycInt& entry = m[(size_t)col * n + r];
        if (!entry.is_zero()) {
            CycInt sub = det_rec(m, n, col + 1, row_mask & ~(1u << r));
            CycInt term = entry * sub;
            if (sign < 0) term = -term;
            if (first) {
                acc = term;
                first = false;
            } else {
                acc += term;
            }
        }
        sign = -sign;
    }
    if (first) return m.front().ring()->zero();
    return acc;
}
}  // namespace

CycInt det_laplace(const std::vector<CycInt>& colmajor, int n) {
    if (n < 1 || (int)colmajor.size() != n * n)
        throw std::invalid_argument("det_laplace: bad dimensions");
    if (n > 6) throw std::domain_error("det_laplace: exact determinants capped at n = 6");
    return det_rec(colmajor, n, 0, (1u << n) - 1);
}

int exact_order_for(const FiniteAbelianGroup& g) {
    return (int)lcm_ll(4, 2LL * g.exponent());
}

bool is_gaussian_integer_window(const Window& f) {
    for (const cplx& z : f.values) {
        if (std::abs(z.real() - std::llround(z.real())) > 1e-12) return false;
        if (std::abs(z.imag() - std::llround(z.imag())) > 1e-12) return false;
    }
    return true;
}

namespace {
CycInt to_exact(const std::shared_ptr<const CycRing>& ring, const cplx& z) {
    return ring->gaussian(std::llround(z.real()), std::llround(z.imag()));
}
}  // namespace

std::vector<CycInt> exact_tf_column(const std::shared_ptr<const CycRing>& ring, const Window& f,
                                    int shift_index, int freq_index) {
    const auto& g = f.group;
    const int scale = ring->order() / g.exponent();
    std::vector<CycInt> out;
    out.reserve(g.order());
    for (int i = 0; i < g.order(); ++i) {
        CycInt val = to_exact(ring, f.values[g.sub_index(i, shift_index)]);
        out.push_back(ring->root_power((long long)g.phase_index_at(freq_index, i) * scale) * val);
    }
    return out;
}

CycInt exact_shift_bracket(const std::shared_ptr<const CycRing>& ring, const Window& f,
                           const Window& w, int shift_index, int freq_index) {
    const auto& g = f.group;
    if (!(g == w.group)) throw std::invalid_argument("exact_shift_bracket: group mismatch");
    const int scale = ring->order() / g.exponent();
    CycInt acc = ring->zero();
    for (int i = 0; i < g.order(); ++i) {
        CycInt term = to_exact(ring, f.values[g.sub_index(i, shift_index)]);
        term = term * to_exact(ring, w.values[i]).conj();
        acc += ring->root_power((long long)g.phase_index_at(freq_index, i) * scale) * term;
    }
    return acc;
}

}  // namespace gaborlab::exact

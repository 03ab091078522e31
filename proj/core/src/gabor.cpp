#include "gaborlab/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace gaborlab {

Window::Window(FiniteAbelianGroup g, std::vector<cplx> v)
    : group(std::move(g)), values(std::move(v)) {
    if ((int)values.size() != group.order())
        throw std::invalid_argument("window: value count must equal group order");
}

Window delta_window(const FiniteAbelianGroup& g, int at) {
    std::vector<cplx> v(g.order());
    v.at(at) = 1.0;
    return Window(g, std::move(v));
}

Window constant_window(const FiniteAbelianGroup& g, cplx value) {
    return Window(g, std::vector<cplx>(g.order(), value));
}

std::vector<TimeFrequencyPoint> all_tf_points(const FiniteAbelianGroup& g) {
    std::vector<TimeFrequencyPoint> pts;
    pts.reserve((size_t)g.order() * g.order());
    for (int x = 0; x < g.order(); ++x)
        for (int c = 0; c < g.order(); ++c)
            pts.push_back({g.element_at(x), g.character_at(c)});
    return pts;
}

int tf_point_index(const FiniteAbelianGroup& g, const TimeFrequencyPoint& p) {
    return g.index_of(p.shift) * g.order() + g.index_of(p.freq);
}

TimeFrequencyPoint tf_point_at(const FiniteAbelianGroup& g, int index) {
    return {g.element_at(index / g.order()), g.character_at(index % g.order())};
}

Window translate(const Window& f, const GroupElement& x) {
    const auto& g = f.group;
    const int xi = g.index_of(x);
    std::vector<cplx> out(g.order());
    for (int i = 0; i < g.order(); ++i) out[i] = f.values[g.sub_index(i, xi)];
    return Window(g, std::move(out));
}

Window modulate(const Window& f, const Character& xi) {
    const auto& g = f.group;
    const int ci = g.index_of(xi);
    std::vector<cplx> out(g.order());
    for (int i = 0; i < g.order(); ++i) out[i] = g.pairing_at(ci, i) * f.values[i];
    return Window(g, std::move(out));
}

Window tf_shift(const Window& f, const TimeFrequencyPoint& lambda) {
    return modulate(translate(f, lambda.shift), lambda.freq);
}

void tf_shift_column(const Window& f, int shift_index, int freq_index, cplx* out) {
    const auto& g = f.group;
    for (int i = 0; i < g.order(); ++i)
        out[i] = g.pairing_at(freq_index, i) * f.values[g.sub_index(i, shift_index)];
}

GaborSystem::GaborSystem(Window w, std::vector<TimeFrequencyPoint> pts)
    : window(std::move(w)), points(std::move(pts)) {
    const int n = window.group.order();
    if ((int)points.size() > n * n)
        throw std::invalid_argument("gabor system: more points than |G x G^|");
    std::set<int> seen;
    for (const auto& p : points)
        if (!seen.insert(tf_point_index(window.group, p)).second)
            throw std::invalid_argument("gabor system: duplicate time-frequency points");
}

CMat gabor_matrix(const Window& f, std::span<const TimeFrequencyPoint> points) {
    const auto& g = f.group;
    std::set<int> seen;
    for (const auto& p : points)
        if (!seen.insert(tf_point_index(g, p)).second)
            throw std::invalid_argument("gabor_matrix: duplicate time-frequency points");
    CMat m(g.order(), (int)points.size());
    for (size_t j = 0; j < points.size(); ++j)
        tf_shift_column(f, g.index_of(points[j].shift), g.index_of(points[j].freq),
                        m.col((int)j));
    return m;
}

Window fourier(const Window& f) {
    const auto& g = f.group;
    std::vector<cplx> out(g.order());
    for (int c = 0; c < g.order(); ++c) {
        cplx s = 0;
        for (int i = 0; i < g.order(); ++i) s += g.pairing_at(c, i) * f.values[i];
        out[c] = s;
    }
    return Window(g, std::move(out));
}

std::vector<cplx> stft(const Window& phi, const Window& f) {
    const auto& g = phi.group;
    if (!(g == f.group)) throw std::invalid_argument("stft: windows over different groups");
    const int n = g.order();
    std::vector<cplx> table((size_t)n * n);
    std::vector<cplx> prod(n);
    for (int x = 0; x < n; ++x) {
        // The shift-x slice of the table is the transform of T_x(phi) * f.
        for (int i = 0; i < n; ++i) prod[i] = phi.values[g.sub_index(i, x)] * f.values[i];
        for (int c = 0; c < n; ++c) {
            cplx s = 0;
            for (int i = 0; i < n; ++i) s += g.pairing_at(c, i) * prod[i];
            table[(size_t)x * n + c] = s;
        }
    }
    return table;
}

int support_count(std::span<const cplx> v, double rel_tol) {
    if (rel_tol <= 0) throw std::invalid_argument("support_count: tolerance must be positive");
    double mx = 0;
    for (const cplx& z : v) mx = std::max(mx, std::abs(z));
    if (mx == 0) return 0;
    int count = 0;
    for (const cplx& z : v)
        if (std::abs(z) > rel_tol * mx) ++count;
    return count;
}

int support_count(const Window& f, double rel_tol) { return support_count(f.values, rel_tol); }

bool has_borderline_entries(std::span<const cplx> v, double lo, double hi) {
    double mx = 0;
    for (const cplx& z : v) mx = std::max(mx, std::abs(z));
    if (mx == 0) return false;
    for (const cplx& z : v) {
        double r = std::abs(z) / mx;
        if (r > lo && r < hi) return true;
    }
    return false;
}

CMat displacement(long long n, long long l1, long long l2) {
    if (n < 3 || n % 2 == 0) throw std::domain_error("displacement: odd n >= 3 required");
    l1 = ((l1 % n) + n) % n;
    l2 = ((l2 % n) + n) % n;
    // tau = omega^{(n+1)/2} = -e^{i*pi/n} is a primitive 2n-th root; exponents
    // are taken mod 2n.
    const long long two_n = 2 * n;
    std::vector<cplx> tau_pow(two_n);
    for (long long k = 0; k < two_n; ++k) {
        double a = std::numbers::pi * ((n + 1) * k % two_n) / n;
        tau_pow[k] = cplx(std::cos(a), std::sin(a));
    }
    CMat d((int)n, (int)n);
    const long long phase0 = l1 * l2 % two_n;
    for (long long h = 0; h < n; ++h) {
        // column h: tau^{l1 l2} omega^{l2 h} at row h + l1
        long long e = (phase0 + 2 * (l2 * h % n)) % two_n;
        d((int)((h + l1) % n), (int)h) = tau_pow[e];
    }
    return d;
}

}  // namespace gaborlab

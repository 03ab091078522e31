#include "gaborlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gaborlab {

CMat CMat::identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat matmul(const CMat& x, const CMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
    CMat z(x.rows, y.cols);
    for (int c = 0; c < y.cols; ++c)
        for (int k = 0; k < x.cols; ++k) {
            const cplx f = y(k, c);
            if (f == cplx{}) continue;
            const cplx* xc = x.col(k);
            cplx* zc = z.col(c);
            for (int r = 0; r < x.rows; ++r) zc[r] += xc[r] * f;
        }
    return z;
}

CMat adjoint(const CMat& x) {
    CMat z(x.cols, x.rows);
    for (int c = 0; c < x.cols; ++c)
        for (int r = 0; r < x.rows; ++r) z(c, r) = std::conj(x(r, c));
    return z;
}

CMat kron(const CMat& x, const CMat& y) {
    CMat z(x.rows * y.rows, x.cols * y.cols);
    for (int cx = 0; cx < x.cols; ++cx)
        for (int cy = 0; cy < y.cols; ++cy)
            for (int rx = 0; rx < x.rows; ++rx)
                for (int ry = 0; ry < y.rows; ++ry)
                    z(rx * y.rows + ry, cx * y.cols + cy) = x(rx, cx) * y(ry, cy);
    return z;
}

cplx trace(const CMat& x) {
    cplx t = 0;
    for (int i = 0; i < std::min(x.rows, x.cols); ++i) t += x(i, i);
    return t;
}

double frobenius_norm(const CMat& x) {
    double s = 0;
    for (const cplx& v : x.a) s += std::norm(v);
    return std::sqrt(s);
}

double column_norm(const CMat& x, int c) {
    double s = 0;
    const cplx* p = x.col(c);
    for (int r = 0; r < x.rows; ++r) s += std::norm(p[r]);
    return std::sqrt(s);
}

cplx det_in_place(CMat& x) {
    if (x.rows != x.cols) throw std::invalid_argument("det: matrix not square");
    const int n = x.rows;
    cplx d = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::norm(x(k, k));
        for (int r = k + 1; r < n; ++r) {
            double m = std::norm(x(r, k));
            if (m > best) {
                best = m;
                piv = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (int c = k; c < n; ++c) std::swap(x(piv, c), x(k, c));
            d = -d;
        }
        const cplx pivot = x(k, k);
        d *= pivot;
        const cplx inv = std::conj(pivot) / std::norm(pivot);
        for (int r = k + 1; r < n; ++r) {
            const cplx f = x(r, k) * inv;
            if (f == cplx{}) continue;
            for (int c = k + 1; c < n; ++c) x(r, c) -= f * x(k, c);
        }
    }
    return d;
}

cplx det(CMat x) { return det_in_place(x); }

SvdResult svd_jacobi(CMat x, bool want_u, bool want_v) {
    const int m = x.rows, n = x.cols;
    CMat v;
    if (want_v) v = CMat::identity(n);
    // One-sided Jacobi: rotate column pairs until all are mutually orthogonal
    // relative to their norms.
    const double tol = 1e-14;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double worst = 0;
        for (int i = 0; i < n - 1; ++i)
            for (int j = i + 1; j < n; ++j) {
                cplx* ci = x.col(i);
                cplx* cj = x.col(j);
                double aii = 0, ajj = 0;
                cplx aij = 0;
                for (int r = 0; r < m; ++r) {
                    aii += std::norm(ci[r]);
                    ajj += std::norm(cj[r]);
                    aij += std::conj(ci[r]) * cj[r];
                }
                double off = std::abs(aij);
                double scale = std::sqrt(aii * ajj);
                if (scale == 0 || off <= tol * scale) continue;
                worst = std::max(worst, off / scale);
                // Phase that makes the off-diagonal entry real, then a real
                // Jacobi rotation.
                cplx ph = aij / off;
                double zeta = (ajj - aii) / (2.0 * off);
                double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (int r = 0; r < m; ++r) {
                    cplx xi = ci[r], xj = cj[r];
                    ci[r] = c * xi - s * std::conj(ph) * xj;
                    cj[r] = s * ph * xi + c * xj;
                }
                if (want_v)
                    for (int r = 0; r < n; ++r) {
                        cplx vi = v(r, i), vj = v(r, j);
                        v(r, i) = c * vi - s * std::conj(ph) * vj;
                        v(r, j) = s * ph * vi + c * vj;
                    }
            }
        if (worst <= tol) break;
    }
    SvdResult out;
    out.sigma.resize(n);
    std::vector<int> order(n);
    for (int c = 0; c < n; ++c) {
        out.sigma[c] = column_norm(x, c);
        order[c] = c;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return out.sigma[a] > out.sigma[b]; });
    std::vector<double> sigma_sorted(n);
    for (int c = 0; c < n; ++c) sigma_sorted[c] = out.sigma[order[c]];
    if (want_u) {
        out.u = CMat(m, n);
        for (int c = 0; c < n; ++c) {
            double sg = sigma_sorted[c];
            const cplx* src = x.col(order[c]);
            cplx* dst = out.u.col(c);
            if (sg > 0)
                for (int r = 0; r < m; ++r) dst[r] = src[r] / sg;
        }
    }
    if (want_v) {
        out.v = CMat(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) out.v(r, c) = v(r, order[c]);
    }
    out.sigma = std::move(sigma_sorted);
    return out;
}

std::vector<double> singular_values(const CMat& x) { return svd_jacobi(x).sigma; }

double sigma_ratio(const CMat& x) {
    auto s = singular_values(x);
    if (s.empty() || s.front() == 0) return 0;
    return s.back() / s.front();
}

int numerical_rank(const CMat& x, double ratio_tol) {
    auto s = singular_values(x);
    if (s.empty() || s.front() == 0) return 0;
    int r = 0;
    for (double v : s)
        if (v > ratio_tol * s.front()) ++r;
    return r;
}

std::vector<cplx> null_vector(const CMat& x) {
    auto res = svd_jacobi(x, false, true);
    std::vector<cplx> v(x.cols);
    for (int r = 0; r < x.cols; ++r) v[r] = res.v(r, x.cols - 1);
    return v;
}

double projective_distance(const CMat& x, const CMat& y, cplx* fitted) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw std::invalid_argument("projective_distance: shape mismatch");
    cplx t = 0;
    for (size_t i = 0; i < x.a.size(); ++i) t += std::conj(y.a[i]) * x.a[i];
    cplx s = std::abs(t) > 0 ? t / std::abs(t) : cplx(1.0);
    if (fitted) *fitted = s;
    double d = 0;
    for (size_t i = 0; i < x.a.size(); ++i) d += std::norm(x.a[i] - s * y.a[i]);
    return std::sqrt(d);
}

double norm2(std::span<const cplx> v) {
    double s = 0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

cplx inner_product(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) throw std::invalid_argument("inner_product: length mismatch");
    cplx s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

}  // namespace gaborlab

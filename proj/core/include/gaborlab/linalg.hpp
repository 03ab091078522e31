#pragma once

#include <complex>
#include <span>
#include <vector>

namespace gaborlab {

using cplx = std::complex<double>;

/// Dense column-major complex matrix, sized for desk-scale work (N <= ~100).
struct CMat {
    int rows = 0, cols = 0;
    std::vector<cplx> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}

    cplx& operator()(int r, int c) { return a[(size_t)c * rows + r]; }
    const cplx& operator()(int r, int c) const { return a[(size_t)c * rows + r]; }
    cplx* col(int c) { return a.data() + (size_t)c * rows; }
    const cplx* col(int c) const { return a.data() + (size_t)c * rows; }

    static CMat identity(int n);
};

CMat matmul(const CMat& x, const CMat& y);
CMat adjoint(const CMat& x);
CMat kron(const CMat& x, const CMat& y);
cplx trace(const CMat& x);
double frobenius_norm(const CMat& x);
double column_norm(const CMat& x, int c);

/// Determinant by LU with partial pivoting; destroys its argument.
cplx det_in_place(CMat& x);
cplx det(CMat x);

struct SvdResult {
    std::vector<double> sigma;  // descending
    CMat u;                     // left singular vectors (columns), when requested
    CMat v;                     // right singular vectors (columns), when requested
};

/// One-sided Jacobi SVD. Robust and adequate at these sizes.
SvdResult svd_jacobi(CMat x, bool want_u = false, bool want_v = false);
std::vector<double> singular_values(const CMat& x);

/// sigma_min / sigma_max, 0 for a zero matrix.
double sigma_ratio(const CMat& x);
/// Count of singular values above ratio_tol * sigma_max.
int numerical_rank(const CMat& x, double ratio_tol = 1e-8);
/// Unit right null vector (right singular vector of the smallest sigma).
std::vector<cplx> null_vector(const CMat& x);

/// min over unimodular s of ||x - s*y||_F; fitted s optionally returned.
double projective_distance(const CMat& x, const CMat& y, cplx* fitted = nullptr);

double norm2(std::span<const cplx> v);
cplx inner_product(std::span<const cplx> x, std::span<const cplx> y);  // sum x_i * conj(y_i)

}  // namespace gaborlab

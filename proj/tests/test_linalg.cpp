#include <doctest.h>

#include <cmath>
#include <complex>

#include "gaborlab/linalg.hpp"
#include "gaborlab/rng.hpp"

using namespace gaborlab;

namespace {
CMat random_matrix(int r, int c, std::uint64_t seed) {
    GaussianStream gs(seed);
    CMat m(r, c);
    for (auto& z : m.a) z = gs.next_complex_normal();
    return m;
}
}  // namespace

TEST_CASE("determinant small cases") {
    CMat m(2, 2);
    m(0, 0) = 1;
    m(0, 1) = 2;
    m(1, 0) = 2;
    m(1, 1) = 1;
    CHECK(std::abs(det(m) - cplx(-3)) < 1e-14);
    CHECK(std::abs(det(CMat::identity(5)) - cplx(1)) < 1e-14);

    CMat s(3, 3);  // two equal columns
    for (int r = 0; r < 3; ++r) {
        s(r, 0) = cplx(r + 1, r);
        s(r, 1) = cplx(r + 1, r);
        s(r, 2) = cplx(1, -r);
    }
    CHECK(std::abs(det(s)) < 1e-13);
}

TEST_CASE("svd against reconstruction") {
    CMat a = random_matrix(6, 4, 11);
    SvdResult svd = svd_jacobi(a, true, true);
    for (size_t i = 1; i < svd.sigma.size(); ++i) CHECK(svd.sigma[i - 1] >= svd.sigma[i]);
    // A = U diag(sigma) V^*
    CMat usv(6, 4);
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 6; ++r) {
            cplx acc = 0;
            for (int k = 0; k < 4; ++k)
                acc += svd.u(r, k) * svd.sigma[k] * std::conj(svd.v(c, k));
            usv(r, c) = acc;
        }
    double err = 0;
    for (size_t i = 0; i < a.a.size(); ++i) err += std::norm(a.a[i] - usv.a[i]);
    CHECK(std::sqrt(err) < 1e-11 * frobenius_norm(a));
    // orthonormal columns
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx uij = 0, vij = 0;
            for (int r = 0; r < 6; ++r) uij += std::conj(svd.u(r, i)) * svd.u(r, j);
            for (int r = 0; r < 4; ++r) vij += std::conj(svd.v(r, i)) * svd.v(r, j);
            CHECK(std::abs(uij - (i == j ? cplx(1) : cplx(0))) < 1e-12);
            CHECK(std::abs(vij - (i == j ? cplx(1) : cplx(0))) < 1e-12);
        }
}

TEST_CASE("svd of a diagonal matrix") {
    CMat d(3, 3);
    d(0, 0) = 3;
    d(1, 1) = cplx(0, -1);
    d(2, 2) = 0.5;
    auto s = singular_values(d);
    CHECK(std::abs(s[0] - 3) < 1e-13);
    CHECK(std::abs(s[1] - 1) < 1e-13);
    CHECK(std::abs(s[2] - 0.5) < 1e-13);
}

TEST_CASE("rank and null vector") {
    // rank-2 matrix: third column = sum of the first two
    CMat a = random_matrix(5, 2, 7);
    CMat b(5, 3);
    for (int r = 0; r < 5; ++r) {
        b(r, 0) = a(r, 0);
        b(r, 1) = a(r, 1);
        b(r, 2) = a(r, 0) + a(r, 1);
    }
    CHECK(numerical_rank(b) == 2);
    auto v = null_vector(b);
    double nv = 0, av = 0;
    for (int r = 0; r < 5; ++r) {
        cplx acc = 0;
        for (int c = 0; c < 3; ++c) acc += b(r, c) * v[c];
        av += std::norm(acc);
    }
    for (const cplx& z : v) nv += std::norm(z);
    CHECK(std::abs(std::sqrt(nv) - 1.0) < 1e-12);
    CHECK(std::sqrt(av) < 1e-12 * frobenius_norm(b));
    CHECK(numerical_rank(CMat(4, 4)) == 0);
}

TEST_CASE("projective distance") {
    CMat a = random_matrix(4, 4, 3);
    CMat b = a;
    cplx phase = std::polar(1.0, 1.234);
    for (auto& z : b.a) z *= phase;
    cplx fitted;
    CHECK(projective_distance(b, a, &fitted) < 1e-12);
    CHECK(std::abs(std::abs(fitted) - 1.0) < 1e-12);
    CHECK(std::abs(fitted - phase) < 1e-12);
    CMat c = random_matrix(4, 4, 5);
    CHECK(projective_distance(a, c) > 0.1);
}

TEST_CASE("kron") {
    CMat a(2, 2), b(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 2;
    a(1, 0) = 3;
    a(1, 1) = 4;
    b(0, 0) = 0;
    b(0, 1) = 5;
    b(1, 0) = 6;
    b(1, 1) = 7;
    CMat k = kron(a, b);
    REQUIRE(k.rows == 4);
    CHECK(std::abs(k(0, 1) - cplx(5)) < 1e-15);   // a00*b01
    CHECK(std::abs(k(2, 0) - cplx(0)) < 1e-15);   // a10*b00
    CHECK(std::abs(k(3, 3) - cplx(28)) < 1e-15);  // a11*b11
    CHECK(std::abs(trace(k) - trace(a) * trace(b)) < 1e-13);
}

TEST_CASE("matmul and adjoint") {
    CMat a = random_matrix(3, 4, 21), b = random_matrix(4, 2, 22);
    CMat ab = matmul(a, b);
    REQUIRE(ab.rows == 3);
    REQUIRE(ab.cols == 2);
    cplx direct = 0;
    for (int k = 0; k < 4; ++k) direct += a(1, k) * b(k, 0);
    CHECK(std::abs(ab(1, 0) - direct) < 1e-12);
    CMat aa = matmul(adjoint(a), a);
    for (int i = 0; i < 4; ++i) CHECK(aa(i, i).imag() < 1e-12);
}

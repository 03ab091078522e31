#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "gaborlab/gabor.hpp"
#include "gaborlab/linalg.hpp"
#include "gaborlab/rng.hpp"

using namespace gaborlab;

namespace {
double vdist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}
}  // namespace

TEST_CASE("translate") {
    FiniteAbelianGroup c4({4});
    Window d0 = delta_window(c4);
    Window d1 = translate(d0, GroupElement{{1}});
    CHECK(std::abs(d1.values[1] - cplx(1)) < 1e-15);
    CHECK(support_count(d1) == 1);
    CHECK(vdist(translate(d0, GroupElement{{0}}).values, d0.values) == 0);

    FiniteAbelianGroup c3({3});
    Window f(c3, {1, 2, 3});
    Window g = translate(f, GroupElement{{1}});
    CHECK(g.values[0] == cplx(3));
    CHECK(g.values[1] == cplx(1));
    CHECK(g.values[2] == cplx(2));
}

TEST_CASE("modulate") {
    FiniteAbelianGroup c2({2});
    Window ones = constant_window(c2);
    Window m = modulate(ones, Character{{1}});
    CHECK(std::abs(m.values[0] - cplx(1)) < 1e-15);
    CHECK(std::abs(m.values[1] - cplx(-1)) < 1e-15);

    FiniteAbelianGroup c5({5});
    Window d2 = delta_window(c5, 2);
    Window md = modulate(d2, Character{{1}});
    CHECK(std::abs(md.values[2] - c5.pairing(Character{{1}}, GroupElement{{2}})) < 1e-15);
    Window same = modulate(d2, c5.trivial_character());
    CHECK(vdist(same.values, d2.values) == 0);
}

TEST_CASE("tf_shift") {
    FiniteAbelianGroup c3({3});
    Window d0 = delta_window(c3);
    SUBCASE("identity point") {
        TimeFrequencyPoint id{c3.zero(), c3.trivial_character()};
        CHECK(vdist(tf_shift(d0, id).values, d0.values) == 0);
    }
    SUBCASE("hand evaluation of M_xi T_x delta") {
        TimeFrequencyPoint lam{GroupElement{{1}}, Character{{1}}};
        Window w = tf_shift(d0, lam);
        cplx omega3 = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
        CHECK(std::abs(w.values[0]) < 1e-15);
        CHECK(std::abs(w.values[1] - omega3) < 1e-15);
        CHECK(std::abs(w.values[2]) < 1e-15);
    }
}

TEST_CASE("projective commutation and unitarity") {
    for (const auto& m : std::vector<std::vector<int>>{{4}, {2, 2}, {3, 3}, {4, 2}, {16}}) {
        FiniteAbelianGroup g(m);
        REQUIRE(g.order() <= 16);
        for (int t = 0; t < 20; ++t) {
            Window f = random_window(g, 100 + t);
            double fn = norm2(f.values);
            double fmax = 0;
            for (const cplx& z : f.values) fmax = std::max(fmax, std::abs(z));
            for (int x = 0; x < g.order(); ++x)
                for (int c = 0; c < g.order(); ++c) {
                    GroupElement xe = g.element_at(x);
                    Character xi = g.character_at(c);
                    Window mt = modulate(translate(f, xe), xi);
                    Window tm = translate(modulate(f, xi), xe);
                    cplx phase = g.pairing(xi, xe);
                    double worst = 0;
                    for (int i = 0; i < g.order(); ++i)
                        worst = std::max(worst,
                                         std::abs(mt.values[i] - phase * tm.values[i]));
                    CHECK(worst < 1e-12 * fmax);
                    CHECK(std::abs(norm2(mt.values) - fn) < 1e-12 * fn);
                }
        }
    }
}

TEST_CASE("gabor matrix") {
    FiniteAbelianGroup c3({3});
    Window d0 = delta_window(c3);
    SUBCASE("translates of delta form a permutation matrix") {
        std::vector<TimeFrequencyPoint> pts;
        for (int x = 0; x < 3; ++x) pts.push_back({c3.element_at(x), c3.trivial_character()});
        CMat m = gabor_matrix(d0, pts);
        int ones = 0;
        for (const cplx& z : m.a)
            if (std::abs(z - cplx(1)) < 1e-15) ++ones;
        CHECK(ones == 3);
        CHECK(std::abs(std::abs(det(m)) - 1.0) < 1e-13);
    }
    SUBCASE("full system is N x N^2") {
        auto pts = all_tf_points(c3);
        CMat m = gabor_matrix(d0, pts);
        CHECK(m.rows == 3);
        CHECK(m.cols == 9);
    }
    SUBCASE("duplicate points rejected") {
        std::vector<TimeFrequencyPoint> pts(2, TimeFrequencyPoint{c3.zero(), c3.trivial_character()});
        CHECK_THROWS_AS(gabor_matrix(d0, pts), std::invalid_argument);
    }
}

TEST_CASE("fourier") {
    FiniteAbelianGroup c5({5});
    SUBCASE("delta to all-ones") {
        Window fhat = fourier(delta_window(c5));
        for (const cplx& z : fhat.values) CHECK(std::abs(z - cplx(1)) < 1e-14);
    }
    SUBCASE("all-ones to N delta") {
        Window fhat = fourier(constant_window(c5));
        CHECK(std::abs(fhat.values[0] - cplx(5)) < 1e-13);
        for (int i = 1; i < 5; ++i) CHECK(std::abs(fhat.values[i]) < 1e-13);
    }
    SUBCASE("Plancherel, unnormalized") {
        FiniteAbelianGroup c6({6});
        for (int t = 0; t < 5; ++t) {
            Window f = random_window(c6, 40 + t);
            double lhs = norm2(fourier(f).values);
            double rhs = std::sqrt(6.0) * norm2(f.values);
            CHECK(std::abs(lhs - rhs) < 1e-10 * rhs);
        }
    }
    SUBCASE("double transform is N times reflection") {
        for (int n : {3, 5, 8, 12}) {
            FiniteAbelianGroup g({n});
            Window f = random_window(g, n);
            Window ff = fourier(fourier(f));
            for (int i = 0; i < n; ++i) {
                cplx want = (double)n * f.values[g.negate_index(i)];
                CHECK(std::abs(ff.values[i] - want) < 1e-10 * (double)n);
            }
        }
    }
}

TEST_CASE("stft") {
    SUBCASE("delta against delta") {
        FiniteAbelianGroup c4({4});
        Window d0 = delta_window(c4);
        auto table = stft(d0, d0);
        CHECK(support_count(table) == 4);
        for (int c = 0; c < 4; ++c) CHECK(std::abs(table[c] - cplx(1)) < 1e-15);  // shift 0
        for (size_t i = 4; i < table.size(); ++i) CHECK(std::abs(table[i]) < 1e-15);
    }
    SUBCASE("all-ones over Z/2") {
        FiniteAbelianGroup c2({2});
        Window ones = constant_window(c2);
        auto table = stft(ones, ones);
        CHECK(support_count(table) == 2);
        // nonzero exactly at the trivial character, value 2
        CHECK(std::abs(table[0] - cplx(2)) < 1e-15);
        CHECK(std::abs(table[2] - cplx(2)) < 1e-15);
    }
    SUBCASE("entry at (0, trivial) is the plain sum") {
        FiniteAbelianGroup g({3, 3});
        Window phi = random_window(g, 1), f = random_window(g, 2);
        cplx direct = 0;
        for (int i = 0; i < 9; ++i) direct += phi.values[i] * f.values[i];
        CHECK(std::abs(stft(phi, f)[0] - direct) < 1e-13);
    }
}

TEST_CASE("support_count") {
    std::vector<cplx> zeros(3, cplx{});
    CHECK(support_count(zeros) == 0);
    std::vector<cplx> v{cplx(1), cplx(1e-15), cplx(2)};
    CHECK(support_count(v) == 2);
    FiniteAbelianGroup c5({5});
    CHECK(support_count(delta_window(c5)) == 1);
    CHECK_THROWS_AS(support_count(v, 0.0), std::invalid_argument);
    std::vector<cplx> borderline{cplx(1), cplx(1e-8)};
    CHECK(has_borderline_entries(borderline));
    CHECK_FALSE(has_borderline_entries(v));
}

TEST_CASE("displacement") {
    SUBCASE("identity at lambda = 0") {
        CMat d = displacement(5, 0, 0);
        CHECK(projective_distance(d, CMat::identity(5)) < 1e-14);
        CHECK(std::abs(d(0, 0) - cplx(1)) < 1e-15);
    }
    SUBCASE("N=3 hand evaluation: tau * T * M") {
        // tau = omega^{(N+1)/2} = omega_3^2
        cplx tau = std::polar(1.0, 2.0 * std::numbers::pi * 2.0 / 3.0);
        CMat t(3, 3), m(3, 3);
        for (int h = 0; h < 3; ++h) {
            t((h + 1) % 3, h) = 1;
            m(h, h) = std::polar(1.0, 2.0 * std::numbers::pi * h / 3.0);
        }
        CMat want = matmul(t, m);
        for (auto& z : want.a) z *= tau;
        CMat got = displacement(3, 1, 1);
        double err = 0;
        for (size_t i = 0; i < got.a.size(); ++i) err += std::norm(got.a[i] - want.a[i]);
        CHECK(std::sqrt(err) < 1e-13);
    }
    SUBCASE("unitarity at N=5") {
        for (int l1 = 0; l1 < 5; ++l1)
            for (int l2 = 0; l2 < 5; ++l2) {
                CMat d = displacement(5, l1, l2);
                CMat p = matmul(adjoint(d), d);
                CHECK(projective_distance(p, CMat::identity(5)) < 1e-13);
                CHECK(std::abs(p(0, 0) - cplx(1)) < 1e-13);
            }
    }
    SUBCASE("projective composition at N=5") {
        for (int a1 = 0; a1 < 5; ++a1)
            for (int a2 = 0; a2 < 5; ++a2)
                for (int b1 = 0; b1 < 5; ++b1)
                    for (int b2 = 0; b2 < 5; ++b2) {
                        CMat prod = matmul(displacement(5, a1, a2), displacement(5, b1, b2));
                        CMat sum = displacement(5, a1 + b1, a2 + b2);
                        cplx fitted;
                        CHECK(projective_distance(prod, sum, &fitted) < 1e-12);
                        CHECK(std::abs(std::abs(fitted) - 1.0) < 1e-12);
                    }
    }
    SUBCASE("even N rejected") { CHECK_THROWS_AS(displacement(4, 1, 1), std::domain_error); }
}

TEST_CASE("seeded windows are deterministic") {
    FiniteAbelianGroup g({3, 3});
    Window a = random_window(g, 12345), b = random_window(g, 12345), c = random_window(g, 54321);
    CHECK(vdist(a.values, b.values) == 0);
    CHECK(vdist(a.values, c.values) > 1e-6);
    Window gi = random_gaussian_integer_window(g, 7);
    for (const cplx& z : gi.values) {
        CHECK(z.real() == std::round(z.real()));
        CHECK(z.imag() == std::round(z.imag()));
    }
}

TEST_CASE("gabor system validation") {
    FiniteAbelianGroup g({2, 2});
    Window f = random_window(g, 5);
    auto pts = all_tf_points(g);
    GaborSystem sys(f, pts);
    CHECK(sys.points.size() == 16);
    std::vector<TimeFrequencyPoint> dup = {pts[0], pts[0]};
    CHECK_THROWS_AS(GaborSystem(f, dup), std::invalid_argument);
    std::vector<TimeFrequencyPoint> toomany = pts;
    toomany.insert(toomany.end(), pts.begin(), pts.end());
    CHECK_THROWS_AS(GaborSystem(f, toomany), std::invalid_argument);
}

TEST_CASE("fourier over a product group, hand values") {
    FiniteAbelianGroup klein({2, 2});
    Window f(klein, {cplx(1), cplx(2), cplx(3), cplx(4)});
    Window fhat = fourier(f);
    CHECK(std::abs(fhat.values[0] - cplx(10)) < 1e-13);  // trivial character
    CHECK(std::abs(fhat.values[1] - cplx(1 - 2 + 3 - 4)) < 1e-13);  // xi = (0,1)
    CHECK(std::abs(fhat.values[2] - cplx(1 + 2 - 3 - 4)) < 1e-13);  // xi = (1,0)
    CHECK(std::abs(fhat.values[3] - cplx(1 - 2 - 3 + 4)) < 1e-13);  // xi = (1,1)
}

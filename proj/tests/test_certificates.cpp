#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <set>

#include "gaborlab/certificate.hpp"
#include "gaborlab/linalg.hpp"
#include "gaborlab/rng.hpp"

using namespace gaborlab;

namespace {

/// Independent orthogonality oracle: sum_g xi(g) f(g-a) conj(w(g)) built from
/// first principles on coordinate tuples.
cplx oracle_bracket(const FiniteAbelianGroup& g, const std::vector<cplx>& f,
                    const std::vector<cplx>& w, const TimeFrequencyPoint& pt) {
    cplx acc = 0;
    for (int i = 0; i < g.order(); ++i) {
        GroupElement x = g.element_at(i);
        double phase = 0;
        for (int k = 0; k < g.rank(); ++k)
            phase += (double)pt.freq.coords[k] * x.coords[k] / g.moduli()[k];
        GroupElement shifted = g.sub(x, pt.shift);
        acc += std::polar(1.0, 2.0 * std::numbers::pi * phase) * f[g.index_of(shifted)] *
               std::conj(w[i]);
    }
    return acc;
}

int rank_of_points(const Window& f, const std::vector<TimeFrequencyPoint>& pts) {
    return numerical_rank(gabor_matrix(f, pts));
}

}  // namespace

TEST_CASE("klein certificate over 2x2") {
    FiniteAbelianGroup g({2, 2});
    Window f = random_window(g, 101);
    SparkCertificate cert = klein_certificate(g, f);
    CHECK(cert.kind == CertKind::klein);
    CHECK(cert.points.size() == 6);
    CHECK(cert.claims.lambda_size == 6);
    CHECK(cert.claims.rank_bound == 3);
    CHECK(cert.claims.stft_bound == 10);

    double scale = norm2(f.values) * norm2(*cert.witness);
    for (const auto& pt : cert.points)
        CHECK(std::abs(oracle_bracket(g, f.values, *cert.witness, pt)) < 1e-12 * scale);
    CHECK(rank_of_points(f, cert.points) <= 3);

    VerifyReport rep = verify_certificate(cert, {});
    CHECK(rep.pass);
    CHECK(rep.max_ortho_residual < 1e-12);
}

TEST_CASE("klein certificate over 4x2") {
    FiniteAbelianGroup g({4, 2});
    Window f = random_window(g, 55);
    SparkCertificate cert = klein_certificate(g, f);
    CHECK(cert.points.size() == 12);  // 3N/2 with N = 8
    VerifyReport rep = verify_certificate(cert, {});
    CHECK(rep.pass);
    CHECK(rank_of_points(f, cert.points) <= 7);
}

TEST_CASE("klein certificate for the delta window") {
    FiniteAbelianGroup g({2, 2});
    SparkCertificate cert = klein_certificate(g, delta_window(g));
    VerifyReport rep = verify_certificate(cert, {});
    CHECK(rep.pass);
    CHECK(rep.max_ortho_residual < 1e-15);
}

TEST_CASE("klein certificate needs a Klein subgroup") {
    CHECK_THROWS_AS(universal_klein_certificate(FiniteAbelianGroup({3, 3})), std::domain_error);
    CHECK_THROWS_AS(universal_klein_certificate(FiniteAbelianGroup({8})), std::domain_error);
}

TEST_CASE("universal klein certificate verifies against arbitrary windows") {
    FiniteAbelianGroup g({2, 2});
    SparkCertificate cert = universal_klein_certificate(g);
    CHECK_FALSE(cert.window_bound());
    std::vector<Window> windows;
    for (int t = 0; t < 5; ++t) windows.push_back(random_window(g, 200 + t));
    VerifyReport rep = verify_certificate(cert, windows);
    CHECK(rep.pass);
    CHECK(rep.windows_tested == 5);
}

TEST_CASE("prime square certificate at p=3") {
    FiniteAbelianGroup g({3, 3});
    Window z = random_window(g, 301);
    SparkCertificate cert = prime_square_certificate(3, z);
    CHECK(cert.points.size() == 16);  // 2p^2 - 2
    CHECK(cert.claims.rank_bound == 8);
    std::set<int> uniq;
    for (const auto& pt : cert.points) uniq.insert(tf_point_index(g, pt));
    CHECK(uniq.size() == 16);

    double scale = norm2(z.values) * norm2(*cert.witness);
    for (const auto& pt : cert.points)
        CHECK(std::abs(oracle_bracket(g, z.values, *cert.witness, pt)) < 1e-11 * scale);
    CHECK(rank_of_points(z, cert.points) <= 8);

    VerifyReport rep = verify_certificate(cert, {});
    CHECK(rep.pass);
}

TEST_CASE("prime square identity-matrix window, exact orthogonality") {
    FiniteAbelianGroup g({3, 3});
    // z arranged as the identity matrix: z(i,j) = delta_{ij}
    std::vector<cplx> values(9, cplx{});
    for (int i = 0; i < 3; ++i) values[i * 3 + i] = 1.0;
    Window z(g, values);
    SparkCertificate cert = prime_square_certificate(3, z);
    // adj(I) = I, so the witness is the vectorized identity again
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs((*cert.witness)[i * 3 + j] - (i == j ? cplx(1) : cplx(0))) < 1e-14);
    CertificateVerifyOptions opt;
    opt.exact = true;
    VerifyReport rep = verify_certificate(cert, {}, opt);
    CHECK(rep.pass);
    CHECK(rep.exact_used);
}

TEST_CASE("prime square certificate at p=5") {
    FiniteAbelianGroup g({5, 5});
    Window z = random_window(g, 501);
    SparkCertificate cert = prime_square_certificate(5, z);
    CHECK(cert.points.size() == 48);
    CHECK(cert.points.size() > 25);
    VerifyReport rep = verify_certificate(cert, {});
    CHECK(rep.pass);
    CHECK(rank_of_points(z, cert.points) <= 24);
}

TEST_CASE("prime square degenerate window raises") {
    FiniteAbelianGroup g({3, 3});
    // a single spike: every 2x2 minor of Z vanishes
    CHECK_THROWS_AS(prime_square_certificate(3, delta_window(g)), std::invalid_argument);
    CHECK_THROWS_AS(prime_square_certificate(4, random_window(FiniteAbelianGroup({4, 4}), 1)),
                    std::invalid_argument);
}

TEST_CASE("exact prime square on gaussian integer windows") {
    FiniteAbelianGroup g({3, 3});
    for (int t = 0; t < 3; ++t) {
        Window z = random_gaussian_integer_window(g, 700 + t, 6);
        SparkCertificate cert = [&] {
            try {
                return prime_square_certificate(3, z);
            } catch (const std::invalid_argument&) {
                return prime_square_certificate(3, random_gaussian_integer_window(g, 800 + t, 6));
            }
        }();
        CertificateVerifyOptions opt;
        opt.exact = true;
        VerifyReport rep = verify_certificate(cert, {}, opt);
        CHECK(rep.pass);
        CHECK(rep.exact_used);
    }
}

TEST_CASE("universal truncation") {
    FiniteAbelianGroup g({2, 2});
    SparkCertificate cert = universal_truncation(universal_klein_certificate(g), 4);
    CHECK(cert.points.size() == 4);
    CHECK(cert.claims.rank_bound == 3);
    // any window: the four columns stay rank-deficient
    for (int t = 0; t < 5; ++t) {
        Window f = random_window(g, 900 + t);
        CHECK(rank_of_points(f, cert.points) <= 3);
    }
    CHECK_THROWS_AS(universal_truncation(cert, 9), std::invalid_argument);
}

TEST_CASE("hereditary lift 2x2 -> 4x2") {
    FiniteAbelianGroup host({4, 2}), sub({2, 2});
    SubgroupEmbedding emb(host, sub, {GroupElement{{2, 0}}, GroupElement{{0, 1}}});
    SparkCertificate base = universal_truncation(universal_klein_certificate(sub), 4);
    SparkCertificate lifted = hereditary_lift(base, emb);
    CHECK(lifted.kind == CertKind::hereditary);
    CHECK(lifted.points.size() == 8);
    CHECK(lifted.provenance.parent == "klein");
    std::vector<Window> windows;
    for (int t = 0; t < 20; ++t) windows.push_back(random_window(host, 1000 + t));
    VerifyReport rep = verify_certificate(lifted, windows);
    CHECK(rep.pass);
    CHECK(rep.windows_tested == 20);
    for (const auto& w : windows) CHECK(rank_of_points(w, lifted.points) <= 7);
}

TEST_CASE("hereditary lift via the identity embedding keeps the points") {
    FiniteAbelianGroup g({2, 2});
    SubgroupEmbedding id(g, g, {GroupElement{{1, 0}}, GroupElement{{0, 1}}});
    SparkCertificate base = universal_truncation(universal_klein_certificate(g), 4);
    SparkCertificate lifted = hereditary_lift(base, id);
    REQUIRE(lifted.points.size() == base.points.size());
    for (size_t i = 0; i < base.points.size(); ++i) CHECK(lifted.points[i] == base.points[i]);
}

TEST_CASE("hereditary lift 3x3 -> 9x3") {
    FiniteAbelianGroup host({9, 3}), sub({3, 3});
    SubgroupEmbedding emb(host, sub, {GroupElement{{3, 0}}, GroupElement{{0, 1}}});
    SparkCertificate base = universal_truncation(universal_prime_square_certificate(3), 9);
    SparkCertificate lifted = hereditary_lift(base, emb);
    CHECK(lifted.points.size() == 27);
    std::vector<Window> windows;
    for (int t = 0; t < 20; ++t) windows.push_back(random_window(host, 1100 + t));
    VerifyReport rep = verify_certificate(lifted, windows);
    CHECK(rep.pass);
    for (const auto& w : windows) CHECK(rank_of_points(w, lifted.points) <= 26);
}

TEST_CASE("hereditary lift validates its input") {
    FiniteAbelianGroup host({4, 2}), sub({2, 2});
    SubgroupEmbedding emb(host, sub, {GroupElement{{2, 0}}, GroupElement{{0, 1}}});
    SparkCertificate whole = universal_klein_certificate(sub);  // 6 points, not |H| = 4
    CHECK_THROWS_AS(hereditary_lift(whole, emb), std::invalid_argument);
}

TEST_CASE("certify_noncyclic dispatch") {
    SUBCASE("klein route") {
        SparkCertificate cert = certify_noncyclic(FiniteAbelianGroup({2, 2}), 10, 42);
        CHECK(cert.kind == CertKind::klein);
        CHECK(cert.provenance.seed == 42);
    }
    SUBCASE("prime square route") {
        SparkCertificate cert = certify_noncyclic(FiniteAbelianGroup({3, 3}), 10, 42);
        CHECK(cert.kind == CertKind::prime_square);
        CHECK(cert.points.size() == 16);
    }
    SUBCASE("lift route for 6x3") {
        SparkCertificate cert = certify_noncyclic(FiniteAbelianGroup({6, 3}), 10, 42);
        CHECK(cert.kind == CertKind::hereditary);
        CHECK(cert.points.size() == 18);
        REQUIRE(cert.provenance.subgroup.has_value());
        CHECK(cert.provenance.subgroup->moduli == std::vector<int>{3, 3});
        CHECK(cert.provenance.subgroup->generator_images ==
              std::vector<std::vector<int>>{{2, 0}, {0, 1}});
    }
    SUBCASE("klein route even when larger subgroups exist") {
        SparkCertificate cert = certify_noncyclic(FiniteAbelianGroup({4, 2}), 10, 42);
        CHECK(cert.kind == CertKind::klein);
    }
    SUBCASE("cyclic groups rejected") {
        CHECK_THROWS_AS(certify_noncyclic(FiniteAbelianGroup({15}), 5, 1), std::domain_error);
        CHECK_THROWS_AS(certify_noncyclic(FiniteAbelianGroup({2, 3}), 5, 1), std::domain_error);
    }
}

TEST_CASE("tampered certificates are rejected") {
    FiniteAbelianGroup g({2, 2});
    Window f = random_window(g, 1234);
    SparkCertificate good = klein_certificate(g, f);
    REQUIRE(verify_certificate(good, {}).pass);

    SUBCASE("single point substitutions") {
        // all points outside Lambda, substituted at every position
        std::set<int> lambda;
        for (const auto& pt : good.points) lambda.insert(tf_point_index(g, pt));
        int rejected = 0, tampers = 0;
        GaussianStream gs(99);
        while (tampers < 100) {
            int pos = (int)(gs.next_u64() % good.points.size());
            int idx = (int)(gs.next_u64() % 16);
            if (lambda.count(idx)) continue;
            SparkCertificate bad = good;
            bad.points[pos] = tf_point_at(g, idx);
            ++tampers;
            if (!verify_certificate(bad, {}).pass) ++rejected;
        }
        CHECK(rejected >= 99);
    }
    SUBCASE("tampered witness entry") {
        SparkCertificate bad = good;
        (*bad.witness)[1] += cplx(0.3, -0.1);
        CHECK_FALSE(verify_certificate(bad, {}).pass);
    }
    SUBCASE("tampered claim") {
        SparkCertificate bad = good;
        bad.claims.lambda_size = 7;
        VerifyReport rep = verify_certificate(bad, {});
        CHECK_FALSE(rep.pass);
        CHECK(!rep.first_violation.empty());
    }
}

TEST_CASE("certificate serialization round trip") {
    FiniteAbelianGroup g({3, 3});
    Window z = random_window(g, 2024);
    SparkCertificate cert = prime_square_certificate(3, z);
    cert.provenance.seed = 2024;
    std::string text = certificate_to_json(cert);
    SparkCertificate back = certificate_from_json(text);
    CHECK(back.kind == cert.kind);
    CHECK(back.group.moduli() == cert.group.moduli());
    REQUIRE(back.points.size() == cert.points.size());
    for (size_t i = 0; i < cert.points.size(); ++i) CHECK(back.points[i] == cert.points[i]);
    REQUIRE(back.witness.has_value());
    for (size_t i = 0; i < cert.witness->size(); ++i)
        CHECK((*back.witness)[i] == (*cert.witness)[i]);  // bit-exact
    CHECK(back.claims.lambda_size == cert.claims.lambda_size);
    CHECK(back.claims.stft_bound == cert.claims.stft_bound);
    CHECK(back.provenance.seed == cert.provenance.seed);
    REQUIRE(back.provenance.window.has_value());
    for (size_t i = 0; i < z.values.size(); ++i)
        CHECK((*back.provenance.window)[i] == z.values[i]);
    CHECK(verify_certificate(back, {}).pass);

    const char* path = "roundtrip_cert_test.json";
    save_certificate(cert, path);
    SparkCertificate loaded = load_certificate(path);
    CHECK(certificate_to_json(loaded) == text);
    std::remove(path);
}

TEST_CASE("stft support probe") {
    SUBCASE("2x2 stays within 10") {
        StftSupportProbe probe = min_stft_support_probe(FiniteAbelianGroup({2, 2}), 50, 7);
        CHECK(probe.bound == 10);
        CHECK(probe.all_within_bound);
        CHECK(probe.min_observed <= 10);
        CHECK(probe.min_observed >= 1);
    }
    SUBCASE("4x2 stays within 52") {
        StftSupportProbe probe = min_stft_support_probe(FiniteAbelianGroup({4, 2}), 30, 8);
        CHECK(probe.bound == 52);
        CHECK(probe.all_within_bound);
    }
    SUBCASE("delta window support is exactly N") {
        FiniteAbelianGroup g({2, 2});
        Window d = delta_window(g);
        CHECK(support_count(stft(d, d)) == 4);
    }
    SUBCASE("groups without Klein subgroup rejected") {
        CHECK_THROWS_AS(min_stft_support_probe(FiniteAbelianGroup({3, 3}), 5, 1),
                        std::domain_error);
    }
}

TEST_CASE("random N-subsets of certificate families are dependent") {
    SUBCASE("klein over 2x2") {
        FiniteAbelianGroup g({2, 2});
        Window f = random_window(g, 607);
        SparkCertificate cert = klein_certificate(g, f);
        GaussianStream gs(11);
        for (int t = 0; t < 50; ++t) {
            std::vector<int> idx(cert.points.size());
            for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
            for (int i = 0; i < 4; ++i)
                std::swap(idx[i], idx[i + (int)(gs.next_u64() % (idx.size() - i))]);
            std::vector<TimeFrequencyPoint> pts;
            for (int i = 0; i < 4; ++i) pts.push_back(cert.points[idx[i]]);
            CHECK(numerical_rank(gabor_matrix(f, pts)) < 4);
        }
    }
    SUBCASE("prime square over 3x3") {
        FiniteAbelianGroup g({3, 3});
        Window z = random_window(g, 608);
        SparkCertificate cert = prime_square_certificate(3, z);
        GaussianStream gs(12);
        for (int t = 0; t < 50; ++t) {
            std::vector<int> idx(cert.points.size());
            for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
            for (int i = 0; i < 9; ++i)
                std::swap(idx[i], idx[i + (int)(gs.next_u64() % (idx.size() - i))]);
            std::vector<TimeFrequencyPoint> pts;
            for (int i = 0; i < 9; ++i) pts.push_back(cert.points[idx[i]]);
            CHECK(numerical_rank(gabor_matrix(z, pts)) < 9);
        }
    }
}

TEST_CASE("tamper sensitivity across certificate kinds") {
    GaussianStream gs(314);
    SUBCASE("prime square point substitution") {
        FiniteAbelianGroup g({3, 3});
        Window z = random_window(g, 2718);
        SparkCertificate good = prime_square_certificate(3, z);
        std::set<int> lambda;
        for (const auto& pt : good.points) lambda.insert(tf_point_index(g, pt));
        int rejected = 0, tampers = 0;
        while (tampers < 40) {
            int pos = (int)(gs.next_u64() % good.points.size());
            int idx = (int)(gs.next_u64() % 81);
            if (lambda.count(idx)) continue;
            SparkCertificate bad = good;
            bad.points[pos] = tf_point_at(g, idx);
            ++tampers;
            if (!verify_certificate(bad, {}).pass) ++rejected;
        }
        CHECK(rejected == 40);
    }
    SUBCASE("hereditary point substitution") {
        FiniteAbelianGroup host({4, 2}), sub({2, 2});
        SubgroupEmbedding emb(host, sub, {GroupElement{{2, 0}}, GroupElement{{0, 1}}});
        SparkCertificate good =
            hereditary_lift(universal_truncation(universal_klein_certificate(sub), 4), emb);
        std::vector<Window> windows;
        for (int t = 0; t < 5; ++t) windows.push_back(random_window(host, 3000 + t));
        REQUIRE(verify_certificate(good, windows).pass);
        // Substituting a point of the full lifted family (here 12 points, the
        // certificate holds 8 of them) produces another valid certificate, so
        // only points outside the family count as tampers.
        std::set<int> lambda;
        for (const auto& base : universal_klein_certificate(sub).points)
            for (const Character& xi : character_extensions(base.freq, emb))
                lambda.insert(tf_point_index(host, {emb.map(base.shift), xi}));
        for (const auto& pt : good.points) lambda.insert(tf_point_index(host, pt));
        int rejected = 0, tampers = 0;
        while (tampers < 40) {
            int pos = (int)(gs.next_u64() % good.points.size());
            int idx = (int)(gs.next_u64() % 64);
            if (lambda.count(idx)) continue;
            SparkCertificate bad = good;
            bad.points[pos] = tf_point_at(host, idx);
            ++tampers;
            if (!verify_certificate(bad, windows).pass) ++rejected;
        }
        CHECK(rejected == 40);
    }
}

TEST_CASE("hereditary lift through a twisted embedding") {
    // generator images (3,1) and (0,1): injective, orders divide 3
    FiniteAbelianGroup host({9, 3}), sub({3, 3});
    SubgroupEmbedding emb(host, sub, {GroupElement{{3, 1}}, GroupElement{{0, 1}}});
    SparkCertificate base = universal_truncation(universal_prime_square_certificate(3), 9);
    SparkCertificate lifted = hereditary_lift(base, emb);
    CHECK(lifted.points.size() == 27);
    std::vector<Window> windows;
    for (int t = 0; t < 10; ++t) windows.push_back(random_window(host, 8800 + t));
    VerifyReport rep = verify_certificate(lifted, windows);
    CHECK(rep.pass);
    for (const auto& w : windows)
        CHECK(numerical_rank(gabor_matrix(w, lifted.points)) <= 26);
}

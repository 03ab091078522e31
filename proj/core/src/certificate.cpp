#include "gaborlab/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gaborlab/exact.hpp"
#include "gaborlab/linalg.hpp"
#include "gaborlab/rng.hpp"

namespace gaborlab {

std::string cert_kind_name(CertKind k) {
    switch (k) {
        case CertKind::klein: return "klein";
        case CertKind::prime_square: return "prime_square";
        case CertKind::hereditary: return "hereditary";
        case CertKind::generic: return "generic";
    }
    return "generic";
}

CertKind cert_kind_from_name(const std::string& name) {
    if (name == "klein") return CertKind::klein;
    if (name == "prime_square") return CertKind::prime_square;
    if (name == "hereditary") return CertKind::hereditary;
    if (name == "generic") return CertKind::generic;
    throw std::invalid_argument("unknown certificate kind: " + name);
}

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::vector<cplx> conj_values(const std::vector<cplx>& v) {
    std::vector<cplx> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
    return out;
}

CertSubgroupInfo subgroup_info(const SubgroupEmbedding& emb) {
    CertSubgroupInfo info;
    info.moduli = emb.sub().moduli();
    for (const auto& g : emb.generator_images()) info.generator_images.push_back(g.coords);
    return info;
}

/// The Klein point family for a group with an embedded Klein subgroup.
std::vector<TimeFrequencyPoint> klein_points(const FiniteAbelianGroup& g,
                                             const SubgroupEmbedding& emb) {
    const int n = g.order();
    // K's four elements in subgroup element order.
    std::vector<GroupElement> k_elems;
    for (int h = 0; h < 4; ++h) k_elems.push_back(g.element_at(emb.map_index(h)));
    std::vector<TimeFrequencyPoint> pts;
    pts.reserve(3 * n / 2);
    for (int c = 0; c < n; ++c) {
        Character xi = g.character_at(c);
        // Restriction to K is real (+-1); nontrivial iff some phase is E/2.
        bool nontrivial = false;
        for (int h = 1; h < 4; ++h)
            if (g.phase_index(xi, k_elems[h]) != 0) nontrivial = true;
        if (!nontrivial) continue;
        for (int h = 1; h < 4; ++h) {
            int t = g.phase_index(xi, k_elems[h]);
            if (t == 0) continue;
            if (2 * t != g.exponent())
                throw std::logic_error("klein_points: non-real character restriction");
            pts.push_back({k_elems[h], xi});
        }
    }
    if ((int)pts.size() != 3 * n / 2)
        throw std::logic_error("klein_points: family size mismatch");
    return pts;
}

SubgroupEmbedding require_klein_subgroup(const FiniteAbelianGroup& g) {
    auto ps = find_p_square_subgroup(g);
    if (!ps || ps->p != 2)
        throw std::domain_error("group has no Klein subgroup");
    return ps->embedding;
}

/// Columns of the family arranged over [p,p] in the fixed construction order:
/// (i) a=(0,t), xi=(0,s); (ii) a=(t,0), xi=(s,0); (iii) a=0, xi=(0,s), s!=0;
/// (iv) a=0, xi=(s,0), s!=0.
std::vector<TimeFrequencyPoint> prime_square_points(int p) {
    std::vector<TimeFrequencyPoint> pts;
    pts.reserve(2 * p * p - 2);
    auto el = [&](int u, int v) { return GroupElement{{u, v}}; };
    auto ch = [&](int u, int v) { return Character{{u, v}}; };
    for (int t = 1; t < p; ++t)
        for (int s = 0; s < p; ++s) pts.push_back({el(0, t), ch(0, s)});
    for (int t = 1; t < p; ++t)
        for (int s = 0; s < p; ++s) pts.push_back({el(t, 0), ch(s, 0)});
    for (int s = 1; s < p; ++s) pts.push_back({el(0, 0), ch(0, s)});
    for (int s = 1; s < p; ++s) pts.push_back({el(0, 0), ch(s, 0)});
    return pts;
}

/// Witness window with matrix (adj Z)^*, where Z[i][j] = z(i,j).
std::vector<cplx> adjugate_witness(int p, const Window& z) {
    CMat zm(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) zm(i, j) = z.values[i * p + j];
    CMat adj(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            CMat minor(p - 1, p - 1);
            for (int r = 0, rr = 0; r < p; ++r) {
                if (r == j) continue;
                for (int c = 0, cc = 0; c < p; ++c) {
                    if (c == i) continue;
                    minor(rr, cc) = zm(r, c);
                    ++cc;
                }
                ++rr;
            }
            cplx m = (p == 1) ? cplx(1.0) : det_in_place(minor);
            adj(i, j) = (((i + j) % 2) ? -m : m);
        }
    // X = (adj Z)^*; element (i,j) of the witness window is X[i][j].
    std::vector<cplx> x((size_t)p * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) x[(size_t)i * p + j] = std::conj(adj(j, i));
    return x;
}

cplx shift_bracket(const Window& f, const std::vector<cplx>& w, int shift_index,
                   int freq_index) {
    const auto& g = f.group;
    cplx s = 0;
    for (int i = 0; i < g.order(); ++i)
        s += g.pairing_at(freq_index, i) * f.values[g.sub_index(i, shift_index)] *
             std::conj(w[i]);
    return s;
}

double vec_norm(const std::vector<cplx>& v) { return norm2(std::span<const cplx>(v)); }

}  // namespace

SparkCertificate universal_klein_certificate(const FiniteAbelianGroup& g) {
    SubgroupEmbedding emb = require_klein_subgroup(g);
    SparkCertificate cert(g, CertKind::klein);
    cert.points = klein_points(g, emb);
    const int n = g.order();
    cert.claims = {(int)cert.points.size(), n - 1, (long long)n * n - 3 * n / 2};
    cert.provenance.subgroup = subgroup_info(emb);
    return cert;
}

SparkCertificate klein_certificate(const FiniteAbelianGroup& g, const Window& f) {
    if (!(f.group == g)) throw std::invalid_argument("klein_certificate: window group mismatch");
    if (vec_norm(f.values) == 0) throw std::invalid_argument("klein_certificate: zero window");
    SparkCertificate cert = universal_klein_certificate(g);
    cert.witness = conj_values(f.values);
    cert.provenance.window = f.values;
    return cert;
}

SparkCertificate universal_prime_square_certificate(int p) {
    if (!is_prime(p) || p == 2)
        throw std::invalid_argument("prime_square_certificate: odd prime required");
    FiniteAbelianGroup g({p, p});
    SparkCertificate cert(g, CertKind::prime_square);
    cert.points = prime_square_points(p);
    const int n = g.order();
    cert.claims = {(int)cert.points.size(), n - 1,
                   (long long)n * n - (2LL * p * p - 2)};
    return cert;
}

SparkCertificate prime_square_certificate(int p, const Window& z) {
    SparkCertificate cert = universal_prime_square_certificate(p);
    if (!(z.group == cert.group))
        throw std::invalid_argument("prime_square_certificate: window must live on Z/pZ x Z/pZ");
    std::vector<cplx> x = adjugate_witness(p, z);
    double xn = norm2(std::span<const cplx>(x));
    double zn = vec_norm(z.values);
    if (zn == 0) throw std::invalid_argument("prime_square_certificate: zero window");
    if (xn <= 1e-13 * std::pow(zn, p - 1))
        throw std::invalid_argument(
            "prime_square_certificate: degenerate input, adjugate witness vanishes; "
            "use a different window");
    cert.witness = std::move(x);
    cert.provenance.window = z.values;
    return cert;
}

SparkCertificate universal_truncation(const SparkCertificate& cert, int size) {
    if (cert.kind != CertKind::klein && cert.kind != CertKind::prime_square)
        throw std::invalid_argument("universal_truncation: only klein/prime_square families");
    if (size < 1 || size > (int)cert.points.size())
        throw std::invalid_argument("universal_truncation: bad size");
    SparkCertificate out = cert;
    out.points.resize(size);
    out.witness.reset();
    out.provenance.window.reset();
    out.claims.lambda_size = size;
    out.claims.rank_bound = std::min(size - 1, cert.group.order() - 1);
    out.claims.stft_bound.reset();
    return out;
}

SparkCertificate hereditary_lift(const SparkCertificate& cert_h, const SubgroupEmbedding& emb) {
    if (!(cert_h.group == emb.sub()))
        throw std::invalid_argument("hereditary_lift: certificate group is not the subgroup");
    if ((int)cert_h.points.size() != emb.sub().order())
        throw std::invalid_argument("hereditary_lift: certificate must have |H| points");
    const auto& g = emb.host();
    SparkCertificate out(g, CertKind::hereditary);
    for (const auto& pt : cert_h.points) {
        GroupElement shift = emb.map(pt.shift);
        for (const Character& xi : character_extensions(pt.freq, emb))
            out.points.push_back({shift, xi});
    }
    if ((int)out.points.size() != g.order())
        throw std::logic_error("hereditary_lift: lifted family size mismatch");
    out.claims = {g.order(), g.order() - 1, std::nullopt};
    out.provenance.subgroup = subgroup_info(emb);
    out.provenance.parent = cert_kind_name(cert_h.kind);
    return out;
}

SparkCertificate certify_noncyclic(const FiniteAbelianGroup& g, int trials,
                                   std::uint64_t seed) {
    if (g.is_cyclic())
        throw std::domain_error(
            "certify_noncyclic: cyclic group (full spark windows exist there)");
    auto ps = find_p_square_subgroup(g);
    if (!ps) throw std::logic_error("certify_noncyclic: no p-square subgroup found");
    SparkCertificate cert = [&] {
        if (ps->p == 2) return universal_klein_certificate(g);
        SparkCertificate base = universal_prime_square_certificate(ps->p);
        if (ps->embedding.is_identity()) return base;
        return hereditary_lift(universal_truncation(base, ps->p * ps->p), ps->embedding);
    }();
    cert.provenance.seed = seed;
    std::vector<Window> windows;
    for (int t = 0; t < trials; ++t)
        windows.push_back(random_window(g, GaussianStream::derive(seed, t)));
    VerifyReport rep = verify_certificate(cert, windows);
    if (!rep.pass)
        throw std::runtime_error("certify_noncyclic: self-verification failed: " +
                                 rep.first_violation);
    return cert;
}

namespace {

struct Violation {
    bool hit = false;
    std::string what;
    void record(const std::string& s) {
        if (!hit) {
            hit = true;
            what = s;
        }
    }
};

/// Orthogonality + rank + stft-bound checks of one (window, witness) pair
/// against the certificate's points.
void check_bound_relations(const SparkCertificate& cert, const Window& f,
                           const std::vector<cplx>& witness, const CertificateVerifyOptions& opt,
                           VerifyReport& rep, Violation& vio, const std::string& tag) {
    const auto& g = cert.group;
    const double scale = vec_norm(f.values) * norm2(std::span<const cplx>(witness));
    if (scale == 0) {
        vio.record(tag + ": zero window or witness");
        return;
    }
    for (size_t i = 0; i < cert.points.size(); ++i) {
        const auto& pt = cert.points[i];
        cplx ip = shift_bracket(f, witness, g.index_of(pt.shift), g.index_of(pt.freq));
        double res = std::abs(ip) / scale;
        rep.max_ortho_residual = std::max(rep.max_ortho_residual, res);
        ++rep.relations_checked;
        if (res > opt.ortho_rel_tol) {
            std::ostringstream os;
            os << tag << ": orthogonality violated at point " << i << " (residual " << res << ")";
            vio.record(os.str());
            return;
        }
    }
    // Rank of the full Lambda system.
    CMat m = gabor_matrix(f, cert.points);
    auto sv = singular_values(m);
    if (!sv.empty() && sv.front() > 0 && cert.claims.rank_bound < (int)sv.size()) {
        double ratio = sv[cert.claims.rank_bound] / sv.front();
        rep.max_rank_ratio = std::max(rep.max_rank_ratio, ratio);
        if (ratio > opt.rank_ratio_tol) {
            vio.record(tag + ": rank bound violated");
            return;
        }
    }
    if (cert.claims.stft_bound) {
        std::vector<cplx> table((size_t)g.order() * g.order());
        for (int x = 0; x < g.order(); ++x)
            for (int c = 0; c < g.order(); ++c)
                table[(size_t)x * g.order() + c] = shift_bracket(f, witness, x, c);
        long long supp = support_count(table, opt.support_rel_tol);
        if (supp > *cert.claims.stft_bound) {
            std::ostringstream os;
            os << tag << ": stft support " << supp << " exceeds bound " << *cert.claims.stft_bound;
            vio.record(os.str());
        }
    }
}

/// The adjugate inner identity <Z_a, X_b> = delta_ab det Z, both for columns
/// and for rows.
void check_inner_identity(int p, const Window& z, const std::vector<cplx>& x,
                          const CertificateVerifyOptions& opt, VerifyReport& rep,
                          Violation& vio) {
    CMat zm(p, p), xm(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            zm(i, j) = z.values[i * p + j];
            xm(i, j) = x[(size_t)i * p + j];
        }
    CMat zc = zm;
    cplx dz = det_in_place(zc);
    double scale = std::max(std::abs(dz), frobenius_norm(zm) * frobenius_norm(xm) / p);
    if (scale == 0) {
        vio.record("inner identity: zero window and witness");
        return;
    }
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) {
            cplx col = 0, row = 0;
            for (int i = 0; i < p; ++i) {
                col += zm(i, a) * std::conj(xm(i, b));
                row += zm(a, i) * std::conj(xm(b, i));
            }
            cplx want = (a == b) ? dz : cplx(0.0);
            double r = std::max(std::abs(col - want), std::abs(row - want)) / scale;
            rep.max_ortho_residual = std::max(rep.max_ortho_residual, r);
            ++rep.relations_checked;
            if (r > opt.ortho_rel_tol) {
                std::ostringstream os;
                os << "inner identity violated at (a=" << a << ", b=" << b << ")";
                vio.record(os.str());
                return;
            }
        }
}

/// Exact re-check of all orthogonality relations over Z[zeta_M].
void check_exact_relations(const SparkCertificate& cert, const Window& f,
                           const Window& witness, VerifyReport& rep, Violation& vio,
                           const std::string& tag) {
    auto ring = exact::CycRing::create(exact::exact_order_for(cert.group));
    const auto& g = cert.group;
    for (size_t i = 0; i < cert.points.size(); ++i) {
        const auto& pt = cert.points[i];
        exact::CycInt ip = exact::exact_shift_bracket(ring, f, witness, g.index_of(pt.shift),
                                                      g.index_of(pt.freq));
        ++rep.relations_checked;
        if (!ip.is_zero()) {
            std::ostringstream os;
            os << tag << ": exact orthogonality violated at point " << i;
            vio.record(os.str());
            return;
        }
    }
    rep.exact_used = true;
}

}  // namespace

VerifyReport verify_certificate(const SparkCertificate& cert,
                                const std::vector<Window>& test_windows,
                                const CertificateVerifyOptions& opt) {
    VerifyReport rep;
    Violation vio;
    const auto& g = cert.group;
    const int n = g.order();

    // Structural claims first.
    if ((int)cert.points.size() != cert.claims.lambda_size)
        vio.record("claims.lambda_size does not match the point count");
    std::set<int> uniq;
    for (const auto& pt : cert.points)
        if (!uniq.insert(tf_point_index(g, pt)).second) vio.record("duplicate points in Lambda");
    if (cert.witness && (int)cert.witness->size() != n)
        vio.record("witness length does not match group order");

    if (!vio.hit) switch (cert.kind) {
        case CertKind::klein:
        case CertKind::generic: {
            if (cert.window_bound()) {
                Window f(g, *cert.provenance.window);
                if (!cert.witness) {
                    vio.record("window-bound certificate lacks a witness");
                    break;
                }
                check_bound_relations(cert, f, *cert.witness, opt, rep, vio, "window");
                if (!vio.hit && opt.exact) {
                    if (!exact::is_gaussian_integer_window(f))
                        vio.record("exact verification requires Gaussian-integer windows");
                    else
                        check_exact_relations(cert, f, Window(g, *cert.witness), rep, vio,
                                              "window");
                }
            } else if (cert.kind == CertKind::klein) {
                for (size_t t = 0; t < test_windows.size() && !vio.hit; ++t) {
                    const Window& psi = test_windows[t];
                    check_bound_relations(cert, psi, conj_values(psi.values), opt, rep, vio,
                                          "test window " + std::to_string(t));
                    ++rep.windows_tested;
                    if (!vio.hit && opt.exact && exact::is_gaussian_integer_window(psi))
                        check_exact_relations(cert, psi, Window(g, conj_values(psi.values)), rep,
                                              vio, "test window " + std::to_string(t));
                }
            } else {
                vio.record("generic certificates must be window-bound");
            }
            break;
        }
        case CertKind::prime_square: {
            const int p = g.moduli().front();
            if (cert.window_bound()) {
                Window z(g, *cert.provenance.window);
                if (!cert.witness) {
                    vio.record("window-bound certificate lacks a witness");
                    break;
                }
                // The stored witness must be the adjugate witness of z.
                std::vector<cplx> expect = adjugate_witness(p, z);
                double dn = 0;
                for (size_t i = 0; i < expect.size(); ++i)
                    dn += std::norm(expect[i] - (*cert.witness)[i]);
                double xn = norm2(std::span<const cplx>(expect));
                if (xn == 0)
                    vio.record("degenerate adjugate witness");
                else if (std::sqrt(dn) > 1e-9 * xn)
                    vio.record("stored witness is not the adjugate of the stored window");
                if (!vio.hit) {
                    check_inner_identity(p, z, *cert.witness, opt, rep, vio);
                    if (!vio.hit)
                        check_bound_relations(cert, z, *cert.witness, opt, rep, vio, "window");
                    if (!vio.hit && opt.exact) {
                        if (!exact::is_gaussian_integer_window(z))
                            vio.record("exact verification requires Gaussian-integer windows");
                        else
                            check_exact_relations(cert, z, Window(g, *cert.witness), rep, vio,
                                                  "window");
                    }
                }
            } else {
                for (size_t t = 0; t < test_windows.size() && !vio.hit; ++t) {
                    const Window& psi = test_windows[t];
                    std::vector<cplx> x = adjugate_witness(p, psi);
                    if (norm2(std::span<const cplx>(x)) == 0) continue;  // measure-zero event
                    check_inner_identity(p, psi, x, opt, rep, vio);
                    if (!vio.hit)
                        check_bound_relations(cert, psi, x, opt, rep, vio,
                                              "test window " + std::to_string(t));
                    ++rep.windows_tested;
                    if (!vio.hit && opt.exact && exact::is_gaussian_integer_window(psi))
                        check_exact_relations(cert, psi, Window(g, x), rep, vio,
                                              "test window " + std::to_string(t));
                }
            }
            break;
        }
        case CertKind::hereditary: {
            if (!cert.provenance.subgroup) {
                vio.record("hereditary certificate lacks subgroup provenance");
                break;
            }
            const auto& info = *cert.provenance.subgroup;
            FiniteAbelianGroup sub(info.moduli);
            std::vector<GroupElement> gens;
            for (const auto& c : info.generator_images) gens.push_back(GroupElement{c});
            SubgroupEmbedding emb(g, sub, gens);
            // Recover the subgroup-level pairs: the lift maps each (h, xi_H) to
            // |G/H| consecutive points sharing the shift and restriction.
            const int ext = g.order() / sub.order();
            if ((int)cert.points.size() != g.order() || cert.points.size() % ext != 0) {
                vio.record("hereditary certificate has wrong point count");
                break;
            }
            for (size_t t = 0; t < test_windows.size() && !vio.hit; ++t) {
                const Window& psi = test_windows[t];
                // Restrict psi to the subgroup and derive a null vector of the
                // |H| restricted shifted windows.
                const int hn = sub.order();
                std::vector<cplx> psi_h(hn);
                for (int h = 0; h < hn; ++h) psi_h[h] = psi.values[emb.map_index(h)];
                Window psi_sub(sub, psi_h);
                // Rows: the subgroup-level system; one row per base pair.
                CMat rows(hn, hn);
                for (int i = 0; i < hn; ++i) {
                    const auto& pt = cert.points[(size_t)i * ext];
                    // Find the subgroup preimage of the stored shift.
                    int shift_host = g.index_of(pt.shift);
                    int found = -1;
                    for (int h = 0; h < hn; ++h)
                        if (emb.map_index(h) == shift_host) found = h;
                    if (found < 0) {
                        vio.record("hereditary shift not inside the subgroup image");
                        break;
                    }
                    for (int h = 0; h < hn; ++h) {
                        // value of M_xi T_shift psi_H at h, using the host
                        // character on the image point
                        int img = emb.map_index(h);
                        cplx phase = g.pairing(pt.freq, g.element_at(img));
                        rows(i, h) = phase * psi_sub.values[sub.sub_index(h, found)];
                    }
                }
                if (vio.hit) break;
                std::vector<cplx> fh = null_vector(rows);
                // Zero-extend through the embedding; witness is its conjugate.
                std::vector<cplx> big(g.order(), cplx{});
                for (int h = 0; h < hn; ++h) big[emb.map_index(h)] = fh[h];
                check_bound_relations(cert, psi, conj_values(big), opt, rep, vio,
                                      "test window " + std::to_string(t));
                ++rep.windows_tested;
            }
            break;
        }
    }

    rep.pass = !vio.hit;
    rep.first_violation = vio.what;
    return rep;
}

StftSupportProbe min_stft_support_probe(const FiniteAbelianGroup& g, int trials,
                                        std::uint64_t seed) {
    require_klein_subgroup(g);
    const long long n = g.order();
    StftSupportProbe probe;
    probe.bound = n * n - 3 * n / 2;
    probe.trials = trials;
    probe.min_observed = n * n + 1;
    probe.max_observed = -1;
    for (int t = 0; t < trials; ++t) {
        Window f = random_window(g, GaussianStream::derive(seed, t));
        // Table of <pi(lambda) f, conj(f)> over all of G x G^.
        long long supp = support_count(stft(f, f));
        probe.min_observed = std::min(probe.min_observed, supp);
        probe.max_observed = std::max(probe.max_observed, supp);
        if (supp > probe.bound) probe.all_within_bound = false;
    }
    return probe;
}

}  // namespace gaborlab

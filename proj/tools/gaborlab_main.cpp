// gaborlab: finite Gabor frame toolkit command line.
//
// Subcommands: group, spark, certify, verify, clifford (trace-scan, ffull,
// eigen-deficiency), uncertainty (identity, inclusion, enumerate-f), selftest.
// Exit codes: 0 verified, 1 failed verification, 2 usage error,
// 3 inconclusive.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaborlab/certificate.hpp"
#include "gaborlab/clifford.hpp"
#include "gaborlab/parallel.hpp"
#include "gaborlab/rng.hpp"
#include "gaborlab/selfcheck.hpp"
#include "gaborlab/spark.hpp"
#include "gaborlab/uncertainty.hpp"

using nlohmann::json;
using namespace gaborlab;

namespace {

constexpr int kExitOk = 0, kExitFailed = 1, kExitUsage = 2, kExitInconclusive = 3;

struct CommonOpts {
    std::string group_literal;
    std::uint64_t seed = 0;
    int workers = 0;
    std::uint64_t budget = 100'000'000;
    double det_tol = 1e-9;
    double rank_tol = 1e-8;
    double support_tol = 1e-9;
    bool exact = false;
    std::string out_path;
    std::string format = "json";
};

std::string timestamp_now() {
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json config_json(const CommonOpts& o) {
    json c;
    if (!o.group_literal.empty()) c["group"] = o.group_literal;
    c["seed"] = o.seed;
    c["workers"] = resolve_workers(o.workers);
    c["budget"] = o.budget;
    c["det_rel_tol"] = o.det_tol;
    c["rank_ratio_tol"] = o.rank_tol;
    c["support_rel_tol"] = o.support_tol;
    c["exact"] = o.exact;
    c["format"] = o.format;
    return c;
}

void emit(const CommonOpts& o, const std::string& command, const json& result,
          double elapsed, const std::string& csv_text = "") {
    std::string payload;
    if (o.format == "csv" && !csv_text.empty()) {
        payload = csv_text;
    } else {
        json report;
        report["schema_version"] = 1;
        report["command"] = command;
        report["config"] = config_json(o);
        report["result"] = result;
        report["timing"] = {{"generated_at", timestamp_now()}, {"elapsed_seconds", elapsed}};
        payload = report.dump(2) + "\n";
    }
    if (o.out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream os(o.out_path);
        if (!os) throw std::runtime_error("cannot open " + o.out_path + " for writing");
        os << payload;
    }
}

json complex_vec_json(const std::vector<cplx>& v) {
    json arr = json::array();
    for (const cplx& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

Window load_window_file(const FiniteAbelianGroup& g, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    json j = json::parse(is);
    const json& vals = j.is_array() ? j : j.at("values");
    std::vector<cplx> v;
    for (const auto& e : vals) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return Window(g, std::move(v));
}

json points_json(const FiniteAbelianGroup& g, const std::vector<int>& indices) {
    json arr = json::array();
    for (int idx : indices) {
        TimeFrequencyPoint pt = tf_point_at(g, idx);
        arr.push_back({pt.shift.coords, pt.freq.coords});
    }
    return arr;
}

SL2ModN parse_sl2(long long n, const std::string& text) {
    if (text == "zauner") return zauner_matrix(n);
    std::istringstream is(text);
    std::string tok;
    std::vector<long long> e;
    while (std::getline(is, tok, ',')) e.push_back(std::stoll(tok));
    if (e.size() != 4)
        throw CLI::ValidationError("--f expects 'zauner' or four comma-separated entries");
    return sl2_make(n, e[0], e[1], e[2], e[3]);
}

int run_group(const CommonOpts& o) {
    FiniteAbelianGroup g = parse_group(o.group_literal);
    json r;
    r["moduli"] = g.moduli();
    r["order"] = g.order();
    r["exponent"] = g.exponent();
    r["cyclic"] = g.is_cyclic();
    if (auto ps = find_p_square_subgroup(g)) {
        json sub;
        sub["p"] = ps->p;
        json gens = json::array();
        for (const auto& ge : ps->embedding.generator_images()) gens.push_back(ge.coords);
        sub["generators"] = gens;
        r["p_square_subgroup"] = sub;
    } else {
        r["p_square_subgroup"] = nullptr;
    }
    emit(o, "group", r, 0.0);
    return kExitOk;
}

int run_spark(const CommonOpts& o, const std::string& window_path, bool full_scan) {
    const auto t0 = std::chrono::steady_clock::now();
    FiniteAbelianGroup g = parse_group(o.group_literal);
    Window f = window_path.empty() ? random_window(g, o.seed) : load_window_file(g, window_path);
    SparkOptions opt;
    opt.budget = o.budget;
    opt.workers = o.workers;
    opt.exact = o.exact;
    opt.det_rel_tol = o.det_tol;
    opt.rank_ratio_tol = o.rank_tol;
    SparkReport rep = full_scan ? is_full_spark(f, opt) : spark(f, opt);
    json r;
    r["n"] = rep.n;
    r["num_points"] = rep.num_points;
    r["spark_lower"] = rep.spark_lower;
    if (rep.spark_upper > 0) r["spark_upper"] = rep.spark_upper;
    r["decided"] = rep.decided;
    if (rep.decided) r["spark"] = rep.spark();
    r["full_spark"] = rep.full_spark;
    r["subsets_checked"] = rep.subsets_checked;
    r["budget_exhausted"] = rep.budget_exhausted;
    r["exact"] = rep.exact;
    r["witness"] = rep.witness ? points_json(g, *rep.witness) : json(nullptr);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream csv;
    csv << "group,n,spark_lower,spark_upper,decided,full_spark,subsets_checked\n"
        << g.to_string() << ',' << rep.n << ',' << rep.spark_lower << ',' << rep.spark_upper
        << ',' << rep.decided << ',' << rep.full_spark << ',' << rep.subsets_checked << "\n";
    emit(o, "spark", r, elapsed, csv.str());
    return rep.decided || rep.witness ? kExitOk : kExitInconclusive;
}

int run_certify(const CommonOpts& o, int trials) {
    const auto t0 = std::chrono::steady_clock::now();
    FiniteAbelianGroup g = parse_group(o.group_literal);
    SparkCertificate cert = certify_noncyclic(g, trials, o.seed);
    if (o.exact &&
        (cert.kind == CertKind::klein || cert.kind == CertKind::prime_square)) {
        CertificateVerifyOptions vopt;
        vopt.exact = true;
        std::vector<Window> windows;
        for (int t = 0; t < trials; ++t)
            windows.push_back(
                random_gaussian_integer_window(g, GaussianStream::derive(o.seed, 7000 + t)));
        VerifyReport rep = verify_certificate(cert, windows, vopt);
        if (!rep.pass) {
            std::cerr << "exact verification failed: " << rep.first_violation << "\n";
            return kExitFailed;
        }
        cert.provenance.exact = true;
    }
    if (!o.out_path.empty()) {
        save_certificate(cert, o.out_path);
    } else {
        std::cout << certificate_to_json(cert);
    }
    std::cerr << "certified " << g.to_string() << " (" << cert_kind_name(cert.kind) << ", |Lambda|="
              << cert.points.size() << ", " << trials << " windows, "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
              << " s)\n";
    return kExitOk;
}

int run_verify(const CommonOpts& o, const std::string& cert_path, int trials) {
    const auto t0 = std::chrono::steady_clock::now();
    SparkCertificate cert = load_certificate(cert_path);
    CertificateVerifyOptions vopt;
    vopt.ortho_rel_tol = 1e-11;
    vopt.rank_ratio_tol = o.rank_tol;
    vopt.support_rel_tol = o.support_tol;
    vopt.exact = o.exact || cert.provenance.exact;
    std::vector<Window> windows;
    for (int t = 0; t < trials; ++t) {
        std::uint64_t seed = GaussianStream::derive(o.seed, t);
        windows.push_back(vopt.exact && !cert.window_bound()
                              ? random_gaussian_integer_window(cert.group, seed)
                              : random_window(cert.group, seed));
    }
    VerifyReport rep = verify_certificate(cert, windows, vopt);
    json r;
    r["pass"] = rep.pass;
    r["kind"] = cert_kind_name(cert.kind);
    r["group"] = cert.group.moduli();
    r["relations_checked"] = rep.relations_checked;
    r["max_ortho_residual"] = rep.max_ortho_residual;
    r["max_rank_ratio"] = rep.max_rank_ratio;
    r["windows_tested"] = rep.windows_tested;
    r["exact_used"] = rep.exact_used;
    r["first_violation"] = rep.first_violation;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(o, "verify", r, elapsed);
    return rep.pass ? kExitOk : kExitFailed;
}

int run_trace_scan(CommonOpts o, long long n) {
    o.group_literal.clear();
    TraceScanReport rep = trace_abs_scan(n, o.workers, (long long)o.budget);
    json r;
    r["n"] = rep.n;
    r["matrices"] = rep.matrices;
    r["matrices_scanned"] = rep.matrices_scanned;
    r["coverage"] = rep.coverage;
    r["min_abs_trace"] = rep.min_abs_trace;
    r["max_prediction_mismatch"] = rep.max_prediction_mismatch;
    bool pass = rep.min_abs_trace >= 1.0 - 1e-6 && rep.max_prediction_mismatch <= 1e-9;
    r["pass"] = pass;
    std::ostringstream csv;
    csv << "n,matrices,matrices_scanned,coverage,min_abs_trace,max_prediction_mismatch,pass\n"
        << rep.n << ',' << rep.matrices << ',' << rep.matrices_scanned << ',' << rep.coverage
        << ',' << rep.min_abs_trace << ',' << rep.max_prediction_mismatch << ',' << pass
        << "\n";
    emit(o, "clifford trace-scan", r, rep.elapsed_seconds, csv.str());
    if (!pass) return kExitFailed;
    return rep.coverage < 1.0 ? kExitInconclusive : kExitOk;
}

int run_ffull(CommonOpts o, long long n, const std::string& f_text) {
    SL2ModN f = parse_sl2(n, f_text);
    long long count = count_f_full(f);
    long long bound = n * euler_phi(n);
    json r;
    r["n"] = n;
    r["f"] = {f.a, f.b, f.c, f.d};
    r["ord_f"] = sl2_order(f);
    r["count"] = count;
    r["bound"] = bound;
    r["pass"] = count >= bound;
    std::ostringstream csv;
    csv << "n,a,b,c,d,ord,count,bound,pass\n"
        << n << ',' << f.a << ',' << f.b << ',' << f.c << ',' << f.d << ',' << sl2_order(f)
        << ',' << count << ',' << bound << ',' << (count >= bound) << "\n";
    emit(o, "clifford ffull", r, 0.0, csv.str());
    return count >= bound ? kExitOk : kExitFailed;
}

int run_eigen_deficiency(CommonOpts o, long long n, const std::string& f_text,
                         const std::string& strategy) {
    SL2ModN f = parse_sl2(n, f_text);
    EigenDeficiencyOptions opt;
    opt.workers = o.workers;
    opt.seed = o.seed;
    opt.budget = o.budget;
    if (strategy == "exhaustive") opt.strategy = SearchStrategy::exhaustive;
    else if (strategy == "orbit") opt.strategy = SearchStrategy::orbit_guided;
    else if (strategy == "random") opt.strategy = SearchStrategy::randomized;
    else throw CLI::ValidationError("--strategy must be exhaustive|orbit|random");
    EigenDeficiencyReport rep = eigen_deficiency_check(f, opt);
    FiniteAbelianGroup cyc({(int)n});
    json findings = json::array();
    for (const auto& fd : rep.findings) {
        json e;
        e["eigenspace"] = fd.space_index;
        e["vector"] = fd.vector_index;
        e["eigenvalue"] = {fd.eigenvalue.real(), fd.eigenvalue.imag()};
        e["subsets_checked"] = fd.subsets_checked;
        if (fd.dependent_subset) {
            json pts = json::array();
            for (int idx : *fd.dependent_subset) pts.push_back({idx / n, idx % n});
            e["dependent_subset"] = pts;
        } else {
            e["dependent_subset"] = nullptr;
        }
        findings.push_back(e);
    }
    json r;
    r["n"] = n;
    r["f"] = {f.a, f.b, f.c, f.d};
    r["f_reduced"] = {rep.f_reduced.a, rep.f_reduced.b, rep.f_reduced.c, rep.f_reduced.d};
    r["ord_f"] = rep.ord_f;
    r["gcd_with_n"] = rep.d;
    r["strategy"] = strategy;
    r["all_found"] = rep.all_found;
    r["findings"] = findings;
    emit(o, "clifford eigen-deficiency", r, rep.elapsed_seconds);
    return rep.all_found ? kExitOk : kExitInconclusive;
}

int run_identity(CommonOpts o, int n, int trials) {
    const auto t0 = std::chrono::steady_clock::now();
    FiniteAbelianGroup g({n});
    o.group_literal = g.to_string();
    int equal = 0, indeterminate = 0;
    for (int t = 0; t < trials; ++t) {
        Window phi = random_window(g, GaussianStream::derive(o.seed, 2 * t));
        Window f = random_window(g, GaussianStream::derive(o.seed, 2 * t + 1));
        SupportIdentityReport rep = verify_support_identity(phi, f, o.support_tol);
        if (rep.indeterminate) {
            ++indeterminate;
            continue;
        }
        if (rep.equal) ++equal;
    }
    json r;
    r["n"] = n;
    r["trials"] = trials;
    r["equal"] = equal;
    r["indeterminate"] = indeterminate;
    r["failed"] = trials - equal - indeterminate;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream csv;
    csv << "n,trials,equal,indeterminate,failed\n"
        << n << ',' << trials << ',' << equal << ',' << indeterminate << ','
        << (trials - equal - indeterminate) << "\n";
    emit(o, "uncertainty identity", r, elapsed, csv.str());
    if (trials - equal - indeterminate > 0) return kExitFailed;
    return indeterminate > 0 ? kExitInconclusive : kExitOk;
}

int run_inclusion(CommonOpts o, int n, int phis, int draws) {
    const auto t0 = std::chrono::steady_clock::now();
    FiniteAbelianGroup g({n});
    o.group_literal = g.to_string();
    FSet fset = enumerate_F(n, FStrategy::exhaustive_support_patterns, draws, o.seed);
    json per_phi = json::array();
    bool all_pass = true;
    std::ostringstream csv;
    csv << "phi,k,l,expected,observed,pass\n";
    for (int t = 0; t < phis; ++t) {
        Window phi = random_window(g, GaussianStream::derive(o.seed, 500 + t));
        InclusionReport rep = verify_inclusion_f_in_fphi(phi, fset, o.support_tol);
        all_pass = all_pass && rep.all_pass;
        json checks = json::array();
        for (const auto& c : rep.checks) {
            checks.push_back({{"k", c.pair.k},
                              {"l", c.pair.l},
                              {"expected", c.expected},
                              {"observed", c.observed},
                              {"pass", c.pass}});
            csv << t << ',' << c.pair.k << ',' << c.pair.l << ',' << c.expected << ','
                << c.observed << ',' << c.pass << "\n";
        }
        per_phi.push_back({{"phi_index", t}, {"all_pass", rep.all_pass}, {"checks", checks}});
    }
    json r;
    r["n"] = n;
    r["observed_pairs"] = (int)fset.entries.size();
    r["phis"] = phis;
    r["all_pass"] = all_pass;
    r["reports"] = per_phi;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(o, "uncertainty inclusion", r, elapsed, csv.str());
    return all_pass ? kExitOk : kExitFailed;
}

int run_enumerate_f(CommonOpts o, int n, int draws, bool sampled) {
    const auto t0 = std::chrono::steady_clock::now();
    o.group_literal = FiniteAbelianGroup({n}).to_string();
    FSet fset = enumerate_F(
        n, sampled ? FStrategy::sampled : FStrategy::exhaustive_support_patterns, draws, o.seed);
    json pairs = json::array();
    std::ostringstream csv;
    csv << "k,l\n";
    for (const auto& e : fset.entries) {
        pairs.push_back({{"k", e.pair.k}, {"l", e.pair.l}, {"witness", complex_vec_json(e.values)}});
        csv << e.pair.k << ',' << e.pair.l << "\n";
    }
    json r;
    r["n"] = n;
    r["strategy"] = sampled ? "sampled" : "exhaustive-support-patterns";
    r["pairs"] = pairs;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(o, "uncertainty enumerate-f", r, elapsed, csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gaborlab: finite Gabor frames, spark certificates, Clifford scans"};
    app.require_subcommand(1);
    CommonOpts o;
    if (const char* env = std::getenv("GABORLAB_WORKERS")) {
        try {
            o.workers = std::stoi(env);
        } catch (...) {
        }
    }

    auto add_common = [&](CLI::App* cmd, bool with_group) {
        if (with_group)
            cmd->add_option("--group", o.group_literal, "group literal, e.g. 3x3")->required();
        cmd->add_option("--seed", o.seed, "random seed");
        cmd->add_option("--workers", o.workers, "worker threads (0 = auto)");
        cmd->add_option("--budget", o.budget, "subset budget");
        cmd->add_option("--det-tol", o.det_tol, "determinant threshold (relative)");
        cmd->add_option("--rank-tol", o.rank_tol, "singular value ratio threshold");
        cmd->add_option("--support-tol", o.support_tol, "support threshold (relative)");
        cmd->add_option("--out", o.out_path, "output file (default stdout)");
        cmd->add_option("--format", o.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* cmd_group = app.add_subcommand("group", "group structure report");
    add_common(cmd_group, true);

    auto* cmd_spark = app.add_subcommand("spark", "spark of a seeded or given window");
    add_common(cmd_spark, true);
    std::string window_path;
    bool full_scan = false;
    cmd_spark->add_option("--window", window_path, "window JSON ([[re,im],...])");
    cmd_spark->add_flag("--full-scan", full_scan, "only scan N-subsets for a dependency");
    cmd_spark->add_flag("--exact", o.exact, "exact cyclotomic determinants");

    auto* cmd_certify = app.add_subcommand("certify", "spark-deficiency certificate for a group");
    add_common(cmd_certify, true);
    int trials = 20;
    cmd_certify->add_option("--trials", trials, "verification windows");
    cmd_certify->add_flag("--exact", o.exact, "add exact verification (integer windows)");

    auto* cmd_verify = app.add_subcommand("verify", "re-verify a certificate file");
    std::string cert_path;
    cmd_verify->add_option("certificate", cert_path, "certificate JSON path")->required();
    add_common(cmd_verify, false);
    int verify_trials = 20;
    cmd_verify->add_option("--trials", verify_trials, "test windows for universal certificates");
    cmd_verify->add_flag("--exact", o.exact, "exact verification");

    auto* cmd_clifford = app.add_subcommand("clifford", "Clifford group scans");
    cmd_clifford->require_subcommand(1);
    long long cn = 3;
    std::string f_text = "zauner", strategy = "exhaustive";
    auto* cmd_scan = cmd_clifford->add_subcommand("trace-scan", "min |Tr U_F| over SL(2,Z/NZ)");
    cmd_scan->add_option("--n", cn, "odd modulus")->required();
    add_common(cmd_scan, false);
    auto* cmd_ffull = cmd_clifford->add_subcommand("ffull", "F-full point count");
    cmd_ffull->add_option("--n", cn, "odd modulus")->required();
    cmd_ffull->add_option("--f", f_text, "'zauner' or a,b,c,d");
    add_common(cmd_ffull, false);
    auto* cmd_eigen =
        cmd_clifford->add_subcommand("eigen-deficiency", "dependent subsets for eigenvectors");
    cmd_eigen->add_option("--n", cn, "odd modulus")->required();
    cmd_eigen->add_option("--f", f_text, "'zauner' or a,b,c,d");
    cmd_eigen->add_option("--strategy", strategy, "exhaustive|orbit|random");
    add_common(cmd_eigen, false);

    auto* cmd_unc = app.add_subcommand("uncertainty", "support-size experiments");
    cmd_unc->require_subcommand(1);
    int un = 5, utrials = 100, uphis = 5, udraws = 50;
    bool usampled = false;
    auto* cmd_identity = cmd_unc->add_subcommand("identity", "STFT support identity");
    cmd_identity->add_option("--n", un, "cyclic order")->required();
    cmd_identity->add_option("--trials", utrials, "seeded pairs");
    add_common(cmd_identity, false);
    auto* cmd_inclusion = cmd_unc->add_subcommand("inclusion", "pair-set inclusion experiment");
    cmd_inclusion->add_option("--n", un, "cyclic order")->required();
    cmd_inclusion->add_option("--phis", uphis, "number of seeded windows");
    cmd_inclusion->add_option("--draws", udraws, "draws per support pattern");
    add_common(cmd_inclusion, false);
    auto* cmd_enum = cmd_unc->add_subcommand("enumerate-f", "observed transform pair set");
    cmd_enum->add_option("--n", un, "cyclic order")->required();
    cmd_enum->add_option("--draws", udraws, "draws per support pattern");
    cmd_enum->add_flag("--sampled", usampled, "sampled patterns instead of exhaustive");
    add_common(cmd_enum, false);

    auto* cmd_selftest = app.add_subcommand("selftest", "fast verification sweep");
    bool full = false;
    cmd_selftest->add_flag("--full", full, "run the complete acceptance parameters");
    cmd_selftest->add_option("--workers", o.workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*cmd_group) return run_group(o);
        if (*cmd_spark) return run_spark(o, window_path, full_scan);
        if (*cmd_certify) return run_certify(o, trials);
        if (*cmd_verify) return run_verify(o, cert_path, verify_trials);
        if (*cmd_scan) return run_trace_scan(o, cn);
        if (*cmd_ffull) return run_ffull(o, cn, f_text);
        if (*cmd_eigen) return run_eigen_deficiency(o, cn, f_text, strategy);
        if (*cmd_identity) return run_identity(o, un, utrials);
        if (*cmd_inclusion) return run_inclusion(o, un, uphis, udraws);
        if (*cmd_enum) return run_enumerate_f(o, un, udraws, usampled);
        if (*cmd_selftest) {
            auto results = checks::run_all(full ? checks::Level::full : checks::Level::fast,
                                           std::cout, o.workers);
            return checks::all_passed(results) ? kExitOk : kExitFailed;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        std::cerr << "size limit: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitUsage;
}

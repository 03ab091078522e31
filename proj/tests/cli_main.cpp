// Integration tests for the gaborlab binary: exit-code contract, artifact
// round trips, and report determinism. The binary path arrives as argv[1].

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string g_binary;
int g_failures = 0;

void expect(bool cond, const std::string& what) {
    if (!cond) {
        ++g_failures;
        std::cerr << "FAIL: " << what << "\n";
    } else {
        std::cout << "ok: " << what << "\n";
    }
}

int run(const std::string& args, const std::string& log = "/tmp/gaborlab_cli_out.txt") {
    std::string cmd = g_binary + " " + args + " >" + log + " 2>/tmp/gaborlab_cli_err.txt";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

json report_without_timing(const std::string& path) {
    json j = json::parse(slurp(path));
    j.erase("timing");
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: gaborlab_cli_tests <path-to-gaborlab>\n";
        return 2;
    }
    g_binary = argv[1];

    // exit-code contract
    expect(run("bogus-subcommand") == 2, "unknown subcommand exits 2");
    expect(run("spark") == 2, "missing required --group exits 2");
    expect(run("group --group 4x2") == 0, "group report exits 0");
    expect(run("certify --group 15 --seed 1") == 2, "cyclic group certification exits 2");

    // spark: decided run exits 0 and reports full spark at N=3
    expect(run("spark --group 3 --seed 42 --out /tmp/spark3.json") == 0, "spark N=3 exits 0");
    {
        json r = json::parse(slurp("/tmp/spark3.json"));
        expect(r["result"]["decided"].get<bool>(), "spark N=3 decided");
        expect(r["result"]["spark"].get<int>() == 4, "spark N=3 value is N+1");
        expect(r["result"]["full_spark"].get<bool>(), "spark N=3 full spark");
    }

    // certificate round trip: certify then verify
    expect(run("certify --group 3x3 --seed 1 --out /tmp/cert33.json") == 0,
           "certify 3x3 exits 0");
    expect(run("verify /tmp/cert33.json --trials 5 --seed 9") == 0, "verify passes");

    // tampered certificate must fail verification with exit 1
    {
        json cert = json::parse(slurp("/tmp/cert33.json"));
        cert["points"][0] = json::array({json::array({1, 1}), json::array({1, 2})});
        std::ofstream os("/tmp/cert33_bad.json");
        os << cert.dump(2);
    }
    expect(run("verify /tmp/cert33_bad.json --trials 5 --seed 9") == 1,
           "tampered certificate exits 1");

    // clifford subcommands
    expect(run("clifford trace-scan --n 9") == 0, "trace scan n=9 exits 0");
    expect(run("clifford ffull --n 9 --f zauner") == 0, "ffull zauner n=9 exits 0");
    expect(run("clifford eigen-deficiency --n 3 --f zauner --strategy exhaustive") == 0,
           "eigen deficiency n=3 exits 0");

    // uncertainty subcommands
    expect(run("uncertainty identity --n 5 --trials 50 --seed 1") == 0, "identity exits 0");
    expect(run("uncertainty inclusion --n 4 --seed 7 --phis 2 --draws 20") == 0,
           "inclusion exits 0");
    expect(run("uncertainty enumerate-f --n 5 --draws 30 --out /tmp/fset.json") == 0,
           "enumerate-f exits 0");
    {
        json r = json::parse(slurp("/tmp/fset.json"));
        expect(r["result"]["pairs"].size() == 15, "enumerate-f n=5 observes 15 pairs");
    }

    // csv output
    expect(run("uncertainty enumerate-f --n 4 --draws 20 --format csv --out /tmp/fset.csv") == 0,
           "enumerate-f csv exits 0");
    {
        std::string csv = slurp("/tmp/fset.csv");
        expect(csv.rfind("k,l\n", 0) == 0, "csv header present");
    }

    // determinism: identical config, identical report modulo timing
    expect(run("spark --group 2x2 --seed 5 --budget 200000000 --out /tmp/sp_a.json") == 0,
           "spark 2x2 run A");
    expect(run("spark --group 2x2 --seed 5 --budget 200000000 --out /tmp/sp_b.json") == 0,
           "spark 2x2 run B");
    expect(report_without_timing("/tmp/sp_a.json") == report_without_timing("/tmp/sp_b.json"),
           "reports identical modulo timing");

    // window file input
    {
        std::ofstream os("/tmp/win2.json");
        os << "[[1,0],[2,0]]";
    }
    expect(run("spark --group 2 --window /tmp/win2.json") == 0, "window file input works");

    // certificate determinism: same config twice, identical bytes
    expect(run("certify --group 6x3 --seed 11 --trials 5 --out /tmp/c63a.json") == 0,
           "certify 6x3 run A");
    expect(run("certify --group 6x3 --seed 11 --trials 5 --out /tmp/c63b.json") == 0,
           "certify 6x3 run B");
    expect(slurp("/tmp/c63a.json") == slurp("/tmp/c63b.json"),
           "certificates byte-identical for equal configs");

    // exact certificate flow
    expect(run("certify --group 3x3 --seed 4 --trials 5 --exact --out /tmp/cert_exact.json") == 0,
           "exact certify exits 0");
    expect(run("verify /tmp/cert_exact.json --trials 3 --seed 2") == 0, "exact verify exits 0");

    if (g_failures) {
        std::cerr << g_failures << " CLI check(s) failed\n";
        return 1;
    }
    std::cout << "all CLI checks passed\n";
    return 0;
}

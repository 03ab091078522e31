// Acceptance suite: runs every verification family at full parameters and
// prints one pass/fail line per check. Exit code 0 iff everything passed.

#include <cstring>
#include <iostream>

#include "gaborlab/selfcheck.hpp"

int main(int argc, char** argv) {
    using namespace gaborlab::checks;
    Level level = Level::full;
    int workers = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--fast") == 0) level = Level::fast;
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) workers = std::atoi(argv[++i]);
    }
    std::cout << "gaborlab acceptance suite ("
              << (level == Level::full ? "full" : "fast") << ")\n";
    auto results = run_all(level, std::cout, workers);
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    if (failed) {
        std::cout << failed << " check(s) FAILED\n";
        return 1;
    }
    std::cout << "all " << results.size() << " checks passed\n";
    return 0;
}

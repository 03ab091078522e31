#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaborlab::checks {

enum class Level {
    fast,  // reduced trial counts, skips the long N=7 enumeration (< 60 s)
    full   // the complete acceptance parameter set
};

struct CheckResult {
    std::string id;
    std::string name;
    bool pass = false;
    double elapsed_seconds = 0;
    double limit_seconds = 0;  // 0 = no runtime requirement
    std::string detail;
};

/// Runs the verification suite, one check per claim family, printing one
/// pass/fail line per check to `progress`.
std::vector<CheckResult> run_all(Level level, std::ostream& progress, int workers = 0);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace gaborlab::checks

#pragma once

#include <string>
#include <vector>

namespace tempus::suite {

enum class Scale { Quick, Full };

inline constexpr int kNumChecks = 10;

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    double time_limit = 0.0;  // enforced at Full scale
    std::string detail;
};

// Runs one numbered check (1..10) of the verification suite at the given
// scale. Full scale uses the published sample counts and enforces the wall
// clock budget; Quick trims the Monte Carlo sizes for a fast smoke pass.
CheckResult run_check(int id, Scale scale);

std::vector<CheckResult> run_all(Scale scale);

}  // namespace tempus::suite

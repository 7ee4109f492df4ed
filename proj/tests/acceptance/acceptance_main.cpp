// Acceptance runner: one pass/fail line per criterion at full scale.
//   acceptance                 runs every criterion
//   acceptance --criterion N   runs one
//   acceptance --quick         reduced Monte Carlo sizes (smoke mode)

#include <cstdio>
#include <cstring>
#include <string>

#include "tempus/suite.hpp"

int main(int argc, char** argv) {
    int only = 0;
    auto scale = tempus::suite::Scale::Full;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--quick") == 0) {
            scale = tempus::suite::Scale::Quick;
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N] [--quick]\n");
            return 2;
        }
    }

    bool all_passed = true;
    auto run_one = [&](int id) {
        auto res = tempus::suite::run_check(id, scale);
        all_passed &= res.passed;
        std::printf("%s  criterion %2d: %s (%.2f s, budget %.0f s)\n",
                    res.passed ? "PASS" : "FAIL", res.id, res.name.c_str(), res.seconds,
                    res.time_limit);
        if (!res.passed) std::printf("      %s\n", res.detail.c_str());
        std::fflush(stdout);
    };

    if (only > 0) {
        run_one(only);
    } else {
        for (int id = 1; id <= tempus::suite::kNumChecks; ++id) run_one(id);
    }
    return all_passed ? 0 : 1;
}

// Acceptance gate: runs every criterion and prints one PASS/FAIL line each.

#include <cstdio>

#include "ltedci/selftest.hpp"

int main() {
    const ltedci::SelftestOutput out = ltedci::runAcceptance();
    for (const ltedci::CriterionResult& c : out.criteria)
        std::printf("[%s] criterion %2d: %-32s (%6.2f s)  %s\n", c.pass ? "PASS" : "FAIL",
                    c.id, c.name.c_str(), c.seconds, c.detail.c_str());
    std::printf("total: %.2f s\n", out.totalSeconds);
    return ltedci::allPassed(out) ? 0 : 1;
}

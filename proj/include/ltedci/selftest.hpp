#pragma once

#include <string>
#include <vector>

namespace ltedci {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // failure explanation or short success note
    double seconds = 0.0;
};

struct SelftestOutput {
    std::vector<CriterionResult> criteria;
    std::string reportCsv;     // decoded report of the reference scenario
    std::string summaryJson;   // matching load summary
    double totalSeconds = 0.0;
};

// Runs the loopback acceptance suite: fixed regression values, generator and
// decoder round trips, coding oracles, synchronization robustness, the
// blind-recovery property suite and an end-to-end determinism check.
// threads <= 0 picks a hardware-based default.
SelftestOutput runAcceptance(int threads = 0);

bool allPassed(const SelftestOutput& out);

}  // namespace ltedci

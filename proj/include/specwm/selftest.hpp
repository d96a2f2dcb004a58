#pragma once

#include <string>
#include <vector>

namespace specwm {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct SelftestOptions {
    // Reduced sample counts for a fast smoke run. The full battery is the
    // release gate; quick mode only shakes out wiring problems.
    bool quick = false;
    int threads = 1;
};

// The release battery: exact identities, statistical calibration, the
// end-to-end benchmark ties, and determinism. Each check carries its own
// runtime budget; going over budget fails the check.
std::vector<CheckResult> run_acceptance(const SelftestOptions& opt);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace specwm

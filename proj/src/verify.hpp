#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stickperc::verify {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Suite names accepted by run_suite, excluding "all".
const std::vector<std::string>& suite_names();

/// Runs one property suite (or "all"). InvalidArgument on an unknown name.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed, unsigned workers = 1);

std::string results_json(const std::vector<CheckResult>& results, std::uint64_t seed);

}  // namespace stickperc::verify

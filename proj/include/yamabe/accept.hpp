// The acceptance suite: one entry per numbered criterion, each returning the
// measured values alongside its pass/fail verdict.  Shared by the acceptance
// test binary and the CLI report command.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace yamabe::accept {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    double runtime_limit = 0.0;
    std::vector<std::string> details;
};

int criterion_count();
CriterionResult run_criterion(int id, std::uint64_t seed = 20240801ull);
std::vector<CriterionResult> run_all(std::uint64_t seed = 20240801ull);

// Human-readable one-liner: "[PASS] 03 period-limits (1.2s)".
std::string format_line(const CriterionResult& r);

}  // namespace yamabe::accept

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace kelvsim::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;   // the quantity the threshold applies to
    double threshold = 0.0;
    std::string note;
};

// Suites: "invariants" (seeded property checks), "analytic" (closed-form
// oracles), "convergence" (order/trend checks), "inconsistency" (cross-scale
// closure audit), "all".
std::vector<CheckResult> run_suite(const std::string& suite, uint64_t seed);

bool all_passed(const std::vector<CheckResult>& checks);
nlohmann::json checks_to_json(const std::string& suite, uint64_t seed,
                              const std::vector<CheckResult>& checks, double wall_time_s);

// One "[PASS]/[FAIL] name measured<=threshold note" line per check.
void print_checks(const std::vector<CheckResult>& checks);

}  // namespace kelvsim::verify

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace fuelstop {

struct CheckReport {
    std::string name;
    bool passed = false;
    double worst_violation = 0.0;  // passed iff worst_violation <= tolerance
    double location = 0.0;         // x, y or c of the worst case
    double tolerance = 0.0;
    std::string detail;  // which property was measured / why a check failed
};

struct VerifyConfig {
    double tol_scale = 1.0;           // multiplies every tolerance
    std::size_t x_audit = 4096;       // per-c audit grid size
    std::size_t minorant_points = 200000;
    std::size_t psor_nodes = 8001;
    bool with_oracles = true;         // include the brute-force cross-checks
    std::uint64_t seed = 20260810;    // drives the random spot checks
};

// Run every check against the solved construction at the given fuel levels.
// Requires the New regime; an empty c list runs only the level-independent
// checks. Deterministic for a fixed config; reports are sorted by name.
std::vector<CheckReport> run_suite(const Model& m, std::span<const double> c_list,
                                   const VerifyConfig& cfg = {});

bool all_passed(const std::vector<CheckReport>& reports);
std::string to_json(const std::vector<CheckReport>& reports);
std::string to_table(const std::vector<CheckReport>& reports);

}  // namespace fuelstop

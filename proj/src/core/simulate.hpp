#pragma once

#include <cstdint>
#include <string>

#include "core/boundary.hpp"
#include "core/model.hpp"

namespace fuelstop {

struct SimConfig {
    double x0 = 0.0;
    double fuel = 0.0;  // must equal the boundary point's c
    std::uint64_t n_paths = 0;
    double dt = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    bool antithetic = false;
    int threads = 0;  // 0 = hardware default

    void validate(double alpha) const;
};

struct SimResult {
    double mean_cost = 0.0;
    double std_error = 0.0;
    double tail_bound = 0.0;  // bound on the bias from horizon truncation
    std::uint64_t n_paths = 0;
    std::uint64_t n_jumped = 0;
    std::uint64_t n_stopped_left = 0;
    std::uint64_t truncated = 0;
    bool coarse_dt = false;  // dt too coarse to resolve the continuation gap
};

// Discounted cost of the candidate policy: stop at the left boundary, spend
// all fuel at the right one, then stop at the no-fuel boundary. Euler steps,
// even-symmetry folding, per-path counter-based random streams; results are
// bitwise independent of the thread count.
SimResult simulate_policy(const Model& m, const BoundaryPoint& bp, const SimConfig& cfg);

std::string to_json(const SimConfig& cfg, const SimResult& r);

}  // namespace fuelstop

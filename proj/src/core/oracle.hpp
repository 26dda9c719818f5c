#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace fuelstop {

// Grid convex minorant of the transformed obstacle, built from scratch by a
// monotone-chain lower hull. Independent of the closed-form construction.
struct MinorantResult {
    std::vector<double> y;  // ascending, image of a uniform natural-scale grid
    std::vector<double> w;  // hull values on the grid
    std::vector<std::size_t> contacts;  // grid indices where the hull touches the obstacle
    double contact_left_y = 0.0;   // last contact before the widest gap
    double contact_right_y = 0.0;  // first contact after it
    std::size_t contact_left_idx = 0;
    std::size_t contact_right_idx = 0;
    double dx = 0.0;  // natural-scale grid step
};

// x_max <= 0 selects the default window f0 + c + 1.
MinorantResult minorant_oracle(const Model& m, double c, std::size_t n_points,
                               double x_max = 0.0);

// Discrete complementarity solve of the reduced stopping problem on a
// uniform natural-scale grid by projected SOR. Both ends are pinned to the
// obstacle (they lie in the stopping set throughout the audited regime).
struct LcpResult {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<unsigned char> stop;  // active set: v equals the obstacle
    std::size_t iterations = 0;
    double last_update = 0.0;
    double free_first_x = 0.0;  // first and last nodes off the obstacle
    double free_last_x = 0.0;
    std::size_t free_blocks = 0;
};

// omega <= 0 selects per-sweep over-relaxation tuned to the current free-set
// size; x_max <= 0 selects f0 + c + 2/sqrt(2 alpha) + 2.
LcpResult psor_oracle(const Model& m, double c, std::size_t n_nodes, double x_max = 0.0,
                      double omega = 0.0, double tol = 1e-10, std::size_t max_iter = 0);

// Raw kernel: projected SOR for min(obstacle - v, v'' / 2 - alpha v) = 0 on a
// uniform grid with spacing h, both ends pinned at the obstacle. Returns the
// iteration count; v starts from and never exceeds the obstacle.
std::size_t psor_solve(std::span<const double> obstacle, double h, double alpha,
                       double omega, double tol, std::size_t max_iter,
                       std::vector<double>& v, double& last_update);

std::string to_csv(const MinorantResult& r);
std::string to_csv(const LcpResult& r);

}  // namespace fuelstop
